//! Random sequences, cubes and sequences of prescribed complexity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::Cube;
use crate::error::{Error, Result};
use crate::seq::{Seq, MAX_N, WORD_N};

/// Generator for work unit `chunk` of a run seeded with `seed`.
pub(super) fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

pub(super) fn uniform(n: u32, rng: &mut impl Rng) -> Seq {
    if n <= WORD_N {
        let bits: u64 = rng.random();
        let len = 1u32 << n;
        let bits = if len == 64 { bits } else { bits & ((1u64 << len) - 1) };
        Seq::from_word(n, bits).expect("masked to the period")
    } else {
        let bits: Vec<bool> = (0..1usize << n).map(|_| rng.random()).collect();
        Seq::from_bits(&bits).expect("power-of-two length")
    }
}

/// A cube with the given edge exponents (bit `i` of `exps`), random base and
/// random odd multipliers.
fn cube_with_exponents(n: u32, exps: u64, rng: &mut impl Rng) -> Result<Cube> {
    let period = 1u64 << n;
    let base = rng.random_range(0..period);
    let offsets: Vec<u64> = (0..n)
        .filter(|i| exps >> i & 1 == 1)
        .map(|i| {
            let odd = 2 * rng.random_range(0..(period >> (i + 1)).max(1)) + 1;
            odd << i
        })
        .collect();
    Cube::from_offsets(n, base, &offsets)
}

/// A cube with uniformly random edge exponents, base and multipliers.
pub fn random_cube(n: u32, rng: &mut impl Rng) -> Result<Cube> {
    if n > MAX_N {
        return Err(Error::out_of_range("n", n, format!("[0, {MAX_N}]")));
    }
    let exps = if n == 0 { 0 } else { rng.random_range(0..1u64 << n) };
    cube_with_exponents(n, exps, rng)
}

/// `c0 + c1 + c2` for random cubes of strictly decreasing complexity, which
/// tends to produce spectra with three or more descents.
pub(super) fn three_cube_sum(n: u32, rng: &mut impl Rng) -> Result<Seq> {
    let period = 1u64 << n;
    if period < 3 {
        return Ok(uniform(n, rng));
    }
    let mut exps = [0u64; 3];
    loop {
        for e in exps.iter_mut() {
            *e = rng.random_range(0..period);
        }
        exps.sort_unstable();
        if exps[0] < exps[1] && exps[1] < exps[2] {
            break;
        }
    }
    let mut s = Seq::zero(n);
    for e in exps {
        s = s.add(&cube_with_exponents(n, e, rng)?.to_seq())?;
    }
    Ok(s)
}

/// Carry-less product of two polynomials whose product has degree below 64.
pub(super) fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    while b != 0 {
        acc ^= a << b.trailing_zeros();
        b &= b - 1;
    }
    acc
}

/// `(x + 1)^r`.
pub(super) fn binomial_poly(r: u32) -> u64 {
    (0..r).fold(1u64, |g, _| g ^ (g << 1))
}

/// A uniformly random sequence of period `2^n <= 64` with complexity exactly
/// `lc`: `(x + 1)^(2^n - lc) * q` with `deg q < lc` and `q(1) = 1`.
pub fn random_with_lc(n: u32, lc: u64, rng: &mut impl Rng) -> Result<Seq> {
    if n > WORD_N {
        return Err(Error::out_of_range("n", n, format!("[0, {WORD_N}]")));
    }
    let period = 1u64 << n;
    if lc > period {
        return Err(Error::out_of_range("L", lc as i64, format!("[0, {period}]")));
    }
    if lc == 0 {
        return Ok(Seq::zero(n));
    }
    let mut q: u64 = rng.random();
    if lc < 64 {
        q &= (1u64 << lc) - 1;
    }
    if q.count_ones().is_multiple_of(2) {
        q ^= 1;
    }
    let g = binomial_poly((period - lc) as u32);
    Seq::from_word(n, clmul(g, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prescribed_complexity() {
        let mut rng = chunk_rng(1, 0);
        for n in 0..=6 {
            for lc in 0..=(1u64 << n) {
                let s = random_with_lc(n, lc, &mut rng).unwrap();
                assert_eq!(s.linear_complexity(), lc);
            }
        }
    }

    #[test]
    fn cubes_and_sums() {
        let mut rng = chunk_rng(2, 5);
        for n in 0..=8 {
            let c = random_cube(n, &mut rng).unwrap();
            assert_eq!(c.to_seq().linear_complexity(), c.lc());
            let s = three_cube_sum(n, &mut rng).unwrap();
            assert_eq!(s.n(), n);
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<u64> = (0..4).map(|_| chunk_rng(9, 3).random()).collect();
        let b: Vec<u64> = (0..4).map(|_| chunk_rng(9, 3).random()).collect();
        assert_eq!(a, b);
        let other: u64 = chunk_rng(9, 4).random();
        assert_ne!(a[0], other);
    }
}
