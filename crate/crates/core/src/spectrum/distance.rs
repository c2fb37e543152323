//! Spectra from coset-leader weights.
//!
//! For a period `N = 2^n`, `x^N - 1 = (x + 1)^N` over GF(2), so the sequences
//! of complexity at most `L` are exactly the multiples of `g = (x + 1)^(N - L)`
//! of degree below `N`: a cyclic code. The fewest errors that push `s` into it
//! is the weight of the lightest word in the coset `s + <g>`, which depends
//! only on the syndrome `s mod g`. Syndrome tables (breadth-first search over
//! syndromes) cover small redundancies; small codes are enumerated instead.
//! `L_k(s)` is then the least `L` whose coset weight is at most `k`.

use crate::error::{Error, Result};
use crate::seq::Seq;

use super::Celcs;

/// Largest period exponent the engine supports.
pub const MAX_N: u32 = 5;

/// Largest redundancy served from a precomputed syndrome table.
const TABLE_REDUNDANCY: u32 = 20;

/// Coset-weight engine for one period exponent.
#[derive(Debug, Clone)]
pub struct CosetEngine {
    n: u32,
    /// `(x + 1)^r` for `r = 0..=N`.
    generators: Vec<u64>,
    /// Coset leader weights indexed by syndrome, for `r <= TABLE_REDUNDANCY`.
    tables: Vec<Vec<u8>>,
}

fn reduce(mut p: u64, g: u64, r: u32) -> u64 {
    if r == 0 {
        return 0;
    }
    while p >> r != 0 {
        let deg = 63 - p.leading_zeros();
        p ^= g << (deg - r);
    }
    p
}

fn syndrome_table(len: u32, g: u64, r: u32) -> Vec<u8> {
    let size = 1usize << r;
    let units: Vec<u64> = (0..len).map(|i| reduce(1u64 << i, g, r)).collect();
    let mut dist = vec![u8::MAX; size];
    dist[0] = 0;
    let mut frontier = vec![0u64];
    let mut level = 0u8;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for &syn in &frontier {
            for &u in &units {
                let t = (syn ^ u) as usize;
                if dist[t] == u8::MAX {
                    dist[t] = level;
                    next.push(t as u64);
                }
            }
        }
        frontier = next;
    }
    dist
}

impl CosetEngine {
    pub fn new(n: u32) -> Result<CosetEngine> {
        if n > MAX_N {
            return Err(Error::out_of_range(
                "n",
                n,
                format!("[0, {MAX_N}] for the coset engine"),
            ));
        }
        let len = 1u32 << n;
        let mut generators = vec![1u64];
        for _ in 0..len {
            let g = *generators.last().unwrap();
            generators.push(g ^ (g << 1));
        }
        let tables = (0..=len.min(TABLE_REDUNDANCY))
            .map(|r| syndrome_table(len, generators[r as usize], r))
            .collect();
        Ok(CosetEngine { n, generators, tables })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn word(&self, s: &Seq) -> Result<u64> {
        if s.n() != self.n {
            return Err(Error::PeriodMismatch {
                left: s.n(),
                right: self.n,
            });
        }
        Ok(s.word().expect("n <= 5 fits a word"))
    }

    /// Fewest errors bringing `s` to complexity at most `lc`.
    pub(crate) fn distance_word(&self, bits: u64, lc: u32) -> u64 {
        let len = 1u32 << self.n;
        let r = len - lc;
        let g = self.generators[r as usize];
        if let Some(table) = self.tables.get(r as usize) {
            return table[reduce(bits, g, r) as usize] as u64;
        }
        // few codewords: walk all multiples q * g with deg q < lc in Gray order
        let mut best = bits.count_ones();
        let mut c = 0u64;
        for t in 1u64..(1 << lc) {
            c ^= g << t.trailing_zeros();
            best = best.min((bits ^ c).count_ones());
        }
        best as u64
    }

    /// `dist[L]` for `L = 0..=2^n`: the fewest errors giving complexity `<= L`.
    pub fn distances(&self, s: &Seq) -> Result<Vec<u64>> {
        let bits = self.word(s)?;
        let len = 1u32 << self.n;
        Ok((0..=len).map(|lc| self.distance_word(bits, lc)).collect())
    }

    pub fn celcs(&self, s: &Seq) -> Result<Celcs> {
        Ok(Celcs::from_distances(&self.distances(s)?))
    }

    pub fn kerror_lc(&self, s: &Seq, k: u64) -> Result<u64> {
        let len = s.len() as u64;
        if k > len {
            return Err(Error::out_of_range("k", k as i64, format!("[0, {len}]")));
        }
        let bits = self.word(s)?;
        let lc = (0..=len as u32)
            .find(|&lc| self.distance_word(bits, lc) <= k)
            .expect("complexity 2^n needs no errors");
        Ok(lc as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::parse_sequence;

    #[test]
    fn reduction_matches_divisibility() {
        let e = CosetEngine::new(3).unwrap();
        // (x + 1)^2 = x^2 + 1
        assert_eq!(e.generators[2], 0b101);
        assert_eq!(reduce(0b101, 0b101, 2), 0);
        assert_eq!(reduce(0b100, 0b101, 2), 1);
        assert_eq!(reduce(0b1111, 0b101, 0), 0);
    }

    #[test]
    fn distances_of_example() {
        let e = CosetEngine::new(4).unwrap();
        let s = parse_sequence("1101 1001 1000 0000", None).unwrap();
        let d = e.distances(&s).unwrap();
        assert_eq!(d[15], 0);
        assert_eq!(d[14], 2);
        assert_eq!(d[0], 6);
        assert_eq!(e.celcs(&s).unwrap().points(), &[(0, 15), (2, 10), (4, 3), (6, 0)]);
        assert_eq!(e.kerror_lc(&s, 2).unwrap(), 10);
    }

    #[test]
    fn zero_and_mismatch() {
        let e = CosetEngine::new(2).unwrap();
        assert_eq!(e.celcs(&Seq::zero(2)).unwrap().points(), &[(0, 0)]);
        assert!(e.celcs(&Seq::zero(3)).is_err());
        assert!(CosetEngine::new(6).is_err());
    }
}
