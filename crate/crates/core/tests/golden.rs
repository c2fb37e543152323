//! Worked examples, with derived values recomputed by small independent
//! oracles before being compared to their frozen constants.

use celcs::cube::{kerror_decomposition, kerror_decomposition_partial, lc_mask, standard_decomposition};
use celcs::spectrum::{celcs, error_witness, first_descent_k, kerror_lc};
use celcs::{lc_poly_oracle, parse_sequence, Celcs, Cube, Error, Mask, Seq};

fn seq(text: &str) -> Seq {
    parse_sequence(text, None).unwrap()
}

/// `2^n` minus the multiplicity of `x + 1` in the period polynomial.
fn oracle_lc(bits: u64, n: u32) -> u64 {
    let len = 1u64 << n;
    if bits == 0 {
        return 0;
    }
    let mut p = bits;
    let mut v = 0;
    // divide by x + 1 while p(1) = 0
    while p.count_ones().is_multiple_of(2) {
        let mut q = 0u64;
        let mut acc = 0u64;
        for i in (1..64).rev() {
            acc ^= p >> i & 1;
            q |= acc << (i - 1);
        }
        p = q;
        v += 1;
    }
    len - v
}

fn oracle_kerror(bits: u64, n: u32, k: u32) -> u64 {
    let len = 1u32 << n;
    (0u64..1 << len)
        .filter(|e| e.count_ones() <= k)
        .map(|e| oracle_lc(bits ^ e, n))
        .min()
        .unwrap()
}

fn oracle_points(bits: u64, n: u32) -> Vec<(u64, u64)> {
    let mut points = vec![(0, oracle_lc(bits, n))];
    for k in 1..=bits.count_ones() {
        let l = oracle_kerror(bits, n, k);
        if l < points.last().unwrap().1 {
            points.push((k as u64, l));
        }
    }
    points
}

const WORKED: &str = "1101 1001 1000 0000";
const FIVE: &str = "1111 1000 0000 0000";

#[test]
fn parsing_and_weights() {
    let s = seq(WORKED);
    assert_eq!(s.n(), 4);
    assert_eq!(s.positions(), vec![0, 1, 3, 4, 7, 8]);
    assert_eq!(s.weight(), 6);
    assert_eq!(s.to_text(), WORKED);
    assert!(seq("0000").is_zero());
    assert!(matches!(parse_sequence("101", None), Err(Error::Parse(_))));
    assert_eq!(Seq::ones(4).weight(), 16);
    assert_eq!(parse_sequence("0xD980", None).unwrap(), s);
}

#[test]
fn sum_of_worked_cubes() {
    let c0 = seq("0000 0100 0000 1000");
    let c1 = seq("0100 0100 0001 0001");
    let c2 = seq("1001 1001 1001 1001");
    assert_eq!(c0.add(&c1).unwrap().add(&c2).unwrap(), seq(WORKED));
    assert!(seq(WORKED).add(&seq(WORKED)).unwrap().is_zero());
}

#[test]
fn fold_examples() {
    assert_eq!(seq(WORKED).phi().unwrap(), seq("0101 1001"));
    assert!(Seq::ones(2).phi().unwrap().is_zero());
    assert!(Seq::zero(0).phi().is_err());
}

#[test]
fn complexity_examples() {
    let worked = seq(WORKED);
    assert_eq!(oracle_lc(worked.word().unwrap(), 4), 15);
    assert_eq!(worked.linear_complexity(), 15);
    assert_eq!(lc_poly_oracle(&worked), 15);
    assert_eq!(seq(FIVE).linear_complexity(), 16);
    assert_eq!(seq("1111 0000 0000 0000").linear_complexity(), 13);
    assert_eq!(seq("1000 0000").linear_complexity(), 8);
    assert_eq!(Seq::zero(3).linear_complexity(), 0);
    assert_eq!(seq("1").linear_complexity(), 1);
}

#[test]
fn kerror_examples() {
    let worked = seq(WORKED);
    assert_eq!(oracle_kerror(worked.word().unwrap(), 4, 2), 10);
    assert_eq!(kerror_lc(&worked, 2).unwrap(), 10);
    assert_eq!(kerror_lc(&worked, 0).unwrap(), 15);
    assert_eq!(kerror_lc(&seq(FIVE), 1).unwrap(), 13);
    assert!(matches!(kerror_lc(&worked, 17), Err(Error::OutOfRange { .. })));
}

#[test]
fn spectrum_examples() {
    let worked = seq(WORKED);
    let expected = vec![(0, 15), (2, 10), (4, 3), (6, 0)];
    assert_eq!(oracle_points(worked.word().unwrap(), 4), expected);
    assert_eq!(celcs(&worked).unwrap().points(), &expected[..]);
    assert_eq!(celcs(&worked).unwrap().to_string(), "[(0,15),(2,10),(4,3),(6,0)]");
    assert_eq!(celcs(&Seq::zero(4)).unwrap().points(), &[(0, 0)]);

    let five = celcs(&seq(FIVE)).unwrap();
    assert_eq!(five.points()[..2], [(0, 16), (1, 13)]);
    assert_eq!(five.descent_k(2), Some(3));
    assert_eq!(oracle_points(seq(FIVE).word().unwrap(), 4), five.points());
}

#[test]
fn first_descent_examples() {
    assert_eq!(first_descent_k(&seq(FIVE)).unwrap(), 1);
    assert_eq!(first_descent_k(&seq(WORKED)).unwrap(), 2);
    // L = 2^4 - (2 + 8): a 2-cube with edges 2^1 and 2^3
    let c = Cube::from_offsets(4, 0, &[2, 8]).unwrap().to_seq();
    assert_eq!(first_descent_k(&c).unwrap(), 4);
    assert!(first_descent_k(&Seq::zero(4)).is_err());
}

#[test]
fn witness_examples() {
    // dropping s_0 leaves {1,2,3,4}, itself a 2-cube of complexity 13, so
    // the lexicographically first witness is {0} rather than {4}
    let reaching: Vec<usize> = (0..16)
        .filter(|&p| {
            let e = Seq::from_positions(4, &[p]).unwrap();
            oracle_lc(seq(FIVE).add(&e).unwrap().word().unwrap(), 4) == 13
        })
        .collect();
    assert_eq!(reaching, vec![0, 4, 8, 12]);
    let w = error_witness(&seq(FIVE), 1).unwrap();
    assert_eq!(w.positions(), vec![0]);
    assert!(error_witness(&seq(FIVE), 0).unwrap().is_zero());
    assert!(error_witness(&Seq::zero(4), 3).unwrap().is_zero());
}

#[test]
fn cube_examples() {
    assert_eq!(Cube::from_positions(4, &[1, 4]).unwrap().lc(), 15);
    assert_eq!(Cube::from_offsets(4, 0, &[1, 2, 8]).unwrap().lc(), 5);
    assert_eq!(Cube::from_offsets(4, 0, &[1, 2, 4, 8]).unwrap().lc(), 1);
    assert_eq!(Cube::from_offsets(2, 3, &[]).unwrap().to_seq(), seq("0001"));
    assert_eq!(
        Cube::from_offsets(4, 1, &[4, 10]).unwrap().to_seq(),
        seq("0100 0100 0001 0001")
    );
    assert_eq!(
        Cube::from_offsets(4, 0, &[3, 4, 8]).unwrap().to_seq(),
        seq("1001 1001 1001 1001")
    );
}

#[test]
fn mask_examples() {
    assert!(lc_mask(4, 16).unwrap().is_empty());
    assert_eq!(lc_mask(4, 13).unwrap(), Mask::from_indices(4, &[0, 1]).unwrap());
    assert_eq!(lc_mask(5, 13).unwrap(), Mask::from_indices(5, &[0, 1, 4]).unwrap());
    assert!(lc_mask(4, 0).is_err());
    let m = Mask::from_indices(5, &[0, 1, 4]).unwrap();
    assert_eq!(m.stats().unwrap(), (3, 0, 4));
    let a = Mask::from_indices(5, &[0, 2]).unwrap();
    let b = Mask::from_indices(5, &[1, 2, 3]).unwrap();
    let both = a.intersect(&b).unwrap();
    assert_eq!(both, Mask::from_indices(5, &[2]).unwrap());
    assert_eq!(both.weight(), 1);
    let r = Mask::from_indices(4, &[0, 2, 3]).unwrap().restrict_above(2);
    assert_eq!(r, Mask::from_indices(4, &[3]).unwrap());
    assert!(Mask::empty(4).min_index().is_err());
}

#[test]
fn standard_decomposition_example() {
    let d = standard_decomposition(&seq(WORKED));
    let parts: Vec<Seq> = d.cubes.iter().map(Cube::to_seq).collect();
    assert_eq!(
        parts,
        vec![
            seq("0100 1000 0000 0000"),
            seq("0001 0001 0000 0000"),
            seq("1000 0000 1000 0000")
        ]
    );
    assert!(d.remainder.is_none());
    assert!(standard_decomposition(&Seq::zero(4)).cubes.is_empty());
    let cube = Cube::from_offsets(4, 1, &[4, 10]).unwrap();
    assert_eq!(standard_decomposition(&cube.to_seq()).cubes, vec![cube]);
}

#[test]
fn kerror_decomposition_example() {
    let s = seq(WORKED);
    let d = kerror_decomposition(&s).unwrap();
    assert_eq!(d.lcs(), vec![15, 10, 3]);
    assert_eq!(d.cumulative_weights(), vec![2, 4, 6]);
    assert_eq!(d.reconstruct(4).unwrap(), s);
    assert_eq!(
        d.as_celcs().unwrap(),
        Celcs::from_points(vec![(0, 15), (2, 10), (4, 3), (6, 0)]).unwrap()
    );
    assert!(kerror_decomposition(&Seq::zero(4)).unwrap().cubes.is_empty());

    let cube = Cube::from_offsets(4, 2, &[1, 8]).unwrap();
    assert_eq!(kerror_decomposition(&cube.to_seq()).unwrap().cubes, vec![cube]);

    let partial = kerror_decomposition_partial(&s, 0).unwrap();
    assert_eq!(partial.cubes.len(), 1);
    let rest = partial.remainder.clone().unwrap();
    assert_eq!(rest.linear_complexity(), 10);
    assert_eq!(partial.reconstruct(4).unwrap(), s);
}
