use proptest::prelude::*;

use celcs::counting::{allowed_final_lc, count_t43, count_t53, second_descent_possible, CountQuery, DescentKind};
use celcs::cube::{kerror_decomposition, standard_decomposition};
use celcs::harness::{random_cube, random_with_lc};
use celcs::spectrum::{celcs, error_witness, kerror_lc};
use celcs::{lc_poly_oracle, parse_sequence, Celcs, Cube, Error, Mask, Seq};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn any_seq(max_n: u32) -> impl Strategy<Value = Seq> {
    (0..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), 1usize << n).prop_map(|bits| Seq::from_bits(&bits).unwrap())
    })
}

fn seq_of(n: u32) -> impl Strategy<Value = Seq> {
    prop::collection::vec(any::<bool>(), 1usize << n).prop_map(|bits| Seq::from_bits(&bits).unwrap())
}

fn pair_of(n: u32) -> impl Strategy<Value = (Seq, Seq)> {
    (seq_of(n), seq_of(n))
}

proptest! {
    #[test]
    fn games_chan_matches_oracle(s in any_seq(10)) {
        prop_assert_eq!(s.linear_complexity(), lc_poly_oracle(&s));
    }

    #[test]
    fn halving_recursion(s in (1u32..=8).prop_flat_map(seq_of)) {
        let (l, r) = (s.left().unwrap(), s.right().unwrap());
        let expected = if l == r {
            l.linear_complexity()
        } else {
            (s.len() as u64 / 2) + l.add(&r).unwrap().linear_complexity()
        };
        prop_assert_eq!(s.linear_complexity(), expected);
    }

    #[test]
    fn full_complexity_iff_odd_weight(s in any_seq(8)) {
        prop_assert_eq!(s.linear_complexity() == s.len() as u64, s.weight() % 2 == 1);
    }

    #[test]
    fn sum_complexity((a, b) in (4u32..=6).prop_flat_map(pair_of)) {
        let (la, lb) = (a.linear_complexity(), b.linear_complexity());
        let sum = a.add(&b).unwrap().linear_complexity();
        if la != lb {
            prop_assert_eq!(sum, la.max(lb));
        } else if la > 0 {
            prop_assert!(sum < la);
        }
    }

    #[test]
    fn fold_weight(s in (1u32..=8).prop_flat_map(seq_of)) {
        let f = s.phi().unwrap();
        prop_assert!(f.weight() <= s.weight());
        if s.n() >= 2 {
            prop_assert_eq!(f.weight() % 2, s.weight() % 2);
        }
    }

    #[test]
    fn text_round_trip(s in any_seq(8)) {
        prop_assert_eq!(parse_sequence(&s.to_text(), Some(s.n())).unwrap(), s.clone());
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<Seq>(&json).unwrap(), s);
    }

    #[test]
    fn kerror_monotone_and_witnessed(s in any_seq(4)) {
        let spectrum = celcs(&s).unwrap();
        let mut prev = u64::MAX;
        for k in 0..=s.weight() as u64 {
            let l = kerror_lc(&s, k).unwrap();
            prop_assert!(l <= prev);
            prop_assert_eq!(spectrum.kerror_lc(k), l);
            let w = error_witness(&s, k).unwrap();
            prop_assert!(w.weight() as u64 <= k);
            prop_assert_eq!(s.add(&w).unwrap().linear_complexity(), l);
            prev = l;
        }
        prop_assert_eq!(kerror_lc(&s, s.weight() as u64).unwrap(), 0);
        let json = serde_json::to_string(&spectrum).unwrap();
        prop_assert_eq!(serde_json::from_str::<Celcs>(&json).unwrap(), spectrum);
    }

    #[test]
    fn decompositions_round_trip(s in any_seq(4)) {
        let n = s.n();
        let std = standard_decomposition(&s);
        prop_assert_eq!(std.reconstruct(n).unwrap(), s.clone());
        prop_assert!(std.lcs().windows(2).all(|w| w[0] > w[1]));
        prop_assert_eq!(standard_decomposition(&s), std);
        let ke = kerror_decomposition(&s).unwrap();
        prop_assert_eq!(ke.reconstruct(n).unwrap(), s.clone());
        prop_assert_eq!(ke.as_celcs().unwrap(), celcs(&s).unwrap());
    }

    #[test]
    fn standard_decomposition_large(s in (5u32..=9).prop_flat_map(seq_of)) {
        let d = standard_decomposition(&s);
        prop_assert_eq!(d.reconstruct(s.n()).unwrap(), s.clone());
        prop_assert!(d.lcs().windows(2).all(|w| w[0] > w[1]));
        prop_assert_eq!(d.lcs().first().copied().unwrap_or(0), s.linear_complexity());
    }

    #[test]
    fn random_cubes(n in 0u32..=12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_cube(n, &mut rng).unwrap();
        let s = c.to_seq();
        prop_assert_eq!(s.linear_complexity(), c.lc());
        prop_assert_eq!(s.weight(), 1usize << c.dim());
        prop_assert_eq!(&Cube::from_seq(&s).unwrap(), &c);
        prop_assert_eq!(&Cube::parse(n, &c.to_text()).unwrap(), &c);
        let json = serde_json::to_string(&c).unwrap();
        prop_assert_eq!(serde_json::from_str::<Cube>(&json).unwrap(), c);
    }

    #[test]
    fn prescribed_complexity(n in 0u32..=6, frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let lc = ((1u64 << n) as f64 * frac).round() as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(random_with_lc(n, lc, &mut rng).unwrap().linear_complexity(), lc);
    }

    #[test]
    fn mask_complexity_round_trip(n in 1u32..=20, raw in any::<u64>()) {
        let period = 1u64 << n;
        let lc = raw % period + 1;
        let m = Mask::from_lc(n, lc).unwrap();
        prop_assert_eq!(m.lc(), lc);
        prop_assert_eq!(Mask::parse(n, &m.to_string()).unwrap(), m);
    }
}

#[test]
fn counting_exclusions_never_fire() {
    for n in 2..=6u32 {
        let period = 1u64 << n;
        for j in 1..n {
            for i in 0..j {
                for lc in 0..period {
                    if allowed_final_lc(DescentKind::ThreeError, n, None, i, j, lc).unwrap() {
                        let q = CountQuery { n, i0: None, i, j, lc };
                        count_t43(&q).unwrap_or_else(|e| panic!("{q:?}: {e}"));
                    }
                    for i0 in 0..n {
                        let pair = Mask::from_indices(n, &[i, j]).unwrap();
                        if !second_descent_possible(DescentKind::FourError, &pair, Some(i0)).unwrap() {
                            continue;
                        }
                        if allowed_final_lc(DescentKind::FourError, n, Some(i0), i, j, lc).unwrap() {
                            let q = CountQuery {
                                n,
                                i0: Some(i0),
                                i,
                                j,
                                lc,
                            };
                            count_t53(&q).unwrap_or_else(|e| panic!("{q:?}: {e}"));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn period_mismatch_reported() {
    let a = Seq::zero(3);
    let b = Seq::zero(4);
    assert!(matches!(a.add(&b), Err(Error::PeriodMismatch { left: 3, right: 4 })));
}
