//! Per-sequence predicates for each verifiable statement.

use crate::counting::{allowed_final_lc, second_descent_possible, DescentKind};
use crate::cube::{kerror_decomposition_from, standard_decomposition, Cube, Mask};
use crate::descent::{k2_second_descent, k3_third_descent, prop31_next_k, spectrum_masks};
use crate::error::Result;
use crate::seq::{lc_poly_oracle, phi_word, Seq};
use crate::spectrum::{first_descent_k, BruteForce, Celcs};

use super::{Tally, TheoremId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum Outcome {
    Skip,
    Pass,
    Fail,
}

impl From<bool> for Outcome {
    fn from(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

pub(super) fn check(id: TheoremId, s: &Seq, spectrum: Option<&Celcs>, engine: &BruteForce) -> Result<Outcome> {
    let n = s.n();
    let period = 1u64 << n;
    let lc = s.linear_complexity();
    let spec = || spectrum.expect("spectrum supplied for this statement");
    Ok(match id {
        TheoremId::GcOracle => (lc == lc_poly_oracle(s)).into(),
        TheoremId::L21 => ((lc == period) == (s.weight() % 2 == 1)).into(),
        TheoremId::L23 => {
            if n == 0 {
                return Ok(Outcome::Skip);
            }
            let folded = s.phi()?;
            let parity = n < 2 || folded.weight() % 2 == s.weight() % 2;
            (folded.weight() <= s.weight() && parity).into()
        }
        TheoremId::T21 => match Cube::from_seq(s) {
            Ok(c) => check_cube(&c),
            Err(_) => {
                // a sequence of minimum weight for its complexity is a cube
                let minimal = lc > 0 && s.weight() as u64 == 1u64 << (period - lc).count_ones();
                if minimal {
                    Outcome::Fail
                } else {
                    Outcome::Skip
                }
            }
        },
        TheoremId::Kurosawa => {
            if lc == 0 {
                return Ok(Outcome::Skip);
            }
            let observed = match spectrum {
                Some(c) => c.descent_k(1).expect("nonzero sequences descend"),
                None => engine.first_descent_k(s)?,
            };
            (observed == first_descent_k(s)?).into()
        }
        TheoremId::T31 => decompositions(s, spec(), engine)?,
        TheoremId::T32 => {
            let c = spec();
            let Some(observed) = c.descent_k(2) else {
                return Ok(Outcome::Skip);
            };
            let masks = spectrum_masks(n, c);
            (k2_second_descent(&masks[0], &masks[1])? == observed).into()
        }
        TheoremId::T33 => {
            let c = spec();
            let Some(observed) = c.descent_k(3) else {
                return Ok(Outcome::Skip);
            };
            let masks = spectrum_masks(n, c);
            (k3_third_descent(&masks[0], &masks[1], &masks[2])? == observed).into()
        }
        TheoremId::P31 => prop31(n, spec())?,
        TheoremId::T41 => {
            if lc != period || n < 2 {
                return Ok(Outcome::Skip);
            }
            let c = spec();
            let (l1, l3) = (c.kerror_lc(1), c.kerror_lc(3));
            let predicted = l1 > 0 && second_descent_possible(DescentKind::ThreeError, &Mask::from_lc(n, l1)?, None)?;
            ((l3 < l1) == predicted).into()
        }
        TheoremId::T42 => {
            let c = spec();
            if lc != period || c.kerror_lc(1) == 0 {
                return Ok(Outcome::Skip);
            }
            let first = Mask::from_lc(n, c.kerror_lc(1))?;
            if first.weight() != 2 {
                return Ok(Outcome::Skip);
            }
            let (i, j) = (first.min_index()?, first.max_index()?);
            allowed_final_lc(DescentKind::ThreeError, n, None, i, j, c.kerror_lc(3))?.into()
        }
        TheoremId::T51 | TheoremId::T52 => {
            let Some(i0) = single_exponent(n, lc) else {
                return Ok(Outcome::Skip);
            };
            let c = spec();
            let (l2, l4) = (c.kerror_lc(2), c.kerror_lc(4));
            let descends = l4 < l2 && l2 < lc;
            if id == TheoremId::T51 {
                let predicted =
                    l2 > 0 && second_descent_possible(DescentKind::FourError, &Mask::from_lc(n, l2)?, Some(i0))?;
                let mut ok = descends == predicted;
                if descends {
                    let d = standard_decomposition(s);
                    ok &= d.cubes.len() >= 2 && d.cubes[0].dim() == 1 && matches!(d.cubes[1].dim(), 1 | 2);
                }
                ok.into()
            } else {
                if !descends {
                    return Ok(Outcome::Skip);
                }
                let second = Mask::from_lc(n, l2)?;
                if second.weight() != 2 {
                    return Ok(Outcome::Fail);
                }
                let (i, j) = (second.min_index()?, second.max_index()?);
                allowed_final_lc(DescentKind::FourError, n, Some(i0), i, j, l4)?.into()
            }
        }
        TheoremId::L22 | TheoremId::L24 | TheoremId::T43 | TheoremId::T53 => {
            unreachable!("{id} is not a per-sequence statement")
        }
    })
}

/// `i0` when `lc = 2^n - 2^{i0}`.
pub(super) fn single_exponent(n: u32, lc: u64) -> Option<u32> {
    let a = (1u64 << n).checked_sub(lc)?;
    (a.count_ones() == 1).then(|| a.trailing_zeros())
}

pub(super) fn check_cube(c: &Cube) -> Outcome {
    let s = c.to_seq();
    let recognized = Cube::from_seq(&s).map(|r| r == *c).unwrap_or(false);
    (s.linear_complexity() == c.lc() && recognized).into()
}

fn strictly_decreasing(values: &[u64]) -> bool {
    values.windows(2).all(|w| w[0] > w[1])
}

fn decompositions(s: &Seq, spectrum: &Celcs, engine: &BruteForce) -> Result<Outcome> {
    let n = s.n();
    let lc = s.linear_complexity();
    let standard = standard_decomposition(s);
    let lcs = standard.lcs();
    let mut ok = standard.reconstruct(n)? == *s && strictly_decreasing(&lcs);
    ok &= lcs.first().copied().unwrap_or(0) == lc;
    let kerror = match kerror_decomposition_from(s, spectrum, engine) {
        Ok(d) => d,
        Err(crate::error::Error::Precondition(_)) => return Ok(Outcome::Fail),
        Err(e) => return Err(e),
    };
    ok &= kerror.reconstruct(n)? == *s;
    ok &= strictly_decreasing(&kerror.lcs());
    ok &= kerror.as_celcs()? == *spectrum;
    Ok(ok.into())
}

fn prop31(n: u32, spectrum: &Celcs) -> Result<Outcome> {
    let masks = spectrum_masks(n, spectrum);
    let mut outcome = Outcome::Skip;
    for i in 2..masks.len() {
        let Some(next) = spectrum.descent_k(i + 1) else {
            break;
        };
        let earlier = masks[..i].iter().fold(Mask::empty(n), |acc, m| acc | *m);
        if !earlier.is_subset_of(&masks[i]) {
            continue;
        }
        let ki = spectrum.descent_k(i).expect("earlier descent exists");
        let mut ok = prop31_next_k(&masks[i], ki)? == next;
        if i == 2 {
            ok &= k3_third_descent(&masks[0], &masks[1], &masks[2])? == next;
        }
        if !ok {
            return Ok(Outcome::Fail);
        }
        outcome = Outcome::Pass;
    }
    Ok(outcome)
}

pub(super) fn lemma22(a: &Seq, b: &Seq) -> Outcome {
    let (la, lb) = (a.linear_complexity(), b.linear_complexity());
    let sum = a.add(b).expect("same period").linear_complexity();
    if la != lb {
        (sum == la.max(lb)).into()
    } else if la > 0 {
        (sum < la).into()
    } else {
        Outcome::Skip
    }
}

/// Every pair of sequences of period `2^n`.
pub(super) fn lemma22_pairs(n: u32) -> Tally {
    let total = 1u64 << (1u64 << n);
    let mut tally = Tally::default();
    for x in 0..total {
        let a = Seq::from_word(n, x).expect("fits");
        for y in 0..total {
            let b = Seq::from_word(n, y).expect("fits");
            let key = (x << 32) | y;
            tally.record(key, lemma22(&a, &b), || format!("{a} + {b}"));
        }
    }
    tally
}

/// Every sequence of period `2^(n-1)` has `2^(2^(n-1))` preimages under the
/// fold.
pub(super) fn lemma23_preimages(n: u32) -> Vec<(u64, String)> {
    let total = 1u64 << (1u64 << n);
    let half = 1u64 << (1u64 << (n - 1));
    let mut counts = vec![0u64; half as usize];
    for v in 0..total {
        counts[phi_word(v, n) as usize] += 1;
    }
    counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != half)
        .map(|(t, &c)| {
            let t = Seq::from_word(n - 1, t as u64).expect("fits");
            (u64::MAX, format!("{t} has {c} preimages, expected {half}"))
        })
        .collect()
}
