//! Closed forms for the second and third descent points of a spectrum,
//! computed from the exponent masks `S^(i) = S(2^n - L^(i))` alone.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cube::Mask;
use crate::error::{Error, Result};
use crate::seq::Seq;
use crate::spectrum::{BruteForce, Celcs};

/// Which form of the third-descent formula applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DescentBranch {
    /// Condition (i) holds together with (ii) or (iii): last coefficient 2.
    Reduced,
    /// Otherwise: last coefficient 4.
    Plain,
}

impl fmt::Display for DescentBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DescentBranch::Reduced => "REDUCED",
            DescentBranch::Plain => "PLAIN",
        })
    }
}

fn same_period(masks: &[&Mask]) -> Result<()> {
    let n = masks[0].n();
    for m in &masks[1..] {
        if m.n() != n {
            return Err(Error::PeriodMismatch { left: n, right: m.n() });
        }
    }
    Ok(())
}

fn pow2(w: u32) -> u64 {
    1u64 << w
}

/// `k^(2) = 2^{W(S0)} + 2^{W(S1)} - 2 * 2^{W(S0 & S1)}`, or `2^{W(S1)} - 1`
/// when `L(s) = 2^n` (`S0` empty).
pub fn k2_second_descent(s0: &Mask, s1: &Mask) -> Result<u64> {
    same_period(&[s0, s1])?;
    if s1.is_empty() {
        return Err(Error::Precondition("S1 must encode a complexity below 2^n".into()));
    }
    if s0.is_empty() {
        return Ok(pow2(s1.weight()) - 1);
    }
    Ok(pow2(s0.weight()) + pow2(s1.weight()) - 2 * pow2((*s0 & *s1).weight()))
}

/// Conditions (i), (ii), (iii) on three consecutive masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct K3Conditions {
    pub first: bool,
    pub second: bool,
    pub third: bool,
}

impl K3Conditions {
    pub fn branch(&self) -> DescentBranch {
        if self.first && (self.second || self.third) {
            DescentBranch::Reduced
        } else {
            DescentBranch::Plain
        }
    }
}

/// Evaluates the three conditions.
///
/// (i) `W(S1 & (S0 | S2)) < W(S1)`.
/// (ii) `S0 & S2 = S0 & S1 & S2`.
/// (iii) with `i_m = max(S1 - (S0 | S2))`: `i_m` exceeds the smaller of
/// `min(S1 & S2)` and `min(S0 & S2)` (over whichever are nonempty; false when
/// both are empty), and the exponents of `S0 & S2` above `i_m` all lie in
/// `S1`. Only evaluated when (i) holds.
pub fn k3_condition_flags(s0: &Mask, s1: &Mask, s2: &Mask) -> Result<K3Conditions> {
    same_period(&[s0, s1, s2])?;
    let outside = *s1 - (*s0 | *s2);
    let first = (*s1 & (*s0 | *s2)).weight() < s1.weight();
    let second = (*s0 & *s2) == (*s0 & *s1 & *s2);
    let third = first && {
        let i_m = outside.max_index()?;
        let lows: Vec<u32> = [*s1 & *s2, *s0 & *s2]
            .iter()
            .filter_map(|m| m.min_index().ok())
            .collect();
        let above = (*s0 & *s2).restrict_above(i_m);
        match lows.iter().min() {
            Some(&low) => i_m > low && above.is_subset_of(s1),
            None => false,
        }
    };
    Ok(K3Conditions { first, second, third })
}

pub fn k3_conditions(s0: &Mask, s1: &Mask, s2: &Mask) -> Result<DescentBranch> {
    Ok(k3_condition_flags(s0, s1, s2)?.branch())
}

/// Inclusion-exclusion value of `k^(3)` with the branch's last coefficient.
pub fn k3_third_descent(s0: &Mask, s1: &Mask, s2: &Mask) -> Result<u64> {
    let branch = k3_conditions(s0, s1, s2)?;
    let last = match branch {
        DescentBranch::Reduced => 2,
        DescentBranch::Plain => 4,
    };
    let plus = pow2(s0.weight()) + pow2(s1.weight()) + pow2(s2.weight()) + last * pow2((*s0 & *s1 & *s2).weight());
    let minus = 2 * (pow2((*s0 & *s1).weight()) + pow2((*s0 & *s2).weight()) + pow2((*s1 & *s2).weight()));
    plus.checked_sub(minus)
        .ok_or_else(|| Error::Precondition(format!("masks {s0}, {s1}, {s2} give a negative count")))
}

/// `k^(i+1) = 2^{W(S^(i))} - k^(i)`, valid when `S^(i)` contains every
/// earlier mask.
pub fn prop31_next_k(si: &Mask, ki: u64) -> Result<u64> {
    let cap = pow2(si.weight());
    if ki >= cap {
        return Err(Error::Precondition(format!("k = {ki} must be below 2^W(S) = {cap}")));
    }
    Ok(cap - ki)
}

/// Masks of the levels of a spectrum, `S^(i)` for every nonzero `L^(i)`.
pub fn spectrum_masks(n: u32, spectrum: &Celcs) -> Vec<Mask> {
    spectrum
        .points()
        .iter()
        .filter(|&&(_, l)| l > 0)
        .map(|&(_, l)| Mask::from_lc(n, l).expect("spectrum levels lie in (0, 2^n]"))
        .collect()
}

/// Descent points of a sequence next to their closed-form predictions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentReport {
    pub spectrum: Celcs,
    pub k2_observed: Option<u64>,
    pub k2_predicted: Option<u64>,
    pub k3_observed: Option<u64>,
    pub k3_predicted: Option<u64>,
    pub k3_branch: Option<DescentBranch>,
}

/// Computes the spectrum of `s` by brute force and evaluates the closed
/// forms on its masks.
pub fn descent_report(s: &Seq, engine: &BruteForce) -> Result<DescentReport> {
    let spectrum = engine.celcs(s)?;
    Ok(descent_report_from(s.n(), spectrum))
}

pub fn descent_report_from(n: u32, spectrum: Celcs) -> DescentReport {
    let masks = spectrum_masks(n, &spectrum);
    let mut report = DescentReport {
        k2_observed: spectrum.descent_k(2),
        k3_observed: spectrum.descent_k(3),
        k2_predicted: None,
        k3_predicted: None,
        k3_branch: None,
        spectrum,
    };
    if report.k2_observed.is_some() && masks.len() >= 2 {
        report.k2_predicted = k2_second_descent(&masks[0], &masks[1]).ok();
    }
    if report.k3_observed.is_some() && masks.len() >= 3 {
        report.k3_predicted = k3_third_descent(&masks[0], &masks[1], &masks[2]).ok();
        report.k3_branch = k3_conditions(&masks[0], &masks[1], &masks[2]).ok();
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u32, idx: &[u32]) -> Mask {
        Mask::from_indices(n, idx).unwrap()
    }

    #[test]
    fn second_descent_examples() {
        assert_eq!(k2_second_descent(&Mask::empty(4), &m(4, &[0, 1])).unwrap(), 3);
        assert_eq!(k2_second_descent(&m(5, &[0, 2]), &m(5, &[1, 2, 3])).unwrap(), 8);
        assert_eq!(k2_second_descent(&m(4, &[3]), &m(4, &[0, 1])).unwrap(), 4);
        assert!(k2_second_descent(&m(4, &[0]), &m(5, &[0])).is_err());
    }

    #[test]
    fn third_descent_examples() {
        let ex1 = (m(6, &[2]), m(6, &[0, 3, 4]), m(6, &[0, 1, 2, 4, 5]));
        let flags = k3_condition_flags(&ex1.0, &ex1.1, &ex1.2).unwrap();
        assert!(flags.first && flags.third);
        assert_eq!(flags.branch(), DescentBranch::Reduced);
        assert_eq!(k3_third_descent(&ex1.0, &ex1.1, &ex1.2).unwrap(), 30);

        let ex2 = (m(5, &[0, 2]), m(5, &[1, 2, 3]), m(5, &[0, 2, 3, 4]));
        assert!(k3_condition_flags(&ex2.0, &ex2.1, &ex2.2).unwrap().third);
        assert_eq!(k3_third_descent(&ex2.0, &ex2.1, &ex2.2).unwrap(), 12);

        let ex3 = (m(6, &[0, 1]), m(6, &[0, 1, 2, 3]), m(6, &[0, 1, 2, 4, 5]));
        let flags = k3_condition_flags(&ex3.0, &ex3.1, &ex3.2).unwrap();
        assert!(flags.first && flags.second);
        assert_eq!(k3_third_descent(&ex3.0, &ex3.1, &ex3.2).unwrap(), 28);

        let plain = (m(6, &[1, 3]), m(6, &[0, 2, 4]), m(6, &[1, 2, 4, 5]));
        assert_eq!(
            k3_conditions(&plain.0, &plain.1, &plain.2).unwrap(),
            DescentBranch::Plain
        );
        assert_eq!(k3_third_descent(&plain.0, &plain.1, &plain.2).unwrap(), 18);
    }

    #[test]
    fn first_condition_failing_skips_third() {
        // S1 inside S0 | S2: (i) fails and i_m is never needed
        let flags = k3_condition_flags(&m(4, &[0]), &m(4, &[0, 1]), &m(4, &[1, 2])).unwrap();
        assert!(!flags.first && !flags.third);
        assert_eq!(flags.branch(), DescentBranch::Plain);
    }

    #[test]
    fn prop31_examples() {
        assert_eq!(prop31_next_k(&m(4, &[0, 1, 2]), 3).unwrap(), 5);
        assert_eq!(prop31_next_k(&m(4, &[0, 1, 2, 3]), 5).unwrap(), 11);
        assert_eq!(prop31_next_k(&m(4, &[0]), 1).unwrap(), 1);
        assert!(prop31_next_k(&m(4, &[0]), 2).is_err());
        // S0 = {}, S1 = {0,1}, S2 = {0,1,2} is covered by the general form too
        assert_eq!(
            k3_third_descent(&Mask::empty(4), &m(4, &[0, 1]), &m(4, &[0, 1, 2])).unwrap(),
            5
        );
    }
}
