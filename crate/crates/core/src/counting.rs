//! Counting functions for sequences with prescribed descent points.
//!
//! Every count is an exact power of two and is carried as its exponent.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cube::Mask;
use crate::error::{Error, Result};

/// Which pair of descents a query is about: `k = 1, 3` for sequences of full
/// complexity, or `k = 2, 4` for complexity `2^n - 2^{i0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DescentKind {
    #[serde(rename = "3err")]
    ThreeError,
    #[serde(rename = "4err")]
    FourError,
}

/// Parameters of a count: first-descent exponents `i < j`, the exponent `i0`
/// of the starting complexity for [`DescentKind::FourError`], and the final
/// complexity `L` (0 allowed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountQuery {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i0: Option<u32>,
    pub i: u32,
    pub j: u32,
    #[serde(rename = "L")]
    pub lc: u64,
}

/// Branch parameters a formula actually used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BranchParams {
    pub i0_eff: Option<u32>,
    pub gamma: Option<u32>,
    pub delta: Option<u32>,
    pub epsilon: Option<u32>,
}

/// A count `2^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountResult {
    pub exponent: u32,
    pub branch: BranchParams,
}

impl CountResult {
    fn plain(exponent: u32) -> Self {
        CountResult {
            exponent,
            branch: BranchParams::default(),
        }
    }

    /// The count itself when it fits in 128 bits.
    pub fn value(&self) -> Option<u128> {
        1u128.checked_shl(self.exponent)
    }
}

impl fmt::Display for CountResult {
    /// `2^e`, followed by the decimal value when `e <= 62`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.exponent)?;
        if self.exponent <= 62 {
            write!(f, " = {}", 1u64 << self.exponent)?;
        }
        Ok(())
    }
}

/// Number of sequences of period `2^n` with complexity `L`: 1 for `L = 0`,
/// else `2^{L-1}`.
pub fn rueppel_count(n: u32, lc: u64) -> Result<CountResult> {
    if n > 31 {
        return Err(Error::out_of_range("n", n, "[0, 31]"));
    }
    let period = 1u64 << n;
    if lc > period {
        return Err(Error::out_of_range("L", lc as i64, format!("[0, {period}]")));
    }
    Ok(CountResult::plain(if lc == 0 { 0 } else { (lc - 1) as u32 }))
}

fn check_pair(n: u32, i: u32, j: u32) -> Result<()> {
    if !(i < j && j < n) {
        return Err(Error::Precondition(format!(
            "need 0 <= i < j < n, got i={i}, j={j}, n={n}"
        )));
    }
    Ok(())
}

/// Whether the given descent can be the second one.
///
/// For `ThreeError`, `first` is the mask of `L_1`: true iff it has exactly two
/// exponents. For `FourError`, `first` is the mask of `L_2` and `i0` is
/// required: true iff the mask is `{i, j}` other than `{0, 1}` with `i0 < i`
/// or `i < i0 < j`.
pub fn second_descent_possible(kind: DescentKind, first: &Mask, i0: Option<u32>) -> Result<bool> {
    match kind {
        DescentKind::ThreeError => Ok(first.weight() == 2),
        DescentKind::FourError => {
            let i0 = i0.ok_or_else(|| Error::Precondition("the 4-error case needs i0".into()))?;
            if i0 >= first.n() {
                return Err(Error::out_of_range("i0", i0, format!("[0, {})", first.n())));
            }
            if first.weight() != 2 || first.bits() == 0b11 {
                return Ok(false);
            }
            let i = first.min_index()?;
            let j = first.max_index()?;
            Ok(i0 < i || (i < i0 && i0 < j))
        }
    }
}

/// Whether `L` is an admissible final complexity after the second descent.
///
/// `L = 0` is always admissible; otherwise `L < 2^n - (2^i + 2^j)` and, by
/// mask weight: three-error needs weight `>= 3`, or weight 2 with
/// `i_1 != i, j` and `i_2 != j`; four-error needs weight `>= 4`, weight 3
/// other than `{i, j, i0}` and `{0, 1, 2}`, or weight 2 with `i_2 != j` and
/// `i_1 != i, j, i0`.
pub fn allowed_final_lc(kind: DescentKind, n: u32, i0: Option<u32>, i: u32, j: u32, lc: u64) -> Result<bool> {
    check_pair(n, i, j)?;
    if n > 63 {
        return Err(Error::out_of_range("n", n, "[1, 63]"));
    }
    if lc == 0 {
        return Ok(true);
    }
    let period = 1u64 << n;
    let second = period - (1u64 << i) - (1u64 << j);
    if lc >= second {
        return Ok(false);
    }
    let mask = Mask::from_lc(n, lc)?;
    let idx: Vec<u32> = mask.indices().collect();
    Ok(match kind {
        DescentKind::ThreeError => match idx.len() {
            0 | 1 => false,
            2 => idx[0] != i && idx[0] != j && idx[1] != j,
            _ => true,
        },
        DescentKind::FourError => {
            let i0 = i0.ok_or_else(|| Error::Precondition("the 4-error case needs i0".into()))?;
            match idx.len() {
                0 | 1 => false,
                2 => idx[1] != j && idx[0] != i && idx[0] != j && idx[0] != i0,
                3 => {
                    let mut ref_set = [i, j, i0];
                    ref_set.sort_unstable();
                    idx[..] != ref_set[..] && idx[..] != [0, 1, 2]
                }
                _ => true,
            }
        }
    })
}

fn exact_exponent(value: i64, what: &str) -> Result<u32> {
    u32::try_from(value).map_err(|_| Error::NonExactDivision(format!("{what} gives exponent {value}")))
}

/// Number of sequences with `L(s) = 2^n`, `L_1(s) = 2^n - (2^i + 2^j)` and
/// `L_3(s) = L`.
pub fn count_t43(q: &CountQuery) -> Result<CountResult> {
    if q.i0.is_some() {
        return Err(Error::Precondition("the 3-error count takes no i0".into()));
    }
    let CountQuery { n, i, j, lc, .. } = *q;
    check_pair(n, i, j)?;
    if !allowed_final_lc(DescentKind::ThreeError, n, None, i, j, lc)? {
        return Err(Error::Precondition(format!(
            "L = {lc} is not an admissible 3-error complexity for i={i}, j={j}"
        )));
    }
    let (n, i, j) = (n as i64, i as i64, j as i64);
    let base = 3 * n - j - i - 3;
    if lc == 0 {
        return Ok(CountResult::plain(exact_exponent(base, "the L = 0 count")?));
    }
    let a = (1u64 << n) - lc;
    let i_m = Mask::from_lc(n as u32, lc)?.max_index()? as i64;
    let above = |x: i64, y: i64| (1u64 << x) + (1u64 << y) > a;
    let i0 = (0..=j).find(|&t| above(t, j)).unwrap_or(j);
    let epsilon = if j == i_m || !above(j, i_m) {
        0
    } else if above(i, i_m) {
        2
    } else {
        1
    };
    if epsilon > 0 && j - i0 > 0 {
        return Err(Error::Precondition(format!(
            "epsilon = {epsilon} and j - i0 = {} are both positive",
            j - i0
        )));
    }
    let e = base + (lc as i64 - 1) - (epsilon + j - i0) - 3 * (n - i_m - 1);
    Ok(CountResult {
        exponent: exact_exponent(e, "the 3-error count")?,
        branch: BranchParams {
            i0_eff: Some(i0 as u32),
            gamma: None,
            delta: None,
            epsilon: Some(epsilon as u32),
        },
    })
}

/// Number of sequences with `L(s) = 2^n - 2^{i0}`,
/// `L_2(s) = 2^n - (2^i + 2^j)` and `L_4(s) = L`.
pub fn count_t53(q: &CountQuery) -> Result<CountResult> {
    let CountQuery { n, i, j, lc, .. } = *q;
    let i0 =
        q.i0.ok_or_else(|| Error::Precondition("the 4-error count needs i0".into()))?;
    check_pair(n, i, j)?;
    let first = Mask::from_indices(n, &[i, j])?;
    if !second_descent_possible(DescentKind::FourError, &first, Some(i0))? {
        return Err(Error::Precondition(format!(
            "L_2 = 2^n - (2^{i} + 2^{j}) cannot be a second descent from 2^n - 2^{i0}"
        )));
    }
    if !allowed_final_lc(DescentKind::FourError, n, Some(i0), i, j, lc)? {
        return Err(Error::Precondition(format!(
            "L = {lc} is not an admissible 4-error complexity for i0={i0}, i={i}, j={j}"
        )));
    }
    let gamma: i64 = if i0 > i { 2 } else { 1 };
    let (n, i, j, i0) = (n as i64, i as i64, j as i64, i0 as i64);
    let base = 4 * n - j - i - 4 - i0 - (gamma - 1);
    if lc == 0 {
        return Ok(CountResult {
            exponent: exact_exponent(base, "the L = 0 count")?,
            branch: BranchParams {
                i0_eff: Some(i0 as u32),
                gamma: Some(gamma as u32),
                delta: None,
                epsilon: None,
            },
        });
    }
    let a = (1u64 << n) - lc;
    let i_m = Mask::from_lc(n as u32, lc)?.max_index()? as i64;
    let p = |x: i64| 1u64 << x;
    let delta = if p(i0) + p(j) > a {
        2
    } else if p(i) + p(i0) + p(j) > a {
        1
    } else {
        0
    };
    let epsilon = if j == i_m || p(j) + p(i_m) <= a {
        0
    } else {
        match (p(i) + p(i_m) > a, p(i0) + p(i_m) > a) {
            (true, true) => 3,
            (true, false) | (false, true) => 2,
            (false, false) => 1,
        }
    };
    if delta > 0 && epsilon > 0 {
        return Err(Error::Precondition(format!(
            "delta = {delta} and epsilon = {epsilon} are both positive"
        )));
    }
    let e = base + (lc as i64 - 1) - (delta + epsilon) - 4 * (n - i_m - 1);
    Ok(CountResult {
        exponent: exact_exponent(e, "the 4-error count")?,
        branch: BranchParams {
            i0_eff: Some(i0 as u32),
            gamma: Some(gamma as u32),
            delta: Some(delta as u32),
            epsilon: Some(epsilon as u32),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u32, i0: Option<u32>, i: u32, j: u32, lc: u64) -> CountQuery {
        CountQuery { n, i0, i, j, lc }
    }

    #[test]
    fn rueppel() {
        assert_eq!(rueppel_count(4, 0).unwrap().exponent, 0);
        assert_eq!(rueppel_count(4, 1).unwrap().exponent, 0);
        assert_eq!(rueppel_count(4, 16).unwrap().exponent, 15);
        assert!(rueppel_count(4, 17).is_err());
    }

    #[test]
    fn three_error_examples() {
        let r = count_t43(&q(4, None, 1, 3, 5)).unwrap();
        assert_eq!(r.exponent, 8);
        assert_eq!(r.branch.i0_eff, Some(2));
        assert_eq!(r.branch.epsilon, Some(0));
        let r = count_t43(&q(4, None, 1, 2, 7)).unwrap();
        assert_eq!(r.exponent, 10);
        assert_eq!(r.branch.epsilon, Some(2));
        assert_eq!(count_t43(&q(4, None, 1, 3, 0)).unwrap().exponent, 5);
    }

    #[test]
    fn four_error_examples() {
        let r = count_t53(&q(4, Some(2), 1, 3, 5)).unwrap();
        assert_eq!(r.exponent, 7);
        assert_eq!(
            (r.branch.gamma, r.branch.delta, r.branch.epsilon),
            (Some(2), Some(2), Some(0))
        );
        let r = count_t53(&q(5, Some(1), 2, 3, 15)).unwrap();
        assert_eq!(r.exponent, 21);
        assert_eq!(
            (r.branch.gamma, r.branch.delta, r.branch.epsilon),
            (Some(1), Some(0), Some(3))
        );
        assert_eq!(count_t53(&q(4, Some(2), 1, 3, 0)).unwrap().exponent, 5);
    }

    #[test]
    fn predicates() {
        let m = |idx: &[u32]| Mask::from_indices(4, idx).unwrap();
        assert!(second_descent_possible(DescentKind::ThreeError, &m(&[0, 1]), None).unwrap());
        assert!(!second_descent_possible(DescentKind::ThreeError, &m(&[0]), None).unwrap());
        assert!(!second_descent_possible(DescentKind::FourError, &m(&[0, 1]), Some(2)).unwrap());
        assert!(second_descent_possible(DescentKind::FourError, &m(&[1, 3]), Some(2)).unwrap());
        assert!(!second_descent_possible(DescentKind::FourError, &m(&[1, 3]), Some(3)).unwrap());
        assert!(second_descent_possible(DescentKind::FourError, &m(&[0, 1]), None).is_err());

        // mask {1,3} after {0,2} is reached by 2^11 sequences of period 16
        assert!(allowed_final_lc(DescentKind::ThreeError, 4, None, 0, 2, 6).unwrap());
        assert!(!allowed_final_lc(DescentKind::ThreeError, 4, None, 0, 1, 6).unwrap());
        assert!(!allowed_final_lc(DescentKind::FourError, 4, Some(2), 0, 3, 3).unwrap());
        assert!(!allowed_final_lc(DescentKind::ThreeError, 4, None, 1, 3, 6).unwrap());
        assert!(allowed_final_lc(DescentKind::ThreeError, 4, None, 1, 3, 5).unwrap());
        assert!(allowed_final_lc(DescentKind::ThreeError, 4, None, 1, 3, 0).unwrap());
    }

    #[test]
    fn inadmissible_queries_rejected() {
        assert!(matches!(count_t43(&q(4, None, 1, 3, 6)), Err(Error::Precondition(_))));
        assert!(matches!(
            count_t43(&q(4, Some(0), 1, 3, 5)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(count_t53(&q(4, None, 1, 3, 5)), Err(Error::Precondition(_))));
        assert!(matches!(count_t43(&q(4, None, 3, 1, 5)), Err(Error::Precondition(_))));
    }

    #[test]
    fn json_schema() {
        let query: CountQuery = serde_json::from_str(r#"{"n":4,"i":1,"j":3,"L":5}"#).unwrap();
        let r = count_t43(&query).unwrap();
        let json = serde_json::to_value(r).unwrap();
        assert_eq!(json["exponent"], 8);
        assert_eq!(json["branch"]["i0_eff"], 2);
        assert!(json["branch"]["gamma"].is_null());
        assert_eq!(r.to_string(), "2^8 = 256");
    }
}
