//! k-error linear complexity and the critical error linear complexity
//! spectrum.
//!
//! [`BruteForce`] enumerates error patterns and is the reference engine.
//! [`distance`] computes the same spectra from coset-leader weights of the
//! codes `{t : L(t) <= L}` and is used where enumeration is out of reach.

mod brute;
pub mod distance;

use std::fmt;

use serde::{Deserialize, Serialize};

pub(crate) use brute::for_each_mask;
pub use brute::{BruteForce, DEFAULT_BUDGET};

use crate::error::{Error, Result};
use crate::seq::Seq;

/// Critical points `(k, L_k)` of `k -> L_k(s)`, starting at `(0, L(s))`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u64, u64)>", into = "Vec<(u64, u64)>")]
pub struct Celcs {
    points: Vec<(u64, u64)>,
}

impl Celcs {
    pub fn from_points(points: Vec<(u64, u64)>) -> Result<Celcs> {
        let Some(&(k0, _)) = points.first() else {
            return Err(Error::Precondition("a spectrum has at least the point (0, L)".into()));
        };
        if k0 != 0 {
            return Err(Error::Precondition("a spectrum starts at k = 0".into()));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 >= w[0].1 {
                return Err(Error::Precondition(format!(
                    "points {:?} and {:?} are not strictly increasing in k and decreasing in L",
                    w[0], w[1]
                )));
            }
        }
        Ok(Celcs { points })
    }

    /// Builds the spectrum from `best[w]`, the least complexity reachable with
    /// exactly `w` errors, for `w` below the weight of the sequence.
    pub(crate) fn from_exact_weight_minima(best: &[u64], weight: u64) -> Celcs {
        let mut points: Vec<(u64, u64)> = Vec::new();
        for (w, &l) in best.iter().enumerate() {
            if points.last().is_none_or(|&(_, prev)| l < prev) {
                points.push((w as u64, l));
            }
        }
        if weight > 0 {
            points.push((weight, 0));
        } else {
            points = vec![(0, 0)];
        }
        Celcs { points }
    }

    /// Builds the spectrum from `dist[L]`, the fewest errors that bring the
    /// complexity down to at most `L`, for `L = 0..=2^n`.
    pub(crate) fn from_distances(dist: &[u64]) -> Celcs {
        let mut points = Vec::new();
        let mut k = 0;
        loop {
            let lk = dist.iter().position(|&d| d <= k).expect("dist[2^n] is 0") as u64;
            points.push((k, lk));
            if lk == 0 {
                break;
            }
            k = dist[lk as usize - 1];
        }
        Celcs { points }
    }

    pub fn points(&self) -> &[(u64, u64)] {
        &self.points
    }

    /// `L(s)`.
    pub fn lc(&self) -> u64 {
        self.points[0].1
    }

    /// `L_k(s)` for any `k >= 0`.
    pub fn kerror_lc(&self, k: u64) -> u64 {
        let idx = self.points.partition_point(|&(pk, _)| pk <= k);
        self.points[idx - 1].1
    }

    /// Number of strict drops.
    pub fn descents(&self) -> usize {
        self.points.len() - 1
    }

    /// `k^(i)`, the `i`-th strict drop (`i >= 1`).
    pub fn descent_k(&self, i: usize) -> Option<u64> {
        if i == 0 {
            return None;
        }
        self.points.get(i).map(|p| p.0)
    }

    /// `L^(i)`, the complexity after the `i`-th drop (`L^(0) = L(s)`).
    pub fn level(&self, i: usize) -> Option<u64> {
        self.points.get(i).map(|p| p.1)
    }
}

impl TryFrom<Vec<(u64, u64)>> for Celcs {
    type Error = Error;

    fn try_from(points: Vec<(u64, u64)>) -> Result<Celcs> {
        Celcs::from_points(points)
    }
}

impl From<Celcs> for Vec<(u64, u64)> {
    fn from(c: Celcs) -> Self {
        c.points
    }
}

impl fmt::Display for Celcs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (idx, (k, l)) in self.points.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "({k},{l})")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Celcs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Celcs{self}")
    }
}

/// `L_k(s)` by brute force with the default budget.
pub fn kerror_lc(s: &Seq, k: u64) -> Result<u64> {
    BruteForce::default().kerror_lc(s, k)
}

/// Spectrum by brute force with the default budget.
pub fn celcs(s: &Seq) -> Result<Celcs> {
    BruteForce::default().celcs(s)
}

/// Minimum-weight, then lexicographically smallest, error pattern realizing
/// `L_k(s)`, by brute force with the default budget.
pub fn error_witness(s: &Seq, k: u64) -> Result<Seq> {
    BruteForce::default().error_witness(s, k)
}

/// First `k` with `L_k(s) < L(s)`: `2^{W_H(2^n - L(s))}`.
pub fn first_descent_k(s: &Seq) -> Result<u64> {
    let lc = s.linear_complexity();
    if lc == 0 {
        return Err(Error::Precondition("the zero sequence has no descent".into()));
    }
    let a = (1u64 << s.n()) - lc;
    Ok(1u64 << a.count_ones())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_lookup() {
        let c = Celcs::from_points(vec![(0, 15), (2, 10), (4, 3), (6, 0)]).unwrap();
        assert_eq!(c.kerror_lc(0), 15);
        assert_eq!(c.kerror_lc(1), 15);
        assert_eq!(c.kerror_lc(3), 10);
        assert_eq!(c.kerror_lc(100), 0);
        assert_eq!(c.descent_k(2), Some(4));
        assert_eq!(c.level(2), Some(3));
        assert_eq!(c.descents(), 3);
        assert_eq!(c.to_string(), "[(0,15),(2,10),(4,3),(6,0)]");
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, "[[0,15],[2,10],[4,3],[6,0]]");
        assert_eq!(serde_json::from_str::<Celcs>(&json).unwrap(), c);
    }

    #[test]
    fn invalid_points_rejected() {
        assert!(Celcs::from_points(vec![]).is_err());
        assert!(Celcs::from_points(vec![(1, 3)]).is_err());
        assert!(Celcs::from_points(vec![(0, 3), (2, 3)]).is_err());
        assert!(serde_json::from_str::<Celcs>("[[0,3],[1,5]]").is_err());
    }

    #[test]
    fn builders_agree() {
        // best[w] for w < 6, then dist[L] for L = 0..=16, for the same spectrum
        let from_best = Celcs::from_exact_weight_minima(&[15, 15, 10, 12, 3, 9], 6);
        let mut dist = vec![0u64; 17];
        for (l, d) in dist.iter_mut().enumerate() {
            *d = match l {
                0..=2 => 6,
                3..=9 => 4,
                10..=14 => 2,
                _ => 0,
            };
        }
        assert_eq!(from_best, Celcs::from_distances(&dist));
        assert_eq!(from_best.points(), &[(0, 15), (2, 10), (4, 3), (6, 0)]);
    }
}
