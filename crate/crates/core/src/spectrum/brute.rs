use crate::error::{Error, Result};
use crate::seq::{lc_word, Seq};

use super::Celcs;

/// Default limit on linear complexity evaluations per call.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Exhaustive search over error patterns, by increasing weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForce {
    budget: u64,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce { budget: DEFAULT_BUDGET }
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Next integer with the same popcount (Gosper).
#[inline]
fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x.wrapping_add(c);
    (((r ^ x) >> 2) / c) | r
}

/// Calls `f` on every `w`-subset of `0..len` as a bit mask, in increasing
/// numeric order. `len <= 64`.
#[inline]
pub(crate) fn for_each_mask(len: u32, w: u32, mut f: impl FnMut(u64) -> bool) {
    if w > len {
        return;
    }
    if w == 0 {
        f(0);
        return;
    }
    let first = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
    let last = first << (len - w);
    let mut x = first;
    loop {
        if !f(x) {
            return;
        }
        if x == last {
            return;
        }
        x = next_combination(x);
    }
}

/// `w`-subsets of `0..len` as ascending index lists, in lexicographic order.
pub(crate) struct LexSubsets {
    len: usize,
    idx: Vec<usize>,
    started: bool,
}

impl LexSubsets {
    pub(crate) fn new(len: usize, w: usize) -> Self {
        LexSubsets {
            len,
            idx: (0..w).collect(),
            started: false,
        }
    }

    pub(crate) fn next_subset(&mut self) -> Option<&[usize]> {
        let w = self.idx.len();
        if !self.started {
            self.started = true;
            return (w <= self.len).then_some(&self.idx[..]);
        }
        let mut p = w;
        while p > 0 {
            p -= 1;
            if self.idx[p] < self.len - (w - p) {
                self.idx[p] += 1;
                for q in p + 1..w {
                    self.idx[q] = self.idx[q - 1] + 1;
                }
                return Some(&self.idx[..]);
            }
        }
        None
    }
}

impl BruteForce {
    pub fn new(budget: u64) -> Self {
        BruteForce { budget }
    }

    /// Budget taken from `CELCS_BUDGET` when set and valid.
    pub fn from_env() -> Self {
        std::env::var("CELCS_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(BruteForce::new)
            .unwrap_or_default()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    fn charge(&self, len: u64, weights: impl Iterator<Item = u64>) -> Result<()> {
        let needed: u128 = weights.map(|w| binomial(len, w)).sum();
        if needed > self.budget as u128 {
            return Err(Error::Capacity {
                needed,
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn check_k(s: &Seq, k: u64) -> Result<()> {
        let len = s.len() as u64;
        if k > len {
            return Err(Error::out_of_range("k", k as i64, format!("[0, {len}]")));
        }
        Ok(())
    }

    /// Least complexity over error patterns of weight exactly `w`.
    fn min_exact_weight(s: &Seq, w: u64, floor: u64) -> u64 {
        let n = s.n();
        let mut best = u64::MAX;
        if let Some(bits) = s.word() {
            for_each_mask(s.len() as u32, w as u32, |e| {
                let l = lc_word(bits ^ e, n) as u64;
                if l < best {
                    best = l;
                }
                best > floor
            });
        } else {
            let mut t = s.clone();
            let mut subsets = LexSubsets::new(s.len(), w as usize);
            while let Some(idx) = subsets.next_subset() {
                idx.iter().for_each(|&i| t.flip(i));
                let l = t.linear_complexity();
                idx.iter().for_each(|&i| t.flip(i));
                best = best.min(l);
                if best <= floor {
                    break;
                }
            }
        }
        best
    }

    /// `L_k(s)`: least complexity over all error patterns of weight `<= k`.
    pub fn kerror_lc(&self, s: &Seq, k: u64) -> Result<u64> {
        Self::check_k(s, k)?;
        let weight = s.weight() as u64;
        if k >= weight {
            return Ok(0);
        }
        self.charge(s.len() as u64, 0..=k)?;
        let mut best = s.linear_complexity();
        for w in 1..=k {
            if best == 1 {
                break;
            }
            best = best.min(Self::min_exact_weight(s, w, 1));
        }
        Ok(best)
    }

    /// All critical points of `k -> L_k(s)`.
    pub fn celcs(&self, s: &Seq) -> Result<Celcs> {
        let weight = s.weight() as u64;
        self.charge(s.len() as u64, 0..weight)?;
        let best: Vec<u64> = (0..weight).map(|w| Self::min_exact_weight(s, w, 0)).collect();
        Ok(Celcs::from_exact_weight_minima(&best, weight))
    }

    /// The smallest `k` with `L_k(s) < L(s)`, found by enumeration.
    pub fn first_descent_k(&self, s: &Seq) -> Result<u64> {
        let lc = s.linear_complexity();
        if lc == 0 {
            return Err(Error::Precondition("the zero sequence has no descent".into()));
        }
        let weight = s.weight() as u64;
        for w in 1..weight {
            self.charge(s.len() as u64, 1..=w)?;
            if Self::min_exact_weight(s, w, lc - 1) < lc {
                return Ok(w);
            }
        }
        Ok(weight)
    }

    /// An error pattern `e` with `W_H(e) <= k` and `L(s + e) = L_k(s)`: the
    /// lightest such, ties broken by the lexicographically smallest support.
    pub fn error_witness(&self, s: &Seq, k: u64) -> Result<Seq> {
        let target = self.kerror_lc(s, k)?;
        let weight = s.weight() as u64;
        self.charge(s.len() as u64, 0..=k.min(weight))?;
        let mut t = s.clone();
        for w in 0..=k.min(weight) {
            let mut subsets = LexSubsets::new(s.len(), w as usize);
            while let Some(idx) = subsets.next_subset() {
                idx.iter().for_each(|&i| t.flip(i));
                let l = t.linear_complexity();
                idx.iter().for_each(|&i| t.flip(i));
                if l == target {
                    return Seq::from_positions(s.n(), idx);
                }
            }
        }
        unreachable!("L_k(s) is attained by some pattern of weight at most k")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::parse_sequence;

    #[test]
    fn binomials() {
        assert_eq!(binomial(16, 2), 120);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn gosper_visits_every_subset_once() {
        for len in [1u32, 5, 8] {
            for w in 0..=len {
                let mut seen = Vec::new();
                for_each_mask(len, w, |m| {
                    seen.push(m);
                    true
                });
                assert_eq!(seen.len() as u128, binomial(len as u64, w as u64));
                assert!(seen.windows(2).all(|p| p[0] < p[1]));
                assert!(seen.iter().all(|m| m.count_ones() == w && m >> len == 0));
            }
        }
        let mut count = 0u64;
        for_each_mask(64, 63, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 64);
    }

    #[test]
    fn lexicographic_subsets() {
        let mut it = LexSubsets::new(4, 2);
        let mut all = Vec::new();
        while let Some(s) = it.next_subset() {
            all.push(s.to_vec());
        }
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        let mut empty = LexSubsets::new(3, 0);
        assert_eq!(empty.next_subset(), Some(&[][..]));
        assert_eq!(empty.next_subset(), None);
        assert_eq!(LexSubsets::new(2, 3).next_subset(), None);
    }

    #[test]
    fn budget_refusal() {
        let s = parse_sequence(&"1".repeat(64), None).unwrap();
        let tiny = BruteForce::new(100);
        assert!(matches!(tiny.kerror_lc(&s, 3), Err(Error::Capacity { .. })));
        assert!(matches!(tiny.celcs(&s), Err(Error::Capacity { .. })));
        assert_eq!(tiny.kerror_lc(&s, 64).unwrap(), 0);
    }

    #[test]
    fn k_range_checked() {
        let s = Seq::zero(2);
        assert!(matches!(
            BruteForce::default().kerror_lc(&s, 5),
            Err(Error::OutOfRange { .. })
        ));
    }
}
