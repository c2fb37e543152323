//! Exponent sets `S(a)`: the binary digits of `a = 2^n - L`.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The set of exponents `i` with bit `i` set in `2^n - L`.
///
/// Bit `i` of `bits` is exponent `i`; only exponents below `n` may be set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mask {
    n: u32,
    bits: u64,
}

impl Mask {
    pub fn new(n: u32, bits: u64) -> Result<Mask> {
        if n > 63 {
            return Err(Error::out_of_range("n", n, "[0, 63] for a mask"));
        }
        if bits >> n != 0 {
            return Err(Error::out_of_range(
                "mask bits",
                bits as i64,
                format!("exponents below {n}"),
            ));
        }
        Ok(Mask { n, bits })
    }

    pub fn empty(n: u32) -> Mask {
        Mask { n, bits: 0 }
    }

    pub fn from_indices(n: u32, indices: &[u32]) -> Result<Mask> {
        let mut bits = 0u64;
        for &i in indices {
            if i >= n {
                return Err(Error::out_of_range("exponent", i, format!("[0, {n})")));
            }
            bits |= 1 << i;
        }
        Mask::new(n, bits)
    }

    /// `S(2^n - L)` for `0 < L <= 2^n`. `L = 0` has no mask.
    pub fn from_lc(n: u32, lc: u64) -> Result<Mask> {
        if n > 63 {
            return Err(Error::out_of_range("n", n, "[0, 63] for a mask"));
        }
        let period = 1u64 << n;
        if lc == 0 || lc > period {
            return Err(Error::out_of_range("L", lc as i64, format!("(0, {period}]")));
        }
        Ok(Mask { n, bits: period - lc })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// The linear complexity this mask encodes.
    pub fn lc(&self) -> u64 {
        (1u64 << self.n) - self.bits
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn contains(&self, i: u32) -> bool {
        i < 64 && (self.bits >> i) & 1 == 1
    }

    /// Smallest exponent, `S^{-1}`.
    pub fn min_index(&self) -> Result<u32> {
        if self.bits == 0 {
            return Err(Error::EmptyMask);
        }
        Ok(self.bits.trailing_zeros())
    }

    /// Largest exponent, `S^{-m}`.
    pub fn max_index(&self) -> Result<u32> {
        if self.bits == 0 {
            return Err(Error::EmptyMask);
        }
        Ok(63 - self.bits.leading_zeros())
    }

    /// `(weight, min_index, max_index)`.
    pub fn stats(&self) -> Result<(u32, u32, u32)> {
        Ok((self.weight(), self.min_index()?, self.max_index()?))
    }

    /// Exponents strictly greater than `i`.
    pub fn restrict_above(&self, i: u32) -> Mask {
        let keep = if i >= 63 { 0 } else { !((1u64 << (i + 1)) - 1) };
        Mask {
            n: self.n,
            bits: self.bits & keep,
        }
    }

    fn same_period(&self, other: &Mask) -> Result<()> {
        if self.n != other.n {
            return Err(Error::PeriodMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Mask) -> Result<Mask> {
        self.same_period(other)?;
        Ok(*self & *other)
    }

    pub fn union(&self, other: &Mask) -> Result<Mask> {
        self.same_period(other)?;
        Ok(*self | *other)
    }

    pub fn difference(&self, other: &Mask) -> Result<Mask> {
        self.same_period(other)?;
        Ok(*self - *other)
    }

    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn indices(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    /// Parses `"0,1,3"` (or `"{0,1,3}"`, or `""` / `"{}"` for the empty set).
    pub fn parse(n: u32, text: &str) -> Result<Mask> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut idx = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let i: u32 = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad mask exponent {part:?}")))?;
            idx.push(i);
        }
        Mask::from_indices(n, &idx)
    }
}

// The operators assume both masks share a period; the checked forms above
// report a mismatch instead.
impl BitAnd for Mask {
    type Output = Mask;

    fn bitand(self, rhs: Mask) -> Mask {
        debug_assert_eq!(self.n, rhs.n);
        Mask {
            n: self.n,
            bits: self.bits & rhs.bits,
        }
    }
}

impl BitOr for Mask {
    type Output = Mask;

    fn bitor(self, rhs: Mask) -> Mask {
        debug_assert_eq!(self.n, rhs.n);
        Mask {
            n: self.n,
            bits: self.bits | rhs.bits,
        }
    }
}

impl Sub for Mask {
    type Output = Mask;

    fn sub(self, rhs: Mask) -> Mask {
        debug_assert_eq!(self.n, rhs.n);
        Mask {
            n: self.n,
            bits: self.bits & !rhs.bits,
        }
    }
}

impl fmt::Display for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mask(n={}, {})", self.n, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_lc_examples() {
        assert!(Mask::from_lc(4, 16).unwrap().is_empty());
        assert_eq!(Mask::from_lc(4, 13).unwrap(), Mask::from_indices(4, &[0, 1]).unwrap());
        assert_eq!(
            Mask::from_lc(5, 13).unwrap(),
            Mask::from_indices(5, &[0, 1, 4]).unwrap()
        );
        assert!(Mask::from_lc(4, 0).is_err());
        assert!(Mask::from_lc(4, 17).is_err());
    }

    #[test]
    fn stats_and_restriction() {
        let m = Mask::from_indices(5, &[0, 1, 4]).unwrap();
        assert_eq!(m.stats().unwrap(), (3, 0, 4));
        let m = Mask::from_indices(5, &[0, 2, 3, 4]).unwrap();
        assert_eq!(m.restrict_above(2), Mask::from_indices(5, &[3, 4]).unwrap());
        assert_eq!(Mask::empty(4).min_index(), Err(Error::EmptyMask));
        assert_eq!(Mask::empty(4).max_index(), Err(Error::EmptyMask));
    }

    #[test]
    fn set_algebra() {
        // S(c0) = {00101}, S(c1) = {01110}
        let a = Mask::from_indices(5, &[0, 2]).unwrap();
        let b = Mask::from_indices(5, &[1, 2, 3]).unwrap();
        let both = a.intersect(&b).unwrap();
        assert_eq!(both, Mask::from_indices(5, &[2]).unwrap());
        assert_eq!(both.weight(), 1);
        assert_eq!(a.union(&b).unwrap().weight(), 4);
        assert!(a.intersect(&Mask::empty(4)).is_err());
    }

    #[test]
    fn parse_and_display() {
        let m = Mask::parse(4, "0,1,3").unwrap();
        assert_eq!(m.to_string(), "{0,1,3}");
        assert_eq!(m.lc(), 5);
        assert_eq!(Mask::parse(4, "{}").unwrap(), Mask::empty(4));
        assert!(Mask::parse(4, "4").is_err());
    }
}
