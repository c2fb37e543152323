//! One period of a `2^n`-periodic binary sequence and its linear complexity.
//!
//! Bits are packed little-endian into `u64` words: position `i` of the period
//! lives in bit `i % 64` of word `i / 64`. Periods of at most 64 bits fit a
//! single word, which is what the enumeration code works on directly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported period exponent.
pub const MAX_N: u32 = 24;

/// Largest period exponent whose sequences fit in one machine word.
pub const WORD_N: u32 = 6;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seq {
    n: u32,
    words: Vec<u64>,
}

#[inline]
pub(crate) fn period_mask(n: u32) -> u64 {
    debug_assert!(n <= WORD_N);
    if n == WORD_N {
        u64::MAX
    } else {
        (1u64 << (1u32 << n)) - 1
    }
}

fn word_count(n: u32) -> usize {
    if n <= WORD_N {
        1
    } else {
        1 << (n - WORD_N)
    }
}

fn check_n(n: u32) -> Result<()> {
    if n > MAX_N {
        return Err(Error::out_of_range("n", n, format!("[0, {MAX_N}]")));
    }
    Ok(())
}

/// Games-Chan on a single packed word holding a period of `2^n <= 64` bits.
#[inline]
pub fn lc_word(mut bits: u64, n: u32) -> u32 {
    debug_assert!(n <= WORD_N);
    let mut lc = 0u32;
    let mut level = n;
    while level > 0 {
        let half = 1u32 << (level - 1);
        let mask = (1u64 << half) - 1;
        let left = bits & mask;
        let right = (bits >> half) & mask;
        if left == right {
            bits = left;
        } else {
            lc += half;
            bits = left ^ right;
        }
        level -= 1;
    }
    lc + (bits & 1) as u32
}

/// Folds a packed period of `2^n` bits onto its first half.
#[inline]
pub(crate) fn phi_word(bits: u64, n: u32) -> u64 {
    let half = 1u32 << (n - 1);
    let mask = (1u64 << half) - 1;
    (bits & mask) ^ ((bits >> half) & mask)
}

impl Seq {
    /// The all-zero sequence of period `2^n`.
    ///
    /// Panics if `n > MAX_N`.
    pub fn zero(n: u32) -> Seq {
        assert!(n <= MAX_N, "period exponent {n} above {MAX_N}");
        Seq {
            n,
            words: vec![0; word_count(n)],
        }
    }

    /// The all-one sequence of period `2^n`.
    pub fn ones(n: u32) -> Seq {
        let mut s = Seq::zero(n);
        if n <= WORD_N {
            s.words[0] = period_mask(n);
        } else {
            s.words.iter_mut().for_each(|w| *w = u64::MAX);
        }
        s
    }

    /// Builds a sequence of period `2^n <= 64` from packed bits; bits above the
    /// period are rejected.
    pub fn from_word(n: u32, bits: u64) -> Result<Seq> {
        if n > WORD_N {
            return Err(Error::out_of_range("n", n, format!("[0, {WORD_N}] for a single word")));
        }
        if bits & !period_mask(n) != 0 {
            return Err(Error::Parse(format!("bits set above period 2^{n}")));
        }
        Ok(Seq { n, words: vec![bits] })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Seq> {
        let len = bits.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Parse(format!("length {len} is not a power of two")));
        }
        let n = len.trailing_zeros();
        check_n(n)?;
        let mut s = Seq::zero(n);
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.set(i, true);
            }
        }
        Ok(s)
    }

    pub fn from_positions(n: u32, positions: &[usize]) -> Result<Seq> {
        check_n(n)?;
        let mut s = Seq::zero(n);
        for &p in positions {
            if p >= s.len() {
                return Err(Error::out_of_range("position", p as i64, format!("[0, {})", s.len())));
            }
            s.set(p, true);
        }
        Ok(s)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Period length `2^n`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        1usize << self.n
    }

    /// Packed bits when the period fits in a word.
    pub fn word(&self) -> Option<u64> {
        (self.n <= WORD_N).then(|| self.words[0])
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len());
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub(crate) fn set(&mut self, i: usize, value: bool) {
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub(crate) fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Positions of the nonzero elements, ascending.
    pub fn positions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(wi * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Hamming weight of one period.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Elementwise sum over GF(2).
    pub fn add(&self, other: &Seq) -> Result<Seq> {
        if self.n != other.n {
            return Err(Error::PeriodMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect();
        Ok(Seq { n: self.n, words })
    }

    /// First half of the period.
    pub fn left(&self) -> Result<Seq> {
        self.half(false)
    }

    /// Second half of the period.
    pub fn right(&self) -> Result<Seq> {
        self.half(true)
    }

    fn half(&self, right: bool) -> Result<Seq> {
        if self.n == 0 {
            return Err(Error::out_of_range("n", 0, "[1, MAX_N] to split a period"));
        }
        let n = self.n - 1;
        if n < WORD_N {
            let half = 1u32 << n;
            let shift = if right { half } else { 0 };
            Ok(Seq {
                n,
                words: vec![(self.words[0] >> shift) & period_mask(n)],
            })
        } else {
            let hw = word_count(n);
            let start = if right { hw } else { 0 };
            Ok(Seq {
                n,
                words: self.words[start..start + hw].to_vec(),
            })
        }
    }

    /// The map `s -> Left(s) + Right(s)` onto half the period.
    pub fn phi(&self) -> Result<Seq> {
        let l = self.left()?;
        let r = self.right()?;
        l.add(&r)
    }

    /// Linear complexity by the Games-Chan halving recursion.
    pub fn linear_complexity(&self) -> u64 {
        let mut level = self.n;
        let mut lc = 0u64;
        if level <= WORD_N {
            return lc_word(self.words[0], level) as u64;
        }
        let mut buf = self.words.clone();
        while level > WORD_N {
            let hw = word_count(level - 1);
            let (l, r) = buf.split_at_mut(hw);
            let r = &r[..hw];
            if l != r {
                lc += 1u64 << (level - 1);
                l.iter_mut().zip(r).for_each(|(a, b)| *a ^= b);
            }
            buf.truncate(hw);
            level -= 1;
        }
        lc + lc_word(buf[0], WORD_N) as u64
    }

    /// Canonical text: binary digits grouped in nibbles, `s_0` first.
    pub fn to_text(&self) -> String {
        let len = self.len();
        let mut out = String::with_capacity(len + len / 4);
        for i in 0..len {
            if i > 0 && i % 4 == 0 {
                out.push(' ');
            }
            out.push(if self.get(i) { '1' } else { '0' });
        }
        out
    }
}

/// Linear complexity as `2^n - v`, where `v` is the multiplicity of `x + 1` in
/// the period polynomial `s_0 + s_1 x + ... + s_{N-1} x^{N-1}` (`v = N` for the
/// zero polynomial). Independent of the halving recursion.
pub fn lc_poly_oracle(s: &Seq) -> u64 {
    let big_n = s.len();
    let mut coeffs: Vec<u8> = (0..big_n).map(|i| s.get(i) as u8).collect();
    let mut v = 0usize;
    while let Some(deg) = coeffs.iter().rposition(|&c| c == 1) {
        // synthetic division by (x + 1): q_{i-1} = p_i + q_i, remainder p_0 + q_0
        let mut quotient = vec![0u8; deg];
        let mut carry = 0u8;
        for i in (1..=deg).rev() {
            carry ^= coeffs[i];
            quotient[i - 1] = carry;
        }
        if coeffs[0] ^ carry != 0 {
            return (big_n - v) as u64;
        }
        coeffs = quotient;
        v += 1;
    }
    // only the zero polynomial gets here: every power of (x + 1) divides it
    0
}

/// Parses the shared sequence text format: binary digits (whitespace ignored)
/// or `0x`-prefixed hex, most significant bit of each digit first. When `n` is
/// given the bit length must equal `2^n`.
pub fn parse_sequence(text: &str, n: Option<u32>) -> Result<Seq> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bits: Vec<bool> = if let Some(hex) = compact.strip_prefix("0x").or_else(|| compact.strip_prefix("0X")) {
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for c in hex.chars() {
            let d = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("illegal hex character {c:?}")))?;
            for k in (0..4).rev() {
                bits.push((d >> k) & 1 == 1);
            }
        }
        if let Some(n) = n {
            if n > MAX_N || bits.len() != 1usize << n {
                return Err(Error::Parse(format!(
                    "hex length mismatch: {} bits, expected 2^{n}",
                    bits.len()
                )));
            }
        }
        bits
    } else {
        compact
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("illegal character {other:?}"))),
            })
            .collect::<Result<_>>()?
    };
    if bits.is_empty() || !bits.len().is_power_of_two() {
        return Err(Error::Parse(format!("length {} is not a power of two", bits.len())));
    }
    if let Some(n) = n {
        if n > MAX_N || bits.len() != 1usize << n {
            return Err(Error::Parse(format!("length {} does not match 2^{n}", bits.len())));
        }
    }
    Seq::from_bits(&bits)
}

impl FromStr for Seq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_sequence(s, None)
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seq(n={}, {})", self.n, self.to_text())
    }
}

impl Serialize for Seq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for Seq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_sequence(&text, None).map_err(serde::de::Error::custom)
    }
}
