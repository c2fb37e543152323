//! Cubes, their linear complexity, and cube decompositions of a sequence.
//!
//! An `m`-cube is a set of `2^m` positions built recursively: two
//! `(m-1)`-cubes with the same edge exponents whose vertices pair up at
//! distance `2^{i_m}`, the distance of two positions being the largest power
//! of two dividing their difference. Cubes of the form
//! `{base + sum_{j in T} offset_j}` with offsets of distinct 2-adic valuation
//! are the common special case, but not every cube has that form
//! (`{0, 1, 2, 11}` in period 16 is a 2-cube without one).

mod decompose;
mod mask;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use decompose::{
    kerror_decomposition, kerror_decomposition_from, kerror_decomposition_partial, kerror_decomposition_partial_with,
    kerror_decomposition_with, standard_decomposition, CubeDecomposition,
};
pub use mask::Mask;

use crate::error::{Error, Result};
use crate::seq::{Seq, MAX_N};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cube {
    n: u32,
    exponents: Mask,
    positions: Vec<usize>,
}

/// 2-adic valuation of a nonzero `x`.
#[inline]
fn valuation(x: u64) -> u32 {
    x.trailing_zeros()
}

/// Finds the edge exponents of `positions` viewed modulo `2^n`, or `None`
/// when the set is not a cube. Positions must be distinct residues.
fn recognize(mut positions: Vec<u64>, n: u32) -> Option<u64> {
    let mut modulus_exp = n;
    let mut exps = 0u64;
    loop {
        if positions.len() == 1 {
            return Some(exps);
        }
        if !positions.len().is_power_of_two() {
            return None;
        }
        // The top edge exponent t pairs every residue class mod 2^t with
        // exactly two members that differ at bit t.
        let mut found = None;
        for t in 0..modulus_exp {
            let low = (1u64 << t) - 1;
            positions.sort_unstable_by_key(|&p| (p & low, p));
            let ok = positions.chunks(2).enumerate().all(|(k, pair)| {
                pair.len() == 2
                    && pair[0] & low == pair[1] & low
                    && (pair[0] ^ pair[1]) >> t & 1 == 1
                    && (k == 0 || positions[2 * k - 1] & low != pair[0] & low)
            });
            if ok {
                found = Some(t);
                break;
            }
        }
        let t = found?;
        let low = (1u64 << t) - 1;
        exps |= 1 << t;
        positions = positions.chunks(2).map(|pair| pair[0] & low).collect();
        modulus_exp = t;
    }
}

impl Cube {
    /// Cube `{base + sum_{j in T} offsets[j] mod 2^n : T}`. Offsets must be
    /// nonzero with pairwise distinct 2-adic valuations.
    pub fn from_offsets(n: u32, base: u64, offsets: &[u64]) -> Result<Cube> {
        if n > MAX_N {
            return Err(Error::out_of_range("n", n, format!("[0, {MAX_N}]")));
        }
        let period = 1u64 << n;
        if base >= period {
            return Err(Error::InvalidCube(format!("base {base} outside period {period}")));
        }
        let mut exps = 0u64;
        for &o in offsets {
            let o = o % period;
            if o == 0 {
                return Err(Error::InvalidCube("offset is a multiple of the period".into()));
            }
            let v = valuation(o);
            if exps >> v & 1 == 1 {
                return Err(Error::InvalidCube(format!(
                    "two offsets share edge length 2^{v}; positions collide"
                )));
            }
            exps |= 1 << v;
        }
        let mut positions = vec![base];
        for &o in offsets {
            let shifted: Vec<u64> = positions.iter().map(|p| (p + o) % period).collect();
            positions.extend(shifted);
        }
        let mut sorted: Vec<usize> = positions.iter().map(|&p| p as usize).collect();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != positions.len() {
            return Err(Error::InvalidCube("positions collide".into()));
        }
        Ok(Cube {
            n,
            exponents: Mask::new(n, exps)?,
            positions: sorted,
        })
    }

    /// Recognizes the nonzero positions of `s` as a cube.
    pub fn from_seq(s: &Seq) -> Result<Cube> {
        Cube::from_positions(s.n(), &s.positions())
    }

    pub fn from_positions(n: u32, positions: &[usize]) -> Result<Cube> {
        if n > MAX_N {
            return Err(Error::out_of_range("n", n, format!("[0, {MAX_N}]")));
        }
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() || sorted.len() != positions.len() {
            return Err(Error::InvalidCube("need a nonempty set of distinct positions".into()));
        }
        if *sorted.last().unwrap() >= 1usize << n {
            return Err(Error::InvalidCube("position outside the period".into()));
        }
        let exps = recognize(sorted.iter().map(|&p| p as u64).collect(), n)
            .ok_or_else(|| Error::InvalidCube(format!("{sorted:?} is not a cube")))?;
        Ok(Cube {
            n,
            exponents: Mask::new(n, exps)?,
            positions: sorted,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Dimension `m`.
    pub fn dim(&self) -> u32 {
        self.exponents.weight()
    }

    /// Edge exponents `i_1 < ... < i_m`, as a mask.
    pub fn exponents(&self) -> Mask {
        self.exponents
    }

    /// Smallest position.
    pub fn base(&self) -> usize {
        self.positions[0]
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn weight(&self) -> usize {
        self.positions.len()
    }

    /// `2^n - (2^{i_1} + ... + 2^{i_m})`.
    pub fn lc(&self) -> u64 {
        self.exponents.lc()
    }

    pub fn to_seq(&self) -> Seq {
        Seq::from_positions(self.n, &self.positions).expect("cube positions lie in the period")
    }

    /// Offsets generating the cube from its smallest position, sorted by edge
    /// exponent, when the cube has that form. Among several generating sets the
    /// one found first by a top-edge-first search with ascending candidates is
    /// returned.
    pub fn offsets(&self) -> Option<Vec<u64>> {
        let period = 1u64 << self.n;
        let base = self.base() as u64;
        let rel: Vec<u64> = self
            .positions
            .iter()
            .map(|&p| (p as u64 + period - base) % period)
            .collect();
        let mut rel_sorted = rel.clone();
        rel_sorted.sort_unstable();
        let exps: Vec<u32> = self.exponents.indices().collect();
        let mut chosen = Vec::with_capacity(exps.len());
        let found = search_offsets(&rel_sorted, &exps, period, &mut vec![0], &mut chosen);
        found.then(|| {
            chosen.reverse();
            chosen
        })
    }

    /// `base=<b>; edges=2^i:odd,...` when the cube has generating offsets,
    /// otherwise `positions=<p,...>; edges=2^i,...`.
    pub fn to_text(&self) -> String {
        match self.offsets() {
            Some(offsets) => {
                let edges: Vec<String> = offsets
                    .iter()
                    .map(|&o| {
                        let v = valuation(o);
                        format!("2^{}:{}", v, o >> v)
                    })
                    .collect();
                format!("base={}; edges={}", self.base(), edges.join(","))
            }
            None => {
                let pos: Vec<String> = self.positions.iter().map(|p| p.to_string()).collect();
                let edges: Vec<String> = self.exponents.indices().map(|i| format!("2^{i}")).collect();
                format!("positions={}; edges={}", pos.join(","), edges.join(","))
            }
        }
    }

    /// Parses either text form produced by [`Cube::to_text`].
    pub fn parse(n: u32, text: &str) -> Result<Cube> {
        let mut base = None;
        let mut positions = None;
        let mut edges: Option<&str> = None;
        for field in text.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("cube field {field:?} lacks '='")))?;
            match key.trim() {
                "base" => {
                    base = Some(
                        value
                            .trim()
                            .parse::<u64>()
                            .map_err(|_| Error::Parse(format!("bad base {value:?}")))?,
                    )
                }
                "positions" => {
                    let p: std::result::Result<Vec<usize>, _> =
                        value.split(',').map(|v| v.trim().parse::<usize>()).collect();
                    positions = Some(p.map_err(|_| Error::Parse(format!("bad positions {value:?}")))?);
                }
                "edges" => edges = Some(value.trim()),
                other => return Err(Error::Parse(format!("unknown cube field {other:?}"))),
            }
        }
        if let Some(pos) = positions {
            return Cube::from_positions(n, &pos);
        }
        let base = base.ok_or_else(|| Error::Parse("cube text needs base= or positions=".into()))?;
        let mut offsets = Vec::new();
        for edge in edges.unwrap_or("").split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (pow, mult) = edge.split_once(':').unwrap_or((edge, "1"));
            let exp: u32 = pow
                .trim()
                .trim_start_matches("2^")
                .parse()
                .map_err(|_| Error::Parse(format!("bad edge {edge:?}")))?;
            let mult: u64 = mult
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad edge multiplier {edge:?}")))?;
            if mult.is_multiple_of(2) || exp >= 64 {
                return Err(Error::InvalidCube(format!("edge {edge:?} needs an odd multiplier")));
            }
            offsets.push(mult << exp);
        }
        Cube::from_offsets(n, base, &offsets)
    }
}

fn search_offsets(rel: &[u64], exps_asc: &[u32], period: u64, generated: &mut Vec<u64>, chosen: &mut Vec<u64>) -> bool {
    let Some((&top, rest)) = exps_asc.split_last() else {
        return true;
    };
    for &q in rel.iter().filter(|&&q| q != 0 && valuation(q) == top) {
        let shifted: Vec<u64> = generated.iter().map(|&g| (g + q) % period).collect();
        if shifted
            .iter()
            .all(|s| rel.binary_search(s).is_ok() && !generated.contains(s))
        {
            let before = generated.len();
            generated.extend(shifted);
            chosen.push(q);
            if search_offsets(rel, rest, period, generated, chosen) {
                return true;
            }
            chosen.pop();
            generated.truncate(before);
        }
    }
    false
}

/// Number of position sets [`for_each_cube`] visits for `exps` in period
/// `2^e`.
pub(crate) fn cube_count(e: u32, exps: &Mask) -> u128 {
    let idx: Vec<u32> = exps.indices().collect();
    count_rec(e, &idx)
}

fn count_rec(e: u32, exps: &[u32]) -> u128 {
    let Some((&t, rest)) = exps.split_last() else {
        return 1u128 << e;
    };
    let pairs = 1u128.checked_shl(2 * (e - t - 1)).unwrap_or(u128::MAX);
    let residues = 1u32 << rest.len();
    let mut total = count_rec(t, rest);
    for _ in 0..residues {
        total = total.saturating_mul(pairs);
    }
    total
}

/// Visits every cube of period `2^e` with edge exponents `exps` as an
/// unsorted position list: a cube of the lower exponents modulo `2^t`, `t` the
/// top exponent, with each residue lifted to two positions that differ at
/// bit `t`.
pub(crate) fn for_each_cube(e: u32, exps: &Mask, f: &mut dyn FnMut(&[usize])) {
    let idx: Vec<u32> = exps.indices().collect();
    cubes_rec(e, &idx, f);
}

fn cubes_rec(e: u32, exps: &[u32], f: &mut dyn FnMut(&[usize])) {
    let Some((&t, rest)) = exps.split_last() else {
        for r in 0..1usize << e {
            f(&[r]);
        }
        return;
    };
    let mut lifted = Vec::with_capacity(2usize << rest.len());
    cubes_rec(t, rest, &mut |residues| {
        lift(residues, t, e, &mut lifted, f);
    });
}

fn lift(residues: &[usize], t: u32, e: u32, lifted: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    let Some((&r, rest)) = residues.split_first() else {
        f(lifted);
        return;
    };
    let steps = 1usize << (e - t);
    for a in (0..steps).step_by(2) {
        for b in (1..steps).step_by(2) {
            lifted.push(r + (a << t));
            lifted.push(r + (b << t));
            lift(rest, t, e, lifted, f);
            lifted.truncate(lifted.len() - 2);
        }
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cube(n={}, {})", self.n, self.to_text())
    }
}

/// JSON form of a cube.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeJson {
    pub n: u32,
    pub base: usize,
    /// `null` when the cube has no generating offsets.
    pub offsets: Option<Vec<u64>>,
    pub exponents: Vec<u32>,
    pub positions: Vec<usize>,
    pub lc: u64,
}

impl From<&Cube> for CubeJson {
    fn from(c: &Cube) -> Self {
        CubeJson {
            n: c.n,
            base: c.base(),
            offsets: c.offsets(),
            exponents: c.exponents.indices().collect(),
            positions: c.positions.clone(),
            lc: c.lc(),
        }
    }
}

impl TryFrom<CubeJson> for Cube {
    type Error = Error;

    fn try_from(j: CubeJson) -> Result<Cube> {
        let cube = match &j.offsets {
            Some(offsets) => Cube::from_offsets(j.n, j.base as u64, offsets)?,
            None => Cube::from_positions(j.n, &j.positions)?,
        };
        Ok(cube)
    }
}

impl Serialize for Cube {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CubeJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cube {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = CubeJson::deserialize(deserializer)?;
        Cube::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// `cube_lc`: linear complexity of a cube from its edge exponents.
pub fn cube_lc(c: &Cube) -> u64 {
    c.lc()
}

/// `lc_mask`: `S(2^n - L)`.
pub fn lc_mask(n: u32, lc: u64) -> Result<Mask> {
    Mask::from_lc(n, lc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::parse_sequence;

    fn seq(text: &str) -> Seq {
        parse_sequence(text, None).unwrap()
    }

    #[test]
    fn lc_from_edges() {
        let c = Cube::from_positions(4, &[1, 4]).unwrap();
        assert_eq!(c.lc(), 15);
        let c = Cube::from_offsets(4, 0, &[1, 2, 8]).unwrap();
        assert_eq!(cube_lc(&c), 5);
        let all = Cube::from_offsets(4, 0, &[1, 2, 4, 8]).unwrap();
        assert_eq!(all.lc(), 1);
        assert_eq!(all.to_seq(), Seq::ones(4));
        assert_eq!(Cube::from_offsets(3, 5, &[]).unwrap().lc(), 8);
    }

    #[test]
    fn to_sequence_examples() {
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
    fn colliding_offsets_rejected() {
        assert!(matches!(Cube::from_offsets(4, 0, &[2, 6]), Err(Error::InvalidCube(_))));
        assert!(matches!(Cube::from_offsets(4, 0, &[16]), Err(Error::InvalidCube(_))));
    }

    #[test]
    fn general_cube_without_offsets() {
        let c = Cube::from_positions(4, &[0, 1, 2, 11]).unwrap();
        assert_eq!(c.exponents(), Mask::from_indices(4, &[0, 1]).unwrap());
        assert_eq!(c.offsets(), None);
        assert_eq!(c.to_seq().linear_complexity(), 13);
        assert_eq!(Cube::parse(4, &c.to_text()).unwrap(), c);
    }

    #[test]
    fn non_cubes_rejected() {
        assert!(Cube::from_positions(4, &[0, 1, 2]).is_err());
        assert!(Cube::from_positions(4, &[0, 1, 2, 4]).is_err());
        assert!(Cube::from_positions(4, &[0, 2, 4, 6]).is_ok());
        assert!(Cube::from_positions(4, &[]).is_err());
    }

    #[test]
    fn constructive_cubes_match_recognition() {
        use std::collections::BTreeSet;
        for n in 0..=4u32 {
            let len = 1usize << n;
            let mut recognized: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); len];
            for v in 1u64..1 << len {
                let s = Seq::from_word(n, v).unwrap();
                if let Ok(c) = Cube::from_seq(&s) {
                    recognized[c.exponents().bits() as usize].insert(c.positions().to_vec());
                }
            }
            for (bits, expected) in recognized.iter().enumerate() {
                let mask = Mask::new(n, bits as u64).unwrap();
                let mut built = BTreeSet::new();
                let mut visits = 0u128;
                for_each_cube(n, &mask, &mut |p| {
                    let mut p = p.to_vec();
                    p.sort_unstable();
                    built.insert(p);
                    visits += 1;
                });
                assert_eq!(visits, cube_count(n, &mask));
                assert_eq!(visits as usize, built.len(), "n={n} mask={mask}");
                assert_eq!(&built, expected, "n={n} mask={mask}");
            }
        }
    }

    #[test]
    fn canonical_offsets_and_text() {
        let c = Cube::from_offsets(4, 11, &[10, 4]).unwrap();
        assert_eq!(c.positions(), &[5, 9, 11, 15]);
        let offsets = c.offsets().unwrap();
        assert_eq!(Cube::from_offsets(4, 5, &offsets).unwrap(), c);
        assert_eq!(
            c.to_text(),
            format!("base=5; edges=2^1:{},2^2:{}", offsets[0] >> 1, offsets[1] >> 2)
        );
        assert_eq!(Cube::parse(4, &c.to_text()).unwrap(), c);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<Cube>(&json).unwrap(), c);
    }
}
