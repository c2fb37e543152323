use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::Seq;
use crate::spectrum::{BruteForce, Celcs};

use super::{cube_count, for_each_cube, Cube, Mask};

/// A sequence written as a sum of cubes with strictly decreasing complexity,
/// plus an optional remainder of still lower complexity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeDecomposition {
    pub cubes: Vec<Cube>,
    pub remainder: Option<Seq>,
}

impl CubeDecomposition {
    /// Linear complexity of each cube.
    pub fn lcs(&self) -> Vec<u64> {
        self.cubes.iter().map(Cube::lc).collect()
    }

    /// Weights of the partial sums `c_0 + ... + c_i`.
    pub fn cumulative_weights(&self) -> Vec<u64> {
        let Some(first) = self.cubes.first() else {
            return Vec::new();
        };
        let mut acc = Seq::zero(first.n());
        self.cubes
            .iter()
            .map(|c| {
                acc = acc.add(&c.to_seq()).expect("cubes share a period");
                acc.weight() as u64
            })
            .collect()
    }

    /// Sum of all cubes and the remainder.
    pub fn reconstruct(&self, n: u32) -> Result<Seq> {
        let mut acc = Seq::zero(n);
        for c in &self.cubes {
            acc = acc.add(&c.to_seq())?;
        }
        if let Some(r) = &self.remainder {
            acc = acc.add(r)?;
        }
        Ok(acc)
    }

    /// The spectrum read off a k-error decomposition: points
    /// `(W(c_0 + ... + c_{i-1}), L(c_i))` closed by `(W(s), 0)`.
    pub fn as_celcs(&self) -> Result<Celcs> {
        let weights = self.cumulative_weights();
        let mut points = vec![(0, self.cubes.first().map_or(0, Cube::lc))];
        for (idx, w) in weights.iter().enumerate() {
            let next = self.cubes.get(idx + 1).map_or(0, Cube::lc);
            points.push((*w, next));
        }
        Celcs::from_points(points)
    }
}

/// Games-Chan descent that also rebuilds one cube of complexity `L(s)`
/// inside `s`: levels with equal halves double the cube across the halves,
/// other levels send each position to the half that held the folded bit.
fn extract_cube(s: &Seq) -> Cube {
    let n = s.n();
    let mut levels: Vec<Option<Seq>> = Vec::with_capacity(n as usize);
    let mut cur = s.clone();
    for _ in 0..n {
        let left = cur.left().expect("n >= 1 inside the loop");
        let right = cur.right().expect("n >= 1 inside the loop");
        if left == right {
            levels.push(None);
            cur = left;
        } else {
            cur = left.add(&right).expect("halves share a period");
            levels.push(Some(left));
        }
    }
    debug_assert!(cur.get(0), "nonzero sequences end the descent on a one");
    let mut positions = vec![0usize];
    for (depth, level) in levels.iter().enumerate().rev() {
        let half = 1usize << (n as usize - 1 - depth);
        match level {
            None => {
                let shifted: Vec<usize> = positions.iter().map(|p| p + half).collect();
                positions.extend(shifted);
            }
            Some(left) => {
                for p in positions.iter_mut() {
                    if !left.get(*p) {
                        *p += half;
                    }
                }
            }
        }
    }
    Cube::from_positions(n, &positions).expect("the rebuilt set is a cube")
}

/// Repeatedly peels off the cube rebuilt by the Games-Chan descent until
/// nothing is left.
pub fn standard_decomposition(s: &Seq) -> CubeDecomposition {
    let mut cubes = Vec::new();
    let mut rest = s.clone();
    while !rest.is_zero() {
        let c = extract_cube(&rest);
        rest = rest.add(&c.to_seq()).expect("same period");
        cubes.push(c);
    }
    CubeDecomposition { cubes, remainder: None }
}

/// Cubes `c_0, ..., c_j` with `L(c_i) = L^(i)(s)` and
/// `W_H(c_0 + ... + c_i) = k^(i+1)`, built backwards from `s` by choosing
/// error patterns of weight `k^(i)` that realize `L^(i)` and differ from the
/// previous pattern by a cube. Patterns are tried lightest-support first in
/// lexicographic order, so the result is deterministic.
pub fn kerror_decomposition(s: &Seq) -> Result<CubeDecomposition> {
    kerror_decomposition_with(s, &BruteForce::default())
}

pub fn kerror_decomposition_with(s: &Seq, engine: &BruteForce) -> Result<CubeDecomposition> {
    let spectrum = engine.celcs(s)?;
    kerror_decomposition_from(s, &spectrum, engine)
}

/// As [`kerror_decomposition_with`], for a spectrum already computed.
pub fn kerror_decomposition_from(s: &Seq, spectrum: &Celcs, engine: &BruteForce) -> Result<CubeDecomposition> {
    let points = spectrum.points();
    let levels = points.len() - 1;
    if levels == 0 {
        return Ok(CubeDecomposition {
            cubes: Vec::new(),
            remainder: None,
        });
    }
    // patterns[i] is the error pattern of weight k^(i); patterns[levels] = s
    let mut patterns: Vec<Option<Seq>> = vec![None; levels + 1];
    patterns[levels] = Some(s.clone());
    let mut cubes = vec![None; levels];
    if !descend(s, points, levels, &mut patterns, &mut cubes, engine.budget())? {
        return Err(Error::Precondition(format!(
            "no cube decomposition matches the spectrum {spectrum} of {s}"
        )));
    }
    Ok(CubeDecomposition {
        cubes: cubes.into_iter().map(|c| c.expect("filled by descend")).collect(),
        remainder: None,
    })
}

/// Fills `patterns[i]` and `cubes[i]` for `i < level`, backtracking on dead
/// ends.
fn descend(
    s: &Seq,
    points: &[(u64, u64)],
    level: usize,
    patterns: &mut [Option<Seq>],
    cubes: &mut [Option<Cube>],
    budget: u64,
) -> Result<bool> {
    if level == 0 {
        return Ok(true);
    }
    let i = level - 1;
    let (k, lc) = points[i];
    let upper = patterns[level].clone().expect("set by the caller");
    let dim = ((1u64 << s.n()) - lc).count_ones();
    let cube_weight = 1usize << dim;
    // the next pattern differs from `upper` by a cube sharing `drop` of its
    // positions, taking the weight from k^(i+1) down to k^(i)
    let k_upper = points[level].0;
    let a2 = cube_weight as u64 + k_upper - k;
    if !a2.is_multiple_of(2) || a2 / 2 > k_upper || a2 / 2 > cube_weight as u64 {
        return Ok(false);
    }
    let drop = (a2 / 2) as usize;
    let exps = Mask::from_lc(s.n(), lc)?;
    let needed = cube_count(s.n(), &exps);
    if needed > budget as u128 {
        return Err(Error::Capacity { needed, budget });
    }
    let mut candidates: Vec<(Vec<usize>, Cube)> = Vec::new();
    for_each_cube(s.n(), &exps, &mut |cube_pos| {
        if cube_pos.iter().filter(|&&p| upper.get(p)).count() != drop {
            return;
        }
        let diff = Seq::from_positions(s.n(), cube_pos).expect("positions in period");
        if diff.linear_complexity() != lc {
            return;
        }
        if let Ok(c) = Cube::from_seq(&diff) {
            let pattern = upper.add(&diff).expect("same period");
            candidates.push((pattern.positions(), c));
        }
    });
    candidates.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    for (pattern, c) in candidates {
        cubes[i] = Some(c);
        patterns[i] = Some(Seq::from_positions(s.n(), &pattern).expect("positions in period"));
        if descend(s, points, i, patterns, cubes, budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The first `m + 1` cubes of the k-error decomposition, with the sum of the
/// remaining ones as the remainder.
pub fn kerror_decomposition_partial(s: &Seq, m: usize) -> Result<CubeDecomposition> {
    kerror_decomposition_partial_with(s, m, &BruteForce::default())
}

pub fn kerror_decomposition_partial_with(s: &Seq, m: usize, engine: &BruteForce) -> Result<CubeDecomposition> {
    let full = kerror_decomposition_with(s, engine)?;
    let keep = (m + 1).min(full.cubes.len());
    let mut remainder = Seq::zero(s.n());
    for c in &full.cubes[keep..] {
        remainder = remainder.add(&c.to_seq())?;
    }
    Ok(CubeDecomposition {
        cubes: full.cubes[..keep].to_vec(),
        remainder: Some(remainder),
    })
}
