//! Exhaustive and sampled verification of every formula in the crate against
//! brute-force ground truth.
//!
//! Exhaustive runs iterate all `2^(2^n)` sequences as integers, split into
//! fixed contiguous chunks; sampled runs draw from a ChaCha stream per chunk.
//! Chunking never depends on the thread count and failures are merged in
//! ascending order, so reports are identical for any pool size.

mod census;
mod checks;
mod sample;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use census::{census_t43, census_t53, sieve_census, sieve_members, CensusBin, SieveReport};
pub use sample::{random_cube, random_with_lc};

use crate::error::{Error, Result};
use crate::seq::{lc_word, Seq};
use crate::spectrum::distance::{self, CosetEngine};
use crate::spectrum::{BruteForce, Celcs};

use checks::Outcome;

/// Largest `n` iterated exhaustively unless configured otherwise.
pub const DEFAULT_EXHAUSTIVE_CAP: u32 = 4;

/// Sequences per work unit in exhaustive runs.
const CHUNK: u64 = 4096;

/// Samples per work unit (and per RNG stream) in sampled runs.
const SAMPLE_CHUNK: u64 = 1024;

/// Failures kept verbatim in a report; the total is always counted.
const MAX_LISTED_FAILURES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "GC_ORACLE")]
    GcOracle,
    L21,
    L22,
    L23,
    L24,
    T21,
    T31,
    T32,
    P31,
    T33,
    T41,
    T42,
    T43,
    T51,
    T52,
    T53,
    #[serde(rename = "KUROSAWA")]
    Kurosawa,
}

impl TheoremId {
    pub const ALL: [TheoremId; 17] = [
        TheoremId::GcOracle,
        TheoremId::L21,
        TheoremId::L22,
        TheoremId::L23,
        TheoremId::L24,
        TheoremId::T21,
        TheoremId::T31,
        TheoremId::T32,
        TheoremId::P31,
        TheoremId::T33,
        TheoremId::T41,
        TheoremId::T42,
        TheoremId::T43,
        TheoremId::T51,
        TheoremId::T52,
        TheoremId::T53,
        TheoremId::Kurosawa,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::GcOracle => "GC_ORACLE",
            TheoremId::L21 => "L21",
            TheoremId::L22 => "L22",
            TheoremId::L23 => "L23",
            TheoremId::L24 => "L24",
            TheoremId::T21 => "T21",
            TheoremId::T31 => "T31",
            TheoremId::T32 => "T32",
            TheoremId::P31 => "P31",
            TheoremId::T33 => "T33",
            TheoremId::T41 => "T41",
            TheoremId::T42 => "T42",
            TheoremId::T43 => "T43",
            TheoremId::T51 => "T51",
            TheoremId::T52 => "T52",
            TheoremId::T53 => "T53",
            TheoremId::Kurosawa => "KUROSAWA",
        }
    }

    fn needs_spectrum(&self) -> bool {
        !matches!(
            self,
            TheoremId::GcOracle | TheoremId::L21 | TheoremId::L22 | TheoremId::L23 | TheoremId::L24 | TheoremId::T21
        )
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.name() == wanted || (wanted == "GC" && *t == TheoremId::GcOracle))
            .ok_or_else(|| Error::Parse(format!("unknown theorem id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub theorem_id: TheoremId,
    pub n: u32,
    pub mode: Mode,
    /// Items iterated: sequences, sequence pairs, cubes or constructed members.
    pub checked: u64,
    /// Items the statement applied to (e.g. sequences with three descents).
    pub applicable: u64,
    pub failure_count: u64,
    /// Counterexamples in ascending order, at most the first thousand.
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<Vec<CensusBin>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sieve: Option<SieveReport>,
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// JSON with the timing field zeroed, for comparing runs.
    pub fn canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.elapsed_ms = 0;
        serde_json::to_string(&copy).expect("reports serialize")
    }
}

/// Verification settings.
#[derive(Debug, Clone, Copy)]
pub struct Harness {
    pub exhaustive_cap: u32,
    pub engine: BruteForce,
}

impl Default for Harness {
    fn default() -> Self {
        Harness {
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            engine: BruteForce::default(),
        }
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    applicable: u64,
    failures: Vec<(u64, String)>,
}

impl Tally {
    fn record(&mut self, key: u64, outcome: Outcome, text: impl FnOnce() -> String) {
        self.checked += 1;
        match outcome {
            Outcome::Skip => {}
            Outcome::Pass => self.applicable += 1,
            Outcome::Fail => {
                self.applicable += 1;
                self.failures.push((key, text()));
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.applicable += other.applicable;
        self.failures.extend(other.failures);
        self
    }
}

/// Brute-force spectra of every sequence of period `2^n`, indexed by the
/// sequence read as an integer.
pub struct SpectrumTable {
    n: u32,
    spectra: Vec<Celcs>,
}

impl SpectrumTable {
    pub fn build(n: u32, engine: &BruteForce) -> Result<SpectrumTable> {
        if n > 4 {
            return Err(Error::AboveCap { n, cap: 4 });
        }
        let total = 1usize << (1usize << n);
        let spectra: Result<Vec<Celcs>> = (0..total)
            .into_par_iter()
            .with_min_len(CHUNK as usize)
            .map(|v| engine.celcs(&Seq::from_word(n, v as u64).expect("value fits the period")))
            .collect();
        Ok(SpectrumTable { n, spectra: spectra? })
    }

    /// The table for `n`, built once per process.
    pub fn shared(n: u32) -> Result<Arc<SpectrumTable>> {
        static CACHE: OnceLock<Mutex<BTreeMap<u32, Arc<SpectrumTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().expect("cache lock").get(&n) {
            return Ok(t.clone());
        }
        let table = Arc::new(SpectrumTable::build(n, &BruteForce::default())?);
        cache.lock().expect("cache lock").insert(n, table.clone());
        Ok(table)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn get(&self, value: u64) -> &Celcs {
        &self.spectra[value as usize]
    }

    pub fn len(&self) -> usize {
        self.spectra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spectra.is_empty()
    }
}

fn finish(
    theorem_id: TheoremId,
    n: u32,
    mode: Mode,
    seed: Option<u64>,
    mut tally: Tally,
    started: Instant,
) -> VerifyReport {
    tally.failures.sort_unstable();
    let failure_count = tally.failures.len() as u64;
    VerifyReport {
        theorem_id,
        n,
        mode,
        checked: tally.checked,
        applicable: tally.applicable,
        failure_count,
        failures: tally
            .failures
            .into_iter()
            .take(MAX_LISTED_FAILURES)
            .map(|(_, text)| text)
            .collect(),
        bins: None,
        sieve: None,
        seed,
        elapsed_ms: started.elapsed().as_millis() as u64,
    }
}

impl Harness {
    fn check_cap(&self, n: u32) -> Result<()> {
        if n > self.exhaustive_cap {
            return Err(Error::AboveCap {
                n,
                cap: self.exhaustive_cap,
            });
        }
        Ok(())
    }

    fn table(&self, n: u32) -> Result<Arc<SpectrumTable>> {
        if self.engine == BruteForce::default() {
            SpectrumTable::shared(n)
        } else {
            Ok(Arc::new(SpectrumTable::build(n, &self.engine)?))
        }
    }

    /// Checks `theorem_id` on every sequence of period `2^n` (every pair for
    /// L22, every parameter bin for the counting theorems).
    pub fn verify_exhaustive(&self, theorem_id: TheoremId, n: u32) -> Result<VerifyReport> {
        self.check_cap(n)?;
        let started = Instant::now();
        match theorem_id {
            TheoremId::L22 => {
                if n > 3 {
                    return Err(Error::AboveCap { n, cap: 3 });
                }
                let tally = checks::lemma22_pairs(n);
                return Ok(finish(theorem_id, n, Mode::Exhaustive, None, tally, started));
            }
            TheoremId::L24 => {
                let hist = self.lc_histogram(n)?;
                let mut tally = Tally {
                    checked: hist.values().sum(),
                    ..Tally::default()
                };
                for (&lc, &count) in &hist {
                    tally.applicable += 1;
                    let expected = crate::counting::rueppel_count(n, lc)?.value().expect("small exponent");
                    if count as u128 != expected {
                        tally
                            .failures
                            .push((lc, format!("L={lc}: census {count} vs {expected}")));
                    }
                }
                let expected_bins = (1u64 << n) + 1;
                if tally.applicable != expected_bins {
                    tally.failures.push((
                        u64::MAX,
                        format!("{} complexities seen, expected {expected_bins}", tally.applicable),
                    ));
                }
                return Ok(finish(theorem_id, n, Mode::Exhaustive, None, tally, started));
            }
            TheoremId::T43 | TheoremId::T53 => {
                let table = self.table(n)?;
                let bins = if theorem_id == TheoremId::T43 {
                    census_t43(&table)?
                } else {
                    census_t53(&table)?
                };
                let mut tally = Tally {
                    checked: table.len() as u64,
                    ..Tally::default()
                };
                for (idx, bin) in bins.iter().enumerate() {
                    if bin.admissible {
                        tally.applicable += 1;
                    }
                    if !bin.ok() {
                        tally.failures.push((idx as u64, bin.describe()));
                    }
                }
                let mut report = finish(theorem_id, n, Mode::Exhaustive, None, tally, started);
                report.bins = Some(bins);
                return Ok(report);
            }
            _ => {}
        }
        let table = if theorem_id.needs_spectrum() {
            Some(self.table(n)?)
        } else {
            None
        };
        let total = 1u64 << (1u64 << n);
        let chunks = total.div_ceil(CHUNK);
        let engine = self.engine;
        let tally = (0..chunks)
            .into_par_iter()
            .map(|c| -> Result<Tally> {
                let mut tally = Tally::default();
                for v in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    let s = Seq::from_word(n, v).expect("value fits the period");
                    let spectrum = table.as_ref().map(|t| t.get(v));
                    let outcome = checks::check(theorem_id, &s, spectrum, &engine)?;
                    tally.record(v, outcome, || s.to_text());
                }
                Ok(tally)
            })
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
        let mut tally = tally;
        if theorem_id == TheoremId::L23 && n >= 1 {
            tally.failures.extend(checks::lemma23_preimages(n));
        }
        Ok(finish(theorem_id, n, Mode::Exhaustive, None, tally, started))
    }

    /// Checks `theorem_id` on `samples` uniformly random sequences plus
    /// `samples / 10` constructed ones (sums of three cubes of decreasing
    /// complexity). T21 draws random cubes instead; T53 checks members of the
    /// sum set behind its count.
    pub fn verify_sampled(&self, theorem_id: TheoremId, n: u32, samples: u64, seed: u64) -> Result<VerifyReport> {
        if samples == 0 {
            return Err(Error::Precondition("samples must be at least 1".into()));
        }
        let started = Instant::now();
        match theorem_id {
            TheoremId::L24 | TheoremId::T43 => {
                return Err(Error::Precondition(format!(
                    "{theorem_id} is a census over all sequences; use exhaustive mode"
                )))
            }
            TheoremId::T53 => {
                let q = census::sampled_t53_query(n)?;
                let sieve = sieve_members(&q, samples, seed)?;
                let tally = Tally {
                    checked: sieve.samples,
                    applicable: sieve.samples,
                    failures: sieve.counterexamples.clone(),
                };
                let mut report = finish(theorem_id, n, Mode::Sampled, Some(seed), tally, started);
                report.sieve = Some(sieve);
                return Ok(report);
            }
            _ => {}
        }
        let coset = if theorem_id.needs_spectrum() && n <= distance::MAX_N {
            Some(CosetEngine::new(n)?)
        } else {
            None
        };
        let constructed = if theorem_id == TheoremId::T21 { 0 } else { samples / 10 };
        let total = samples + constructed;
        let chunks = total.div_ceil(SAMPLE_CHUNK);
        let engine = self.engine;
        let tally = (0..chunks)
            .into_par_iter()
            .map(|c| -> Result<Tally> {
                let mut rng = sample::chunk_rng(seed, c);
                let mut tally = Tally::default();
                for idx in c * SAMPLE_CHUNK..((c + 1) * SAMPLE_CHUNK).min(total) {
                    if theorem_id == TheoremId::T21 {
                        let cube = random_cube(n, &mut rng)?;
                        tally.record(idx, checks::check_cube(&cube), || cube.to_text());
                        continue;
                    }
                    if theorem_id == TheoremId::L22 {
                        let a = sample::uniform(n, &mut rng);
                        let b = sample::uniform(n, &mut rng);
                        tally.record(idx, checks::lemma22(&a, &b), || format!("{a} + {b}"));
                        continue;
                    }
                    let s = if idx < samples {
                        sample::uniform(n, &mut rng)
                    } else {
                        sample::three_cube_sum(n, &mut rng)?
                    };
                    let spectrum = if theorem_id.needs_spectrum() {
                        Some(match &coset {
                            Some(e) => e.celcs(&s)?,
                            None => engine.celcs(&s)?,
                        })
                    } else {
                        None
                    };
                    let outcome = checks::check(theorem_id, &s, spectrum.as_ref(), &engine)?;
                    tally.record(idx, outcome, || s.to_text());
                }
                Ok(tally)
            })
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
        Ok(finish(theorem_id, n, Mode::Sampled, Some(seed), tally, started))
    }

    /// Number of sequences of period `2^n` per linear complexity.
    pub fn lc_histogram(&self, n: u32) -> Result<BTreeMap<u64, u64>> {
        self.check_cap(n)?;
        if n > 5 {
            return Err(Error::AboveCap { n, cap: 5 });
        }
        let total = 1u64 << (1u64 << n);
        let chunks = total.div_ceil(CHUNK);
        let counts = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut counts = vec![0u64; (1usize << n) + 1];
                for v in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    counts[lc_word(v, n) as usize] += 1;
                }
                counts
            })
            .reduce(
                || vec![0u64; (1usize << n) + 1],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        Ok(counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(l, c)| (l as u64, c))
            .collect())
    }
}

pub fn verify_exhaustive(theorem_id: TheoremId, n: u32) -> Result<VerifyReport> {
    Harness::default().verify_exhaustive(theorem_id, n)
}

pub fn verify_sampled(theorem_id: TheoremId, n: u32, samples: u64, seed: u64) -> Result<VerifyReport> {
    Harness::default().verify_sampled(theorem_id, n, samples, seed)
}

pub fn lc_histogram(n: u32) -> Result<BTreeMap<u64, u64>> {
    Harness::default().lc_histogram(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_names_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.name().parse::<TheoremId>().unwrap(), t);
            let json = serde_json::to_string(&t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.name()));
        }
        assert_eq!("t33".parse::<TheoremId>().unwrap(), TheoremId::T33);
        assert!("T99".parse::<TheoremId>().is_err());
    }

    #[test]
    fn histograms() {
        let h = lc_histogram(1).unwrap();
        assert_eq!(h, BTreeMap::from([(0, 1), (1, 1), (2, 2)]));
        let h = lc_histogram(2).unwrap();
        assert_eq!(h, BTreeMap::from([(0, 1), (1, 1), (2, 2), (3, 4), (4, 8)]));
        assert_eq!(lc_histogram(3).unwrap().values().sum::<u64>(), 256);
        assert!(matches!(lc_histogram(5), Err(Error::AboveCap { .. })));
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            verify_exhaustive(TheoremId::T33, 5),
            Err(Error::AboveCap { n: 5, cap: 4 })
        ));
        assert!(matches!(
            verify_exhaustive(TheoremId::L22, 4),
            Err(Error::AboveCap { .. })
        ));
    }
}
