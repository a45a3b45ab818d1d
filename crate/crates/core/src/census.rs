//! Brute-force verification that Fedder's verdict agrees with the
//! normal-form predicate over whole coefficient spaces.
//!
//! Instances are addressed by a mixed-radix index over the free coefficients
//! (each digit a field element index, first coefficient least significant).
//! Work is cut into fixed-size chunks processed on a rayon pool; per-chunk
//! tallies are summed, so the result does not depend on scheduling. In
//! sampling mode chunk `c` draws from its own ChaCha stream `c` of the seed.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::lemma_predicate;
use crate::dp1::{DP1Equation, DP1Record, DEGREES};
use crate::fedder::TruncatedFedder;
use crate::fields::{make_field, Field, FieldDesc, FieldElem, FieldError};
use crate::mpoly::{Alphabet, Monomial};

/// Default refusal threshold for exhaustive runs.
pub const DEFAULT_EXHAUSTIVE_CEILING: u128 = 1 << 28;
const CHUNK: u64 = 1 << 14;
const MAX_RECORDED_MISMATCHES: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CensusError {
    #[error("exhaustive census of {count} instances exceeds the ceiling of {ceiling}; use sampling")]
    Infeasible { count: u128, ceiling: u128 },
    #[error("characteristic {0} has no closed-form predicate (only 2, 3 and 5)")]
    UnsupportedCharacteristic(u32),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Which coefficients vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusSpace {
    /// All of `a1, a2, a3, a4, a6` (21 coefficients).
    Full,
    /// The completed normal form: everything for p = 2, `a2, a4, a6` for
    /// p = 3, `a4, a6` for p = 5.
    Normalized,
    /// Only `a6`, the rest zero (the `a4 = 0` slice in characteristic 5).
    A6Only,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CensusMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSpec {
    pub p: u32,
    /// The field is `F_(p^degree)`.
    pub degree: usize,
    pub space: CensusSpace,
    pub mode: CensusMode,
    pub workers: usize,
    #[serde(default = "default_ceiling")]
    pub exhaustive_ceiling: u128,
}

fn default_ceiling() -> u128 {
    DEFAULT_EXHAUSTIVE_CEILING
}

impl CensusSpec {
    pub fn new(p: u32, degree: usize, space: CensusSpace, mode: CensusMode) -> CensusSpec {
        CensusSpec { p, degree, space, mode, workers: 1, exhaustive_ceiling: DEFAULT_EXHAUSTIVE_CEILING }
    }

    pub fn with_workers(mut self, workers: usize) -> CensusSpec {
        self.workers = workers.max(1);
        self
    }

    /// `(form index, coefficient index)` of every free coefficient.
    pub fn free_coefficients(&self) -> Vec<(usize, usize)> {
        let forms: &[usize] = match (self.space, self.p) {
            (CensusSpace::Full, _) | (CensusSpace::Normalized, 2) => &[0, 1, 2, 3, 4],
            (CensusSpace::Normalized, 3) => &[1, 3, 4],
            (CensusSpace::Normalized, _) => &[3, 4],
            (CensusSpace::A6Only, _) => &[4],
        };
        forms.iter().flat_map(|&i| (0..=DEGREES[i]).map(move |k| (i, k))).collect()
    }

    /// `q^(number of free coefficients)`, saturating.
    pub fn space_size(&self) -> u128 {
        let q = (self.p as u128).saturating_pow(self.degree as u32);
        q.saturating_pow(self.free_coefficients().len() as u32)
    }

    pub fn instance_count(&self) -> u128 {
        match self.mode {
            CensusMode::Exhaustive => self.space_size(),
            CensusMode::Sample { count, .. } => count as u128,
        }
    }
}

/// One disagreement, with enough data to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: Option<u64>,
    pub equation: DP1Record,
    pub f_split: bool,
    pub predicate: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusSummary {
    pub spec: CensusSpec,
    pub field: FieldDesc,
    pub free_coefficients: usize,
    pub total: u64,
    pub non_fsplit: u64,
    pub predicate_true: u64,
    pub mismatch_count: u64,
    pub mismatches: Vec<Mismatch>,
    pub wall_time_secs: f64,
}

#[derive(Default)]
struct Tally {
    total: u64,
    non_fsplit: u64,
    predicate_true: u64,
    mismatch_count: u64,
    mismatches: Vec<(u64, Mismatch)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.non_fsplit += other.non_fsplit;
        self.predicate_true += other.predicate_true;
        self.mismatch_count += other.mismatch_count;
        self.mismatches.extend(other.mismatches);
        self
    }
}

/// Coefficient storage for one instance, `coeffs[form][k]`.
type Coeffs = [[FieldElem; 7]; 5];

/// Terms of the sextic with coefficients `c`.
fn terms<'a>(f: &'a Field, c: &'a Coeffs) -> impl Iterator<Item = (Monomial, FieldElem)> + 'a {
    const SHAPE: [(u16, u16, bool); 5] = [(1, 1, false), (2, 0, true), (0, 1, false), (1, 0, true), (0, 0, true)];
    let lead = [(Monomial::stxy(0, 0, 0, 2), f.one()), (Monomial::stxy(0, 0, 3, 0), f.neg(f.one()))];
    lead.into_iter().chain((0..5).flat_map(move |i| {
        let d = DEGREES[i] as u16;
        let (ex, ey, negate) = SHAPE[i];
        (0..=d).filter(move |&k| !c[i][k as usize].is_zero()).map(move |k| {
            let v = c[i][k as usize];
            (Monomial::stxy(d - k, k, ex, ey), if negate { f.neg(v) } else { v })
        })
    }))
}

/// Per-thread evaluator.
struct Evaluator {
    field: Field,
    p: u32,
    space: CensusSpace,
    fedder: TruncatedFedder,
}

impl Evaluator {
    fn new(field: &Field, space: CensusSpace) -> Evaluator {
        Evaluator {
            field: field.clone(),
            p: field.characteristic(),
            space,
            fedder: TruncatedFedder::new(field, &Alphabet::dp1()),
        }
    }

    /// The predicate read directly off a normalized coefficient array.
    fn predicate(&self, c: &Coeffs) -> bool {
        let zero = |i: usize, ks: &[usize]| ks.iter().all(|&k| c[i][k].is_zero());
        match (self.space, self.p) {
            (_, 2) => zero(0, &[0, 1]),
            (CensusSpace::Full, _) => lemma_predicate(&self.equation(c)).expect("supported").holds,
            (_, 3) => zero(1, &[0, 1, 2]) && zero(3, &[2]),
            (_, _) => zero(3, &[0, 1, 2, 3, 4]) && zero(4, &[2, 3, 4]),
        }
    }

    fn equation(&self, c: &Coeffs) -> DP1Equation {
        let coeffs = [0, 1, 2, 3, 4].map(|i| c[i][..=DEGREES[i]].to_vec());
        DP1Equation::from_elems(&self.field, coeffs).expect("shapes match")
    }

    fn run(&mut self, index: Option<u64>, c: &Coeffs, tally: &mut Tally) {
        let verdict = self.fedder.verdict(terms(&self.field, c));
        let pred = self.predicate(c);
        tally.total += 1;
        tally.non_fsplit += (!verdict.f_split) as u64;
        tally.predicate_true += pred as u64;
        if verdict.f_split == pred {
            tally.mismatch_count += 1;
            if tally.mismatches.len() < MAX_RECORDED_MISMATCHES {
                let eq = self.equation(c);
                let witness = verdict.witness_string(&self.field, &Alphabet::dp1());
                tally.mismatches.push((
                    index.unwrap_or(u64::MAX),
                    Mismatch { index, equation: eq.to_record(), f_split: verdict.f_split, predicate: pred, witness },
                ));
            }
        }
    }
}

pub fn census(spec: &CensusSpec) -> Result<CensusSummary, CensusError> {
    census_with_progress(spec, |_, _| {})
}

/// Like [`census`], calling `progress(done, total)` as chunks finish.
pub fn census_with_progress(
    spec: &CensusSpec,
    progress: impl Fn(u64, u64) + Sync,
) -> Result<CensusSummary, CensusError> {
    if ![2, 3, 5].contains(&spec.p) {
        return Err(CensusError::UnsupportedCharacteristic(spec.p));
    }
    let field = make_field(spec.p as u64, spec.degree)?;
    let count = spec.instance_count();
    if spec.mode == CensusMode::Exhaustive && count > spec.exhaustive_ceiling {
        return Err(CensusError::Infeasible { count, ceiling: spec.exhaustive_ceiling });
    }
    let count = count as u64;
    let free = spec.free_coefficients();
    let q = field.order() as u64;
    let start = Instant::now();
    let chunks = count.div_ceil(CHUNK);
    let done = AtomicU64::new(0);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers.max(1))
        .build()
        .map_err(|e| CensusError::Pool(e.to_string()))?;
    let tally = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map_init(
                || Evaluator::new(&field, spec.space),
                |ev, chunk| {
                    let lo = chunk * CHUNK;
                    let hi = (lo + CHUNK).min(count);
                    let mut tally = Tally::default();
                    let mut c: Coeffs = [[FieldElem::ZERO; 7]; 5];
                    match spec.mode {
                        CensusMode::Exhaustive => {
                            // decode the first index, then step the odometer
                            let mut digits = vec![0u64; free.len()];
                            let mut rest = lo;
                            for (d, &(i, k)) in digits.iter_mut().zip(&free) {
                                *d = rest % q;
                                rest /= q;
                                c[i][k] = field.elem_from_index(*d);
                            }
                            for idx in lo..hi {
                                ev.run(Some(idx), &c, &mut tally);
                                for (d, &(i, k)) in digits.iter_mut().zip(&free) {
                                    *d += 1;
                                    if *d < q {
                                        c[i][k] = field.elem_from_index(*d);
                                        break;
                                    }
                                    *d = 0;
                                    c[i][k] = FieldElem::ZERO;
                                }
                            }
                        }
                        CensusMode::Sample { seed, .. } => {
                            let mut rng = ChaCha8Rng::seed_from_u64(seed);
                            rng.set_stream(chunk);
                            for _ in lo..hi {
                                for &(i, k) in &free {
                                    c[i][k] = field.random(&mut rng);
                                }
                                ev.run(None, &c, &mut tally);
                            }
                        }
                    }
                    let n = done.fetch_add(hi - lo, Ordering::Relaxed) + (hi - lo);
                    progress(n, count);
                    tally
                },
            )
            .reduce(Tally::default, Tally::merge)
    });

    let mut mismatches = tally.mismatches;
    mismatches.sort_by_key(|(i, m)| (*i, m.equation.a1.clone(), m.equation.a6.clone()));
    mismatches.truncate(MAX_RECORDED_MISMATCHES);
    Ok(CensusSummary {
        spec: spec.clone(),
        field: field.desc().clone(),
        free_coefficients: free.len(),
        total: tally.total,
        non_fsplit: tally.non_fsplit,
        predicate_true: tally.predicate_true,
        mismatch_count: tally.mismatch_count,
        mismatches: mismatches.into_iter().map(|(_, m)| m).collect(),
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char5_slice() {
        let spec = CensusSpec::new(5, 1, CensusSpace::A6Only, CensusMode::Exhaustive);
        let s = census(&spec).unwrap();
        assert_eq!(s.total, 78_125);
        assert_eq!(s.non_fsplit, 625);
        assert_eq!(s.mismatch_count, 0);
    }

    #[test]
    fn ceiling_is_enforced() {
        let mut spec = CensusSpec::new(5, 1, CensusSpace::Full, CensusMode::Exhaustive);
        spec.exhaustive_ceiling = 1000;
        assert!(matches!(census(&spec), Err(CensusError::Infeasible { .. })));
    }

    #[test]
    fn sampling_is_deterministic_across_worker_counts() {
        let mode = CensusMode::Sample { count: 40_000, seed: 11 };
        let a = census(&CensusSpec::new(3, 1, CensusSpace::Full, mode).with_workers(1)).unwrap();
        let b = census(&CensusSpec::new(3, 1, CensusSpace::Full, mode).with_workers(3)).unwrap();
        assert_eq!((a.total, a.non_fsplit, a.predicate_true), (b.total, b.non_fsplit, b.predicate_true));
        assert_eq!(a.mismatch_count, 0);
    }
}
