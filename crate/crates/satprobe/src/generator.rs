//! Seeded random k-SAT generation, phase-transition sweeps, and low-density
//! UNSAT stress sets.
//!
//! The instance model fixes N variables and samples L = round(α·N) clauses
//! independently; each clause draws k distinct variables uniformly without
//! replacement and gives every literal an independent uniform polarity.
//! Duplicate clauses across draws are permitted. Everything is a pure
//! function of its configuration and seed: batch generation derives one seed
//! per instance, so results are independent of scheduling.

use crate::cnf::{Clause, CnfFormula, Literal};
use crate::solver::{solve_2sat, solve_cdcl, SolveBudget, SolveResult, SolveStatus};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

/// Density choices used for low-α UNSAT stress sets of 3-CNFs.
pub const DEFAULT_UNSAT_ALPHA_CHOICES: [f64; 6] = [3.5, 3.6, 3.7, 3.8, 3.9, 4.0];

/// Rejection sampling aborts after this many consecutive attempts without an
/// accepted instance.
pub const DEFAULT_REJECTION_FLOOR: u64 = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("clause width {k} unsupported; this generator produces 2-SAT and 3-SAT")]
    UnsupportedWidth { k: u32 },
    #[error("cannot sample {k} distinct variables out of {n}")]
    TooFewVariables { n: u32, k: u32 },
    #[error("alpha {alpha} must be positive and give at least one clause")]
    InvalidAlpha { alpha: f64 },
    #[error("no alpha choices supplied")]
    EmptyAlphaChoices,
    #[error("count must be at least 1")]
    ZeroCount,
    #[error(
        "rejection sampling acceptance rate too low: {accepted} accepted after {attempts} attempts \
         (floor: one per {floor})"
    )]
    AcceptanceRateTooLow {
        attempts: u64,
        accepted: u64,
        floor: u64,
    },
}

/// Configuration of one random k-SAT draw.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    /// Clause width; 2 or 3.
    pub k: u32,
    /// Variable count.
    pub n: u32,
    /// Target clause density; the instance gets round(α·n) clauses.
    pub alpha: f64,
    pub seed: u64,
    /// Instances requested by batch generation.
    pub count: u32,
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.k != 2 && self.k != 3 {
            return Err(GeneratorError::UnsupportedWidth { k: self.k });
        }
        if self.n < self.k {
            return Err(GeneratorError::TooFewVariables { n: self.n, k: self.k });
        }
        if !(self.alpha > 0.0) || self.num_clauses() < 1 {
            return Err(GeneratorError::InvalidAlpha { alpha: self.alpha });
        }
        if self.count < 1 {
            return Err(GeneratorError::ZeroCount);
        }
        Ok(())
    }

    /// L = round(α·n), half away from zero.
    pub fn num_clauses(&self) -> u64 {
        (self.alpha * f64::from(self.n)).round() as u64
    }
}

/// Splits a base seed into independent per-item seeds (SplitMix64 over the
/// golden-gamma sequence).
pub(crate) fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sample_clause(rng: &mut ChaCha12Rng, n: u32, k: u32) -> Clause {
    // Partial Fisher-Yates over 1..=n for k distinct variables.
    let mut vars: Vec<u32> = (1..=n).collect();
    let mut lits = Vec::with_capacity(k as usize);
    for i in 0..k as usize {
        let j = rng.random_range(i..vars.len());
        vars.swap(i, j);
        let positive = rng.random_bool(0.5);
        lits.push(Literal::new(vars[i], positive).expect("variables start at 1"));
    }
    Clause::new(lits)
}

fn generate_with_rng(rng: &mut ChaCha12Rng, n: u32, k: u32, num_clauses: u64) -> CnfFormula {
    let clauses = (0..num_clauses).map(|_| sample_clause(rng, n, k)).collect();
    CnfFormula::new(n, clauses).expect("sampled literals are in range")
}

/// Draws a single random k-SAT instance from `config.seed`.
pub fn random_ksat(config: &GeneratorConfig) -> Result<CnfFormula, GeneratorError> {
    config.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    Ok(generate_with_rng(&mut rng, config.n, config.k, config.num_clauses()))
}

/// Draws `config.count` instances; instance `i` uses the derived seed
/// `derive_seed(config.seed, i)` so batches can be regenerated piecewise.
pub fn random_ksat_batch(config: &GeneratorConfig) -> Result<Vec<CnfFormula>, GeneratorError> {
    config.validate()?;
    Ok((0..config.count)
        .map(|i| {
            let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(config.seed, u64::from(i)));
            generate_with_rng(&mut rng, config.n, config.k, config.num_clauses())
        })
        .collect())
}

/// One row of a phase sweep: per-density satisfiability and solver effort.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRow {
    pub alpha: f64,
    /// Instances generated at this density.
    pub count: u32,
    /// Fraction of decided instances the solver proved satisfiable.
    pub sat_fraction: f64,
    /// Median branching decisions over decided instances; `None` when every
    /// solve hit its budget.
    pub median_decisions: Option<f64>,
    pub median_conflicts: Option<f64>,
    /// Fraction of instances whose solve exhausted the budget.
    pub unknown_fraction: f64,
}

/// Sweep results, one row per density, sorted by density.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseReport {
    pub k: u32,
    pub n: u32,
    pub rows: Vec<PhaseRow>,
}

impl PhaseReport {
    /// CSV with the columns
    /// `alpha,count,sat_fraction,median_decisions,median_conflicts,unknown_fraction`.
    /// Medians of fully-unknown rows render as empty cells.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("alpha,count,sat_fraction,median_decisions,median_conflicts,unknown_fraction\n");
        for row in &self.rows {
            let fmt_median = |m: Option<f64>| m.map(|v| format!("{v}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.alpha,
                row.count,
                row.sat_fraction,
                fmt_median(row.median_decisions),
                fmt_median(row.median_conflicts),
                row.unknown_fraction,
            ));
        }
        out
    }
}

fn median(values: &mut [u64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid] as f64
    } else {
        (values[mid - 1] as f64 + values[mid] as f64) / 2.0
    })
}

/// Generates and solves `count` instances per density, recording the
/// satisfiable fraction and median solver effort at each point.
///
/// Budget-limited solves that return UNKNOWN are excluded from the medians
/// and the satisfiable fraction; their share is reported per row instead.
pub fn sweep_phase(
    k: u32,
    n: u32,
    alphas: &[f64],
    count: u32,
    seed: u64,
    budget: &SolveBudget,
) -> Result<PhaseReport, GeneratorError> {
    if alphas.is_empty() {
        return Err(GeneratorError::EmptyAlphaChoices);
    }
    let mut sorted: Vec<f64> = alphas.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mut rows = Vec::with_capacity(sorted.len());
    for (alpha_idx, &alpha) in sorted.iter().enumerate() {
        let config = GeneratorConfig {
            k,
            n,
            alpha,
            seed: derive_seed(seed, alpha_idx as u64),
            count,
        };
        let instances = random_ksat_batch(&config)?;
        let mut sat = 0u32;
        let mut unknown = 0u32;
        let mut decisions = Vec::with_capacity(instances.len());
        let mut conflicts = Vec::with_capacity(instances.len());
        for formula in &instances {
            let result = solve_cdcl(formula, budget);
            match result.status {
                SolveStatus::Sat => sat += 1,
                SolveStatus::Unsat => {}
                SolveStatus::Unknown => {
                    unknown += 1;
                    continue;
                }
            }
            decisions.push(result.decisions);
            conflicts.push(result.conflicts);
        }
        let decided = count - unknown;
        rows.push(PhaseRow {
            alpha,
            count,
            sat_fraction: if decided == 0 {
                0.0
            } else {
                f64::from(sat) / f64::from(decided)
            },
            median_decisions: median(&mut decisions),
            median_conflicts: median(&mut conflicts),
            unknown_fraction: f64::from(unknown) / f64::from(count),
        });
    }
    Ok(PhaseReport { k, n, rows })
}

/// A solver-certified UNSAT instance from rejection sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct StressInstance {
    pub formula: CnfFormula,
    pub alpha: f64,
    /// Seed of the draw that produced the formula.
    pub seed: u64,
}

/// Output of [`generate_unsat_set`]: the accepted instances plus rejection
/// statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct UnsatStressSet {
    pub instances: Vec<StressInstance>,
    /// Total draws, accepted or not.
    pub attempts: u64,
    /// Draws discarded because the solver proved them satisfiable.
    pub rejected_sat: u64,
}

pub(crate) fn certify(formula: &CnfFormula) -> SolveResult {
    if formula.max_clause_width() <= 2 {
        solve_2sat(formula).expect("width checked")
    } else {
        solve_cdcl(formula, &SolveBudget::UNLIMITED)
    }
}

/// Rejection-samples `count` solver-certified UNSAT instances of width `k`,
/// drawing each instance's density uniformly from `alpha_choices`.
///
/// Aborts with [`GeneratorError::AcceptanceRateTooLow`] if
/// `max_attempts_per_accept` consecutive draws are rejected; verified UNSAT
/// instances are rare at low density and small N, and an unbounded loop
/// would hide a miscalibrated density range.
pub fn generate_unsat_set(
    k: u32,
    n: u32,
    alpha_choices: &[f64],
    count: u32,
    seed: u64,
    max_attempts_per_accept: u64,
) -> Result<UnsatStressSet, GeneratorError> {
    if alpha_choices.is_empty() {
        return Err(GeneratorError::EmptyAlphaChoices);
    }
    if count < 1 {
        return Err(GeneratorError::ZeroCount);
    }
    let mut choice_rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, u64::MAX));
    let mut instances = Vec::with_capacity(count as usize);
    let mut attempts = 0u64;
    let mut rejected_sat = 0u64;
    let mut since_accept = 0u64;

    while instances.len() < count as usize {
        let alpha = alpha_choices[choice_rng.random_range(0..alpha_choices.len())];
        let instance_seed = derive_seed(seed, attempts);
        attempts += 1;
        since_accept += 1;
        let config = GeneratorConfig {
            k,
            n,
            alpha,
            seed: instance_seed,
            count: 1,
        };
        let formula = random_ksat(&config)?;
        if certify(&formula).status == SolveStatus::Unsat {
            instances.push(StressInstance {
                formula,
                alpha,
                seed: instance_seed,
            });
            since_accept = 0;
        } else {
            rejected_sat += 1;
            if since_accept >= max_attempts_per_accept {
                return Err(GeneratorError::AcceptanceRateTooLow {
                    attempts,
                    accepted: instances.len() as u64,
                    floor: max_attempts_per_accept,
                });
            }
        }
    }
    Ok(UnsatStressSet {
        instances,
        attempts,
        rejected_sat,
    })
}

/// 3-CNF UNSAT stress set over the default low-density choices.
pub fn generate_unsat_low_alpha(
    n: u32,
    alpha_choices: &[f64],
    count: u32,
    seed: u64,
) -> Result<UnsatStressSet, GeneratorError> {
    generate_unsat_set(3, n, alpha_choices, count, seed, DEFAULT_REJECTION_FLOOR)
}

/// Seeded shuffle used wherever candidate orderings must be reproducible.
pub(crate) fn shuffled<T>(mut items: Vec<T>, rng: &mut ChaCha12Rng) -> Vec<T> {
    items.shuffle(rng);
    items
}
