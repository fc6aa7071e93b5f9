//! Minimally different SAT twins for verified-UNSAT formulas.
//!
//! [`make_sat_twin`] edits an UNSAT formula into a satisfiable one through an
//! ordered three-stage procedure: flip the polarity of one literal, replace
//! one literal with a fresh variable (clause width preserved), delete one
//! clause. Within a stage, candidate locations are tried in seeded random
//! order and satisfiability is re-checked after every single edit. A stage
//! whose full pass produces no satisfiable formula leaves its first candidate
//! edit applied, so later stages operate on the accumulated working formula;
//! the recorded trace therefore has between one and three edits, and
//! replaying it over the original formula reproduces the twin exactly.
//!
//! Pair sets built this way are label-balanced by construction: each pair
//! contributes exactly one SAT and one UNSAT instance, the two members share
//! their variable count, and their densities differ by at most 1/N.

use crate::cnf::{Clause, CnfFormula, Literal};
use crate::generator::{self, derive_seed, GeneratorConfig, GeneratorError};
use crate::solver::{SolveStatus, SolverError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Density choices for near-threshold 2-SAT pair sources. The 2-SAT
/// transition sits at density 1, so candidates are drawn just above it where
/// UNSAT instances exist but remain one edit away from satisfiability.
pub const DEFAULT_TWOSAT_ALPHA_CHOICES: [f64; 6] = [1.0, 1.1, 1.2, 1.3, 1.4, 1.5];

#[derive(Debug, Error, PartialEq)]
pub enum PairingError {
    #[error("input formula is not UNSAT (solver reports {status})")]
    NotUnsat { status: SolveStatus },
    #[error("edit references clause {clause} but the formula has {num_clauses}")]
    ClauseOutOfRange { clause: usize, num_clauses: usize },
    #[error("edit references position {position} in a clause of width {width}")]
    PositionOutOfRange { position: usize, width: usize },
    #[error("replacement variable {var} is invalid for a formula over {num_variables} variables")]
    BadReplacementVariable { var: u32, num_variables: u32 },
    #[error("all edit stages exhausted without producing a SAT twin: {stages:?}")]
    ExhaustedStages { stages: Vec<String> },
    #[error("pairing requires at least one variable")]
    NoVariables,
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// A single structural edit, addressed against the formula it is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EditKind {
    /// Negate the literal at `(clause, position)`.
    FlipPolarity { clause: usize, position: usize },
    /// Substitute the literal at `(clause, position)` with `new_var` at the
    /// given polarity; the new variable is never one already in the clause.
    ReplaceLiteral {
        clause: usize,
        position: usize,
        new_var: u32,
        new_positive: bool,
    },
    /// Remove the clause entirely. The variable count stays fixed even if a
    /// variable loses its last occurrence, so the density shifts by exactly
    /// 1/N.
    DeleteClause { clause: usize },
}

impl EditKind {
    /// Applies the edit to `formula`, returning the edited copy.
    pub fn apply(&self, formula: &CnfFormula) -> Result<CnfFormula, PairingError> {
        let mut clauses: Vec<Clause> = formula.clauses().to_vec();
        let check_clause = |clause: usize| -> Result<(), PairingError> {
            if clause >= clauses.len() {
                return Err(PairingError::ClauseOutOfRange {
                    clause,
                    num_clauses: clauses.len(),
                });
            }
            Ok(())
        };
        match *self {
            EditKind::FlipPolarity { clause, position } => {
                check_clause(clause)?;
                let mut lits = clauses[clause].literals().to_vec();
                let lit = *lits.get(position).ok_or(PairingError::PositionOutOfRange {
                    position,
                    width: lits.len(),
                })?;
                lits[position] = lit.negated();
                clauses[clause] = Clause::new(lits);
            }
            EditKind::ReplaceLiteral {
                clause,
                position,
                new_var,
                new_positive,
            } => {
                check_clause(clause)?;
                let mut lits = clauses[clause].literals().to_vec();
                if position >= lits.len() {
                    return Err(PairingError::PositionOutOfRange {
                        position,
                        width: lits.len(),
                    });
                }
                if new_var == 0 || new_var > formula.num_variables() {
                    return Err(PairingError::BadReplacementVariable {
                        var: new_var,
                        num_variables: formula.num_variables(),
                    });
                }
                lits[position] = Literal::new(new_var, new_positive).expect("var checked");
                clauses[clause] = Clause::new(lits);
            }
            EditKind::DeleteClause { clause } => {
                check_clause(clause)?;
                clauses.remove(clause);
            }
        }
        Ok(CnfFormula::new(formula.num_variables(), clauses).expect("edit keeps literals in range"))
    }

}

/// A solver-verified UNSAT formula, its minimally edited SAT twin, and the
/// trace connecting them.
#[derive(Debug, Clone, PartialEq)]
pub struct InstancePair {
    pub unsat_formula: CnfFormula,
    pub sat_formula: CnfFormula,
    /// Edits that turn `unsat_formula` into `sat_formula`, in application
    /// order; length 1 to 3.
    pub edits: Vec<EditKind>,
    pub n: u32,
    pub alpha_unsat: f64,
    pub alpha_sat: f64,
}

impl InstancePair {
    /// Replays the edit trace over the UNSAT member; equals `sat_formula`.
    pub fn replay_edits(&self) -> Result<CnfFormula, PairingError> {
        let mut working = self.unsat_formula.clone();
        for edit in &self.edits {
            working = edit.apply(&working)?;
        }
        Ok(working)
    }
}

/// Builds a SAT twin for a verified UNSAT formula.
///
/// The input is re-certified before editing; passing a satisfiable formula is
/// a [`PairingError::NotUnsat`] error, not a silent success. Fails only when
/// all three stages run out of candidates, which requires pathological inputs
/// such as repeated complete clause sets over few variables.
pub fn make_sat_twin(unsat: &CnfFormula, seed: u64) -> Result<InstancePair, PairingError> {
    if unsat.num_variables() == 0 {
        return Err(PairingError::NoVariables);
    }
    let status = generator::certify(unsat).status;
    if status != SolveStatus::Unsat {
        return Err(PairingError::NotUnsat { status });
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut working = unsat.clone();
    let mut edits: Vec<EditKind> = Vec::new();

    for stage in [Stage::Flip, Stage::Replace, Stage::Delete] {
        let candidates = stage.candidates(&working, &mut rng);
        let mut fallback: Option<EditKind> = None;
        let mut found = None;
        for edit in candidates {
            let candidate = edit.apply(&working)?;
            if generator::certify(&candidate).status == SolveStatus::Sat {
                found = Some((edit, candidate));
                break;
            }
            fallback.get_or_insert(edit);
        }
        if let Some((edit, sat_formula)) = found {
            edits.push(edit);
            let alpha_unsat = unsat.clause_density().map_err(|_| PairingError::NoVariables)?;
            let alpha_sat = sat_formula
                .clause_density()
                .map_err(|_| PairingError::NoVariables)?;
            return Ok(InstancePair {
                unsat_formula: unsat.clone(),
                sat_formula,
                edits,
                n: unsat.num_variables(),
                alpha_unsat,
                alpha_sat,
            });
        }
        // Full pass failed: keep one edit of this kind applied and move on.
        if let Some(edit) = fallback {
            working = edit.apply(&working)?;
            edits.push(edit);
        }
    }

    Err(PairingError::ExhaustedStages {
        stages: ["flip-polarity", "replace-literal", "delete-clause"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    })
}

enum Stage {
    Flip,
    Replace,
    Delete,
}

impl Stage {
    /// Candidate edits for this stage over `formula`, in seeded random order.
    fn candidates(&self, formula: &CnfFormula, rng: &mut ChaCha12Rng) -> Vec<EditKind> {
        match self {
            Stage::Flip => {
                let locations = location_pairs(formula);
                generator::shuffled(locations, rng)
                    .into_iter()
                    .map(|(clause, position)| EditKind::FlipPolarity { clause, position })
                    .collect()
            }
            Stage::Replace => {
                let locations = generator::shuffled(location_pairs(formula), rng);
                let mut edits = Vec::with_capacity(locations.len());
                for (clause, position) in locations {
                    let in_clause: Vec<u32> =
                        formula.clauses()[clause].iter().map(|l| l.var()).collect();
                    let pool: Vec<u32> = (1..=formula.num_variables())
                        .filter(|v| !in_clause.contains(v))
                        .collect();
                    if pool.is_empty() {
                        continue;
                    }
                    let new_var = pool[rng.random_range(0..pool.len())];
                    let new_positive = rng.random_bool(0.5);
                    edits.push(EditKind::ReplaceLiteral {
                        clause,
                        position,
                        new_var,
                        new_positive,
                    });
                }
                edits
            }
            Stage::Delete => {
                let indices: Vec<usize> = (0..formula.num_clauses()).collect();
                generator::shuffled(indices, rng)
                    .into_iter()
                    .map(|clause| EditKind::DeleteClause { clause })
                    .collect()
            }
        }
    }
}

fn location_pairs(formula: &CnfFormula) -> Vec<(usize, usize)> {
    formula
        .clauses()
        .iter()
        .enumerate()
        .flat_map(|(ci, clause)| (0..clause.len()).map(move |li| (ci, li)))
        .collect()
}

/// Statistics from a pair-set build.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSetStats {
    /// Generator draws, accepted or not.
    pub attempts: u64,
    /// Draws rejected because they were satisfiable.
    pub rejected_sat: u64,
    /// Verified-UNSAT sources for which all three edit stages failed.
    pub twin_failures: u64,
    /// Edits of each kind across all pair traces: flip, replace, delete.
    pub edit_counts: [u64; 3],
}

/// A balanced set of verified pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSet {
    pub k: u32,
    pub n: u32,
    pub pairs: Vec<InstancePair>,
    pub stats: PairSetStats,
}

/// Builds exactly `count` verified pairs at width `k`: rejection-samples
/// near-threshold UNSAT instances (2-SAT decided by the implication-graph
/// solver, 3-SAT by CDCL), then derives a SAT twin for each. Sources whose
/// twin construction fails are counted and replaced by further draws.
///
/// `alpha_choices` defaults per width when `None`:
/// [`generator::DEFAULT_UNSAT_ALPHA_CHOICES`] for k = 3,
/// [`DEFAULT_TWOSAT_ALPHA_CHOICES`] for k = 2.
pub fn build_pair_set(
    k: u32,
    n: u32,
    count: u32,
    alpha_choices: Option<&[f64]>,
    seed: u64,
) -> Result<PairSet, PairingError> {
    let default_choices: &[f64] = if k == 2 {
        &DEFAULT_TWOSAT_ALPHA_CHOICES
    } else {
        &generator::DEFAULT_UNSAT_ALPHA_CHOICES
    };
    let choices = alpha_choices.unwrap_or(default_choices);
    if choices.is_empty() {
        return Err(PairingError::Generator(GeneratorError::EmptyAlphaChoices));
    }
    if count < 1 {
        return Err(PairingError::Generator(GeneratorError::ZeroCount));
    }

    let mut choice_rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, u64::MAX));
    let mut pairs = Vec::with_capacity(count as usize);
    let mut stats = PairSetStats::default();
    let mut since_accept = 0u64;

    while pairs.len() < count as usize {
        let alpha = choices[choice_rng.random_range(0..choices.len())];
        let attempt = stats.attempts;
        stats.attempts += 1;
        since_accept += 1;
        if since_accept > generator::DEFAULT_REJECTION_FLOOR {
            return Err(PairingError::Generator(
                GeneratorError::AcceptanceRateTooLow {
                    attempts: stats.attempts,
                    accepted: pairs.len() as u64,
                    floor: generator::DEFAULT_REJECTION_FLOOR,
                },
            ));
        }
        let config = GeneratorConfig {
            k,
            n,
            alpha,
            seed: derive_seed(seed, attempt),
            count: 1,
        };
        let formula = generator::random_ksat(&config)?;
        if generator::certify(&formula).status != SolveStatus::Unsat {
            stats.rejected_sat += 1;
            continue;
        }
        match make_sat_twin(&formula, derive_seed(config.seed, 1)) {
            Ok(pair) => {
                for edit in &pair.edits {
                    let slot = match edit {
                        EditKind::FlipPolarity { .. } => 0,
                        EditKind::ReplaceLiteral { .. } => 1,
                        EditKind::DeleteClause { .. } => 2,
                    };
                    stats.edit_counts[slot] += 1;
                }
                pairs.push(pair);
                since_accept = 0;
            }
            Err(PairingError::ExhaustedStages { .. }) => {
                stats.twin_failures += 1;
            }
            Err(other) => return Err(other),
        }
    }

    Ok(PairSet { k, n, pairs, stats })
}
