//! Ground-truth satisfiability oracles.
//!
//! Three independent decision procedures live here:
//!
//! * [`solve_cdcl`] — an instrumented conflict-driven clause-learning solver
//!   for arbitrary CNF, reporting branching decisions and conflicts;
//! * [`solve_2sat`] — the linear-time implication-graph procedure for
//!   formulas of width ≤ 2;
//! * [`brute_force`] — exhaustive assignment enumeration for small variable
//!   counts, used as the reference oracle in tests.
//!
//! A solver run is single-threaded and stateful; distinct runs on distinct
//! formulas may proceed in parallel. Results are immutable.

mod brute;
mod cdcl;
mod twosat;

pub use brute::{brute_force, brute_force_with_limit, DEFAULT_BRUTE_FORCE_LIMIT};
pub use cdcl::solve_cdcl;
pub use twosat::{implication_components, solve_2sat};

use crate::cnf::Assignment;
use serde::{Deserialize, Serialize};
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("clause {clause} has width {width}; the 2-SAT procedure accepts width <= 2")]
    ClauseTooWide { clause: usize, width: usize },
    #[error("formula has {num_variables} variables; brute force refuses more than {limit}")]
    TooManyVariables { num_variables: u32, limit: u32 },
}

/// Outcome status of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolveStatus {
    Sat,
    Unsat,
    /// A budget was exhausted before a decision was reached.
    Unknown,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveStatus::Sat => write!(f, "SAT"),
            SolveStatus::Unsat => write!(f, "UNSAT"),
            SolveStatus::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

/// Result of one solve: status, instrumentation counters, and a model when
/// the formula is satisfiable.
///
/// `decisions` counts free-choice variable assignments; propagated (forced)
/// assignments are never decisions. `conflicts` counts derived empty-clause
/// events. Both start at zero for every solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub decisions: u64,
    pub conflicts: u64,
    pub model: Option<Assignment>,
}

impl SolveResult {
    pub(crate) fn sat(decisions: u64, conflicts: u64, model: Assignment) -> Self {
        SolveResult {
            status: SolveStatus::Sat,
            decisions,
            conflicts,
            model: Some(model),
        }
    }

    pub(crate) fn unsat(decisions: u64, conflicts: u64) -> Self {
        SolveResult {
            status: SolveStatus::Unsat,
            decisions,
            conflicts,
            model: None,
        }
    }

    pub(crate) fn unknown(decisions: u64, conflicts: u64) -> Self {
        SolveResult {
            status: SolveStatus::Unknown,
            decisions,
            conflicts,
            model: None,
        }
    }
}

/// Optional resource limits for a solve. `None` everywhere means run to
/// completion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveBudget {
    pub max_conflicts: Option<u64>,
    pub max_decisions: Option<u64>,
    pub wall_time: Option<Duration>,
}

impl SolveBudget {
    pub const UNLIMITED: SolveBudget = SolveBudget {
        max_conflicts: None,
        max_decisions: None,
        wall_time: None,
    };

    pub fn with_max_conflicts(conflicts: u64) -> Self {
        SolveBudget {
            max_conflicts: Some(conflicts),
            ..Default::default()
        }
    }
}
