//! Exhaustive assignment enumeration for small formulas.

use super::{SolveResult, SolverError};
use crate::cnf::{Assignment, CnfFormula};

/// Enumeration is refused above this variable count unless a caller opts in
/// through [`brute_force_with_limit`].
pub const DEFAULT_BRUTE_FORCE_LIMIT: u32 = 20;

/// Decides satisfiability by trying every assignment in a fixed order.
///
/// Assignment `k` maps bit `i` of `k` to variable `i + 1`, counting upward
/// from the all-false assignment, so the first model found is the
/// lexicographically smallest in that ordering. Decision and conflict
/// counters are reported as 0; they are not meaningful for enumeration.
pub fn brute_force(formula: &CnfFormula) -> Result<SolveResult, SolverError> {
    brute_force_with_limit(formula, DEFAULT_BRUTE_FORCE_LIMIT)
}

/// [`brute_force`] with an explicit variable-count ceiling.
pub fn brute_force_with_limit(
    formula: &CnfFormula,
    max_variables: u32,
) -> Result<SolveResult, SolverError> {
    let n = formula.num_variables();
    if n > max_variables {
        return Err(SolverError::TooManyVariables {
            num_variables: n,
            limit: max_variables,
        });
    }

    'assignments: for bits in 0u64..(1u64 << n) {
        for clause in formula.clauses() {
            let satisfied = clause
                .iter()
                .any(|lit| lit.satisfied_by((bits >> (lit.var() - 1)) & 1 == 1));
            if !satisfied {
                continue 'assignments;
            }
        }
        let model = Assignment::new((0..n).map(|i| (bits >> i) & 1 == 1).collect());
        debug_assert_eq!(formula.evaluate(&model), Ok(true));
        return Ok(SolveResult::sat(0, 0, model));
    }
    Ok(SolveResult::unsat(0, 0))
}
