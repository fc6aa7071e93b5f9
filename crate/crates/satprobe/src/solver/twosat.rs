//! Linear-time 2-SAT via implication graph and strongly connected components.
//!
//! Each clause (a ∨ b) contributes the implications ¬a → b and ¬b → a;
//! width-1 clauses are treated as (ℓ ∨ ℓ). The formula is unsatisfiable iff
//! some variable shares a strongly connected component with its negation.
//! When satisfiable, a model is read off the condensation in reverse
//! topological order.

use super::{SolveResult, SolverError};
use crate::cnf::{Assignment, CnfFormula, Literal};

// Literal node ids: variable v (1-based) has its positive literal at
// 2(v-1) and its negative literal at 2(v-1)+1.
fn node(lit: Literal) -> usize {
    2 * (lit.var() as usize - 1) + usize::from(!lit.is_positive())
}

const UNSET: usize = usize::MAX;

/// Decides a formula of width ≤ 2.
///
/// Decision and conflict counters are reported as 0; the implication-graph
/// procedure neither branches nor backtracks.
pub fn solve_2sat(formula: &CnfFormula) -> Result<SolveResult, SolverError> {
    for (i, clause) in formula.clauses().iter().enumerate() {
        if clause.len() > 2 {
            return Err(SolverError::ClauseTooWide {
                clause: i,
                width: clause.len(),
            });
        }
        if clause.is_empty() {
            // An empty clause is an unsatisfiable conjunct.
            return Ok(SolveResult::unsat(0, 0));
        }
    }

    let n = formula.num_variables() as usize;
    let components = scc_of(formula);
    for v in 0..n {
        if components[2 * v] == components[2 * v + 1] {
            return Ok(SolveResult::unsat(0, 0));
        }
    }

    // Tarjan indices run in reverse topological order (index 0 is a sink of
    // the condensation), so x is true iff comp(x) precedes comp(¬x).
    let model = Assignment::new(
        (0..n)
            .map(|v| components[2 * v] < components[2 * v + 1])
            .collect(),
    );
    debug_assert_eq!(formula.evaluate(&model), Ok(true));
    Ok(SolveResult::sat(0, 0, model))
}

/// Strongly connected component index for every literal node; node `2(v-1)`
/// is the positive literal of variable `v` and `2(v-1)+1` its negation.
///
/// Exposed so tests can assert the SCC criterion directly against
/// [`solve_2sat`]'s verdicts.
pub fn implication_components(formula: &CnfFormula) -> Result<Vec<usize>, SolverError> {
    for (i, clause) in formula.clauses().iter().enumerate() {
        if clause.len() > 2 {
            return Err(SolverError::ClauseTooWide {
                clause: i,
                width: clause.len(),
            });
        }
    }
    Ok(scc_of(formula))
}

fn scc_of(formula: &CnfFormula) -> Vec<usize> {
    let n = formula.num_variables() as usize;
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    for clause in formula.clauses() {
        let lits = clause.literals();
        let (a, b) = match lits.len() {
            1 => (lits[0], lits[0]),
            2 => (lits[0], lits[1]),
            _ => continue,
        };
        adjacency[node(a.negated())].push(node(b));
        adjacency[node(b.negated())].push(node(a));
    }

    // Iterative Tarjan. Negative-literal nodes are rooted first so that a
    // fully unconstrained variable ends up false in the model (its negation
    // then gets the smaller component index).
    let order = (0..n).flat_map(|v| [2 * v + 1, 2 * v]);

    let mut component = vec![UNSET; 2 * n];
    let mut index = vec![UNSET; 2 * n];
    let mut low = vec![0usize; 2 * n];
    let mut next_index = 0;
    let mut next_component = 0;
    let mut path: Vec<usize> = Vec::new();
    // (node, next child position) frames of the explicit DFS stack.
    let mut stack: Vec<(usize, usize)> = Vec::new();

    for root in order {
        if index[root] != UNSET {
            continue;
        }
        stack.push((root, 0));
        while let Some(&mut (u, ref mut child)) = stack.last_mut() {
            if *child == 0 {
                index[u] = next_index;
                low[u] = next_index;
                next_index += 1;
                path.push(u);
            }
            if let Some(&v) = adjacency[u].get(*child) {
                *child += 1;
                if index[v] == UNSET {
                    stack.push((v, 0));
                } else if component[v] == UNSET {
                    low[u] = low[u].min(index[v]);
                }
            } else {
                if low[u] == index[u] {
                    loop {
                        let w = path.pop().expect("path stack underflow");
                        component[w] = next_component;
                        if w == u {
                            break;
                        }
                    }
                    next_component += 1;
                }
                stack.pop();
                if let Some(&mut (parent, _)) = stack.last_mut() {
                    low[parent] = low[parent].min(low[u]);
                }
            }
        }
    }
    component
}
