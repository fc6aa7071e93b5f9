//! Instrumented conflict-driven clause-learning solver.
//!
//! The usual ingredients, with parameters fixed for determinism at desk
//! scale (N ≤ a few hundred): unit propagation over two watched literals,
//! first-UIP clause learning with non-chronological backtracking,
//! activity-based branching with a lowest-index tie-break, and geometric
//! restarts. No preprocessing, no clause-database reduction, no proof
//! logging; unsatisfiable verdicts are cross-validated against brute-force
//! enumeration in the test suite instead.
//!
//! Counter semantics: `decisions` counts free-choice assignments only
//! (propagated literals are not decisions), `conflicts` counts derived
//! empty-clause events. Branching assigns `false` first, and variables that
//! occur in no clause keep the default polarity `false` in reported models
//! without consuming decisions.

use super::{SolveBudget, SolveResult};
use crate::cnf::{Assignment, CnfFormula};
use std::time::Instant;

const ACTIVITY_DECAY: f64 = 0.95;
const ACTIVITY_RESCALE: f64 = 1e100;
const RESTART_FIRST: u64 = 100;

/// Literal encoding: variable index v (0-based) becomes 2v for the positive
/// literal and 2v+1 for the negative one.
type Lit = u32;

fn lit(var: usize, negated: bool) -> Lit {
    (var as u32) << 1 | u32::from(negated)
}

fn lit_var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn lit_negate(l: Lit) -> Lit {
    l ^ 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Value {
    True,
    False,
    Undef,
}

#[derive(Clone, Copy)]
struct Watcher {
    clause: u32,
    /// Cached literal of the clause; if it is already true the clause is
    /// satisfied and the watch list walk can skip the clause body.
    blocker: Lit,
}

struct Searcher {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<Watcher>>,
    values: Vec<Value>,
    levels: Vec<u32>,
    reasons: Vec<Option<u32>>,
    trail: Vec<Lit>,
    trail_limits: Vec<usize>,
    propagate_head: usize,
    activity: Vec<f64>,
    activity_step: f64,
    seen: Vec<bool>,
    /// Variables that occur in at least one stored clause; only these are
    /// branch candidates.
    occurs: Vec<bool>,
    decisions: u64,
    conflicts: u64,
}

enum Verdict {
    Sat,
    Unsat,
    Unknown,
}

pub fn solve_cdcl(formula: &CnfFormula, budget: &SolveBudget) -> SolveResult {
    let mut searcher = Searcher::new(formula.num_variables() as usize);

    // Load clauses: drop tautologies, collapse duplicate literals, route
    // width-one clauses through the level-0 queue.
    let mut units: Vec<Lit> = Vec::new();
    let mut found_empty_clause = false;
    for clause in formula.clauses() {
        let mut lits: Vec<Lit> = Vec::with_capacity(clause.len());
        let mut tautology = false;
        for l in clause.iter() {
            let encoded = lit(l.var() as usize - 1, !l.is_positive());
            if lits.contains(&lit_negate(encoded)) {
                tautology = true;
                break;
            }
            if !lits.contains(&encoded) {
                lits.push(encoded);
            }
        }
        if tautology {
            continue;
        }
        match lits.len() {
            0 => found_empty_clause = true,
            1 => {
                searcher.occurs[lit_var(lits[0])] = true;
                units.push(lits[0]);
            }
            _ => {
                for &l in &lits {
                    searcher.occurs[lit_var(l)] = true;
                }
                searcher.attach(lits);
            }
        }
    }

    if found_empty_clause {
        // The empty clause is a conflict before any search happens.
        return SolveResult::unsat(0, 1);
    }
    for unit in units {
        match searcher.values[lit_var(unit)] {
            Value::Undef => searcher.assign(unit, None),
            _ if searcher.lit_value(unit) == Value::False => {
                return SolveResult::unsat(0, 1);
            }
            _ => {}
        }
    }

    let verdict = searcher.search(budget);
    match verdict {
        Verdict::Sat => {
            let model = searcher.model();
            debug_assert_eq!(formula.evaluate(&model), Ok(true));
            SolveResult::sat(searcher.decisions, searcher.conflicts, model)
        }
        Verdict::Unsat => SolveResult::unsat(searcher.decisions, searcher.conflicts),
        Verdict::Unknown => SolveResult::unknown(searcher.decisions, searcher.conflicts),
    }
}

impl Searcher {
    fn new(num_vars: usize) -> Self {
        Searcher {
            num_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            values: vec![Value::Undef; num_vars],
            levels: vec![0; num_vars],
            reasons: vec![None; num_vars],
            trail: Vec::with_capacity(num_vars),
            trail_limits: Vec::new(),
            propagate_head: 0,
            activity: vec![0.0; num_vars],
            activity_step: 1.0,
            seen: vec![false; num_vars],
            occurs: vec![false; num_vars],
            decisions: 0,
            conflicts: 0,
        }
    }

    fn attach(&mut self, lits: Vec<Lit>) -> u32 {
        debug_assert!(lits.len() >= 2);
        let idx = self.clauses.len() as u32;
        self.watches[lits[0] as usize].push(Watcher {
            clause: idx,
            blocker: lits[1],
        });
        self.watches[lits[1] as usize].push(Watcher {
            clause: idx,
            blocker: lits[0],
        });
        self.clauses.push(lits);
        idx
    }

    fn lit_value(&self, l: Lit) -> Value {
        match self.values[lit_var(l)] {
            Value::Undef => Value::Undef,
            Value::True => {
                if l & 1 == 0 {
                    Value::True
                } else {
                    Value::False
                }
            }
            Value::False => {
                if l & 1 == 0 {
                    Value::False
                } else {
                    Value::True
                }
            }
        }
    }

    fn current_level(&self) -> u32 {
        self.trail_limits.len() as u32
    }

    /// Makes `l` true at the current level.
    fn assign(&mut self, l: Lit, reason: Option<u32>) {
        debug_assert_eq!(self.lit_value(l), Value::Undef);
        let var = lit_var(l);
        self.values[var] = if l & 1 == 0 { Value::True } else { Value::False };
        self.levels[var] = self.current_level();
        self.reasons[var] = reason;
        self.trail.push(l);
    }

    /// Propagates to fixpoint; returns the conflicting clause if one arises.
    fn propagate(&mut self) -> Option<u32> {
        while self.propagate_head < self.trail.len() {
            let assigned = self.trail[self.propagate_head];
            self.propagate_head += 1;
            // Clauses watching ¬assigned just lost that watch.
            let false_lit = lit_negate(assigned);

            let mut watch_list = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut kept = 0;
            let mut conflict = None;
            'watchers: for w_idx in 0..watch_list.len() {
                let watcher = watch_list[w_idx];
                if self.lit_value(watcher.blocker) == Value::True {
                    watch_list[kept] = watcher;
                    kept += 1;
                    continue;
                }
                let clause_idx = watcher.clause as usize;
                {
                    let clause = &mut self.clauses[clause_idx];
                    if clause[0] == false_lit {
                        clause.swap(0, 1);
                    }
                }
                let first = self.clauses[clause_idx][0];
                if first != watcher.blocker && self.lit_value(first) == Value::True {
                    watch_list[kept] = Watcher {
                        clause: watcher.clause,
                        blocker: first,
                    };
                    kept += 1;
                    continue;
                }
                // Look for a replacement watch among the tail literals.
                for pos in 2..self.clauses[clause_idx].len() {
                    let candidate = self.clauses[clause_idx][pos];
                    if self.lit_value(candidate) != Value::False {
                        self.clauses[clause_idx].swap(1, pos);
                        self.watches[candidate as usize].push(Watcher {
                            clause: watcher.clause,
                            blocker: first,
                        });
                        continue 'watchers;
                    }
                }
                // No replacement: unit or conflict on `first`.
                watch_list[kept] = Watcher {
                    clause: watcher.clause,
                    blocker: first,
                };
                kept += 1;
                if self.lit_value(first) == Value::False {
                    // Conflict: keep the remaining watchers untouched.
                    for tail_idx in w_idx + 1..watch_list.len() {
                        watch_list[kept] = watch_list[tail_idx];
                        kept += 1;
                    }
                    conflict = Some(watcher.clause);
                    break;
                }
                if self.lit_value(first) == Value::Undef {
                    self.assign(first, Some(watcher.clause));
                }
            }
            watch_list.truncate(kept);
            self.watches[false_lit as usize] = watch_list;
            if conflict.is_some() {
                self.propagate_head = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, var: usize) {
        self.activity[var] += self.activity_step;
        if self.activity[var] > ACTIVITY_RESCALE {
            for a in &mut self.activity {
                *a /= ACTIVITY_RESCALE;
            }
            self.activity_step /= ACTIVITY_RESCALE;
        }
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting
    /// literal first) and the backtrack level.
    fn analyze(&mut self, conflict: u32) -> (Vec<Lit>, u32) {
        let current = self.current_level();
        let mut learned: Vec<Lit> = vec![0]; // slot 0 holds the UIP
        let mut pending = 0u32;
        let mut trail_pos = self.trail.len();
        let mut clause_idx = conflict;
        let mut resolved_lit: Option<Lit> = None;
        let mut touched: Vec<usize> = Vec::new();

        loop {
            let skip = usize::from(resolved_lit.is_some());
            let clause_len = self.clauses[clause_idx as usize].len();
            for pos in skip..clause_len {
                let q = self.clauses[clause_idx as usize][pos];
                let var = lit_var(q);
                if !self.seen[var] && self.levels[var] > 0 {
                    self.seen[var] = true;
                    touched.push(var);
                    self.bump(var);
                    if self.levels[var] == current {
                        pending += 1;
                    } else {
                        learned.push(q);
                    }
                }
            }
            // Walk the trail backwards to the next marked literal.
            loop {
                trail_pos -= 1;
                if self.seen[lit_var(self.trail[trail_pos])] {
                    break;
                }
            }
            let pivot = self.trail[trail_pos];
            self.seen[lit_var(pivot)] = false;
            pending -= 1;
            if pending == 0 {
                learned[0] = lit_negate(pivot);
                break;
            }
            clause_idx = self.reasons[lit_var(pivot)].expect("non-decision literal has a reason");
            resolved_lit = Some(pivot);
        }

        for var in touched {
            self.seen[var] = false;
        }

        let backtrack_level = if learned.len() == 1 {
            0
        } else {
            // Watch the highest-level non-UIP literal at slot 1.
            let mut best = 1;
            for i in 2..learned.len() {
                if self.levels[lit_var(learned[i])] > self.levels[lit_var(learned[best])] {
                    best = i;
                }
            }
            learned.swap(1, best);
            self.levels[lit_var(learned[1])]
        };
        (learned, backtrack_level)
    }

    fn backtrack(&mut self, level: u32) {
        if self.current_level() <= level {
            return;
        }
        let keep = self.trail_limits[level as usize];
        for &l in &self.trail[keep..] {
            self.values[lit_var(l)] = Value::Undef;
            self.reasons[lit_var(l)] = None;
        }
        self.trail.truncate(keep);
        self.trail_limits.truncate(level as usize);
        self.propagate_head = keep;
    }

    /// Unassigned occurring variable with the highest activity, lowest index
    /// winning ties.
    fn pick_branch_var(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for var in 0..self.num_vars {
            if !self.occurs[var] || self.values[var] != Value::Undef {
                continue;
            }
            match best {
                Some(b) if self.activity[var] <= self.activity[b] => {}
                _ => best = Some(var),
            }
        }
        best
    }

    fn search(&mut self, budget: &SolveBudget) -> Verdict {
        let started = Instant::now();
        let mut restart_limit = RESTART_FIRST;
        let mut conflicts_since_restart = 0u64;

        loop {
            if let Some(conflict) = self.propagate() {
                self.conflicts += 1;
                conflicts_since_restart += 1;
                if self.current_level() == 0 {
                    return Verdict::Unsat;
                }
                if budget.max_conflicts.is_some_and(|m| self.conflicts >= m)
                    || budget.wall_time.is_some_and(|t| started.elapsed() >= t)
                {
                    return Verdict::Unknown;
                }
                let (learned, backtrack_level) = self.analyze(conflict);
                self.backtrack(backtrack_level);
                let asserting = learned[0];
                if learned.len() == 1 {
                    self.assign(asserting, None);
                } else {
                    let clause_idx = self.attach(learned);
                    self.assign(asserting, Some(clause_idx));
                }
                self.activity_step /= ACTIVITY_DECAY;
            } else {
                if conflicts_since_restart >= restart_limit {
                    conflicts_since_restart = 0;
                    restart_limit += restart_limit / 2;
                    self.backtrack(0);
                    continue;
                }
                let Some(var) = self.pick_branch_var() else {
                    return Verdict::Sat;
                };
                if budget.max_decisions.is_some_and(|m| self.decisions >= m) {
                    return Verdict::Unknown;
                }
                self.decisions += 1;
                self.trail_limits.push(self.trail.len());
                self.assign(lit(var, true), None); // polarity false first
            }
        }
    }

    fn model(&self) -> Assignment {
        Assignment::new(
            (0..self.num_vars)
                .map(|v| self.values[v] == Value::True)
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{brute_force, SolveStatus};
    use crate::testutil::{complete_formula, formula};

    #[test]
    fn complementary_units_refuted_by_propagation_alone() {
        let f = formula(1, &[&[1], &[-1]]);
        let result = solve_cdcl(&f, &SolveBudget::UNLIMITED);
        assert_eq!(result.status, SolveStatus::Unsat);
        assert_eq!(result.decisions, 0);
        assert!(result.conflicts >= 1);
    }

    #[test]
    fn empty_formula_sat_all_false_without_decisions() {
        let f = CnfFormula::empty(4);
        let result = solve_cdcl(&f, &SolveBudget::UNLIMITED);
        assert_eq!(result.status, SolveStatus::Sat);
        assert_eq!(result.decisions, 0);
        assert_eq!(result.conflicts, 0);
        assert_eq!(result.model.unwrap().values(), &[false; 4]);
    }

    #[test]
    fn empty_clause_is_immediate_conflict() {
        let f = CnfFormula::new(2, vec![crate::cnf::Clause::new(vec![])]).unwrap();
        let result = solve_cdcl(&f, &SolveBudget::UNLIMITED);
        assert_eq!(result.status, SolveStatus::Unsat);
        assert_eq!(result.conflicts, 1);
    }

    #[test]
    fn complete_formula_unsat() {
        let result = solve_cdcl(&complete_formula(3), &SolveBudget::UNLIMITED);
        assert_eq!(result.status, SolveStatus::Unsat);
    }

    #[test]
    fn tautological_clauses_are_ignored() {
        let f = formula(2, &[&[1, -1], &[2, 2]]);
        let result = solve_cdcl(&f, &SolveBudget::UNLIMITED);
        assert_eq!(result.status, SolveStatus::Sat);
        let model = result.model.unwrap();
        assert_eq!(model.value(2), Some(true));
        assert_eq!(model.value(1), Some(false)); // only a tautology mentions x1
    }

    #[test]
    fn sat_models_satisfy_formula() {
        let f = formula(3, &[&[1, 2, 3], &[-1, 2, -3], &[1, -2, 3], &[-1, -2, -3]]);
        let result = solve_cdcl(&f, &SolveBudget::UNLIMITED);
        assert_eq!(result.status, SolveStatus::Sat);
        assert_eq!(f.evaluate(&result.model.unwrap()), Ok(true));
    }

    #[test]
    fn deterministic_across_runs() {
        let f = formula(
            4,
            &[&[1, 2, 3], &[-1, -2, 4], &[2, -3, -4], &[-2, 3, 4], &[1, -3, 4]],
        );
        let a = solve_cdcl(&f, &SolveBudget::UNLIMITED);
        let b = solve_cdcl(&f, &SolveBudget::UNLIMITED);
        assert_eq!(a, b);
    }

    #[test]
    fn conflict_budget_yields_unknown_with_partial_counters() {
        // An unsatisfiable formula large enough to need at least one conflict.
        let f = complete_formula(4);
        let result = solve_cdcl(&f, &SolveBudget::with_max_conflicts(1));
        assert_eq!(result.status, SolveStatus::Unknown);
        assert_eq!(result.conflicts, 1);
        assert!(result.model.is_none());
    }

    #[test]
    fn agrees_with_brute_force_on_small_mixed_cases() {
        let cases = [
            formula(3, &[&[1, 2, 3]]),
            formula(3, &[&[1, 2], &[-1, -2], &[3, 3, 3]]),
            formula(4, &[&[1, 2, -3], &[-1, 3, 4], &[2, -4, 1], &[-2, -3, -4]]),
            complete_formula(3),
            complete_formula(4),
        ];
        for f in cases {
            let expected = brute_force(&f).unwrap().status;
            assert_eq!(solve_cdcl(&f, &SolveBudget::UNLIMITED).status, expected);
        }
    }
}
