//! CNF formulas, assignments, and clause evaluation.
//!
//! Every other module works on [`CnfFormula`]: the solvers decide it, the
//! generator samples it, the pairing machinery edits it, and the reductions
//! translate it. Values are immutable after construction and safe to share
//! across threads.

use thiserror::Error;

/// Errors from constructing or evaluating CNF values.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("variable index 0 is not a valid DIMACS variable")]
    ZeroVariable,
    #[error("literal references variable {var} but the formula declares only {max} variables")]
    VariableOutOfRange { var: u32, max: u32 },
    #[error("assignment covers {got} variables but the formula has {expected}")]
    IncompleteAssignment { got: u32, expected: u32 },
    #[error("clause density is undefined for a formula with zero variables")]
    ZeroVariableDensity,
}

/// A variable occurrence with a polarity. Variables are 1-indexed to match
/// DIMACS; external indices never shift even when internal structures remap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    var: u32,
    positive: bool,
}

impl Literal {
    /// Builds a literal over variable `var` (must be >= 1).
    pub fn new(var: u32, positive: bool) -> Result<Self, CnfError> {
        if var == 0 {
            return Err(CnfError::ZeroVariable);
        }
        Ok(Literal { var, positive })
    }

    /// Positive literal `x_var`.
    pub fn positive(var: u32) -> Result<Self, CnfError> {
        Self::new(var, true)
    }

    /// Negative literal `¬x_var`.
    pub fn negative(var: u32) -> Result<Self, CnfError> {
        Self::new(var, false)
    }

    /// Decodes a signed DIMACS literal (`3` -> x3, `-3` -> ¬x3).
    pub fn from_dimacs(code: i32) -> Result<Self, CnfError> {
        if code == 0 {
            return Err(CnfError::ZeroVariable);
        }
        Ok(Literal {
            var: code.unsigned_abs(),
            positive: code > 0,
        })
    }

    /// Encodes as a signed DIMACS literal.
    pub fn to_dimacs(self) -> i32 {
        let v = self.var as i32;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    /// The same variable with the opposite polarity.
    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// True iff the literal is satisfied when its variable has `value`.
    pub fn satisfied_by(self, value: bool) -> bool {
        self.positive == value
    }
}

impl std::fmt::Display for Literal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals. Literal order is preserved verbatim so that
/// positional edits (see the pairing module) refer to stable locations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Literal> {
        self.literals.iter()
    }

    /// True iff some literal is satisfied under `assignment`.
    pub fn satisfied_by(&self, assignment: &Assignment) -> bool {
        self.literals
            .iter()
            .any(|lit| assignment.value(lit.var()).is_some_and(|v| lit.satisfied_by(v)))
    }
}

impl FromIterator<Literal> for Clause {
    fn from_iter<T: IntoIterator<Item = Literal>>(iter: T) -> Self {
        Clause::new(iter.into_iter().collect())
    }
}

/// A CNF formula over variables `1..=num_variables`.
///
/// The clause count `L` and variable count `N` determine the clause density
/// `α = L/N`; it is derived on demand, never stored. Duplicate clauses are
/// representable and preserved (the random instance model can produce them).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_variables: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    /// Builds a formula, checking that every literal stays within
    /// `1..=num_variables`.
    pub fn new(num_variables: u32, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        for clause in &clauses {
            for lit in clause.iter() {
                if lit.var() > num_variables {
                    return Err(CnfError::VariableOutOfRange {
                        var: lit.var(),
                        max: num_variables,
                    });
                }
            }
        }
        Ok(CnfFormula {
            num_variables,
            clauses,
        })
    }

    /// A formula with no clauses (the empty conjunction, trivially true).
    pub fn empty(num_variables: u32) -> Self {
        CnfFormula {
            num_variables,
            clauses: Vec::new(),
        }
    }

    pub fn num_variables(&self) -> u32 {
        self.num_variables
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Width of the widest clause, or 0 for the empty formula.
    pub fn max_clause_width(&self) -> usize {
        self.clauses.iter().map(Clause::len).max().unwrap_or(0)
    }

    /// Clause density `α = L/N`.
    pub fn clause_density(&self) -> Result<f64, CnfError> {
        if self.num_variables == 0 {
            return Err(CnfError::ZeroVariableDensity);
        }
        Ok(self.clauses.len() as f64 / f64::from(self.num_variables))
    }

    /// True iff every clause contains at least one satisfied literal.
    ///
    /// The assignment must be total over the formula's variables; a partial
    /// assignment is a domain error, not a `false`.
    pub fn evaluate(&self, assignment: &Assignment) -> Result<bool, CnfError> {
        if assignment.num_variables() < self.num_variables {
            return Err(CnfError::IncompleteAssignment {
                got: assignment.num_variables(),
                expected: self.num_variables,
            });
        }
        Ok(self.clauses.iter().all(|c| c.satisfied_by(assignment)))
    }
}

/// A total map from variables `1..=N` to booleans.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    /// `values[i]` is the value of variable `i + 1`.
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// All variables false; the deterministic default polarity.
    pub fn all_false(num_variables: u32) -> Self {
        Assignment {
            values: vec![false; num_variables as usize],
        }
    }

    pub fn num_variables(&self) -> u32 {
        self.values.len() as u32
    }

    /// Value of `var`, or `None` if the variable is outside the domain.
    pub fn value(&self, var: u32) -> Option<bool> {
        if var == 0 {
            return None;
        }
        self.values.get(var as usize - 1).copied()
    }

    pub fn set(&mut self, var: u32, value: bool) {
        assert!(var >= 1 && var as usize <= self.values.len());
        self.values[var as usize - 1] = value;
    }

    /// `(variable, value)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u32 + 1, v))
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(code: i32) -> Literal {
        Literal::from_dimacs(code).unwrap()
    }

    fn formula(n: u32, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(
            n,
            clauses
                .iter()
                .map(|c| c.iter().map(|&l| lit(l)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn literal_rejects_zero_variable() {
        assert_eq!(Literal::new(0, true), Err(CnfError::ZeroVariable));
        assert_eq!(Literal::from_dimacs(0), Err(CnfError::ZeroVariable));
    }

    #[test]
    fn formula_rejects_out_of_range_literal() {
        let err = CnfFormula::new(2, vec![Clause::new(vec![lit(3)])]).unwrap_err();
        assert_eq!(err, CnfError::VariableOutOfRange { var: 3, max: 2 });
    }

    #[test]
    fn evaluate_single_clause() {
        // (x1 ∨ ¬x2) under {x1: T, x2: T}
        let f = formula(2, &[&[1, -2]]);
        let sigma = Assignment::new(vec![true, true]);
        assert!(f.evaluate(&sigma).unwrap());
    }

    #[test]
    fn evaluate_empty_conjunction_is_true() {
        let f = CnfFormula::empty(3);
        assert!(f.evaluate(&Assignment::all_false(3)).unwrap());
    }

    #[test]
    fn evaluate_complementary_units_is_false() {
        let f = formula(1, &[&[1], &[-1]]);
        for value in [false, true] {
            assert!(!f.evaluate(&Assignment::new(vec![value])).unwrap());
        }
    }

    #[test]
    fn evaluate_requires_total_assignment() {
        let f = formula(2, &[&[1, 2]]);
        let err = f.evaluate(&Assignment::new(vec![true])).unwrap_err();
        assert_eq!(err, CnfError::IncompleteAssignment { got: 1, expected: 2 });
    }

    #[test]
    fn density_matches_ratio() {
        let f = formula(2, &[&[1, -2], &[1, 2], &[-1, 2], &[-1, -2]]);
        assert_eq!(f.clause_density().unwrap(), 2.0);
        assert_eq!(
            CnfFormula::empty(0).clause_density(),
            Err(CnfError::ZeroVariableDensity)
        );
    }

    #[test]
    fn density_examples() {
        let clauses: Vec<Clause> = (0..300).map(|_| Clause::new(vec![lit(1)])).collect();
        let f = CnfFormula::new(75, clauses).unwrap();
        assert_eq!(f.clause_density().unwrap(), 4.0);

        let clauses: Vec<Clause> = (0..319).map(|_| Clause::new(vec![lit(1)])).collect();
        let f = CnfFormula::new(75, clauses).unwrap();
        let density = f.clause_density().unwrap();
        assert!((density - 319.0 / 75.0).abs() < 1e-15);
        assert!((density - 4.2533).abs() < 1e-3);
    }

    #[test]
    fn evaluate_monotone_under_clause_deletion() {
        // If σ satisfies f, it satisfies f minus any clause.
        let f = formula(3, &[&[1, 2], &[-1, 3], &[2, -3]]);
        let sigma = Assignment::new(vec![true, true, true]);
        assert!(f.evaluate(&sigma).unwrap());
        for skip in 0..f.num_clauses() {
            let reduced = CnfFormula::new(
                3,
                f.clauses()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, c)| c.clone())
                    .collect(),
            )
            .unwrap();
            assert!(reduced.evaluate(&sigma).unwrap());
        }
    }
}
