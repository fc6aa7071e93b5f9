//! Helpers shared by unit tests across modules. Test builds only.

use crate::cnf::{Clause, CnfFormula, Literal};

/// Formula from DIMACS-signed literal slices.
pub(crate) fn formula(n: u32, clauses: &[&[i32]]) -> CnfFormula {
    CnfFormula::new(
        n,
        clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&l| Literal::from_dimacs(l).unwrap())
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

/// All 2^k polarity patterns over x1..xk: unsatisfiable, since every
/// assignment falsifies its complementary clause.
pub(crate) fn complete_formula(k: u32) -> CnfFormula {
    let clauses = (0u32..(1 << k))
        .map(|bits| {
            (1..=k)
                .map(|v| Literal::new(v, (bits >> (v - 1)) & 1 == 1).unwrap())
                .collect::<Clause>()
        })
        .collect();
    CnfFormula::new(k, clauses).unwrap()
}
