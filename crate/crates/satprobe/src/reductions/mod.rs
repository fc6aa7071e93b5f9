//! Label-preserving translations from 3-CNF to Vertex Cover and to a
//! discrete rod/token packing formulation, with witness validators and
//! small-instance brute-force oracles.
//!
//! Both reductions require width-3 clauses. Narrower clauses (width 1 or 2,
//! as produced by 2-SAT pair sets) are padded by duplicating the first
//! literal; the duplicated-literal gadgets remain correct. Label
//! preservation — formula satisfiable iff the reduced instance is feasible —
//! is enforced by dual-oracle tests against CNF brute force rather than
//! trusted.

mod packing;
mod vertex_cover;

pub use packing::{
    check_packing, packing_brute_force, packing_brute_force_with_limits, packing_witness_from_assignment,
    to_packing, PackingInstance, PackingToken, PackingWitness, Rod, TokenPlacement,
    DEFAULT_PACKING_TOKEN_LIMIT, DEFAULT_PACKING_VARIABLE_LIMIT,
};
pub use vertex_cover::{
    check_cover, cover_from_assignment, to_vertex_cover, vc_brute_force, vc_brute_force_with_limit,
    VertexCoverInstance, VertexLabel, DEFAULT_VERTEX_COVER_LIMIT,
};

use crate::cnf::{Clause, CnfFormula};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("clause {clause} has width {width}; reductions accept width 1..=3")]
    ClauseTooWide { clause: usize, width: usize },
    #[error("clause {clause} is empty and cannot be padded")]
    EmptyClause { clause: usize },
    #[error("instance has {size} {unit}; brute force refuses more than {limit}")]
    TooLarge {
        size: usize,
        limit: usize,
        unit: &'static str,
    },
    #[error("cover references vertex {vertex} but the instance has {num_vertices}")]
    UnknownVertex { vertex: usize, num_vertices: usize },
    #[error("witness references rod {rod} but the instance has {num_rods}")]
    UnknownRod { rod: usize, num_rods: usize },
    #[error("witness references token {token} but the instance has {num_tokens}")]
    UnknownToken { token: usize, num_tokens: usize },
    #[error("malformed packing instance: {reason}")]
    MalformedInstance { reason: String },
    #[error("assignment does not satisfy clause {clause}; no witness can be built")]
    UnsatisfiedClause { clause: usize },
    #[error(transparent)]
    Cnf(#[from] crate::cnf::CnfError),
}

/// Pads every clause to width 3 by duplicating its first literal.
pub(crate) fn pad_to_width3(formula: &CnfFormula) -> Result<Vec<Clause>, ReductionError> {
    formula
        .clauses()
        .iter()
        .enumerate()
        .map(|(i, clause)| {
            if clause.is_empty() {
                return Err(ReductionError::EmptyClause { clause: i });
            }
            if clause.len() > 3 {
                return Err(ReductionError::ClauseTooWide {
                    clause: i,
                    width: clause.len(),
                });
            }
            let mut lits = clause.literals().to_vec();
            while lits.len() < 3 {
                lits.insert(0, lits[0]);
            }
            Ok(Clause::new(lits))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::formula;

    #[test]
    fn padding_duplicates_first_literal() {
        let f = formula(3, &[&[1], &[2, -3], &[1, 2, 3]]);
        let padded = pad_to_width3(&f).unwrap();
        let codes: Vec<Vec<i32>> = padded
            .iter()
            .map(|c| c.iter().map(|l| l.to_dimacs()).collect())
            .collect();
        assert_eq!(codes, vec![vec![1, 1, 1], vec![2, 2, -3], vec![1, 2, 3]]);
    }

    #[test]
    fn padding_rejects_wide_and_empty_clauses() {
        let wide = formula(4, &[&[1, 2, 3, 4]]);
        assert_eq!(
            pad_to_width3(&wide).unwrap_err(),
            ReductionError::ClauseTooWide { clause: 0, width: 4 }
        );
        let empty = CnfFormula::new(1, vec![Clause::new(vec![])]).unwrap();
        assert_eq!(
            pad_to_width3(&empty).unwrap_err(),
            ReductionError::EmptyClause { clause: 0 }
        );
    }
}
