//! The textbook 3-CNF → Vertex Cover gadget.
//!
//! Per variable x_i: two adjacent vertices for the positive and negative
//! literals. Per clause C_j: a triangle whose corners attach to the gadget
//! vertices of the clause's literals. With n variables and m width-3
//! clauses the instance has 2n + 3m vertices, n + 6m edges, and cover
//! budget k = n + 2m; a cover within budget exists iff the formula is
//! satisfiable.

use super::{pad_to_width3, ReductionError};
use crate::cnf::{Assignment, CnfFormula};
use serde::{Deserialize, Serialize};

/// Brute force refuses instances with more vertices than this unless the
/// caller raises the limit explicitly.
pub const DEFAULT_VERTEX_COVER_LIMIT: usize = 30;

/// Provenance of a vertex in the reduced graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gadget", rename_all = "kebab-case")]
pub enum VertexLabel {
    /// Literal gadget vertex for `var` at the given polarity.
    Literal { var: u32, positive: bool },
    /// Corner `position` (0..3) of the triangle for clause `clause`.
    Clause { clause: usize, position: usize },
}

/// A Vertex Cover decision instance: is there a cover of size ≤ `k`?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCoverInstance {
    pub vertices: Vec<VertexLabel>,
    /// Unordered vertex pairs; no self-loops.
    pub edges: Vec<(usize, usize)>,
    /// Cover budget.
    pub k: usize,
}

impl VertexCoverInstance {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }
}

// Deterministic layout: literal-gadget vertices first (positive then
// negative per variable), then clause triangles in clause order.
fn literal_vertex(var: u32, positive: bool) -> usize {
    2 * (var as usize - 1) + usize::from(!positive)
}

fn triangle_vertex(n: usize, clause: usize, position: usize) -> usize {
    2 * n + 3 * clause + position
}

/// Reduces a (width ≤ 3, padded to 3) formula to Vertex Cover.
pub fn to_vertex_cover(formula: &CnfFormula) -> Result<VertexCoverInstance, ReductionError> {
    let clauses = pad_to_width3(formula)?;
    let n = formula.num_variables() as usize;
    let m = clauses.len();

    let mut vertices = Vec::with_capacity(2 * n + 3 * m);
    for var in 1..=formula.num_variables() {
        vertices.push(VertexLabel::Literal { var, positive: true });
        vertices.push(VertexLabel::Literal { var, positive: false });
    }
    for (j, _) in clauses.iter().enumerate() {
        for position in 0..3 {
            vertices.push(VertexLabel::Clause { clause: j, position });
        }
    }

    let mut edges = Vec::with_capacity(n + 6 * m);
    for var in 1..=formula.num_variables() {
        edges.push((literal_vertex(var, true), literal_vertex(var, false)));
    }
    for (j, clause) in clauses.iter().enumerate() {
        let corners = [
            triangle_vertex(n, j, 0),
            triangle_vertex(n, j, 1),
            triangle_vertex(n, j, 2),
        ];
        edges.push((corners[0], corners[1]));
        edges.push((corners[1], corners[2]));
        edges.push((corners[0], corners[2]));
        for (position, lit) in clause.iter().enumerate() {
            edges.push((corners[position], literal_vertex(lit.var(), lit.is_positive())));
        }
    }

    Ok(VertexCoverInstance {
        vertices,
        edges,
        k: n + 2 * m,
    })
}

/// True iff `cover` has at most `k` distinct vertices and touches every edge.
/// Referencing a vertex outside the instance is a domain error, distinct
/// from an invalid cover.
pub fn check_cover(instance: &VertexCoverInstance, cover: &[usize]) -> Result<bool, ReductionError> {
    let num_vertices = instance.vertices.len();
    let mut in_cover = vec![false; num_vertices];
    let mut size = 0usize;
    for &v in cover {
        if v >= num_vertices {
            return Err(ReductionError::UnknownVertex {
                vertex: v,
                num_vertices,
            });
        }
        if !in_cover[v] {
            in_cover[v] = true;
            size += 1;
        }
    }
    if size > instance.k {
        return Ok(false);
    }
    Ok(instance.edges.iter().all(|&(u, v)| in_cover[u] || in_cover[v]))
}

/// Exact decision by branching on uncovered edges with budget pruning.
pub fn vc_brute_force(instance: &VertexCoverInstance) -> Result<bool, ReductionError> {
    vc_brute_force_with_limit(instance, DEFAULT_VERTEX_COVER_LIMIT)
}

/// [`vc_brute_force`] with an explicit vertex-count ceiling.
pub fn vc_brute_force_with_limit(
    instance: &VertexCoverInstance,
    limit: usize,
) -> Result<bool, ReductionError> {
    if instance.vertices.len() > limit {
        return Err(ReductionError::TooLarge {
            size: instance.vertices.len(),
            limit,
            unit: "vertices",
        });
    }
    for &(u, v) in &instance.edges {
        let num_vertices = instance.vertices.len();
        for vertex in [u, v] {
            if vertex >= num_vertices {
                return Err(ReductionError::UnknownVertex {
                    vertex,
                    num_vertices,
                });
            }
        }
    }
    let mut chosen = vec![false; instance.vertices.len()];
    Ok(cover_exists(&instance.edges, &mut chosen, instance.k))
}

fn cover_exists(edges: &[(usize, usize)], chosen: &mut [bool], budget: usize) -> bool {
    // Pick the first uncovered edge; one of its endpoints must be in any
    // cover, so branch on both.
    let Some(&(u, v)) = edges.iter().find(|&&(u, v)| !chosen[u] && !chosen[v]) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    for pick in [u, v] {
        chosen[pick] = true;
        if cover_exists(edges, chosen, budget - 1) {
            chosen[pick] = false;
            return true;
        }
        chosen[pick] = false;
    }
    false
}

/// Builds the canonical size-k cover from a satisfying assignment: per
/// variable, the gadget vertex of the true literal; per triangle, the two
/// corners whose slots σ does not satisfy.
pub fn cover_from_assignment(
    formula: &CnfFormula,
    sigma: &Assignment,
) -> Result<Vec<usize>, ReductionError> {
    let clauses = pad_to_width3(formula)?;
    let n = formula.num_variables() as usize;
    let mut cover = Vec::with_capacity(n + 2 * clauses.len());
    for var in 1..=formula.num_variables() {
        let value = sigma.value(var).ok_or(crate::cnf::CnfError::IncompleteAssignment {
            got: sigma.num_variables(),
            expected: formula.num_variables(),
        })?;
        cover.push(literal_vertex(var, value));
    }
    for (j, clause) in clauses.iter().enumerate() {
        let satisfied_slot = clause
            .iter()
            .position(|lit| sigma.value(lit.var()).is_some_and(|v| lit.satisfied_by(v)))
            .ok_or(ReductionError::UnsatisfiedClause { clause: j })?;
        for position in 0..3 {
            if position != satisfied_slot {
                cover.push(triangle_vertex(n, j, position));
            }
        }
    }
    Ok(cover)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{brute_force, SolveStatus};
    use crate::testutil::{complete_formula, formula};

    #[test]
    fn single_clause_layout_and_cover() {
        // (x1 ∨ x2 ∨ x3): 9 vertices, 9 edges, k = 5.
        let f = formula(3, &[&[1, 2, 3]]);
        let instance = to_vertex_cover(&f).unwrap();
        assert_eq!(instance.vertices.len(), 9);
        assert_eq!(instance.edges.len(), 9);
        assert_eq!(instance.k, 5);
        assert!(vc_brute_force(&instance).unwrap());

        // Explicit size-5 cover: x1's positive gadget vertex, the negative
        // vertices of x2/x3, and the two triangle corners away from the
        // x1 slot.
        let cover = [
            literal_vertex(1, true),
            literal_vertex(2, false),
            literal_vertex(3, false),
            triangle_vertex(3, 0, 1),
            triangle_vertex(3, 0, 2),
        ];
        assert!(check_cover(&instance, &cover).unwrap());
    }

    #[test]
    fn complete_formula_has_no_cover_within_budget() {
        let f = complete_formula(3);
        let instance = to_vertex_cover(&f).unwrap();
        assert_eq!(instance.k, 3 + 2 * 8);
        assert_eq!(instance.vertices.len(), 2 * 3 + 3 * 8);
        assert!(!vc_brute_force(&instance).unwrap());
    }

    #[test]
    fn empty_formula_reduces_to_variable_edges_only() {
        let f = CnfFormula::empty(2);
        let instance = to_vertex_cover(&f).unwrap();
        assert_eq!(instance.vertices.len(), 4);
        assert_eq!(instance.edges.len(), 2);
        assert_eq!(instance.k, 2);
        assert!(check_cover(&instance, &[0, 2]).unwrap());
        assert!(vc_brute_force(&instance).unwrap());
    }

    #[test]
    fn check_cover_edge_cases() {
        let f = formula(3, &[&[1, 2, 3]]);
        let instance = to_vertex_cover(&f).unwrap();
        // Empty cover fails on any instance with an edge.
        assert!(!check_cover(&instance, &[]).unwrap());
        // All vertices cover everything but blow the budget.
        let all: Vec<usize> = (0..instance.vertices.len()).collect();
        assert!(!check_cover(&instance, &all).unwrap());
        // Unknown vertex is a domain error, not "invalid".
        assert!(matches!(
            check_cover(&instance, &[99]),
            Err(ReductionError::UnknownVertex { vertex: 99, .. })
        ));
        // Duplicates count once toward the budget.
        let cover = cover_from_assignment(&f, &crate::cnf::Assignment::new(vec![true, false, false]))
            .unwrap();
        let mut duplicated = cover.clone();
        duplicated.extend_from_slice(&cover);
        assert!(check_cover(&instance, &duplicated).unwrap());
    }

    #[test]
    fn triangle_graph_needs_two_vertices() {
        let triangle = VertexCoverInstance {
            vertices: vec![
                VertexLabel::Clause { clause: 0, position: 0 },
                VertexLabel::Clause { clause: 0, position: 1 },
                VertexLabel::Clause { clause: 0, position: 2 },
            ],
            edges: vec![(0, 1), (1, 2), (0, 2)],
            k: 1,
        };
        assert!(!vc_brute_force(&triangle).unwrap());
        let mut relaxed = triangle.clone();
        relaxed.k = 2;
        assert!(vc_brute_force(&relaxed).unwrap());
    }

    #[test]
    fn brute_force_refuses_oversized_instances() {
        let f = complete_formula(3); // 30 vertices: right at the default limit
        let instance = to_vertex_cover(&f).unwrap();
        assert!(vc_brute_force(&instance).is_ok());
        assert!(matches!(
            vc_brute_force_with_limit(&instance, 29),
            Err(ReductionError::TooLarge { size: 30, limit: 29, .. })
        ));
    }

    #[test]
    fn width_two_clauses_pad_into_correct_gadgets() {
        let f = formula(2, &[&[1, 2], &[-1, -2]]);
        let instance = to_vertex_cover(&f).unwrap();
        assert_eq!(instance.vertices.len(), 2 * 2 + 3 * 2);
        assert_eq!(instance.k, 2 + 2 * 2);
        assert_eq!(
            vc_brute_force(&instance).unwrap(),
            brute_force(&f).unwrap().status == SolveStatus::Sat
        );
    }

    #[test]
    fn witness_from_assignment_passes_checker() {
        let f = formula(3, &[&[1, 2, 3], &[-1, 2, -3]]);
        let result = brute_force(&f).unwrap();
        let sigma = result.model.unwrap();
        let instance = to_vertex_cover(&f).unwrap();
        let cover = cover_from_assignment(&f, &sigma).unwrap();
        assert_eq!(cover.len(), instance.k);
        assert!(check_cover(&instance, &cover).unwrap());
    }
}
