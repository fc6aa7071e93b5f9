//! 3-CNF as a discrete rod/token packing problem.
//!
//! Each variable owns two rods on an integer grid, one per polarity. Both
//! rods of a variable contain a shared base cell, so a disjoint selection
//! can keep at most one of them — the selection IS a truth assignment. Each
//! clause contributes one token that may only sit in a slot of a rod
//! belonging to one of its three literals. Rod capacity equals the clause
//! count and therefore never binds: the instance is feasible exactly when
//! every clause token has a selected rod to land on, i.e. when the formula
//! is satisfiable.
//!
//! Grid layout for variable i (1-based) with m clauses: the true rod covers
//! (i-1, 0, 0..=m) and the false rod covers (i-1, 0, 0) plus (i-1, 1, 1..=m).
//! Slot s of a rod is its cell at z = s. Coordinates are a deterministic
//! decoration for serialization; feasibility depends only on the
//! selection/placement relations.

use super::{pad_to_width3, ReductionError};
use crate::cnf::{Assignment, CnfFormula};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

pub const DEFAULT_PACKING_VARIABLE_LIMIT: usize = 20;
pub const DEFAULT_PACKING_TOKEN_LIMIT: usize = 32;

/// A rod: a set of grid cells plus a number of placement slots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rod {
    pub cells: Vec<[i64; 3]>,
    pub capacity: usize,
}

/// A clause token; it may only be placed on rods in `allowed_rods`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingToken {
    pub allowed_rods: Vec<usize>,
}

/// The packing decision instance: can one rod per variable be selected with
/// disjoint footprints such that every token fits in a free slot of a
/// selected, allowed rod?
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingInstance {
    pub num_variables: u32,
    /// Rod `2(i-1)` is variable i's true rod, `2(i-1)+1` its false rod.
    pub rods: Vec<Rod>,
    pub tokens: Vec<PackingToken>,
    /// Grid extents (x, y, z), informational.
    pub bounds: [i64; 3],
}

/// One token placed at a slot of a rod.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenPlacement {
    pub token: usize,
    pub rod: usize,
    /// 1-based slot index, at most the rod's capacity.
    pub slot: usize,
}

/// A feasibility witness: one rod per variable plus a placement per token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingWitness {
    /// `selected_rods[i]` is the rod selected for variable i+1.
    pub selected_rods: Vec<usize>,
    pub placements: Vec<TokenPlacement>,
}

fn true_rod(var: u32) -> usize {
    2 * (var as usize - 1)
}

fn false_rod(var: u32) -> usize {
    2 * (var as usize - 1) + 1
}

/// Reduces a (width ≤ 3, padded to 3) formula to a packing instance.
pub fn to_packing(formula: &CnfFormula) -> Result<PackingInstance, ReductionError> {
    let clauses = pad_to_width3(formula)?;
    let n = formula.num_variables();
    let m = clauses.len();

    let mut rods = Vec::with_capacity(2 * n as usize);
    for var in 1..=n {
        let x = i64::from(var) - 1;
        let mut true_cells = vec![[x, 0, 0]];
        true_cells.extend((1..=m as i64).map(|z| [x, 0, z]));
        let mut false_cells = vec![[x, 0, 0]];
        false_cells.extend((1..=m as i64).map(|z| [x, 1, z]));
        rods.push(Rod {
            cells: true_cells,
            capacity: m,
        });
        rods.push(Rod {
            cells: false_cells,
            capacity: m,
        });
    }

    let tokens = clauses
        .iter()
        .map(|clause| {
            let mut allowed: Vec<usize> = clause
                .iter()
                .map(|lit| {
                    if lit.is_positive() {
                        true_rod(lit.var())
                    } else {
                        false_rod(lit.var())
                    }
                })
                .collect();
            allowed.sort_unstable();
            allowed.dedup();
            PackingToken { allowed_rods: allowed }
        })
        .collect();

    Ok(PackingInstance {
        num_variables: n,
        rods,
        tokens,
        bounds: [i64::from(n), 2, m as i64 + 1],
    })
}

/// Validates a witness: (a) exactly one rod selected per variable, (b)
/// selected footprints pairwise disjoint, (c) every token placed on a
/// selected rod from its allowed set, (d) slots within capacity and no two
/// tokens sharing a slot. Dangling rod or token references are domain
/// errors; structurally well-formed but wrong witnesses return `false`.
pub fn check_packing(
    instance: &PackingInstance,
    witness: &PackingWitness,
) -> Result<bool, ReductionError> {
    let num_rods = instance.rods.len();
    for &rod in &witness.selected_rods {
        if rod >= num_rods {
            return Err(ReductionError::UnknownRod { rod, num_rods });
        }
    }
    for placement in &witness.placements {
        if placement.rod >= num_rods {
            return Err(ReductionError::UnknownRod {
                rod: placement.rod,
                num_rods,
            });
        }
        if placement.token >= instance.tokens.len() {
            return Err(ReductionError::UnknownToken {
                token: placement.token,
                num_tokens: instance.tokens.len(),
            });
        }
    }
    // (a) exactly one rod per variable, each belonging to its variable.
    if witness.selected_rods.len() != instance.num_variables as usize {
        return Ok(false);
    }
    for (i, &rod) in witness.selected_rods.iter().enumerate() {
        if rod / 2 != i {
            return Ok(false);
        }
    }

    // (b) footprints of selected rods are pairwise disjoint.
    let mut occupied: HashSet<[i64; 3]> = HashSet::new();
    for &rod in &witness.selected_rods {
        for &cell in &instance.rods[rod].cells {
            if !occupied.insert(cell) {
                return Ok(false);
            }
        }
    }

    // (c) + (d) every token exactly once, on a selected allowed rod, in a
    // distinct in-capacity slot.
    let selected: HashSet<usize> = witness.selected_rods.iter().copied().collect();
    let mut placed: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut used_slots: HashSet<(usize, usize)> = HashSet::new();
    for placement in &witness.placements {
        if placed
            .insert(placement.token, (placement.rod, placement.slot))
            .is_some()
        {
            return Ok(false); // token placed twice
        }
        if !selected.contains(&placement.rod) {
            return Ok(false);
        }
        if !instance.tokens[placement.token]
            .allowed_rods
            .contains(&placement.rod)
        {
            return Ok(false);
        }
        if placement.slot == 0 || placement.slot > instance.rods[placement.rod].capacity {
            return Ok(false);
        }
        if !used_slots.insert((placement.rod, placement.slot)) {
            return Ok(false);
        }
    }
    Ok(placed.len() == instance.tokens.len())
}

/// Exact feasibility by enumerating the 2^n rod selections and backtracking
/// over token placements.
pub fn packing_brute_force(instance: &PackingInstance) -> Result<bool, ReductionError> {
    packing_brute_force_with_limits(
        instance,
        DEFAULT_PACKING_VARIABLE_LIMIT,
        DEFAULT_PACKING_TOKEN_LIMIT,
    )
}

/// [`packing_brute_force`] with explicit size ceilings.
pub fn packing_brute_force_with_limits(
    instance: &PackingInstance,
    max_variables: usize,
    max_tokens: usize,
) -> Result<bool, ReductionError> {
    let n = instance.num_variables as usize;
    if n > max_variables {
        return Err(ReductionError::TooLarge {
            size: n,
            limit: max_variables,
            unit: "variables",
        });
    }
    if instance.tokens.len() > max_tokens {
        return Err(ReductionError::TooLarge {
            size: instance.tokens.len(),
            limit: max_tokens,
            unit: "tokens",
        });
    }
    if instance.rods.len() != 2 * n {
        return Err(ReductionError::MalformedInstance {
            reason: format!(
                "{} rods for {} variables; expected two per variable",
                instance.rods.len(),
                n
            ),
        });
    }
    for token in &instance.tokens {
        for &rod in &token.allowed_rods {
            if rod >= instance.rods.len() {
                return Err(ReductionError::UnknownRod {
                    rod,
                    num_rods: instance.rods.len(),
                });
            }
        }
    }

    // Rods of distinct variables must not overlap; verified once so the
    // per-selection check reduces to the within-variable exclusivity that
    // the selection respects by construction.
    let mut cell_owner: HashMap<[i64; 3], usize> = HashMap::new();
    for (rod_idx, rod) in instance.rods.iter().enumerate() {
        for &cell in &rod.cells {
            if let Some(&other) = cell_owner.get(&cell) {
                if other / 2 != rod_idx / 2 {
                    return Err(ReductionError::MalformedInstance {
                        reason: "rods of distinct variables share a cell".to_string(),
                    });
                }
            } else {
                cell_owner.insert(cell, rod_idx);
            }
        }
    }

    for selection_bits in 0u64..(1u64 << n) {
        let selected: Vec<usize> = (0..n)
            .map(|i| 2 * i + ((selection_bits >> i) & 1) as usize)
            .collect();
        let selected_set: HashSet<usize> = selected.iter().copied().collect();
        let mut remaining: HashMap<usize, usize> = selected
            .iter()
            .map(|&rod| (rod, instance.rods[rod].capacity))
            .collect();
        if place_tokens(&instance.tokens, 0, &selected_set, &mut remaining) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn place_tokens(
    tokens: &[PackingToken],
    index: usize,
    selected: &HashSet<usize>,
    remaining: &mut HashMap<usize, usize>,
) -> bool {
    let Some(token) = tokens.get(index) else {
        return true;
    };
    for &rod in &token.allowed_rods {
        if !selected.contains(&rod) {
            continue;
        }
        let slots = remaining.get_mut(&rod).expect("selected rods have capacity");
        if *slots == 0 {
            continue;
        }
        *slots -= 1;
        if place_tokens(tokens, index + 1, selected, remaining) {
            return true;
        }
        *remaining.get_mut(&rod).expect("rod present") += 1;
    }
    false
}

/// Builds the canonical witness from a satisfying assignment: select each
/// variable's rod per σ and drop every token onto the rod of one satisfied
/// literal, filling slots in clause order.
pub fn packing_witness_from_assignment(
    formula: &CnfFormula,
    sigma: &Assignment,
) -> Result<PackingWitness, ReductionError> {
    let clauses = pad_to_width3(formula)?;
    let selected_rods: Vec<usize> = (1..=formula.num_variables())
        .map(|var| {
            let value = sigma.value(var).ok_or(crate::cnf::CnfError::IncompleteAssignment {
                got: sigma.num_variables(),
                expected: formula.num_variables(),
            })?;
            Ok(if value { true_rod(var) } else { false_rod(var) })
        })
        .collect::<Result<_, ReductionError>>()?;

    let mut next_slot: HashMap<usize, usize> = HashMap::new();
    let mut placements = Vec::with_capacity(clauses.len());
    for (j, clause) in clauses.iter().enumerate() {
        let lit = clause
            .iter()
            .find(|lit| sigma.value(lit.var()).is_some_and(|v| lit.satisfied_by(v)))
            .ok_or(ReductionError::UnsatisfiedClause { clause: j })?;
        let rod = if lit.is_positive() {
            true_rod(lit.var())
        } else {
            false_rod(lit.var())
        };
        let slot = next_slot.entry(rod).or_insert(0);
        *slot += 1;
        placements.push(TokenPlacement {
            token: j,
            rod,
            slot: *slot,
        });
    }
    Ok(PackingWitness {
        selected_rods,
        placements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{brute_force, SolveStatus};
    use crate::testutil::{complete_formula, formula};

    #[test]
    fn single_clause_layout() {
        let f = formula(3, &[&[1, 2, 3]]);
        let instance = to_packing(&f).unwrap();
        assert_eq!(instance.rods.len(), 6);
        assert_eq!(instance.tokens.len(), 1);
        assert_eq!(instance.tokens[0].allowed_rods, vec![0, 2, 4]);
        assert!(packing_brute_force(&instance).unwrap());
        // Mutual exclusion: both rods of a variable share the base cell.
        assert_eq!(instance.rods[0].cells[0], instance.rods[1].cells[0]);
    }

    #[test]
    fn complete_formula_is_infeasible() {
        let instance = to_packing(&complete_formula(3)).unwrap();
        assert!(!packing_brute_force(&instance).unwrap());
    }

    #[test]
    fn empty_formula_is_feasible() {
        let instance = to_packing(&CnfFormula::empty(2)).unwrap();
        assert!(instance.tokens.is_empty());
        assert!(packing_brute_force(&instance).unwrap());
    }

    #[test]
    fn witness_checks_all_four_conditions() {
        let f = formula(3, &[&[1, 2, 3]]);
        let instance = to_packing(&f).unwrap();

        // All true rods selected, token on x1's true rod: valid.
        let good = PackingWitness {
            selected_rods: vec![0, 2, 4],
            placements: vec![TokenPlacement { token: 0, rod: 0, slot: 1 }],
        };
        assert!(check_packing(&instance, &good).unwrap());

        // (c) token on a rod outside the selection.
        let unselected_rod = PackingWitness {
            selected_rods: vec![1, 2, 4],
            placements: vec![TokenPlacement { token: 0, rod: 0, slot: 1 }],
        };
        assert!(!check_packing(&instance, &unselected_rod).unwrap());

        // (a)/(b) both rods of x1 selected: x2 loses its slot and the shared
        // base cell collides.
        let double_selection = PackingWitness {
            selected_rods: vec![0, 1, 4],
            placements: vec![TokenPlacement { token: 0, rod: 0, slot: 1 }],
        };
        assert!(!check_packing(&instance, &double_selection).unwrap());

        // (d) slot beyond capacity.
        let bad_slot = PackingWitness {
            selected_rods: vec![0, 2, 4],
            placements: vec![TokenPlacement { token: 0, rod: 0, slot: 2 }],
        };
        assert!(!check_packing(&instance, &bad_slot).unwrap());

        // Missing token placement.
        let unplaced = PackingWitness {
            selected_rods: vec![0, 2, 4],
            placements: vec![],
        };
        assert!(!check_packing(&instance, &unplaced).unwrap());

        // Dangling references are domain errors.
        assert!(matches!(
            check_packing(
                &instance,
                &PackingWitness {
                    selected_rods: vec![0, 2, 9],
                    placements: vec![],
                }
            ),
            Err(ReductionError::UnknownRod { rod: 9, .. })
        ));
        assert!(matches!(
            check_packing(
                &instance,
                &PackingWitness {
                    selected_rods: vec![0, 2, 4],
                    placements: vec![TokenPlacement { token: 5, rod: 0, slot: 1 }],
                }
            ),
            Err(ReductionError::UnknownToken { token: 5, .. })
        ));
    }

    #[test]
    fn two_tokens_cannot_share_a_slot() {
        let f = formula(3, &[&[1, 2, 3], &[1, 2, 3]]);
        let instance = to_packing(&f).unwrap();
        let collision = PackingWitness {
            selected_rods: vec![0, 2, 4],
            placements: vec![
                TokenPlacement { token: 0, rod: 0, slot: 1 },
                TokenPlacement { token: 1, rod: 0, slot: 1 },
            ],
        };
        assert!(!check_packing(&instance, &collision).unwrap());
        let staggered = PackingWitness {
            selected_rods: vec![0, 2, 4],
            placements: vec![
                TokenPlacement { token: 0, rod: 0, slot: 1 },
                TokenPlacement { token: 1, rod: 0, slot: 2 },
            ],
        };
        assert!(check_packing(&instance, &staggered).unwrap());
    }

    #[test]
    fn feasibility_matches_cnf_satisfiability() {
        let cases = [
            formula(3, &[&[1, 2, 3]]),
            formula(3, &[&[1, 2], &[-1, -2], &[3, 3]]),
            complete_formula(3),
        ];
        for f in cases {
            let sat = brute_force(&f).unwrap().status == SolveStatus::Sat;
            let feasible = packing_brute_force(&to_packing(&f).unwrap()).unwrap();
            assert_eq!(sat, feasible);
        }
    }

    #[test]
    fn witness_from_assignment_passes_checker() {
        let f = formula(3, &[&[1, 2, 3], &[-1, 2, -3], &[1, -2, 3]]);
        let sigma = brute_force(&f).unwrap().model.unwrap();
        let instance = to_packing(&f).unwrap();
        let witness = packing_witness_from_assignment(&f, &sigma).unwrap();
        assert!(check_packing(&instance, &witness).unwrap());
    }

    #[test]
    fn brute_force_refuses_oversized_instances() {
        let f = CnfFormula::empty(21);
        let instance = to_packing(&f).unwrap();
        assert!(matches!(
            packing_brute_force(&instance),
            Err(ReductionError::TooLarge { unit: "variables", .. })
        ));
    }
}
