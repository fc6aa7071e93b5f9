//! A workbench for probing satisfiability reasoning.
//!
//! The crate covers the full pipeline behind a paired-instance SAT
//! evaluation study:
//!
//! * [`cnf`] / [`dimacs`] — CNF formulas, assignments, and DIMACS I/O;
//! * [`solver`] — ground-truth oracles: an instrumented CDCL solver, the
//!   linear-time 2-SAT procedure, and brute-force enumeration;
//! * [`generator`] — seeded random k-SAT, phase-transition sweeps, and
//!   low-density UNSAT stress sets;
//! * [`pairing`] — single-edit SAT twins and balanced pair sets;
//! * [`reductions`] — label-preserving translations to Vertex Cover and
//!   discrete rod/token packing, with witness checkers;
//! * [`metrics`] — classification metrics with explicit undefined handling
//!   plus the paired differentiation-rate machinery;
//! * [`harness`] — prompt construction, prediction backends, response
//!   parsing, and cross-representation agreement.
//!
//! The `satprobe` binary (in the companion CLI crate) wires these stages
//! into a reproducible file-based pipeline. The mdbook under `book/` walks
//! through the concepts; its code snippets compile and run as doctests of
//! this crate.

pub mod cnf;
pub mod dimacs;
pub mod generator;
pub mod harness;
pub mod metrics;
pub mod pairing;
pub mod reductions;
pub mod solver;

#[cfg(test)]
pub(crate) mod testutil;

mod book;
