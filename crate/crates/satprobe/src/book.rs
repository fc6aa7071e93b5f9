// The mdbook chapters under book/src/ double as documentation tests: each
// chapter is included as the doc comment of an empty module, so its rust
// code fences compile and run under `cargo test --doc`. A snippet that
// drifts from the library breaks the build, keeping book and code in sync.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/formulas.md")]
pub mod formulas {}

#[doc = include_str!("../../../book/src/solvers.md")]
pub mod solvers {}

#[doc = include_str!("../../../book/src/random-instances.md")]
pub mod random_instances {}

#[doc = include_str!("../../../book/src/paired-instances.md")]
pub mod paired_instances {}

#[doc = include_str!("../../../book/src/differentiation-rate.md")]
pub mod differentiation_rate {}

#[doc = include_str!("../../../book/src/reductions.md")]
pub mod reductions_guide {}

#[doc = include_str!("../../../book/src/harness.md")]
pub mod harness_guide {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli_guide {}
