//! The guide in `book/`, one module per chapter, so `cargo test` runs every
//! snippet as a doctest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/families.md")]
pub mod families {}

#[doc = include_str!("../../../book/src/risk.md")]
pub mod risk {}

#[doc = include_str!("../../../book/src/optimality.md")]
pub mod optimality {}

#[doc = include_str!("../../../book/src/bayes.md")]
pub mod bayes {}

#[doc = include_str!("../../../book/src/admissibility.md")]
pub mod admissibility {}

#[doc = include_str!("../../../book/src/oracles.md")]
pub mod oracles {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
