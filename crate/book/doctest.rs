//! Every chapter of the guide is a doc-test module, so `cargo test` keeps the
//! snippets honest.

#[doc = include_str!("src/intro.md")]
pub mod intro {}

#[doc = include_str!("src/series.md")]
pub mod series {}

#[doc = include_str!("src/derivations.md")]
pub mod derivations {}

#[doc = include_str!("src/residues.md")]
pub mod residues {}

#[doc = include_str!("src/newton.md")]
pub mod newton {}

#[doc = include_str!("src/growing.md")]
pub mod growing {}

#[doc = include_str!("src/game.md")]
pub mod game {}

#[doc = include_str!("src/cli.md")]
pub mod cli {}

#[doc = include_str!("../README.md")]
pub mod readme {}
