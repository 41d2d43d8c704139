// mdbook cannot run listings that depend on a workspace crate, so every
// chapter is pulled in as the doc comment of an empty module and
// `cargo test` runs the listings as ordinary doctests.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/linearization.md")]
pub mod linearization {}
#[doc = include_str!("src/series.md")]
pub mod series {}
#[doc = include_str!("src/matching.md")]
pub mod matching {}
#[doc = include_str!("src/orbits.md")]
pub mod orbits {}
#[doc = include_str!("src/verification.md")]
pub mod verification {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
#[doc = include_str!("../README.md")]
pub mod readme {}
