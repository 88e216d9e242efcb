//! Compiles the listings of the guide in `book/src` as doctests, one module
//! per chapter so a failure points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/problems.md")]
pub mod problems {}
#[doc = include_str!("../../../book/src/scheme.md")]
pub mod scheme {}
#[doc = include_str!("../../../book/src/entropy.md")]
pub mod entropy {}
#[doc = include_str!("../../../book/src/interaction.md")]
pub mod interaction {}
#[doc = include_str!("../../../book/src/translation.md")]
pub mod translation {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
