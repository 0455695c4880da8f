//! Every chapter of the book (`book/src/*.md`) is attached here as module
//! documentation, so `cargo test --doc -p logicboost-guide` compiles and
//! runs each of its code snippets. mdbook itself cannot execute snippets
//! against the real crate; this shim keeps the book honest. One module
//! per chapter, so a failing doctest names the chapter it came from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/datasets.md")]
pub mod datasets {}

#[doc = include_str!("../../../book/src/stumps.md")]
pub mod stumps {}

#[doc = include_str!("../../../book/src/boosting.md")]
pub mod boosting {}

#[doc = include_str!("../../../book/src/deadlock.md")]
pub mod deadlock {}

#[doc = include_str!("../../../book/src/chains.md")]
pub mod chains {}

#[doc = include_str!("../../../book/src/layered.md")]
pub mod layered {}

#[doc = include_str!("../../../book/src/trees.md")]
pub mod trees {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
