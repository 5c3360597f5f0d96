//! Exact verification of Freudenthal–Kantor triple systems, J-ternary
//! algebras, dicyclic ternary algebras and the Lie (super)algebras built
//! from them.

pub mod cli;
pub mod dicyclic;
pub mod fixtures;
pub mod fkts;
pub mod io;
pub mod jternary;
pub mod liebuild;
pub mod linalg;
pub mod report;
pub mod scalars;
pub mod tensor;

/// The guide's snippets, compiled and run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    mod scalars {}
    #[doc = include_str!("../../../book/src/tensors.md")]
    mod tensors {}
    #[doc = include_str!("../../../book/src/fkts.md")]
    mod fkts {}
    #[doc = include_str!("../../../book/src/jternary.md")]
    mod jternary {}
    #[doc = include_str!("../../../book/src/dicyclic.md")]
    mod dicyclic {}
    #[doc = include_str!("../../../book/src/lie.md")]
    mod lie {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/conventions.md")]
    mod conventions {}
}
