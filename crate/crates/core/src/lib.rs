//! Exact Weil representations of `Sp(2l, r)` for odd primes `r`.
//!
//! The generators `λC_t`, `D_st` and `U_t` are built as structured operators
//! over [`field::CyclotomicField`], [`field::PrimeField`] or
//! [`field::ExtensionField`]. [`symplectic::weil_image`] maps any symplectic
//! matrix to its image, [`heisenberg::pi_map`] projects back, and
//! [`verify::run_relation_suite`] checks the defining relations exactly.

pub mod field;
pub mod linops;
pub mod weilgen;
pub mod symplectic;
pub mod heisenberg;
pub mod weilmodule;
pub mod verify;
pub mod cli;
pub mod io;

/// The book chapters, compiled so their snippets run as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    pub mod fields {}
    #[doc = include_str!("../../../book/src/operators.md")]
    pub mod operators {}
    #[doc = include_str!("../../../book/src/generators.md")]
    pub mod generators {}
    #[doc = include_str!("../../../book/src/heisenberg.md")]
    pub mod heisenberg {}
    #[doc = include_str!("../../../book/src/words.md")]
    pub mod words {}
    #[doc = include_str!("../../../book/src/modules.md")]
    pub mod modules {}
    #[doc = include_str!("../../../book/src/verification.md")]
    pub mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
