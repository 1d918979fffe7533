//! Exact computation with the symmetric trace forms of a finite Galois
//! extension `L = GF(q^n)` of `K = GF(q)`.
//!
//! For each power `σ^i` of the Frobenius the forms
//! `φ_{b,σ^i}(x, y) = tr(b(xσ^i(y) + σ^i(x)y))` span a subspace `A^i` of
//! `Sym_K(L)`. The crate constructs these spaces, enumerates the ranks of
//! their members exhaustively or by seeded sampling, and verifies
//! decompositions and constant-rank statements, recording each run as a JSON
//! [`decomp::Certificate`].
//!
//! ```
//! use gsf::decomp::{refine_a1_2k, Verdict};
//! use gsf::ffield::FieldTower;
//! use gsf::formspace::EnumConfig;
//!
//! let tower = FieldTower::new(3, 1, 6)?;
//! let cert = refine_a1_2k(&tower, &EnumConfig::default())?;
//! assert_eq!(cert.verdict, Verdict::Pass);
//! # Ok::<(), gsf::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module; its code blocks are
//! compiled as doctests of this crate.

pub mod cli;
pub mod decomp;
pub mod error;
pub mod exactla;
pub mod extremal;
pub mod ffield;
pub mod formspace;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/decompositions.md")]
    mod decompositions {}
    #[doc = include_str!("../../../book/src/refinements.md")]
    mod refinements {}
    #[doc = include_str!("../../../book/src/extremal.md")]
    mod extremal {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
