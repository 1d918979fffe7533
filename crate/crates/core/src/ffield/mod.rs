//! Arithmetic in GF(p), GF(q) and GF(q^n), Frobenius automorphisms, relative
//! trace and norm.
//!
//! Towers are built from canonical defining polynomials (see
//! [`find_irreducible`]) so every derived object is reproducible.

mod fq;
pub mod poly;
mod tower;

pub use fq::{is_prime, BaseField, PrimePower, MAX_BASE_ORDER};
pub use poly::find_irreducible;
pub use tower::{gcd, FieldElement, FieldTower, TowerSpec};
