//! Exact Newton–Okounkov bodies of divisors.
//!
//! The crate computes convex bodies attached to divisors on explicit models
//! (projective spaces, Veronese surfaces, rational curves, toric varieties,
//! and surfaces given by a Picard lattice). All arithmetic is exact over the
//! rationals.
//!
//! - [`exactgeom`]: rational polytopes in dimension ≤ 3.
//! - [`valuation`]: polynomials and flag valuations.
//! - [`sections`]: graded section bases of the supported models.
//! - [`semigroup`]: value semigroups, body estimates and finite generation
//!   certificates.
//! - [`surface`]: Zariski decomposition, chamber scans and surface bodies.

pub mod exactgeom;
pub mod linalg;
pub mod rational;
pub mod sections;
pub mod semigroup;
pub mod valuation;
pub mod surface;
