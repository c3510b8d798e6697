//! Symbolic variational calculus on jet coordinates for field theories with
//! even and odd (Grassmann) variables, over a single coordinate chart.
//!
//! The coefficient ring is built from exact-rational polynomials in the base
//! coordinates `x0..x{n-1}` and the even jet variables, times Grassmann
//! monomials in the odd jets. On top of it sit bigraded differential forms
//! with contact generators `theta(A, [Λ])` and horizontal generators `dx<i>`,
//! the split `d = d_H + d_V` of the exterior differential, contact
//! derivations with their infinite prolongation, the interior Euler projector
//! and the variational operator it induces, Euler-Lagrange and Helmholtz
//! operators, Lepage forms and Noether currents, and constructive homotopy
//! operators that invert `d_H` on its local kernel.
//!
//! Conventions, fixed once and used everywhere:
//!
//! - base indices are zero-based: `x0 .. x{n-1}`;
//! - partial derivatives with respect to odd variables act from the LEFT;
//! - canonical term order: coefficient polynomial first, then contact
//!   generators (ordinary fields before auxiliary mirrors, then by field,
//!   then by multi-index), then `dx` factors in increasing index order.

pub mod algebra;
pub mod derivations;
pub mod expr_io;
pub mod forms;
pub mod homotopy;
pub mod multiindex;
pub mod random;
pub mod selftest;
pub mod signature;
pub mod variational;

pub use algebra::{AlgebraError, GradedMonomial, GradedPolynomial, JetVar};


pub use multiindex::MultiIndex;
pub use signature::{FieldRef, Parity, Signature, SignatureError};

/// Shared handle to an immutable signature.
pub type SigRef = std::sync::Arc<Signature>;

/// One-line description of the sign and indexing conventions, emitted in
/// every report so results are interpretable without reading the source.
pub fn convention_ledger() -> Vec<(&'static str, &'static str)> {
    vec![
        ("odd-derivative", "left"),
        ("index-base", "0"),
        ("term-order", "coefficient, contact generators, dx factors"),
    ]
}
