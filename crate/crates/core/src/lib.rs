//! Exact symbolic toolkit for deformations of pre-symplectic forms.
//!
//! The crate is layered bottom-up:
//!
//! - [`poly`], [`scalar`], [`field`], [`matrix`]: exact arithmetic over the
//!   rationals and over rational functions `Q(x1..xn)`.
//! - [`exterior`]: forms and multivector fields on `R^n`, with wedge,
//!   contraction, de Rham differential, Lie derivative by a multivector,
//!   Schouten bracket and the multi-sharp operator.
//! - [`dirac`]: linear Dirac geometry on `V + V*`: Lagrangian subspaces,
//!   the transforms by 2-forms and bivectors, the map
//!   `F(b)# = b# (id + Z# b#)^-1` and the Dirac exponential `exp_eta`.
//! - [`koszul`]: the Koszul bracket of a bivector field, the trinary bracket,
//!   the L-infinity[1] multibrackets and the Maurer-Cartan residual.
//! - [`presymplectic`]: constant-rank certification, kernel distributions,
//!   horizontal forms, the Dorfman bracket and the deformation pipeline.
//! - [`harness`]: seeded randomized suites, instance files and reports.

pub mod dirac;
pub mod error;
pub mod exterior;
pub mod field;
pub mod harness;
pub mod koszul;
pub mod matrix;
pub mod poly;
pub mod presymplectic;
pub mod scalar;

pub use error::{ExteriorError, KoszulError, LinearError, ParseError, PresymplecticError};
pub use exterior::{Chart, DifferentialForm, MultivectorField};
pub use field::Field;
pub use matrix::Matrix;
pub use poly::Poly;
pub use scalar::Scalar;
