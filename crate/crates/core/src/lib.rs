//! Exact arithmetic for cubic eiconal forms and cubic Jordan algebras.
//!
//! An eiconal triple is a nondegenerate quadratic space `(V, Q)` with a
//! cubic form `u` satisfying `Q(∇u(x)) = 9 Q(x)²`. Such triples correspond
//! to cubic Jordan algebras: [`correspondence::beta`] builds the algebra of
//! a triple and [`correspondence::alpha`] recovers a triple from an
//! algebra. Every computation is exact over `ℚ(√2, √3)`.

pub mod catalog;
pub mod correspondence;
pub mod cubicform;
pub mod eiconal;
pub mod error;
pub mod jordan;
pub mod linalg;
pub mod poly;
pub mod quadspace;
pub mod report;
pub mod scalar;

pub use catalog::{CatalogEntry, DivisionAlgebraElem, Family};
pub use correspondence::{alpha, beta, AlgebraMorphism};
pub use cubicform::CubicForm;
pub use eiconal::{verify_eiconal, EiconalCertificate, EiconalTriple};
pub use error::{Error, Result};
pub use jordan::{CubicJordanAlgebra, MinPoly, MinPolyOutcome, SpinFactor};
pub use linalg::{Matrix, Vector};
pub use poly::{Monomial, PolynomialMap};
pub use quadspace::{Isometry, IsometryReport, QuadraticSpace};
pub use report::{CheckOutcome, Report, SampleConfig};
pub use scalar::{FieldElem, Rational};
