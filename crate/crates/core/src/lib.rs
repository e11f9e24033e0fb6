//! Exact simple Lie algebras, classical dynamical r-matrices, Lagrangian
//! subalgebras of the double g (+) g, and the Courant-algebroid checks that
//! tie them together.
//!
//! The crate builds the algebras over the rationals from defining matrix
//! representations, evaluates the coth families
//! `r(l) = omega + sum_{[S]} coth<a, l+l0> E_a ^ E_{-a} + sum E_a ^ E_{-a}`,
//! verifies the modified CDYBE / zero-weight / ODE conditions, constructs
//! the corresponding Lagrangian subalgebras l(S, l0) and Dirac fibers, and
//! classifies both directions of the correspondence.

pub mod convention;
pub mod courant;
pub mod cxla;
pub mod dynr;
pub mod error;
pub mod json;
pub mod lagrangian;
pub mod multivec;
pub mod ratmat;
pub mod rootsys;
pub mod scalar;

pub use dynr::{RMatrixFamily, RootSubsetClosure, SamplePolicy};
pub use error::{CoreError, Result};
pub use lagrangian::{CharPair, DSubspace, DoubleElement};
pub use multivec::MultiVector;
pub use rootsys::{build_algebra, killing_form, normalized_basis, CartanType, Root, Series, SimpleLieAlgebra};
