//! Exact homotopy transfer on the interval and Maurer–Cartan tooling.
//!
//! The crate transfers the dual de Rham coalgebra of the interval onto its
//! three Čech cells along an explicit family of retracts, producing an
//! A∞-coalgebra whose higher cooperations carry Bernoulli numbers. Around it
//! sit the supporting pieces: L∞-algebras with Maurer–Cartan, twisting,
//! gauge and Quillen machinery, the Lawrence–Sullivan Lie algebra, and the
//! convolution algebras that tie homotopy morphisms to Maurer–Cartan
//! elements. All arithmetic is over exact rationals.

pub mod acceptance;
pub mod ainf;
pub mod combinatorics;
pub mod error;
pub mod interval;
pub mod lawrence_sullivan;
pub mod linf;
pub mod retract;
pub mod scalar;
pub mod sign;
pub mod tensor;
pub mod tree;
pub mod vector;

pub use error::{Error, Result};
pub use scalar::Q;
pub use vector::{Graded, Vector};
