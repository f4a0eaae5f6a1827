//! Exact computations with Schürmann triples on finitely presented
//! *-algebras: cocycles, generating functionals, Gaussian parts and the
//! Lévy–Khintchine decomposition.

pub mod catalog;
pub mod classify;
pub mod cocycle;
pub mod cycles;
pub mod decomposition;
pub mod error;
pub mod exec;
pub mod functional;
pub mod linalg;
pub mod presentation;
pub mod report;
pub mod representation;
pub mod scalar;
pub mod scenario;
pub mod wordproblem;

pub use error::{Error, Result};
pub use exec::Execution;
pub use linalg::{HermitianForm, Matrix, PsdVerdict, Solution, Vector};
pub use presentation::{AlgebraElement, Kind, Letter, Presentation, Rule, Tensor2, Word};
pub use scalar::{Rational, Scalar};
pub use cocycle::{big_k, big_l, coboundary_cocycle, derivation_space, Cochain2, Cocycle};
pub use representation::Representation;
pub use wordproblem::{NormalForm, NormalFormSpec};
