//! Numerical workbench for indefinite (pseudo-Riemannian) spectral triples.
//!
//! The crate builds explicit Clifford modules of any even signature, checks
//! the mod-8 sign and dimension laws by brute force, assembles the finite
//! Standard-Model triple with its bosonic Lagrangian coefficients, and runs
//! spectral-action experiments on discrete flat tori.

pub mod clifford;
pub mod dims;
pub mod error;
pub mod ist;
pub mod kspace;
pub mod linalg;
pub mod ncforms;
pub mod serde_cx;
pub mod sm;
pub mod specact;
pub mod tensor;
pub mod testkit;
pub mod verify;

pub use clifford::{CliffordModule, Convention, Signature};
pub use dims::{Mod8Dim, SignQuadruple, SpaceTimePair};
pub use error::{Error, Result};
pub use ist::{FiniteAlgebra, IndefiniteTriple};
pub use kspace::{AntilinearOperator, KreinForm};
pub use linalg::{CMat, CVec};
pub use ncforms::FormSpace;
pub use num_complex::Complex64;
pub use sm::{LagrangianCoeffs, SMModel, YukawaSet, ZParams};
pub use specact::{CutoffFn, TorusSpec};
