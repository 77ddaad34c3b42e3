//! Exact symbolic engine for rank-3 distributions with (3,6) growth, their
//! prolongations, pseudo-product certificates and singular-curve tangency
//! checks.

pub mod chart;
pub mod distribution;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod literal;
pub mod models;
pub mod poly;
pub mod prolong;
pub mod sampling;
pub mod scalar;
pub mod structure;

pub use chart::{Chart, ChartRef, OneForm, Substitution, SymbolDecl, VectorField};
pub use error::{Error, Result};
pub use poly::Q;
pub use scalar::Scalar;
pub use distribution::{Distribution, FlagReport, Splitting};
pub use hamiltonian::{evaluate_claim, ClaimReport, SvcClaim};
pub use models::{build_example_family, build_model, ExampleM, ModelName, ModelSpec};
pub use prolong::{prolong_chain, ProlongationKind, ProlongationResult};
pub use structure::{check_b3_123, check_b3_13, check_b3_23, B3_13Mode, StructureCertificate};
