//! Exact super-polynomial algebra for BRST and Batalin–Vilkovisky computations.
//!
//! Coefficients live in `Q(i)[ħ, ħ⁻¹]`; generators are even or odd and may be
//! paired as field/antifield. On top of that sit derivations and their `L∞`
//! decomposition, Lie algebra data with BRST and Chevalley–Eilenberg
//! differentials, the BV Laplacian and antibracket, and exact integration over
//! graph Lagrangians.

pub mod bv;
pub mod context;
pub mod derivation;
pub mod error;
pub mod gauge;
pub mod identities;
pub mod lie;
pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod random;
pub mod scalar;

pub use bv::{AntifieldReport, BvSpace, PointCheck};
pub use context::{phase_space, Context, ContextBuilder, Gen, Generator, Parity, Role};
pub use derivation::{Derivation, LinfReport, LinfRow};
pub use error::{Error, Result};
pub use gauge::{
    berezin_integrate, exp_delta, gauge_independence_experiment, gaussian_expectation, lagrangian_integral,
    restrict_poly, restrict_to_lagrangian, standard_damping, stokes_experiment, ExpElement, GaugeFermion, GaugeReport,
};
pub use identities::{run_suite, Identity, SuiteReport, SuiteRow};
pub use lie::{JacobiViolation, LieCoordinates, LieModel, RepViolation};
pub use linalg::Matrix;
pub use monomial::Monomial;
pub use num_rational::BigRational;
pub use poly::{rational, Grading, Poly};
pub use scalar::{GaussRational, Scalar};
