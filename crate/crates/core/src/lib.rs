//! Phase-space analysis of bosonic quantum states.
//!
//! `qdepth-core` evaluates s-parameterized quasi-probability distributions
//! W(α, s) of single-mode states held as truncated Fock-basis density
//! matrices, and determines their nonclassicality depth τ_m = (1 − s_m)/2
//! together with the nonclassicality degree ι (the order of the zero of
//! W(β_m, s) at s_m).
//!
//! The crate is organized around four subsystems:
//!
//! - [`hermite2d`] — incomplete two-dimensional Hermite polynomials
//!   h_{n,m}(x, y|κ), the algebraic backbone of every symbol evaluation.
//! - [`states`] — truncated Fock-basis density matrices: the state catalog,
//!   photon addition/subtraction, displacement, mixing.
//! - [`phasespace`] — symbol evaluation, closed forms, ordering transforms,
//!   ladder lemmas, Gaussian smoothing, and an independent
//!   characteristic-function quadrature oracle.
//! - [`depth`] — zero-point analysis: origin-polynomial root finding and
//!   global bisection over the ordering parameter.
//!
//! Distributions are normalized under ∫ d²α/π, so W(α, 1) is the
//! Glauber–Sudarshan P function, W(α, 0) the Wigner function, and
//! W(α, −1) the Husimi Q function, with ∫ (d²α/π) W(α, s) = Tr ρ.

pub mod depth;
pub mod error;
pub mod hermite2d;
pub mod math;
pub mod phasespace;
pub mod states;

pub use error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
