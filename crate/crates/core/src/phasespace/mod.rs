//! s-parameterized quasi-probability distributions and ordered moments.
//!
//! The ordering parameter s interpolates between the Glauber–Sudarshan P
//! function (s = 1), the Wigner function (s = 0), and the Husimi Q
//! function (s = −1); τ = (1 − s)/2 converts to the smoothing picture.
//! All distributions here are normalized under ∫ d²α/π.
//!
//! Submodules:
//! - [`symbols`] — Fock-projector symbols and state evaluation.
//! - [`grid`] — phase-space sampling, quadrature, Gaussian smoothing, and
//!   the trace formula.
//! - [`closed`] — closed-form families (vacuum, Fock-at-origin, coherent,
//!   thermal, photon-subtracted thermal).
//! - [`charfn`] — independent characteristic-function quadrature oracle.
//! - [`moments`] — s-ordered moment arrays: ordering transforms,
//!   coefficient extraction, and the ladder lemmas.
//!
//! Everything is a pure function over immutable inputs; grid sweeps
//! parallelize per node, and every reduction runs in a fixed order so
//! results are bit-reproducible.

pub mod charfn;
pub mod closed;
pub mod grid;
pub mod moments;
pub mod symbols;

pub use charfn::{w_via_charfn, CharFnOracle};
pub use closed::{closed_form_for, ClosedForm};
pub use grid::{smooth, trace_pair, PhaseGrid};
pub use moments::{
    apply_ladder, extract_coefficients, moments_transform, LadderOp, LadderSide,
    OrderedMomentArray,
};
pub use symbols::{w_eval, w_eval_at_origin, w_fock_element};

/// Ordering parameter with the conventional anchors s = 1 (P), s = 0
/// (Wigner), s = −1 (Q).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingParameter(pub f64);

impl OrderingParameter {
    /// Smoothing parameter τ = (1 − s)/2; 0 at the P function, 1 at Q.
    pub fn tau(self) -> f64 {
        (1.0 - self.0) / 2.0
    }

    /// s = 1 − 2τ.
    pub fn from_tau(tau: f64) -> Self {
        OrderingParameter(1.0 - 2.0 * tau)
    }
}

/// κ_{a,b} = (b − a)/2, the Gaussian width entering every transform
/// between orderings a and b.
#[inline]
pub fn kappa(a: f64, b: f64) -> f64 {
    0.5 * (b - a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_anchors() {
        assert_eq!(OrderingParameter(1.0).tau(), 0.0);
        assert_eq!(OrderingParameter(-1.0).tau(), 1.0);
        assert_eq!(OrderingParameter(0.0).tau(), 0.5);
        // Monotone decreasing in s.
        assert!(OrderingParameter(-0.5).tau() > OrderingParameter(0.5).tau());
        assert_eq!(OrderingParameter::from_tau(0.25).0, 0.5);
    }

    #[test]
    fn kappa_antisymmetry() {
        assert_eq!(kappa(1.0, -0.5), -0.75);
        assert_eq!(kappa(-0.5, 1.0), 0.75);
        assert_eq!(kappa(0.3, 0.3), 0.0);
    }
}
