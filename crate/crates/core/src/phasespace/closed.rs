//! Closed-form s-parameterized distributions for the analytic families.
//!
//! These serve two roles: spot values for tests, and exact evaluators for
//! depth scans on states whose Fock truncation would otherwise dominate
//! the large-s behavior (any state with an infinite Fock tail loses all
//! meaning under truncation once s approaches 1, because the Fock symbols
//! grow like ((1+s)/(1−s))^n).
//!
//! All forms are in the ∫ d²α/π = Tr ρ convention except
//! [`ClosedForm::spsts_unnormalized`], which reproduces the
//! photon-subtracted-thermal expression verbatim with its 1/π prefactor;
//! the two conventions differ by exactly π, pinned numerically by the
//! cross-check against the Fock route.

use crate::error::{Error, Result};
use crate::states::{Modifier, StateKind, StateSpec};
use crate::C64;

/// Closed-form distribution families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// Vacuum projector |0⟩⟨0|.
    Vacuum,
    /// Fock projector |n⟩⟨n| evaluated at the phase-space origin only.
    FockOrigin { n: usize },
    /// Coherent projector |β⟩⟨β|.
    Coherent { beta: C64 },
    /// Thermal state with mean photon number n̄.
    Thermal { nbar: f64 },
    /// Single-photon-subtracted thermal state a ρ_th a†, unnormalized
    /// (trace n̄).
    Spsts { nbar: f64 },
}

impl ClosedForm {
    /// Ordering parameter at which this family's distribution develops a
    /// pole (evaluation requires s strictly below it).
    pub fn pole(&self) -> f64 {
        match self {
            ClosedForm::Vacuum | ClosedForm::FockOrigin { .. } | ClosedForm::Coherent { .. } => 1.0,
            ClosedForm::Thermal { nbar } | ClosedForm::Spsts { nbar } => 2.0 * nbar + 1.0,
        }
    }

    /// Trace of the represented operator.
    pub fn trace(&self) -> f64 {
        match self {
            ClosedForm::Spsts { nbar } => *nbar,
            _ => 1.0,
        }
    }

    /// Mean photon number of the normalized state, used for grid sizing.
    pub fn mean_photon_number(&self) -> f64 {
        match self {
            ClosedForm::Vacuum => 0.0,
            ClosedForm::FockOrigin { n } => *n as f64,
            ClosedForm::Coherent { beta } => beta.norm_sqr(),
            ClosedForm::Thermal { nbar } => *nbar,
            // Tr(n a rho a†)/Tr(a rho a†) = (<n(n-1)> over <n>) = 2 nbar.
            ClosedForm::Spsts { nbar } => 2.0 * nbar,
        }
    }

    /// Phase-space centroid of the family.
    pub fn mean_amplitude(&self) -> C64 {
        match self {
            ClosedForm::Coherent { beta } => *beta,
            _ => C64::new(0.0, 0.0),
        }
    }

    /// W(α, s) in the ∫ d²α/π convention.
    pub fn eval(&self, alpha: C64, s: f64) -> Result<f64> {
        let pole = self.pole();
        if s >= pole {
            return Err(Error::Pole {
                s,
                pole,
                family: format!("{self:?}"),
            });
        }
        Ok(match self {
            ClosedForm::Vacuum => {
                let f = 2.0 / (1.0 - s);
                f * (-f * alpha.norm_sqr()).exp()
            }
            ClosedForm::FockOrigin { n } => {
                if alpha.norm() > 0.0 {
                    return Err(Error::Domain(
                        "fock_origin closed form is defined at α = 0 only".into(),
                    ));
                }
                // (−1)^(2n+1) ((s+1)/2)^n (2/(s−1))^(n+1)
                -((s + 1.0) / 2.0).powi(*n as i32) * (2.0 / (s - 1.0)).powi(*n as i32 + 1)
            }
            ClosedForm::Coherent { beta } => {
                let f = 2.0 / (1.0 - s);
                f * (-f * (alpha - beta).norm_sqr()).exp()
            }
            ClosedForm::Thermal { nbar } => {
                let d = 2.0 * nbar + 1.0 - s;
                2.0 / d * (-2.0 * alpha.norm_sqr() / d).exp()
            }
            ClosedForm::Spsts { .. } => std::f64::consts::PI * self.spsts_unnormalized(alpha, s)?,
        })
    }

    /// The photon-subtracted-thermal quasi-probability in its published
    /// unnormalized form, 1/π prefactor included. Multiply by π for the
    /// ∫ d²α/π convention used everywhere else in this crate.
    pub fn spsts_unnormalized(&self, alpha: C64, s: f64) -> Result<f64> {
        let nbar = match self {
            ClosedForm::Spsts { nbar } => *nbar,
            _ => {
                return Err(Error::Domain(
                    "spsts_unnormalized is only defined for the Spsts family".into(),
                ))
            }
        };
        let d = 2.0 * nbar + 1.0 - s;
        if d <= 0.0 {
            return Err(Error::Pole {
                s,
                pole: 2.0 * nbar + 1.0,
                family: "Spsts".into(),
            });
        }
        let asq = alpha.norm_sqr();
        let quad = (2.0 * nbar - 1.0 + s) / d + ((1.0 - s) / d).powi(2);
        let constant = (1.0 - s) / 2.0 * (2.0 * nbar / d);
        Ok(2.0 / (std::f64::consts::PI * d) * (quad * asq + constant) * (-2.0 * asq / d).exp())
    }
}

/// Recognize a spec whose distribution has an exact closed form.
///
/// Depth scans use these to probe s values where the Fock route is
/// truncation-limited. A trailing `normalize` after `subtract_photon` is
/// folded into the (diagonal Gaussian) form by rescaling.
pub fn closed_form_for(spec: &StateSpec) -> Option<(ClosedForm, f64)> {
    // Returns (family, scale) with scale multiplying the family's W.
    match spec.kind {
        StateKind::Coherent if spec.modifiers.is_empty() => {
            let beta = C64::new(spec.alpha_re.unwrap_or(0.0), spec.alpha_im.unwrap_or(0.0));
            Some((ClosedForm::Coherent { beta }, 1.0))
        }
        StateKind::Thermal => {
            let nbar = spec.nbar?;
            if spec.modifiers.is_empty() {
                if nbar == 0.0 {
                    Some((ClosedForm::Vacuum, 1.0))
                } else {
                    Some((ClosedForm::Thermal { nbar }, 1.0))
                }
            } else if nbar > 0.0 && spec.modifiers == [Modifier::SubtractPhoton] {
                Some((ClosedForm::Spsts { nbar }, 1.0))
            } else if nbar > 0.0
                && spec.modifiers == [Modifier::SubtractPhoton, Modifier::Normalize]
            {
                Some((ClosedForm::Spsts { nbar }, 1.0 / nbar))
            } else {
                None
            }
        }
        StateKind::SpstsClosedForm => {
            let nbar = spec.nbar?;
            (nbar > 0.0).then_some((ClosedForm::Spsts { nbar }, 1.0))
        }
        StateKind::Fock if spec.n == Some(0) && spec.modifiers.is_empty() => {
            Some((ClosedForm::Vacuum, 1.0))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasespace::symbols::w_eval;
    use crate::states::FockDensityMatrix;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn coherent_peak_value() {
        // At α = β the exponent vanishes: W = 2/(1−s).
        for s in [-1.0, 0.0, 0.5] {
            let beta = c(0.7, -0.2);
            let form = ClosedForm::Coherent { beta };
            let got = form.eval(beta, s).unwrap();
            assert!((got - 2.0 / (1.0 - s)).abs() < 1e-14);
        }
    }

    #[test]
    fn thermal_origin_value() {
        let form = ClosedForm::Thermal { nbar: 1.0 };
        let got = form.eval(c(0.0, 0.0), 0.0).unwrap();
        assert!((got - 2.0 / 3.0).abs() < 1e-15);
        // Pole guard sits at 2 nbar + 1.
        assert!(form.eval(c(0.0, 0.0), 3.0).is_err());
        assert!(form.eval(c(0.0, 0.0), 2.99).is_ok());
    }

    #[test]
    fn fock_origin_matches_symbol() {
        for n in 0..5 {
            let form = ClosedForm::FockOrigin { n };
            for s in [-0.8, 0.0, 0.6] {
                let want = crate::phasespace::symbols::w_fock_element(n, n, c(0.0, 0.0), s)
                    .unwrap()
                    .re;
                let got = form.eval(c(0.0, 0.0), s).unwrap();
                assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0));
            }
        }
        assert!(ClosedForm::FockOrigin { n: 1 }.eval(c(0.1, 0.0), 0.0).is_err());
    }

    #[test]
    fn spsts_vanishes_at_origin_at_s_one() {
        for nbar in [0.5, 1.0, 2.0] {
            let form = ClosedForm::Spsts { nbar };
            let at_one = form.spsts_unnormalized(c(0.0, 0.0), 1.0).unwrap();
            assert_eq!(at_one, 0.0, "the (1−s) factor kills the origin value");
            // Below s = 1 the origin value is strictly positive,
            // proportional to (1−s).
            let v = form.spsts_unnormalized(c(0.0, 0.0), 0.9).unwrap();
            assert!(v > 0.0);
        }
    }

    #[test]
    fn spsts_matches_fock_route_up_to_pi() {
        // The published form carries 1/π; the crate convention differs by
        // exactly π. Checked against the Fock route at orderings where
        // the truncated expansion converges.
        for nbar in [0.5, 1.0, 2.0] {
            let n_max = if nbar > 1.0 { 96 } else { 64 };
            let th = FockDensityMatrix::thermal(nbar, n_max).unwrap();
            let sub = th.photon_subtract();
            let form = ClosedForm::Spsts { nbar };
            for s in [-1.0, 0.0] {
                for alpha in [c(0.0, 0.0), c(0.9, -0.4), c(-1.7, 1.1)] {
                    let fock = w_eval(&sub, alpha, s).unwrap();
                    let closed = std::f64::consts::PI * form.spsts_unnormalized(alpha, s).unwrap();
                    assert!(
                        (fock - closed).abs() < 1e-8,
                        "nbar={nbar} s={s} alpha={alpha}: {fock} vs {closed}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_recognition() {
        let mut spec = StateSpec {
            kind: StateKind::Thermal,
            n_max: 40,
            n: None,
            alpha_re: None,
            alpha_im: None,
            nbar: Some(1.0),
            amplitudes: None,
            components: None,
            weights: None,
            modifiers: vec![],
        };
        assert_eq!(
            closed_form_for(&spec),
            Some((ClosedForm::Thermal { nbar: 1.0 }, 1.0))
        );
        spec.modifiers = vec![Modifier::SubtractPhoton];
        assert_eq!(
            closed_form_for(&spec),
            Some((ClosedForm::Spsts { nbar: 1.0 }, 1.0))
        );
        spec.modifiers = vec![Modifier::SubtractPhoton, Modifier::Normalize];
        assert_eq!(
            closed_form_for(&spec),
            Some((ClosedForm::Spsts { nbar: 1.0 }, 1.0))
        );
        spec.modifiers = vec![Modifier::AddPhoton];
        assert_eq!(closed_form_for(&spec), None);
    }
}
