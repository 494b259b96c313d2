//! Independent quadrature oracle through the characteristic function.
//!
//! For χ(ξ) = Tr[ρ e^(ξa† − ξ*a)], the distribution is recovered as
//!
//! ```text
//! W(α, s) = ∫ (d²ξ/π) e^(s|ξ|²/2) e^(αξ* − α*ξ) χ(ξ).
//! ```
//!
//! Displacement matrix elements are evaluated through associated Laguerre
//! polynomials, so this path shares nothing with the Hermite-series
//! symbols it cross-checks. The ξ-plane integral runs on a polar grid:
//! spectrally convergent trapezoid in the angle, Gauss–Legendre in the
//! radius, with the radial cutoff chosen from the e^((s−1)|ξ|²/2)
//! envelope (|χ| ≤ Tr ρ for positive ρ). For s ≤ 0 the damping is
//! unconditional; 0 < s < 1 rides the same Gaussian cutoff, just farther
//! out.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::math::{gauss_legendre, laguerre_row, ln_factorial_table};
use crate::states::FockDensityMatrix;
use crate::C64;

/// Reusable quadrature of one state's characteristic function at a fixed
/// ordering parameter. Building the oracle precomputes χ on the polar
/// grid; evaluations then cost one pass over the grid per point.
pub struct CharFnOracle {
    s: f64,
    radii: Vec<f64>,
    cos_theta: Vec<f64>,
    sin_theta: Vec<f64>,
    /// kernel[i * n_theta + j] = w_i r_i Δθ/π · e^(s r_i²/2) · χ(r_i e^(iθ_j))
    kernel: Vec<C64>,
    n_theta: usize,
    cutoff: f64,
    tail: f64,
}

impl CharFnOracle {
    /// Build the oracle for evaluation points with |α| up to `max_alpha`.
    pub fn new(rho: &FockDensityMatrix, s: f64, max_alpha: f64) -> Result<Self> {
        if s >= 1.0 {
            return Err(Error::Pole {
                s,
                pole: 1.0,
                family: "characteristic-function integral".into(),
            });
        }
        let trace_bound = rho.trace().abs().max(1.0);
        // e^((s−1)R²/2) · trace_bound = 1e−12 fixes the cutoff.
        let cutoff = (2.0 * (trace_bound.ln() + 27.6) / (1.0 - s)).sqrt();

        // Radial rule: enough nodes for the plane-wave oscillation
        // (total phase 2·max_alpha·R) plus the Laguerre structure.
        let osc = 2.0 * max_alpha.abs() * cutoff;
        let n_r = (320usize).max(osc.ceil() as usize + 96);
        let (radii, mut rweights) = gauss_legendre(n_r, 0.0, cutoff);

        // Angular rule: χ carries harmonics up to the off-diagonal extent
        // of ρ; the plane wave adds ~2|α|r more.
        let dim = rho.n_max() + 1;
        let scale = (0..dim)
            .map(|n| rho.get(n, n).norm())
            .fold(0.0f64, f64::max)
            .max(1e-300);
        let mut active_d: Vec<usize> = Vec::new();
        for d in 0..dim {
            let occupied = (0..dim - d).any(|n| rho.get(n, n + d).norm() > 1e-16 * scale);
            if occupied {
                active_d.push(d);
            }
        }
        let d_max = active_d.last().copied().unwrap_or(0);
        let n_theta = {
            let raw = 1.3 * (osc + d_max as f64) + 48.0;
            ((raw.ceil() as usize) + 7) / 8 * 8
        };

        let thetas: Vec<f64> = (0..n_theta)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64)
            .collect();
        let cos_theta: Vec<f64> = thetas.iter().map(|t| t.cos()).collect();
        let sin_theta: Vec<f64> = thetas.iter().map(|t| t.sin()).collect();

        // sqrt(n!/(n+d)!) tables per active diagonal.
        let ln_fact = ln_factorial_table(dim + 1);
        let ratio: Vec<Vec<f64>> = active_d
            .iter()
            .map(|&d| {
                (0..dim - d)
                    .map(|n| (0.5 * (ln_fact[n] - ln_fact[n + d])).exp())
                    .collect()
            })
            .collect();

        let dtheta = 2.0 * std::f64::consts::PI / n_theta as f64;
        for (i, w) in rweights.iter_mut().enumerate() {
            *w *= radii[i] * dtheta / std::f64::consts::PI;
        }

        // χ on each ring, assembled from per-diagonal radial profiles.
        let ring =
            |r: f64, out: &mut Vec<C64>| {
                out.clear();
                out.resize(n_theta, C64::new(0.0, 0.0));
                let x = r * r;
                let damp = (-0.5 * x).exp();
                let mut lag = Vec::new();
                for (slot, &d) in active_d.iter().enumerate() {
                    laguerre_row(dim - 1 - d, d, x, &mut lag);
                    let mut z = C64::new(0.0, 0.0);
                    for n in 0..dim - d {
                        z += rho.get(n, n + d) * ratio[slot][n] * lag[n];
                    }
                    let rd = r.powi(d as i32) * damp;
                    if d == 0 {
                        for j in 0..n_theta {
                            out[j] += z * rd;
                        }
                    } else {
                        // ρ_{n,n+d}⟨n+d|D|n⟩ pairs with its conjugate as
                        // z ξ^d + (−1)^d conj(z ξ^d) with ξ^d = r^d e^(idθ).
                        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
                        for j in 0..n_theta {
                            let phase = C64::new(
                                (d as f64 * thetas[j]).cos(),
                                (d as f64 * thetas[j]).sin(),
                            );
                            let term = z * rd * phase;
                            out[j] += term + sign * term.conj();
                        }
                    }
                }
            };

        let kernel: Vec<C64> = (0..n_r)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut chi = Vec::new();
                ring(radii[i], &mut chi);
                let env = (0.5 * s * radii[i] * radii[i]).exp() * rweights[i];
                chi.into_iter().map(move |c| c * env).collect::<Vec<_>>()
            })
            .collect();

        // Tail diagnostic at the cutoff radius itself.
        let mut chi_edge = Vec::new();
        ring(cutoff, &mut chi_edge);
        let env_edge = (0.5 * s * cutoff * cutoff).exp();
        let tail = chi_edge
            .iter()
            .map(|c| (c * env_edge).norm())
            .fold(0.0f64, f64::max);
        if tail > 1e-8 {
            return Err(Error::NonConvergence(format!(
                "integrand tail {tail:.3e} at cutoff radius {cutoff:.3} exceeds 1e-8"
            )));
        }

        Ok(Self {
            s,
            radii,
            cos_theta,
            sin_theta,
            kernel,
            n_theta,
            cutoff,
            tail,
        })
    }

    pub fn cutoff_radius(&self) -> f64 {
        self.cutoff
    }

    pub fn tail_magnitude(&self) -> f64 {
        self.tail
    }

    pub fn ordering(&self) -> f64 {
        self.s
    }

    /// W(α, s) for one phase-space point.
    pub fn eval(&self, alpha: C64) -> f64 {
        // e^(αξ* − α*ξ) = e^(−2i r u) with u = Im(α* e^(iθ)).
        let mut acc = C64::new(0.0, 0.0);
        for (i, &r) in self.radii.iter().enumerate() {
            let row = &self.kernel[i * self.n_theta..(i + 1) * self.n_theta];
            let mut ring_sum = C64::new(0.0, 0.0);
            for j in 0..self.n_theta {
                let u = alpha.re * self.sin_theta[j] - alpha.im * self.cos_theta[j];
                let (sn, cs) = (-2.0 * r * u).sin_cos();
                let k = row[j];
                ring_sum += C64::new(k.re * cs - k.im * sn, k.re * sn + k.im * cs);
            }
            acc += ring_sum;
        }
        acc.re
    }

    /// Evaluate many points in parallel, preserving input order.
    pub fn eval_many(&self, alphas: &[C64]) -> Vec<f64> {
        alphas.par_iter().map(|&a| self.eval(a)).collect()
    }
}

/// One-shot oracle evaluation of W(α, s) by characteristic-function
/// quadrature.
pub fn w_via_charfn(rho: &FockDensityMatrix, alpha: C64, s: f64) -> Result<f64> {
    let oracle = CharFnOracle::new(rho, s, alpha.norm())?;
    Ok(oracle.eval(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasespace::closed::ClosedForm;
    use crate::phasespace::symbols::w_eval;
    use crate::states::FockDensityMatrix;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn vacuum_wigner_origin() {
        let vac = FockDensityMatrix::vacuum(6);
        let got = w_via_charfn(&vac, c(0.0, 0.0), 0.0).unwrap();
        assert!((got - 2.0).abs() < 1e-6, "got {got}");
    }

    #[test]
    fn fock_one_wigner_origin() {
        let one = FockDensityMatrix::fock(1, 6).unwrap();
        let got = w_via_charfn(&one, c(0.0, 0.0), 0.0).unwrap();
        assert!((got + 2.0).abs() < 1e-6, "got {got}");
    }

    #[test]
    fn coherent_q_function_point() {
        let state = FockDensityMatrix::coherent(c(1.0, 0.0), 24).unwrap();
        let got = w_via_charfn(&state, c(1.0, 0.0), -1.0).unwrap();
        assert!((got - 1.0).abs() < 1e-6, "got {got}");
    }

    #[test]
    fn thermal_matches_closed_form() {
        let th = FockDensityMatrix::thermal(1.0, 40).unwrap();
        let form = ClosedForm::Thermal { nbar: 1.0 };
        let oracle = CharFnOracle::new(&th, -0.5, 3.0).unwrap();
        for alpha in [c(0.0, 0.0), c(1.0, 1.0), c(-2.0, 0.5)] {
            let got = oracle.eval(alpha);
            let want = form.eval(alpha, -0.5).unwrap();
            assert!((got - want).abs() < 1e-7, "{got} vs {want}");
        }
    }

    #[test]
    fn pairing_pinned_by_off_diagonal_state() {
        // (|0> + |1>)/sqrt(2) exposes the n ↔ α* pairing: a swapped
        // convention flips the sign of the interference term.
        let amps = [c(1.0, 0.0), c(1.0, 0.0)];
        let plus = FockDensityMatrix::superpose(&amps).unwrap();
        for s in [-1.0, -0.5, 0.0] {
            for alpha in [c(0.8, 0.0), c(0.0, 0.8), c(0.5, -0.7)] {
                let direct = w_eval(&plus, alpha, s).unwrap();
                let oracle = w_via_charfn(&plus, alpha, s).unwrap();
                assert!(
                    (direct - oracle).abs() < 1e-6,
                    "s={s} alpha={alpha}: {direct} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn positive_s_with_damped_cutoff() {
        let vac = FockDensityMatrix::vacuum(6);
        let got = w_via_charfn(&vac, c(0.3, 0.0), 0.5).unwrap();
        let want = ClosedForm::Vacuum.eval(c(0.3, 0.0), 0.5).unwrap();
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        assert!(w_via_charfn(&vac, c(0.0, 0.0), 1.0).is_err());
    }
}
