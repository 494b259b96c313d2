//! s-parameterized symbols of Fock projectors and their sums over states.
//!
//! The symbol of |n⟩⟨m| at ordering s is
//!
//! ```text
//! w_nm(α, s) = f^(n+m+1) / sqrt(n! m!) · h_{n,m}(α*, α|κ) · exp(−f|α|²),
//! f = 2/(1 − s),   κ = (s² − 1)/4,
//! ```
//!
//! so W_ρ(α, s) = Σ ρ_nm w_nm(α, s). The index-to-argument pairing
//! (n ↔ α*) reproduces ⟨α|ρ|α⟩ at s = −1 and is pinned numerically by the
//! characteristic-function oracle. Prefactors are assembled in log space:
//! near s = 1 the magnitudes are astronomically large or small and naive
//! products would overflow long before the (finite) result does.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermite2d;
use crate::math::ln_factorial_table;
use crate::states::FockDensityMatrix;
use crate::C64;

/// Largest Hermiticity deviation tolerated by `w_eval` before the
/// internal-consistency error fires.
const HERMITICITY_TOL: f64 = 1e-12;

fn require_below_pole(s: f64) -> Result<()> {
    if s >= 1.0 {
        return Err(Error::Pole {
            s,
            pole: 1.0,
            family: "Fock-basis symbol".into(),
        });
    }
    Ok(())
}

/// s-parameterized symbol of the Fock projector |n⟩⟨m| at phase-space
/// point α. Total for s < 1; the prefactor pole sits at s = 1.
pub fn w_fock_element(n: usize, m: usize, alpha: C64, s: f64) -> Result<C64> {
    require_below_pole(s)?;
    let f = 2.0 / (1.0 - s);
    let kappa = (s * s - 1.0) / 4.0;
    let h = hermite2d::eval(n, m, alpha.conj(), alpha, C64::new(kappa, 0.0));
    let ln_pref = (n + m + 1) as f64 * f.ln()
        - f * alpha.norm_sqr()
        - 0.5 * (crate::math::ln_factorial(n) + crate::math::ln_factorial(m));
    Ok(scale_by_exp(h, ln_pref))
}

/// Multiply `z` by exp(ln_scale) without overflowing intermediates: the
/// magnitudes are combined in log space first.
#[inline]
fn scale_by_exp(z: C64, ln_scale: f64) -> C64 {
    let mag = z.norm();
    if mag == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let total = mag.ln() + ln_scale;
    let phase = z / mag;
    phase * total.exp()
}

/// W_ρ(α, s) = Σ ρ_nm w_nm(α, s) for a Hermitian ρ.
///
/// Hermitian index pairs are combined as 2 Re(ρ_nm w_nm), which makes the
/// imaginary residue vanish identically; the Hermiticity of ρ itself is
/// checked up front and violations surface as an internal-consistency
/// error. Diagonal states take an O(n_max) Laguerre path.
pub fn w_eval(rho: &FockDensityMatrix, alpha: C64, s: f64) -> Result<f64> {
    require_below_pole(s)?;
    let dev = rho.hermiticity_deviation();
    let scale = rho.trace().abs().max(1.0);
    if dev > HERMITICITY_TOL * scale {
        return Err(Error::Inconsistency(format!(
            "w_eval needs a Hermitian matrix; deviation {dev:.3e}"
        )));
    }
    if rho.is_diagonal() {
        let diag: Vec<f64> = (0..=rho.n_max()).map(|n| rho.get(n, n).re).collect();
        return Ok(w_eval_diagonal(&diag, alpha, s));
    }
    Ok(w_eval_general(rho, alpha, s))
}

/// W(0, s) through the diagonal-only reduction: h_{n,m}(0, 0|κ) vanishes
/// for n ≠ m, so only populations contribute,
/// W(0, s) = Σ_n ρ_nn (−1)^n ((s+1)/2)^n (2/(1−s))^(n+1).
pub fn w_eval_at_origin(rho: &FockDensityMatrix, s: f64) -> Result<f64> {
    require_below_pole(s)?;
    let diag: Vec<f64> = (0..=rho.n_max()).map(|n| rho.get(n, n).re).collect();
    Ok(origin_value_from_populations(&diag, s))
}

/// Same reduction from a bare population vector.
pub fn origin_value_from_populations(populations: &[f64], s: f64) -> f64 {
    let f = 2.0 / (1.0 - s);
    let x = -(1.0 + s) / (1.0 - s);
    // Horner over P(x) = sum rho_nn x^n.
    let mut p = 0.0f64;
    for &c in populations.iter().rev() {
        p = p * x + c;
    }
    f * p
}

/// Diagonal fast path: w_nn reduces to a Laguerre polynomial,
/// w_nn = f (f²κ)^n L_n(−|α|²/κ) e^{−f|α|²}, evaluated for all n by one
/// upward recurrence in the combined scale (f²κ)^n L_n.
pub(crate) fn w_eval_diagonal(populations: &[f64], alpha: C64, s: f64) -> f64 {
    let f = 2.0 / (1.0 - s);
    let kappa = (s * s - 1.0) / 4.0;
    let asq = alpha.norm_sqr();
    let damp_ln = f.ln() - f * asq;
    let n_top = populations.len() - 1;

    let mut acc;
    if kappa.abs() < 1e-14 {
        // kappa -> 0 (s = -1): w_nn = f^(2n+1) |α|^(2n) e^{-f|α|²} / n!.
        let mut t = 1.0f64;
        acc = populations[0] * t;
        for n in 0..n_top {
            t *= f * f * asq / (n as f64 + 1.0);
            acc += populations[n + 1] * t;
        }
    } else {
        let z = -asq / kappa;
        let fk = f * f * kappa;
        // t_n = (f²κ)^n L_n(z) via (n+1) t_{n+1} = fk (2n+1−z) t_n − n fk² t_{n−1}.
        let mut t_prev = 1.0f64;
        acc = populations[0] * t_prev;
        if n_top >= 1 {
            let mut t_cur = fk * (1.0 - z);
            acc += populations[1] * t_cur;
            for n in 1..n_top {
                let nf = n as f64;
                let t_next =
                    (fk * (2.0 * nf + 1.0 - z) * t_cur - nf * fk * fk * t_prev) / (nf + 1.0);
                t_prev = t_cur;
                t_cur = t_next;
                acc += populations[n + 1] * t_cur;
            }
        }
    }
    if acc.is_finite() {
        scale_by_exp(C64::new(acc, 0.0), damp_ln).re
    } else {
        // Extremely large intermediates; redo each term in log space.
        let mut total = 0.0f64;
        for (n, &p) in populations.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let w = w_fock_element(n, n, alpha, s).expect("s checked by caller");
            total += p * w.re;
        }
        total
    }
}

/// General path: one scaled Hermite table per phase-space point.
///
/// The table holds g_{n,m} = f^(n+m) h_{n,m}(α*, α|κ) / sqrt(n! m!) via
/// the same two-term recurrence as `hermite2d::table`, with the factorial
/// and prefactor scales folded into the seeds so the far corner stays
/// within f64 range on the working domain.
fn w_eval_general(rho: &FockDensityMatrix, alpha: C64, s: f64) -> f64 {
    let n_max = rho.n_max();
    let f = 2.0 / (1.0 - s);
    let kappa = (s * s - 1.0) / 4.0;
    let x = alpha.conj();
    let y = alpha;
    let dim = n_max + 1;
    let mut g = vec![C64::new(0.0, 0.0); dim * dim];
    // Row n = 0: g_{0,m} = (f y)^m / sqrt(m!).
    let mut seed = C64::new(1.0, 0.0);
    g[0] = seed;
    for m in 1..dim {
        seed = seed * y * f / (m as f64).sqrt();
        g[m] = seed;
    }
    let fx = x * f;
    let fk = f * f * kappa;
    for n in 0..n_max {
        let inv = 1.0 / ((n + 1) as f64).sqrt();
        let (prev, cur) = g.split_at_mut((n + 1) * dim);
        let prev_row = &prev[n * dim..(n + 1) * dim];
        let cur_row = &mut cur[..dim];
        cur_row[0] = fx * inv * prev_row[0];
        for m in 1..dim {
            cur_row[m] = fx * inv * prev_row[m]
                + fk * ((m as f64).sqrt() * inv) * prev_row[m - 1];
        }
    }
    // Hermitian pairing keeps the sum exactly real.
    let mut acc = 0.0f64;
    for n in 0..dim {
        acc += rho.get(n, n).re * g[n * dim + n].re;
        for m in (n + 1)..dim {
            acc += 2.0 * (rho.get(n, m) * g[n * dim + m]).re;
        }
    }
    if acc.is_finite() {
        scale_by_exp(C64::new(acc, 0.0), f.ln() - f * alpha.norm_sqr()).re
    } else {
        let ln_fact = ln_factorial_table(n_max);
        let mut total = 0.0f64;
        for n in 0..dim {
            for m in 0..dim {
                let r = rho.get(n, m);
                if r.norm() == 0.0 {
                    continue;
                }
                let h = hermite2d::eval(n, m, x, y, C64::new(kappa, 0.0));
                let ln_pref = (n + m + 1) as f64 * f.ln()
                    - f * alpha.norm_sqr()
                    - 0.5 * (ln_fact[n] + ln_fact[m]);
                total += (r * scale_by_exp(h, ln_pref)).re;
            }
        }
        total
    }
}

/// Evaluate W at many points, parallelized per node with a deterministic
/// gather order.
pub fn w_eval_many(rho: &FockDensityMatrix, alphas: &[C64], s: f64) -> Result<Vec<f64>> {
    require_below_pole(s)?;
    let dev = rho.hermiticity_deviation();
    if dev > HERMITICITY_TOL * rho.trace().abs().max(1.0) {
        return Err(Error::Inconsistency(format!(
            "w_eval needs a Hermitian matrix; deviation {dev:.3e}"
        )));
    }
    if rho.is_diagonal() {
        let diag: Vec<f64> = (0..=rho.n_max()).map(|n| rho.get(n, n).re).collect();
        Ok(alphas
            .par_iter()
            .map(|&a| w_eval_diagonal(&diag, a, s))
            .collect())
    } else {
        Ok(alphas
            .par_iter()
            .map(|&a| w_eval_general(rho, a, s))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::FockDensityMatrix;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn vacuum_symbol_is_gaussian() {
        // w_00(α, s) = (2/(1−s)) exp(−2|α|²/(1−s)).
        for s in [-1.0, -0.3, 0.0, 0.7] {
            for alpha in [c(0.0, 0.0), c(0.8, -0.4), c(-1.5, 2.0)] {
                let f = 2.0 / (1.0 - s);
                let want = f * (-f * alpha.norm_sqr()).exp();
                let got = w_fock_element(0, 0, alpha, s).unwrap();
                assert!((got.re - want).abs() <= 1e-13 * want.abs());
                assert!(got.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn fock_diagonal_at_origin_matches_closed_form() {
        // w_nn(0, s) = (−1)^n ((s+1)/2)^n (2/(1−s))^(n+1).
        for n in 0..6 {
            for s in [-0.9, -0.5, 0.0, 0.4, 0.9] {
                let want = (-1.0f64).powi(n as i32)
                    * ((s + 1.0) / 2.0).powi(n as i32)
                    * (2.0 / (1.0 - s)).powi(n as i32 + 1);
                let got = w_fock_element(n, n, c(0.0, 0.0), s).unwrap();
                assert!(
                    (got.re - want).abs() <= 1e-12 * want.abs().max(1.0),
                    "n={n} s={s}: {} vs {want}",
                    got.re
                );
            }
        }
        // The spec's spot value: w_11(0, 0) = −2.
        let w = w_fock_element(1, 1, c(0.0, 0.0), 0.0).unwrap();
        assert!((w.re + 2.0).abs() < 1e-14);
    }

    #[test]
    fn pole_is_rejected() {
        assert!(matches!(
            w_fock_element(0, 0, c(0.0, 0.0), 1.0),
            Err(Error::Pole { .. })
        ));
        let vac = FockDensityMatrix::vacuum(4);
        assert!(w_eval(&vac, c(0.0, 0.0), 1.2).is_err());
    }

    #[test]
    fn w_eval_known_points() {
        let vac = FockDensityMatrix::vacuum(8);
        assert!((w_eval(&vac, c(0.0, 0.0), 0.0).unwrap() - 2.0).abs() < 1e-14);

        let one = FockDensityMatrix::fock(1, 8).unwrap();
        assert!(w_eval(&one, c(0.0, 0.0), -1.0).unwrap().abs() < 1e-300);

        let th = FockDensityMatrix::thermal(1.0, 40).unwrap();
        let got = w_eval(&th, c(0.0, 0.0), 0.0).unwrap();
        // Thermal closed form W(0, s) = 2/(2 nbar + 1 − s).
        assert!((got - 2.0 / 3.0).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn vacuum_projection_identity() {
        // rho_00 equals W(0, −1) exactly: only the (0,0) symbol survives.
        let states = [
            FockDensityMatrix::coherent(c(1.0, 0.3), 32).unwrap(),
            FockDensityMatrix::thermal(0.7, 40).unwrap(),
            FockDensityMatrix::fock(2, 12).unwrap(),
        ];
        for state in &states {
            let q0 = w_eval(state, c(0.0, 0.0), -1.0).unwrap();
            assert!(
                (q0 - state.get(0, 0).re).abs() <= 1e-10,
                "{} vs {}",
                q0,
                state.get(0, 0).re
            );
        }
    }

    #[test]
    fn diagonal_and_general_paths_agree() {
        // Force the general path by adding a negligible but nonzero
        // off-diagonal element; values must match the diagonal path.
        let th = FockDensityMatrix::thermal(1.0, 40).unwrap();
        let mut m = th.matrix().clone();
        m[(0, 1)] = c(1e-13, 0.0);
        m[(1, 0)] = c(1e-13, 0.0);
        let tweaked = FockDensityMatrix::from_matrix(m, true).unwrap();
        for s in [-1.0, -0.5, 0.0, 0.5] {
            for alpha in [c(0.0, 0.0), c(1.3, -0.6), c(-2.5, 0.1)] {
                let a = w_eval(&th, alpha, s).unwrap();
                let b = w_eval(&tweaked, alpha, s).unwrap();
                assert!(
                    (a - b).abs() <= 1e-10 * a.abs().max(1.0),
                    "s={s} alpha={alpha}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn origin_reduction_matches_full_eval() {
        let states = [
            FockDensityMatrix::thermal(1.5, 64).unwrap(),
            FockDensityMatrix::coherent(c(0.9, 0.0), 32).unwrap(),
            FockDensityMatrix::fock(3, 12).unwrap(),
        ];
        for state in &states {
            for s in [-1.0, -0.4, 0.0, 0.3] {
                let a = w_eval_at_origin(state, s).unwrap();
                let b = w_eval(state, c(0.0, 0.0), s).unwrap();
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "s={s}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn hermiticity_violation_is_reported() {
        let mut m = FockDensityMatrix::vacuum(3).matrix().clone();
        m[(0, 1)] = c(0.2, 0.0);
        m[(1, 0)] = c(0.0, 0.0);
        let bad = FockDensityMatrix::from_matrix(m, false).unwrap();
        assert!(matches!(
            w_eval(&bad, c(0.3, 0.0), 0.0),
            Err(Error::Inconsistency(_))
        ));
    }

    #[test]
    fn superposition_symbol_is_real() {
        // |0><1| + |1><0| content exercises the Hermitian pairing.
        let amps = [c(1.0, 0.0), c(1.0, 0.0)];
        let plus = FockDensityMatrix::superpose(&amps).unwrap();
        for s in [-1.0, -0.2, 0.5] {
            for alpha in [c(0.4, 0.2), c(-1.0, 1.0)] {
                let w = w_eval(&plus, alpha, s).unwrap();
                assert!(w.is_finite());
            }
        }
        // At s = −1 the symbol is the Husimi function <α|ρ|α>: for
        // ψ = (|0> + |1>)/sqrt(2), <α|ψ> = e^{-|α|²/2}(1 + α*)/sqrt(2).
        let alpha = c(0.5, -0.3);
        let q = w_eval(&plus, alpha, -1.0).unwrap();
        let amp = (C64::new(1.0, 0.0) + alpha.conj()) / 2.0f64.sqrt();
        let explicit = (-alpha.norm_sqr()).exp() * amp.norm_sqr();
        assert!((q - explicit).abs() < 1e-12, "{q} vs {explicit}");
    }
}
