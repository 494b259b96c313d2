//! Quantum states as truncated Fock-basis density matrices.
//!
//! A [`FockDensityMatrix`] stores ρ_nm = ⟨n|ρ|m⟩ on a truncation chosen by
//! the caller; constructors guard the discarded tail mass so downstream
//! quadratures see the full state to the working tolerance. Photon
//! addition a†ρa and subtraction aρa† return *unnormalized* operators,
//! matching the unnormalized closed forms they are checked against;
//! normalization is a separate explicit step.
//!
//! Values are immutable after construction; every operation returns a new
//! matrix, so they are safe to share across workers.

use ndarray::Array2;
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::C64;

const TAIL_TOLERANCE: f64 = 1e-10;

/// Truncated Fock-basis density matrix.
#[derive(Debug, Clone)]
pub struct FockDensityMatrix {
    n_max: usize,
    rho: Array2<C64>,
    normalized: bool,
}

impl FockDensityMatrix {
    /// Wrap a raw matrix. The matrix must be square; Hermiticity is the
    /// caller's responsibility and is checked where it matters.
    pub fn from_matrix(rho: Array2<C64>, normalized: bool) -> Result<Self> {
        if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
            return Err(Error::Shape(format!(
                "density matrix must be square and nonempty, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        Ok(Self {
            n_max: rho.nrows() - 1,
            rho,
            normalized,
        })
    }

    /// Fock state |n⟩⟨n| on a truncation of n_max + 1 levels.
    pub fn fock(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::Truncation {
                context: format!("fock({n})"),
                required: n,
                given: n_max,
            });
        }
        let mut rho = Array2::<C64>::zeros((n_max + 1, n_max + 1));
        rho[(n, n)] = C64::new(1.0, 0.0);
        Ok(Self {
            n_max,
            rho,
            normalized: true,
        })
    }

    /// Vacuum projector |0⟩⟨0|.
    pub fn vacuum(n_max: usize) -> Self {
        Self::fock(0, n_max).expect("vacuum always fits")
    }

    /// Coherent state |α⟩⟨α| with Poisson amplitudes, renormalized to unit
    /// trace after truncation. Errors when the discarded Poisson tail
    /// exceeds 1e-10, naming the truncation that would suffice.
    pub fn coherent(alpha: C64, n_max: usize) -> Result<Self> {
        let asq = alpha.norm_sqr();
        // Poisson tail mass beyond n_max.
        let mut kept = 0.0f64;
        let mut weight = (-asq).exp();
        for _n in 0..=n_max {
            kept += weight;
            weight *= asq / (_n as f64 + 1.0);
        }
        let tail = (1.0 - kept).max(0.0);
        if tail >= TAIL_TOLERANCE {
            let mut required = n_max;
            let mut k = kept;
            let mut w = weight;
            while 1.0 - k >= TAIL_TOLERANCE && required < 4096 {
                required += 1;
                k += w;
                w *= asq / (required as f64 + 1.0);
            }
            return Err(Error::Truncation {
                context: format!("coherent(|alpha|^2 = {asq:.3})"),
                required,
                given: n_max,
            });
        }
        // Amplitudes c_n = e^{-|a|^2/2} alpha^n / sqrt(n!), built by ratio.
        let mut amps = Vec::with_capacity(n_max + 1);
        let mut c = C64::new((-0.5 * asq).exp(), 0.0);
        for n in 0..=n_max {
            amps.push(c);
            c = c * alpha / ((n as f64 + 1.0).sqrt());
        }
        let mut rho = Array2::<C64>::zeros((n_max + 1, n_max + 1));
        for n in 0..=n_max {
            for m in 0..=n_max {
                rho[(n, m)] = amps[n] * amps[m].conj();
            }
        }
        let mut state = Self {
            n_max,
            rho,
            normalized: false,
        };
        state = state.normalize()?;
        Ok(state)
    }

    /// Thermal state with mean photon number n̄: ρ_nn = n̄^n/(1+n̄)^(n+1),
    /// renormalized after truncation. The geometric tail beyond n_max must
    /// be below 1e-10.
    pub fn thermal(nbar: f64, n_max: usize) -> Result<Self> {
        if nbar < 0.0 {
            return Err(Error::Domain(format!("thermal: nbar = {nbar} < 0")));
        }
        if nbar == 0.0 {
            return Ok(Self::vacuum(n_max));
        }
        let q = nbar / (1.0 + nbar);
        let tail = q.powi(n_max as i32 + 1);
        if tail >= TAIL_TOLERANCE {
            let required = (TAIL_TOLERANCE.ln() / q.ln()).ceil() as usize;
            return Err(Error::Truncation {
                context: format!("thermal(nbar = {nbar})"),
                required,
                given: n_max,
            });
        }
        let mut rho = Array2::<C64>::zeros((n_max + 1, n_max + 1));
        let mut p = 1.0 / (1.0 + nbar);
        for n in 0..=n_max {
            rho[(n, n)] = C64::new(p, 0.0);
            p *= q;
        }
        let state = Self {
            n_max,
            rho,
            normalized: false,
        };
        state.normalize()
    }

    /// Truncation level; the matrix is (n_max + 1) x (n_max + 1).
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Borrow the raw matrix.
    pub fn matrix(&self) -> &Array2<C64> {
        &self.rho
    }

    /// Whether the state was normalized at construction (or by
    /// [`FockDensityMatrix::normalize`]).
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Element ρ_nm.
    #[inline]
    pub fn get(&self, n: usize, m: usize) -> C64 {
        self.rho[(n, m)]
    }

    /// Tr ρ.
    pub fn trace(&self) -> f64 {
        (0..=self.n_max).map(|n| self.rho[(n, n)].re).sum()
    }

    /// Mean photon number Tr(ρ a†a) of the stored (possibly unnormalized)
    /// matrix divided by its trace.
    pub fn mean_photon_number(&self) -> f64 {
        let tr = self.trace();
        if tr.abs() < 1e-300 {
            return 0.0;
        }
        (0..=self.n_max)
            .map(|n| n as f64 * self.rho[(n, n)].re)
            .sum::<f64>()
            / tr
    }

    /// First moment Tr(ρ a) / Tr ρ, the phase-space centroid.
    pub fn mean_amplitude(&self) -> C64 {
        let tr = self.trace();
        if tr.abs() < 1e-300 {
            return C64::new(0.0, 0.0);
        }
        let mut acc = C64::new(0.0, 0.0);
        for n in 1..=self.n_max {
            acc += (n as f64).sqrt() * self.rho[(n, n - 1)];
        }
        acc / tr
    }

    /// Maximum deviation from Hermiticity, max |ρ_nm - conj(ρ_mn)|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for n in 0..=self.n_max {
            for m in n..=self.n_max {
                dev = dev.max((self.rho[(n, m)] - self.rho[(m, n)].conj()).norm());
            }
        }
        dev
    }

    /// True when every off-diagonal entry is negligible relative to the
    /// diagonal scale; diagonal states admit much faster symbol evaluation.
    pub fn is_diagonal(&self) -> bool {
        let scale = (0..=self.n_max)
            .map(|n| self.rho[(n, n)].norm())
            .fold(0.0f64, f64::max)
            .max(1e-300);
        for n in 0..=self.n_max {
            for m in 0..=self.n_max {
                if n != m && self.rho[(n, m)].norm() > 1e-14 * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Unnormalized photon addition a†ρa. Returns the new operator and the
    /// truncation-leak metric: the trace weight of contributions pushed
    /// past the top level, (n_max + 1) ρ_{n_max, n_max}.
    pub fn photon_add(&self) -> (Self, f64) {
        let dim = self.n_max + 1;
        let mut out = Array2::<C64>::zeros((dim, dim));
        for n in 1..dim {
            for m in 1..dim {
                let factor = ((n as f64) * (m as f64)).sqrt();
                out[(n, m)] = factor * self.rho[(n - 1, m - 1)];
            }
        }
        let leak = (self.n_max as f64 + 1.0) * self.rho[(self.n_max, self.n_max)].re;
        (
            Self {
                n_max: self.n_max,
                rho: out,
                normalized: false,
            },
            leak,
        )
    }

    /// Unnormalized photon subtraction aρa†.
    pub fn photon_subtract(&self) -> Self {
        let dim = self.n_max + 1;
        let mut out = Array2::<C64>::zeros((dim, dim));
        for n in 0..dim - 1 {
            for m in 0..dim - 1 {
                let factor = (((n + 1) as f64) * ((m + 1) as f64)).sqrt();
                out[(n, m)] = factor * self.rho[(n + 1, m + 1)];
            }
        }
        Self {
            n_max: self.n_max,
            rho: out,
            normalized: false,
        }
    }

    /// Displaced state D†(β) ρ D(β), computed through the matrix
    /// exponential of the truncated generator β a† − β* a. Returns the
    /// state and the trace drift |Tr ρ' − Tr ρ| incurred by truncation.
    ///
    /// The truncation should satisfy n_max >= 4(|β|² + ⟨n⟩) + 10 for the
    /// drift to stay within 1e-8.
    pub fn displace(&self, beta: C64) -> (Self, f64) {
        let dim = self.n_max + 1;
        let mut gen = Array2::<C64>::zeros((dim, dim));
        for n in 0..dim - 1 {
            // a†|n> = sqrt(n+1)|n+1>, a|n+1> = sqrt(n+1)|n>.
            let f = ((n + 1) as f64).sqrt();
            gen[(n + 1, n)] = beta * f;
            gen[(n, n + 1)] = -beta.conj() * f;
        }
        let u = crate::math::expm(&gen);
        let udag = u.t().mapv(|z| z.conj());
        let out = udag.dot(&self.rho).dot(&u);
        let drift = ((0..dim).map(|n| out[(n, n)].re).sum::<f64>() - self.trace()).abs();
        (
            Self {
                n_max: self.n_max,
                rho: out,
                normalized: self.normalized && drift <= 1e-8,
            },
            drift,
        )
    }

    /// Rescale to unit trace. Errors when the trace is (near-)zero.
    pub fn normalize(&self) -> Result<Self> {
        let tr = self.trace();
        if tr.abs() < 1e-14 {
            return Err(Error::ZeroTrace { trace: tr });
        }
        let rho = self.rho.mapv(|z| z / tr);
        Ok(Self {
            n_max: self.n_max,
            rho,
            normalized: true,
        })
    }

    /// Convex combination of states on a common truncation. Weights must be
    /// nonnegative and sum to one within 1e-9.
    pub fn mix(states: &[Self], weights: &[f64]) -> Result<Self> {
        if states.is_empty() || states.len() != weights.len() {
            return Err(Error::Shape(format!(
                "mix: {} states vs {} weights",
                states.len(),
                weights.len()
            )));
        }
        let n_max = states[0].n_max;
        if states.iter().any(|s| s.n_max != n_max) {
            return Err(Error::Shape("mix: states have differing n_max".into()));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::Domain("mix: negative weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "mix: weights sum to {total}, expected 1 within 1e-9"
            )));
        }
        let dim = n_max + 1;
        let mut rho = Array2::<C64>::zeros((dim, dim));
        for (state, &w) in states.iter().zip(weights) {
            rho = rho + state.rho.mapv(|z| z * w);
        }
        Ok(Self {
            n_max,
            rho,
            normalized: true,
        })
    }

    /// Rank-one projector from Fock-basis amplitudes, normalized.
    pub fn superpose(amplitudes: &[C64]) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Shape("superpose: empty amplitude list".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq < 1e-14 {
            return Err(Error::ZeroTrace { trace: norm_sq });
        }
        let norm = norm_sq.sqrt();
        let dim = amplitudes.len();
        let mut rho = Array2::<C64>::zeros((dim, dim));
        for n in 0..dim {
            for m in 0..dim {
                rho[(n, m)] = amplitudes[n] * amplitudes[m].conj() / norm_sq;
            }
        }
        let _ = norm;
        Ok(Self {
            n_max: dim - 1,
            rho,
            normalized: true,
        })
    }
}

/// One entry in a [`StateSpec`] modifier pipeline.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum Modifier {
    AddPhoton,
    SubtractPhoton,
    Displace { re: f64, im: f64 },
    Normalize,
}

/// Declarative description of a state: a base kind, kind-dependent
/// parameters, and an ordered modifier pipeline. This is the parse target
/// of the CLI configuration.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub kind: StateKind,
    /// Truncation for Fock-basis construction.
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Fock index (kind = "fock").
    pub n: Option<usize>,
    /// Coherent amplitude (kind = "coherent").
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    /// Mean thermal photon number (kind = "thermal" or "spsts_closed_form").
    pub nbar: Option<f64>,
    /// Fock-basis amplitudes (kind = "superposition"), as [re, im] pairs.
    pub amplitudes: Option<Vec<[f64; 2]>>,
    /// Mixture components and weights (kind = "mixture").
    pub components: Option<Vec<StateSpec>>,
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub modifiers: Vec<Modifier>,
}

fn default_n_max() -> usize {
    32
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Fock,
    Coherent,
    Thermal,
    Superposition,
    Mixture,
    SpstsClosedForm,
}

impl StateSpec {
    /// Build the Fock-basis density matrix described by the spec, applying
    /// modifiers in order. `spsts_closed_form` has no Fock representation
    /// and returns a domain error here; it is served by the closed-form
    /// evaluators instead.
    pub fn build(&self) -> Result<FockDensityMatrix> {
        let base = match self.kind {
            StateKind::Fock => {
                let n = self
                    .n
                    .ok_or_else(|| Error::Domain("fock state needs field `n`".into()))?;
                FockDensityMatrix::fock(n, self.n_max)?
            }
            StateKind::Coherent => {
                let alpha = C64::new(self.alpha_re.unwrap_or(0.0), self.alpha_im.unwrap_or(0.0));
                FockDensityMatrix::coherent(alpha, self.n_max)?
            }
            StateKind::Thermal => {
                let nbar = self
                    .nbar
                    .ok_or_else(|| Error::Domain("thermal state needs field `nbar`".into()))?;
                FockDensityMatrix::thermal(nbar, self.n_max)?
            }
            StateKind::Superposition => {
                let amps = self.amplitudes.as_ref().ok_or_else(|| {
                    Error::Domain("superposition needs field `amplitudes`".into())
                })?;
                let amps: Vec<C64> = amps.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                FockDensityMatrix::superpose(&amps)?
            }
            StateKind::Mixture => {
                let comps = self
                    .components
                    .as_ref()
                    .ok_or_else(|| Error::Domain("mixture needs field `components`".into()))?;
                let weights = self
                    .weights
                    .as_ref()
                    .ok_or_else(|| Error::Domain("mixture needs field `weights`".into()))?;
                let built: Result<Vec<_>> = comps.iter().map(|c| c.build()).collect();
                FockDensityMatrix::mix(&built?, weights)?
            }
            StateKind::SpstsClosedForm => {
                return Err(Error::Domain(
                    "spsts_closed_form has no Fock-basis representation; use the closed form"
                        .into(),
                ));
            }
        };
        self.apply_modifiers(base)
    }

    fn apply_modifiers(&self, mut state: FockDensityMatrix) -> Result<FockDensityMatrix> {
        for modifier in &self.modifiers {
            state = match modifier {
                Modifier::AddPhoton => state.photon_add().0,
                Modifier::SubtractPhoton => state.photon_subtract(),
                Modifier::Displace { re, im } => state.displace(C64::new(*re, *im)).0,
                Modifier::Normalize => state.normalize()?,
            };
        }
        Ok(state)
    }
}

/// Purity Tr ρ², used by tests and the trace-formula cross-checks.
pub fn purity(state: &FockDensityMatrix) -> f64 {
    let rho = state.matrix();
    let prod = rho.dot(rho);
    (0..rho.nrows()).map(|n| prod[(n, n)].re).sum()
}

/// Tr(FG) by direct matrix product, the algebraic side of the phase-space
/// trace formula.
pub fn trace_product(f: &FockDensityMatrix, g: &FockDensityMatrix) -> Result<f64> {
    if f.n_max() != g.n_max() {
        return Err(Error::Shape("trace_product: differing n_max".into()));
    }
    let prod = f.matrix().dot(g.matrix());
    Ok((0..prod.nrows()).map(|n| prod[(n, n)].re).sum())
}
