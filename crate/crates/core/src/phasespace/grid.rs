//! Phase-space sampling grids, tensor-trapezoid quadrature, Gaussian
//! smoothing between orderings, and the trace formula.
//!
//! Integrals over d²α/π use a tensor-product trapezoid rule on square
//! grids; the integrands are Gaussian-damped and smooth, so trapezoid at
//! the default resolution (201 per axis) carries the stated tolerances
//! with room to spare. Reductions run in a fixed order so repeated runs
//! are bit-identical.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::states::FockDensityMatrix;
use crate::C64;

use super::symbols;

/// Default nodes per axis for state-derived grids.
pub const DEFAULT_RESOLUTION: usize = 201;

/// Floor on the state-derived half-width; keeps boundary samples of
/// low-energy states below the support-containment threshold.
const HALF_WIDTH_FLOOR: f64 = 5.0;

/// Rectangular sampling of the complex α-plane with W values.
#[derive(Debug, Clone)]
pub struct PhaseGrid {
    pub center: C64,
    pub half_width: f64,
    pub resolution: usize,
    /// Ordering parameter the samples were taken at.
    pub s: f64,
    /// values[(ix, iy)] = W(center + (−hw + ix·h) + i(−hw + iy·h), s).
    values: Vec<f64>,
}

/// Pure geometry of a grid: everything except the samples.
#[derive(Debug, Clone, Copy)]
pub struct GridGeometry {
    pub center: C64,
    pub half_width: f64,
    pub resolution: usize,
}

impl GridGeometry {
    pub fn new(center: C64, half_width: f64, resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Domain(format!(
                "grid resolution must be >= 2, got {resolution}"
            )));
        }
        if !(half_width > 0.0) {
            return Err(Error::Domain(format!(
                "grid half-width must be positive, got {half_width}"
            )));
        }
        Ok(Self {
            center,
            half_width,
            resolution,
        })
    }

    /// Geometry sized for a state: half-width 2.5·sqrt(2⟨n⟩+1) (with a
    /// floor of 5) plus the centroid offset, centered on the origin so
    /// origin witnesses stay interior.
    pub fn for_state(state: &FockDensityMatrix, resolution: usize) -> Result<Self> {
        let mean_n = state.mean_photon_number().max(0.0);
        let offset = state.mean_amplitude().norm();
        let hw = (2.5 * (2.0 * mean_n + 1.0).sqrt()).max(HALF_WIDTH_FLOOR) + offset;
        Self::new(C64::new(0.0, 0.0), hw, resolution)
    }

    #[inline]
    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.resolution - 1) as f64
    }

    #[inline]
    pub fn node(&self, ix: usize, iy: usize) -> C64 {
        let h = self.step();
        C64::new(
            self.center.re - self.half_width + ix as f64 * h,
            self.center.im - self.half_width + iy as f64 * h,
        )
    }

    /// All nodes in row-major (ix outer, iy inner) order.
    pub fn nodes(&self) -> Vec<C64> {
        let r = self.resolution;
        let mut out = Vec::with_capacity(r * r);
        for ix in 0..r {
            for iy in 0..r {
                out.push(self.node(ix, iy));
            }
        }
        out
    }

    /// Trapezoid weight of axis index i (edges carry half weight).
    #[inline]
    fn axis_weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.resolution - 1 {
            0.5
        } else {
            1.0
        }
    }

    fn is_boundary(&self, ix: usize, iy: usize) -> bool {
        ix == 0 || iy == 0 || ix == self.resolution - 1 || iy == self.resolution - 1
    }
}

impl PhaseGrid {
    /// Sample W(·, s) of a Fock-basis state over the geometry.
    pub fn sample(state: &FockDensityMatrix, geom: &GridGeometry, s: f64) -> Result<Self> {
        let nodes = geom.nodes();
        let values = symbols::w_eval_many(state, &nodes, s)?;
        Self::from_values(geom, s, values)
    }

    /// Sample an arbitrary W function over the geometry.
    pub fn sample_fn(
        geom: &GridGeometry,
        s: f64,
        mut w: impl FnMut(C64) -> Result<f64>,
    ) -> Result<Self> {
        let r = geom.resolution;
        let mut values = Vec::with_capacity(r * r);
        for ix in 0..r {
            for iy in 0..r {
                values.push(w(geom.node(ix, iy))?);
            }
        }
        Self::from_values(geom, s, values)
    }

    fn from_values(geom: &GridGeometry, s: f64, values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Inconsistency(
                "grid contains non-finite W samples".into(),
            ));
        }
        Ok(Self {
            center: geom.center,
            half_width: geom.half_width,
            resolution: geom.resolution,
            s,
            values,
        })
    }

    pub fn geometry(&self) -> GridGeometry {
        GridGeometry {
            center: self.center,
            half_width: self.half_width,
            resolution: self.resolution,
        }
    }

    #[inline]
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[ix * self.resolution + iy]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// ∫ (d²α/π) W(α) by tensor trapezoid over the grid.
    pub fn integral(&self) -> f64 {
        let geom = self.geometry();
        let h = geom.step();
        let mut acc = 0.0f64;
        for ix in 0..self.resolution {
            let wx = geom.axis_weight(ix);
            let mut row = 0.0f64;
            for iy in 0..self.resolution {
                row += geom.axis_weight(iy) * self.value(ix, iy);
            }
            acc += wx * row;
        }
        acc * h * h / std::f64::consts::PI
    }

    /// Minimum sample together with its node index and whether the argmin
    /// sits on the grid boundary.
    pub fn min_sample(&self) -> (f64, (usize, usize), bool) {
        let mut best = f64::INFINITY;
        let mut arg = (0usize, 0usize);
        for ix in 0..self.resolution {
            for iy in 0..self.resolution {
                let v = self.value(ix, iy);
                if v < best {
                    best = v;
                    arg = (ix, iy);
                }
            }
        }
        let geom = self.geometry();
        (best, arg, geom.is_boundary(arg.0, arg.1))
    }

    /// Largest |W| over the boundary ring, the support-containment metric.
    pub fn boundary_max_abs(&self) -> f64 {
        let r = self.resolution;
        let mut best = 0.0f64;
        for i in 0..r {
            for (ix, iy) in [(0, i), (r - 1, i), (i, 0), (i, r - 1)] {
                best = best.max(self.value(ix, iy).abs());
            }
        }
        best
    }

    /// CSV serialization: header `re,im,w`, one node per line, 17
    /// significant digits, row-major node order.
    pub fn to_csv(&self) -> String {
        let geom = self.geometry();
        let mut out = String::with_capacity(self.values.len() * 64);
        out.push_str("re,im,w\n");
        for ix in 0..self.resolution {
            for iy in 0..self.resolution {
                let node = geom.node(ix, iy);
                let _ = writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e}",
                    node.re,
                    node.im,
                    self.value(ix, iy)
                );
            }
        }
        out
    }
}

/// Transform a sampled distribution downward in ordering:
///
/// ```text
/// W(α, s) = 2/(t−s) ∫ (d²β/π) exp(−2|β−α|²/(t−s)) W(β, t),   s < t.
/// ```
///
/// The Gaussian kernel is separable, so the two-dimensional trapezoid
/// quadrature factors into a row pass and a column pass. Output samples
/// share the source geometry. Errors when the kernel mass escaping the
/// source grid is not negligible (boundary samples above 1e−8) or when
/// the kernel is too narrow for the grid spacing to resolve.
pub fn smooth(grid: &PhaseGrid, s: f64) -> Result<PhaseGrid> {
    let t = grid.s;
    if !(s < t) {
        return Err(Error::Domain(format!(
            "smooth: target s = {s} must lie below source t = {t}"
        )));
    }
    let width = t - s;
    let geom = grid.geometry();
    let h = geom.step();
    // Kernel std dev per axis is sqrt(width)/2; below ~1.5 spacings the
    // discrete quadrature no longer resolves the kernel.
    let sigma = width.sqrt() / 2.0;
    if sigma < 1.5 * h {
        return Err(Error::KernelLeak(format!(
            "kernel width {sigma:.3e} under-resolved by grid step {h:.3e}; \
             refine the grid or reduce t − s"
        )));
    }
    let boundary = grid.boundary_max_abs();
    if boundary > 1e-8 {
        return Err(Error::KernelLeak(format!(
            "source boundary samples reach {boundary:.3e} (> 1e-8); \
             kernel mass outside the grid is not negligible"
        )));
    }

    let r = geom.resolution;
    // 1D kernel row k(d) = exp(−2 (d h)² / width) with trapezoid weights
    // folded in at application time.
    let kernel: Vec<f64> = (0..r)
        .map(|d| (-2.0 * (d as f64 * h).powi(2) / width).exp())
        .collect();

    // Row pass: convolve along iy for each ix.
    let mut mid = vec![0.0f64; r * r];
    for ix in 0..r {
        for iy in 0..r {
            let mut acc = 0.0f64;
            for jy in 0..r {
                let k = kernel[iy.abs_diff(jy)];
                acc += geom.axis_weight(jy) * k * grid.value(ix, jy);
            }
            mid[ix * r + iy] = acc;
        }
    }
    // Column pass: convolve along ix.
    let norm = 2.0 / width * h * h / std::f64::consts::PI;
    let mut values = vec![0.0f64; r * r];
    for iy in 0..r {
        for ix in 0..r {
            let mut acc = 0.0f64;
            for jx in 0..r {
                let k = kernel[ix.abs_diff(jx)];
                acc += geom.axis_weight(jx) * k * mid[jx * r + iy];
            }
            values[ix * r + iy] = acc * norm;
        }
    }
    Ok(PhaseGrid {
        center: grid.center,
        half_width: grid.half_width,
        resolution: grid.resolution,
        s,
        values,
    })
}

/// Phase-space trace formula Tr(FG) = ∫ (d²α/π) W_F(α, s) W_G(α, −s),
/// evaluated by quadrature on a grid covering both states.
pub fn trace_pair(
    f: &FockDensityMatrix,
    g: &FockDensityMatrix,
    s: f64,
    resolution: usize,
) -> Result<f64> {
    if s.abs() >= 1.0 {
        return Err(Error::Pole {
            s,
            pole: 1.0,
            family: "trace formula (needs |s| < 1)".into(),
        });
    }
    let geom_f = GridGeometry::for_state(f, resolution)?;
    let geom_g = GridGeometry::for_state(g, resolution)?;
    let hw = geom_f.half_width.max(geom_g.half_width);
    let geom = GridGeometry::new(C64::new(0.0, 0.0), hw, resolution)?;
    let grid_f = PhaseGrid::sample(f, &geom, s)?;
    let grid_g = PhaseGrid::sample(g, &geom, -s)?;
    // Containment check on the product's factors.
    let leak = grid_f.boundary_max_abs().max(grid_g.boundary_max_abs());
    if leak > 1e-6 {
        return Err(Error::GridCoverage(format!(
            "trace_pair boundary samples reach {leak:.3e}; widen the grid"
        )));
    }
    let h = geom.step();
    let mut acc = 0.0f64;
    for ix in 0..resolution {
        let wx = geom.axis_weight(ix);
        let mut row = 0.0f64;
        for iy in 0..resolution {
            row += geom.axis_weight(iy) * grid_f.value(ix, iy) * grid_g.value(ix, iy);
        }
        acc += wx * row;
    }
    Ok(acc * h * h / std::f64::consts::PI)
}
