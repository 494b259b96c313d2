//! Small numeric helpers: factorials, Gauss–Legendre rules, Laguerre
//! recurrences, and a dense matrix exponential.

use ndarray::Array2;

use crate::C64;

const MAX_EXACT_FACTORIAL: usize = 170;

/// n! as f64. Exact up to the f64 limit (n = 170), infinite beyond.
pub fn factorial(n: usize) -> f64 {
    if n > MAX_EXACT_FACTORIAL {
        return f64::INFINITY;
    }
    let mut acc = 1.0f64;
    for k in 2..=n {
        acc *= k as f64;
    }
    acc
}

/// ln(n!) accumulated as a running sum; relative error is a few ulps even
/// for n in the thousands, which is far below the quadrature tolerances.
pub fn ln_factorial(n: usize) -> f64 {
    let mut acc = 0.0f64;
    for k in 2..=n {
        acc += (k as f64).ln();
    }
    acc
}

/// Table of ln(k!) for k = 0..=n_max.
pub fn ln_factorial_table(n_max: usize) -> Vec<f64> {
    let mut table = vec![0.0f64; n_max + 1];
    let mut acc = 0.0f64;
    for k in 1..=n_max {
        acc += (k as f64).ln();
        table[k] = acc;
    }
    table
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [a, b].
///
/// Nodes are found by Newton iteration from the Chebyshev initial guess;
/// this is accurate to machine precision for the orders used here.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "gauss_legendre: need at least 2 nodes");
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Chebyshev guess for the i-th root of P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' by the three-term recurrence.
            let mut p0 = 1.0f64;
            let mut p1 = x;
            for k in 1..n {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    // Affine map [-1, 1] -> [a, b].
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    for i in 0..n {
        nodes[i] = mid + half * nodes[i];
        weights[i] *= half;
    }
    (nodes, weights)
}

/// Associated Laguerre values L_k^{(d)}(x) for k = 0..=k_max, by the stable
/// upward three-term recurrence.
pub fn laguerre_row(k_max: usize, d: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.reserve(k_max + 1);
    let df = d as f64;
    let mut prev = 1.0f64;
    out.push(prev);
    if k_max == 0 {
        return;
    }
    let mut cur = 1.0 + df - x;
    out.push(cur);
    for k in 1..k_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + df - x) * cur - (kf + df) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        out.push(cur);
    }
}

/// Dense matrix exponential by scaling-and-squaring with a Taylor core.
///
/// Accuracy is governed by scaling the 1-norm below 1/2 and summing the
/// series to machine precision; ample for the anti-Hermitian displacement
/// generators used here.
pub fn expm(m: &Array2<C64>) -> Array2<C64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "expm: square matrix required");
    let norm1 = (0..n)
        .map(|j| (0..n).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let mut squarings = 0u32;
    let mut scale = 1.0f64;
    if norm1 > 0.5 {
        squarings = (norm1 / 0.5).log2().ceil() as u32;
        scale = 2.0f64.powi(-(squarings as i32));
    }
    let a = m.mapv(|z| z * scale);
    let mut result = Array2::<C64>::eye(n);
    let mut term = Array2::<C64>::eye(n);
    for k in 1..64 {
        term = term.dot(&a).mapv(|z| z / (k as f64));
        result = result + &term;
        let tnorm = term.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        if tnorm < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert_eq!(factorial(10), 3628800.0);
    }

    #[test]
    fn ln_factorial_matches_direct() {
        for n in [0usize, 1, 2, 17, 64, 170] {
            let direct = factorial(n).ln();
            assert!(
                (ln_factorial(n) - direct).abs() <= 1e-10 * direct.abs().max(1.0),
                "n = {n}"
            );
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        // n-point GL is exact for degree 2n-1.
        let (x, w) = gauss_legendre(8, 0.0, 2.0);
        let integral: f64 = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| wi * (xi.powi(7) - 3.0 * xi.powi(3) + 1.0))
            .sum();
        // integral_0^2 of x^7 - 3x^3 + 1 dx = 32 - 12 + 2 = 22.
        assert!((integral - 22.0).abs() < 1e-12, "got {integral}");
    }

    #[test]
    fn gauss_legendre_gaussian_tail() {
        let (x, w) = gauss_legendre(200, 0.0, 8.0);
        let integral: f64 = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| wi * xi * (-xi * xi).exp())
            .sum();
        assert!((integral - 0.5).abs() < 1e-14);
    }

    #[test]
    fn laguerre_known_values() {
        let mut row = Vec::new();
        laguerre_row(3, 0, 0.5, &mut row);
        // L_0 = 1, L_1 = 1 - x, L_2 = 1 - 2x + x^2/2, L_3 = 1 - 3x + 3x^2/2 - x^3/6.
        assert!((row[0] - 1.0).abs() < 1e-15);
        assert!((row[1] - 0.5).abs() < 1e-15);
        assert!((row[2] - (1.0 - 1.0 + 0.125)).abs() < 1e-15);
        assert!((row[3] - (1.0 - 1.5 + 0.375 - 0.125 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn expm_rotation_block() {
        // exp of [[0, -t], [t, 0]] is a rotation by t.
        let t = 0.7f64;
        let m = array![
            [C64::new(0.0, 0.0), C64::new(-t, 0.0)],
            [C64::new(t, 0.0), C64::new(0.0, 0.0)]
        ];
        let e = expm(&m);
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-14);
        assert!((e[(1, 0)].re - t.sin()).abs() < 1e-14);
        assert!((e[(0, 1)].re + t.sin()).abs() < 1e-14);
    }
}
