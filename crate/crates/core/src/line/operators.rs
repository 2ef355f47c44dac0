//! Discretized operators on the half-line grid `ξ_j = j·h`.
//!
//! Elements of the Hardy space are represented by `f̂(ξ_j)`. Integrals over
//! `[0, Ξ]` use trapezoid weights, so the Toeplitz sections are self-adjoint
//! for the weighted inner product `Σ w_j f_j ḡ_j`.

use num_complex::Complex64;

use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::line::field::{LineField, LineGrid};
use crate::spectral::HalfLineSpectrum;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `G = i d/dξ` with central differences inside and second-order one-sided
/// rows at both ends.
#[derive(Clone, Copy, Debug)]
pub struct GOperator {
    grid: LineGrid,
}

impl GOperator {
    pub fn new(grid: LineGrid) -> Self {
        Self { grid }
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let m = self.grid.last_index();
        assert_eq!(f.len(), m + 1, "vector does not match the grid");
        let s = I / (2.0 * self.grid.step());
        let mut out = vec![ZERO; m + 1];
        out[0] = s * (-3.0 * f[0] + 4.0 * f[1] - f[2]);
        for j in 1..m {
            out[j] = s * (f[j + 1] - f[j - 1]);
        }
        out[m] = s * (3.0 * f[m] - 4.0 * f[m - 1] + f[m - 2]);
        out
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.grid.node_count();
        let mut g = CMatrix::zeros(n, n);
        let mut e = vec![ZERO; n];
        for k in 0..n {
            e[k] = Complex64::new(1.0, 0.0);
            for (j, v) in self.apply(&e).into_iter().enumerate() {
                g[(j, k)] = v;
            }
            e[k] = ZERO;
        }
        g
    }
}

pub fn g_matrix(grid: &LineGrid) -> Result<CMatrix> {
    grid.require_resolving()?;
    Ok(GOperator::new(*grid).to_dense())
}

/// `(T f)_j = Σ_k K(j − k) w_k f_k` with `K(m) = b̂(m·h)/2π`.
#[derive(Clone, Debug)]
pub struct LineToeplitz {
    grid: LineGrid,
    /// `K(m)` for `m = −M..=M`.
    kernel: Vec<Complex64>,
    weights: Vec<f64>,
}

impl LineToeplitz {
    /// Two-sided symbol samples `b̂(m·h)`, `m = −M..=M`.
    pub fn from_symbol_samples(grid: LineGrid, samples: &[Complex64]) -> Result<Self> {
        let expected = 2 * grid.last_index() + 1;
        if samples.len() != expected {
            return Err(Error::Configuration(format!(
                "Toeplitz symbol needs {expected} two-sided samples, got {}",
                samples.len()
            )));
        }
        let scale = 1.0 / (2.0 * std::f64::consts::PI);
        Ok(Self {
            grid,
            kernel: samples.iter().map(|s| s * scale).collect(),
            weights: grid.weights(),
        })
    }

    pub fn from_symbol(grid: LineGrid, symbol: impl Fn(f64) -> Complex64) -> Self {
        let m = grid.last_index() as i64;
        let samples: Vec<Complex64> = (-m..=m).map(|k| symbol(k as f64 * grid.step())).collect();
        Self::from_symbol_samples(grid, &samples).expect("sample count matches by construction")
    }

    /// `T_u`.
    pub fn of_field(u: &LineField, grid: LineGrid) -> Self {
        Self::from_symbol(grid, |xi| u.transform(xi))
    }

    /// `T_{|D|u}`.
    pub fn of_abs_derivative(u: &LineField, grid: LineGrid) -> Self {
        Self::from_symbol(grid, |xi| u.transform(xi) * xi.abs())
    }

    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }

    /// `K(offset)` for `|offset| ≤ M`.
    pub fn kernel(&self, offset: i64) -> Complex64 {
        self.kernel[(offset + self.grid.last_index() as i64) as usize]
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let n = self.grid.node_count();
        assert_eq!(f.len(), n, "vector does not match the grid");
        let wf: Vec<Complex64> = f.iter().zip(&self.weights).map(|(v, w)| v * w).collect();
        let m = self.grid.last_index();
        (0..n)
            .map(|j| {
                // K(j − k) for k = 0..n sits at kernel[j + M − k].
                let base = j + m;
                wf.iter().enumerate().map(|(k, v)| self.kernel[base - k] * v).sum()
            })
            .collect()
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.grid.node_count();
        CMatrix::from_fn(n, n, |j, k| self.kernel(j as i64 - k as i64) * self.weights[k])
    }
}

/// `L = D − T_u` where `D` multiplies by `ξ`.
#[derive(Clone, Debug)]
pub struct LineLax {
    t: LineToeplitz,
}

impl LineLax {
    pub fn new(u: &LineField, grid: LineGrid) -> Self {
        Self {
            t: LineToeplitz::of_field(u, grid),
        }
    }

    pub fn toeplitz(&self) -> &LineToeplitz {
        &self.t
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let grid = self.t.grid();
        let tf = self.t.apply(f);
        f.iter()
            .zip(tf)
            .enumerate()
            .map(|(j, (v, w))| v * grid.node(j) - w)
            .collect()
    }

    pub fn to_dense(&self) -> CMatrix {
        let grid = *self.t.grid();
        let mut a = self.t.to_dense().scale(Complex64::new(-1.0, 0.0));
        for j in 0..grid.node_count() {
            a[(j, j)] += grid.node(j);
        }
        a
    }
}

pub fn lax_line(u: &LineField, grid: &LineGrid) -> LineLax {
    LineLax::new(u, *grid)
}

/// `B = i(T_{|D|u} − T_u T_u)`.
#[derive(Clone, Debug)]
pub struct LineB {
    t: LineToeplitz,
    t_abs: LineToeplitz,
}

impl LineB {
    pub fn new(u: &LineField, grid: LineGrid) -> Self {
        Self {
            t: LineToeplitz::of_field(u, grid),
            t_abs: LineToeplitz::of_abs_derivative(u, grid),
        }
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let a = self.t_abs.apply(f);
        let b = self.t.apply(&self.t.apply(f));
        a.into_iter().zip(b).map(|(x, y)| I * (x - y)).collect()
    }
}

pub fn b_line(u: &LineField, grid: &LineGrid) -> LineB {
    LineB::new(u, *grid)
}

/// How `f̂(0⁺)` is read off a grid function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IplusStencil {
    /// The node value `f_0`.
    #[default]
    Node,
    /// Quadratic extrapolation from `f_1, f_2, f_3`.
    Extrapolated,
}

impl IplusStencil {
    pub fn width(self) -> usize {
        match self {
            IplusStencil::Node => 1,
            IplusStencil::Extrapolated => 3,
        }
    }

    pub fn apply(self, values: &[Complex64]) -> Complex64 {
        match self {
            IplusStencil::Node => values[0],
            IplusStencil::Extrapolated => 3.0 * values[1] - 3.0 * values[2] + values[3],
        }
    }
}

/// `I₊(f) = f̂(0⁺)`.
pub fn iplus(f: &HalfLineSpectrum) -> Complex64 {
    IplusStencil::Node.apply(f.values())
}

pub fn iplus_extrapolated(f: &HalfLineSpectrum) -> Complex64 {
    IplusStencil::Extrapolated.apply(f.values())
}

/// `‖WA − (WA)†‖_max` with `W = diag(weights)`.
pub fn weighted_hermitian_defect(a: &CMatrix, weights: &[f64]) -> f64 {
    let n = a.rows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in j..n {
            let lhs = a[(j, k)] * weights[j];
            let rhs = (a[(k, j)] * weights[k]).conj();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// `Σ w_j f_j ḡ_j / 2π`, the discrete `L²(ℝ)` pairing in frequency.
pub fn weighted_inner(f: &[Complex64], g: &[Complex64], weights: &[f64]) -> Complex64 {
    let s: Complex64 = f
        .iter()
        .zip(g)
        .zip(weights)
        .map(|((a, b), w)| a * b.conj() * *w)
        .sum();
    s / (2.0 * std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn small_grid() -> LineGrid {
        LineGrid::new(4.0, 0.1).unwrap()
    }

    #[test]
    fn g_differentiates_quadratics_exactly() {
        let grid = small_grid();
        let f: Vec<Complex64> = grid.nodes().iter().map(|&x| c(x * x - 3.0 * x + 1.0)).collect();
        let gf = GOperator::new(grid).apply(&f);
        for (j, v) in gf.iter().enumerate() {
            let expected = I * (2.0 * grid.node(j) - 3.0);
            assert!((v - expected).norm() < 1e-11, "row {j}");
        }
    }

    #[test]
    fn dense_g_matches_apply() {
        let grid = small_grid();
        let f: Vec<Complex64> = grid.nodes().iter().map(|&x| Complex64::from_polar(1.0, x)).collect();
        let a = g_matrix(&grid).unwrap().matvec(&f);
        let b = GOperator::new(grid).apply(&f);
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-13));
    }

    #[test]
    fn toeplitz_weighted_self_adjoint() {
        let grid = small_grid();
        let u = LineField::gaussian(1.0, 0.7).unwrap();
        let t = LineToeplitz::of_field(&u, grid).to_dense();
        assert!(weighted_hermitian_defect(&t, &grid.weights()) < 1e-15);
        // The plain matrix is not Hermitian because of the end weights.
        assert!(t.hermitian_defect() > 1e-4);
    }

    #[test]
    fn toeplitz_apply_matches_dense() {
        let grid = small_grid();
        let u = LineField::lorentzian(1.3).unwrap();
        let t = LineToeplitz::of_field(&u, grid);
        let f: Vec<Complex64> = grid.nodes().iter().map(|&x| Complex64::new((-x).exp(), x.sin())).collect();
        let a = t.to_dense().matvec(&f);
        let b = t.apply(&f);
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-13));
    }

    #[test]
    fn toeplitz_of_lorentzian_on_exponential() {
        // û₀ = 2πe^{−|ζ|}, f̂ = e^{−ξ}: (Tf)(ξ) = ξe^{−ξ} + (e^{−ξ} − e^{ξ−2Ξ})/2.
        // The part η < ξ has a constant integrand; the rest carries the
        // Euler–Maclaurin error (h²/12)·Δg′ ≤ h²/6.
        let u = LineField::lorentzian(1.0).unwrap();
        let errors: Vec<f64> = [0.05, 0.025]
            .iter()
            .map(|&h| {
                let grid = LineGrid::new(10.0, h).unwrap();
                let f: Vec<Complex64> = grid.nodes().iter().map(|&x| c((-x).exp())).collect();
                let tf = LineToeplitz::of_field(&u, grid).apply(&f);
                let err = tf
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let x = grid.node(j);
                        let exact = x * (-x).exp() + 0.5 * ((-x).exp() - (x - 20.0).exp());
                        (v - exact).norm()
                    })
                    .fold(0.0, f64::max);
                assert!(err <= h * h / 6.0, "h = {h}: {err}");
                err
            })
            .collect();
        let ratio = errors[0] / errors[1];
        assert!((3.8..4.2).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn lax_three_node_hand_check() {
        let grid = LineGrid::new(2.0, 1.0).unwrap();
        let u = LineField::lorentzian(1.0).unwrap();
        let l = lax_line(&u, &grid).to_dense();
        let w = [0.5, 1.0, 0.5];
        for j in 0..3 {
            for k in 0..3 {
                let d = if j == k { j as f64 } else { 0.0 };
                let expected = d - (-((j as f64) - (k as f64)).abs()).exp() * w[k];
                assert!((l[(j, k)] - c(expected)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn g_requires_resolving_grid() {
        assert!(g_matrix(&LineGrid::new(2.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn g_on_linear_and_exponential() {
        let grid = small_grid();
        let lin: Vec<Complex64> = grid.nodes().iter().map(|&x| c(x)).collect();
        let g = GOperator::new(grid).apply(&lin);
        assert!(g.iter().all(|v| (v - I).norm() < 1e-12));
        let errors: Vec<f64> = [0.1, 0.05]
            .iter()
            .map(|&h| {
                let grid = LineGrid::new(4.0, h).unwrap();
                let f: Vec<Complex64> = grid.nodes().iter().map(|&x| c((-x * x).exp())).collect();
                let g = GOperator::new(grid).apply(&f);
                g.iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let x = grid.node(j);
                        (v - I * (-2.0 * x * (-x * x).exp())).norm()
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        let ratio = errors[0] / errors[1];
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn toeplitz_rejects_one_sided_symbol() {
        let grid = small_grid();
        let one_sided = vec![c(1.0); grid.node_count()];
        assert!(matches!(
            LineToeplitz::from_symbol_samples(grid, &one_sided),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn lax_of_zero_multiplies_by_xi() {
        let grid = small_grid();
        let l = lax_line(&LineField::zero(), &grid);
        let f = vec![c(1.0); grid.node_count()];
        let lf = l.apply(&f);
        for (j, v) in lf.iter().enumerate() {
            assert_eq!(*v, c(grid.node(j)));
        }
        assert!(l.to_dense().max_abs_diff(&CMatrix::from_diagonal(&lf)) == 0.0);
    }

    #[test]
    fn b_of_zero_vanishes() {
        let grid = small_grid();
        let b = b_line(&LineField::zero(), &grid);
        let f = vec![c(1.0); grid.node_count()];
        assert!(b.apply(&f).iter().all(|v| *v == ZERO));
    }

    #[test]
    fn iplus_stencils() {
        let s = HalfLineSpectrum::from_fn(0.1, 10, |x| c(2.0 + x - x * x));
        assert_eq!(iplus(&s), c(2.0));
        assert!((iplus_extrapolated(&s) - c(2.0)).norm() < 1e-13);
        let h = 0.01;
        let e = HalfLineSpectrum::from_fn(h, 10, |x| c((-x).exp()));
        assert!((iplus_extrapolated(&e) - c(1.0)).norm() < 2.0 * h * h * h);
        let xe = HalfLineSpectrum::from_fn(h, 10, |x| c(x * (-x).exp()));
        assert_eq!(iplus(&xe), c(0.0));
        assert!(iplus_extrapolated(&xe).norm() < 10.0 * h * h * h);
    }
}
