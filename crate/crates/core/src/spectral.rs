//! Discrete function representations on the torus and the half-line frequency
//! axis, the Hardy projection, and Hermitian exponentials.
//!
//! Torus convention: `c_k = (1/2π)∫₀^{2π} u(x) e^{−ikx} dx`, so that the inner
//! product `⟨f|g⟩ = (1/2π)∫ f ḡ` makes `{e^{ikx}}` orthonormal.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::dense::{hermitian_eigen, CMatrix};
use crate::error::{Error, Result};

/// Conjugate-symmetry tolerance for a field to count as real.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Default bound on `‖A†A − I‖_max` for matrices tagged unitary.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;
/// Relative bound on the eigendecomposition reconstruction residual.
pub const EIG_TOLERANCE: f64 = 1e-11;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A real 2π-periodic field stored as its Fourier coefficients `c_{−N..=N}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTorusField")]
pub struct TorusField {
    max_mode: usize,
    coeffs: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawTorusField {
    max_mode: usize,
    coeffs: Vec<Complex64>,
}

impl TryFrom<RawTorusField> for TorusField {
    type Error = Error;

    fn try_from(raw: RawTorusField) -> Result<Self> {
        Self::from_coeffs(raw.max_mode, raw.coeffs)
    }
}

impl TorusField {
    /// Builds a field from coefficients listed for `k = −N..=N`.
    /// Fails if the coefficients are not conjugate symmetric.
    pub fn from_coeffs(max_mode: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * max_mode + 1 {
            return Err(Error::InvalidField(format!(
                "expected {} coefficients for max_mode {max_mode}, got {}",
                2 * max_mode + 1,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidField("non-finite coefficient".into()));
        }
        let field = Self { max_mode, coeffs };
        let defect = field.symmetry_defect();
        if defect > SYMMETRY_TOLERANCE {
            return Err(Error::InvalidField(format!(
                "conjugate symmetry violated by {defect:.3e}"
            )));
        }
        Ok(field)
    }

    /// Builds a field from its nonnegative modes `c_0..=c_N`; `c_0` must be real.
    pub fn from_positive_modes(positive: &[Complex64]) -> Result<Self> {
        if positive.is_empty() {
            return Err(Error::InvalidField("no modes given".into()));
        }
        if positive[0].im.abs() > SYMMETRY_TOLERANCE {
            return Err(Error::InvalidField(format!(
                "mean coefficient has imaginary part {:.3e}",
                positive[0].im
            )));
        }
        let n = positive.len() - 1;
        let mut coeffs = vec![ZERO; 2 * n + 1];
        coeffs[n] = Complex64::new(positive[0].re, 0.0);
        for k in 1..=n {
            coeffs[n + k] = positive[k];
            coeffs[n - k] = positive[k].conj();
        }
        Ok(Self { max_mode: n, coeffs })
    }

    /// Symmetrizes and stores; used where symmetry holds up to rounding.
    pub(crate) fn from_coeffs_symmetrized(max_mode: usize, mut coeffs: Vec<Complex64>) -> Self {
        let n = max_mode;
        for k in 1..=n {
            let avg = 0.5 * (coeffs[n + k] + coeffs[n - k].conj());
            coeffs[n + k] = avg;
            coeffs[n - k] = avg.conj();
        }
        coeffs[n].im = 0.0;
        Self { max_mode, coeffs }
    }

    pub fn zero(max_mode: usize) -> Self {
        Self {
            max_mode,
            coeffs: vec![ZERO; 2 * max_mode + 1],
        }
    }

    pub fn constant(max_mode: usize, c: f64) -> Self {
        let mut f = Self::zero(max_mode);
        f.coeffs[max_mode] = Complex64::new(c, 0.0);
        f
    }

    /// `a·cos(kx) + b·sin(kx)` accumulated onto `self`.
    pub fn add_trig(mut self, k: usize, a: f64, b: f64) -> Self {
        assert!(k >= 1 && k <= self.max_mode, "mode {k} outside 1..={}", self.max_mode);
        // a cos + b sin = ((a − ib)/2) e^{ikx} + ((a + ib)/2) e^{−ikx}
        let ck = Complex64::new(0.5 * a, -0.5 * b);
        self.coeffs[self.max_mode + k] += ck;
        self.coeffs[self.max_mode - k] += ck.conj();
        self
    }

    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    /// Coefficients for `k = −N..=N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_k`, zero outside the stored range.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.max_mode {
            ZERO
        } else {
            self.coeffs[(self.max_mode as i64 + k) as usize]
        }
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[self.max_mode].re
    }

    pub fn symmetry_defect(&self) -> f64 {
        let n = self.max_mode;
        let mut d = self.coeffs[n].im.abs();
        for k in 1..=n {
            d = d.max((self.coeffs[n + k] - self.coeffs[n - k].conj()).norm());
        }
        d
    }

    /// Zero-pads or truncates to a new maximal mode.
    pub fn with_max_mode(&self, max_mode: usize) -> Self {
        let mut out = Self::zero(max_mode);
        let m = self.max_mode.min(max_mode) as i64;
        for k in -m..=m {
            out.coeffs[(max_mode as i64 + k) as usize] = self.coeff(k);
        }
        out
    }

    /// `|D|u`, i.e. `c_k ↦ |k| c_k`.
    pub fn abs_derivative(&self) -> Self {
        let n = self.max_mode as i64;
        let coeffs = (-n..=n).map(|k| self.coeff(k) * k.unsigned_abs() as f64).collect();
        Self {
            max_mode: self.max_mode,
            coeffs,
        }
    }

    /// Largest `|k|` with a nonzero coefficient (0 for constants and zero).
    pub fn band_limit(&self) -> usize {
        (0..=self.max_mode)
            .rev()
            .find(|&k| self.coeff(k as i64) != ZERO)
            .unwrap_or(0)
    }

    /// `Σ_k |c_k|²`, the squared norm for the normalized measure.
    pub fn l2_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Samples at `x_j = 2πj/n`.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        let mut bins = vec![ZERO; n];
        let nn = self.max_mode as i64;
        for k in -nn..=nn {
            bins[k.rem_euclid(n as i64) as usize] += self.coeff(k);
        }
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(n).process(&mut bins);
        bins.into_iter().map(|c| c.re).collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            max_mode: self.max_mode,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }
}

/// A vector in the truncated torus Hardy space `span{e^{ikx} : 0 ≤ k ≤ N}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HardyTorusVector {
    coeffs: Vec<Complex64>,
}

impl HardyTorusVector {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "Hardy vector needs at least one mode");
        Self { coeffs }
    }

    /// The constant function 1, i.e. `e₀`.
    pub fn unit(max_mode: usize) -> Self {
        let mut coeffs = vec![ZERO; max_mode + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn max_mode(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn norm(&self) -> f64 {
        crate::dense::vec_norm(&self.coeffs)
    }

    /// `⟨self|other⟩ = Σ v_k conj(w_k)`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(ZERO, |acc, (a, b)| acc + a * b.conj())
    }
}

/// `Π`: keeps modes `0..=N` of a real field.
pub fn project_hardy(u: &TorusField) -> Result<HardyTorusVector> {
    let defect = u.symmetry_defect();
    if defect > SYMMETRY_TOLERANCE {
        return Err(Error::InvalidField(format!(
            "conjugate symmetry violated by {defect:.3e}"
        )));
    }
    Ok(HardyTorusVector::new(
        (0..=u.max_mode() as i64).map(|k| u.coeff(k)).collect(),
    ))
}

/// Samples of `Πu + conj(Πu) − mean` at `x_j = 2πj/n`.
pub fn synthesize_torus(p: &HardyTorusVector, mean: f64, n: usize) -> Vec<f64> {
    assert!(n > 0, "need at least one sample");
    let mut bins = vec![ZERO; n];
    for (k, &c) in p.coeffs().iter().enumerate() {
        bins[k % n] += c;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(&mut bins);
    bins.into_iter().map(|c| 2.0 * c.re - mean).collect()
}

/// Fourier coefficients of uniform samples on `[0, 2π)`; the maximal mode is
/// the largest `N` with `2N + 2 ≤ samples.len()`.
pub fn field_from_samples(samples: &[f64]) -> Result<TorusField> {
    if samples.len() < 4 {
        return Err(Error::Ingestion(format!(
            "need at least 4 samples, got {}",
            samples.len()
        )));
    }
    field_from_samples_with_modes(samples, (samples.len() - 2) / 2)
}

pub fn field_from_samples_with_modes(samples: &[f64], max_mode: usize) -> Result<TorusField> {
    let n = samples.len();
    if n < 2 * max_mode + 2 {
        return Err(Error::Ingestion(format!(
            "{n} samples cannot resolve max_mode {max_mode} (need {})",
            2 * max_mode + 2
        )));
    }
    if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
        return Err(Error::Ingestion(format!("non-finite sample at index {i}")));
    }
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let nm = max_mode as i64;
    let coeffs = (-nm..=nm)
        .map(|k| buf[k.rem_euclid(n as i64) as usize] * scale)
        .collect();
    Ok(TorusField::from_coeffs_symmetrized(max_mode, coeffs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorTag {
    Hermitian,
    AntiHermitian,
    Unitary,
    General,
}

/// A truncated operator on the torus Hardy space, with a structural tag.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    matrix: CMatrix,
    tag: OperatorTag,
}

impl OperatorMatrix {
    /// Fills the lower triangle from `f` and mirrors it, so `A = A†` exactly.
    pub fn hermitian_from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..i {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
            m[(i, i)] = Complex64::new(f(i, i).re, 0.0);
        }
        Self {
            matrix: m,
            tag: OperatorTag::Hermitian,
        }
    }

    /// Fills the lower triangle from `f` and mirrors it, so `A = −A†` exactly.
    pub fn antihermitian_from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..i {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = -v.conj();
            }
            m[(i, i)] = Complex64::new(0.0, f(i, i).im);
        }
        Self {
            matrix: m,
            tag: OperatorTag::AntiHermitian,
        }
    }

    pub fn general(matrix: CMatrix) -> Self {
        assert!(matrix.is_square());
        Self {
            matrix,
            tag: OperatorTag::General,
        }
    }

    /// Tags `matrix` unitary after checking `‖A†A − I‖_max ≤ tolerance`.
    pub fn unitary(matrix: CMatrix, tolerance: f64) -> Result<Self> {
        let defect = unitarity_defect(&matrix);
        if defect > tolerance {
            return Err(Error::LinearAlgebra {
                what: "matrix is not unitary".into(),
                residual: defect,
            });
        }
        Ok(Self {
            matrix,
            tag: OperatorTag::Unitary,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: CMatrix::identity(n),
            tag: OperatorTag::Unitary,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn tag(&self) -> OperatorTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &HardyTorusVector) -> HardyTorusVector {
        HardyTorusVector::new(self.matrix.matvec(v.coeffs()))
    }
}

pub fn unitarity_defect(u: &CMatrix) -> f64 {
    u.adjoint().matmul(u).max_abs_diff(&CMatrix::identity(u.rows()))
}

/// Spectral decomposition `A = V Λ V†` of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    eigenvectors: OperatorMatrix,
}

impl EigenSystem {
    pub fn new(a: &OperatorMatrix) -> Result<Self> {
        if a.tag() != OperatorTag::Hermitian {
            return Err(Error::LinearAlgebra {
                what: format!("eigendecomposition needs a Hermitian operator, got {:?}", a.tag()),
                residual: a.matrix().hermitian_defect(),
            });
        }
        let (eigenvalues, vecs) = hermitian_eigen(a.matrix());
        let lam: Vec<Complex64> = eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)).collect();
        let rebuilt = scale_columns(&vecs, &lam).matmul(&vecs.adjoint());
        let scale = a.matrix().max_abs().max(f64::MIN_POSITIVE);
        let residual = rebuilt.max_abs_diff(a.matrix()) / scale;
        if residual > EIG_TOLERANCE {
            return Err(Error::LinearAlgebra {
                what: "eigendecomposition reconstruction".into(),
                residual,
            });
        }
        let n = vecs.rows();
        let eigenvectors = OperatorMatrix::unitary(vecs, UNITARITY_TOLERANCE.max(1e-14 * n as f64))?;
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &OperatorMatrix {
        &self.eigenvectors
    }

    /// `V f(Λ) V†`.
    pub fn apply_function(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let v = self.eigenvectors.matrix();
        let d: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        scale_columns(v, &d).matmul(&v.adjoint())
    }
}

fn scale_columns(m: &CMatrix, d: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] * d[j])
}

/// `e^{iτA}` for Hermitian `A`, computed from its eigendecomposition.
pub fn hermitian_evolution(a: &OperatorMatrix, tau: f64) -> Result<OperatorMatrix> {
    let eig = EigenSystem::new(a)?;
    evolution_from_eigensystem(&eig, tau)
}

pub fn evolution_from_eigensystem(eig: &EigenSystem, tau: f64) -> Result<OperatorMatrix> {
    let u = eig.apply_function(|l| Complex64::from_polar(1.0, tau * l));
    // Rounding in V e^{iτΛ} V† grows like n·ε.
    let tolerance = UNITARITY_TOLERANCE.max(1e-14 * u.rows() as f64).min(1e-10);
    OperatorMatrix::unitary(u, tolerance)
}

/// Samples `f̂(ξ_j)` at `ξ_j = j·h`, `j = 0..=M`, of a line Hardy function.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfLineSpectrum {
    step: f64,
    values: Vec<Complex64>,
}

impl HalfLineSpectrum {
    pub fn new(step: f64, values: Vec<Complex64>) -> Self {
        assert!(step > 0.0 && values.len() >= 2);
        Self { step, values }
    }

    pub fn from_fn(step: f64, nodes: usize, f: impl Fn(f64) -> Complex64) -> Self {
        Self::new(step, (0..nodes).map(|j| f(j as f64 * step)).collect())
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn cutoff(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }

    /// Index of the last node, `M`.
    pub fn last_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |j| j as f64 * self.step)
    }

    /// `|f̂(ξ_M)| / max |f̂|`.
    pub fn tail_ratio(&self) -> f64 {
        let max = crate::dense::vec_max_abs(&self.values);
        if max == 0.0 {
            0.0
        } else {
            self.values[self.values.len() - 1].norm() / max
        }
    }

    pub fn check_tail(&self, tolerance: f64) -> Result<()> {
        let r = self.tail_ratio();
        if r > tolerance {
            return Err(Error::Configuration(format!(
                "spectrum not resolved at cutoff {}: tail ratio {r:.3e} > {tolerance:.1e}",
                self.cutoff()
            )));
        }
        Ok(())
    }

    /// `‖f‖² = (1/2π)∫₀^Ξ |f̂|² dξ` with trapezoid weights.
    pub fn norm_squared(&self) -> f64 {
        let m = self.values.len() - 1;
        let mut s = 0.0;
        for (j, v) in self.values.iter().enumerate() {
            let w = if j == 0 || j == m { 0.5 } else { 1.0 };
            s += w * v.norm_sqr();
        }
        s * self.step / (2.0 * PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn project_single_mode() {
        let u = TorusField::zero(4).add_trig(1, 2.0, 0.0);
        let p = project_hardy(&u).unwrap();
        assert_eq!(p.coeffs(), &[ZERO, c(1.0, 0.0), ZERO, ZERO, ZERO]);
    }

    #[test]
    fn project_constant() {
        let p = project_hardy(&TorusField::constant(3, 2.5)).unwrap();
        assert_eq!(p.coeffs(), &[c(2.5, 0.0), ZERO, ZERO, ZERO]);
    }

    #[test]
    fn project_two_modes() {
        let u = TorusField::zero(3).add_trig(1, 2.0, 0.0).add_trig(2, 0.0, 4.0);
        let p = project_hardy(&u).unwrap();
        assert_eq!(p.coeffs(), &[ZERO, c(1.0, 0.0), c(0.0, -2.0), ZERO]);
    }

    #[test]
    fn asymmetric_coefficients_rejected() {
        let coeffs = vec![ZERO, ZERO, c(1.0, 0.0)];
        assert!(matches!(TorusField::from_coeffs(1, coeffs), Err(Error::InvalidField(_))));
        let coeffs = vec![ZERO, c(0.0, 1e-6), ZERO];
        assert!(matches!(TorusField::from_coeffs(1, coeffs), Err(Error::InvalidField(_))));
    }

    #[test]
    fn synthesize_single_mode_is_cosine() {
        let p = HardyTorusVector::new(vec![ZERO, c(1.0, 0.0), ZERO]);
        let s = synthesize_torus(&p, 0.0, 16);
        for (j, v) in s.iter().enumerate() {
            let x = 2.0 * PI * j as f64 / 16.0;
            assert_abs_diff_eq!(*v, 2.0 * x.cos(), epsilon = 1e-14);
        }
    }

    #[test]
    fn synthesize_constant() {
        let p = HardyTorusVector::new(vec![c(0.7, 0.0), ZERO]);
        for v in synthesize_torus(&p, 0.7, 9) {
            assert_abs_diff_eq!(v, 0.7, epsilon = 1e-15);
        }
    }

    #[test]
    fn synthesize_with_fewer_samples_than_modes_folds_exactly() {
        let p = HardyTorusVector::new(vec![ZERO, ZERO, ZERO, ZERO, ZERO, c(0.5, 0.25)]);
        let s = synthesize_torus(&p, 0.0, 4);
        for (j, v) in s.iter().enumerate() {
            let x = 2.0 * PI * j as f64 / 4.0;
            let exact = 2.0 * (c(0.5, 0.25) * Complex64::from_polar(1.0, 5.0 * x)).re;
            assert_abs_diff_eq!(*v, exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn samples_of_cosine() {
        let s: Vec<f64> = (0..32).map(|j| (2.0 * PI * j as f64 / 32.0).cos()).collect();
        let f = field_from_samples(&s).unwrap();
        assert_eq!(f.max_mode(), 15);
        assert_abs_diff_eq!(f.coeff(1).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.coeff(-1).re, 0.5, epsilon = 1e-15);
        for k in [0, 2, 3, 7, 15] {
            assert!(f.coeff(k).norm() < 1e-15);
        }
    }

    #[test]
    fn samples_of_constant() {
        let f = field_from_samples(&[3.0; 10]).unwrap();
        assert_abs_diff_eq!(f.mean(), 3.0, epsilon = 1e-15);
        assert!(f.coeffs().iter().enumerate().all(|(i, v)| i == f.max_mode() || v.norm() < 1e-15));
    }

    #[test]
    fn non_finite_samples_rejected() {
        let mut s = vec![0.0; 8];
        s[3] = f64::NAN;
        assert!(matches!(field_from_samples(&s), Err(Error::Ingestion(_))));
        assert!(matches!(field_from_samples(&[1.0, 2.0]), Err(Error::Ingestion(_))));
    }

    #[test]
    fn evolution_of_zero_is_identity() {
        let a = OperatorMatrix::hermitian_from_fn(5, |_, _| ZERO);
        let u = hermitian_evolution(&a, 3.0).unwrap();
        assert!(u.matrix().max_abs_diff(&CMatrix::identity(5)) < 1e-15);
        assert_eq!(u.tag(), OperatorTag::Unitary);
    }

    #[test]
    fn evolution_of_diagonal() {
        let a = OperatorMatrix::hermitian_from_fn(3, |i, j| if i == j { c(i as f64, 0.0) } else { ZERO });
        let u = hermitian_evolution(&a, PI).unwrap();
        let expected = CMatrix::from_diagonal(&[c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(u.matrix().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn evolution_rejects_non_hermitian() {
        let a = OperatorMatrix::general(CMatrix::identity(3));
        assert!(matches!(hermitian_evolution(&a, 1.0), Err(Error::LinearAlgebra { .. })));
    }

    #[test]
    fn hermitian_constructor_is_exact() {
        let a = OperatorMatrix::hermitian_from_fn(6, |i, j| c((i * j) as f64 + 0.1, i as f64 - j as f64 + 0.3));
        assert_eq!(a.matrix().hermitian_defect(), 0.0);
        let b = OperatorMatrix::antihermitian_from_fn(6, |i, j| c(i as f64 + 0.2, j as f64));
        assert_eq!(b.matrix().add(&b.matrix().adjoint()).max_abs(), 0.0);
    }

    #[test]
    fn half_line_tail() {
        let s = HalfLineSpectrum::from_fn(0.1, 401, |x| c((-x).exp(), 0.0));
        assert!((s.cutoff() - 40.0).abs() < 1e-12);
        assert!(s.check_tail(1e-10).is_ok());
        let s = HalfLineSpectrum::from_fn(0.1, 11, |x| c((-x).exp(), 0.0));
        assert!(s.check_tail(1e-10).is_err());
    }
}
