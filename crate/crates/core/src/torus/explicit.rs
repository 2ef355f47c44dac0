//! Solution of the Benjamin–Ono equation on the torus from one Hermitian
//! exponential of the Lax operator.
//!
//! With `M = e^{it} e^{2itL_{u₀}} S*`, the Fourier coefficients of the solution
//! are `û(t,k) = ⟨M^k Πu₀ | 1⟩` for `k ≥ 0`, and the holomorphic extension to
//! the disc is `Πu(t,z) = ⟨(I − zM)^{−1} Πu₀ | 1⟩`.

use num_complex::Complex64;

use crate::dense::{lu_solve, vec_norm, CMatrix};
use crate::error::{Error, Result};
use crate::spectral::{
    evolution_from_eigensystem, project_hardy, synthesize_torus, EigenSystem, HardyTorusVector,
    OperatorMatrix, TorusField,
};
use crate::torus::operators::{lax_matrix, shift_adjoint};

/// Tail level beyond which the coefficient recurrence reports truncation.
pub const TRUNCATION_WARNING_LEVEL: f64 = 1e-8;
/// Residual bound for the disc resolvent solve.
pub const DISC_RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Bound on the imaginary residue of reconstructed samples.
pub const REALITY_TOLERANCE: f64 = 1e-10;

/// The factors of `M = e^{it}·e^{2itL_{u₀}}·S*` at a fixed time.
#[derive(Clone, Debug)]
pub struct TorusPropagator {
    t: f64,
    phase: Complex64,
    evolution: OperatorMatrix,
    p0: HardyTorusVector,
    mean: f64,
}

impl TorusPropagator {
    pub fn new(u0: &TorusField, t: f64, n: usize) -> Result<Self> {
        let eig = EigenSystem::new(&lax_matrix(u0, n)?)?;
        Self::from_eigensystem(u0, &eig, t)
    }

    /// Reuses one eigendecomposition of `L_{u₀}` across times.
    pub fn from_eigensystem(u0: &TorusField, eig: &EigenSystem, t: f64) -> Result<Self> {
        let n = eig.eigenvalues().len() - 1;
        let p0 = project_hardy(&u0.with_max_mode(n))?;
        Ok(Self {
            t,
            phase: Complex64::from_polar(1.0, t),
            evolution: evolution_from_eigensystem(eig, 2.0 * t)?,
            p0,
            mean: u0.mean(),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn max_mode(&self) -> usize {
        self.p0.max_mode()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn initial_projection(&self) -> &HardyTorusVector {
        &self.p0
    }

    /// `e^{2itL_{u₀}}`.
    pub fn evolution(&self) -> &OperatorMatrix {
        &self.evolution
    }

    /// `v ↦ M v` without forming `M`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut shifted = Vec::with_capacity(v.len());
        shifted.extend_from_slice(&v[1..]);
        shifted.push(Complex64::new(0.0, 0.0));
        self.evolution
            .matrix()
            .matvec(&shifted)
            .into_iter()
            .map(|x| self.phase * x)
            .collect()
    }

    /// The assembled matrix `M`.
    pub fn matrix(&self) -> CMatrix {
        self.evolution
            .matrix()
            .matmul(shift_adjoint(self.max_mode()).matrix())
            .scale(self.phase)
    }
}

pub fn propagator(u0: &TorusField, t: f64, n: usize) -> Result<TorusPropagator> {
    TorusPropagator::new(u0, t, n)
}

/// `û(t,k)` for `k = 0..=K` plus truncation diagnostics.
#[derive(Clone, Debug)]
pub struct EvolvedCoefficients {
    pub t: f64,
    pub mean: f64,
    pub coeffs: Vec<Complex64>,
    /// Largest relative tail of `M^k Πu₀` beyond mode `N − K/4` over the recurrence.
    pub truncation_tail: f64,
    pub warnings: Vec<String>,
}

impl EvolvedCoefficients {
    pub fn hardy_vector(&self) -> HardyTorusVector {
        HardyTorusVector::new(self.coeffs.clone())
    }

    pub fn to_field(&self) -> Result<TorusField> {
        let mut positive = self.coeffs.clone();
        positive[0] = Complex64::new(positive[0].re, 0.0);
        TorusField::from_positive_modes(&positive)
    }
}

pub fn evolve_coefficients(p: &TorusPropagator, k_max: usize) -> Result<EvolvedCoefficients> {
    let n = p.max_mode();
    if k_max > n {
        return Err(Error::Configuration(format!(
            "requested {k_max} coefficients from an order-{n} truncation"
        )));
    }
    let tail_start = n - k_max / 4;
    let scale = p.p0.norm().max(f64::MIN_POSITIVE);
    let mut v = p.p0.coeffs().to_vec();
    let mut coeffs = Vec::with_capacity(k_max + 1);
    let mut tail: f64 = 0.0;
    coeffs.push(v[0]);
    for _ in 0..k_max {
        v = p.apply(&v);
        coeffs.push(v[0]);
        if tail_start < n {
            tail = tail.max(vec_norm(&v[tail_start + 1..]) / scale);
        }
    }
    let mut warnings = Vec::new();
    if tail > TRUNCATION_WARNING_LEVEL {
        let msg = format!(
            "t = {}: recurrence tail beyond mode {tail_start} reached {tail:.3e}; increase N",
            p.t
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }
    Ok(EvolvedCoefficients {
        t: p.t,
        mean: p.mean,
        coeffs,
        truncation_tail: tail,
        warnings,
    })
}

/// `Πu(t,z) = ⟨(I − zM)^{−1} Πu₀ | 1⟩` for `|z| < 1`.
pub fn evaluate_disc(p: &TorusPropagator, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("|z| = {} is not inside the unit disc", z.norm())));
    }
    let n = p.max_mode() + 1;
    let system = CMatrix::identity(n).sub(&p.matrix().scale(z));
    let b = p.p0.coeffs();
    let x = lu_solve(&system, b);
    let r = system.matvec(&x);
    let residual = r.iter().zip(b).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
        / vec_norm(b).max(f64::MIN_POSITIVE);
    if !residual.is_finite() || residual > DISC_RESIDUAL_TOLERANCE {
        return Err(Error::Conditioning {
            residual,
            tolerance: DISC_RESIDUAL_TOLERANCE,
        });
    }
    Ok(x[0])
}

/// Samples of `u(t)` at `x_j = 2πj/n` from the first `K + 1` coefficients.
pub fn reconstruct_torus(p: &TorusPropagator, k_max: usize, n_samples: usize) -> Result<Vec<f64>> {
    let evolved = evolve_coefficients(p, k_max)?;
    reconstruct_from_coefficients(&evolved, n_samples)
}

pub fn reconstruct_from_coefficients(evolved: &EvolvedCoefficients, n_samples: usize) -> Result<Vec<f64>> {
    let residue = evolved.coeffs[0].im.abs();
    if residue > REALITY_TOLERANCE {
        return Err(Error::LinearAlgebra {
            what: "mean coefficient acquired an imaginary part".into(),
            residual: residue,
        });
    }
    Ok(synthesize_torus(&evolved.hardy_vector(), evolved.mean, n_samples))
}
