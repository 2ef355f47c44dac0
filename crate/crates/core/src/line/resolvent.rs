//! The resolvent `(G − 2tL_{u₀} − z)^{−1} Πu₀` on the half-line grid.
//!
//! With `ĝ = e^{itξ²} f̂` the operator `G − 2tD` becomes `i dĝ/dξ`, which
//! removes the fast phase from the unknown. The closure `ĝ(Ξ) = 0` eliminates
//! the last node, so the system is `(A₀ − z)ĝ = e^{itξ²}Πû₀` with a square
//! `A₀` independent of `z`.

use num_complex::Complex64;

use crate::dense::{lu_solve, vec_norm, CMatrix, HessenbergForm};
use crate::error::{Error, Result};
use crate::line::field::{LineField, LineGrid, SPECTRUM_TAIL_TOLERANCE};
use crate::line::operators::{IplusStencil, LineToeplitz};
use crate::spectral::HalfLineSpectrum;

/// Relative residual accepted from a resolvent solve.
pub const RESOLVENT_RESIDUAL_TOLERANCE: f64 = 1e-6;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug)]
pub struct ResolventSolution {
    pub spectrum: HalfLineSpectrum,
    /// `‖(A₀ − z)ĝ − rhs‖ / ‖rhs‖`.
    pub residual: f64,
}

impl ResolventSolution {
    pub fn iplus(&self, stencil: IplusStencil) -> Complex64 {
        stencil.apply(self.spectrum.values())
    }
}

/// Assembled system for one datum, time and grid.
#[derive(Clone, Debug)]
pub struct LineResolventSystem {
    t: f64,
    grid: LineGrid,
    operator: CMatrix,
    gauge: Vec<Complex64>,
    rhs: Vec<Complex64>,
}

fn check_upper_half_plane(z: Complex64) -> Result<()> {
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("z = {z} is not in the open upper half-plane")));
    }
    Ok(())
}

impl LineResolventSystem {
    pub fn assemble(u0: &LineField, t: f64, grid: &LineGrid) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::Configuration(format!("time must be finite, got {t}")));
        }
        grid.require_resolving()?;
        let projection = u0.hardy_spectrum(grid);
        projection.check_tail(SPECTRUM_TAIL_TOLERANCE)?;

        let n = grid.last_index();
        let h = grid.step();
        let gauge: Vec<Complex64> = (0..=n)
            .map(|j| {
                let xi = grid.node(j);
                Complex64::from_polar(1.0, t * xi * xi)
            })
            .collect();
        let weights = grid.weights();
        let toeplitz = LineToeplitz::of_field(u0, *grid);

        let mut a = CMatrix::zeros(n, n);
        if u0.is_zero() || t == 0.0 {
            // Skip the O(M²) kernel assembly when it vanishes.
        } else {
            for j in 0..n {
                let pj = gauge[j] * (2.0 * t);
                for k in 0..n {
                    a[(j, k)] = pj * toeplitz.kernel(j as i64 - k as i64) * weights[k] * gauge[k].conj();
                }
            }
        }
        // i·d/dξ: one-sided at ξ = 0, central elsewhere, ĝ_M = 0.
        let s = I / (2.0 * h);
        a[(0, 0)] += -3.0 * s;
        a[(0, 1)] += 4.0 * s;
        a[(0, 2)] += -s;
        for j in 1..n {
            a[(j, j - 1)] -= s;
            if j + 1 < n {
                a[(j, j + 1)] += s;
            }
        }

        let rhs = (0..n).map(|j| gauge[j] * projection.values()[j]).collect();
        Ok(Self {
            t,
            grid: *grid,
            operator: a,
            gauge,
            rhs,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }

    /// `A₀`, acting on the gauged unknowns `ĝ_0..ĝ_{M−1}`.
    pub fn operator(&self) -> &CMatrix {
        &self.operator
    }

    pub fn rhs(&self) -> &[Complex64] {
        &self.rhs
    }

    fn residual(&self, z: Complex64, g: &[Complex64]) -> f64 {
        let mut r = self.operator.matvec(g);
        for ((ri, gi), bi) in r.iter_mut().zip(g).zip(&self.rhs) {
            *ri -= z * gi + bi;
        }
        relative(vec_norm(&r), vec_norm(&self.rhs))
    }

    fn ungauge(&self, g: &[Complex64]) -> HalfLineSpectrum {
        let mut values: Vec<Complex64> = g.iter().zip(&self.gauge).map(|(v, p)| v * p.conj()).collect();
        values.push(ZERO);
        HalfLineSpectrum::new(self.grid.step(), values)
    }

    /// Direct LU solve for a single `z`.
    pub fn solve(&self, z: Complex64) -> Result<ResolventSolution> {
        check_upper_half_plane(z)?;
        let n = self.operator.rows();
        let mut shifted = self.operator.clone();
        for j in 0..n {
            shifted[(j, j)] -= z;
        }
        let g = lu_solve(&shifted, &self.rhs);
        finish(self.residual(z, &g), || self.ungauge(&g))
    }

    /// Hessenberg reduction for many `z` at `O(M²)` each.
    pub fn factorize(self) -> FactorizedResolvent {
        let hessenberg = HessenbergForm::new(&self.operator);
        let reduced_rhs = hessenberg.to_reduced(&self.rhs);
        FactorizedResolvent {
            system: self,
            hessenberg,
            reduced_rhs,
        }
    }
}

fn relative(r: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        r / scale
    } else {
        r
    }
}

fn check_residual(residual: f64) -> Result<()> {
    if !(residual <= RESOLVENT_RESIDUAL_TOLERANCE) {
        return Err(Error::Conditioning {
            residual,
            tolerance: RESOLVENT_RESIDUAL_TOLERANCE,
        });
    }
    Ok(())
}

fn finish(residual: f64, spectrum: impl FnOnce() -> HalfLineSpectrum) -> Result<ResolventSolution> {
    check_residual(residual)?;
    Ok(ResolventSolution {
        spectrum: spectrum(),
        residual,
    })
}

/// `A₀ = Q H Q†` with `Q e₀ = e₀`, so `ĝ_0 = y_0` where `(H − z)y = Q†rhs`.
pub struct FactorizedResolvent {
    system: LineResolventSystem,
    hessenberg: HessenbergForm,
    reduced_rhs: Vec<Complex64>,
}

impl FactorizedResolvent {
    pub fn system(&self) -> &LineResolventSystem {
        &self.system
    }

    /// `f̂(0)` and the relative residual, without forming the full solution.
    pub fn node_value(&self, z: Complex64) -> Result<(Complex64, f64)> {
        check_upper_half_plane(z)?;
        let y = self.hessenberg.solve_shifted_reduced(z, &self.reduced_rhs)?;
        let residual = self.reduced_residual(z, &y);
        check_residual(residual)?;
        // The gauge is 1 at ξ = 0.
        Ok((y[0], residual))
    }

    pub fn solve(&self, z: Complex64) -> Result<ResolventSolution> {
        check_upper_half_plane(z)?;
        let y = self.hessenberg.solve_shifted_reduced(z, &self.reduced_rhs)?;
        let g = self.hessenberg.from_reduced(&y);
        finish(self.system.residual(z, &g), || self.system.ungauge(&g))
    }

    fn reduced_residual(&self, z: Complex64, y: &[Complex64]) -> f64 {
        // Q is unitary, so the reduced residual equals the original one.
        let h = self.hessenberg.h();
        let n = y.len();
        let mut r2 = 0.0;
        for i in 0..n {
            let start = i.saturating_sub(1);
            let row = h.row(i);
            let mut acc: Complex64 = (start..n).map(|k| row[k] * y[k]).sum();
            acc -= z * y[i] + self.reduced_rhs[i];
            r2 += acc.norm_sqr();
        }
        relative(r2.sqrt(), vec_norm(&self.reduced_rhs))
    }
}
