//! Finite sections of the shift structure and of the Lax pair on the torus
//! Hardy space, acting on `span{e^{ikx} : 0 ≤ k ≤ N}`.

use num_complex::Complex64;

use crate::dense::CMatrix;
use crate::error::Result;
use crate::spectral::{project_hardy, OperatorMatrix, TorusField};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `(T_b)_{jk} = b̂(j − k)` for `0 ≤ j, k ≤ N`. Real `b` gives an exactly
/// Hermitian matrix.
pub fn toeplitz_matrix(b: &TorusField, n: usize) -> OperatorMatrix {
    assert!(n >= 1, "truncation order must be at least 1");
    let ignored = (2 * n + 1..=b.max_mode()).any(|k| b.coeff(k as i64).norm() > 0.0);
    if ignored {
        log::warn!(
            "symbol has modes beyond ±{} that the order-{n} section ignores",
            2 * n
        );
    }
    OperatorMatrix::hermitian_from_fn(n + 1, |j, k| b.coeff(j as i64 - k as i64))
}

/// Toeplitz section of an arbitrary (possibly complex) symbol.
pub fn toeplitz_from_symbol(n: usize, symbol: impl Fn(i64) -> Complex64) -> OperatorMatrix {
    OperatorMatrix::general(CMatrix::from_fn(n + 1, n + 1, |j, k| symbol(j as i64 - k as i64)))
}

/// `D = diag(0, 1, …, N)`.
pub fn derivative_matrix(n: usize) -> OperatorMatrix {
    OperatorMatrix::hermitian_from_fn(n + 1, |j, k| {
        if j == k {
            Complex64::new(j as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `L_u = D − T_u`.
pub fn lax_matrix(u: &TorusField, n: usize) -> Result<OperatorMatrix> {
    project_hardy(u)?;
    let t = toeplitz_matrix(u, n);
    Ok(OperatorMatrix::hermitian_from_fn(n + 1, |j, k| {
        let d = if j == k { j as f64 } else { 0.0 };
        Complex64::new(d, 0.0) - t.matrix()[(j, k)]
    }))
}

/// `B_u = i(T_{|D|u} − T_u T_u)` with the truncated `T_u` squared.
pub fn b_matrix(u: &TorusField, n: usize) -> Result<OperatorMatrix> {
    project_hardy(u)?;
    let t = toeplitz_matrix(u, n);
    let t_abs = toeplitz_matrix(&u.abs_derivative(), n);
    let t_sq = t.matrix().matmul(t.matrix());
    Ok(OperatorMatrix::antihermitian_from_fn(n + 1, |j, k| {
        I * (t_abs.matrix()[(j, k)] - t_sq[(j, k)])
    }))
}

/// `S*`: `(v₀, …, v_N) ↦ (v₁, …, v_N, 0)`.
pub fn shift_adjoint(n: usize) -> OperatorMatrix {
    OperatorMatrix::general(CMatrix::from_fn(n + 1, n + 1, |j, k| {
        if k == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `S`: multiplication by `e^{ix}`, truncated.
pub fn shift(n: usize) -> OperatorMatrix {
    OperatorMatrix::general(shift_adjoint(n).matrix().transpose())
}

/// The truncated Lax pair of a real field.
#[derive(Clone, Debug)]
pub struct LaxPairTorus {
    pub l: OperatorMatrix,
    pub b: OperatorMatrix,
    pub source: TorusField,
}

impl LaxPairTorus {
    pub fn new(u: &TorusField, n: usize) -> Result<Self> {
        Ok(Self {
            l: lax_matrix(u, n)?,
            b: b_matrix(u, n)?,
            source: u.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.l.dim()
    }
}
