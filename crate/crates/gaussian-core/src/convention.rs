//! Quadrature conventions and the two linear maps used throughout.
//!
//! Vacuum variance is 1 and `[X, P] = 2i`. Quadratures are ordered
//! `(x_a, p_a, x_b, p_b)`.

use nalgebra::{Matrix4, SMatrix, SymmetricEigen};

use crate::error::CoreError;

/// Commutator scale: `[X, P] = 2i`.
pub const COMMUTATOR_SCALE: f64 = 2.0;

/// Quadrature variance of the vacuum.
pub const VACUUM_VARIANCE: f64 = 1.0;

/// Mean quadratures `(x_a, p_a, x_b, p_b)` in vacuum-noise units.
pub type QuadratureVector = [f64; 4];

/// Two-mode symplectic form, blocks `[[0, 1], [-1, 0]]`.
pub fn omega() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// Covariance of a thermal state with mean occupation `n` on both modes.
pub fn thermal_covariance(n: f64) -> Matrix4<f64> {
    Matrix4::identity() * (2.0 * n + 1.0)
}

/// Smallest eigenvalue of the Hermitian matrix `V + iΩ`.
///
/// Uses the real embedding `[[V, -Ω], [Ω, V]]`, whose spectrum is that of
/// `V + iΩ` with every eigenvalue doubled.
pub fn min_physical_eigenvalue(v: &Matrix4<f64>) -> f64 {
    let om = omega();
    let mut big = SMatrix::<f64, 8, 8>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let s = 0.5 * (v[(i, j)] + v[(j, i)]);
            big[(i, j)] = s;
            big[(i + 4, j + 4)] = s;
            big[(i, j + 4)] = -om[(i, j)];
            big[(i + 4, j)] = om[(i, j)];
        }
    }
    SymmetricEigen::new(big).eigenvalues.min()
}

/// Physicality test used across the workspace: `V + iΩ ⪰ -1e-9`.
pub fn is_physical(v: &Matrix4<f64>) -> bool {
    let asym = (v - v.transpose()).abs().max();
    let scale = v.abs().max().max(1.0);
    asym <= 1e-12 * scale && min_physical_eigenvalue(v) >= -1e-9
}

/// A 4×4 real map acting on quadrature vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearQuadratureMap(pub Matrix4<f64>);

impl LinearQuadratureMap {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn apply(&self, r: &QuadratureVector) -> QuadratureVector {
        let mut out = [0.0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[(i, j)] * r[j]).sum();
        }
        out
    }

    pub fn compose(&self, inner: &Self) -> Self {
        Self(self.0 * inner.0)
    }

    /// Largest entry of `T Ω Tᵀ - Ω`.
    pub fn symplectic_defect(&self) -> f64 {
        let om = omega();
        (self.0 * om * self.0.transpose() - om).abs().max()
    }

    pub fn is_symplectic(&self, tol: f64) -> bool {
        self.symplectic_defect() <= tol
    }
}

/// Ideal QND map: rows (1,0,G,0), (0,1,0,0), (0,0,1,0), (0,-G,0,1).
pub fn qnd_matrix(gain: f64) -> LinearQuadratureMap {
    LinearQuadratureMap(Matrix4::new(
        1.0, 0.0, gain, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, -gain, 0.0, 1.0,
    ))
}

/// Beam-splitter map with transmittance `t`.
pub fn bs_matrix(t: f64) -> Result<LinearQuadratureMap, CoreError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(CoreError::Domain(format!("transmittance {t} outside [0, 1]")));
    }
    let c = t.sqrt();
    let s = (1.0 - t).sqrt();
    Ok(LinearQuadratureMap(Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, s, //
        -s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )))
}
