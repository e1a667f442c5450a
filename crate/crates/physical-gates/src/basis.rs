//! Correlated temporal modes realized as combinations of independent ones.
//!
//! Raw modes `r` (signals, auxiliary temporal modes, loss vacua, force
//! modes) have a vacuum-normalized correlation matrix Σ₀. A lower-triangular
//! factor `L` with `Σ₀ = L Lᵀ` writes `r = L z` with independent unit
//! modes `z`. Because signal modes lead their chains, `z` for a signal is
//! the signal itself, so a non-vacuum signal state is injected by changing
//! one variance of `z`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::GateError;

const PIVOT_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeRole {
    Signal,
    Vacuum,
    /// X-type temporal mode of the mediator pulse.
    MediatorX,
    /// P-type temporal mode of the mediator pulse.
    MediatorP,
    Thermal,
}

/// Which mediator quadrature is squeezed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SqueezingConvention {
    SqueezeX,
    #[default]
    SqueezeP,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModeBasis {
    labels: Vec<String>,
    roles: Vec<ModeRole>,
    gram: DMatrix<f64>,
    factor: DMatrix<f64>,
    variances: Vec<f64>,
}

/// Semidefinite Cholesky factorization of the stated overlaps.
///
/// Zero pivots are allowed (linearly dependent temporal modes), provided the
/// remaining overlaps of that mode are reproduced by the earlier ones.
pub fn orthogonalize_noise_modes(
    modes: &[(&str, ModeRole)],
    gram: DMatrix<f64>,
) -> Result<NoiseModeBasis, GateError> {
    let n = modes.len();
    if gram.shape() != (n, n) {
        return Err(GateError::Domain(format!("overlap matrix is {:?}, expected {n}x{n}", gram.shape())));
    }
    let label = |i: usize| modes[i].0.to_string();
    for i in 0..n {
        if (gram[(i, i)] - 1.0).abs() > RESIDUAL_TOL {
            return Err(GateError::Consistency {
                first: label(i),
                second: label(i),
                detail: format!("self-overlap {} is not 1", gram[(i, i)]),
            });
        }
        for j in 0..i {
            if (gram[(i, j)] - gram[(j, i)]).abs() > RESIDUAL_TOL || gram[(i, j)].abs() > 1.0 + RESIDUAL_TOL {
                return Err(GateError::Consistency {
                    first: label(i),
                    second: label(j),
                    detail: format!("overlap {} is asymmetric or exceeds 1", gram[(i, j)]),
                });
            }
        }
    }
    let mut l = DMatrix::zeros(n, n);
    for j in 0..n {
        let d = gram[(j, j)] - (0..j).map(|k| l[(j, k)] * l[(j, k)]).sum::<f64>();
        if d < -PIVOT_TOL {
            let worst = (0..j).max_by(|&a, &b| gram[(j, a)].abs().total_cmp(&gram[(j, b)].abs())).unwrap_or(j);
            return Err(GateError::Consistency {
                first: label(j),
                second: label(worst),
                detail: format!("overlaps imply negative residual norm {d:e}"),
            });
        }
        if d <= PIVOT_TOL {
            for i in (j + 1)..n {
                let r = gram[(i, j)] - (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum::<f64>();
                if r.abs() > RESIDUAL_TOL {
                    return Err(GateError::Consistency {
                        first: label(i),
                        second: label(j),
                        detail: format!("`{}` is dependent on earlier modes but residual overlap is {r:e}", label(j)),
                    });
                }
            }
            continue;
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let r = gram[(i, j)] - (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum::<f64>();
            l[(i, j)] = r / ljj;
        }
    }
    Ok(NoiseModeBasis {
        labels: modes.iter().map(|m| m.0.to_string()).collect(),
        roles: modes.iter().map(|m| m.1).collect(),
        gram,
        factor: l,
        variances: vec![1.0; n],
    })
}

impl NoiseModeBasis {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn roles(&self) -> &[ModeRole] {
        &self.roles
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Vacuum-normalized overlaps Σ₀ as stated.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// `L` in `r = L z`.
    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    /// Variances of the independent modes `z`.
    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    /// Correlation matrix of the raw modes, `L diag(v) Lᵀ`.
    pub fn correlation(&self) -> DMatrix<f64> {
        let scaled = DMatrix::from_fn(self.len(), self.len(), |i, j| self.factor[(i, j)] * self.variances[j]);
        scaled * self.factor.transpose()
    }
}

/// Squeezes every mediator temporal mode: variance `e^{∓2r}` on the squeezed
/// quadrature family and `e^{±2r}` on the other, `r = S·ln10/20`.
///
/// Each mediator family is factored on its own, so scaling the independent
/// modes uniformly scales the whole family's correlation block.
pub fn apply_squeezing(
    basis: &NoiseModeBasis,
    squeezing_db: f64,
    convention: SqueezingConvention,
) -> Result<NoiseModeBasis, GateError> {
    if !(squeezing_db.is_finite() && squeezing_db >= 0.0) {
        return Err(GateError::Domain(format!("squeezing {squeezing_db} dB must be non-negative")));
    }
    let r = squeezing_db * std::f64::consts::LN_10 / 20.0;
    let (vx, vp) = match convention {
        SqueezingConvention::SqueezeX => ((-2.0 * r).exp(), (2.0 * r).exp()),
        SqueezingConvention::SqueezeP => ((2.0 * r).exp(), (-2.0 * r).exp()),
    };
    let mut out = basis.clone();
    for (v, role) in out.variances.iter_mut().zip(&basis.roles) {
        match role {
            ModeRole::MediatorX => *v *= vx,
            ModeRole::MediatorP => *v *= vp,
            _ => {}
        }
    }
    Ok(out)
}
