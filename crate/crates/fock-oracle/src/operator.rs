//! Truncated QND and beam-splitter unitaries.
//!
//! The QND generator `(G/2)(a+a†)⊗(b†−b)` is a product of commuting
//! single-mode operators, so the truncated unitary is diagonal in the
//! product eigenbasis of the truncated `a+a†` and `i(b†−b)`. The beam
//! splitter conserves `n+m` and is exponentiated block by block.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::basis::{FockBasisSpec, TruncatedState, C64};
use crate::error::FockError;

pub const MAX_GAIN: f64 = 5.0;

/// Largest accepted change of the probe amplitudes when the cutoff is cut to 7/8.
pub const TRUNCATION_TOL: f64 = 1e-8;

/// Probe inputs for the truncation check.
const PROBES: [(usize, usize); 6] = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)];

#[derive(Debug, Clone)]
enum Kind {
    Qnd {
        eigvecs: DMatrix<f64>,
        phases: DMatrix<C64>,
    },
    BeamSplitter {
        blocks: Vec<DMatrix<f64>>,
    },
}

#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    basis: FockBasisSpec,
    kind: Kind,
}

/// Truncated `a + a†`.
fn position_matrix(n: usize) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(n, n);
    for k in 0..n - 1 {
        let s = ((k + 1) as f64).sqrt();
        x[(k, k + 1)] = s;
        x[(k + 1, k)] = s;
    }
    x
}

/// `i^k`.
fn i_pow(k: usize) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// `Q · M · Qᵀ` (or `Qᵀ · M · Q` when `transpose`), real and imaginary parts separately.
fn sandwich(q: &DMatrix<f64>, m: &DMatrix<C64>, transpose: bool) -> DMatrix<C64> {
    let re = m.map(|c| c.re);
    let im = m.map(|c| c.im);
    let (re, im) = if transpose {
        (q.tr_mul(&re) * q, q.tr_mul(&im) * q)
    } else {
        (q * re * q.transpose(), q * im * q.transpose())
    };
    re.zip_map(&im, C64::new)
}

fn scale_columns(m: &mut DMatrix<C64>, conj: bool) {
    for (k, mut col) in m.column_iter_mut().enumerate() {
        let f = if conj { i_pow(k).conj() } else { i_pow(k) };
        col *= f;
    }
}

fn suggested_cutoff(cutoff: usize) -> usize {
    (cutoff.div_ceil(2) * 3).div_ceil(10).saturating_mul(10).min(crate::basis::MAX_CUTOFF)
}

fn spectral_qnd(gain: f64, n: usize) -> (DMatrix<f64>, DMatrix<C64>) {
    let eig = SymmetricEigen::new(position_matrix(n));
    let lam = eig.eigenvalues;
    // (b†−b) = −i D X D† with D = diag(iᵏ), so the generator is
    // −i(G/2) X⊗X in the rotated basis.
    let phases = DMatrix::from_fn(n, n, |j, k| {
        let theta = -0.5 * gain * lam[j] * lam[k];
        C64::new(theta.cos(), theta.sin())
    });
    (eig.eigenvectors, phases)
}

/// `exp[(G/2)(a+a†)(b†−b)]` on the truncated basis.
///
/// The truncated generator is Hermitian, so the result is exactly unitary;
/// what truncation spoils is agreement with the untruncated operator. That
/// is estimated by rebuilding at 7/8 of the cutoff and comparing the
/// amplitudes `⟨n,m|U|probe⟩`, `n,m < 5`, for probes with `n+m ≤ 2`.
pub fn build_qnd_unitary(gain: f64, basis: FockBasisSpec) -> Result<TruncatedOperator, FockError> {
    let op = build_qnd_unitary_unchecked(gain, basis)?;
    let n = basis.cutoff();
    let coarse = FockBasisSpec::new((7 * n / 8).max(crate::basis::MIN_CUTOFF))?;
    let reference = build_qnd_unitary_unchecked(gain, coarse)?;
    let mut change = 0.0f64;
    for (pn, pm) in PROBES {
        let fine = op.column(pn, pm)?;
        let rough = reference.column(pn, pm)?;
        for i in 0..5 {
            for j in 0..5 {
                change = change.max((fine.amplitude(i, j) - rough.amplitude(i, j)).norm());
            }
        }
    }
    if change > TRUNCATION_TOL {
        return Err(FockError::Truncation {
            cutoff: n,
            gain,
            change,
            suggested: suggested_cutoff(n),
        });
    }
    Ok(op)
}

/// As `build_qnd_unitary` without the truncation check.
pub fn build_qnd_unitary_unchecked(gain: f64, basis: FockBasisSpec) -> Result<TruncatedOperator, FockError> {
    if !gain.is_finite() || gain.abs() > MAX_GAIN {
        return Err(FockError::Domain(format!("gain {gain} outside [-{MAX_GAIN}, {MAX_GAIN}]")));
    }
    let (eigvecs, phases) = spectral_qnd(gain, basis.cutoff());
    Ok(TruncatedOperator {
        basis,
        kind: Kind::Qnd { eigvecs, phases },
    })
}

/// `exp[Θ(a†b − b†a)]`; exactly unitary on every block with `n+m < cutoff`.
pub fn build_bs_unitary(theta: f64, basis: FockBasisSpec) -> Result<TruncatedOperator, FockError> {
    if !theta.is_finite() {
        return Err(FockError::Domain(format!("angle {theta} is not finite")));
    }
    let n = basis.cutoff();
    let blocks = (0..2 * n - 1)
        .map(|s| {
            let lo = s.saturating_sub(n - 1);
            let hi = s.min(n - 1);
            let d = hi - lo + 1;
            let mut k = DMatrix::zeros(d, d);
            for i in 0..d {
                let a = lo + i;
                let b = s - a;
                if a < hi {
                    // a†b |a,b⟩ = √((a+1)b) |a+1,b−1⟩
                    let c = theta * (((a + 1) * b) as f64).sqrt();
                    k[(i + 1, i)] += c;
                    k[(i, i + 1)] -= c;
                }
            }
            k.exp()
        })
        .collect();
    Ok(TruncatedOperator {
        basis,
        kind: Kind::BeamSplitter { blocks },
    })
}

impl TruncatedOperator {
    pub fn basis(&self) -> FockBasisSpec {
        self.basis
    }

    pub fn apply(&self, state: &TruncatedState) -> TruncatedState {
        assert_eq!(state.basis(), self.basis, "basis mismatch");
        let n = self.basis.cutoff();
        let out = match &self.kind {
            Kind::Qnd { eigvecs, phases } => {
                let mut psi = state.amplitudes().clone();
                scale_columns(&mut psi, true);
                let mut c = sandwich(eigvecs, &psi, true);
                c.component_mul_assign(phases);
                let mut out = sandwich(eigvecs, &c, false);
                scale_columns(&mut out, false);
                out
            }
            Kind::BeamSplitter { blocks } => {
                let psi = state.amplitudes();
                let mut out = DMatrix::zeros(n, n);
                for (s, block) in blocks.iter().enumerate() {
                    let lo = s.saturating_sub(n - 1);
                    let d = block.nrows();
                    for i in 0..d {
                        let mut acc = C64::new(0.0, 0.0);
                        for j in 0..d {
                            acc += psi[(lo + j, s - lo - j)] * block[(i, j)];
                        }
                        out[(lo + i, s - lo - i)] = acc;
                    }
                }
                out
            }
        };
        TruncatedState::from_amplitudes(self.basis, out, format!("U{}", state.label))
    }

    /// `U|n, m⟩`.
    pub fn column(&self, n: usize, m: usize) -> Result<TruncatedState, FockError> {
        Ok(self.apply(&TruncatedState::fock(self.basis, n, m)?))
    }

    /// `⟨n, m|U|n', m'⟩`.
    pub fn element(&self, out: (usize, usize), inp: (usize, usize)) -> Result<C64, FockError> {
        Ok(self.column(inp.0, inp.1)?.amplitude(out.0, out.1))
    }

    /// `max |(U†U − 𝕀)_{jk}|` over basis states with `n + m ≤ level`.
    pub fn low_subspace_unitarity_defect(&self, level: usize) -> Result<f64, FockError> {
        let mut cols = Vec::new();
        for n in 0..=level.min(self.basis.cutoff() - 1) {
            for m in 0..=(level - n).min(self.basis.cutoff() - 1) {
                cols.push(self.column(n, m)?);
            }
        }
        let mut worst = 0.0f64;
        for (j, a) in cols.iter().enumerate() {
            for (k, b) in cols.iter().enumerate() {
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b) - target).norm());
            }
        }
        Ok(worst)
    }

    /// Largest outer-shell population of `U|n,m⟩` over the probe inputs.
    pub fn probe_leakage(&self) -> Result<f64, FockError> {
        let width = (self.basis.cutoff() / 10).max(2);
        let mut worst = 0.0f64;
        for (n, m) in PROBES {
            worst = worst.max(self.column(n, m)?.outer_shell_population(width));
        }
        Ok(worst)
    }
}

/// `|⟨HOM|U|ψ⟩|²` with `|HOM⟩ = (|0,2⟩ − |2,0⟩)/√2`.
pub fn hom_element_exact(u: &TruncatedOperator, input: &TruncatedState) -> f64 {
    TruncatedState::hom(u.basis()).inner(&u.apply(input)).norm_sqr()
}

/// Same with `(|0,2⟩ + |2,0⟩)/√2`.
pub fn hom_plus_element_exact(u: &TruncatedOperator, input: &TruncatedState) -> f64 {
    TruncatedState::hom_plus(u.basis()).inner(&u.apply(input)).norm_sqr()
}

/// `(G/2)(a+a†)⊗(b†−b) ψ` on the amplitude matrix.
fn qnd_generator(gain: f64, psi: &DMatrix<C64>) -> DMatrix<C64> {
    let n = psi.nrows();
    let x = position_matrix(n);
    // (b†−b)_{mk}: +√k on the subdiagonal, −√(k+1) on the superdiagonal.
    let mut d = DMatrix::zeros(n, n);
    for k in 0..n - 1 {
        let s = ((k + 1) as f64).sqrt();
        d[(k + 1, k)] = s;
        d[(k, k + 1)] = -s;
    }
    // ψ'[n, m] = Σ X[n,j] (b†−b)[m,k] ψ[j,k] = (X ψ Dᵀ)[n, m]
    let re = &x * psi.map(|c| c.re) * d.transpose();
    let im = &x * psi.map(|c| c.im) * d.transpose();
    re.zip_map(&im, |a, b| C64::new(0.5 * gain * a, 0.5 * gain * b))
}

/// `exp[(G/2)(a+a†)(b†−b)] ψ` by time-stepped Taylor series on the
/// generator action; an independent route to the spectral unitary.
pub fn qnd_action_taylor(gain: f64, state: &TruncatedState) -> TruncatedState {
    let n = state.basis().cutoff() as f64;
    // ‖a+a†‖ ≤ 2√n on the truncated space.
    let bound = 0.5 * gain.abs() * 4.0 * n;
    let steps = bound.ceil().max(1.0) as usize;
    let h = gain / steps as f64;
    let mut v = state.amplitudes().clone();
    for _ in 0..steps {
        let mut term = v.clone();
        let mut sum = v.clone();
        for k in 1..200 {
            term = qnd_generator(h, &term) / C64::new(k as f64, 0.0);
            sum += &term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        v = sum;
    }
    TruncatedState::from_amplitudes(state.basis(), v, format!("U{}", state.label))
}
