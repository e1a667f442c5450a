//! Two-mode truncated Fock basis and states on it.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Complex, DMatrix};

use crate::error::FockError;

pub type C64 = Complex<f64>;

pub const MIN_CUTOFF: usize = 4;
pub const MAX_CUTOFF: usize = 200;

/// Basis `|n, m⟩` with `0 ≤ n, m < cutoff`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockBasisSpec {
    cutoff: usize,
}

impl FockBasisSpec {
    pub fn new(cutoff: usize) -> Result<Self, FockError> {
        if !(MIN_CUTOFF..=MAX_CUTOFF).contains(&cutoff) {
            return Err(FockError::Domain(format!(
                "cutoff {cutoff} outside [{MIN_CUTOFF}, {MAX_CUTOFF}]"
            )));
        }
        Ok(Self { cutoff })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff * self.cutoff
    }

    /// Cutoff used when none is given: 40 up to |G| = 1.5, 80 up to 3, 180 beyond.
    pub fn for_gain(gain: f64) -> Self {
        let cutoff = match gain.abs() {
            g if g <= 1.5 => 40,
            g if g <= 3.0 => 80,
            _ => 180,
        };
        Self { cutoff }
    }
}

/// Two-mode pure state stored as the amplitude matrix `ψ[n, m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState {
    basis: FockBasisSpec,
    amplitudes: DMatrix<C64>,
    pub label: String,
}

impl TruncatedState {
    pub fn from_amplitudes(basis: FockBasisSpec, amplitudes: DMatrix<C64>, label: impl Into<String>) -> Self {
        assert_eq!(amplitudes.shape(), (basis.cutoff, basis.cutoff));
        Self {
            basis,
            amplitudes,
            label: label.into(),
        }
    }

    pub fn fock(basis: FockBasisSpec, n: usize, m: usize) -> Result<Self, FockError> {
        Self::superposition(basis, &[(n, m, C64::new(1.0, 0.0))], format!("|{n},{m}>"))
    }

    /// `Σ c |n, m⟩` for the listed `(n, m, c)`.
    pub fn superposition(
        basis: FockBasisSpec,
        terms: &[(usize, usize, C64)],
        label: impl Into<String>,
    ) -> Result<Self, FockError> {
        let mut amps = DMatrix::zeros(basis.cutoff, basis.cutoff);
        for &(n, m, c) in terms {
            if n >= basis.cutoff || m >= basis.cutoff {
                return Err(FockError::Domain(format!(
                    "|{n},{m}> outside cutoff {}",
                    basis.cutoff
                )));
            }
            amps[(n, m)] += c;
        }
        Ok(Self::from_amplitudes(basis, amps, label))
    }

    /// `(|0,2⟩ − |2,0⟩)/√2`.
    pub fn hom(basis: FockBasisSpec) -> Self {
        let c = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::superposition(basis, &[(0, 2, c), (2, 0, -c)], "HOM").expect("cutoff >= 4")
    }

    /// `(|0,2⟩ + |2,0⟩)/√2`.
    pub fn hom_plus(basis: FockBasisSpec) -> Self {
        let c = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::superposition(basis, &[(0, 2, c), (2, 0, c)], "HOM+").expect("cutoff >= 4")
    }

    pub fn basis(&self) -> FockBasisSpec {
        self.basis
    }

    pub fn amplitudes(&self) -> &DMatrix<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize, m: usize) -> C64 {
        self.amplitudes[(n, m)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Missing norm `1 − ‖ψ‖²`.
    pub fn truncation_loss(&self) -> f64 {
        1.0 - self.norm_sq()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Population with either photon number at or above `cutoff − width`.
    pub fn outer_shell_population(&self, width: usize) -> f64 {
        let start = self.basis.cutoff.saturating_sub(width);
        let mut p = 0.0;
        for n in 0..self.basis.cutoff {
            for m in 0..self.basis.cutoff {
                if n >= start || m >= start {
                    p += self.amplitudes[(n, m)].norm_sqr();
                }
            }
        }
        p
    }

    /// Expected total photon number `⟨n + m⟩`.
    pub fn mean_total_number(&self) -> f64 {
        let mut s = 0.0;
        for n in 0..self.basis.cutoff {
            for m in 0..self.basis.cutoff {
                s += (n + m) as f64 * self.amplitudes[(n, m)].norm_sqr();
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_bounds() {
        assert!(FockBasisSpec::new(3).is_err());
        assert!(FockBasisSpec::new(201).is_err());
        assert_eq!(FockBasisSpec::new(10).unwrap().dim(), 100);
        assert_eq!(FockBasisSpec::for_gain(0.87).cutoff(), 40);
        assert_eq!(FockBasisSpec::for_gain(-2.5).cutoff(), 80);
    }

    #[test]
    fn hom_states_are_orthonormal() {
        let b = FockBasisSpec::new(6).unwrap();
        let h = TruncatedState::hom(b);
        let hp = TruncatedState::hom_plus(b);
        assert!((h.norm_sq() - 1.0).abs() < 1e-15);
        assert!(h.inner(&hp).norm() < 1e-15);
        assert!((h.mean_total_number() - 2.0).abs() < 1e-15);
        assert!(TruncatedState::fock(b, 6, 0).is_err());
    }
}
