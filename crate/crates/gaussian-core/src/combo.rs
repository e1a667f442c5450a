//! Signed-weight combinations of Gaussian terms.
//!
//! Weights and covariances are stored in double-double precision. The photon
//! combos carry weights of order `1/n` that cancel almost completely, so the
//! differences between term covariances must survive to the overlap
//! stage without being rounded away.

use nalgebra::Matrix4;

use crate::convention::{bs_matrix, is_physical, LinearQuadratureMap, QuadratureVector};
use crate::dd::{dd, div, Dd};
use crate::error::CoreError;

/// Largest approximation occupation accepted by the photon combo.
pub const MAX_OCCUPATION: f64 = 0.05;

/// Symmetric 4×4 covariance matrix with double-double entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    entries: [[Dd; 4]; 4],
}

impl CovarianceMatrix {
    pub fn vacuum() -> Self {
        Self::isotropic(dd(1.0), dd(1.0))
    }

    /// `diag(va, va, vb, vb)`.
    pub fn isotropic(va: Dd, vb: Dd) -> Self {
        let mut entries = [[dd(0.0); 4]; 4];
        entries[0][0] = va;
        entries[1][1] = va;
        entries[2][2] = vb;
        entries[3][3] = vb;
        Self { entries }
    }

    pub fn from_f64(m: &Matrix4<f64>) -> Self {
        let mut entries = [[dd(0.0); 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = dd(m[(i, j)]);
            }
        }
        Self { entries }
    }

    pub fn from_entries(entries: [[Dd; 4]; 4]) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[[Dd; 4]; 4] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Dd {
        self.entries[i][j]
    }

    pub fn to_f64(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| f64::from(self.entries[i][j]))
    }

    pub fn is_physical(&self) -> bool {
        is_physical(&self.to_f64())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut entries = self.entries;
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e += other.entries[i][j];
            }
        }
        Self { entries }
    }

    pub fn add_f64(&self, other: &Matrix4<f64>) -> Self {
        let mut entries = self.entries;
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e += other[(i, j)];
            }
        }
        Self { entries }
    }

    /// `T V Tᵀ`.
    pub fn conjugate(&self, map: &LinearQuadratureMap) -> Self {
        let t = map.matrix();
        let mut tv = [[dd(0.0); 4]; 4];
        for i in 0..4 {
            for k in 0..4 {
                let mut acc = dd(0.0);
                for l in 0..4 {
                    acc += self.entries[k][l] * t[(i, l)];
                }
                tv[i][k] = acc;
            }
        }
        let mut out = [[dd(0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = dd(0.0);
                for k in 0..4 {
                    acc += tv[i][k] * t[(j, k)];
                }
                out[i][j] = acc;
            }
        }
        Self { entries: out }
    }
}

/// One weighted Gaussian: `weight · W(mean, cov)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianTerm {
    pub weight: Dd,
    pub mean: QuadratureVector,
    pub cov: CovarianceMatrix,
}

impl GaussianTerm {
    pub fn new(weight: Dd, mean: QuadratureVector, cov: CovarianceMatrix) -> Self {
        Self { weight, mean, cov }
    }

    pub fn vacuum() -> Self {
        Self::new(dd(1.0), [0.0; 4], CovarianceMatrix::vacuum())
    }

    /// Coherent state with the given mean quadratures.
    pub fn coherent(mean: QuadratureVector) -> Self {
        Self::new(dd(1.0), mean, CovarianceMatrix::vacuum())
    }
}

/// Ordered, non-empty list of weighted Gaussian terms.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianCombo {
    terms: Vec<GaussianTerm>,
}

impl GaussianCombo {
    pub fn new(terms: Vec<GaussianTerm>) -> Result<Self, CoreError> {
        if terms.is_empty() {
            return Err(CoreError::Domain("empty Gaussian combination".into()));
        }
        if terms.iter().any(|t| !f64::from(t.weight).is_finite()) {
            return Err(CoreError::Domain("non-finite weight".into()));
        }
        Ok(Self { terms })
    }

    /// Combination representing a unit-trace operator; weights must sum to one.
    pub fn new_unit_trace(terms: Vec<GaussianTerm>) -> Result<Self, CoreError> {
        let combo = Self::new(terms)?;
        let total = f64::from(combo.weight_sum());
        if (total - 1.0).abs() > 1e-12 {
            return Err(CoreError::Domain(format!("weights sum to {total}, expected 1")));
        }
        Ok(combo)
    }

    pub fn single(term: GaussianTerm) -> Self {
        Self { terms: vec![term] }
    }

    pub fn terms(&self) -> &[GaussianTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weight_sum(&self) -> Dd {
        let mut s = dd(0.0);
        for t in &self.terms {
            s += t.weight;
        }
        s
    }

    /// Weighted second moment `Σ w (V_ii + R_i²)` of quadrature `i`.
    pub fn second_moment(&self, i: usize) -> f64 {
        let mut s = dd(0.0);
        for t in &self.terms {
            s += t.weight * (t.cov.get(i, i) + t.mean[i] * t.mean[i]);
        }
        f64::from(s)
    }
}

/// One single-mode isotropic component: `weight · W` with covariance `variance · 𝕀₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeComponent {
    pub weight: Dd,
    pub variance: Dd,
    /// True for the thermal member of a photon combo.
    pub thermal: bool,
}

fn check_occupation(n: f64) -> Result<(), CoreError> {
    if !(n > 0.0 && n <= MAX_OCCUPATION) {
        return Err(CoreError::Domain(format!(
            "approximation occupation {n} outside (0, {MAX_OCCUPATION}]"
        )));
    }
    Ok(())
}

fn check_fraction(p: f64) -> Result<(), CoreError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CoreError::Domain(format!("single-quantum fraction {p} outside [0, 1]")));
    }
    Ok(())
}

/// `|1⟩⟨1| ≈ ((n+1)/n) W_thermal(n) - (1/n) W_vacuum`.
pub fn single_photon_combo(n: f64) -> Result<[ModeComponent; 2], CoreError> {
    check_occupation(n)?;
    let nd = dd(n);
    Ok([
        ModeComponent {
            weight: div(nd + 1.0, nd),
            variance: nd * 2.0 + 1.0,
            thermal: true,
        },
        ModeComponent {
            weight: -div(dd(1.0), nd),
            variance: dd(1.0),
            thermal: false,
        },
    ])
}

/// Components of `p|1⟩⟨1| + (1-p)|0⟩⟨0|`, photon term first.
///
/// The two vacuum contributions are merged into one term; zero-weight
/// thermal terms (p = 0) are dropped.
pub fn mode_mixture(p: f64, n: f64) -> Result<Vec<ModeComponent>, CoreError> {
    check_fraction(p)?;
    check_occupation(n)?;
    if p == 0.0 {
        return Ok(vec![ModeComponent {
            weight: dd(1.0),
            variance: dd(1.0),
            thermal: false,
        }]);
    }
    let [th, vac] = single_photon_combo(n)?;
    let pd = dd(p);
    Ok(vec![
        ModeComponent {
            weight: th.weight * pd,
            ..th
        },
        ModeComponent {
            weight: vac.weight * pd + (dd(1.0) - pd),
            ..vac
        },
    ])
}

/// Product of two single-mode component lists, mode a major.
pub fn product_combo(a: &[ModeComponent], b: &[ModeComponent]) -> Result<GaussianCombo, CoreError> {
    let mut terms = Vec::with_capacity(a.len() * b.len());
    for ca in a {
        for cb in b {
            terms.push(GaussianTerm::new(
                ca.weight * cb.weight,
                [0.0; 4],
                CovarianceMatrix::isotropic(ca.variance, cb.variance),
            ));
        }
    }
    GaussianCombo::new_unit_trace(terms)
}

/// Combo for `ρ_a(p_a) ⊗ ρ_b(p_b)`.
pub fn input_state_combo(p_a: f64, p_b: f64, n: f64) -> Result<GaussianCombo, CoreError> {
    product_combo(&mode_mixture(p_a, n)?, &mode_mixture(p_b, n)?)
}

/// Combo for `|HOM⟩⟨HOM|`: the `|1,1⟩` combo conjugated by the balanced beam splitter.
pub fn hom_projector_combo(n: f64) -> Result<GaussianCombo, CoreError> {
    let photon = single_photon_combo(n)?;
    let bs = bs_matrix(0.5)?;
    let base = product_combo(&photon, &photon)?;
    let terms = base
        .terms()
        .iter()
        .map(|t| GaussianTerm::new(t.weight, bs.apply(&t.mean), t.cov.conjugate(&bs)))
        .collect();
    GaussianCombo::new_unit_trace(terms)
}

/// Pushes every term through `r → T r` with added noise: `V → T V Tᵀ + V_N`.
pub fn push_combo(
    combo: &GaussianCombo,
    map: &LinearQuadratureMap,
    added_noise: &Matrix4<f64>,
) -> GaussianCombo {
    let terms = combo
        .terms()
        .iter()
        .map(|t| GaussianTerm::new(t.weight, map.apply(&t.mean), t.cov.conjugate(map).add_f64(added_noise)))
        .collect();
    GaussianCombo { terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convention::qnd_matrix;

    #[test]
    fn photon_weights() {
        let [a, b] = single_photon_combo(1e-3).unwrap();
        assert!((f64::from(a.weight) - 1001.0).abs() < 1e-9);
        assert!((f64::from(b.weight) + 1000.0).abs() < 1e-9);
        for n in [1e-4, 1e-3, 0.05] {
            let [a, b] = single_photon_combo(n).unwrap();
            assert!((f64::from(a.weight + b.weight) - 1.0).abs() < 1e-15);
        }
        assert!(single_photon_combo(0.0).is_err());
        assert!(single_photon_combo(0.06).is_err());
    }

    #[test]
    fn photon_second_moment() {
        for n in [1e-2, 1e-3, 1e-4] {
            let c = input_state_combo(1.0, 0.0, n).unwrap();
            assert!((c.second_moment(0) - (3.0 + 2.0 * n)).abs() < 1e-12);
            assert!((c.second_moment(2) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn term_counts() {
        assert_eq!(input_state_combo(0.0, 0.0, 1e-3).unwrap().len(), 1);
        assert_eq!(input_state_combo(1.0, 1.0, 1e-3).unwrap().len(), 4);
        assert_eq!(input_state_combo(1.0, 0.0, 1e-3).unwrap().len(), 2);
        assert_eq!(input_state_combo(0.4, 0.7, 1e-3).unwrap().len(), 4);
        assert!(input_state_combo(1.5, 0.0, 1e-3).is_err());
    }

    #[test]
    fn projector_weights_sum_to_one() {
        let c = hom_projector_combo(1e-3).unwrap();
        assert_eq!(c.len(), 4);
        assert!((f64::from(c.weight_sum()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn push_vacuum_through_qnd() {
        let c = GaussianCombo::single(GaussianTerm::vacuum());
        let out = push_combo(&c, &qnd_matrix(1.0), &Matrix4::zeros());
        assert!((f64::from(out.terms()[0].cov.get(0, 0)) - 2.0).abs() < 1e-15);
        let same = push_combo(&c, &LinearQuadratureMap::identity(), &Matrix4::zeros());
        assert_eq!(same, c);
    }

    #[test]
    fn unit_trace_is_enforced() {
        let t = GaussianTerm::new(dd(0.5), [0.0; 4], CovarianceMatrix::vacuum());
        assert!(GaussianCombo::new_unit_trace(vec![t]).is_err());
        assert!(GaussianCombo::new(vec![]).is_err());
    }
}
