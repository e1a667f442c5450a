use gaussian_core::{
    bs_matrix, hom_projector_combo, input_state_combo, is_physical, matrix_element, mode_mixture,
    product_combo, push_combo, qnd_matrix, single_photon_combo, thermal_covariance,
};
use nalgebra::Matrix4;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gate_maps_are_symplectic(g in -10.0f64..10.0, t in 0.0f64..=1.0) {
        prop_assert!(qnd_matrix(g).is_symplectic(1e-12));
        prop_assert!(bs_matrix(t).unwrap().is_symplectic(1e-12));
        prop_assert!(qnd_matrix(g).compose(&bs_matrix(t).unwrap()).is_symplectic(1e-11));
    }

    #[test]
    fn pushed_terms_stay_physical(g in -5.0f64..5.0, t in 0.0f64..=1.0, noise in 0.0f64..0.5, p in 0.0f64..=1.0) {
        let map = qnd_matrix(g).compose(&bs_matrix(t).unwrap());
        let combo = input_state_combo(p, 1.0 - p, 1e-3).unwrap();
        let out = push_combo(&combo, &map, &thermal_covariance(noise * 0.5));
        for term in out.terms() {
            prop_assert!(is_physical(&term.cov.to_f64()));
        }
    }

    #[test]
    fn element_is_symmetric(g in 0.0f64..3.0, pa in 0.0f64..=1.0, pb in 0.0f64..=1.0) {
        let hom = hom_projector_combo(1e-3).unwrap();
        let out = push_combo(&input_state_combo(pa, pb, 1e-3).unwrap(), &qnd_matrix(g), &Matrix4::zeros());
        let ab = matrix_element(&hom, &out).unwrap();
        let ba = matrix_element(&out, &hom).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-12);
    }

    #[test]
    fn projector_element_is_a_probability(g in 0.0f64..4.0, pa in 0.0f64..=1.0, pb in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let n = 1e-3;
        let hom = hom_projector_combo(n).unwrap();
        let map = bs_matrix(t).unwrap().compose(&qnd_matrix(g));
        let out = push_combo(&input_state_combo(pa, pb, n).unwrap(), &map, &Matrix4::zeros());
        let v = matrix_element(&hom, &out).unwrap();
        prop_assert!(v >= -5.0 * n && v <= 1.0 + 5.0 * n, "{v}");
    }
}

#[test]
fn photon_second_moment_converges_linearly() {
    let mut errs = Vec::new();
    for n in [1e-2, 1e-3, 1e-4] {
        let photon = single_photon_combo(n).unwrap();
        let combo = product_combo(&photon, &mode_mixture(0.0, n).unwrap()).unwrap();
        errs.push((combo.second_moment(0) - 3.0, n));
    }
    for (e, n) in &errs {
        assert!((e / n - 2.0).abs() < 1e-8, "slope {}", e / n);
    }
}
