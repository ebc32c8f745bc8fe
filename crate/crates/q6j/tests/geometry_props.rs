use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use q6j::geometry::*;
use q6j::AngleSet;

fn ultra_ideal() -> impl Strategy<Value = AngleSet> {
    prop::array::uniform6(0.0..PI / 3.0).prop_map(|t| AngleSet::new(t).unwrap())
}

/// Vertex (a,b,e) ideal, the rest ultra-ideal.
fn one_ideal() -> impl Strategy<Value = AngleSet> {
    (
        0.05..PI / 2.0,
        0.05..PI / 2.0,
        prop::array::uniform3(0.0..PI / 4.0),
    )
        .prop_filter("θ_e must stay below π/2", |(a, b, _)| a + b > PI / 2.0)
        .prop_map(|(a, b, [c, d, f])| AngleSet::new([a, b, c, d, PI - a - b, f]).unwrap())
}

fn mixed() -> impl Strategy<Value = AngleSet> {
    prop_oneof![ultra_ideal(), one_ideal()]
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn discriminant_is_sixteen_det(a in mixed()) {
        let det = gram_det(&a);
        prop_assert!(det < 0.0);
        let st = stationary_point(&a).unwrap();
        prop_assert!(rel(st.discriminant(), Complex64::new(16.0 * det, 0.0)) <= 1e-9);
        let s: f64 = a.sigma().iter().sum();
        let t: f64 = a.tau().iter().sum();
        prop_assert!((s - t).abs() < 1e-13);
        prop_assert!(st.p0.norm() < 1e-12);
    }

    #[test]
    fn unit_root_in_window(a in mixed()) {
        let st = stationary_point(&a).unwrap();
        let (lo, hi) = a.window();
        prop_assert!((st.u0.norm() - 1.0).abs() <= 1e-10);
        prop_assert!(st.zeta0 > lo && st.zeta0 < hi);
        prop_assert!(potential_f(&a, st.zeta0).unwrap().fp.norm() < 1e-10);
    }

    #[test]
    fn second_derivative_product_identity(a in mixed()) {
        let st = stationary_point(&a).unwrap();
        let lhs = st.product_identity(&a);
        let want = 4.0 * PI * (-gram_det(&a)).sqrt();
        prop_assert!((lhs.norm() - want).abs() <= 1e-9 * want);
        prop_assert!(lhs.im.abs() <= 1e-9 * want);
    }

    #[test]
    fn volume_is_relabeling_invariant(a in ultra_ideal()) {
        let v = volume(&a).unwrap().vol;
        prop_assert!(v > 0.0);
        for b in a.symmetries() {
            prop_assert!((volume(&b).unwrap().vol - v).abs() < 1e-10 * v.max(1.0));
        }
    }
}

#[test]
fn regular_volume_decreases_to_euclidean() {
    let end = (1.0f64 / 3.0).acos();
    let vols: Vec<f64> = (0..20)
        .map(|i| {
            volume(&AngleSet::regular(end * i as f64 / 20.0).unwrap())
                .unwrap()
                .vol
        })
        .collect();
    for w in vols.windows(2) {
        assert!(w[1] < w[0], "{vols:?}");
    }
    assert!(volume(&AngleSet::regular(end).unwrap()).unwrap().vol < 1e-6);
}

#[test]
fn right_angled_and_ideal_references() {
    // regular ideal: 3Λ(π/3); θ = 0: 8Λ(π/4)
    let v = volume(&AngleSet::regular(PI / 3.0).unwrap()).unwrap().vol;
    assert!((v - 3.0 * q6j::qdilog::lobachevsky(PI / 3.0)).abs() < 1e-12);
    let v = volume(&AngleSet::regular(0.0).unwrap()).unwrap().vol;
    assert!((v - 8.0 * q6j::qdilog::lobachevsky(PI / 4.0)).abs() < 1e-12);
}
