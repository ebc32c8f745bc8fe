use std::f64::consts::PI;

use q6j::harness::{build_spin_sequence, convergence_csv, convergence_table, lattice_angles};
use q6j::parse::parse_convergence_csv;
use q6j::{AngleSet, Precision};

#[test]
fn csv_output_parses_back() {
    let a = AngleSet::regular(PI / 4.0).unwrap();
    let rows = convergence_table(&a, &[51, 101, 201], Precision::Double).unwrap();
    let parsed = parse_convergence_csv(&convergence_csv(&rows).unwrap()).unwrap();
    assert_eq!(parsed.len(), 3);
    for (p, r) in parsed.iter().zip(&rows) {
        assert_eq!(p.r, r.r);
        assert_eq!(p.gap, r.gap);
        assert_eq!(p.ratio, r.ratio);
    }
}

#[test]
fn lattice_angles_approach_targets() {
    for theta in [0.0, 0.2 * PI, PI / 4.0, PI / 3.0, -0.3 * PI] {
        let a = AngleSet::regular(theta).unwrap();
        for r in [101u32, 401, 1601] {
            let l = lattice_angles(&build_spin_sequence(&a, r).unwrap(), r).unwrap();
            let worst = l
                .theta
                .iter()
                .map(|t| (t - theta).abs())
                .fold(0.0, f64::max);
            assert!(
                worst <= 4.0 * PI / r as f64 + 1e-12,
                "θ = {theta}, r = {r}: off by {worst}"
            );
        }
    }
}

#[test]
fn double_and_double_double_agree_for_positive_sums() {
    let a = AngleSet::regular(0.2 * PI).unwrap();
    let d = convergence_table(&a, &[201], Precision::Double).unwrap();
    let dd = convergence_table(&a, &[201], Precision::DoubleDouble).unwrap();
    assert!((d[0].logmag_6j - dd[0].logmag_6j).abs() < 1e-10);
}
