use proptest::prelude::*;
use q6j::harness::{ConvergenceRow, CSV_HEADER};
use q6j::parse::{decode_report, parse_angles, parse_convergence_csv, parse_csv_row, parse_spins};

fn row_line(r: &ConvergenceRow) -> String {
    let n = q6j::harness::num;
    format!(
        "{},{},{},{},{},{},{}",
        r.r,
        n(r.logmag_6j),
        n(r.two_pi_log_over_r),
        n(r.vol_target),
        n(r.gap),
        n(r.predictor_logmag),
        n(r.ratio)
    )
}

proptest! {
    #[test]
    fn spins_roundtrip(t in proptest::array::uniform6(0u32..400)) {
        let text: Vec<String> = t.iter().map(|x| if x % 2 == 0 { (x / 2).to_string() } else { format!("{x}/2") }).collect();
        let s = parse_spins(&text.join(",")).unwrap();
        // text order a,b,e,d,c,f
        prop_assert_eq!([s.a.twice, s.b.twice, s.e.twice, s.d.twice, s.c.twice, s.f.twice], t);
    }

    #[test]
    fn angles_in_multiples_of_pi(k in -0.99f64..0.99) {
        let a = parse_angles(&format!("{k}pi")).unwrap();
        prop_assert!((a.theta[0] - k * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn csv_rows_roundtrip(r in 3u32..100_000, v in proptest::array::uniform6(-1e6f64..1e6)) {
        let row = ConvergenceRow { r, logmag_6j: v[0], two_pi_log_over_r: v[1], vol_target: v[2], gap: v[3], predictor_logmag: v[4], ratio: v[5] };
        prop_assert_eq!(parse_csv_row(&row_line(&row)).unwrap(), row);
        let table = format!("{}\n{}\n", CSV_HEADER.join(","), row_line(&row));
        prop_assert_eq!(parse_convergence_csv(&table).unwrap(), vec![row]);
    }

    #[test]
    fn parsers_never_panic(s in "\\PC{0,64}") {
        let _ = parse_spins(&s);
        let _ = parse_angles(&s);
        let _ = parse_csv_row(&s);
        let _ = decode_report(&s);
    }
}

#[test]
fn seed_report_decodes() {
    let text = include_str!("../../../fuzz/corpus/decode_report/c1_008pi.json");
    let r = decode_report(text).unwrap();
    assert_eq!(r.r_ladder, vec![201, 401, 801, 1601]);
    assert_eq!(decode_report(&r.to_json()).unwrap(), r);
    assert!(decode_report("{\"angles\": [0,0,0,0,0,0]}").is_err());
}
