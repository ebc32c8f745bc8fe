#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(a) = q6j::parse::parse_angles(s) {
            assert!(a.theta.iter().all(|t| t.is_finite() && t.abs() < std::f64::consts::PI));
            let _ = q6j::geometry::gram_det(&a);
        }
    }
});
