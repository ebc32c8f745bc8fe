#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = q6j::parse::decode_report(s) {
            if r.angles.iter().chain([r.det_g, r.vol, r.zeta0, r.c1_re, r.c1_im, r.c1_err].iter()).all(|x| x.is_finite()) {
                let again = q6j::parse::decode_report(&r.to_json()).expect("re-encoded report decodes");
                assert_eq!(again.r_ladder, r.r_ladder);
            }
        }
    }
});
