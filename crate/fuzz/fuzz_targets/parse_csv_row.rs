#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = q6j::parse::parse_csv_row(s);
        let _ = q6j::parse::parse_convergence_csv(s);
    }
});
