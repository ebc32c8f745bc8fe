#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(spins) = q6j::parse::parse_spins(s) {
            // the text order is a,b,e,d,c,f
            let text: Vec<String> = [spins.a, spins.b, spins.e, spins.d, spins.c, spins.f]
                .iter()
                .map(|x| format!("{}/2", x.twice))
                .collect();
            let again = q6j::parse::parse_spins(&text.join(",")).expect("reformatted spins parse");
            assert_eq!(again, spins);
        }
    }
});
