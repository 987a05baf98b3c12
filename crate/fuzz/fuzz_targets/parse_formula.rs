#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(phi) = cetcs::logic::parse_formula(text) {
            let again = cetcs::logic::parse_formula(&phi.to_string()).expect("rendered formula parses");
            assert_eq!(phi, again);
        }
    }
});
