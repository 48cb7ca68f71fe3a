#![no_main]

use libfuzzer_sys::fuzz_target;
use qcarpet_cli::parse::parse_momentum;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_momentum(text) {
        assert!(p.is_finite());
    }
});
