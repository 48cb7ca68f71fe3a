#![no_main]

use libfuzzer_sys::fuzz_target;
use qcarpet_cli::parse::parse_grid;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((w, h)) = parse_grid(text) {
        assert!(w > 0 && h > 0);
        assert_eq!(parse_grid(&format!("{w}x{h}")), Ok((w, h)));
    }
});
