#![no_main]

use libfuzzer_sys::fuzz_target;
use qcarpet_cli::parse::parse_window;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(window) = parse_window(text) {
        assert_eq!(parse_window(&window.to_string()), Ok(window));
        let _ = window.start.resolve(4.0 / std::f64::consts::PI, None);
        let _ = window.end.resolve(4.0 / std::f64::consts::PI, Some(0.02));
    }
});
