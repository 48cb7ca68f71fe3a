#![no_main]

use libfuzzer_sys::fuzz_target;
use qcarpet::carpet::{parse_csv, write_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(grid) = parse_csv(text) {
        let again = parse_csv(&write_csv(&grid)).expect("written grids parse");
        assert_eq!(again, grid);
    }
});
