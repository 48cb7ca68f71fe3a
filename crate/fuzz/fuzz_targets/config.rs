#![no_main]

use std::path::Path;

use libfuzzer_sys::fuzz_target;
use qcarpet_cli::parse::parse_config;
use qcarpet_cli::{Command, RunConfig, Settings};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(entries) = parse_config(text) {
        for e in &entries {
            assert!(!e.key.is_empty());
            assert!(!e.key.contains('=') && !e.key.contains('#'));
            assert!(!e.value.contains('#'));
        }
    }
    // Only validation; never expands a packet.
    if let Ok(settings) = Settings::from_config_text(text, Path::new("fuzz.conf")) {
        let _ = RunConfig::from_settings(Command::Autocorr, &settings);
    }
});
