#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(config) = anisogreen_cli::parse_config_str(text) {
            // Accepted configurations hash to a fixed-width digest.
            assert_eq!(config.hash.len(), 64);
        }
    }
});
