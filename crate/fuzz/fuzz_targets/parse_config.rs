#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(config) = serilin_cli::parse_config(text) {
            // Anything accepted must serialize back to an accepted config.
            let echo = serde_json::to_string(&config).unwrap();
            let again = serilin_cli::parse_config(&echo).unwrap();
            assert_eq!(again.name, config.name);
        }
    }
});
