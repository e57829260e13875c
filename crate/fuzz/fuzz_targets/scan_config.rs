#![no_main]

use fiberwise_core::cycle::ScanConfig;
use fiberwise_core::io::from_toml;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = from_toml::<ScanConfig>(text) {
        let _ = cfg.validate();
    }
});
