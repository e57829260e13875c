#![no_main]

use fiberwise_core::grr::{presets, validate_ring};
use fiberwise_core::io::ring::parse_ring;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let lookup = |name: &str| presets::load(name).ok().map(|(r, _)| r);
    if let Ok((ring, base)) = parse_ring(text, lookup) {
        let _ = validate_ring(&ring, base.as_ref());
    }
});
