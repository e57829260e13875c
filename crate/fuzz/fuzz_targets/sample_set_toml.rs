#![no_main]

use fiberwise_core::grr::{presets, solve_moduli_invariants};
use fiberwise_core::io::samples::SampleSetFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = SampleSetFile::parse(text) else { return };
    let base = presets::projective_plane();
    let (Ok(samples), Ok(constraints)) = (file.samples(&base), file.constraints()) else { return };
    if samples.len() <= 8 {
        let _ = solve_moduli_invariants(&base, &samples, &constraints);
    }
});
