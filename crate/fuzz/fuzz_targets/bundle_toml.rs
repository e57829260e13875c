#![no_main]

use fiberwise_core::cycle::sheaf::det_bundle;
use fiberwise_core::io::bundle::{parse_bundle, BundleFile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok((e, c)) = parse_bundle(text) else { return };
    let file = BundleFile::from_bundle(&e, c.as_ref());
    assert_eq!(file.bundle().unwrap(), e);
    if e.rank() <= 4 && e.n() <= 4 {
        let _ = det_bundle(&e);
    }
});
