#![no_main]

use fiberwise_core::io::records::{parse_class, ClassRecord};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(rec) = parse_class(text) else { return };
    if let Ok(v) = rec.fiber_class() {
        let back = ClassRecord::from_fiber_class(&v);
        assert_eq!(back.fiber_class().unwrap(), v);
    }
    if let Ok(p) = rec.p_class() {
        let _ = fiberwise_core::lattice::canonicalize(&p, true);
    }
});
