#![no_main]

use fiberwise_core::io::records::{parse_kernel, KernelRecord};
use fiberwise_core::lattice::FiberClass;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(rec) = parse_kernel(text) else { return };
    let Ok(k) = rec.kernel() else { return };
    assert_eq!(KernelRecord::from_kernel(&k).kernel().unwrap(), k);
    if let Ok(v) = FiberClass::new(1, 1, k.source.clone()) {
        if let Ok(w) = k.transform(&v) {
            assert_eq!(k.invert().transform(&w).unwrap(), v);
        }
    }
});
