#![no_main]

use fiberwise_core::io::rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = rational(text) {
        assert_eq!(rational(&x.to_string()).unwrap(), x);
    }
});
