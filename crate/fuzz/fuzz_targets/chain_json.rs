#![no_main]

use libfuzzer_sys::fuzz_target;
use qsphere::complex::Chain;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = Chain::from_json(s) {
        let back = Chain::from_json(&c.to_json()).expect("serialized chain must load");
        assert_eq!(back, c);
        let _ = c.render();
    }
});
