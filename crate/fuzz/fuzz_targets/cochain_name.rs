#![no_main]

use libfuzzer_sys::fuzz_target;
use qsphere::cochains::Cochain;
use qsphere::AlgElem;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if s.len() > 128 {
        return;
    }
    if let Ok(c) = Cochain::parse_name(s) {
        let args = vec![AlgElem::one(); c.degree()];
        let _ = c.eval(&args);
    }
});
