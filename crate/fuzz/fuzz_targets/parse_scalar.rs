#![no_main]

use libfuzzer_sys::fuzz_target;
use qsphere::expr::parse_scalar;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if s.len() > 256 {
        return;
    }
    if let Ok(x) = parse_scalar(s) {
        assert_eq!(parse_scalar(&x.to_string()).unwrap(), x);
    }
});
