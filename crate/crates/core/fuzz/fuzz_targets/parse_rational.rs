#![no_main]
use libfuzzer_sys::fuzz_target;

use parknap::io::{parse_rational_json, rational_to_json, rational_to_string};
use parknap::rational::parse_rational;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_rational(s) {
        assert_eq!(parse_rational(&rational_to_string(&r)).unwrap(), r);
    }
    if let Ok(r) = parse_rational_json(s) {
        let text = rational_to_json(&r).to_string();
        assert_eq!(parse_rational_json(&text).unwrap(), r);
    }
});
