#![no_main]
use libfuzzer_sys::fuzz_target;

use parknap::io::{instance_to_json, parse_instance};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(inst) = parse_instance(text) {
            let again = parse_instance(&instance_to_json(&inst)).expect("written instances parse");
            assert_eq!(again, inst);
        }
    }
});
