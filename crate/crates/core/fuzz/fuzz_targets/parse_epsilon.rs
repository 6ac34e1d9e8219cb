#![no_main]
use libfuzzer_sys::fuzz_target;

use parknap::Epsilon;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(eps) = s.parse::<Epsilon>() {
            assert!(eps.num() > 0 && eps.num() < eps.den());
            assert_eq!(eps.to_string().parse::<Epsilon>().unwrap(), eps);
        }
    }
});
