//! Schedules are bound to a fixed three-item instance, so item lists,
//! capacity checks and the interval pattern all get exercised.

#![no_main]
use libfuzzer_sys::fuzz_target;

use parknap::io::{parse_schedule, schedule_to_json};
use parknap::{Instance, Item};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let inst = Instance::new(3, vec![Item::new(1, 2, 0), Item::new(1, 1, 1), Item::new(2, -1, 3)]).unwrap();
    if let Ok(parsed) = parse_schedule(text, &inst) {
        let written = schedule_to_json(&parsed.schedule);
        let again = parse_schedule(&written, &inst).expect("written schedules parse");
        assert_eq!(again.schedule.entries(), parsed.schedule.entries());
        assert!(again.profit_mismatches.is_empty());
        // every λ lands in exactly one interval
        for c in parsed.schedule.criticals() {
            let k = parsed.schedule.locate(c);
            assert!(parsed.schedule.entries()[k].interval.contains(c));
        }
    }
});
