#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk_core::io::{parse_snapshot_json, snapshot_to_json};
use qwalk_core::Tolerances;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let tol = Tolerances::default();
    if let Ok(s) = parse_snapshot_json(text, &tol) {
        let again = parse_snapshot_json(&snapshot_to_json(&s, None).unwrap(), &tol).unwrap();
        assert_eq!(again, s);
    }
});
