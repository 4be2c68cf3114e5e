#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk_core::io::{matrix_to_json, parse_matrix_json};
use qwalk_core::Tolerances;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let tol = Tolerances::default();
    if let Ok(p) = parse_matrix_json(text, &tol) {
        let again = parse_matrix_json(&matrix_to_json(&p).unwrap(), &tol).unwrap();
        assert_eq!(again, p);
    }
});
