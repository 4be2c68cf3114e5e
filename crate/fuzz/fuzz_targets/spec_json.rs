#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk_core::io::parse_spec_json;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = parse_spec_json(text) {
        let n = spec.n_states().unwrap();
        if n <= 64 {
            let _ = qwalk_core::graph::build_transition(&spec);
        }
    }
});
