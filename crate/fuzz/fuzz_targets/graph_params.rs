#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk_core::GraphSpec;

// Input is `family` and `params` separated by the first newline.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (family, params) = text.split_once('\n').unwrap_or((text, ""));
    if let Ok(spec) = GraphSpec::from_params(family, params) {
        spec.validate().unwrap();
        let _ = spec.diameter();
    }
});
