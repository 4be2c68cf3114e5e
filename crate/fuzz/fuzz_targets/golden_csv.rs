#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk_core::lab::{parse_golden, GoldenCommutator, GoldenCycleRow, GoldenFloor, GoldenPeriodicity};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_golden::<GoldenFloor>(text);
    let _ = parse_golden::<GoldenCycleRow>(text);
    let _ = parse_golden::<GoldenPeriodicity>(text);
    let _ = parse_golden::<GoldenCommutator>(text);
});
