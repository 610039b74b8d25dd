#![no_main]

use libfuzzer_sys::fuzz_target;
use polydom_reduction::parse_sat;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(inst) = parse_sat(text) else { return };
    assert_eq!(parse_sat(&inst.to_dimacs()).unwrap(), inst);
});
