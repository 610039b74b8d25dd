#![no_main]

use libfuzzer_sys::fuzz_target;
use polydom_core::{hyperboard, verify_placement, Placement};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = Placement::from_json(text) else { return };
    assert_eq!(Placement::from_json(&p.to_json()).unwrap(), p);
    // Off-board and wrong-dimension cells must come back as errors.
    let board = hyperboard(2, 6).unwrap();
    if let Ok(report) = verify_placement(&board, &p) {
        assert_eq!(report.dominates, report.unguarded.is_empty());
    }
});
