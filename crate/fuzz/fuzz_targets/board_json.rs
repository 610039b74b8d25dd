#![no_main]

use libfuzzer_sys::fuzz_target;
use polydom_core::Board;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(board) = Board::from_json(text) {
        assert_eq!(Board::from_json(&board.to_json()).unwrap(), board);
        for i in 0..board.len().min(64) {
            let _ = board.neighbors(i);
        }
    }
});
