#![no_main]

use libfuzzer_sys::fuzz_target;
use polydom_core::Board;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(board) = Board::from_ascii(text) else { return };
    let again = Board::from_ascii(&board.to_ascii().unwrap()).unwrap();
    assert_eq!(again.canonical(), board.canonical());
});
