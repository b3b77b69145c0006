use std::path::Path;

use battlespace::formats::encoded::{encode, read_encoded, text_dump, write_encoded};
use battlespace::formats::snapshot::read_state;
use battlespace_core::encode::Layout;

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn classic_board_dump_matches_golden_text() {
    let state = read_state(&fixture("classic_board.json")).unwrap();
    state.check_invariants().unwrap();
    let array = encode(&state, Layout::Binary, 0).unwrap();
    assert_eq!(array.dims, [10, 10, 11]);
    let golden = std::fs::read_to_string(fixture("classic_board_binary.txt")).unwrap();
    let ours = text_dump(&array);
    for (i, (a, b)) in ours.lines().zip(golden.lines()).enumerate() {
        assert_eq!(a, b, "line {}", i + 1);
    }
    assert_eq!(ours, golden);
}

#[test]
fn binary_file_round_trip_for_every_layout() {
    let state = read_state(&fixture("classic_board.json")).unwrap();
    for layout in [Layout::Binary, Layout::Layers, Layout::List] {
        let a = encode(&state, layout, 1).unwrap();
        let mut buf = Vec::new();
        write_encoded(&mut buf, &a).unwrap();
        assert_eq!(&buf[..4], b"BSEN");
        assert_eq!(read_encoded(&mut buf.as_slice()).unwrap(), a);
        let mut truncated = &buf[..buf.len() - 1];
        assert!(read_encoded(&mut truncated).is_err());
    }
}

#[test]
fn list_layout_dims() {
    let state = read_state(&fixture("classic_board.json")).unwrap();
    // Player 1 has soldier, tank, truck and airplane alive.
    assert_eq!(encode(&state, Layout::List, 1).unwrap().dims, [4, 19]);
}
