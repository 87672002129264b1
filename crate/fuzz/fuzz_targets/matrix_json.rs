#![no_main]

use grassmann_harmonics::io::{decompose, matrix_to_json, parse_group_element, parse_matrix_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_matrix_json(s) {
        let back = parse_matrix_json(&matrix_to_json(&m).to_string()).expect("own output parses");
        assert_eq!(back, m);
    }
    for r in 1..=2 {
        if let Ok(g) = parse_group_element(s, r) {
            let _ = decompose(&g);
        }
    }
});
