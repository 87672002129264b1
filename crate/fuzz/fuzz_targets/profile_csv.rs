#![no_main]

use grassmann_harmonics::io::{parse_profile_rows, read_profile_csv, write_profile_csv};
use grassmann_harmonics::Geometry;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for (r, b) in [(1, 0), (2, 1)] {
        if let Ok(rows) = parse_profile_rows(s, r) {
            let text = write_profile_csv(r, &rows).expect("rows serialize");
            assert_eq!(parse_profile_rows(&text, r).expect("own output parses"), rows);
        }
        if let Ok(p) = read_profile_csv(Geometry::new(r, b).unwrap(), s) {
            let _ = p.eval(&vec![0.5; r]);
        }
    }
});
