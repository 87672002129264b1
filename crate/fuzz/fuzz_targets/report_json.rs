#![no_main]

use grassmann_harmonics::report::Report;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(rep) = Report::from_json(s) {
        let _ = rep.to_csv();
        let _ = rep.to_json();
    }
});
