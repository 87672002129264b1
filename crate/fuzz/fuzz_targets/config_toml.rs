#![no_main]

use grassmann_harmonics::config::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(cfg) = RunConfig::from_toml_str(s) else { return };
    if cfg.validate().is_ok() {
        let again = RunConfig::from_toml_str(&cfg.to_toml_string()).expect("own output parses");
        assert_eq!(again, cfg);
        let _ = cfg.l_values();
        let _ = cfg.radii(10.0, 1.0);
        if let Some(spec) = &cfg.lambda {
            let _ = spec.points(cfg.r);
        }
    }
});
