#![no_main]

use libfuzzer_sys::fuzz_target;
use qpdnls::solver::ProblemConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ProblemConfig::from_json(text) {
        let again = ProblemConfig::from_json(&cfg.to_json()).expect("serialised config parses");
        assert_eq!(again.to_json(), cfg.to_json());
    }
});
