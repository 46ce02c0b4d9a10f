#![no_main]

use libfuzzer_sys::fuzz_target;
use qpdnls::lattice::LatticePoint;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(n) = text.parse::<LatticePoint>() {
        let again: LatticePoint = n.to_string().parse().expect("display output parses");
        assert_eq!(again, n);
    }
});
