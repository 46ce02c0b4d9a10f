#![no_main]

use libfuzzer_sys::fuzz_target;
use qpdnls::combinatorics::BranchTree;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = text.parse::<BranchTree>() {
        let again: BranchTree = g.to_string().parse().expect("display output parses");
        assert_eq!(again, g);
        assert_eq!(2 * g.ell() + 1, g.twice_sigma());
    }
});
