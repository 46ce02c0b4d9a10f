#![no_main]

use libfuzzer_sys::fuzz_target;
use qpdnls::solver::io::{read_trajectory_csv, write_trajectory_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(traj) = read_trajectory_csv(data, None) {
        let nu = traj.states.first().map_or(1, |s| s.truncation.nu);
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, nu, &mut buf).expect("write to memory");
        let again = read_trajectory_csv(&buf[..], Some(traj.states[0].truncation)).expect("written trajectory parses");
        assert_eq!(again, traj);
    }
});
