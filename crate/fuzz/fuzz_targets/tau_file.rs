#![no_main]

use genus2_core::format::{parse_tau, write_tau};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(tau) = parse_tau(s) {
        assert!(tau.det_imag() > 0.0);
        assert_eq!(parse_tau(&write_tau(&tau)).unwrap(), tau);
    }
});
