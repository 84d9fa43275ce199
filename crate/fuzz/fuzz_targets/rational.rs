#![no_main]

use genus2_core::rational::{format_rational, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_rational(s) {
        let text = format_rational(&x);
        assert_eq!(parse_rational(&text).unwrap(), x);
        assert_eq!(format_rational(&parse_rational(&text).unwrap()), text);
    }
});
