#![no_main]

use genus2_core::format::ArchDocument;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = ArchDocument::from_json(s) {
        let text = doc.to_json();
        let back = ArchDocument::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }
});
