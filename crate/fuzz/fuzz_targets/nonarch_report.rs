#![no_main]

use genus2_core::format::NonArchDocument;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = NonArchDocument::from_json(s) {
        let text = doc.to_json();
        assert_eq!(NonArchDocument::from_json(&text).unwrap(), doc);
    }
});
