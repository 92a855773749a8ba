#![no_main]

use std::path::Path;

use centrafactor::pipeline::{parse_manifest, Source};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(sources) = parse_manifest(text, Path::new("/base"), 7) else {
        return;
    };
    for s in sources {
        if let Source::Generated(spec) = s {
            spec.validate().expect("manifest only yields valid specs");
        }
    }
});
