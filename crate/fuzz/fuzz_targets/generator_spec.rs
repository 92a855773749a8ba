#![no_main]

use centrafactor::graph::{generate, GeneratorModel, GeneratorSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = text.parse::<GeneratorSpec>() else {
        return;
    };
    let back: GeneratorSpec = spec.to_string().parse().expect("display output parses");
    assert_eq!(back, spec);
    let n = match spec.model {
        GeneratorModel::Random { n, .. }
        | GeneratorModel::ScaleFree { n, .. }
        | GeneratorModel::SmallWorld { n, .. } => n,
    };
    if n <= 2000 {
        let g = generate(&spec).expect("valid spec generates");
        g.validate().expect("generated graph is well formed");
    }
});
