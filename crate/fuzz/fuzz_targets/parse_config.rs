#![no_main]

use centrafactor::pipeline::AnalysisConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = AnalysisConfig::from_toml(text) {
        cfg.validate().expect("accepted config validates");
        let _ = cfg.fit_options();
        let _ = cfg.centrality_options();
    }
});
