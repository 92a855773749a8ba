#![no_main]

use centrafactor::pipeline::{
    corpus_json, load_corpus_json, plot_ccc_distribution, plot_factor_loadings, summary_csv,
    validate_report,
};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(report) = load_corpus_json(text) else {
        return;
    };
    for net in &report.networks {
        let _ = validate_report(net, &report.config);
    }
    let _ = summary_csv(&report);
    let _ = plot_ccc_distribution(&report);
    let _ = plot_factor_loadings(&report);
    let again = load_corpus_json(&corpus_json(&report)).expect("re-serialized report loads");
    assert_eq!(corpus_json(&again), corpus_json(&report));
});
