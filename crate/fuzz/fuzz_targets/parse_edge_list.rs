#![no_main]

use centrafactor::graph::{parse_edge_list, read_edge_list, serialize_edge_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(parsed) = read_edge_list(data) else {
        return;
    };
    parsed
        .graph
        .validate()
        .expect("parsed graph is well formed");
    let text = serialize_edge_list(&parsed.graph);
    let again = parse_edge_list(&text).expect("serialized graph reparses");
    assert_eq!(again.graph, parsed.graph);
    assert_eq!(again.diagnostics.self_loops_dropped, 0);
    assert_eq!(again.diagnostics.duplicates_collapsed, 0);
});
