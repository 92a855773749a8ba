use std::collections::VecDeque;

use super::Graph;

/// Connected components as sorted node-id lists, ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut members = Vec::new();
        while let Some(v) = queue.pop_front() {
            members.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

pub fn is_connected(g: &Graph) -> bool {
    g.node_count() > 0 && connected_components(g).len() == 1
}

/// Induced subgraph on the largest component. Ties go to the component
/// holding the lexicographically smallest label.
pub fn largest_connected_component(g: &Graph) -> Graph {
    let components = connected_components(g);
    if components.len() <= 1 {
        return g.clone();
    }
    // Components are ordered by smallest id, i.e. smallest label, so the
    // first maximal one wins ties.
    let mut best = &components[0];
    for c in &components[1..] {
        if c.len() > best.len() {
            best = c;
        }
    }
    g.induced_subgraph(best)
}
