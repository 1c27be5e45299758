//! Closure construction at vertex counts far beyond the unit-test corpus.
//! The point is that the component-condensed bitset algorithm stays
//! comfortably fast where a naive quadratic fixpoint would not finish.

use std::collections::VecDeque;
use std::time::Instant;

use supertropical::SupportDigraph;

#[test]
fn long_path_closure_counts_exactly() {
    let n = 4000;
    let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let g = SupportDigraph::from_edges(n, &edges).unwrap();
    let r = g.reachability();
    // u reaches exactly the vertices after it
    assert_eq!(r.len(), n * (n - 1) / 2);
    assert!(r.contains(0, n - 1));
    assert!(!r.contains(0, 0));
    assert!(!r.contains(n - 1, 0));
}

#[test]
fn giant_cycle_closure_is_complete() {
    let n = 3000;
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let g = SupportDigraph::from_edges(n, &edges).unwrap();
    let r = g.reachability();
    assert_eq!(r.len(), n * n);
}

#[test]
fn sparse_random_graph_agrees_with_bfs() {
    let n = 5000;
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    let mut next = |bound: usize| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) as usize) % bound
    };
    let edges: Vec<(usize, usize)> = (0..3 * n).map(|_| (next(n), next(n))).collect();
    let g = SupportDigraph::from_edges(n, &edges).unwrap();

    let start = Instant::now();
    let r = g.reachability();
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 30,
        "closure of a sparse {n}-vertex graph took {elapsed:?}"
    );

    // breadth-first search is the oracle for a handful of source rows
    for &src in &[0usize, 1, 777, 2500, n - 1] {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for &w in g.out_neighbors(src) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in g.out_neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        for (v, &expected) in seen.iter().enumerate() {
            assert_eq!(r.contains(src, v), expected, "pair ({src}, {v})");
        }
    }
}
