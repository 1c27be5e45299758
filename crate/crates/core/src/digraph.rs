//! Support digraphs and the graph algorithms behind every nilpotency
//! decision in this crate.
//!
//! A matrix's *support* has an edge `i -> j` exactly when entry `(i, j)` is
//! not `eps` — ghost entries count, because a ghost survives multiplication
//! just as a real value does.  Nilpotency of the matrix is equivalent to the
//! support being acyclic, which is what makes the questions here decidable
//! by pure graph work.
//!
//! Everything in this module is deterministic by construction, not merely by
//! accident: cycle search always starts from the smallest vertex and scans
//! neighbors in ascending order, and topological ordering always removes the
//! smallest available vertex first.  Two runs on equal inputs return
//! identical witnesses and identical orderings, which the CLI relies on for
//! byte-stable output.
//!
//! Vertices are 0-based in this API; all text output (edge dumps, cycle
//! witnesses) is 1-based.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use thiserror::Error;

use crate::matrix::{Permutation, SuperMatrix};
use crate::scalar::ExtReal;

/// An edge endpoint is outside `{0..n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("edge ({u}, {v}) out of range for {n} vertices")]
pub struct EdgeOutOfRange {
    pub n: usize,
    pub u: usize,
    pub v: usize,
}

/// A directed cycle `v_0 -> v_1 -> ... -> v_{k-1} -> v_0` with distinct
/// vertices; a self-loop is the length-1 case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    vertices: Vec<usize>,
}

impl CycleWitness {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a witness always names at least one vertex
    }

    /// Checks the witness against a graph: consecutive edges (including the
    /// wrap-around) must exist and the vertices must be pairwise distinct.
    pub fn is_valid_for(&self, graph: &SupportDigraph) -> bool {
        let k = self.vertices.len();
        if k == 0 {
            return false;
        }
        let mut seen = vec![false; graph.n()];
        for &v in &self.vertices {
            if v >= graph.n() || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        (0..k).all(|i| graph.has_edge(self.vertices[i], self.vertices[(i + 1) % k]))
    }
}

impl fmt::Display for CycleWitness {
    /// Space-separated 1-based vertex labels in cycle order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", v + 1)?;
        }
        Ok(())
    }
}

/// The graph was required to be acyclic but is not; carries the cycle found
/// by the deterministic search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("support digraph has a directed cycle: {witness}")]
pub struct NotADag {
    pub witness: CycleWitness,
}

/// A directed graph on `{0..n}` with adjacency lists kept sorted, so every
/// traversal scans neighbors in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportDigraph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl SupportDigraph {
    pub fn new(n: usize) -> SupportDigraph {
        assert!(n >= 1, "vertex count must be positive");
        SupportDigraph {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<SupportDigraph, EdgeOutOfRange> {
        let mut g = SupportDigraph::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(EdgeOutOfRange { n, u, v });
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Inserts `u -> v`, keeping the neighbor list sorted; duplicates are
    /// ignored.  Panics on out-of-range endpoints.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "edge endpoint out of range");
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Out-neighbors of `u` in ascending order.
    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.iter().map(|&v| (u, v)));
        }
        out
    }

    /// Finds a directed cycle if one exists, deterministically: depth-first
    /// search started from the smallest unvisited vertex, neighbors in
    /// ascending order, returning the first cycle closed.  A self-loop comes
    /// back as a single-vertex witness.
    pub fn find_cycle(&self) -> Option<CycleWitness> {
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; self.n];
        for start in 0..self.n {
            if color[start] != WHITE {
                continue;
            }
            // frames of (vertex, index of next neighbor to scan)
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            color[start] = GRAY;
            while let Some(frame) = stack.last_mut() {
                let (u, i) = *frame;
                if i < self.adj[u].len() {
                    frame.1 += 1;
                    let w = self.adj[u][i];
                    match color[w] {
                        WHITE => {
                            color[w] = GRAY;
                            stack.push((w, 0));
                        }
                        GRAY => {
                            // w is on the current path: the path suffix from
                            // w to u plus the edge u -> w closes the cycle
                            let pos = stack
                                .iter()
                                .position(|&(v, _)| v == w)
                                .expect("gray vertex must be on the path");
                            let vertices = stack[pos..].iter().map(|&(v, _)| v).collect();
                            return Some(CycleWitness { vertices });
                        }
                        _ => {}
                    }
                } else {
                    color[u] = BLACK;
                    stack.pop();
                }
            }
        }
        None
    }

    /// Topological labelling of an acyclic graph, deterministically: repeat
    /// "remove the smallest vertex with no remaining incoming edge".  The
    /// returned permutation maps each vertex to its removal position, so an
    /// edge `u -> v` always has `label(u) < label(v)` — conjugating a matrix
    /// by this permutation therefore moves every supported entry strictly
    /// above the diagonal.
    ///
    /// On a cyclic graph, returns the deterministic cycle witness instead.
    pub fn topological_order(&self) -> Result<Permutation, NotADag> {
        let mut indegree = vec![0usize; self.n];
        for nbrs in &self.adj {
            for &w in nbrs {
                indegree[w] += 1;
            }
        }
        let mut ready: BinaryHeap<Reverse<usize>> = (0..self.n)
            .filter(|&v| indegree[v] == 0)
            .map(Reverse)
            .collect();
        let mut map = vec![usize::MAX; self.n];
        let mut next_label = 0usize;
        while let Some(Reverse(u)) = ready.pop() {
            map[u] = next_label;
            next_label += 1;
            for &w in &self.adj[u] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        if next_label < self.n {
            let witness = self
                .find_cycle()
                .expect("vertices remained, so a cycle exists");
            return Err(NotADag { witness });
        }
        Ok(Permutation::from_map(map).expect("labels are a bijection"))
    }

    /// Maximum number of edges on any directed path; errors with a cycle
    /// witness when paths are unbounded.
    pub fn longest_path_length(&self) -> Result<usize, NotADag> {
        let order = self.topological_order()?;
        // process vertices from last label to first so successors are done
        let mut by_label = vec![0usize; self.n];
        for v in 0..self.n {
            by_label[order.apply(v)] = v;
        }
        let mut dist = vec![0usize; self.n];
        let mut best = 0usize;
        for &u in by_label.iter().rev() {
            for &w in &self.adj[u] {
                dist[u] = dist[u].max(1 + dist[w]);
            }
            best = best.max(dist[u]);
        }
        Ok(best)
    }

    /// Strongly connected components by Tarjan's algorithm (iterative).
    /// Returns `(component id per vertex, component count)`; ids follow pop
    /// order, so a component only reaches components with smaller ids.
    fn tarjan(&self) -> (Vec<usize>, usize) {
        let n = self.n;
        const UNSET: usize = usize::MAX;
        let mut index = vec![UNSET; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut comp = vec![UNSET; n];
        let mut next_index = 0usize;
        let mut comp_count = 0usize;
        let mut call: Vec<(usize, usize)> = Vec::new();

        for start in 0..n {
            if index[start] != UNSET {
                continue;
            }
            index[start] = next_index;
            low[start] = next_index;
            next_index += 1;
            stack.push(start);
            on_stack[start] = true;
            call.push((start, 0));
            while let Some(frame) = call.last_mut() {
                let (u, i) = *frame;
                if i < self.adj[u].len() {
                    frame.1 += 1;
                    let w = self.adj[u][i];
                    if index[w] == UNSET {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[u] = low[u].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(p, _)) = call.last() {
                        low[p] = low[p].min(low[u]);
                    }
                    if low[u] == index[u] {
                        loop {
                            let w = stack.pop().expect("component stack underflow");
                            on_stack[w] = false;
                            comp[w] = comp_count;
                            if w == u {
                                break;
                            }
                        }
                        comp_count += 1;
                    }
                }
            }
        }
        (comp, comp_count)
    }

    /// The transitive closure over walks of length >= 1: `(u, v)` is in the
    /// result iff some directed walk with at least one edge leads from `u`
    /// to `v`.  In particular `(v, v)` present means `v` lies on a cycle.
    ///
    /// Computed per strongly connected component over the condensation, with
    /// bitset rows, so graphs with tens of thousands of vertices close in
    /// well under a second when sparse.
    pub fn reachability(&self) -> Relation {
        let n = self.n;
        let (comp, ncomp) = self.tarjan();
        let words = Relation::words_for(n);

        let mut members = vec![0u64; ncomp * words];
        let mut cyclic = vec![false; ncomp];
        for v in 0..n {
            members[comp[v] * words + v / 64] |= 1u64 << (v % 64);
        }
        let mut comp_vertices: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
        for v in 0..n {
            comp_vertices[comp[v]].push(v);
        }
        for u in 0..n {
            for &w in &self.adj[u] {
                if comp[u] == comp[w] {
                    // an internal edge: the component carries a cycle (a
                    // self-loop, or part of a multi-vertex component)
                    cyclic[comp[u]] = true;
                }
            }
        }

        // reach[c] = vertices reachable from (any vertex of) component c by
        // walks of length >= 1.  Component ids are sinks-first, so every
        // component a crossing edge lands in is already finished.
        let mut reach = vec![0u64; ncomp * words];
        for c in 0..ncomp {
            if cyclic[c] {
                for k in 0..words {
                    reach[c * words + k] |= members[c * words + k];
                }
            }
            for &u in &comp_vertices[c] {
                for &w in &self.adj[u] {
                    let d = comp[w];
                    if d == c {
                        continue;
                    }
                    reach[c * words + w / 64] |= 1u64 << (w % 64);
                    for k in 0..words {
                        reach[c * words + k] |= reach[d * words + k];
                    }
                }
            }
        }

        let mut rel = Relation::empty(n);
        for (v, &c) in comp.iter().enumerate() {
            rel.bits[v * words..(v + 1) * words]
                .copy_from_slice(&reach[c * words..(c + 1) * words]);
        }
        rel
    }
}

impl fmt::Display for SupportDigraph {
    /// Edge dump: one `u v` line per edge, 1-based, lexicographically
    /// sorted, no trailing newline.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (u, v) in self.edges() {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

/// A binary relation on `{0..n}` stored as bitset rows; the result type of
/// reachability closures.
#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Relation {
    fn words_for(n: usize) -> usize {
        n.div_ceil(64)
    }

    pub fn empty(n: usize) -> Relation {
        let words = Relation::words_for(n);
        Relation {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "pair out of range");
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn insert(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "pair out of range");
        self.bits[u * self.words + v / 64] |= 1u64 << (v % 64);
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// All pairs in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.len());
        for u in 0..self.n {
            for v in 0..self.n {
                if self.contains(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.pairs().iter().map(|&(u, v)| (u + 1, v + 1)))
            .finish()
    }
}

impl SuperMatrix {
    /// The support digraph: an edge `i -> j` for every non-`eps` entry,
    /// ghost entries included.
    pub fn support(&self) -> SupportDigraph {
        let mut g = SupportDigraph::new(self.n());
        for i in 0..self.n() {
            for j in 0..self.n() {
                if !self.get(i, j).is_eps() {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

/// The maximum over all directed cycles in the support of the average edge
/// magnitude along the cycle, or `eps` when the support is acyclic.  A
/// cycle's magnitude uses `re ⊕ gh` per entry, so ghost weights count.
///
/// Equivalent characterization of nilpotency: the result is `eps` iff the
/// matrix is nilpotent.
///
/// Computed by Karp's minimax formula independently inside each strongly
/// connected component (every cycle lives inside one).
pub fn max_cycle_mean(a: &SuperMatrix) -> ExtReal {
    let n = a.n();
    let g = a.support();
    let (comp, ncomp) = g.tarjan();
    let mut comp_vertices: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for v in 0..n {
        comp_vertices[comp[v]].push(v);
    }
    // local position of each vertex inside its component
    let mut pos = vec![usize::MAX; n];
    for vs in &comp_vertices {
        for (i, &v) in vs.iter().enumerate() {
            pos[v] = i;
        }
    }

    let mut best = f64::NEG_INFINITY;
    for vs in &comp_vertices {
        let nc = vs.len();
        // edges with both endpoints in this component, in local indices
        let mut internal: Vec<(usize, usize, f64)> = Vec::new();
        for &u in vs {
            for &w in g.out_neighbors(u) {
                if comp[w] == comp[u] {
                    internal.push((pos[u], pos[w], a.get(u, w).magnitude().raw()));
                }
            }
        }
        if internal.is_empty() {
            continue; // no cycle through this component
        }

        // Karp: f[k][j] = best weight of a walk with exactly k edges from
        // local vertex 0 to j, inside the component
        let mut f = vec![vec![f64::NEG_INFINITY; nc]; nc + 1];
        f[0][0] = 0.0;
        for k in 1..=nc {
            for &(i, j, w) in &internal {
                let cand = f[k - 1][i] + w;
                if cand > f[k][j] {
                    f[k][j] = cand;
                }
            }
        }
        for j in 0..nc {
            if f[nc][j] == f64::NEG_INFINITY {
                continue;
            }
            let mut lambda = f64::INFINITY;
            for (k, fk) in f.iter().enumerate().take(nc) {
                if fk[j] == f64::NEG_INFINITY {
                    continue;
                }
                let ratio = (f[nc][j] - fk[j]) / (nc - k) as f64;
                if ratio < lambda {
                    lambda = ratio;
                }
            }
            // a length-nc walk repeats a vertex; cutting the loop out leaves
            // a shorter witness, so some k < nc had a finite value
            debug_assert!(lambda.is_finite());
            if lambda > best {
                best = lambda;
            }
        }
    }

    if best == f64::NEG_INFINITY {
        ExtReal::EPS
    } else {
        ExtReal::finite(best)
    }
}
