//! Left-right planarity test (de Fraysseix–Rosenstiehl, in Brandes' formulation).
//!
//! Only the testing phase is implemented; no embedding is produced. Both DFS
//! passes are iterative.

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Interval {
    low: usize,
    high: usize,
}

impl Interval {
    const EMPTY: Interval = Interval {
        low: NONE,
        high: NONE,
    };

    fn is_empty(&self) -> bool {
        self.low == NONE && self.high == NONE
    }

    fn conflicting(&self, b: usize, lowpt: &[usize]) -> bool {
        !self.is_empty() && lowpt[self.high] > lowpt[b]
    }
}

#[derive(Clone, Copy, Debug)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }

    fn lowest(&self, lowpt: &[usize]) -> usize {
        if self.left.is_empty() {
            lowpt[self.right.low]
        } else if self.right.is_empty() {
            lowpt[self.left.low]
        } else {
            lowpt[self.left.low].min(lowpt[self.right.low])
        }
    }
}

struct LrState {
    // per vertex
    height: Vec<usize>,
    parent_edge: Vec<usize>,
    // per edge; direction fixed during orientation
    src: Vec<usize>,
    dst: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting_depth: Vec<usize>,
    reference: Vec<usize>,
    lowpt_edge: Vec<usize>,
    stack_bottom: Vec<usize>,
    stack: Vec<ConflictPair>,
}

/// Whether the simple graph on `vertex_count` vertices with the given edges
/// admits a planar embedding. Self-loops and repeated edges are ignored.
pub fn is_planar(vertex_count: usize, edges: &[(usize, usize)]) -> bool {
    let mut simple: Vec<(usize, usize)> = edges
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    simple.sort_unstable();
    simple.dedup();
    let m = simple.len();
    if vertex_count > 2 && m > 3 * vertex_count - 6 {
        return false;
    }

    // undirected incidence lists
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for (e, &(u, v)) in simple.iter().enumerate() {
        incident[u].push(e);
        incident[v].push(e);
    }

    let mut st = LrState {
        height: vec![NONE; vertex_count],
        parent_edge: vec![NONE; vertex_count],
        src: vec![NONE; m],
        dst: vec![NONE; m],
        lowpt: vec![0; m],
        lowpt2: vec![0; m],
        nesting_depth: vec![0; m],
        reference: vec![NONE; m],
        lowpt_edge: vec![NONE; m],
        stack_bottom: vec![0; m],
        stack: Vec::new(),
    };

    let mut roots = Vec::new();
    for v in 0..vertex_count {
        if st.height[v] == NONE {
            st.height[v] = 0;
            roots.push(v);
            orient(&mut st, &simple, &incident, v);
        }
    }

    // outgoing oriented edges sorted by nesting depth
    let mut ordered: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for e in 0..m {
        ordered[st.src[e]].push(e);
    }
    for list in &mut ordered {
        list.sort_by_key(|&e| st.nesting_depth[e]);
    }

    roots.into_iter().all(|r| test(&mut st, &ordered, r))
}

fn orient(st: &mut LrState, edges: &[(usize, usize)], incident: &[Vec<usize>], root: usize) {
    let mut next = vec![0usize; incident.len()];
    let mut resumed = vec![false; edges.len()];
    let mut dfs = vec![root];
    while let Some(v) = dfs.pop() {
        let parent = st.parent_edge[v];
        while next[v] < incident[v].len() {
            let e = incident[v][next[v]];
            if !resumed[e] {
                if st.src[e] != NONE {
                    next[v] += 1;
                    continue;
                }
                let (a, b) = edges[e];
                let w = if a == v { b } else { a };
                st.src[e] = v;
                st.dst[e] = w;
                st.lowpt[e] = st.height[v];
                st.lowpt2[e] = st.height[v];
                if st.height[w] == NONE {
                    // tree edge: descend, then come back to finish e
                    st.parent_edge[w] = e;
                    st.height[w] = st.height[v] + 1;
                    resumed[e] = true;
                    dfs.push(v);
                    dfs.push(w);
                    break;
                }
                // back edge
                st.lowpt[e] = st.height[w];
            }

            st.nesting_depth[e] = 2 * st.lowpt[e];
            if st.lowpt2[e] < st.height[v] {
                st.nesting_depth[e] += 1; // chordal
            }

            if parent != NONE {
                let (lo, lo2) = (st.lowpt[e], st.lowpt2[e]);
                if lo < st.lowpt[parent] {
                    st.lowpt2[parent] = st.lowpt[parent].min(lo2);
                    st.lowpt[parent] = lo;
                } else if lo > st.lowpt[parent] {
                    st.lowpt2[parent] = st.lowpt2[parent].min(lo);
                } else {
                    st.lowpt2[parent] = st.lowpt2[parent].min(lo2);
                }
            }
            next[v] += 1;
        }
    }
}

fn test(st: &mut LrState, ordered: &[Vec<usize>], root: usize) -> bool {
    let mut next = vec![0usize; ordered.len()];
    let mut resumed = vec![false; st.src.len()];
    let mut dfs = vec![root];
    while let Some(v) = dfs.pop() {
        let parent = st.parent_edge[v];
        let mut descended = false;
        while next[v] < ordered[v].len() {
            let e = ordered[v][next[v]];
            let w = st.dst[e];
            if !resumed[e] {
                st.stack_bottom[e] = st.stack.len();
                if st.parent_edge[w] == e {
                    resumed[e] = true;
                    dfs.push(v);
                    dfs.push(w);
                    descended = true;
                    break;
                }
                st.lowpt_edge[e] = e;
                st.stack.push(ConflictPair {
                    left: Interval::EMPTY,
                    right: Interval { low: e, high: e },
                });
            }

            // integrate new return edges
            if st.lowpt[e] < st.height[v] {
                if e == ordered[v][0] {
                    st.lowpt_edge[parent] = st.lowpt_edge[e];
                } else if !add_constraints(st, e, parent) {
                    return false;
                }
            }
            next[v] += 1;
        }
        if !descended && parent != NONE {
            remove_back_edges(st, parent);
        }
    }
    true
}

fn add_constraints(st: &mut LrState, ei: usize, e: usize) -> bool {
    let mut p = ConflictPair {
        left: Interval::EMPTY,
        right: Interval::EMPTY,
    };

    // merge return edges of ei into p.right
    loop {
        let Some(mut q) = st.stack.pop() else {
            break;
        };
        if !q.left.is_empty() {
            q.swap();
        }
        if !q.left.is_empty() {
            return false;
        }
        if st.lowpt[q.right.low] > st.lowpt[e] {
            if p.right.is_empty() {
                p.right = q.right;
            } else {
                st.reference[p.right.low] = q.right.high;
            }
            p.right.low = q.right.low;
        } else {
            st.reference[q.right.low] = st.lowpt_edge[e];
        }
        if st.stack.len() == st.stack_bottom[ei] {
            break;
        }
    }

    // merge conflicting return edges of earlier siblings into p.left
    while let Some(top) = st.stack.last() {
        if !(top.left.conflicting(ei, &st.lowpt) || top.right.conflicting(ei, &st.lowpt)) {
            break;
        }
        let mut q = st.stack.pop().expect("non-empty");
        if q.right.conflicting(ei, &st.lowpt) {
            q.swap();
        }
        if q.right.conflicting(ei, &st.lowpt) {
            return false;
        }
        if p.right.low != NONE {
            st.reference[p.right.low] = q.right.high;
        }
        if q.right.low != NONE {
            p.right.low = q.right.low;
        }
        if p.left.is_empty() {
            p.left = q.left;
        } else {
            st.reference[p.left.low] = q.left.high;
        }
        p.left.low = q.left.low;
    }

    if !(p.left.is_empty() && p.right.is_empty()) {
        st.stack.push(p);
    }
    true
}

fn remove_back_edges(st: &mut LrState, e: usize) {
    let u = st.src[e];
    let hu = st.height[u];

    // drop whole conflict pairs ending at u
    while st
        .stack
        .last()
        .is_some_and(|top| top.lowest(&st.lowpt) == hu)
    {
        st.stack.pop();
    }

    if let Some(mut p) = st.stack.pop() {
        while p.left.high != NONE && st.dst[p.left.high] == u {
            p.left.high = st.reference[p.left.high];
        }
        if p.left.high == NONE && p.left.low != NONE {
            st.reference[p.left.low] = p.right.low;
            p.left.low = NONE;
        }
        while p.right.high != NONE && st.dst[p.right.high] == u {
            p.right.high = st.reference[p.right.high];
        }
        if p.right.high == NONE && p.right.low != NONE {
            st.reference[p.right.low] = p.left.low;
            p.right.low = NONE;
        }
        st.stack.push(p);
    }

    if st.lowpt[e] < hu {
        if let Some(top) = st.stack.last() {
            let (hl, hr) = (top.left.high, top.right.high);
            st.reference[e] = if hl != NONE && (hr == NONE || st.lowpt[hl] > st.lowpt[hr]) {
                hl
            } else {
                hr
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect()
    }

    fn complete_bipartite(a: usize, b: usize) -> Vec<(usize, usize)> {
        (0..a)
            .flat_map(|u| (0..b).map(move |v| (u, a + v)))
            .collect()
    }

    fn hypercube(d: usize) -> Vec<(usize, usize)> {
        (0..1usize << d)
            .flat_map(|u| (0..d).map(move |i| (u, u ^ (1 << i))))
            .filter(|(u, v)| u < v)
            .collect()
    }

    fn petersen() -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        e
    }

    #[test]
    fn kuratowski_graphs() {
        assert!(!is_planar(5, &complete(5)));
        assert!(!is_planar(6, &complete_bipartite(3, 3)));
        let mut k5_minus = complete(5);
        k5_minus.pop();
        assert!(is_planar(5, &k5_minus));
        let mut k33_minus = complete_bipartite(3, 3);
        k33_minus.pop();
        assert!(is_planar(6, &k33_minus));
    }

    #[test]
    fn classic_examples() {
        assert!(is_planar(0, &[]));
        assert!(is_planar(1, &[]));
        assert!(is_planar(4, &complete(4)));
        assert!(is_planar(8, &hypercube(3)));
        assert!(!is_planar(16, &hypercube(4)));
        assert!(!is_planar(10, &petersen()));
        assert!(is_planar(2, &complete_bipartite(1, 1)));
        assert!(is_planar(12, &complete_bipartite(2, 10)));
    }

    #[test]
    fn subdivided_k5_is_not_planar() {
        // K5 with every edge subdivided once
        let mut edges = Vec::new();
        let mut next = 5;
        for (u, v) in complete(5) {
            edges.push((u, next));
            edges.push((next, v));
            next += 1;
        }
        assert!(!is_planar(next, &edges));
    }

    #[test]
    fn grid_and_long_cycle() {
        let w = 30;
        let mut edges = Vec::new();
        for r in 0..w {
            for c in 0..w {
                let v = r * w + c;
                if c + 1 < w {
                    edges.push((v, v + 1));
                }
                if r + 1 < w {
                    edges.push((v, v + w));
                }
            }
        }
        assert!(is_planar(w * w, &edges));

        let n = 100_000;
        let cycle: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        assert!(is_planar(n, &cycle));
    }

    #[test]
    fn disconnected_components() {
        let mut edges = complete(4);
        edges.extend(complete(5).into_iter().map(|(u, v)| (u + 4, v + 4)));
        assert!(!is_planar(9, &edges));
        let mut edges = complete(4);
        edges.extend(complete(4).into_iter().map(|(u, v)| (u + 4, v + 4)));
        assert!(is_planar(8, &edges));
    }

    /// Independent check on six vertices: a graph there is non-planar exactly
    /// when it contains K3,3, K5, or K5 with one edge subdivided by the sixth
    /// vertex as a subgraph.
    fn kuratowski_six(adj: &[[bool; 6]; 6]) -> bool {
        let vs: Vec<usize> = (0..6).collect();
        // K3,3
        for mask in 0u32..64 {
            if mask.count_ones() != 3 || mask & 1 == 0 {
                continue;
            }
            let (a, b): (Vec<usize>, Vec<usize>) = vs.iter().partition(|&&v| mask >> v & 1 == 1);
            if a.iter().all(|&x| b.iter().all(|&y| adj[x][y])) {
                return true;
            }
        }
        // K5, possibly with edge (s, t) routed through the sixth vertex
        for out in 0..6 {
            let five: Vec<usize> = vs.iter().copied().filter(|&v| v != out).collect();
            let pairs: Vec<(usize, usize)> = (0..5)
                .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
                .collect();
            let missing: Vec<&(usize, usize)> = pairs
                .iter()
                .filter(|&&(i, j)| !adj[five[i]][five[j]])
                .collect();
            match missing.len() {
                0 => return true,
                1 => {
                    let (i, j) = *missing[0];
                    if adj[out][five[i]] && adj[out][five[j]] {
                        return true;
                    }
                }
                _ => {}
            }
        }
        false
    }

    #[test]
    fn exhaustive_six_vertex_graphs_match_kuratowski() {
        let pairs: Vec<(usize, usize)> = (0..6)
            .flat_map(|i| (i + 1..6).map(move |j| (i, j)))
            .collect();
        let mut nonplanar = 0;
        for mask in 0u32..(1 << pairs.len()) {
            let mut adj = [[false; 6]; 6];
            let mut edges = Vec::new();
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    adj[i][j] = true;
                    adj[j][i] = true;
                    edges.push((i, j));
                }
            }
            let expected = !kuratowski_six(&adj);
            assert_eq!(is_planar(6, &edges), expected, "edges {edges:?}");
            nonplanar += usize::from(!expected);
        }
        assert!(nonplanar > 0);
    }

    #[test]
    fn random_edge_orders_agree() {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let base = petersen();
        let cube = hypercube(3);
        for _ in 0..50 {
            let mut e = base.clone();
            e.shuffle(&mut rng);
            assert!(!is_planar(10, &e));
            let mut c = cube.clone();
            c.shuffle(&mut rng);
            assert!(is_planar(8, &c));
        }
    }
}
