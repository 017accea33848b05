use std::collections::VecDeque;

use rayon::prelude::*;

use super::permutation::{factorial, unrank_unchecked, PatternClass, Permutation};
use crate::error::{Error, Result};

/// Default ceiling on `n` for materialising `B_n` (10! = 3,628,800 vertices).
pub const DEFAULT_MAX_N: usize = 10;
/// Vertex indices are `u32`, so 12! is the most that can ever be stored.
pub const HARD_MAX_N: usize = 12;

/// A graph whose vertices are permutations of a fixed length `n`.
///
/// Vertices are kept in lexicographic order of their labels and identified by
/// their Lehmer rank; adjacency is stored in compressed rows.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    n: usize,
    ranks: Vec<u64>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl LabeledGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.ranks.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    pub fn label(&self, v: usize) -> Permutation {
        unrank_unchecked(self.n, self.ranks[v])
    }

    pub fn labels(&self) -> impl Iterator<Item = Permutation> + '_ {
        (0..self.vertex_count()).map(|v| self.label(v))
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        if p.len() != self.n {
            return None;
        }
        self.ranks.binary_search(&p.rank()).ok()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Each edge once as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.vertex_count())
            .flat_map(|u| {
                self.neighbors(u)
                    .iter()
                    .map(move |&w| (u, w as usize))
                    .filter(|&(u, w)| u < w)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Edges as pairs of Lehmer ranks, sorted.
    pub fn rank_edges(&self) -> Vec<(u64, u64)> {
        self.edges()
            .into_iter()
            .map(|(u, v)| (self.ranks[u], self.ranks[v]))
            .collect()
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        (0..self.vertex_count()).all(|v| self.degree(v) == degree)
    }

    pub fn is_connected(&self) -> bool {
        let count = self.vertex_count();
        if count == 0 {
            return true;
        }
        let mut seen = vec![false; count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                let w = w as usize;
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == count
    }

    /// Simple-graph sanity: no self-loops, no duplicate edges, symmetric rows.
    pub fn is_simple(&self) -> bool {
        (0..self.vertex_count()).all(|u| {
            let row = self.neighbors(u);
            let mut sorted = row.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            sorted.len() == row.len()
                && row
                    .iter()
                    .all(|&w| w as usize != u && self.neighbors(w as usize).contains(&(u as u32)))
        })
    }

    pub fn is_planar(&self) -> bool {
        super::planarity::is_planar(self.vertex_count(), &self.edges())
    }
}

fn check_dimension(n: usize, min: usize, max_n: usize) -> Result<()> {
    let max = max_n.min(HARD_MAX_N);
    if n < min || n > max {
        return Err(Error::DimensionOutOfRange { n, min, max });
    }
    Ok(())
}

/// The bubble-sort graph `B_n`, refusing `n > DEFAULT_MAX_N`.
pub fn build_bn(n: usize) -> Result<LabeledGraph> {
    build_bn_with_limit(n, DEFAULT_MAX_N)
}

pub fn build_bn_with_limit(n: usize, max_n: usize) -> Result<LabeledGraph> {
    check_dimension(n, 2, max_n)?;
    let total = factorial(n);
    let degree = n - 1;
    let targets: Vec<u32> = (0..total)
        .into_par_iter()
        .flat_map_iter(|r| {
            unrank_unchecked(n, r)
                .neighbor_ranks()
                .into_iter()
                .map(|x| x as u32)
        })
        .collect();
    Ok(LabeledGraph {
        n,
        ranks: (0..total).collect(),
        offsets: (0..=total as usize).map(|v| v * degree).collect(),
        targets,
    })
}

/// A `B'`-style subgraph of `B_n`: every edge with at least one endpoint in
/// the core set, plus the endpoints those edges reach.
#[derive(Clone, Debug)]
pub struct CoreSubgraph {
    pub graph: LabeledGraph,
    core: Vec<bool>,
}

impl CoreSubgraph {
    pub fn is_core(&self, v: usize) -> bool {
        self.core[v]
    }

    pub fn core_count(&self) -> usize {
        self.core.iter().filter(|&&c| c).count()
    }

    pub fn core_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.core
            .iter()
            .enumerate()
            .filter_map(|(v, &c)| c.then_some(v))
    }
}

/// `B'_n`: core vertices are those whose symbols 1, 2, 3 occur in increasing
/// order (equivalently, whose 1..4 pattern is one of the four canonical ones).
pub fn build_bprime(n: usize) -> Result<CoreSubgraph> {
    build_bprime_with_limit(n, DEFAULT_MAX_N)
}

pub fn build_bprime_with_limit(n: usize, max_n: usize) -> Result<CoreSubgraph> {
    build_class_subgraph(n, PatternClass::canonical(), max_n)
}

/// The subgraph built by the `B'_n` rule with `class` in place of the
/// canonical one.
pub fn build_class_subgraph(n: usize, class: PatternClass, max_n: usize) -> Result<CoreSubgraph> {
    check_dimension(n, 4, max_n)?;
    let total = factorial(n) as usize;
    let core_by_rank: Vec<bool> = (0..total as u64)
        .into_par_iter()
        .map(|r| class.contains(&unrank_unchecked(n, r)))
        .collect();

    // rows[r] = kept neighbour ranks of r (only for included r)
    let rows: Vec<Option<Vec<u64>>> = (0..total as u64)
        .into_par_iter()
        .map(|r| {
            let nbrs = unrank_unchecked(n, r).neighbor_ranks();
            let mine = core_by_rank[r as usize];
            let kept: Vec<u64> = nbrs
                .into_iter()
                .filter(|&w| mine || core_by_rank[w as usize])
                .collect();
            (!kept.is_empty()).then_some(kept)
        })
        .collect();

    let mut local = vec![u32::MAX; total];
    let mut ranks = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        if row.is_some() {
            local[r] = ranks.len() as u32;
            ranks.push(r as u64);
        }
    }
    let mut offsets = Vec::with_capacity(ranks.len() + 1);
    let mut targets = Vec::new();
    let mut core = Vec::with_capacity(ranks.len());
    offsets.push(0);
    for &r in &ranks {
        for &w in rows[r as usize].as_ref().expect("included row") {
            targets.push(local[w as usize]);
        }
        offsets.push(targets.len());
        core.push(core_by_rank[r as usize]);
    }
    Ok(CoreSubgraph {
        graph: LabeledGraph {
            n,
            ranks,
            offsets,
            targets,
        },
        core,
    })
}

#[derive(Clone, Debug)]
pub struct SymmetryClass {
    pub class: PatternClass,
    /// Ranks of the vertices of `B_n` in this class, ascending.
    pub vertices: Vec<u64>,
    /// Symbol map carrying the canonical class subgraph onto this one.
    pub relabeling: Vec<u8>,
    /// Whether `relabeling` maps the canonical subgraph's edge set exactly
    /// onto this class's.
    pub isomorphic_to_canonical: bool,
}

#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub n: usize,
    pub classes: Vec<SymmetryClass>,
}

impl SymmetryReport {
    /// All six class subgraphs are pairwise isomorphic (each is an image of
    /// the canonical one under its witness map).
    pub fn all_isomorphic(&self) -> bool {
        self.classes.iter().all(|c| c.isomorphic_to_canonical)
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.vertices.len()).collect()
    }
}

/// Partition `V(B_n)` by the relative order of 1, 2, 3 and check that the six
/// `B'`-style subgraphs are images of one another under symbol relabeling.
pub fn symmetry_classes(n: usize) -> Result<SymmetryReport> {
    symmetry_classes_with_limit(n, DEFAULT_MAX_N)
}

pub fn symmetry_classes_with_limit(n: usize, max_n: usize) -> Result<SymmetryReport> {
    check_dimension(n, 4, max_n)?;
    let canonical = build_class_subgraph(n, PatternClass::canonical(), max_n)?;
    let canonical_edges = canonical.graph.rank_edges();

    let classes = PatternClass::all()
        .into_par_iter()
        .map(|class| -> Result<SymmetryClass> {
            let sub = build_class_subgraph(n, class, max_n)?;
            let vertices: Vec<u64> = sub.core_vertices().map(|v| sub.graph.ranks()[v]).collect();
            let relabeling = class.relabeling(n);
            let mut image: Vec<(u64, u64)> = canonical_edges
                .iter()
                .map(|&(u, v)| {
                    let a = unrank_unchecked(n, u).relabel(&relabeling).rank();
                    let b = unrank_unchecked(n, v).relabel(&relabeling).rank();
                    (a.min(b), a.max(b))
                })
                .collect();
            image.sort_unstable();
            Ok(SymmetryClass {
                class,
                vertices,
                isomorphic_to_canonical: image == sub.graph.rank_edges(),
                relabeling,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymmetryReport { n, classes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bubble_sort_graphs() {
        let b2 = build_bn(2).unwrap();
        assert_eq!((b2.vertex_count(), b2.edge_count()), (2, 1));

        let b3 = build_bn(3).unwrap();
        assert_eq!((b3.vertex_count(), b3.edge_count()), (6, 6));
        assert!(b3.is_regular(2) && b3.is_connected());

        let b4 = build_bn(4).unwrap();
        assert_eq!((b4.vertex_count(), b4.edge_count()), (24, 36));
    }

    #[test]
    fn bn_structure_up_to_seven() {
        for n in 2..=7 {
            let g = build_bn(n).unwrap();
            let f = factorial(n) as usize;
            assert_eq!(g.vertex_count(), f);
            assert_eq!(g.edge_count(), f * (n - 1) / 2);
            assert!(g.is_regular(n - 1));
            assert!(g.is_connected());
            assert!(g.is_simple());
        }
    }

    #[test]
    fn adjacency_matches_labels() {
        let g = build_bn(4).unwrap();
        for v in 0..g.vertex_count() {
            let label = g.label(v);
            let via_graph: Vec<Permutation> = g
                .neighbors(v)
                .iter()
                .map(|&w| g.label(w as usize))
                .collect();
            assert_eq!(via_graph, label.neighbors());
        }
    }

    #[test]
    fn dimension_guard() {
        assert!(matches!(
            build_bn(11),
            Err(Error::DimensionOutOfRange { n: 11, .. })
        ));
        assert!(build_bn(1).is_err());
        assert!(build_bn_with_limit(13, 20).is_err());
        assert!(build_bprime(3).is_err());
    }

    #[test]
    fn bprime_core_sizes_and_degrees() {
        for (n, expected) in [(6, 120), (7, 840)] {
            let bp = build_bprime(n).unwrap();
            assert_eq!(bp.core_count(), expected);
            for v in bp.core_vertices() {
                assert_eq!(bp.graph.degree(v), n - 1);
                assert!(bp.graph.label(v).in_bprime().unwrap());
            }
            for (u, v) in bp.graph.edges() {
                assert!(bp.is_core(u) || bp.is_core(v));
            }
            assert!(bp.graph.is_simple());
        }
    }

    #[test]
    fn symmetry_at_five() {
        let report = symmetry_classes(5).unwrap();
        assert_eq!(report.class_sizes(), vec![20; 6]);
        assert!(report.all_isomorphic());
    }

    #[test]
    fn wrong_relabeling_is_detected() {
        // Mapping the canonical subgraph with the identity onto a different
        // class must not match.
        let n = 5;
        let canonical = build_bprime(n).unwrap().graph.rank_edges();
        let other = build_class_subgraph(n, PatternClass::all()[1], DEFAULT_MAX_N).unwrap();
        assert_ne!(canonical, other.graph.rank_edges());
    }
}
