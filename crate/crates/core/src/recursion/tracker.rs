use std::collections::BTreeMap;

use super::{
    choose_structure, replace_vertex, GenerationState, ReplacementPlan, VertexState, SEED_N,
};
use crate::error::{Error, Result};
use crate::mesh::Side;
use crate::perm_graph::{build_bprime, Permutation};

/// Largest dimension the per-vertex tracker will reach.
pub const MAX_TRACKER_N: usize = 8;

/// Per-vertex arc sides on the actual core vertices of `B'_n`.
///
/// Each core vertex carries the side of each of its `n - 1` edges, indexed by
/// swap position. Children of `v` are `v^1 .. v^{n+1}`; bunch edges keep the
/// side of the edge they replace, and the child `v^i` (2 <= i <= n) loses the
/// bunch of swap position `i - 1`, which the inserted symbol now splits.
#[derive(Clone, Debug)]
pub struct VertexTracker {
    n: usize,
    sides: BTreeMap<Permutation, Vec<Side>>,
}

impl VertexTracker {
    /// Core vertices of `B'_6` in lexicographic order alternate between
    /// `L R L R L` (state (3, 2)) and `R L R L R` (state (2, 3)).
    pub fn seed_d6() -> Result<Self> {
        let bp = build_bprime(SEED_N)?;
        let sides = bp
            .core_vertices()
            .enumerate()
            .map(|(k, v)| {
                let first = if k % 2 == 0 { Side::Left } else { Side::Right };
                let row = (0..SEED_N - 1)
                    .map(|q| if q % 2 == 0 { first } else { other(first) })
                    .collect();
                (bp.graph.label(v), row)
            })
            .collect();
        Ok(Self { n: SEED_N, sides })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Permutation> {
        self.sides.keys()
    }

    pub fn state_of(&self, v: &Permutation) -> Option<VertexState> {
        self.sides.get(v).map(|row| state(row))
    }

    pub fn to_generation(&self) -> GenerationState {
        GenerationState::from_counts(self.n, self.sides.values().map(|row| (state(row), 1)))
    }

    /// Replace every vertex, checking each child's state against
    /// [`replace_vertex`] run on the plan implied by the parent's sides.
    pub fn step(&self) -> Result<Self> {
        let n = self.n;
        if n + 1 > MAX_TRACKER_N {
            return Err(Error::DimensionOutOfRange {
                n: n + 1,
                min: SEED_N,
                max: MAX_TRACKER_N,
            });
        }
        let mut next = BTreeMap::new();
        for (v, row) in &self.sides {
            let s = state(row);
            let structure = choose_structure(n, s)?;
            let plan = ReplacementPlan::new(structure, row.clone());
            let expected = replace_vertex(n, s, &plan)?;
            for (i, child) in v.expand().into_iter().enumerate() {
                // symbol n + 1 sits at 0-based position i
                let child_row: Vec<Side> = (0..n)
                    .map(|q| {
                        if q + 1 == i {
                            structure.path_edge_side(i)
                        } else if q == i {
                            structure.path_edge_side(i + 1)
                        } else if q + 1 < i {
                            row[q]
                        } else {
                            row[q - 1]
                        }
                    })
                    .collect();
                if state(&child_row) != expected[i] {
                    return Err(Error::Invariant(format!(
                        "child {child} of {v}: tracked {} but replacement gives {}",
                        state(&child_row),
                        expected[i]
                    )));
                }
                next.insert(child, child_row);
            }
        }
        Ok(Self {
            n: n + 1,
            sides: next,
        })
    }
}

fn other(s: Side) -> Side {
    match s {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    }
}

fn state(row: &[Side]) -> VertexState {
    let l = row.iter().filter(|&&s| s == Side::Left).count() as u32;
    VertexState::new(l, row.len() as u32 - l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::{seed_d6, step_generation, FixedPolicy};

    #[test]
    fn tracked_vertices_are_the_core_of_the_next_bprime() {
        let mut t = VertexTracker::seed_d6().unwrap();
        assert_eq!(t.to_generation(), seed_d6());
        let mut g = seed_d6();
        while t.n() < MAX_TRACKER_N {
            t = t.step().unwrap();
            g = step_generation(&g, &mut FixedPolicy).unwrap().0;
            let core: Vec<Permutation> = {
                let bp = build_bprime(t.n()).unwrap();
                bp.core_vertices().map(|v| bp.graph.label(v)).collect()
            };
            let tracked: Vec<Permutation> = t.vertices().cloned().collect();
            assert_eq!(tracked, core);
            let tg = t.to_generation();
            tg.check_invariants().unwrap();
            assert_eq!(tg.imbalance_profile(), g.imbalance_profile());
        }
        assert!(t.step().is_err());
    }
}
