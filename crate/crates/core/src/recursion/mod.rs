//! Left/right arc bookkeeping for the recursive drawing of `B'_n`.
//!
//! Going from dimension `n` to `n + 1`, each vertex `v` becomes the path
//! `v^1 .. v^{n+1}`. Each of its `n - 1` edges becomes a bunch of `n`
//! parallel edges on the same side as the original, and every child
//! `v^2 .. v^n` misses exactly one bunch edge (its "lost" edge). The path
//! edges themselves are routed by the structure chosen from `l(v) - r(v)`.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::Side;
use crate::perm_graph::factorial;

mod tracker;

pub use tracker::{VertexTracker, MAX_TRACKER_N};

/// Dimension of the hand-drawn base drawing.
pub const SEED_N: usize = 6;
/// Largest dimension the generation trace runs to.
pub const MAX_TRACE_N: usize = 10;

/// Counts of l-arcs and r-arcs at one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexState {
    pub l: u32,
    pub r: u32,
}

impl VertexState {
    pub fn new(l: u32, r: u32) -> Self {
        Self { l, r }
    }

    pub fn degree(self) -> u32 {
        self.l + self.r
    }

    pub fn imbalance(self) -> i64 {
        self.l as i64 - self.r as i64
    }

    /// Whether `l - r` is in `{0, ±2}` for odd `n` or `{±1}` for even `n`.
    pub fn in_parity_class(self, n: usize) -> bool {
        let d = self.imbalance();
        if n % 2 == 1 {
            matches!(d, -2 | 0 | 2)
        } else {
            matches!(d, -1 | 1)
        }
    }
}

impl fmt::Display for VertexState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.l, self.r)
    }
}

/// How the path edges of a replacement are routed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StructureKind {
    /// Path edges alternate left, right, left, ... starting from `v^1 v^2`.
    Eleven,
    /// Every path edge on the left.
    TwoZero,
    /// Every path edge on the right.
    ZeroTwo,
}

impl StructureKind {
    /// Side of the 1-based path edge `v^j v^{j+1}`.
    pub fn path_edge_side(self, j: usize) -> Side {
        match self {
            Self::Eleven if j % 2 == 1 => Side::Left,
            Self::Eleven => Side::Right,
            Self::TwoZero => Side::Left,
            Self::ZeroTwo => Side::Right,
        }
    }
}

pub fn choose_structure(n: usize, s: VertexState) -> Result<StructureKind> {
    let outside = || Error::StateOutsideParity { n, l: s.l, r: s.r };
    if s.degree() as usize != n - 1 {
        return Err(outside());
    }
    match (n % 2, s.imbalance()) {
        (0, -1 | 1) => Ok(StructureKind::Eleven),
        (1, 0) => Ok(StructureKind::Eleven),
        (1, -2) => Ok(StructureKind::TwoZero),
        (1, 2) => Ok(StructureKind::ZeroTwo),
        _ => Err(outside()),
    }
}

/// Which side's bunch each interior child `v^2 .. v^n` loses an edge from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplacementPlan {
    pub structure: StructureKind,
    lost_side: Vec<Side>,
}

impl ReplacementPlan {
    /// `lost_side[0]` is for child `v^2`, the last entry for child `v^n`.
    pub fn new(structure: StructureKind, lost_side: Vec<Side>) -> Self {
        Self {
            structure,
            lost_side,
        }
    }

    /// The lost side of 1-based child `i`; `None` for `v^1` and `v^{n+1}`.
    pub fn lost_side(&self, child: usize) -> Option<Side> {
        if child < 2 {
            return None;
        }
        self.lost_side.get(child - 2).copied()
    }

    pub fn lost_sides(&self) -> &[Side] {
        &self.lost_side
    }

    fn check(&self, n: usize, s: VertexState) -> Result<()> {
        if self.lost_side.len() != n - 1 {
            return Err(Error::InconsistentPlan(format!(
                "{} lost sides for {} interior children",
                self.lost_side.len(),
                n - 1
            )));
        }
        let left = self.lost_side.iter().filter(|&&x| x == Side::Left).count() as u32;
        if left != s.l || (n as u32 - 1 - left) != s.r {
            return Err(Error::InconsistentPlan(format!(
                "{left} left losses for state {s}"
            )));
        }
        let expected = choose_structure(n, s)?;
        if expected != self.structure {
            return Err(Error::InconsistentPlan(format!(
                "{:?} chosen for state {s} at n = {n}; expected {expected:?}",
                self.structure
            )));
        }
        Ok(())
    }
}

/// States of `v^1 .. v^{n+1}` when a vertex at dimension `n` is replaced.
pub fn replace_vertex(
    n: usize,
    s: VertexState,
    plan: &ReplacementPlan,
) -> Result<Vec<VertexState>> {
    plan.check(n, s)?;
    Ok((1..=n + 1)
        .map(|i| {
            let mut child = s;
            match plan.lost_side(i) {
                Some(Side::Left) => child.l -= 1,
                Some(Side::Right) => child.r -= 1,
                None => {}
            }
            // path edges i-1 and i touch child i
            for j in [i.wrapping_sub(1), i] {
                if (1..=n).contains(&j) {
                    match plan.structure.path_edge_side(j) {
                        Side::Left => child.l += 1,
                        Side::Right => child.r += 1,
                    }
                }
            }
            child
        })
        .collect())
}

/// Source of lost-side assignments, one call per replaced vertex.
pub trait LostSidePolicy {
    fn name(&self) -> &'static str;

    /// `n - 1` sides with exactly `s.l` lefts. `parent` counts calls.
    fn lost_sides(&mut self, n: usize, s: VertexState, parent: u64) -> Vec<Side>;
}

/// All left losses first.
#[derive(Clone, Debug, Default)]
pub struct FixedPolicy;

impl LostSidePolicy for FixedPolicy {
    fn name(&self) -> &'static str {
        "fixed"
    }

    fn lost_sides(&mut self, _n: usize, s: VertexState, _parent: u64) -> Vec<Side> {
        let mut v = vec![Side::Left; s.l as usize];
        v.extend(std::iter::repeat_n(Side::Right, s.r as usize));
        v
    }
}

/// Interleaved sides, rotated by one position per parent.
#[derive(Clone, Debug, Default)]
pub struct RoundRobinPolicy;

impl LostSidePolicy for RoundRobinPolicy {
    fn name(&self) -> &'static str {
        "roundrobin"
    }

    fn lost_sides(&mut self, _n: usize, s: VertexState, parent: u64) -> Vec<Side> {
        let (mut l, mut r) = (s.l, s.r);
        let mut v = Vec::with_capacity((l + r) as usize);
        let mut take_left = true;
        while l + r > 0 {
            if (take_left && l > 0) || r == 0 {
                v.push(Side::Left);
                l -= 1;
            } else {
                v.push(Side::Right);
                r -= 1;
            }
            take_left = !take_left;
        }
        if !v.is_empty() {
            let k = (parent % v.len() as u64) as usize;
            v.rotate_left(k);
        }
        v
    }
}

/// Uniformly shuffled sides from a ChaCha8 stream.
#[derive(Clone, Debug)]
pub struct RandomPolicy {
    rng: ChaCha8Rng,
}

impl RandomPolicy {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl LostSidePolicy for RandomPolicy {
    fn name(&self) -> &'static str {
        "random"
    }

    fn lost_sides(&mut self, n: usize, s: VertexState, parent: u64) -> Vec<Side> {
        let mut v = FixedPolicy.lost_sides(n, s, parent);
        v.shuffle(&mut self.rng);
        v
    }
}

/// Named policy, convenient for configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyKind {
    Fixed,
    RoundRobin,
    Random { seed: u64 },
}

impl PolicyKind {
    pub fn build(self) -> Box<dyn LostSidePolicy> {
        match self {
            Self::Fixed => Box::new(FixedPolicy),
            Self::RoundRobin => Box::new(RoundRobinPolicy),
            Self::Random { seed } => Box::new(RandomPolicy::new(seed)),
        }
    }
}

/// Multiset of vertex states over the core vertices of `B'_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationState {
    n: usize,
    #[serde(with = "state_list")]
    states: BTreeMap<VertexState, u64>,
}

mod state_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        l: u32,
        r: u32,
        multiplicity: u64,
    }

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<VertexState, u64>,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<Entry> = map
            .iter()
            .map(|(s, &multiplicity)| Entry {
                l: s.l,
                r: s.r,
                multiplicity,
            })
            .collect();
        list.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<BTreeMap<VertexState, u64>, D::Error> {
        let list = Vec::<Entry>::deserialize(de)?;
        let mut map = BTreeMap::new();
        for e in list {
            *map.entry(VertexState::new(e.l, e.r)).or_insert(0) += e.multiplicity;
        }
        Ok(map)
    }
}

impl GenerationState {
    pub fn from_counts(n: usize, counts: impl IntoIterator<Item = (VertexState, u64)>) -> Self {
        let mut states = BTreeMap::new();
        for (s, m) in counts {
            if m > 0 {
                *states.entry(s).or_insert(0) += m;
            }
        }
        Self { n, states }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> &BTreeMap<VertexState, u64> {
        &self.states
    }

    pub fn total(&self) -> u64 {
        self.states.values().sum()
    }

    pub fn arc_sum(&self) -> u64 {
        self.states
            .iter()
            .map(|(s, &m)| s.degree() as u64 * m)
            .sum()
    }

    pub fn count_where(&self, pred: impl Fn(VertexState) -> bool) -> u64 {
        self.states
            .iter()
            .filter(|(s, _)| pred(**s))
            .map(|(_, &m)| m)
            .sum()
    }

    /// Multiset of `|l - r|`.
    pub fn imbalance_profile(&self) -> BTreeMap<u64, u64> {
        let mut out = BTreeMap::new();
        for (s, &m) in &self.states {
            *out.entry(s.imbalance().unsigned_abs()).or_insert(0) += m;
        }
        out
    }

    /// Cardinality `n!/6`, degree `n - 1` everywhere, and parity classes.
    pub fn check_invariants(&self) -> Result<()> {
        let expected = factorial(self.n) / 6;
        if self.total() != expected {
            return Err(Error::Invariant(format!(
                "{} states at n = {}, expected {expected}",
                self.total(),
                self.n
            )));
        }
        for s in self.states.keys() {
            if s.degree() as usize != self.n - 1 {
                return Err(Error::Invariant(format!(
                    "state {s} at n = {} has degree {}",
                    self.n,
                    s.degree()
                )));
            }
            if !s.in_parity_class(self.n) {
                return Err(Error::StateOutsideParity {
                    n: self.n,
                    l: s.l,
                    r: s.r,
                });
            }
        }
        Ok(())
    }
}

/// Base states at `n = 6`: `minus_one` vertices at `(2, 3)`, the rest at `(3, 2)`.
pub fn seed_d6_split(minus_one: u64) -> Result<GenerationState> {
    let total = factorial(SEED_N) / 6;
    if minus_one > total {
        return Err(Error::Invariant(format!(
            "{minus_one} of {total} seed vertices requested at (2, 3)"
        )));
    }
    Ok(GenerationState::from_counts(
        SEED_N,
        [
            (VertexState::new(2, 3), minus_one),
            (VertexState::new(3, 2), total - minus_one),
        ],
    ))
}

/// Base states at `n = 6`, split evenly between `(2, 3)` and `(3, 2)`.
pub fn seed_d6() -> GenerationState {
    seed_d6_split(60).expect("60 <= 120")
}

/// What [`step_generation`] verified along the way.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepReport {
    pub parents: u64,
    pub children: u64,
    /// Parents whose children were checked against the per-parent class counts
    /// (only at even `n`).
    pub class_count_checks: u64,
}

/// Replace every vertex at dimension `n`, producing the states at `n + 1`.
pub fn step_generation(
    g: &GenerationState,
    policy: &mut dyn LostSidePolicy,
) -> Result<(GenerationState, StepReport)> {
    g.check_invariants()?;
    let n = g.n;
    let mut next: BTreeMap<VertexState, u64> = BTreeMap::new();
    let mut report = StepReport::default();
    for (&s, &mult) in &g.states {
        let structure = choose_structure(n, s)?;
        for _ in 0..mult {
            let sides = policy.lost_sides(n, s, report.parents);
            let plan = ReplacementPlan::new(structure, sides);
            let kids = replace_vertex(n, s, &plan)?;
            let fail = |what: String| {
                Error::Invariant(format!(
                    "parent {s} at n = {n} under {} policy: {what}",
                    policy.name()
                ))
            };

            let arcs: u64 = kids.iter().map(|k| k.degree() as u64).sum();
            if arcs != (n * (n + 1)) as u64 {
                return Err(fail(format!("children carry {arcs} arc ends")));
            }
            if let Some(k) = kids.iter().find(|k| !k.in_parity_class(n + 1)) {
                return Err(fail(format!("child {k} outside parity class")));
            }
            if n % 2 == 0 {
                let balanced = kids.iter().filter(|k| k.imbalance() == 0).count();
                let off = kids.iter().filter(|k| k.imbalance().abs() == 2).count();
                if balanced != n / 2 + 1 || off != n / 2 {
                    return Err(fail(format!(
                        "{balanced} balanced and {off} off-by-two children"
                    )));
                }
                report.class_count_checks += 1;
            }
            for k in kids {
                *next.entry(k).or_insert(0) += 1;
            }
            report.parents += 1;
            report.children += n as u64 + 1;
        }
    }
    let out = GenerationState {
        n: n + 1,
        states: next,
    };
    out.check_invariants()?;
    Ok((out, report))
}

/// Every generation from `start` up to dimension `to`, inclusive.
pub fn run_generations(
    start: GenerationState,
    to: usize,
    policy: &mut dyn LostSidePolicy,
) -> Result<Vec<(GenerationState, StepReport)>> {
    if to < start.n || to > MAX_TRACE_N {
        return Err(Error::DimensionOutOfRange {
            n: to,
            min: start.n,
            max: MAX_TRACE_N,
        });
    }
    let mut out = vec![(start, StepReport::default())];
    while out.last().expect("non-empty").0.n < to {
        let step = step_generation(&out.last().expect("non-empty").0, policy)?;
        out.push(step);
    }
    Ok(out)
}
