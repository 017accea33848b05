//! Named property suites, each run at a fixed scale and summarised in a
//! short report. The first failing case stops a suite.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mesh::{
    exhaustive_max, mesh_max, oracle_crossings, sort_spec, total_crossings, MeshSpec,
};
use crate::perm_graph::{build_bn, factorial, symmetry_classes};
use crate::recursion::{
    run_generations, seed_d6, PolicyKind, VertexTracker, MAX_TRACE_N, MAX_TRACKER_N,
};

/// Seed used by randomized suites when none is given.
pub const DEFAULT_SEED: u64 = 0x5EED_B0B5;

/// Random specs drawn per dimension by the oracle suite.
pub const RANDOM_SPECS_PER_N: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    /// Closed pair formula against explicit rays.
    Oracle,
    /// Sorting each section never lowers the crossing count.
    Monotone,
    /// Exhaustive maxima against the closed forms.
    Maxima,
    /// Replacement state machine over generations.
    States,
    Symmetry,
    Planarity,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Oracle,
        Suite::Monotone,
        Suite::Maxima,
        Suite::States,
        Suite::Symmetry,
        Suite::Planarity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Monotone => "monotone",
            Suite::Maxima => "maxima",
            Suite::States => "states",
            Suite::Symmetry => "symmetry",
            Suite::Planarity => "planarity",
        }
    }

    pub fn run(self, seed: u64) -> Result<SuiteReport> {
        let mut report = SuiteReport::new(self);
        let outcome = match self {
            Suite::Oracle => oracle(seed, &mut report),
            Suite::Monotone => monotone(&mut report),
            Suite::Maxima => maxima(&mut report),
            Suite::States => states(seed, &mut report),
            Suite::Symmetry => symmetry(&mut report),
            Suite::Planarity => planarity(&mut report),
        };
        match outcome {
            Ok(()) => Ok(report),
            Err(Failure::Property(msg)) => {
                report.failure = Some(msg);
                Ok(report)
            }
            Err(Failure::Config(e)) => Err(e),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Invariant(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub lines: Vec<String>,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            lines: Vec::new(),
            failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

enum Failure {
    Property(String),
    Config(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(msg) | Error::InconsistentPlan(msg) => Failure::Property(msg),
            Error::TripleMismatch { n } => Failure::Property(format!("bound mismatch at n = {n}")),
            other => Failure::Config(other),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn fail(msg: String) -> Outcome {
    Err(Failure::Property(msg))
}

fn oracle(seed: u64, report: &mut SuiteReport) -> Outcome {
    let check = |spec: &MeshSpec| -> Outcome {
        let formula = total_crossings(spec);
        let rays = oracle_crossings(spec)?;
        if formula != rays {
            return fail(format!("{spec:?}: formula {formula}, rays {rays}"));
        }
        Ok(())
    };
    let exhaustive = MeshSpec::all(6)?;
    exhaustive.iter().try_for_each(check)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = 0;
    for n in 7..=10 {
        for _ in 0..RANDOM_SPECS_PER_N {
            check(&MeshSpec::random(n, &mut rng)?)?;
            random += 1;
        }
    }
    report.lines.push(format!(
        "{} exhaustive + {random} random specs, all equal (seed {seed})",
        exhaustive.len()
    ));
    Ok(())
}

fn monotone(report: &mut SuiteReport) -> Outcome {
    for n in [6, 7] {
        let specs = MeshSpec::all(n)?;
        let mut swaps = 0;
        for spec in &specs {
            let trace = sort_spec(spec);
            let (before, after) = (total_crossings(spec), total_crossings(&trace.sorted));
            if before > after || !trace.sorted.is_sorted() {
                return fail(format!("{spec:?}: {before} before sorting, {after} after"));
            }
            for step in &trace.swaps {
                if step.delta() != step.predicted_delta() || step.delta() <= 0 {
                    return fail(format!(
                        "{spec:?}: swap at {} changed the count by {}, expected {}",
                        step.position,
                        step.delta(),
                        step.predicted_delta()
                    ));
                }
            }
            swaps += trace.swaps.len();
        }
        report.lines.push(format!(
            "n = {n}: {} specs, {swaps} swaps, every swap adds 2(k_i - k_(i+1)) - 1",
            specs.len()
        ));
    }
    Ok(())
}

/// `(n, a)` pairs checked by the maxima suite.
pub const MAXIMA_CASES: [(usize, usize); 10] = [
    (7, 2),
    (7, 3),
    (8, 2),
    (8, 3),
    (8, 4),
    (9, 3),
    (9, 4),
    (10, 3),
    (10, 4),
    (10, 5),
];

fn maxima(report: &mut SuiteReport) -> Outcome {
    let mut matched = BTreeMap::new();
    for (n, a) in MAXIMA_CASES {
        let (found, witness) = exhaustive_max(n, a)?;
        let closed = mesh_max(n, a)?;
        if found != closed {
            return fail(format!(
                "(n = {n}, a = {a}): exhaustive {found} via {:?}, closed form {closed}",
                witness.lost()
            ));
        }
        matched.insert((n, a), found.0);
    }
    let values: Vec<String> = matched
        .iter()
        .map(|((n, a), v)| format!("({n},{a})={v}"))
        .collect();
    report
        .lines
        .push(format!("maxima matched: {}", values.join(" ")));
    Ok(())
}

fn states(seed: u64, report: &mut SuiteReport) -> Outcome {
    let kinds = [
        PolicyKind::Fixed,
        PolicyKind::RoundRobin,
        PolicyKind::Random { seed },
    ];
    let mut profiles = Vec::new();
    for kind in kinds {
        let mut policy = kind.build();
        let gens = run_generations(seed_d6(), MAX_TRACE_N, policy.as_mut())?;
        let checks: u64 = gens.iter().map(|(_, r)| r.class_count_checks).sum();
        let parents: u64 = gens.iter().map(|(_, r)| r.parents).sum();
        report.lines.push(format!(
            "{} policy: {parents} replacements to n = {MAX_TRACE_N}, {checks} per-parent class checks",
            policy.name()
        ));
        profiles.push(
            gens.iter()
                .map(|(g, _)| g.imbalance_profile())
                .collect::<Vec<_>>(),
        );
    }
    if profiles.windows(2).any(|w| w[0] != w[1]) {
        return fail("imbalance profiles differ between policies".into());
    }
    let mut tracker = VertexTracker::seed_d6()?;
    while tracker.n() < MAX_TRACKER_N {
        tracker = tracker.step()?;
    }
    report.lines.push(format!(
        "per-vertex tracking agrees with the multiset model up to n = {}",
        tracker.n()
    ));
    Ok(())
}

fn symmetry(report: &mut SuiteReport) -> Outcome {
    for n in [5, 6] {
        let r = symmetry_classes(n)?;
        let expected = (factorial(n) / 6) as usize;
        if r.class_sizes().iter().any(|&s| s != expected) {
            return fail(format!("n = {n}: class sizes {:?}", r.class_sizes()));
        }
        if let Some(c) = r.classes.iter().find(|c| !c.isomorphic_to_canonical) {
            return fail(format!(
                "n = {n}: class {} is not an image of the canonical one",
                c.class
            ));
        }
        report.lines.push(format!(
            "n = {n}: 6 classes of {expected}, pairwise isomorphic"
        ));
    }
    Ok(())
}

fn planarity(report: &mut SuiteReport) -> Outcome {
    for n in 2..=5 {
        let g = build_bn(n)?;
        let planar = g.is_planar();
        if planar != (n <= 4) {
            return fail(format!("B_{n}: planarity test returned {planar}"));
        }
        report.lines.push(format!(
            "B_{n}: {} vertices, {} edges, {}",
            g.vertex_count(),
            g.edge_count(),
            if planar { "planar" } else { "non-planar" }
        ));
    }
    Ok(())
}
