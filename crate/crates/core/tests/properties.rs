use bubble_cross::bounds::{bracket_form, closed_sum, nu_dn};
use bubble_cross::mesh::Side;
use bubble_cross::mesh::{
    oracle_crossings, oracle_crossings_with_slopes, pair_crossings, sort_spec, total_crossings,
    MeshSpec,
};
use bubble_cross::perm_graph::{build_bn, Permutation};
use bubble_cross::recursion::{choose_structure, replace_vertex, ReplacementPlan, VertexState};
use proptest::prelude::*;

fn mesh_spec() -> impl Strategy<Value = MeshSpec> {
    (6usize..=12)
        .prop_flat_map(|n| {
            let values: Vec<u32> = (2..n as u32).collect();
            (Just(n), 0..=n - 2, Just(values).prop_shuffle())
        })
        .prop_map(|(n, a, p)| MeshSpec::new(n, a, p).unwrap())
}

fn permutation() -> impl Strategy<Value = Permutation> {
    (2usize..=9)
        .prop_flat_map(|n| Just((1..=n as u8).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #[test]
    fn formula_matches_rays(spec in mesh_spec()) {
        prop_assert_eq!(total_crossings(&spec), oracle_crossings(&spec).unwrap());
    }

    #[test]
    fn slope_choice_does_not_matter(spec in mesh_spec(), offsets in proptest::collection::vec(1i64..5, 10)) {
        let mut m = 0;
        let slopes: Vec<i64> = (0..spec.lost().len()).map(|i| { m += offsets[i]; m - 20 }).collect();
        prop_assert_eq!(
            oracle_crossings_with_slopes(&spec, &slopes).unwrap(),
            total_crossings(&spec)
        );
    }

    #[test]
    fn sorting_adds_predicted_amounts(spec in mesh_spec()) {
        let trace = sort_spec(&spec);
        let gained: i64 = trace.swaps.iter().map(|s| s.predicted_delta()).sum();
        prop_assert!(trace.sorted.is_sorted());
        prop_assert_eq!(
            total_crossings(&trace.sorted).0 as i64,
            total_crossings(&spec).0 as i64 + gained
        );
        prop_assert!(trace.swaps.iter().all(|s| s.delta() == s.predicted_delta() && s.delta() > 0));
    }

    #[test]
    fn swapped_pair_differs_by_odd_amount(
        (n, k1, k2) in (6usize..40)
            .prop_flat_map(|n| (Just(n), 2u32..n as u32 - 1))
            .prop_flat_map(|(n, k1)| (Just(n), Just(k1), k1 + 1..n as u32))
    ) {
        let up = pair_crossings(n, k1, k2).unwrap().0 as i64;
        let down = pair_crossings(n, k2, k1).unwrap().0 as i64;
        prop_assert_eq!(up - down, 2 * (k2 as i64 - k1 as i64) - 1);
    }

    #[test]
    fn rank_round_trips(p in permutation()) {
        let back = Permutation::unrank(p.len(), p.rank()).unwrap();
        prop_assert_eq!(back, p.clone());
        for q in p.neighbors() {
            prop_assert!(p.is_adjacent(&q));
            prop_assert!(p.neighbor_ranks().contains(&q.rank()));
        }
    }

    #[test]
    fn expansion_is_an_induced_path(p in permutation()) {
        let kids = p.expand();
        prop_assert_eq!(kids.len(), p.len() + 1);
        for (i, a) in kids.iter().enumerate() {
            for (j, b) in kids.iter().enumerate().skip(i + 1) {
                prop_assert_eq!(a.is_adjacent(b), j == i + 1);
            }
        }
    }

    #[test]
    fn replacement_conserves_arcs(n in 6usize..30, imbalance_pick in 0usize..3, sides_seed in any::<u64>()) {
        let d = n as i64 - 1;
        let options: Vec<i64> = if n % 2 == 1 { vec![-2, 0, 2] } else { vec![-1, 1, 1] };
        let imb = options[imbalance_pick];
        let l = ((d + imb) / 2) as u32;
        let s = VertexState::new(l, d as u32 - l);
        let mut sides: Vec<Side> = (0..d as u32).map(|i| if i < l { Side::Left } else { Side::Right }).collect();
        sides.rotate_left((sides_seed % d as u64) as usize);
        let plan = ReplacementPlan::new(choose_structure(n, s).unwrap(), sides);
        let kids = replace_vertex(n, s, &plan).unwrap();
        prop_assert_eq!(kids.iter().map(|k| (k.l + k.r) as usize).sum::<usize>(), n * (n + 1));
        prop_assert!(kids.iter().all(|k| k.in_parity_class(n + 1)));
    }

    #[test]
    fn bound_routes_agree(n in 7usize..60) {
        let r = nu_dn(n).unwrap();
        prop_assert_eq!(&r, &closed_sum(n).unwrap());
        prop_assert_eq!(&r, &bracket_form(n).unwrap());
    }
}

#[test]
fn small_graph_edges_are_adjacent_swaps() {
    for n in 2..=6 {
        let g = build_bn(n).unwrap();
        for (u, v) in g.edges() {
            assert!(g.label(u).is_adjacent(&g.label(v)));
        }
        assert!(g.is_connected());
    }
}
