use cist_rcube::cist::{build_with_graph, cist_count, expected_diameter};
use cist_rcube::protection::{delivers, Skeleton, WalkScratch};
use cist_rcube::simulate::sample_faults;
use cist_rcube::verify::DefinitionalOptions;
use cist_rcube::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Graph parameters with CISTs: n + m >= 4, n != 1 or anything, small sizes.
fn cist_params() -> impl Strategy<Value = (usize, usize, usize)> {
    prop_oneof![
        (2usize..=5, 0usize..=5, 1usize..=2),
        (1usize..=1, 3usize..=6, 1usize..=3),
    ]
    .prop_filter("needs at least four vertices per element", |&(n, m, _)| {
        n + m >= 4
    })
    .prop_filter("keeps graphs small", |&(n, m, k)| {
        (n + m) * n.pow(k as u32) <= 300
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vertex_count_and_symmetry(n in 1usize..=4, m in 0usize..=4, k in 0usize..=2) {
        prop_assume!(n + m >= 2);
        let g = LogicGraph::build(n, m, k).unwrap();
        prop_assert_eq!(g.vertex_count(), (n + m) * n.pow(k as u32));
        for u in g.vertices() {
            prop_assert!(!g.has_edge(u, u));
            for &v in g.neighbors(u) {
                prop_assert!(g.has_edge(v, u));
                prop_assert!(g.are_adjacent(&g.address(u), &g.address(v)));
            }
            prop_assert_eq!(g.index_of(&g.address(u)).unwrap(), u);
        }
        for block in g.decompose().blocks {
            for e in block.elements {
                prop_assert_eq!(e.vertices.len(), n + m);
                for (i, &a) in e.vertices.iter().enumerate() {
                    for &b in &e.vertices[i + 1..] {
                        prop_assert!(g.has_edge(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn constructed_sets_are_cists((n, m, k) in cist_params()) {
        let (g, set) = build_with_graph(n, m, k).unwrap();
        prop_assert_eq!(set.len(), cist_count(n, m, k).unwrap());
        prop_assert!(verify_cists_characterization(&g, &set).unwrap().is_pass());
        for t in set.trees() {
            prop_assert_eq!(t.diameter(), expected_diameter(n, m, k));
        }
    }

    #[test]
    fn routings_are_protected((n, m, k) in cist_params(), pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let (g, set) = build_with_graph(n, m, k).unwrap();
        let d = VertexId::from_index(pick.index(g.vertex_count()));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut scratch = WalkScratch::new(g.vertex_count());
        for r in build_mpr(&set, d).unwrap() {
            prop_assert!(verify_protected(&g, &r).is_pass());
            let (t1, t2) = (&set.trees()[r.trees().0], &set.trees()[r.trees().1]);
            prop_assert!(t2.is_leaf(d));
            for u in g.vertices().filter(|&u| u != d) {
                let w = r.snh(u).unwrap();
                match r.skeleton(u) {
                    Skeleton::Second => prop_assert!(t1.is_leaf(u) && t1.contains_edge(u, w)),
                    Skeleton::First => prop_assert!(t2.is_leaf(u) && t2.contains_edge(u, w)),
                }
                // one fault anywhere but the endpoints never stops delivery
                let faults = sample_faults(g.vertex_count(), 1, (u, d), &mut rng).unwrap();
                prop_assert!(delivers(&r, u, &faults, ForwardMode::Forwarding, &mut scratch));
                prop_assert!(delivers(&r, u, &faults, ForwardMode::Detour, &mut scratch));
            }
        }
    }

    #[test]
    fn fewer_faults_than_trees_always_deliver((n, m, k) in cist_params(), seed in any::<u64>()) {
        let (g, set) = build_with_graph(n, m, k).unwrap();
        prop_assume!(set.len() >= 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut scratch = WalkScratch::new(g.vertex_count());
        for _ in 0..40 {
            let s = VertexId::from_index(rand::Rng::random_range(&mut rng, 0..g.vertex_count()));
            let d = VertexId::from_index(rand::Rng::random_range(&mut rng, 0..g.vertex_count()));
            if s == d {
                continue;
            }
            let faults = sample_faults(g.vertex_count(), set.len() - 1, (s, d), &mut rng).unwrap();
            let routings = build_mpr(&set, d).unwrap();
            for mode in [ForwardMode::Forwarding, ForwardMode::Detour] {
                prop_assert!(routings.iter().any(|r| delivers(r, s, &faults, mode, &mut scratch)));
            }
        }
    }

    #[test]
    fn delivered_walks_avoid_faults(seed in any::<u64>(), size in 0usize..8) {
        let (g, set) = build_with_graph(3, 4, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = VertexId(5);
        let s = VertexId(17);
        let faults = sample_faults(g.vertex_count(), size, (s, d), &mut rng).unwrap();
        prop_assert_eq!(faults.len(), size);
        prop_assert!(!faults.contains(s) && !faults.contains(d));
        for r in build_mpr(&set, d).unwrap() {
            for mode in [ForwardMode::Forwarding, ForwardMode::Path, ForwardMode::Detour] {
                let out = forward(&r, s, &faults, mode).unwrap();
                prop_assert_eq!(out.hops[0], s);
                for w in out.hops.windows(2) {
                    prop_assert!(g.has_edge(w[0], w[1]));
                }
                if out.delivered() {
                    prop_assert_eq!(*out.hops.last().unwrap(), d);
                    prop_assert!(out.hops.iter().all(|&v| !faults.contains(v)));
                }
            }
        }
    }
}

/// Replaces one edge of one tree by a graph edge that reconnects the two
/// sides, so the result is still a spanning tree.
fn swap_edge(g: &LogicGraph, t: &Tree, rng: &mut ChaCha8Rng) -> Tree {
    use rand::Rng;
    let edges = t.edges();
    let drop = edges[rng.random_range(0..edges.len())];
    let rest: Vec<_> = edges.iter().copied().filter(|&e| e != drop).collect();
    let side = Tree::new(t.vertex_count(), rest.clone()).distances_from(drop.0);
    let crossing: Vec<_> = g
        .edges()
        .filter(|&(u, v)| (side[u.index()] == u32::MAX) != (side[v.index()] == u32::MAX))
        .filter(|&e| e != drop)
        .collect();
    if crossing.is_empty() {
        return t.clone();
    }
    let add = crossing[rng.random_range(0..crossing.len())];
    Tree::new(t.vertex_count(), rest.into_iter().chain([add]))
}

#[test]
fn checkers_agree_on_mutated_sets() {
    let opts = DefinitionalOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (n, m, k) in [(2, 4, 1), (3, 3, 1), (4, 0, 1), (1, 5, 2), (3, 3, 2)] {
        let (g, set) = build_with_graph(n, m, k).unwrap();
        assert!(verify_cists_definitional(&g, &set, opts).unwrap().is_pass());
        let mut invalid = 0;
        for round in 0..400 {
            let mut trees = set.trees().to_vec();
            let i = round % trees.len();
            trees[i] = swap_edge(&g, &trees[i], &mut rng);
            let mutated = CistSet::new(set.params(), set.vertex_count(), trees);
            let by_char = verify_cists_characterization(&g, &mutated).unwrap();
            let by_def = verify_cists_definitional(&g, &mutated, opts).unwrap();
            assert_eq!(
                by_char.is_pass(),
                by_def.is_pass(),
                "({n},{m},{k}) round {round}"
            );
            invalid += !by_char.is_pass() as usize;
        }
        assert!(
            invalid >= 100,
            "({n},{m},{k}): only {invalid} invalid mutants"
        );
    }
}
