mod common;

use std::collections::BTreeSet;

use gch_core::canonical::{automorphism_group, canonical_form};
use gch_core::complexes::{build_complex, ComplexKind, ComplexSpec};
use gch_core::enumerate::{
    enumerate_forests, enumerate_graphs, enumerate_ribbon_structures, EnumSpec,
};
use gch_core::graph::SubgraphMask;
use gch_core::io::{parse_graph, read_sms, serialize_canonical, serialize_graph, write_sms};
use gch_core::linalg::{homology_dims, rank, SparseMatrix};
use gch_core::moduli::build_cube_catalog;
use gch_core::ribbon::{contract_ribbon, surface_invariants};
use gch_core::{HalfEdgeGraph, Parity};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn connected_graph() -> impl Strategy<Value = HalfEdgeGraph> {
    (
        1usize..=4,
        prop::collection::vec((0usize..4, 0usize..4), 1..=5),
    )
        .prop_filter_map("connected", |(n, raw)| {
            let edges: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            HalfEdgeGraph::new(n, edges)
                .ok()
                .filter(HalfEdgeGraph::is_connected)
        })
}

fn dense_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=8, 1usize..=8)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

fn rational(d: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    d.iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_ignores_labels(g in connected_graph(), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (h, _) = common::random_relabel(&g, &mut rng);
        let (a, b) = (canonical_form(&g, None).unwrap(), canonical_form(&h, None).unwrap());
        prop_assert_eq!(&a.certificate, &b.certificate);
        prop_assert_eq!(&a.graph, &b.graph);
        prop_assert!(a.to_canonical.is_valid(&g, &a.graph));
    }

    #[test]
    fn aut_order_matches_brute_force(g in connected_graph()) {
        let order = automorphism_group(&g, None).unwrap().order;
        prop_assert_eq!(order, common::brute_automorphisms(&g).len() as u128);
    }

    #[test]
    fn contraction_keeps_genus(g in connected_graph(), pick in any::<prop::sample::Index>()) {
        let e = pick.index(g.edge_count());
        prop_assume!(!g.is_tadpole(e));
        let (h, m) = g.contract_edge(e).unwrap();
        prop_assert_eq!(h.genus().unwrap(), g.genus().unwrap());
        prop_assert!(m.is_valid(&g, &h));
    }

    #[test]
    fn sparse_rank_matches_dense(d in dense_matrix()) {
        let m = common::to_sparse(&rational(&d));
        let r = rank(&m);
        prop_assert_eq!(r, common::dense_rank(rational(&d)));
        prop_assert_eq!(r, rank(&m.transpose()));
    }

    #[test]
    fn sms_round_trip(d in dense_matrix()) {
        let m = common::to_sparse(&rational(&d));
        prop_assert_eq!(read_sms(&write_sms(&m)).unwrap(), m);
    }

    #[test]
    fn graph_document_round_trip(g in connected_graph()) {
        let (back, _) = parse_graph(&serialize_graph(&g, None).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}

/// Permuting generators and reversing orientations leaves homology unchanged.
#[test]
fn homology_ignores_order_and_orientation() {
    let mut rng = StdRng::seed_from_u64(3);
    let specs = [
        ComplexSpec::new(ComplexKind::Com, Parity::Odd, 4),
        ComplexSpec::new(ComplexKind::Gf, Parity::Even, 3),
        ComplexSpec::new(ComplexKind::CellularMg, Parity::Even, 3),
        ComplexSpec::new(ComplexKind::ComTadGeq2, Parity::Odd, 2).with_max_edges(7),
    ];
    for spec in specs {
        let c = build_complex(&spec).unwrap();
        let counts = c.counts();
        let expected = homology_dims(&c.boundaries, &counts).unwrap();
        for _ in 0..5 {
            let perms: Vec<Vec<usize>> = counts
                .iter()
                .map(|&n| {
                    let mut p: Vec<usize> = (0..n).collect();
                    p.shuffle(&mut rng);
                    p
                })
                .collect();
            let flips: Vec<Vec<bool>> = counts
                .iter()
                .map(|&n| (0..n).map(|_| rand::Rng::gen(&mut rng)).collect())
                .collect();
            let moved: Vec<SparseMatrix> = c
                .boundaries
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let triplets = b.triplets().map(|(r, col, v)| {
                        let s = if flips[i][r] != flips[i + 1][col] {
                            -v.clone()
                        } else {
                            v.clone()
                        };
                        (perms[i][r], perms[i + 1][col], s)
                    });
                    SparseMatrix::from_triplets(b.rows(), b.cols(), triplets.collect::<Vec<_>>())
                        .unwrap()
                })
                .collect();
            assert_eq!(
                homology_dims(&moved, &counts).unwrap(),
                expected,
                "{spec:?}"
            );
        }
    }
}

#[test]
fn canonical_documents_round_trip_through_genus_four() {
    for g in 1..=4 {
        let spec = EnumSpec {
            min_valence: if g == 1 { 2 } else { 3 },
            allow_tadpoles: true,
            max_edges: Some(3 * g.max(2) - 3),
            ..EnumSpec::new(g)
        };
        for f in enumerate_graphs(&spec).unwrap() {
            let text = serialize_canonical(&f.graph, None).unwrap();
            let (back, _) = parse_graph(&text).unwrap();
            assert_eq!(
                canonical_form(&back, None).unwrap().certificate,
                f.certificate
            );
            assert_eq!(serialize_canonical(&back, None).unwrap(), text);
        }
    }
}

#[test]
fn weight_zero_faces_are_forests() {
    let mut spec = EnumSpec::new(3);
    spec.allow_tadpoles = true;
    for f in enumerate_graphs(&spec).unwrap() {
        let g = &f.graph;
        let forests: BTreeSet<u64> = enumerate_forests(g).into_iter().map(|s| s.0).collect();
        for bits in 0..(1u64 << g.edge_count()) - 1 {
            let face = g.collapse_subgraph(&SubgraphMask(bits));
            assert_eq!(
                face.total_weight() == 0,
                forests.contains(&bits),
                "{:?} {bits:b}",
                g.edges()
            );
            assert_eq!(face.genus().unwrap(), 3);
        }
    }
}

#[test]
fn cube_catalogs_are_closed() {
    for g in [2, 3] {
        let all = build_cube_catalog(g, false).unwrap();
        assert!(all.is_closed());
        let spine = build_cube_catalog(g, true).unwrap();
        assert!(spine.is_closed());
        assert!(spine.cubes.len() < all.cubes.len());
    }
}

#[test]
fn ribbon_orbits_match_brute_force() {
    let mut spec = EnumSpec::new(3);
    spec.allow_tadpoles = true;
    spec.max_edges = Some(5);
    let mut graphs: Vec<HalfEdgeGraph> = enumerate_graphs(&spec)
        .unwrap()
        .into_iter()
        .map(|f| f.graph)
        .collect();
    graphs.push(gch_core::graph::families::theta());
    for g in graphs {
        let ribbons = enumerate_ribbon_structures(&g).unwrap();
        assert_eq!(
            ribbons.len(),
            common::brute_ribbon_orbits(&g),
            "{:?}",
            g.edges()
        );
        for r in &ribbons {
            let key = surface_invariants(&g, r).unwrap();
            for e in (0..g.edge_count()).filter(|&e| !g.is_tadpole(e)) {
                let (h, rh, _) = contract_ribbon(&g, r, e).unwrap();
                assert_eq!(surface_invariants(&h, &rh).unwrap(), key);
            }
        }
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let spec = ComplexSpec::new(ComplexKind::Gp, Parity::Odd, 3);
    let run = |n: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| build_complex(&spec).unwrap())
    };
    assert_eq!(run(1), run(4));
}
