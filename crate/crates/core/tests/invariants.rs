//! Property-based invariants over random graphs and random structured
//! trees. These complement the oracle comparisons in the acceptance suite
//! with round-trip and closure-style properties.

use std::sync::Arc;

use proptest::prelude::*;

use twincut::coloring;
use twincut::graph::{self, Graph, VertexId};
use twincut::structure;
use twincut::tree::{NodeSpec, StructuredTree, VertexAddress};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(VertexId, VertexId)> = (0..n as VertexId)
            .flat_map(|u| (u + 1..n as VertexId).map(move |v| (u, v)))
            .collect();
        let m = pairs.len();
        proptest::collection::vec(proptest::bool::ANY, m).prop_map(move |mask| {
            let edges: Vec<_> = pairs
                .iter()
                .zip(&mask)
                .filter(|(_, &keep)| keep)
                .map(|(&e, _)| e)
                .collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

/// Triangle-free random graph: greedily drop any edge closing a triangle.
fn arb_triangle_free(max_n: usize) -> impl Strategy<Value = Graph> {
    arb_graph(max_n).prop_map(|g| {
        let mut kept: Vec<(VertexId, VertexId)> = Vec::new();
        let mut adj = vec![std::collections::BTreeSet::new(); g.vertex_count()];
        for &(u, v) in g.edges() {
            if adj[u as usize]
                .intersection(&adj[v as usize])
                .next()
                .is_none()
            {
                kept.push((u, v));
                adj[u as usize].insert(v);
                adj[v as usize].insert(u);
            }
        }
        Graph::new(g.vertex_count(), &kept).unwrap()
    })
}

/// Two-level structured tree whose root carries a random triangle-free
/// internal graph with one leaf child per vertex.
fn arb_shallow_tree(max_n: usize) -> impl Strategy<Value = StructuredTree> {
    arb_triangle_free(max_n).prop_map(|g| {
        let kids = (0..g.vertex_count()).map(|_| NodeSpec::leaf()).collect();
        StructuredTree::build(NodeSpec::internal(Arc::new(g), kids)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph6_round_trip(g in arb_graph(12)) {
        let text = graph::encode_graph6(&g);
        let back = graph::decode_graph6(&text).unwrap();
        prop_assert_eq!(back.vertex_count(), g.vertex_count());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn json_round_trip(g in arb_graph(12)) {
        let text = graph::encode_json(&g);
        let back = graph::decode_json(&text).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn isomorphic_under_permutation(g in arb_graph(9), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<VertexId> = (0..g.vertex_count() as VertexId).collect();
        perm.shuffle(&mut rng);
        let h = g.permuted(&perm).unwrap();
        prop_assert!(graph::is_isomorphic(&g, &h).unwrap());
    }

    #[test]
    fn induced_subgraph_is_induced(g in arb_graph(10), mask in proptest::collection::vec(proptest::bool::ANY, 10)) {
        let chosen: Vec<VertexId> = (0..g.vertex_count() as VertexId)
            .filter(|&v| mask[v as usize])
            .collect();
        let (h, back) = g.induced_subgraph(&chosen).unwrap();
        prop_assert_eq!(h.vertex_count(), chosen.len());
        for u in 0..h.vertex_count() as VertexId {
            for v in u + 1..h.vertex_count() as VertexId {
                prop_assert_eq!(
                    h.has_edge(u, v),
                    g.has_edge(back[u as usize], back[v as usize])
                );
            }
        }
    }

    #[test]
    fn realization_of_triangle_free_parts_is_triangle_free(t in arb_shallow_tree(7)) {
        let g = t.realize().unwrap();
        // size law: tree nodes + one branch vertex per leaf
        let leaves = t.branches().len();
        prop_assert_eq!(g.vertex_count(), t.node_count() + leaves);
        prop_assert!(structure::has_triangle(&g).is_none());
        // every branch vertex sees its whole branch
        for v in 0..g.vertex_count() as VertexId {
            if let Some(VertexAddress::BranchV(path)) = g.label(v) {
                prop_assert_eq!(g.degree(v), path.len() + 1);
            }
        }
    }

    #[test]
    fn proper_colorings_stay_proper_under_renaming(g in arb_graph(9)) {
        let c = match coloring::chromatic_number(&g, coloring::Budget::default()) {
            coloring::ChiOutcome::Exact(r) => r.witness,
            other => return Err(TestCaseError::fail(format!("solver gave up: {other:?}"))),
        };
        prop_assert!(coloring::is_proper(&g, &c).unwrap());
        let renamed = coloring::Coloring::from_assignment(
            c.assignment.iter().map(|&x| x + 5).collect(),
        );
        prop_assert!(coloring::is_proper(&g, &renamed).unwrap());
    }

    #[test]
    fn cutset_witness_is_valid(g in arb_graph(9)) {
        if let Some((set, comps)) = structure::find_edgeless_cutset(&g, 2) {
            if set.len() == 2 {
                prop_assert!(!g.has_edge(set[0], set[1]));
            }
            prop_assert!(comps.len() >= 2 || set.is_empty());
            let total: usize = comps.iter().map(Vec::len).sum();
            prop_assert_eq!(total + set.len(), g.vertex_count());
        }
    }
}
