use std::collections::BTreeSet;

use pairham::check::verify_extension;
use pairham::construct::{extend_rook, Extension};
use pairham::graph::{
    build_bishop_on_rook, build_complete, build_complete_bipartite, build_path, build_rook,
    cartesian_product, conormal_product, line_graph, Graph, Vertex,
};
use pairham::matching::{random_pairing, Pairing};
use pairham::search::{search, SearchConfig, SearchOutcome};
use proptest::prelude::*;

fn edge_set(g: &Graph, f: impl Fn(Vertex) -> Vertex) -> BTreeSet<(Vertex, Vertex)> {
    g.edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (f(u), f(v));
            (a.min(b), a.max(b))
        })
        .collect()
}

fn small_graphs() -> Vec<Graph> {
    vec![build_complete(2).unwrap(), build_complete(3).unwrap(), build_path(3).unwrap()]
}

#[test]
fn products_commute_up_to_swap() {
    for g in small_graphs() {
        for h in small_graphs() {
            let gh = cartesian_product(&g, &h).unwrap();
            let hg = cartesian_product(&h, &g).unwrap();
            assert_eq!(edge_set(&gh, Vertex::transposed), edge_set(&hg, |v| v));
            let gh = conormal_product(&g, &h).unwrap();
            let hg = conormal_product(&h, &g).unwrap();
            assert_eq!(edge_set(&gh, Vertex::transposed), edge_set(&hg, |v| v));
        }
    }
}

proptest! {
    #[test]
    fn rook_is_line_graph_of_complete_bipartite(m1 in 1u32..=6, m2 in 1u32..=6) {
        prop_assume!(m1 * m2 > 1);
        let rook = build_rook(m1, m2).unwrap();
        let line = line_graph(&build_complete_bipartite(m1, m2).unwrap()).unwrap();
        // edge u_i w_j has endpoint indices (i, m1 + j)
        let to_cell = |v: Vertex| Vertex::new(v.row, v.col - m1);
        prop_assert_eq!(line.order(), rook.order());
        prop_assert_eq!(edge_set(&line, to_cell), edge_set(&rook, |v| v));
    }

    #[test]
    fn edge_counts(m1 in 1u32..=7, m2 in 1u32..=7) {
        let (a, b) = (m1 as usize, m2 as usize);
        prop_assert_eq!(build_rook(m1, m2).unwrap().size(), a * b * (a + b - 2) / 2);
        prop_assert_eq!(build_bishop_on_rook(m1, m2).unwrap().size(), b * b * a * (a - 1) / 2);
    }

    #[test]
    fn rook_extensions_verify(m1 in 1u32..=4, m2 in 1u32..=5, seed in any::<u64>()) {
        prop_assume!((m1 * m2) % 2 == 0 && m1 * m2 <= 16);
        let g = build_rook(m1, m2).unwrap();
        let m = random_pairing(&g, seed).unwrap();
        match extend_rook(m1, m2, &m).unwrap() {
            Extension::Extended(c) => prop_assert!(verify_extension(&g, &m, &c)),
            Extension::Nonextendable(_) => {
                let odd_two_row = (m1 == 2 && m2 % 2 == 1) || (m2 == 2 && m1 % 2 == 1);
                prop_assert!(odd_two_row);
                prop_assert_eq!(search(&g, &m, &SearchConfig::default()).unwrap().decision(), Some(false));
            }
        }
    }

    #[test]
    fn pruning_does_not_change_decisions(
        family in 0usize..4,
        seed in any::<u64>(),
        bits in 0u8..8,
    ) {
        let g = match family {
            0 => build_rook(2, 4).unwrap(),
            1 => build_bishop_on_rook(3, 2).unwrap(),
            2 => build_path(8).unwrap(),
            _ => build_complete_bipartite(3, 5).unwrap(),
        };
        let m: Pairing = random_pairing(&g, seed).unwrap();
        let cfg = SearchConfig {
            prune_degree: bits & 1 != 0,
            prune_connectivity: bits & 2 != 0,
            prune_closure: bits & 4 != 0,
            ..SearchConfig::default()
        };
        let on = search(&g, &m, &SearchConfig::default()).unwrap();
        let off = search(&g, &m, &cfg).unwrap();
        prop_assert_eq!(on.decision(), off.decision());
        if let SearchOutcome::Extendable(c, _) = off {
            prop_assert!(verify_extension(&g, &m, &c));
        }
    }
}
