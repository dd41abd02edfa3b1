mod support;

use hypersid::hypergraph::{loose_cycle, Hypergraph};
use proptest::prelude::*;
use support::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn json_round_trip_is_identity(h in arb_hypergraph(3, 8, 8)) {
        prop_assert_eq!(Hypergraph::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn remove_then_add_restores(h in arb_hypergraph(3, 7, 6), pick in any::<prop::sample::Index>()) {
        let i = pick.index(h.edge_count());
        let edge = h.edge(i).to_vec();
        prop_assert_eq!(h.remove_edge(i).unwrap().add_edge(edge).unwrap(), h);
    }

    #[test]
    fn levi_graph_is_bipartite_with_degree_r(h in arb_hypergraph(4, 8, 6)) {
        let l = h.levi_graph();
        let v = h.vertex_count();
        prop_assert_eq!(l.vertex_count(), v + h.edge_count());
        prop_assert_eq!(l.edge_count(), 4 * h.edge_count());
        for e in l.edges() {
            prop_assert!(e[0] < v && e[1] >= v);
        }
        let deg = l.degrees();
        prop_assert!(deg[v..].iter().all(|&d| d == 4));
    }

    #[test]
    fn skeleton_at_r_is_identity(h in arb_hypergraph(3, 7, 6)) {
        prop_assert_eq!(h.skeleton(3).unwrap(), h);
    }

    #[test]
    fn disjoint_union_is_additive(a in arb_hypergraph(3, 6, 4), b in arb_hypergraph(3, 6, 4)) {
        let u = Hypergraph::disjoint_union(&[a.clone(), b.clone()]).unwrap();
        prop_assert_eq!(u.vertex_count(), a.vertex_count() + b.vertex_count());
        prop_assert_eq!(u.edge_count(), a.edge_count() + b.edge_count());
        prop_assert_eq!(u.is_linear(), a.is_linear() && b.is_linear());
    }
}

#[test]
fn loose_cycle_girth_is_its_length() {
    for g in 3..=7 {
        for r in 2..=5 {
            let rep = loose_cycle(g, r).unwrap().berge_girth().unwrap();
            assert_eq!(rep.girth, g, "g={g} r={r}");
            assert_eq!(rep.shortest_cycle_count, 1, "g={g} r={r}");
        }
    }
}
