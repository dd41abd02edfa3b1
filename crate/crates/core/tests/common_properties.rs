mod support;

use hypersid::common::{common_deficit, even_subgraph_sum, levi_transfer};
use hypersid::density::{t_density, t_levi, Strategy as Engine};
use hypersid::hypergraph::{tight_cycle, Hypergraph};
use hypersid::kernel::{BipartiteKernel, KernelRange, SymmetricKernel};
use hypersid::rational::{int, rat, Rational};
use hypersid::search::negativity_search;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use support::*;

fn arb_bipartite() -> impl Strategy<Value = BipartiteKernel> {
    (
        prop::collection::vec(0u8..4, 1..=3),
        prop::collection::vec(0u8..4, 1..=3),
        prop::collection::vec(-3i8..=3, 9),
    )
        .prop_map(|(l, r, v)| {
            let (lm, rm) = (masses(&l), masses(&r));
            let values = (0..lm.len())
                .map(|x| (0..rm.len()).map(|y| rat(v[x * 3 + y] as i64, 3)).collect())
                .collect();
            BipartiteKernel::new(lm, rm, values).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn deficit_is_twice_the_even_sum(
        h in arb_hypergraph(3, 6, 8),
        f in arb_kernel(3, 2),
    ) {
        let f = f.with_range(KernelRange::SignedUnit).unwrap();
        // common_deficit fails with a verification error on any mismatch
        let rep = common_deficit(&h, &f).unwrap();
        prop_assert_eq!(rep.deficit, int(2) * rep.even_sum.unwrap());
    }

    #[test]
    fn zero_averaging_even_sum_keeps_only_degree_one_free_terms(
        h in arb_hypergraph(3, 6, 7),
        f in arb_zero_averaging(3, 3),
    ) {
        let mut kept = Rational::zero();
        for mask in 1u64..1 << h.edge_count() {
            let g = h.edge_subgraph(mask);
            let t = t_density(&g, &f, Engine::Auto).unwrap();
            if g.has_degree_one_vertex() {
                prop_assert!(t.is_zero());
            } else if mask.count_ones() % 2 == 0 {
                kept += t;
            }
        }
        prop_assert_eq!(even_subgraph_sum(&h, &f).unwrap(), kept);
    }

    #[test]
    fn levi_transfer_identity(
        h in arb_hypergraph(3, 6, 4),
        f in arb_bipartite(),
    ) {
        let transferred = levi_transfer(&f, 3).unwrap();
        prop_assert_eq!(
            t_density(&h, &transferred, Engine::Auto).unwrap(),
            t_levi(&h, &f).unwrap()
        );
    }

    #[test]
    fn doubled_components_are_nonnegative(
        h in arb_hypergraph(3, 5, 3),
        f in arb_kernel(3, 3),
    ) {
        let twice = Hypergraph::disjoint_union(&[h.clone(), h.clone()]).unwrap();
        let t = t_density(&h, &f, Engine::Auto).unwrap();
        let t2 = t_density(&twice, &f, Engine::Auto).unwrap();
        prop_assert_eq!(&t2, &(&t * &t));
        prop_assert!(!t2.is_negative());
    }
}

#[test]
fn negativity_witness_survives_serialization() {
    let triangle = tight_cycle(3, 2).unwrap();
    let w = negativity_search(&triangle, 3, 20, 7).unwrap().expect("triangle is not positive");
    let back = SymmetricKernel::from_json(&w.kernel.to_json()).unwrap();
    assert_eq!(back, w.kernel);
    let t = t_density(&triangle, &back, Engine::Auto).unwrap();
    assert_eq!(t, w.value);
    assert!(t.is_negative());
}
