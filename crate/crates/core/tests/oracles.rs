mod common;

use common::{b_instance, connects, general_instance};
use hyperpath_core::enumerator::all_hyperpaths;
use hyperpath_core::families::diamond_chain;
use hyperpath_core::oracles::{
    minimal_separators_by_search, oracle_hyperpaths, oracle_induced_hyperpaths,
    oracle_minimal_separators, oracle_minimal_transversals,
};
use hyperpath_core::reductions::{
    hyperpath_from_transversal, is_induced_hyperpath, is_minimal_separator, reduce_transversal,
    transversal_from_hyperpath,
};
use hyperpath_core::{DirectedHypergraph, HyperpathInstance, UndirectedHypergraph, DEFAULT_CAP};
use proptest::prelude::*;

fn is_canonical<T: Ord>(family: &[Vec<T>]) -> bool {
    family.windows(2).all(|w| (w[0].len(), &w[0]) < (w[1].len(), &w[1]))
}

fn terminals(f: &hyperpath_core::families::Family) -> (hyperpath_core::Vertex, hyperpath_core::Vertex) {
    (f.sources[0], *f.targets.last().unwrap())
}

fn edges_strategy(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = UndirectedHypergraph> {
    prop::collection::vec(1u32..(1 << max_vertices), 1..=max_edges).prop_map(move |masks| {
        let edges: Vec<Vec<String>> = masks
            .iter()
            .map(|m| (0..max_vertices).filter(|i| m >> i & 1 == 1).map(|i| format!("{}", i + 1)).collect())
            .collect();
        UndirectedHypergraph::from_edges(edges).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hyperpath_oracle_sets_are_minimal(f in general_instance(6, 7)) {
        let inst = f.instance();
        let family = oracle_hyperpaths(&inst, DEFAULT_CAP).unwrap();
        prop_assert!(is_canonical(&family));
        for p in &family {
            prop_assert!(connects(&f.graph, &f.sources, &f.targets, p));
            for &a in p {
                let less: Vec<_> = p.iter().copied().filter(|&b| b != a).collect();
                prop_assert!(!connects(&f.graph, &f.sources, &f.targets, &less));
            }
        }
    }

    #[test]
    fn induced_oracle_sets_satisfy_predicate(f in b_instance(7, 9)) {
        let (s, t) = terminals(&f);
        let family = oracle_induced_hyperpaths(&f.graph, s, t, DEFAULT_CAP).unwrap();
        prop_assert!(is_canonical(&family));
        for u in &family {
            prop_assert!(is_induced_hyperpath(&f.graph, s, t, u));
        }
    }

    #[test]
    fn separator_oracle_sets_satisfy_predicate(f in general_instance(7, 9)) {
        let (s, t) = terminals(&f);
        let family = oracle_minimal_separators(&f.graph, s, t, DEFAULT_CAP).unwrap();
        prop_assert!(is_canonical(&family));
        for x in &family {
            prop_assert!(is_minimal_separator(&f.graph, s, t, x));
        }
    }

    #[test]
    fn separator_search_rejects_non_b_input(f in general_instance(5, 6)) {
        let (s, t) = terminals(&f);
        let result = minimal_separators_by_search(&f.graph, s, t);
        prop_assert_eq!(result.is_err(), !f.graph.is_b_hypergraph());
    }

    #[test]
    fn separator_search_matches_exhaustive_scan(f in b_instance(10, 16)) {
        let (s, t) = terminals(&f);
        prop_assert_eq!(
            minimal_separators_by_search(&f.graph, s, t).unwrap(),
            oracle_minimal_separators(&f.graph, s, t, DEFAULT_CAP).unwrap()
        );
    }

    #[test]
    fn transversals_are_minimal_hitting_sets(h in edges_strategy(6, 6)) {
        let family = oracle_minimal_transversals(&h, DEFAULT_CAP).unwrap();
        prop_assert!(is_canonical(&family));
        for tr in &family {
            prop_assert!(h.is_transversal(tr));
            for &v in tr {
                let less: Vec<_> = tr.iter().copied().filter(|&u| u != v).collect();
                prop_assert!(!h.is_transversal(&less));
            }
        }
    }

    #[test]
    fn transversal_bijection(h in edges_strategy(5, 5)) {
        let map = reduce_transversal(&h).unwrap();
        let inst = HyperpathInstance::new(map.graph(), &[map.source()], &[map.target()]).unwrap();
        let paths = oracle_hyperpaths(&inst, DEFAULT_CAP).unwrap();
        let trs = oracle_minimal_transversals(&h, DEFAULT_CAP).unwrap();
        prop_assert_eq!(paths.len(), trs.len());
        for tr in &trs {
            let p = hyperpath_from_transversal(&map, tr).unwrap();
            prop_assert!(paths.contains(&p));
            prop_assert_eq!(&transversal_from_hyperpath(&map, &p).unwrap(), tr);
        }
    }
}

#[test]
fn diamond_chain_has_eight_hyperpaths() {
    let f = diamond_chain(3);
    assert_eq!(oracle_hyperpaths(&f.instance(), DEFAULT_CAP).unwrap().len(), 8);
}

#[test]
fn transversal_instance_enumerates_like_oracle() {
    let h = UndirectedHypergraph::from_edges([["1", "2"], ["2", "3"]]).unwrap();
    let map = reduce_transversal(&h).unwrap();
    let inst = HyperpathInstance::new(map.graph(), &[map.source()], &[map.target()]).unwrap();
    assert_eq!(oracle_hyperpaths(&inst, DEFAULT_CAP).unwrap().len(), 2);
    assert_eq!(oracle_minimal_transversals(&h, DEFAULT_CAP).unwrap().len(), 2);
}

#[test]
fn b_instance_of_transversal_enumerates() {
    // Singleton edges give singleton E_v, so D_H is a plain B-hypergraph.
    let h = UndirectedHypergraph::from_edges([["1"], ["2"]]).unwrap();
    let map = reduce_transversal(&h).unwrap();
    let inst = HyperpathInstance::new(map.graph(), &[map.source()], &[map.target()]).unwrap();
    assert_eq!(all_hyperpaths(&inst).unwrap(), vec![vec![0, 1, 2]]);
}

#[test]
fn shortcut_makes_the_chain_non_induced() {
    let g = DirectedHypergraph::build(
        ["s", "a", "t"],
        [(vec!["s"], vec!["a"]), (vec!["a"], vec!["t"]), (vec!["s"], vec!["t"])],
    )
    .unwrap();
    let (s, t) = (g.vertex("s").unwrap(), g.vertex("t").unwrap());
    assert_eq!(oracle_induced_hyperpaths(&g, s, t, DEFAULT_CAP).unwrap(), vec![vec![s, t]]);
}
