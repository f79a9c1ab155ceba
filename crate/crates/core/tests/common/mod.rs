#![allow(dead_code)]

use hyperpath_core::families::Family;
use hyperpath_core::{DirectedHypergraph, HypergraphBuilder, Vertex};
use proptest::prelude::*;

fn mask_vertices(vs: &[Vertex], mask: u32) -> Vec<Vertex> {
    vs.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &v)| v)
        .collect()
}

fn build(n: usize, arcs: &[(u32, u32)]) -> (DirectedHypergraph, Vec<Vertex>) {
    let mut b = HypergraphBuilder::new();
    let vs: Vec<Vertex> = (0..n).map(|i| b.add_vertex(&format!("v{i}")).unwrap()).collect();
    for &(tails, heads) in arcs {
        b.add_arc(mask_vertices(&vs, tails), mask_vertices(&vs, heads)).unwrap();
    }
    (b.finish(), vs)
}

/// Random B-hypergraph instances with nonempty, possibly overlapping S and T.
pub fn b_instance(max_vertices: usize, max_arcs: usize) -> impl Strategy<Value = Family> {
    (2..=max_vertices).prop_flat_map(move |n| {
        let full = (1u32 << n) - 1;
        (
            prop::collection::vec((0..n, 1..=full), 0..=max_arcs),
            1..=full,
            1..=full,
        )
            .prop_map(move |(raw, s, t)| {
                let arcs: Vec<(u32, u32)> = raw
                    .into_iter()
                    .map(|(h, tails)| {
                        let mut tails = tails & !(1 << h);
                        if tails == 0 {
                            tails = 1 << ((h + 1) % n);
                        }
                        (tails, 1 << h)
                    })
                    .collect();
                let (graph, vs) = build(n, &arcs);
                Family {
                    graph,
                    sources: mask_vertices(&vs, s),
                    targets: mask_vertices(&vs, t),
                }
            })
    })
}

/// Random general directed hypergraphs (heads of any size).
pub fn general_instance(max_vertices: usize, max_arcs: usize) -> impl Strategy<Value = Family> {
    (2..=max_vertices).prop_flat_map(move |n| {
        let full = (1u32 << n) - 1;
        (
            prop::collection::vec((1..=full, 1..=full), 0..=max_arcs),
            1..=full,
            1..=full,
        )
            .prop_map(move |(raw, s, t)| {
                let arcs: Vec<(u32, u32)> = raw
                    .into_iter()
                    .filter_map(|(tails, heads)| {
                        let heads = heads & !tails;
                        (heads != 0).then_some((tails, heads))
                    })
                    .collect();
                let (graph, vs) = build(n, &arcs);
                Family {
                    graph,
                    sources: mask_vertices(&vs, s),
                    targets: mask_vertices(&vs, t),
                }
            })
    })
}

/// Naive least fixpoint: rescan every arc until nothing changes.
pub fn naive_closure(graph: &DirectedHypergraph, sources: &[Vertex], alive: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut reached = vec![false; graph.num_vertices()];
    for s in sources {
        reached[s.index()] = true;
    }
    loop {
        let mut changed = false;
        for (id, arc) in graph.arcs().iter().enumerate() {
            if alive(id) && arc.tails().iter().all(|t| reached[t.index()]) {
                for h in arc.heads() {
                    if !reached[h.index()] {
                        reached[h.index()] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return reached;
        }
    }
}

/// Whether the arcs in `subset` connect every target from the sources.
pub fn connects(graph: &DirectedHypergraph, sources: &[Vertex], targets: &[Vertex], subset: &[usize]) -> bool {
    let reached = naive_closure(graph, sources, |id| subset.contains(&id));
    targets.iter().all(|t| reached[t.index()])
}
