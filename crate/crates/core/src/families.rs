//! Parameterized B-hypergraph instance families for benchmarking.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connectivity::HyperpathInstance;
use crate::hypergraph::{DirectedHypergraph, HypergraphBuilder, Vertex};

/// A generated hypergraph with its source and target sets.
#[derive(Clone, Debug)]
pub struct Family {
    pub graph: DirectedHypergraph,
    pub sources: Vec<Vertex>,
    pub targets: Vec<Vertex>,
}

impl Family {
    pub fn instance(&self) -> HyperpathInstance<'_> {
        HyperpathInstance::new(&self.graph, &self.sources, &self.targets)
            .expect("generated families are well formed")
    }
}

/// `k` diamonds in series from `v_0` to `v_k`; `4k` arcs and `2^k` hyperpaths.
///
/// Stage `i` contributes `v_{i-1} -> a_i`, `v_{i-1} -> b_i`, `a_i -> v_i`,
/// `b_i -> v_i`, in that order.
pub fn diamond_chain(k: usize) -> Family {
    let mut b = HypergraphBuilder::new();
    let v0 = b.add_vertex("v_0").unwrap();
    let mut prev = v0;
    for i in 1..=k {
        let a = b.add_vertex(&format!("a_{i}")).unwrap();
        let bb = b.add_vertex(&format!("b_{i}")).unwrap();
        let v = b.add_vertex(&format!("v_{i}")).unwrap();
        b.add_arc([prev], [a]).unwrap();
        b.add_arc([prev], [bb]).unwrap();
        b.add_arc([a], [v]).unwrap();
        b.add_arc([bb], [v]).unwrap();
        prev = v;
    }
    Family {
        graph: b.finish(),
        sources: vec![v0],
        targets: vec![prev],
    }
}

/// `k` layers of two vertices each between `s` and `t`.
///
/// Every vertex of a layer is entered from each single vertex of the previous
/// layer and from the pair of them, so hyperpaths mix simple and AND steps.
pub fn layered(k: usize) -> Family {
    let mut b = HypergraphBuilder::new();
    let s = b.add_vertex("s").unwrap();
    let mut prev = vec![s];
    for i in 1..=k {
        let layer = [
            b.add_vertex(&format!("u_{i}_0")).unwrap(),
            b.add_vertex(&format!("u_{i}_1")).unwrap(),
        ];
        for &h in &layer {
            feed(&mut b, &prev, h);
        }
        prev = layer.to_vec();
    }
    let t = b.add_vertex("t").unwrap();
    feed(&mut b, &prev, t);
    Family {
        graph: b.finish(),
        sources: vec![s],
        targets: vec![t],
    }
}

fn feed(b: &mut HypergraphBuilder, prev: &[Vertex], head: Vertex) {
    for &p in prev {
        b.add_arc([p], [head]).unwrap();
    }
    if prev.len() > 1 {
        b.add_arc(prev.iter().copied(), [head]).unwrap();
    }
}

/// A seeded random B-hypergraph on `k + 2` vertices with `3k` arcs of tail
/// size one or two, from `v_0` to `v_{k+1}`.
pub fn random_b(k: usize, seed: u64) -> Family {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = k + 2;
    let mut b = HypergraphBuilder::new();
    let vs: Vec<Vertex> = (0..n).map(|i| b.add_vertex(&format!("v_{i}")).unwrap()).collect();
    for _ in 0..3 * k {
        let head = vs[rng.gen_range(1..n)];
        let others: Vec<Vertex> = vs.iter().copied().filter(|&v| v != head).collect();
        let size = rng.gen_range(1..=2usize).min(others.len());
        let tails: Vec<Vertex> = others.choose_multiple(&mut rng, size).copied().collect();
        b.add_arc(tails, [head]).unwrap();
    }
    Family {
        graph: b.finish(),
        sources: vec![vs[0]],
        targets: vec![vs[n - 1]],
    }
}

/// Shape limits for [`random_instance`].
#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    pub max_vertices: usize,
    pub max_arcs: usize,
    pub max_tail: usize,
    pub max_sources: usize,
    pub max_targets: usize,
}

/// A seeded random B-hypergraph instance within `shape`.
///
/// Vertex count is drawn from `2..=max_vertices`, arc count from
/// `0..=max_arcs`. Sources and targets are nonempty and may overlap.
pub fn random_instance(shape: RandomShape, rng: &mut impl Rng) -> Family {
    let n = rng.gen_range(2..=shape.max_vertices.max(2));
    let m = rng.gen_range(0..=shape.max_arcs);
    let mut b = HypergraphBuilder::new();
    let vs: Vec<Vertex> = (0..n).map(|i| b.add_vertex(&format!("v{i}")).unwrap()).collect();
    for _ in 0..m {
        let head = vs[rng.gen_range(0..n)];
        let others: Vec<Vertex> = vs.iter().copied().filter(|&v| v != head).collect();
        let size = rng.gen_range(1..=shape.max_tail.max(1)).min(others.len());
        let tails: Vec<Vertex> = others.choose_multiple(rng, size).copied().collect();
        b.add_arc(tails, [head]).unwrap();
    }
    let pick = |rng: &mut _, max: usize| {
        let k = rng_range(rng, 1, max.max(1).min(n));
        let mut out: Vec<Vertex> = vs.choose_multiple(rng, k).copied().collect();
        out.sort_unstable();
        out
    };
    let sources = pick(rng, shape.max_sources);
    let targets = pick(rng, shape.max_targets);
    Family {
        graph: b.finish(),
        sources,
        targets,
    }
}

fn rng_range(rng: &mut impl Rng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}

/// Every B-arc on `n` vertices as `(tail indices, head index)`, in a fixed
/// order: by head, then by tail bitmask.
pub fn all_b_arcs(n: usize) -> Vec<(Vec<usize>, usize)> {
    assert!(n < 16, "vertex count too large for exhaustive arcs");
    let mut out = Vec::new();
    for h in 0..n {
        for mask in 1u32..(1 << n) {
            if mask >> h & 1 == 0 {
                let tails = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                out.push((tails, h));
            }
        }
    }
    out
}

/// Every B-hypergraph on vertices `v0..v{n-1}` with at most `max_arcs` arcs,
/// up to arc order: arc lists are nondecreasing sequences over
/// [`all_b_arcs`], so parallel arcs are included.
pub fn b_hypergraph_grid(n: usize, max_arcs: usize) -> impl Iterator<Item = DirectedHypergraph> {
    let catalogue = all_b_arcs(n);
    let mut lists: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_arcs {
        let mut next = Vec::new();
        for list in &frontier {
            let start = list.last().copied().unwrap_or(0);
            for a in start..catalogue.len() {
                let mut l = list.clone();
                l.push(a);
                next.push(l);
            }
        }
        lists.extend(next.iter().cloned());
        frontier = next;
    }
    lists.into_iter().map(move |list| {
        let mut b = HypergraphBuilder::new();
        let vs: Vec<Vertex> = (0..n).map(|i| b.add_vertex(&format!("v{i}")).unwrap()).collect();
        for &a in &list {
            let (tails, head) = &catalogue[a];
            b.add_arc(tails.iter().map(|&t| vs[t]), [vs[*head]]).unwrap();
        }
        b.finish()
    })
}
