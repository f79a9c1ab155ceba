//! Polynomial-delay enumeration of S-T hyperpaths in B-hypergraphs.
//!
//! Each recursion node finds one hyperpath, takes the last arc `A_k = (T_k,
//! h_k)` of its layered ordering, and splits the solutions into those without
//! `A_k` (recurse with the arc deleted) and those with it. The second family is
//! in bijection with the hyperpaths of a contracted instance: arcs entering
//! `h_k` are dropped, `h_k` is replaced by `T_k` in every tail, and the targets
//! become `(T ∪ T_k) ∖ (S ∪ {h_k})`.
//!
//! Each node costs at most `m + 1` forward-chaining runs and the recursion is
//! at most `m` deep, so the gap between two outputs is `O(m²)` runs of
//! `O(||A||)` each.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::connectivity::{layers_of, minimal_arc_set, sorted_set, Chainer, HyperpathInstance};
use crate::hypergraph::{
    build_tail_index, ArcId, DirectedHypergraph, HypergraphBuilder, HypergraphError, Hyperarc, Vertex,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("enumeration requires a B-hypergraph")]
    NotBHypergraph,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("arc {0} enters a source and belongs to no hyperpath")]
    HeadInSources(ArcId),
}

/// Counters collected during one enumeration run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub solutions_emitted: u64,
    pub recursion_nodes: u64,
    pub max_depth: usize,
    /// Forward-chaining runs over the whole run.
    pub connectivity_checks: u64,
    /// Largest number of forward-chaining runs before the first output,
    /// between two outputs, or after the last one.
    pub max_checks_between_outputs: u64,
    /// Largest total `||A||` of the instances alive on the recursion stack.
    pub peak_live_size: usize,
}

/// One solution handed to the sink.
#[derive(Clone, Copy, Debug)]
pub struct Emission<'a> {
    /// Root arc ids, ascending.
    pub arcs: &'a [ArcId],
    /// 0-based position in the output stream.
    pub index: u64,
    /// Forward-chaining runs since the previous emission (or the start).
    pub checks_since_last: u64,
    /// Recursion depth of the emitting leaf.
    pub depth: usize,
}

/// Enumerates every S-T hyperpath of a B-hypergraph.
///
/// The sink sees each hyperpath exactly once, in a deterministic order. It
/// may return [`ControlFlow::Break`] to stop the run; no further calls follow.
pub fn enumerate_hyperpaths<F>(
    inst: &HyperpathInstance<'_>,
    sink: F,
) -> Result<EnumerationStats, EnumerationError>
where
    F: FnMut(Emission<'_>) -> ControlFlow<()>,
{
    let graph = inst.graph();
    if !graph.is_b_hypergraph() {
        return Err(EnumerationError::NotBHypergraph);
    }
    let n = graph.num_vertices();
    let mut is_source = vec![false; n];
    for s in inst.sources() {
        is_source[s.index()] = true;
    }
    // Arcs entering a source never belong to a hyperpath.
    let (arcs, roots): (Vec<Hyperarc>, Vec<ArcId>) = graph
        .arcs()
        .iter()
        .enumerate()
        .filter(|(_, a)| !is_source[a.heads()[0].index()])
        .map(|(id, a)| (a.clone(), id))
        .unzip();
    let mut run = Run {
        num_vertices: n,
        sources: inst.sources().to_vec(),
        is_source,
        sink,
        chainer: Chainer::default(),
        partial: Vec::new(),
        stats: EnumerationStats::default(),
        checks_since_last: 0,
        live_size: 0,
        stopped: false,
    };
    run.visit(
        Node {
            arcs,
            roots,
            targets: inst.targets().to_vec(),
        },
        0,
    );
    let trailing = run.checks_since_last;
    let stats = &mut run.stats;
    if !run.stopped {
        stats.max_checks_between_outputs = stats.max_checks_between_outputs.max(trailing);
    }
    Ok(run.stats)
}

/// Two-terminal convenience wrapper, `S = {s}` and `T = {t}`.
pub fn enumerate_two_terminal<F>(
    graph: &DirectedHypergraph,
    s: Vertex,
    t: Vertex,
    sink: F,
) -> Result<EnumerationStats, EnumerationError>
where
    F: FnMut(Emission<'_>) -> ControlFlow<()>,
{
    let inst = HyperpathInstance::two_terminal(graph, s, t).map_err(|e| match e {
        crate::connectivity::ConnectivityError::Hypergraph(h) => EnumerationError::Hypergraph(h),
        other => unreachable!("two-terminal instance cannot fail with {other}"),
    })?;
    enumerate_hyperpaths(&inst, sink)
}

/// Collects every hyperpath into a vector.
pub fn all_hyperpaths(inst: &HyperpathInstance<'_>) -> Result<Vec<Vec<ArcId>>, EnumerationError> {
    let mut out = Vec::new();
    enumerate_hyperpaths(inst, |e| {
        out.push(e.arcs.to_vec());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

struct Node {
    arcs: Vec<Hyperarc>,
    /// Root arc id of each arc in `arcs`.
    roots: Vec<ArcId>,
    targets: Vec<Vertex>,
}

impl Node {
    fn weight(&self) -> usize {
        self.arcs.iter().map(Hyperarc::weight).sum()
    }
}

struct Run<F> {
    num_vertices: usize,
    sources: Vec<Vertex>,
    is_source: Vec<bool>,
    sink: F,
    chainer: Chainer,
    partial: Vec<ArcId>,
    stats: EnumerationStats,
    checks_since_last: u64,
    live_size: usize,
    stopped: bool,
}

impl<F> Run<F>
where
    F: FnMut(Emission<'_>) -> ControlFlow<()>,
{
    fn visit(&mut self, mut node: Node, depth: usize) {
        self.stats.recursion_nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let weight = node.weight();
        self.live_size += weight;
        self.stats.peak_live_size = self.stats.peak_live_size.max(self.live_size);
        self.expand(&mut node, depth);
        self.live_size -= weight;
    }

    fn expand(&mut self, node: &mut Node, depth: usize) {
        node.targets.retain(|t| !self.is_source[t.index()]);
        if node.targets.is_empty() {
            self.emit(depth);
            return;
        }
        let tail_index = build_tail_index(self.num_vertices, &node.arcs);
        let mut checks = 0;
        let found = minimal_arc_set(
            self.num_vertices,
            &node.arcs,
            &tail_index,
            &self.sources,
            &node.targets,
            &mut self.chainer,
            &mut checks,
        );
        self.stats.connectivity_checks += checks;
        self.checks_since_last += checks;
        let Some(path) = found else {
            return;
        };
        let ordering = layers_of(self.num_vertices, &node.arcs, &self.sources, &path)
            .expect("minimal arc sets are layerable");
        let k = *ordering.last().expect("nonempty targets need at least one arc");

        let mut without = Node {
            arcs: Vec::with_capacity(node.arcs.len() - 1),
            roots: Vec::with_capacity(node.arcs.len() - 1),
            targets: node.targets.clone(),
        };
        for (i, (arc, &root)) in node.arcs.iter().zip(&node.roots).enumerate() {
            if i != k {
                without.arcs.push(arc.clone());
                without.roots.push(root);
            }
        }
        self.visit(without, depth + 1);
        if self.stopped {
            return;
        }

        let with = contract_node(node, k, &self.is_source);
        self.partial.push(node.roots[k]);
        self.visit(with, depth + 1);
        self.partial.pop();
    }

    fn emit(&mut self, depth: usize) {
        if self.stopped {
            return;
        }
        let mut arcs = self.partial.clone();
        arcs.sort_unstable();
        let emission = Emission {
            arcs: &arcs,
            index: self.stats.solutions_emitted,
            checks_since_last: self.checks_since_last,
            depth,
        };
        self.stats.max_checks_between_outputs =
            self.stats.max_checks_between_outputs.max(self.checks_since_last);
        self.stats.solutions_emitted += 1;
        self.checks_since_last = 0;
        if (self.sink)(emission).is_break() {
            self.stopped = true;
        }
    }
}

/// Include-branch instance for arc `k` of `node`.
fn contract_node(node: &Node, k: usize, is_source: &[bool]) -> Node {
    let chosen = &node.arcs[k];
    let hk = chosen.heads()[0];
    let tk = chosen.tails();
    let mut arcs = Vec::with_capacity(node.arcs.len());
    let mut roots = Vec::with_capacity(node.arcs.len());
    for (arc, &root) in node.arcs.iter().zip(&node.roots) {
        let head = arc.heads()[0];
        if head == hk {
            continue;
        }
        if arc.tails().binary_search(&hk).is_ok() {
            let mut tails: Vec<Vertex> = arc
                .tails()
                .iter()
                .copied()
                .filter(|&v| v != hk)
                .chain(tk.iter().copied())
                .collect();
            tails.sort_unstable();
            tails.dedup();
            // An arc whose head now feeds itself can never fire first.
            if tails.binary_search(&head).is_ok() {
                continue;
            }
            arcs.push(Hyperarc::from_sorted(tails, vec![head]));
        } else {
            arcs.push(arc.clone());
        }
        roots.push(root);
    }
    let mut targets: Vec<Vertex> = node
        .targets
        .iter()
        .chain(tk)
        .copied()
        .filter(|&v| v != hk && !is_source[v.index()])
        .collect();
    targets.sort_unstable();
    targets.dedup();
    Node { arcs, roots, targets }
}

/// The include-branch instance of one enumeration step, as a standalone
/// hypergraph over `V ∖ {h_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionResult {
    pub graph: DirectedHypergraph,
    /// Sources re-indexed into `graph`.
    pub sources: Vec<Vertex>,
    /// `(T ∪ T_k) ∖ (S ∪ {h_k})`, re-indexed into `graph`.
    pub targets: Vec<Vertex>,
    /// `provenance[child_arc]` is the arc id in the input hypergraph.
    pub provenance: Vec<ArcId>,
}

impl ContractionResult {
    /// Resolves child arc ids through a parent's own provenance map.
    pub fn compose(&self, parent_provenance: &[ArcId]) -> Vec<ArcId> {
        self.provenance.iter().map(|&id| parent_provenance[id]).collect()
    }

    /// Maps a child arc set back to input arc ids, sorted.
    pub fn lift(&self, child_arcs: &[ArcId]) -> Vec<ArcId> {
        let mut out: Vec<ArcId> = child_arcs.iter().map(|&id| self.provenance[id]).collect();
        out.sort_unstable();
        out
    }
}

/// Contracts arc `a_k` of a B-hypergraph instance.
pub fn contract(
    graph: &DirectedHypergraph,
    sources: &[Vertex],
    targets: &[Vertex],
    a_k: ArcId,
) -> Result<ContractionResult, EnumerationError> {
    if !graph.is_b_hypergraph() {
        return Err(EnumerationError::NotBHypergraph);
    }
    for &v in sources.iter().chain(targets) {
        graph.check_vertex(v)?;
    }
    let chosen = graph.arc(a_k).ok_or(HypergraphError::UnknownArcId(a_k))?;
    let hk = chosen.heads()[0];
    let mut is_source = vec![false; graph.num_vertices()];
    for s in sources {
        is_source[s.index()] = true;
    }
    if is_source[hk.index()] {
        return Err(EnumerationError::HeadInSources(a_k));
    }
    let node = Node {
        arcs: graph.arcs().to_vec(),
        roots: (0..graph.num_arcs()).collect(),
        targets: sorted_set(targets),
    };
    let child = contract_node(&node, a_k, &is_source);

    let mut builder = HypergraphBuilder::new();
    let mut remap = vec![None; graph.num_vertices()];
    for v in graph.vertices().filter(|&v| v != hk) {
        remap[v.index()] = Some(
            builder
                .add_vertex(graph.name(v).as_str())
                .expect("names are unique in the parent"),
        );
    }
    let map = |vs: &[Vertex]| -> Vec<Vertex> {
        vs.iter()
            .map(|v| remap[v.index()].expect("h_k was removed from every arc"))
            .collect()
    };
    for arc in &child.arcs {
        builder
            .add_arc(map(arc.tails()), map(arc.heads()))
            .expect("contraction keeps arcs well formed");
    }
    Ok(ContractionResult {
        graph: builder.finish(),
        sources: sorted_set(&map(&sorted_set(sources))),
        targets: map(&child.targets),
        provenance: child.roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(vertices: &[&str], arcs: &[(&[&str], &[&str])]) -> DirectedHypergraph {
        DirectedHypergraph::build(
            vertices.iter().copied(),
            arcs.iter().map(|(t, h)| (t.to_vec(), h.to_vec())),
        )
        .unwrap()
    }

    fn and_gadget(extra: bool) -> DirectedHypergraph {
        let mut arcs: Vec<(&[&str], &[&str])> =
            vec![(&["s"], &["a"]), (&["s"], &["b"]), (&["a", "b"], &["t"])];
        if extra {
            arcs.push((&["a"], &["t"]));
        }
        build(&["s", "a", "b", "t"], &arcs)
    }

    fn names(g: &DirectedHypergraph, vs: &[Vertex]) -> Vec<String> {
        g.names_of(vs).map(str::to_owned).collect()
    }

    #[test]
    fn unique_hyperpath() {
        let g = and_gadget(false);
        let inst = HyperpathInstance::by_name(&g, ["s"], ["t"]).unwrap();
        assert_eq!(all_hyperpaths(&inst).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn two_hyperpaths_in_fixed_order() {
        let g = and_gadget(true);
        let inst = HyperpathInstance::by_name(&g, ["s"], ["t"]).unwrap();
        let found = all_hyperpaths(&inst).unwrap();
        // A_k = arc 2 on the root path; the exclude branch runs first.
        assert_eq!(found, vec![vec![0, 3], vec![0, 1, 2]]);
    }

    #[test]
    fn targets_covered_by_sources() {
        let g = and_gadget(false);
        let inst = HyperpathInstance::by_name(&g, ["s", "t"], ["t", "s"]).unwrap();
        assert_eq!(all_hyperpaths(&inst).unwrap(), vec![Vec::<ArcId>::new()]);
        let inst = HyperpathInstance::by_name(&g, ["s"], Vec::<&str>::new()).unwrap();
        assert_eq!(all_hyperpaths(&inst).unwrap(), vec![Vec::<ArcId>::new()]);
    }

    #[test]
    fn digraph_paths() {
        let g = build(&["s", "a", "t"], &[(&["s"], &["a"]), (&["a"], &["t"])]);
        let [s, t] = [g.vertex("s").unwrap(), g.vertex("t").unwrap()];
        let mut seen = Vec::new();
        enumerate_two_terminal(&g, s, t, |e| {
            seen.push(e.arcs.to_vec());
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(seen, vec![vec![0, 1]]);

        let parallel = build(&["s", "t"], &[(&["s"], &["t"]), (&["s"], &["t"])]);
        let inst = HyperpathInstance::by_name(&parallel, ["s"], ["t"]).unwrap();
        let mut found = all_hyperpaths(&inst).unwrap();
        found.sort();
        assert_eq!(found, vec![vec![0], vec![1]]);
    }

    #[test]
    fn disconnected_emits_nothing() {
        let g = build(&["s", "a", "b", "t"], &[(&["a", "b"], &["t"])]);
        let inst = HyperpathInstance::by_name(&g, ["s"], ["t"]).unwrap();
        let stats = enumerate_hyperpaths(&inst, |_| ControlFlow::Continue(())).unwrap();
        assert_eq!(stats.solutions_emitted, 0);
        assert_eq!(stats.recursion_nodes, 1);
    }

    #[test]
    fn rejects_non_b() {
        let g = build(&["s", "a", "b"], &[(&["s"], &["a", "b"])]);
        let inst = HyperpathInstance::by_name(&g, ["s"], ["a"]).unwrap();
        assert_eq!(all_hyperpaths(&inst), Err(EnumerationError::NotBHypergraph));
    }

    #[test]
    fn cancellation_stops_the_stream() {
        let g = crate::families::diamond_chain(4);
        let inst = g.instance();
        let mut calls = 0;
        let stats = enumerate_hyperpaths(&inst, |_| {
            calls += 1;
            if calls == 3 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .unwrap();
        assert_eq!(calls, 3);
        assert_eq!(stats.solutions_emitted, 3);
    }

    #[test]
    fn emission_metadata() {
        let g = crate::families::diamond_chain(3);
        let inst = g.instance();
        let mut indices = Vec::new();
        let mut total = 0;
        let stats = enumerate_hyperpaths(&inst, |e| {
            indices.push(e.index);
            total += e.checks_since_last;
            assert!(e.depth <= 12);
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(indices, (0..8).collect::<Vec<_>>());
        assert!(total <= stats.connectivity_checks);
        assert!(stats.max_depth <= 12);
    }

    #[test]
    fn contraction_of_and_gadget() {
        let g = and_gadget(false);
        let [s, t] = [g.vertex("s").unwrap(), g.vertex("t").unwrap()];
        let c = contract(&g, &[s], &[t], 2).unwrap();
        assert_eq!(names(&c.graph, &c.graph.vertices().collect::<Vec<_>>()), ["s", "a", "b"]);
        assert_eq!(c.provenance, [0, 1]);
        assert_eq!(names(&c.graph, &c.targets), ["a", "b"]);
        assert_eq!(names(&c.graph, &c.sources), ["s"]);
    }

    #[test]
    fn contraction_of_chain() {
        let g = build(&["s", "a", "t"], &[(&["s"], &["a"]), (&["a"], &["t"])]);
        let [s, t] = [g.vertex("s").unwrap(), g.vertex("t").unwrap()];
        let c = contract(&g, &[s], &[t], 1).unwrap();
        assert_eq!(c.provenance, [0]);
        assert_eq!(c.graph.describe_arc(&c.graph.arcs()[0]), "s -> a");
        assert_eq!(names(&c.graph, &c.targets), ["a"]);
    }

    #[test]
    fn contraction_drops_self_feeding_arcs() {
        let g = build(
            &["s", "a", "b"],
            &[(&["s"], &["a"]), (&["a"], &["b"]), (&["b"], &["a"])],
        );
        let [s, b] = [g.vertex("s").unwrap(), g.vertex("b").unwrap()];
        let c = contract(&g, &[s], &[b], 1).unwrap();
        assert_eq!(c.provenance, [0]);
        assert_eq!(names(&c.graph, &c.targets), ["a"]);
        // Same count as the include family of the parent: one hyperpath {0, 1}.
        let child = HyperpathInstance::new(&c.graph, &c.sources, &c.targets).unwrap();
        assert_eq!(all_hyperpaths(&child).unwrap().len(), 1);
    }

    #[test]
    fn contraction_keeps_parallel_rewrites() {
        // Both arcs into t go through h = a; after contraction they collide.
        let g = build(
            &["s", "a", "b", "t"],
            &[(&["s"], &["a"]), (&["a", "b"], &["t"]), (&["a", "b"], &["t"]), (&["s"], &["b"])],
        );
        let [s, a] = [g.vertex("s").unwrap(), g.vertex("a").unwrap()];
        let c = contract(&g, &[s], &[a], 0).unwrap();
        assert_eq!(c.provenance, [1, 2, 3]);
        assert_eq!(c.graph.arcs()[0], c.graph.arcs()[1]);
    }

    #[test]
    fn contraction_rejects_arcs_into_sources() {
        let g = build(&["s", "a"], &[(&["a"], &["s"]), (&["s"], &["a"])]);
        let [s, a] = [g.vertex("s").unwrap(), g.vertex("a").unwrap()];
        assert_eq!(contract(&g, &[s], &[a], 0), Err(EnumerationError::HeadInSources(0)));
        assert!(contract(&g, &[s], &[a], 5).is_err());
    }
}
