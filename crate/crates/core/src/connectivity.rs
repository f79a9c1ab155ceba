//! B-connectivity by forward chaining, minimal S-T hyperpath extraction, the
//! layered witness ordering, and the three-condition hyperpath check.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::hypergraph::{ArcId, DirectedHypergraph, HypergraphError, Hyperarc, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectivityError {
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("operation requires a B-hypergraph")]
    NotBHypergraph,
    #[error("source set is empty")]
    EmptySources,
    #[error("targets are not B-connected from the sources")]
    NotConnected,
    #[error("arcs {0:?} cannot be placed in any layer")]
    NotLayerable(Vec<ArcId>),
}

/// A hypergraph together with source and target vertex sets.
#[derive(Clone, Debug)]
pub struct HyperpathInstance<'g> {
    graph: &'g DirectedHypergraph,
    sources: Vec<Vertex>,
    targets: Vec<Vertex>,
}

impl<'g> HyperpathInstance<'g> {
    pub fn new(
        graph: &'g DirectedHypergraph,
        sources: &[Vertex],
        targets: &[Vertex],
    ) -> Result<Self, ConnectivityError> {
        for &v in sources.iter().chain(targets) {
            graph.check_vertex(v)?;
        }
        if sources.is_empty() {
            return Err(ConnectivityError::EmptySources);
        }
        Ok(HyperpathInstance {
            graph,
            sources: sorted_set(sources),
            targets: sorted_set(targets),
        })
    }

    /// Two-terminal instance `S = {s}`, `T = {t}`.
    pub fn two_terminal(
        graph: &'g DirectedHypergraph,
        s: Vertex,
        t: Vertex,
    ) -> Result<Self, ConnectivityError> {
        Self::new(graph, &[s], &[t])
    }

    /// Builds an instance from vertex names.
    pub fn by_name<S: AsRef<str>>(
        graph: &'g DirectedHypergraph,
        sources: impl IntoIterator<Item = S>,
        targets: impl IntoIterator<Item = S>,
    ) -> Result<Self, ConnectivityError> {
        let sources = graph.resolve(sources)?;
        let targets = graph.resolve(targets)?;
        Self::new(graph, &sources, &targets)
    }

    pub fn graph(&self) -> &'g DirectedHypergraph {
        self.graph
    }

    pub fn sources(&self) -> &[Vertex] {
        &self.sources
    }

    pub fn targets(&self) -> &[Vertex] {
        &self.targets
    }

    /// `T ∖ S`.
    pub fn open_targets(&self) -> Vec<Vertex> {
        self.targets
            .iter()
            .copied()
            .filter(|t| self.sources.binary_search(t).is_err())
            .collect()
    }
}

pub(crate) fn sorted_set<T: Ord + Copy>(items: &[T]) -> Vec<T> {
    let mut v = items.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// An S-T hyperpath: its arcs (ascending) and a witness ordering in which
/// every arc's tails are supplied by the sources or by earlier heads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperpath {
    pub arcs: Vec<ArcId>,
    pub ordering: Vec<ArcId>,
}

/// Reusable scratch space for forward chaining over an arc slice.
///
/// One run costs `O(|V| + ||A||)`: each arc keeps a counter of tails not yet
/// reached and fires when it drops to zero.
#[derive(Default)]
pub(crate) struct Chainer {
    missing: Vec<u32>,
    reached: Vec<bool>,
    queue: VecDeque<Vertex>,
}

impl Chainer {
    pub(crate) fn run(
        &mut self,
        num_vertices: usize,
        arcs: &[Hyperarc],
        tail_index: &[Vec<ArcId>],
        sources: &[Vertex],
        alive: impl Fn(ArcId) -> bool,
    ) -> &[bool] {
        self.reached.clear();
        self.reached.resize(num_vertices, false);
        self.missing.clear();
        self.missing.extend(arcs.iter().map(|a| a.tails().len() as u32));
        self.queue.clear();
        for &s in sources {
            if !self.reached[s.index()] {
                self.reached[s.index()] = true;
                self.queue.push_back(s);
            }
        }
        while let Some(v) = self.queue.pop_front() {
            for &id in &tail_index[v.index()] {
                if !alive(id) {
                    continue;
                }
                self.missing[id] -= 1;
                if self.missing[id] == 0 {
                    for &h in arcs[id].heads() {
                        if !self.reached[h.index()] {
                            self.reached[h.index()] = true;
                            self.queue.push_back(h);
                        }
                    }
                }
            }
        }
        &self.reached
    }
}

/// The set of vertices B-connected from `sources`: the least superset of
/// `sources` closed under firing arcs whose tails are all inside it.
///
/// Works for arbitrary directed hypergraphs. Returned in ascending order.
pub fn b_connected_set(
    graph: &DirectedHypergraph,
    sources: &[Vertex],
) -> Result<Vec<Vertex>, ConnectivityError> {
    for &v in sources {
        graph.check_vertex(v)?;
    }
    let mut chainer = Chainer::default();
    let reached = chainer.run(
        graph.num_vertices(),
        graph.arcs(),
        graph.tail_index(),
        sources,
        |_| true,
    );
    Ok(reached
        .iter()
        .enumerate()
        .filter(|(_, r)| **r)
        .map(|(i, _)| Vertex::new(i))
        .collect())
}

/// Whether every target is B-connected from `sources`.
pub fn is_b_connected(
    graph: &DirectedHypergraph,
    sources: &[Vertex],
    targets: &[Vertex],
) -> Result<bool, ConnectivityError> {
    for &v in targets {
        graph.check_vertex(v)?;
    }
    let reached = b_connected_set(graph, sources)?;
    Ok(targets.iter().all(|t| reached.binary_search(t).is_ok()))
}

/// Layer partition of `arc_ids`, concatenated.
///
/// Layer 1 holds the arcs whose tails lie in `sources`; each further layer
/// holds the remaining arcs whose tails are covered by the sources plus the
/// heads of all earlier layers. Ties inside a layer are broken by ascending
/// arc id.
pub fn layered_order(
    graph: &DirectedHypergraph,
    sources: &[Vertex],
    arc_ids: &[ArcId],
) -> Result<Vec<ArcId>, ConnectivityError> {
    for &v in sources {
        graph.check_vertex(v)?;
    }
    for &id in arc_ids {
        if id >= graph.num_arcs() {
            return Err(HypergraphError::UnknownArcId(id).into());
        }
    }
    layers_of(graph.num_vertices(), graph.arcs(), sources, &sorted_set(arc_ids))
        .map_err(ConnectivityError::NotLayerable)
}

/// Layering over a sorted, deduplicated arc subset. On failure returns the
/// arcs that never became placeable.
pub(crate) fn layers_of(
    num_vertices: usize,
    arcs: &[Hyperarc],
    sources: &[Vertex],
    subset: &[ArcId],
) -> Result<Vec<ArcId>, Vec<ArcId>> {
    let mut local_index: Vec<Vec<usize>> = vec![Vec::new(); num_vertices];
    let mut missing: Vec<usize> = Vec::with_capacity(subset.len());
    for (pos, &id) in subset.iter().enumerate() {
        missing.push(arcs[id].tails().len());
        for t in arcs[id].tails() {
            local_index[t.index()].push(pos);
        }
    }
    let mut reached = vec![false; num_vertices];
    let mut placed = vec![false; subset.len()];
    let mut order = Vec::with_capacity(subset.len());

    let mut frontier: Vec<Vertex> = Vec::new();
    for &s in sources {
        if !reached[s.index()] {
            reached[s.index()] = true;
            frontier.push(s);
        }
    }
    loop {
        // Arcs completed by the current frontier form the next layer.
        let mut layer = Vec::new();
        for v in frontier.drain(..) {
            for &pos in &local_index[v.index()] {
                missing[pos] -= 1;
                if missing[pos] == 0 {
                    layer.push(pos);
                }
            }
        }
        if layer.is_empty() {
            break;
        }
        layer.sort_unstable();
        for pos in layer {
            placed[pos] = true;
            order.push(subset[pos]);
            for &h in arcs[subset[pos]].heads() {
                if !reached[h.index()] {
                    reached[h.index()] = true;
                    frontier.push(h);
                }
            }
        }
    }
    if order.len() == subset.len() {
        Ok(order)
    } else {
        Err(subset
            .iter()
            .zip(&placed)
            .filter(|(_, p)| !**p)
            .map(|(id, _)| *id)
            .collect())
    }
}

/// Finds an inclusion-minimal arc set B-connecting `targets` from `sources`.
///
/// Starts from the arcs that fire in the full fixpoint, then tries to delete
/// arcs in descending index order, keeping each deletion that preserves
/// connectivity. `targets` must already exclude the sources. Returns the kept
/// arcs (ascending) or `None` when the targets are unreachable. Every
/// forward-chaining run increments `checks`.
pub(crate) fn minimal_arc_set(
    num_vertices: usize,
    arcs: &[Hyperarc],
    tail_index: &[Vec<ArcId>],
    sources: &[Vertex],
    targets: &[Vertex],
    chainer: &mut Chainer,
    checks: &mut u64,
) -> Option<Vec<ArcId>> {
    *checks += 1;
    let reached = chainer.run(num_vertices, arcs, tail_index, sources, |_| true);
    if !targets.iter().all(|t| reached[t.index()]) {
        return None;
    }
    let mut alive: Vec<bool> = arcs
        .iter()
        .map(|a| a.tails().iter().all(|t| reached[t.index()]))
        .collect();
    for id in (0..arcs.len()).rev() {
        if !alive[id] {
            continue;
        }
        alive[id] = false;
        *checks += 1;
        let reached = chainer.run(num_vertices, arcs, tail_index, sources, |a| alive[a]);
        if !targets.iter().all(|t| reached[t.index()]) {
            alive[id] = true;
        }
    }
    Some((0..arcs.len()).filter(|&id| alive[id]).collect())
}

/// Finds one S-T hyperpath of a B-hypergraph, deterministically.
///
/// Targets that are also sources are dropped first. The returned ordering
/// ends with an arc whose head is a target.
pub fn find_minimal_hyperpath(inst: &HyperpathInstance<'_>) -> Result<Hyperpath, ConnectivityError> {
    let graph = inst.graph();
    if !graph.is_b_hypergraph() {
        return Err(ConnectivityError::NotBHypergraph);
    }
    let targets = inst.open_targets();
    let mut chainer = Chainer::default();
    let mut checks = 0;
    let arcs = minimal_arc_set(
        graph.num_vertices(),
        graph.arcs(),
        graph.tail_index(),
        inst.sources(),
        &targets,
        &mut chainer,
        &mut checks,
    )
    .ok_or(ConnectivityError::NotConnected)?;
    let ordering = layers_of(graph.num_vertices(), graph.arcs(), inst.sources(), &arcs)
        .expect("a minimal connecting arc set is always layerable");
    if let Some(&last) = ordering.last() {
        let head = graph.arcs()[last].head().expect("B-arc");
        assert!(
            targets.binary_search(&head).is_ok(),
            "last arc of a minimal hyperpath must enter a target"
        );
    }
    Ok(Hyperpath { arcs, ordering })
}

/// Why an arc set fails to be an S-T hyperpath.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HyperpathDefect {
    NotBHypergraph,
    UnknownArc(ArcId),
    /// A target outside the sources is the head of no selected arc.
    TargetUnreached(Vertex),
    /// No ordering feeds every arc's tails.
    NotLayerable(Vec<ArcId>),
    /// An arc enters a source vertex.
    HeadInSources { arc: ArcId, vertex: Vertex },
    /// Several arcs share a head.
    SharedHead { vertex: Vertex, arcs: Vec<ArcId> },
    /// A non-terminal vertex is used as no arc's tail.
    DanglingVertex(Vertex),
}

impl HyperpathDefect {
    /// Human-readable message using the vertex names of `graph`.
    pub fn describe(&self, graph: &DirectedHypergraph) -> String {
        self.render(|v| graph.name(v).to_string())
    }

    fn render(&self, name: impl Fn(Vertex) -> String) -> String {
        match self {
            HyperpathDefect::NotBHypergraph => "hypergraph is not a B-hypergraph".into(),
            HyperpathDefect::UnknownArc(id) => format!("unknown arc {id}"),
            HyperpathDefect::TargetUnreached(v) => format!("target {} is not reached", name(*v)),
            HyperpathDefect::NotLayerable(ids) => {
                format!("no layered ordering: arcs {ids:?} are never enabled")
            }
            HyperpathDefect::HeadInSources { arc, vertex } => {
                format!("arc {arc} enters source {}", name(*vertex))
            }
            HyperpathDefect::SharedHead { vertex, arcs } => {
                format!("vertex {} is the head of arcs {arcs:?}", name(*vertex))
            }
            HyperpathDefect::DanglingVertex(v) => {
                format!("vertex {} is neither a terminal nor used as a tail", name(*v))
            }
        }
    }
}

impl fmt::Display for HyperpathDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|v| v.to_string()))
    }
}

/// Checks the hyperpath characterization for B-hypergraphs and reports the
/// first violated condition.
///
/// The conditions are: the targets are all reached, the arcs admit a layered
/// ordering, every head vertex is entered by exactly one arc and no arc enters
/// a source, and every non-terminal vertex feeds some arc.
pub fn diagnose_hyperpath(
    inst: &HyperpathInstance<'_>,
    arc_ids: &[ArcId],
) -> Result<(), HyperpathDefect> {
    let graph = inst.graph();
    if !graph.is_b_hypergraph() {
        return Err(HyperpathDefect::NotBHypergraph);
    }
    if let Some(&id) = arc_ids.iter().find(|&&id| id >= graph.num_arcs()) {
        return Err(HyperpathDefect::UnknownArc(id));
    }
    let subset = sorted_set(arc_ids);
    let sources = inst.sources();
    let is_source = |v: Vertex| sources.binary_search(&v).is_ok();
    let is_target = |v: Vertex| inst.targets().binary_search(&v).is_ok();

    let mut entering: Vec<Vec<ArcId>> = vec![Vec::new(); graph.num_vertices()];
    let mut feeds = vec![false; graph.num_vertices()];
    let mut touched = vec![false; graph.num_vertices()];
    for &id in &subset {
        let arc = &graph.arcs()[id];
        let h = arc.head().expect("B-arc");
        entering[h.index()].push(id);
        touched[h.index()] = true;
        for t in arc.tails() {
            feeds[t.index()] = true;
            touched[t.index()] = true;
        }
    }

    for t in inst.open_targets() {
        if entering[t.index()].is_empty() {
            return Err(HyperpathDefect::TargetUnreached(t));
        }
    }
    layers_of(graph.num_vertices(), graph.arcs(), sources, &subset)
        .map_err(HyperpathDefect::NotLayerable)?;
    for v in graph.vertices() {
        let arcs = &entering[v.index()];
        if is_source(v) {
            if let Some(&arc) = arcs.first() {
                return Err(HyperpathDefect::HeadInSources { arc, vertex: v });
            }
        } else if arcs.len() > 1 {
            return Err(HyperpathDefect::SharedHead { vertex: v, arcs: arcs.clone() });
        }
    }
    for v in graph.vertices() {
        if touched[v.index()] && !feeds[v.index()] && !is_source(v) && !is_target(v) {
            return Err(HyperpathDefect::DanglingVertex(v));
        }
    }
    Ok(())
}

/// `true` iff `arc_ids` is an S-T hyperpath of the (B-hypergraph) instance.
pub fn verify_hyperpath(inst: &HyperpathInstance<'_>, arc_ids: &[ArcId]) -> bool {
    diagnose_hyperpath(inst, arc_ids).is_ok()
}
