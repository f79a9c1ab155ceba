//! Exhaustive reference enumerators for hyperpaths, induced hyperpaths,
//! minimal separators and minimal transversals.
//!
//! All four defining predicates are monotone in the candidate set, so a
//! candidate is inclusion-minimal exactly when removing any single element
//! breaks the predicate. Results are sorted by size, then lexicographically.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::connectivity::{Chainer, HyperpathInstance};
use crate::hypergraph::{ArcId, DirectedHypergraph, HypergraphError, Vertex, VertexId};

/// Default element cap (about a million subsets).
pub const DEFAULT_CAP: usize = 20;

/// Subsets are encoded in `u64` masks.
const MASK_BITS: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} has {size} elements, above the cap of {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("hyperedge {0} is empty")]
    EmptyEdge(usize),
    #[error("operation requires a B-hypergraph")]
    NotBHypergraph,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<(), OracleError> {
    let cap = cap.min(MASK_BITS);
    if size > cap {
        Err(OracleError::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}

pub(crate) fn canonical<T: Ord>(mut family: Vec<Vec<T>>) -> Vec<Vec<T>> {
    for set in &mut family {
        set.sort();
    }
    family.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    family.dedup();
    family
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// Every S-T hyperpath, by scanning all `2^m` arc subsets.
///
/// Works for general hypergraphs. `cap` bounds the number of arcs.
pub fn oracle_hyperpaths(
    inst: &HyperpathInstance<'_>,
    cap: usize,
) -> Result<Vec<Vec<ArcId>>, OracleError> {
    let graph = inst.graph();
    let m = graph.num_arcs();
    check_cap("arc set", m, cap)?;
    let targets = inst.targets();
    let mut chainer = Chainer::default();
    let mut connects = |mask: u64| {
        let reached = chainer.run(
            graph.num_vertices(),
            graph.arcs(),
            graph.tail_index(),
            inst.sources(),
            |a| mask >> a & 1 == 1,
        );
        targets.iter().all(|t| reached[t.index()])
    };
    let mut found = Vec::new();
    for mask in 0u64..(1u64 << m) {
        if connects(mask) && bits(mask).all(|a| !connects(mask & !(1 << a))) {
            found.push(bits(mask).collect());
        }
    }
    Ok(canonical(found))
}

/// Arcs as vertex bitmasks, for the vertex-subset oracles.
struct MaskArcs {
    tails: Vec<u64>,
    heads: Vec<u64>,
}

impl MaskArcs {
    fn new(graph: &DirectedHypergraph) -> Self {
        let mask = |vs: &[Vertex]| vs.iter().fold(0u64, |m, v| m | 1 << v.index());
        MaskArcs {
            tails: graph.arcs().iter().map(|a| mask(a.tails())).collect(),
            heads: graph.arcs().iter().map(|a| mask(a.heads())).collect(),
        }
    }

    /// Closure of `start` in the subhypergraph induced by `allowed`.
    fn closure(&self, allowed: u64, start: u64) -> u64 {
        let mut reached = start & allowed;
        loop {
            let before = reached;
            for (&t, &h) in self.tails.iter().zip(&self.heads) {
                if (t | h) & !allowed == 0 && t & !reached == 0 {
                    reached |= h;
                }
            }
            if reached == before {
                return reached;
            }
        }
    }

    fn connects(&self, allowed: u64, s: Vertex, t: Vertex) -> bool {
        self.closure(allowed, 1 << s.index()) >> t.index() & 1 == 1
    }
}

fn vertex_mask_setup(
    graph: &DirectedHypergraph,
    s: Vertex,
    t: Vertex,
    cap: usize,
) -> Result<(MaskArcs, Vec<Vertex>), OracleError> {
    graph.check_vertex(s)?;
    graph.check_vertex(t)?;
    check_cap("vertex set", graph.num_vertices(), cap)?;
    let free = graph.vertices().filter(|&v| v != s && v != t).collect();
    Ok((MaskArcs::new(graph), free))
}

fn spread(free: &[Vertex], pick: u64) -> u64 {
    bits(pick).fold(0, |m, i| m | 1 << free[i].index())
}

fn to_vertices(mask: u64) -> Vec<Vertex> {
    bits(mask).map(Vertex::new).collect()
}

/// Every inclusion-minimal vertex set `U ⊇ {s, t}` such that `t` is
/// B-connected from `s` in `D[U]`.
pub fn oracle_induced_hyperpaths(
    graph: &DirectedHypergraph,
    s: Vertex,
    t: Vertex,
    cap: usize,
) -> Result<Vec<Vec<Vertex>>, OracleError> {
    let (arcs, free) = vertex_mask_setup(graph, s, t, cap)?;
    if s == t {
        return Ok(vec![vec![s]]);
    }
    let base = 1u64 << s.index() | 1 << t.index();
    let mut found = Vec::new();
    for pick in 0u64..(1u64 << free.len()) {
        let u = base | spread(&free, pick);
        if arcs.connects(u, s, t)
            && bits(pick).all(|i| !arcs.connects(u & !(1 << free[i].index()), s, t))
        {
            found.push(to_vertices(u));
        }
    }
    Ok(canonical(found))
}

/// Every inclusion-minimal `X ⊆ V ∖ {s, t}` whose removal leaves `t`
/// unreachable from `s`, by scanning all subsets.
pub fn oracle_minimal_separators(
    graph: &DirectedHypergraph,
    s: Vertex,
    t: Vertex,
    cap: usize,
) -> Result<Vec<Vec<Vertex>>, OracleError> {
    let (arcs, free) = vertex_mask_setup(graph, s, t, cap)?;
    if s == t {
        return Ok(Vec::new());
    }
    let all = graph.vertices().fold(0u64, |m, v| m | 1 << v.index());
    let separates = |x: u64| !arcs.connects(all & !x, s, t);
    let mut found = Vec::new();
    for pick in 0u64..(1u64 << free.len()) {
        let x = spread(&free, pick);
        if separates(x) && bits(pick).all(|i| !separates(x & !(1 << free[i].index()))) {
            found.push(to_vertices(x));
        }
    }
    Ok(canonical(found))
}

/// Minimal s-t separators by branching on which boundary vertices to cut.
///
/// B-hypergraphs only. Exact like [`oracle_minimal_separators`] but reaches
/// larger instances (up to 63 vertices). A minimal separator `X` is exactly the set of vertices
/// entered by some arc from the region `C` still reachable after removing
/// `X`. The search grows `C` from `{s}`: each vertex enabled by `C` is either
/// cut or admitted. Branches are abandoned when `t` becomes enabled or when a
/// cut vertex turns redundant, and a branch is recorded as soon as its cut set
/// separates.
pub fn minimal_separators_by_search(
    graph: &DirectedHypergraph,
    s: Vertex,
    t: Vertex,
) -> Result<Vec<Vec<Vertex>>, OracleError> {
    if !graph.is_b_hypergraph() {
        return Err(OracleError::NotBHypergraph);
    }
    let (arcs, _) = vertex_mask_setup(graph, s, t, MASK_BITS)?;
    if s == t {
        return Ok(Vec::new());
    }
    let search = SeparatorSearch {
        arcs,
        all: graph.vertices().fold(0u64, |m, v| m | 1 << v.index()),
        s,
        t,
    };
    let mut found = BTreeSet::new();
    search.explore(1 << s.index(), 0, &mut found);
    Ok(canonical(found.into_iter().map(to_vertices).collect()))
}

struct SeparatorSearch {
    arcs: MaskArcs,
    all: u64,
    s: Vertex,
    t: Vertex,
}

impl SeparatorSearch {
    fn separates(&self, cut: u64) -> bool {
        !self.arcs.connects(self.all & !cut, self.s, self.t)
    }

    fn enabled(&self, region: u64) -> u64 {
        self.arcs
            .tails
            .iter()
            .zip(&self.arcs.heads)
            .filter(|(&tl, _)| tl & !region == 0)
            .fold(0, |m, (_, &h)| m | h)
    }

    fn explore(&self, region: u64, cut: u64, found: &mut BTreeSet<u64>) {
        if self.separates(cut) {
            found.insert(cut);
            return;
        }
        let frontier = self.enabled(region) & !region & !cut;
        if frontier >> self.t.index() & 1 == 1 {
            return;
        }
        let v = frontier.trailing_zeros();
        debug_assert!(v < 64, "a non-separating cut always leaves a frontier");
        let bit = 1u64 << v;
        let with_cut = cut | bit;
        if bits(with_cut).all(|x| !self.separates(with_cut & !(1 << x))) {
            self.explore(region, with_cut, found);
        }
        self.explore(region | bit, cut, found);
    }
}

/// An undirected hypergraph `(V, E)` with named vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedHypergraph {
    names: Vec<VertexId>,
    edges: Vec<Vec<usize>>,
}

impl UndirectedHypergraph {
    /// Builds from an explicit vertex list and edges given by vertex names.
    pub fn new<V, E, S>(
        vertices: impl IntoIterator<Item = V>,
        edges: impl IntoIterator<Item = E>,
    ) -> Result<Self, OracleError>
    where
        V: AsRef<str>,
        E: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut names = Vec::new();
        let mut lookup = HashMap::new();
        for v in vertices {
            let id = VertexId::new(v.as_ref())?;
            if lookup.insert(id.clone(), names.len()).is_some() {
                return Err(HypergraphError::DuplicateVertex(v.as_ref().to_owned()).into());
            }
            names.push(id);
        }
        let mut out = Vec::new();
        for (i, edge) in edges.into_iter().enumerate() {
            let mut members = edge
                .into_iter()
                .map(|n| {
                    lookup
                        .get(n.as_ref())
                        .copied()
                        .ok_or_else(|| HypergraphError::UnknownVertexName(n.as_ref().to_owned()))
                })
                .collect::<Result<Vec<usize>, _>>()?;
            members.sort_unstable();
            members.dedup();
            if members.is_empty() {
                return Err(OracleError::EmptyEdge(i));
            }
            out.push(members);
        }
        Ok(UndirectedHypergraph { names, edges: out })
    }

    /// Builds from edges alone; vertices are ordered by first appearance.
    pub fn from_edges<E, S>(edges: impl IntoIterator<Item = E>) -> Result<Self, OracleError>
    where
        E: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let edges: Vec<Vec<String>> = edges
            .into_iter()
            .map(|e| e.into_iter().map(|s| s.as_ref().to_owned()).collect())
            .collect();
        let mut seen = BTreeSet::new();
        let mut vertices = Vec::new();
        for v in edges.iter().flatten() {
            if seen.insert(v.clone()) {
                vertices.push(v.clone());
            }
        }
        Self::new(vertices, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_names(&self) -> &[VertexId] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &VertexId {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n.as_str() == name)
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Indices of the edges containing `v` (`E_v`).
    pub fn edges_containing(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].binary_search(&v).is_ok())
            .collect()
    }

    pub fn is_transversal(&self, set: &[usize]) -> bool {
        self.edges.iter().all(|e| e.iter().any(|v| set.contains(v)))
    }
}

/// Every minimal transversal (hitting set) of `h`, as vertex indices.
///
/// With no edges the empty set is the only minimal transversal.
pub fn oracle_minimal_transversals(
    h: &UndirectedHypergraph,
    cap: usize,
) -> Result<Vec<Vec<usize>>, OracleError> {
    check_cap("vertex set", h.num_vertices(), cap)?;
    let edges: Vec<u64> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    let hits = |u: u64| edges.iter().all(|&e| e & u != 0);
    let mut found = Vec::new();
    for u in 0u64..(1u64 << h.num_vertices()) {
        if hits(u) && bits(u).all(|v| !hits(u & !(1 << v))) {
            found.push(bits(u).collect());
        }
    }
    Ok(canonical(found))
}
