//! In-memory model of directed hypergraphs.
//!
//! Vertices are named by [`VertexId`] tokens and addressed by dense
//! [`Vertex`] indices. Hyperarcs are addressed by their position in the arc
//! list ([`ArcId`]), so parallel arcs with identical tails and heads stay
//! distinguishable.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Position of a hyperarc in its owning hypergraph, `0..m`.
pub type ArcId = usize;

/// Dense index of a vertex inside one [`DirectedHypergraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(u32);

impl Vertex {
    pub fn new(index: usize) -> Self {
        Vertex(u32::try_from(index).expect("vertex index exceeds u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A vertex name: a nonempty token without whitespace.
///
/// Tokens may not contain `->`, `#`, `,` or `:` because those characters are
/// structural in the text formats and on the command line.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(token: impl Into<String>) -> Result<Self, HypergraphError> {
        let token = token.into();
        if Self::is_valid(&token) {
            Ok(VertexId(token))
        } else {
            Err(HypergraphError::InvalidVertexName(token))
        }
    }

    pub fn is_valid(token: &str) -> bool {
        !token.is_empty()
            && !token.contains("->")
            && !token
                .chars()
                .any(|c| c.is_whitespace() || matches!(c, '#' | ',' | ':'))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for VertexId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for VertexId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Which side of a hyperarc an error refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Tails,
    Heads,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Tails => "tails",
            Side::Heads => "heads",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("invalid vertex name {0:?}")]
    InvalidVertexName(String),
    #[error("vertex {0} declared twice")]
    DuplicateVertex(String),
    #[error("arc {index}: unknown vertex {name}")]
    UnknownVertex { index: usize, name: String },
    #[error("unknown vertex {0}")]
    UnknownVertexName(String),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("arc {index}: empty {side}")]
    EmptySide { index: usize, side: Side },
    #[error("arc {index}: vertex {name} is both a tail and a head")]
    DisjointnessViolation { index: usize, name: String },
    #[error("unknown arc id {0}")]
    UnknownArcId(ArcId),
}

/// A directed hyperarc `(tails, heads)`; both sides are sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperarc {
    tails: Vec<Vertex>,
    heads: Vec<Vertex>,
}

impl Hyperarc {
    /// Builds an arc without validation; callers uphold the invariants.
    pub(crate) fn from_sorted(tails: Vec<Vertex>, heads: Vec<Vertex>) -> Self {
        debug_assert!(tails.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(heads.windows(2).all(|w| w[0] < w[1]));
        Hyperarc { tails, heads }
    }

    pub fn tails(&self) -> &[Vertex] {
        &self.tails
    }

    pub fn heads(&self) -> &[Vertex] {
        &self.heads
    }

    /// The single head of a B-hyperarc.
    pub fn head(&self) -> Option<Vertex> {
        match self.heads.as_slice() {
            [h] => Some(*h),
            _ => None,
        }
    }

    /// `|T(A)| + |H(A)|`.
    pub fn weight(&self) -> usize {
        self.tails.len() + self.heads.len()
    }

    pub fn is_b_arc(&self) -> bool {
        self.heads.len() == 1
    }

    pub fn is_f_arc(&self) -> bool {
        self.tails.len() == 1
    }
}

/// The most specific class a hypergraph belongs to.
///
/// Ordered from most to least restrictive: every B-hypergraph is a
/// BF-hypergraph and every BF-hypergraph is general.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HypergraphClass {
    B,
    BF,
    General,
}

impl fmt::Display for HypergraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HypergraphClass::B => "B",
            HypergraphClass::BF => "BF",
            HypergraphClass::General => "general",
        })
    }
}

/// A directed hypergraph `(V, A)`.
///
/// Immutable once built. The vertex-to-outgoing-arcs index used by forward
/// chaining is computed eagerly at construction.
#[derive(Clone)]
pub struct DirectedHypergraph {
    names: Vec<VertexId>,
    lookup: HashMap<VertexId, Vertex>,
    arcs: Vec<Hyperarc>,
    tail_index: Vec<Vec<ArcId>>,
}

impl PartialEq for DirectedHypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.arcs == other.arcs
    }
}

impl Eq for DirectedHypergraph {}

impl fmt::Debug for DirectedHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arcs: Vec<String> = self.arcs.iter().map(|a| self.describe_arc(a)).collect();
        f.debug_struct("DirectedHypergraph")
            .field("vertices", &self.names)
            .field("arcs", &arcs)
            .finish()
    }
}

impl DirectedHypergraph {
    /// Builds a hypergraph from named vertices and `(tails, heads)` specs.
    ///
    /// Arc ids follow input order. Errors name the offending arc index.
    pub fn build<V, T, H, S>(
        vertices: impl IntoIterator<Item = V>,
        arc_specs: impl IntoIterator<Item = (T, H)>,
    ) -> Result<Self, HypergraphError>
    where
        V: AsRef<str>,
        T: IntoIterator<Item = S>,
        H: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut builder = HypergraphBuilder::new();
        for v in vertices {
            builder.add_vertex(v.as_ref())?;
        }
        for (index, (tails, heads)) in arc_specs.into_iter().enumerate() {
            let resolve = |names: Vec<S>, b: &HypergraphBuilder| {
                names
                    .iter()
                    .map(|n| {
                        b.vertex(n.as_ref()).ok_or_else(|| HypergraphError::UnknownVertex {
                            index,
                            name: n.as_ref().to_owned(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            };
            let tails = resolve(tails.into_iter().collect(), &builder)?;
            let heads = resolve(heads.into_iter().collect(), &builder)?;
            builder.add_arc(tails, heads)?;
        }
        Ok(builder.finish())
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    /// `||A|| = Σ (|H(A)| + |T(A)|)`.
    pub fn size(&self) -> usize {
        self.arcs.iter().map(Hyperarc::weight).sum()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = Vertex> + '_ {
        (0..self.names.len()).map(Vertex::new)
    }

    pub fn vertex_names(&self) -> &[VertexId] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<Vertex> {
        self.lookup.get(name).copied()
    }

    pub fn name(&self, v: Vertex) -> &VertexId {
        &self.names[v.index()]
    }

    /// Resolves a list of vertex names.
    pub fn resolve<S: AsRef<str>>(
        &self,
        names: impl IntoIterator<Item = S>,
    ) -> Result<Vec<Vertex>, HypergraphError> {
        names
            .into_iter()
            .map(|n| {
                self.vertex(n.as_ref())
                    .ok_or_else(|| HypergraphError::UnknownVertexName(n.as_ref().to_owned()))
            })
            .collect()
    }

    pub fn names_of<'a>(&'a self, vs: &'a [Vertex]) -> impl Iterator<Item = &'a str> + 'a {
        vs.iter().map(move |v| self.name(*v).as_str())
    }

    pub fn arcs(&self) -> &[Hyperarc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> Option<&Hyperarc> {
        self.arcs.get(id)
    }

    /// Arcs having `v` among their tails, in ascending id order.
    pub fn arcs_with_tail(&self, v: Vertex) -> &[ArcId] {
        &self.tail_index[v.index()]
    }

    pub(crate) fn tail_index(&self) -> &[Vec<ArcId>] {
        &self.tail_index
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), HypergraphError> {
        if v.index() < self.names.len() {
            Ok(())
        } else {
            Err(HypergraphError::VertexOutOfRange(v.index()))
        }
    }

    pub fn classify(&self) -> HypergraphClass {
        if self.arcs.iter().all(Hyperarc::is_b_arc) {
            HypergraphClass::B
        } else if self.arcs.iter().all(|a| a.is_b_arc() || a.is_f_arc()) {
            HypergraphClass::BF
        } else {
            HypergraphClass::General
        }
    }

    pub fn is_b_hypergraph(&self) -> bool {
        self.classify() == HypergraphClass::B
    }

    /// Edge-induced subhypergraph `D[B]`: the selected arcs and exactly the
    /// vertices they touch.
    pub fn edge_induced_sub(&self, arc_ids: &[ArcId]) -> Result<Subhypergraph, HypergraphError> {
        let mut selected = vec![false; self.arcs.len()];
        for &id in arc_ids {
            *selected
                .get_mut(id)
                .ok_or(HypergraphError::UnknownArcId(id))? = true;
        }
        let mut keep = vec![false; self.names.len()];
        for (id, arc) in self.arcs.iter().enumerate() {
            if selected[id] {
                for v in arc.tails.iter().chain(&arc.heads) {
                    keep[v.index()] = true;
                }
            }
        }
        Ok(self.restrict(&keep, |id| selected[id]))
    }

    /// Vertex-induced subhypergraph `D[U]`: all arcs with both sides inside `U`.
    pub fn vertex_induced_sub(&self, vertices: &[Vertex]) -> Result<Subhypergraph, HypergraphError> {
        let mut keep = vec![false; self.names.len()];
        for &v in vertices {
            self.check_vertex(v)?;
            keep[v.index()] = true;
        }
        let inside = |arc: &Hyperarc| arc.tails.iter().chain(&arc.heads).all(|v| keep[v.index()]);
        Ok(self.restrict(&keep, |id| inside(&self.arcs[id])))
    }

    fn restrict(&self, keep: &[bool], arc_kept: impl Fn(ArcId) -> bool) -> Subhypergraph {
        let mut new_index = vec![None; self.names.len()];
        let mut vertex_map = Vec::new();
        for (i, _) in keep.iter().enumerate().filter(|(_, k)| **k) {
            new_index[i] = Some(Vertex::new(vertex_map.len()));
            vertex_map.push(Vertex::new(i));
        }
        let remap = |vs: &[Vertex]| -> Vec<Vertex> {
            vs.iter()
                .map(|v| new_index[v.index()].expect("arc endpoint outside kept vertices"))
                .collect()
        };
        let mut builder = HypergraphBuilder::new();
        for &v in &vertex_map {
            builder.push_vertex_unchecked(self.names[v.index()].clone());
        }
        let mut arc_map = Vec::new();
        for (id, arc) in self.arcs.iter().enumerate() {
            if arc_kept(id) {
                builder.push_arc_unchecked(Hyperarc::from_sorted(remap(&arc.tails), remap(&arc.heads)));
                arc_map.push(id);
            }
        }
        Subhypergraph {
            graph: builder.finish(),
            arc_map,
            vertex_map,
        }
    }

    pub(crate) fn describe_arc(&self, arc: &Hyperarc) -> String {
        let side = |vs: &[Vertex]| {
            vs.iter()
                .map(|v| self.names[v.index()].as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("{} -> {}", side(&arc.tails), side(&arc.heads))
    }
}

/// A re-indexed subhypergraph plus the maps back to its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subhypergraph {
    pub graph: DirectedHypergraph,
    /// `arc_map[child_id]` is the parent arc id.
    pub arc_map: Vec<ArcId>,
    /// `vertex_map[child.index()]` is the parent vertex.
    pub vertex_map: Vec<Vertex>,
}

/// Incremental construction of a [`DirectedHypergraph`].
#[derive(Default)]
pub struct HypergraphBuilder {
    names: Vec<VertexId>,
    lookup: HashMap<VertexId, Vertex>,
    arcs: Vec<Hyperarc>,
}

impl HypergraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<Vertex, HypergraphError> {
        let id = VertexId::new(name)?;
        if self.lookup.contains_key(&id) {
            return Err(HypergraphError::DuplicateVertex(name.to_owned()));
        }
        Ok(self.push_vertex_unchecked(id))
    }

    /// Returns the existing vertex or declares a new one.
    pub fn vertex_or_add(&mut self, name: &str) -> Result<Vertex, HypergraphError> {
        match self.vertex(name) {
            Some(v) => Ok(v),
            None => self.add_vertex(name),
        }
    }

    pub fn vertex(&self, name: &str) -> Option<Vertex> {
        self.lookup.get(name).copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    fn push_vertex_unchecked(&mut self, id: VertexId) -> Vertex {
        let v = Vertex::new(self.names.len());
        self.lookup.insert(id.clone(), v);
        self.names.push(id);
        v
    }

    fn push_arc_unchecked(&mut self, arc: Hyperarc) -> ArcId {
        self.arcs.push(arc);
        self.arcs.len() - 1
    }

    /// Adds an arc; duplicate vertices within one side collapse.
    pub fn add_arc(
        &mut self,
        tails: impl IntoIterator<Item = Vertex>,
        heads: impl IntoIterator<Item = Vertex>,
    ) -> Result<ArcId, HypergraphError> {
        let index = self.arcs.len();
        let mut tails: Vec<Vertex> = tails.into_iter().collect();
        let mut heads: Vec<Vertex> = heads.into_iter().collect();
        for v in tails.iter().chain(&heads) {
            if v.index() >= self.names.len() {
                return Err(HypergraphError::VertexOutOfRange(v.index()));
            }
        }
        tails.sort_unstable();
        tails.dedup();
        heads.sort_unstable();
        heads.dedup();
        if tails.is_empty() {
            return Err(HypergraphError::EmptySide { index, side: Side::Tails });
        }
        if heads.is_empty() {
            return Err(HypergraphError::EmptySide { index, side: Side::Heads });
        }
        if let Some(v) = tails.iter().find(|v| heads.binary_search(v).is_ok()) {
            return Err(HypergraphError::DisjointnessViolation {
                index,
                name: self.names[v.index()].to_string(),
            });
        }
        Ok(self.push_arc_unchecked(Hyperarc { tails, heads }))
    }

    /// Adds an arc by vertex names, all of which must already be declared.
    pub fn add_arc_by_name<S: AsRef<str>>(
        &mut self,
        tails: impl IntoIterator<Item = S>,
        heads: impl IntoIterator<Item = S>,
    ) -> Result<ArcId, HypergraphError> {
        let index = self.arcs.len();
        let resolve = |b: &Self, n: S| {
            b.vertex(n.as_ref()).ok_or_else(|| HypergraphError::UnknownVertex {
                index,
                name: n.as_ref().to_owned(),
            })
        };
        let tails = tails.into_iter().map(|n| resolve(self, n)).collect::<Result<Vec<_>, _>>()?;
        let heads = heads.into_iter().map(|n| resolve(self, n)).collect::<Result<Vec<_>, _>>()?;
        self.add_arc(tails, heads)
    }

    pub fn finish(self) -> DirectedHypergraph {
        let tail_index = build_tail_index(self.names.len(), &self.arcs);
        DirectedHypergraph {
            names: self.names,
            lookup: self.lookup,
            arcs: self.arcs,
            tail_index,
        }
    }
}

pub(crate) fn build_tail_index(num_vertices: usize, arcs: &[Hyperarc]) -> Vec<Vec<ArcId>> {
    let mut index = vec![Vec::new(); num_vertices];
    for (id, arc) in arcs.iter().enumerate() {
        for v in &arc.tails {
            index[v.index()].push(id);
        }
    }
    index
}
