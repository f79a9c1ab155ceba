//! Hardness constructions: 3-SAT to induced hyperpaths, 3-SAT to minimal
//! separators, and hypergraph transversals to BF-hyperpaths, together with
//! the maps translating solutions back.
//!
//! Vertex names: `s`, `t`, `x_i` and `nx_i` for the literals of variable `i`,
//! `c_j` per clause, `c` and `y_i` in the separator gadget, `d_i` for binary
//! tree internals, `e_j` for hyperedges.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::connectivity::Chainer;
use crate::hypergraph::{ArcId, DirectedHypergraph, HypergraphBuilder, HypergraphError, Vertex};
use crate::io::Metadata;
use crate::oracles::{canonical, UndirectedHypergraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("malformed formula: {0}")]
    MalformedCnf(String),
    #[error("{vars} variables exceed the exhaustive cap of {cap}")]
    CapExceeded { vars: usize, cap: usize },
    #[error("hyperedge {0} is empty")]
    EmptyEdge(usize),
    #[error("vertex {0} lies in no hyperedge")]
    IsolatedVertex(String),
    #[error("hypergraph has no hyperedges")]
    NoEdges,
    #[error("vertex index {0} is not in the hypergraph")]
    UnknownVertex(usize),
    #[error("arc set lacks the final arc")]
    MissingFinalArc,
    #[error("arc {0} is not a transversal arc")]
    ForeignArc(ArcId),
    #[error("vertex set is a seed hyperpath")]
    SeedPath,
    #[error("vertex set is not an induced s-t hyperpath")]
    NotInducedPath,
    #[error("vertex set is a seed separator")]
    SeedSeparator,
    #[error("vertex set is not a minimal s-t separator")]
    NotSeparator,
    #[error("extracted assignment falsifies clause {0}")]
    AssignmentFalsifies(usize),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// A signed variable, variables numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: usize,
    positive: bool,
}

impl Literal {
    pub fn new(var: usize, positive: bool) -> Self {
        assert!(var >= 1, "variables are numbered from 1");
        Literal { var, positive }
    }

    pub fn pos(var: usize) -> Self {
        Self::new(var, true)
    }

    pub fn neg(var: usize) -> Self {
        Self::new(var, false)
    }

    pub fn from_dimacs(value: i64) -> Option<Self> {
        let var = usize::try_from(value.unsigned_abs()).ok().filter(|&v| v > 0)?;
        Some(Literal { var, positive: value > 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> usize {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negated(self) -> Self {
        Literal { positive: !self.positive, ..self }
    }

    /// Value under `alpha`; unassigned variables read as 0.
    pub fn eval(self, alpha: &Assignment) -> bool {
        alpha.get(self.var).unwrap_or(false) == self.positive
    }

    /// Name of the literal's vertex in the SAT constructions.
    pub fn vertex_name(self) -> String {
        if self.positive {
            format!("x_{}", self.var)
        } else {
            format!("nx_{}", self.var)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A 3-CNF formula over variables `1..=n`. Literals may repeat in a clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, ReductionError> {
        if let Some(l) = clauses.iter().flatten().find(|l| l.var > num_vars) {
            return Err(ReductionError::MalformedCnf(format!(
                "literal {l} outside 1..={num_vars}"
            )));
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// Builds from DIMACS-style signed integers.
    pub fn from_dimacs(num_vars: usize, clauses: &[[i64; 3]]) -> Result<Self, ReductionError> {
        let clauses = clauses
            .iter()
            .map(|c| {
                let lit = |v: i64| {
                    Literal::from_dimacs(v)
                        .ok_or_else(|| ReductionError::MalformedCnf("literal 0".into()))
                };
                Ok([lit(c[0])?, lit(c[1])?, lit(c[2])?])
            })
            .collect::<Result<Vec<_>, ReductionError>>()?;
        Self::new(num_vars, clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// Index (0-based) of the first clause falsified by `alpha`.
    pub fn first_falsified(&self, alpha: &Assignment) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|l| l.eval(alpha)))
    }

    pub fn is_satisfied_by(&self, alpha: &Assignment) -> bool {
        self.first_falsified(alpha).is_none()
    }

    fn require_clauses(&self) -> Result<(), ReductionError> {
        if self.clauses.is_empty() {
            Err(ReductionError::MalformedCnf("at least one clause is required".into()))
        } else {
            Ok(())
        }
    }
}

/// A possibly partial truth assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<usize, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, var: usize, value: bool) {
        self.values.insert(var, value);
    }

    pub fn get(&self, var: usize) -> Option<bool> {
        self.values.get(&var).copied()
    }

    pub fn values(&self) -> &BTreeMap<usize, bool> {
        &self.values
    }

    /// Assignment of variables `1..=n` from the bits of `mask`.
    fn from_mask(n: usize, mask: u64) -> Self {
        Assignment {
            values: (1..=n).map(|v| (v, mask >> (v - 1) & 1 == 1)).collect(),
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(v, b)| format!("x_{v}={}", u8::from(*b)))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Largest variable count the exhaustive SAT scan accepts.
pub const SAT_CAP: usize = 20;

/// Exhaustive scan over all assignments; the first satisfying one in
/// counting order.
pub fn find_satisfying_assignment(
    formula: &CnfFormula,
    cap: usize,
) -> Result<Option<Assignment>, ReductionError> {
    let n = formula.num_vars;
    if n > cap.min(63) {
        return Err(ReductionError::CapExceeded { vars: n, cap: cap.min(63) });
    }
    Ok((0u64..1 << n)
        .map(|mask| Assignment::from_mask(n, mask))
        .find(|a| formula.is_satisfied_by(a)))
}

pub fn is_satisfiable(formula: &CnfFormula) -> Result<bool, ReductionError> {
    Ok(find_satisfying_assignment(formula, SAT_CAP)?.is_some())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadMode {
    /// Pad until the clause count is a power of two.
    Clauses,
    /// Pad until `n + m + 1` is a power of two.
    ClausesPlusVars,
}

/// Pads with one extra variable `z = n + 1` and clauses `(z ∨ z ∨ z)`.
///
/// Unchanged when the target count already is a power of two. The padding
/// clauses force `z = 1`, so satisfying assignments of the result are those
/// of the input extended by `z ↦ 1`. In [`PadMode::ClausesPlusVars`] adding
/// `z` alone can reach the target, in which case `z` stays unconstrained.
pub fn pad_to_power_of_two(formula: &CnfFormula, mode: PadMode) -> CnfFormula {
    let (n, m) = (formula.num_vars, formula.clauses.len());
    let already = match mode {
        PadMode::Clauses => m.is_power_of_two(),
        PadMode::ClausesPlusVars => (n + m + 1).is_power_of_two(),
    };
    if already {
        return formula.clone();
    }
    let z = n + 1;
    let target_m = match mode {
        PadMode::Clauses => m.next_power_of_two(),
        PadMode::ClausesPlusVars => (z + m + 1).next_power_of_two() - z - 1,
    };
    let mut clauses = formula.clauses.clone();
    clauses.resize(target_m, [Literal::pos(z); 3]);
    CnfFormula { num_vars: z, clauses }
}

/// A node of the 1-based heap that replaces a wide arc by a binary tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeSlot {
    /// `w_1`, the target `t`.
    Root,
    /// `d_i`.
    Internal(usize),
    /// `c_j` (1-based).
    Clause(usize),
    /// The clause collector `c` of the separator gadget.
    Collector,
    /// `y_i` (1-based).
    VarCheck(usize),
}

/// `w_i` of the induced-hyperpath tree with `m` leaves.
pub fn induced_tree_slot(i: usize, m: usize) -> TreeSlot {
    assert!((1..2 * m).contains(&i), "heap index {i} outside 1..{}", 2 * m);
    if i == 1 {
        TreeSlot::Root
    } else if i >= m {
        TreeSlot::Clause(i - m + 1)
    } else {
        TreeSlot::Internal(i)
    }
}

/// `w_i` of the separator tree with `n + m + 1` leaves.
pub fn separator_tree_slot(i: usize, n: usize, m: usize) -> TreeSlot {
    let k = n + m;
    assert!((1..=2 * k + 1).contains(&i), "heap index {i} outside 1..={}", 2 * k + 1);
    if i == 1 {
        TreeSlot::Root
    } else if i <= k {
        TreeSlot::Internal(i)
    } else if i == k + 1 {
        TreeSlot::Collector
    } else if i <= n + 2 * m + 1 {
        TreeSlot::Clause(i - k - 1)
    } else {
        TreeSlot::VarCheck(i - n - 2 * m - 1)
    }
}

/// Heap table `w_1..w_{len}` (index 0 unused).
fn tree_table(len: usize, slot: impl Fn(usize) -> TreeSlot) -> Vec<Option<TreeSlot>> {
    std::iter::once(None).chain((1..=len).map(|i| Some(slot(i)))).collect()
}

/// Adds `d_i` vertices and the arcs `({w_2i, w_2i+1}, {w_i})`, `1 <= i <= internal`.
fn add_tree(
    b: &mut HypergraphBuilder,
    table: &[Option<TreeSlot>],
    internal: usize,
    resolve: impl Fn(TreeSlot) -> Option<Vertex>,
) -> Result<Vec<Vertex>, ReductionError> {
    let mut aux = Vec::new();
    let mut w = vec![None; table.len()];
    for (i, slot) in table.iter().enumerate().skip(1) {
        let slot = slot.expect("heap slots start at 1");
        w[i] = Some(match slot {
            TreeSlot::Internal(d) => {
                let v = b.add_vertex(&format!("d_{d}"))?;
                aux.push(v);
                v
            }
            other => resolve(other).expect("leaf slots name existing vertices"),
        });
    }
    for i in 1..=internal {
        let (l, r, h) = (w[2 * i].unwrap(), w[2 * i + 1].unwrap(), w[i].unwrap());
        b.add_arc([l, r], [h])?;
    }
    Ok(aux)
}

fn sorted(mut vs: Vec<Vertex>) -> Vec<Vertex> {
    vs.sort_unstable();
    vs
}

fn names(graph: &DirectedHypergraph, vs: &[Vertex]) -> String {
    graph.names_of(vs).collect::<Vec<_>>().join(" ")
}

/// Whether `t` is B-connected from `s` inside `D[allowed]`.
fn connects_within(graph: &DirectedHypergraph, allowed: &[bool], s: Vertex, t: Vertex) -> bool {
    if !allowed[s.index()] || !allowed[t.index()] {
        return false;
    }
    let mut chainer = Chainer::default();
    let arcs = graph.arcs();
    let reached = chainer.run(graph.num_vertices(), arcs, graph.tail_index(), &[s], |a| {
        arcs[a]
            .tails()
            .iter()
            .chain(arcs[a].heads())
            .all(|v| allowed[v.index()])
    });
    reached[t.index()]
}

fn mask_of(graph: &DirectedHypergraph, vs: &[Vertex]) -> Vec<bool> {
    let mut m = vec![false; graph.num_vertices()];
    for v in vs {
        m[v.index()] = true;
    }
    m
}

/// Whether `set` is an induced s-t hyperpath of `graph`.
pub fn is_induced_hyperpath(graph: &DirectedHypergraph, s: Vertex, t: Vertex, set: &[Vertex]) -> bool {
    if set.iter().any(|v| graph.check_vertex(*v).is_err()) {
        return false;
    }
    let mut allowed = mask_of(graph, set);
    if !connects_within(graph, &allowed, s, t) {
        return false;
    }
    set.iter().filter(|&&v| v != s && v != t).all(|&v| {
        allowed[v.index()] = false;
        let still = connects_within(graph, &allowed, s, t);
        allowed[v.index()] = true;
        !still
    })
}

/// Whether `set` is a minimal s-t separator of `graph`.
pub fn is_minimal_separator(graph: &DirectedHypergraph, s: Vertex, t: Vertex, set: &[Vertex]) -> bool {
    if set.iter().any(|&v| v == s || v == t || graph.check_vertex(v).is_err()) {
        return false;
    }
    let mut allowed: Vec<bool> = mask_of(graph, set).into_iter().map(|x| !x).collect();
    if connects_within(graph, &allowed, s, t) {
        return false;
    }
    set.iter().all(|&v| {
        allowed[v.index()] = true;
        let joined = connects_within(graph, &allowed, s, t);
        allowed[v.index()] = false;
        joined
    })
}

/// Output of [`reduce_sat_induced`].
#[derive(Clone, Debug)]
pub struct SatInducedInstance {
    graph: DirectedHypergraph,
    s: Vertex,
    t: Vertex,
    formula: CnfFormula,
    original_vars: usize,
    bounded_tail: bool,
    seed_paths: Vec<Vec<Vertex>>,
    var_map: Vec<(Vertex, Vertex)>,
    clause_map: Vec<Vertex>,
}

/// Builds the induced-hyperpath instance `D_φ`.
///
/// Per variable: `({x_i, nx_i}, {t})`, `({s}, {x_i})`, `({s}, {nx_i})`. Per
/// clause `j` and literal: `({ℓ}, {c_j})`, repeated literals giving parallel
/// arcs. Finally `({c_1, ..., c_m}, {t})`, or with `bounded_tail` the binary
/// tree over `c_1..c_m` after padding the clause count to a power of two.
/// With a single clause the tree is empty and the final arc `({c_1}, {t})`
/// stays.
pub fn reduce_sat_induced(
    formula: &CnfFormula,
    bounded_tail: bool,
) -> Result<SatInducedInstance, ReductionError> {
    formula.require_clauses()?;
    let f = if bounded_tail {
        pad_to_power_of_two(formula, PadMode::Clauses)
    } else {
        formula.clone()
    };
    let (n, m) = (f.num_vars, f.clauses.len());
    let mut b = HypergraphBuilder::new();
    let s = b.add_vertex("s")?;
    let t = b.add_vertex("t")?;
    let mut var_map = Vec::with_capacity(n);
    for i in 1..=n {
        var_map.push((
            b.add_vertex(&Literal::pos(i).vertex_name())?,
            b.add_vertex(&Literal::neg(i).vertex_name())?,
        ));
    }
    let clause_map: Vec<Vertex> = (1..=m)
        .map(|j| b.add_vertex(&format!("c_{j}")))
        .collect::<Result<_, _>>()?;
    for &(x, nx) in &var_map {
        b.add_arc([x, nx], [t])?;
        b.add_arc([s], [x])?;
        b.add_arc([s], [nx])?;
    }
    let lit_vertex = |l: Literal| {
        let (x, nx) = var_map[l.var - 1];
        if l.positive {
            x
        } else {
            nx
        }
    };
    for (j, clause) in f.clauses.iter().enumerate() {
        for &l in clause {
            b.add_arc([lit_vertex(l)], [clause_map[j]])?;
        }
    }
    if bounded_tail && m > 1 {
        let table = tree_table(2 * m - 1, |i| induced_tree_slot(i, m));
        add_tree(&mut b, &table, m - 1, |slot| match slot {
            TreeSlot::Root => Some(t),
            TreeSlot::Clause(j) => Some(clause_map[j - 1]),
            _ => None,
        })?;
    } else {
        b.add_arc(clause_map.iter().copied(), [t])?;
    }
    let seed_paths = canonical(var_map.iter().map(|&(x, nx)| vec![s, t, x, nx]).collect());
    Ok(SatInducedInstance {
        graph: b.finish(),
        s,
        t,
        formula: f,
        original_vars: formula.num_vars,
        bounded_tail,
        seed_paths,
        var_map,
        clause_map,
    })
}

impl SatInducedInstance {
    pub fn graph(&self) -> &DirectedHypergraph {
        &self.graph
    }

    pub fn source(&self) -> Vertex {
        self.s
    }

    pub fn target(&self) -> Vertex {
        self.t
    }

    /// The encoded formula, after any padding.
    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    pub fn bounded_tail(&self) -> bool {
        self.bounded_tail
    }

    /// `{s, x_i, nx_i, t}` per variable, each sorted, in canonical order.
    pub fn seed_paths(&self) -> &[Vec<Vertex>] {
        &self.seed_paths
    }

    /// `(x_i, nx_i)` at position `i - 1`.
    pub fn var_map(&self) -> &[(Vertex, Vertex)] {
        &self.var_map
    }

    /// `c_j` at position `j - 1`.
    pub fn clause_map(&self) -> &[Vertex] {
        &self.clause_map
    }

    pub fn metadata(&self) -> Metadata {
        let g = &self.graph;
        let mut meta = Metadata::new();
        meta.push("kind", "sat-induced");
        meta.push("variant", if self.bounded_tail { "bounded-tail" } else { "base" });
        meta.push("source", g.name(self.s));
        meta.push("target", g.name(self.t));
        meta.push("num_vars", self.formula.num_vars);
        meta.push("num_clauses", self.formula.num_clauses());
        padding_entries(&mut meta, self.original_vars, &self.formula);
        for (i, &(x, nx)) in self.var_map.iter().enumerate() {
            meta.push("variable", format!("{} {} {}", i + 1, g.name(x), g.name(nx)));
        }
        for (j, &c) in self.clause_map.iter().enumerate() {
            meta.push("clause", format!("{} {}", j + 1, g.name(c)));
        }
        for p in &self.seed_paths {
            meta.push("seed_path", names(g, p));
        }
        meta
    }
}

fn padding_entries(meta: &mut Metadata, original_vars: usize, f: &CnfFormula) {
    if f.num_vars > original_vars {
        let z = Literal::pos(f.num_vars);
        let dummies = f.clauses.iter().filter(|c| c.iter().all(|&l| l == z)).count();
        meta.push("padding_variable", z.vertex_name());
        meta.push("padding_clauses", dummies);
        meta.push("padding_forces", format!("{}=1", z.vertex_name()));
    }
}

/// `α_P`: `x_i ↦ 1` iff `x_i ∈ P`, over the encoded variables.
///
/// `path` must be an induced s-t hyperpath outside the seed family.
pub fn assignment_from_induced_hyperpath(
    inst: &SatInducedInstance,
    path: &[Vertex],
) -> Result<Assignment, ReductionError> {
    let path = dedup_sorted(path);
    if inst.seed_paths.binary_search_by(|p| cmp_canonical(p, &path)).is_ok() {
        return Err(ReductionError::SeedPath);
    }
    if !is_induced_hyperpath(&inst.graph, inst.s, inst.t, &path) {
        return Err(ReductionError::NotInducedPath);
    }
    let alpha = assignment_by_membership(&inst.var_map, &path);
    check_assignment(&inst.formula, alpha)
}

fn dedup_sorted(vs: &[Vertex]) -> Vec<Vertex> {
    let mut v = sorted(vs.to_vec());
    v.dedup();
    v
}

fn cmp_canonical(a: &[Vertex], b: &[Vertex]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn assignment_by_membership(var_map: &[(Vertex, Vertex)], set: &[Vertex]) -> Assignment {
    let mut alpha = Assignment::new();
    for (i, &(x, _)) in var_map.iter().enumerate() {
        alpha.set(i + 1, set.binary_search(&x).is_ok());
    }
    alpha
}

fn check_assignment(f: &CnfFormula, alpha: Assignment) -> Result<Assignment, ReductionError> {
    match f.first_falsified(&alpha) {
        Some(j) => Err(ReductionError::AssignmentFalsifies(j + 1)),
        None => Ok(alpha),
    }
}

/// Output of [`reduce_sat_separator`].
#[derive(Clone, Debug)]
pub struct SatSeparatorInstance {
    graph: DirectedHypergraph,
    s: Vertex,
    t: Vertex,
    formula: CnfFormula,
    original_vars: usize,
    bounded_tail: bool,
    seed_separators: Vec<Vec<Vertex>>,
    var_map: Vec<(Vertex, Vertex)>,
    checks: Vec<Vertex>,
    collector: Vertex,
    clause_vertices: Vec<Vertex>,
    tree_vertices: Vec<Vertex>,
}

/// Builds the separator instance `D_φ`.
///
/// Per variable: `({x_i}, {y_i})`, `({nx_i}, {y_i})`, `({s}, {x_i})`,
/// `({s}, {nx_i})`. Per clause: `({ℓ_1, ℓ_2, ℓ_3}, {c})` over the literal
/// vertices themselves. Finally `({c, y_1, ..., y_n}, {t})`.
///
/// With `bounded_tail` the formula is padded until `n + m + 1` is a power of
/// two, each clause arc is split through a new `c_j` into
/// `({ℓ_1, ℓ_2}, {c_j})` and `({c_j, ℓ_3}, {c})`, and the final arc becomes a
/// binary tree over `c, c_1..c_m, y_1..y_n`. The seed family gains `{c_j}`
/// and `{d_i}`.
pub fn reduce_sat_separator(
    formula: &CnfFormula,
    bounded_tail: bool,
) -> Result<SatSeparatorInstance, ReductionError> {
    formula.require_clauses()?;
    let f = if bounded_tail {
        pad_to_power_of_two(formula, PadMode::ClausesPlusVars)
    } else {
        formula.clone()
    };
    let (n, m) = (f.num_vars, f.clauses.len());
    let mut b = HypergraphBuilder::new();
    let s = b.add_vertex("s")?;
    let t = b.add_vertex("t")?;
    let collector = b.add_vertex("c")?;
    let mut var_map = Vec::with_capacity(n);
    let mut checks = Vec::with_capacity(n);
    for i in 1..=n {
        var_map.push((
            b.add_vertex(&Literal::pos(i).vertex_name())?,
            b.add_vertex(&Literal::neg(i).vertex_name())?,
        ));
        checks.push(b.add_vertex(&format!("y_{i}"))?);
    }
    let clause_vertices: Vec<Vertex> = if bounded_tail {
        (1..=m)
            .map(|j| b.add_vertex(&format!("c_{j}")))
            .collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };
    for (&(x, nx), &y) in var_map.iter().zip(&checks) {
        b.add_arc([x], [y])?;
        b.add_arc([nx], [y])?;
        b.add_arc([s], [x])?;
        b.add_arc([s], [nx])?;
    }
    let lit_vertex = |l: Literal| {
        let (x, nx) = var_map[l.var - 1];
        if l.positive {
            x
        } else {
            nx
        }
    };
    for (j, clause) in f.clauses.iter().enumerate() {
        let [l1, l2, l3] = clause.map(lit_vertex);
        if bounded_tail {
            b.add_arc([l1, l2], [clause_vertices[j]])?;
            b.add_arc([clause_vertices[j], l3], [collector])?;
        } else {
            b.add_arc([l1, l2, l3], [collector])?;
        }
    }
    let mut tree_vertices = Vec::new();
    if bounded_tail {
        let k = n + m;
        let table = tree_table(2 * k + 1, |i| separator_tree_slot(i, n, m));
        tree_vertices = add_tree(&mut b, &table, k, |slot| match slot {
            TreeSlot::Root => Some(t),
            TreeSlot::Collector => Some(collector),
            TreeSlot::Clause(j) => Some(clause_vertices[j - 1]),
            TreeSlot::VarCheck(i) => Some(checks[i - 1]),
            TreeSlot::Internal(_) => None,
        })?;
    } else {
        b.add_arc(std::iter::once(collector).chain(checks.iter().copied()), [t])?;
    }
    let graph = b.finish();
    let mut seeds = vec![vec![collector]];
    seeds.extend(checks.iter().map(|&y| vec![y]));
    seeds.extend(var_map.iter().map(|&(x, nx)| vec![x, nx]));
    seeds.extend(clause_vertices.iter().map(|&c| vec![c]));
    seeds.extend(tree_vertices.iter().map(|&d| vec![d]));
    let seed_separators = canonical(seeds);
    assert!(
        seed_separators.len() <= graph.num_vertices(),
        "seed family larger than the vertex set"
    );
    Ok(SatSeparatorInstance {
        graph,
        s,
        t,
        formula: f,
        original_vars: formula.num_vars,
        bounded_tail,
        seed_separators,
        var_map,
        checks,
        collector,
        clause_vertices,
        tree_vertices,
    })
}

impl SatSeparatorInstance {
    pub fn graph(&self) -> &DirectedHypergraph {
        &self.graph
    }

    pub fn source(&self) -> Vertex {
        self.s
    }

    pub fn target(&self) -> Vertex {
        self.t
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    pub fn bounded_tail(&self) -> bool {
        self.bounded_tail
    }

    /// `X_φ` in canonical order, each member sorted.
    pub fn seed_separators(&self) -> &[Vec<Vertex>] {
        &self.seed_separators
    }

    pub fn var_map(&self) -> &[(Vertex, Vertex)] {
        &self.var_map
    }

    /// `y_i` at position `i - 1`.
    pub fn checks(&self) -> &[Vertex] {
        &self.checks
    }

    pub fn collector(&self) -> Vertex {
        self.collector
    }

    /// `c_j` of the bounded variant; empty for the base variant.
    pub fn clause_vertices(&self) -> &[Vertex] {
        &self.clause_vertices
    }

    /// `d_i` of the bounded variant; empty for the base variant.
    pub fn tree_vertices(&self) -> &[Vertex] {
        &self.tree_vertices
    }

    pub fn metadata(&self) -> Metadata {
        let g = &self.graph;
        let mut meta = Metadata::new();
        meta.push("kind", "sat-separator");
        meta.push("variant", if self.bounded_tail { "bounded-tail" } else { "base" });
        meta.push("source", g.name(self.s));
        meta.push("target", g.name(self.t));
        meta.push("num_vars", self.formula.num_vars);
        meta.push("num_clauses", self.formula.num_clauses());
        padding_entries(&mut meta, self.original_vars, &self.formula);
        for (i, (&(x, nx), &y)) in self.var_map.iter().zip(&self.checks).enumerate() {
            meta.push(
                "variable",
                format!("{} {} {} {}", i + 1, g.name(x), g.name(nx), g.name(y)),
            );
        }
        meta.push("collector", g.name(self.collector));
        for (j, &c) in self.clause_vertices.iter().enumerate() {
            meta.push("clause", format!("{} {}", j + 1, g.name(c)));
        }
        for x in &self.seed_separators {
            meta.push("seed_separator", names(g, x));
        }
        meta
    }
}

/// `α_X`: `x_i ↦ 1` iff `x_i ∈ X`, over the encoded variables.
///
/// `sep` must be a minimal s-t separator outside the seed family. Fails with
/// [`ReductionError::AssignmentFalsifies`] when the extracted assignment does
/// not satisfy the encoded formula.
pub fn assignment_from_separator(
    inst: &SatSeparatorInstance,
    sep: &[Vertex],
) -> Result<Assignment, ReductionError> {
    let sep = dedup_sorted(sep);
    if inst.seed_separators.binary_search_by(|x| cmp_canonical(x, &sep)).is_ok() {
        return Err(ReductionError::SeedSeparator);
    }
    if !is_minimal_separator(&inst.graph, inst.s, inst.t, &sep) {
        return Err(ReductionError::NotSeparator);
    }
    let alpha = assignment_by_membership(&inst.var_map, &sep);
    check_assignment(&inst.formula, alpha)
}

/// Output of [`reduce_transversal`]: the BF-hypergraph `D_H` and its arc maps.
#[derive(Clone, Debug)]
pub struct TransversalMapping {
    graph: DirectedHypergraph,
    s: Vertex,
    t: Vertex,
    hypergraph: UndirectedHypergraph,
    edge_vertices: Vec<Vertex>,
    vertex_arcs: Vec<ArcId>,
    final_arc: ArcId,
}

/// Builds `D_H` on `{s, t, e_1, ..., e_|E|}` with one arc `({s}, E_v)` per
/// vertex `v` of `H`, in vertex order, then the final arc `(E, {t})`.
///
/// Isolated vertices of `H` and edgeless `H` are rejected: either would need
/// an arc with an empty side.
pub fn reduce_transversal(h: &UndirectedHypergraph) -> Result<TransversalMapping, ReductionError> {
    if h.edges().is_empty() {
        return Err(ReductionError::NoEdges);
    }
    if let Some(e) = h.edges().iter().position(Vec::is_empty) {
        return Err(ReductionError::EmptyEdge(e));
    }
    let mut b = HypergraphBuilder::new();
    let s = b.add_vertex("s")?;
    let t = b.add_vertex("t")?;
    let edge_vertices: Vec<Vertex> = (1..=h.edges().len())
        .map(|j| b.add_vertex(&format!("e_{j}")))
        .collect::<Result<_, _>>()?;
    let mut vertex_arcs = Vec::with_capacity(h.num_vertices());
    for v in 0..h.num_vertices() {
        let ev = h.edges_containing(v);
        if ev.is_empty() {
            return Err(ReductionError::IsolatedVertex(h.name(v).to_string()));
        }
        vertex_arcs.push(b.add_arc([s], ev.iter().map(|&e| edge_vertices[e]))?);
    }
    let final_arc = b.add_arc(edge_vertices.iter().copied(), [t])?;
    Ok(TransversalMapping {
        graph: b.finish(),
        s,
        t,
        hypergraph: h.clone(),
        edge_vertices,
        vertex_arcs,
        final_arc,
    })
}

impl TransversalMapping {
    pub fn graph(&self) -> &DirectedHypergraph {
        &self.graph
    }

    pub fn source(&self) -> Vertex {
        self.s
    }

    pub fn target(&self) -> Vertex {
        self.t
    }

    pub fn hypergraph(&self) -> &UndirectedHypergraph {
        &self.hypergraph
    }

    /// `e_j` at position `j - 1`.
    pub fn edge_vertices(&self) -> &[Vertex] {
        &self.edge_vertices
    }

    /// Arc `({s}, E_v)` at position `v`.
    pub fn vertex_arcs(&self) -> &[ArcId] {
        &self.vertex_arcs
    }

    pub fn final_arc(&self) -> ArcId {
        self.final_arc
    }

    pub fn metadata(&self) -> Metadata {
        let g = &self.graph;
        let h = &self.hypergraph;
        let mut meta = Metadata::new();
        meta.push("kind", "transversal");
        meta.push("source", g.name(self.s));
        meta.push("target", g.name(self.t));
        for (j, edge) in h.edges().iter().enumerate() {
            let members: Vec<&str> = edge.iter().map(|&v| h.name(v).as_str()).collect();
            meta.push("edge", format!("{} {}", g.name(self.edge_vertices[j]), members.join(" ")));
        }
        for (v, &a) in self.vertex_arcs.iter().enumerate() {
            meta.push("vertex_arc", format!("{} {a}", h.name(v)));
        }
        meta.push("final_arc", self.final_arc);
        meta
    }
}

/// `f(T) = {({s}, E_v) | v ∈ T} ∪ {(E, {t})}`, ascending.
pub fn hyperpath_from_transversal(
    map: &TransversalMapping,
    transversal: &[usize],
) -> Result<Vec<ArcId>, ReductionError> {
    let mut arcs = transversal
        .iter()
        .map(|&v| map.vertex_arcs.get(v).copied().ok_or(ReductionError::UnknownVertex(v)))
        .collect::<Result<Vec<_>, _>>()?;
    arcs.push(map.final_arc);
    arcs.sort_unstable();
    arcs.dedup();
    Ok(arcs)
}

/// Inverse of [`hyperpath_from_transversal`], ascending vertex indices.
pub fn transversal_from_hyperpath(
    map: &TransversalMapping,
    arcs: &[ArcId],
) -> Result<Vec<usize>, ReductionError> {
    if !arcs.contains(&map.final_arc) {
        return Err(ReductionError::MissingFinalArc);
    }
    let mut out = Vec::with_capacity(arcs.len().saturating_sub(1));
    for &a in arcs.iter().filter(|&&a| a != map.final_arc) {
        // Vertex arcs are numbered 0..|V(H)| in vertex order.
        match map.vertex_arcs.get(a) {
            Some(&id) if id == a => out.push(a),
            _ => return Err(ReductionError::ForeignArc(a)),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::{verify_hyperpath, HyperpathInstance};
    use crate::hypergraph::HypergraphClass;
    use crate::oracles::{
        oracle_hyperpaths, oracle_induced_hyperpaths, oracle_minimal_separators,
        oracle_minimal_transversals, DEFAULT_CAP,
    };

    fn f(n: usize, clauses: &[[i64; 3]]) -> CnfFormula {
        CnfFormula::from_dimacs(n, clauses).unwrap()
    }

    fn named(g: &DirectedHypergraph, family: &[Vec<Vertex>]) -> Vec<String> {
        family.iter().map(|x| names(g, x)).collect()
    }

    #[test]
    fn induced_sizes_and_seed() {
        let phi = f(1, &[[1, 1, 1]]);
        let inst = reduce_sat_induced(&phi, false).unwrap();
        let g = inst.graph();
        assert_eq!((g.num_vertices(), g.num_arcs()), (5, 7));
        let found = oracle_induced_hyperpaths(g, inst.source(), inst.target(), DEFAULT_CAP).unwrap();
        assert_eq!(named(g, &found), ["s t x_1 nx_1", "s t x_1 c_1"]);
        let extra: Vec<_> = found.iter().filter(|p| !inst.seed_paths().contains(p)).collect();
        let alpha = assignment_from_induced_hyperpath(&inst, extra[0]).unwrap();
        assert_eq!(alpha.get(1), Some(true));
        assert_eq!(
            assignment_from_induced_hyperpath(&inst, &inst.seed_paths()[0]),
            Err(ReductionError::SeedPath)
        );
    }

    #[test]
    fn induced_unsatisfiable_has_only_seeds() {
        let phi = f(1, &[[1, 1, 1], [-1, -1, -1]]);
        let inst = reduce_sat_induced(&phi, false).unwrap();
        let g = inst.graph();
        let found = oracle_induced_hyperpaths(g, inst.source(), inst.target(), DEFAULT_CAP).unwrap();
        assert_eq!(found, inst.seed_paths());
    }

    #[test]
    fn don_t_care_variables_read_as_zero() {
        let phi = f(2, &[[1, 1, 1]]);
        let inst = reduce_sat_induced(&phi, false).unwrap();
        let g = inst.graph();
        let p = g.resolve(["s", "x_1", "c_1", "t"]).unwrap();
        let alpha = assignment_from_induced_hyperpath(&inst, &p).unwrap();
        assert_eq!((alpha.get(1), alpha.get(2)), (Some(true), Some(false)));
        let not_path = g.resolve(["s", "x_2", "c_1", "t"]).unwrap();
        assert_eq!(
            assignment_from_induced_hyperpath(&inst, &not_path),
            Err(ReductionError::NotInducedPath)
        );
    }

    #[test]
    fn induced_tree_matches_piecewise_definition() {
        // m = 4: w_1 = t, w_2 = d_2, w_3 = d_3, w_4..w_7 = c_1..c_4.
        let got: Vec<TreeSlot> = (1..=7).map(|i| induced_tree_slot(i, 4)).collect();
        use TreeSlot::*;
        assert_eq!(
            got,
            [Root, Internal(2), Internal(3), Clause(1), Clause(2), Clause(3), Clause(4)]
        );
        assert_eq!(induced_tree_slot(2, 2), Clause(1));
        assert_eq!(induced_tree_slot(3, 2), Clause(2));
    }

    #[test]
    fn separator_tree_matches_piecewise_definition() {
        // n = 2, m = 1: k = 3, w_4 = c, w_5 = c_1, w_6 = y_1, w_7 = y_2.
        use TreeSlot::*;
        let got: Vec<TreeSlot> = (1..=7).map(|i| separator_tree_slot(i, 2, 1)).collect();
        assert_eq!(
            got,
            [Root, Internal(2), Internal(3), Collector, Clause(1), VarCheck(1), VarCheck(2)]
        );
    }

    #[test]
    fn bounded_induced_structure() {
        let phi = f(2, &[[1, 2, 2], [-1, 2, 1], [-2, -2, -1]]);
        let inst = reduce_sat_induced(&phi, true).unwrap();
        let g = inst.graph();
        assert_eq!(inst.formula().num_clauses(), 4);
        assert_eq!(inst.formula().num_vars(), 3);
        assert!(g.arcs().iter().all(|a| a.tails().len() <= 2));
        let has = |t: &[&str], h: &str| {
            let t = g.resolve(t.iter().copied()).unwrap();
            let h = g.vertex(h).unwrap();
            g.arcs().iter().any(|a| sorted(t.clone()) == a.tails() && a.heads() == [h])
        };
        assert!(has(&["d_2", "d_3"], "t"));
        assert!(has(&["c_1", "c_2"], "d_2"));
        assert!(has(&["c_3", "c_4"], "d_3"));
        let meta = inst.metadata();
        assert_eq!(meta.get("padding_variable"), Some("x_3"));
        assert_eq!(meta.get("padding_clauses"), Some("1"));
    }

    #[test]
    fn bounded_induced_single_clause_keeps_final_arc() {
        let inst = reduce_sat_induced(&f(1, &[[1, 1, 1]]), true).unwrap();
        let base = reduce_sat_induced(&f(1, &[[1, 1, 1]]), false).unwrap();
        assert_eq!(inst.graph(), base.graph());
    }

    #[test]
    fn separator_base_sizes_and_example() {
        let phi = f(1, &[[1, 1, 1]]);
        let inst = reduce_sat_separator(&phi, false).unwrap();
        let g = inst.graph();
        assert_eq!((g.num_vertices(), g.num_arcs()), (6, 6));
        assert_eq!(named(g, inst.seed_separators()), ["c", "y_1", "x_1 nx_1"]);
        let found = oracle_minimal_separators(g, inst.source(), inst.target(), DEFAULT_CAP).unwrap();
        let extra: Vec<_> = found.iter().filter(|x| !inst.seed_separators().contains(x)).collect();
        assert_eq!(named(g, &extra.iter().map(|x| x.to_vec()).collect::<Vec<_>>()), ["x_1"]);
        let alpha = assignment_from_separator(&inst, extra[0]).unwrap();
        assert_eq!(alpha.get(1), Some(true));
        assert_eq!(
            assignment_from_separator(&inst, &inst.seed_separators()[0]),
            Err(ReductionError::SeedSeparator)
        );
    }

    #[test]
    fn separator_unsatisfiable_has_only_seeds() {
        let phi = f(1, &[[1, 1, 1], [-1, -1, -1]]);
        let inst = reduce_sat_separator(&phi, false).unwrap();
        let g = inst.graph();
        let found = oracle_minimal_separators(g, inst.source(), inst.target(), DEFAULT_CAP).unwrap();
        assert_eq!(found, inst.seed_separators());
    }

    #[test]
    fn separator_assignment_rule_on_four_variables() {
        let phi = f(4, &[[1, 3, 3], [2, -3, -3], [-4, 3, 3], [1, 2, -4]]);
        let inst = reduce_sat_separator(&phi, false).unwrap();
        let x = inst.graph().resolve(["x_1", "x_2", "nx_4"]).unwrap();
        let alpha = assignment_from_separator(&inst, &x).unwrap();
        let bits: Vec<bool> = (1..=4).map(|v| alpha.get(v).unwrap()).collect();
        assert_eq!(bits, [true, true, false, false]);
    }

    #[test]
    fn bounded_separator_shape() {
        let phi = f(2, &[[1, -2, 2]]);
        let inst = reduce_sat_separator(&phi, true).unwrap();
        let g = inst.graph();
        let (n, m) = (inst.formula().num_vars(), inst.formula().num_clauses());
        assert!((n + m + 1).is_power_of_two());
        assert_eq!(g.num_vertices(), 4 * n + 2 * m + 2);
        assert_eq!(g.num_arcs(), 4 * n + 2 * m + n + m);
        assert_eq!(inst.seed_separators().len(), 3 * n + 2 * m);
        assert!(g.arcs().iter().all(|a| a.tails().len() <= 2));
        assert_eq!(g.classify(), HypergraphClass::B);
    }

    #[test]
    fn padding() {
        let four = f(1, &[[1, 1, 1]; 4]);
        assert_eq!(pad_to_power_of_two(&four, PadMode::Clauses), four);
        let three = f(1, &[[1, 1, 1]; 3]);
        let padded = pad_to_power_of_two(&three, PadMode::Clauses);
        assert_eq!((padded.num_vars(), padded.num_clauses()), (2, 4));
        assert_eq!(padded.clauses()[3], [Literal::pos(2); 3]);
        let seven = f(4, &[[1, 2, 3]; 3]);
        assert_eq!(pad_to_power_of_two(&seven, PadMode::ClausesPlusVars), seven);
        // n + 1 + m + 1 = 8 already once z exists: no dummy clause.
        let six = f(4, &[[1, 2, 3]; 2]);
        let padded = pad_to_power_of_two(&six, PadMode::ClausesPlusVars);
        assert_eq!((padded.num_vars(), padded.num_clauses()), (5, 2));
    }

    #[test]
    fn padding_preserves_satisfiability() {
        let unsat = f(1, &[[1, 1, 1], [-1, -1, -1], [1, 1, 1]]);
        let padded = pad_to_power_of_two(&unsat, PadMode::Clauses);
        assert!(!is_satisfiable(&unsat).unwrap());
        assert!(!is_satisfiable(&padded).unwrap());
        let sat = f(2, &[[1, 2, 2], [-1, 2, 2], [1, -2, 1]]);
        let padded = pad_to_power_of_two(&sat, PadMode::Clauses);
        let alpha = find_satisfying_assignment(&padded, SAT_CAP).unwrap().unwrap();
        assert_eq!(alpha.get(3), Some(true));
    }

    #[test]
    fn formulas_reject_out_of_range_literals_and_empty_clause_lists() {
        assert!(CnfFormula::from_dimacs(1, &[[1, 2, 1]]).is_err());
        let empty = CnfFormula::new(1, Vec::new()).unwrap();
        assert!(matches!(reduce_sat_induced(&empty, false), Err(ReductionError::MalformedCnf(_))));
    }

    fn h(edges: &[&[&str]]) -> UndirectedHypergraph {
        UndirectedHypergraph::from_edges(edges.iter().map(|e| e.iter().copied())).unwrap()
    }

    #[test]
    fn transversal_mapping() {
        let hg = h(&[&["1", "2"], &["2", "3"]]);
        let map = reduce_transversal(&hg).unwrap();
        let g = map.graph();
        assert_eq!((g.num_vertices(), g.num_arcs()), (4, 4));
        assert_eq!(g.classify(), HypergraphClass::BF);
        let two = hg.index_of("2").unwrap();
        assert_eq!(hyperpath_from_transversal(&map, &[two]).unwrap(), vec![1, 3]);
        let one_three = [hg.index_of("1").unwrap(), hg.index_of("3").unwrap()];
        let arcs = hyperpath_from_transversal(&map, &one_three).unwrap();
        assert_eq!(arcs.len(), 3);
        assert_eq!(transversal_from_hyperpath(&map, &arcs).unwrap(), one_three);

        let inst = HyperpathInstance::new(g, &[map.source()], &[map.target()]).unwrap();
        let empty = hyperpath_from_transversal(&map, &[]).unwrap();
        assert_eq!(empty, vec![map.final_arc()]);
        assert!(!verify_hyperpath(&inst, &empty));

        let paths = oracle_hyperpaths(&inst, DEFAULT_CAP).unwrap();
        let tr = oracle_minimal_transversals(&hg, DEFAULT_CAP).unwrap();
        assert_eq!(paths.len(), 2);
        let mut back: Vec<Vec<usize>> = paths
            .iter()
            .map(|p| transversal_from_hyperpath(&map, p).unwrap())
            .collect();
        back = canonical(back);
        assert_eq!(back, tr);
    }

    #[test]
    fn transversal_single_edge() {
        let map = reduce_transversal(&h(&[&["1"]])).unwrap();
        let g = map.graph();
        let desc: Vec<String> = g.arcs().iter().map(|a| g.describe_arc(a)).collect();
        assert_eq!(desc, ["s -> e_1", "e_1 -> t"]);
        assert_eq!(g.classify(), HypergraphClass::B);
    }

    #[test]
    fn transversal_errors() {
        let map = reduce_transversal(&h(&[&["1", "2"]])).unwrap();
        assert_eq!(transversal_from_hyperpath(&map, &[0]), Err(ReductionError::MissingFinalArc));
        assert_eq!(hyperpath_from_transversal(&map, &[7]), Err(ReductionError::UnknownVertex(7)));
        let edgeless = UndirectedHypergraph::new(["a"], Vec::<Vec<&str>>::new()).unwrap();
        assert_eq!(reduce_transversal(&edgeless).unwrap_err(), ReductionError::NoEdges);
        let isolated = UndirectedHypergraph::new(["a", "b"], [["a"]]).unwrap();
        assert_eq!(
            reduce_transversal(&isolated).unwrap_err(),
            ReductionError::IsolatedVertex("b".into())
        );
    }

    #[test]
    fn metadata_lists_seed_families() {
        let inst = reduce_sat_separator(&f(2, &[[1, -2, 2]]), false).unwrap();
        let meta = inst.metadata();
        assert_eq!(meta.get_all("seed_separator").count(), 5);
        assert_eq!(meta.get("source"), Some("s"));
    }
}
