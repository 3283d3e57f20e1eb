//! Lie-admissible graphs: representation, validation, products and
//! structural invariants.
//!
//! An internal vertex `v` always owns exactly two outgoing edges, stored as
//! the ordered pair `targets[v]`; edge `2v + s` is the `s`-th edge of `v`.
//! The order inside each pair is the orientation, so swapping one pair is an
//! AS flip.

mod canon;
mod enumerate;
mod json;

pub use canon::{canonicalize, canonicalize_many, Canonical, GraphClassKey};
pub use enumerate::{enumerate_graphs, EnumerateOptions, GraphClass, DEFAULT_MAX_N};
pub use json::GraphJson;

use crate::error::GraphError;
use crate::rational::factorial;
use num_bigint::BigInt;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Vertex {
    Internal(usize),
    External(usize),
}

impl Vertex {
    pub fn is_internal(self) -> bool {
        matches!(self, Vertex::Internal(_))
    }

    pub fn parse(s: &str) -> Result<Vertex, GraphError> {
        let bad = || GraphError::Malformed(format!("bad vertex name {s:?}"));
        let (kind, idx) = s.split_at(1.min(s.len()));
        let k: usize = idx.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        match kind {
            "v" => Ok(Vertex::Internal(k - 1)),
            "e" => Ok(Vertex::External(k - 1)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Internal(k) => write!(f, "v{}", k + 1),
            Vertex::External(j) => write!(f, "e{}", j + 1),
        }
    }
}

/// An oriented admissible graph.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    n: usize,
    m: usize,
    targets: Vec<[Vertex; 2]>,
}

impl Graph {
    pub fn new(n: usize, m: usize, targets: Vec<[Vertex; 2]>) -> Result<Graph, GraphError> {
        if targets.len() != n {
            return Err(GraphError::NotAdmissible(format!(
                "{} outgoing pairs for {} internal vertices",
                targets.len(),
                n
            )));
        }
        for (v, pair) in targets.iter().enumerate() {
            for &t in pair {
                match t {
                    Vertex::Internal(k) if k >= n => {
                        return Err(GraphError::VertexOutOfRange(t.to_string()))
                    }
                    Vertex::External(j) if j >= m => {
                        return Err(GraphError::VertexOutOfRange(t.to_string()))
                    }
                    Vertex::Internal(k) if k == v => {
                        return Err(GraphError::LoopedEdge(t.to_string()))
                    }
                    _ => {}
                }
            }
            if pair[0] == pair[1] {
                return Err(GraphError::DoubleEdge(
                    Vertex::Internal(v).to_string(),
                    pair[0].to_string(),
                ));
            }
        }
        Ok(Graph { n, m, targets })
    }

    pub(crate) fn new_unchecked(n: usize, m: usize, targets: Vec<[Vertex; 2]>) -> Graph {
        Graph { n, m, targets }
    }

    /// The graph with `m` external vertices and nothing else.
    pub fn empty(m: usize) -> Graph {
        Graph { n: 0, m, targets: Vec::new() }
    }

    /// One internal vertex with edges to `e1` then `e2`.
    pub fn wedge() -> Graph {
        Graph {
            n: 1,
            m: 2,
            targets: vec![[Vertex::External(0), Vertex::External(1)]],
        }
    }

    /// The 2-spiked wheel boundary graph in `G_{2,2}`: `v1 -> (v2, e1)`,
    /// `v2 -> (v1, e2)`.
    pub fn two_wheel_boundary() -> Graph {
        use Vertex::*;
        Graph {
            n: 2,
            m: 2,
            targets: vec![[Internal(1), External(0)], [Internal(0), External(1)]],
        }
    }

    /// The `n`-spiked wheel in `G_{n,1}`: `v_k -> (v_{k+1}, e1)` cyclically.
    pub fn wheel(n: usize) -> Result<Graph, GraphError> {
        if n < 2 {
            return Err(GraphError::Malformed("a wheel needs at least two vertices".into()));
        }
        let targets = (0..n)
            .map(|k| [Vertex::Internal((k + 1) % n), Vertex::External(0)])
            .collect();
        Graph::new(n, 1, targets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edge_count(&self) -> usize {
        2 * self.n
    }

    pub fn targets(&self) -> &[[Vertex; 2]] {
        &self.targets
    }

    /// Edge `e` as (source, target).
    pub fn edge(&self, e: usize) -> (usize, Vertex) {
        (e / 2, self.targets[e / 2][e % 2])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, Vertex)> + '_ {
        (0..self.edge_count()).map(move |e| self.edge(e))
    }

    /// Edge indices ending in `v`.
    pub fn incoming(&self, v: Vertex) -> Vec<usize> {
        (0..self.edge_count()).filter(|&e| self.edge(e).1 == v).collect()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.targets.iter().flatten().filter(|&&t| t == v).count()
    }

    pub fn is_lie_admissible(&self) -> bool {
        (0..self.n).all(|k| self.in_degree(Vertex::Internal(k)) <= 1)
    }

    /// Every external vertex receives an edge (or the graph has no internal
    /// vertices). Graphs failing this have identically vanishing weights.
    pub fn is_essential(&self) -> bool {
        self.n == 0 || (0..self.m).all(|j| self.in_degree(Vertex::External(j)) > 0)
    }

    /// Swap the two outgoing edges of `v` (one AS flip).
    pub fn flipped(&self, v: usize) -> Graph {
        let mut g = self.clone();
        g.targets[v].swap(0, 1);
        g
    }

    /// Relabel internal vertices: old vertex `k` becomes `perm[k]`.
    pub fn relabel_internal(&self, perm: &[usize]) -> Graph {
        let map = |t: Vertex| match t {
            Vertex::Internal(k) => Vertex::Internal(perm[k]),
            e => e,
        };
        let mut targets = vec![[Vertex::External(0); 2]; self.n];
        for (k, pair) in self.targets.iter().enumerate() {
            targets[perm[k]] = [map(pair[0]), map(pair[1])];
        }
        Graph { n: self.n, m: self.m, targets }
    }

    /// Juxtaposition with identified external vertices.
    pub fn product(&self, other: &Graph) -> Result<Graph, GraphError> {
        if self.m != other.m {
            return Err(GraphError::ExternalMismatch(self.m, other.m));
        }
        let shift = |t: Vertex| match t {
            Vertex::Internal(k) => Vertex::Internal(k + self.n),
            e => e,
        };
        let mut targets = self.targets.clone();
        targets.extend(other.targets.iter().map(|p| [shift(p[0]), shift(p[1])]));
        Ok(Graph { n: self.n + other.n, m: self.m, targets })
    }

    /// Undirected adjacency among internal vertices.
    fn internal_neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (v, pair) in self.targets.iter().enumerate() {
            for &t in pair {
                if let Vertex::Internal(k) = t {
                    adj[v].push(k);
                    adj[k].push(v);
                }
            }
        }
        adj
    }

    /// Connected components of the graph with the external vertices removed.
    pub fn internal_components(&self) -> Vec<Vec<usize>> {
        let adj = self.internal_neighbours();
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut stack = vec![s];
            let mut comp = Vec::new();
            seen[s] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// First Betti number of the internal part.
    pub fn loop_number(&self) -> usize {
        let internal_edges = self.edges().filter(|(_, t)| t.is_internal()).count();
        internal_edges + self.internal_components().len() - self.n
    }

    /// True iff removing the external vertices leaves a connected nonempty graph.
    pub fn connected_after_external_removal(&self) -> bool {
        self.n > 0 && self.internal_components().len() == 1
    }

    /// Whether some oriented cycle runs through internal vertices.
    pub fn has_oriented_cycle(&self) -> bool {
        self.topological_order().is_none()
    }

    /// Internal vertices ordered so that every internal target of a vertex
    /// comes before it (sinks first). `None` if there is an oriented cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut out_internal = vec![0usize; self.n];
        let mut parents = vec![Vec::new(); self.n];
        for (v, pair) in self.targets.iter().enumerate() {
            for &t in pair {
                if let Vertex::Internal(k) = t {
                    out_internal[v] += 1;
                    parents[k].push(v);
                }
            }
        }
        let mut ready: Vec<usize> = (0..self.n).filter(|&v| out_internal[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &p in &parents[v] {
                out_internal[p] -= 1;
                if out_internal[p] == 0 {
                    ready.push(p);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    /// Labellings of one oriented graph: `(2n)! / (2 |Aut G|)`, and 1 for `n = 0`.
    pub fn labellings_count(&self) -> BigInt {
        if self.n == 0 {
            return BigInt::from(1);
        }
        factorial(2 * self.n) / BigInt::from(2 * canonicalize(self).aut)
    }

    /// Distinct labelled graphs over both orientations: `(2n)! / |Aut G|`.
    pub fn labelled_multiplicity(&self) -> BigInt {
        if self.n == 0 {
            return BigInt::from(1);
        }
        factorial(2 * self.n) / BigInt::from(canonicalize(self).aut)
    }

    pub fn automorphism_count(&self) -> usize {
        canonicalize(self).aut
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G[{},{}](", self.n, self.m)?;
        for (v, p) in self.targets.iter().enumerate() {
            if v > 0 {
                write!(f, " ")?;
            }
            write!(f, "v{}->{},{}", v + 1, p[0], p[1])?;
        }
        write!(f, ")")
    }
}

/// A graph together with a total order on its edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabelledGraph {
    graph: Graph,
    labels: Vec<usize>,
}

impl LabelledGraph {
    /// `labels[e]` is the position of edge `e` in the total order.
    pub fn new(graph: Graph, labels: Vec<usize>) -> Result<LabelledGraph, GraphError> {
        let k = graph.edge_count();
        let mut seen = vec![false; k];
        if labels.len() != k {
            return Err(GraphError::BadEdgeOrder(format!("{} labels for {} edges", labels.len(), k)));
        }
        for &l in &labels {
            if l >= k || seen[l] {
                return Err(GraphError::BadEdgeOrder(format!("{labels:?} is not a bijection")));
            }
            seen[l] = true;
        }
        Ok(LabelledGraph { graph, labels })
    }

    /// Labels following the orientation: `v1`'s pair, then `v2`'s, ...
    pub fn natural(graph: Graph) -> LabelledGraph {
        let labels = (0..graph.edge_count()).collect();
        LabelledGraph { graph, labels }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Edge carrying label `j`.
    pub fn edge_with_label(&self, j: usize) -> usize {
        self.labels.iter().position(|&l| l == j).expect("labels are a bijection")
    }

    /// Sign of the edge order relative to the graph orientation.
    pub fn sign(&self) -> i32 {
        permutation_sign(&self.labels)
    }
}

pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut k = s;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// A raw directed edge list, possibly violating admissibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub m: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub admissible: bool,
    pub lie_admissible: bool,
    pub violations: Vec<String>,
}

pub fn validate(g: &EdgeList) -> ValidationReport {
    let mut violations = Vec::new();
    let in_range = |v: Vertex| match v {
        Vertex::Internal(k) => k < g.n,
        Vertex::External(j) => j < g.m,
    };
    let mut out_deg = vec![0usize; g.n];
    for (i, &(s, t)) in g.edges.iter().enumerate() {
        if !in_range(s) || !in_range(t) {
            violations.push(format!("edge {i} ({s} -> {t}) references a missing vertex"));
            continue;
        }
        if s == t {
            violations.push(format!("looped edge at {s}"));
        }
        match s {
            Vertex::External(_) => {
                violations.push(format!("edge {s} -> {t}: no edges start in any external vertex"))
            }
            Vertex::Internal(k) => out_deg[k] += 1,
        }
        if g.edges[..i].contains(&(s, t)) {
            violations.push(format!("double edge {s} -> {t}"));
        }
    }
    for (k, &d) in out_deg.iter().enumerate() {
        if d != 2 {
            violations.push(format!(
                "internal vertex v{} has {d} outgoing edges; exactly two edges start in each internal vertex",
                k + 1
            ));
        }
    }
    let admissible = violations.is_empty();
    let mut lie_admissible = admissible;
    if admissible {
        for k in 0..g.n {
            let d = g.edges.iter().filter(|e| e.1 == Vertex::Internal(k)).count();
            if d > 1 {
                lie_admissible = false;
                violations.push(format!("internal vertex v{} has {d} incoming edges", k + 1));
            }
        }
    }
    ValidationReport { admissible, lie_admissible, violations }
}

impl From<&Graph> for EdgeList {
    fn from(g: &Graph) -> EdgeList {
        EdgeList {
            n: g.n,
            m: g.m,
            edges: g.edges().map(|(s, t)| (Vertex::Internal(s), t)).collect(),
        }
    }
}

impl TryFrom<&EdgeList> for Graph {
    type Error = GraphError;

    /// Outgoing pairs are ordered by their position in the edge list.
    fn try_from(list: &EdgeList) -> Result<Graph, GraphError> {
        let report = validate(list);
        if !report.admissible {
            return Err(GraphError::NotAdmissible(report.violations.join("; ")));
        }
        let mut targets: Vec<Vec<Vertex>> = vec![Vec::new(); list.n];
        for &(s, t) in &list.edges {
            if let Vertex::Internal(k) = s {
                targets[k].push(t);
            }
        }
        Graph::new(list.n, list.m, targets.into_iter().map(|p| [p[0], p[1]]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Vertex::*;

    #[test]
    fn wedge_validates() {
        let r = validate(&EdgeList::from(&Graph::wedge()));
        assert!(r.admissible && r.lie_admissible, "{r:?}");
    }

    #[test]
    fn edge_from_external_is_rejected() {
        let g = EdgeList {
            n: 1,
            m: 2,
            edges: vec![(Internal(0), External(0)), (Internal(0), External(1)), (External(0), Internal(0))],
        };
        let r = validate(&g);
        assert!(!r.admissible);
        assert!(r.violations.iter().any(|v| v.contains("no edges start in any external vertex")));
    }

    #[test]
    fn two_incoming_is_admissible_not_lie() {
        let g = EdgeList {
            n: 3,
            m: 2,
            edges: vec![
                (Internal(0), Internal(2)),
                (Internal(0), External(0)),
                (Internal(1), Internal(2)),
                (Internal(1), External(1)),
                (Internal(2), External(0)),
                (Internal(2), External(1)),
            ],
        };
        let r = validate(&g);
        assert!(r.admissible);
        assert!(!r.lie_admissible);
    }

    #[test]
    fn double_and_looped_edges_rejected() {
        assert!(matches!(
            Graph::new(1, 2, vec![[External(0), External(0)]]),
            Err(GraphError::DoubleEdge(..))
        ));
        assert!(matches!(
            Graph::new(1, 2, vec![[Internal(0), External(0)]]),
            Err(GraphError::LoopedEdge(..))
        ));
    }

    #[test]
    fn loop_numbers() {
        let w = Graph::wedge();
        assert_eq!(w.loop_number(), 0);
        assert_eq!(Graph::two_wheel_boundary().loop_number(), 1);
        let ww = w.product(&w).unwrap();
        assert_eq!(ww.loop_number(), 0);
        assert!(w.connected_after_external_removal());
        assert!(!ww.connected_after_external_removal());
        assert!(Graph::two_wheel_boundary().connected_after_external_removal());
        assert!(!Graph::empty(2).connected_after_external_removal());
    }

    #[test]
    fn product_identity_and_mismatch() {
        let w = Graph::wedge();
        assert_eq!(Graph::empty(2).product(&w).unwrap(), w);
        assert!(matches!(
            w.product(&Graph::empty(3)),
            Err(GraphError::ExternalMismatch(2, 3))
        ));
    }

    #[test]
    fn labelling_counts() {
        let w = Graph::wedge();
        assert_eq!(w.labelled_multiplicity(), BigInt::from(2));
        assert_eq!(w.labellings_count(), BigInt::from(1));
        assert_eq!(Graph::empty(2).labellings_count(), BigInt::from(1));
        let ww = w.product(&w).unwrap();
        assert_eq!(ww.labelled_multiplicity(), BigInt::from(12));
    }

    #[test]
    fn permutation_helpers() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn topological_order_sinks_first() {
        let g = Graph::new(2, 2, vec![[Internal(1), External(0)], [External(0), External(1)]]).unwrap();
        assert_eq!(g.topological_order(), Some(vec![1, 0]));
        assert!(Graph::two_wheel_boundary().has_oriented_cycle());
    }

    #[test]
    fn vertex_names_round_trip() {
        for v in [Internal(0), Internal(4), External(2)] {
            assert_eq!(Vertex::parse(&v.to_string()).unwrap(), v);
        }
        assert!(Vertex::parse("x1").is_err());
        assert!(Vertex::parse("v0").is_err());
    }
}
