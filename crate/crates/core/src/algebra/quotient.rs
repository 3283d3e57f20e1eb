//! Jacobi relations and the quotient spaces `J_{n,m}`.

use super::GraphVector;
use crate::error::GraphError;
use crate::graph::{enumerate_graphs, EnumerateOptions, Graph, GraphClassKey, Vertex};
use crate::rational::Q;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Three-term Jacobi relations at bidegree `(n, m)`, one per contracted edge
/// `u → w` (with no edge back), normalized so the leading coefficient is 1
/// and deduplicated.
///
/// With `u → [x, w]` and `w → [y, z]`, the relation is
/// `T(x,y,z) + T(y,z,x) + T(z,x,y)` where `T(a,b,c)` replaces the two
/// vertices by `u → [a, w]`, `w → [b, c]`; an incoming edge stays on `u`.
/// Terms with a double edge are dropped.
pub fn jacobi_relations(n: usize, m: usize) -> Result<Vec<GraphVector>, GraphError> {
    if n < 2 {
        return Ok(Vec::new());
    }
    let opts = EnumerateOptions { include_vanishing: true, ..Default::default() };
    let classes = enumerate_graphs(n, m, opts)?;
    let found: Vec<Vec<GraphVector>> = classes
        .par_iter()
        .map(|c| relations_at(&c.representative))
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for v in found.into_iter().flatten() {
        if v.is_zero() {
            continue;
        }
        let lead = v.iter().next().unwrap().1.clone();
        let v = v.scaled(&(Q::one() / lead));
        let sig: Vec<(GraphClassKey, Q)> = v.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        if seen.insert(sig) {
            out.push(v);
        }
    }
    Ok(out)
}

pub(crate) fn relations_at(g: &Graph) -> Vec<GraphVector> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        for slot in 0..2 {
            let Vertex::Internal(w) = g.targets()[u][slot] else { continue };
            if g.targets()[w].contains(&Vertex::Internal(u)) {
                continue;
            }
            let x = g.targets()[u][1 - slot];
            let [y, z] = g.targets()[w];
            out.push(jacobi_triple(g, u, w, [x, y, z]));
        }
    }
    out
}

fn jacobi_triple(g: &Graph, u: usize, w: usize, t: [Vertex; 3]) -> GraphVector {
    let mut v = GraphVector::zero(g.n(), g.m());
    for r in 0..3 {
        let (a, b, c) = (t[r], t[(r + 1) % 3], t[(r + 2) % 3]);
        if b == c {
            continue;
        }
        let mut targets = g.targets().to_vec();
        targets[u] = [a, Vertex::Internal(w)];
        targets[w] = [b, c];
        let h = Graph::new(g.n(), g.m(), targets).expect("Jacobi term is admissible");
        v.add_graph(&h, Q::one());
    }
    v
}

/// `J_{n,m}` with a fully reduced relation basis.
///
/// Relations are kept in reduced echelon form with each pivot at the largest
/// class index of its row, so the non-pivot classes are exactly the first
/// independent classes in canonical order.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    n: usize,
    m: usize,
    classes: Vec<GraphClassKey>,
    index: HashMap<GraphClassKey, usize>,
    /// pivot column -> solved form `e_p = Σ row[c] e_c` over non-pivot columns
    rows: BTreeMap<usize, BTreeMap<usize, Q>>,
    basis: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientExport {
    pub n: usize,
    pub m: usize,
    pub basis: Vec<GraphClassKey>,
    pub dim: usize,
    pub relation_rank: usize,
}

pub fn quotient_space(n: usize, m: usize) -> Result<QuotientSpace, GraphError> {
    let classes: Vec<GraphClassKey> = enumerate_graphs(n, m, EnumerateOptions::default())?
        .into_iter()
        .map(|c| c.key)
        .collect();
    let relations = jacobi_relations(n, m)?;
    Ok(QuotientSpace::from_relations(n, m, classes, &relations))
}

impl QuotientSpace {
    /// Quotient of the span of `classes` by `relations`, which must only
    /// involve those classes.
    pub fn from_relations(
        n: usize,
        m: usize,
        classes: Vec<GraphClassKey>,
        relations: &[GraphVector],
    ) -> QuotientSpace {
        let index = classes.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        let mut q = QuotientSpace { n, m, classes, index, rows: BTreeMap::new(), basis: Vec::new() };
        for r in relations {
            let row = q.to_row(r);
            q.insert(row);
        }
        q.basis = (0..q.classes.len()).filter(|c| !q.rows.contains_key(c)).collect();
        q
    }

    fn to_row(&self, v: &GraphVector) -> BTreeMap<usize, Q> {
        assert_eq!(v.bidegree(), (self.n, self.m), "bidegree mismatch");
        v.iter()
            .map(|(k, c)| {
                let i = *self.index.get(k).unwrap_or_else(|| panic!("class {k} not in J_{{{},{}}}", self.n, self.m));
                (i, c.clone())
            })
            .collect()
    }

    fn insert(&mut self, mut row: BTreeMap<usize, Q>) {
        self.substitute(&mut row);
        let Some((&p, _)) = row.iter().next_back() else { return };
        let lead = -row.remove(&p).unwrap();
        // solved form: e_p = Σ row[c] e_c
        for x in row.values_mut() {
            *x /= &lead;
        }
        for other in self.rows.values_mut() {
            if let Some(f) = other.remove(&p) {
                for (c, x) in &row {
                    let e = other.entry(*c).or_insert_with(Q::zero);
                    *e += &f * x;
                    if e.is_zero() {
                        other.remove(c);
                    }
                }
            }
        }
        self.rows.insert(p, row);
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn classes(&self) -> &[GraphClassKey] {
        &self.classes
    }

    pub fn basis(&self) -> Vec<GraphClassKey> {
        self.basis.iter().map(|&i| self.classes[i].clone()).collect()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn relation_rank(&self) -> usize {
        self.rows.len()
    }

    /// Normal form of `v`: an equivalent vector supported on basis classes.
    pub fn project(&self, v: &GraphVector) -> GraphVector {
        let mut row = self.to_row(v);
        self.substitute(&mut row);
        let mut out = GraphVector::zero(self.n, self.m);
        for (c, x) in row {
            out.add_key(self.classes[c].clone(), x);
        }
        out
    }

    fn substitute(&self, row: &mut BTreeMap<usize, Q>) {
        let hits: Vec<usize> = row.keys().filter(|c| self.rows.contains_key(c)).cloned().collect();
        for p in hits {
            let f = row.remove(&p).unwrap();
            for (c, x) in &self.rows[&p] {
                let e = row.entry(*c).or_insert_with(Q::zero);
                *e += &f * x;
                if e.is_zero() {
                    row.remove(c);
                }
            }
        }
    }

    /// Coordinates of `v` in the basis, in basis order.
    pub fn coordinates(&self, v: &GraphVector) -> Vec<Q> {
        let mut row = self.to_row(v);
        self.substitute(&mut row);
        self.basis.iter().map(|b| row.get(b).cloned().unwrap_or_else(Q::zero)).collect()
    }

    pub fn is_zero(&self, v: &GraphVector) -> bool {
        self.project(v).is_zero()
    }

    pub fn export(&self) -> QuotientExport {
        QuotientExport {
            n: self.n,
            m: self.m,
            basis: self.basis(),
            dim: self.dim(),
            relation_rank: self.relation_rank(),
        }
    }
}
