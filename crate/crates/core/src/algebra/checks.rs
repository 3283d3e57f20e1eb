use super::{compose, compose_at, jacobi_relations, quotient_space, GraphVector, QuotientSpace};
use crate::error::GraphError;
use crate::graph::{enumerate_graphs, EnumerateOptions};
use crate::rational::qi;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub cases: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(cases: usize, failures: Vec<String>) -> IdentityCheck {
        IdentityCheck { cases, pass: failures.is_empty(), failures }
    }
}

fn classes(n: usize, m: usize) -> Result<Vec<GraphVector>, GraphError> {
    Ok(enumerate_graphs(n, m, EnumerateOptions::default())?
        .into_iter()
        .map(|c| GraphVector::from_graph(&c.representative, qi(1)))
        .collect())
}

fn associator(x: &GraphVector, y: &GraphVector, z: &GraphVector) -> GraphVector {
    &compose(x, &compose(y, z)) - &compose(&compose(x, y), z)
}

/// `A(x, y, z) = (−1)^{(|y|−1)(|z|−1)} A(x, z, y)` for the associator of
/// `∘` over all triples of classes in `G_{k,2}`, `k ≤ max_n`.
pub fn pre_lie_check(max_n: usize) -> Result<IdentityCheck, GraphError> {
    let mut pool = Vec::new();
    for n in 0..=max_n {
        pool.extend(classes(n, 2)?);
    }
    let mut failures = Vec::new();
    let mut cases = 0;
    for x in &pool {
        for y in &pool {
            for z in &pool {
                cases += 1;
                let (my, mz) = (y.bidegree().1, z.bidegree().1);
                let s = if ((my - 1) * (mz - 1)) % 2 == 0 { qi(1) } else { qi(-1) };
                if !(&associator(x, y, z) - &associator(x, z, y).scaled(&s)).is_zero() {
                    failures.push(format!("x={x} y={y} z={z}"));
                }
            }
        }
    }
    Ok(IdentityCheck::new(cases, failures))
}

fn compose_single(v: &GraphVector, w: &GraphVector, i: usize) -> GraphVector {
    let (n, m) = v.bidegree();
    let (n2, m2) = w.bidegree();
    let mut out = GraphVector::zero(n + n2, m + m2 - 1);
    for (ka, ca) in v.iter() {
        for (kb, cb) in w.iter() {
            out.add_scaled(&compose_at(&ka.representative(), &kb.representative(), i), &(ca * cb));
        }
    }
    out
}

/// Every partial composition of a Jacobi relation in `G_{k,m}` (`k ≤ max_n`,
/// `m ≤ 3`) with a class of order `≤ 1` and arity `≤ 3`, on either side,
/// vanishes in the quotient.
pub fn composition_descends_check(max_n: usize) -> Result<IdentityCheck, GraphError> {
    let mut others = Vec::new();
    for n in 0..=1 {
        for m in 1..=3 {
            others.extend(classes(n, m)?);
        }
    }
    let mut relations = Vec::new();
    for k in 2..=max_n {
        for m in 1..=3 {
            relations.extend(jacobi_relations(k, m)?);
        }
    }
    let mut spaces: BTreeMap<(usize, usize), QuotientSpace> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut cases = 0;
    for r in &relations {
        let (k, mr) = r.bidegree();
        for w in &others {
            let (nw, mw) = w.bidegree();
            let key = (k + nw, mr + mw - 1);
            if let std::collections::btree_map::Entry::Vacant(v) = spaces.entry(key) {
                v.insert(quotient_space(key.0, key.1)?);
            }
            let q = &spaces[&key];
            for i in 0..mr {
                cases += 1;
                if !q.is_zero(&compose_single(r, w, i)) {
                    failures.push(format!("relation {r} composed into slot {i} with {w}"));
                }
            }
            for i in 0..mw {
                cases += 1;
                if !q.is_zero(&compose_single(w, r, i)) {
                    failures.push(format!("{w} composed with relation {r} at slot {i}"));
                }
            }
        }
    }
    Ok(IdentityCheck::new(cases, failures))
}
