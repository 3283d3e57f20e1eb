//! Rational linear combinations of graph classes.
//!
//! Coefficients are attached to canonical representatives, so the AS
//! relation is folded in at insertion time: adding `c * g` stores
//! `c * sign(g)` against `key(g)`, and classes with an odd automorphism are
//! dropped because they equal their own negative.

mod checks;
mod compose;
mod coproduct;
mod quotient;

pub use checks::{composition_descends_check, pre_lie_check, IdentityCheck};
pub use compose::{bracket, compose, compose_at, compose_sign, graded_bracket};
pub use coproduct::{coproduct, CoproductTerm};
pub use quotient::{jacobi_relations, quotient_space, QuotientExport, QuotientSpace};

use crate::graph::{canonicalize, Graph, GraphClassKey};
use crate::rational::Q;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GraphVector {
    n: usize,
    m: usize,
    terms: BTreeMap<GraphClassKey, Q>,
}

impl GraphVector {
    pub fn zero(n: usize, m: usize) -> GraphVector {
        GraphVector { n, m, terms: BTreeMap::new() }
    }

    pub fn from_graph(g: &Graph, coef: Q) -> GraphVector {
        let mut v = GraphVector::zero(g.n(), g.m());
        v.add_graph(g, coef);
        v
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    /// Adds `coef * g`.
    ///
    /// Panics if `g` has a different bidegree.
    pub fn add_graph(&mut self, g: &Graph, coef: Q) {
        assert_eq!((g.n(), g.m()), (self.n, self.m), "bidegree mismatch adding {g}");
        let c = canonicalize(g);
        if c.sign == 0 {
            return;
        }
        let coef = if c.sign < 0 { -coef } else { coef };
        self.add_key(c.key, coef);
    }

    /// Adds `coef` times the canonical representative of `key`.
    pub fn add_key(&mut self, key: GraphClassKey, coef: Q) {
        assert_eq!((key.n(), key.m()), (self.n, self.m), "bidegree mismatch adding {key}");
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(key);
        match slot {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &GraphVector, s: &Q) {
        assert_eq!(self.bidegree(), other.bidegree(), "bidegree mismatch");
        for (k, c) in &other.terms {
            self.add_key(k.clone(), c * s);
        }
    }

    pub fn scaled(&self, s: &Q) -> GraphVector {
        let mut out = GraphVector::zero(self.n, self.m);
        out.add_scaled(self, s);
        out
    }

    pub fn coefficient(&self, key: &GraphClassKey) -> Q {
        self.terms.get(key).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of the oriented graph `g` itself (sign-corrected).
    pub fn coefficient_of(&self, g: &Graph) -> Q {
        let c = canonicalize(g);
        match c.sign {
            0 => Q::zero(),
            s if s < 0 => -self.coefficient(&c.key),
            _ => self.coefficient(&c.key),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GraphClassKey, &Q)> {
        self.terms.iter()
    }

    /// Bilinear extension of the graph product (juxtaposition over shared
    /// external vertices).
    ///
    /// Panics if the numbers of external vertices differ.
    pub fn product(&self, other: &GraphVector) -> GraphVector {
        assert_eq!(self.m, other.m, "external vertex counts differ");
        let mut out = GraphVector::zero(self.n + other.n, self.m);
        for (ka, ca) in &self.terms {
            let a = ka.representative();
            for (kb, cb) in &other.terms {
                let g = a.product(&kb.representative()).expect("same external vertices");
                out.add_graph(&g, ca * cb);
            }
        }
        out
    }
}

impl std::ops::Add for &GraphVector {
    type Output = GraphVector;
    fn add(self, rhs: &GraphVector) -> GraphVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::from_integer(1.into()));
        out
    }
}

impl std::ops::Sub for &GraphVector {
    type Output = GraphVector;
    fn sub(self, rhs: &GraphVector) -> GraphVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::from_integer((-1).into()));
        out
    }
}

impl fmt::Display for GraphVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})[{}]", crate::rational::q_to_string(c), k)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn as_signs_fold_in() {
        let w = Graph::wedge();
        let mut v = GraphVector::from_graph(&w, qi(1));
        v.add_graph(&w.flipped(0), qi(1));
        assert!(v.is_zero());
        let v = GraphVector::from_graph(&w.flipped(0), q(1, 2));
        assert_eq!(v.coefficient_of(&w), q(-1, 2));
    }

    #[test]
    #[should_panic]
    fn bidegree_enforced() {
        let mut v = GraphVector::zero(1, 2);
        v.add_graph(&Graph::empty(2), qi(1));
    }
}
