use crate::error::AlgebraError;
use crate::rational::{parse_q, q_to_string, Q};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// Polynomial with rational coefficients in `dim` commuting variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Polynomial {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Q) -> Polynomial {
        Polynomial::monomial(vec![0; dim], c)
    }

    pub fn one(dim: usize) -> Polynomial {
        Polynomial::constant(dim, Q::one())
    }

    pub fn var(dim: usize, i: usize) -> Polynomial {
        let mut e = vec![0; dim];
        e[i] = 1;
        Polynomial::monomial(e, Q::one())
    }

    pub fn monomial(exp: Vec<u32>, c: Q) -> Polynomial {
        let mut p = Polynomial::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Result<Polynomial, AlgebraError> {
        let mut p = Polynomial::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(AlgebraError::DimensionMismatch(dim, e.len()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Q {
        self.terms.get(exp).cloned().unwrap_or_else(Q::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: Q) {
        assert_eq!(exp.len(), self.dim, "exponent length");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, s: &Q) {
        assert_eq!(self.dim, other.dim, "polynomial dimensions differ");
        if s.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * s);
        }
    }

    pub fn scaled(&self, s: &Q) -> Polynomial {
        let mut p = Polynomial::zero(self.dim);
        p.add_scaled(self, s);
        p
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, other.dim, "polynomial dimensions differ");
        let mut p = Polynomial::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                p.add_term(e, ca * cb);
            }
        }
        p
    }

    /// `∂/∂x_i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, c * Q::from_integer(e[i].into()));
            }
        }
        p
    }

    /// All monomials of total degree `≤ max_degree`, in graded order.
    pub fn monomial_basis(dim: usize, max_degree: u32) -> Vec<Polynomial> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            let mut stack = vec![(Vec::new(), d)];
            while let Some((prefix, left)) = stack.pop() {
                if prefix.len() == dim - 1 {
                    let mut e = prefix;
                    e.push(left);
                    out.push(Polynomial::monomial(e, Q::one()));
                    continue;
                }
                for k in 0..=left {
                    let mut p = prefix.clone();
                    p.push(k);
                    stack.push((p, left - k));
                }
            }
        }
        out
    }

    /// One to three monomials of degree `≤ max_degree` with nonzero integer
    /// coefficients in `[-3, 3]`.
    pub fn random(dim: usize, max_degree: u32, rng: &mut impl rand::Rng) -> Polynomial {
        let basis = Polynomial::monomial_basis(dim, max_degree);
        let mut p = Polynomial::zero(dim);
        while p.is_zero() {
            for _ in 0..rng.random_range(1..=3) {
                let m = &basis[rng.random_range(0..basis.len())];
                let c = rng.random_range(1..=3i64) * if rng.random::<bool>() { 1 } else { -1 };
                p.add_scaled(m, &Q::from_integer(c.into()));
            }
        }
        p
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        p.add_scaled(o, &Q::one());
        p
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        p.add_scaled(o, &-Q::one());
        p
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", q_to_string(c))?;
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{p}")?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    terms: Vec<TermJson>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self.terms.iter().map(|(e, c)| TermJson { exp: e.clone(), coef: q_to_string(c) }).collect();
        let dim = if self.terms.is_empty() { Some(self.dim) } else { None };
        PolynomialJson { dim, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = PolynomialJson::deserialize(d)?;
        let dim = match (j.dim, j.terms.first()) {
            (Some(d), _) => d,
            (None, Some(t)) => t.exp.len(),
            (None, None) => return Err(D::Error::custom("empty polynomial needs \"dim\"")),
        };
        let terms = j
            .terms
            .into_iter()
            .map(|t| parse_q(&t.coef).map(|c| (t.exp, c)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Polynomial::from_terms(dim, terms).map_err(D::Error::custom)
    }
}

/// A truncated power series `Σ_{k ≤ N} h^k p_k` with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HSeries {
    #[serde(rename = "N")]
    pub order: usize,
    pub terms: Vec<Polynomial>,
}

impl HSeries {
    pub fn zero(dim: usize, order: usize) -> HSeries {
        HSeries { order, terms: vec![Polynomial::zero(dim); order + 1] }
    }

    pub fn constant_term(p: Polynomial, order: usize) -> HSeries {
        let mut s = HSeries::zero(p.dim(), order);
        s.terms[0] = p;
        s
    }

    pub fn dim(&self) -> usize {
        self.terms[0].dim()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(Polynomial::is_zero)
    }

    pub fn coefficient(&self, k: usize) -> &Polynomial {
        &self.terms[k]
    }
}

impl std::ops::Sub for &HSeries {
    type Output = HSeries;
    fn sub(self, o: &HSeries) -> HSeries {
        let order = self.order.min(o.order);
        HSeries { order, terms: (0..=order).map(|k| &self.terms[k] - &o.terms[k]).collect() }
    }
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, p) in self.terms.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "h^{k}[{p}]")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
