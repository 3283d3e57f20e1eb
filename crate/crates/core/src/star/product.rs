use super::lie::LieAlgebra;
use super::ops::apply_b;
use super::poly::{HSeries, Polynomial};
use crate::error::AlgebraError;
use crate::graph::GraphClassKey;
use crate::rational::Q;
use crate::weights::WeightTable;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// `f ⋆ g = Σ_n h^n Σ_{G ∈ G_{n,2}} W_G / |Aut G| · B_G(f, g)` through `order`,
/// over the classes accepted by `keep`.
pub fn star_filtered(
    table: &WeightTable,
    alg: &LieAlgebra,
    f: &Polynomial,
    g: &Polynomial,
    order: usize,
    keep: impl Fn(&GraphClassKey) -> bool,
) -> Result<HSeries, AlgebraError> {
    if order > table.n {
        return Err(crate::error::WeightError::MissingWeight(format!(
            "star product through order {order} needs weights through that order, table has {}",
            table.n
        ))
        .into());
    }
    let mut out = HSeries::zero(alg.dim(), order);
    for e in &table.entries {
        let n = e.class.n();
        if n > order || !keep(&e.class) {
            continue;
        }
        let w = table.exact(&e.class)?;
        if w.is_zero() {
            continue;
        }
        let g_rep = e.class.representative();
        let b = apply_b(&g_rep, alg, &[f.clone(), g.clone()])?;
        if b.is_zero() {
            continue;
        }
        let c = w / Q::from(BigInt::from(g_rep.automorphism_count()));
        out.terms[n].add_scaled(&b, &c);
    }
    Ok(out)
}

pub fn star(
    table: &WeightTable,
    alg: &LieAlgebra,
    f: &Polynomial,
    g: &Polynomial,
    order: usize,
) -> Result<HSeries, AlgebraError> {
    star_filtered(table, alg, f, g, order, |_| true)
}

/// Star product restricted to graphs without loops.
pub fn star_tree_level(
    table: &WeightTable,
    alg: &LieAlgebra,
    f: &Polynomial,
    g: &Polynomial,
    order: usize,
) -> Result<HSeries, AlgebraError> {
    star_filtered(table, alg, f, g, order, |k| k.representative().loop_number() == 0)
}

/// Bilinear extension to series, truncated at `order`.
pub fn star_series(
    table: &WeightTable,
    alg: &LieAlgebra,
    a: &HSeries,
    b: &HSeries,
    order: usize,
) -> Result<HSeries, AlgebraError> {
    let mut out = HSeries::zero(alg.dim(), order);
    for (i, p) in a.terms.iter().enumerate().take(order + 1) {
        if p.is_zero() {
            continue;
        }
        for (j, q) in b.terms.iter().enumerate().take(order + 1 - i) {
            if q.is_zero() {
                continue;
            }
            let s = star(table, alg, p, q, order - i - j)?;
            for (k, t) in s.terms.iter().enumerate() {
                out.terms[i + j + k].add_scaled(t, &Q::one());
            }
        }
    }
    Ok(out)
}

/// `(f ⋆ g) ⋆ k − f ⋆ (g ⋆ k)` through `order`.
pub fn associativity_residual(
    table: &WeightTable,
    alg: &LieAlgebra,
    f: &Polynomial,
    g: &Polynomial,
    k: &Polynomial,
    order: usize,
) -> Result<HSeries, AlgebraError> {
    let lift = |p: &Polynomial| HSeries::constant_term(p.clone(), order);
    let left = star_series(table, alg, &star(table, alg, f, g, order)?, &lift(k), order)?;
    let right = star_series(table, alg, &lift(f), &star(table, alg, g, k, order)?, order)?;
    Ok(&left - &right)
}

/// Elements of the universal enveloping algebra with `[X_i, X_j] = h Σ c X_k`,
/// in the ordered basis: `(sorted word, power of h) → coefficient`.
type Pbw = BTreeMap<(Vec<usize>, usize), Q>;

struct Straightener<'a> {
    alg: &'a LieAlgebra,
    memo: HashMap<Vec<usize>, Pbw>,
}

impl<'a> Straightener<'a> {
    fn new(alg: &'a LieAlgebra) -> Self {
        Straightener { alg, memo: HashMap::new() }
    }

    /// Ordered form of a word, using `X_b X_a = X_a X_b + h [X_b, X_a]`.
    fn normal(&mut self, w: &[usize]) -> Pbw {
        if let Some(r) = self.memo.get(w) {
            return r.clone();
        }
        let mut out = Pbw::new();
        match (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
            None => {
                out.insert((w.to_vec(), 0), Q::one());
            }
            Some(i) => {
                let (b, a) = (w[i], w[i + 1]);
                let mut swapped = w.to_vec();
                swapped.swap(i, i + 1);
                add_into(&mut out, &self.normal(&swapped), &Q::one(), 0);
                for k in 0..self.alg.dim() {
                    let c = self.alg.c(b, a, k).clone();
                    if c.is_zero() {
                        continue;
                    }
                    let mut shorter = w[..i].to_vec();
                    shorter.push(k);
                    shorter.extend_from_slice(&w[i + 2..]);
                    add_into(&mut out, &self.normal(&shorter), &c, 1);
                }
            }
        }
        self.memo.insert(w.to_vec(), out.clone());
        out
    }

    /// Symmetrization of the monomial with exponents `exp`.
    fn symmetrize(&mut self, exp: &[u32]) -> Pbw {
        let letters: Vec<usize> = exp.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect();
        let words = distinct_permutations(&letters);
        let inv = Q::new(BigInt::one(), BigInt::from(words.len()));
        let mut out = Pbw::new();
        for w in words {
            add_into(&mut out, &self.normal(&w), &inv, 0);
        }
        out
    }

    fn symmetrize_poly(&mut self, p: &Polynomial) -> Pbw {
        let mut out = Pbw::new();
        for (e, c) in p.terms() {
            add_into(&mut out, &self.symmetrize(e), c, 0);
        }
        out
    }

    fn mul(&mut self, a: &Pbw, b: &Pbw) -> Pbw {
        let mut out = Pbw::new();
        for ((wa, ha), ca) in a {
            for ((wb, hb), cb) in b {
                let w = [wa.as_slice(), wb.as_slice()].concat();
                add_into(&mut out, &self.normal(&w), &(ca * cb), ha + hb);
            }
        }
        out
    }

    /// Inverse of symmetrization, peeling off the longest words first.
    fn desymmetrize(&mut self, mut u: Pbw, order: usize) -> HSeries {
        let d = self.alg.dim();
        let mut out = HSeries::zero(d, order);
        while let Some(((w, hp), c)) =
            u.iter().max_by_key(|((w, hp), _)| (w.len(), std::cmp::Reverse(*hp))).map(|(k, c)| (k.clone(), c.clone()))
        {
            let mut exp = vec![0u32; d];
            for &l in &w {
                exp[l] += 1;
            }
            if hp <= order {
                out.terms[hp].add_term(exp.clone(), c.clone());
            }
            let s = self.symmetrize(&exp);
            add_into(&mut u, &s, &-c, hp);
        }
        out
    }
}

fn add_into(out: &mut Pbw, x: &Pbw, s: &Q, shift: usize) {
    for ((w, h), c) in x {
        let key = (w.clone(), h + shift);
        let v = out.entry(key.clone()).or_insert_with(Q::zero);
        *v += c * s;
        if v.is_zero() {
            out.remove(&key);
        }
    }
}

fn distinct_permutations(letters: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = letters.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// The product transported from the universal enveloping algebra through
/// symmetrization, truncated at `order`.
pub fn gutt_star(alg: &LieAlgebra, f: &Polynomial, g: &Polynomial, order: usize) -> Result<HSeries, AlgebraError> {
    if f.dim() != alg.dim() || g.dim() != alg.dim() {
        return Err(AlgebraError::DimensionMismatch(alg.dim(), f.dim().max(g.dim())));
    }
    let mut s = Straightener::new(alg);
    let (a, b) = (s.symmetrize_poly(f), s.symmetrize_poly(g));
    let u = s.mul(&a, &b);
    Ok(s.desymmetrize(u, order))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductComparison {
    pub equal: bool,
    /// Lowest power of `h` where the products differ, with the difference.
    pub first_difference: Option<(usize, String)>,
}

pub fn compare_products(a: &HSeries, b: &HSeries) -> ProductComparison {
    let d = a - b;
    let first = d.terms.iter().enumerate().find(|(_, p)| !p.is_zero()).map(|(k, p)| (k, p.to_string()));
    ProductComparison { equal: first.is_none(), first_difference: first }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn gutt_commutator_is_the_bracket() {
        let g = LieAlgebra::sl2();
        let (e, f) = (Polynomial::var(3, 0), Polynomial::var(3, 1));
        let ef = gutt_star(&g, &e, &f, 3).unwrap();
        let fe = gutt_star(&g, &f, &e, 3).unwrap();
        let diff = &ef - &fe;
        assert_eq!(diff.terms[1], Polynomial::var(3, 2));
        assert!(diff.terms[0].is_zero() && diff.terms[2].is_zero());
        assert_eq!(ef.terms[1], Polynomial::var(3, 2).scaled(&q(1, 2)));
    }

    #[test]
    fn gutt_on_heisenberg_squares() {
        // x ⋆ x² = x³ exactly, and y ⋆ x = xy - h z / 2
        let g = LieAlgebra::heisenberg();
        let x = Polynomial::var(3, 0);
        let y = Polynomial::var(3, 1);
        let p = gutt_star(&g, &x, &x.mul(&x), 3).unwrap();
        assert_eq!(p.terms[0], x.mul(&x).mul(&x));
        assert!(p.terms[1..].iter().all(Polynomial::is_zero));
        let r = gutt_star(&g, &y, &x, 3).unwrap();
        assert_eq!(r.terms[1], Polynomial::var(3, 2).scaled(&q(-1, 2)));
    }

    #[test]
    fn distinct_permutation_counts() {
        assert_eq!(distinct_permutations(&[0, 0, 1]).len(), 3);
        assert_eq!(distinct_permutations(&[0, 1, 2]).len(), 6);
        assert_eq!(distinct_permutations(&[]).len(), 1);
    }
}
