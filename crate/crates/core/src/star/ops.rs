//! Polydifferential operators `B_G` attached to graphs, for a linear Poisson
//! structure.

use super::lie::LieAlgebra;
use super::poly::Polynomial;
use crate::algebra::{jacobi_relations, GraphVector};
use crate::error::AlgebraError;
use crate::graph::{Graph, Vertex};
use crate::rational::Q;
use num_traits::{One, Zero};
use serde::Serialize;

/// `{f, g} = Σ α^{ij} ∂_i f ∂_j g`.
pub fn poisson_bracket(alg: &LieAlgebra, f: &Polynomial, g: &Polynomial) -> Polynomial {
    let d = alg.dim();
    let mut out = Polynomial::zero(d);
    for i in 0..d {
        let fi = f.derivative(i);
        if fi.is_zero() {
            continue;
        }
        for j in 0..d {
            let gj = g.derivative(j);
            if gj.is_zero() {
                continue;
            }
            let p = fi.mul(&gj);
            for k in 0..d {
                let c = alg.c(i, j, k);
                if !c.is_zero() {
                    out.add_scaled(&p.mul(&Polynomial::var(d, k)), c);
                }
            }
        }
    }
    out
}

/// `B_G(f_1, …, f_m)`: edge `e = 2v + s` carries a summation index, vertex
/// `v` contributes `α^{i_{2v} i_{2v+1}}` differentiated along its incoming
/// edges, and argument `j` is differentiated along the edges ending at `e_j`.
pub fn apply_b(g: &Graph, alg: &LieAlgebra, args: &[Polynomial]) -> Result<Polynomial, AlgebraError> {
    let d = alg.dim();
    if args.len() != g.m() {
        return Err(AlgebraError::ArgumentCount { expected: g.m(), got: args.len() });
    }
    if let Some(a) = args.iter().find(|a| a.dim() != d) {
        return Err(AlgebraError::DimensionMismatch(d, a.dim()));
    }
    let n = g.n();
    let incoming: Vec<Vec<usize>> = (0..n).map(|v| g.incoming(Vertex::Internal(v))).collect();
    // second derivatives of a linear bivector vanish
    if incoming.iter().any(|i| i.len() > 1) {
        return Ok(Polynomial::zero(d));
    }
    let ext_in: Vec<Vec<usize>> = (0..g.m()).map(|j| g.incoming(Vertex::External(j))).collect();
    let mut out = Polynomial::zero(d);
    let mut idx = vec![0usize; 2 * n];
    loop {
        let mut coef = Q::one();
        let mut linear = Polynomial::one(d);
        for v in 0..n {
            let (a, b) = (idx[2 * v], idx[2 * v + 1]);
            match incoming[v].first() {
                Some(&e) => coef *= alg.c(a, b, idx[e]),
                None => {
                    let mut l = Polynomial::zero(d);
                    for k in 0..d {
                        l.add_term(unit(d, k), alg.c(a, b, k).clone());
                    }
                    linear = linear.mul(&l);
                }
            }
            if coef.is_zero() || linear.is_zero() {
                break;
            }
        }
        if !coef.is_zero() && !linear.is_zero() {
            let mut term = linear.scaled(&coef);
            for (j, f) in args.iter().enumerate() {
                let mut df = f.clone();
                for &e in &ext_in[j] {
                    df = df.derivative(idx[e]);
                    if df.is_zero() {
                        break;
                    }
                }
                term = term.mul(&df);
                if term.is_zero() {
                    break;
                }
            }
            out.add_scaled(&term, &Q::one());
        }
        if !advance(&mut idx, d) {
            return Ok(out);
        }
    }
}

fn unit(d: usize, k: usize) -> Vec<u32> {
    let mut e = vec![0; d];
    e[k] = 1;
    e
}

fn advance(idx: &mut [usize], d: usize) -> bool {
    for x in idx.iter_mut() {
        *x += 1;
        if *x < d {
            return true;
        }
        *x = 0;
    }
    false
}

/// Linear extension of [`apply_b`] to graph vectors.
pub fn apply_b_vector(v: &GraphVector, alg: &LieAlgebra, args: &[Polynomial]) -> Result<Polynomial, AlgebraError> {
    let mut out = Polynomial::zero(alg.dim());
    for (k, c) in v.iter() {
        out.add_scaled(&apply_b(&k.representative(), alg, args)?, c);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub n: usize,
    pub m: usize,
    pub relations: usize,
    pub argument_tuples: usize,
    /// `(relation, arguments)` pairs with nonzero image.
    pub failures: Vec<String>,
    pub pass: bool,
}

/// `B_R(f_1, …, f_m) = 0` for every Jacobi relation `R` in `G_{n,m}` and every
/// tuple of arguments drawn from `pool`.
pub fn b_respects_relations(
    alg: &LieAlgebra,
    n: usize,
    m: usize,
    pool: &[Polynomial],
) -> Result<RelationCheck, AlgebraError> {
    let rels = jacobi_relations(n, m)?;
    let mut failures = Vec::new();
    let mut tuples = 0;
    let mut idx = vec![0usize; m];
    loop {
        let args: Vec<Polynomial> = idx.iter().map(|&i| pool[i].clone()).collect();
        tuples += 1;
        for r in &rels {
            let v = apply_b_vector(r, alg, &args)?;
            if !v.is_zero() {
                let a: Vec<String> = args.iter().map(|p| p.to_string()).collect();
                failures.push(format!("{r} on ({}) gives {v}", a.join(", ")));
            }
        }
        if pool.is_empty() || !advance(&mut idx, pool.len()) {
            break;
        }
    }
    Ok(RelationCheck { n, m, relations: rels.len(), argument_tuples: tuples, pass: failures.is_empty(), failures })
}

/// Polynomials whose brackets with the coordinates vanish identically are
/// Casimirs; used as an independent check of [`apply_b`] on the wedge.
pub fn is_casimir(alg: &LieAlgebra, f: &Polynomial) -> bool {
    (0..alg.dim()).all(|i| poisson_bracket(alg, &Polynomial::var(alg.dim(), i), f).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn wedge_is_the_bracket() {
        let g = LieAlgebra::sl2();
        let basis = Polynomial::monomial_basis(3, 2);
        for f in &basis {
            for h in &basis {
                let b = apply_b(&Graph::wedge(), &g, &[f.clone(), h.clone()]).unwrap();
                assert_eq!(b, poisson_bracket(&g, f, h));
            }
        }
    }

    #[test]
    fn coordinate_brackets() {
        let g = LieAlgebra::sl2();
        let (e, f, h) = (Polynomial::var(3, 0), Polynomial::var(3, 1), Polynomial::var(3, 2));
        assert_eq!(poisson_bracket(&g, &e, &f), h);
        assert_eq!(poisson_bracket(&g, &h, &e), e.scaled(&qi(2)));
        // quadratic Casimir e f + f e + h²/2, up to scale
        let cas = &e.mul(&f).scaled(&qi(2)) + &h.mul(&h).scaled(&crate::rational::q(1, 2));
        assert!(is_casimir(&g, &cas));
    }

    #[test]
    fn argument_checks() {
        let g = LieAlgebra::heisenberg();
        assert!(apply_b(&Graph::wedge(), &g, &[Polynomial::one(3)]).is_err());
        assert!(apply_b(&Graph::wedge(), &g, &[Polynomial::one(2), Polynomial::one(2)]).is_err());
    }
}
