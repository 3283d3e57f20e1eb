use super::GraphVector;
use crate::graph::{Graph, Vertex};
use crate::rational::Q;

/// `g ∘_i g2`: insert `g2` at external vertex `i` (0-based) of `g`, summing
/// over every attachment of the edges entering `e_i` to vertices of `g2`
/// that keeps the result Lie-admissible.
///
/// Externals of the result are ordered `e_1..e_{i-1}, g2's externals,
/// e_{i+1}..e_m`; internal vertices of `g` come first.
pub fn compose_at(g: &Graph, g2: &Graph, i: usize) -> GraphVector {
    assert!(i < g.m(), "insertion index {i} out of range for {g}");
    let (n, m, n2, m2) = (g.n(), g.m(), g2.n(), g2.m());
    let mut out = GraphVector::zero(n + n2, m + m2 - 1);
    let outer = |t: Vertex| match t {
        Vertex::Internal(k) => Vertex::Internal(k),
        Vertex::External(j) if j < i => Vertex::External(j),
        Vertex::External(j) => Vertex::External(j + m2 - 1),
    };
    let inner = |t: Vertex| match t {
        Vertex::Internal(k) => Vertex::Internal(n + k),
        Vertex::External(j) => Vertex::External(i + j),
    };
    let mut base: Vec<[Vertex; 2]> = g
        .targets()
        .iter()
        .map(|p| [outer(p[0]), outer(p[1])])
        .collect();
    base.extend(g2.targets().iter().map(|p| [inner(p[0]), inner(p[1])]));

    let stubs = g.incoming(Vertex::External(i));
    let spots: Vec<Vertex> = (0..n2)
        .map(Vertex::Internal)
        .chain((0..m2).map(Vertex::External))
        .collect();
    let mut free: Vec<bool> = (0..n2).map(|k| g2.in_degree(Vertex::Internal(k)) == 0).collect();
    let mut choice = vec![0usize; stubs.len()];
    attach(0, &stubs, &spots, &mut free, &mut choice, &mut |choice| {
        let mut targets = base.clone();
        for (s, &e) in stubs.iter().enumerate() {
            targets[e / 2][e % 2] = inner(spots[choice[s]]);
        }
        let h = Graph::new(n + n2, m + m2 - 1, targets).expect("composition keeps admissibility");
        out.add_graph(&h, Q::from_integer(1.into()));
    });
    out
}

fn attach(
    s: usize,
    stubs: &[usize],
    spots: &[Vertex],
    free: &mut [bool],
    choice: &mut [usize],
    emit: &mut dyn FnMut(&[usize]),
) {
    if s == stubs.len() {
        emit(choice);
        return;
    }
    for (k, spot) in spots.iter().enumerate() {
        match *spot {
            Vertex::Internal(v) => {
                if !free[v] {
                    continue;
                }
                free[v] = false;
                choice[s] = k;
                attach(s + 1, stubs, spots, free, choice, emit);
                free[v] = true;
            }
            Vertex::External(_) => {
                choice[s] = k;
                attach(s + 1, stubs, spots, free, choice, emit);
            }
        }
    }
}

/// Sign of `∘_i` (0-based `i`) when inserting an element with `m2` external
/// vertices: `-(-1)^{i(m2-1)}` in 0-based form, which is `(-1)^i` for the
/// 1-based index whenever `m2 = 2`.
pub fn compose_sign(i: usize, m2: usize) -> i32 {
    if (i * (m2.saturating_sub(1))).is_multiple_of(2) {
        -1
    } else {
        1
    }
}

/// `v ∘ w = Σ_i ± v ∘_i w`, extended bilinearly.
pub fn compose(v: &GraphVector, w: &GraphVector) -> GraphVector {
    let (n, m) = v.bidegree();
    let (n2, m2) = w.bidegree();
    let mut out = GraphVector::zero(n + n2, m + m2 - 1);
    for (ka, ca) in v.iter() {
        let a = ka.representative();
        for (kb, cb) in w.iter() {
            let b = kb.representative();
            let c = ca * cb;
            for i in 0..m {
                let s = Q::from_integer(compose_sign(i, m2).into());
                out.add_scaled(&compose_at(&a, &b, i), &(&c * &s));
            }
        }
    }
    out
}

/// `[v, w] = v ∘ w - w ∘ v`.
pub fn bracket(v: &GraphVector, w: &GraphVector) -> GraphVector {
    &compose(v, w) - &compose(w, v)
}

/// `v ∘ w - (-1)^{(m_v-1)(m_w-1)} w ∘ v`.
pub fn graded_bracket(v: &GraphVector, w: &GraphVector) -> GraphVector {
    let odd = ((v.bidegree().1 - 1) * (w.bidegree().1 - 1)) % 2 == 1;
    if odd {
        &compose(v, w) + &compose(w, v)
    } else {
        bracket(v, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::canonicalize;
    use crate::rational::qi;
    use num_traits::Signed;

    #[test]
    fn insert_point_is_identity() {
        let g = Graph::two_wheel_boundary();
        for i in 0..2 {
            let v = compose_at(&g, &Graph::empty(1), i);
            assert_eq!(v, GraphVector::from_graph(&g, qi(1)));
        }
    }

    #[test]
    fn wedge_into_wedge() {
        // e1's single incoming edge goes to the inner vertex or one of its
        // two externals.
        let w = Graph::wedge();
        let v = compose_at(&w, &w, 0);
        assert_eq!(v.bidegree(), (2, 3));
        assert_eq!(v.len(), 3);
        for (_, c) in v.iter() {
            assert_eq!(c.abs(), qi(1));
        }
    }

    #[test]
    fn wedge_with_empty_cancels() {
        let e = GraphVector::from_graph(&Graph::empty(2), qi(1));
        let w = GraphVector::from_graph(&Graph::wedge(), qi(1));
        assert!((&compose(&w, &e) + &compose(&e, &w)).is_zero());
    }

    #[test]
    fn lie_filter_applies() {
        // inner graph's only internal vertex already has an incoming edge
        let inner = Graph::new(
            2,
            2,
            vec![[Vertex::Internal(1), Vertex::External(0)], [Vertex::External(0), Vertex::External(1)]],
        )
        .unwrap();
        let v = compose_at(&Graph::wedge(), &inner, 0);
        // stub may go to v1 (free), e1, e2 of inner; not v2
        assert_eq!(v.len(), 3);
        for (k, _) in v.iter() {
            assert!(k.representative().is_lie_admissible());
        }
        let _ = canonicalize(&inner);
    }
}
