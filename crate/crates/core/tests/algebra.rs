use dq_core::algebra::{
    bracket, compose, compose_at, coproduct, graded_bracket, jacobi_relations, quotient_space, GraphVector,
};
use dq_core::graph::{canonicalize, enumerate_graphs, EnumerateOptions, Graph, GraphClassKey, Vertex};
use dq_core::rational::{qi, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

fn classes(n: usize, m: usize) -> Vec<GraphVector> {
    enumerate_graphs(n, m, EnumerateOptions::default())
        .unwrap()
        .into_iter()
        .map(|c| GraphVector::from_graph(&c.representative, qi(1)))
        .collect()
}

fn assoc(x: &GraphVector, y: &GraphVector, z: &GraphVector) -> GraphVector {
    &compose(x, &compose(y, z)) - &compose(&compose(x, y), z)
}

#[test]
fn graded_pre_lie_identity_exhaustive() {
    let pool: Vec<GraphVector> = (0..=2).flat_map(|n| classes(n, 2)).collect();
    for x in &pool {
        for y in &pool {
            for z in &pool {
                // all of m = 2, so the graded sign is -1
                let lhs = assoc(x, y, z);
                let rhs = assoc(x, z, y);
                assert!((&lhs + &rhs).is_zero(), "x={x} y={y} z={z}");
            }
        }
    }
}

#[test]
fn graded_pre_lie_mixed_arity() {
    let pool: Vec<GraphVector> = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 1)]
        .iter()
        .flat_map(|&(n, m)| classes(n, m))
        .collect();
    for x in &pool {
        for y in &pool {
            for z in &pool {
                let (my, mz) = (y.bidegree().1, z.bidegree().1);
                let s = if ((my - 1) * (mz - 1)) % 2 == 0 { qi(1) } else { qi(-1) };
                let diff = &assoc(x, y, z) - &assoc(x, z, y).scaled(&s);
                assert!(diff.is_zero(), "x={x} y={y} z={z}");
            }
        }
    }
}

#[test]
fn bracket_antisymmetry() {
    let pool: Vec<GraphVector> = (0..=2).flat_map(|n| classes(n, 2)).collect();
    for a in &pool {
        for b in &pool {
            assert!((&bracket(a, b) + &bracket(b, a)).is_zero());
            // odd degrees (m = 2) make the graded bracket symmetric
            assert_eq!(graded_bracket(a, b), graded_bracket(b, a));
        }
    }
}

/// All oriented Lie-admissible graphs, with outgoing pairs in either order.
fn oriented_graphs(n: usize, m: usize) -> Vec<Graph> {
    let all: Vec<Vertex> = (0..n).map(Vertex::Internal).chain((0..m).map(Vertex::External)).collect();
    let mut pairs = Vec::new();
    for &a in &all {
        for &b in &all {
            if a != b {
                pairs.push([a, b]);
            }
        }
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    'outer: loop {
        let pick: Vec<[Vertex; 2]> = (0..n).map(|v| pairs[idx[v]]).collect();
        if let Ok(g) = Graph::new(n, m, pick) {
            if g.is_lie_admissible() {
                out.push(g);
            }
        }
        for k in 0..n {
            idx[k] += 1;
            if idx[k] < pairs.len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        return out;
    }
}

/// Rank of the Jacobi relations generated from every oriented graph and every
/// edge, computed densely over the AS classes.
fn naive_dim(n: usize, m: usize) -> usize {
    let graphs = oriented_graphs(n, m);
    let mut cols: BTreeMap<GraphClassKey, usize> = BTreeMap::new();
    for g in &graphs {
        let c = canonicalize(g);
        if c.sign != 0 {
            let next = cols.len();
            cols.entry(c.key).or_insert(next);
        }
    }
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for g in &graphs {
        for (u, w) in g.edges().filter_map(|(s, t)| match t {
            Vertex::Internal(w) => Some((s, w)),
            _ => None,
        }) {
            if g.targets()[w].contains(&Vertex::Internal(u)) {
                continue;
            }
            let x = *g.targets()[u].iter().find(|&&t| t != Vertex::Internal(w)).unwrap();
            let [y, z] = g.targets()[w];
            let mut row = vec![Q::zero(); cols.len()];
            for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
                let mut t = g.targets().to_vec();
                t[u] = [a, Vertex::Internal(w)];
                t[w] = [b, c];
                let Ok(h) = Graph::new(n, m, t) else { continue };
                let cc = canonicalize(&h);
                if cc.sign != 0 {
                    row[cols[&cc.key]] += qi(cc.sign as i64);
                }
            }
            rows.push(row);
        }
    }
    cols.len() - dense_rank(rows)
}

fn dense_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = Q::one() / rows[rank][c].clone();
        let pivot: Vec<Q> = rows[rank].iter().map(|x| x * &inv).collect();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for k in 0..width {
                    let d = &f * &pivot[k];
                    rows[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn quotient_dimensions_match_dense_rank() {
    assert_eq!(quotient_space(0, 2).unwrap().dim(), 1);
    assert_eq!(quotient_space(1, 2).unwrap().dim(), 1);
    for (n, m) in [(2, 2), (2, 3), (3, 2)] {
        let q = quotient_space(n, m).unwrap();
        assert_eq!(q.dim(), naive_dim(n, m), "dim J_{{{n},{m}}}");
        assert_eq!(q.dim() + q.relation_rank(), q.classes().len());
    }
}

#[test]
fn projection_is_linear() {
    let q = quotient_space(2, 2).unwrap();
    let cl = classes(2, 2);
    let a = Q::new(3.into(), 7.into());
    let b = qi(-2);
    for v in &cl {
        for w in &cl {
            let lhs = q.project(&(&v.scaled(&a) + &w.scaled(&b)));
            let rhs = &q.project(v).scaled(&a) + &q.project(w).scaled(&b);
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn composition_descends_to_quotient() {
    // the first relations of Lie-admissible graphs sit in G_{2,3} and G_{3,2}
    assert!(jacobi_relations(2, 2).unwrap().is_empty());
    let mut rels = jacobi_relations(2, 3).unwrap();
    assert_eq!(rels.len(), 1);
    rels.extend(jacobi_relations(3, 2).unwrap());
    let small: Vec<GraphVector> = [(0, 1), (0, 2), (1, 2), (0, 3)].iter().flat_map(|&(n, m)| classes(n, m)).collect();
    let mut spaces = BTreeMap::new();
    let mut space = |n: usize, m: usize| spaces.entry((n, m)).or_insert_with(|| quotient_space(n, m).unwrap()).clone();
    let mut nontrivial = 0;
    for r in &rels {
        let (nr, mr) = r.bidegree();
        for w in &small {
            let (nw, mw) = w.bidegree();
            let q = space(nr + nw, mr + mw - 1);
            for i in 0..mr {
                let rv = compose_each(r, w, Some(i));
                nontrivial += usize::from(!rv.is_zero());
                assert!(q.is_zero(&rv), "r ∘_{i} w with r={r} w={w}");
            }
            for i in 0..mw {
                let wv = compose_each(w, r, Some(i));
                nontrivial += usize::from(!wv.is_zero());
                assert!(q.is_zero(&wv), "w ∘_{i} r with r={r} w={w}");
            }
        }
    }
    assert!(nontrivial > 0);
    // a single class is not a relation, and stays nonzero
    let q = space(3, 4);
    let g = &classes(2, 3)[0];
    assert!(!q.is_zero(&compose_each(g, &classes(1, 2)[0], Some(0))));
}

fn compose_each(v: &GraphVector, w: &GraphVector, i: Option<usize>) -> GraphVector {
    let (n, m) = v.bidegree();
    let (n2, m2) = w.bidegree();
    let mut out = GraphVector::zero(n + n2, m + m2 - 1);
    for (ka, ca) in v.iter() {
        for (kb, cb) in w.iter() {
            for j in 0..m {
                if i.is_some_and(|i| i != j) {
                    continue;
                }
                out.add_scaled(&compose_at(&ka.representative(), &kb.representative(), j), &(ca * cb));
            }
        }
    }
    out
}

#[test]
fn wedge_composition_by_hand() {
    // e1 of the outer wedge receives one edge; attaching it to the inner
    // vertex, to e1' or to e2' gives three distinct graphs in G_{2,3}
    let w = Graph::wedge();
    let v = compose_at(&w, &w, 0);
    use Vertex::*;
    let expect = [
        Graph::new(2, 3, vec![[Internal(1), External(2)], [External(0), External(1)]]).unwrap(),
        Graph::new(2, 3, vec![[External(0), External(2)], [External(0), External(1)]]).unwrap(),
        Graph::new(2, 3, vec![[External(1), External(2)], [External(0), External(1)]]).unwrap(),
    ];
    let mut e = GraphVector::zero(2, 3);
    for g in &expect {
        e.add_graph(g, qi(1));
    }
    assert_eq!(v, e);
}

#[test]
fn coproduct_counts_on_order_two() {
    // independent count: subsets of internal vertices x consecutive blocks
    for c in enumerate_graphs(2, 2, EnumerateOptions { include_vanishing: true, ..Default::default() }).unwrap() {
        let g = &c.representative;
        let mut count = 0;
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            for s in [vec![], vec![0], vec![1], vec![0, 1]] {
                let inside = |t: Vertex| match t {
                    Vertex::Internal(k) => s.contains(&k),
                    Vertex::External(j) => j >= a && j < b,
                };
                let closed = s.iter().all(|&v| g.targets()[v].iter().all(|&t| inside(t)));
                let no_double = (0..2).filter(|v| !s.contains(v)).all(|v| !g.targets()[v].iter().all(|&t| inside(t)));
                if closed && no_double {
                    count += 1;
                }
            }
        }
        let terms = coproduct(g);
        assert_eq!(terms.len(), count, "{g}");
        assert!(terms.iter().any(|t| t.quotient.n() == 0 && t.sub == *g));
        let key = canonicalize(g).key;
        for t in &terms {
            assert!(compose_at(&t.quotient, &t.sub, t.position).iter().any(|(k, _)| *k == key));
        }
    }
}
