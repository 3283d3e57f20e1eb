use crate::graph::{Graph, Vertex};

/// One term `(G/G') ⊗ G'` of the coproduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoproductTerm {
    pub quotient: Graph,
    pub sub: Graph,
    /// External vertex of the quotient (0-based) that `sub` was shrunk to,
    /// which is also the first original external vertex absorbed into it.
    /// `quotient ∘_position sub` contains the original graph.
    pub position: usize,
    /// Internal vertices of the original graph that form `sub`, in order.
    pub internal: Vec<usize>,
}

/// All subgraphs `G'` spanned by a set of internal vertices together with a
/// consecutive nonempty block of external vertices, such that both `G'` and
/// `G/G'` are Lie-admissible graphs.
///
/// Includes `(G, point)` for each external vertex and `(point, G)`.
pub fn coproduct(g: &Graph) -> Vec<CoproductTerm> {
    let (n, m) = (g.n(), g.m());
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 1..=m {
            for mask in 0u32..(1 << n) {
                if let Some(t) = split(g, mask, a, b) {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn split(g: &Graph, mask: u32, a: usize, b: usize) -> Option<CoproductTerm> {
    let (n, m) = (g.n(), g.m());
    let in_s = |v: usize| mask & (1 << v) != 0;
    let absorbed = |t: Vertex| match t {
        Vertex::Internal(k) => in_s(k),
        Vertex::External(j) => (a..b).contains(&j),
    };
    for v in 0..n {
        let pair = g.targets()[v];
        if in_s(v) {
            if !pair.iter().all(|&t| absorbed(t)) {
                return None;
            }
        } else if pair.iter().all(|&t| absorbed(t)) {
            return None;
        }
    }
    let inside: Vec<usize> = (0..n).filter(|&v| in_s(v)).collect();
    let outside: Vec<usize> = (0..n).filter(|&v| !in_s(v)).collect();
    let local = |list: &[usize], v: usize| list.iter().position(|&x| x == v).unwrap();

    let sub_targets = inside
        .iter()
        .map(|&v| {
            g.targets()[v].map(|t| match t {
                Vertex::Internal(k) => Vertex::Internal(local(&inside, k)),
                Vertex::External(j) => Vertex::External(j - a),
            })
        })
        .collect();
    let sub = Graph::new(inside.len(), b - a, sub_targets).ok()?;

    let quot_targets = outside
        .iter()
        .map(|&v| {
            g.targets()[v].map(|t| match t {
                _ if absorbed(t) => Vertex::External(a),
                Vertex::Internal(k) => Vertex::Internal(local(&outside, k)),
                Vertex::External(j) if j < a => Vertex::External(j),
                Vertex::External(j) => Vertex::External(j - (b - a) + 1),
            })
        })
        .collect();
    let quotient = Graph::new(outside.len(), m - (b - a) + 1, quot_targets).ok()?;
    if !(sub.is_lie_admissible() && quotient.is_lie_admissible()) {
        return None;
    }
    Some(CoproductTerm { quotient, sub, position: a, internal: inside })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::compose_at;
    use crate::graph::{canonicalize, Graph};

    #[test]
    fn wedge_terms() {
        let w = Graph::wedge();
        let terms = coproduct(&w);
        // (w, point) twice, (point, w) once
        assert_eq!(terms.len(), 3);
        assert!(terms.iter().any(|t| t.quotient.n() == 0 && t.quotient.m() == 1 && t.sub == w));
        assert_eq!(terms.iter().filter(|t| t.sub.n() == 0 && t.sub.m() == 1).count(), 2);
    }

    #[test]
    fn composition_reconstructs() {
        let g = Graph::two_wheel_boundary();
        let key = canonicalize(&g).key;
        for t in coproduct(&g) {
            let v = compose_at(&t.quotient, &t.sub, t.position);
            assert!(v.iter().any(|(k, _)| *k == key), "{:?}", t);
        }
    }
}
