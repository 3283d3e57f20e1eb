//! Canonical forms of oriented graphs up to isomorphism fixing external
//! vertices, with the AS sign relating a graph to its representative.

use super::{permutations, Graph, Vertex};
use crate::error::GraphError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Canonical identifier of an unoriented isomorphism class.
///
/// The representative has every outgoing pair sorted, internal targets
/// before external ones; the oriented class of the representative is the
/// positive generator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GraphClassKey {
    n: u8,
    m: u8,
    codes: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub key: GraphClassKey,
    /// `g = sign * [representative]`; 0 when an odd automorphism forces `g = -g`.
    pub sign: i32,
    pub aut: usize,
}

impl GraphClassKey {
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    fn decode(&self, c: u8) -> Vertex {
        let c = c as usize;
        if c < self.n() {
            Vertex::Internal(c)
        } else {
            Vertex::External(c - self.n())
        }
    }

    pub fn representative(&self) -> Graph {
        let targets = self
            .codes
            .chunks(2)
            .map(|p| [self.decode(p[0]), self.decode(p[1])])
            .collect();
        Graph::new_unchecked(self.n(), self.m(), targets)
    }
}

impl fmt::Display for GraphClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}:", self.n, self.m)?;
        for (k, p) in self.codes.chunks(2).enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}{}", self.decode(p[0]), self.decode(p[1]))?;
        }
        Ok(())
    }
}

impl FromStr for GraphClassKey {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, GraphError> {
        let bad = || GraphError::Malformed(format!("bad class key {s:?}"));
        let (dims, body) = s.split_once(':').ok_or_else(bad)?;
        let (n, m) = dims.split_once('.').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let m: usize = m.parse().map_err(|_| bad())?;
        let mut targets = Vec::new();
        if !body.is_empty() {
            for pair in body.split(',') {
                let split = pair[1..].find(['v', 'e']).ok_or_else(bad)? + 1;
                let (a, b) = pair.split_at(split);
                targets.push([Vertex::parse(a)?, Vertex::parse(b)?]);
            }
        }
        let g = Graph::new(n, m, targets)?;
        let c = canonicalize(&g);
        if c.sign != 1 || c.key.to_string() != s {
            return Err(bad());
        }
        Ok(c.key)
    }
}

impl Serialize for GraphClassKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GraphClassKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Vertex invariant preserved by isomorphisms; canonical relabelings only
/// permute vertices within blocks of equal invariant.
fn invariant(g: &Graph, v: usize) -> (usize, usize, Vec<usize>) {
    let mut ext: Vec<usize> = g.targets[v]
        .iter()
        .filter_map(|t| match t {
            Vertex::External(j) => Some(*j),
            _ => None,
        })
        .collect();
    ext.sort_unstable();
    (2 - ext.len(), g.in_degree(Vertex::Internal(v)), ext)
}

/// Relabelings consistent with the invariant ordering: `perm[old] = new`.
fn block_permutations(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n;
    let mut order: Vec<usize> = (0..n).collect();
    let inv: Vec<_> = (0..n).map(|v| invariant(g, v)).collect();
    order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match blocks.last_mut() {
            Some(b) if inv[b[0]] == inv[v] => b.push(v),
            _ => blocks.push(vec![v]),
        }
    }
    let mut result = vec![vec![0usize; n]];
    let mut offset = 0;
    for b in &blocks {
        let perms = permutations(b.len());
        let mut next = Vec::with_capacity(result.len() * perms.len());
        for base in &result {
            for p in &perms {
                let mut q = base.clone();
                for (i, &v) in b.iter().enumerate() {
                    q[v] = offset + p[i];
                }
                next.push(q);
            }
        }
        result = next;
        offset += b.len();
    }
    result
}

fn encode(g: &Graph, perm: &[usize], out: &mut [u8]) -> bool {
    let n = g.n;
    let code = |t: Vertex| -> u8 {
        match t {
            Vertex::Internal(k) => perm[k] as u8,
            Vertex::External(j) => (n + j) as u8,
        }
    };
    let mut odd = false;
    for (v, pair) in g.targets.iter().enumerate() {
        let (a, b) = (code(pair[0]), code(pair[1]));
        let slot = 2 * perm[v];
        if a < b {
            out[slot] = a;
            out[slot + 1] = b;
        } else {
            out[slot] = b;
            out[slot + 1] = a;
            odd = !odd;
        }
    }
    odd
}

pub fn canonicalize(g: &Graph) -> Canonical {
    let perms = block_permutations(g);
    let mut best: Option<Vec<u8>> = None;
    let mut parities: Vec<bool> = Vec::new();
    let mut buf = vec![0u8; 2 * g.n];
    for p in &perms {
        let odd = encode(g, p, &mut buf);
        match &best {
            Some(b) if buf > *b => {}
            Some(b) if buf == *b => parities.push(odd),
            _ => {
                best = Some(buf.clone());
                parities.clear();
                parities.push(odd);
            }
        }
    }
    let codes = best.unwrap_or_default();
    let sign = if parities.iter().all(|&o| o == parities[0]) {
        if parities[0] {
            -1
        } else {
            1
        }
    } else {
        0
    };
    Canonical {
        key: GraphClassKey { n: g.n as u8, m: g.m as u8, codes },
        sign,
        aut: parities.len(),
    }
}

/// Canonicalize a batch in parallel, preserving order.
pub fn canonicalize_many(graphs: &[Graph]) -> Vec<Canonical> {
    use rayon::prelude::*;
    graphs.par_iter().map(canonicalize).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Vertex::*;

    #[test]
    fn wedge_and_flip() {
        let g = Graph::wedge();
        let a = canonicalize(&g);
        let b = canonicalize(&g.flipped(0));
        assert_eq!(a.key, b.key);
        assert_eq!((a.sign, b.sign), (1, -1));
        assert_eq!(a.aut, 1);
    }

    #[test]
    fn representative_is_fixed_point() {
        let g = Graph::new(2, 2, vec![[External(1), Internal(1)], [External(1), External(0)]]).unwrap();
        let c = canonicalize(&g);
        let r = c.key.representative();
        let c2 = canonicalize(&r);
        assert_eq!(c2.key, c.key);
        assert_eq!(c2.sign, 1);
    }

    #[test]
    fn wedge_square_has_two_automorphisms() {
        let w = Graph::wedge();
        assert_eq!(canonicalize(&w.product(&w).unwrap()).aut, 2);
    }

    #[test]
    fn odd_automorphism_detected() {
        // v1 -> (v2, v3) with v2, v3 identical wedges: swapping them flips v1.
        let g = Graph::new(
            3,
            2,
            vec![[Internal(1), Internal(2)], [External(0), External(1)], [External(0), External(1)]],
        )
        .unwrap();
        let c = canonicalize(&g);
        assert_eq!(c.sign, 0);
        assert_eq!(c.aut, 2);
    }

    #[test]
    fn key_string_round_trip() {
        let g = Graph::two_wheel_boundary();
        let k = canonicalize(&g).key;
        let s = k.to_string();
        assert_eq!(s.parse::<GraphClassKey>().unwrap(), k);
        let e = canonicalize(&Graph::empty(2)).key;
        assert_eq!(e.to_string(), "0.2:");
        assert_eq!("0.2:".parse::<GraphClassKey>().unwrap(), e);
        assert!("1.2:e2e1".parse::<GraphClassKey>().is_err());
    }
}
