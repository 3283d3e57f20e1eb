use super::{canonicalize, Graph, GraphClassKey, Vertex};
use crate::error::GraphError;
use rayon::prelude::*;
use std::collections::BTreeMap;

pub const DEFAULT_MAX_N: usize = 5;

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub max_n: usize,
    /// Keep only graphs in which every external vertex receives an edge.
    pub essential_only: bool,
    /// Keep classes that vanish under AS (odd automorphisms).
    pub include_vanishing: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { max_n: DEFAULT_MAX_N, essential_only: false, include_vanishing: false }
    }
}

#[derive(Clone, Debug)]
pub struct GraphClass {
    pub key: GraphClassKey,
    pub representative: Graph,
    pub aut: usize,
    pub vanishing: bool,
    pub loop_number: usize,
}

/// One entry per isomorphism class of Lie-admissible graphs in `G_{n,m}`,
/// sorted by class key.
pub fn enumerate_graphs(n: usize, m: usize, opts: EnumerateOptions) -> Result<Vec<GraphClass>, GraphError> {
    if n > opts.max_n {
        return Err(GraphError::TooLarge { n, max: opts.max_n });
    }
    if n + m == 0 {
        return Err(GraphError::Malformed("n + m must be positive".into()));
    }
    let graphs = all_lie_admissible(n, m);
    let classes: BTreeMap<GraphClassKey, GraphClass> = graphs
        .par_iter()
        .filter(|g| !opts.essential_only || g.is_essential())
        .map(|g| {
            let c = canonicalize(g);
            (c.key.clone(), c)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .map(|(key, c)| {
            let representative = key.representative();
            let loop_number = representative.loop_number();
            (
                key.clone(),
                GraphClass { key, representative, aut: c.aut, vanishing: c.sign == 0, loop_number },
            )
        })
        .collect();
    Ok(classes
        .into_values()
        .filter(|c| opts.include_vanishing || !c.vanishing)
        .collect())
}

/// Every Lie-admissible graph with sorted outgoing pairs (one orientation).
pub(crate) fn all_lie_admissible(n: usize, m: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    let mut targets = Vec::with_capacity(n);
    let mut indeg = vec![0usize; n];
    fill(n, m, &mut targets, &mut indeg, &mut out);
    out
}

fn fill(n: usize, m: usize, targets: &mut Vec<[Vertex; 2]>, indeg: &mut [usize], out: &mut Vec<Graph>) {
    let v = targets.len();
    if v == n {
        out.push(Graph::new_unchecked(n, m, targets.clone()));
        return;
    }
    let cands: Vec<Vertex> = (0..n)
        .filter(|&k| k != v)
        .map(Vertex::Internal)
        .chain((0..m).map(Vertex::External))
        .collect();
    for a in 0..cands.len() {
        for b in a + 1..cands.len() {
            let pair = [cands[a], cands[b]];
            if pair.iter().any(|t| matches!(t, Vertex::Internal(k) if indeg[*k] >= 1)) {
                continue;
            }
            for t in pair {
                if let Vertex::Internal(k) = t {
                    indeg[k] += 1;
                }
            }
            targets.push(pair);
            fill(n, m, targets, indeg, out);
            targets.pop();
            for t in pair {
                if let Vertex::Internal(k) = t {
                    indeg[k] -= 1;
                }
            }
        }
    }
}
