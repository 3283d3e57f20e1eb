//! Weights as signed preimage counts of a regular value of the Gauss map,
//! summed over edge orders.

use super::angle::AngleMapKind;
use super::preimage::{find_preimages, SolverParams};
use crate::error::WeightError;
use crate::graph::{permutations, Graph, GraphClassKey, LabelledGraph, Vertex};
use crate::rational::{factorial, q, q_to_f64, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabellingCount {
    /// `labels[e]` is the position of edge `e` in the order.
    pub labels: Vec<usize>,
    pub preimages: usize,
    /// Signed count, oriented by the class representative.
    pub signed: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountedWeight {
    pub class: GraphClassKey,
    /// Sum of signed counts over distinct labellings.
    pub raw_count: i64,
    /// `W_G`: signed counts summed over every edge order, over `(2n)!`.
    #[serde(with = "crate::rational::serde_q")]
    pub weight: Q,
    /// `W_G / |Aut G|`.
    #[serde(with = "crate::rational::serde_q")]
    pub coefficient: Q,
    pub labellings: Vec<LabellingCount>,
    /// Loop graphs give counts that depend on the chosen value.
    pub value_dependent: bool,
}

/// `r_j = 1/2 + j/64`, `j = 0, …, k - 1`.
pub fn default_regular_value(k: usize) -> Vec<Q> {
    (0..k as i64).map(|j| q(32 + j, 64)).collect()
}

/// Edge permutations induced by automorphisms of `g` (unoriented, fixing
/// external vertices): `sigma[e]` is the image of edge `e`.
pub fn automorphism_edge_maps(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    for p in permutations(n) {
        let map = |t: Vertex| match t {
            Vertex::Internal(k) => Vertex::Internal(p[k]),
            e => e,
        };
        let mut sigma = vec![0usize; 2 * n];
        let ok = (0..n).all(|v| {
            let image = g.targets()[p[v]];
            (0..2).all(|s| match image.iter().position(|&t| t == map(g.targets()[v][s])) {
                Some(slot) => {
                    sigma[2 * v + s] = 2 * p[v] + slot;
                    true
                }
                None => false,
            })
        });
        if ok {
            out.push(sigma);
        }
    }
    out
}

/// One labelling per orbit of the automorphism group acting on edge orders.
pub fn distinct_labellings(g: &Graph) -> Vec<Vec<usize>> {
    let maps = automorphism_edge_maps(g);
    permutations(g.edge_count())
        .into_iter()
        .filter(|labels| {
            maps.iter().all(|s| {
                let moved: Vec<usize> = (0..labels.len()).map(|e| labels[s[e]]).collect();
                *labels <= moved
            })
        })
        .collect()
}

pub fn weight_counted(
    class: &GraphClassKey,
    r: &[Q],
    kind: AngleMapKind,
    params: &SolverParams,
) -> Result<CountedWeight, WeightError> {
    let g = class.representative();
    let k = g.edge_count();
    if class.m() != 2 {
        return Err(WeightError::Unsupported("counted weights need two external vertices".into()));
    }
    if r.len() != k {
        return Err(WeightError::DimensionMismatch { expected: k, got: r.len() });
    }
    if g.n() == 0 {
        return Ok(CountedWeight {
            class: class.clone(),
            raw_count: 1,
            weight: Q::one(),
            coefficient: Q::one(),
            labellings: vec![LabellingCount { labels: Vec::new(), preimages: 1, signed: 1 }],
            value_dependent: false,
        });
    }
    let aut = g.automorphism_count();
    if !g.is_essential() {
        return Ok(CountedWeight {
            class: class.clone(),
            raw_count: 0,
            weight: Q::zero(),
            coefficient: Q::zero(),
            labellings: Vec::new(),
            value_dependent: false,
        });
    }
    let rf: Vec<f64> = r.iter().map(q_to_f64).collect();
    let counts: Vec<LabellingCount> = distinct_labellings(&g)
        .into_par_iter()
        .map(|labels| {
            let lg = LabelledGraph::new(g.clone(), labels.clone())?;
            let pre = find_preimages(&lg, &rf, kind, params)?;
            let signed = pre.iter().map(|p| (p.sign * lg.sign()) as i64).sum();
            Ok(LabellingCount { labels, preimages: pre.len(), signed })
        })
        .collect::<Result<_, WeightError>>()?;
    let raw: i64 = counts.iter().map(|c| c.signed).sum();
    let coefficient = Q::new(BigInt::from(raw), factorial(k));
    Ok(CountedWeight {
        class: class.clone(),
        raw_count: raw,
        weight: &coefficient * BigInt::from(aut),
        coefficient,
        labellings: counts,
        value_dependent: g.loop_number() > 0,
    })
}

/// Weight for the semicircle form: cycles of internal vertices weigh zero,
/// every other class takes its counted weight at the default value.
pub fn weight_semicircle(
    class: &GraphClassKey,
    kind: AngleMapKind,
    params: &SolverParams,
) -> Result<CountedWeight, WeightError> {
    let g = class.representative();
    if g.has_oriented_cycle() {
        return Ok(CountedWeight {
            class: class.clone(),
            raw_count: 0,
            weight: Q::zero(),
            coefficient: Q::zero(),
            labellings: Vec::new(),
            value_dependent: false,
        });
    }
    let mut w = weight_counted(class, &default_regular_value(g.edge_count()), kind, params)?;
    w.value_dependent = false;
    Ok(w)
}
