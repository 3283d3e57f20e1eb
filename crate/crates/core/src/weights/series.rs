//! The generating series `Z = Σ_G W_G / |Aut G| · [G]` and its logarithm.

use super::table::WeightTable;
use crate::algebra::{compose, quotient_space, GraphVector};
use crate::error::WeightError;
use crate::graph::GraphClassKey;
use crate::rational::{qi, Q};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

/// Degree-`n` part of `Z` from exact weights in `table`.
pub fn z_vector(table: &WeightTable, n: usize) -> Result<GraphVector, WeightError> {
    if n > table.n {
        return Err(WeightError::MissingWeight(format!("order {n} exceeds table order {}", table.n)));
    }
    let mut z = GraphVector::zero(n, table.m);
    for e in table.entries.iter().filter(|e| e.class.n() == n) {
        let w = table.exact(&e.class)?;
        if w.is_zero() {
            continue;
        }
        let aut = e.class.representative().automorphism_count();
        z.add_key(e.class.clone(), w / Q::from(BigInt::from(aut)));
    }
    Ok(z)
}

/// All parts `Z_0, …, Z_order`.
pub fn z_series(table: &WeightTable, order: usize) -> Result<Vec<GraphVector>, WeightError> {
    (0..=order).map(|n| z_vector(table, n)).collect()
}

/// `ln Z` for the graph product, through `order`; `Z_0` must be the unit.
pub fn ln_z(table: &WeightTable, order: usize) -> Result<Vec<GraphVector>, WeightError> {
    let z = z_series(table, order)?;
    let unit: GraphClassKey = "0.2:".parse().expect("empty graph key");
    if z[0].len() != 1 || z[0].coefficient(&unit) != qi(1) {
        return Err(WeightError::Unsupported("Z_0 is not the unit".into()));
    }
    let m = table.m;
    // x = Z - 1 has no degree-0 part; x^k starts in degree k
    let mut out: Vec<GraphVector> = (0..=order).map(|n| GraphVector::zero(n, m)).collect();
    let mut power: Vec<GraphVector> = z.clone();
    power[0] = GraphVector::zero(0, m);
    for k in 1..=order {
        let c = Q::new(BigInt::from(if k % 2 == 1 { 1 } else { -1 }), BigInt::from(k));
        for n in k..=order {
            out[n].add_scaled(&power[n], &c);
        }
        let mut next: Vec<GraphVector> = (0..=order).map(|n| GraphVector::zero(n, m)).collect();
        for a in 1..=order {
            for b in 1..=order - a {
                next[a + b].add_scaled(&power[a].product(&z[b]), &qi(1));
            }
        }
        power = next;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ZzReport {
    pub n: usize,
    /// Image of `Σ_k Z_{n-k} ∘ Z_k` in `J_{n,3}`.
    pub residual: Vec<(GraphClassKey, String)>,
    pub quotient_dim: usize,
    pub zero: bool,
}

/// Checks `Σ_k Z_{n-k} ∘ Z_k = 0` in `J_{n,3}`.
pub fn zz_check(table: &WeightTable, n: usize) -> Result<ZzReport, WeightError> {
    let z = z_series(table, n)?;
    let mut sum = GraphVector::zero(n, 3);
    for k in 0..=n {
        sum.add_scaled(&compose(&z[n - k], &z[k]), &qi(1));
    }
    let q = quotient_space(n, 3)?;
    let r = q.project(&sum);
    Ok(ZzReport {
        n,
        residual: r.iter().map(|(k, c)| (k.clone(), crate::rational::q_to_string(c))).collect(),
        quotient_dim: q.dim(),
        zero: r.is_zero(),
    })
}
