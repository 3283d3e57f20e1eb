use super::angle::AngleMapKind;
use super::counted::{default_regular_value, weight_counted};
use super::preimage::SolverParams;
use crate::error::WeightError;
use crate::graph::{canonicalize, enumerate_graphs, EnumerateOptions, GraphClassKey};
use crate::rational::q_to_string;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ProductWeight {
    pub left: GraphClassKey,
    pub right: GraphClassKey,
    pub product: GraphClassKey,
    pub expected: String,
    pub counted: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicativityCheck {
    pub cases: Vec<ProductWeight>,
    pub pass: bool,
}

/// `W(G_1 G_2) = W(G_1) W(G_2)` for products of loop-free connected classes
/// of total order `≤ max_n`, all counted at the default value.
pub fn multiplicativity_check(
    max_n: usize,
    kind: AngleMapKind,
    params: &SolverParams,
) -> Result<MultiplicativityCheck, WeightError> {
    let mut factors = Vec::new();
    for n in 1..max_n {
        for c in enumerate_graphs(n, 2, EnumerateOptions::default())? {
            let g = &c.representative;
            if g.loop_number() == 0 && g.internal_components().len() == 1 && g.is_essential() {
                factors.push(c.key);
            }
        }
    }
    let weight = |k: &GraphClassKey| {
        let e = k.representative().edge_count();
        weight_counted(k, &default_regular_value(e), kind, params).map(|w| w.weight)
    };
    let mut cases = Vec::new();
    let mut pass = true;
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i..] {
            if a.n() + b.n() > max_n {
                continue;
            }
            let g = a.representative().product(&b.representative())?;
            let c = canonicalize(&g);
            if c.sign == 0 {
                continue;
            }
            let expected = weight(a)? * weight(b)?;
            let counted = weight(&c.key)? * crate::rational::qi(c.sign as i64);
            pass &= expected == counted;
            cases.push(ProductWeight {
                left: a.clone(),
                right: b.clone(),
                product: c.key,
                expected: q_to_string(&expected),
                counted: q_to_string(&counted),
            });
        }
    }
    Ok(MultiplicativityCheck { cases, pass })
}
