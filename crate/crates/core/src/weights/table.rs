use super::angle::AngleMapKind;
use super::counted::{default_regular_value, weight_counted, weight_semicircle, CountedWeight};
use super::forms::OneForm;
use super::mc::weight_mc;
use super::preimage::SolverParams;
use crate::error::WeightError;
use crate::graph::{enumerate_graphs, EnumerateOptions, GraphClassKey};
use crate::rational::Q;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Counted,
    Mc,
    Semicircle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightValue {
    Exact(#[serde(with = "crate::rational::serde_q")] Q),
    Estimate { est: f64, stderr: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub class: GraphClassKey,
    pub kind: WeightKind,
    /// `W_G` for the class representative.
    pub value: WeightValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_count: Option<i64>,
}

/// Weights of every class in `G_{k,2}` for `k ≤ n`, as computed by one method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightTable {
    pub n: usize,
    pub m: usize,
    pub angle_map: AngleMapKind,
    pub form: OneForm,
    /// Value used for counting; lower orders use its initial segments.
    #[serde(with = "crate::rational::serde_q_vec")]
    pub regular_value: Vec<Q>,
    pub entries: Vec<WeightEntry>,
    pub seed: u64,
    #[serde(skip)]
    index: BTreeMap<GraphClassKey, usize>,
}

fn classes(order: usize) -> Result<Vec<GraphClassKey>, WeightError> {
    let opts = EnumerateOptions { max_n: order.max(5), ..Default::default() };
    let mut out = Vec::new();
    for k in 0..=order {
        out.extend(enumerate_graphs(k, 2, opts)?.into_iter().map(|c| c.key));
    }
    Ok(out)
}

fn exact_entry(w: CountedWeight, kind: WeightKind) -> WeightEntry {
    WeightEntry { class: w.class, kind, value: WeightValue::Exact(w.weight), raw_count: Some(w.raw_count) }
}

impl WeightTable {
    fn assemble(
        n: usize,
        angle_map: AngleMapKind,
        form: OneForm,
        regular_value: Vec<Q>,
        entries: Vec<WeightEntry>,
        seed: u64,
    ) -> WeightTable {
        let mut t = WeightTable { n, m: 2, angle_map, form, regular_value, entries, seed, index: BTreeMap::new() };
        t.reindex();
        t
    }

    fn reindex(&mut self) {
        self.index = self.entries.iter().enumerate().map(|(i, e)| (e.class.clone(), i)).collect();
    }

    /// Signed preimage counts at `r` (default `1/2 + j/64`); the form
    /// recorded is the point form at `r`.
    pub fn counted(
        order: usize,
        r: Option<Vec<Q>>,
        kind: AngleMapKind,
        params: &SolverParams,
    ) -> Result<WeightTable, WeightError> {
        let r = r.unwrap_or_else(|| default_regular_value(2 * order));
        if r.len() < 2 * order {
            return Err(WeightError::DimensionMismatch { expected: 2 * order, got: r.len() });
        }
        let entries = classes(order)?
            .into_iter()
            .map(|c| {
                let k = c.representative().edge_count();
                weight_counted(&c, &r[..k], kind, params).map(|w| exact_entry(w, WeightKind::Counted))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let form = OneForm::Point { values: r.clone() };
        Ok(WeightTable::assemble(order, kind, form, r, entries, params.seed))
    }

    pub fn semicircle(order: usize, kind: AngleMapKind, params: &SolverParams) -> Result<WeightTable, WeightError> {
        let entries = classes(order)?
            .into_iter()
            .map(|c| weight_semicircle(&c, kind, params).map(|w| exact_entry(w, WeightKind::Semicircle)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeightTable::assemble(order, kind, OneForm::semicircle(), default_regular_value(2 * order), entries, params.seed))
    }

    pub fn mc(order: usize, form: &OneForm, kind: AngleMapKind, samples: u64, seed: u64) -> Result<WeightTable, WeightError> {
        let entries = classes(order)?
            .into_iter()
            .map(|c| {
                weight_mc(&c, form, kind, samples, seed).map(|e| WeightEntry {
                    class: c,
                    kind: WeightKind::Mc,
                    value: WeightValue::Estimate { est: e.est, stderr: e.stderr },
                    raw_count: None,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeightTable::assemble(order, kind, form.clone(), Vec::new(), entries, seed))
    }

    pub fn get(&self, class: &GraphClassKey) -> Option<&WeightEntry> {
        self.index.get(class).map(|&i| &self.entries[i])
    }

    /// Exact `W_G`, or an error for missing classes and estimates.
    pub fn exact(&self, class: &GraphClassKey) -> Result<Q, WeightError> {
        match self.get(class).map(|e| &e.value) {
            Some(WeightValue::Exact(q)) => Ok(q.clone()),
            Some(WeightValue::Estimate { .. }) => {
                Err(WeightError::Unsupported(format!("weight of {class} is only an estimate")))
            }
            None => Err(WeightError::MissingWeight(class.to_string())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("weight tables serialize")
    }

    pub fn from_json(s: &str) -> Result<WeightTable, WeightError> {
        let mut t: WeightTable =
            serde_json::from_str(s).map_err(|e| WeightError::Unsupported(format!("bad weight table: {e}")))?;
        t.reindex();
        Ok(t)
    }
}
