//! The two-spiked wheel `Γ = (v1 → v2, e1; v2 → v1, e2)` and its capped
//! partner `Ĝ`, where both spikes end at a single point `v = i` of the upper
//! half-plane. For forms constant along `θ ↦ θ + 1/2` the sum
//! `W_Γ + Ŵ_G` does not depend on the form.

use super::angle::AngleMapKind;
use super::forms::OneForm;
use super::gauss::{EdgeSystem, Target};
use super::mc::{integrate, Base, McEstimate};
use super::preimage::{find_preimages, solve_system, SolverParams};
use crate::error::WeightError;
use crate::graph::{permutations, Graph, LabelledGraph};
use crate::rational::Q;
use num_bigint::BigInt;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

fn gamma_system() -> EdgeSystem {
    EdgeSystem::from_graph(&Graph::two_wheel_boundary(), vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
}

/// Edges in the order of `Γ`: `z1 → z2`, `z1 → v`, `z2 → z1`, `z2 → v`.
fn hat_system() -> EdgeSystem {
    EdgeSystem {
        n: 2,
        fixed: vec![Complex64::i()],
        edges: vec![(0, Target::Moving(1)), (0, Target::Fixed(0)), (1, Target::Moving(0)), (1, Target::Fixed(0))],
    }
}

/// `W_Γ` for the given form.
pub fn wheel_weight(form: &OneForm, samples: u64, seed: u64) -> Result<McEstimate, WeightError> {
    integrate(&gamma_system(), Base::Triangle, form, samples, seed)
}

/// `Ŵ_G`: minus the integral over `(x1, y1, x2, y2)` with `v = i`.
pub fn wheel_weight_hat(form: &OneForm, samples: u64, seed: u64) -> Result<McEstimate, WeightError> {
    let e = integrate(&hat_system(), Base::AroundI, form, samples, seed)?;
    Ok(McEstimate { est: -e.est, ..e })
}

#[derive(Clone, Debug, Serialize)]
pub struct WheelCount {
    pub value: Vec<f64>,
    /// `Σ_σ Σ_lifts (c_Γ − c_Ĝ)` over edge orders and the 16 lifts
    /// `r_k = s_k/2 + {0, 1/2}`.
    pub signed_total: i64,
    /// `signed_total / 384`.
    #[serde(with = "crate::rational::serde_q")]
    pub combined: Q,
}

/// Signed preimage count of the folded combined map at `s`.
pub fn wheel_folded_count(s: &[f64], params: &SolverParams) -> Result<WheelCount, WeightError> {
    if s.len() != 4 {
        return Err(WeightError::DimensionMismatch { expected: 4, got: s.len() });
    }
    let gamma = Graph::two_wheel_boundary();
    let hat = hat_system();
    let lifts: Vec<Vec<f64>> = (0..16u32)
        .map(|bits| (0..4).map(|k| s[k].rem_euclid(1.0) / 2.0 + if bits >> k & 1 == 1 { 0.5 } else { 0.0 }).collect())
        .collect();
    let jobs: Vec<(Vec<usize>, &Vec<f64>)> =
        permutations(4).into_iter().flat_map(|p| lifts.iter().map(move |r| (p.clone(), r))).collect();
    let parts: Vec<i64> = jobs
        .into_par_iter()
        .map(|(labels, r)| {
            let lg = LabelledGraph::new(gamma.clone(), labels.clone())?;
            let c_gamma: i64 = find_preimages(&lg, r, AngleMapKind::Hyperbolic, params)?
                .iter()
                .map(|p| (p.sign * lg.sign()) as i64)
                .sum();
            let theta: Vec<f64> = (0..4).map(|e| r[labels[e]]).collect();
            let c_hat: i64 = solve_system(&hat, &theta, params)?.iter().map(|(_, s, _)| *s as i64).sum();
            Ok(c_gamma - c_hat)
        })
        .collect::<Result<_, WeightError>>()?;
    let total: i64 = parts.iter().sum();
    Ok(WheelCount { value: s.to_vec(), signed_total: total, combined: Q::new(BigInt::from(total), BigInt::from(384)) })
}

#[derive(Clone, Debug, Serialize)]
pub struct WheelFormResult {
    pub form: OneForm,
    pub gamma: McEstimate,
    pub hat: McEstimate,
    pub combined: f64,
    pub combined_stderr: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WheelReport {
    pub forms: Vec<WheelFormResult>,
    pub counts: Vec<WheelCount>,
    /// Counts agree across regular values.
    pub counts_agree: bool,
    /// Every pair of forms agrees within twice the combined standard error.
    pub forms_agree: bool,
    /// Every form agrees with the count within twice its standard error.
    pub matches_count: bool,
    /// `Ŵ_G` vanishes within three standard errors for the uniform form.
    pub hat_uniform_vanishes: bool,
    pub pass: bool,
}

/// Runs the check for `forms` (each used through its folded version) at the
/// regular values `values`.
pub fn wheel_relation_check(
    forms: &[OneForm],
    values: &[Vec<f64>],
    samples: u64,
    seed: u64,
    params: &SolverParams,
) -> Result<WheelReport, WeightError> {
    let mut results = Vec::new();
    for (k, f) in forms.iter().enumerate() {
        let folded = match f {
            OneForm::Uniform | OneForm::Folded { .. } => f.clone(),
            _ => f.clone().folded(),
        };
        let s = seed.wrapping_add(2 * k as u64);
        let gamma = wheel_weight(&folded, samples, s)?;
        let hat = wheel_weight_hat(&folded, samples, s + 1)?;
        results.push(WheelFormResult {
            form: folded,
            combined: gamma.est + hat.est,
            combined_stderr: gamma.stderr.hypot(hat.stderr),
            gamma,
            hat,
        });
    }
    let counts = values.iter().map(|s| wheel_folded_count(s, params)).collect::<Result<Vec<_>, _>>()?;
    let counts_agree = counts.windows(2).all(|w| w[0].signed_total == w[1].signed_total);
    let forms_agree = results.iter().enumerate().all(|(i, a)| {
        results[i + 1..].iter().all(|b| (a.combined - b.combined).abs() <= 2.0 * a.combined_stderr.hypot(b.combined_stderr))
    });
    let target = counts.first().map(|c| c.signed_total as f64 / 384.0);
    let matches_count = target.is_some_and(|t| results.iter().all(|r| (r.combined - t).abs() <= 2.0 * r.combined_stderr));
    let hat_uniform_vanishes = results
        .iter()
        .filter(|r| r.form == OneForm::Uniform)
        .all(|r| r.hat.est.abs() <= 3.0 * r.hat.stderr);
    let pass = counts_agree && forms_agree && matches_count && hat_uniform_vanishes;
    Ok(WheelReport { forms: results, counts, counts_agree, forms_agree, matches_count, hat_uniform_vanishes, pass })
}
