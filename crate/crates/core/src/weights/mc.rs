//! Monte-Carlo integration of `∏ ω(φ_e) · det J` over configuration space.
//!
//! Each internal vertex is drawn either from a base law on the upper
//! half-plane or, with probability 1/2, from a log-polar law centred on a
//! previously placed neighbour, which keeps the variance finite near
//! collisions and at infinity.

use super::angle::{angle_fast, AngleMapKind, Point};
use super::forms::OneForm;
use super::gauss::{determinant, EdgeSystem, Target};
use crate::error::WeightError;
use crate::graph::GraphClassKey;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub est: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Base law for vertices without a placed neighbour.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Base {
    /// Externals at 0 and 1: `(arg z, arg(z - 1))` uniform on the triangle
    /// `0 < α < β < π`, exact for the wedge.
    Triangle,
    /// Log-polar around `i`.
    AroundI,
}

const SHARDS: u64 = 64;

fn cauchy_density(s: f64) -> f64 {
    1.0 / (PI * (1.0 + s * s))
}

/// Length of the arc of directions from `c` at distance `r` that stay in the
/// upper half-plane.
fn arc(c: Point, r: f64) -> (f64, f64) {
    let a = c.im / r;
    if a >= 1.0 {
        (0.0, 2.0 * PI)
    } else {
        let t = a.asin();
        (-t, PI + 2.0 * t)
    }
}

fn sample_logpolar(rng: &mut ChaCha8Rng, c: Point, h: f64) -> Point {
    loop {
        let s = (PI * (rng.random::<f64>() - 0.5)).tan();
        let r = h * s.exp();
        if !r.is_finite() || r == 0.0 {
            continue;
        }
        let (lo, len) = arc(c, r);
        let z = c + Complex64::from_polar(r, lo + len * rng.random::<f64>());
        if z.im > 0.0 {
            return z;
        }
    }
}

fn logpolar_density(z: Point, c: Point, h: f64) -> f64 {
    let r = (z - c).norm();
    if r == 0.0 {
        return 0.0;
    }
    let (_, len) = arc(c, r);
    cauchy_density((r / h).ln()) / (r * r * len)
}

fn sample_triangle(rng: &mut ChaCha8Rng) -> Point {
    loop {
        let (u, v) = (rng.random::<f64>(), rng.random::<f64>());
        let (a, b) = (PI * u.min(v), PI * u.max(v));
        let z = Complex64::from_polar(b.sin() / (b - a).sin(), a);
        if z.is_finite() && z.im > 0.0 {
            return z;
        }
    }
}

fn triangle_density(z: Point) -> f64 {
    2.0 / (PI * PI) * z.im / (z.norm_sqr() * (z - 1.0).norm_sqr())
}

impl Base {
    fn sample(self, rng: &mut ChaCha8Rng) -> Point {
        match self {
            Base::Triangle => sample_triangle(rng),
            Base::AroundI => sample_logpolar(rng, Complex64::i(), 1.0),
        }
    }

    fn density(self, z: Point) -> f64 {
        match self {
            Base::Triangle => triangle_density(z),
            Base::AroundI => logpolar_density(z, Complex64::i(), 1.0),
        }
    }
}

/// Breadth-first order over the undirected internal adjacency, with the
/// neighbour each vertex is drawn around.
fn anchors(sys: &EdgeSystem) -> Vec<(usize, Option<usize>)> {
    let n = sys.n;
    let mut adj = vec![Vec::new(); n];
    for &(s, t) in &sys.edges {
        if let Target::Moving(w) = t {
            adj[s].push(w);
            adj[w].push(s);
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = out.len();
        out.push((root, None));
        let mut k = start;
        while k < out.len() {
            let v = out[k].0;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    out.push((w, Some(v)));
                }
            }
            k += 1;
        }
    }
    out
}

#[derive(Clone, Copy, Default)]
struct Moments {
    sum: f64,
    sum_sq: f64,
    count: u64,
}

/// `∫ ∏_e ω(φ_e) det J dx_1 dy_1 … dx_n dy_n`, edges and columns in the order
/// of `sys`.
pub(crate) fn integrate(
    sys: &EdgeSystem,
    base: Base,
    form: &OneForm,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, WeightError> {
    if !form.is_smooth() {
        return Err(WeightError::Unsupported("Monte-Carlo weights need a smooth form".into()));
    }
    if samples < 2 {
        return Err(WeightError::Unsupported("at least two samples are needed".into()));
    }
    let order = anchors(sys);
    let k = sys.dim();
    let shards: Vec<Moments> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let count = samples / SHARDS + u64::from(shard < samples % SHARDS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ shard);
            let mut z = vec![Complex64::new(0.0, 0.0); sys.n];
            let mut m = Moments::default();
            for _ in 0..count {
                let mut q = 1.0;
                for &(v, a) in &order {
                    match a {
                        None => {
                            z[v] = base.sample(&mut rng);
                            q *= base.density(z[v]);
                        }
                        Some(a) => {
                            let (c, h) = (z[a], z[a].im);
                            z[v] = if rng.random::<bool>() { base.sample(&mut rng) } else { sample_logpolar(&mut rng, c, h) };
                            q *= 0.5 * base.density(z[v]) + 0.5 * logpolar_density(z[v], c, h);
                        }
                    }
                }
                let mut f = 1.0;
                for &(s, t) in &sys.edges {
                    f *= form.density(angle_fast(z[s], sys.target(&z, t)));
                    if f == 0.0 {
                        break;
                    }
                }
                let x = if f == 0.0 || !(q > 0.0) { 0.0 } else { f * determinant(sys.jacobian(&z), k) / q };
                let x = if x.is_finite() { x } else { 0.0 };
                m.sum += x;
                m.sum_sq += x * x;
                m.count += 1;
            }
            m
        })
        .collect();
    let total = shards.iter().fold(Moments::default(), |a, b| Moments {
        sum: a.sum + b.sum,
        sum_sq: a.sum_sq + b.sum_sq,
        count: a.count + b.count,
    });
    let n = total.count as f64;
    let mean = total.sum / n;
    let var = ((total.sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(McEstimate { est: mean, stderr: (var / n).sqrt(), samples: total.count })
}

/// Monte-Carlo estimate of `W_G` for a class with two external vertices.
pub fn weight_mc(
    class: &GraphClassKey,
    form: &OneForm,
    kind: AngleMapKind,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, WeightError> {
    // both angle maps are the same function, so the integrand is shared
    let _ = kind;
    let g = class.representative();
    if g.m() != 2 {
        return Err(WeightError::Unsupported("weights need two external vertices".into()));
    }
    if g.n() == 0 {
        return Ok(McEstimate { est: 1.0, stderr: 0.0, samples: 0 });
    }
    if !g.is_essential() {
        return Ok(McEstimate { est: 0.0, stderr: 0.0, samples: 0 });
    }
    let sys = EdgeSystem::from_graph(&g, vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    integrate(&sys, Base::Triangle, form, samples, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{canonicalize, Graph};

    #[test]
    fn proposal_densities_integrate_to_one() {
        // grid in (ln r, direction); the Cauchy tails beyond |ln r| = 12 are left out
        let mut s = 0.0;
        let (nr, nt) = (4000, 400);
        for i in 0..nr {
            let u = -12.0 + 24.0 * (i as f64 + 0.5) / nr as f64;
            let r = u.exp();
            for j in 0..nt {
                let t = 2.0 * PI * (j as f64 + 0.5) / nt as f64;
                let z = Complex64::i() + Complex64::from_polar(r, t);
                if z.im > 0.0 {
                    s += logpolar_density(z, Complex64::i(), 1.0) * r * r * (24.0 / nr as f64) * (2.0 * PI / nt as f64);
                }
            }
        }
        let expect = 2.0 * 12f64.atan() / PI;
        assert!((s - expect).abs() < 1e-3, "{s}");
    }

    #[test]
    fn wedge_has_no_variance() {
        let key = canonicalize(&Graph::wedge()).key;
        let e = weight_mc(&key, &OneForm::Uniform, AngleMapKind::Hyperbolic, 1000, 1).unwrap();
        assert!((e.est - 0.5).abs() < 1e-9 && e.stderr < 1e-9, "{e:?}");
    }

    #[test]
    fn deterministic_under_seed() {
        let key = canonicalize(&Graph::two_wheel_boundary()).key;
        let a = weight_mc(&key, &OneForm::Uniform, AngleMapKind::Hyperbolic, 5000, 7).unwrap();
        let b = weight_mc(&key, &OneForm::Uniform, AngleMapKind::Hyperbolic, 5000, 7).unwrap();
        assert_eq!(a, b);
    }
}
