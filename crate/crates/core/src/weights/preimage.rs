//! Preimages of a point under a Gauss map.
//!
//! If the internal vertices carry no oriented cycle, vertices are placed one
//! at a time, sinks first: each lies on the level curve of one of its edges
//! and the other edge gives a scalar equation along that curve, scanned on a
//! logarithmic grid and refined by bisection. Graphs with cycles fall back to
//! damped Newton from a grid of starting points in reduced coordinates.

use super::angle::{angle, angle_fast, level_curve, AngleMapKind, Point};
use super::gauss::{determinant, relative_det, solve, Configuration, EdgeSystem, Target};
use crate::error::WeightError;
use crate::graph::LabelledGraph;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    /// Points of the logarithmic scan along each level curve.
    pub grid: usize,
    /// Scan range along a level curve, relative to the distance between the
    /// two targets of the vertex being placed.
    pub s_min: f64,
    pub s_max: f64,
    /// Solutions closer than this (relative) are merged.
    pub dedup: f64,
    /// Residual required after polishing.
    pub polish_tol: f64,
    /// Starting points per reduced coordinate for the Newton fallback.
    pub seeds_per_dim: usize,
    pub newton_iters: usize,
    /// Smallest accepted `|det J| / ∏‖row‖` at a solution.
    pub min_rel_det: f64,
    pub seed: u64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            grid: 4000,
            s_min: 1e-8,
            s_max: 1e8,
            dedup: 1e-6,
            polish_tol: 1e-12,
            seeds_per_dim: 40,
            newton_iters: 80,
            min_rel_det: 1e-9,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preimage {
    pub config: Configuration,
    /// Sign of `det J` with rows in label order.
    pub sign: i32,
    pub rel_det: f64,
}

#[inline]
fn wrap(x: f64) -> f64 {
    x - x.round()
}

/// All solutions of `Φ(c) = r` for a graph with two external vertices,
/// gauge `e1 = 0`, `e2 = 1`.
pub fn find_preimages(
    lg: &LabelledGraph,
    r: &[f64],
    kind: AngleMapKind,
    params: &SolverParams,
) -> Result<Vec<Preimage>, WeightError> {
    let g = lg.graph();
    if g.m() != 2 {
        return Err(WeightError::Unsupported("preimage counting needs two external vertices".into()));
    }
    if r.len() != g.edge_count() {
        return Err(WeightError::DimensionMismatch { expected: g.edge_count(), got: r.len() });
    }
    if r.iter().any(|&x| wrap(x).abs() < 1e-12) {
        return Err(WeightError::NonRegularValue("a coordinate lies on the singular locus".into()));
    }
    let sys = EdgeSystem::from_graph(g, vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    let theta: Vec<f64> = (0..g.edge_count()).map(|e| r[lg.labels()[e]].rem_euclid(1.0)).collect();
    let found = solve_system(&sys, &theta, params)?;
    let mut out = Vec::with_capacity(found.len());
    for (z, sign_nat, rel) in found {
        let config = Configuration::boundary(z)?;
        // the requested angle map must reproduce the value
        for (e, (s, t)) in g.edges().enumerate() {
            let a = angle(config.internals[s], config.position(t), kind)?;
            if wrap(a - theta[e]).abs() > 1e-8 {
                return Err(WeightError::SolverBudget(format!("solution fails verification on edge {e}")));
            }
        }
        out.push(Preimage { config, sign: sign_nat * lg.sign(), rel_det: rel });
    }
    Ok(out)
}

/// Solutions `(positions, sign of det J in edge order, rel_det)`.
pub(crate) fn solve_system(
    sys: &EdgeSystem,
    theta: &[f64],
    params: &SolverParams,
) -> Result<Vec<(Vec<Point>, i32, f64)>, WeightError> {
    let raw = match dependency_order(sys) {
        Some(order) => sequential(sys, theta, &order, params),
        None => multistart(sys, theta, params),
    };
    let k = sys.dim();
    let mut out: Vec<(Vec<Point>, i32, f64)> = Vec::new();
    for z in raw {
        let Some(z) = polish(sys, theta, z, params) else { continue };
        if out.iter().any(|(w, _, _)| close(w, &z, params.dedup)) {
            continue;
        }
        let j = sys.jacobian(&z);
        let rel = relative_det(&j, k);
        if rel < params.min_rel_det {
            return Err(WeightError::NonRegularValue(format!("ill-conditioned Jacobian (relative det {rel:.3e})")));
        }
        let sign = if determinant(j, k) > 0.0 { 1 } else { -1 };
        out.push((z, sign, rel));
    }
    Ok(out)
}

fn close(a: &[Point], b: &[Point], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol * (1.0 + x.norm()))
}

/// Vertices in an order where each vertex's moving targets come first.
fn dependency_order(sys: &EdgeSystem) -> Option<Vec<usize>> {
    let mut placed = vec![false; sys.n];
    let mut order = Vec::with_capacity(sys.n);
    while order.len() < sys.n {
        let ready = (0..sys.n).find(|&v| {
            !placed[v]
                && sys.edges.iter().filter(|e| e.0 == v).all(|e| match e.1 {
                    Target::Moving(w) => placed[w],
                    Target::Fixed(_) => true,
                })
        })?;
        placed[ready] = true;
        order.push(ready);
    }
    Some(order)
}

fn sequential(sys: &EdgeSystem, theta: &[f64], order: &[usize], params: &SolverParams) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    let mut z = vec![Complex64::new(0.0, 1.0); sys.n];
    place(sys, theta, order, 0, &mut z, params, &mut out);
    out
}

fn place(
    sys: &EdgeSystem,
    theta: &[f64],
    order: &[usize],
    idx: usize,
    z: &mut Vec<Point>,
    params: &SolverParams,
    out: &mut Vec<Vec<Point>>,
) {
    if idx == order.len() {
        out.push(z.clone());
        return;
    }
    let v = order[idx];
    let rows: Vec<usize> = (0..sys.edges.len()).filter(|&e| sys.edges[e].0 == v).collect();
    // prefer a fixed target for the level curve
    let (a, b) = match sys.edges[rows[1]].1 {
        Target::Fixed(_) if !matches!(sys.edges[rows[0]].1, Target::Fixed(_)) => (rows[1], rows[0]),
        _ => (rows[0], rows[1]),
    };
    let p0 = sys.target(z, sys.edges[a].1);
    let p1 = sys.target(z, sys.edges[b].1);
    let (t0, t1) = (theta[a], theta[b]);
    let scale = (p0 - p1).norm().max(p0.im).max(p1.im);
    for s in roots_along(|s| level_curve(p0, t0, s), p1, t1, scale, params) {
        z[v] = level_curve(p0, t0, s);
        place(sys, theta, order, idx + 1, z, params, out);
    }
}

/// Parameters `s` where the curve point sees `p1` at angle `t1`.
fn roots_along(curve: impl Fn(f64) -> Point, p1: Point, t1: f64, scale: f64, params: &SolverParams) -> Vec<f64> {
    let resid = |ls: f64| {
        let p = curve(ls.exp());
        if (p - p1).norm() == 0.0 {
            return f64::NAN;
        }
        wrap(angle_fast(p, p1) - t1)
    };
    let lo = (params.s_min * scale).ln();
    let hi = (params.s_max * scale).ln();
    let step = (hi - lo) / (params.grid as f64 - 1.0);
    let mut roots = Vec::new();
    let mut prev = (lo, resid(lo));
    for k in 1..params.grid {
        let x = lo + step * k as f64;
        let cur = (x, resid(x));
        let (fa, fb) = (prev.1, cur.1);
        if fa.is_finite() && fb.is_finite() && fa.abs() < 0.25 && fb.abs() < 0.25 && (fa == 0.0 || fa * fb < 0.0) {
            let (mut a, mut b, mut fa) = (prev.0, cur.0, fa);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = resid(m);
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if (fm < 0.0) == (fa < 0.0) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push((0.5 * (a + b)).exp());
        }
        prev = cur;
    }
    roots
}

/// Full Newton on all coordinates; `None` if it fails to converge or leaves
/// the upper half-plane.
fn polish(sys: &EdgeSystem, theta: &[f64], mut z: Vec<Point>, params: &SolverParams) -> Option<Vec<Point>> {
    let k = sys.dim();
    let resid = |z: &[Point]| -> Vec<f64> {
        sys.values(z).iter().zip(theta).map(|(v, t)| wrap(v - t)).collect()
    };
    let norm = |r: &[f64]| r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut r = resid(&z);
    for _ in 0..20 {
        if norm(&r) <= params.polish_tol {
            break;
        }
        let j = sys.jacobian(&z);
        let step = solve(j, r.iter().map(|x| -x).collect(), k)?;
        let mut t = 1.0;
        loop {
            let cand: Vec<Point> = (0..sys.n)
                .map(|v| z[v] + Complex64::new(t * step[2 * v], t * step[2 * v + 1]))
                .collect();
            if cand.iter().all(|p| p.im > 0.0) {
                let rc = resid(&cand);
                if norm(&rc) < norm(&r) {
                    z = cand;
                    r = rc;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-6 {
                return (norm(&r) <= 1e3 * params.polish_tol).then_some(z);
            }
        }
    }
    (norm(&r) <= 1e3 * params.polish_tol).then_some(z)
}

/// Reduced coordinates: a vertex with an edge to a fixed point moves along
/// that edge's level curve, any other vertex is free.
struct Reduced<'a> {
    sys: &'a EdgeSystem,
    theta: &'a [f64],
    pin: Vec<Option<usize>>,
    offsets: Vec<usize>,
    free_rows: Vec<usize>,
    dim: usize,
}

impl<'a> Reduced<'a> {
    fn new(sys: &'a EdgeSystem, theta: &'a [f64]) -> Reduced<'a> {
        let pin: Vec<Option<usize>> = (0..sys.n)
            .map(|v| (0..sys.edges.len()).find(|&e| sys.edges[e].0 == v && matches!(sys.edges[e].1, Target::Fixed(_))))
            .collect();
        let mut offsets = Vec::with_capacity(sys.n);
        let mut dim = 0;
        for p in &pin {
            offsets.push(dim);
            dim += if p.is_some() { 1 } else { 2 };
        }
        let free_rows = (0..sys.edges.len()).filter(|e| !pin.contains(&Some(*e))).collect();
        Reduced { sys, theta, pin, offsets, free_rows, dim }
    }

    fn point(&self, u: &[f64], v: usize) -> Point {
        let o = self.offsets[v];
        match self.pin[v] {
            Some(e) => {
                let p = self.sys.target(&[], self.sys.edges[e].1);
                level_curve(p, self.theta[e], u[o].exp())
            }
            None => Complex64::new(u[o], u[o + 1].exp()),
        }
    }

    fn positions(&self, u: &[f64]) -> Vec<Point> {
        (0..self.sys.n).map(|v| self.point(u, v)).collect()
    }

    fn residual(&self, u: &[f64]) -> Option<Vec<f64>> {
        let z = self.positions(u);
        let mut out = Vec::with_capacity(self.dim);
        for &e in &self.free_rows {
            let (s, t) = self.sys.edges[e];
            let q = self.sys.target(&z, t);
            if !(z[s].im > 0.0) || (z[s] - q).norm() < 1e-300 || !z[s].re.is_finite() {
                return None;
            }
            out.push(wrap(angle_fast(z[s], q) - self.theta[e]));
        }
        Some(out)
    }
}

fn multistart(sys: &EdgeSystem, theta: &[f64], params: &SolverParams) -> Vec<Vec<Point>> {
    use rayon::prelude::*;
    let red = Reduced::new(sys, theta);
    let d = red.dim;
    let k = params.seeds_per_dim.max(2);
    // pinned: log-parameter along the curve; free: x, then log y
    let ranges: Vec<(f64, f64)> = (0..sys.n)
        .flat_map(|v| if red.pin[v].is_some() { vec![(-7.0, 7.0)] } else { vec![(-5.0, 6.0), (-5.0, 5.0)] })
        .collect();
    let seeds: Vec<Vec<f64>> = if d <= 2 {
        (0..k.pow(d as u32))
            .map(|mut idx| {
                ranges
                    .iter()
                    .map(|&(lo, hi)| {
                        let i = idx % k;
                        idx /= k;
                        lo + (hi - lo) * i as f64 / (k - 1) as f64
                    })
                    .collect()
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        (0..k * k * d).map(|_| ranges.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect()).collect()
    };
    let sols: Vec<Vec<f64>> = seeds.par_iter().filter_map(|u| newton_reduced(&red, u.clone(), params)).collect();
    let mut out: Vec<Vec<Point>> = Vec::new();
    for u in sols {
        let z = red.positions(&u);
        if !out.iter().any(|w| close(w, &z, params.dedup)) {
            out.push(z);
        }
    }
    out
}

fn newton_reduced(red: &Reduced, mut u: Vec<f64>, params: &SolverParams) -> Option<Vec<f64>> {
    let d = red.dim;
    let norm = |r: &[f64]| r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut r = red.residual(&u)?;
    for _ in 0..params.newton_iters {
        if norm(&r) < 1e-13 {
            return Some(u);
        }
        let h = 1e-7;
        let mut j = vec![0.0; d * d];
        for c in 0..d {
            let mut up = u.clone();
            let mut dn = u.clone();
            up[c] += h;
            dn[c] -= h;
            let (a, b) = (red.residual(&up)?, red.residual(&dn)?);
            for row in 0..d {
                j[row * d + c] = wrap(a[row] - b[row]) / (2.0 * h);
            }
        }
        let step = solve(j, r.iter().map(|x| -x).collect(), d)?;
        let mut t = 1.0;
        loop {
            let cand: Vec<f64> = u.iter().zip(&step).map(|(a, s)| a + t * s.clamp(-3.0, 3.0)).collect();
            if cand.iter().all(|x| x.abs() < 40.0) {
                if let Some(rc) = red.residual(&cand) {
                    if norm(&rc) < norm(&r) {
                        u = cand;
                        r = rc;
                        break;
                    }
                }
            }
            t *= 0.5;
            if t < 1e-4 {
                return None;
            }
        }
    }
    (norm(&r) < 1e-11).then_some(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn wedge_single_preimage() {
        let lg = LabelledGraph::natural(Graph::wedge());
        let p = find_preimages(&lg, &[0.25, 0.5], AngleMapKind::Hyperbolic, &SolverParams::default()).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].sign, 1);
        assert!((p[0].config.internals[0] - Complex64::new(1.0, 1.0)).norm() < 1e-9);
        let swapped = LabelledGraph::new(Graph::wedge(), vec![1, 0]).unwrap();
        let q = find_preimages(&swapped, &[0.25, 0.5], AngleMapKind::Hyperbolic, &SolverParams::default()).unwrap();
        assert!(q.is_empty());
    }

    #[test]
    fn cycle_solver_finds_sequential_solutions() {
        // an acyclic graph run through the Newton fallback must agree
        let g = Graph::new(
            2,
            2,
            vec![
                [crate::graph::Vertex::Internal(1), crate::graph::Vertex::External(0)],
                [crate::graph::Vertex::External(0), crate::graph::Vertex::External(1)],
            ],
        )
        .unwrap();
        let sys = EdgeSystem::from_graph(&g, vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let params = SolverParams::default();
        for theta in [[0.3, 0.55, 0.6, 0.7], [0.52, 0.41, 0.45, 0.6], [0.6, 0.2, 0.3, 0.7]] {
            let order = dependency_order(&sys).unwrap();
            let a = sequential(&sys, &theta, &order, &params);
            let b = multistart(&sys, &theta, &params);
            assert_eq!(a.len(), b.len(), "{theta:?}");
        }
    }
}
