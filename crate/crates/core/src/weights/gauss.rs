use super::angle::{angle, angle_fast, angle_gradient, AngleMapKind, Point};
use crate::error::WeightError;
use crate::graph::{Graph, LabelledGraph, Vertex};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// How the translation/scaling symmetry has been fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    /// Two external vertices pinned at 0 and 1 on the real line.
    Boundary01,
    /// A single external vertex pinned at `i` in the upper half-plane.
    CapAtI,
    /// Externals given explicitly; no symmetry removed.
    Free,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub externals: Vec<Point>,
    pub internals: Vec<Point>,
    pub gauge: Gauge,
}

impl Configuration {
    /// Internal vertices in the upper half-plane with `e1 = 0`, `e2 = 1`.
    pub fn boundary(internals: Vec<Point>) -> Result<Configuration, WeightError> {
        Configuration::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], internals, Gauge::Boundary01)
    }

    /// Configuration for the capped wheel space: the external vertex at `i`.
    pub fn cap(internals: Vec<Point>) -> Result<Configuration, WeightError> {
        Configuration::new(vec![Complex64::i()], internals, Gauge::CapAtI)
    }

    pub fn new(externals: Vec<Point>, internals: Vec<Point>, gauge: Gauge) -> Result<Configuration, WeightError> {
        if gauge != Gauge::CapAtI {
            for w in externals.windows(2) {
                if !(w[0].re < w[1].re) {
                    return Err(WeightError::Unsupported("external vertices must be strictly increasing".into()));
                }
            }
            if externals.iter().any(|e| e.im != 0.0) {
                return Err(WeightError::Unsupported("external vertices must lie on the real line".into()));
            }
        }
        if internals.iter().any(|z| !(z.im > 0.0)) {
            return Err(WeightError::Unsupported("internal vertices must lie in the upper half-plane".into()));
        }
        let all: Vec<Point> = externals.iter().chain(internals.iter()).cloned().collect();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if all[i] == all[j] {
                    return Err(WeightError::CoincidentPoints);
                }
            }
        }
        Ok(Configuration { externals, internals, gauge })
    }

    pub fn position(&self, v: Vertex) -> Point {
        match v {
            Vertex::Internal(k) => self.internals[k],
            Vertex::External(j) => self.externals[j],
        }
    }
}

fn check(g: &Graph, c: &Configuration) -> Result<(), WeightError> {
    if c.internals.len() != g.n() {
        return Err(WeightError::DimensionMismatch { expected: g.n(), got: c.internals.len() });
    }
    if c.externals.len() != g.m() {
        return Err(WeightError::DimensionMismatch { expected: g.m(), got: c.externals.len() });
    }
    Ok(())
}

/// `Φ_G(c)`: coordinate `j` is the angle of the edge labelled `j`.
pub fn gauss_map(lg: &LabelledGraph, c: &Configuration, kind: AngleMapKind) -> Result<Vec<f64>, WeightError> {
    let g = lg.graph();
    check(g, c)?;
    let mut out = vec![0.0; g.edge_count()];
    for (e, (s, t)) in g.edges().enumerate() {
        out[lg.labels()[e]] = angle(c.internals[s], c.position(t), kind)?;
    }
    Ok(out)
}

/// Jacobian of [`gauss_map`] in turns with respect to
/// `(x_1, y_1, …, x_n, y_n)`, rows in label order, row-major.
pub fn gauss_jacobian(lg: &LabelledGraph, c: &Configuration) -> Result<Vec<f64>, WeightError> {
    check(lg.graph(), c)?;
    let sys = EdgeSystem::from_graph(lg.graph(), c.externals.clone());
    let natural = sys.jacobian(&c.internals);
    let k = sys.dim();
    let mut out = vec![0.0; k * k];
    for e in 0..k {
        let row = lg.labels()[e];
        out[row * k..(row + 1) * k].copy_from_slice(&natural[e * k..(e + 1) * k]);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Target {
    Moving(usize),
    Fixed(usize),
}

/// Edges from movable points to movable or fixed points; rows of the
/// Jacobian follow `edges`, columns are `(x_k, y_k)` of the movable points.
#[derive(Clone, Debug)]
pub(crate) struct EdgeSystem {
    pub n: usize,
    pub fixed: Vec<Point>,
    pub edges: Vec<(usize, Target)>,
}

impl EdgeSystem {
    pub fn from_graph(g: &Graph, fixed: Vec<Point>) -> EdgeSystem {
        let edges = g
            .edges()
            .map(|(s, t)| {
                (
                    s,
                    match t {
                        Vertex::Internal(k) => Target::Moving(k),
                        Vertex::External(j) => Target::Fixed(j),
                    },
                )
            })
            .collect();
        EdgeSystem { n: g.n(), fixed, edges }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    #[inline]
    pub fn target(&self, z: &[Point], t: Target) -> Point {
        match t {
            Target::Moving(k) => z[k],
            Target::Fixed(j) => self.fixed[j],
        }
    }

    pub fn values(&self, z: &[Point]) -> Vec<f64> {
        self.edges.iter().map(|&(s, t)| angle_fast(z[s], self.target(z, t))).collect()
    }

    /// Row-major `edges × 2n` Jacobian in turns.
    pub fn jacobian(&self, z: &[Point]) -> Vec<f64> {
        let k = self.dim();
        let mut out = vec![0.0; self.edges.len() * k];
        for (row, &(s, t)) in self.edges.iter().enumerate() {
            let g = angle_gradient(z[s], self.target(z, t));
            out[row * k + 2 * s] += g[0] / TAU;
            out[row * k + 2 * s + 1] += g[1] / TAU;
            if let Target::Moving(w) = t {
                out[row * k + 2 * w] += g[2] / TAU;
                out[row * k + 2 * w + 1] += g[3] / TAU;
            }
        }
        out
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut a: Vec<f64>, k: usize) -> f64 {
    let mut det = 1.0;
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i * k + c].abs().total_cmp(&a[j * k + c].abs())).unwrap();
        if a[p * k + c] == 0.0 {
            return 0.0;
        }
        if p != c {
            for j in 0..k {
                a.swap(p * k + j, c * k + j);
            }
            det = -det;
        }
        let d = a[c * k + c];
        det *= d;
        for i in c + 1..k {
            let f = a[i * k + c] / d;
            if f != 0.0 {
                for j in c..k {
                    a[i * k + j] -= f * a[c * k + j];
                }
            }
        }
    }
    det
}

/// Solves `a x = b` in place; `None` if singular.
pub(crate) fn solve(mut a: Vec<f64>, mut b: Vec<f64>, k: usize) -> Option<Vec<f64>> {
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i * k + c].abs().total_cmp(&a[j * k + c].abs())).unwrap();
        if a[p * k + c].abs() < 1e-300 {
            return None;
        }
        if p != c {
            for j in 0..k {
                a.swap(p * k + j, c * k + j);
            }
            b.swap(p, c);
        }
        let d = a[c * k + c];
        for i in c + 1..k {
            let f = a[i * k + c] / d;
            if f != 0.0 {
                for j in c..k {
                    a[i * k + j] -= f * a[c * k + j];
                }
                b[i] -= f * b[c];
            }
        }
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = b[i];
        for j in i + 1..k {
            s -= a[i * k + j] * x[j];
        }
        x[i] = s / a[i * k + i];
    }
    Some(x)
}

/// `|det J| / ∏ ‖row‖`, a scale-free measure of how regular a point is.
pub(crate) fn relative_det(j: &[f64], k: usize) -> f64 {
    let norms: f64 = (0..k)
        .map(|r| j[r * k..(r + 1) * k].iter().map(|x| x * x).sum::<f64>().sqrt())
        .product();
    if norms == 0.0 {
        return 0.0;
    }
    determinant(j.to_vec(), k).abs() / norms
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_at_one_plus_i() {
        let lg = LabelledGraph::natural(Graph::wedge());
        let c = Configuration::boundary(vec![Complex64::new(1.0, 1.0)]).unwrap();
        let v = gauss_map(&lg, &c, AngleMapKind::Hyperbolic).unwrap();
        assert!((v[0] - 0.25).abs() < 1e-15 && (v[1] - 0.5).abs() < 1e-15);
        let j = gauss_jacobian(&lg, &c).unwrap();
        assert!(determinant(j, 2) > 0.0);
    }

    #[test]
    fn relabelling_permutes_coordinates() {
        let g = Graph::two_wheel_boundary();
        let c = Configuration::boundary(vec![Complex64::new(0.2, 0.7), Complex64::new(1.3, 0.4)]).unwrap();
        let a = gauss_map(&LabelledGraph::natural(g.clone()), &c, AngleMapKind::Hyperbolic).unwrap();
        let labels = vec![2, 0, 3, 1];
        let b = gauss_map(&LabelledGraph::new(g, labels.clone()).unwrap(), &c, AngleMapKind::Hyperbolic).unwrap();
        for e in 0..4 {
            assert_eq!(a[e], b[labels[e]]);
        }
    }

    #[test]
    fn product_graph_concatenates() {
        let w = Graph::wedge();
        let ww = w.product(&w).unwrap();
        let (z1, z2) = (Complex64::new(0.3, 0.5), Complex64::new(2.0, 1.5));
        let c = Configuration::boundary(vec![z1, z2]).unwrap();
        let v = gauss_map(&LabelledGraph::natural(ww), &c, AngleMapKind::Hyperbolic).unwrap();
        let k = AngleMapKind::Hyperbolic;
        let a = gauss_map(&LabelledGraph::natural(w.clone()), &Configuration::boundary(vec![z1]).unwrap(), k).unwrap();
        let b = gauss_map(&LabelledGraph::natural(w), &Configuration::boundary(vec![z2]).unwrap(), k).unwrap();
        assert_eq!(v, [a, b].concat());
    }

    #[test]
    fn rejects_bad_configurations() {
        assert!(Configuration::boundary(vec![Complex64::new(0.0, -1.0)]).is_err());
        let lg = LabelledGraph::natural(Graph::wedge());
        let c = Configuration::boundary(vec![]).unwrap();
        assert!(matches!(
            gauss_map(&lg, &c, AngleMapKind::Hyperbolic),
            Err(WeightError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn determinant_and_solve() {
        let a = vec![2.0, 1.0, 1.0, 3.0];
        assert!((determinant(a.clone(), 2) - 5.0).abs() < 1e-14);
        let x = solve(a, vec![3.0, 4.0], 2).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }
}
