use crate::error::WeightError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

pub type Point = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AngleMapKind {
    /// Angle at `p` from the geodesic towards infinity to the geodesic
    /// towards `q`.
    #[default]
    Hyperbolic,
    /// Angle at `q` from the segment towards `p̄` to the segment towards `p`.
    EuclideanReflection,
}

impl fmt::Display for AngleMapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AngleMapKind::Hyperbolic => "hyperbolic",
            AngleMapKind::EuclideanReflection => "euclidean",
        })
    }
}

impl FromStr for AngleMapKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hyperbolic" => Ok(AngleMapKind::Hyperbolic),
            "euclidean" | "euclidean_reflection" => Ok(AngleMapKind::EuclideanReflection),
            _ => Err(format!("unknown angle map {s:?}")),
        }
    }
}

fn turns(rad: f64) -> f64 {
    let t = rad.rem_euclid(TAU) / TAU;
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

/// Angle of the edge `p → q` in turns, in `[0, 1)`.
pub fn angle(p: Point, q: Point, kind: AngleMapKind) -> Result<f64, WeightError> {
    if p.im < 0.0 || q.im < 0.0 {
        return Err(WeightError::Unsupported("point below the real line".into()));
    }
    if (p - q).norm() == 0.0 || (p.im == 0.0 && q.im == 0.0) {
        return Err(WeightError::CoincidentPoints);
    }
    Ok(match kind {
        AngleMapKind::Hyperbolic => angle_fast(p, q),
        AngleMapKind::EuclideanReflection => {
            let a = p.conj() - q;
            let b = p - q;
            turns((a.re * b.im - a.im * b.re).atan2(a.re * b.re + a.im * b.im))
        }
    })
}

/// Closed form `Arg((q - p)/(q - p̄)) / 2π`, no validation.
#[inline]
pub fn angle_fast(p: Point, q: Point) -> f64 {
    turns(((q - p) / (q - p.conj())).arg())
}

/// Gradients of `2π · angle(p, q)` with respect to `p` and `q`, as
/// `(∂/∂p.re, ∂/∂p.im, ∂/∂q.re, ∂/∂q.im)`.
#[inline]
pub fn angle_gradient(p: Point, q: Point) -> [f64; 4] {
    let w = q - p;
    let u = q - p.conj();
    let (nw, nu) = (w.norm_sqr(), u.norm_sqr());
    [
        w.im / nw - u.im / nu,
        -w.re / nw - u.re / nu,
        -w.im / nw + u.im / nu,
        w.re / nw - u.re / nu,
    ]
}

/// Points `p` with `angle(p, t) = theta` for a fixed target `t`,
/// parametrized by `s > 0`; `p → t` as `s → 0` and `p → ∞` as `s → ∞`.
///
/// For `t` on the real line the curve is the ray leaving `t` at angle
/// `π theta`; otherwise it is swept by the geodesics through `t`.
pub fn level_curve(t: Point, theta: f64, s: f64) -> Point {
    if t.im == 0.0 {
        return t + Complex64::from_polar(s, PI * theta);
    }
    if (theta - 0.5).abs() < 1e-15 {
        return t + Complex64::new(0.0, s);
    }
    if theta < 0.5 {
        let psi = TAU * theta;
        let c = t.re - t.im / psi.tan() + s;
        Complex64::new(c, 0.0) + Complex64::from_polar((t - c).norm(), psi)
    } else {
        let psi = TAU * theta - PI;
        let c = t.re - t.im / psi.tan() - s;
        Complex64::new(c, 0.0) + Complex64::from_polar((t - c).norm(), psi)
    }
}

/// Geometric construction of the hyperbolic angle: tangent of the geodesic
/// from `p` to `q` compared with the upward vertical. Used as an oracle.
pub fn hyperbolic_angle_geometric(p: Point, q: Point) -> f64 {
    let tangent = if (p.re - q.re).abs() < 1e-14 * (1.0 + p.norm()) {
        Complex64::new(0.0, (q.im - p.im).signum())
    } else {
        // centre c on the real line with |p - c| = |q - c|
        let c = (q.norm_sqr() - p.norm_sqr()) / (2.0 * (q.re - p.re));
        let radial = p - c;
        let ccw = Complex64::i() * radial;
        let to_q = q - p;
        if ccw.re * to_q.re + ccw.im * to_q.im >= 0.0 {
            ccw
        } else {
            -ccw
        }
    };
    turns(tangent.arg() - FRAC_PI_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64, y: f64) -> Point {
        Complex64::new(x, y)
    }

    #[test]
    fn wedge_values_at_one_plus_i() {
        let z = c(1.0, 1.0);
        assert!((angle_fast(z, c(0.0, 0.0)) - 0.25).abs() < 1e-15);
        assert!((angle_fast(z, c(1.0, 0.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn infinity_maps_to_zero() {
        let p = c(0.3, 0.7);
        for dir in [0.1, 1.0, 2.0, 3.0] {
            let q = p + Complex64::from_polar(1e9, dir);
            let a = angle_fast(p, q);
            assert!(a.min(1.0 - a) < 1e-8, "{a}");
        }
    }

    #[test]
    fn kinds_agree_and_match_geometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let p = c(rng.random_range(-3.0..3.0), rng.random_range(0.01..3.0));
            let q = c(rng.random_range(-3.0..3.0), rng.random_range(0.0..3.0));
            let h = angle(p, q, AngleMapKind::Hyperbolic).unwrap();
            let e = angle(p, q, AngleMapKind::EuclideanReflection).unwrap();
            let g = hyperbolic_angle_geometric(p, q);
            let d = |a: f64, b: f64| ((a - b + 0.5).rem_euclid(1.0) - 0.5).abs();
            assert!(d(h, e) < 1e-12);
            assert!(d(h, g) < 1e-9, "{p} {q} {h} {g}");
        }
    }

    #[test]
    fn level_curves_hold_the_angle() {
        let targets = [c(0.0, 0.0), c(1.0, 0.0), c(0.4, 0.9), c(-2.0, 0.1)];
        for t in targets {
            for theta in [0.05, 0.3, 0.5, 0.55, 0.8, 0.97] {
                for s in [1e-6, 1e-2, 0.5, 3.0, 1e4] {
                    let p = level_curve(t, theta, s);
                    assert!(p.im > 0.0);
                    let a = angle_fast(p, t);
                    assert!(((a - theta + 0.5).rem_euclid(1.0) - 0.5).abs() < 1e-9, "{t} {theta} {s} {a}");
                }
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let (p, q) = (c(0.3, 0.8), c(-0.4, 1.7));
        let g = angle_gradient(p, q);
        let h = 1e-6;
        let f = |p: Point, q: Point| TAU * angle_fast(p, q);
        let fd = [
            (f(p + h, q) - f(p - h, q)) / (2.0 * h),
            (f(p + c(0.0, h), q) - f(p - c(0.0, h), q)) / (2.0 * h),
            (f(p, q + h) - f(p, q - h)) / (2.0 * h),
            (f(p, q + c(0.0, h)) - f(p, q - c(0.0, h))) / (2.0 * h),
        ];
        for k in 0..4 {
            assert!((g[k] - fd[k]).abs() < 1e-6, "{k}: {} vs {}", g[k], fd[k]);
        }
    }

    #[test]
    fn scaling_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for kind in [AngleMapKind::Hyperbolic, AngleMapKind::EuclideanReflection] {
            for _ in 0..200 {
                let p = c(rng.random_range(-3.0..3.0), rng.random_range(0.01..3.0));
                let q = c(rng.random_range(-3.0..3.0), rng.random_range(0.01..3.0));
                let a = angle(p, q, kind).unwrap();
                let b = angle(2.0 * p + 3.0, 2.0 * q + 3.0, kind).unwrap();
                assert!(((a - b + 0.5).rem_euclid(1.0) - 0.5).abs() <= 1e-12 * a.max(1e-3));
            }
        }
    }
}
