use crate::rational::{parse_q, q_to_f64, q_to_string, Q};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

/// A 1-form on the circle (in turns) with total mass 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OneForm {
    Uniform,
    /// Smooth bump supported on `(center - width, center + width)`.
    Bump { center: f64, width: f64 },
    /// Smooth bump filling the open half-circle around `center`.
    Semicircle { center: f64 },
    /// Point masses at the coordinates of a torus point; only meaningful for
    /// preimage counting.
    Point {
        #[serde(with = "crate::rational::serde_q_vec")]
        values: Vec<Q>,
    },
    /// `ω(θ) = inner(2θ mod 1)`, constant along `θ ↦ θ + 1/2`.
    Folded { inner: Box<OneForm> },
}

/// `∫_{-1}^{1} exp(-1/(1-t²)) dt`.
fn bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| {
        let n = 200_000;
        let h = 2.0 / n as f64;
        let f = |t: f64| if t.abs() < 1.0 { (-1.0 / (1.0 - t * t)).exp() } else { 0.0 };
        let mut s = f(-1.0) + f(1.0);
        for k in 1..n {
            let t = -1.0 + k as f64 * h;
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(t);
        }
        s * h / 3.0
    })
}

fn bump(theta: f64, center: f64, width: f64) -> f64 {
    let d = theta - center;
    let d = d - d.round();
    let t = d / width;
    if t.abs() >= 1.0 {
        return 0.0;
    }
    (-1.0 / (1.0 - t * t)).exp() / (bump_mass() * width)
}

impl OneForm {
    pub fn semicircle() -> OneForm {
        OneForm::Semicircle { center: 0.75 }
    }

    pub fn folded(self) -> OneForm {
        OneForm::Folded { inner: Box::new(self) }
    }

    pub fn is_smooth(&self) -> bool {
        match self {
            OneForm::Point { .. } => false,
            OneForm::Folded { inner } => inner.is_smooth(),
            _ => true,
        }
    }

    /// Density at `theta` (turns). Panics for point forms.
    pub fn density(&self, theta: f64) -> f64 {
        match self {
            OneForm::Uniform => 1.0,
            OneForm::Bump { center, width } => bump(theta, *center, *width),
            OneForm::Semicircle { center } => bump(theta, *center, 0.25),
            OneForm::Point { .. } => panic!("point forms have no density"),
            OneForm::Folded { inner } => inner.density((2.0 * theta).rem_euclid(1.0)),
        }
    }

    /// Closed support in turns as `(lo, hi)` arcs, `None` for full support.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            OneForm::Bump { center, width } => Some((center - width, center + width)),
            OneForm::Semicircle { center } => Some((center - 0.25, center + 0.25)),
            _ => None,
        }
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OneForm::Uniform => write!(f, "uniform"),
            OneForm::Bump { center, width } => write!(f, "bump:{center},{width}"),
            OneForm::Semicircle { center } => write!(f, "semicircle:{center}"),
            OneForm::Point { values } => {
                let v: Vec<String> = values.iter().map(q_to_string).collect();
                write!(f, "point:{}", v.join(","))
            }
            OneForm::Folded { inner } => write!(f, "folded:{inner}"),
        }
    }
}

impl FromStr for OneForm {
    type Err = String;

    /// `uniform`, `bump:c,w`, `semicircle[:c]`, `point:r1,r2,...`,
    /// `folded:<form>`.
    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(rest) = s.strip_prefix("folded:") {
            return Ok(rest.parse::<OneForm>()?.folded());
        }
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<f64>, String> {
            args.split(',').map(|a| a.trim().parse::<f64>().map_err(|e| format!("{a:?}: {e}"))).collect()
        };
        match name {
            "uniform" if args.is_empty() => Ok(OneForm::Uniform),
            "bump" => match nums()?.as_slice() {
                [c, w] if *w > 0.0 && *w <= 0.5 => Ok(OneForm::Bump { center: *c, width: *w }),
                _ => Err(format!("bump needs center,width with 0 < width <= 1/2: {s:?}")),
            },
            "semicircle" if args.is_empty() => Ok(OneForm::semicircle()),
            "semicircle" => match nums()?.as_slice() {
                [c] => Ok(OneForm::Semicircle { center: *c }),
                _ => Err(format!("semicircle takes one center: {s:?}")),
            },
            "point" => {
                let values = args.split(',').map(|a| parse_q(a.trim())).collect::<Result<Vec<Q>, String>>()?;
                if values.is_empty() {
                    return Err("point form needs coordinates".into());
                }
                Ok(OneForm::Point { values })
            }
            _ => Err(format!("unknown form {s:?}")),
        }
    }
}

/// Coordinates of a point form as floats.
pub fn point_values(values: &[Q]) -> Vec<f64> {
    values.iter().map(q_to_f64).collect()
}
