use crate::error::AlgebraError;
use crate::rational::{qi, Q};
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Structure constants `[X_i, X_j] = Σ_k c[i][j][k] X_k`; the linear
/// Poisson structure on the dual is `α^{ij}(x) = Σ_k c[i][j][k] x_k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<Vec<Vec<Q>>>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(c: Vec<Vec<Vec<Q>>>) -> Result<LieAlgebra, AlgebraError> {
        let d = c.len();
        for row in &c {
            if row.len() != d {
                return Err(AlgebraError::DimensionMismatch(d, row.len()));
            }
            for v in row {
                if v.len() != d {
                    return Err(AlgebraError::DimensionMismatch(d, v.len()));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return Err(AlgebraError::NotAntisymmetric(i, j, k));
                    }
                }
            }
        }
        let g = LieAlgebra { dim: d, c };
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut s = Q::zero();
                        for m in 0..d {
                            s += &g.c[i][j][m] * &g.c[m][k][l];
                            s += &g.c[j][k][m] * &g.c[m][i][l];
                            s += &g.c[k][i][m] * &g.c[m][j][l];
                        }
                        if !s.is_zero() {
                            return Err(AlgebraError::JacobiViolated(i, j, k, l));
                        }
                    }
                }
            }
        }
        Ok(g)
    }

    /// Builds from brackets `[X_i, X_j] = Σ c X_k` with `i < j`.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, &[(usize, i64)])]) -> Result<LieAlgebra, AlgebraError> {
        let mut c = vec![vec![vec![Q::zero(); dim]; dim]; dim];
        for &(i, j, rhs) in brackets {
            for &(k, v) in rhs {
                c[i][j][k] += qi(v);
                c[j][i][k] -= qi(v);
            }
        }
        LieAlgebra::new(c)
    }

    pub fn abelian(dim: usize) -> LieAlgebra {
        LieAlgebra { dim, c: vec![vec![vec![Q::zero(); dim]; dim]; dim] }
    }

    /// `[x, y] = z`.
    pub fn heisenberg() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(0, 1, &[(2, 1)])]).expect("valid")
    }

    /// Basis `(e, f, h)`: `[e, f] = h`, `[h, e] = 2e`, `[h, f] = -2f`.
    pub fn sl2() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(0, 1, &[(2, 1)]), (0, 2, &[(0, -2)]), (1, 2, &[(1, 2)])]).expect("valid")
    }

    /// `[x, y] = y`.
    pub fn affine() -> LieAlgebra {
        LieAlgebra::from_brackets(2, &[(0, 1, &[(1, 1)])]).expect("valid")
    }

    pub fn by_name(name: &str) -> Option<LieAlgebra> {
        match name {
            "heisenberg" => Some(LieAlgebra::heisenberg()),
            "sl2" => Some(LieAlgebra::sl2()),
            "affine" | "ax+b" => Some(LieAlgebra::affine()),
            _ => name
                .strip_prefix("abelian")
                .and_then(|d| d.trim_start_matches(':').parse().ok())
                .filter(|&d: &usize| d > 0)
                .map(LieAlgebra::abelian),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.c[i][j][k]
    }

    pub fn constants(&self) -> &[Vec<Vec<Q>>] {
        &self.c
    }
}

#[derive(Serialize, Deserialize)]
struct LieJson {
    dim: usize,
    c: Vec<Vec<Vec<String>>>,
}

impl Serialize for LieAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let c = self
            .c
            .iter()
            .map(|r| r.iter().map(|v| v.iter().map(crate::rational::q_to_string).collect()).collect())
            .collect();
        LieJson { dim: self.dim, c }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LieAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = LieJson::deserialize(d)?;
        let c = j
            .c
            .iter()
            .map(|r| r.iter().map(|v| v.iter().map(|x| crate::rational::parse_q(x)).collect()).collect())
            .collect::<Result<Vec<Vec<Vec<Q>>>, String>>()
            .map_err(D::Error::custom)?;
        if c.len() != j.dim {
            return Err(D::Error::custom(format!("dim {} but {} rows", j.dim, c.len())));
        }
        LieAlgebra::new(c).map_err(D::Error::custom)
    }
}
