//! Symmetric Cartan matrices and the two ζ-kernels, stored homogenized in
//! the formal variables `z` and `w` so they can be placed at any pair of
//! shuffle variables.

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::multipoly::{MLaurent, Mono, VarId};
use crate::scalars::QRat;

/// A symmetric Cartan matrix whose vertex list fixes the total order on vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanMatrix {
    pub vertices: Vec<String>,
    pub d: Vec<Vec<i64>>,
    /// Flips the `q`-exponent of the trigonometric kernel; used only to check
    /// that the verification suite notices a wrong kernel.
    #[serde(skip)]
    broken_zeta: bool,
}

impl CartanMatrix {
    /// Builds and validates.
    pub fn new(vertices: Vec<String>, d: Vec<Vec<i64>>) -> Result<CartanMatrix> {
        let c = CartanMatrix::unchecked(vertices, d);
        c.validate()?;
        Ok(c)
    }

    pub fn unchecked(vertices: Vec<String>, d: Vec<Vec<i64>>) -> CartanMatrix {
        CartanMatrix {
            vertices,
            d,
            broken_zeta: false,
        }
    }

    /// Labels `1..=n`.
    pub fn from_matrix(d: Vec<Vec<i64>>) -> Result<CartanMatrix> {
        CartanMatrix::new((1..=d.len()).map(|a| a.to_string()).collect(), d)
    }

    /// The rank-two matrix `[[2, d], [d, 2]]`.
    pub fn rank_two(d: i64) -> CartanMatrix {
        CartanMatrix::from_matrix(vec![vec![2, d], vec![d, 2]]).expect("off-diagonal entry must be nonpositive")
    }

    pub fn a2() -> CartanMatrix {
        CartanMatrix::rank_two(-1)
    }

    pub fn parse_json(text: &str) -> Result<CartanMatrix> {
        let c: CartanMatrix = serde_json::from_str(text).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    /// Copy whose trigonometric kernel has the wrong sign in its `q`-exponent.
    pub fn with_broken_zeta(&self) -> CartanMatrix {
        CartanMatrix {
            broken_zeta: true,
            ..self.clone()
        }
    }

    pub fn is_broken(&self) -> bool {
        self.broken_zeta
    }

    pub fn rank(&self) -> usize {
        self.vertices.len()
    }

    /// Checks shape, symmetry, diagonal and sign constraints, naming every violation.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        let mut problems = Vec::new();
        if n == 0 {
            problems.push("no vertices".to_string());
        }
        let mut seen = std::collections::HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v) {
                problems.push(format!("duplicate vertex label {v:?}"));
            }
        }
        if self.d.len() != n || self.d.iter().any(|row| row.len() != n) {
            problems.push(format!("matrix is not {n}x{n}"));
            return Err(AlgebraError::InvalidCartan(problems));
        }
        for a in 0..n {
            if self.d[a][a] != 2 {
                problems.push(format!("d[{a}][{a}] = {} is not 2", self.d[a][a]));
            }
            for b in 0..n {
                if a < b && self.d[a][b] != self.d[b][a] {
                    problems.push(format!(
                        "d[{a}][{b}] = {} differs from d[{b}][{a}] = {}",
                        self.d[a][b], self.d[b][a]
                    ));
                }
                if a != b && self.d[a][b] > 0 {
                    problems.push(format!("off-diagonal d[{a}][{b}] = {} is positive", self.d[a][b]));
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(AlgebraError::InvalidCartan(problems))
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.d[i][j]
    }

    /// Same as [`entry`](Self::entry) as an `i32` exponent.
    pub fn dij(&self, i: usize, j: usize) -> i32 {
        self.d[i][j] as i32
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| AlgebraError::UnknownVertex(label.to_string()))
    }

    pub fn label(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        for v in [i, j] {
            if v >= self.rank() {
                return Err(AlgebraError::UnknownVertex(v.to_string()));
            }
        }
        Ok(())
    }

    /// Trigonometric kernel `ζ_ij(z/w) = (z − w q^{−d_ij}) / (z − w)`.
    pub fn zeta(&self, i: usize, j: usize) -> Result<ZetaPair> {
        self.check(i, j)?;
        let d = self.dij(i, j);
        let e = if self.broken_zeta { d } else { -d };
        Ok(ZetaPair {
            num: MLaurent::binomial(VarId::Z, QRat::q_pow(e), VarId::W),
            den: MLaurent::binomial(VarId::Z, QRat::one(), VarId::W),
        })
    }

    /// Geometric kernel; its off-diagonal denominators are monomials. For
    /// `d_ij = 0` it is `1 − z/w` (or `1 − w/z`), the value forced by the
    /// correction-factor identity.
    pub fn zeta_geom(&self, i: usize, j: usize) -> Result<ZetaPair> {
        self.check(i, j)?;
        if i == j {
            return self.zeta(i, j);
        }
        let d = self.dij(i, j);
        if d == 0 {
            return self.correction(i, j);
        }
        let e = -d;
        let (z, w) = (VarId::Z, VarId::W);
        let pair = if i < j {
            let mut num = MLaurent::constant(QRat::q_pow(e));
            for c in 0..e {
                num = &num * &MLaurent::binomial(w, QRat::q_pow(2 * c + d), z);
            }
            ZetaPair {
                num,
                den: MLaurent::monomial(Mono::pow(w, e), QRat::one()),
            }
        } else {
            let mut num = MLaurent::one();
            for c in 1..=e {
                num = &num * &MLaurent::binomial(z, QRat::q_pow(2 * c + d), w);
            }
            ZetaPair {
                num,
                den: MLaurent::monomial(Mono::pow(z, e), QRat::one()),
            }
        };
        Ok(pair)
    }

    /// The factor with `ζ^geom_ij = ζ_ij · correction_ij`.
    pub fn correction(&self, i: usize, j: usize) -> Result<ZetaPair> {
        self.check(i, j)?;
        let d = self.dij(i, j);
        let e = -d;
        if i == j {
            return Ok(ZetaPair {
                num: MLaurent::one(),
                den: MLaurent::one(),
            });
        }
        let (z, w) = (VarId::Z, VarId::W);
        let pair = if i < j {
            let mut num = MLaurent::binomial(w, QRat::one(), z);
            for c in 1..e {
                num = &num * &MLaurent::binomial(w, QRat::q_pow(2 * c + d), z);
            }
            ZetaPair {
                num,
                den: MLaurent::monomial(Mono::pow(w, e.max(1)), QRat::one()),
            }
        } else {
            let mut num = MLaurent::binomial(z, QRat::one(), w);
            for c in 1..e {
                num = &num * &MLaurent::binomial(z, QRat::q_pow(2 * c + d), w);
            }
            ZetaPair {
                num,
                den: MLaurent::monomial(Mono::pow(z, e.max(1)), QRat::one()),
            }
        };
        Ok(pair)
    }
}

/// A kernel `num(z, w) / den(z, w)` in the formal variables `z, w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaPair {
    pub num: MLaurent,
    pub den: MLaurent,
}

impl ZetaPair {
    /// Places the kernel at `(a, b)`, i.e. evaluates at `z = a, w = b`.
    pub fn at(&self, a: VarId, b: VarId) -> ZetaPair {
        let ren = |v: VarId| match v {
            VarId::Z => a,
            VarId::W => b,
            other => other,
        };
        ZetaPair {
            num: self.num.rename(ren),
            den: self.den.rename(ren),
        }
    }

    pub fn mul(&self, other: &ZetaPair) -> ZetaPair {
        ZetaPair {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    /// Equality as rational functions, by cross-multiplication.
    pub fn same_function(&self, other: &ZetaPair) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    /// The one-variable kernel `num(z, 1) / den(z, 1)`, returned as a pair in `z` alone.
    pub fn dehomogenize(&self) -> ZetaPair {
        let drop_w = |p: &MLaurent| {
            MLaurent::from_terms(
                p.terms()
                    .map(|(m, c)| (Mono::from_pairs(m.iter().filter(|(v, _)| *v != VarId::W)), c.clone())),
            )
        };
        ZetaPair {
            num: drop_w(&self.num),
            den: drop_w(&self.den),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zw(a: i32) -> MLaurent {
        MLaurent::binomial(VarId::Z, QRat::q_pow(a), VarId::W)
    }

    #[test]
    fn validation_examples() {
        assert!(CartanMatrix::from_matrix(vec![vec![2, -1], vec![-1, 2]]).is_ok());
        assert!(CartanMatrix::from_matrix(vec![vec![2, -7], vec![-7, 2]]).is_ok());
        let err = CartanMatrix::from_matrix(vec![vec![2, 1], vec![1, 2]]).unwrap_err();
        let AlgebraError::InvalidCartan(msgs) = err else { panic!() };
        assert_eq!(msgs.len(), 2);
        assert!(msgs[0].contains("positive"));
        let err = CartanMatrix::from_matrix(vec![vec![3, -1], vec![-2, 2]]).unwrap_err();
        let AlgebraError::InvalidCartan(msgs) = err else { panic!() };
        assert_eq!(msgs.len(), 2);
    }

    #[test]
    fn trigonometric_kernels() {
        let c = CartanMatrix::from_matrix(vec![vec![2, -1, 0], vec![-1, 2, 0], vec![0, 0, 2]]).unwrap();
        assert_eq!(c.zeta(0, 0).unwrap().num, zw(-2));
        assert_eq!(c.zeta(0, 1).unwrap().num, zw(1));
        let orth = c.zeta(0, 2).unwrap();
        assert_eq!(orth.num, orth.den);
        assert_eq!(c.zeta(0, 1).unwrap(), c.zeta(1, 0).unwrap());
        assert!(c.zeta(0, 5).is_err());
    }

    #[test]
    fn geometric_kernels() {
        let c = CartanMatrix::a2();
        assert_eq!(c.zeta_geom(0, 0).unwrap(), c.zeta(0, 0).unwrap());
        let lo = c.zeta_geom(0, 1).unwrap();
        let want = MLaurent::binomial(VarId::W, QRat::q_pow(-1), VarId::Z).scale(&QRat::q_pow(1));
        assert_eq!(lo.num, want);
        assert_eq!(lo.den, MLaurent::var(VarId::W));
        let hi = c.zeta_geom(1, 0).unwrap();
        assert_eq!(hi.num, zw(1));
        assert_eq!(hi.den, MLaurent::var(VarId::Z));
    }

    #[test]
    fn orthogonal_geometric_kernel() {
        let c = CartanMatrix::rank_two(0);
        let lo = c.zeta_geom(0, 1).unwrap();
        assert_eq!(lo.num, MLaurent::binomial(VarId::W, QRat::one(), VarId::Z));
        assert_eq!(lo.den, MLaurent::var(VarId::W));
        let hi = c.zeta_geom(1, 0).unwrap();
        assert_eq!(hi.num, MLaurent::binomial(VarId::Z, QRat::one(), VarId::W));
        assert_eq!(hi.den, MLaurent::var(VarId::Z));
    }

    #[test]
    fn geometric_equals_trigonometric_times_correction() {
        for e in 0..=4 {
            let c = CartanMatrix::rank_two(-e);
            for (i, j) in [(0, 1), (1, 0), (0, 0)] {
                let lhs = c.zeta_geom(i, j).unwrap();
                let rhs = c.zeta(i, j).unwrap().mul(&c.correction(i, j).unwrap());
                assert!(lhs.same_function(&rhs), "d = {}, ({i},{j})", -e);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let c = CartanMatrix::a2();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(CartanMatrix::parse_json(&text).unwrap(), c);
        assert!(CartanMatrix::parse_json("{\"vertices\": [\"1\"]").is_err());
    }
}
