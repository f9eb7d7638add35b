//! The big shuffle algebras `V^±` and the geometric variant: products,
//! the maps from the free algebra, variable inversion, wheel conditions
//! and the renormalization `Ω`.
//!
//! Symmetrization never enumerates permutations. A product is written as
//! `N / (D · V)` with `D` the element denominator and `V` the same-color
//! Vandermonde; then `Sym[N / (D V)] = Alt(N) / (D V)`, and `Alt(N) / V`
//! is assembled from Schur polynomials.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cartan::CartanMatrix;
use crate::error::{AlgebraError, Result};
use crate::freealg::{FreeElem, Word};
use crate::multipoly::{alternant_coefficients, alternant_quotient, vandermonde, MLaurent, Mono, Order, Subst, VarId};
use crate::scalars::{QRat, Rat};
use crate::zigzag::{enumerate_distinguished, enumerate_general, DistZigZag, GeneralZigZag};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if *self == Sign::Plus { "+" } else { "-" })
    }
}

/// Which kernel a product uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// `ζ_ij(z_a / z_b)`.
    Plus,
    /// `ζ_ji(z_b / z_a)`.
    Minus,
    /// `ζ^geom_ij(z_a / z_b)`.
    Geom,
}

impl From<Sign> for Kernel {
    fn from(s: Sign) -> Kernel {
        match s {
            Sign::Plus => Kernel::Plus,
            Sign::Minus => Kernel::Minus,
        }
    }
}

/// An element `numerator / ∏_{i<j} ∏_{a,b} (z_{ia} − z_{jb})` of `V^±_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShufElem {
    pub sign: Sign,
    pub n: Vec<usize>,
    pub numerator: MLaurent,
}

/// An element of the geometric shuffle algebra: a symmetric Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeomElem {
    pub n: Vec<usize>,
    pub numerator: MLaurent,
}

/// A failed wheel condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WheelWitness {
    pub zigzag: GeneralZigZag,
    /// The distinguished description, when the failing zig-zag is distinguished.
    pub distinguished: Option<DistZigZag>,
    pub required: u32,
    pub found: Order,
}

impl fmt::Display for WheelWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.distinguished {
            Some(z) => write!(f, "{z}")?,
            None => {
                let g = &self.zigzag;
                write!(f, "zig-zag(i={}, j={}, top {}..{}, bottom {}..{})", g.i, g.j, g.s, g.t, g.sp, g.tp)?
            }
        }
        write!(f, ": needs order {}, found {}", self.required, self.found)
    }
}

fn factorial(n: usize) -> Rat {
    (1..=n as i64).fold(Rat::one(), |acc, a| &acc * &Rat::from_int(a))
}

fn dims_factorial(n: &[usize]) -> Rat {
    n.iter().fold(Rat::one(), |acc, &a| &acc * &factorial(a))
}

fn add_dims(a: &[usize], b: &[usize]) -> Vec<usize> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|c| a.get(c).copied().unwrap_or(0) + b.get(c).copied().unwrap_or(0))
        .collect()
}

/// The factor a kernel contributes to the cleared numerator for the ordered pair
/// `(a, b)`: its numerator, divided by its denominator whenever that denominator is
/// not already accounted for by the element denominator or the Vandermonde.
pub fn kernel_factor(c: &CartanMatrix, kernel: Kernel, a: VarId, b: VarId) -> MLaurent {
    let (ca, cb) = (a.color as usize, b.color as usize);
    let d = c.dij(ca, cb);
    let e = if c.is_broken() { d } else { -d };
    let orient = |p: MLaurent| if ca > cb { -&p } else { p };
    match kernel {
        Kernel::Plus => orient(MLaurent::binomial(a, QRat::q_pow(e), b)),
        Kernel::Minus => orient(-&MLaurent::binomial(b, QRat::q_pow(e), a)),
        Kernel::Geom if ca == cb => MLaurent::binomial(a, QRat::q_pow(e), b),
        Kernel::Geom => {
            let z = c.zeta_geom(ca, cb).expect("vertex in range").at(a, b);
            let (m, coef) = z.den.lead().expect("monomial denominator");
            z.num.mul_term(&m.inv(), &coef.recip().expect("nonzero"))
        }
    }
}

/// `∏_{i<j} ∏_{a,b} (z_{ia} − z_{jb})`.
pub fn element_denominator(n: &[usize]) -> MLaurent {
    let mut out = MLaurent::one();
    for i in 0..n.len() {
        for j in i + 1..n.len() {
            for a in 1..=n[i] as u32 {
                for b in 1..=n[j] as u32 {
                    out = &out * &MLaurent::binomial(VarId::new(i as u32, a), QRat::one(), VarId::new(j as u32, b));
                }
            }
        }
    }
    out
}

fn shift_slots(p: &MLaurent, by: &[usize]) -> MLaurent {
    p.rename(|v| VarId::new(v.color, v.slot + by.get(v.color as usize).copied().unwrap_or(0) as u32))
}

/// Cleared numerator of a product before antisymmetrization.
fn product_numerator(c: &CartanMatrix, kernel: Kernel, n1: &[usize], r1: &MLaurent, n2: &[usize], r2: &MLaurent) -> MLaurent {
    let n = add_dims(n1, n2);
    let mut cross = MLaurent::one();
    for ci in 0..n.len() {
        let first_i = n1.get(ci).copied().unwrap_or(0) as u32;
        for a in 1..=first_i {
            for (cj, &total_j) in n.iter().enumerate() {
                let first_j = n1.get(cj).copied().unwrap_or(0) as u32;
                for b in first_j + 1..=total_j as u32 {
                    cross = &cross * &kernel_factor(c, kernel, VarId::new(ci as u32, a), VarId::new(cj as u32, b));
                }
            }
        }
    }
    let v1 = vandermonde(n1);
    let v2 = shift_slots(&vandermonde(n2), n1);
    let left = r1 * &v1;
    let right = &shift_slots(r2, n1) * &v2;
    &(&left * &right) * &cross
}

fn product(c: &CartanMatrix, kernel: Kernel, n1: &[usize], r1: &MLaurent, n2: &[usize], r2: &MLaurent) -> (Vec<usize>, MLaurent) {
    let n = add_dims(n1, n2);
    let numerator = product_numerator(c, kernel, n1, r1, n2, r2);
    let norm = (&dims_factorial(n1) * &dims_factorial(n2)).recip().expect("factorials are nonzero");
    let quotient = alternant_quotient(&numerator, &n).scale(&QRat::from_rat(norm));
    (n, quotient)
}

impl ShufElem {
    pub fn new(sign: Sign, n: Vec<usize>, numerator: MLaurent) -> ShufElem {
        ShufElem { sign, n, numerator }
    }

    pub fn zero(sign: Sign, n: Vec<usize>) -> ShufElem {
        ShufElem {
            sign,
            n,
            numerator: MLaurent::zero(),
        }
    }

    /// The unit of `V^±`, in degree zero.
    pub fn unit(sign: Sign, rank: usize) -> ShufElem {
        ShufElem {
            sign,
            n: vec![0; rank],
            numerator: MLaurent::one(),
        }
    }

    /// `z_{i1}^k` in degree `ε_i`.
    pub fn generator(sign: Sign, rank: usize, i: usize, k: i32) -> ShufElem {
        let mut n = vec![0; rank];
        n[i] = 1;
        ShufElem {
            sign,
            n,
            numerator: MLaurent::monomial(Mono::pow(VarId::new(i as u32, 1), k), QRat::one()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Total number of variables `|n|`.
    pub fn size(&self) -> usize {
        self.n.iter().sum()
    }

    /// Homogeneous degree of the rational function, if the numerator is homogeneous.
    pub fn hom_degree(&self) -> Option<i64> {
        if !self.numerator.is_homogeneous() {
            return None;
        }
        let pairs: usize = (0..self.n.len())
            .flat_map(|i| (i + 1..self.n.len()).map(move |j| (i, j)))
            .map(|(i, j)| self.n[i] * self.n[j])
            .sum();
        let deg = self.numerator.degree_range().map_or(0, |r| r.0);
        Some(deg - pairs as i64)
    }

    pub fn denominator(&self) -> MLaurent {
        element_denominator(&self.n)
    }

    /// Whether the numerator is symmetric within each color.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n.len()).all(|c| {
            (1..self.n[c] as u32).all(|a| {
                let swapped = self.numerator.rename(|v| {
                    if v.color != c as u32 {
                        v
                    } else if v.slot == a {
                        VarId::new(v.color, a + 1)
                    } else if v.slot == a + 1 {
                        VarId::new(v.color, a)
                    } else {
                        v
                    }
                });
                swapped == self.numerator
            })
        })
    }

    pub fn add(&self, other: &ShufElem) -> Result<ShufElem> {
        self.compatible(other)?;
        Ok(ShufElem {
            sign: self.sign,
            n: self.n.clone(),
            numerator: &self.numerator + &other.numerator,
        })
    }

    pub fn sub(&self, other: &ShufElem) -> Result<ShufElem> {
        self.compatible(other)?;
        Ok(ShufElem {
            sign: self.sign,
            n: self.n.clone(),
            numerator: &self.numerator - &other.numerator,
        })
    }

    pub fn scale(&self, c: &QRat) -> ShufElem {
        ShufElem {
            sign: self.sign,
            n: self.n.clone(),
            numerator: self.numerator.scale(c),
        }
    }

    fn compatible(&self, other: &ShufElem) -> Result<()> {
        if self.sign != other.sign || self.n != other.n {
            return Err(AlgebraError::DegreeMismatch(format!(
                "{:?}{} vs {:?}{}",
                self.n, self.sign, other.n, other.sign
            )));
        }
        Ok(())
    }

    /// Substitutes `z ↦ z^{-1}` and renormalizes into the opposite algebra.
    pub fn invert_variables(&self) -> ShufElem {
        let mut factor = Mono::one();
        let mut pairs = 0usize;
        for i in 0..self.n.len() {
            for j in i + 1..self.n.len() {
                pairs += self.n[i] * self.n[j];
                for a in 1..=self.n[i] as u32 {
                    factor = factor.mul(&Mono::pow(VarId::new(i as u32, a), self.n[j] as i32));
                }
                for b in 1..=self.n[j] as u32 {
                    factor = factor.mul(&Mono::pow(VarId::new(j as u32, b), self.n[i] as i32));
                }
            }
        }
        let sign = if pairs.is_multiple_of(2) { QRat::one() } else { QRat::from_int(-1) };
        ShufElem {
            sign: self.sign.opposite(),
            n: self.n.clone(),
            numerator: self.numerator.invert_variables().mul_term(&factor, &sign),
        }
    }
}

impl fmt::Display for ShufElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} n={:?}] {}", self.sign, self.n, self.numerator)
    }
}

/// The shuffle product in `V^+` or `V^-`.
pub fn shuffle_mul(c: &CartanMatrix, r1: &ShufElem, r2: &ShufElem) -> Result<ShufElem> {
    if r1.sign != r2.sign {
        return Err(AlgebraError::InvalidArgument("cannot multiply elements of V+ and V-".into()));
    }
    let (n, numerator) = product(c, r1.sign.into(), &r1.n, &r1.numerator, &r2.n, &r2.numerator);
    Ok(ShufElem {
        sign: r1.sign,
        n,
        numerator,
    })
}

/// The product in the geometric shuffle algebra.
pub fn shuffle_mul_geom(c: &CartanMatrix, g1: &GeomElem, g2: &GeomElem) -> GeomElem {
    let (n, numerator) = product(c, Kernel::Geom, &g1.n, &g1.numerator, &g2.n, &g2.numerator);
    GeomElem { n, numerator }
}

/// Dimension vector of a word.
pub fn word_dims(rank: usize, w: &Word) -> Vec<usize> {
    let mut n = vec![0; rank];
    for l in &w.0 {
        n[l.color] += 1;
    }
    n
}

/// Variables of a word: the `a`-th letter of color `i` sits at `z_{i, a}`.
pub fn word_variables(w: &Word) -> Vec<VarId> {
    let mut seen: HashMap<usize, u32> = HashMap::new();
    w.0.iter()
        .map(|l| {
            let slot = seen.entry(l.color).or_insert(0);
            *slot += 1;
            VarId::new(l.color as u32, *slot)
        })
        .collect()
}

/// Cleared kernel product `∏_{a<b} K(z_a, z_b)` along a sequence of variables.
pub fn word_kernel(c: &CartanMatrix, kernel: Kernel, vars: &[VarId]) -> MLaurent {
    let mut out = MLaurent::one();
    for a in 0..vars.len() {
        for b in a + 1..vars.len() {
            out = &out * &kernel_factor(c, kernel, vars[a], vars[b]);
        }
    }
    out
}

/// `Σ_w c_w z^k ∏_{a<b} K(z_a, z_b)`: the numerator whose alternant over the
/// Vandermonde is the image of `x`. Also returns the common dimension vector.
pub fn upsilon_cleared(c: &CartanMatrix, kernel: Kernel, x: &FreeElem) -> Result<(Vec<usize>, MLaurent)> {
    let mut dims: Option<Vec<usize>> = None;
    let mut kernels: HashMap<Vec<usize>, MLaurent> = HashMap::new();
    let mut acc: Vec<(Mono, QRat, Vec<usize>)> = Vec::new();
    for (w, coef) in x.terms() {
        if w.0.iter().any(|l| l.color >= c.rank()) {
            return Err(AlgebraError::UnknownVertex(format!("{w}")));
        }
        let n = word_dims(c.rank(), w);
        match &dims {
            None => dims = Some(n.clone()),
            Some(prev) if *prev != n => {
                return Err(AlgebraError::DegreeMismatch(format!("words of dimension {prev:?} and {n:?}")));
            }
            _ => {}
        }
        let vars = word_variables(w);
        let colors: Vec<usize> = w.0.iter().map(|l| l.color).collect();
        kernels.entry(colors.clone()).or_insert_with(|| word_kernel(c, kernel, &vars));
        let mono = Mono::from_pairs(vars.iter().zip(&w.0).map(|(v, l)| (*v, l.exp)));
        acc.push((mono, coef.clone(), colors));
    }
    let mut total = MLaurent::zero();
    let mut grouped: HashMap<Vec<usize>, Vec<(Mono, QRat)>> = HashMap::new();
    for (m, c, colors) in acc {
        grouped.entry(colors).or_default().push((m, c));
    }
    for (colors, monos) in grouped {
        let coeff = MLaurent::from_terms(monos);
        total = &total + &(&coeff * &kernels[&colors]);
    }
    Ok((dims.unwrap_or_else(|| vec![0; c.rank()]), total))
}

/// The algebra map `e_{i,k} ↦ z_{i1}^k` into `V^±`.
pub fn upsilon(c: &CartanMatrix, x: &FreeElem, sign: Sign) -> Result<ShufElem> {
    let (n, cleared) = upsilon_cleared(c, sign.into(), x)?;
    Ok(ShufElem {
        sign,
        n: n.clone(),
        numerator: alternant_quotient(&cleared, &n),
    })
}

/// The algebra map into the geometric shuffle algebra.
pub fn upsilon_geom(c: &CartanMatrix, x: &FreeElem) -> Result<GeomElem> {
    let (n, cleared) = upsilon_cleared(c, Kernel::Geom, x)?;
    Ok(GeomElem {
        n: n.clone(),
        numerator: alternant_quotient(&cleared, &n),
    })
}

/// Whether `x` maps to zero; avoids assembling the image.
pub fn upsilon_vanishes(c: &CartanMatrix, kernel: Kernel, x: &FreeElem) -> Result<bool> {
    let (n, cleared) = upsilon_cleared(c, kernel, x)?;
    Ok(alternant_coefficients(&cleared, &n).is_empty())
}

fn specialize_rows(p: &MLaurent, z: &GeneralZigZag) -> MLaurent {
    let map: HashMap<VarId, Subst> = z
        .specialization()
        .into_iter()
        .map(|(v, t, e)| {
            (
                v,
                Subst {
                    mono: Mono::var(t),
                    qpow: e,
                },
            )
        })
        .collect();
    p.substitute(|v| {
        Some(map.get(&v).cloned().unwrap_or(Subst {
            mono: Mono::var(v),
            qpow: 0,
        }))
    })
    .expect("total assignment")
}

/// Divisibility order of the numerator along the zig-zag's specialization.
pub fn wheel_order(p: &MLaurent, z: &GeneralZigZag) -> Order {
    specialize_rows(p, z).divisibility_order()
}

fn ordered_pairs(rank: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..rank).flat_map(move |i| (0..rank).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// Checks every distinguished zig-zag that fits into the degree.
pub fn wheel_member(c: &CartanMatrix, r: &ShufElem) -> std::result::Result<(), WheelWitness> {
    if r.is_zero() {
        return Ok(());
    }
    for (i, j) in ordered_pairs(c.rank()) {
        for z in enumerate_distinguished(c, i, j, r.n[i], r.n[j]) {
            let g = z.general();
            let found = wheel_order(&r.numerator, &g);
            if !found.at_least(z.m) {
                return Err(WheelWitness {
                    zigzag: g,
                    distinguished: Some(z),
                    required: z.m,
                    found,
                });
            }
        }
    }
    Ok(())
}

/// Checks `(x − y)^{m_Z}` divisibility for one arbitrary zig-zag.
pub fn wheel_general(c: &CartanMatrix, r: &ShufElem, z: &GeneralZigZag) -> Result<bool> {
    if z.len_top() as usize > r.n[z.i] || z.len_bottom() as usize > r.n[z.j] {
        return Err(AlgebraError::InvalidArgument("zig-zag rows exceed the dimension vector".into()));
    }
    Ok(wheel_order(&r.numerator, z).at_least(z.m_z(c)))
}

/// Checks every general zig-zag that fits into the degree.
pub fn wheel_general_all(c: &CartanMatrix, r: &ShufElem) -> std::result::Result<(), WheelWitness> {
    if r.is_zero() {
        return Ok(());
    }
    for (i, j) in ordered_pairs(c.rank()) {
        for z in enumerate_general(c, i, j, r.n[i], r.n[j]) {
            let need = z.m_z(c);
            if need == 0 {
                continue;
            }
            let found = wheel_order(&r.numerator, &z);
            if !found.at_least(need) {
                return Err(WheelWitness {
                    zigzag: z,
                    distinguished: None,
                    required: need,
                    found,
                });
            }
        }
    }
    Ok(())
}

/// Checks `(x − y)^{M_Z}` divisibility for every general zig-zag, including the
/// one-top, one-bottom shapes.
pub fn wheel_member_geom(c: &CartanMatrix, g: &GeomElem) -> std::result::Result<(), WheelWitness> {
    if g.numerator.is_zero() {
        return Ok(());
    }
    for (i, j) in ordered_pairs(c.rank()) {
        for z in enumerate_general(c, i, j, g.n[i], g.n[j]) {
            let need = z.big_m_z(c);
            let found = wheel_order(&g.numerator, &z);
            if !found.at_least(need) {
                return Err(WheelWitness {
                    zigzag: z,
                    distinguished: None,
                    required: need,
                    found,
                });
            }
        }
    }
    Ok(())
}

/// `Ω(R) = R · ∏_{i<j} ∏_{a,b} (1 − z_{ia}/z_{jb}) ∏_{c=1}^{−d_ij−1} (1 − z_{ia} q^{2c+d_ij} / z_{jb})`.
pub fn omega(c: &CartanMatrix, r: &ShufElem) -> Result<GeomElem> {
    if r.sign != Sign::Plus {
        return Err(AlgebraError::InvalidArgument("omega is defined on V+".into()));
    }
    let mut factor = MLaurent::one();
    for i in 0..r.n.len() {
        for j in i + 1..r.n.len() {
            let d = c.dij(i, j);
            for a in 1..=r.n[i] as u32 {
                for b in 1..=r.n[j] as u32 {
                    let (za, zb) = (VarId::new(i as u32, a), VarId::new(j as u32, b));
                    // (1 − z_a/z_b) / (z_a − z_b) = −1/z_b
                    let mut f = MLaurent::monomial(Mono::pow(zb, -1), QRat::from_int(-1));
                    for cc in 1..-d {
                        let lin = MLaurent::binomial(zb, QRat::q_pow(2 * cc + d), za);
                        f = &f * &lin.mul_term(&Mono::pow(zb, -1), &QRat::one());
                    }
                    factor = &factor * &f;
                }
            }
        }
    }
    Ok(GeomElem {
        n: r.n.clone(),
        numerator: &r.numerator * &factor,
    })
}

impl GeomElem {
    pub fn generator(rank: usize, i: usize, k: i32) -> GeomElem {
        let g = ShufElem::generator(Sign::Plus, rank, i, k);
        GeomElem {
            n: g.n,
            numerator: g.numerator,
        }
    }
}
