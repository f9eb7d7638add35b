//! Exact scalars: rationals with a machine-word fast path, Laurent polynomials
//! in `q`, and the field `QRat` of rational functions in `q`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;

const SMALL_BOUND: i64 = 1 << 62;

/// An exact rational number. Values whose numerator and denominator fit
/// comfortably in an `i64` are kept unboxed; everything else is a `BigRational`.
#[derive(Clone, Debug)]
pub enum Rat {
    Small(Rational64),
    Big(BigRational),
}

impl Rat {
    pub fn zero() -> Rat {
        Rat::Small(Rational64::zero())
    }

    pub fn one() -> Rat {
        Rat::Small(Rational64::one())
    }

    pub fn from_int(n: i64) -> Rat {
        Rat::from_small(Rational64::from_integer(n))
    }

    pub fn new(n: i64, d: i64) -> Rat {
        assert!(d != 0, "zero denominator");
        Rat::from_big(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn from_small(r: Rational64) -> Rat {
        if r.numer().abs() < SMALL_BOUND && *r.denom() < SMALL_BOUND {
            Rat::Small(r)
        } else {
            Rat::Big(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
        }
    }

    pub fn from_big(r: BigRational) -> Rat {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n.abs() < SMALL_BOUND && d < SMALL_BOUND {
                return Rat::Small(Rational64::new_raw(n, d));
            }
        }
        Rat::Big(r)
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Rat::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_zero(),
            Rat::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_one(),
            Rat::Big(r) => r.is_one(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_negative(),
            Rat::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_integer(),
            Rat::Big(r) => r.is_integer(),
        }
    }

    fn binop(
        &self,
        other: &Rat,
        small: impl Fn(&Rational64, &Rational64) -> Option<Rational64>,
        big: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, other) {
            if let Some(r) = small(a, b) {
                return Rat::from_small(r);
            }
        }
        Rat::from_big(big(&self.to_big(), &other.to_big()))
    }

    pub fn recip(&self) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rat::Small(r) => Rat::from_small(r.recip()),
            Rat::Big(r) => Rat::from_big(r.recip()),
        })
    }

    pub fn checked_div(&self, other: &Rat) -> Option<Rat> {
        if other.is_zero() {
            return None;
        }
        Some(self.binop(other, |a, b| a.checked_div(b), |a, b| a / b))
    }

    pub fn pow(&self, e: i32) -> Option<Rat> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Rat::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }

    /// Parses `"p"` or `"p/r"` with optional sign; no decimals.
    pub fn parse(s: &str) -> Result<Rat, AlgebraError> {
        let bad = || AlgebraError::Parse(format!("bad rational {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rat::from_big(BigRational::new(n, d)))
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Rat) -> bool {
        match (self, other) {
            (Rat::Small(a), Rat::Small(b)) => a == b,
            _ => self.to_big() == other.to_big(),
        }
    }
}

impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        match (self, other) {
            (Rat::Small(a), Rat::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Add for &Rat {
    type Output = Rat;
    fn add(self, other: &Rat) -> Rat {
        self.binop(other, |a, b| a.checked_add(b), |a, b| a + b)
    }
}

impl Sub for &Rat {
    type Output = Rat;
    fn sub(self, other: &Rat) -> Rat {
        self.binop(other, |a, b| a.checked_sub(b), |a, b| a - b)
    }
}

impl Mul for &Rat {
    type Output = Rat;
    fn mul(self, other: &Rat) -> Rat {
        self.binop(other, |a, b| a.checked_mul(b), |a, b| a * b)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Rat::Small(r) => Rat::Small(-r),
            Rat::Big(r) => Rat::from_big(-r),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(r) => write!(f, "{r}"),
            Rat::Big(r) => write!(f, "{r}"),
        }
    }
}

/// A Laurent polynomial in `q` with rational coefficients: `Σ coef[k] q^(low+k)`.
/// The first and last stored coefficients are nonzero; zero has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    low: i32,
    coef: Vec<Rat>,
}

impl QPoly {
    pub fn zero() -> QPoly {
        QPoly { low: 0, coef: Vec::new() }
    }

    pub fn one() -> QPoly {
        QPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> QPoly {
        QPoly::monomial(c, 0)
    }

    pub fn monomial(c: Rat, e: i32) -> QPoly {
        if c.is_zero() {
            QPoly::zero()
        } else {
            QPoly { low: e, coef: vec![c] }
        }
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms(terms: impl IntoIterator<Item = (i32, Rat)>) -> QPoly {
        let terms: Vec<(i32, Rat)> = terms.into_iter().collect();
        if terms.is_empty() {
            return QPoly::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coef = vec![Rat::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coef[(e - lo) as usize];
            *slot = &*slot + &c;
        }
        QPoly::trimmed(lo, coef)
    }

    fn trimmed(mut low: i32, mut coef: Vec<Rat>) -> QPoly {
        while coef.last().is_some_and(|c| c.is_zero()) {
            coef.pop();
        }
        let lead_zeros = coef.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coef.len() {
            return QPoly::zero();
        }
        coef.drain(..lead_zeros);
        low += lead_zeros as i32;
        QPoly { low, coef }
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coef.len() == 1 && self.coef[0].is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.coef.len() == 1
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn high(&self) -> i32 {
        self.low + self.coef.len() as i32 - 1
    }

    pub fn lead(&self) -> &Rat {
        self.coef.last().expect("zero polynomial has no leading coefficient")
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rat)> + '_ {
        self.coef
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i32, c))
    }

    pub fn coefficient(&self, e: i32) -> Rat {
        if self.is_zero() || e < self.low || e > self.high() {
            Rat::zero()
        } else {
            self.coef[(e - self.low) as usize].clone()
        }
    }

    pub fn shift(&self, e: i32) -> QPoly {
        QPoly {
            low: self.low + e,
            coef: self.coef.clone(),
        }
    }

    pub fn scale(&self, c: &Rat) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            low: self.low,
            coef: self.coef.iter().map(|a| a * c).collect(),
        }
    }

    pub fn eval(&self, q0: &Rat) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if q0.is_zero() && self.low < 0 {
            return None;
        }
        let mut acc = Rat::zero();
        for c in self.coef.iter().rev() {
            acc = &(&acc * q0) + c;
        }
        Some(&acc * &q0.pow(self.low)?)
    }

    /// Polynomial division with remainder, both operands shifted to lowest exponent 0.
    fn divrem_poly(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
        let mut rem: Vec<Rat> = a.to_vec();
        if a.len() < b.len() {
            return (Vec::new(), rem);
        }
        let lead_inv = b.last().unwrap().recip().unwrap();
        let mut quot = vec![Rat::zero(); a.len() - b.len() + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + b.len() - 1] * &lead_inv;
            if !c.is_zero() {
                for (t, bt) in b.iter().enumerate() {
                    rem[k + t] = &rem[k + t] - &(&c * bt);
                }
            }
            quot[k] = c;
        }
        rem.truncate(b.len() - 1);
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
        (quot, rem)
    }

    /// Monic gcd of the polynomial parts (lowest exponents shifted to 0).
    fn gcd_poly(a: &QPoly, b: &QPoly) -> Vec<Rat> {
        let mut x = a.coef.clone();
        let mut y = b.coef.clone();
        while !y.is_empty() {
            let (_, r) = QPoly::divrem_poly(&x, &y);
            x = y;
            y = r;
        }
        let inv = x.last().unwrap().recip().unwrap();
        x.iter().map(|c| c * &inv).collect()
    }

    fn exact_quotient(&self, g: &[Rat]) -> QPoly {
        let (q, r) = QPoly::divrem_poly(&self.coef, g);
        debug_assert!(r.is_empty(), "gcd must divide exactly");
        QPoly::trimmed(self.low, q)
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, other: &QPoly) -> QPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(other.low);
        let hi = self.high().max(other.high());
        let mut coef = vec![Rat::zero(); (hi - lo + 1) as usize];
        for (e, c) in self.terms().chain(other.terms()) {
            let slot = &mut coef[(e - lo) as usize];
            *slot = &*slot + c;
        }
        QPoly::trimmed(lo, coef)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            low: self.low,
            coef: self.coef.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, other: &QPoly) -> QPoly {
        self + &(-other)
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        if other.coef.len() == 1 {
            return QPoly {
                low: self.low + other.low,
                coef: self.coef.iter().map(|c| c * &other.coef[0]).collect(),
            };
        }
        if self.coef.len() == 1 {
            return other * self;
        }
        let mut coef = vec![Rat::zero(); self.coef.len() + other.coef.len() - 1];
        for (a, ca) in self.coef.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.coef.iter().enumerate() {
                coef[a + b] = &coef[a + b] + &(ca * cb);
            }
        }
        QPoly::trimmed(self.low + other.low, coef)
    }
}

/// An element of `Q(q)`, kept as a reduced fraction whose denominator has
/// lowest exponent 0 and leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QRat {
    num: QPoly,
    den: QPoly,
}

impl QRat {
    pub fn zero() -> QRat {
        QRat {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> QRat {
        QRat::from_int(1)
    }

    pub fn from_int(n: i64) -> QRat {
        QRat::from_rat(Rat::from_int(n))
    }

    pub fn from_rat(c: Rat) -> QRat {
        QRat {
            num: QPoly::constant(c),
            den: QPoly::one(),
        }
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> QRat {
        QRat::monomial(Rat::one(), e)
    }

    /// `c·q^e`.
    pub fn monomial(c: Rat, e: i32) -> QRat {
        QRat {
            num: QPoly::monomial(c, e),
            den: QPoly::one(),
        }
    }

    /// `q^a − q^b`, a frequent building block.
    pub fn q_diff(a: i32, b: i32) -> QRat {
        QRat::from_poly(QPoly::from_terms([(a, Rat::one()), (b, Rat::from_int(-1))]))
    }

    pub fn from_poly(num: QPoly) -> QRat {
        QRat { num, den: QPoly::one() }
    }

    /// Builds `num/den` in canonical form.
    pub fn from_fraction(num: QPoly, den: QPoly) -> Result<QRat, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(QRat::normalize(num, den))
    }

    fn normalize(num: QPoly, den: QPoly) -> QRat {
        if num.is_zero() {
            return QRat::zero();
        }
        let shift = -den.low;
        let mut num = num.shift(shift);
        let mut den = den.shift(shift);
        if den.is_monomial() {
            let inv = den.coef[0].recip().unwrap();
            return QRat {
                num: num.scale(&inv),
                den: QPoly::one(),
            };
        }
        let g = QPoly::gcd_poly(&num, &den);
        if g.len() > 1 {
            num = num.exact_quotient(&g);
            den = den.exact_quotient(&g);
        }
        let inv = den.lead().recip().unwrap();
        if !inv.is_one() {
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        QRat { num, den }
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial in `q`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Multiplies by `c·q^e` without any gcd work.
    pub fn mul_monomial(&self, c: &Rat, e: i32) -> QRat {
        if c.is_zero() || self.is_zero() {
            return QRat::zero();
        }
        QRat {
            num: self.num.scale(c).shift(e),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<QRat, AlgebraError> {
        QRat::from_fraction(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &QRat) -> Result<QRat, AlgebraError> {
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, e: i32) -> Result<QRat, AlgebraError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = QRat::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Evaluates at a rational point `q0`, reporting a pole if the denominator vanishes.
    pub fn eval(&self, q0: &Rat) -> Result<Rat, AlgebraError> {
        let pole = || AlgebraError::Pole(q0.to_string());
        let d = self.den.eval(q0).ok_or_else(pole)?;
        if d.is_zero() {
            return Err(pole());
        }
        let n = self.num.eval(q0).ok_or_else(pole)?;
        Ok(n.checked_div(&d).unwrap())
    }

    /// The symmetric quantum integer `[n]_q = (q^n − q^-n)/(q − q^-1)`.
    pub fn qint(n: u32) -> QRat {
        QRat::from_poly(QPoly::from_terms((0..n as i32).map(|a| (n as i32 - 1 - 2 * a, Rat::one()))))
    }
}

/// Symmetric q-binomial coefficient `[n]! / ([k]! [n−k]!)`.
pub fn qbinomial(n: u32, k: u32) -> Result<QRat, AlgebraError> {
    if k > n {
        return Err(AlgebraError::InvalidArgument(format!("qbinomial: k = {k} exceeds n = {n}")));
    }
    let fact = |m: u32| (1..=m).fold(QRat::one(), |acc, a| &acc * &QRat::qint(a));
    fact(n).checked_div(&(&fact(k) * &fact(n - k)))
}

/// Evaluates `a` at the rational point `q0`.
pub fn qrat_eval(a: &QRat, q0: &Rat) -> Result<Rat, AlgebraError> {
    a.eval(q0)
}

impl Add for &QRat {
    type Output = QRat;
    fn add(self, other: &QRat) -> QRat {
        if self.den.is_one() && other.den.is_one() {
            return QRat {
                num: &self.num + &other.num,
                den: QPoly::one(),
            };
        }
        if self.den == other.den {
            return QRat::normalize(&self.num + &other.num, self.den.clone());
        }
        QRat::normalize(&(&self.num * &other.den) + &(&other.num * &self.den), &self.den * &other.den)
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &QRat {
    type Output = QRat;
    fn sub(self, other: &QRat) -> QRat {
        self + &(-other)
    }
}

impl Mul for &QRat {
    type Output = QRat;
    fn mul(self, other: &QRat) -> QRat {
        if self.is_zero() || other.is_zero() {
            return QRat::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return QRat {
                num: &self.num * &other.num,
                den: QPoly::one(),
            };
        }
        QRat::normalize(&self.num * &other.num, &self.den * &other.den)
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, other: $t) -> $t {
                (&self).$m(&other)
            }
        }
    )*};
}
forward_owned!(Rat, Add::add, Sub::sub, Mul::mul);
forward_owned!(QPoly, Add::add, Sub::sub, Mul::mul);
forward_owned!(QRat, Add::add, Sub::sub, Mul::mul);

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        -&self
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<(i32, &Rat)> = self.terms().collect();
        for (pos, (e, c)) in terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -*c } else { (*c).clone() };
            match (pos, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = match e {
                0 => String::new(),
                1 => "q".to_string(),
                e => format!("q^{e}"),
            };
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &QPoly| {
            if p.terms().count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

/// Greatest common divisor helper re-exported for callers that clear integer denominators.
pub fn lcm_int(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QRat {
        QRat::q_pow(1)
    }

    #[test]
    fn square_of_q_plus_inverse() {
        let a = &q() + &QRat::q_pow(-1);
        let sq = &a * &a;
        let expected = QRat::from_poly(QPoly::from_terms([(2, Rat::one()), (0, Rat::from_int(2)), (-2, Rat::one())]));
        assert_eq!(sq, expected);
    }

    #[test]
    fn fraction_reduces_by_gcd() {
        let num = QPoly::from_terms([(2, Rat::one()), (0, Rat::from_int(-1))]);
        let den = QPoly::from_terms([(1, Rat::one()), (0, Rat::from_int(-1))]);
        let r = QRat::from_fraction(num, den).unwrap();
        assert_eq!(r, &q() + &QRat::one());
        assert!(r.is_laurent());
    }

    #[test]
    fn quantum_two_reduces() {
        let r = QRat::q_diff(2, -2).checked_div(&QRat::q_diff(1, -1)).unwrap();
        assert_eq!(r, &q() + &QRat::q_pow(-1));
    }

    #[test]
    fn canonical_denominator() {
        let r = QRat::one().checked_div(&QRat::q_diff(-1, 1)).unwrap();
        assert_eq!(r.denom().low(), 0);
        assert!(r.denom().lead().is_one());
        assert_eq!(r.to_string(), "-q/(q^2 - 1)");
    }

    #[test]
    fn division_by_zero_is_distinct() {
        assert_eq!(QRat::one().checked_div(&QRat::zero()), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn qbinomial_examples() {
        assert_eq!(qbinomial(2, 1).unwrap(), &q() + &QRat::q_pow(-1));
        assert_eq!(qbinomial(5, 0).unwrap(), QRat::one());
        let three = QRat::from_poly(QPoly::from_terms([(2, Rat::one()), (0, Rat::one()), (-2, Rat::one())]));
        assert_eq!(qbinomial(3, 1).unwrap(), three);
        assert!(qbinomial(1, 2).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let a = &q() + &QRat::q_pow(-1);
        assert_eq!(qrat_eval(&a, &Rat::from_int(2)).unwrap(), Rat::new(5, 2));
        assert_eq!(qrat_eval(&QRat::zero(), &Rat::new(7, 3)).unwrap(), Rat::zero());
        assert_eq!(qrat_eval(&qbinomial(2, 1).unwrap(), &Rat::from_int(3)).unwrap(), Rat::new(10, 3));
        let pole = QRat::one().checked_div(&QRat::q_diff(1, 0)).unwrap();
        assert!(matches!(qrat_eval(&pole, &Rat::one()), Err(AlgebraError::Pole(_))));
    }

    #[test]
    fn small_overflow_promotes() {
        let big = Rat::from_int(1 << 61);
        let p = &big * &big;
        assert!(matches!(p, Rat::Big(_)));
        let back = p.checked_div(&big).unwrap();
        assert_eq!(back, big);
        assert!(matches!(back, Rat::Small(_)));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3", "-7/2", "0", "123456789012345678901234567891/7"] {
            assert_eq!(Rat::parse(s).unwrap().to_string(), s);
        }
        assert!(Rat::parse("1.5").is_err());
    }
}
