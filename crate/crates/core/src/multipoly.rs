//! Sparse multivariate Laurent polynomials over `Q(q)` in color-indexed
//! variables `z_{i,a}`, plus the alternant machinery used to symmetrize
//! shuffle-algebra numerators without enumerating permutations.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use itertools::Itertools;
use smallvec::SmallVec;

use crate::error::{AlgebraError, Result};
use crate::scalars::{QRat, Rat};

/// Color reserved for the formal variables `x, y, z, w`.
pub const FORMAL_COLOR: u32 = u32::MAX - 8;

/// A variable `z_{color, slot}`; slots start at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub color: u32,
    pub slot: u32,
}

impl VarId {
    pub const X: VarId = VarId {
        color: FORMAL_COLOR,
        slot: 1,
    };
    pub const Y: VarId = VarId {
        color: FORMAL_COLOR,
        slot: 2,
    };
    pub const Z: VarId = VarId {
        color: FORMAL_COLOR,
        slot: 3,
    };
    pub const W: VarId = VarId {
        color: FORMAL_COLOR,
        slot: 4,
    };

    pub const fn new(color: u32, slot: u32) -> VarId {
        VarId { color, slot }
    }

    pub fn is_formal(&self) -> bool {
        self.color == FORMAL_COLOR
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_formal() {
            let name = ["x", "y", "z", "w"].get(self.slot as usize - 1).copied().unwrap_or("t");
            write!(f, "{name}")
        } else {
            write!(f, "z{}.{}", self.color, self.slot)
        }
    }
}

type MonoVec = SmallVec<[(VarId, i32); 6]>;

/// A Laurent monomial: variables in increasing order, no zero exponents.
/// Ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(MonoVec);

impl Mono {
    pub fn one() -> Mono {
        Mono(SmallVec::new())
    }

    pub fn var(v: VarId) -> Mono {
        Mono::pow(v, 1)
    }

    pub fn pow(v: VarId, e: i32) -> Mono {
        let mut m = SmallVec::new();
        if e != 0 {
            m.push((v, e));
        }
        Mono(m)
    }

    /// Builds from arbitrary `(var, exp)` pairs, merging repeats.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, i32)>) -> Mono {
        let mut v: MonoVec = pairs.into_iter().collect();
        v.sort_unstable_by_key(|p| p.0);
        let mut out: MonoVec = SmallVec::with_capacity(v.len());
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        out.retain(|p| p.1 != 0);
        Mono(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, v: VarId) -> i32 {
        self.0.iter().find(|p| p.0 == v).map_or(0, |p| p.1)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|p| p.1 as i64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, i32)> + '_ {
        self.0.iter().copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|p| p.0)
    }

    pub fn inv(&self) -> Mono {
        Mono(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out: MonoVec = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        self.mul(&other.inv())
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Mono) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Mono) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            let (mut i, mut j) = (0, 0);
            loop {
                match (a.get(i), b.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(&(_, ea)), None) => return ea.cmp(&0),
                    (None, Some(&(_, eb))) => return 0.cmp(&eb),
                    (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                        Ordering::Less => return ea.cmp(&0),
                        Ordering::Greater => return 0.cmp(&eb),
                        Ordering::Equal => {
                            if ea != eb {
                                return ea.cmp(&eb);
                            }
                            i += 1;
                            j += 1;
                        }
                    },
                }
            }
        })
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts = self.0.iter().map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") });
        write!(f, "{}", parts.format("*"))
    }
}

/// Result of [`MLaurent::divisibility_order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn at_least(&self, m: u32) -> bool {
        match self {
            Order::Finite(k) => *k >= m,
            Order::Infinite => true,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// Image of one variable under a monomial substitution: `v ↦ q^qpow · mono`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subst {
    pub mono: Mono,
    pub qpow: i32,
}

/// A Laurent polynomial with `QRat` coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MLaurent {
    terms: BTreeMap<Mono, QRat>,
}

impl MLaurent {
    pub fn zero() -> MLaurent {
        MLaurent { terms: BTreeMap::new() }
    }

    pub fn one() -> MLaurent {
        MLaurent::constant(QRat::one())
    }

    pub fn constant(c: QRat) -> MLaurent {
        MLaurent::monomial(Mono::one(), c)
    }

    pub fn var(v: VarId) -> MLaurent {
        MLaurent::monomial(Mono::var(v), QRat::one())
    }

    pub fn monomial(m: Mono, c: QRat) -> MLaurent {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MLaurent { terms }
    }

    /// `a − c·b` for variables `a, b` and scalar `c`, the shape of every kernel factor.
    pub fn binomial(a: VarId, c: QRat, b: VarId) -> MLaurent {
        MLaurent::from_terms([(Mono::var(a), QRat::one()), (Mono::var(b), -c)])
    }

    /// Sums the given terms, dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, QRat)>) -> MLaurent {
        let mut acc: HashMap<Mono, QRat> = HashMap::new();
        for (m, c) in terms {
            accumulate(&mut acc, m, c);
        }
        MLaurent::from_map(acc)
    }

    fn from_map(acc: HashMap<Mono, QRat>) -> MLaurent {
        MLaurent {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &QRat)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Mono, QRat)> {
        self.terms.into_iter()
    }

    pub fn lead(&self) -> Option<(&Mono, &QRat)> {
        self.terms.iter().next_back()
    }

    /// The constant if this is a constant polynomial.
    pub fn as_constant(&self) -> Option<QRat> {
        match self.terms.len() {
            0 => Some(QRat::zero()),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Mono) -> QRat {
        self.terms.get(m).cloned().unwrap_or_else(QRat::zero)
    }

    /// Every variable that occurs, in increasing order.
    pub fn variables(&self) -> Vec<VarId> {
        let mut v: Vec<VarId> = self.terms.keys().flat_map(|m| m.vars()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `(min, max)` exponent of each variable over all terms (absent counts as 0).
    pub fn exponent_box(&self) -> BTreeMap<VarId, (i32, i32)> {
        let vars = self.variables();
        let mut out: BTreeMap<VarId, (i32, i32)> = vars.iter().map(|&v| (v, (i32::MAX, i32::MIN))).collect();
        for m in self.terms.keys() {
            for &v in &vars {
                let e = m.exp(v);
                let slot = out.get_mut(&v).unwrap();
                slot.0 = slot.0.min(e);
                slot.1 = slot.1.max(e);
            }
        }
        out
    }

    /// Total degrees `(min, max)` over all terms, `None` for zero.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let first = self.terms.keys().next()?.degree();
        let last = self.terms.keys().next_back()?.degree();
        Some((first, last))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree_range().is_none_or(|(a, b)| a == b)
    }

    pub fn scale(&self, c: &QRat) -> MLaurent {
        if c.is_zero() {
            return MLaurent::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        MLaurent {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by `c·m`.
    pub fn mul_term(&self, m: &Mono, c: &QRat) -> MLaurent {
        if c.is_zero() {
            return MLaurent::zero();
        }
        MLaurent {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MLaurent {
        let mut acc = MLaurent::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Product of a list of factors.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a MLaurent>) -> MLaurent {
        factors.into_iter().fold(MLaurent::one(), |acc, f| &acc * f)
    }

    /// Applies a monomial substitution; variables mapped to `None` are an error.
    pub fn substitute(&self, image: impl Fn(VarId) -> Option<Subst>) -> Result<MLaurent> {
        let mut cache: HashMap<VarId, Subst> = HashMap::new();
        let mut acc: HashMap<Mono, QRat> = HashMap::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut mono = Mono::one();
            let mut qpow = 0i32;
            for (v, e) in m.iter() {
                let s = match cache.get(&v) {
                    Some(s) => s.clone(),
                    None => {
                        let s = image(v).ok_or_else(|| AlgebraError::UnassignedVariable(v.to_string()))?;
                        cache.insert(v, s.clone());
                        s
                    }
                };
                qpow += s.qpow * e;
                let powered = Mono(s.mono.0.iter().map(|&(w, f)| (w, f * e)).collect());
                mono = mono.mul(&powered);
            }
            accumulate(&mut acc, mono, c.mul_monomial(&Rat::one(), qpow));
        }
        Ok(MLaurent::from_map(acc))
    }

    /// Substitutes `v ↦ x^a y^b q^c` for every assigned variable; every variable must be assigned.
    pub fn specialize(&self, assignment: &HashMap<VarId, Subst>) -> Result<MLaurent> {
        self.substitute(|v| assignment.get(&v).cloned())
    }

    /// Renames variables; unmapped variables are kept.
    pub fn rename(&self, f: impl Fn(VarId) -> VarId) -> MLaurent {
        MLaurent::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (Mono::from_pairs(m.iter().map(|(v, e)| (f(v), e))), c.clone())),
        )
    }

    /// Replaces every variable by its inverse.
    pub fn invert_variables(&self) -> MLaurent {
        MLaurent {
            terms: self.terms.iter().map(|(m, c)| (m.inv(), c.clone())).collect(),
        }
    }

    /// Sum of `p` over all slot permutations within each color; `dims[c]` bounds the slots of color `c`.
    pub fn symmetrize(&self, dims: &[usize]) -> Result<MLaurent> {
        self.check_slots(dims)?;
        let mut current = self.clone();
        for (color, &n) in dims.iter().enumerate() {
            if n < 2 {
                continue;
            }
            let mut acc: HashMap<Mono, QRat> = HashMap::new();
            for perm in (1..=n as u32).permutations(n) {
                for (m, c) in &current.terms {
                    let moved = Mono::from_pairs(m.iter().map(|(v, e)| {
                        if v.color == color as u32 {
                            (VarId::new(v.color, perm[v.slot as usize - 1]), e)
                        } else {
                            (v, e)
                        }
                    }));
                    accumulate(&mut acc, moved, c.clone());
                }
            }
            current = MLaurent::from_map(acc);
        }
        Ok(current)
    }

    fn check_slots(&self, dims: &[usize]) -> Result<()> {
        for v in self.variables() {
            let ok = (v.color as usize) < dims.len() && v.slot >= 1 && v.slot as usize <= dims[v.color as usize];
            if !ok {
                return Err(AlgebraError::InvalidArgument(format!(
                    "variable {v} outside dimension vector {dims:?}"
                )));
            }
        }
        Ok(())
    }

    /// Exact quotient `self / d`, or the remainder witness when `d` does not divide.
    pub fn exact_div(&self, d: &MLaurent) -> Result<MLaurent> {
        let (dm, dc) = d.lead().ok_or(AlgebraError::DivisionByZero)?;
        if d.len() == 1 {
            let inv = dc.recip()?;
            return Ok(self.mul_term(&dm.inv(), &inv));
        }
        let dinv = dc.recip()?;
        // Newton-box bounds on admissible quotient exponents.
        let pbox = self.exponent_box();
        let dbox = d.exponent_box();
        let bounds: HashMap<VarId, (i32, i32)> = pbox
            .keys()
            .chain(dbox.keys())
            .map(|&v| {
                let (plo, phi) = pbox.get(&v).copied().unwrap_or((0, 0));
                let (dlo, dhi) = dbox.get(&v).copied().unwrap_or((0, 0));
                (v, (plo - dlo, phi - dhi))
            })
            .collect();
        let in_box = |m: &Mono| {
            m.iter().all(|(v, e)| bounds.get(&v).is_some_and(|&(lo, hi)| lo <= e && e <= hi))
                && bounds.iter().all(|(&v, &(lo, hi))| {
                    let e = m.exp(v);
                    lo <= e && e <= hi
                })
        };
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<Mono, QRat> = BTreeMap::new();
        while let Some((lm, lc)) = rem.iter().next_back() {
            let qm = lm.div(dm);
            if !in_box(&qm) {
                return Err(AlgebraError::NotDivisible {
                    remainder: Box::new(MLaurent { terms: rem }),
                });
            }
            let qc = lc * &dinv;
            for (m, c) in &d.terms {
                let key = m.mul(&qm);
                let delta = c * &qc;
                match rem.get_mut(&key) {
                    Some(slot) => {
                        *slot = &*slot - &delta;
                        if slot.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quot.insert(qm, qc);
        }
        Ok(MLaurent { terms: quot })
    }

    /// Largest `m` with `(x − y)^m` dividing `self` in the Laurent ring.
    pub fn divisibility_order(&self) -> Order {
        self.divisibility_order_in(VarId::X, VarId::Y)
    }

    /// Largest `m` with `(x − y)^m` dividing `self`, for arbitrary variables `x ≠ y`.
    pub fn divisibility_order_in(&self, x: VarId, y: VarId) -> Order {
        if self.is_zero() {
            return Order::Infinite;
        }
        let mut current = self.clone();
        let mut k = 0;
        while let Some(next) = current.divide_by_difference(x, y) {
            current = next;
            k += 1;
        }
        Order::Finite(k)
    }

    /// Synthetic division by `(x − y)` in the variable `x`; `None` if the remainder is nonzero.
    pub fn divide_by_difference(&self, x: VarId, y: VarId) -> Option<MLaurent> {
        if self.is_zero() {
            return Some(MLaurent::zero());
        }
        // Group by exponent of x: self = Σ_e c_e x^e.
        let mut by_exp: BTreeMap<i32, Vec<(Mono, QRat)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(x);
            by_exp.entry(e).or_default().push((m.div(&Mono::pow(x, e)), c.clone()));
        }
        let lo = *by_exp.keys().next().unwrap();
        let hi = *by_exp.keys().next_back().unwrap();
        let ymono = Mono::var(y);
        let mut quotient: Vec<(Mono, QRat)> = Vec::new();
        // t_{e-1} = c_e + y t_e, starting from t_{hi-1} = c_hi.
        let mut t: HashMap<Mono, QRat> = HashMap::new();
        for e in (lo..=hi).rev() {
            let mut next: HashMap<Mono, QRat> = HashMap::with_capacity(t.len());
            for (m, c) in t.drain() {
                accumulate(&mut next, m.mul(&ymono), c);
            }
            if let Some(terms) = by_exp.get(&e) {
                for (m, c) in terms {
                    accumulate(&mut next, m.clone(), c.clone());
                }
            }
            next.retain(|_, c| !c.is_zero());
            if e == lo {
                return if next.is_empty() {
                    Some(MLaurent::from_terms(quotient))
                } else {
                    None
                };
            }
            let xm = Mono::pow(x, e - 1);
            quotient.extend(next.iter().map(|(m, c)| (m.mul(&xm), c.clone())));
            t = next;
        }
        unreachable!()
    }
}

fn accumulate(acc: &mut HashMap<Mono, QRat>, m: Mono, c: QRat) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::hash_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            *o.get_mut() = s;
        }
        std::collections::hash_map::Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

impl Add for &MLaurent {
    type Output = MLaurent;
    fn add(self, other: &MLaurent) -> MLaurent {
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            match terms.get_mut(m) {
                Some(slot) => {
                    *slot = &*slot + c;
                    if slot.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        MLaurent { terms }
    }
}

impl Neg for &MLaurent {
    type Output = MLaurent;
    fn neg(self) -> MLaurent {
        MLaurent {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &MLaurent {
    type Output = MLaurent;
    fn sub(self, other: &MLaurent) -> MLaurent {
        self + &(-other)
    }
}

impl Mul for &MLaurent {
    type Output = MLaurent;
    fn mul(self, other: &MLaurent) -> MLaurent {
        if self.is_zero() || other.is_zero() {
            return MLaurent::zero();
        }
        if other.len() == 1 {
            let (m, c) = other.lead().unwrap();
            return self.mul_term(m, c);
        }
        if self.len() == 1 {
            let (m, c) = self.lead().unwrap();
            return other.mul_term(m, c);
        }
        let mut acc: HashMap<Mono, QRat> = HashMap::with_capacity((self.len() * other.len()).min(1 << 14));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                accumulate(&mut acc, m1.mul(m2), c1 * c2);
            }
        }
        MLaurent::from_map(acc)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for MLaurent {
            type Output = MLaurent;
            fn $m(self, other: MLaurent) -> MLaurent {
                (&self).$m(&other)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl fmt::Display for MLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (pos, (m, c)) in self.terms.iter().rev().enumerate() {
            if pos > 0 {
                write!(f, " + ")?;
            }
            let cs = c.to_string();
            let cs = if cs.contains([' ', '/']) && !m.is_one() {
                format!("({cs})")
            } else {
                cs
            };
            match (m.is_one(), c.is_one()) {
                (true, _) => write!(f, "{cs}")?,
                (false, true) => write!(f, "{m}")?,
                (false, false) => write!(f, "{cs}*{m}")?,
            }
        }
        Ok(())
    }
}

/// Sorts exponents of the alternated colors into strictly decreasing order.
/// Returns `None` when two slots of one color share an exponent (the alternant vanishes),
/// otherwise the sorted monomial and the permutation sign.
fn alternant_canonical(m: &Mono, dims: &[usize]) -> Option<(Mono, bool)> {
    let mut pairs: MonoVec = SmallVec::new();
    let mut odd = false;
    for (color, &n) in dims.iter().enumerate() {
        if n < 2 {
            continue;
        }
        let color = color as u32;
        let mut exps: SmallVec<[i32; 8]> = SmallVec::from_elem(0, n);
        for &(v, e) in m.0.iter().filter(|p| p.0.color == color) {
            exps[v.slot as usize - 1] = e;
        }
        for a in 0..n {
            for b in a + 1..n {
                match exps[a].cmp(&exps[b]) {
                    Ordering::Less => odd = !odd,
                    Ordering::Equal => return None,
                    Ordering::Greater => {}
                }
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        pairs.extend(
            exps.iter()
                .enumerate()
                .filter(|p| *p.1 != 0)
                .map(|(a, &e)| (VarId::new(color, a as u32 + 1), e)),
        );
    }
    let alternated = |v: &VarId| dims.get(v.color as usize).is_some_and(|&n| n >= 2);
    pairs.extend(m.0.iter().copied().filter(|p| !alternated(&p.0)));
    Some((Mono::from_pairs(pairs), odd))
}

/// Coefficients of `Alt(p)` on the alternant basis `a_λ` (λ strictly decreasing per color).
/// `Alt(p)` is zero exactly when the returned map is empty.
pub fn alternant_coefficients(p: &MLaurent, dims: &[usize]) -> BTreeMap<Mono, QRat> {
    let mut acc: HashMap<Mono, QRat> = HashMap::new();
    for (m, c) in p.terms() {
        if let Some((canon, odd)) = alternant_canonical(m, dims) {
            accumulate(&mut acc, canon, if odd { -c } else { c.clone() });
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `Alt(p) / V` where `V = ∏_c ∏_{a<b} (z_{c,a} − z_{c,b})`; always a Laurent polynomial.
pub fn alternant_quotient(p: &MLaurent, dims: &[usize]) -> MLaurent {
    let coeffs = alternant_coefficients(p, dims);
    let mut acc: HashMap<Mono, QRat> = HashMap::new();
    for (m, c) in coeffs {
        let mut poly = MLaurent::monomial(
            Mono::from_pairs(m.iter().filter(|(v, _)| dims.get(v.color as usize).is_none_or(|&n| n < 2))),
            c,
        );
        for (color, &n) in dims.iter().enumerate() {
            if n < 2 {
                continue;
            }
            let exps: Vec<i32> = (1..=n as u32).map(|a| m.exp(VarId::new(color as u32, a))).collect();
            poly = &poly * &schur_from_alternant(color as u32, &exps);
        }
        for (mm, cc) in poly.into_terms() {
            accumulate(&mut acc, mm, cc);
        }
    }
    MLaurent::from_map(acc)
}

/// The Vandermonde product `∏_{a<b} (z_{c,a} − z_{c,b})` over every color with `n_c ≥ 2`.
pub fn vandermonde(dims: &[usize]) -> MLaurent {
    let mut v = MLaurent::one();
    for (color, &n) in dims.iter().enumerate() {
        for a in 1..=n as u32 {
            for b in a + 1..=n as u32 {
                v = &v * &MLaurent::binomial(VarId::new(color as u32, a), QRat::one(), VarId::new(color as u32, b));
            }
        }
    }
    v
}

type SchurTable = HashMap<Vec<i32>, Arc<Vec<(Vec<i32>, QRat)>>>;

fn schur_cache() -> &'static RwLock<SchurTable> {
    static CACHE: OnceLock<RwLock<SchurTable>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `a_{exps} / a_δ` in the slots of `color`, for strictly decreasing `exps`.
fn schur_from_alternant(color: u32, exps: &[i32]) -> MLaurent {
    let shift = *exps.last().unwrap();
    let key: Vec<i32> = exps.iter().map(|e| e - shift).collect();
    let cached = schur_cache().read().unwrap().get(&key).cloned();
    let table = match cached {
        Some(t) => t,
        None => {
            let table = Arc::new(compute_schur(&key));
            schur_cache().write().unwrap().insert(key, table.clone());
            table
        }
    };
    MLaurent::from_terms(table.iter().map(|(es, c)| {
        (
            Mono::from_pairs(es.iter().enumerate().map(|(a, &e)| (VarId::new(color, a as u32 + 1), e + shift))),
            c.clone(),
        )
    }))
}

fn compute_schur(key: &[i32]) -> Vec<(Vec<i32>, QRat)> {
    let n = key.len();
    let vars: Vec<VarId> = (1..=n as u32).map(|a| VarId::new(0, a)).collect();
    let mut num = MLaurent::zero();
    for perm in (0..n).permutations(n) {
        let odd = perm
            .iter()
            .enumerate()
            .flat_map(|(a, &pa)| perm[a + 1..].iter().map(move |&pb| pa > pb))
            .filter(|&x| x)
            .count()
            % 2
            == 1;
        let m = Mono::from_pairs(perm.iter().enumerate().map(|(a, &pa)| (vars[a], key[pa])));
        let c = if odd { -QRat::one() } else { QRat::one() };
        num = &num + &MLaurent::monomial(m, c);
    }
    let quotient = num
        .exact_div(&vandermonde(&[n]))
        .expect("alternants are divisible by the Vandermonde");
    quotient
        .into_terms()
        .map(|(m, c)| ((1..=n as u32).map(|a| m.exp(VarId::new(0, a))).collect(), c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: u32, a: u32) -> MLaurent {
        MLaurent::var(VarId::new(c, a))
    }

    fn q(e: i32) -> QRat {
        QRat::q_pow(e)
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&z(0, 1) - &z(1, 1)) * &(&z(0, 1) + &z(1, 1));
        assert_eq!(p, &z(0, 1).pow(2) - &z(1, 1).pow(2));
        assert_eq!(&p + &MLaurent::zero(), p);
    }

    #[test]
    fn q_binomial_product() {
        let a = MLaurent::binomial(VarId::new(0, 1), q(1), VarId::new(1, 1));
        let b = MLaurent::binomial(VarId::new(0, 1), q(-1), VarId::new(1, 1));
        let mid = MLaurent::monomial(Mono::from_pairs([(VarId::new(0, 1), 1), (VarId::new(1, 1), 1)]), -(&q(1) + &q(-1)));
        assert_eq!(&a * &b, &(&z(0, 1).pow(2) + &z(1, 1).pow(2)) + &mid);
    }

    #[test]
    fn symmetrize_examples() {
        assert_eq!(z(0, 1).symmetrize(&[2]).unwrap(), &z(0, 1) + &z(0, 2));
        let sym = &z(0, 1) + &z(0, 2);
        assert_eq!(sym.symmetrize(&[2]).unwrap(), sym.scale(&QRat::from_int(2)));
        let ratio = MLaurent::monomial(Mono::from_pairs([(VarId::new(0, 1), 1), (VarId::new(0, 2), -1)]), QRat::one());
        assert_eq!(
            ratio.symmetrize(&[2]).unwrap(),
            &ratio + &ratio.rename(|v| VarId::new(0, 3 - v.slot))
        );
        assert!(z(0, 3).symmetrize(&[2]).is_err());
    }

    #[test]
    fn exact_division_examples() {
        let p = &z(0, 1).pow(2) - &z(1, 1).pow(2);
        let d = &z(0, 1) - &z(1, 1);
        assert_eq!(p.exact_div(&d).unwrap(), &z(0, 1) + &z(1, 1));
        assert_eq!(p.exact_div(&MLaurent::one()).unwrap(), p);
        let c = &QRat::one() + &q(-2);
        let v = &z(0, 1) - &z(0, 2);
        assert_eq!(v.scale(&c).exact_div(&v).unwrap(), MLaurent::constant(c));
        let err = z(0, 1).exact_div(&d).unwrap_err();
        assert!(matches!(err, AlgebraError::NotDivisible { .. }));
        assert_eq!(p.exact_div(&MLaurent::zero()), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn laurent_division() {
        let d = MLaurent::binomial(VarId::new(0, 1), q(2), VarId::new(0, 2));
        let t = MLaurent::from_terms([
            (Mono::from_pairs([(VarId::new(0, 1), -2), (VarId::new(0, 2), 1)]), q(3)),
            (Mono::from_pairs([(VarId::new(1, 1), -1)]), QRat::from_int(5)),
        ]);
        assert_eq!((&t * &d).exact_div(&d).unwrap(), t);
    }

    #[test]
    fn specialization_examples() {
        let subst = |m: Mono, e: i32| Subst { mono: m, qpow: e };
        let mut asg = HashMap::new();
        asg.insert(VarId::new(0, 1), subst(Mono::var(VarId::X), 0));
        asg.insert(VarId::new(1, 1), subst(Mono::var(VarId::Y), 0));
        let p = &z(0, 1) - &z(1, 1);
        assert_eq!(p.specialize(&asg).unwrap(), &MLaurent::var(VarId::X) - &MLaurent::var(VarId::Y));
        let s = 3;
        let mut asg = HashMap::new();
        asg.insert(VarId::new(0, 1), subst(Mono::var(VarId::X), s));
        asg.insert(VarId::new(0, 2), subst(Mono::var(VarId::X), s + 2));
        let p = &z(0, 1) * &z(0, 2);
        assert_eq!(
            p.specialize(&asg).unwrap(),
            MLaurent::monomial(Mono::pow(VarId::X, 2), q(2 * s + 2))
        );
        assert!(z(1, 1).specialize(&asg).is_err());
        assert_eq!(
            MLaurent::constant(q(4)).specialize(&HashMap::new()).unwrap(),
            MLaurent::constant(q(4))
        );
    }

    #[test]
    fn divisibility_examples() {
        let x = MLaurent::var(VarId::X);
        let xy = &x - &MLaurent::var(VarId::Y);
        assert_eq!((&xy.pow(2) * &x).divisibility_order(), Order::Finite(2));
        assert_eq!(x.divisibility_order(), Order::Finite(0));
        assert_eq!(MLaurent::zero().divisibility_order(), Order::Infinite);
        let laurent = &xy.pow(3) * &MLaurent::monomial(Mono::from_pairs([(VarId::X, -4), (VarId::Y, 2)]), q(1));
        assert_eq!(laurent.divisibility_order(), Order::Finite(3));
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(
            (&z(0, 1) + &MLaurent::constant(QRat::from_int(3))).coefficient(&Mono::one()),
            QRat::from_int(3)
        );
        assert_eq!(z(0, 1).coefficient(&Mono::var(VarId::new(0, 1))), QRat::one());
        let sq = MLaurent::binomial(VarId::new(0, 1), q(1), VarId::new(1, 1)).pow(2);
        let m = Mono::from_pairs([(VarId::new(0, 1), 1), (VarId::new(1, 1), 1)]);
        assert_eq!(sq.coefficient(&m), QRat::monomial(Rat::from_int(-2), 1));
    }

    #[test]
    fn graded_lex_order() {
        let a = Mono::from_pairs([(VarId::new(0, 1), 2)]);
        let b = Mono::from_pairs([(VarId::new(0, 1), 1), (VarId::new(0, 2), 1)]);
        let c = Mono::from_pairs([(VarId::new(0, 2), 2)]);
        assert!(a > b && b > c);
        assert!(Mono::var(VarId::new(0, 1)) < a);
    }

    #[test]
    fn alternant_quotient_matches_symmetrization() {
        // Sym[p / V] = Alt(p) / V for p = z1^2 z2 + 3 z3.
        let p = &(&z(0, 1).pow(2) * &z(0, 2)) + &z(0, 3).scale(&QRat::from_int(3));
        let v = vandermonde(&[3]);
        let alt_p = {
            let mut acc = MLaurent::zero();
            for perm in (1..=3u32).permutations(3) {
                let odd = (0..3)
                    .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
                    .filter(|&(a, b)| perm[a] > perm[b])
                    .count()
                    % 2
                    == 1;
                let moved = p.rename(|w| VarId::new(0, perm[w.slot as usize - 1]));
                acc = if odd { &acc - &moved } else { &acc + &moved };
            }
            acc
        };
        assert_eq!(alternant_quotient(&p, &[3]), alt_p.exact_div(&v).unwrap());
        assert_eq!(alternant_quotient(&v, &[3]), MLaurent::constant(QRat::from_int(6)));
    }

    #[test]
    fn alternant_with_negative_exponents() {
        let p = MLaurent::monomial(Mono::from_pairs([(VarId::new(0, 1), -1), (VarId::new(0, 2), -3)]), QRat::one());
        // a_{(-1,-3)} / a_{(1,0)} = (z1 z2)^{-3} (z1^2 - z2^2)/(z1 - z2) = (z1 z2)^{-3}(z1 + z2).
        let got = alternant_quotient(&p, &[2]);
        let want =
            &MLaurent::monomial(Mono::from_pairs([(VarId::new(0, 1), -3), (VarId::new(0, 2), -3)]), QRat::one()) * &(&z(0, 1) + &z(0, 2));
        assert_eq!(got, want);
    }
}
