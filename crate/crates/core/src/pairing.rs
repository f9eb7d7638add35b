//! The pairing between words and shuffle elements by constant-term
//! extraction, the induced pairing of the two free algebras, and leading
//! words with their associated polynomials.

use std::collections::HashMap;

use crate::cartan::CartanMatrix;
use crate::error::{AlgebraError, Result};
use crate::freealg::{non_increasing, FreeElem, Letter, Word};
use crate::multipoly::{MLaurent, Mono, VarId};
use crate::scalars::QRat;
use crate::shuffle::{upsilon, word_dims, word_variables, ShufElem, Sign};

/// `1 / (1 − ratio · z_small / z_big)`, expanded in powers of `z_small / z_big`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeomFactor {
    /// Position of the larger variable in [`CTProblem::order`].
    pub big: usize,
    /// Position of the smaller variable; always after `big`.
    pub small: usize,
    pub ratio: QRat,
}

/// `numerator · ∏ factors`, to be expanded for `|order[0]| ≫ |order[1]| ≫ …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CTProblem {
    pub order: Vec<VarId>,
    pub numerator: MLaurent,
    pub factors: Vec<GeomFactor>,
}

impl CTProblem {
    pub fn new(order: Vec<VarId>, numerator: MLaurent, factors: Vec<GeomFactor>) -> Result<CTProblem> {
        for f in &factors {
            if f.big >= f.small || f.small >= order.len() {
                return Err(AlgebraError::InvalidArgument(format!(
                    "factor ({}, {}) does not follow the expansion order",
                    f.big, f.small
                )));
            }
        }
        Ok(CTProblem { order, numerator, factors })
    }

    fn exponents(&self, m: &Mono) -> Option<Vec<i64>> {
        let pos: HashMap<VarId, usize> = self.order.iter().enumerate().map(|(p, v)| (*v, p)).collect();
        let mut p = vec![0i64; self.order.len()];
        for (v, e) in m.iter() {
            match pos.get(&v) {
                Some(&a) => p[a] = e as i64,
                // Variables outside the expansion never cancel.
                None if e != 0 => return None,
                None => {}
            }
        }
        Some(p)
    }

    /// A truncation order that every contributing expansion term respects.
    pub fn truncation_bound(&self) -> usize {
        let mut best = 0i64;
        for (m, _) in self.numerator.terms() {
            let Some(p) = self.exponents(m) else { continue };
            let mut prefix = 0i64;
            for e in p {
                let b = (e + prefix).max(0);
                best = best.max(b);
                prefix += b;
            }
        }
        best as usize
    }
}

fn compositions(total: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    fn go(rest: usize, parts: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() + 1 == parts {
            cur.push(rest);
            f(cur);
            cur.pop();
            return;
        }
        for a in 0..=rest {
            cur.push(a);
            go(rest - a, parts, cur, f);
            cur.pop();
        }
    }
    go(total, parts, &mut Vec::with_capacity(parts), f);
}

/// Exact constant term by eliminating the variables one at a time, outermost first:
/// the total power drawn from the series leaving a variable is forced by its exponent.
pub fn constant_term(problem: &CTProblem) -> QRat {
    let n = problem.order.len();
    let outgoing: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..problem.factors.len()).filter(|&f| problem.factors[f].big == v).collect())
        .collect();
    let mut powers: HashMap<(usize, usize), QRat> = HashMap::new();
    let mut power = |f: usize, e: usize| -> QRat {
        powers
            .entry((f, e))
            .or_insert_with(|| problem.factors[f].ratio.pow(e as i32).expect("nonzero ratio"))
            .clone()
    };
    let mut total = QRat::zero();
    for (m, c) in problem.numerator.terms() {
        let Some(p) = problem.exponents(m) else { continue };
        let mut states: HashMap<Vec<i64>, QRat> = HashMap::from([(vec![0; n], c.clone())]);
        for v in 0..n {
            let mut next: HashMap<Vec<i64>, QRat> = HashMap::new();
            for (incoming, weight) in states {
                let t = p[v] + incoming[v];
                if outgoing[v].is_empty() {
                    if t == 0 {
                        let e = next.entry(incoming).or_insert_with(QRat::zero);
                        *e = &*e + &weight;
                    }
                    continue;
                }
                if t < 0 {
                    continue;
                }
                compositions(t as usize, outgoing[v].len(), &mut |parts| {
                    let mut w = weight.clone();
                    let mut inc = incoming.clone();
                    for (&f, &k) in outgoing[v].iter().zip(parts) {
                        if k > 0 {
                            w = &w * &power(f, k);
                            inc[problem.factors[f].small] += k as i64;
                        }
                    }
                    let e = next.entry(inc).or_insert_with(QRat::zero);
                    *e = &*e + &w;
                });
            }
            states = next;
        }
        for (_, w) in states {
            total = &total + &w;
        }
    }
    total
}

/// Constant term after truncating every series at `order` terms beyond the first.
pub fn constant_term_truncated(problem: &CTProblem, order: usize) -> QRat {
    let mut product = problem.numerator.clone();
    for f in &problem.factors {
        let (big, small) = (problem.order[f.big], problem.order[f.small]);
        let mut series = MLaurent::zero();
        let mut coef = QRat::one();
        for k in 0..=order as i32 {
            series = &series + &MLaurent::monomial(Mono::from_pairs([(small, k), (big, -k)]), coef.clone());
            coef = &coef * &f.ratio;
        }
        product = &product * &series;
    }
    product.coefficient(&Mono::one())
}

/// Which side of the pairing a word sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Regime {
    /// `|z_1| ≫ … ≫ |z_n|`, kernel `ζ_{i_b i_a}(z_b / z_a)`.
    Descending,
    /// `|z_1| ≪ … ≪ |z_n|`, kernel `ζ_{i_a i_b}(z_a / z_b)`.
    Ascending,
}

/// The constant-term problem for one word against a shuffle element of matching degree.
fn word_problem(c: &CartanMatrix, w: &Word, r: &ShufElem, regime: Regime) -> Result<CTProblem> {
    let vars = word_variables(w);
    let n = vars.len();
    let mut numerator = &MLaurent::monomial(Mono::from_pairs(vars.iter().zip(&w.0).map(|(v, l)| (*v, l.exp))), QRat::one()) * &r.numerator;
    let position = |a: usize| match regime {
        Regime::Descending => a,
        Regime::Ascending => n - 1 - a,
    };
    let mut factors = Vec::new();
    let mut prefactor = Mono::one();
    let mut constant = QRat::one();
    for a in 0..n {
        for b in a + 1..n {
            // ζ(u / v) with v the larger variable.
            let (u, v) = match regime {
                Regime::Descending => (b, a),
                Regime::Ascending => (a, b),
            };
            let (cu, cv) = (w.0[u].color, w.0[v].color);
            let d = c.dij(cu, cv);
            let e = if c.is_broken() { d } else { -d };
            if cu == cv {
                numerator = &numerator * &MLaurent::binomial(vars[u], QRat::one(), vars[v]);
            } else if cu > cv {
                // (z_u − z_v) against the element denominator (z_v − z_u).
                constant = -&constant;
            }
            constant = &constant * &QRat::q_pow(-e);
            constant = -&constant;
            prefactor = prefactor.mul(&Mono::pow(vars[v], -1));
            factors.push(GeomFactor {
                big: position(v),
                small: position(u),
                ratio: QRat::q_pow(-e),
            });
        }
    }
    let order = match regime {
        Regime::Descending => vars,
        Regime::Ascending => vars.into_iter().rev().collect(),
    };
    CTProblem::new(order, numerator.mul_term(&prefactor, &constant), factors)
}

fn pair_words(c: &CartanMatrix, x: &FreeElem, r: &ShufElem, regime: Regime) -> Result<QRat> {
    let mut total = QRat::zero();
    for (w, coef) in x.terms() {
        if w.0.iter().any(|l| l.color >= c.rank()) {
            return Err(AlgebraError::UnknownVertex(format!("{w}")));
        }
        if word_dims(c.rank(), w) != r.n || r.is_zero() {
            continue;
        }
        let value = constant_term(&word_problem(c, w, r, regime)?);
        total = &total + &(coef * &value);
    }
    Ok(total)
}

/// `⟨x, R⟩` for `x` a combination of `e`-words and `R ∈ V^-`.
pub fn pair_uv(c: &CartanMatrix, x: &FreeElem, r: &ShufElem) -> Result<QRat> {
    if r.sign != Sign::Minus {
        return Err(AlgebraError::InvalidArgument("the right argument must lie in V-".into()));
    }
    pair_words(c, x, r, Regime::Descending)
}

/// `⟨R, y⟩` for `R ∈ V^+` and `y` a combination of `f`-words; the letter `i^(k)` of `y` is `f_{i,k}`.
pub fn pair_vu(c: &CartanMatrix, r: &ShufElem, y: &FreeElem) -> Result<QRat> {
    if r.sign != Sign::Plus {
        return Err(AlgebraError::InvalidArgument("the left argument must lie in V+".into()));
    }
    pair_words(c, y, r, Regime::Ascending)
}

/// `⟨x, y⟩ = (q^{-1} − q)^{-|n|} ⟨x, Υ̃⁻(y)⟩`, summed over the homogeneous parts of `y`.
pub fn pair_uu(c: &CartanMatrix, x: &FreeElem, y: &FreeElem) -> Result<QRat> {
    let mut total = QRat::zero();
    for (dims, part) in y.split_by_dims(c.rank()) {
        let image = upsilon(c, &part, Sign::Minus)?;
        let size: usize = dims.iter().sum();
        let scale = (&QRat::q_pow(-1) - &QRat::q_pow(1)).pow(-(size as i32))?;
        total = &total + &(&scale * &pair_uv(c, x, &image)?);
    }
    Ok(total)
}

/// `k_a = l_a − #{s < a : i_s > i_a} + #{t > a : i_t < i_a}` for a chosen ordering.
fn word_from_sequence(seq: &[(usize, i32)]) -> Word {
    Word(
        seq.iter()
            .enumerate()
            .map(|(a, &(ia, la))| {
                let before = seq[..a].iter().filter(|(is, _)| *is > ia).count() as i32;
                let after = seq[a + 1..].iter().filter(|(it, _)| *it < ia).count() as i32;
                Letter::new(ia, la - before + after)
            })
            .collect(),
    )
}

/// Leading word of `∏ z^{-l}` given as `(color, l)` pairs: the letters are chosen greedily,
/// since the best first letter only depends on the multiset still to be placed.
pub fn monomial_leading_word(vars: &[(usize, i32)]) -> Word {
    let mut rest: Vec<(usize, i32)> = vars.to_vec();
    let mut placed: Vec<(usize, i32)> = Vec::with_capacity(vars.len());
    let mut word = Vec::with_capacity(vars.len());
    while !rest.is_empty() {
        let (best, letter) = (0..rest.len())
            .map(|x| {
                let (ix, lx) = rest[x];
                let before = placed.iter().filter(|(is, _)| *is > ix).count() as i32;
                let after = rest.iter().enumerate().filter(|(t, (it, _))| *t != x && *it < ix).count() as i32;
                (x, Letter::new(ix, lx - before + after))
            })
            .max_by(|a, b| a.1.cmp(&b.1))
            .expect("nonempty");
        placed.push(rest.remove(best));
        word.push(letter);
    }
    Word(word)
}

/// Leading word over every ordering, by brute force; used to cross-check the greedy choice.
pub fn monomial_leading_word_exhaustive(vars: &[(usize, i32)]) -> Word {
    use itertools::Itertools;
    (0..vars.len())
        .permutations(vars.len())
        .map(|perm| word_from_sequence(&perm.iter().map(|&p| vars[p]).collect::<Vec<_>>()))
        .max()
        .unwrap_or_default()
}

/// `R · ∏_{i<j} ∏_{a,b} (1 − z_{jb}/z_{ia})` as a Laurent polynomial.
pub fn cleared_for_lead(r: &ShufElem) -> MLaurent {
    let mut m = Mono::one();
    for i in 0..r.n.len() {
        let later: usize = r.n[i + 1..].iter().sum();
        for a in 1..=r.n[i] as u32 {
            m = m.mul(&Mono::pow(VarId::new(i as u32, a), -(later as i32)));
        }
    }
    r.numerator.mul_term(&m, &QRat::one())
}

/// The largest leading word over the monomials of the cleared numerator.
pub fn leading_word(r: &ShufElem) -> Result<Word> {
    if r.is_zero() {
        return Err(AlgebraError::InvalidArgument("the zero element has no leading word".into()));
    }
    let cleared = cleared_for_lead(r);
    let mut best: Option<Word> = None;
    for (m, _) in cleared.terms() {
        let vars: Vec<(usize, i32)> =
            r.n.iter()
                .enumerate()
                .flat_map(|(i, &ni)| (1..=ni as u32).map(move |a| (i, a)))
                .map(|(i, a)| (i, -m.exp(VarId::new(i as u32, a))))
                .collect();
        let w = monomial_leading_word(&vars);
        if best.as_ref().is_none_or(|b| w > *b) {
            best = Some(w);
        }
    }
    Ok(best.expect("nonzero element has a monomial"))
}

/// `Sym μ / ∏_{i<j}(1 − z_{jb}/z_{ia})` in `V^-`, with `μ` read off the word.
pub fn associated_polynomial(rank: usize, w: &Word) -> Result<ShufElem> {
    if !non_increasing(w) {
        return Err(AlgebraError::InvalidArgument(format!("{w} is not non-increasing")));
    }
    if let Some(l) = w.0.iter().find(|l| l.color >= rank) {
        return Err(AlgebraError::UnknownVertex(l.color.to_string()));
    }
    let seq = &w.0;
    let vars = word_variables(w);
    let mono = Mono::from_pairs(seq.iter().enumerate().map(|(a, la)| {
        let before = seq[..a].iter().filter(|s| s.color > la.color).count() as i32;
        let after = seq[a + 1..].iter().filter(|t| t.color < la.color).count() as i32;
        (vars[a], -(la.exp + before - after))
    }));
    let n = word_dims(rank, w);
    let sym = MLaurent::monomial(mono, QRat::one()).symmetrize(&n)?;
    let r = ShufElem::new(Sign::Minus, n, sym);
    // Undo the clearing factor of `cleared_for_lead`.
    let inverse = cleared_for_lead(&ShufElem::new(Sign::Minus, r.n.clone(), MLaurent::one())).invert_variables();
    let (m, _) = inverse.lead().expect("monomial");
    Ok(ShufElem::new(Sign::Minus, r.n.clone(), r.numerator.mul_term(m, &QRat::one())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shuffle::{shuffle_mul, ShufElem};

    fn w(letters: &[(usize, i32)]) -> Word {
        Word::new(letters.iter().copied())
    }

    fn z(i: u32, a: u32, e: i32) -> MLaurent {
        MLaurent::monomial(Mono::pow(VarId::new(i, a), e), QRat::one())
    }

    #[test]
    fn ct_examples() {
        let t = VarId::new(0, 2);
        let s = VarId::new(0, 1);
        // (t − 1)/(t − q^{-2}) with t = z2/z1: numerator (z2 − z1)·(−q^2/z1), factor ratio q^2.
        let num = (&MLaurent::var(t) - &MLaurent::var(s)).mul_term(&Mono::pow(s, -1), &-&QRat::q_pow(2));
        let p = CTProblem::new(
            vec![s, t],
            num,
            vec![GeomFactor {
                big: 0,
                small: 1,
                ratio: QRat::q_pow(2),
            }],
        )
        .unwrap();
        assert_eq!(constant_term(&p), QRat::q_pow(2));
        let bound = p.truncation_bound();
        assert_eq!(constant_term_truncated(&p, bound), QRat::q_pow(2));
        assert_eq!(constant_term_truncated(&p, bound + 3), QRat::q_pow(2));
        let plain = CTProblem::new(vec![s], &z(0, 1, 2) + &MLaurent::constant(QRat::from_int(7)), vec![]).unwrap();
        assert_eq!(constant_term(&plain), QRat::from_int(7));
    }

    #[test]
    fn base_pairings() {
        let c = CartanMatrix::a2();
        let r = ShufElem::new(Sign::Minus, vec![1, 0], z(0, 1, -3));
        assert_eq!(pair_uv(&c, &FreeElem::word(w(&[(0, 3)])), &r).unwrap(), QRat::one());
        assert!(pair_uv(&c, &FreeElem::word(w(&[(0, 2)])), &r).unwrap().is_zero());
        let one = ShufElem::new(Sign::Minus, vec![2, 0], MLaurent::one());
        assert_eq!(pair_uv(&c, &FreeElem::word(w(&[(0, 0), (0, 0)])), &one).unwrap(), QRat::q_pow(2));
        let inv = (&QRat::q_pow(-1) - &QRat::q_pow(1)).recip().unwrap();
        assert_eq!(
            pair_uu(&c, &FreeElem::word(w(&[(0, 4)])), &FreeElem::word(w(&[(0, -4)]))).unwrap(),
            inv
        );
        assert!(pair_uu(&c, &FreeElem::word(w(&[(0, 4)])), &FreeElem::word(w(&[(1, -4)])))
            .unwrap()
            .is_zero());
        let rp = ShufElem::new(Sign::Plus, vec![0, 1], z(1, 1, 2));
        assert_eq!(pair_vu(&c, &rp, &FreeElem::word(w(&[(1, -2)]))).unwrap(), QRat::one());
    }

    #[test]
    fn two_letter_pairings_mirror_under_inversion() {
        let c = CartanMatrix::a2();
        let rp = shuffle_mul(
            &c,
            &ShufElem::generator(Sign::Plus, 2, 0, 1),
            &ShufElem::generator(Sign::Plus, 2, 1, -1),
        )
        .unwrap();
        let rm = rp.invert_variables();
        for word in [w(&[(0, 1), (1, -1)]), w(&[(1, 0), (0, 0)]), w(&[(0, 2), (1, -2)])] {
            let inverted = Word(word.0.iter().map(|l| Letter::new(l.color, -l.exp)).collect());
            let a = pair_vu(&c, &rp, &FreeElem::word(inverted)).unwrap();
            let b = pair_uv(&c, &FreeElem::word(word), &rm).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn leading_word_examples() {
        assert_eq!(
            leading_word(&ShufElem::new(Sign::Minus, vec![1, 0], z(0, 1, -3))).unwrap(),
            w(&[(0, 3)])
        );
        assert_eq!(monomial_leading_word(&[(0, 1), (1, 1)]), w(&[(0, 1), (1, 1)]));
        assert_eq!(monomial_leading_word_exhaustive(&[(0, 1), (1, 1)]), w(&[(0, 1), (1, 1)]));
        let vars = [(1, 2), (0, -1), (2, 0), (0, 3), (1, 1)];
        assert_eq!(monomial_leading_word(&vars), monomial_leading_word_exhaustive(&vars));
    }

    #[test]
    fn associated_polynomial_round_trip() {
        for word in [
            w(&[(0, 3)]),
            w(&[(0, 1), (1, 1)]),
            w(&[(1, 0), (0, 0)]),
            w(&[(0, 0), (0, 1), (1, 1)]),
        ] {
            assert!(non_increasing(&word));
            let r = associated_polynomial(2, &word).unwrap();
            assert_eq!(leading_word(&r).unwrap(), word);
        }
        assert!(associated_polynomial(2, &w(&[(0, 1), (0, 0)])).is_err());
    }

    #[test]
    fn leading_word_pairing_law() {
        let c = CartanMatrix::a2();
        let r = associated_polynomial(2, &w(&[(0, 0), (1, 1)])).unwrap();
        let lead = leading_word(&r).unwrap();
        assert!(!pair_uv(&c, &FreeElem::word(lead), &r).unwrap().is_zero());
        assert!(pair_uv(&c, &FreeElem::word(w(&[(1, 0), (0, 1)])), &r).unwrap().is_zero());
    }
}
