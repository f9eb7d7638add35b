//! Words in the generators `e_{i,k}`, the free algebra modulo the quadratic
//! relation, straightening to non-increasing words, and the relation
//! generators: loop Serre coefficients and zig-zag relations `ρ_Z`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use itertools::Itertools;

use crate::cartan::CartanMatrix;
use crate::error::{AlgebraError, Result};
use crate::multipoly::{alternant_coefficients, MLaurent, Mono, VarId};
use crate::scalars::{qbinomial, QRat, Rat};
use crate::shuffle::{kernel_factor, Kernel};
use crate::zigzag::{alternative_order, topological_order, DistZigZag, Edge, RefinedSelection, Row, Vertex};

/// The letter `i^{(k)}`, standing for `e_{i,k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub color: usize,
    pub exp: i32,
}

impl Letter {
    pub fn new(color: usize, exp: i32) -> Letter {
        Letter { color, exp }
    }
}

/// `i^{(k)} < j^{(l)}` iff `k > l`, or `k = l` and `i < j`.
impl Ord for Letter {
    fn cmp(&self, other: &Letter) -> Ordering {
        other.exp.cmp(&self.exp).then(self.color.cmp(&other.color))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Letter) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^({})", self.color, self.exp)
    }
}

/// A word; the derived order is lexicographic in the letter order, with a proper prefix smaller.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: impl IntoIterator<Item = (usize, i32)>) -> Word {
        Word(letters.into_iter().map(|(c, k)| Letter::new(c, k)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree `(Σ ε^{i_a}, Σ k_a)`.
    pub fn degree(&self, rank: usize) -> (Vec<usize>, i64) {
        let mut n = vec![0; rank];
        for l in &self.0 {
            n[l.color] += 1;
        }
        (n, self.0.iter().map(|l| l.exp as i64).sum())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Parses `"i:k,i:k,..."`, where `i` is a vertex label of `c`.
    pub fn parse(c: &CartanMatrix, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::default());
        }
        text.split(',')
            .map(|part| {
                let (label, exp) = part
                    .split_once(':')
                    .ok_or_else(|| AlgebraError::Parse(format!("letter {part:?} is not of the form i:k")))?;
                let color = c.index_of(label.trim())?;
                let exp = exp
                    .trim()
                    .parse::<i32>()
                    .map_err(|e| AlgebraError::Parse(format!("exponent in {part:?}: {e}")))?;
                Ok(Letter::new(color, exp))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// `"i:k,i:k"` with vertex labels.
    pub fn render(&self, c: &CartanMatrix) -> String {
        self.0.iter().map(|l| format!("{}:{}", c.label(l.color), l.exp)).join(",")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().join(" "))
    }
}

/// Total order on words.
pub fn word_compare(v: &Word, w: &Word) -> Ordering {
    v.cmp(w)
}

fn pair_ok(w: &Word, a: usize, b: usize) -> bool {
    let (la, lb) = (w.0[a], w.0[b]);
    let count = w.0[a..b].iter().filter(|l| l.color != lb.color).count() as i32;
    la.exp < lb.exp + count || (la.exp == lb.exp + count && la.color >= lb.color)
}

/// Whether `k_a < k_b + #{a ≤ s < b : i_s ≠ i_b}` (or equality with `i_a ≥ i_b`) for all `a < b`.
pub fn non_increasing(w: &Word) -> bool {
    (0..w.len()).all(|a| (a + 1..w.len()).all(|b| pair_ok(w, a, b)))
}

/// A finite `ℚ(q)`-combination of words, without zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreeElem {
    terms: BTreeMap<Word, QRat>,
}

impl FreeElem {
    pub fn zero() -> FreeElem {
        FreeElem::default()
    }

    pub fn one() -> FreeElem {
        FreeElem::word(Word::default())
    }

    pub fn word(w: Word) -> FreeElem {
        FreeElem::monomial(w, QRat::one())
    }

    pub fn monomial(w: Word, c: QRat) -> FreeElem {
        let mut out = FreeElem::zero();
        out.add_term(w, c);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, QRat)>) -> FreeElem {
        let mut out = FreeElem::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    pub fn add_term(&mut self, w: Word, c: QRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
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

    /// Terms in increasing word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QRat)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> QRat {
        self.terms.get(w).cloned().unwrap_or_else(QRat::zero)
    }

    pub fn scale(&self, c: &QRat) -> FreeElem {
        if c.is_zero() {
            return FreeElem::zero();
        }
        FreeElem {
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &FreeElem, c: &QRat) {
        for (w, x) in other.terms() {
            self.add_term(w.clone(), x * c);
        }
    }

    /// Concatenation product.
    pub fn mul(&self, other: &FreeElem) -> FreeElem {
        let mut out = FreeElem::zero();
        for (v, a) in self.terms() {
            for (w, b) in other.terms() {
                out.add_term(v.concat(w), a * b);
            }
        }
        out
    }

    /// The common degree of all words, if the element is homogeneous and nonzero.
    pub fn degree(&self, rank: usize) -> Option<(Vec<usize>, i64)> {
        let mut it = self.terms.keys().map(|w| w.degree(rank));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Splits into homogeneous components by dimension vector.
    pub fn split_by_dims(&self, rank: usize) -> BTreeMap<Vec<usize>, FreeElem> {
        let mut out: BTreeMap<Vec<usize>, FreeElem> = BTreeMap::new();
        for (w, c) in self.terms() {
            out.entry(w.degree(rank).0).or_default().add_term(w.clone(), c.clone());
        }
        out
    }

    /// Every exponent occurring in any word.
    pub fn exponent_range(&self) -> Option<(i32, i32)> {
        self.terms.keys().flat_map(|w| w.0.iter().map(|l| l.exp)).minmax().into_option()
    }
}

impl std::ops::Add for &FreeElem {
    type Output = FreeElem;
    fn add(self, other: &FreeElem) -> FreeElem {
        let mut out = self.clone();
        out.add_scaled(other, &QRat::one());
        out
    }
}

impl std::ops::Sub for &FreeElem {
    type Output = FreeElem;
    fn sub(self, other: &FreeElem) -> FreeElem {
        let mut out = self.clone();
        out.add_scaled(other, &QRat::from_int(-1));
        out
    }
}

impl fmt::Display for FreeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(w, c)| format!("({c})*{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Coefficient extraction of the quadratic relation with leading word `[i^(a) j^(b)]`:
/// `e_{i,a}e_{j,b} − q^d e_{i,a−1}e_{j,b+1} − q^d e_{j,b}e_{i,a} + e_{j,b+1}e_{i,a−1}`.
pub fn quad_relation(c: &CartanMatrix, i: usize, j: usize, a: i32, b: i32) -> FreeElem {
    let qd = QRat::q_pow(c.dij(i, j));
    FreeElem::from_terms([
        (Word::new([(i, a), (j, b)]), QRat::one()),
        (Word::new([(i, a - 1), (j, b + 1)]), -&qd),
        (Word::new([(j, b), (i, a)]), -&qd),
        (Word::new([(j, b + 1), (i, a - 1)]), QRat::one()),
    ])
}

/// Coefficient of `z^A w^B` in `e_i(z)e_j(w)·lhs(z, w) − e_j(w)e_i(z)·rhs(z, w)`, where
/// `lhs` and `rhs` are polynomials in the formal variables `Z`, `W`.
pub fn relation_coefficient(i: usize, j: usize, lhs: &MLaurent, rhs: &MLaurent, za: i32, wb: i32) -> FreeElem {
    let mut out = FreeElem::zero();
    for (m, c) in lhs.terms() {
        let (ez, ew) = (m.exp(VarId::Z), m.exp(VarId::W));
        out.add_term(Word::new([(i, ez - za), (j, ew - wb)]), c.clone());
    }
    for (m, c) in rhs.terms() {
        let (ez, ew) = (m.exp(VarId::Z), m.exp(VarId::W));
        out.add_term(Word::new([(j, ew - wb), (i, ez - za)]), -c);
    }
    out
}

/// The two sides of the trigonometric quadratic relation, `(z − w q^d, z q^d − w)`.
pub fn quad_intro_sides(c: &CartanMatrix, i: usize, j: usize) -> (MLaurent, MLaurent) {
    let d = c.dij(i, j);
    (
        MLaurent::binomial(VarId::Z, QRat::q_pow(d), VarId::W),
        MLaurent::binomial(VarId::W, QRat::q_pow(d), VarId::Z).scale(&QRat::from_int(-1)),
    )
}

/// The two sides of the modified relation `∏_{c=0}^{−d−1}(z − w q^{2c+d})` and
/// `∏_{c=0}^{−d−1}(z q^{2c+d} − w)`; for `i = j` this is the trigonometric relation.
pub fn quad_modified_sides(c: &CartanMatrix, i: usize, j: usize) -> (MLaurent, MLaurent) {
    if i == j {
        return quad_intro_sides(c, i, j);
    }
    let d = c.dij(i, j);
    let mut lhs = MLaurent::one();
    let mut rhs = MLaurent::one();
    for cc in 0..-d {
        lhs = &lhs * &MLaurent::binomial(VarId::Z, QRat::q_pow(2 * cc + d), VarId::W);
        rhs = &rhs * &MLaurent::binomial(VarId::W, QRat::q_pow(2 * cc + d), VarId::Z).scale(&QRat::from_int(-1));
    }
    (lhs, rhs)
}

/// Default number of rewrites allowed per straightening call.
pub const DEFAULT_BUDGET: usize = 200_000;

/// Rewrites words to non-increasing ones using the quadratic relation.
///
/// A rewrite only produces strictly larger words, so pending words are kept in a map keyed
/// by word and processed from the smallest up: each word is rewritten at most once per
/// call, with the contributions of all its predecessors already merged into its coefficient.
pub struct Straightener<'a> {
    cartan: &'a CartanMatrix,
    budget: usize,
    rewrites: usize,
}

impl<'a> Straightener<'a> {
    pub fn new(cartan: &'a CartanMatrix, budget: usize) -> Straightener<'a> {
        Straightener {
            cartan,
            budget,
            rewrites: 0,
        }
    }

    /// Rewrites performed so far, across calls.
    pub fn rewrites(&self) -> usize {
        self.rewrites
    }

    pub fn straighten(&mut self, x: &FreeElem) -> Result<FreeElem> {
        let mut pending = x.terms.clone();
        let mut out = FreeElem::zero();
        let mut used = 0;
        while let Some((w, c)) = pending.pop_first() {
            if c.is_zero() {
                continue;
            }
            let Some(p) = (0..w.len().saturating_sub(1)).find(|&p| !pair_ok(&w, p, p + 1)) else {
                out.terms.insert(w, c);
                continue;
            };
            used += 1;
            if used > self.budget {
                self.rewrites += used - 1;
                return Err(AlgebraError::BudgetExceeded {
                    budget: self.budget,
                    pending: pending.len() + 1,
                });
            }
            for (v, k) in self.rewrite(&w, p).terms {
                let e = pending.entry(v).or_insert_with(QRat::zero);
                *e = &*e + &(&k * &c);
            }
        }
        self.rewrites += used;
        Ok(out)
    }

    /// Expresses `w` through strictly larger words by the relation at positions `p, p+1`.
    fn rewrite(&self, w: &Word, p: usize) -> FreeElem {
        let (x, y) = (w.0[p], w.0[p + 1]);
        let rel = quad_relation(self.cartan, x.color, y.color, x.exp, y.exp);
        let embed = |v: &Word| Word(w.0[..p].iter().chain(&v.0).chain(&w.0[p + 2..]).copied().collect());
        let pair = Word(vec![x, y]);
        let lead = rel.coefficient(&pair);
        let scale = (-&lead).recip().expect("adjacent violations have a nonzero leading coefficient");
        let mut out = FreeElem::zero();
        for (v, c) in rel.terms() {
            if *v != pair {
                debug_assert!(*v > pair);
                out.add_term(embed(v), c * &scale);
            }
        }
        out
    }
}

/// Straightens with a fresh cache and the default budget.
pub fn straighten(c: &CartanMatrix, x: &FreeElem) -> Result<FreeElem> {
    Straightener::new(c, DEFAULT_BUDGET).straighten(x)
}

/// Coefficient of `∏_r z_r^{−a_r} w^{−b}` in
/// `Sym_z Σ_k (−1)^k [N choose k]_q e_i(z_1)…e_i(z_k) e_j(w) e_i(z_{k+1})…e_i(z_N)`, `N = 1 − d_ij`.
pub fn serre_coefficient(c: &CartanMatrix, i: usize, j: usize, z_exps: &[i32], w_exp: i32) -> Result<FreeElem> {
    if i == j {
        return Err(AlgebraError::InvalidArgument("the Serre relation needs i ≠ j".into()));
    }
    let n = (1 - c.dij(i, j)) as usize;
    if z_exps.len() != n {
        return Err(AlgebraError::InvalidArgument(format!(
            "expected {n} exponents for the i-variables, got {}",
            z_exps.len()
        )));
    }
    let mut out = FreeElem::zero();
    for perm in (0..n).permutations(n) {
        for k in 0..=n {
            let sign = if k % 2 == 0 { QRat::one() } else { QRat::from_int(-1) };
            let coef = &sign * &qbinomial(n as u32, k as u32)?;
            let mut letters: Vec<(usize, i32)> = perm[..k].iter().map(|&r| (i, z_exps[r])).collect();
            letters.push((j, w_exp));
            letters.extend(perm[k..].iter().map(|&r| (i, z_exps[r])));
            out.add_term(Word::new(letters), coef);
        }
    }
    Ok(out)
}

fn kernel_exponent(z: &DistZigZag, a: Vertex, b: Vertex) -> i32 {
    if a.row == b.row {
        2
    } else {
        z.d
    }
}

fn bar(z: &DistZigZag, v: Vertex) -> MLaurent {
    MLaurent::monomial(Mono::var(z.var_of(v)), QRat::q_pow(v.index))
}

/// Sign of the pair factor for `c` later in the word than `c2`.
fn pair_sign(c: Vertex, c2: Vertex) -> i32 {
    match (c.row, c2.row) {
        (Row::Top, Row::Bottom) => -1,
        (Row::Bottom, Row::Top) => 1,
        // Same row: the factor is oriented from the smaller index.
        _ if c.index < c2.index => -1,
        _ => 1,
    }
}

/// The descending order used by default: sources of the complement first.
pub fn default_order(z: &DistZigZag, sel: &RefinedSelection) -> Result<Vec<Vertex>> {
    topological_order(&z.vertices(), &sel.complement(z))
}

/// Checks that `order` lists every vertex once and that complement edges run forward.
fn check_order(z: &DistZigZag, sel: &RefinedSelection, order: &[Vertex]) -> Result<()> {
    let pos: HashMap<Vertex, usize> = order.iter().enumerate().map(|(p, v)| (*v, p)).collect();
    let verts = z.vertices();
    if order.len() != verts.len() || verts.iter().any(|v| !pos.contains_key(v)) {
        return Err(AlgebraError::InvalidArgument(
            "order is not a permutation of the zig-zag vertices".into(),
        ));
    }
    for e in sel.complement(z) {
        if pos[&e.src] > pos[&e.tgt] {
            return Err(AlgebraError::InvalidArgument(format!("order puts {} after {}", e.src, e.tgt)));
        }
    }
    Ok(())
}

/// The factors of the prefactor grouped by unordered vertex pair (smaller vertex first),
/// for one refined selection and one compatible descending order.
pub fn prefactor_pairs(z: &DistZigZag, sel: &RefinedSelection, order: &[Vertex]) -> Result<BTreeMap<(Vertex, Vertex), MLaurent>> {
    check_order(z, sel, order)?;
    let mu = sel.multiplicities(z);
    let edges: HashMap<(Vertex, Vertex), Edge> = z.graph().edges.into_iter().map(|e| ((e.src, e.tgt), e)).collect();
    let pos: HashMap<Vertex, usize> = order.iter().enumerate().map(|(p, v)| (*v, p)).collect();
    let key = |a: Vertex, b: Vertex| if a <= b { (a, b) } else { (b, a) };
    let mut out = BTreeMap::new();
    for p2 in 0..order.len() {
        for p1 in p2 + 1..order.len() {
            // c is later in the word, hence smaller in the order.
            let (c, c2) = (order[p1], order[p2]);
            let factor = MLaurent::binomial(z.var_of(c), QRat::q_pow(-kernel_exponent(z, c, c2)), z.var_of(c2))
                .scale(&QRat::from_int(pair_sign(c, c2) as i64));
            let value = match edges.get(&(c2, c)).map(|e| (e, mu.get(e).copied().unwrap_or(0))) {
                Some((e, 0)) => {
                    let diff = &bar(z, e.src) - &bar(z, e.tgt);
                    let ratio = factor.exact_div(&diff)?;
                    MLaurent::constant(ratio.as_constant().expect("pair factor and edge differ by a constant"))
                }
                Some((e, m)) => &factor * &(&bar(z, e.src) - &bar(z, e.tgt)).pow(m - 1),
                None => factor,
            };
            out.insert(key(c, c2), value);
        }
    }
    // Chosen edges pointing backwards along the order.
    for (e, &m) in &mu {
        if pos[&e.src] > pos[&e.tgt] {
            let diff = (&bar(z, e.src) - &bar(z, e.tgt)).pow(m - 1);
            let slot = out.get_mut(&key(e.src, e.tgt)).expect("every pair has a factor");
            *slot = &*slot * &diff;
        }
    }
    Ok(out)
}

/// The Laurent prefactor `∏_{c<c'}(±)(z_c − z_{c'} q^{−d}) / ∏_e (z̄_{src} − z̄_{tgt})^{1−μ_e}`
/// for one refined selection and one compatible descending order.
pub fn eh_prefactor(z: &DistZigZag, sel: &RefinedSelection, order: &[Vertex]) -> Result<MLaurent> {
    Ok(prefactor_pairs(z, sel, order)?.values().fold(MLaurent::one(), |acc, f| &acc * f))
}

/// Words of `P · ∏ e(z_c)` in the given order, at target multidegree `mu` (indexed as
/// [`DistZigZag::vertices`]): a monomial `z^p` of `P` gives exponents `p_c − μ_c`.
pub fn eh_coefficient(z: &DistZigZag, sel: &RefinedSelection, order: Option<&[Vertex]>, mu: &[i32]) -> Result<FreeElem> {
    let owned;
    let order = match order {
        Some(o) => o,
        None => {
            owned = default_order(z, sel)?;
            &owned
        }
    };
    let p = eh_prefactor(z, sel, order)?;
    Ok(prefactor_words(z, &p, order, mu))
}

fn prefactor_words(z: &DistZigZag, p: &MLaurent, order: &[Vertex], mu: &[i32]) -> FreeElem {
    let verts = z.vertices();
    let target: HashMap<Vertex, i32> = verts.iter().copied().zip(mu.iter().copied()).collect();
    let mut out = FreeElem::zero();
    for (m, coef) in p.terms() {
        let word = Word(
            order
                .iter()
                .map(|v| Letter::new(z.color_of(*v), m.exp(z.var_of(*v)) - target[v]))
                .collect(),
        );
        out.add_term(word, coef.clone());
    }
    out
}

fn check_multidegree(z: &DistZigZag, mu: &[i32]) -> Result<()> {
    let n = (z.len_top() + z.len_bottom()) as usize;
    if mu.len() != n {
        return Err(AlgebraError::InvalidArgument(format!(
            "multidegree needs {n} entries, got {}",
            mu.len()
        )));
    }
    Ok(())
}

/// Precomputed prefactors of every refined selection of a zig-zag.
pub struct RhoData {
    pub zigzag: DistZigZag,
    pub parts: Vec<(RefinedSelection, Vec<Vertex>, MLaurent)>,
}

impl RhoData {
    pub fn new(z: &DistZigZag) -> Result<RhoData> {
        let parts = z
            .refined_selections()
            .into_iter()
            .map(|sel| {
                let order = default_order(z, &sel)?;
                let p = eh_prefactor(z, &sel, &order)?.scale(&QRat::from_int(sel.sign() as i64));
                Ok((sel, order, p))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RhoData { zigzag: *z, parts })
    }

    /// `Σ_S (−1)^{σ(S)} e_{Z∖S}` at multidegree `mu`.
    pub fn coefficient(&self, mu: &[i32]) -> Result<FreeElem> {
        check_multidegree(&self.zigzag, mu)?;
        let mut out = FreeElem::zero();
        for (_, order, p) in &self.parts {
            out.add_scaled(&prefactor_words(&self.zigzag, p, order, mu), &QRat::one());
        }
        Ok(out)
    }
}

impl RhoData {
    /// Dimension vector of the vertex variables.
    pub fn dims(&self, rank: usize) -> Vec<usize> {
        let mut n = vec![0; rank];
        n[self.zigzag.i] = self.zigzag.len_top() as usize;
        n[self.zigzag.j] = self.zigzag.len_bottom() as usize;
        n
    }

    /// `G = Σ_S (−1)^{σ(S)} ε_S P_S ∏_{a<b} K(z_a, z_b)` in the vertex variables, the
    /// product running along the order of `S` and `ε_S` the sign of the relabeling from
    /// vertex variables to word slots. `Υ̃` of the coefficient at `μ` vanishes exactly
    /// when `Alt(z^{−μ} G)` does.
    ///
    /// Returned as `(F, G/F)` where `F` collects the pair factors shared by every selection.
    pub fn vertex_image(&self, c: &CartanMatrix, kernel: Kernel) -> Result<(MLaurent, MLaurent)> {
        let z = &self.zigzag;
        let mut summands = Vec::with_capacity(self.parts.len());
        for (sel, order, _) in &self.parts {
            let vars: Vec<VarId> = order.iter().map(|v| z.var_of(*v)).collect();
            let mut pairs = prefactor_pairs(z, sel, order)?;
            let mut negate = sel.sign() < 0;
            for a in 0..order.len() {
                for b in a + 1..order.len() {
                    if vars[a].color == vars[b].color && vars[a].slot > vars[b].slot {
                        negate = !negate;
                    }
                    let key = if order[a] <= order[b] {
                        (order[a], order[b])
                    } else {
                        (order[b], order[a])
                    };
                    let slot = pairs.get_mut(&key).expect("every pair has a factor");
                    *slot = &*slot * &kernel_factor(c, kernel, vars[a], vars[b]);
                }
            }
            summands.push((negate, pairs));
        }
        let keys: Vec<(Vertex, Vertex)> = summands.first().map(|s| s.1.keys().copied().collect()).unwrap_or_default();
        let shared: Vec<(Vertex, Vertex)> = keys
            .into_iter()
            .filter(|k| summands.iter().all(|s| s.1[k] == summands[0].1[k]))
            .collect();
        let common = shared.iter().fold(MLaurent::one(), |acc, k| &acc * &summands[0].1[k]);
        let mut rest = MLaurent::zero();
        for (negate, pairs) in &summands {
            let mut term = MLaurent::one();
            for (k, f) in pairs {
                if !shared.contains(k) {
                    term = &term * f;
                }
            }
            rest = if *negate { &rest - &term } else { &rest + &term };
        }
        Ok((common, rest))
    }

    /// Whether `Alt(z^{−μ} G)` vanishes.
    pub fn image_vanishes_at(&self, g: &MLaurent, dims: &[usize], mu: &[i32]) -> bool {
        let z = &self.zigzag;
        let shift = Mono::from_pairs(z.vertices().iter().zip(mu).map(|(v, &e)| (z.var_of(*v), -e)));
        alternant_coefficients(&g.mul_term(&shift, &QRat::one()), dims).is_empty()
    }
}

/// The coefficient of `ρ_Z` at multidegree `mu`.
pub fn rho_coefficient(z: &DistZigZag, mu: &[i32]) -> Result<FreeElem> {
    RhoData::new(z)?.coefficient(mu)
}

/// The evaluation point `x_c ↦ q^{(s+t)/2 − c}`, `y_c ↦ q^{(s'+t')/2 − c}` of the genericity condition.
pub fn genericity_point(z: &DistZigZag) -> Vec<(VarId, i32)> {
    let (s, t, sp, tp) = (z.s, z.t(), z.sp(), z.tp());
    z.vertices()
        .into_iter()
        .map(|v| {
            let e = match v.row {
                Row::Top => (s + t) / 2 - v.index,
                Row::Bottom => (sp + tp) / 2 - v.index,
            };
            (z.var_of(v), e)
        })
        .collect()
}

/// Whether a test polynomial in the vertex variables is nonzero at the genericity point.
pub fn tau_is_generic(z: &DistZigZag, tau: &MLaurent) -> bool {
    let point: HashMap<VarId, i32> = genericity_point(z).into_iter().collect();
    let mut value = QRat::zero();
    for (m, c) in tau.terms() {
        let e: i32 = m.iter().map(|(v, k)| point.get(&v).copied().unwrap_or(0) * k).sum();
        value = &value + &c.mul_monomial(&Rat::one(), e);
    }
    !value.is_zero()
}

/// `ρ_{Z,τ}`: the constant term of `ρ_Z · τ`, i.e. `Σ_a τ_a ρ_Z[−a]`. Rejects non-generic `τ`.
pub fn rho_tau(z: &DistZigZag, tau: &MLaurent) -> Result<FreeElem> {
    if !tau_is_generic(z, tau) {
        return Err(AlgebraError::InvalidArgument(
            "test polynomial vanishes at the genericity point".into(),
        ));
    }
    let data = RhoData::new(z)?;
    let verts = z.vertices();
    let mut out = FreeElem::zero();
    for (m, c) in tau.terms() {
        let mu: Vec<i32> = verts.iter().map(|v| -m.exp(z.var_of(*v))).collect();
        out.add_scaled(&data.coefficient(&mu)?, c);
    }
    Ok(out)
}

/// The per-selection sign of `P_S · Ξ_S` relative to a selection-independent rational
/// function; `ρ_Z` maps to zero whenever these signs agree and the selection identity holds.
pub fn rho_sign_profile(z: &DistZigZag) -> Result<Vec<(RefinedSelection, i32)>> {
    let verts = z.vertices();
    let rank: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(p, v)| (*v, p)).collect();
    z.refined_selections()
        .into_iter()
        .map(|sel| {
            let order = default_order(z, &sel)?;
            let mut eps = 1;
            for p2 in 0..order.len() {
                for p1 in p2 + 1..order.len() {
                    let (c, c2) = (order[p1], order[p2]);
                    eps *= pair_sign(c, c2);
                    // Ξ's denominator is (z_{c2} − z_c); compare with the fixed vertex orientation.
                    if rank[&c2] > rank[&c] {
                        eps = -eps;
                    }
                }
            }
            Ok((sel, eps))
        })
        .collect()
}

/// Factored verification of `ρ_Z ∈ Ker Υ̃`: constant sign profile and the selection identity.
pub fn rho_factored_check(z: &DistZigZag) -> std::result::Result<(), String> {
    let profile = rho_sign_profile(z).map_err(|e| e.to_string())?;
    if let Some((sel, _)) = profile.iter().find(|(_, e)| *e != profile[0].1) {
        return Err(format!("sign profile differs at selection {sel}"));
    }
    z.verify_selection_identity(true).map_err(|rest| format!("selection sum = {rest}"))
}

/// A second descending order for `sel`, when one exists.
pub fn alternative_order_for(z: &DistZigZag, sel: &RefinedSelection, order: &[Vertex]) -> Option<Vec<Vertex>> {
    alternative_order(order, &sel.complement(z))
}

/// Straightens the difference of `e_{Z∖S}` computed along two orders; `Ok` when it vanishes.
pub fn order_independence_check(
    st: &mut Straightener<'_>,
    z: &DistZigZag,
    sel: &RefinedSelection,
    first: &[Vertex],
    second: &[Vertex],
    mu: &[i32],
) -> Result<std::result::Result<(), FreeElem>> {
    let a = eh_coefficient(z, sel, Some(first), mu)?;
    let b = eh_coefficient(z, sel, Some(second), mu)?;
    let diff = st.straighten(&(&a - &b))?;
    Ok(if diff.is_zero() { Ok(()) } else { Err(diff) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shuffle::{upsilon, upsilon_vanishes, Sign};

    fn w(letters: &[(usize, i32)]) -> Word {
        Word::new(letters.iter().copied())
    }

    #[test]
    fn letter_and_word_order() {
        assert!(w(&[(0, 1)]) < w(&[(0, 0)]));
        assert!(w(&[(0, 0)]) < w(&[(0, 0), (1, 5)]));
        assert!(w(&[(1, 2), (0, 0)]) < w(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn non_increasing_examples() {
        assert!(non_increasing(&w(&[(0, 5)])));
        assert!(!non_increasing(&w(&[(0, 1), (0, 0)])));
        assert!(non_increasing(&w(&[(1, 0), (0, 0)])));
    }

    #[test]
    fn straighten_examples() {
        let c = CartanMatrix::a2();
        let x = FreeElem::word(w(&[(0, 0), (0, 1)]));
        assert_eq!(straighten(&c, &x).unwrap(), x);
        let y = FreeElem::word(w(&[(0, 1), (0, 0)]));
        assert_eq!(
            straighten(&c, &y).unwrap(),
            FreeElem::monomial(w(&[(0, 0), (0, 1)]), QRat::q_pow(2))
        );
        for (i, j, a, b) in [(0, 1, 2, -1), (1, 0, 0, 0), (0, 0, 3, 1)] {
            assert!(straighten(&c, &quad_relation(&c, i, j, a, b)).unwrap().is_zero());
        }
    }

    #[test]
    fn straighten_preserves_image() {
        let c = CartanMatrix::a2();
        let x = FreeElem::from_terms([
            (w(&[(0, 2), (1, -1), (0, 0)]), QRat::one()),
            (w(&[(1, 1), (0, 0), (0, 0)]), QRat::q_pow(3)),
        ]);
        let s = straighten(&c, &x).unwrap();
        assert!(s.terms().all(|(v, _)| non_increasing(v)));
        assert_eq!(upsilon(&c, &x, Sign::Plus).unwrap(), upsilon(&c, &s, Sign::Plus).unwrap());
        assert_eq!(straighten(&c, &s).unwrap(), s);
    }

    #[test]
    fn serre_example() {
        let c = CartanMatrix::a2();
        let s = serre_coefficient(&c, 0, 1, &[0, 0], 0).unwrap();
        let two = QRat::from_int(2);
        let want = FreeElem::from_terms([
            (w(&[(0, 0), (0, 0), (1, 0)]), two.clone()),
            (w(&[(0, 0), (1, 0), (0, 0)]), -&(&two * &QRat::qint(2))),
            (w(&[(1, 0), (0, 0), (0, 0)]), two),
        ]);
        assert_eq!(s, want);
        assert!(upsilon_vanishes(&c, Kernel::Plus, &s).unwrap());
    }

    #[test]
    fn orthogonal_eh_examples() {
        let c = CartanMatrix::rank_two(0);
        let s = 3;
        let z = DistZigZag::new(&c, 0, 1, 0, 0, 1, s).unwrap();
        let (k, l) = (2, -1);
        let sels = z.refined_selections();
        let sw = sels.iter().find(|x| x.tags == vec![crate::zigzag::Tag::SouthWest]).unwrap();
        let nw = sels.iter().find(|x| x.tags == vec![crate::zigzag::Tag::NorthWest]).unwrap();
        let mu = [-k, -l];
        assert_eq!(
            eh_coefficient(&z, sw, None, &mu).unwrap(),
            FreeElem::monomial(w(&[(1, l), (0, k)]), QRat::q_pow(-s))
        );
        assert_eq!(
            eh_coefficient(&z, nw, None, &mu).unwrap(),
            FreeElem::monomial(w(&[(0, k), (1, l)]), -&QRat::q_pow(-s))
        );
        let z0 = DistZigZag::new(&c, 0, 1, 0, 0, 1, 0).unwrap();
        let rho = rho_coefficient(&z0, &mu).unwrap();
        assert_eq!(
            rho,
            FreeElem::from_terms([(w(&[(1, l), (0, k)]), QRat::one()), (w(&[(0, k), (1, l)]), QRat::from_int(-1))])
        );
        assert!(upsilon_vanishes(&c, Kernel::Plus, &rho).unwrap());
    }

    #[test]
    fn rho_vanishes_small() {
        for d in [-1, -2] {
            let c = CartanMatrix::rank_two(d);
            for z in crate::zigzag::enumerate_distinguished(&c, 0, 1, 3, 3)
                .into_iter()
                .filter(|z| z.m == 1)
            {
                rho_factored_check(&z).unwrap();
                let n = (z.len_top() + z.len_bottom()) as usize;
                let data = RhoData::new(&z).unwrap();
                for mu in [vec![0; n], (0..n as i32).map(|a| a - 1).collect()] {
                    let x = data.coefficient(&mu).unwrap();
                    assert!(!x.is_zero());
                    assert!(upsilon_vanishes(&c, Kernel::Plus, &x).unwrap(), "{z} at {mu:?}");
                }
            }
        }
    }

    #[test]
    fn vertex_image_matches_words() {
        let c = CartanMatrix::rank_two(-1);
        let z = DistZigZag::new(&c, 0, 1, 1, 0, 2, 0).unwrap();
        let data = RhoData::new(&z).unwrap();
        let dims = data.dims(2);
        let (f, rest) = data.vertex_image(&c, Kernel::Plus).unwrap();
        assert!(rest.is_zero());
        let good = &f * &rest;
        let broken = c.with_broken_zeta();
        let (f, rest) = data.vertex_image(&broken, Kernel::Plus).unwrap();
        let bad = &f * &rest;
        let mut flagged = false;
        for mu in [[0, 0, 0, 0, 0], [1, -1, 0, 2, 0], [-2, 0, 1, 1, 0]] {
            assert!(data.image_vanishes_at(&good, &dims, &mu));
            let x = data.coefficient(&mu).unwrap();
            assert!(upsilon_vanishes(&c, Kernel::Plus, &x).unwrap());
            let literal = upsilon_vanishes(&broken, Kernel::Plus, &x).unwrap();
            assert_eq!(literal, data.image_vanishes_at(&bad, &dims, &mu));
            flagged |= !literal;
        }
        assert!(flagged);
    }

    #[test]
    fn genericity_gate() {
        let c = CartanMatrix::rank_two(-1);
        let z = DistZigZag::new(&c, 0, 1, 1, 0, 1, 0).unwrap();
        let x0 = z.var_of(Vertex::top(0));
        let x2 = z.var_of(Vertex::top(2));
        // x_0 ↦ q, x_2 ↦ q^{-1}
        let bad = MLaurent::binomial(x0, QRat::q_pow(2), x2);
        assert!(!tau_is_generic(&z, &bad));
        assert!(rho_tau(&z, &bad).is_err());
        let good = MLaurent::monomial(Mono::var(x0), QRat::one());
        let r = rho_tau(&z, &good).unwrap();
        assert!(upsilon_vanishes(&c, Kernel::Plus, &r).unwrap());
    }

    #[test]
    fn quad_modified_vanishes_geometrically() {
        for d in [0, -1, -2] {
            let c = CartanMatrix::rank_two(d);
            let (lhs, rhs) = quad_modified_sides(&c, 0, 1);
            for (a, b) in [(0, 0), (1, -2), (-1, 3)] {
                let x = relation_coefficient(0, 1, &lhs, &rhs, a, b);
                assert!(upsilon_vanishes(&c, Kernel::Geom, &x).unwrap(), "d = {d}");
            }
        }
    }
}
