//! The acceptance suite: every check runs on its own seeded generator, the
//! checks run concurrently, and the report is assembled in identifier order.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use itertools::Itertools;
use qloop_core::cartan::CartanMatrix;
use qloop_core::freealg::{
    alternative_order_for, default_order, genericity_point, non_increasing, order_independence_check, quad_intro_sides,
    quad_modified_sides, quad_relation, relation_coefficient, rho_factored_check, rho_tau, serre_coefficient, FreeElem, RhoData,
    Straightener, Word, DEFAULT_BUDGET,
};
use qloop_core::json::{free_to_json, shuf_to_json};
use qloop_core::multipoly::{MLaurent, Mono, VarId};
use qloop_core::pairing::{leading_word, pair_uu, pair_uv};
use qloop_core::scalars::QRat;
use qloop_core::shuffle::{
    omega, shuffle_mul, shuffle_mul_geom, upsilon, upsilon_vanishes, wheel_general_all, wheel_member, wheel_member_geom, Kernel, ShufElem,
    Sign,
};
use qloop_core::zigzag::DistZigZag;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub const REPORT_SCHEMA: &str = "qloop-report/1";

/// Bounds and seed for one run.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    /// Largest `−d_ij` for the selection identity.
    pub max_neg_d: u32,
    /// Largest zig-zag multiplicity for the selection identity.
    pub max_m: u32,
    /// Largest `−d_ij` for the relation checks.
    pub rho_max_neg_d: u32,
    /// Largest zig-zag multiplicity for the relation checks.
    pub rho_max_m: u32,
    /// Largest number of variables of a sampled shuffle element.
    pub max_n: usize,
    /// Half-width `B` of exponent windows.
    pub window: i32,
    pub seed: u64,
    /// Rewrite budget of each straightening call.
    pub budget: usize,
    /// Flips the kernel exponent everywhere, to exercise failure reporting.
    pub broken_zeta: bool,
    /// Restricts the run to these check identifiers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub only: Option<Vec<String>>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_neg_d: 4,
            max_m: 3,
            rho_max_neg_d: 3,
            rho_max_m: 2,
            max_n: 5,
            window: 2,
            seed: 20_240_601,
            budget: DEFAULT_BUDGET,
            broken_zeta: false,
            only: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("max_neg_d", self.max_neg_d as i64),
            ("max_m", self.max_m as i64),
            ("rho_max_m", self.rho_max_m as i64),
            ("max_n", self.max_n as i64),
            ("window", self.window as i64),
            ("budget", self.budget as i64),
        ];
        match positive.iter().find(|(_, v)| *v <= 0) {
            Some((name, _)) => Err(format!("{name} must be positive")),
            None if self.max_n < 2 => Err("max_n must be at least 2".into()),
            None => Ok(()),
        }
    }
}

/// Outcome of one check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: String,
    pub seed: u64,
    pub cartan: Value,
    pub config: SuiteConfig,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl Report {
    /// The report as JSON; without timings the body is a function of the configuration.
    pub fn to_json(&self, timings: bool) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !timings {
            for check in v["checks"].as_array_mut().expect("checks array") {
                check.as_object_mut().expect("check object").remove("elapsed_ms");
            }
        }
        v
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

struct Outcome {
    passed: bool,
    detail: String,
    witness: Option<Value>,
}

impl Outcome {
    fn pass(detail: impl Into<String>) -> Outcome {
        Outcome {
            passed: true,
            detail: detail.into(),
            witness: None,
        }
    }

    fn fail(detail: impl Into<String>, witness: Value) -> Outcome {
        Outcome {
            passed: false,
            detail: detail.into(),
            witness: Some(witness),
        }
    }
}

type CheckFn = fn(&Ctx, &mut ChaCha8Rng) -> Outcome;

/// Check identifiers, names and bodies, in report order.
pub const CHECKS: [(&str, &str); 11] = [
    ("A1", "selection identity"),
    ("A2", "zig-zag relations lie in the kernel"),
    ("A3", "loop Serre relations lie in the kernel"),
    ("A4", "quadratic relations"),
    ("A5", "straightening contract"),
    ("A6", "leading-word pairing law"),
    ("A7", "wheel closure of generator products"),
    ("A8", "geometric layer"),
    ("A9", "order independence"),
    ("A10", "base pairing values"),
    ("A11", "genericity gate"),
];

const BODIES: [CheckFn; 11] = [
    check_selection_identity,
    check_rho_kernel,
    check_serre,
    check_quadratic,
    check_straightening,
    check_pairing_law,
    check_wheel_closure,
    check_geometric,
    check_order_independence,
    check_base_pairings,
    check_genericity,
];

/// Shared inputs of every check.
struct Ctx<'a> {
    cartan: &'a CartanMatrix,
    config: &'a SuiteConfig,
}

impl Ctx<'_> {
    fn maybe_broken(&self, c: CartanMatrix) -> CartanMatrix {
        if self.config.broken_zeta {
            c.with_broken_zeta()
        } else {
            c
        }
    }

    /// The configured matrix when it has a pair with `d_ij = −e` (both orders), and a
    /// rank-two matrix otherwise.
    fn pairs_for(&self, e: u32) -> Vec<(CartanMatrix, usize, usize)> {
        let c = self.cartan;
        let found: Vec<(usize, usize)> = (0..c.rank())
            .flat_map(|i| (0..c.rank()).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && c.dij(i, j) == -(e as i32))
            .collect();
        match found.first() {
            Some(&(i, j)) => vec![(self.cartan_used(), i, j), (self.cartan_used(), j, i)],
            None => {
                let aux = self.maybe_broken(CartanMatrix::rank_two(-(e as i64)));
                vec![(aux.clone(), 0, 1), (aux, 1, 0)]
            }
        }
    }

    fn cartan_used(&self) -> CartanMatrix {
        self.maybe_broken(self.cartan.clone())
    }

    fn zigzags(&self, max_neg_d: u32, max_m: u32) -> Vec<(CartanMatrix, DistZigZag)> {
        let mut out = Vec::new();
        for e in 0..=max_neg_d {
            for (c, i, j) in self.pairs_for(e) {
                for m in 1..=max_m {
                    for k in 0..=e {
                        let z = DistZigZag::new(&c, i, j, k, e - k, m, 0).expect("valid zig-zag parameters");
                        out.push((c.clone(), z));
                    }
                }
            }
        }
        out
    }
}

/// Runs the selected checks; they are independent and run concurrently.
pub fn run_suite(cartan: &CartanMatrix, config: &SuiteConfig) -> Report {
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    let seeds: Vec<u64> = CHECKS.iter().map(|_| master.random()).collect();
    let ctx = Ctx { cartan, config };
    let selected: Vec<usize> = (0..CHECKS.len())
        .filter(|&k| {
            config
                .only
                .as_ref()
                .is_none_or(|ids| ids.iter().any(|id| id.eq_ignore_ascii_case(CHECKS[k].0)))
        })
        .collect();
    let mut checks: Vec<(usize, CheckResult)> = selected
        .par_iter()
        .map(|&k| {
            let start = Instant::now();
            let mut rng = ChaCha8Rng::seed_from_u64(seeds[k]);
            let outcome = BODIES[k](&ctx, &mut rng);
            let (id, name) = CHECKS[k];
            let result = CheckResult {
                id: id.into(),
                name: name.into(),
                passed: outcome.passed,
                detail: outcome.detail,
                witness: outcome.witness,
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            (k, result)
        })
        .collect();
    checks.sort_by_key(|(k, _)| *k);
    let checks: Vec<CheckResult> = checks.into_iter().map(|(_, c)| c).collect();
    Report {
        schema: REPORT_SCHEMA.into(),
        seed: config.seed,
        cartan: cartan_json(cartan),
        config: config.clone(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

pub fn cartan_json(c: &CartanMatrix) -> Value {
    serde_json::to_value(c).expect("matrix serializes")
}

fn zigzag_json(z: &DistZigZag) -> Value {
    json!({ "i": z.i, "j": z.j, "d": z.d, "k": z.k, "l": z.l, "m": z.m, "s": z.s })
}

fn excerpt(text: String) -> String {
    const LIMIT: usize = 400;
    if text.chars().count() <= LIMIT {
        text
    } else {
        format!("{}…", text.chars().take(LIMIT).collect::<String>())
    }
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, len: usize, lo: i32, hi: i32) -> Word {
    Word::new((0..len).map(|_| (rng.random_range(0..rank), rng.random_range(lo..=hi))))
}

fn check_selection_identity(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let zs = ctx.zigzags(ctx.config.max_neg_d, ctx.config.max_m);
    let failures: Vec<Value> = zs
        .par_iter()
        .flat_map_iter(|(_, z)| {
            [true, false].into_iter().filter_map(move |refined| {
                z.verify_selection_identity(refined)
                    .err()
                    .map(|rest| json!({ "zigzag": zigzag_json(z), "refined": refined, "residual": excerpt(rest.to_string()) }))
            })
        })
        .collect();
    match failures.into_iter().next() {
        None => Outcome::pass(format!("{} zig-zags, refined and coarse sums vanish", zs.len())),
        Some(w) => Outcome::fail("nonzero selection sum", w),
    }
}

/// Per-vertex midpoints of the exponents occurring in the prefactors.
pub fn homogeneity_center(data: &RhoData) -> Vec<i32> {
    let z = &data.zigzag;
    z.vertices()
        .iter()
        .map(|v| {
            let var = z.var_of(*v);
            let exps = data.parts.iter().flat_map(|(_, _, p)| p.terms().map(move |(m, _)| m.exp(var)));
            match exps.minmax().into_option() {
                Some((lo, hi)) => (lo + hi).div_euclid(2),
                None => 0,
            }
        })
        .collect()
}

fn window_points(center: &[i32], b: i32) -> impl Iterator<Item = Vec<i32>> + '_ {
    center.iter().map(|&c| c - b..=c + b).multi_cartesian_product()
}

/// Literal images are computed for zig-zags with at most this many vertices.
const LITERAL_VERTICES: usize = 5;

fn check_rho_kernel(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let b = ctx.config.window;
    let zs = ctx.zigzags(ctx.config.rho_max_neg_d, ctx.config.rho_max_m);
    let samples: Vec<u64> = zs.iter().map(|_| rng.random()).collect();
    let failed = AtomicBool::new(false);
    let results: Vec<Result<(u64, usize), Value>> = zs
        .par_iter()
        .zip(samples)
        .map(|((c, z), seed)| -> Result<(u64, usize), Value> {
            // Once a witness exists, larger zig-zags are not worth their cost.
            if failed.load(Ordering::Relaxed) {
                return Ok((0, 0));
            }
            let outcome = rho_kernel_one(c, z, seed, b);
            if outcome.is_err() {
                failed.store(true, Ordering::Relaxed);
            }
            outcome
        })
        .collect();
    let mut points = 0u64;
    let mut literal_nonzero = 0;
    for r in results {
        match r {
            Ok((p, n)) => {
                points += p;
                literal_nonzero += n;
            }
            Err(w) => return Outcome::fail("nonzero image of a zig-zag relation", w),
        }
    }
    Outcome::pass(format!(
        "{} zig-zags, {points} multidegrees in windows of width {} (vertex images vanish identically), {literal_nonzero} nonzero literal coefficients",
        zs.len(),
        2 * b + 1
    ))
}

/// One zig-zag of the relation check: the multidegree count covered and the number of
/// nonzero literal coefficients, or a witness.
fn rho_kernel_one(c: &CartanMatrix, z: &DistZigZag, seed: u64, b: i32) -> Result<(u64, usize), Value> {
    let fail = |route: &str, extra: Value| json!({ "zigzag": zigzag_json(z), "route": route, "detail": extra });
    rho_factored_check(z).map_err(|e| fail("factored", json!(e)))?;
    let data = RhoData::new(z).map_err(|e| fail("prefactor", json!(e.to_string())))?;
    let center = homogeneity_center(&data);
    let dims = data.dims(c.rank());
    let (common, rest) = data
        .vertex_image(c, Kernel::Plus)
        .map_err(|e| fail("vertex image", json!(e.to_string())))?;
    let points = (2 * b as u64 + 1).pow(center.len() as u32);
    if !rest.is_zero() {
        let image = &common * &rest;
        if let Some(mu) = window_points(&center, b).find(|mu| !data.image_vanishes_at(&image, &dims, mu)) {
            let x = data.coefficient(&mu).map_err(|e| fail("coefficient", json!(e.to_string())))?;
            let value = upsilon(c, &x, Sign::Plus).map(|r| shuf_to_json(c, &r)).unwrap_or(Value::Null);
            return Err(json!({ "zigzag": zigzag_json(z), "route": "vertex image", "multidegree": mu,
                        "coefficient": free_to_json(c, &x), "image": value }));
        }
    }
    let mut nonzero = 0;
    if center.len() <= LITERAL_VERTICES {
        let mut local = ChaCha8Rng::seed_from_u64(seed);
        let mut mus = vec![center.clone()];
        mus.extend((0..2).map(|_| center.iter().map(|&c| c + local.random_range(-b..=b)).collect::<Vec<_>>()));
        for mu in mus {
            let x = data.coefficient(&mu).map_err(|e| fail("coefficient", json!(e.to_string())))?;
            nonzero += usize::from(!x.is_zero());
            if !upsilon_vanishes(c, Kernel::Plus, &x).map_err(|e| fail("literal", json!(e.to_string())))? {
                return Err(json!({ "zigzag": zigzag_json(z), "route": "literal", "multidegree": mu, "coefficient": free_to_json(c, &x) }));
            }
        }
    }
    Ok((points, nonzero))
}

fn check_serre(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let mut tested = 0;
    let mut nonzero = 0;
    for e in 0..=2u32 {
        for (c, i, j) in ctx.pairs_for(e) {
            let n = (1 + e) as usize;
            for zs in (-1..=1).combinations_with_replacement(n) {
                for w in -1..=1 {
                    let x = match serre_coefficient(&c, i, j, &zs, w) {
                        Ok(x) => x,
                        Err(err) => return Outcome::fail("Serre coefficient failed", json!(err.to_string())),
                    };
                    tested += 1;
                    nonzero += usize::from(!x.is_zero());
                    match upsilon_vanishes(&c, Kernel::Plus, &x) {
                        Ok(true) => {}
                        Ok(false) => {
                            return Outcome::fail(
                                "nonzero image of a Serre coefficient",
                                json!({ "d": c.dij(i, j), "i": i, "j": j, "z": zs, "w": w, "coefficient": free_to_json(&c, &x) }),
                            )
                        }
                        Err(err) => return Outcome::fail("image failed", json!(err.to_string())),
                    }
                }
            }
        }
    }
    Outcome::pass(format!("{tested} coefficients ({nonzero} nonzero) vanish for d in {{0, -1, -2}}"))
}

fn check_quadratic(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let b = ctx.config.window;
    let mut matrices = vec![ctx.cartan_used()];
    matrices.extend([0, -2].map(|d| ctx.maybe_broken(CartanMatrix::rank_two(d))));
    let mut tested = 0;
    for c in &matrices {
        let mut st = Straightener::new(c, ctx.config.budget);
        for (i, j) in (0..c.rank()).cartesian_product(0..c.rank()) {
            for (a, bb) in (-b..=b).cartesian_product(-b..=b) {
                let x = quad_relation(c, i, j, a, bb);
                tested += 1;
                let witness = || json!({ "d": c.dij(i, j), "i": i, "j": j, "a": a, "b": bb, "relation": free_to_json(c, &x) });
                if !upsilon_vanishes(c, Kernel::Plus, &x).unwrap_or(false) {
                    return Outcome::fail("nonzero image of a quadratic relation", witness());
                }
                match st.straighten(&x) {
                    Ok(s) if s.is_zero() => {}
                    Ok(s) => {
                        return Outcome::fail(
                            "quadratic relation does not straighten to zero",
                            json!({ "relation": witness(), "straightened": free_to_json(c, &s) }),
                        )
                    }
                    Err(e) => return Outcome::fail("straightening failed", json!({ "relation": witness(), "error": e.to_string() })),
                }
            }
        }
    }
    Outcome::pass(format!("{tested} extractions map to zero and straighten to zero"))
}

/// Allowed exponent drift of straightening, per word length. Measured as zero: the
/// rewriting moves exponents of adjacent letters towards each other.
pub const STRAIGHTEN_DRIFT: [i32; 5] = [0, 0, 0, 0, 0];

fn check_straightening(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    const BOUND: i32 = 3;
    let c = ctx.cartan_used();
    let mut max_rewrites = 0;
    for _ in 0..200 {
        let len = rng.random_range(1..=4);
        let w = random_word(rng, c.rank(), len, -BOUND, BOUND);
        let x = FreeElem::word(w.clone());
        let witness = |what: Value| json!({ "word": w.render(&c), "detail": what });
        let mut st = Straightener::new(&c, ctx.config.budget);
        let s = match st.straighten(&x) {
            Ok(s) => s,
            Err(e) => return Outcome::fail("straightening failed", witness(json!(e.to_string()))),
        };
        max_rewrites = max_rewrites.max(st.rewrites());
        if let Some((bad, _)) = s.terms().find(|(v, _)| !non_increasing(v)) {
            return Outcome::fail("output word is not non-increasing", witness(json!(bad.render(&c))));
        }
        if !upsilon_vanishes(&c, Kernel::Plus, &(&x - &s)).unwrap_or(false) {
            return Outcome::fail("straightening changed the image", witness(free_to_json(&c, &s)));
        }
        match st.straighten(&s) {
            Ok(again) if again == s => {}
            _ => return Outcome::fail("straightening is not idempotent", witness(free_to_json(&c, &s))),
        }
        let beta = STRAIGHTEN_DRIFT[len];
        if let Some((lo, hi)) = s.exponent_range() {
            if lo < -BOUND - beta || hi > BOUND + beta {
                return Outcome::fail("exponent drift exceeds the monitored bound", witness(json!([lo, hi])));
            }
        }
    }
    Outcome::pass(format!(
        "200 words; largest rewrite count {max_rewrites}, drift within {STRAIGHTEN_DRIFT:?}"
    ))
}

fn random_dims(rng: &mut ChaCha8Rng, rank: usize, max: usize) -> Vec<usize> {
    let size = rng.random_range(1..=max);
    let mut n = vec![0; rank];
    for _ in 0..size {
        n[rng.random_range(0..rank)] += 1;
    }
    n
}

/// A random element of `V^-`: an image of words or a symmetrized monomial.
fn random_minus(rng: &mut ChaCha8Rng, c: &CartanMatrix, max_n: usize) -> ShufElem {
    let n = random_dims(rng, c.rank(), max_n);
    if rng.random_bool(0.5) {
        let colors: Vec<usize> = n.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k)).collect();
        let mut x = FreeElem::zero();
        for _ in 0..rng.random_range(1..=2) {
            let mut order = colors.clone();
            for a in (1..order.len()).rev() {
                order.swap(a, rng.random_range(0..=a));
            }
            let w = Word::new(order.into_iter().map(|i| (i, rng.random_range(-2..=2))));
            x.add_term(w, QRat::from_int(rng.random_range(1..=3)));
        }
        upsilon(c, &x, Sign::Minus).expect("homogeneous words")
    } else {
        let mono = Mono::from_pairs(
            n.iter()
                .enumerate()
                .flat_map(|(i, &k)| (1..=k as u32).map(move |a| VarId::new(i as u32, a)))
                .map(|v| (v, rng.random_range(-2..=2)))
                .collect::<Vec<_>>(),
        );
        let sym = MLaurent::monomial(mono, QRat::one()).symmetrize(&n).expect("dims match");
        ShufElem::new(Sign::Minus, n, sym)
    }
}

/// A word of the same degree as `lead`, strictly greater, differing first at a random position.
fn greater_word(rng: &mut ChaCha8Rng, lead: &Word) -> Word {
    let len = lead.len();
    let p = rng.random_range(0..len - 1);
    let mut letters: Vec<(usize, i32)> = lead.0[..p].iter().map(|l| (l.color, l.exp)).collect();
    let mut colors: Vec<usize> = lead.0[p..].iter().map(|l| l.color).collect();
    let total: i32 = lead.0[p..].iter().map(|l| l.exp).sum();
    let at = lead.0[p];
    let pick = rng.random_range(0..colors.len());
    let color = colors.remove(pick);
    let mut drop = rng.random_range(0..=3);
    if drop == 0 && color <= at.color {
        drop = 1;
    }
    letters.push((color, at.exp - drop));
    for a in (1..colors.len()).rev() {
        colors.swap(a, rng.random_range(0..=a));
    }
    let mut left = total - (at.exp - drop);
    for (k, &col) in colors.iter().enumerate() {
        let e = if k + 1 == colors.len() { left } else { rng.random_range(-3..=3) };
        left -= e;
        letters.push((col, e));
    }
    Word::new(letters)
}

fn check_pairing_law(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let c = ctx.cartan_used();
    let max_n = ctx.config.max_n.min(4);
    let elements: Vec<(ShufElem, u64)> = (0..100).map(|_| (random_minus(rng, &c, max_n), rng.random())).collect();
    let results: Vec<Result<usize, Value>> = elements
        .par_iter()
        .map(|(r, seed)| {
            let mut local = ChaCha8Rng::seed_from_u64(*seed);
            let fail =
                |what: &str, w: Option<&Word>| json!({ "element": shuf_to_json(&c, r), "problem": what, "word": w.map(|w| w.render(&c)) });
            if r.is_zero() {
                return Ok(0);
            }
            let lead = leading_word(r).map_err(|e| fail(&e.to_string(), None))?;
            let value = pair_uv(&c, &FreeElem::word(lead.clone()), r).map_err(|e| fail(&e.to_string(), Some(&lead)))?;
            if value.is_zero() {
                return Err(fail("pairing with the leading word vanishes", Some(&lead)));
            }
            if lead.len() < 2 {
                return Ok(0);
            }
            for _ in 0..20 {
                let w = greater_word(&mut local, &lead);
                debug_assert!(w > lead);
                let value = pair_uv(&c, &FreeElem::word(w.clone()), r).map_err(|e| fail(&e.to_string(), Some(&w)))?;
                if !value.is_zero() {
                    return Err(fail("a greater word pairs nontrivially", Some(&w)));
                }
            }
            Ok(20)
        })
        .collect();
    let mut greater = 0;
    for r in results {
        match r {
            Ok(k) => greater += k,
            Err(w) => return Outcome::fail("pairing law violated", w),
        }
    }
    Outcome::pass(format!(
        "100 elements; leading words pair nontrivially, {greater} greater words pair to zero"
    ))
}

fn check_wheel_closure(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    let mut matrices = vec![ctx.cartan_used()];
    matrices.extend([-2, 0].map(|d| ctx.maybe_broken(CartanMatrix::rank_two(d))));
    let mut samples = Vec::new();
    for c in &matrices {
        for _ in 0..20 {
            let len = rng.random_range(2..=ctx.config.max_n);
            samples.push((c.clone(), random_word(rng, c.rank(), len, -1, 1)));
        }
    }
    let results: Vec<Result<(), Value>> = samples
        .par_iter()
        .map(|(c, w)| {
            let r = upsilon(c, &FreeElem::word(w.clone()), Sign::Plus).map_err(|e| json!(e.to_string()))?;
            let fail = |kind: &str, wit: String| json!({ "cartan": cartan_json(c), "word": w.render(c), "condition": kind, "zigzag": wit });
            wheel_member(c, &r).map_err(|wit| fail("distinguished", wit.to_string()))?;
            wheel_general_all(c, &r).map_err(|wit| fail("general", wit.to_string()))?;
            Ok(())
        })
        .collect();
    match results.into_iter().find_map(Result::err) {
        None => Outcome::pass(format!(
            "{} products over {} matrices pass both wheel checks",
            samples.len(),
            matrices.len()
        )),
        Some(w) => Outcome::fail("generator product violates a wheel condition", w),
    }
}

fn check_geometric(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Outcome {
    // (i) geometric kernel = trigonometric kernel × correction.
    for e in 0..=4 {
        let c = ctx.maybe_broken(CartanMatrix::rank_two(-e));
        for (i, j) in [(0, 1), (1, 0), (0, 0)] {
            let geom = c.zeta_geom(i, j).expect("vertices exist");
            let product = c
                .zeta(i, j)
                .expect("vertices exist")
                .mul(&c.correction(i, j).expect("vertices exist"));
            if !geom.same_function(&product) {
                return Outcome::fail("kernel identity fails", json!({ "d": -e, "i": i, "j": j }));
            }
        }
    }
    // (ii) and (iii): Ω is multiplicative and lands in the geometric wheel algebra.
    let matrices: Vec<CartanMatrix> = [0, -1, -2].map(|d| ctx.maybe_broken(CartanMatrix::rank_two(d))).to_vec();
    let pairs: Vec<(CartanMatrix, Word, Word)> = (0..50)
        .map(|k| {
            let c = matrices[k % matrices.len()].clone();
            let (la, lb) = (rng.random_range(1..=2), rng.random_range(1..=2));
            let a = random_word(rng, 2, la, -1, 1);
            let b = random_word(rng, 2, lb, -1, 1);
            (c, a, b)
        })
        .collect();
    let results: Vec<Result<(), Value>> = pairs
        .par_iter()
        .map(|(c, wa, wb)| {
            let err = |what: &str| json!({ "d": c.dij(0, 1), "left": wa.render(c), "right": wb.render(c), "problem": what });
            let a = upsilon(c, &FreeElem::word(wa.clone()), Sign::Plus).map_err(|e| err(&e.to_string()))?;
            let b = upsilon(c, &FreeElem::word(wb.clone()), Sign::Plus).map_err(|e| err(&e.to_string()))?;
            let ab = shuffle_mul(c, &a, &b).map_err(|e| err(&e.to_string()))?;
            let (oa, ob, oab) = (omega(c, &a), omega(c, &b), omega(c, &ab));
            let (oa, ob, oab) = match (oa, ob, oab) {
                (Ok(x), Ok(y), Ok(z)) => (x, y, z),
                _ => return Err(err("Ω failed")),
            };
            if shuffle_mul_geom(c, &oa, &ob) != oab {
                return Err(err("Ω(a * b) differs from Ω(a) * Ω(b)"));
            }
            for g in [&oa, &ob, &oab] {
                wheel_member_geom(c, g).map_err(|w| err(&format!("geometric wheel condition: {w}")))?;
            }
            Ok(())
        })
        .collect();
    if let Some(w) = results.into_iter().find_map(Result::err) {
        return Outcome::fail("Ω check failed", w);
    }
    // (iv) modified quadratic relations vanish geometrically; the trigonometric ones do not.
    let b = ctx.config.window;
    let mut intro_counts = Vec::new();
    for e in 0..=2 {
        let c = ctx.maybe_broken(CartanMatrix::rank_two(-e));
        let (lhs, rhs) = quad_modified_sides(&c, 0, 1);
        let (ilhs, irhs) = quad_intro_sides(&c, 0, 1);
        let mut intro_nonzero = 0;
        for (x, y) in (-b..=b).cartesian_product(-b..=b) {
            let rel = relation_coefficient(0, 1, &lhs, &rhs, x, y);
            if !upsilon_vanishes(&c, Kernel::Geom, &rel).unwrap_or(false) {
                return Outcome::fail(
                    "modified quadratic relation has nonzero geometric image",
                    json!({ "d": -e, "z": x, "w": y, "relation": free_to_json(&c, &rel) }),
                );
            }
            let intro = relation_coefficient(0, 1, &ilhs, &irhs, x, y);
            intro_nonzero += usize::from(!upsilon_vanishes(&c, Kernel::Geom, &intro).unwrap_or(true));
        }
        intro_counts.push(intro_nonzero);
    }
    if intro_counts.iter().all(|&k| k == 0) {
        return Outcome::fail(
            "every trigonometric quadratic extraction has zero geometric image",
            json!({ "window": b, "d": [0, -1, -2], "nonzero_extractions": intro_counts }),
        );
    }
    Outcome::pass(format!(
        "kernel identity for |d| <= 4; 50 Ω products multiplicative and wheel; modified relations vanish; nonzero trigonometric extractions for d = 0, -1, -2: {intro_counts:?}"
    ))
}

fn check_order_independence(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let zs = ctx.zigzags(ctx.config.rho_max_neg_d, ctx.config.rho_max_m);
    let results: Vec<Result<usize, Value>> = zs
        .par_iter()
        .map(|(c, z)| {
            let data = RhoData::new(z).map_err(|e| json!(e.to_string()))?;
            let center = homogeneity_center(&data);
            let mut st = Straightener::new(c, ctx.config.budget);
            let mut compared = 0;
            for sel in z.refined_selections() {
                let first = default_order(z, &sel).map_err(|e| json!(e.to_string()))?;
                let Some(second) = alternative_order_for(z, &sel, &first) else {
                    continue;
                };
                let fail =
                    |what: Value| json!({ "zigzag": zigzag_json(z), "selection": sel.to_string(), "multidegree": center, "detail": what });
                match order_independence_check(&mut st, z, &sel, &first, &second, &center) {
                    Ok(Ok(())) => compared += 1,
                    Ok(Err(diff)) => return Err(fail(free_to_json(c, &diff))),
                    Err(e) => return Err(fail(json!(e.to_string()))),
                }
            }
            Ok(compared)
        })
        .collect();
    let mut compared = 0;
    for r in results {
        match r {
            Ok(k) => compared += k,
            Err(w) => return Outcome::fail("orders give different elements after straightening", w),
        }
    }
    Outcome::pass(format!("{compared} selections with two orders agree after straightening"))
}

fn check_base_pairings(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let c = ctx.cartan_used();
    let b = ctx.config.window;
    let expected = (&QRat::q_pow(-1) - &QRat::q_pow(1)).recip().expect("nonzero");
    let letter = |i: usize, k: i32| FreeElem::word(Word::new([(i, k)]));
    let mut tested = 0;
    for i in 0..c.rank() {
        for k in -b..=b {
            let mut cases = vec![(letter(i, -k), expected.clone()), (letter(i, 1 - k), QRat::zero())];
            cases.extend((0..c.rank()).filter(|&j| j != i).map(|j| (letter(j, -k), QRat::zero())));
            for (f, want) in cases {
                tested += 1;
                match pair_uu(&c, &letter(i, k), &f) {
                    Ok(got) if got == want => {}
                    Ok(got) => {
                        return Outcome::fail(
                            "unexpected pairing value",
                            json!({ "e": [c.label(i), k], "f": free_to_json(&c, &f), "expected": want.to_string(), "got": got.to_string() }),
                        )
                    }
                    Err(e) => return Outcome::fail("pairing failed", json!(e.to_string())),
                }
            }
        }
    }
    Outcome::pass(format!("{tested} generator pairings match"))
}

fn check_genericity(ctx: &Ctx, _: &mut ChaCha8Rng) -> Outcome {
    let zs = ctx.zigzags(ctx.config.rho_max_neg_d.min(2), 1);
    for (c, z) in &zs {
        let point = genericity_point(z);
        let (v1, e1) = point[0];
        let (v2, e2) = point[point.len() - 1];
        let bad = MLaurent::binomial(v1, QRat::q_pow(e1 - e2), v2);
        if rho_tau(z, &bad).is_ok() {
            return Outcome::fail(
                "non-generic test polynomial accepted",
                json!({ "zigzag": zigzag_json(z), "tau": bad.to_string() }),
            );
        }
        let center = match RhoData::new(z) {
            Ok(data) => homogeneity_center(&data),
            Err(e) => return Outcome::fail("prefactor failed", json!({ "zigzag": zigzag_json(z), "error": e.to_string() })),
        };
        let good = MLaurent::monomial(
            Mono::from_pairs(point.iter().zip(&center).map(|(&(v, _), &mu)| (v, -mu))),
            QRat::one(),
        );
        match rho_tau(z, &good) {
            Ok(x) => match upsilon_vanishes(c, Kernel::Plus, &x) {
                Ok(true) => {}
                _ => {
                    return Outcome::fail(
                        "generic relation has a nonzero image",
                        json!({ "zigzag": zigzag_json(z), "relation": free_to_json(c, &x) }),
                    )
                }
            },
            Err(e) => {
                return Outcome::fail(
                    "generic test polynomial rejected",
                    json!({ "zigzag": zigzag_json(z), "error": e.to_string() }),
                )
            }
        }
    }
    Outcome::pass(format!(
        "{} zig-zags: vanishing test polynomials rejected, monomials accepted",
        zs.len()
    ))
}

/// Summary counts by outcome, for the command-line footer.
pub fn tally(report: &Report) -> BTreeMap<&'static str, usize> {
    let mut out = BTreeMap::new();
    for c in &report.checks {
        *out.entry(if c.passed { "passed" } else { "failed" }).or_insert(0) += 1;
    }
    out
}
