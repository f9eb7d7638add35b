//! The verbs of the `qloop` binary. Each returns a JSON value and whether the
//! mathematical check it performs (if any) passed.

use std::fmt;

use itertools::Itertools;
use qloop_core::cartan::CartanMatrix;
use qloop_core::error::AlgebraError;
use qloop_core::freealg::{serre_coefficient, FreeElem, RhoData, Straightener, Word};
use qloop_core::json::{free_display, free_from_json, free_to_json, geom_to_json, shuf_from_json, shuf_to_json};
use qloop_core::pairing::{associated_polynomial, leading_word, pair_uu, pair_uv, pair_vu};
use qloop_core::shuffle::{
    omega, shuffle_mul, upsilon, upsilon_vanishes, wheel_general_all, wheel_member, wheel_member_geom, Kernel, ShufElem, Sign,
};
use qloop_core::zigzag::DistZigZag;
use serde_json::{json, Value};

use crate::suite::homogeneity_center;

/// Failures that are not mathematical: bad input or IO.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Output of a verb; `ok` is false when a verification found a counterexample.
pub struct Output {
    pub value: Value,
    pub ok: bool,
}

impl Output {
    fn ok(value: Value) -> Output {
        Output { value, ok: true }
    }
}

pub type CliResult = Result<Output, CliError>;

/// Reads an argument that is inline JSON or `@path`.
pub fn read_arg(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

pub fn load_cartan(path: Option<&str>) -> Result<CartanMatrix, CliError> {
    match path {
        None => Ok(CartanMatrix::a2()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{p}: {e}")))?;
            Ok(CartanMatrix::parse_json(&text)?)
        }
    }
}

/// A free-algebra element given as JSON or as a single word `"i:k,..."`.
pub fn parse_free(c: &CartanMatrix, arg: &str) -> Result<FreeElem, CliError> {
    let text = read_arg(arg)?;
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))?;
        Ok(free_from_json(c, &v)?)
    } else {
        Ok(FreeElem::word(Word::parse(c, &text)?))
    }
}

/// A shuffle element given as JSON, or as words whose image under `Υ̃^sign` is taken.
pub fn parse_shuf(c: &CartanMatrix, arg: &str, sign: Sign) -> Result<ShufElem, CliError> {
    let text = read_arg(arg)?;
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid JSON: {e}")))?;
        if v.get("terms").is_some() {
            return Ok(upsilon(c, &free_from_json(c, &v)?, sign)?);
        }
        let r = shuf_from_json(c, &v)?;
        if v.get("sign").is_some() && r.sign != sign {
            return Err(CliError::Usage(format!("expected an element of V{sign}")));
        }
        Ok(ShufElem { sign, ..r })
    } else {
        Ok(upsilon(c, &FreeElem::word(Word::parse(c, &text)?), sign)?)
    }
}

fn free_output(c: &CartanMatrix, x: &FreeElem) -> Value {
    json!({ "element": free_to_json(c, x), "display": free_display(c, x) })
}

pub fn cartan_validate(path: &str) -> CliResult {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    match CartanMatrix::parse_json(&text) {
        Ok(c) => Ok(Output::ok(json!({ "valid": true, "rank": c.rank(), "vertices": c.vertices }))),
        Err(AlgebraError::InvalidCartan(problems)) => Ok(Output {
            value: json!({ "valid": false, "problems": problems }),
            ok: false,
        }),
        Err(e) => Err(e.into()),
    }
}

pub fn word_straighten(c: &CartanMatrix, word: &str, budget: usize) -> CliResult {
    let x = parse_free(c, word)?;
    let mut st = Straightener::new(c, budget);
    let s = st.straighten(&x)?;
    let mut v = free_output(c, &s);
    v["rewrites"] = json!(st.rewrites());
    Ok(Output::ok(v))
}

pub fn shuffle_mul_cmd(c: &CartanMatrix, left: &str, right: &str, sign: Sign) -> CliResult {
    let a = parse_shuf(c, left, sign)?;
    let b = parse_shuf(c, right, sign)?;
    Ok(Output::ok(shuf_to_json(c, &shuffle_mul(c, &a, &b)?)))
}

pub fn wheel_check(c: &CartanMatrix, elem: &str, geom: bool) -> CliResult {
    let r = parse_shuf(c, elem, Sign::Plus)?;
    let result = if geom {
        wheel_member_geom(c, &omega(c, &r)?)
    } else {
        wheel_member(c, &r).and_then(|()| wheel_general_all(c, &r))
    };
    Ok(match result {
        Ok(()) => Output::ok(json!({ "wheel": true })),
        Err(w) => Output {
            value: json!({ "wheel": false, "witness": w.to_string(), "required": w.required, "found": w.found.to_string() }),
            ok: false,
        },
    })
}

pub fn omega_cmd(c: &CartanMatrix, elem: &str) -> CliResult {
    let r = parse_shuf(c, elem, Sign::Plus)?;
    Ok(Output::ok(geom_to_json(c, &omega(c, &r)?)))
}

/// Parses `i,j,k,l,m[,s]` with vertex labels `i, j`.
pub fn parse_zigzag(c: &CartanMatrix, text: &str) -> Result<DistZigZag, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if !(5..=6).contains(&parts.len()) {
        return Err(CliError::Usage("zig-zag must be i,j,k,l,m[,s]".into()));
    }
    let num = |s: &str| s.parse::<i64>().map_err(|e| CliError::Usage(format!("{s:?}: {e}")));
    let (i, j) = (c.index_of(parts[0])?, c.index_of(parts[1])?);
    let unsigned = |s: &str| num(s).and_then(|v| u32::try_from(v).map_err(|_| CliError::Usage(format!("{s} must be nonnegative"))));
    let s = if parts.len() == 6 { num(parts[5])? as i32 } else { 0 };
    Ok(DistZigZag::new(
        c,
        i,
        j,
        unsigned(parts[2])?,
        unsigned(parts[3])?,
        unsigned(parts[4])?,
        s,
    )?)
}

pub fn parse_ints(text: &str) -> Result<Vec<i32>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<i32>().map_err(|e| CliError::Usage(format!("{s:?}: {e}"))))
        .collect()
}

pub fn rho_gen(c: &CartanMatrix, zigzag: &str, deg: &str) -> CliResult {
    let z = parse_zigzag(c, zigzag)?;
    let mu = parse_ints(deg)?;
    let x = RhoData::new(&z)?.coefficient(&mu)?;
    Ok(Output::ok(free_output(c, &x)))
}

/// Vertex image over the whole window plus literal images at the window center.
pub fn rho_verify(c: &CartanMatrix, zigzag: &str, window: i32) -> CliResult {
    let z = parse_zigzag(c, zigzag)?;
    let data = RhoData::new(&z)?;
    let dims = data.dims(c.rank());
    let (common, rest) = data.vertex_image(c, Kernel::Plus)?;
    let image = &common * &rest;
    let center = homogeneity_center(&data);
    let witness = if rest.is_zero() {
        None
    } else {
        center
            .iter()
            .map(|&m| m - window..=m + window)
            .multi_cartesian_product()
            .find(|mu| !data.image_vanishes_at(&image, &dims, mu))
    };
    let literal = upsilon_vanishes(c, Kernel::Plus, &data.coefficient(&center)?)?;
    let ok = witness.is_none() && literal;
    Ok(Output {
        value: json!({ "zigzag": z.to_string(), "center": center, "window": window, "vanishes": ok,
            "identically_zero": rest.is_zero(), "witness": witness }),
        ok,
    })
}

pub fn serre_verify(c: &CartanMatrix, i: &str, j: &str, window: i32) -> CliResult {
    let (i, j) = (c.index_of(i)?, c.index_of(j)?);
    let n = (1 - c.dij(i, j)) as usize;
    let mut tested = 0;
    for zs in (-window..=window).combinations_with_replacement(n) {
        for w in -window..=window {
            let x = serre_coefficient(c, i, j, &zs, w)?;
            tested += 1;
            if !upsilon_vanishes(c, Kernel::Plus, &x)? {
                return Ok(Output {
                    value: json!({ "vanishes": false, "z": zs, "w": w, "coefficient": free_to_json(c, &x) }),
                    ok: false,
                });
            }
        }
    }
    Ok(Output::ok(json!({ "vanishes": true, "coefficients": tested })))
}

#[derive(Clone, Copy, Debug)]
pub enum PairKind {
    Uv,
    Vu,
    Uu,
}

pub fn pair_cmd(c: &CartanMatrix, kind: PairKind, left: &str, right: &str) -> CliResult {
    let value = match kind {
        PairKind::Uv => pair_uv(c, &parse_free(c, left)?, &parse_shuf(c, right, Sign::Minus)?)?,
        PairKind::Vu => pair_vu(c, &parse_shuf(c, left, Sign::Plus)?, &parse_free(c, right)?)?,
        PairKind::Uu => pair_uu(c, &parse_free(c, left)?, &parse_free(c, right)?)?,
    };
    Ok(Output::ok(json!({ "value": value.to_string() })))
}

pub fn lead_cmd(c: &CartanMatrix, elem: &str) -> CliResult {
    let r = parse_shuf(c, elem, Sign::Minus)?;
    let w = leading_word(&r)?;
    Ok(Output::ok(json!({ "word": w.render(c) })))
}

pub fn assoc_cmd(c: &CartanMatrix, word: &str) -> CliResult {
    let w = Word::parse(c, &read_arg(word)?)?;
    Ok(Output::ok(shuf_to_json(c, &associated_polynomial(c.rank(), &w)?)))
}
