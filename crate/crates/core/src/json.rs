//! JSON forms of the exchanged values. Vertex labels come from the Cartan
//! matrix, so every conversion of a colored object takes one.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::cartan::CartanMatrix;
use crate::error::{AlgebraError, Result};
use crate::freealg::{FreeElem, Word};
use crate::multipoly::{MLaurent, Mono, VarId};
use crate::scalars::{QPoly, QRat, Rat};
use crate::shuffle::{GeomElem, ShufElem, Sign};

fn bad(what: &str, v: &Value) -> AlgebraError {
    AlgebraError::Parse(format!("expected {what}, found {v}"))
}

fn qpoly_to_json(p: &QPoly) -> Value {
    Value::Array(p.terms().map(|(e, c)| json!([e, c.to_string()])).collect())
}

fn qpoly_from_json(v: &Value) -> Result<QPoly> {
    let arr = v.as_array().ok_or_else(|| bad("a list of [exponent, coefficient] pairs", v))?;
    let terms = arr
        .iter()
        .map(|t| {
            let pair = t
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| bad("[exponent, coefficient]", t))?;
            let e = pair[0]
                .as_i64()
                .and_then(|e| i32::try_from(e).ok())
                .ok_or_else(|| bad("an integer exponent", &pair[0]))?;
            let c = match &pair[1] {
                Value::String(s) => Rat::parse(s)?,
                Value::Number(n) => Rat::from_int(n.as_i64().ok_or_else(|| bad("an integer", &pair[1]))?),
                other => return Err(bad("a rational string", other)),
            };
            Ok((e, c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QPoly::from_terms(terms))
}

pub fn qrat_to_json(x: &QRat) -> Value {
    json!({ "num": qpoly_to_json(x.numer()), "den": qpoly_to_json(x.denom()) })
}

pub fn qrat_from_json(v: &Value) -> Result<QRat> {
    match v {
        Value::Number(n) => Ok(QRat::from_int(n.as_i64().ok_or_else(|| bad("an integer", v))?)),
        Value::String(s) => Ok(QRat::from_rat(Rat::parse(s)?)),
        Value::Object(o) => {
            let num = qpoly_from_json(o.get("num").ok_or_else(|| bad("a \"num\" field", v))?)?;
            let den = match o.get("den") {
                Some(d) => qpoly_from_json(d)?,
                None => QPoly::one(),
            };
            QRat::from_fraction(num, den)
        }
        other => Err(bad("a QRat object", other)),
    }
}

fn var_key(c: &CartanMatrix, v: VarId) -> String {
    format!("{}.{}", c.label(v.color as usize), v.slot)
}

fn parse_var_key(c: &CartanMatrix, key: &str) -> Result<VarId> {
    let (label, slot) = key
        .rsplit_once('.')
        .ok_or_else(|| AlgebraError::Parse(format!("variable key {key:?} is not of the form i.a")))?;
    let color = c.index_of(label)? as u32;
    let slot: u32 = slot.parse().map_err(|e| AlgebraError::Parse(format!("slot in {key:?}: {e}")))?;
    if slot == 0 {
        return Err(AlgebraError::Parse(format!("slots start at 1 in {key:?}")));
    }
    Ok(VarId::new(color, slot))
}

pub fn mlaurent_to_json(c: &CartanMatrix, p: &MLaurent) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, x)| {
            let mono: Map<String, Value> = m.iter().map(|(v, e)| (var_key(c, v), json!(e))).collect();
            json!({ "m": mono, "c": qrat_to_json(x) })
        })
        .collect();
    json!({ "terms": terms })
}

pub fn mlaurent_from_json(c: &CartanMatrix, v: &Value) -> Result<MLaurent> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("{\"terms\": [...]}", v))?;
    let parsed = terms
        .iter()
        .map(|t| {
            let m = t.get("m").and_then(Value::as_object).ok_or_else(|| bad("a monomial object", t))?;
            let mono = Mono::from_pairs(
                m.iter()
                    .map(|(k, e)| {
                        let e = e
                            .as_i64()
                            .and_then(|e| i32::try_from(e).ok())
                            .ok_or_else(|| bad("an integer exponent", e))?;
                        Ok((parse_var_key(c, k)?, e))
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
            let coef = qrat_from_json(t.get("c").ok_or_else(|| bad("a coefficient", t))?)?;
            Ok((mono, coef))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MLaurent::from_terms(parsed))
}

fn dims_to_json(c: &CartanMatrix, n: &[usize]) -> Value {
    let map: Map<String, Value> = n
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| (c.label(i).to_string(), json!(k)))
        .collect();
    Value::Object(map)
}

fn dims_from_json(c: &CartanMatrix, v: &Value) -> Result<Vec<usize>> {
    let map = v.as_object().ok_or_else(|| bad("a dimension object", v))?;
    let mut n = vec![0; c.rank()];
    for (label, k) in map {
        n[c.index_of(label)?] = k.as_u64().ok_or_else(|| bad("a count", k))? as usize;
    }
    Ok(n)
}

pub fn shuf_to_json(c: &CartanMatrix, r: &ShufElem) -> Value {
    json!({ "sign": r.sign.to_string(), "n": dims_to_json(c, &r.n), "numerator": mlaurent_to_json(c, &r.numerator) })
}

pub fn shuf_from_json(c: &CartanMatrix, v: &Value) -> Result<ShufElem> {
    let sign = match v.get("sign").and_then(Value::as_str) {
        Some("+") | None => Sign::Plus,
        Some("-") => Sign::Minus,
        Some(other) => return Err(AlgebraError::Parse(format!("sign must be \"+\" or \"-\", found {other:?}"))),
    };
    let n = dims_from_json(c, v.get("n").ok_or_else(|| bad("a dimension vector \"n\"", v))?)?;
    let numerator = mlaurent_from_json(c, v.get("numerator").ok_or_else(|| bad("a numerator", v))?)?;
    for var in numerator.variables() {
        if var.slot as usize > n[var.color as usize] {
            return Err(AlgebraError::InvalidArgument(format!(
                "variable {} exceeds the dimension vector",
                var_key(c, var)
            )));
        }
    }
    Ok(ShufElem::new(sign, n, numerator))
}

pub fn geom_to_json(c: &CartanMatrix, g: &GeomElem) -> Value {
    json!({ "n": dims_to_json(c, &g.n), "numerator": mlaurent_to_json(c, &g.numerator) })
}

pub fn free_to_json(c: &CartanMatrix, x: &FreeElem) -> Value {
    let terms: Vec<Value> = x
        .terms()
        .map(|(w, k)| {
            let letters: Vec<Value> = w.0.iter().map(|l| json!(format!("{}:{}", c.label(l.color), l.exp))).collect();
            json!({ "word": letters, "c": qrat_to_json(k) })
        })
        .collect();
    json!({ "terms": terms })
}

pub fn free_from_json(c: &CartanMatrix, v: &Value) -> Result<FreeElem> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("{\"terms\": [...]}", v))?;
    let parsed = terms
        .iter()
        .map(|t| {
            let letters = t.get("word").and_then(Value::as_array).ok_or_else(|| bad("a word", t))?;
            let text = letters
                .iter()
                .map(|l| l.as_str().ok_or_else(|| bad("a letter \"i:k\"", l)))
                .collect::<Result<Vec<_>>>()?
                .join(",");
            let coef = qrat_from_json(t.get("c").ok_or_else(|| bad("a coefficient", t))?)?;
            Ok((Word::parse(c, &text)?, coef))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FreeElem::from_terms(parsed))
}

/// Human-readable rendering of a free-algebra element with vertex labels.
pub fn free_display(c: &CartanMatrix, x: &FreeElem) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.terms()
        .map(|(w, k)| format!("({k})*[{}]", w.render(c)))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Groups values by key for deterministic reports.
pub fn sorted_object(entries: impl IntoIterator<Item = (String, Value)>) -> Value {
    Value::Object(entries.into_iter().collect::<BTreeMap<_, _>>().into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let c = CartanMatrix::a2();
        let x = &(&QRat::q_pow(3) + &QRat::from_rat(Rat::new(-5, 7))) * &(&QRat::one() + &QRat::q_pow(2)).recip().unwrap();
        assert_eq!(qrat_from_json(&qrat_to_json(&x)).unwrap(), x);
        let p = &MLaurent::binomial(VarId::new(0, 1), x.clone(), VarId::new(1, 2)) * &MLaurent::var(VarId::new(0, 2));
        let r = ShufElem::new(Sign::Minus, vec![2, 2], p);
        let text = serde_json::to_string(&shuf_to_json(&c, &r)).unwrap();
        assert_eq!(shuf_from_json(&c, &serde_json::from_str(&text).unwrap()).unwrap(), r);
        let f = FreeElem::from_terms([(Word::new([(0, 1), (1, -2)]), x), (Word::new([(1, 0)]), QRat::one())]);
        assert_eq!(free_from_json(&c, &free_to_json(&c, &f)).unwrap(), f);
    }

    #[test]
    fn rejects_malformed() {
        let c = CartanMatrix::a2();
        assert!(qrat_from_json(&json!({"num": [[0, "1/0"]]})).is_err());
        assert!(mlaurent_from_json(&c, &json!({"terms": [{"m": {"7.1": 1}, "c": 1}]})).is_err());
        assert!(shuf_from_json(&c, &json!({"sign": "*", "n": {}, "numerator": {"terms": []}})).is_err());
    }
}
