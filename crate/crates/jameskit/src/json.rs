//! JSON wire formats.
//!
//! Vectors: `{"mode":"exact","coords":{"1":"2/3","4":"-1/3"}}`, with float
//! mode using JSON numbers. Intervals: `[lo,hi]`, `{"tail":k}` or `"omega"`.
//! Bidual vectors: `{"coords":{…},"omega":"2/3"}`. Functionals:
//! `{"terms":[{"interval":[1,2],"alpha":"2/3"}, …]}`. Exact scalars travel as
//! `"p/q"` strings so round-trips stay exact.

use serde_json::{json, Map, Value};

use crate::bidual::BidualVector;
use crate::dual::DualFunctional;
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalFamily};
use crate::scalar::{parse_rational, Mode, Scalar};
use crate::vector::JVector;

pub fn scalar_to_json(s: &Scalar) -> Result<Value> {
    match s {
        Scalar::Exact(r) => Ok(Value::String(r.to_string())),
        Scalar::Float(v) => serde_json::Number::from_f64(*v)
            .map(Value::Number)
            .ok_or_else(|| Error::Internal(format!("non-finite float {v}"))),
    }
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => Ok(Scalar::Exact(parse_rational(s)?)),
        Value::Number(n) => match n.as_f64() {
            Some(f) if f.is_finite() => Ok(Scalar::Float(f)),
            _ => Err(Error::Parse(format!("non-finite number {n}"))),
        },
        other => Err(Error::Parse(format!(
            "expected a rational string or a number, got {other}"
        ))),
    }
}

fn mode_to_str(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Float => "float",
    }
}

fn mode_from_str(s: &str) -> Result<Mode> {
    match s {
        "exact" => Ok(Mode::Exact),
        "float" => Ok(Mode::Float),
        other => Err(Error::Parse(format!("unknown mode {other:?}"))),
    }
}

fn coords_to_json(x: &JVector) -> Result<Value> {
    let mut map = Map::new();
    for (idx, value) in x.coords() {
        map.insert(idx.to_string(), scalar_to_json(value)?);
    }
    Ok(Value::Object(map))
}

fn coords_from_json(v: &Value) -> Result<Vec<(u32, Scalar)>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("coords must be an object".into()))?;
    let mut out = Vec::with_capacity(obj.len());
    for (key, value) in obj {
        let idx: u32 = key
            .parse()
            .map_err(|_| Error::Parse(format!("bad index key {key:?}")))?;
        out.push((idx, scalar_from_json(value)?));
    }
    Ok(out)
}

pub fn vector_to_json(x: &JVector) -> Result<Value> {
    Ok(json!({
        "mode": mode_to_str(x.mode()),
        "coords": coords_to_json(x)?,
    }))
}

pub fn vector_from_json(v: &Value) -> Result<JVector> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("vector must be an object".into()))?;
    let mode = obj
        .get("mode")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("vector needs a \"mode\" field".into()))?;
    let mode = mode_from_str(mode)?;
    let coords = coords_from_json(
        obj.get("coords")
            .ok_or_else(|| Error::Parse("vector needs a \"coords\" field".into()))?,
    )?;
    JVector::from_coords(mode, coords)
}

pub fn interval_to_json(i: &Interval) -> Value {
    match i {
        Interval::Finite { lo, hi } => json!([lo, hi]),
        Interval::TailOmega { start } => json!({ "tail": start }),
        Interval::OmegaSingleton => json!("omega"),
    }
}

pub fn interval_from_json(v: &Value) -> Result<Interval> {
    match v {
        Value::Array(parts) if parts.len() == 2 => {
            let lo = parts[0]
                .as_u64()
                .ok_or_else(|| Error::Parse("interval bounds must be integers".into()))?;
            let hi = parts[1]
                .as_u64()
                .ok_or_else(|| Error::Parse("interval bounds must be integers".into()))?;
            Interval::finite(
                u32::try_from(lo).map_err(|_| Error::InvalidIndex)?,
                u32::try_from(hi).map_err(|_| Error::InvalidIndex)?,
            )
        }
        Value::Object(obj) => {
            let start = obj
                .get("tail")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("tail interval needs integer \"tail\"".into()))?;
            Interval::tail(u32::try_from(start).map_err(|_| Error::InvalidIndex)?)
        }
        Value::String(s) if s == "omega" => Ok(Interval::omega()),
        other => Err(Error::Parse(format!("unrecognized interval {other}"))),
    }
}

pub fn family_to_json(f: &IntervalFamily) -> Value {
    Value::Array(f.iter().map(interval_to_json).collect())
}

pub fn family_from_json(v: &Value) -> Result<IntervalFamily> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("family must be an array".into()))?;
    IntervalFamily::new(arr.iter().map(interval_from_json).collect::<Result<_>>()?)
}

pub fn bidual_to_json(x: &BidualVector) -> Result<Value> {
    Ok(json!({
        "coords": coords_to_json(x.finite_part())?,
        "omega": scalar_to_json(x.omega_coef())?,
    }))
}

pub fn bidual_from_json(v: &Value) -> Result<BidualVector> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("bidual vector must be an object".into()))?;
    let omega = scalar_from_json(
        obj.get("omega")
            .ok_or_else(|| Error::Parse("bidual vector needs an \"omega\" field".into()))?,
    )?;
    let coords = coords_from_json(
        obj.get("coords")
            .ok_or_else(|| Error::Parse("bidual vector needs a \"coords\" field".into()))?,
    )?;
    // Mode is inferred from the scalar representations.
    let finite = JVector::from_coords(omega.mode(), coords)?;
    BidualVector::new(finite, omega)
}

pub fn functional_to_json(f: &DualFunctional) -> Result<Value> {
    let terms = f
        .terms()
        .iter()
        .map(|(interval, alpha)| {
            Ok(json!({
                "interval": interval_to_json(interval),
                "alpha": scalar_to_json(alpha)?,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "terms": terms }))
}

pub fn functional_from_json(v: &Value) -> Result<DualFunctional> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("functional must be an object".into()))?;
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("functional needs a \"terms\" array".into()))?;
    let terms = terms
        .iter()
        .map(|t| {
            let t = t
                .as_object()
                .ok_or_else(|| Error::Parse("each term must be an object".into()))?;
            let interval = interval_from_json(
                t.get("interval")
                    .ok_or_else(|| Error::Parse("term needs an \"interval\"".into()))?,
            )?;
            let alpha = scalar_from_json(
                t.get("alpha")
                    .ok_or_else(|| Error::Parse("term needs an \"alpha\"".into()))?,
            )?;
            Ok((interval, alpha))
        })
        .collect::<Result<Vec<_>>>()?;
    DualFunctional::new(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_round_trip() {
        let text = r#"{"mode":"exact","coords":{"1":"2/3","4":"-1/3"}}"#;
        let x = vector_from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(x.coeff(1), Scalar::ratio(2, 3));
        assert_eq!(x.coeff(4), Scalar::ratio(-1, 3));
        let emitted = vector_to_json(&x).unwrap();
        assert_eq!(vector_from_json(&emitted).unwrap(), x);

        let text = r#"{"mode":"float","coords":{"2":0.5}}"#;
        let x = vector_from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(x.mode(), Mode::Float);
        let emitted = vector_to_json(&x).unwrap();
        assert_eq!(vector_from_json(&emitted).unwrap(), x);
    }

    #[test]
    fn vector_rejects_inconsistent_mode() {
        let text = r#"{"mode":"exact","coords":{"1":0.5}}"#;
        assert!(vector_from_json(&serde_json::from_str(text).unwrap()).is_err());
        let text = r#"{"coords":{"1":"1"}}"#;
        assert!(vector_from_json(&serde_json::from_str(text).unwrap()).is_err());
    }

    #[test]
    fn interval_shapes() {
        for (text, expected) in [
            ("[1,3]", Interval::finite(1, 3).unwrap()),
            ("{\"tail\":7}", Interval::tail(7).unwrap()),
            ("\"omega\"", Interval::omega()),
        ] {
            let v: Value = serde_json::from_str(text).unwrap();
            let i = interval_from_json(&v).unwrap();
            assert_eq!(i, expected);
            assert_eq!(interval_from_json(&interval_to_json(&i)).unwrap(), i);
        }
        assert!(interval_from_json(&json!([3, 1])).is_err());
    }

    #[test]
    fn functional_round_trip() {
        let text = r#"{"terms":[{"interval":[1,2],"alpha":"2/3"},{"interval":{"tail":7},"alpha":"-1/3"}]}"#;
        let f = functional_from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(f.terms().len(), 2);
        let emitted = functional_to_json(&f).unwrap();
        assert_eq!(functional_from_json(&emitted).unwrap(), f);
    }

    #[test]
    fn bidual_round_trip() {
        let text = r#"{"coords":{"1":"2/3","2":"-1/3"},"omega":"2/3"}"#;
        let x = bidual_from_json(&serde_json::from_str(text).unwrap()).unwrap();
        assert_eq!(x.omega_coef(), &Scalar::ratio(2, 3));
        let emitted = bidual_to_json(&x).unwrap();
        assert_eq!(bidual_from_json(&emitted).unwrap(), x);
    }
}
