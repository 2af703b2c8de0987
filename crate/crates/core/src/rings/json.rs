//! JSON forms of ring descriptors and invariants.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use super::module::StructuredModuleDescriptor;
use super::{Elem, Mat, ModuleInvariant, RingDescriptor, Validity};
use crate::error::{Error, Result};

pub(crate) fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => Value::String(n.to_string()),
    }
}

pub(crate) fn int_from_json(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().map_err(|_| Error::Parse(format!("{what}: {n} is not an integer"))),
        Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("{what}: {s:?} is not an integer"))),
        other => Err(Error::Parse(format!("{what}: expected an integer, got {other}"))),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

pub(crate) fn matrix_from_json(ring: &RingDescriptor, v: &Value, rows: usize, cols: usize) -> Result<Mat<Elem>> {
    let items = v.as_array().ok_or_else(|| Error::Parse(format!("expected a matrix, got {v}")))?;
    let mut out = Vec::with_capacity(items.len());
    for row in items {
        let row = row.as_array().ok_or_else(|| Error::Parse(format!("expected a matrix row, got {row}")))?;
        out.push(row.iter().map(|x| Elem::from_json(ring, x)).collect::<Result<Vec<_>>>()?);
    }
    if out.len() != rows {
        return Err(Error::DimensionMismatch(format!("matrix has {} rows, expected {rows}", out.len())));
    }
    Mat::from_rows(out, cols)
}

pub(crate) fn matrix_to_json(ring: &RingDescriptor, m: &Mat<Elem>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| x.to_json(ring)).collect())).collect())
}

impl RingDescriptor {
    pub fn to_json(&self) -> Value {
        match self {
            RingDescriptor::Integers => json!({"kind": "Z"}),
            RingDescriptor::IntegersMod(m) => json!({"kind": "Zmod", "m": int_json(m)}),
            RingDescriptor::Rationals => json!({"kind": "Q"}),
            RingDescriptor::PrimeField(p) => json!({"kind": "Fp", "p": int_json(p)}),
            RingDescriptor::LocalizedAtPrime(p) => json!({"kind": "ZLoc", "p": int_json(p)}),
            RingDescriptor::TruncatedCompletion(t) => json!({
                "kind": "TruncComp",
                "base": t.base.to_json(),
                "ideal": t.ideal.iter().map(|g| g.to_json(&t.base)).collect::<Vec<_>>(),
                "precision": t.precision,
            }),
            RingDescriptor::SquareZero(sz) => {
                let module = match &sz.module {
                    StructuredModuleDescriptor::Prufer(p) => json!({"kind": "Prufer", "p": int_json(p)}),
                    StructuredModuleDescriptor::FinitelyPresented(fp) => json!({
                        "kind": "FinitelyPresented",
                        "generators": fp.relations.rows(),
                        "relations": matrix_to_json(&fp.base, &fp.relations),
                    }),
                };
                json!({"kind": "SquareZero", "base": sz.base.to_json(), "module": module})
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse(format!("expected a ring object, got {v}")))?;
        let kind = field(obj, "kind")?.as_str().ok_or_else(|| Error::Parse("ring kind must be a string".into()))?;
        match kind {
            "Z" => Ok(RingDescriptor::Integers),
            "Zmod" => RingDescriptor::integers_mod(int_from_json(field(obj, "m")?, "m")?),
            "Q" => Ok(RingDescriptor::Rationals),
            "Fp" => RingDescriptor::prime_field(int_from_json(field(obj, "p")?, "p")?),
            "ZLoc" => RingDescriptor::localized(int_from_json(field(obj, "p")?, "p")?),
            "TruncComp" => {
                let base = RingDescriptor::from_json(field(obj, "base")?)?;
                let ideal = field(obj, "ideal")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("ideal must be a list".into()))?
                    .iter()
                    .map(|g| Elem::from_json(&base, g))
                    .collect::<Result<Vec<_>>>()?;
                let precision = field(obj, "precision")?
                    .as_u64()
                    .and_then(|n| u32::try_from(n).ok())
                    .ok_or_else(|| Error::Parse("precision must be a positive integer".into()))?;
                RingDescriptor::truncated_completion(base, ideal, precision)
            }
            "SquareZero" => {
                let base = RingDescriptor::from_json(field(obj, "base")?)?;
                let m =
                    field(obj, "module")?.as_object().ok_or_else(|| Error::Parse("module must be an object".into()))?;
                let module = match field(m, "kind")?.as_str() {
                    Some("Prufer") => StructuredModuleDescriptor::Prufer(int_from_json(field(m, "p")?, "p")?),
                    Some("FinitelyPresented") => {
                        let rows = field(m, "generators")?
                            .as_u64()
                            .ok_or_else(|| Error::Parse("generators must be a count".into()))?
                            as usize;
                        let rel = field(m, "relations")?;
                        let cols = rel.as_array().and_then(|r| r.first()).and_then(Value::as_array).map_or(0, Vec::len);
                        let relations = matrix_from_json(&base, rel, rows, cols)?;
                        StructuredModuleDescriptor::finitely_presented(&base, relations)?
                    }
                    other => return Err(Error::Parse(format!("unknown module kind {other:?}"))),
                };
                RingDescriptor::square_zero(base, module)
            }
            other => Err(Error::Parse(format!("unknown ring kind {other:?}"))),
        }
    }
}

impl ModuleInvariant {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "free": self.free_rank,
            "torsion": self.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        });
        if let Validity::ModuloIdealPower(n) = self.validity {
            v["valid_mod_I_power"] = json!(n);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_round_trip() {
        let zl = RingDescriptor::localized(5).unwrap();
        let rings = vec![
            RingDescriptor::Integers,
            RingDescriptor::integers_mod(12).unwrap(),
            RingDescriptor::Rationals,
            RingDescriptor::prime_field(7).unwrap(),
            zl.clone(),
            RingDescriptor::truncated_completion(zl.clone(), vec![zl.int(5)], 8).unwrap(),
            RingDescriptor::prufer_extension(5).unwrap(),
        ];
        for r in rings {
            assert_eq!(RingDescriptor::from_json(&r.to_json()).unwrap(), r);
        }
        let spec: Value =
            serde_json::from_str(r#"{"kind":"TruncComp","base":{"kind":"ZLoc","p":5},"ideal":["p"],"precision":8}"#)
                .unwrap();
        assert!(matches!(RingDescriptor::from_json(&spec).unwrap(), RingDescriptor::TruncatedCompletion(_)));
        assert!(RingDescriptor::from_json(&json!({"kind": "Zmod", "m": 0})).is_err());
    }
}
