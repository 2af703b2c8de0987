use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::rings::json::{matrix_from_json, matrix_to_json};
use crate::rings::{Mat, RingDescriptor};

fn degree_key(k: &str) -> Result<i64> {
    k.trim().parse().map_err(|_| Error::Parse(format!("{k:?} is not a degree")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Parse(format!("{what} must be an object")))
}

impl FreeComplex {
    pub fn to_json(&self) -> Value {
        let ranks: Map<String, Value> = self.ranks().into_iter().map(|(i, r)| (i.to_string(), json!(r))).collect();
        let (lo, hi) = self.range();
        let diffs: Map<String, Value> =
            (lo + 1..=hi).map(|i| (i.to_string(), matrix_to_json(self.ring(), &self.differential(i)))).collect();
        json!({"ring": self.ring().to_json(), "range": [lo, hi], "ranks": ranks, "differentials": diffs})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = object(v, "complex")?;
        let ring = RingDescriptor::from_json(obj.get("ring").ok_or_else(|| Error::Parse("missing ring".into()))?)?;
        let range = obj
            .get("range")
            .and_then(Value::as_array)
            .filter(|r| r.len() == 2)
            .ok_or_else(|| Error::Parse("range must be [a, b]".into()))?;
        let lo = range[0].as_i64().ok_or_else(|| Error::Parse("range bounds must be integers".into()))?;
        let hi = range[1].as_i64().ok_or_else(|| Error::Parse("range bounds must be integers".into()))?;
        if hi < lo {
            return Err(Error::InvalidComplex(format!("empty degree range [{lo}, {hi}]")));
        }
        let mut ranks = vec![0usize; (hi - lo + 1) as usize];
        if let Some(r) = obj.get("ranks") {
            for (k, n) in object(r, "ranks")? {
                let i = degree_key(k)?;
                if i < lo || i > hi {
                    return Err(Error::InvalidComplex(format!("rank given for degree {i} outside the range")));
                }
                ranks[(i - lo) as usize] =
                    n.as_u64().ok_or_else(|| Error::Parse(format!("rank in degree {i} must be a count")))? as usize;
            }
        }
        let rank = |i: i64| if i < lo || i > hi { 0 } else { ranks[(i - lo) as usize] };
        let mut diffs = BTreeMap::new();
        if let Some(d) = obj.get("differentials") {
            for (k, m) in object(d, "differentials")? {
                let i = degree_key(k)?;
                diffs.insert(i, matrix_from_json(&ring, m, rank(i - 1), rank(i))?);
            }
        }
        FreeComplex::new(ring, lo, hi, ranks, diffs)
    }
}

impl ChainMap {
    pub fn to_json(&self) -> Value {
        let ring = self.source().ring();
        let comps: Map<String, Value> =
            self.components.iter().map(|(i, m)| (i.to_string(), matrix_to_json(ring, m))).collect();
        json!({"source": self.source().to_json(), "target": self.target().to_json(), "components": comps})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = object(v, "chain map")?;
        let source = FreeComplex::from_json(obj.get("source").ok_or_else(|| Error::Parse("missing source".into()))?)?;
        let target = FreeComplex::from_json(obj.get("target").ok_or_else(|| Error::Parse("missing target".into()))?)?;
        let mut comps: BTreeMap<i64, Mat<_>> = BTreeMap::new();
        if let Some(c) = obj.get("components") {
            for (k, m) in object(c, "components")? {
                let i = degree_key(k)?;
                comps.insert(i, matrix_from_json(source.ring(), m, target.rank(i), source.rank(i))?);
            }
        }
        ChainMap::new(source, target, comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{tensor, ChainMap};
    use crate::rings::Elem;

    #[test]
    fn complex_round_trip() {
        let z = RingDescriptor::Integers;
        let k = tensor(&FreeComplex::two_term(&z, &Elem::int(4)), &FreeComplex::two_term(&z, &Elem::int(6))).unwrap();
        assert_eq!(FreeComplex::from_json(&k.to_json()).unwrap(), k);
        let f = ChainMap::scalar(&k, &Elem::int(3));
        assert_eq!(ChainMap::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn reads_documented_layout() {
        let v: Value = serde_json::from_str(
            r#"{"ring":{"kind":"Z"},"range":[0,1],"ranks":{"0":1,"1":1},"differentials":{"1":[["5"]]}}"#,
        )
        .unwrap();
        let t = FreeComplex::from_json(&v).unwrap();
        assert_eq!(t, FreeComplex::two_term(&RingDescriptor::Integers, &Elem::int(5)));
        let bad: Value = serde_json::from_str(
            r#"{"ring":{"kind":"Z"},"range":[0,2],"ranks":{"0":1,"1":1,"2":1},"differentials":{"1":[["1"]],"2":[["1"]]}}"#,
        )
        .unwrap();
        assert!(FreeComplex::from_json(&bad).is_err());
    }
}
