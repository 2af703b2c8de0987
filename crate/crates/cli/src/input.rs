//! Parsing of ring, ideal, module, complex and matrix arguments.

use std::fs;

use koszulkit::completion::ModuleSpec;
use koszulkit::complexes::FreeComplex;
use koszulkit::rings::{Elem, IdealSpec, Mat, RingDescriptor, RingElement, RingOps};
use serde_json::Value;

/// A bad argument, reported against the flag that carried it.
#[derive(Debug)]
pub struct Usage {
    pub flag: &'static str,
    pub message: String,
}

impl Usage {
    pub fn new(flag: &'static str, message: impl Into<String>) -> Self {
        Usage { flag, message: message.into() }
    }
}

pub type Parsed<T> = Result<T, Usage>;

fn number(flag: &'static str, text: &str) -> Parsed<u64> {
    text.trim().parse().map_err(|_| Usage::new(flag, format!("{text:?} is not a positive integer")))
}

/// Inline JSON, or a path to a JSON file.
pub fn json_arg(flag: &'static str, text: &str) -> Parsed<Value> {
    let trimmed = text.trim_start();
    let raw = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        text.to_string()
    } else {
        fs::read_to_string(text).map_err(|e| Usage::new(flag, format!("cannot read {text}: {e}")))?
    };
    serde_json::from_str(&raw).map_err(|e| Usage::new(flag, format!("invalid JSON: {e}")))
}

/// `Z`, `Q`, `Z/12`, `F5`, `Z_(5)`, `exa-no` (with `--p`), or a JSON descriptor.
pub fn ring(text: &str, p: u64) -> Parsed<RingDescriptor> {
    const FLAG: &str = "--ring";
    let t = text.trim();
    let lib = |r: koszulkit::Result<RingDescriptor>| r.map_err(|e| Usage::new(FLAG, e.to_string()));
    if t.starts_with('{') || t.ends_with(".json") {
        return lib(RingDescriptor::from_json(&json_arg(FLAG, t)?));
    }
    match t {
        "Z" => return Ok(RingDescriptor::Integers),
        "Q" => return Ok(RingDescriptor::Rationals),
        "exa-no" | "prufer" => return lib(RingDescriptor::prufer_extension(p)),
        "Fp" => return lib(RingDescriptor::prime_field(p)),
        "Zp" | "Z_(p)" => return lib(RingDescriptor::localized(p)),
        _ => {}
    }
    if let Some(m) = t.strip_prefix("Z/") {
        return lib(RingDescriptor::integers_mod(number(FLAG, m)?));
    }
    if let Some(q) = t.strip_prefix("Z_(").and_then(|r| r.strip_suffix(')')) {
        return lib(RingDescriptor::localized(number(FLAG, q)?));
    }
    if let Some(q) = t.strip_prefix("F_").or_else(|| t.strip_prefix('F')) {
        return lib(RingDescriptor::prime_field(number(FLAG, q)?));
    }
    Err(Usage::new(FLAG, format!("unknown ring {t:?} (try Z, Q, Z/12, F5, Z_(5), exa-no)")))
}

/// Element text with a bare `p` read as `--p` when the ring has no prime of its own.
fn element_text(ring: &RingDescriptor, token: &str, p: u64) -> String {
    if ring.distinguished_prime().is_some() {
        token.to_string()
    } else {
        token.replace('p', &p.to_string())
    }
}

pub fn element(flag: &'static str, ring: &RingDescriptor, token: &str, p: u64) -> Parsed<RingElement> {
    RingElement::parse(ring, &element_text(ring, token, p)).map_err(|e| Usage::new(flag, e.to_string()))
}

/// Comma-separated generators.
pub fn ideal(ring: &RingDescriptor, text: &str, p: u64) -> Parsed<IdealSpec> {
    let gens =
        text.split(',').map(|t| element("--s", ring, t.trim(), p).map(|e| e.value)).collect::<Parsed<Vec<Elem>>>()?;
    IdealSpec::new(ring.clone(), gens).map_err(|e| Usage::new("--s", e.to_string()))
}

/// `R` (the ring itself), `free:n`, `cyclic:d`, `Q`, `prufer`, `Z/k`, or
/// `{"relations": [[…], …]}` for a presented module.
pub fn module(ring: &RingDescriptor, text: &str, p: u64) -> Parsed<ModuleSpec> {
    const FLAG: &str = "--module";
    let t = text.trim();
    if t == "R" || t == ring.to_string() {
        return Ok(ModuleSpec::Regular(ring.clone()));
    }
    match t {
        "Q" => return Ok(ModuleSpec::Fractions(ring.clone())),
        "prufer" | "Q/Z_(p)" => {
            let prime = ring.distinguished_prime().unwrap_or_else(|| p.into());
            return Ok(ModuleSpec::Prufer { ring: ring.clone(), p: prime });
        }
        _ => {}
    }
    if let Some(n) = t.strip_prefix("free:") {
        return Ok(ModuleSpec::free(ring, number(FLAG, n)? as usize));
    }
    if let Some(d) = t.strip_prefix("cyclic:").or_else(|| t.strip_prefix("Z/")) {
        let d = element(FLAG, ring, d, p)?;
        return Ok(ModuleSpec::cyclic(ring, &d.value));
    }
    if t.starts_with('{') || t.ends_with(".json") {
        let v = json_arg(FLAG, t)?;
        let rows = v.get("relations").ok_or_else(|| Usage::new(FLAG, "expected a \"relations\" matrix"))?;
        let generators = v.get("generators").and_then(Value::as_u64).map(|g| g as usize);
        let relations = matrix(FLAG, ring, rows, generators, p)?;
        return Ok(ModuleSpec::Presented { ring: ring.clone(), relations });
    }
    Err(Usage::new(FLAG, format!("unknown module {t:?} (try R, free:2, cyclic:25, Q, prufer)")))
}

/// A matrix given as an array of rows; `rows` fixes the shape of an empty relation list.
pub fn matrix(flag: &'static str, ring: &RingDescriptor, v: &Value, rows: Option<usize>, p: u64) -> Parsed<Mat<Elem>> {
    let bad = || Usage::new(flag, "matrix must be an array of equal-length rows");
    let list = v.as_array().ok_or_else(bad)?;
    let mut out = Vec::new();
    for row in list {
        let cells = row.as_array().ok_or_else(bad)?;
        let mut parsed = Vec::new();
        for c in cells {
            let text = match c {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(bad()),
            };
            parsed.push(element(flag, ring, &text, p)?.value);
        }
        out.push(parsed);
    }
    let cols = out.first().map_or(0, Vec::len);
    if out.is_empty() {
        let n = rows.unwrap_or(0);
        return Ok(Mat::from_fn(n, 0, |_, _| ring.from_int(&0.into())));
    }
    Mat::from_rows(out, cols).map_err(|e| Usage::new(flag, e.to_string()))
}

/// A complex, or any report that carries one under `"complex"`.
pub fn complex(flag: &'static str, text: &str) -> Parsed<FreeComplex> {
    let v = json_arg(flag, text)?;
    let v = v.get("complex").unwrap_or(&v);
    FreeComplex::from_json(v).map_err(|e| Usage::new(flag, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_names() {
        assert_eq!(ring("Z", 5).unwrap(), RingDescriptor::Integers);
        assert_eq!(ring("Z/12", 5).unwrap(), RingDescriptor::integers_mod(12).unwrap());
        assert_eq!(ring("Z_(7)", 5).unwrap(), RingDescriptor::localized(7).unwrap());
        assert_eq!(ring("F3", 5).unwrap(), RingDescriptor::prime_field(3).unwrap());
        assert_eq!(ring("exa-no", 3).unwrap(), RingDescriptor::prufer_extension(3).unwrap());
        assert_eq!(ring(r#"{"kind":"Zmod","m":9}"#, 5).unwrap(), RingDescriptor::integers_mod(9).unwrap());
        assert_eq!(ring("Z/x", 5).unwrap_err().flag, "--ring");
    }

    #[test]
    fn bare_p_follows_the_flag_over_z() {
        let z = RingDescriptor::Integers;
        let i = ideal(&z, "p, p^2", 3).unwrap();
        assert_eq!(i.generators, vec![Elem::int(3), Elem::int(9)]);
        let local = RingDescriptor::localized(7).unwrap();
        assert_eq!(ideal(&local, "p", 3).unwrap().generators[0], local.from_int(&7.into()));
    }

    #[test]
    fn modules() {
        let z = RingDescriptor::Integers;
        assert_eq!(module(&z, "Z", 5).unwrap(), ModuleSpec::Regular(z.clone()));
        assert_eq!(module(&z, "Z/25", 5).unwrap(), ModuleSpec::cyclic(&z, &Elem::int(25)));
        let m = module(&z, r#"{"relations": [[2, 0], [0, 3]]}"#, 5).unwrap();
        assert!(matches!(m, ModuleSpec::Presented { .. }));
        assert_eq!(module(&z, "nope", 5).unwrap_err().flag, "--module");
    }
}
