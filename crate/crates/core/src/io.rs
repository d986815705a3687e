//! JSON files for functionals and shard vectors.
//!
//! `{"schema":1,"support":"(12|34)","entries":{"[+-+-]":"1/2"}}`; an entry
//! key is the shard's sign string in canonical key order. Missing entries
//! are zero.

use std::collections::HashMap;

use num_traits::Zero;
use serde_json::{Map, Value};

use crate::arrangement::{Atlas, ShardBasis};
use crate::calculus::{Functional, ShardVector};
use crate::error::{Error, Result};
use crate::exactla::{Rational, SparseVector};
use crate::ground::GroundSet;

pub const SCHEMA: u64 = 1;

fn document(ground: &GroundSet, basis: &ShardBasis, entries: Map<String, Value>) -> Value {
    let mut obj = Map::new();
    obj.insert("schema".into(), Value::from(SCHEMA));
    obj.insert(
        "support".into(),
        Value::String(ground.format_partition(basis.partition())),
    );
    obj.insert("entries".into(), Value::Object(entries));
    Value::Object(obj)
}

/// Every value, zeros included, in basis order.
pub fn functional_to_json(ground: &GroundSet, f: &Functional) -> Value {
    let entries = f
        .basis()
        .shards()
        .iter()
        .zip(f.values())
        .map(|(x, v)| (x.sign_string(), Value::String(v.to_string())))
        .collect();
    document(ground, f.basis(), entries)
}

/// Nonzero coefficients in basis order.
pub fn vector_to_json(ground: &GroundSet, v: &ShardVector) -> Value {
    let entries = v
        .terms()
        .map(|(x, c)| (x.sign_string(), Value::String(c.to_string())))
        .collect();
    document(ground, v.basis(), entries)
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    text.trim()
        .parse::<Rational>()
        .map_err(|_| Error::Format(format!("not a rational number: {:?}", text)))
}

fn read_entries(
    atlas: &Atlas,
    ground: &GroundSet,
    doc: &Value,
) -> Result<(std::sync::Arc<ShardBasis>, SparseVector)> {
    if let Some(s) = doc.get("schema") {
        if s.as_u64() != Some(SCHEMA) {
            return Err(Error::Format(format!("unsupported schema {}", s)));
        }
    }
    let support = doc
        .get("support")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Format("missing \"support\"".into()))?;
    let p = ground.parse_partition(support)?;
    let basis = atlas.basis(&p)?;
    let index: HashMap<String, usize> = basis
        .shards()
        .iter()
        .enumerate()
        .map(|(i, x)| (x.sign_string(), i))
        .collect();
    let entries = doc
        .get("entries")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Format("missing \"entries\"".into()))?;
    let mut v = SparseVector::new();
    for (key, val) in entries {
        let i = *index
            .get(key)
            .ok_or_else(|| Error::Format(format!("{} is not a shard of {}", key, support)))?;
        let c = match val {
            Value::String(s) => parse_rational(s)?,
            Value::Number(n) if n.is_i64() => Rational::from_integer(n.as_i64().unwrap().into()),
            _ => return Err(Error::Format(format!("bad coefficient for {}", key))),
        };
        if !c.is_zero() {
            v.set(i, c);
        }
    }
    Ok((basis, v))
}

pub fn functional_from_json(atlas: &Atlas, ground: &GroundSet, doc: &Value) -> Result<Functional> {
    let (basis, v) = read_entries(atlas, ground, doc)?;
    let values = v.to_dense(basis.len());
    Functional::new(basis, values)
}

pub fn vector_from_json(atlas: &Atlas, ground: &GroundSet, doc: &Value) -> Result<ShardVector> {
    let (basis, v) = read_entries(atlas, ground, doc)?;
    ShardVector::from_coeffs(basis, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{rat, ratio};
    use crate::ground::Partition;

    #[test]
    fn round_trips() {
        let atlas = Atlas::new(3).unwrap();
        let gr = GroundSet::numeric(3).unwrap();
        let b = atlas.basis(&Partition::one_block(3)).unwrap();
        let f = Functional::from_fn(b.clone(), |x| ratio(x.minus_bits() as i64, 3));
        let j = functional_to_json(&gr, &f);
        assert_eq!(functional_from_json(&atlas, &gr, &j).unwrap(), f);
        let mut c = SparseVector::new();
        c.set(1, ratio(-1, 2));
        c.set(4, rat(3));
        let v = ShardVector::from_coeffs(b, c).unwrap();
        let j = vector_to_json(&gr, &v);
        assert_eq!(j["entries"].as_object().unwrap().len(), 2);
        assert_eq!(vector_from_json(&atlas, &gr, &j).unwrap(), v);
    }

    #[test]
    fn rejects_bad_input() {
        let atlas = Atlas::new(2).unwrap();
        let gr = GroundSet::numeric(2).unwrap();
        for doc in [
            serde_json::json!({"support": "(12)", "entries": {"[0]": "1"}}),
            serde_json::json!({"support": "(12)", "entries": {"[+]": "x"}}),
            serde_json::json!({"schema": 2, "support": "(12)", "entries": {}}),
            serde_json::json!({"entries": {}}),
        ] {
            assert!(vector_from_json(&atlas, &gr, &doc).is_err(), "{}", doc);
        }
        let ok = serde_json::json!({"support": "(12)", "entries": {"[+]": 2}});
        let f = functional_from_json(&atlas, &gr, &ok).unwrap();
        assert_eq!(f.values().iter().filter(|v| !v.is_zero()).count(), 1);
    }
}
