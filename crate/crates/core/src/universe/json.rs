//! Canonical JSON encoding of values.
//!
//! Base values are integers, sequences are arrays, sets are
//! `{"set": [...]}` with members in sorted order, tables are arrays of
//! `[key, value]` pairs in key order, pairs are `{"pair": [a, b]}` and
//! streams are `{"stream": [prefix...], "tail": v}`. Decoding is directed by
//! the expected [`FinType`].

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::universe::types::FinType;
use crate::universe::value::{EvSeq, FunTable, Value};

pub fn encode(v: &Value) -> Json {
    match v {
        Value::Base(i) => json!(i),
        Value::Pair(a, b) => json!({ "pair": [encode(a), encode(b)] }),
        Value::Seq(items) => Json::Array(items.iter().map(encode).collect()),
        Value::Fun(t) => Json::Array(
            t.pairs()
                .map(|(k, v)| Json::Array(vec![encode(&k), encode(v)]))
                .collect(),
        ),
        Value::Set(s) => json!({ "set": s.iter().map(encode).collect::<Vec<_>>() }),
        Value::Stream(e) => json!({
            "stream": e.prefix().iter().map(encode).collect::<Vec<_>>(),
            "tail": encode(e.tail()),
        }),
    }
}

/// Decodes `j` as a value of `ty`; `at` names the location for diagnostics.
pub fn decode(ty: &FinType, j: &Json, at: &str) -> Result<Value> {
    let bad = |msg: String| Error::schema(at, msg);
    let v = match ty {
        FinType::Base(n) => {
            let i = j
                .as_u64()
                .ok_or_else(|| bad(format!("expected an integer below {n}, got {j}")))?;
            if i >= u64::from(*n) {
                return Err(bad(format!("{i} is out of range for {ty}")));
            }
            Value::Base(i as u32)
        }
        FinType::Prod(a, b) => {
            let arr = tagged_array(j, "pair", at)?;
            if arr.len() != 2 {
                return Err(bad("a pair needs exactly two components".into()));
            }
            Value::pair(
                decode(a, &arr[0], &format!("{at}.pair[0]"))?,
                decode(b, &arr[1], &format!("{at}.pair[1]"))?,
            )
        }
        FinType::Seq(x, m) => {
            let arr = j
                .as_array()
                .ok_or_else(|| bad(format!("expected a sequence array, got {j}")))?;
            if arr.len() > *m {
                return Err(bad(format!("sequence longer than {m}")));
            }
            Value::Seq(
                arr.iter()
                    .enumerate()
                    .map(|(i, e)| decode(x, e, &format!("{at}[{i}]")))
                    .collect::<Result<_>>()?,
            )
        }
        FinType::Fun(a, b) => {
            let arr = j
                .as_array()
                .ok_or_else(|| bad(format!("expected a table of [key, value] pairs, got {j}")))?;
            let n = a
                .cardinality()
                .ok_or_else(|| bad(format!("domain {a} too large")))?;
            let mut slots: Vec<Option<Value>> = vec![None; n as usize];
            for (i, kv) in arr.iter().enumerate() {
                let loc = format!("{at}[{i}]");
                let pair = kv
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::schema(&loc, "expected a [key, value] pair"))?;
                let k = decode(a, &pair[0], &format!("{loc}[0]"))?;
                let v = decode(b, &pair[1], &format!("{loc}[1]"))?;
                let r = a.rank(&k)? as usize;
                if slots[r].replace(v).is_some() {
                    return Err(Error::schema(&loc, format!("duplicate key {k}")));
                }
            }
            let entries = slots
                .into_iter()
                .enumerate()
                .map(|(i, s)| {
                    s.ok_or_else(|| {
                        bad(format!(
                            "table is not total: missing key {}",
                            a.unrank(i as u64)
                                .map(|k| k.to_string())
                                .unwrap_or_default()
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Value::Fun(FunTable::new((**a).clone(), (**b).clone(), entries)?)
        }
        FinType::Pow(x) => {
            let arr = tagged_array(j, "set", at)?;
            let mut out = std::collections::BTreeSet::new();
            for (i, e) in arr.iter().enumerate() {
                let v = decode(x, e, &format!("{at}.set[{i}]"))?;
                if !out.insert(v) {
                    return Err(bad(format!("duplicate set member at index {i}")));
                }
            }
            Value::Set(out)
        }
        FinType::Stream(x, m) => {
            let obj = j
                .as_object()
                .ok_or_else(|| bad(format!("expected a stream object, got {j}")))?;
            let prefix = obj
                .get("stream")
                .and_then(Json::as_array)
                .ok_or_else(|| bad("missing \"stream\" array".into()))?;
            let tail = obj
                .get("tail")
                .ok_or_else(|| bad("missing \"tail\"".into()))?;
            let prefix = prefix
                .iter()
                .enumerate()
                .map(|(i, e)| decode(x, e, &format!("{at}.stream[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let tail = decode(x, tail, &format!("{at}.tail"))?;
            let e = EvSeq::new((**x).clone(), prefix, tail);
            if e.prefix().len() > *m {
                return Err(bad(format!("stream prefix longer than {m}")));
            }
            Value::Stream(e)
        }
    };
    Ok(v)
}

fn tagged_array<'a>(j: &'a Json, tag: &str, at: &str) -> Result<&'a Vec<Json>> {
    j.as_object()
        .and_then(|o| o.get(tag))
        .and_then(Json::as_array)
        .ok_or_else(|| Error::schema(at, format!("expected {{\"{tag}\": [...]}}, got {j}")))
}
