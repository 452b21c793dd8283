use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::universe::json::{decode, encode};
use crate::universe::{EvSeq, FinType, Value};

/// A function on eventually constant sequences that reads exactly the first
/// `lookahead` positions, stored as a table over those windows.
///
/// Windows are ranked in mixed radix with position 0 most significant, so
/// the table order is lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeqFun {
    elem: FinType,
    lookahead: usize,
    cod: FinType,
    outputs: Vec<Value>,
}

impl SeqFun {
    pub fn new(elem: FinType, lookahead: usize, cod: FinType, outputs: Vec<Value>) -> Result<Self> {
        let n = window_count(&elem, lookahead)?;
        if outputs.len() as u64 != n {
            return Err(Error::mismatch(format!(
                "a lookahead-{lookahead} table over {elem} needs {n} entries, got {}",
                outputs.len()
            )));
        }
        for v in &outputs {
            cod.check(v)?;
        }
        Ok(SeqFun {
            elem,
            lookahead,
            cod,
            outputs,
        })
    }

    /// Tabulates `f` over every window, in table order.
    pub fn tabulate(
        elem: FinType,
        lookahead: usize,
        cod: FinType,
        mut f: impl FnMut(&[Value]) -> Result<Value>,
    ) -> Result<Self> {
        let n = window_count(&elem, lookahead)?;
        let outputs = (0..n)
            .map(|i| f(&unrank_window(&elem, lookahead, i)?))
            .collect::<Result<Vec<_>>>()?;
        SeqFun::new(elem, lookahead, cod, outputs)
    }

    pub fn elem(&self) -> &FinType {
        &self.elem
    }

    pub fn lookahead(&self) -> usize {
        self.lookahead
    }

    pub fn cod(&self) -> &FinType {
        &self.cod
    }

    pub fn outputs(&self) -> &[Value] {
        &self.outputs
    }

    /// `(window, output)` pairs in table order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<Value>, &Value)> + '_ {
        self.outputs.iter().enumerate().map(move |(i, v)| {
            (
                unrank_window(&self.elem, self.lookahead, i as u64).expect("in range"),
                v,
            )
        })
    }

    /// Reads the window of `beta` and looks it up.
    pub fn apply(&self, beta: &EvSeq) -> Result<Value> {
        if beta.elem() != &self.elem {
            return Err(Error::mismatch(format!(
                "sequence over {} given to a function on {}",
                beta.elem(),
                self.elem
            )));
        }
        self.apply_window(&beta.window(self.lookahead))
    }

    /// Looks up a window of exactly `lookahead` positions.
    pub fn apply_window(&self, window: &[Value]) -> Result<Value> {
        if window.len() != self.lookahead {
            return Err(Error::mismatch(format!(
                "window of length {} for lookahead {}",
                window.len(),
                self.lookahead
            )));
        }
        let base = self.elem.cardinality().unwrap_or(u64::MAX);
        let mut i: u64 = 0;
        for v in window {
            i = i * base + self.elem.rank(v)?;
        }
        Ok(self.outputs[i as usize].clone())
    }

    pub fn to_json(&self) -> Json {
        json!({
            "L": self.lookahead,
            "table": self
                .entries()
                .map(|(w, v)| json!([Json::Array(w.iter().map(encode).collect()), encode(v)]))
                .collect::<Vec<_>>(),
        })
    }

    /// Decodes `{"L": n, "table": [[window, value], ...]}`; the table must
    /// list every window of length exactly `L` once.
    pub fn from_json(elem: &FinType, cod: &FinType, j: &Json, at: &str) -> Result<Self> {
        let obj = j
            .as_object()
            .ok_or_else(|| Error::schema(at, "expected an object with \"L\" and \"table\""))?;
        let lookahead =
            obj.get("L").and_then(Json::as_u64).ok_or_else(|| {
                Error::schema(format!("{at}.L"), "expected a non-negative integer")
            })? as usize;
        let rows = obj
            .get("table")
            .and_then(Json::as_array)
            .ok_or_else(|| Error::schema(format!("{at}.table"), "expected an array"))?;
        let n = window_count(elem, lookahead)
            .map_err(|_| Error::schema(format!("{at}.L"), "lookahead too large"))?;
        let mut slots: Vec<Option<Value>> = vec![None; n as usize];
        let base = elem.cardinality().unwrap_or(u64::MAX);
        for (i, row) in rows.iter().enumerate() {
            let loc = format!("{at}.table[{i}]");
            let pair = row
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::schema(&loc, "expected a [window, value] pair"))?;
            let window = decode(
                &FinType::seq(elem.clone(), lookahead),
                &pair[0],
                &format!("{loc}[0]"),
            )?;
            let window = window.as_seq()?;
            if window.len() != lookahead {
                return Err(Error::schema(
                    format!("{loc}[0]"),
                    format!("window must have length exactly {lookahead}"),
                ));
            }
            let v = decode(cod, &pair[1], &format!("{loc}[1]"))?;
            let mut k: u64 = 0;
            for w in window {
                k = k * base + elem.rank(w)?;
            }
            if slots[k as usize].replace(v).is_some() {
                return Err(Error::schema(&loc, "duplicate window"));
            }
        }
        let outputs = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    let w = unrank_window(elem, lookahead, i as u64).unwrap_or_default();
                    Error::schema(
                        format!("{at}.table"),
                        format!("table is not total: missing window {}", Value::Seq(w)),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SeqFun::new(elem.clone(), lookahead, cod.clone(), outputs)
    }
}

fn window_count(elem: &FinType, lookahead: usize) -> Result<u64> {
    let c = elem.cardinality().unwrap_or(u64::MAX);
    u32::try_from(lookahead)
        .ok()
        .and_then(|l| c.checked_pow(l))
        .filter(|&n| n <= crate::universe::DEFAULT_CAP * 16)
        .ok_or_else(|| Error::CardinalityExceeded {
            what: format!("windows of length {lookahead} over {elem}"),
            cap: crate::universe::DEFAULT_CAP * 16,
        })
}

fn unrank_window(elem: &FinType, lookahead: usize, mut i: u64) -> Result<Vec<Value>> {
    let base = elem.cardinality().unwrap_or(u64::MAX);
    let mut out = vec![Value::Base(0); lookahead];
    for slot in out.iter_mut().rev() {
        *slot = elem.unrank(i % base)?;
        i /= base;
    }
    Ok(out)
}
