//! The closed universe of finite types and their values.

pub mod json;
mod seqfun;
mod types;
mod value;

pub use seqfun::SeqFun;
pub use types::{FinType, DEFAULT_CAP};
pub use value::{EvSeq, FinSeq, FunTable, Value};

use crate::error::Result;

/// `default(t)`
pub fn default(t: &FinType) -> Value {
    t.default_value()
}

/// All values of `t`, default first, refusing types larger than `cap`.
pub fn enumerate_values(t: &FinType, cap: u64) -> Result<Vec<Value>> {
    t.enumerate(cap)
}

/// All total tables `dom -> cod`, in enumeration order of `Fun(dom, cod)`.
pub fn enumerate_functions(dom: &FinType, cod: &FinType, cap: u64) -> Result<Vec<FunTable>> {
    let t = FinType::fun(dom.clone(), cod.clone());
    Ok(t.enumerate(cap)?
        .into_iter()
        .map(|v| match v {
            Value::Fun(f) => f,
            _ => unreachable!("Fun type enumerates tables"),
        })
        .collect())
}

/// All finite sequences over `elem` of length at most `max_len`.
pub fn enumerate_seqs(elem: &FinType, max_len: usize, cap: u64) -> Result<Vec<FinSeq>> {
    let t = FinType::seq(elem.clone(), max_len);
    t.enumerate(cap)?
        .into_iter()
        .map(|v| match v {
            Value::Seq(items) => FinSeq::new(elem.clone(), items),
            _ => unreachable!("Seq type enumerates sequences"),
        })
        .collect()
}
