use std::fmt;

use crate::error::{Error, Result};
use crate::universe::value::{EvSeq, FunTable, Value};

/// Default cap on the number of entries any single enumeration may produce.
pub const DEFAULT_CAP: u64 = 4096;

/// Descriptor of a type in the closed finite universe.
///
/// `Stream(X, m)` is the finite model of `X^N` used throughout the crate:
/// eventually-constant sequences whose canonical prefix has length at most
/// `m`. Everything else is the usual grammar of base types, products,
/// bounded finite sequences, function spaces and finite power sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FinType {
    Base(u32),
    Prod(Box<FinType>, Box<FinType>),
    Seq(Box<FinType>, usize),
    Fun(Box<FinType>, Box<FinType>),
    Pow(Box<FinType>),
    Stream(Box<FinType>, usize),
}

impl FinType {
    pub fn base(n: u32) -> Self {
        FinType::Base(n)
    }

    pub fn prod(a: FinType, b: FinType) -> Self {
        FinType::Prod(Box::new(a), Box::new(b))
    }

    pub fn seq(elem: FinType, max_len: usize) -> Self {
        FinType::Seq(Box::new(elem), max_len)
    }

    pub fn fun(dom: FinType, cod: FinType) -> Self {
        FinType::Fun(Box::new(dom), Box::new(cod))
    }

    pub fn pow(elem: FinType) -> Self {
        FinType::Pow(Box::new(elem))
    }

    pub fn stream(elem: FinType, max_prefix: usize) -> Self {
        FinType::Stream(Box::new(elem), max_prefix)
    }

    /// Rejects descriptors with an empty base type anywhere inside.
    pub fn validate(&self) -> Result<()> {
        match self {
            FinType::Base(0) => Err(Error::InvalidType("Base(0) is uninhabited".into())),
            FinType::Base(_) => Ok(()),
            FinType::Prod(a, b) | FinType::Fun(a, b) => {
                a.validate()?;
                b.validate()
            }
            FinType::Seq(x, _) | FinType::Pow(x) | FinType::Stream(x, _) => x.validate(),
        }
    }

    /// Number of values of this type, or `None` if it does not fit in a `u64`.
    pub fn cardinality(&self) -> Option<u64> {
        match self {
            FinType::Base(n) => Some(u64::from(*n)),
            FinType::Prod(a, b) => a.cardinality()?.checked_mul(b.cardinality()?),
            FinType::Seq(x, m) => {
                let c = x.cardinality()?;
                let mut total: u64 = 0;
                let mut layer: u64 = 1;
                for k in 0..=*m {
                    if k > 0 {
                        layer = layer.checked_mul(c)?;
                    }
                    total = total.checked_add(layer)?;
                }
                Some(total)
            }
            FinType::Fun(a, b) => {
                let n = u32::try_from(a.cardinality()?).ok()?;
                b.cardinality()?.checked_pow(n)
            }
            FinType::Pow(x) => {
                let n = x.cardinality()?;
                if n >= 64 {
                    None
                } else {
                    Some(1u64 << n)
                }
            }
            FinType::Stream(x, m) => {
                let c = x.cardinality()?;
                c.checked_mul(stream_prefixes_per_tail(c, *m)?)
            }
        }
    }

    /// Cardinality, failing when it exceeds `cap`.
    pub fn cardinality_within(&self, cap: u64) -> Result<u64> {
        match self.cardinality() {
            Some(n) if n <= cap => Ok(n),
            _ => Err(Error::CardinalityExceeded {
                what: self.to_string(),
                cap,
            }),
        }
    }

    /// The canonical inhabitant: index 0 of the enumeration order.
    pub fn default_value(&self) -> Value {
        match self {
            FinType::Base(_) => Value::Base(0),
            FinType::Prod(a, b) => Value::pair(a.default_value(), b.default_value()),
            FinType::Seq(_, _) => Value::Seq(Vec::new()),
            FinType::Fun(a, b) => {
                let n = a.cardinality().unwrap_or(0) as usize;
                Value::Fun(FunTable::from_parts(
                    (**a).clone(),
                    (**b).clone(),
                    vec![b.default_value(); n],
                ))
            }
            FinType::Pow(_) => Value::Set(Default::default()),
            FinType::Stream(x, _) => {
                Value::Stream(EvSeq::constant((**x).clone(), x.default_value()))
            }
        }
    }

    /// Structural type check.
    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (FinType::Base(n), Value::Base(i)) => i < n,
            (FinType::Prod(a, b), Value::Pair(x, y)) => a.contains(x) && b.contains(y),
            (FinType::Seq(x, m), Value::Seq(items)) => {
                items.len() <= *m && items.iter().all(|i| x.contains(i))
            }
            (FinType::Fun(a, b), Value::Fun(t)) => {
                t.dom() == &**a
                    && t.cod() == &**b
                    && a.cardinality() == Some(t.entries().len() as u64)
                    && t.entries().iter().all(|e| b.contains(e))
            }
            (FinType::Pow(x), Value::Set(s)) => s.iter().all(|e| x.contains(e)),
            (FinType::Stream(x, m), Value::Stream(e)) => {
                e.elem() == &**x
                    && e.prefix().len() <= *m
                    && x.contains(e.tail())
                    && e.prefix().iter().all(|i| x.contains(i))
                    && e.prefix().last() != Some(e.tail())
            }
            _ => false,
        }
    }

    pub fn check(&self, v: &Value) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::mismatch(format!("{v} is not a value of {self}")))
        }
    }

    /// Position of `v` in the enumeration order of this type.
    pub fn rank(&self, v: &Value) -> Result<u64> {
        let bad = || Error::mismatch(format!("{v} is not a value of {self}"));
        let overflow = || Error::CardinalityExceeded {
            what: self.to_string(),
            cap: u64::MAX,
        };
        match (self, v) {
            (FinType::Base(n), Value::Base(i)) if i < n => Ok(u64::from(*i)),
            (FinType::Prod(a, b), Value::Pair(x, y)) => {
                let cb = b.cardinality().ok_or_else(overflow)?;
                Ok(a.rank(x)? * cb + b.rank(y)?)
            }
            (FinType::Seq(x, m), Value::Seq(items)) if items.len() <= *m => {
                let c = x.cardinality().ok_or_else(overflow)?;
                let mut offset = 0u64;
                let mut layer = 1u64;
                for _ in 0..items.len() {
                    offset += layer;
                    layer *= c;
                }
                Ok(offset + lex_rank(x, c, items)?)
            }
            (FinType::Fun(a, b), Value::Fun(t)) if t.dom() == &**a && t.cod() == &**b => {
                let c = b.cardinality().ok_or_else(overflow)?;
                lex_rank(b, c, t.entries())
            }
            (FinType::Pow(x), Value::Set(s)) => {
                let mut r = 0u64;
                for e in s {
                    let i = x.rank(e)?;
                    if i >= 64 {
                        return Err(overflow());
                    }
                    r |= 1 << i;
                }
                Ok(r)
            }
            (FinType::Stream(x, m), Value::Stream(e)) if self.contains(v) => {
                let c = x.cardinality().ok_or_else(overflow)?;
                let per_tail = stream_prefixes_per_tail(c, *m).ok_or_else(overflow)?;
                let tail = x.rank(e.tail())?;
                let k = e.prefix().len();
                let within = if k == 0 {
                    0
                } else {
                    let head = lex_rank(x, c, &e.prefix()[..k - 1])?;
                    let last = x.rank(&e.prefix()[k - 1])?;
                    let adj = if last > tail { last - 1 } else { last };
                    stream_offset(c, k) + head * (c - 1) + adj
                };
                Ok(tail * per_tail + within)
            }
            _ => Err(bad()),
        }
    }

    /// Inverse of [`FinType::rank`].
    pub fn unrank(&self, index: u64) -> Result<Value> {
        let card = self
            .cardinality()
            .ok_or_else(|| Error::CardinalityExceeded {
                what: self.to_string(),
                cap: u64::MAX,
            })?;
        if index >= card {
            return Err(Error::mismatch(format!(
                "index {index} out of range for {self} (cardinality {card})"
            )));
        }
        Ok(self.unrank_unchecked(index))
    }

    fn unrank_unchecked(&self, index: u64) -> Value {
        match self {
            FinType::Base(_) => Value::Base(index as u32),
            FinType::Prod(a, b) => {
                let cb = b.cardinality().unwrap();
                Value::pair(
                    a.unrank_unchecked(index / cb),
                    b.unrank_unchecked(index % cb),
                )
            }
            FinType::Seq(x, _) => {
                let c = x.cardinality().unwrap();
                let mut rest = index;
                let mut len = 0usize;
                let mut layer = 1u64;
                while rest >= layer {
                    rest -= layer;
                    layer *= c;
                    len += 1;
                }
                Value::Seq(lex_unrank(x, c, len, rest))
            }
            FinType::Fun(a, b) => {
                let n = a.cardinality().unwrap() as usize;
                let c = b.cardinality().unwrap();
                Value::Fun(FunTable::from_parts(
                    (**a).clone(),
                    (**b).clone(),
                    lex_unrank(b, c, n, index),
                ))
            }
            FinType::Pow(x) => Value::Set(
                (0..64)
                    .filter(|i| index & (1u64 << i) != 0)
                    .map(|i| x.unrank_unchecked(i))
                    .collect(),
            ),
            FinType::Stream(x, m) => {
                let c = x.cardinality().unwrap();
                let per_tail = stream_prefixes_per_tail(c, *m).unwrap();
                let tail_rank = index / per_tail;
                let mut within = index % per_tail;
                let tail = x.unrank_unchecked(tail_rank);
                if within == 0 {
                    return Value::Stream(EvSeq::constant((**x).clone(), tail));
                }
                within -= 1;
                let mut k = 1usize;
                let mut layer = c - 1;
                while within >= layer {
                    within -= layer;
                    layer *= c;
                    k += 1;
                }
                let head = within / (c - 1);
                let adj = within % (c - 1);
                let last = if adj >= tail_rank { adj + 1 } else { adj };
                let mut prefix = lex_unrank(x, c, k - 1, head);
                prefix.push(x.unrank_unchecked(last));
                Value::Stream(EvSeq::from_canonical((**x).clone(), prefix, tail))
            }
        }
    }

    /// Every value of the type exactly once, default first.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<Value>> {
        let n = self.cardinality_within(cap)?;
        Ok((0..n).map(|i| self.unrank_unchecked(i)).collect())
    }
}

/// Lexicographic rank of a fixed-length word, first letter most significant.
fn lex_rank(letter: &FinType, base: u64, word: &[Value]) -> Result<u64> {
    word.iter()
        .try_fold(0u64, |acc, v| Ok(acc * base + letter.rank(v)?))
}

fn lex_unrank(letter: &FinType, base: u64, len: usize, mut index: u64) -> Vec<Value> {
    let mut out = vec![Value::Base(0); len];
    for slot in out.iter_mut().rev() {
        *slot = letter.unrank_unchecked(index % base);
        index /= base;
    }
    out
}

/// Canonical prefixes (no trailing tail value) of length <= m, for a fixed tail.
fn stream_prefixes_per_tail(c: u64, m: usize) -> Option<u64> {
    let mut total: u64 = 1;
    let mut layer = c.checked_sub(1)?;
    for k in 1..=m {
        if k > 1 {
            layer = layer.checked_mul(c)?;
        }
        total = total.checked_add(layer)?;
    }
    Some(total)
}

/// Number of canonical prefixes strictly shorter than `k` (k >= 1).
fn stream_offset(c: u64, k: usize) -> u64 {
    let mut total = 1u64;
    let mut layer = c - 1;
    for _ in 1..k {
        total += layer;
        layer *= c;
    }
    total
}

impl fmt::Display for FinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinType::Base(n) => write!(f, "Base({n})"),
            FinType::Prod(a, b) => write!(f, "Prod({a}, {b})"),
            FinType::Seq(x, m) => write!(f, "Seq({x}, {m})"),
            FinType::Fun(a, b) => write!(f, "Fun({a}, {b})"),
            FinType::Pow(x) => write!(f, "Pow({x})"),
            FinType::Stream(x, m) => write!(f, "Stream({x}, {m})"),
        }
    }
}
