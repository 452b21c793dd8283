use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::universe::types::FinType;

/// A value of some [`FinType`]. Equality is structural, which coincides with
/// extensional equality because tables and streams are kept canonical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Base(u32),
    Pair(Box<Value>, Box<Value>),
    Seq(Vec<Value>),
    Fun(FunTable),
    Set(BTreeSet<Value>),
    Stream(EvSeq),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Self {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn empty_set() -> Self {
        Value::Set(BTreeSet::new())
    }

    pub fn set(items: impl IntoIterator<Item = Value>) -> Self {
        Value::Set(items.into_iter().collect())
    }

    pub fn singleton(v: Value) -> Self {
        Value::set([v])
    }

    pub fn base_set(items: impl IntoIterator<Item = u32>) -> Self {
        Value::set(items.into_iter().map(Value::Base))
    }

    pub fn seq_of(items: impl IntoIterator<Item = u32>) -> Self {
        Value::Seq(items.into_iter().map(Value::Base).collect())
    }

    pub fn as_base(&self) -> Result<u32> {
        match self {
            Value::Base(i) => Ok(*i),
            other => Err(Error::mismatch(format!(
                "expected a base value, got {other}"
            ))),
        }
    }

    pub fn as_set(&self) -> Result<&BTreeSet<Value>> {
        match self {
            Value::Set(s) => Ok(s),
            other => Err(Error::mismatch(format!("expected a set, got {other}"))),
        }
    }

    pub fn into_set(self) -> Result<BTreeSet<Value>> {
        match self {
            Value::Set(s) => Ok(s),
            other => Err(Error::mismatch(format!("expected a set, got {other}"))),
        }
    }

    pub fn as_seq(&self) -> Result<&[Value]> {
        match self {
            Value::Seq(s) => Ok(s),
            other => Err(Error::mismatch(format!("expected a sequence, got {other}"))),
        }
    }

    pub fn as_fun(&self) -> Result<&FunTable> {
        match self {
            Value::Fun(t) => Ok(t),
            other => Err(Error::mismatch(format!("expected a table, got {other}"))),
        }
    }

    pub fn as_pair(&self) -> Result<(&Value, &Value)> {
        match self {
            Value::Pair(a, b) => Ok((a, b)),
            other => Err(Error::mismatch(format!("expected a pair, got {other}"))),
        }
    }

    pub fn as_stream(&self) -> Result<&EvSeq> {
        match self {
            Value::Stream(e) => Ok(e),
            other => Err(Error::mismatch(format!("expected a stream, got {other}"))),
        }
    }
}

/// A total function between two finite types, stored as the list of images
/// in the enumeration order of the domain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunTable {
    dom: FinType,
    cod: FinType,
    entries: Vec<Value>,
}

impl FunTable {
    pub(crate) fn from_parts(dom: FinType, cod: FinType, entries: Vec<Value>) -> Self {
        FunTable { dom, cod, entries }
    }

    /// Builds a table from images listed in domain enumeration order.
    pub fn new(dom: FinType, cod: FinType, entries: Vec<Value>) -> Result<Self> {
        let n = dom
            .cardinality()
            .ok_or_else(|| Error::CardinalityExceeded {
                what: dom.to_string(),
                cap: u64::MAX,
            })?;
        if entries.len() as u64 != n {
            return Err(Error::mismatch(format!(
                "table over {dom} needs {n} entries, got {}",
                entries.len()
            )));
        }
        for e in &entries {
            cod.check(e)?;
        }
        Ok(FunTable { dom, cod, entries })
    }

    /// Tabulates `f` over every element of `dom`.
    pub fn tabulate(
        dom: &FinType,
        cod: &FinType,
        cap: u64,
        mut f: impl FnMut(&Value) -> Result<Value>,
    ) -> Result<Self> {
        let xs = dom.enumerate(cap)?;
        let entries = xs.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        FunTable::new(dom.clone(), cod.clone(), entries)
    }

    pub fn constant(dom: &FinType, cod: &FinType, value: Value, cap: u64) -> Result<Self> {
        let n = dom.cardinality_within(cap)?;
        FunTable::new(dom.clone(), cod.clone(), vec![value; n as usize])
    }

    pub fn dom(&self) -> &FinType {
        &self.dom
    }

    pub fn cod(&self) -> &FinType {
        &self.cod
    }

    pub fn entries(&self) -> &[Value] {
        &self.entries
    }

    pub fn fun_type(&self) -> FinType {
        FinType::fun(self.dom.clone(), self.cod.clone())
    }

    pub fn apply(&self, x: &Value) -> Result<Value> {
        let i = self.dom.rank(x)?;
        Ok(self.entries[i as usize].clone())
    }

    /// `(argument, image)` pairs in domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (Value, &Value)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.dom.unrank(i as u64).expect("in range"), v))
    }
}

/// A finite sequence over a declared element type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSeq {
    elem: FinType,
    items: Vec<Value>,
}

impl FinSeq {
    pub fn new(elem: FinType, items: Vec<Value>) -> Result<Self> {
        for i in &items {
            elem.check(i)?;
        }
        Ok(FinSeq { elem, items })
    }

    pub fn empty(elem: FinType) -> Self {
        FinSeq {
            elem,
            items: Vec::new(),
        }
    }

    pub fn elem(&self) -> &FinType {
        &self.elem
    }

    pub fn items(&self) -> &[Value] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// `s * x`
    pub fn snoc(&self, x: Value) -> Result<Self> {
        self.elem.check(&x)?;
        let mut items = self.items.clone();
        items.push(x);
        Ok(FinSeq {
            elem: self.elem.clone(),
            items,
        })
    }

    /// `r ⪯ s`
    pub fn prefix_of(&self, other: &FinSeq) -> Result<bool> {
        if self.elem != other.elem {
            return Err(Error::mismatch(format!(
                "prefix test between sequences over {} and {}",
                self.elem, other.elem
            )));
        }
        Ok(is_prefix(&self.items, &other.items))
    }

    /// `s^+`: the sequence followed by default values forever.
    pub fn extend_plus(&self) -> EvSeq {
        EvSeq::new(
            self.elem.clone(),
            self.items.clone(),
            self.elem.default_value(),
        )
    }
}

pub(crate) fn is_prefix(r: &[Value], s: &[Value]) -> bool {
    r.len() <= s.len() && r.iter().zip(s).all(|(a, b)| a == b)
}

/// An eventually-constant infinite sequence: a finite prefix followed by a
/// constant tail. The prefix never ends with the tail value, so two `EvSeq`s
/// are structurally equal exactly when they agree at every position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EvSeq {
    elem: FinType,
    prefix: Vec<Value>,
    tail: Box<Value>,
}

impl EvSeq {
    /// Builds and canonicalizes.
    pub fn new(elem: FinType, mut prefix: Vec<Value>, tail: Value) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        EvSeq {
            elem,
            prefix,
            tail: Box::new(tail),
        }
    }

    pub(crate) fn from_canonical(elem: FinType, prefix: Vec<Value>, tail: Value) -> Self {
        debug_assert!(prefix.last() != Some(&tail));
        EvSeq {
            elem,
            prefix,
            tail: Box::new(tail),
        }
    }

    pub fn constant(elem: FinType, tail: Value) -> Self {
        EvSeq {
            elem,
            prefix: Vec::new(),
            tail: Box::new(tail),
        }
    }

    /// `s^+` for a raw prefix over `elem`.
    pub fn extend(elem: &FinType, items: &[Value]) -> Self {
        EvSeq::new(elem.clone(), items.to_vec(), elem.default_value())
    }

    pub fn elem(&self) -> &FinType {
        &self.elem
    }

    pub fn prefix(&self) -> &[Value] {
        &self.prefix
    }

    pub fn tail(&self) -> &Value {
        &self.tail
    }

    /// Value at position `i`.
    pub fn at(&self, i: usize) -> &Value {
        self.prefix.get(i).unwrap_or(&self.tail)
    }

    /// The first `n` positions.
    pub fn window(&self, n: usize) -> Vec<Value> {
        (0..n).map(|i| self.at(i).clone()).collect()
    }

    /// `add_s(β)`: prepend `s`.
    pub fn add_prefix(&self, s: &FinSeq) -> Result<EvSeq> {
        if s.elem() != &self.elem {
            return Err(Error::mismatch(format!(
                "cannot prepend a sequence over {} to a stream over {}",
                s.elem(),
                self.elem
            )));
        }
        Ok(self.add_items(s.items()))
    }

    pub(crate) fn add_items(&self, s: &[Value]) -> EvSeq {
        if self.prefix.is_empty() {
            return EvSeq::new(self.elem.clone(), s.to_vec(), (*self.tail).clone());
        }
        let mut prefix = s.to_vec();
        prefix.extend(self.prefix.iter().cloned());
        EvSeq::from_canonical(self.elem.clone(), prefix, (*self.tail).clone())
    }

    /// `drop_n(β)`: forget the first `n` positions.
    pub fn drop_prefix(&self, n: usize) -> EvSeq {
        let prefix = self.prefix.iter().skip(n).cloned().collect();
        EvSeq::from_canonical(self.elem.clone(), prefix, (*self.tail).clone())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Base(i) => write!(f, "{i}"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Seq(items) => {
                write!(f, "<")?;
                write_joined(f, items.iter())?;
                write!(f, ">")
            }
            Value::Fun(t) => {
                write!(f, "[")?;
                for (i, (k, v)) in t.pairs().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k} -> {v}")?;
                }
                write!(f, "]")
            }
            Value::Set(s) => {
                write!(f, "{{")?;
                write_joined(f, s.iter())?;
                write!(f, "}}")
            }
            Value::Stream(e) => write!(f, "{e}"),
        }
    }
}

impl fmt::Display for EvSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        write_joined(f, self.prefix.iter())?;
        if !self.prefix.is_empty() {
            write!(f, ", ")?;
        }
        write!(f, "{}...>", self.tail)
    }
}

fn write_joined<'a>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = &'a Value>,
) -> fmt::Result {
    for (i, v) in items.enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}
