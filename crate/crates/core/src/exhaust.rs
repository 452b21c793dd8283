//! Exhaustive checking of properties over all total tables, exploring only
//! the table entries a property actually reads.
//!
//! A property is run repeatedly against a [`Probe`]. Each time it reads an
//! entry that is not yet fixed, the probe fixes it to the first value of its
//! type and records a choice point; after the run the last unexhausted choice
//! is advanced and the property is replayed. Because evaluation is
//! deterministic, a verdict reached under a partial assignment holds for every
//! total assignment extending it, so the leaves of this search partition the
//! whole input space.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::universe::{json::encode, FinType, Value};

/// Upper bound on property evaluations for a single exploration.
pub const MAX_LEAVES: u64 = 20_000_000;

/// One input of a property: a total table from `args` to `ty`. Plain values
/// are tables over the one-point type.
#[derive(Clone, Debug)]
pub struct InputSpace {
    pub name: String,
    pub args: FinType,
    pub ty: FinType,
}

impl InputSpace {
    pub fn value(name: &str, ty: FinType) -> Self {
        InputSpace {
            name: name.to_string(),
            args: FinType::base(1),
            ty,
        }
    }

    pub fn table(name: &str, args: FinType, ty: FinType) -> Self {
        InputSpace {
            name: name.to_string(),
            args,
            ty,
        }
    }

    fn entries(&self) -> u64 {
        self.args.cardinality().unwrap_or(u64::MAX)
    }

    fn arity(&self) -> u64 {
        self.ty.cardinality().unwrap_or(u64::MAX)
    }
}

struct Choice {
    input: String,
    arg: Value,
    index: u64,
    arity: u64,
}

#[derive(Default)]
struct State {
    trail: Vec<Choice>,
    pos: usize,
    assigned: BTreeMap<(String, Value), Value>,
}

/// Handle through which a property reads its inputs.
#[derive(Clone)]
pub struct Probe {
    spaces: Rc<BTreeMap<String, InputSpace>>,
    state: Rc<RefCell<State>>,
}

impl Probe {
    /// The entry of table `input` at `arg`.
    pub fn pick(&self, input: &str, arg: &Value) -> Result<Value> {
        let space = self
            .spaces
            .get(input)
            .ok_or_else(|| Error::Unsupported(format!("undeclared input {input}")))?;
        space.args.check(arg)?;
        let mut st = self.state.borrow_mut();
        let key = (input.to_string(), arg.clone());
        if let Some(v) = st.assigned.get(&key) {
            return Ok(v.clone());
        }
        let pos = st.pos;
        let index = if pos < st.trail.len() {
            let c = &st.trail[pos];
            assert!(
                c.input == input && &c.arg == arg,
                "property evaluation is not deterministic"
            );
            c.index
        } else {
            let arity = space.arity();
            if arity == 0 {
                return Err(Error::InvalidType(space.ty.to_string()));
            }
            st.trail.push(Choice {
                input: input.to_string(),
                arg: arg.clone(),
                index: 0,
                arity,
            });
            0
        };
        st.pos += 1;
        let v = space.ty.unrank(index)?;
        st.assigned.insert(key, v.clone());
        Ok(v)
    }

    /// A plain value input.
    pub fn value(&self, input: &str) -> Result<Value> {
        self.pick(input, &Value::Base(0))
    }

    /// A table input as a function.
    pub fn table(&self, input: &str) -> Rc<dyn Fn(&Value) -> Result<Value>> {
        let probe = self.clone();
        let name = input.to_string();
        Rc::new(move |x| probe.pick(&name, x))
    }

    /// A two-argument table input `(x, y) -> v`, declared over `Prod(X, Y)`.
    pub fn family(&self, input: &str) -> Rc<dyn Fn(&Value, &Value) -> Result<Value>> {
        let probe = self.clone();
        let name = input.to_string();
        Rc::new(move |x, y| probe.pick(&name, &Value::pair(x.clone(), y.clone())))
    }

    fn begin(&self) {
        let mut st = self.state.borrow_mut();
        st.pos = 0;
        st.assigned.clear();
    }

    fn finish(&self) -> u128 {
        let mut st = self.state.borrow_mut();
        let pos = st.pos;
        st.trail.truncate(pos);
        let mut queried: BTreeMap<&str, u64> = BTreeMap::new();
        for c in &st.trail {
            *queried.entry(c.input.as_str()).or_default() += 1;
        }
        let mut covered: u128 = 1;
        for space in self.spaces.values() {
            let free = space.entries() - queried.get(space.name.as_str()).copied().unwrap_or(0);
            covered = covered.saturating_mul(pow_sat(space.arity(), free));
        }
        covered
    }

    fn advance(&self) -> bool {
        let mut st = self.state.borrow_mut();
        while let Some(last) = st.trail.last_mut() {
            if last.index + 1 < last.arity {
                last.index += 1;
                return true;
            }
            st.trail.pop();
        }
        false
    }

    fn snapshot(&self) -> Json {
        let st = self.state.borrow();
        let mut by_input: BTreeMap<&str, Vec<Json>> = BTreeMap::new();
        for c in &st.trail {
            let v = &st.assigned[&(c.input.clone(), c.arg.clone())];
            let space = &self.spaces[&c.input];
            let entry = if space.args == FinType::base(1) {
                encode(v)
            } else {
                json!([encode(&c.arg), encode(v)])
            };
            by_input.entry(c.input.as_str()).or_default().push(entry);
        }
        json!(by_input)
    }
}

fn pow_sat(base: u64, exp: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(u128::from(base));
        if acc == u128::MAX {
            break;
        }
    }
    acc
}

/// Outcome of an exhaustive exploration.
#[derive(Clone, Debug, PartialEq)]
pub struct Exploration {
    /// Property evaluations performed.
    pub leaves: u64,
    /// Total input assignments covered by those evaluations.
    pub covered: u128,
    /// Size of the declared input space.
    pub space: u128,
    /// First failing partial assignment, with the property's own detail.
    pub counterexample: Option<Json>,
}

/// Runs `property` over every total assignment of `inputs`. The property
/// returns `Ok(None)` when it holds and `Ok(Some(detail))` when it fails.
/// Exploration stops at the first failure.
pub fn explore(
    inputs: Vec<InputSpace>,
    mut property: impl FnMut(&Probe) -> Result<Option<Json>>,
) -> Result<Exploration> {
    let mut space: u128 = 1;
    for i in &inputs {
        i.args.validate()?;
        i.ty.validate()?;
        space = space.saturating_mul(pow_sat(i.arity(), i.entries()));
    }
    let probe = Probe {
        spaces: Rc::new(inputs.into_iter().map(|i| (i.name.clone(), i)).collect()),
        state: Rc::new(RefCell::new(State::default())),
    };
    let mut leaves = 0u64;
    let mut covered: u128 = 0;
    loop {
        probe.begin();
        let verdict = property(&probe)?;
        leaves += 1;
        covered = covered.saturating_add(probe.finish());
        if let Some(detail) = verdict {
            return Ok(Exploration {
                leaves,
                covered,
                space,
                counterexample: Some(json!({ "inputs": probe.snapshot(), "detail": detail })),
            });
        }
        if leaves >= MAX_LEAVES {
            return Err(Error::CardinalityExceeded {
                what: "exhaustive exploration".into(),
                cap: MAX_LEAVES,
            });
        }
        if !probe.advance() {
            break;
        }
    }
    Ok(Exploration {
        leaves,
        covered,
        space,
        counterexample: None,
    })
}

/// Compares two values, producing the failure detail on mismatch.
pub fn expect_eq(lhs: &Value, rhs: &Value) -> Option<Json> {
    if lhs == rhs {
        None
    } else {
        Some(json!({ "lhs": encode(lhs), "rhs": encode(rhs) }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_whole_space_with_few_leaves() {
        // f: Base(3) -> Base(4); property reads only f(0).
        let inputs = vec![InputSpace::table("f", FinType::base(3), FinType::base(4))];
        let e = explore(inputs, |p| {
            let v = p.pick("f", &Value::Base(0))?;
            Ok((v.as_base()? > 3).then(|| json!("impossible")))
        })
        .unwrap();
        assert_eq!(e.leaves, 4);
        assert_eq!(e.space, 64);
        assert_eq!(e.covered, 64);
        assert!(e.counterexample.is_none());
    }

    #[test]
    fn data_dependent_reads_still_partition() {
        // read a; then read f(a). 2 * 3 leaves over a space of 2 * 3^2.
        let inputs = vec![
            InputSpace::value("a", FinType::base(2)),
            InputSpace::table("f", FinType::base(2), FinType::base(3)),
        ];
        let e = explore(inputs, |p| {
            let a = p.value("a")?;
            let _ = p.pick("f", &a)?;
            Ok(None)
        })
        .unwrap();
        assert_eq!(e.leaves, 6);
        assert_eq!(e.covered, e.space);
        assert_eq!(e.space, 18);
    }

    #[test]
    fn finds_minimal_counterexample() {
        let inputs = vec![InputSpace::table("g", FinType::base(2), FinType::base(2))];
        let e = explore(inputs, |p| {
            let g = p.table("g");
            let v = g(&Value::Base(1))?;
            Ok(expect_eq(&v, &Value::Base(0)))
        })
        .unwrap();
        let ce = e.counterexample.unwrap();
        assert_eq!(ce["inputs"]["g"], json!([[1, 1]]));
        assert_eq!(ce["detail"]["lhs"], json!(1));
    }
}
