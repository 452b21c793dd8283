//! Explicitly controlled iterated products: of quantifiers (EPQ) and of
//! T-selection functions (T-EPS), the transform that makes the outcome of a
//! game the sequence of moves played, and T-EPS computed through EPQ.
//!
//! Recursion is indexed by the finite sequence `s` of moves so far and stops
//! at the bar `ω(s^+) < |s|`. Outcome functions are passed relative to `s`:
//! the root caller supplies the absolute `q`, and each step hands `q_x` with
//! `q_x(t) = q(x * t)` to the child.

pub mod check;

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::monad::{Algebra, MVal, Rule, StrongMonad};
use crate::selection::{JMonad, Quantifier, Selection, TSelection};
use crate::universe::{EvSeq, FinType, FunTable, SeqFun, Value};
use crate::Mutation;

/// A stopping function `ω` on eventually constant sequences with a declared
/// upper bound. Recursion refuses to build sequences of length
/// `bound + 2`, which an honest `ω` never needs.
#[derive(Clone)]
pub struct StoppingFunction {
    bound: usize,
    rule: Rc<dyn Fn(&EvSeq) -> Result<u64>>,
}

impl StoppingFunction {
    pub fn new(bound: usize, rule: impl Fn(&EvSeq) -> Result<u64> + 'static) -> Self {
        StoppingFunction {
            bound,
            rule: Rc::new(rule),
        }
    }

    pub fn constant(bound: usize, n: u64) -> Self {
        StoppingFunction::new(bound, move |_| Ok(n))
    }

    /// Reads a base-typed table output as the stopping value.
    pub fn from_seqfun(bound: usize, f: SeqFun) -> Self {
        StoppingFunction::new(bound, move |b| Ok(u64::from(f.apply(b)?.as_base()?)))
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Length of the shortest sequence recursion refuses to build.
    pub fn guard(&self) -> usize {
        self.bound + 2
    }

    pub fn eval(&self, beta: &EvSeq) -> Result<u64> {
        (self.rule)(beta)
    }

    /// `ω(s^+) < |s|`.
    pub fn at_bar(&self, elem: &FinType, s: &[Value]) -> Result<bool> {
        Ok(self.eval(&EvSeq::extend(elem, s))? < s.len() as u64)
    }

    /// Whether recursion stops at `s`, failing if it would have to go past
    /// the depth guard.
    pub fn stops(&self, elem: &FinType, s: &[Value]) -> Result<bool> {
        if self.at_bar(elem, s)? {
            return Ok(true);
        }
        if s.len() + 1 >= self.guard() {
            return Err(Error::DepthExceeded {
                guard: self.guard(),
                length: s.len() + 1,
            });
        }
        Ok(false)
    }
}

/// An outcome function on finite sequences of moves.
#[derive(Clone)]
pub struct Outcome(Rc<dyn Fn(&[Value]) -> Result<Value>>);

impl Outcome {
    pub fn new(f: impl Fn(&[Value]) -> Result<Value> + 'static) -> Self {
        Outcome(Rc::new(f))
    }

    /// A table over all sequences up to some length.
    pub fn from_table(table: FunTable) -> Self {
        Outcome::new(move |s| table.apply(&Value::Seq(s.to_vec())))
    }

    /// `s ↦ q(s^+)` for an outcome `q` on infinite sequences.
    pub fn from_stream(elem: FinType, q: StreamOutcome) -> Self {
        Outcome::new(move |s| q(&EvSeq::extend(&elem, s)))
    }

    pub fn apply(&self, s: &[Value]) -> Result<Value> {
        (self.0)(s)
    }

    /// `q_x`, with `q_x(t) = q(x * t)`.
    pub fn shift(&self, x: &Value) -> Outcome {
        let (q, x) = (self.0.clone(), x.clone());
        Outcome::new(move |t| {
            let mut s = Vec::with_capacity(t.len() + 1);
            s.push(x.clone());
            s.extend_from_slice(t);
            q(&s)
        })
    }

    /// The outcome as a rule on sequence values.
    pub fn rule(&self) -> Rule {
        let q = self.0.clone();
        Rc::new(move |v| q(v.as_seq()?))
    }
}

/// An outcome function on infinite sequences.
pub type StreamOutcome = Rc<dyn Fn(&EvSeq) -> Result<Value>>;

/// Selection functions indexed by the sequence of moves so far.
#[derive(Clone)]
pub struct Family(Rc<dyn Fn(&[Value]) -> Result<Selection>>);

impl Family {
    pub fn new(f: impl Fn(&[Value]) -> Result<Selection> + 'static) -> Self {
        Family(Rc::new(f))
    }

    pub fn constant(eps: Selection) -> Self {
        Family::new(move |_| Ok(eps.clone()))
    }

    /// A family given by one table per position, failing off the table.
    pub fn from_tables(tables: BTreeMap<Vec<Value>, TSelection>) -> Self {
        Family::new(move |s| {
            tables.get(s).map(TSelection::rule).ok_or_else(|| {
                Error::mismatch(format!("no selection at {}", Value::Seq(s.to_vec())))
            })
        })
    }

    pub fn at(&self, s: &[Value]) -> Result<Selection> {
        (self.0)(s)
    }
}

/// Quantifiers indexed by the sequence of moves so far.
#[derive(Clone)]
pub struct QuantifierFamily(Rc<dyn Fn(&[Value]) -> Result<Quantifier>>);

impl QuantifierFamily {
    pub fn new(f: impl Fn(&[Value]) -> Result<Quantifier> + 'static) -> Self {
        QuantifierFamily(Rc::new(f))
    }

    /// `s ↦ ε̄_s`.
    pub fn bars(j: &JMonad, elem: &FinType, eps: &Family) -> Self {
        let (j, elem, eps) = (j.clone(), elem.clone(), eps.clone());
        QuantifierFamily::new(move |s| Ok(j.bar(&elem, &eps.at(s)?)))
    }

    pub fn at(&self, s: &[Value]) -> Result<Quantifier> {
        (self.0)(s)
    }
}

fn snoc(s: &[Value], x: &Value) -> Vec<Value> {
    let mut v = s.to_vec();
    v.push(x.clone());
    v
}

/// The type of the finite plays recursion can produce under `omega`.
pub fn play_type(elem: &FinType, omega: &StoppingFunction) -> FinType {
    FinType::seq(elem.clone(), omega.guard())
}

/// `EPQ^ω_s(φ)(q)`: `q(⟨⟩)` at the bar, otherwise
/// `φ_s(λx. EPQ^ω_{s*x}(φ)(q_x))`.
pub fn epq(
    elem: &FinType,
    outcome: &FinType,
    omega: &StoppingFunction,
    phi: &QuantifierFamily,
    q: &Outcome,
    s: &[Value],
    cap: u64,
) -> Result<Value> {
    if omega.stops(elem, s)? {
        return q.apply(&[]);
    }
    let ctx = FunTable::tabulate(elem, outcome, cap, |x| {
        epq(elem, outcome, omega, phi, &q.shift(x), &snoc(s, x), cap)
    })?;
    phi.at(s)?(&Value::Fun(ctx))
}

/// `T-EPS^ω_s(ε)(q)`: `η(⟨⟩)` at the bar, otherwise `a ⊗ f` read as a set
/// of plays, with `f(x) = T-EPS^ω_{s*x}(ε)(q_x)` and
/// `a = ε_s(λx. (q_x)*(f x))`.
pub fn teps(
    j: &JMonad,
    elem: &FinType,
    omega: &StoppingFunction,
    eps: &Family,
    q: &Outcome,
    s: &[Value],
) -> Result<MVal> {
    let t = j.base();
    let plays = play_type(elem, omega);
    if omega.stops(elem, s)? {
        return t.eta(&plays, &Value::Seq(Vec::new()));
    }
    let moves = elem.enumerate(t.cap())?;
    let mut f = Vec::with_capacity(moves.len());
    for x in &moves {
        f.push(teps(j, elem, omega, eps, &q.shift(x), &snoc(s, x))?);
    }
    let ctx = j.context(elem, |x| {
        let i = elem.rank(x)? as usize;
        j.algebra().star(&plays, q.shift(x).rule(), &f[i])
    })?;
    let a = eps.at(s)?(&ctx)?;
    let elem2 = elem.clone();
    let f_rule: Rule<MVal> = Rc::new(move |x| Ok(f[elem2.rank(x)? as usize].clone()));
    let pairs = t.product(elem, &plays, &a, f_rule)?;
    t.map(
        &FinType::prod(elem.clone(), plays.clone()),
        &plays,
        Rc::new(|v| {
            let (x, r) = v.as_pair()?;
            let mut out = vec![x.clone()];
            out.extend_from_slice(r.as_seq()?);
            Ok(Value::Seq(out))
        }),
        &pairs,
    )
}

/// The selection monad whose outcomes are `T`-sets of infinite plays, with
/// the free algebra structure.
pub fn stream_monad(j: &JMonad, elem: &FinType, max_prefix: usize) -> Result<JMonad> {
    Ok(JMonad::new(Algebra::free(
        j.base().clone(),
        FinType::stream(elem.clone(), max_prefix),
    )?))
}

/// `ε^q_s(p) = ε_s(λx. ((q_{s*x})* ∘ T(drop_{|s*x|}))(p x))` for an
/// absolute outcome `q` on infinite sequences. Contexts `p` map moves to
/// `T`-sets of absolute infinite plays.
pub fn transform_selection(
    j: &JMonad,
    elem: &FinType,
    eps: &Family,
    q: &StreamOutcome,
    max_prefix: usize,
    mutation: Option<Mutation>,
) -> Family {
    let (j, elem, eps, q) = (j.clone(), elem.clone(), eps.clone(), q.clone());
    let streams = FinType::stream(elem.clone(), max_prefix);
    let corrupt = mutation == Some(Mutation::CorruptTransform);
    Family::new(move |s| {
        let inner = eps.at(s)?;
        let (j, elem, q, streams, s) = (
            j.clone(),
            elem.clone(),
            q.clone(),
            streams.clone(),
            s.to_vec(),
        );
        Ok(Rc::new(move |p: &Value| {
            let p = p.as_fun()?;
            let ctx = j.context(&elem, |x| {
                let sx = snoc(&s, x);
                let n = if corrupt { s.len() } else { sx.len() };
                let dropped = j.base().map(
                    &streams,
                    &streams,
                    Rc::new(move |b| Ok(Value::Stream(b.as_stream()?.drop_prefix(n)))),
                    &MVal::Data(p.apply(x)?),
                )?;
                let q2 = q.clone();
                let shifted: Rule = Rc::new(move |b| q2(&b.as_stream()?.add_items(&sx)));
                j.algebra().star(&streams, shifted, &dropped)
            })?;
            inner(&ctx)
        }) as Selection)
    })
}

/// The outcome `s ↦ η(s^+)` on finite plays, into `T`-sets of streams.
pub fn unit_outcome(j: &JMonad, elem: &FinType, max_prefix: usize) -> Outcome {
    let (t, elem) = (j.base().clone(), elem.clone());
    let streams = FinType::stream(elem.clone(), max_prefix);
    Outcome::new(move |s| {
        t.eta(&streams, &Value::Stream(EvSeq::extend(&elem, s)))?
            .into_data()
    })
}

/// The shortest prefix of `beta` that lies on the bar.
pub fn first_bar(omega: &StoppingFunction, beta: &EvSeq) -> Result<Value> {
    for n in 0..omega.guard() {
        let w = beta.window(n);
        if omega.at_bar(beta.elem(), &w)? {
            return Ok(Value::Seq(w));
        }
    }
    Err(Error::DepthExceeded {
        guard: omega.guard(),
        length: omega.guard(),
    })
}

/// `T-EPS^ω_⟨⟩(ε)(q)` computed as `EPQ^ω_⟨⟩(s ↦ bar(ε^q_s))(η)`.
///
/// EPQ yields `T`-sets of infinite plays `r^+`; each is read back as the
/// finite play `r`, its shortest prefix on the bar.
pub fn teps_via_epq(
    j: &JMonad,
    elem: &FinType,
    omega: &StoppingFunction,
    eps: &Family,
    q: &StreamOutcome,
    mutation: Option<Mutation>,
) -> Result<MVal> {
    let d = omega.guard();
    let jq = stream_monad(j, elem, d)?;
    let eq = transform_selection(j, elem, eps, q, d, mutation);
    let phi = QuantifierFamily::bars(&jq, elem, &eq);
    let eta = unit_outcome(j, elem, d);
    let v = epq(elem, jq.outcome(), omega, &phi, &eta, &[], j.base().cap())?;
    let streams = FinType::stream(elem.clone(), d);
    let omega2 = omega.clone();
    j.base().map(
        &streams,
        &play_type(elem, omega),
        Rc::new(move |b| first_bar(&omega2, b.as_stream()?)),
        &MVal::Data(v),
    )
}
