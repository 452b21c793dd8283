//! Bar recursion over the finite powerset monad and the witnesses it
//! computes for the Herbrand interpretation of the double negation shift.
//!
//! Given `δ`, `φ` and `q` the game is `ε_n(p) = δ·n·{p}`,
//! `q̂(s) = q·(s^+)` and `ω(β) = max(φ·β)`. With `t` the set of plays
//! produced from the root, the witnesses are `α = {s^+ : s ∈ t}`,
//! `P = {p_r : r ⪯ s ∈ t}` and `N = 1 + max{|s| : s ∈ t}`.
//!
//! Read literally, the premise over `P` can hold vacuously when a branch
//! dies (some `ε` returns `∅` below a position the chain must pass), and
//! then `α` may be too small. The checker therefore also quantifies over
//! the contexts `p_r` of such dead branches; see [`Witnesses`].

pub mod check;
mod instance;
mod lemmas;

pub use instance::{generate_case, generate_instance, parse_instance, DnsBounds, DnsInstance};
pub use lemmas::{admissible_chains, check_bar_lemmas, check_lemma, Lemma, LemmaOutcome};

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use serde_json::{json, Value as Json};

use crate::bar_recursion::{Family, Outcome, StoppingFunction};
use crate::error::{Error, Result};
use crate::monad::MVal;
use crate::selection::Selection;
use crate::universe::json::encode;
use crate::universe::{EvSeq, FinType, FunTable, Value, DEFAULT_CAP};

/// A set of finite plays, each relative to the position it was computed at.
pub type Plays = BTreeSet<Vec<Value>>;

/// `hBR` for one game, memoized by position.
///
/// The outcome `q` is absolute: at position `s` the continuation `q_s` is
/// `r ↦ q(s * r)`. Both the plays below `s` and the context `p_s` are cached
/// per position; the cache lives only as long as this value.
pub struct HerbrandBar {
    elem: FinType,
    counter: FinType,
    omega: StoppingFunction,
    eps: Family,
    q: Outcome,
    plays: RefCell<BTreeMap<Vec<Value>, Rc<Plays>>>,
    contexts: RefCell<BTreeMap<Vec<Value>, FunTable>>,
}

impl HerbrandBar {
    /// `counter` is `R'`; outcomes and context values are subsets of it.
    pub fn new(
        elem: FinType,
        counter: FinType,
        omega: StoppingFunction,
        eps: Family,
        q: Outcome,
    ) -> Self {
        HerbrandBar {
            elem,
            counter,
            omega,
            eps,
            q,
            plays: RefCell::new(BTreeMap::new()),
            contexts: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn elem(&self) -> &FinType {
        &self.elem
    }

    pub fn omega(&self) -> &StoppingFunction {
        &self.omega
    }

    /// `ω(s^+) < |s|`.
    pub fn at_bar(&self, s: &[Value]) -> Result<bool> {
        self.omega.at_bar(&self.elem, s)
    }

    /// `q̂(s)` as a set.
    pub fn outcome(&self, s: &[Value]) -> Result<BTreeSet<Value>> {
        self.q.apply(s)?.into_set()
    }

    /// `hBR_s(q_s)`: `{⟨⟩}` at the bar, otherwise
    /// `{a * r : a ∈ χ_s, r ∈ hBR_{s*a}(q_{s*a})}` with `χ_s = ε_s(p_s)`.
    pub fn hbr(&self, s: &[Value]) -> Result<Rc<Plays>> {
        if let Some(hit) = self.plays.borrow().get(s) {
            return Ok(hit.clone());
        }
        let out = if self.omega.stops(&self.elem, s)? {
            BTreeSet::from([Vec::new()])
        } else {
            let mut out = BTreeSet::new();
            for a in self.choose(s)? {
                let sa = snoc(s, &a);
                for r in self.hbr(&sa)?.iter() {
                    let mut play = Vec::with_capacity(r.len() + 1);
                    play.push(a.clone());
                    play.extend_from_slice(r);
                    out.insert(play);
                }
            }
            out
        };
        let out = Rc::new(out);
        self.plays.borrow_mut().insert(s.to_vec(), out.clone());
        Ok(out)
    }

    /// `p_s(y) = ⋃{q̂(s * y * r) : r ∈ hBR_{s*y}(q_{s*y})}`.
    pub fn context(&self, s: &[Value]) -> Result<FunTable> {
        if let Some(hit) = self.contexts.borrow().get(s) {
            return Ok(hit.clone());
        }
        let cod = FinType::pow(self.counter.clone());
        let table = FunTable::tabulate(&self.elem, &cod, DEFAULT_CAP, |y| {
            let sy = snoc(s, y);
            let mut acc = BTreeSet::new();
            for r in self.hbr(&sy)?.iter() {
                let mut full = sy.clone();
                full.extend_from_slice(r);
                acc.extend(self.outcome(&full)?);
            }
            Ok(Value::Set(acc))
        })?;
        self.contexts.borrow_mut().insert(s.to_vec(), table.clone());
        Ok(table)
    }

    /// `χ_s = ε_s(p_s)`.
    pub fn choose(&self, s: &[Value]) -> Result<BTreeSet<Value>> {
        let p = self.context(s)?;
        self.eps.at(s)?(&Value::Fun(p))?.into_data()?.into_set()
    }
}

fn snoc(s: &[Value], x: &Value) -> Vec<Value> {
    let mut v = s.to_vec();
    v.push(x.clone());
    v
}

/// `hBR^ω_s(ε)(q_s)` for an absolute outcome `q`.
pub fn hbr(
    elem: &FinType,
    counter: &FinType,
    omega: &StoppingFunction,
    eps: &Family,
    q: &Outcome,
    s: &[Value],
) -> Result<Plays> {
    let h = HerbrandBar::new(
        elem.clone(),
        counter.clone(),
        omega.clone(),
        eps.clone(),
        q.clone(),
    );
    Ok((*h.hbr(s)?).clone())
}

/// The game an instance induces: `ε_s = δ·|s|·{·}`, `q̂(s) = q·(s^+)`,
/// `ω(β) = max(φ·β)` with `max ∅ = 0`, and stopping bound `B`.
#[derive(Clone)]
pub struct DnsGame {
    pub elem: FinType,
    pub counter: FinType,
    pub omega: StoppingFunction,
    pub eps: Family,
    pub q_hat: Outcome,
}

impl DnsGame {
    pub fn herbrand_bar(&self) -> HerbrandBar {
        HerbrandBar::new(
            self.elem.clone(),
            self.counter.clone(),
            self.omega.clone(),
            self.eps.clone(),
            self.q_hat.clone(),
        )
    }
}

/// `φ·β`: the union of every member of `φ` applied to `β`.
pub fn phi_at(inst: &DnsInstance, beta: &EvSeq) -> Result<BTreeSet<Value>> {
    union_at(inst.phi(), beta)
}

/// `q·β`.
pub fn q_at(inst: &DnsInstance, beta: &EvSeq) -> Result<BTreeSet<Value>> {
    union_at(inst.q(), beta)
}

fn union_at(fs: &[crate::universe::SeqFun], beta: &EvSeq) -> Result<BTreeSet<Value>> {
    let mut out = BTreeSet::new();
    for f in fs {
        out.extend(f.apply(beta)?.into_set()?);
    }
    Ok(out)
}

pub fn derive_game(inst: &DnsInstance) -> DnsGame {
    let elem = inst.elem();
    let shared = Rc::new(inst.clone());

    let i = shared.clone();
    let omega = StoppingFunction::new(inst.bound() as usize, move |beta| {
        Ok(phi_at(&i, beta)?
            .iter()
            .map(|v| v.as_base().map(u64::from))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(0))
    });

    let i = shared.clone();
    let eps = Family::new(move |s| {
        let (i, n) = (i.clone(), s.len());
        Ok(Rc::new(move |p: &Value| Ok(MVal::Data(i.eps(n, p)?))) as Selection)
    });

    let i = shared;
    let e = elem.clone();
    let q_hat = Outcome::new(move |s| Ok(Value::Set(q_at(&i, &EvSeq::extend(&e, s))?)));

    DnsGame {
        elem,
        counter: inst.counter_type(),
        omega,
        eps,
        q_hat,
    }
}

/// `p_r` for the instance's game.
pub fn compute_pr(game: &DnsGame, r: &[Value]) -> Result<FunTable> {
    game.herbrand_bar().context(r)
}

/// The computed witnesses.
///
/// `dead_contexts` holds `p_r` for every position `r` a premise-driven
/// chain can reach off the bar where `hBR_r` is empty; such `r` is a prefix
/// of no member of `t`, so `p_r` is not in `P`. The premise is checked for
/// `n ≤ premise_depth` over `P` together with these contexts.
#[derive(Clone, Debug, PartialEq)]
pub struct Witnesses {
    pub t: Plays,
    pub alpha: BTreeSet<EvSeq>,
    /// `p_r` keyed by `r`, for every prefix `r` of a member of `t`.
    pub contexts: BTreeMap<Vec<Value>, FunTable>,
    /// `1 + max{|s| : s ∈ t}`, and 1 when `t` is empty.
    pub n: usize,
    pub dead_contexts: BTreeMap<Vec<Value>, FunTable>,
    pub premise_depth: usize,
}

impl Witnesses {
    /// `P` as a set of tables.
    pub fn big_p(&self) -> BTreeSet<FunTable> {
        self.contexts.values().cloned().collect()
    }

    /// `P` together with the dead-branch contexts.
    pub fn premise_contexts(&self) -> BTreeSet<FunTable> {
        self.contexts
            .values()
            .chain(self.dead_contexts.values())
            .cloned()
            .collect()
    }

    pub fn to_json(&self) -> Json {
        let seqs = |ks: &BTreeMap<Vec<Value>, FunTable>| {
            ks.iter()
                .map(|(r, p)| json!({"r": encode(&Value::Seq(r.clone())), "p": encode(&Value::Fun(p.clone()))}))
                .collect::<Vec<_>>()
        };
        json!({
            "t": self.t.iter().map(|s| encode(&Value::Seq(s.clone()))).collect::<Vec<_>>(),
            "alpha": self.alpha.iter().map(|b| encode(&Value::Stream(b.clone()))).collect::<Vec<_>>(),
            "P": seqs(&self.contexts),
            "N": self.n,
            "dead_contexts": seqs(&self.dead_contexts),
            "premise_depth": self.premise_depth,
        })
    }
}

fn depth_error(e: Error) -> Error {
    match e {
        Error::DepthExceeded { guard, length } => Error::invariant(
            "$.phi",
            format!("recursion passed the depth guard {guard} at length {length}; ω exceeds B"),
        ),
        other => other,
    }
}

pub fn witnesses(inst: &DnsInstance) -> Result<Witnesses> {
    witnesses_in(&derive_game(inst).herbrand_bar()).map_err(depth_error)
}

fn witnesses_in(h: &HerbrandBar) -> Result<Witnesses> {
    let t = (*h.hbr(&[])?).clone();
    let alpha = t.iter().map(|s| EvSeq::extend(h.elem(), s)).collect();
    let mut contexts = BTreeMap::new();
    for s in &t {
        for i in 0..=s.len() {
            if !contexts.contains_key(&s[..i]) {
                contexts.insert(s[..i].to_vec(), h.context(&s[..i])?);
            }
        }
    }
    let n = 1 + t.iter().map(Vec::len).max().unwrap_or(0);
    let mut dead_contexts = BTreeMap::new();
    collect_dead(h, &mut Vec::new(), &mut dead_contexts)?;
    let premise_depth = dead_contexts.keys().map(Vec::len).fold(n, usize::max);
    Ok(Witnesses {
        t,
        alpha,
        contexts,
        n,
        dead_contexts,
        premise_depth,
    })
}

/// Walks every position reachable by choosing from `χ` while off the bar.
fn collect_dead(
    h: &HerbrandBar,
    r: &mut Vec<Value>,
    out: &mut BTreeMap<Vec<Value>, FunTable>,
) -> Result<()> {
    if h.at_bar(r)? {
        return Ok(());
    }
    if h.hbr(r)?.is_empty() {
        out.insert(r.clone(), h.context(r)?);
    }
    for a in h.choose(r)? {
        r.push(a);
        collect_dead(h, r, out)?;
        r.pop();
    }
    Ok(())
}

/// Result of checking one side of the implication.
#[derive(Clone, Debug, PartialEq)]
pub struct Side {
    pub holds: bool,
    pub evidence: Json,
}

/// `∀n ≤ depth ∀p ∈ contexts ∃a ∈ δ·n·{p} ∀b ∈ p(a) A_H(n, a, b)`.
fn premise_over(inst: &DnsInstance, depth: usize, contexts: &BTreeSet<FunTable>) -> Result<Side> {
    let mut choices = Vec::new();
    for n in 0..=depth {
        for p in contexts {
            let pv = Value::Fun(p.clone());
            let mut pick = None;
            for a in inst.eps(n, &pv)?.as_set()? {
                let mut ok = true;
                for b in p.apply(a)?.as_set()? {
                    if !inst.a_h(n, a, b)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    pick = Some(a.clone());
                    break;
                }
            }
            match pick {
                Some(a) => choices.push(json!([n, encode(&pv), encode(&a)])),
                None => {
                    return Ok(Side {
                        holds: false,
                        evidence: json!({"failing": [n, encode(&pv)]}),
                    })
                }
            }
        }
    }
    Ok(Side {
        holds: true,
        evidence: json!({"choices": choices}),
    })
}

/// The premise as the checker reads it: `n ≤ premise_depth`, `p` in `P` or
/// a dead-branch context.
pub fn check_premise(inst: &DnsInstance, w: &Witnesses) -> Result<Side> {
    premise_over(inst, w.premise_depth, &w.premise_contexts())
}

/// The premise exactly as displayed: `n ≤ N`, `p ∈ P`.
pub fn check_premise_literal(inst: &DnsInstance, w: &Witnesses) -> Result<Side> {
    premise_over(inst, w.n, &w.big_p())
}

/// `∃β ∈ α ∀i ∈ φ·β ∀b ∈ q·β A_H(i, β(i), b)`.
pub fn check_conclusion(inst: &DnsInstance, w: &Witnesses) -> Result<Side> {
    let mut failures = Vec::new();
    for beta in &w.alpha {
        let qs = q_at(inst, beta)?;
        let mut bad = None;
        'outer: for i in phi_at(inst, beta)? {
            let i = i.as_base()? as usize;
            for b in &qs {
                if !inst.a_h(i, beta.at(i), b)? {
                    bad = Some((i, b.clone()));
                    break 'outer;
                }
            }
        }
        match bad {
            None => {
                return Ok(Side {
                    holds: true,
                    evidence: json!({"beta": encode(&Value::Stream(beta.clone()))}),
                })
            }
            Some((i, b)) => failures.push(json!({
                "beta": encode(&Value::Stream(beta.clone())),
                "i": i,
                "b": encode(&b),
            })),
        }
    }
    Ok(Side {
        holds: false,
        evidence: json!({"failures": failures}),
    })
}

/// Everything computed while verifying one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct DnsVerdict {
    pub witnesses: Witnesses,
    pub premise: Side,
    pub premise_literal: Side,
    pub conclusion: Side,
}

impl DnsVerdict {
    /// premise → conclusion.
    pub fn holds(&self) -> bool {
        !self.premise.holds || self.conclusion.holds
    }

    /// The premise holds and actually constrains something.
    pub fn non_vacuous(&self) -> bool {
        self.premise.holds && !self.witnesses.contexts.is_empty()
    }

    /// The displayed premise holds while the conclusion fails. Only possible
    /// on instances with dead branches.
    pub fn literal_gap(&self) -> bool {
        self.premise_literal.holds && !self.conclusion.holds
    }

    pub fn to_json(&self) -> Json {
        json!({
            "holds": self.holds(),
            "witnesses": self.witnesses.to_json(),
            "premise": {"holds": self.premise.holds, "evidence": self.premise.evidence},
            "premise_literal": {"holds": self.premise_literal.holds},
            "conclusion": {"holds": self.conclusion.holds, "evidence": self.conclusion.evidence},
        })
    }
}

/// Computes witnesses and evaluates both sides of the implication.
pub fn verify_dns(inst: &DnsInstance) -> Result<DnsVerdict> {
    let w = witnesses(inst)?;
    Ok(DnsVerdict {
        premise: check_premise(inst, &w)?,
        premise_literal: check_premise_literal(inst, &w)?,
        conclusion: check_conclusion(inst, &w)?,
        witnesses: w,
    })
}

#[cfg(test)]
mod tests;
