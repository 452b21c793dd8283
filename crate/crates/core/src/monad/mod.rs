//! Strong monads over the finite universe: identity, finite powerset and
//! continuation into a fixed outcome type, with their algebras and the
//! generic binary product.
//!
//! Internally, monadic values of the continuation monad are rules over
//! contexts ([`MVal::Rule`]) so that nested binds stay cheap; the public
//! `m_*` functions take and return finite tables.

mod algebra;
pub mod laws;

use std::fmt;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::universe::{FinType, FunTable, Value, DEFAULT_CAP};
use crate::Mutation;

pub use algebra::{alg_star, union_r, Algebra, AlgebraKind};

/// A function from values, possibly failing.
pub type Rule<V = Value> = Rc<dyn Fn(&Value) -> Result<V>>;

/// A monadic value: finite data, or a rule over contexts for the
/// continuation monad.
#[derive(Clone)]
pub enum MVal {
    Data(Value),
    Rule(Rule),
}

impl MVal {
    pub fn data(&self) -> Result<&Value> {
        match self {
            MVal::Data(v) => Ok(v),
            MVal::Rule(_) => Err(Error::mismatch("expected data, found a rule over contexts")),
        }
    }

    pub fn into_data(self) -> Result<Value> {
        match self {
            MVal::Data(v) => Ok(v),
            MVal::Rule(_) => Err(Error::mismatch("expected data, found a rule over contexts")),
        }
    }

    /// Evaluates a context-indexed value at `ctx`. Data must be a table.
    pub fn at(&self, ctx: &Value) -> Result<Value> {
        match self {
            MVal::Rule(r) => r(ctx),
            MVal::Data(Value::Fun(t)) => t.apply(ctx),
            MVal::Data(v) => Err(Error::mismatch(format!(
                "{v} cannot be applied to a context"
            ))),
        }
    }
}

impl fmt::Debug for MVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MVal::Data(v) => write!(f, "Data({v})"),
            MVal::Rule(_) => f.write_str("Rule(..)"),
        }
    }
}

/// Unit, bind and the operations derived from them.
pub trait StrongMonad: Clone + 'static {
    type Val: Clone + 'static;

    /// The type `T X`.
    fn apply_type(&self, x: &FinType) -> FinType;

    fn eta(&self, x_ty: &FinType, x: &Value) -> Result<Self::Val>;

    /// `f†(t)` for `f: X -> T Y`.
    fn bind(
        &self,
        x_ty: &FinType,
        y_ty: &FinType,
        f: Rule<Self::Val>,
        t: &Self::Val,
    ) -> Result<Self::Val>;

    /// `T g (t)`, as `(η ∘ g)†(t)`.
    fn map(&self, x_ty: &FinType, y_ty: &FinType, g: Rule, t: &Self::Val) -> Result<Self::Val> {
        let m = self.clone();
        let y = y_ty.clone();
        let f: Rule<Self::Val> = Rc::new(move |x| m.eta(&y, &g(x)?));
        self.bind(x_ty, y_ty, f, t)
    }

    /// `a ⊗ f = (λx. (λy. η(x, y))†(f x))†(a)`.
    fn product(
        &self,
        x_ty: &FinType,
        y_ty: &FinType,
        a: &Self::Val,
        f: Rule<Self::Val>,
    ) -> Result<Self::Val> {
        let xy = FinType::prod(x_ty.clone(), y_ty.clone());
        let m = self.clone();
        let (yt, xyt) = (y_ty.clone(), xy.clone());
        let outer: Rule<Self::Val> = Rc::new(move |x| {
            let (m2, xyt2, x2) = (m.clone(), xyt.clone(), x.clone());
            let pair: Rule<Self::Val> =
                Rc::new(move |y| m2.eta(&xyt2, &Value::pair(x2.clone(), y.clone())));
            m.bind(&yt, &xyt, pair, &f(x)?)
        });
        self.bind(x_ty, &xy, outer, a)
    }
}

/// Which of the three monads.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonadKind {
    Identity,
    Powerset,
    /// `K_R X = (X -> R) -> R`.
    Continuation(FinType),
}

/// A monad instance with its enumeration cap and optional defect.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monad {
    kind: MonadKind,
    cap: u64,
    mutation: Option<Mutation>,
}

impl Monad {
    pub fn new(kind: MonadKind) -> Self {
        Monad {
            kind,
            cap: DEFAULT_CAP,
            mutation: None,
        }
    }

    pub fn identity() -> Self {
        Monad::new(MonadKind::Identity)
    }

    pub fn powerset() -> Self {
        Monad::new(MonadKind::Powerset)
    }

    pub fn continuation(r: FinType) -> Self {
        Monad::new(MonadKind::Continuation(r))
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_mutation(mut self, mutation: Option<Mutation>) -> Self {
        self.mutation = mutation;
        self
    }

    pub fn kind(&self) -> &MonadKind {
        &self.kind
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn mutation(&self) -> Option<Mutation> {
        self.mutation
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            MonadKind::Identity => "identity",
            MonadKind::Powerset => "powerset",
            MonadKind::Continuation(_) => "continuation",
        }
    }

    /// Recovers `X` from `T X`.
    pub fn element_type(&self, tx: &FinType) -> Result<FinType> {
        let bad = || Error::mismatch(format!("{tx} is not of the form {}(X)", self.name()));
        match (&self.kind, tx) {
            (MonadKind::Identity, t) => Ok(t.clone()),
            (MonadKind::Powerset, FinType::Pow(x)) => Ok((**x).clone()),
            (MonadKind::Continuation(r), FinType::Fun(ctx, r2)) if **r2 == *r => match &**ctx {
                FinType::Fun(x, r3) if **r3 == *r => Ok((**x).clone()),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }

    /// Turns a monadic value into finite data, tabulating rules over all
    /// contexts.
    pub fn force(&self, x_ty: &FinType, v: &MVal) -> Result<Value> {
        match (v, &self.kind) {
            (MVal::Data(d), _) => Ok(d.clone()),
            (MVal::Rule(r), MonadKind::Continuation(rt)) => {
                let ctx = FinType::fun(x_ty.clone(), rt.clone());
                Ok(Value::Fun(FunTable::tabulate(&ctx, rt, self.cap, |p| {
                    r(p)
                })?))
            }
            (MVal::Rule(_), _) => Err(Error::mismatch(format!(
                "{} values are never rules",
                self.name()
            ))),
        }
    }

    fn corrupt(&self) -> bool {
        self.mutation == Some(Mutation::CorruptBind)
    }
}

impl StrongMonad for Monad {
    type Val = MVal;

    fn apply_type(&self, x: &FinType) -> FinType {
        match &self.kind {
            MonadKind::Identity => x.clone(),
            MonadKind::Powerset => FinType::pow(x.clone()),
            MonadKind::Continuation(r) => {
                FinType::fun(FinType::fun(x.clone(), r.clone()), r.clone())
            }
        }
    }

    fn eta(&self, _x_ty: &FinType, x: &Value) -> Result<MVal> {
        Ok(match &self.kind {
            MonadKind::Identity => MVal::Data(x.clone()),
            MonadKind::Powerset => MVal::Data(Value::singleton(x.clone())),
            MonadKind::Continuation(_) => {
                let x = x.clone();
                MVal::Rule(Rc::new(move |p| p.as_fun()?.apply(&x)))
            }
        })
    }

    fn bind(&self, x_ty: &FinType, _y_ty: &FinType, f: Rule<MVal>, t: &MVal) -> Result<MVal> {
        match &self.kind {
            MonadKind::Identity => {
                if self.corrupt() {
                    f(&x_ty.default_value())
                } else {
                    f(t.data()?)
                }
            }
            MonadKind::Powerset => {
                let s = t.data()?.as_set()?;
                let keep = if self.corrupt() && s.len() >= 2 {
                    s.len() - 1
                } else {
                    s.len()
                };
                let mut out = std::collections::BTreeSet::new();
                for x in s.iter().take(keep) {
                    out.extend(f(x)?.into_data()?.into_set()?);
                }
                Ok(MVal::Data(Value::Set(out)))
            }
            MonadKind::Continuation(r) => {
                let (x_ty, r, cap, t) = (x_ty.clone(), r.clone(), self.cap, t.clone());
                let corrupt = self.corrupt();
                Ok(MVal::Rule(Rc::new(move |q| {
                    let q = if corrupt {
                        match q {
                            Value::Fun(tab) => Value::Fun(FunTable::constant(
                                tab.dom(),
                                &r,
                                r.default_value(),
                                cap,
                            )?),
                            other => other.clone(),
                        }
                    } else {
                        q.clone()
                    };
                    let ctx = FunTable::tabulate(&x_ty, &r, cap, |x| f(x)?.at(&q))?;
                    t.at(&Value::Fun(ctx))
                })))
            }
        }
    }
}

fn table_rule(f: &FunTable) -> Rule<MVal> {
    let f = f.clone();
    Rc::new(move |x| Ok(MVal::Data(f.apply(x)?)))
}

/// The unit `η(x)` as a finite value of `M(X)`.
pub fn m_eta(m: &Monad, x_ty: &FinType, x: &Value) -> Result<Value> {
    x_ty.check(x)?;
    m.force(x_ty, &m.eta(x_ty, x)?)
}

/// `f†(t)` for a table `f: X -> M(Y)`.
pub fn m_bind(m: &Monad, f: &FunTable, t: &Value) -> Result<Value> {
    let x_ty = f.dom().clone();
    let y_ty = m.element_type(f.cod())?;
    m.apply_type(&x_ty).check(t)?;
    let v = m.bind(&x_ty, &y_ty, table_rule(f), &MVal::Data(t.clone()))?;
    m.force(&y_ty, &v)
}

/// `M g (t)` for a table `g: X -> Y`.
pub fn m_map(m: &Monad, g: &FunTable, t: &Value) -> Result<Value> {
    let (x_ty, y_ty) = (g.dom().clone(), g.cod().clone());
    m.apply_type(&x_ty).check(t)?;
    let g = g.clone();
    let v = m.map(
        &x_ty,
        &y_ty,
        Rc::new(move |x| g.apply(x)),
        &MVal::Data(t.clone()),
    )?;
    m.force(&y_ty, &v)
}

/// `a ⊗ f` for a table `f: X -> M(Y)`.
pub fn m_product(m: &Monad, a: &Value, f: &FunTable) -> Result<Value> {
    let x_ty = f.dom().clone();
    let y_ty = m.element_type(f.cod())?;
    m.apply_type(&x_ty).check(a)?;
    let v = m.product(&x_ty, &y_ty, &MVal::Data(a.clone()), table_rule(f))?;
    m.force(&FinType::prod(x_ty, y_ty), &v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u32) -> FinType {
        FinType::base(n)
    }

    fn pb(items: &[u32]) -> Value {
        Value::base_set(items.iter().copied())
    }

    fn table(dom: FinType, cod: FinType, entries: Vec<Value>) -> FunTable {
        FunTable::new(dom, cod, entries).unwrap()
    }

    #[test]
    fn units() {
        assert_eq!(
            m_eta(&Monad::powerset(), &b(2), &Value::Base(1)).unwrap(),
            pb(&[1])
        );
        assert_eq!(
            m_eta(&Monad::identity(), &b(2), &Value::Base(0)).unwrap(),
            Value::Base(0)
        );
        let r = FinType::pow(b(1));
        let k = m_eta(&Monad::continuation(r.clone()), &b(1), &Value::Base(0)).unwrap();
        let k = k.as_fun().unwrap();
        for (p, v) in k.pairs() {
            assert_eq!(*v, p.as_fun().unwrap().apply(&Value::Base(0)).unwrap());
        }
        assert_eq!(k.entries().len(), 2);
    }

    #[test]
    fn powerset_bind_is_union_of_images() {
        let f = table(b(2), FinType::pow(b(2)), vec![pb(&[0, 1]), pb(&[1])]);
        assert_eq!(
            m_bind(&Monad::powerset(), &f, &pb(&[0])).unwrap(),
            pb(&[0, 1])
        );
        assert_eq!(m_bind(&Monad::powerset(), &f, &pb(&[])).unwrap(), pb(&[]));
        let g = table(b(2), b(2), vec![Value::Base(1), Value::Base(0)]);
        assert_eq!(
            m_bind(&Monad::identity(), &g, &Value::Base(0)).unwrap(),
            Value::Base(1)
        );
    }

    #[test]
    fn powerset_map() {
        let id = table(b(2), b(2), vec![Value::Base(0), Value::Base(1)]);
        let swap = table(b(2), b(2), vec![Value::Base(1), Value::Base(0)]);
        let m = Monad::powerset();
        assert_eq!(m_map(&m, &id, &pb(&[0, 1])).unwrap(), pb(&[0, 1]));
        assert_eq!(m_map(&m, &swap, &pb(&[0, 1])).unwrap(), pb(&[0, 1]));
        assert_eq!(m_map(&m, &swap, &pb(&[0])).unwrap(), pb(&[1]));
        assert_eq!(m_map(&m, &swap, &pb(&[])).unwrap(), pb(&[]));
    }

    #[test]
    fn products() {
        let f = table(b(2), FinType::pow(b(2)), vec![pb(&[1]), pb(&[])]);
        let m = Monad::powerset();
        let pair = |a, b| Value::pair(Value::Base(a), Value::Base(b));
        assert_eq!(
            m_product(&m, &pb(&[0, 1]), &f).unwrap(),
            Value::set([pair(0, 1)])
        );
        assert_eq!(m_product(&m, &pb(&[]), &f).unwrap(), Value::empty_set());
        let g = table(b(2), b(2), vec![Value::Base(1), Value::Base(0)]);
        assert_eq!(
            m_product(&Monad::identity(), &Value::Base(1), &g).unwrap(),
            pair(1, 0)
        );
    }

    #[test]
    fn continuation_bind_evaluates_pointwise() {
        // t = λp. p(0) over X = Base(2); f(x) = λq. q(1 - x); so f†(t)(q) = q(1).
        let r = FinType::pow(b(1));
        let k = Monad::continuation(r.clone());
        let t = m_eta(&k, &b(2), &Value::Base(0)).unwrap();
        let ky = k.apply_type(&b(2));
        let f = FunTable::tabulate(&b(2), &ky, 64, |x| {
            m_eta(&k, &b(2), &Value::Base(1 - x.as_base()?))
        })
        .unwrap();
        let got = m_bind(&k, &f, &t).unwrap();
        assert_eq!(got, m_eta(&k, &b(2), &Value::Base(1)).unwrap());
    }

    #[test]
    fn element_type_inverts_apply_type() {
        let r = FinType::pow(b(1));
        for m in [Monad::identity(), Monad::powerset(), Monad::continuation(r)] {
            let x = FinType::prod(b(2), b(3));
            assert_eq!(m.element_type(&m.apply_type(&x)).unwrap(), x);
        }
    }
}
