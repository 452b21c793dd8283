//! T-selection functions `(X -> R) -> T X` for a monad `T` and a
//! `T`-algebra `R`, their monad structure, and the bar map into quantifiers
//! `(X -> R) -> R`.

pub mod laws;

use std::rc::Rc;

use crate::error::{Error, Result};
use crate::monad::{Algebra, MVal, Monad, Rule, StrongMonad};
use crate::universe::{FinType, FunTable, Value};
use crate::Mutation;

/// A selection function as a rule from contexts `p: X -> R` to `T X`.
pub type Selection = Rc<dyn Fn(&Value) -> Result<MVal>>;

/// A quantifier as a rule from contexts `p: X -> R` to `R`.
pub type Quantifier = Rule;

/// The selection monad over an algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JMonad {
    alg: Algebra,
    mutation: Option<Mutation>,
}

impl JMonad {
    pub fn new(alg: Algebra) -> Self {
        JMonad {
            alg,
            mutation: None,
        }
    }

    pub fn with_mutation(mut self, mutation: Option<Mutation>) -> Self {
        self.mutation = mutation;
        self
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn base(&self) -> &Monad {
        self.alg.monad()
    }

    pub fn outcome(&self) -> &FinType {
        self.alg.carrier()
    }

    /// The context type `X -> R`.
    pub fn context_type(&self, x: &FinType) -> FinType {
        FinType::fun(x.clone(), self.outcome().clone())
    }

    /// Tabulates a rule into a context `X -> R`.
    pub fn context(&self, x: &FinType, p: impl FnMut(&Value) -> Result<Value>) -> Result<Value> {
        Ok(Value::Fun(FunTable::tabulate(
            x,
            self.outcome(),
            self.base().cap(),
            p,
        )?))
    }

    /// `p*(t)` for a context `p`.
    pub fn star_ctx(&self, x: &FinType, p: &Value, t: &MVal) -> Result<Value> {
        let p = p.as_fun()?.clone();
        self.alg.star(x, Rc::new(move |v| p.apply(v)), t)
    }

    /// `ε̄(p) = p*(ε p)`.
    pub fn bar(&self, x: &FinType, eps: &Selection) -> Quantifier {
        let (j, x, eps) = (self.clone(), x.clone(), eps.clone());
        Rc::new(move |p| {
            let chosen = eps(p)?;
            if j.mutation == Some(Mutation::CorruptBar) {
                // Ignores the selection and evaluates at the default move.
                return p.as_fun()?.apply(&x.default_value());
            }
            j.star_ctx(&x, p, &chosen)
        })
    }

    /// `(ε ⊗ δ)(q) = a ⊗ f` with `f(x) = δ_x(q_x)` and
    /// `a = ε(λx. (q_x)*(f x))`.
    pub fn explicit_product(
        &self,
        x_ty: &FinType,
        y_ty: &FinType,
        eps: &Selection,
        delta: &Rule<Selection>,
    ) -> Selection {
        let (j, xt, yt, eps, delta) = (
            self.clone(),
            x_ty.clone(),
            y_ty.clone(),
            eps.clone(),
            delta.clone(),
        );
        Rc::new(move |q| {
            let q = q.as_fun()?.clone();
            let qx: Rule = {
                let (j, yt) = (j.clone(), yt.clone());
                Rc::new(move |x| j.context(&yt, |y| q.apply(&Value::pair(x.clone(), y.clone()))))
            };
            let f: Rule<MVal> = {
                let (qx, delta) = (qx.clone(), delta.clone());
                Rc::new(move |x| delta(x)?(&qx(x)?))
            };
            let ctx = j.context(&xt, |x| j.star_ctx(&yt, &qx(x)?, &f(x)?))?;
            let a = eps(&ctx)?;
            j.base().product(&xt, &yt, &a, f)
        })
    }
}

impl StrongMonad for JMonad {
    type Val = Selection;

    fn apply_type(&self, x: &FinType) -> FinType {
        FinType::fun(self.context_type(x), self.base().apply_type(x))
    }

    fn eta(&self, x_ty: &FinType, x: &Value) -> Result<Selection> {
        let unit = self.base().eta(x_ty, x)?;
        Ok(Rc::new(move |_p| Ok(unit.clone())))
    }

    /// `δ†(ε) = λp. (b_p)†(a_p)` with `b_p(x) = δ(x)(p)` and
    /// `a_p = ε(p* ∘ b_p)`.
    fn bind(
        &self,
        x_ty: &FinType,
        y_ty: &FinType,
        delta: Rule<Selection>,
        eps: &Selection,
    ) -> Result<Selection> {
        let (j, xt, yt, eps) = (self.clone(), x_ty.clone(), y_ty.clone(), eps.clone());
        Ok(Rc::new(move |p| {
            let ctx = j.context(&xt, |x| j.star_ctx(&yt, p, &delta(x)?(p)?))?;
            let a = eps(&ctx)?;
            let (delta2, p2) = (delta.clone(), p.clone());
            let b: Rule<MVal> = Rc::new(move |x| delta2(x)?(&p2));
            j.base().bind(&xt, &yt, b, &a)
        }))
    }
}

/// A selection function materialized as a table over all contexts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSelection {
    x: FinType,
    table: FunTable,
}

impl TSelection {
    /// Tabulates `body` over every context `X -> R`.
    pub fn from_fn(
        j: &JMonad,
        x: &FinType,
        body: impl FnMut(&Value) -> Result<Value>,
    ) -> Result<Self> {
        let table = FunTable::tabulate(
            &j.context_type(x),
            &j.base().apply_type(x),
            j.base().cap(),
            body,
        )?;
        Ok(TSelection {
            x: x.clone(),
            table,
        })
    }

    pub fn from_table(j: &JMonad, x: &FinType, table: FunTable) -> Result<Self> {
        if table.fun_type() != j.apply_type(x) {
            return Err(Error::mismatch(format!(
                "a selection over {x} needs type {}, got {}",
                j.apply_type(x),
                table.fun_type()
            )));
        }
        Ok(TSelection {
            x: x.clone(),
            table,
        })
    }

    fn from_rule(j: &JMonad, x: &FinType, s: &Selection) -> Result<Self> {
        TSelection::from_fn(j, x, |p| s(p)?.into_data())
    }

    pub fn elem_type(&self) -> &FinType {
        &self.x
    }

    pub fn table(&self) -> &FunTable {
        &self.table
    }

    pub fn apply(&self, p: &Value) -> Result<Value> {
        self.table.apply(p)
    }

    pub fn rule(&self) -> Selection {
        let t = self.table.clone();
        Rc::new(move |p| Ok(MVal::Data(t.apply(p)?)))
    }
}

/// The constant selection `λp. η(x)`.
pub fn jt_eta(j: &JMonad, x_ty: &FinType, x: &Value) -> Result<TSelection> {
    x_ty.check(x)?;
    TSelection::from_rule(j, x_ty, &j.eta(x_ty, x)?)
}

fn family_rule(delta: &[TSelection]) -> Rule<Selection> {
    let delta: Vec<TSelection> = delta.to_vec();
    Rc::new(move |x| {
        let i = x.as_base()? as usize;
        delta
            .get(i)
            .map(TSelection::rule)
            .ok_or_else(|| Error::mismatch(format!("no selection for move {x}")))
    })
}

fn check_family(x_ty: &FinType, delta: &[TSelection]) -> Result<FinType> {
    let n = x_ty.cardinality();
    if !matches!(x_ty, FinType::Base(_)) || n != Some(delta.len() as u64) {
        return Err(Error::mismatch(format!(
            "a family over {x_ty} needs one selection per base value, got {}",
            delta.len()
        )));
    }
    let y = delta
        .first()
        .map(|d| d.elem_type().clone())
        .ok_or_else(|| Error::mismatch("empty family"))?;
    if delta.iter().any(|d| *d.elem_type() != y) {
        return Err(Error::mismatch(
            "family members disagree on their move type",
        ));
    }
    Ok(y)
}

/// `δ†(ε)` for a family `δ` indexed by the base type of `ε`'s moves.
pub fn jt_bind(j: &JMonad, delta: &[TSelection], eps: &TSelection) -> Result<TSelection> {
    let x = eps.elem_type().clone();
    let y = check_family(&x, delta)?;
    let s = j.bind(&x, &y, family_rule(delta), &eps.rule())?;
    TSelection::from_rule(j, &y, &s)
}

/// `(ε ⊗ δ)(q)` computed from the explicit description in terms of the
/// product of `T`.
pub fn jt_product(
    j: &JMonad,
    eps: &TSelection,
    delta: &[TSelection],
    q: &FunTable,
) -> Result<Value> {
    let x = eps.elem_type().clone();
    let y = check_family(&x, delta)?;
    let expected = FinType::fun(FinType::prod(x.clone(), y.clone()), j.outcome().clone());
    if q.fun_type() != expected {
        return Err(Error::mismatch(format!(
            "outcome map must have type {expected}"
        )));
    }
    let s = j.explicit_product(&x, &y, &eps.rule(), &family_rule(delta));
    s(&Value::Fun(q.clone()))?.into_data()
}

/// The quantifier `p ↦ p*(ε p)`, tabulated over all contexts.
pub fn bar(j: &JMonad, eps: &TSelection) -> Result<FunTable> {
    let x = eps.elem_type();
    let q = j.bar(x, &eps.rule());
    FunTable::tabulate(&j.context_type(x), j.outcome(), j.base().cap(), |p| q(p))
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

    fn powerset_j(r_prime: u32) -> JMonad {
        JMonad::new(Algebra::powerset(b(r_prime)))
    }

    #[test]
    fn unit_is_constant_and_bars_to_evaluation() {
        let j = powerset_j(1);
        let e = jt_eta(&j, &b(2), &Value::Base(1)).unwrap();
        assert!(e.table().entries().iter().all(|v| *v == pb(&[1])));
        let q = bar(&j, &e).unwrap();
        for (p, v) in q.pairs() {
            assert_eq!(*v, p.as_fun().unwrap().apply(&Value::Base(1)).unwrap());
        }
        let id = JMonad::new(Algebra::identity(FinType::pow(b(1))));
        let e = jt_eta(&id, &b(2), &Value::Base(0)).unwrap();
        assert!(e.table().entries().iter().all(|v| *v == Value::Base(0)));
    }

    #[test]
    fn bar_of_full_selection_unions_images() {
        let j = powerset_j(2);
        let eps = TSelection::from_fn(&j, &b(2), |_| Ok(pb(&[0, 1]))).unwrap();
        let q = bar(&j, &eps).unwrap();
        let p = j
            .context(&b(2), |x| Ok(Value::singleton(x.clone())))
            .unwrap();
        assert_eq!(q.apply(&p).unwrap(), pb(&[0, 1]));
    }

    #[test]
    fn identity_bar_applies_context_to_choice() {
        let j = JMonad::new(Algebra::identity(FinType::pow(b(1))));
        // Choose 1 iff p(1) is nonempty.
        let eps = TSelection::from_fn(&j, &b(2), |p| {
            let p1 = p.as_fun()?.apply(&Value::Base(1))?;
            Ok(Value::Base(u32::from(!p1.as_set()?.is_empty())))
        })
        .unwrap();
        let q = bar(&j, &eps).unwrap();
        for (p, v) in q.pairs() {
            let pf = p.as_fun().unwrap();
            let choice = eps.apply(&p).unwrap();
            assert_eq!(*v, pf.apply(&choice).unwrap());
        }
    }

    #[test]
    fn explicit_product_example() {
        // ε ≡ {0,1}, δ_x ≡ p ↦ {x}, any q: result {(0,0), (1,1)}.
        let j = powerset_j(1);
        let eps = TSelection::from_fn(&j, &b(2), |_| Ok(pb(&[0, 1]))).unwrap();
        let delta: Vec<_> = (0..2)
            .map(|x| TSelection::from_fn(&j, &b(2), move |_| Ok(pb(&[x]))).unwrap())
            .collect();
        let xy = FinType::prod(b(2), b(2));
        let r = FinType::pow(b(1));
        for q in crate::universe::enumerate_functions(&xy, &r, 64).unwrap() {
            let got = jt_product(&j, &eps, &delta, &q).unwrap();
            let pair = |a, b| Value::pair(Value::Base(a), Value::Base(b));
            assert_eq!(got, Value::set([pair(0, 0), pair(1, 1)]));
        }
    }

    #[test]
    fn identity_product_is_classical() {
        // Classical product of selection functions, unfolded by hand.
        let r = FinType::pow(b(1));
        let j = JMonad::new(Algebra::identity(r.clone()));
        let pick_nonempty = |p: &Value| -> Result<Value> {
            let p1 = p.as_fun()?.apply(&Value::Base(1))?;
            Ok(Value::Base(u32::from(!p1.as_set()?.is_empty())))
        };
        let eps = TSelection::from_fn(&j, &b(2), pick_nonempty).unwrap();
        let delta = vec![
            TSelection::from_fn(&j, &b(2), |_| Ok(Value::Base(0))).unwrap(),
            TSelection::from_fn(&j, &b(2), pick_nonempty).unwrap(),
        ];
        let xy = FinType::prod(b(2), b(2));
        for q in crate::universe::enumerate_functions(&xy, &r, 64).unwrap() {
            let got = jt_product(&j, &eps, &delta, &q).unwrap();
            let qx = |x: u32| {
                j.context(&b(2), |y| q.apply(&Value::pair(Value::Base(x), y.clone())))
                    .unwrap()
            };
            let f = |x: u32| delta[x as usize].apply(&qx(x)).unwrap();
            let ctx = j
                .context(&b(2), |x| {
                    let x = x.as_base()?;
                    qx(x).as_fun()?.apply(&f(x))
                })
                .unwrap();
            let a = eps.apply(&ctx).unwrap();
            let a_i = a.as_base().unwrap();
            assert_eq!(got, Value::pair(a.clone(), f(a_i)));
        }
    }

    #[test]
    fn bind_with_unit_family_is_identity() {
        let j = powerset_j(1);
        let eps = TSelection::from_fn(&j, &b(2), |p| {
            let p0 = p.as_fun()?.apply(&Value::Base(0))?;
            Ok(if p0.as_set()?.is_empty() {
                pb(&[1])
            } else {
                pb(&[0, 1])
            })
        })
        .unwrap();
        let units: Vec<_> = (0..2)
            .map(|x| jt_eta(&j, &b(2), &Value::Base(x)).unwrap())
            .collect();
        assert_eq!(jt_bind(&j, &units, &eps).unwrap(), eps);
    }
}
