//! Exhaustive checks for the selection monad and the bar map.
//!
//! Selection functions are explored as lazy tables over contexts, and
//! compared by evaluating both sides at an explored observing context.

use std::rc::Rc;

use crate::error::Result;
use crate::exhaust::{expect_eq, explore, InputSpace, Probe};
use crate::monad::{MVal, Monad, Rule, StrongMonad};
use crate::report::{CheckResult, Report};
use crate::selection::{JMonad, Selection};
use crate::universe::{FinType, Value};

impl JMonad {
    fn elem_space(&self, name: &str, x: &FinType) -> InputSpace {
        InputSpace::table(name, self.context_type(x), self.base().apply_type(x))
    }

    fn elem_input(&self, p: &Probe, name: &str) -> Selection {
        let t = p.table(name);
        Rc::new(move |ctx| Ok(MVal::Data(t(ctx)?)))
    }

    fn kleisli_space(&self, name: &str, x: &FinType, y: &FinType) -> InputSpace {
        InputSpace::table(
            name,
            FinType::prod(x.clone(), self.context_type(y)),
            self.base().apply_type(y),
        )
    }

    fn kleisli_input(&self, p: &Probe, name: &str) -> Rule<Selection> {
        let fam = p.family(name);
        Rc::new(move |x| {
            let (fam, x) = (fam.clone(), x.clone());
            Ok(Rc::new(move |ctx: &Value| Ok(MVal::Data(fam(&x, ctx)?))) as Selection)
        })
    }

    fn observer(&self, name: &str, x: &FinType) -> InputSpace {
        InputSpace::value(name, self.context_type(x))
    }

    fn quantifiers(&self) -> Monad {
        Monad::continuation(self.outcome().clone()).with_cap(self.base().cap())
    }
}

fn observe(s: &Selection, p: &Probe) -> Result<Value> {
    s(&p.value("obs")?)?.into_data()
}

fn run(
    law: String,
    inputs: Vec<InputSpace>,
    property: impl FnMut(&Probe) -> Result<Option<serde_json::Value>>,
) -> Result<CheckResult> {
    Ok(CheckResult::from_exploration(
        law,
        explore(inputs, property)?,
    ))
}

/// Monad laws of the selection monad and the explicit product, for moves
/// `x`, `y`, `z`.
pub fn check_selection_laws(j: &JMonad, x: &FinType, y: &FinType, z: &FinType) -> Result<Report> {
    let name = |law: &str| format!("selection/{}/{law}", j.base().name());
    Ok(Report::new(vec![
        check_unit_right(j, x, name("unit_right"))?,
        check_unit_left(j, x, y, name("unit_left"))?,
        check_assoc(j, x, y, z, name("assoc"))?,
        check_explicit_product(j, x, y, name("explicit_product"))?,
    ]))
}

/// The bar map turns products into products of quantifiers and preserves
/// unit and bind.
pub fn check_bar_binary(j: &JMonad, x: &FinType, y: &FinType) -> Result<Report> {
    let name = |law: &str| format!("bar/{}/{law}", j.base().name());
    Ok(Report::new(vec![
        check_bar_product(j, x, y, name("product"))?,
        check_bar_unit(j, x, name("unit"))?,
        check_bar_bind(j, x, y, name("bind"))?,
    ]))
}

fn check_unit_right(j: &JMonad, x: &FinType, law: String) -> Result<CheckResult> {
    run(
        law,
        vec![j.elem_space("eps", x), j.observer("obs", x)],
        |p| {
            let eps = j.elem_input(p, "eps");
            let (j2, xt) = (j.clone(), x.clone());
            let eta: Rule<Selection> = Rc::new(move |v| j2.eta(&xt, v));
            let lhs = j.bind(x, x, eta, &eps)?;
            Ok(expect_eq(&observe(&lhs, p)?, &observe(&eps, p)?))
        },
    )
}

fn check_unit_left(j: &JMonad, x: &FinType, y: &FinType, law: String) -> Result<CheckResult> {
    let inputs = vec![
        InputSpace::value("x", x.clone()),
        j.kleisli_space("delta", x, y),
        j.observer("obs", y),
    ];
    run(law, inputs, |p| {
        let v = p.value("x")?;
        let delta = j.kleisli_input(p, "delta");
        let lhs = j.bind(x, y, delta.clone(), &j.eta(x, &v)?)?;
        Ok(expect_eq(&observe(&lhs, p)?, &observe(&delta(&v)?, p)?))
    })
}

fn check_assoc(
    j: &JMonad,
    x: &FinType,
    y: &FinType,
    z: &FinType,
    law: String,
) -> Result<CheckResult> {
    let inputs = vec![
        j.elem_space("eps", x),
        j.kleisli_space("delta", x, y),
        j.kleisli_space("gamma", y, z),
        j.observer("obs", z),
    ];
    run(law, inputs, |p| {
        let eps = j.elem_input(p, "eps");
        let delta = j.kleisli_input(p, "delta");
        let gamma = j.kleisli_input(p, "gamma");
        let (j2, yt, zt, d2, g2) = (
            j.clone(),
            y.clone(),
            z.clone(),
            delta.clone(),
            gamma.clone(),
        );
        let composed: Rule<Selection> = Rc::new(move |v| j2.bind(&yt, &zt, g2.clone(), &d2(v)?));
        let lhs = j.bind(x, z, composed, &eps)?;
        let rhs = j.bind(y, z, gamma, &j.bind(x, y, delta, &eps)?)?;
        Ok(expect_eq(&observe(&lhs, p)?, &observe(&rhs, p)?))
    })
}

/// The explicit product against the generic product built from unit and
/// bind of the selection monad.
fn check_explicit_product(
    j: &JMonad,
    x: &FinType,
    y: &FinType,
    law: String,
) -> Result<CheckResult> {
    let xy = FinType::prod(x.clone(), y.clone());
    let inputs = vec![
        j.elem_space("eps", x),
        j.kleisli_space("delta", x, y),
        j.observer("obs", &xy),
    ];
    run(law, inputs, |p| {
        let eps = j.elem_input(p, "eps");
        let delta = j.kleisli_input(p, "delta");
        let explicit = j.explicit_product(x, y, &eps, &delta);
        let generic = j.product(x, y, &eps, delta)?;
        Ok(expect_eq(&observe(&explicit, p)?, &observe(&generic, p)?))
    })
}

fn check_bar_product(j: &JMonad, x: &FinType, y: &FinType, law: String) -> Result<CheckResult> {
    let xy = FinType::prod(x.clone(), y.clone());
    let k = j.quantifiers();
    let inputs = vec![
        j.elem_space("eps", x),
        j.kleisli_space("delta", x, y),
        j.observer("obs", &xy),
    ];
    run(law, inputs, |p| {
        let eps = j.elem_input(p, "eps");
        let delta = j.kleisli_input(p, "delta");
        let q = p.value("obs")?;
        let lhs = j.bar(&xy, &j.explicit_product(x, y, &eps, &delta))(&q)?;
        let (j2, yt) = (j.clone(), y.clone());
        let bars: Rule<MVal> = Rc::new(move |v| Ok(MVal::Rule(j2.bar(&yt, &delta(v)?))));
        let rhs = k.product(x, y, &MVal::Rule(j.bar(x, &eps)), bars)?.at(&q)?;
        Ok(expect_eq(&lhs, &rhs))
    })
}

fn check_bar_unit(j: &JMonad, x: &FinType, law: String) -> Result<CheckResult> {
    let k = j.quantifiers();
    let inputs = vec![InputSpace::value("x", x.clone()), j.observer("obs", x)];
    run(law, inputs, |p| {
        let v = p.value("x")?;
        let q = p.value("obs")?;
        let lhs = j.bar(x, &j.eta(x, &v)?)(&q)?;
        let rhs = k.eta(x, &v)?.at(&q)?;
        Ok(expect_eq(&lhs, &rhs))
    })
}

fn check_bar_bind(j: &JMonad, x: &FinType, y: &FinType, law: String) -> Result<CheckResult> {
    let k = j.quantifiers();
    let inputs = vec![
        j.elem_space("eps", x),
        j.kleisli_space("delta", x, y),
        j.observer("obs", y),
    ];
    run(law, inputs, |p| {
        let eps = j.elem_input(p, "eps");
        let delta = j.kleisli_input(p, "delta");
        let q = p.value("obs")?;
        let lhs = j.bar(y, &j.bind(x, y, delta.clone(), &eps)?)(&q)?;
        let (j2, yt) = (j.clone(), y.clone());
        let bars: Rule<MVal> = Rc::new(move |v| Ok(MVal::Rule(j2.bar(&yt, &delta(v)?))));
        let rhs = k.bind(x, y, bars, &MVal::Rule(j.bar(x, &eps)))?.at(&q)?;
        Ok(expect_eq(&lhs, &rhs))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::Algebra;
    use crate::Mutation;

    fn b(n: u32) -> FinType {
        FinType::base(n)
    }

    fn instances() -> Vec<JMonad> {
        vec![
            JMonad::new(Algebra::identity(FinType::pow(b(1)))),
            JMonad::new(Algebra::powerset(b(1))),
        ]
    }

    #[test]
    fn selection_laws_hold() {
        for j in instances() {
            let r = check_selection_laws(&j, &b(2), &b(2), &b(2)).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn bar_laws_hold() {
        for j in instances() {
            let r = check_bar_binary(&j, &b(2), &b(2)).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.checks.iter().all(|c| c.cases > 0));
        }
    }

    #[test]
    fn corrupted_bar_is_caught() {
        for j in instances() {
            let j = j.with_mutation(Some(Mutation::CorruptBar));
            let r = check_bar_binary(&j, &b(2), &b(2)).unwrap();
            let fails: Vec<_> = r.failures().collect();
            assert!(!fails.is_empty());
            assert!(fails.iter().all(|c| c.counterexample.is_some()));
        }
    }
}
