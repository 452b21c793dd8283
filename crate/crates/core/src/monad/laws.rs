//! Exhaustive checks of the monad, functor, algebra and product laws.
//!
//! Inputs are explored lazily (see [`crate::exhaust`]). Continuation values
//! are rules over contexts, so they are compared observationally: the
//! observing context is itself an explored input, which makes the comparison
//! extensional over every context.

use std::rc::Rc;

use serde_json::json;

use crate::error::Result;
use crate::exhaust::{expect_eq, explore, InputSpace, Probe};
use crate::monad::{Algebra, MVal, Monad, MonadKind, Rule, StrongMonad};
use crate::report::{CheckResult, Report};
use crate::universe::{json::encode, FinType, Value};

impl Monad {
    /// Input space for an arbitrary element of `T X`.
    pub(crate) fn elem_space(&self, name: &str, x: &FinType) -> InputSpace {
        match self.kind() {
            MonadKind::Continuation(r) => {
                InputSpace::table(name, FinType::fun(x.clone(), r.clone()), r.clone())
            }
            _ => InputSpace::value(name, self.apply_type(x)),
        }
    }

    pub(crate) fn elem_input(&self, p: &Probe, name: &str) -> Result<MVal> {
        Ok(match self.kind() {
            MonadKind::Continuation(_) => MVal::Rule(p.table(name)),
            _ => MVal::Data(p.value(name)?),
        })
    }

    /// Input space for an arbitrary map `X -> T Y`.
    pub(crate) fn kleisli_space(&self, name: &str, x: &FinType, y: &FinType) -> InputSpace {
        match self.kind() {
            MonadKind::Continuation(r) => InputSpace::table(
                name,
                FinType::prod(x.clone(), FinType::fun(y.clone(), r.clone())),
                r.clone(),
            ),
            _ => InputSpace::table(name, x.clone(), self.apply_type(y)),
        }
    }

    pub(crate) fn kleisli_input(&self, p: &Probe, name: &str) -> Rule<MVal> {
        match self.kind() {
            MonadKind::Continuation(_) => {
                let fam = p.family(name);
                Rc::new(move |x| {
                    let (fam, x) = (fam.clone(), x.clone());
                    Ok(MVal::Rule(Rc::new(move |ctx| fam(&x, ctx))))
                })
            }
            _ => {
                let t = p.table(name);
                Rc::new(move |x| Ok(MVal::Data(t(x)?)))
            }
        }
    }

    /// Extra inputs needed to observe an element of `T X`.
    pub(crate) fn observer_spaces(&self, name: &str, x: &FinType) -> Vec<InputSpace> {
        match self.kind() {
            MonadKind::Continuation(r) => {
                vec![InputSpace::value(name, FinType::fun(x.clone(), r.clone()))]
            }
            _ => vec![],
        }
    }

    pub(crate) fn observe(&self, p: &Probe, name: &str, v: &MVal) -> Result<Value> {
        match self.kind() {
            MonadKind::Continuation(_) => v.at(&p.value(name)?),
            _ => Ok(v.data()?.clone()),
        }
    }
}

fn spaces(mut base: Vec<InputSpace>, extra: Vec<InputSpace>) -> Vec<InputSpace> {
    base.extend(extra);
    base
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

fn card(t: &FinType) -> String {
    t.cardinality()
        .map_or_else(|| "?".into(), |c| c.to_string())
}

/// The canonical algebra used alongside each monad in the law suite.
pub fn canonical_algebra(m: &Monad, base: &FinType) -> Result<Algebra> {
    match m.kind() {
        MonadKind::Continuation(_) => Algebra::evaluation(m.clone()),
        _ => Algebra::free(m.clone(), base.clone()),
    }
}

/// Checks the monad laws, the functor laws, the algebra laws of the
/// canonical algebra on `z`, and the product identities, for `T` over `x`,
/// `y`, `z`. Law names carry the cardinalities of `x`, `y`, `z`.
pub fn check_monad_laws(m: &Monad, x: &FinType, y: &FinType, z: &FinType) -> Result<Report> {
    let tag = format!("{}({},{},{})", m.name(), card(x), card(y), card(z));
    let name = |law: &str| format!("monad/{tag}/{law}");
    let alg = canonical_algebra(m, z)?;
    let mut out = vec![
        check_unit_right(m, x, name("unit_right"))?,
        check_unit_left(m, x, y, name("unit_left"))?,
        check_assoc(m, x, y, z, name("assoc"))?,
        check_functor_id(m, x, name("functor_id"))?,
        check_functor_comp(m, x, y, z, name("functor_comp"))?,
        check_star_unit(&alg, y, name("algebra_unit"))?,
        check_star_bind(&alg, x, y, name("algebra_bind"))?,
        check_product_bind(m, x, y, z, name("product_bind"))?,
        check_product_star(&alg, x, y, name("product_star"))?,
    ];
    if matches!(m.kind(), MonadKind::Powerset) {
        out.push(check_powerset_product(
            m,
            x,
            y,
            name("product_comprehension"),
        )?);
    }
    Ok(Report::new(out))
}

/// `(η)†(t) = t`.
fn check_unit_right(m: &Monad, x: &FinType, law: String) -> Result<CheckResult> {
    let inputs = spaces(vec![m.elem_space("t", x)], m.observer_spaces("obs", x));
    run(law, inputs, |p| {
        let t = m.elem_input(p, "t")?;
        let m2 = m.clone();
        let xt = x.clone();
        let eta: Rule<MVal> = Rc::new(move |v| m2.eta(&xt, v));
        let lhs = m.bind(x, x, eta, &t)?;
        Ok(expect_eq(
            &m.observe(p, "obs", &lhs)?,
            &m.observe(p, "obs", &t)?,
        ))
    })
}

/// `f†(η(x)) = f(x)`.
fn check_unit_left(m: &Monad, x: &FinType, y: &FinType, law: String) -> Result<CheckResult> {
    let inputs = spaces(
        vec![
            InputSpace::value("x", x.clone()),
            m.kleisli_space("f", x, y),
        ],
        m.observer_spaces("obs", y),
    );
    run(law, inputs, |p| {
        let v = p.value("x")?;
        let f = m.kleisli_input(p, "f");
        let lhs = m.bind(x, y, f.clone(), &m.eta(x, &v)?)?;
        let rhs = f(&v)?;
        Ok(expect_eq(
            &m.observe(p, "obs", &lhs)?,
            &m.observe(p, "obs", &rhs)?,
        ))
    })
}

/// `(g† ∘ f)†(t) = g†(f†(t))`.
fn check_assoc(
    m: &Monad,
    x: &FinType,
    y: &FinType,
    z: &FinType,
    law: String,
) -> Result<CheckResult> {
    let inputs = spaces(
        vec![
            m.elem_space("t", x),
            m.kleisli_space("f", x, y),
            m.kleisli_space("g", y, z),
        ],
        m.observer_spaces("obs", z),
    );
    run(law, inputs, |p| {
        let t = m.elem_input(p, "t")?;
        let f = m.kleisli_input(p, "f");
        let g = m.kleisli_input(p, "g");
        let (m2, yt, zt, f2, g2) = (m.clone(), y.clone(), z.clone(), f.clone(), g.clone());
        let gf: Rule<MVal> = Rc::new(move |v| m2.bind(&yt, &zt, g2.clone(), &f2(v)?));
        let lhs = m.bind(x, z, gf, &t)?;
        let rhs = m.bind(y, z, g, &m.bind(x, y, f, &t)?)?;
        Ok(expect_eq(
            &m.observe(p, "obs", &lhs)?,
            &m.observe(p, "obs", &rhs)?,
        ))
    })
}

/// `T id = id`.
fn check_functor_id(m: &Monad, x: &FinType, law: String) -> Result<CheckResult> {
    let inputs = spaces(vec![m.elem_space("t", x)], m.observer_spaces("obs", x));
    run(law, inputs, |p| {
        let t = m.elem_input(p, "t")?;
        let lhs = m.map(x, x, Rc::new(|v| Ok(v.clone())), &t)?;
        Ok(expect_eq(
            &m.observe(p, "obs", &lhs)?,
            &m.observe(p, "obs", &t)?,
        ))
    })
}

/// `T(g ∘ f) = T g ∘ T f`.
fn check_functor_comp(
    m: &Monad,
    x: &FinType,
    y: &FinType,
    z: &FinType,
    law: String,
) -> Result<CheckResult> {
    let inputs = spaces(
        vec![
            m.elem_space("t", x),
            InputSpace::table("f", x.clone(), y.clone()),
            InputSpace::table("g", y.clone(), z.clone()),
        ],
        m.observer_spaces("obs", z),
    );
    run(law, inputs, |p| {
        let t = m.elem_input(p, "t")?;
        let (f, g) = (p.table("f"), p.table("g"));
        let (f2, g2) = (f.clone(), g.clone());
        let lhs = m.map(x, z, Rc::new(move |v| g2(&f2(v)?)), &t)?;
        let rhs = m.map(y, z, g, &m.map(x, y, f, &t)?)?;
        Ok(expect_eq(
            &m.observe(p, "obs", &lhs)?,
            &m.observe(p, "obs", &rhs)?,
        ))
    })
}

/// `g*(η(y)) = g(y)`.
fn check_star_unit(a: &Algebra, y: &FinType, law: String) -> Result<CheckResult> {
    let m = a.monad();
    let inputs = vec![
        InputSpace::value("y", y.clone()),
        InputSpace::table("g", y.clone(), a.carrier().clone()),
    ];
    run(law, inputs, |p| {
        let v = p.value("y")?;
        let g = p.table("g");
        let lhs = a.star(y, g.clone(), &m.eta(y, &v)?)?;
        Ok(expect_eq(&lhs, &g(&v)?))
    })
}

/// `(g* ∘ f)*(t) = g*(f†(t))`.
fn check_star_bind(a: &Algebra, x: &FinType, y: &FinType, law: String) -> Result<CheckResult> {
    let m = a.monad();
    let inputs = vec![
        m.elem_space("t", x),
        m.kleisli_space("f", x, y),
        InputSpace::table("g", y.clone(), a.carrier().clone()),
    ];
    run(law, inputs, |p| {
        let t = m.elem_input(p, "t")?;
        let f = m.kleisli_input(p, "f");
        let g = p.table("g");
        let (a2, yt, f2, g2) = (a.clone(), y.clone(), f.clone(), g.clone());
        let gf: Rule = Rc::new(move |v| a2.star(&yt, g2.clone(), &f2(v)?));
        let lhs = a.star(x, gf, &t)?;
        let rhs = a.star(y, g, &m.bind(x, y, f, &t)?)?;
        Ok(expect_eq(&lhs, &rhs))
    })
}

/// `q†(a ⊗ f) = (λx. (q_x)†(f x))†(a)` for `q: X × Y -> T Z`.
fn check_product_bind(
    m: &Monad,
    x: &FinType,
    y: &FinType,
    z: &FinType,
    law: String,
) -> Result<CheckResult> {
    let xy = FinType::prod(x.clone(), y.clone());
    let inputs = spaces(
        vec![
            m.elem_space("a", x),
            m.kleisli_space("f", x, y),
            m.kleisli_space("q", &xy, z),
        ],
        m.observer_spaces("obs", z),
    );
    run(law, inputs, |p| {
        let a = m.elem_input(p, "a")?;
        let f = m.kleisli_input(p, "f");
        let q = m.kleisli_input(p, "q");
        let lhs = m.bind(&xy, z, q.clone(), &m.product(x, y, &a, f.clone())?)?;
        let (m2, yt, zt) = (m.clone(), y.clone(), z.clone());
        let inner: Rule<MVal> = Rc::new(move |v| {
            let (q2, v2) = (q.clone(), v.clone());
            let qx: Rule<MVal> = Rc::new(move |w| q2(&Value::pair(v2.clone(), w.clone())));
            m2.bind(&yt, &zt, qx, &f(v)?)
        });
        let rhs = m.bind(x, z, inner, &a)?;
        Ok(expect_eq(
            &m.observe(p, "obs", &lhs)?,
            &m.observe(p, "obs", &rhs)?,
        ))
    })
}

/// `q*(a ⊗ f) = (λx. (q_x)*(f x))*(a)` for `q: X × Y -> R`.
fn check_product_star(a: &Algebra, x: &FinType, y: &FinType, law: String) -> Result<CheckResult> {
    let m = a.monad();
    let xy = FinType::prod(x.clone(), y.clone());
    let inputs = vec![
        m.elem_space("a", x),
        m.kleisli_space("f", x, y),
        InputSpace::table("q", xy.clone(), a.carrier().clone()),
    ];
    run(law, inputs, |p| {
        let t = m.elem_input(p, "a")?;
        let f = m.kleisli_input(p, "f");
        let q = p.table("q");
        let lhs = a.star(&xy, q.clone(), &m.product(x, y, &t, f.clone())?)?;
        let (a2, yt) = (a.clone(), y.clone());
        let inner: Rule = Rc::new(move |v| {
            let (q2, v2) = (q.clone(), v.clone());
            let qx: Rule = Rc::new(move |w| q2(&Value::pair(v2.clone(), w.clone())));
            a2.star(&yt, qx, &f(v)?)
        });
        let rhs = a.star(x, inner, &t)?;
        Ok(expect_eq(&lhs, &rhs))
    })
}

/// The generic product on finite sets equals `{(a, b) : a ∈ S, b ∈ f(a)}`.
fn check_powerset_product(m: &Monad, x: &FinType, y: &FinType, law: String) -> Result<CheckResult> {
    let inputs = vec![m.elem_space("S", x), m.kleisli_space("f", x, y)];
    run(law, inputs, |p| {
        let s = p.value("S")?;
        let f = p.table("f");
        let f2 = f.clone();
        let generic = m
            .product(
                x,
                y,
                &MVal::Data(s.clone()),
                Rc::new(move |v| Ok(MVal::Data(f2(v)?))),
            )?
            .into_data()?;
        let mut direct = std::collections::BTreeSet::new();
        for a in s.as_set()? {
            for b in f(a)?.as_set()? {
                direct.insert(Value::pair(a.clone(), b.clone()));
            }
        }
        Ok(expect_eq(&generic, &Value::Set(direct))
            .map(|d| json!({ "set": encode(&s), "mismatch": d })))
    })
}

/// Every size combination with `1 ≤ |X|, |Y|, |Z| ≤ max`.
pub fn size_grid(max: u32) -> Vec<(FinType, FinType, FinType)> {
    let mut out = Vec::new();
    for a in 1..=max {
        for b in 1..=max {
            for c in 1..=max {
                out.push((FinType::base(a), FinType::base(b), FinType::base(c)));
            }
        }
    }
    out
}
