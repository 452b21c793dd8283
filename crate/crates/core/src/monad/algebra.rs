use std::collections::BTreeSet;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::monad::{MVal, Monad, MonadKind, Rule, StrongMonad};
use crate::universe::{FinType, FunTable, Value};

/// How an algebra's star map is computed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// Carrier `T B` with star equal to the monad's bind.
    Free { base: FinType },
    /// Carrier `R` of the continuation monad, star `g*(t) = t(g)`.
    Evaluation,
}

/// A monad together with an algebra carrier and its star map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    monad: Monad,
    carrier: FinType,
    kind: AlgebraKind,
}

impl Algebra {
    /// The free algebra `T base`. Not offered for the continuation monad.
    pub fn free(monad: Monad, base: FinType) -> Result<Self> {
        if matches!(monad.kind(), MonadKind::Continuation(_)) {
            return Err(Error::Unsupported(
                "free algebras of the continuation monad".into(),
            ));
        }
        Ok(Algebra {
            carrier: monad.apply_type(&base),
            monad,
            kind: AlgebraKind::Free { base },
        })
    }

    /// `Pow(r_prime)` with star given by union of images.
    pub fn powerset(r_prime: FinType) -> Self {
        Algebra::free(Monad::powerset(), r_prime).expect("powerset is not a continuation")
    }

    /// Any type is an algebra of the identity monad.
    pub fn identity(r: FinType) -> Self {
        Algebra::free(Monad::identity(), r).expect("identity is not a continuation")
    }

    /// The outcome type of a continuation monad.
    pub fn evaluation(monad: Monad) -> Result<Self> {
        match monad.kind().clone() {
            MonadKind::Continuation(r) => Ok(Algebra {
                monad,
                carrier: r,
                kind: AlgebraKind::Evaluation,
            }),
            _ => Err(Error::Unsupported(format!(
                "evaluation algebra of the {} monad",
                monad.name()
            ))),
        }
    }

    pub fn monad(&self) -> &Monad {
        &self.monad
    }

    pub fn carrier(&self) -> &FinType {
        &self.carrier
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    /// `g*(t)` for `g: Y -> carrier`.
    pub fn star(&self, y_ty: &FinType, g: Rule, t: &MVal) -> Result<Value> {
        match &self.kind {
            AlgebraKind::Free { base } => {
                let f: Rule<MVal> = Rc::new(move |y| Ok(MVal::Data(g(y)?)));
                self.monad.bind(y_ty, base, f, t)?.into_data()
            }
            AlgebraKind::Evaluation => {
                let ctx = FunTable::tabulate(y_ty, &self.carrier, self.monad.cap(), |y| g(y))?;
                t.at(&Value::Fun(ctx))
            }
        }
    }
}

/// `g*(t)` for a table `g: Y -> carrier`.
pub fn alg_star(a: &Algebra, g: &FunTable, t: &Value) -> Result<Value> {
    if g.cod() != a.carrier() {
        return Err(Error::mismatch(format!(
            "star expects a map into {}, got one into {}",
            a.carrier(),
            g.cod()
        )));
    }
    let y_ty = g.dom().clone();
    a.monad().apply_type(&y_ty).check(t)?;
    let g = g.clone();
    a.star(&y_ty, Rc::new(move |y| g.apply(y)), &MVal::Data(t.clone()))
}

/// Union of a set of sets.
pub fn union_r(s: &Value) -> Result<Value> {
    let mut out = BTreeSet::new();
    for member in s.as_set()? {
        out.extend(member.as_set()?.iter().cloned());
    }
    Ok(Value::Set(out))
}
