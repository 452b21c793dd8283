//! Seeded equivalence checks between the different iterated products.

use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::bar_recursion::{
    epq, stream_monad, teps, teps_via_epq, transform_selection, unit_outcome, Family, Outcome,
    QuantifierFamily, StoppingFunction, StreamOutcome,
};
use crate::error::Result;
use crate::gen;
use crate::monad::{MonadKind, StrongMonad};
use crate::report::{CheckResult, Tally};
use crate::selection::{JMonad, TSelection};
use crate::universe::{enumerate_seqs, json::encode, FinType, FunTable, SeqFun, Value};
use crate::Mutation;

/// Which equality to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equivalence {
    /// `q*(T-EPS(ε)(q)) = EPQ(bar ∘ ε)(q)`.
    BarFull,
    /// `T-EPS(ε)(q) = T-EPS(ε^q)(η)`.
    SpectorSim,
    /// T-EPS computed through EPQ equals T-EPS.
    Definability,
}

impl Equivalence {
    pub const ALL: [Equivalence; 3] = [
        Equivalence::BarFull,
        Equivalence::SpectorSim,
        Equivalence::Definability,
    ];
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equivalence::BarFull => "bar_full",
            Equivalence::SpectorSim => "spector_sim",
            Equivalence::Definability => "definability",
        })
    }
}

/// Sizes for sampled games.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivBounds {
    /// `|X|`.
    pub moves: u32,
    /// `|R'|`, with outcomes in `Pow(R')`.
    pub r_prime: u32,
    /// Largest declared stopping bound; each case draws its own bound up to
    /// this.
    pub omega_max: usize,
    pub cases: u64,
}

impl Default for EquivBounds {
    fn default() -> Self {
        EquivBounds {
            moves: 2,
            r_prime: 1,
            omega_max: 2,
            cases: 200,
        }
    }
}

/// One sampled game: stopping function, selection functions at every
/// position that can be off the bar, and outcome functions on finite and on
/// infinite plays.
#[derive(Clone, Debug, PartialEq)]
pub struct GameSample {
    pub elem: FinType,
    pub omega_max: usize,
    pub omega: SeqFun,
    pub eps: BTreeMap<Vec<Value>, FunTable>,
    pub q_finite: FunTable,
    pub q_stream: SeqFun,
}

impl GameSample {
    pub fn generate(rng: &mut impl Rng, j: &JMonad, bounds: &EquivBounds) -> Result<Self> {
        let elem = FinType::base(bounds.moves);
        let r = j.outcome().clone();
        let cap = j.base().cap();
        let omega_max = rng.gen_range(0..=bounds.omega_max);
        let lookahead = omega_max + 1;
        let stop_ty = FinType::base(omega_max as u32 + 1);
        let omega = SeqFun::tabulate(elem.clone(), lookahead, stop_ty.clone(), |_| {
            gen::value(rng, &stop_ty)
        })?;
        let tx = j.base().apply_type(&elem);
        let mut eps = BTreeMap::new();
        for s in enumerate_seqs(&elem, omega_max, cap)? {
            let table =
                FunTable::tabulate(&j.context_type(&elem), &tx, cap, |_| gen::value(rng, &tx))?;
            eps.insert(s.items().to_vec(), table);
        }
        let plays = FinType::seq(elem.clone(), lookahead);
        let q_finite = FunTable::tabulate(&plays, &r, cap, |_| gen::value(rng, &r))?;
        let q_stream =
            SeqFun::tabulate(elem.clone(), lookahead, r.clone(), |_| gen::value(rng, &r))?;
        Ok(GameSample {
            elem,
            omega_max,
            omega,
            eps,
            q_finite,
            q_stream,
        })
    }

    pub fn stopping(&self) -> StoppingFunction {
        StoppingFunction::from_seqfun(self.omega_max, self.omega.clone())
    }

    pub fn family(&self, j: &JMonad) -> Result<Family> {
        let tables = self
            .eps
            .iter()
            .map(|(s, t)| Ok((s.clone(), TSelection::from_table(j, &self.elem, t.clone())?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Family::from_tables(tables))
    }

    pub fn outcome_finite(&self) -> Outcome {
        Outcome::from_table(self.q_finite.clone())
    }

    pub fn outcome_stream(&self) -> StreamOutcome {
        let q = self.q_stream.clone();
        Rc::new(move |b| q.apply(b))
    }

    pub fn to_json(&self) -> Json {
        json!({
            "omega_max": self.omega_max,
            "omega": self.omega.to_json(),
            "eps": self.eps.iter().map(|(s, t)| {
                json!([Json::Array(s.iter().map(encode).collect()), encode(&Value::Fun(t.clone()))])
            }).collect::<Vec<_>>(),
            "q_finite": encode(&Value::Fun(self.q_finite.clone())),
            "q_stream": self.q_stream.to_json(),
        })
    }
}

/// The selection monad used for sampled games of kind `kind`.
pub fn game_monad(kind: &MonadKind, bounds: &EquivBounds) -> Result<JMonad> {
    use crate::monad::{Algebra, Monad};
    let r = FinType::pow(FinType::base(bounds.r_prime));
    match kind {
        MonadKind::Identity => Ok(JMonad::new(Algebra::identity(r))),
        MonadKind::Powerset => Ok(JMonad::new(Algebra::powerset(FinType::base(
            bounds.r_prime,
        )))),
        MonadKind::Continuation(_) => Algebra::free(Monad::new(kind.clone()), r).map(JMonad::new),
    }
}

/// Runs case `case` of an equivalence check; `Some` carries the failure.
pub fn equivalence_case(
    which: Equivalence,
    j: &JMonad,
    bounds: &EquivBounds,
    seed: u64,
    case: u64,
    mutation: Option<Mutation>,
) -> Result<Option<Json>> {
    let label = format!("equiv/{which}/{}", j.base().name());
    let mut rng = gen::case_rng(seed, &label, case);
    let g = GameSample::generate(&mut rng, j, bounds)?;
    let omega = g.stopping();
    let eps = g.family(j)?;
    let elem = &g.elem;
    let (lhs, rhs) = match which {
        Equivalence::BarFull => {
            let q = g.outcome_finite();
            let plays = teps(j, elem, &omega, &eps, &q, &[])?;
            let lhs = j.algebra().star(
                &crate::bar_recursion::play_type(elem, &omega),
                q.rule(),
                &plays,
            )?;
            let phi = QuantifierFamily::bars(j, elem, &eps);
            let rhs = epq(elem, j.outcome(), &omega, &phi, &q, &[], j.base().cap())?;
            (lhs, rhs)
        }
        Equivalence::SpectorSim => {
            let q = g.outcome_stream();
            let lhs = teps(
                j,
                elem,
                &omega,
                &eps,
                &Outcome::from_stream(elem.clone(), q.clone()),
                &[],
            )?
            .into_data()?;
            let d = omega.guard();
            let jq = stream_monad(j, elem, d)?;
            let eq = transform_selection(j, elem, &eps, &q, d, mutation);
            let rhs = teps(&jq, elem, &omega, &eq, &unit_outcome(j, elem, d), &[])?.into_data()?;
            (lhs, rhs)
        }
        Equivalence::Definability => {
            let q = g.outcome_stream();
            let lhs = teps(
                j,
                elem,
                &omega,
                &eps,
                &Outcome::from_stream(elem.clone(), q.clone()),
                &[],
            )?
            .into_data()?;
            let rhs = teps_via_epq(j, elem, &omega, &eps, &q, mutation)?.into_data()?;
            (lhs, rhs)
        }
    };
    Ok((lhs != rhs).then(|| {
        json!({
            "case": case,
            "instance": g.to_json(),
            "lhs": encode(&lhs),
            "rhs": encode(&rhs),
        })
    }))
}

/// Checks one equivalence on `bounds.cases` seeded games for the selection
/// monad `j`. Cases run in parallel; results are reported in case order.
pub fn check_equivalence(
    which: Equivalence,
    j: &JMonad,
    bounds: &EquivBounds,
    seed: u64,
    mutation: Option<Mutation>,
) -> Result<CheckResult> {
    let outcomes = (0..bounds.cases)
        .into_par_iter()
        .map(|case| equivalence_case(which, j, bounds, seed, case, mutation))
        .collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::new(format!("equiv/{which}/{}", j.base().name()));
    for o in outcomes {
        tally.record(o);
    }
    Ok(tally.finish().with_details(json!({
        "seed": seed,
        "bounds": bounds,
    })))
}
