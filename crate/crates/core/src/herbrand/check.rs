//! Seeded suites: `hBR` against T-EPS over the powerset monad, the
//! implication on random instances, and the lemma properties.

use rayon::prelude::*;
use serde_json::{json, Value as Json};

use super::{
    check_bar_lemmas, generate_case, verify_dns, DnsBounds, HerbrandBar, Lemma, LemmaOutcome,
};
use crate::bar_recursion::check::{EquivBounds, GameSample};
use crate::bar_recursion::teps;
use crate::error::Result;
use crate::gen;
use crate::monad::{Algebra, Monad};
use crate::report::{CheckResult, Tally};
use crate::selection::JMonad;
use crate::universe::{json::encode, FinType, Value};
use crate::Mutation;

/// The powerset selection monad with outcomes in `Pow(Base(r_prime))`.
pub fn powerset_game_monad(r_prime: u32, mutation: Option<Mutation>) -> Result<JMonad> {
    let t = Monad::powerset().with_mutation(mutation);
    Ok(JMonad::new(Algebra::free(t, FinType::base(r_prime))?))
}

/// Case `case`: the root plays of `hBR` and of T-EPS on one sampled game.
pub fn hbr_case(j: &JMonad, bounds: &EquivBounds, seed: u64, case: u64) -> Result<Option<Json>> {
    let mut rng = gen::case_rng(seed, "equiv/hbr_teps", case);
    let g = GameSample::generate(&mut rng, j, bounds)?;
    let omega = g.stopping();
    let eps = g.family(j)?;
    let q = g.outcome_finite();
    let via_teps = teps(j, &g.elem, &omega, &eps, &q, &[])?.into_data()?;
    let h = HerbrandBar::new(g.elem.clone(), FinType::base(bounds.r_prime), omega, eps, q);
    let via_hbr = Value::Set(h.hbr(&[])?.iter().map(|s| Value::Seq(s.clone())).collect());
    Ok((via_teps != via_hbr).then(|| {
        json!({
            "case": case,
            "instance": g.to_json(),
            "teps": encode(&via_teps),
            "hbr": encode(&via_hbr),
        })
    }))
}

/// `hBR ≡ T-EPS` over the powerset monad on `bounds.cases` sampled games.
/// A mutation corrupts the monad T-EPS runs in.
pub fn check_hbr_equivalence(
    bounds: &EquivBounds,
    seed: u64,
    mutation: Option<Mutation>,
) -> Result<CheckResult> {
    let outcomes = (0..bounds.cases)
        .into_par_iter()
        .map(|case| {
            let j = powerset_game_monad(bounds.r_prime, mutation)?;
            hbr_case(&j, bounds, seed, case)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::new("equiv/hbr_teps/powerset");
    for o in outcomes {
        tally.record(o);
    }
    Ok(tally
        .finish()
        .with_details(json!({"seed": seed, "bounds": bounds})))
}

struct DnsCase {
    failure: Option<Json>,
    premise: bool,
    non_vacuous: bool,
    exhibited: bool,
    literal_gap: bool,
    dead: bool,
}

fn dns_case(bounds: &DnsBounds, seed: u64, case: u64) -> Result<DnsCase> {
    let inst = generate_case(seed, case, bounds)?;
    let v = verify_dns(&inst)?;
    Ok(DnsCase {
        failure: (!v.holds())
            .then(|| json!({"case": case, "instance": inst.to_json(), "verdict": v.to_json()})),
        premise: v.premise.holds,
        non_vacuous: v.non_vacuous(),
        exhibited: v.premise.holds
            && v.conclusion.holds
            && v.conclusion.evidence.get("beta").is_some(),
        literal_gap: v.literal_gap(),
        dead: !v.witnesses.dead_contexts.is_empty(),
    })
}

/// The implication premise → conclusion on `bounds.cases` generated
/// instances. Details count premise-holding and non-vacuous instances,
/// instances where a `β ∈ α` was exhibited, and instances where the
/// displayed premise alone would have been satisfied without the
/// conclusion.
pub fn check_dns_random(bounds: &DnsBounds, seed: u64) -> Result<CheckResult> {
    let cases = (0..bounds.cases)
        .into_par_iter()
        .map(|case| dns_case(bounds, seed, case))
        .collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::new("dns/implication");
    let count = |f: fn(&DnsCase) -> bool| cases.iter().filter(|c| f(c)).count();
    let details = json!({
        "seed": seed,
        "bounds": bounds,
        "premise_holds": count(|c| c.premise),
        "non_vacuous": count(|c| c.non_vacuous),
        "beta_exhibited": count(|c| c.exhibited),
        "dead_branch_instances": count(|c| c.dead),
        "literal_premise_gaps": count(|c| c.literal_gap),
    });
    for c in cases {
        tally.record(c.failure);
    }
    Ok(tally.finish().with_details(details))
}

/// The four lemma properties on `bounds.cases` generated instances, one
/// result per lemma. Instances with nothing to check count as skipped.
pub fn check_lemma_suite(bounds: &DnsBounds, seed: u64) -> Result<Vec<CheckResult>> {
    let per_case = (0..bounds.cases)
        .into_par_iter()
        .map(|case| {
            let inst = generate_case(seed, case, bounds)?;
            Lemma::ALL
                .iter()
                .map(|&l| {
                    Ok(match check_bar_lemmas(&inst, l)? {
                        LemmaOutcome::Failed(d) => LemmaOutcome::Failed(
                            json!({"case": case, "instance": inst.to_json(), "detail": d}),
                        ),
                        o => o,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Lemma::ALL
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let mut tally = Tally::new(format!("dns/lemma/{l}"));
            let mut checks = 0u64;
            for outcomes in &per_case {
                match &outcomes[k] {
                    LemmaOutcome::Held { checks: c } => {
                        checks += c;
                        tally.pass();
                    }
                    LemmaOutcome::Skipped => tally.skip(),
                    LemmaOutcome::Failed(d) => tally.fail(d.clone()),
                }
            }
            tally
                .finish()
                .with_details(json!({"seed": seed, "bounds": bounds, "checks": checks}))
        })
        .collect())
}
