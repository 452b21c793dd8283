//! Executable forms of the four properties of `hBR` that the verification
//! of the double negation shift rests on.
//!
//! Chains are sequences `a_0, ..., a_n` with `a_i ∈ ε_i(p_i)`, where
//! `p_i = p_{⟨a_0..a_{i-1}⟩}`. They are enumerated exhaustively, extending
//! only while off the bar, so every chain either stays off the bar or hits
//! it for the first time at its last element.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use super::{depth_error, derive_game, DnsInstance, HerbrandBar};
use crate::error::Result;
use crate::universe::{json::encode, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    /// Each `s ∈ t` decomposes through `hBR` at each of its prefixes.
    PrefixDecomp,
    /// Along a chain that stays off the bar, `⟨a_0..a_{n-1}⟩ * x * r ∈ t`
    /// for every `x ∈ ε(p_n)` and `r ∈ hBR(⟨a_0..a_{n-1}, x⟩)`.
    ExtensionMember,
    /// A chain hits the bar first at some `n < N`, and `⟨a_0..a_n⟩ ∈ t`.
    LeastBar,
    /// For that chain `s`, `q̂(s) ⊆ p_i(a_i)` for all `i ≤ n`.
    OutcomeSubset,
}

impl Lemma {
    pub const ALL: [Lemma; 4] = [
        Lemma::PrefixDecomp,
        Lemma::ExtensionMember,
        Lemma::LeastBar,
        Lemma::OutcomeSubset,
    ];
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lemma::PrefixDecomp => "prefix_decomp",
            Lemma::ExtensionMember => "extension_member",
            Lemma::LeastBar => "least_bar",
            Lemma::OutcomeSubset => "outcome_subset",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LemmaOutcome {
    /// Every instance of the property held; `checks` counts them.
    Held {
        checks: u64,
    },
    /// Nothing to check: no admissible chain or no play.
    Skipped,
    Failed(Json),
}

/// Every admissible chain, including the empty one.
pub fn admissible_chains(h: &HerbrandBar) -> Result<Vec<Vec<Value>>> {
    let mut out = Vec::new();
    walk(h, &mut Vec::new(), &mut out)?;
    Ok(out)
}

fn walk(h: &HerbrandBar, c: &mut Vec<Value>, out: &mut Vec<Vec<Value>>) -> Result<()> {
    out.push(c.clone());
    if h.at_bar(c)? {
        return Ok(());
    }
    for a in h.choose(c)? {
        c.push(a);
        walk(h, c, out)?;
        c.pop();
    }
    Ok(())
}

fn seq(s: &[Value]) -> Json {
    encode(&Value::Seq(s.to_vec()))
}

/// Checks `which` on the game of `inst`.
pub fn check_bar_lemmas(inst: &DnsInstance, which: Lemma) -> Result<LemmaOutcome> {
    check_lemma(&derive_game(inst).herbrand_bar(), which).map_err(depth_error)
}

/// Checks `which` on an arbitrary powerset game.
pub fn check_lemma(h: &HerbrandBar, which: Lemma) -> Result<LemmaOutcome> {
    let t = h.hbr(&[])?;
    let big_n = 1 + t.iter().map(Vec::len).max().unwrap_or(0);
    let chains = admissible_chains(h)?;
    let mut checks = 0u64;
    let fail = |j: Json| Ok(LemmaOutcome::Failed(j));
    match which {
        Lemma::PrefixDecomp => {
            for s in t.iter() {
                for i in 0..=s.len() {
                    checks += 1;
                    if !h.hbr(&s[..i])?.contains(&s[i..]) {
                        return fail(json!({"s": seq(s), "i": i}));
                    }
                }
            }
        }
        Lemma::ExtensionMember => {
            for c in &chains {
                if h.at_bar(c)? {
                    continue;
                }
                for x in h.choose(c)? {
                    let mut cx = c.clone();
                    cx.push(x);
                    for r in h.hbr(&cx)?.iter() {
                        checks += 1;
                        let mut full = cx.clone();
                        full.extend_from_slice(r);
                        if !t.contains(&full) {
                            return fail(json!({"chain": seq(c), "play": seq(&full)}));
                        }
                    }
                }
            }
        }
        Lemma::LeastBar | Lemma::OutcomeSubset => {
            for s in &chains {
                if !h.at_bar(s)? {
                    continue;
                }
                let n = s.len() - 1;
                if which == Lemma::LeastBar {
                    checks += 1;
                    if n >= big_n || !t.contains(s) {
                        return fail(
                            json!({"chain": seq(s), "n": n, "N": big_n, "in_t": t.contains(s)}),
                        );
                    }
                    continue;
                }
                let qs = h.outcome(s)?;
                for i in 0..=n {
                    checks += 1;
                    let p = h.context(&s[..i])?;
                    let pi = p.apply(&s[i])?.into_set()?;
                    if !qs.is_subset(&pi) {
                        return fail(json!({
                            "chain": seq(s),
                            "i": i,
                            "q_hat": encode(&Value::Set(qs)),
                            "p_i": encode(&Value::Set(pi)),
                        }));
                    }
                }
            }
        }
    }
    Ok(if checks == 0 {
        LemmaOutcome::Skipped
    } else {
        LemmaOutcome::Held { checks }
    })
}
