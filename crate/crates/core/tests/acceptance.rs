//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use selmon::bar_recursion::check::{check_equivalence, game_monad, EquivBounds, Equivalence};
use selmon::herbrand::check::{check_dns_random, check_hbr_equivalence, check_lemma_suite};
use selmon::herbrand::DnsBounds;
use selmon::monad::laws::{check_monad_laws, size_grid};
use selmon::monad::{Algebra, Monad, MonadKind};
use selmon::selection::laws::{check_bar_binary, check_selection_laws};
use selmon::selection::JMonad;
use selmon::universe::FinType;
use selmon::CheckResult;

struct Verdict {
    ok: bool,
    note: String,
}

fn all_pass(checks: &[CheckResult]) -> Verdict {
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.law.as_str())
        .collect();
    let cases: u64 = checks.iter().map(|c| c.cases).sum();
    Verdict {
        ok: failed.is_empty() && !checks.is_empty(),
        note: if failed.is_empty() {
            format!("{} checks, {cases} cases, 0 failures", checks.len())
        } else {
            format!("failing: {}", failed.join(", "))
        },
    }
}

fn law_named(c: &CheckResult, names: &[&str]) -> bool {
    names.iter().any(|n| c.law.ends_with(&format!("/{n}")))
}

fn grid_checks(names: &[&str]) -> Vec<CheckResult> {
    let r = FinType::pow(FinType::base(1));
    let mut out = Vec::new();
    for (x, y, z) in size_grid(2) {
        for m in [
            Monad::identity(),
            Monad::powerset(),
            Monad::continuation(r.clone()),
        ] {
            let report = check_monad_laws(&m, &x, &y, &z).expect("law run");
            out.extend(report.checks.into_iter().filter(|c| law_named(c, names)));
        }
    }
    out
}

fn selection_monads() -> [JMonad; 2] {
    [
        JMonad::new(Algebra::identity(FinType::pow(FinType::base(1)))),
        JMonad::new(Algebra::powerset(FinType::base(1))),
    ]
}

fn monad_laws() -> Verdict {
    all_pass(&grid_checks(&[
        "unit_right",
        "unit_left",
        "assoc",
        "functor_id",
        "functor_comp",
        "algebra_unit",
        "algebra_bind",
    ]))
}

fn product_identities() -> Verdict {
    all_pass(&grid_checks(&[
        "product_bind",
        "product_star",
        "product_comprehension",
    ]))
}

fn selection_laws() -> Verdict {
    let x = FinType::base(2);
    let mut checks = Vec::new();
    for j in selection_monads() {
        checks.extend(
            check_selection_laws(&j, &x, &x, &x)
                .expect("selection laws")
                .checks,
        );
    }
    all_pass(&checks)
}

fn bar_laws() -> Verdict {
    let x = FinType::base(2);
    let mut checks = Vec::new();
    for j in selection_monads() {
        checks.extend(check_bar_binary(&j, &x, &x).expect("bar laws").checks);
    }
    all_pass(&checks)
}

fn equivalences() -> Verdict {
    let b = EquivBounds::default();
    let mut checks = Vec::new();
    for kind in [MonadKind::Identity, MonadKind::Powerset] {
        let j = game_monad(&kind, &b).expect("game monad");
        for which in Equivalence::ALL {
            checks.push(check_equivalence(which, &j, &b, 42, None).expect("equivalence"));
        }
    }
    let mut v = all_pass(&checks);
    if checks.iter().any(|c| c.cases < 200) {
        v.ok = false;
        v.note.push_str("; fewer than 200 cases");
    }
    v
}

fn hbr_equivalence() -> Verdict {
    let c = check_hbr_equivalence(&EquivBounds::default(), 42, None).expect("hbr");
    let mut v = all_pass(std::slice::from_ref(&c));
    if c.cases < 200 {
        v.ok = false;
        v.note.push_str("; fewer than 200 cases");
    }
    v
}

fn lemma_suite() -> Verdict {
    let bounds = DnsBounds {
        cases: 100,
        ..DnsBounds::default()
    };
    let checks = check_lemma_suite(&bounds, 42).expect("lemma suite");
    let mut v = all_pass(&checks);
    let live: Vec<u64> = checks.iter().map(|c| c.cases).collect();
    v.note = format!("{}; non-skipped per lemma {live:?}", v.note);
    if live.iter().any(|&n| n < 20) || checks.iter().any(|c| c.cases + c.skipped != 100) {
        v.ok = false;
    }
    v
}

fn dns_implication() -> Verdict {
    let c = check_dns_random(&DnsBounds::default(), 42).expect("dns");
    let d = c.details.clone().unwrap_or_default();
    let count = |k: &str| d[k].as_u64().unwrap_or(0);
    let (premise, non_vacuous, exhibited) = (
        count("premise_holds"),
        count("non_vacuous"),
        count("beta_exhibited"),
    );
    let mut v = all_pass(std::slice::from_ref(&c));
    v.ok &= c.cases == 1000 && non_vacuous >= 50 && exhibited == premise;
    v.note = format!(
        "{}; premise held {premise}, non-vacuous {non_vacuous}, beta exhibited {exhibited}",
        v.note
    );
    v
}

fn run_all(jobs: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_selmon"))
        .args(["all", "--seed", "42", "--jobs", jobs])
        .output()
        .expect("spawn selmon");
    assert!(
        out.status.success(),
        "selmon all exited with {:?}",
        out.status
    );
    out.stdout
}

fn determinism() -> Verdict {
    let runs = [run_all("1"), run_all("4"), run_all("4")];
    let ok = runs.windows(2).all(|w| w[0] == w[1]);
    Verdict {
        ok,
        note: format!(
            "3 runs of `all --seed 42`, {} bytes each, identical: {ok}",
            runs[0].len()
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Option<u64>, fn() -> Verdict); 9] = [
        ("monad and algebra laws", Some(5), monad_laws),
        ("product lifting identities", Some(5), product_identities),
        (
            "selection monad laws and explicit product",
            Some(10),
            selection_laws,
        ),
        ("bar morphism laws", Some(10), bar_laws),
        ("iterated product equalities", Some(20), equivalences),
        ("hbr equals powerset T-EPS", Some(5), hbr_equivalence),
        ("finite-bar lemma suite", Some(20), lemma_suite),
        (
            "double negation shift implication",
            Some(60),
            dns_implication,
        ),
        ("byte-identical reports", None, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut v = run();
        let elapsed = start.elapsed();
        if let Some(s) = limit {
            if elapsed >= Duration::from_secs(s) {
                v.ok = false;
            }
        }
        let budget = limit.map_or(String::new(), |s| format!(" (limit {s} s)"));
        println!(
            "{} criterion {}: {name}: {} [{:.2} s{budget}]",
            if v.ok { "PASS" } else { "FAIL" },
            i + 1,
            v.note,
            elapsed.as_secs_f64()
        );
        failed += usize::from(!v.ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
