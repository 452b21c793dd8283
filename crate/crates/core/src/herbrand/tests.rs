use super::*;
use crate::universe::SeqFun;

fn b(n: u32) -> FinType {
    FinType::base(n)
}

fn build(
    x: u32,
    rb: u32,
    bound: u32,
    eps: impl Fn(usize, &Value) -> Value,
    phi: Vec<SeqFun>,
    q: Vec<SeqFun>,
    a_h: impl Fn(usize, u32, u32) -> bool,
) -> DnsInstance {
    let nmax = bound + 3;
    let ctx = FinType::fun(b(x), FinType::pow(b(rb)));
    let tables = (0..nmax as usize)
        .map(|n| FunTable::tabulate(&ctx, &FinType::pow(b(x)), 64, |p| Ok(eps(n, p))).unwrap())
        .collect();
    let mut table = Vec::new();
    for n in 0..nmax as usize {
        for a in 0..x {
            for bb in 0..rb {
                table.push(a_h(n, a, bb));
            }
        }
    }
    DnsInstance::new(x, rb, bound, 2, nmax, tables, phi, q, table).unwrap()
}

fn constant_phi(bound: u32, items: &[u32]) -> SeqFun {
    let v = Value::base_set(items.iter().copied());
    SeqFun::tabulate(b(2), 0, FinType::pow(b(bound + 1)), |_| Ok(v.clone())).unwrap()
}

/// `q(β) = {β(0)}` with `Rb = X = Base(2)`.
fn first_move_q() -> SeqFun {
    SeqFun::tabulate(b(2), 1, FinType::pow(b(2)), |w| {
        Ok(Value::singleton(w[0].clone()))
    })
    .unwrap()
}

fn both(_: usize, _: &Value) -> Value {
    Value::base_set([0, 1])
}

fn none(_: usize, _: &Value) -> Value {
    Value::empty_set()
}

fn seqs(items: &[&[u32]]) -> Plays {
    items
        .iter()
        .map(|s| s.iter().map(|&i| Value::Base(i)).collect())
        .collect()
}

/// ω ≡ 0, ε ≡ {0,1}, q(β) = {β(0)}.
fn two_move(a_h: impl Fn(usize, u32, u32) -> bool) -> DnsInstance {
    build(
        2,
        2,
        0,
        both,
        vec![constant_phi(0, &[0])],
        vec![first_move_q()],
        a_h,
    )
}

#[test]
fn hbr_examples() {
    let g = derive_game(&two_move(|_, _, _| true));
    let h = g.herbrand_bar();
    assert_eq!(*h.hbr(&[Value::Base(0)]).unwrap(), seqs(&[&[]]));
    assert_eq!(*h.hbr(&[]).unwrap(), seqs(&[&[0], &[1]]));
    let empty = build(2, 1, 0, none, vec![], vec![], |_, _, _| true);
    assert!(derive_game(&empty)
        .herbrand_bar()
        .hbr(&[])
        .unwrap()
        .is_empty());
}

#[test]
fn derived_stopping_and_outcome() {
    let g = derive_game(&two_move(|_, _, _| true));
    for s in [
        vec![],
        vec![Value::Base(1)],
        vec![Value::Base(1), Value::Base(1)],
    ] {
        assert_eq!(g.omega.eval(&EvSeq::extend(&g.elem, &s)).unwrap(), 0);
    }
    // No φ members: max ∅ = 0.
    let g0 = derive_game(&build(2, 1, 1, both, vec![], vec![], |_, _, _| true));
    assert_eq!(
        g0.omega
            .eval(&EvSeq::extend(&b(2), &[Value::Base(1)]))
            .unwrap(),
        0
    );
    let s = [Value::Base(1), Value::Base(0)];
    assert_eq!(g.q_hat.apply(&s).unwrap(), Value::base_set([1]));
}

#[test]
fn contexts_at_bar_points_read_the_outcome() {
    let g = derive_game(&two_move(|_, _, _| true));
    let p = compute_pr(&g, &[]).unwrap();
    for y in 0..2 {
        assert_eq!(p.apply(&Value::Base(y)).unwrap(), Value::base_set([y]));
    }
    let p0 = compute_pr(&g, &[Value::Base(0)]).unwrap();
    assert_eq!(p0.apply(&Value::Base(1)).unwrap(), Value::base_set([0]));
    let silent = build(
        2,
        1,
        0,
        both,
        vec![constant_phi(0, &[0])],
        vec![],
        |_, _, _| true,
    );
    let p = compute_pr(&derive_game(&silent), &[]).unwrap();
    assert!(p.entries().iter().all(|v| v == &Value::empty_set()));
}

#[test]
fn witnesses_of_two_move_game() {
    let w = witnesses(&two_move(|_, _, _| true)).unwrap();
    assert_eq!(w.t, seqs(&[&[0], &[1]]));
    assert_eq!(w.n, 2);
    let alpha: BTreeSet<EvSeq> = [0, 1]
        .iter()
        .map(|&i| EvSeq::extend(&b(2), &[Value::Base(i)]))
        .collect();
    assert_eq!(w.alpha, alpha);
    let keys: Plays = w.contexts.keys().cloned().collect();
    assert_eq!(keys, seqs(&[&[], &[0], &[1]]));
    assert!(w.dead_contexts.is_empty());
    assert_eq!(w.premise_depth, 2);
}

#[test]
fn empty_t_uses_conventions_and_dead_root() {
    let inst = build(
        2,
        1,
        0,
        none,
        vec![constant_phi(0, &[0])],
        vec![],
        |_, _, _| true,
    );
    let w = witnesses(&inst).unwrap();
    assert!(w.t.is_empty() && w.alpha.is_empty() && w.contexts.is_empty());
    assert_eq!(w.n, 1);
    assert_eq!(
        w.dead_contexts.keys().cloned().collect::<Plays>(),
        seqs(&[&[]])
    );
    // The displayed premise is vacuous over P = ∅ but the conclusion over
    // α = ∅ fails; the root context exposes the empty choice.
    assert!(check_premise_literal(&inst, &w).unwrap().holds);
    assert!(!check_conclusion(&inst, &w).unwrap().holds);
    let v = verify_dns(&inst).unwrap();
    assert!(!v.premise.holds);
    assert!(v.holds());
    assert!(v.literal_gap());
}

#[test]
fn dead_branch_below_a_live_root() {
    // ε_0 = {0,1}, ε_1 = {0} only after move 0... modelled by p: at depth 1
    // the selection is empty, so every branch dies while ω allows two moves.
    let inst = build(
        2,
        1,
        1,
        |n, _| {
            if n == 0 {
                Value::base_set([0, 1])
            } else {
                Value::empty_set()
            }
        },
        vec![constant_phi(1, &[1])],
        vec![],
        |_, _, _| true,
    );
    let v = verify_dns(&inst).unwrap();
    assert!(v.witnesses.t.is_empty());
    let dead: Plays = v.witnesses.dead_contexts.keys().cloned().collect();
    assert_eq!(dead, seqs(&[&[], &[0], &[1]]));
    assert!(!v.premise.holds);
    assert!(v.holds());
}

#[test]
fn premise_examples() {
    let inst = two_move(|_, _, _| true);
    let w = witnesses(&inst).unwrap();
    assert!(check_premise(&inst, &w).unwrap().holds);
    // An empty selection at some n ≤ N falsifies the premise and names the
    // pair.
    let starved = build(
        2,
        2,
        0,
        |n, _| {
            if n == 2 {
                Value::empty_set()
            } else {
                Value::base_set([0, 1])
            }
        },
        vec![constant_phi(0, &[0])],
        vec![first_move_q()],
        |_, _, _| true,
    );
    let w = witnesses(&starved).unwrap();
    let side = check_premise(&starved, &w).unwrap();
    assert!(!side.holds);
    assert_eq!(side.evidence["failing"][0], json!(2));
}

#[test]
fn conclusion_examples() {
    // A_H false everywhere but φ·β = ∅: vacuous for every β.
    let quiet = build(2, 1, 0, both, vec![], vec![], |_, _, _| false);
    let w = witnesses(&quiet).unwrap();
    assert!(check_conclusion(&quiet, &w).unwrap().holds);
    let inst = two_move(|_, _, _| true);
    let w = witnesses(&inst).unwrap();
    let c = check_conclusion(&inst, &w).unwrap();
    assert!(c.holds);
    assert!(c.evidence.get("beta").is_some());
}

#[test]
fn false_predicate_makes_premise_fail() {
    let inst = two_move(|_, _, _| false);
    let v = verify_dns(&inst).unwrap();
    assert!(!v.premise.holds);
    assert!(!v.conclusion.holds);
    assert!(v.holds());
}

#[test]
fn selective_predicate_picks_a_good_beta() {
    // A_H(0, a, b) holds only for a = 1; the premise forces the chain
    // through 1 and the conclusion is witnessed by ⟨1⟩^+.
    let inst = two_move(|n, a, _| n != 0 || a == 1);
    let v = verify_dns(&inst).unwrap();
    assert!(v.premise.holds);
    assert!(v.conclusion.holds);
    assert_eq!(
        v.conclusion.evidence["beta"],
        encode(&Value::Stream(EvSeq::extend(&b(2), &[Value::Base(1)])))
    );
}

#[test]
fn lemma_examples() {
    let inst = two_move(|_, _, _| true);
    for l in Lemma::ALL {
        assert!(
            matches!(
                check_bar_lemmas(&inst, l).unwrap(),
                LemmaOutcome::Held { .. }
            ),
            "{l}"
        );
    }
    let h = derive_game(&inst).herbrand_bar();
    let chains: Plays = admissible_chains(&h).unwrap().into_iter().collect();
    assert_eq!(chains, seqs(&[&[], &[0], &[1]]));
    // prefix_decomp on ⟨0⟩ checks i = 0 and i = 1; two plays give four.
    assert_eq!(
        lemmas::check_lemma(&h, Lemma::PrefixDecomp).unwrap(),
        LemmaOutcome::Held { checks: 4 }
    );
    let empty = build(2, 1, 0, none, vec![], vec![], |_, _, _| true);
    assert_eq!(
        check_bar_lemmas(&empty, Lemma::LeastBar).unwrap(),
        LemmaOutcome::Skipped
    );
}

#[test]
fn generated_instances_respect_the_length_bound() {
    let bounds = DnsBounds::default();
    for case in 0..200 {
        let inst = generate_case(4, case, &bounds).unwrap();
        let w = witnesses(&inst).unwrap();
        let lim = inst.bound() as usize + 1;
        assert!(w.t.iter().all(|s| s.len() <= lim));
        assert!(w.n <= lim + 1);
        assert!(w.premise_depth < inst.nmax() as usize);
    }
}
