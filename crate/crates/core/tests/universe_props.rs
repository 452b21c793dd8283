use std::collections::BTreeSet;

use proptest::prelude::*;
use selmon::universe::{
    default, enumerate_functions, enumerate_seqs, enumerate_values, EvSeq, FinSeq, FinType, Value,
};
use selmon::Error;

fn b(n: u32) -> FinType {
    FinType::base(n)
}

fn seq(items: &[u32]) -> FinSeq {
    FinSeq::new(b(2), items.iter().map(|&i| Value::Base(i)).collect()).unwrap()
}

#[test]
fn defaults() {
    assert_eq!(default(&b(2)), Value::Base(0));
    assert_eq!(default(&FinType::pow(b(2))), Value::empty_set());
    assert_eq!(default(&FinType::seq(b(2), 4)), Value::Seq(vec![]));
    let f = default(&FinType::fun(b(2), b(3)));
    let f = f.as_fun().unwrap();
    assert!(f.entries().iter().all(|v| v == &Value::Base(0)));
}

#[test]
fn enumeration_examples() {
    assert_eq!(
        enumerate_values(&b(2), 10).unwrap(),
        vec![Value::Base(0), Value::Base(1)]
    );
    assert_eq!(
        enumerate_values(&FinType::pow(b(1)), 10).unwrap(),
        vec![Value::empty_set(), Value::base_set([0])]
    );
    assert!(matches!(
        enumerate_values(&FinType::fun(b(2), b(3)), 4),
        Err(Error::CardinalityExceeded { cap: 4, .. })
    ));
    assert_eq!(
        enumerate_functions(&b(2), &FinType::pow(b(1)), 16)
            .unwrap()
            .len(),
        4
    );
}

#[test]
fn prefix_examples() {
    assert!(seq(&[]).prefix_of(&seq(&[0, 1])).unwrap());
    assert!(seq(&[0]).prefix_of(&seq(&[0, 1])).unwrap());
    assert!(!seq(&[1]).prefix_of(&seq(&[0, 1])).unwrap());
    let other = FinSeq::new(b(3), vec![]).unwrap();
    assert!(matches!(
        other.prefix_of(&seq(&[0])),
        Err(Error::TypeMismatch(_))
    ));
}

#[test]
fn extension_examples() {
    let e = seq(&[1, 0]).extend_plus();
    assert_eq!(e.prefix(), &[Value::Base(1)]);
    assert_eq!(e.tail(), &Value::Base(0));
    let read: Vec<_> = (0..4).map(|i| e.at(i).clone()).collect();
    assert_eq!(read, [1, 0, 0, 0].map(Value::Base).to_vec());
    assert_eq!(e, seq(&[1]).extend_plus());
    assert_eq!(
        seq(&[]).extend_plus(),
        EvSeq::constant(b(2), Value::Base(0))
    );
    assert_eq!(
        seq(&[1]).extend_plus().drop_prefix(1),
        EvSeq::constant(b(2), Value::Base(0))
    );
}

fn small_type() -> impl Strategy<Value = FinType> {
    let leaf = (1u32..=3).prop_map(FinType::base);
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FinType::prod(a, b)),
            (inner.clone(), 0usize..=2).prop_map(|(a, n)| FinType::seq(a, n)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FinType::fun(a, b)),
            inner.prop_map(FinType::pow),
        ]
    })
}

fn items(max_card: u32, max_len: usize) -> impl Strategy<Value = (u32, Vec<u32>)> {
    (1..=max_card).prop_flat_map(move |c| (Just(c), prop::collection::vec(0..c, 0..=max_len)))
}

fn fin(card: u32, xs: &[u32]) -> FinSeq {
    FinSeq::new(b(card), xs.iter().map(|&i| Value::Base(i)).collect()).unwrap()
}

proptest! {
    #[test]
    fn enumeration_is_complete_and_distinct(t in small_type()) {
        match t.cardinality_within(4096) {
            Ok(n) => {
                let vs = enumerate_values(&t, 4096).unwrap();
                prop_assert_eq!(vs.len() as u64, n);
                prop_assert_eq!(vs.iter().collect::<BTreeSet<_>>().len() as u64, n);
                prop_assert_eq!(&vs[0], &default(&t));
                prop_assert!(vs.iter().all(|v| t.contains(v)));
            }
            Err(e) => {
                let rejected = matches!(e, Error::CardinalityExceeded { .. });
                prop_assert!(rejected);
            }
        }
    }

    #[test]
    fn extension_reads_the_sequence_then_defaults((card, xs) in items(3, 4)) {
        let e = fin(card, &xs).extend_plus();
        for i in 0..xs.len() + 3 {
            let want = xs.get(i).map_or(Value::Base(0), |&v| Value::Base(v));
            prop_assert_eq!(e.at(i), &want);
        }
        prop_assert!(e.prefix().last() != Some(e.tail()));
    }

    #[test]
    fn add_then_drop_is_identity((card, xs) in items(3, 3), (tail, ys) in (0u32..3, prop::collection::vec(0u32..3, 0..=3))) {
        let tail = tail % card;
        let ys: Vec<Value> = ys.into_iter().map(|v| Value::Base(v % card)).collect();
        let beta = EvSeq::new(b(card), ys, Value::Base(tail));
        let s = fin(card, &xs);
        let added = beta.add_prefix(&s).unwrap();
        prop_assert_eq!(added.drop_prefix(xs.len()), beta.clone());
        prop_assert_eq!(beta.add_prefix(&fin(card, &[])).unwrap(), beta);
    }
}

#[test]
fn prefix_is_a_partial_order() {
    let all = enumerate_seqs(&b(2), 3, 4096).unwrap();
    for r in &all {
        assert!(r.prefix_of(r).unwrap());
        for s in &all {
            if r.prefix_of(s).unwrap() && s.prefix_of(r).unwrap() {
                assert_eq!(r, s);
            }
            for t in &all {
                if r.prefix_of(s).unwrap() && s.prefix_of(t).unwrap() {
                    assert!(r.prefix_of(t).unwrap());
                }
            }
        }
    }
}

#[test]
fn add_drop_exhaustive_over_short_prefixes() {
    let x = b(2);
    let streams: Vec<EvSeq> = enumerate_values(&FinType::stream(x.clone(), 3), 4096)
        .unwrap()
        .into_iter()
        .map(|v| v.as_stream().unwrap().clone())
        .collect();
    for beta in &streams {
        for s in enumerate_seqs(&x, 3, 4096).unwrap() {
            assert_eq!(&beta.add_prefix(&s).unwrap().drop_prefix(s.len()), beta);
        }
    }
}
