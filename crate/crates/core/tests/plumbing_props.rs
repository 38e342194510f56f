mod common;

use std::collections::BTreeSet;

use exotic_core::lattice::smith_invariants;
use exotic_core::plumbing::{
    blow_down_reduce, cf_eval, cf_expand, extends_over_ball, k_restriction, wahl_generate, FramedGraph,
};
use exotic_core::{BigInt, Chain, Rational};
use num_integer::Integer;
use num_traits::One;
use proptest::collection::vec;
use proptest::prelude::*;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

fn coprime_pairs(max_p: i64) -> impl Iterator<Item = (i64, i64)> {
    (2..=max_p).flat_map(|p| (1..p).filter(move |q| p.gcd(q) == 1).map(move |q| (p, q)))
}

#[test]
fn expansion_evaluates_back() {
    for (p, q) in coprime_pairs(200) {
        let c = cf_expand(b(p), b(q)).unwrap();
        assert_eq!(cf_eval(&c).unwrap(), Rational::new(b(-p * p), b(p * q - 1)), "C({p},{q})");
    }
}

#[test]
fn complementary_q_reverses() {
    for (p, q) in coprime_pairs(200) {
        let a = cf_expand(b(p), b(q)).unwrap();
        let r = cf_expand(b(p), b(p - q)).unwrap();
        assert_eq!(a.reversed(), r, "C({p},{q})");
    }
}

#[test]
fn wahl_chains_are_exactly_the_sweep() {
    let generated = wahl_generate::<BigInt>(8);
    let mut evaluated = BTreeSet::new();
    for c in &generated {
        let v = cf_eval(c).unwrap();
        let (p, q) = c.recover_provenance().expect("every Wahl chain has (p, q)");
        assert_eq!(v, Rational::new(-(&p * &p), &p * &q - 1));
        evaluated.insert(c.canonical());
    }
    let sweep: BTreeSet<Chain> = coprime_pairs(100)
        .map(|(p, q)| cf_expand(b(p), b(q)).unwrap())
        .filter(|c| c.len() <= 8)
        .map(|c| c.canonical())
        .collect();
    assert_eq!(evaluated, sweep);
}

#[test]
fn gram_has_cyclic_cokernel_of_order_p_squared() {
    for (p, q) in coprime_pairs(40) {
        let c = cf_expand(b(p), b(q)).unwrap();
        let mut inv = smith_invariants(&c.gram());
        inv.sort();
        let top = inv.pop().unwrap();
        assert_eq!(top, b(p * p), "C({p},{q})");
        assert!(inv.iter().all(One::is_one), "C({p},{q}): {inv:?}");
    }
}

fn graph() -> impl Strategy<Value = FramedGraph<BigInt>> {
    (2usize..7).prop_flat_map(|n| {
        (vec(prop_oneof![Just(-1i64), -4i64..=1], n), vec((0..n, 0..n, 1i64..=2), 0..2 * n)).prop_map(|(f, edges)| {
            let mut g = FramedGraph::new(f.into_iter().map(BigInt::from).collect());
            for (a, c, m) in edges {
                g.add_edge(a, c, BigInt::from(m));
            }
            g
        })
    })
}

#[test]
fn each_blow_down_flips_det_and_drops_rank() {
    common::runner(256, 11)
        .run(&graph(), |g| {
            let r = blow_down_reduce(&g);
            prop_assert_eq!(r.count, r.trace.len());
            prop_assert_eq!(r.reduced.vertex_count() + r.count, g.vertex_count());
            for s in &r.trace {
                prop_assert_eq!(s.rank_after + 1, s.rank_before);
                prop_assert_eq!(s.det_before.clone(), -s.det_after.clone());
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn canonical_class_extends_for_the_four_chains() {
    for (p, q) in [(28, 9), (46, 9), (64, 9), (32, 15)] {
        let c = cf_expand(b(p), b(q)).unwrap();
        for v in [0, c.len() - 1] {
            let k = k_restriction(&c, v).unwrap();
            assert!(extends_over_ball(&c, &k).unwrap(), "C({p},{q}) generator {v}");
        }
    }
}
