mod common;

use exotic_core::lattice::{
    gram, is_characteristic, orthogonal_complement, pair, reflect_normalize, smith_invariants, AmbientLattice,
    Reflection, DEFAULT_MOVE_BUDGET,
};
use exotic_core::{BigInt, Class};
use num_traits::{Signed, Zero};
use proptest::collection::vec;
use proptest::prelude::*;

fn class(n: usize) -> impl Strategy<Value = Class> {
    vec(-6i64..=6, n + 1).prop_map(|c| Class::from_i64s(&c))
}

fn triple() -> impl Strategy<Value = (Class, Class, Class)> {
    (1usize..10).prop_flat_map(|n| (class(n), class(n), class(n)))
}

#[test]
fn pairing_is_symmetric_and_bilinear() {
    common::runner(256, 1)
        .run(&triple(), |(a, b, c)| {
            prop_assert_eq!(pair(&a, &b).unwrap(), pair(&b, &a).unwrap());
            let lhs = pair(&a.add(&b).unwrap(), &c).unwrap();
            prop_assert_eq!(lhs, pair(&a, &c).unwrap() + pair(&b, &c).unwrap());
            let k = BigInt::from(3);
            prop_assert_eq!(pair(&a.scale(&k), &c).unwrap(), k * pair(&a, &c).unwrap());
            Ok(())
        })
        .unwrap();
}

/// Characteristic means `k·x ≡ x·x (mod 2)` for every `x`; test it on the basis
/// vectors, which is the definition, and compare with the all-odd shortcut.
#[test]
fn characteristic_matches_definition() {
    let strategy = (1usize..12).prop_flat_map(class);
    common::runner(200, 2)
        .run(&strategy, |k| {
            let n = k.n();
            let amb = AmbientLattice::new(n);
            let by_definition = (0..=n).all(|i| {
                let x = if i == 0 { amb.h::<BigInt>() } else { amb.e(i) };
                (pair(&k, &x).unwrap() - x.square()) % BigInt::from(2) == BigInt::zero()
            });
            prop_assert_eq!(is_characteristic(&k), by_definition);
            Ok(())
        })
        .unwrap();
}

#[test]
fn complement_is_orthogonal_and_complementary() {
    let strategy = (2usize..8).prop_flat_map(|n| vec(class(n), 1..4));
    common::runner(128, 3)
        .run(&strategy, |classes| {
            let n = classes[0].n();
            let comp = orthogonal_complement(AmbientLattice::new(n), &classes).unwrap();
            for v in &comp {
                for c in &classes {
                    prop_assert!(pair(v, c).unwrap().is_zero());
                }
            }
            let rows: Vec<Vec<BigInt>> = classes.iter().map(|c| c.coeffs().to_vec()).collect();
            let rank = exotic_core::matrix::IntMatrix::from_rows(rows).rank();
            prop_assert_eq!(comp.len() + rank, n + 1);
            Ok(())
        })
        .unwrap();
}

#[test]
fn smith_product_is_abs_det() {
    let strategy = (1usize..7).prop_flat_map(|n| vec(class(n), 1..=n + 1));
    common::runner(128, 4)
        .run(&strategy, |classes| {
            let g = gram(&classes).unwrap();
            let det = g.det();
            prop_assume!(!det.is_zero());
            let product = smith_invariants(&g).into_iter().fold(BigInt::from(1), |a, x| a * x);
            prop_assert_eq!(product.abs(), det.abs());
            Ok(())
        })
        .unwrap();
}

fn mirror(n: usize) -> impl Strategy<Value = Class> {
    let idx = (1..=n, 1..=n, 1..=n);
    (0u8..5, idx).prop_filter_map("distinct indices", move |(kind, (i, j, l))| {
        let c = match kind {
            0 => Class::h(n),
            1 => Class::e(n, i),
            2 if i != j => Class::e(n, i).sub(&Class::e(n, j)).unwrap(),
            3 if i != j => Class::from_terms(n, 1, &[(i, -1), (j, -1)]),
            4 if i != j && j != l && i != l => Class::from_terms(n, 1, &[(i, -1), (j, -1), (l, -1)]),
            _ => return None,
        };
        Some(c)
    })
}

#[test]
fn normalization_replays_and_preserves() {
    let strategy = (3usize..=9).prop_flat_map(|n| vec(mirror(n), 0..15));
    common::runner(128, 5)
        .run(&strategy, |mirrors| {
            let n = mirrors.first().map_or(3, Class::n);
            let k = AmbientLattice::new(n).anticanonical::<BigInt>();
            let x = mirrors.iter().fold(k.clone(), |acc, m| Reflection::new(m.clone()).unwrap().apply(&acc).unwrap());
            let (out, moves) = reflect_normalize(&x, DEFAULT_MOVE_BUDGET).unwrap();
            prop_assert_eq!(&out, &k);
            let mut cur = x.clone();
            for r in &moves {
                let next = r.apply(&cur).unwrap();
                prop_assert_eq!(next.square(), cur.square());
                prop_assert!(is_characteristic(&next));
                cur = next;
            }
            prop_assert_eq!(cur, out);
            Ok(())
        })
        .unwrap();
}
