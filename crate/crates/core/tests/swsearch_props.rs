mod common;

use exotic_core::lattice::gram;
use exotic_core::swsearch::{dimension, enumerate_candidates, rational_square, Enumeration, SquareFilter};
use exotic_core::{BigInt, Class};
use proptest::collection::vec;
use proptest::prelude::*;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

fn run(c: &common::Constraints, workers: usize) -> Enumeration<BigInt> {
    let g = gram(&c.basis).unwrap();
    let (chi, sigma) = (b(9), b(-5));
    let filter = SquareFilter::from_invariants(&chi, &sigma);
    enumerate_candidates(&c.basis_constraints, &c.derived, &g, &chi, &sigma, &filter, workers).unwrap()
}

#[test]
fn stage_one_is_the_product_of_admissible_counts() {
    let c = common::x1_constraints_over(common::x1_basis());
    let counts: Vec<usize> = c.basis_constraints.iter().map(|a| a.admissible_values().len()).collect();
    assert_eq!(counts, [3, 3, 3, 2, 10, 3, 5]);
    let product: usize = counts.iter().product();
    assert_eq!(product, 8100);
    assert_eq!(run(&c, 1).stages[0], product);
}

#[test]
fn survivors_are_closed_under_negation_with_dimension_zero() {
    let r = run(&common::x1_constraints_over(common::x1_basis()), 1);
    for s in &r.survivors {
        let neg: Vec<BigInt> = s.evals.iter().map(|x| -x).collect();
        assert!(r.survivors.iter().any(|t| t.evals == neg));
        assert_eq!(dimension(s.square.numer(), &b(9), &b(-5)).unwrap(), b(0));
    }
}

#[test]
fn partitioning_does_not_change_the_result() {
    let c = common::x1_constraints_over(common::x1_basis());
    let base = run(&c, 1);
    for workers in [2, 3, 4, 7, 16] {
        assert_eq!(run(&c, workers), base, "workers = {workers}");
    }
}

/// Rows of a random unimodular matrix, built from elementary row operations.
fn unimodular(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    vec((0..n, 0..n, -2i64..=2), 1..12).prop_map(move |ops| {
        let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, k) in ops {
            if i != j {
                let src = m[j].clone();
                for (x, y) in m[i].iter_mut().zip(src) {
                    *x += k * y;
                }
            } else {
                m.swap(i, (i + 1) % n);
            }
        }
        m
    })
}

#[test]
fn squares_do_not_depend_on_the_complement_basis() {
    let basis = common::x1_basis();
    let g = gram(&basis).unwrap();
    let survivors = run(&common::x1_constraints_over(basis.clone()), 1).survivors;
    let n = basis.len();
    let evals = vec(-3i64..=3, n);
    common::runner(64, 31)
        .run(&(unimodular(n), evals), |(u, e)| {
            let other: Vec<Class> = u
                .iter()
                .map(|row| {
                    row.iter().zip(&basis).fold(Class::zero(17), |acc, (&k, a)| acc.add(&a.scale(&b(k))).unwrap())
                })
                .collect();
            let g2 = gram(&other).unwrap();
            let mut cases: Vec<Vec<BigInt>> = survivors.iter().map(|s| s.evals.clone()).collect();
            cases.push(e.iter().map(|&x| b(x)).collect());
            for v in cases {
                let w: Vec<BigInt> = u.iter().map(|row| row.iter().zip(&v).map(|(&k, x)| b(k) * x).sum()).collect();
                prop_assert_eq!(rational_square(&v, &g).unwrap(), rational_square(&w, &g2).unwrap());
            }
            Ok(())
        })
        .unwrap();
}
