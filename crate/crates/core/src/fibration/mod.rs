//! Elliptic-fibration bookkeeping: `SL(2, Z)` monodromy words, Euler numbers
//! of singular fibers, and exact computations on pencils of plane cubics.

mod pencil;
mod poly;
mod unipoly;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{int, Int};

pub use pencil::{
    base_points, member_parameters, pencil_singular_members, point_display, BasePoint, BasePoints,
    IrrationalBasePoints, IrrationalRoots, MemberParameter, PencilReport, SingularMember,
};
pub use poly::{variable, Monomial, RationalPoly, VARIABLES};
pub use unipoly::{minimal_polynomial, UniPoly};

/// Row-major 2×2 integer matrix.
pub type Mat2<T> = [[T; 2]; 2];

pub fn mat2<T: Int>(a: i64, b: i64, c: i64, d: i64) -> Mat2<T> {
    [[int(a), int(b)], [int(c), int(d)]]
}

pub fn identity<T: Int>() -> Mat2<T> {
    mat2(1, 0, 0, 1)
}

pub fn mat_mul<T: Int>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn det2<T: Int>(m: &Mat2<T>) -> T {
    m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
}

/// Inverse of a determinant-one matrix.
pub fn sl2_inverse<T: Int>(m: &Mat2<T>) -> Mat2<T> {
    [[m[1][1].clone(), -m[0][1].clone()], [-m[1][0].clone(), m[0][0].clone()]]
}

/// `by⁻¹ · m · by`.
pub fn conjugate<T: Int>(m: &Mat2<T>, by: &Mat2<T>) -> Mat2<T> {
    mat_mul(&mat_mul(&sl2_inverse(by), m), by)
}

/// Ordered product of the word, left to right.
pub fn word_product<T: Int>(word: &[Mat2<T>]) -> Result<Mat2<T>> {
    let mut acc = identity();
    for (index, m) in word.iter().enumerate() {
        let d = det2(m);
        if !d.is_one() {
            return Err(Error::NotSl2 { index, det: d.to_string() });
        }
        acc = mat_mul(&acc, m);
    }
    Ok(acc)
}

/// Parses `[[[a, b], [c, d]], …]`.
pub fn parse_word<T: Int>(v: &serde_json::Value) -> Result<Vec<Mat2<T>>> {
    let bad = || Error::Scenario(format!("monodromy word must be an array of 2x2 integer arrays, got {v}"));
    let items = v.as_array().ok_or_else(bad)?;
    items
        .iter()
        .map(|m| {
            let rows = m.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
            let mut out: Mat2<T> = identity();
            for (i, row) in rows.iter().enumerate() {
                let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
                for (j, x) in row.iter().enumerate() {
                    out[i][j] = crate::json::value_to_int(x).ok_or_else(bad)?;
                }
            }
            Ok(out)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FiberDescriptor {
    /// A plumbing tree of spheres.
    Tree { vertices: usize, edges: usize },
    /// A sphere with one node.
    Fishtail,
}

/// Euler number of a singular fiber: `2V − E` for a tree of spheres, 1 for a fishtail.
pub fn fiber_euler(f: &FiberDescriptor) -> Result<i64> {
    match *f {
        FiberDescriptor::Tree { vertices, edges } => {
            if vertices == 0 || edges + 1 != vertices {
                return Err(Error::MalformedFiber(format!("{vertices} vertices and {edges} edges is not a tree")));
            }
            Ok(2 * vertices as i64 - edges as i64)
        }
        FiberDescriptor::Fishtail => Ok(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn trivial_words() {
        assert_eq!(word_product::<BigInt>(&[]).unwrap(), identity());
        let t = mat2::<BigInt>(1, 1, 0, 1);
        assert_eq!(word_product(&[t.clone(), sl2_inverse(&t)]).unwrap(), identity());
        let bad = mat2::<BigInt>(2, 0, 0, 1);
        assert!(matches!(word_product(&[t, bad]), Err(Error::NotSl2 { index: 1, .. })));
    }

    #[test]
    fn conjugation() {
        let t = mat2::<i64>(1, 1, 0, 1);
        let m = mat2::<i64>(0, 1, -1, 0);
        assert_eq!(conjugate(&t, &m), mat2::<i64>(1, 0, -1, 1));
    }

    #[test]
    fn fibers() {
        assert_eq!(fiber_euler(&FiberDescriptor::Tree { vertices: 1, edges: 0 }).unwrap(), 2);
        assert_eq!(fiber_euler(&FiberDescriptor::Fishtail).unwrap(), 1);
        assert!(fiber_euler(&FiberDescriptor::Tree { vertices: 3, edges: 3 }).is_err());
    }

    #[test]
    fn word_json() {
        let v = serde_json::json!([[[0, -1], [1, 0]], [[1, 1], [0, 1]]]);
        let w: Vec<Mat2<BigInt>> = parse_word(&v).unwrap();
        assert_eq!(w[0], mat2(0, -1, 1, 0));
        assert!(parse_word::<BigInt>(&serde_json::json!([[1, 2]])).is_err());
    }
}
