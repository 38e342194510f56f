//! First homology of the lens-space boundary, read off the cokernel of the
//! plumbing's intersection matrix.
//!
//! The meridian `μᵢ` of sphere `i` is the image of the `i`-th basis vector in
//! `coker Q`. Over a chain `coker Q ≅ ℤ/|det Q|`; a Smith transform `U Q V = D`
//! gives the isomorphism as one row of `U`.

use serde::{Deserialize, Serialize};

use super::LinearChain;
use crate::error::{Error, Result};
use crate::scalar::{exact_sqrt, mod_inverse, Int};

/// `H₁(∂C) ≅ ℤ/modulus` together with the image of every meridian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryHomology<T> {
    pub modulus: T,
    pub meridians: Vec<T>,
}

impl<T: Int> BoundaryHomology<T> {
    /// Residue of `Σ xᵢ μᵢ` in `ℤ/modulus`.
    pub fn image(&self, x: &[T]) -> T {
        let total = self.meridians.iter().zip(x).fold(T::zero(), |acc, (m, c)| acc + m.clone() * c.clone());
        total.mod_floor(&self.modulus)
    }

    fn generator_inverse(&self, generator_vertex: usize) -> Result<T> {
        let len = self.meridians.len();
        let g = self.meridians.get(generator_vertex).ok_or(Error::VertexOutOfRange { index: generator_vertex, len })?;
        mod_inverse(g, &self.modulus).ok_or(Error::NotAGenerator(generator_vertex))
    }
}

/// An element of `H₁(∂C_{p,q}) = ℤ/p²`, as a multiple of the meridian of
/// `generator_vertex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryClass<T: Int> {
    #[serde(serialize_with = "crate::json::serialize_int", deserialize_with = "crate::json::deserialize_int")]
    pub residue: T,
    #[serde(serialize_with = "crate::json::serialize_int", deserialize_with = "crate::json::deserialize_int")]
    pub modulus: T,
    pub generator_vertex: usize,
}

impl<T: Int> BoundaryClass<T> {
    /// True when the residue is `c` or `−c` modulo the order.
    pub fn is_plus_minus(&self, c: &T) -> bool {
        let r = c.mod_floor(&self.modulus);
        let s = (-c.clone()).mod_floor(&self.modulus);
        self.residue == r || self.residue == s
    }
}

pub fn boundary_homology<T: Int>(chain: &LinearChain<T>) -> Result<BoundaryHomology<T>> {
    let q = chain.gram();
    let smith = q.smith();
    let diag = smith.d.diagonal();
    let nontrivial: Vec<usize> = (0..diag.len()).filter(|&i| !diag[i].abs().is_one()).collect();
    match nontrivial.as_slice() {
        [] => Ok(BoundaryHomology { modulus: T::one(), meridians: vec![T::zero(); chain.len()] }),
        [t] if !diag[*t].is_zero() => {
            let modulus = diag[*t].abs();
            let meridians = smith.u.row(*t).iter().map(|x| x.mod_floor(&modulus)).collect();
            Ok(BoundaryHomology { modulus, meridians })
        }
        _ => {
            let inv: Vec<String> = smith.invariants().iter().map(ToString::to_string).collect();
            Err(Error::NonCyclicBoundary(inv.join(",")))
        }
    }
}

/// Residue `c` with `μ_vertex = c · μ_generator`.
pub fn meridian_class<T: Int>(
    chain: &LinearChain<T>,
    vertex: usize,
    generator_vertex: usize,
) -> Result<BoundaryClass<T>> {
    if vertex >= chain.len() {
        return Err(Error::VertexOutOfRange { index: vertex, len: chain.len() });
    }
    let bh = boundary_homology(chain)?;
    let inv = bh.generator_inverse(generator_vertex)?;
    let residue = (bh.meridians[vertex].clone() * inv).mod_floor(&bh.modulus);
    Ok(BoundaryClass { residue, modulus: bh.modulus, generator_vertex })
}

/// Residue of the boundary restriction of a cohomology class given by its
/// values on the spheres.
pub fn boundary_residue<T: Int>(
    chain: &LinearChain<T>,
    evaluations: &[T],
    generator_vertex: usize,
) -> Result<BoundaryClass<T>> {
    if evaluations.len() != chain.len() {
        return Err(Error::MalformedChain(format!(
            "{} evaluations for a chain of length {}",
            evaluations.len(),
            chain.len()
        )));
    }
    let bh = boundary_homology(chain)?;
    let inv = bh.generator_inverse(generator_vertex)?;
    let residue = (bh.image(evaluations) * inv).mod_floor(&bh.modulus);
    Ok(BoundaryClass { residue, modulus: bh.modulus, generator_vertex })
}

/// Values `dᵢ + 2` of the class `K` on the spheres.
pub fn k_evaluation<T: Int>(chain: &LinearChain<T>) -> Vec<T> {
    let two = T::one() + T::one();
    chain.weights().iter().map(|d| d.clone() + two.clone()).collect()
}

/// `K|∂C` as a multiple of the chosen meridian.
pub fn k_restriction<T: Int>(chain: &LinearChain<T>, generator_vertex: usize) -> Result<BoundaryClass<T>> {
    boundary_residue(chain, &k_evaluation(chain), generator_vertex)
}

/// A boundary class extends over the rational ball `B_{p,q}` iff it lies in
/// the order-`p` subgroup, i.e. its residue is divisible by `p`.
pub fn extends_over_ball<T: Int>(chain: &LinearChain<T>, b: &BoundaryClass<T>) -> Result<bool> {
    let p = match chain.provenance() {
        Some((p, _)) => p.clone(),
        None => exact_sqrt(&b.modulus).ok_or_else(|| Error::MissingProvenance(b.modulus.to_string()))?,
    };
    Ok(b.residue.is_multiple_of(&p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plumbing::cf_expand;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::One;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn generator_against_itself_is_one() {
        let c = cf_expand(b(28), b(9)).unwrap();
        for g in [0, 10] {
            assert_eq!(meridian_class(&c, g, g).unwrap().residue, b(1));
        }
    }

    #[test]
    fn single_vertex_chain() {
        let c = LinearChain::from_i64s(&[-4]).unwrap();
        let k = k_restriction(&c, 0).unwrap();
        assert_eq!((k.residue, k.modulus), (b(2), b(4)));
        let zero = boundary_residue(&c, &[b(0)], 0).unwrap();
        assert_eq!(zero.residue, b(0));
        assert!(extends_over_ball(&c, &zero).unwrap());
        let one = BoundaryClass { residue: b(1), modulus: b(4), generator_vertex: 0 };
        assert!(!extends_over_ball(&c, &one).unwrap());
    }

    #[test]
    fn k_restriction_of_the_28_9_chain() {
        // Hirzebruch–Jung order puts the −4 sphere first.
        let c = cf_expand(b(28), b(9)).unwrap();
        let k = k_restriction(&c, 0).unwrap();
        assert_eq!((k.residue.clone(), k.modulus.clone()), (b(532), b(784)));
        assert!(extends_over_ball(&c, &k).unwrap());
        // From the other end the same class reads −532.
        let other = k_restriction(&c, 10).unwrap();
        assert_eq!(other.residue, b(252));
        assert!(other.is_plus_minus(&b(532)));
    }

    #[test]
    fn middle_meridians_do_not_generate() {
        let c = cf_expand(b(28), b(9)).unwrap();
        // The −12 sphere's meridian has order dividing 784 / gcd(…, 784) < 784.
        let bh = boundary_homology(&c).unwrap();
        let bad = (0..c.len()).find(|&i| !bh.meridians[i].gcd(&bh.modulus).is_one()).unwrap();
        assert!(matches!(meridian_class(&c, 0, bad), Err(Error::NotAGenerator(_))));
        assert!(matches!(meridian_class(&c, 99, 0), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn lens_space_orders() {
        for (w, order) in [(vec![-2], 2), (vec![-2, -2], 3), (vec![-2, -2, -2], 4), (vec![-5, -2], 9)] {
            let c = LinearChain::<BigInt>::from_i64s(&w).unwrap();
            assert_eq!(boundary_homology(&c).unwrap().modulus, b(order));
        }
    }
}
