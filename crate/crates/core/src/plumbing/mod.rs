//! Linear plumbings `C_{p,q}`: negative continued fractions of `−p²/(pq−1)`,
//! Wahl-chain generation, boundary first homology, and blow-down calculus.

mod boundary;
mod kirby;

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::GramMatrix;
use crate::matrix::IntMatrix;
use crate::scalar::{exact_sqrt, int, Int, Rat};

pub use boundary::{
    boundary_homology, boundary_residue, extends_over_ball, k_evaluation, k_restriction, meridian_class, BoundaryClass,
    BoundaryHomology,
};
pub use kirby::{
    attach_unknot, blow_down_reduce, embedding_certificate, BlowDownResult, BlowDownStep, Certificate, FramedGraph,
    DEFAULT_MAX_MULT,
};

/// Weights `(d₁, …, d_k)` of a linear plumbing, each `≤ −2`, with the `(p, q)`
/// it came from when known. Equality and ordering look at the weights only.
#[derive(Clone, Debug)]
pub struct LinearChain<T> {
    weights: Vec<T>,
    provenance: Option<(T, T)>,
}

impl<T: PartialEq> PartialEq for LinearChain<T> {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights
    }
}

impl<T: Eq> Eq for LinearChain<T> {}

impl<T: std::hash::Hash> std::hash::Hash for LinearChain<T> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.weights.hash(state);
    }
}

impl<T: Ord> PartialOrd for LinearChain<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Ord> Ord for LinearChain<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.weights.cmp(&other.weights)
    }
}

impl<T: Int> LinearChain<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::MalformedChain("empty weight list".into()));
        }
        if let Some(w) = weights.iter().find(|w| **w > int(-2)) {
            return Err(Error::MalformedChain(format!("weight {w} is not <= -2")));
        }
        Ok(LinearChain { weights, provenance: None })
    }

    pub fn from_i64s(weights: &[i64]) -> Result<Self> {
        Self::new(weights.iter().map(|&w| int(w)).collect())
    }

    /// Attaches `(p, q)` after checking that the weights are its expansion up
    /// to reversal.
    pub fn with_provenance(mut self, p: T, q: T) -> Result<Self> {
        let expected = cf_expand(p.clone(), q.clone())?;
        if !expected.same_up_to_reversal(&self) {
            return Err(Error::MalformedChain(format!(
                "weights {:?} are not the expansion of ({p}, {q})",
                self.weights
            )));
        }
        self.provenance = Some((p, q));
        Ok(self)
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn provenance(&self) -> Option<&(T, T)> {
        self.provenance.as_ref()
    }

    /// The same plumbing read from the other end; `C_{p,q}` becomes `C_{p,p−q}`.
    pub fn reversed(&self) -> Self {
        let mut weights = self.weights.clone();
        weights.reverse();
        let provenance = self.provenance.clone().map(|(p, q)| (p.clone(), p - q));
        LinearChain { weights, provenance }
    }

    pub fn same_up_to_reversal(&self, other: &Self) -> bool {
        self.weights == other.weights || self.weights.iter().eq(other.weights.iter().rev())
    }

    /// Lexicographically smaller of the two orientations.
    pub fn canonical(&self) -> Self {
        let rev = self.reversed();
        if rev.weights < self.weights {
            rev
        } else {
            self.clone()
        }
    }

    /// Tridiagonal intersection matrix of the plumbing.
    pub fn gram(&self) -> GramMatrix<T> {
        let k = self.len();
        IntMatrix::from_fn(k, k, |i, j| {
            if i == j {
                self.weights[i].clone()
            } else if i.abs_diff(j) == 1 {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    /// Recovers `(p, q)` from the value `−p²/(pq − 1)` when it has that shape.
    pub fn recover_provenance(&self) -> Option<(T, T)> {
        let v = cf_eval(self).ok()?;
        let num = -v.numer().clone();
        let den = v.denom().clone();
        let p = exact_sqrt(&num)?;
        let (q, r) = (den + T::one()).div_rem(&p);
        if !r.is_zero() || q < T::one() || q >= p || !p.gcd(&q).is_one() {
            return None;
        }
        Some((p, q))
    }
}

impl<T: Int> std::fmt::Display for LinearChain<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let w: Vec<String> = self.weights.iter().map(ToString::to_string).collect();
        write!(f, "({})", w.join(","))
    }
}

impl<T: Int> Serialize for LinearChain<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::json::serialize_ints(&self.weights, s)
    }
}

impl<'de, T: Int> Deserialize<'de> for LinearChain<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let weights = crate::json::deserialize_ints(d)?;
        LinearChain::new(weights).map_err(serde::de::Error::custom)
    }
}

fn check_pq<T: Int>(p: &T, q: &T) -> Result<()> {
    if *q < T::one() || p <= q || !p.gcd(q).is_one() {
        return Err(Error::InvalidPq { p: p.to_string(), q: q.to_string() });
    }
    Ok(())
}

/// Negative continued-fraction weights of `−p²/(pq − 1)`.
///
/// The result is in Hirzebruch–Jung order: `cf_expand(28, 9)` starts with
/// `−4` and ends `…, −12, −2, −2`.
pub fn cf_expand<T: Int>(p: T, q: T) -> Result<LinearChain<T>> {
    check_pq(&p, &q)?;
    let mut num = p.clone() * p.clone();
    let mut den = p.clone() * q.clone() - T::one();
    let mut weights = Vec::new();
    while !den.is_zero() {
        let b = num.div_ceil(&den);
        let next = b.clone() * den.clone() - num;
        num = den;
        den = next;
        weights.push(-b);
    }
    Ok(LinearChain { weights, provenance: Some((p, q)) })
}

/// Exact value of `d₁ − 1/(d₂ − 1/(… − 1/d_k))`.
pub fn cf_eval<T: Int>(chain: &LinearChain<T>) -> Result<Rat<T>> {
    let mut iter = chain.weights.iter().rev();
    let mut value =
        Rat::from_integer(iter.next().ok_or_else(|| Error::MalformedChain("empty weight list".into()))?.clone());
    for w in iter {
        if value.is_zero() {
            return Err(Error::MalformedChain("continued fraction divides by zero".into()));
        }
        value = Rat::from_integer(w.clone()) - value.recip();
    }
    Ok(value)
}

/// All chains reachable from `(−4)` by `(b₁,…,b_k) → (b₁−1, b₂,…,b_k, −2)` and
/// `(b₁,…,b_k) → (−2, b₁,…,b_{k−1}, b_k−1)`, up to length `max_len`.
pub fn wahl_generate<T: Int>(max_len: usize) -> BTreeSet<LinearChain<T>> {
    let mut seen = BTreeSet::new();
    if max_len == 0 {
        return seen;
    }
    let start = LinearChain { weights: vec![int::<T>(-4)], provenance: None };
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    while let Some(chain) = queue.pop_front() {
        if chain.len() == max_len {
            continue;
        }
        let k = chain.len();
        let mut left = chain.weights.clone();
        left[0] = left[0].clone() - T::one();
        left.push(int(-2));
        let mut right = vec![int::<T>(-2)];
        right.extend(chain.weights.iter().cloned());
        right[k] = right[k].clone() - T::one();
        for weights in [left, right] {
            let next = LinearChain { weights, provenance: None };
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Absolute discriminant `|det Q|` of the plumbing.
pub fn discriminant<T: Int>(chain: &LinearChain<T>) -> T {
    chain.gram().det().abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn chain(w: &[i64]) -> LinearChain<BigInt> {
        LinearChain::from_i64s(w).unwrap()
    }

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(cf_expand(b(2), b(1)).unwrap().weights(), chain(&[-4]).weights());
        let c = cf_expand(b(28), b(9)).unwrap();
        assert_eq!(c.reversed().weights(), chain(&[-2, -2, -12, -2, -2, -2, -2, -2, -2, -2, -4]).weights());
        let c = cf_expand(b(32), b(15)).unwrap();
        assert_eq!(c.reversed().weights(), chain(&[-2, -9, -5, -2, -2, -2, -2, -2, -2, -3]).weights());
    }

    #[test]
    fn expansion_rejects_bad_pairs() {
        for (p, q) in [(4, 2), (3, 3), (3, 0), (2, 5)] {
            assert!(matches!(cf_expand(b(p), b(q)), Err(Error::InvalidPq { .. })));
        }
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(cf_eval(&chain(&[-4])).unwrap(), Rat::from_integer(b(-4)));
        assert_eq!(cf_eval(&chain(&[-2, -2])).unwrap(), Rat::new(b(-3), b(2)));
        let c = cf_expand(b(46), b(9)).unwrap();
        assert_eq!(cf_eval(&c).unwrap(), Rat::new(b(-2116), b(413)));
    }

    #[test]
    fn zero_inside_the_fold_is_reported() {
        // Weights are validated on construction, so build the degenerate case directly.
        let bad = LinearChain { weights: vec![b(-2), b(0)], provenance: None };
        assert!(matches!(cf_eval(&bad), Err(Error::MalformedChain(_))));
    }

    #[test]
    fn chain_validation() {
        assert!(LinearChain::<BigInt>::from_i64s(&[-2, -1]).is_err());
        assert!(LinearChain::<BigInt>::from_i64s(&[]).is_err());
        let c = chain(&[-2, -2, -12, -2, -2, -2, -2, -2, -2, -2, -4]);
        assert!(c.clone().with_provenance(b(28), b(9)).is_ok());
        assert!(c.with_provenance(b(28), b(5)).is_err());
    }

    #[test]
    fn canonical_orientation() {
        let c = chain(&[-4, -2, -12]);
        assert_eq!(c.canonical().weights(), chain(&[-12, -2, -4]).weights());
        assert!(c.same_up_to_reversal(&c.reversed()));
    }

    #[test]
    fn small_wahl_sets() {
        let one: Vec<_> = wahl_generate::<BigInt>(1).into_iter().map(|c| c.weights().to_vec()).collect();
        assert_eq!(one, vec![vec![b(-4)]]);
        let two = wahl_generate::<BigInt>(2);
        assert_eq!(two.len(), 3);
        assert!(two.contains(&chain(&[-5, -2])));
        assert!(two.contains(&chain(&[-2, -5])));
        assert!(wahl_generate::<BigInt>(0).is_empty());
    }

    #[test]
    fn provenance_recovery() {
        let c = chain(&[-2, -2, -12, -2, -2, -2, -2, -2, -2, -2, -4]);
        // Evaluated in this orientation the value is −784/531, i.e. q = 19.
        assert_eq!(c.recover_provenance(), Some((b(28), b(19))));
        assert_eq!(c.reversed().recover_provenance(), Some((b(28), b(9))));
        assert_eq!(chain(&[-2, -2]).recover_provenance(), None);
    }
}
