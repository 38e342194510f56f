//! Integer scalar abstraction.
//!
//! Everything in this crate is written against [`Int`], an exact signed
//! integer type. The crate-root aliases pick [`num_bigint::BigInt`]; the
//! fixed-width impls exist for small tests and for callers who know their
//! data stays bounded.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integer usable as a lattice coefficient.
pub trait Int:
    Clone + Debug + Display + Hash + Ord + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Parses a decimal string, returning `None` on malformed input or overflow.
    fn parse_decimal(s: &str) -> Option<Self>;
}

impl Int for i64 {
    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl Int for i128 {
    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl Int for BigInt {
    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

/// Exact rational over an [`Int`].
pub type Rat<T> = Ratio<T>;

pub fn int<T: Int>(v: i64) -> T {
    T::from_i64(v).expect("i64 fits every Int")
}

pub fn rat<T: Int>(num: i64, den: i64) -> Rat<T> {
    Ratio::new(int(num), int(den))
}

/// Non-negative residue of `a` modulo `m > 0`.
pub fn modulo<T: Int>(a: &T, m: &T) -> T {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse<T: Int>(a: &T, m: &T) -> Option<T> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Gcd of a slice, zero for an empty or all-zero slice.
pub fn gcd_all<T: Int>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |g, v| g.gcd(v))
}

/// Integer square root when `n` is a perfect square.
pub fn exact_sqrt<T: Int>(n: &T) -> Option<T> {
    if n.is_negative() {
        return None;
    }
    if n.is_zero() {
        return Some(T::zero());
    }
    // Newton iteration from an upper bound.
    let two = int::<T>(2);
    let mut x = n.clone();
    loop {
        let y = (x.clone() + n.clone() / x.clone()) / two.clone();
        if y >= x {
            break;
        }
        x = y;
    }
    if x.clone() * x.clone() == *n {
        Some(x)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_helpers() {
        assert_eq!(modulo(&-3i64, &8), 5);
        assert_eq!(mod_inverse(&13i64, &784), Some(181));
        assert_eq!((13 * 181) % 784, 1);
        assert_eq!(mod_inverse(&28i64, &784), None);
        assert_eq!(gcd_all(&[12i64, -18, 30]), 6);
        assert_eq!(gcd_all::<i64>(&[]), 0);
    }

    #[test]
    fn square_roots() {
        assert_eq!(exact_sqrt(&784i64), Some(28));
        assert_eq!(exact_sqrt(&785i64), None);
        assert_eq!(exact_sqrt(&BigInt::from(1_048_576)), Some(BigInt::from(1024)));
        assert_eq!(exact_sqrt(&1i64), Some(1));
        assert_eq!(exact_sqrt(&-4i64), None);
    }
}
