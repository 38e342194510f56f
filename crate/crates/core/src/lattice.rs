//! Intersection-form arithmetic on the odd diagonal lattice ⟨1⟩ ⊕ n⟨−1⟩,
//! the second homology of a projective plane blown up `n` times.
//!
//! Classes are coefficient vectors `[h, e₁, …, eₙ]`.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::scalar::{int, Int};

/// Gram matrices are plain symmetric integer matrices.
pub type GramMatrix<T> = IntMatrix<T>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientLattice {
    /// Number of exceptional generators; rank is `1 + n`.
    pub n: usize,
}

impl AmbientLattice {
    pub fn new(n: usize) -> Self {
        AmbientLattice { n }
    }

    pub fn rank(&self) -> usize {
        self.n + 1
    }

    pub fn h<T: Int>(&self) -> HomologyClass<T> {
        HomologyClass::h(self.n)
    }

    /// Exceptional class `e_i`, 1-based.
    pub fn e<T: Int>(&self, i: usize) -> HomologyClass<T> {
        HomologyClass::e(self.n, i)
    }

    /// `3h − e₁ − … − eₙ`, the Poincaré dual of the canonical class up to sign.
    pub fn anticanonical<T: Int>(&self) -> HomologyClass<T> {
        let mut coeffs = vec![-T::one(); self.n + 1];
        coeffs[0] = int(3);
        HomologyClass { coeffs }
    }

    /// Diagonal entry of the intersection form at coordinate `i`.
    pub fn form_sign<T: Int>(i: usize) -> T {
        if i == 0 {
            T::one()
        } else {
            -T::one()
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomologyClass<T> {
    coeffs: Vec<T>,
}

impl<T: Int> HomologyClass<T> {
    /// Wraps a coefficient vector `[h, e₁, …, eₙ]`. Panics on an empty vector.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a class needs at least the h coordinate");
        HomologyClass { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        HomologyClass { coeffs: vec![T::zero(); n + 1] }
    }

    pub fn h(n: usize) -> Self {
        let mut c = Self::zero(n);
        c.coeffs[0] = T::one();
        c
    }

    /// `e_i` with `i` in `1..=n`.
    pub fn e(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "e_{i} outside 1..={n}");
        let mut c = Self::zero(n);
        c.coeffs[i] = T::one();
        c
    }

    /// Builds `a·h + Σ cᵢ eᵢ` from `(i, cᵢ)` terms; repeated indices accumulate.
    pub fn from_terms(n: usize, h: i64, terms: &[(usize, i64)]) -> Self {
        let mut c = Self::zero(n);
        c.coeffs[0] = int(h);
        for &(i, v) in terms {
            assert!((1..=n).contains(&i), "e_{i} outside 1..={n}");
            c.coeffs[i] = c.coeffs[i].clone() + int::<T>(v);
        }
        c
    }

    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn ambient(&self) -> AmbientLattice {
        AmbientLattice::new(self.n())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn h_coeff(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn square(&self) -> T {
        pair_unchecked(self, self)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_ambient(self, other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_ambient(self, other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    pub fn scale(&self, k: &T) -> Self {
        HomologyClass { coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        HomologyClass { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    /// Parses the [`Display`](fmt::Display) form, e.g. `"9h-2e1-3e2"`, in an ambient of rank `n + 1`.
    /// Whitespace is ignored and repeated terms add up.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Scenario(format!("cannot parse class {s:?}: {why}"));
        let src: String =
            s.chars().filter(|c| !c.is_whitespace()).map(|c| if c == '\u{2212}' { '-' } else { c }).collect();
        if src.is_empty() {
            return Err(bad("empty"));
        }
        if src == "0" {
            return Ok(Self::zero(n));
        }
        let mut coeffs = vec![T::zero(); n + 1];
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = T::one();
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -T::one();
                }
                i += 1;
            } else if i > 0 {
                return Err(bad("missing sign between terms"));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mag = if start == i {
                T::one()
            } else {
                T::parse_decimal(&src[start..i]).ok_or_else(|| bad("coefficient"))?
            };
            let index = match bytes.get(i) {
                Some(b'h') => {
                    i += 1;
                    0
                }
                Some(b'e') => {
                    i += 1;
                    let s0 = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let k: usize = src[s0..i].parse().map_err(|_| bad("generator index"))?;
                    if k == 0 || k > n {
                        return Err(bad(&format!("e{k} outside e1..e{n}")));
                    }
                    k
                }
                _ => return Err(bad("expected h or e<i>")),
            };
            coeffs[index] = coeffs[index].clone() + sign * mag;
        }
        Ok(HomologyClass { coeffs })
    }

    /// The same class viewed in an ambient with `extra` more exceptional generators.
    pub fn extend(&self, extra: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(std::iter::repeat_n(T::zero(), extra));
        HomologyClass { coeffs }
    }

    pub(crate) fn with_coeff(mut self, i: usize, v: T) -> Self {
        self.coeffs[i] = v;
        self
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        HomologyClass { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect() }
    }
}

fn same_ambient<T: Int>(a: &HomologyClass<T>, b: &HomologyClass<T>) -> Result<()> {
    if a.n() == b.n() {
        Ok(())
    } else {
        Err(Error::AmbientMismatch { left: a.n(), right: b.n() })
    }
}

fn pair_unchecked<T: Int>(a: &HomologyClass<T>, b: &HomologyClass<T>) -> T {
    let mut acc = a.coeffs[0].clone() * b.coeffs[0].clone();
    for (x, y) in a.coeffs[1..].iter().zip(&b.coeffs[1..]) {
        acc = acc - x.clone() * y.clone();
    }
    acc
}

/// Intersection pairing `a_h b_h − Σ aᵢ bᵢ`.
pub fn pair<T: Int>(a: &HomologyClass<T>, b: &HomologyClass<T>) -> Result<T> {
    same_ambient(a, b)?;
    Ok(pair_unchecked(a, b))
}

/// Characteristic means `k·x ≡ x·x (mod 2)` for every `x`; on the diagonal
/// form that is "every coordinate odd".
pub fn is_characteristic<T: Int>(k: &HomologyClass<T>) -> bool {
    k.coeffs.iter().all(Integer::is_odd)
}

pub fn gram<T: Int>(classes: &[HomologyClass<T>]) -> Result<GramMatrix<T>> {
    if let Some(first) = classes.first() {
        for c in classes {
            same_ambient(first, c)?;
        }
    }
    let k = classes.len();
    Ok(IntMatrix::from_fn(k, k, |i, j| pair_unchecked(&classes[i], &classes[j])))
}

/// Integer basis of `{x : x·c = 0 for all c in classes}`.
///
/// The basis is the Hermite normal form of the kernel lattice, so it is a
/// canonical function of the input span.
pub fn orthogonal_complement<T: Int>(
    ambient: AmbientLattice,
    classes: &[HomologyClass<T>],
) -> Result<Vec<HomologyClass<T>>> {
    for c in classes {
        if c.n() != ambient.n {
            return Err(Error::AmbientMismatch { left: ambient.n, right: c.n() });
        }
    }
    let rank = ambient.rank();
    if classes.is_empty() {
        return Ok((0..rank)
            .map(|i| {
                let mut c = HomologyClass::zero(ambient.n);
                c.coeffs[i] = T::one();
                c
            })
            .collect());
    }
    // Rows are c·J, so (c·J)·x = c·x.
    let m = IntMatrix::from_fn(classes.len(), rank, |i, j| {
        classes[i].coeffs[j].clone() * AmbientLattice::form_sign::<T>(j)
    });
    Ok(m.kernel().into_iter().map(HomologyClass::new).collect())
}

/// Invariant factors of the cokernel of a square integer matrix, ascending,
/// unit factors included. A zero factor marks a free summand.
pub fn smith_invariants<T: Int>(m: &GramMatrix<T>) -> Vec<T> {
    m.smith().invariants()
}

/// Coordinates of `target` in the integer span of `basis`, if it lies there.
pub fn integer_coordinates<T: Int>(basis: &[HomologyClass<T>], target: &HomologyClass<T>) -> Option<Vec<T>> {
    if basis.is_empty() {
        return target.is_zero().then(Vec::new);
    }
    let n = basis[0].coeffs.len();
    if target.coeffs.len() != n {
        return None;
    }
    let (h, u) = IntMatrix::from_rows(basis.iter().map(|b| b.coeffs.clone()).collect()).hermite();
    let mut rest = target.coeffs.clone();
    let mut x = vec![T::zero(); basis.len()];
    for r in 0..h.rows() {
        let row = h.row(r);
        let Some(c) = row.iter().position(|v| !v.is_zero()) else { break };
        if !rest[c].is_multiple_of(&row[c]) {
            return None;
        }
        let coef = rest[c].clone() / row[c].clone();
        if coef.is_zero() {
            continue;
        }
        for (t, v) in rest.iter_mut().zip(row) {
            *t = t.clone() - coef.clone() * v.clone();
        }
        for (xi, ui) in x.iter_mut().zip(u.row(r)) {
            *xi = xi.clone() + coef.clone() * ui.clone();
        }
    }
    rest.iter().all(Zero::is_zero).then_some(x)
}

/// One reflection in a [`reflect_normalize`] certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "T: Int")]
pub struct Reflection<T: Int> {
    /// The mirror vector `v`; the move is `x ↦ x − 2(x·v)/(v·v)·v`.
    pub mirror: HomologyClass<T>,
}

impl<T: Int> Reflection<T> {
    pub fn new(mirror: HomologyClass<T>) -> Result<Self> {
        let sq = mirror.square();
        let two = int::<T>(2);
        if sq.is_zero() || !two.is_multiple_of(&sq) {
            return Err(Error::NotAReflection(sq.to_string()));
        }
        Ok(Reflection { mirror })
    }

    pub fn apply(&self, x: &HomologyClass<T>) -> Result<HomologyClass<T>> {
        let t = pair(x, &self.mirror)? * int::<T>(2) / self.mirror.square();
        x.sub(&self.mirror.scale(&t))
    }
}

/// Reflection cap for [`reflect_normalize`] when the caller has no better bound.
pub const DEFAULT_MOVE_BUDGET: usize = 10_000;

/// Reduces a characteristic class of square `9 − n` to `3h − e₁ − … − eₙ` by
/// reflections in `h`, `eᵢ`, `eᵢ − eⱼ`, `h − eᵢ − eⱼ` and `h − eᵢ − eⱼ − eₖ`.
///
/// The normal form always has positive `h` coefficient, so `−K` and `K` land
/// on the same class. Returns the normal form and the reflections applied, in order; replaying
/// them on the input reproduces the output.
pub fn reflect_normalize<T: Int>(
    k: &HomologyClass<T>,
    budget: usize,
) -> Result<(HomologyClass<T>, Vec<Reflection<T>>)> {
    let n = k.n();
    if !is_characteristic(k) {
        return Err(Error::NotCharacteristic);
    }
    let expected = int::<T>(9) - int::<T>(n as i64);
    if k.square() != expected {
        return Err(Error::WrongSquare { expected: expected.to_string(), found: k.square().to_string() });
    }
    let target = AmbientLattice::new(n).anticanonical::<T>();
    let mut x = k.clone();
    let mut moves = Vec::new();
    let push = |x: &mut HomologyClass<T>, mirror: HomologyClass<T>, moves: &mut Vec<Reflection<T>>| -> Result<()> {
        if moves.len() >= budget {
            return Err(Error::MoveBudgetExhausted(budget));
        }
        let r = Reflection::new(mirror)?;
        *x = r.apply(x)?;
        moves.push(r);
        Ok(())
    };
    loop {
        if x == target {
            return Ok((x, moves));
        }
        // Square 1: fix the sign of h.
        if x.coeffs[0].is_negative() {
            push(&mut x, HomologyClass::h(n), &mut moves)?;
            continue;
        }
        // Square −1: make every exceptional coefficient of the form −bᵢ e_i with bᵢ > 0.
        if let Some(i) = (1..=n).find(|&i| x.coeffs[i].is_positive()) {
            push(&mut x, HomologyClass::e(n, i), &mut moves)?;
            continue;
        }
        // Square −2, eᵢ − eⱼ: sort b₁ ≥ b₂ ≥ … (coefficients ascending).
        if let Some(i) = (1..n).find(|&i| x.coeffs[i] > x.coeffs[i + 1]) {
            let mirror = HomologyClass::e(n, i).sub(&HomologyClass::e(n, i + 1))?;
            push(&mut x, mirror, &mut moves)?;
            continue;
        }
        // Quadratic transformation along the three largest bᵢ.
        let m = n.min(3);
        if m < 2 {
            return Err(Error::NormalizationStuck(format!("{x}")));
        }
        let mut mirror = HomologyClass::h(n);
        for i in 1..=m {
            mirror.coeffs[i] = -T::one();
        }
        if !pair(&x, &mirror)?.is_negative() {
            return Err(Error::NormalizationStuck(format!("{x}")));
        }
        push(&mut x, mirror, &mut moves)?;
    }
}

impl<T: Int> fmt::Display for HomologyClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = if i == 0 { "h".to_string() } else { format!("e{i}") };
            let mag = c.abs();
            let sign = if c.is_negative() {
                "-"
            } else if wrote {
                "+"
            } else {
                ""
            };
            if mag.is_one() {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<T: Int> fmt::Debug for HomologyClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomologyClass({self})")
    }
}

impl<T: Int> Serialize for HomologyClass<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::json::serialize_ints(&self.coeffs, s)
    }
}

impl<'de, T: Int> Deserialize<'de> for HomologyClass<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs: Vec<T> = crate::json::deserialize_ints(d)?;
        if coeffs.is_empty() {
            return Err(serde::de::Error::custom("empty homology class"));
        }
        Ok(HomologyClass { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn class_parsing() {
        let c = HomologyClass::<BigInt>::parse(17, "9h-2e1-3e2 - e17").unwrap();
        assert_eq!(c, HomologyClass::from_terms(17, 9, &[(1, -2), (2, -3), (17, -1)]));
        assert_eq!(HomologyClass::<BigInt>::parse(3, &c.to_string().replace("e17", "e3")).unwrap().n(), 3);
        assert_eq!(HomologyClass::<BigInt>::parse(2, "e1+e1").unwrap(), HomologyClass::from_terms(2, 0, &[(1, 2)]));
        assert_eq!(HomologyClass::<BigInt>::parse(2, "0").unwrap(), HomologyClass::zero(2));
        for bad in ["", "e3", "e0", "2x", "h e1", "h+"] {
            assert!(HomologyClass::<BigInt>::parse(2, bad).is_err(), "{bad}");
        }
    }

    type C = HomologyClass<BigInt>;

    fn alpha() -> C {
        let mut terms = vec![(1, -2), (2, -3), (10, -1), (12, -1), (13, -2), (16, -1), (17, -1)];
        terms.extend((3..=9).map(|i| (i, -2)));
        C::from_terms(17, 7, &terms)
    }

    #[test]
    fn pairing_conventions() {
        let l = AmbientLattice::new(17);
        assert_eq!(pair(&l.h::<BigInt>(), &l.h()).unwrap(), BigInt::from(1));
        assert_eq!(pair(&l.e::<BigInt>(1), &l.e(1)).unwrap(), BigInt::from(-1));
        assert_eq!(pair(&alpha(), &alpha()).unwrap(), BigInt::from(0));
        assert_eq!(pair(&alpha(), &l.h()).unwrap(), BigInt::from(7));
        let short = C::h(3);
        assert!(matches!(pair(&short, &alpha()), Err(Error::AmbientMismatch { .. })));
    }

    #[test]
    fn characteristic_examples() {
        assert!(is_characteristic(&AmbientLattice::new(17).anticanonical::<BigInt>()));
        assert!(!is_characteristic(&C::zero(1)));
        assert!(!is_characteristic(&C::h(1)));
    }

    #[test]
    fn gram_of_empty_list() {
        let g = gram::<BigInt>(&[]).unwrap();
        assert_eq!((g.rows(), g.cols()), (0, 0));
    }

    #[test]
    fn complement_of_single_exceptional() {
        let basis = orthogonal_complement(AmbientLattice::new(1), &[C::e(1, 1)]).unwrap();
        assert_eq!(basis, vec![C::h(1)]);
    }

    #[test]
    fn smith_invariant_examples() {
        let m = IntMatrix::from_rows(vec![vec![BigInt::from(-4)]]);
        assert_eq!(smith_invariants(&m), vec![BigInt::from(4)]);
        let id = IntMatrix::<BigInt>::identity(3);
        assert_eq!(smith_invariants(&id), vec![BigInt::from(1); 3]);
    }

    #[test]
    fn integer_coordinates_detects_span() {
        let basis = vec![C::from_i64s(&[1, 1, 0]), C::from_i64s(&[0, 2, 0])];
        assert_eq!(
            integer_coordinates(&basis, &C::from_i64s(&[3, 7, 0])),
            Some(vec![BigInt::from(3), BigInt::from(2)])
        );
        assert_eq!(integer_coordinates(&basis, &C::from_i64s(&[0, 1, 0])), None);
        assert_eq!(integer_coordinates(&basis, &C::from_i64s(&[0, 0, 1])), None);
    }

    #[test]
    fn normal_form_is_fixed() {
        let k = AmbientLattice::new(6).anticanonical::<BigInt>();
        let (out, moves) = reflect_normalize(&k, DEFAULT_MOVE_BUDGET).unwrap();
        assert_eq!(out, k);
        assert!(moves.is_empty());
    }

    #[test]
    fn negated_normal_form_comes_back_positive() {
        let k = AmbientLattice::new(6).anticanonical::<BigInt>();
        let (out, moves) = reflect_normalize(&k.neg(), DEFAULT_MOVE_BUDGET).unwrap();
        assert_eq!(out, k);
        let mut x = k.neg();
        for m in &moves {
            x = m.apply(&x).unwrap();
        }
        assert_eq!(x, out);
    }

    #[test]
    fn normalize_rejects_bad_input() {
        assert!(matches!(reflect_normalize(&C::from_i64s(&[3, 1, 2]), 10), Err(Error::NotCharacteristic)));
        assert!(matches!(reflect_normalize(&C::from_i64s(&[1, 1]), 10), Err(Error::WrongSquare { .. })));
        // (5; 3, 3) has square 7 for n = 2 and needs one move.
        let k = C::from_i64s(&[5, -3, -3]);
        assert!(matches!(reflect_normalize(&k, 0), Err(Error::MoveBudgetExhausted(0))));
        let (out, moves) = reflect_normalize(&k, 10).unwrap();
        assert_eq!(out, C::from_i64s(&[3, -1, -1]));
        assert_eq!(moves.len(), 1);
    }

    #[test]
    fn square_zero_multiple_is_stuck() {
        // 3·(3h − Σe) in n = 9 is characteristic of square 0 but not in the orbit.
        let k = AmbientLattice::new(9).anticanonical::<BigInt>().scale(&BigInt::from(3));
        assert!(matches!(reflect_normalize(&k, DEFAULT_MOVE_BUDGET), Err(Error::NormalizationStuck(_))));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(C::from_terms(3, 1, &[(1, -1), (2, -2)]).to_string(), "h-e1-2e2");
        assert_eq!(C::zero(2).to_string(), "0");
        assert_eq!(C::from_terms(3, 0, &[(3, 1)]).to_string(), "e3");
    }
}
