//! Dense univariate polynomials over `Q`: Euclidean arithmetic, square-free
//! parts, rational roots and factorisation over `Q` by Kronecker's method.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, Int, Rat};

/// Coefficients low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<T: Int> {
    coeffs: Vec<Rat<T>>,
}

/// Guard on the number of interpolation candidates Kronecker's method may try.
const KRONECKER_BUDGET: usize = 2_000_000;

impl<T: Int> UniPoly<T> {
    pub fn new(mut coeffs: Vec<Rat<T>>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rat::from_integer(int(c))).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat<T>) -> Self {
        Self::new(vec![c])
    }

    /// `x − r`.
    pub fn linear_root(r: Rat<T>) -> Self {
        Self::new(vec![-r, Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat<T> {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat<T>) -> Rat<T> {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
                        + other.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rat<T>) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(Rat::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.clone() * Rat::from_integer(int(i as i64))).collect(),
        )
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let c = rem.last().cloned().expect("nonempty") / lead.clone();
            for (i, x) in d.coeffs.iter().enumerate() {
                rem[shift + i] = rem[shift + i].clone() - c.clone() * x.clone();
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient if `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&(Rat::one() / self.leading()))
    }

    /// Monic gcd; zero only if both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic product of the distinct irreducible factors.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Multiplicity of `r` as a root; 0 for the zero polynomial.
    pub fn root_multiplicity(&self, r: &Rat<T>) -> usize {
        if self.is_zero() {
            return 0;
        }
        let lin = Self::linear_root(r.clone());
        let mut p = self.clone();
        let mut m = 0;
        while let Some(q) = p.div_exact(&lin) {
            p = q;
            m += 1;
        }
        m
    }

    /// Primitive integer polynomial with positive leading coefficient and the same roots.
    pub fn primitive(&self) -> Vec<T> {
        let den = self.coeffs.iter().fold(T::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<T> =
            self.coeffs.iter().map(|c| (c.clone() * Rat::from_integer(den.clone())).to_integer()).collect();
        let g = crate::scalar::gcd_all(&ints);
        if g.is_zero() {
            return ints;
        }
        let sign = if ints.last().is_some_and(|x| x.is_negative()) { -T::one() } else { T::one() };
        ints.into_iter().map(|x| x / g.clone() * sign.clone()).collect()
    }

    /// Distinct rational roots, ascending, with multiplicities.
    pub fn rational_roots(&self) -> Vec<(Rat<T>, usize)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut p = self.clone();
        let zero = Rat::zero();
        let m0 = p.root_multiplicity(&zero);
        if m0 > 0 {
            out.push((zero.clone(), m0));
            p = p.div_exact(&Self::linear_root(zero).pow(m0)).expect("root");
        }
        if p.degree().unwrap_or(0) > 0 {
            let ints = p.square_free_part().primitive();
            let a0 = ints.first().expect("nonzero").abs();
            let an = ints.last().expect("nonzero").abs();
            let mut cands = Vec::new();
            for num in divisors(&a0) {
                for den in divisors(&an) {
                    let r = Rat::new(num.clone(), den);
                    cands.push(r.clone());
                    cands.push(-r);
                }
            }
            cands.sort();
            cands.dedup();
            for r in cands {
                let m = p.root_multiplicity(&r);
                if m > 0 {
                    out.push((r, m));
                }
            }
        }
        out.sort();
        out
    }

    /// Irreducible monic factors over `Q` with multiplicities, ordered by
    /// degree then coefficients. Constant polynomials have no factors.
    pub fn factor(&self) -> Result<Vec<(Self, usize)>> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return Ok(out);
        }
        let mut rest = self.monic();
        for (r, m) in self.rational_roots() {
            let lin = Self::linear_root(r);
            rest = rest.div_exact(&lin.pow(m)).expect("root");
            out.push((lin, m));
        }
        // Split the remaining part into square-free layers: f = Π fᵢ^i.
        let mut layer = 1;
        while rest.degree().unwrap_or(0) > 0 {
            let sf = rest.square_free_part();
            let g = rest.gcd(&rest.derivative());
            // Factors of multiplicity exactly `layer` are those of sf not in the next layer.
            let next_sf = if g.degree().unwrap_or(0) > 0 { g.square_free_part() } else { Self::constant(Rat::one()) };
            let this_layer = sf.div_exact(&next_sf).expect("nested square-free parts");
            for f in kronecker(&this_layer)? {
                out.push((f, layer));
            }
            rest = g;
            layer += 1;
        }
        out.sort_by(|(a, ma), (b, mb)| {
            a.degree().cmp(&b.degree()).then_with(|| a.coeffs.cmp(&b.coeffs)).then(ma.cmp(mb))
        });
        Ok(out)
    }

    /// Writes the polynomial with `var` as its variable, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&crate::json::rat_to_string(&mag));
            } else if mag.is_one() {
                s.push_str(&mono);
            } else if mag.is_integer() {
                s.push_str(&format!("{}{}", mag, mono));
            } else {
                s.push_str(&format!("({}){}", crate::json::rat_to_string(&mag), mono));
            }
        }
        s
    }
}

impl<T: Int> Ord for UniPoly<T> {
    /// By degree, then coefficients from the constant term up.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl<T: Int> PartialOrd for UniPoly<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Int> fmt::Display for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl<T: Int> fmt::Debug for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

/// Positive divisors of `n > 0`, ascending. `divisors(0)` is `[1]`, which is
/// all a root-candidate search needs once zero roots are stripped.
fn divisors<T: Int>(n: &T) -> Vec<T> {
    let n = n.abs();
    if n.is_zero() {
        return vec![T::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = T::one();
    while d.clone() * d.clone() <= n {
        if n.is_multiple_of(&d) {
            let e = n.clone() / d.clone();
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d = d + T::one();
    }
    small.extend(large.into_iter().rev());
    small
}

/// Irreducible monic factors of a square-free polynomial without rational roots.
fn kronecker<T: Int>(f: &UniPoly<T>) -> Result<Vec<UniPoly<T>>> {
    let Some(n) = f.degree() else { return Ok(Vec::new()) };
    if n == 0 {
        return Ok(Vec::new());
    }
    if n <= 3 {
        return Ok(vec![f.monic()]);
    }
    for d in 2..=n / 2 {
        if let Some(g) = find_factor(f, d)? {
            let h = f.div_exact(&g).expect("factor divides");
            let mut out = kronecker(&g)?;
            out.extend(kronecker(&h)?);
            return Ok(out);
        }
    }
    Ok(vec![f.monic()])
}

/// A monic factor of degree exactly `d`, found by interpolating through
/// divisors of the values of the primitive integer form at `d + 1` points.
fn find_factor<T: Int>(f: &UniPoly<T>, d: usize) -> Result<Option<UniPoly<T>>> {
    let ints = f.primitive();
    let fz = UniPoly::new(ints.iter().map(|c| Rat::from_integer(c.clone())).collect());
    let mut points: Vec<(Rat<T>, Vec<T>)> = Vec::new();
    let mut k: i64 = 0;
    while points.len() < d + 1 {
        let x = Rat::from_integer(int::<T>(k));
        let v = fz.eval(&x).to_integer();
        // f has no rational roots, so v is never zero here.
        points.push((x, divisors(&v)));
        k = if k <= 0 { 1 - k } else { -k };
    }
    let total = points.iter().try_fold(1usize, |acc, (_, ds)| acc.checked_mul(2 * ds.len()));
    if total.is_none_or(|t| t > KRONECKER_BUDGET) {
        return Err(Error::UnsupportedPencil(format!("factorisation search for {f} too large")));
    }
    let mut choice = vec![0usize; d + 1];
    loop {
        // The first value is taken positive: g and −g give the same monic factor.
        let ys: Vec<Rat<T>> = choice
            .iter()
            .zip(&points)
            .enumerate()
            .map(|(i, (&c, (_, ds)))| {
                let v = Rat::from_integer(ds[c / 2].clone());
                if i > 0 && c % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        let g = interpolate(&points.iter().map(|(x, _)| x.clone()).collect::<Vec<_>>(), &ys);
        if g.degree() == Some(d) && fz.div_exact(&g).is_some() {
            return Ok(Some(g.monic()));
        }
        // Advance the mixed-radix counter.
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(None);
            }
            let radix = if i == 0 { points[0].1.len() * 2 } else { points[i].1.len() * 2 };
            choice[i] += if i == 0 { 2 } else { 1 };
            if choice[i] < radix {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Lagrange interpolation through `(xs[i], ys[i])`.
fn interpolate<T: Int>(xs: &[Rat<T>], ys: &[Rat<T>]) -> UniPoly<T> {
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut term = UniPoly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                term = term.mul(&UniPoly::linear_root(xj.clone())).scale(&(Rat::one() / (xi.clone() - xj.clone())));
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Minimal polynomial over `Q` of `a(θ)/b(θ)` where `θ` is a root of the
/// irreducible `g`. `b` must not vanish modulo `g`.
pub fn minimal_polynomial<T: Int>(a: &UniPoly<T>, b: &UniPoly<T>, g: &UniPoly<T>) -> Option<UniPoly<T>> {
    let n = g.degree()?;
    let b = b.div_rem(g).1;
    let binv = mod_inverse(&b, g)?;
    let alpha = a.mul(&binv).div_rem(g).1;
    // Powers 1, α, α², … as coordinate vectors in the basis 1, θ, …, θⁿ⁻¹;
    // the first dependency gives the minimal polynomial.
    let mut powers: Vec<Vec<Rat<T>>> = Vec::new();
    let mut p = UniPoly::constant(Rat::one());
    for _ in 0..=n {
        let mut v = p.coeffs.clone();
        v.resize(n, Rat::zero());
        powers.push(v);
        if let Some(rel) = dependency(&powers) {
            return Some(UniPoly::new(rel).monic());
        }
        p = p.mul(&alpha).div_rem(g).1;
    }
    None
}

fn mod_inverse<T: Int>(b: &UniPoly<T>, g: &UniPoly<T>) -> Option<UniPoly<T>> {
    // Extended Euclid tracking the coefficient of b.
    let (mut r0, mut r1) = (g.clone(), b.clone());
    let (mut s0, mut s1) = (UniPoly::zero(), UniPoly::constant(Rat::one()));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.degree() != Some(0) {
        return None;
    }
    Some(s0.scale(&(Rat::one() / r0.leading())).div_rem(g).1)
}

/// Coefficients `c` with `Σ cᵢ vᵢ = 0` and last entry 1, if the last vector
/// depends on the earlier (independent) ones.
fn dependency<T: Int>(vectors: &[Vec<Rat<T>>]) -> Option<Vec<Rat<T>>> {
    let k = vectors.len();
    let n = vectors[0].len();
    // Solve Σ_{i<k−1} cᵢ vᵢ = −v_{k−1} by elimination on the n × (k−1) system.
    let m = k - 1;
    let mut rows: Vec<Vec<Rat<T>>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rat<T>> = (0..m).map(|i| vectors[i][r].clone()).collect();
            row.push(-vectors[m][r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m {
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rat::one() / rows[r][c].clone();
        for x in &mut rows[r] {
            *x = x.clone() * inv.clone();
        }
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..=m {
                    rows[i][j] = rows[i][j].clone() - f.clone() * rows[r][j].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[m].is_zero()) {
        return None;
    }
    let mut c = vec![Rat::zero(); k];
    for (i, &col) in pivots.iter().enumerate() {
        c[col] = rows[i][m].clone();
    }
    c[m] = Rat::one();
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = UniPoly<BigInt>;

    fn r(n: i64, d: i64) -> Rat<BigInt> {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn arithmetic_and_division() {
        let a = P::from_i64s(&[-1, 0, 1]);
        let b = P::from_i64s(&[-1, 1]);
        let (q, rem) = a.div_rem(&b);
        assert_eq!(q, P::from_i64s(&[1, 1]));
        assert!(rem.is_zero());
        assert_eq!(a.gcd(&P::from_i64s(&[1, 1])), P::from_i64s(&[1, 1]));
        assert_eq!(P::from_i64s(&[0, 0, 0, 2]).square_free_part(), P::from_i64s(&[0, 1]));
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (2x − 1)²(x + 3) x
        let f = P::from_i64s(&[-1, 2]).pow(2).mul(&P::from_i64s(&[3, 1])).mul(&P::from_i64s(&[0, 1]));
        assert_eq!(f.rational_roots(), vec![(r(-3, 1), 1), (r(0, 1), 1), (r(1, 2), 2)]);
        assert!(P::from_i64s(&[-1, -1, 1]).rational_roots().is_empty());
    }

    #[test]
    fn factorisation() {
        let f = P::from_i64s(&[0, -2, -2, 2]);
        let fs = f.factor().unwrap();
        assert_eq!(fs, vec![(P::from_i64s(&[0, 1]), 1), (P::from_i64s(&[-1, -1, 1]), 1)]);
        // (x² + 1)(x² − 2) splits by Kronecker.
        let g = P::from_i64s(&[1, 0, 1]).mul(&P::from_i64s(&[-2, 0, 1]));
        let gs = g.factor().unwrap();
        assert_eq!(gs.len(), 2);
        assert!(gs.contains(&(P::from_i64s(&[1, 0, 1]), 1)));
        assert!(gs.contains(&(P::from_i64s(&[-2, 0, 1]), 1)));
        // x⁴ + 1 is irreducible.
        assert_eq!(P::from_i64s(&[1, 0, 0, 0, 1]).factor().unwrap().len(), 1);
        // Repeated irrational factor.
        let h = P::from_i64s(&[-2, 0, 1]).pow(2).mul(&P::from_i64s(&[-1, 1]));
        assert_eq!(h.factor().unwrap(), vec![(P::from_i64s(&[-1, 1]), 1), (P::from_i64s(&[-2, 0, 1]), 2)]);
    }

    #[test]
    fn minimal_polynomials() {
        let g = P::from_i64s(&[-2, 0, 1]);
        // θ² = 2: θ has minimal polynomial x² − 2, θ² has x − 2, 1/θ has x² − 1/2.
        assert_eq!(
            minimal_polynomial(&P::from_i64s(&[0, 1]), &P::from_i64s(&[1]), &g),
            Some(P::from_i64s(&[-2, 0, 1]))
        );
        assert_eq!(
            minimal_polynomial(&P::from_i64s(&[0, 0, 1]), &P::from_i64s(&[1]), &g),
            Some(P::from_i64s(&[-2, 1]))
        );
        assert_eq!(
            minimal_polynomial(&P::from_i64s(&[1]), &P::from_i64s(&[0, 1]), &g),
            Some(P::new(vec![r(-1, 2), r(0, 1), r(1, 1)]))
        );
        assert_eq!(minimal_polynomial(&P::from_i64s(&[1]), &g, &g), None);
    }

    #[test]
    fn display() {
        assert_eq!(P::from_i64s(&[0, -2, -2, 2]).to_string(), "2x^3 - 2x^2 - 2x");
        assert_eq!(P::new(vec![r(-1, 2), r(0, 1), r(1, 1)]).display_in("s"), "s^2 - 1/2");
    }
}
