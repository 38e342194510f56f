//! Combinatorial Seiberg–Witten bookkeeping: the dimension formula,
//! adjunction filtering of characteristic candidates on a complement lattice,
//! the sign test across a wall, and the blow-up formula on basic classes.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::embedding::Genus;
use crate::error::{Error, Result};
use crate::lattice::{pair, GramMatrix, HomologyClass};
use crate::scalar::{int, modulo, Int, Rat};

/// Expected dimension `(c₁² − 3σ − 2χ)/4` of the moduli space.
pub fn dimension<T: Int>(square: &T, chi: &T, sigma: &T) -> Result<T> {
    let value = square.clone() - int::<T>(3) * sigma.clone() - int::<T>(2) * chi.clone();
    let four = int::<T>(4);
    if !value.is_multiple_of(&four) {
        return Err(Error::DimensionNotIntegral { value: square.to_string() });
    }
    Ok(value / four)
}

/// `A² + |L(A)| ≤ 0` together with `L(A) ≡ A² (mod 2)`.
pub fn adjunction_ok<T: Int>(square: &T, eval: &T) -> bool {
    square.clone() + eval.abs() <= T::zero() && (eval.clone() - square.clone()).is_even()
}

/// A class represented by an embedded surface, given as an integer
/// combination of complement basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionConstraint<T: Int> {
    #[serde(serialize_with = "crate::json::serialize_ints")]
    pub combo: Vec<T>,
    pub genus: Genus,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub square: T,
}

impl<T: Int> AdjunctionConstraint<T> {
    /// The constraint for basis vector `index`, its square read off `g`.
    pub fn basis(index: usize, genus: Genus, g: &GramMatrix<T>) -> Result<Self> {
        if index >= g.rows() {
            return Err(Error::ConstraintIndex(index));
        }
        let mut combo = vec![T::zero(); g.rows()];
        combo[index] = T::one();
        Self::derived(combo, genus, g)
    }

    /// The square comes from `g`, never from the caller.
    pub fn derived(combo: Vec<T>, genus: Genus, g: &GramMatrix<T>) -> Result<Self> {
        if combo.len() != g.rows() {
            return Err(Error::ConstraintIndex(combo.len()));
        }
        let square = g.bilinear(&combo, &combo);
        if !square.is_negative() {
            return Err(Error::WrongSquare { expected: "<= -1".into(), found: square.to_string() });
        }
        Ok(AdjunctionConstraint { combo, genus, square })
    }

    pub fn evaluate(&self, evals: &[T]) -> T {
        self.combo.iter().zip(evals).fold(T::zero(), |acc, (c, e)| acc + c.clone() * e.clone())
    }

    pub fn admits(&self, evals: &[T]) -> bool {
        adjunction_ok(&self.square, &self.evaluate(evals))
    }

    /// Values `e` with `|e| ≤ −A²` and `e ≡ A² (mod 2)`, ascending.
    pub fn admissible_values(&self) -> Vec<T> {
        let bound = -self.square.clone();
        let mut out = Vec::new();
        let mut e = self.square.clone();
        while e <= bound {
            out.push(e.clone());
            e = e + int::<T>(2);
        }
        out
    }
}

/// `vᵀ G⁻¹ v`, exact.
pub fn rational_square<T: Int>(evals: &[T], g: &GramMatrix<T>) -> Result<Rat<T>> {
    let x = g.rational_solve(evals).ok_or(Error::SingularGram)?;
    Ok(x.iter()
        .zip(evals)
        .fold(Rat::from_integer(T::zero()), |acc, (xi, vi)| acc + xi.clone() * Rat::from_integer(vi.clone())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate<T: Int> {
    #[serde(serialize_with = "crate::json::serialize_ints")]
    pub evals: Vec<T>,
    #[serde(serialize_with = "crate::json::serialize_rat")]
    pub square: Rat<T>,
    #[serde(serialize_with = "serialize_opt_int")]
    pub dimension: Option<T>,
}

fn serialize_opt_int<T: Int, S: Serializer>(v: &Option<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => crate::json::serialize_int(x, s),
        None => s.serialize_none(),
    }
}

/// The stage-2 test: an integral square `s` with `s ≡ σ (mod 8)` (the square
/// of any characteristic class) and `s ≥ 2χ + 3σ` (non-negative dimension).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareFilter<T> {
    pub min_square: T,
    pub residue_mod8: T,
}

impl<T: Int> SquareFilter<T> {
    pub fn from_invariants(chi: &T, sigma: &T) -> Self {
        SquareFilter {
            min_square: int::<T>(2) * chi.clone() + int::<T>(3) * sigma.clone(),
            residue_mod8: modulo(sigma, &int(8)),
        }
    }

    pub fn accepts(&self, square: &Rat<T>) -> bool {
        square.is_integer()
            && square.numer() >= &self.min_square
            && modulo(square.numer(), &int(8)) == self.residue_mod8
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enumeration<T: Int> {
    /// Survivors after stage 1, 2 and 3.
    pub stages: [usize; 3],
    /// Stage-2 squares passing the filter whose dimension is not an integer.
    pub excluded_nonintegral: usize,
    pub survivors: Vec<Candidate<T>>,
}

impl<T: Int> Enumeration<T> {
    /// The report form `{stages, survivors: [[evals]], dimensions}`.
    pub fn to_json(&self) -> serde_json::Value {
        use crate::json::int_to_value;
        serde_json::json!({
            "stages": self.stages,
            "survivors": self.survivors.iter()
                .map(|c| c.evals.iter().map(int_to_value).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "squares": self.survivors.iter().map(|c| crate::json::rat_to_string(&c.square)).collect::<Vec<_>>(),
            "dimensions": self.survivors.iter()
                .map(|c| c.dimension.as_ref().map_or(serde_json::Value::Null, int_to_value))
                .collect::<Vec<_>>(),
        })
    }
}

/// Three-stage filter over evaluation vectors on the complement basis.
///
/// Stage 1 is the grid of parity- and adjunction-admissible values on each
/// basis constraint (constraint `i` constrains coordinate `i`). Stage 2 keeps
/// vectors whose square passes `filter`; stage 3 keeps those that also pass
/// every derived constraint. `workers` sizes the thread pool; the result does
/// not depend on it.
pub fn enumerate_candidates<T: Int>(
    basis: &[AdjunctionConstraint<T>],
    derived: &[AdjunctionConstraint<T>],
    g: &GramMatrix<T>,
    chi: &T,
    sigma: &T,
    filter: &SquareFilter<T>,
    workers: usize,
) -> Result<Enumeration<T>> {
    let k = g.rows();
    if basis.len() != k {
        return Err(Error::ConstraintIndex(basis.len()));
    }
    for (i, c) in basis.iter().enumerate() {
        let unit = c.combo.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() });
        if !unit {
            return Err(Error::ConstraintIndex(i));
        }
    }
    for c in derived {
        if c.combo.len() != k {
            return Err(Error::ConstraintIndex(c.combo.len()));
        }
    }
    // vᵀG⁻¹v = vᵀ adj(G) v / det G with adj(G) integral.
    let det = g.det();
    if det.is_zero() {
        return Err(Error::SingularGram);
    }
    let inv = g.rational_inverse().ok_or(Error::SingularGram)?;
    let adj: GramMatrix<T> = GramMatrix::from_fn(k, k, |i, j| {
        let x = inv[i][j].clone() * Rat::from_integer(det.clone());
        debug_assert!(x.is_integer());
        x.to_integer()
    });

    let values: Vec<Vec<T>> = basis.iter().map(AdjunctionConstraint::admissible_values).collect();
    let stage1 = values.iter().try_fold(1usize, |acc, v| acc.checked_mul(v.len()));
    let stage1 = stage1.ok_or_else(|| Error::Scenario("evaluation grid too large".into()))?;

    let decode = |mut idx: usize| -> Vec<T> {
        let mut evals = vec![T::zero(); k];
        for i in (0..k).rev() {
            let r = values[i].len();
            evals[i] = values[i][idx % r].clone();
            idx /= r;
        }
        evals
    };
    enum Outcome<T: Int> {
        Rejected,
        NonIntegral,
        Square(Candidate<T>),
    }
    let classify = |idx: usize| -> Outcome<T> {
        let evals = decode(idx);
        let square = Rat::new(adj.bilinear(&evals, &evals), det.clone());
        if !filter.accepts(&square) {
            return Outcome::Rejected;
        }
        match dimension(square.numer(), chi, sigma) {
            Ok(d) => Outcome::Square(Candidate { evals, square, dimension: Some(d) }),
            Err(_) => Outcome::NonIntegral,
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Scenario(e.to_string()))?;
    let outcomes: Vec<Outcome<T>> = pool
        .install(|| (0..stage1).into_par_iter().map(classify).filter(|o| !matches!(o, Outcome::Rejected)).collect());

    let mut excluded_nonintegral = 0;
    let mut stage2: Vec<Candidate<T>> = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Square(c) => stage2.push(c),
            Outcome::NonIntegral => excluded_nonintegral += 1,
            Outcome::Rejected => {}
        }
    }
    let stage2_count = stage2.len();
    let mut survivors: Vec<Candidate<T>> =
        stage2.into_iter().filter(|c| derived.iter().all(|d| d.admits(&c.evals))).collect();
    survivors.sort_by(|a, b| a.evals.cmp(&b.evals));
    Ok(Enumeration { stages: [stage1, stage2_count, survivors.len()], excluded_nonintegral, survivors })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WallOutcome {
    Same,
    Wall,
    OnWall,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallReport<T: Int> {
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub k_reference: T,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub k_period: T,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub period_reference: T,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub period_square: T,
    pub outcome: WallOutcome,
}

/// Compares the sign of `k` against `reference` and against `period`.
/// A sign change means `k` lies across a wall between the two chambers.
pub fn wall_test<T: Int>(
    k: &HomologyClass<T>,
    reference: &HomologyClass<T>,
    period: &HomologyClass<T>,
) -> Result<WallReport<T>> {
    let period_square = pair(period, period)?;
    if period_square.is_negative() {
        return Err(Error::ChamberPrecondition(format!("period has square {period_square}")));
    }
    let period_reference = pair(period, reference)?;
    if !period_reference.is_positive() {
        return Err(Error::ChamberPrecondition(format!("period pairs to {period_reference} with the reference")));
    }
    let k_reference = pair(k, reference)?;
    let k_period = pair(k, period)?;
    let outcome = if k_reference.is_zero() || k_period.is_zero() {
        WallOutcome::OnWall
    } else if k_reference.signum() == k_period.signum() {
        WallOutcome::Same
    } else {
        WallOutcome::Wall
    };
    Ok(WallReport { k_reference, k_period, period_reference, period_square, outcome })
}

/// A set of classes closed under negation.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BasicClassSet<T: Int> {
    classes: BTreeSet<HomologyClass<T>>,
}

impl<T: Int> BasicClassSet<T> {
    /// The given classes together with their negatives.
    pub fn symmetric(classes: impl IntoIterator<Item = HomologyClass<T>>) -> Self {
        let mut set = BTreeSet::new();
        for c in classes {
            set.insert(c.neg());
            set.insert(c);
        }
        BasicClassSet { classes: set }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &HomologyClass<T>> {
        self.classes.iter()
    }

    pub fn contains(&self, c: &HomologyClass<T>) -> bool {
        self.classes.contains(c)
    }
}

impl<T: Int> Serialize for BasicClassSet<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.classes.iter())
    }
}

/// Each blow-up sends `K` to `K + E` and `K − E` with `E` the new exceptional class.
pub fn blow_up_basics<T: Int>(s: &BasicClassSet<T>, times: usize) -> BasicClassSet<T> {
    let mut current = s.classes.clone();
    for _ in 0..times {
        let mut next = BTreeSet::new();
        for c in &current {
            let up = c.extend(1);
            let e = HomologyClass::e(up.n(), up.n());
            next.insert(up.add(&e).expect("same ambient"));
            next.insert(up.sub(&e).expect("same ambient"));
        }
        current = next;
    }
    BasicClassSet { classes: current }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn dimension_formula() {
        assert_eq!(dimension(&b(3), &b(9), &b(-5)).unwrap(), b(0));
        assert_eq!(dimension(&b(11), &b(9), &b(-5)).unwrap(), b(2));
        for n in 0..30 {
            assert_eq!(dimension(&b(9 - n), &b(n + 3), &b(1 - n)).unwrap(), b(0));
        }
        assert!(matches!(dimension(&b(4), &b(9), &b(-5)), Err(Error::DimensionNotIntegral { .. })));
    }

    #[test]
    fn adjunction_cases() {
        assert!(adjunction_ok(&b(-2), &b(2)));
        assert!(!adjunction_ok(&b(-2), &b(4)));
        assert!(!adjunction_ok(&b(-1), &b(0)));
        assert!(adjunction_ok(&b(-9), &b(9)));
        assert!(adjunction_ok(&b(-9), &b(-9)));
        assert!(!adjunction_ok(&b(-9), &b(-8)));
    }

    #[test]
    fn admissible_value_counts() {
        let g = GramMatrix::from_rows(vec![vec![b(-9)]]);
        let c = AdjunctionConstraint::basis(0, Genus::Sphere, &g).unwrap();
        assert_eq!(c.admissible_values().len(), 10);
        let g = GramMatrix::from_rows(vec![vec![b(0)]]);
        assert!(AdjunctionConstraint::basis(0, Genus::Sphere, &g).is_err());
    }

    #[test]
    fn zero_square() {
        let g = GramMatrix::from_rows(vec![vec![b(-2), b(1)], vec![b(1), b(-2)]]);
        assert_eq!(rational_square(&[b(0), b(0)], &g).unwrap(), Rat::from_integer(b(0)));
        // G⁻¹ = −(1/3)[[2,1],[1,2]], so (1,0) has square −2/3.
        assert_eq!(rational_square(&[b(1), b(0)], &g).unwrap(), Rat::new(b(-2), b(3)));
        let singular = GramMatrix::from_rows(vec![vec![b(1), b(1)], vec![b(1), b(1)]]);
        assert!(matches!(rational_square(&[b(1), b(0)], &singular), Err(Error::SingularGram)));
    }

    #[test]
    fn empty_basis() {
        let g: GramMatrix<BigInt> = GramMatrix::zeros(0, 0);
        let f = SquareFilter::from_invariants(&b(9), &b(-5));
        let r = enumerate_candidates(&[], &[], &g, &b(9), &b(-5), &f, 1).unwrap();
        assert_eq!(r.stages, [1, 0, 0]);
    }

    #[test]
    fn filter_matches_stated_test_for_x1_invariants() {
        let f = SquareFilter::from_invariants(&b(9), &b(-5));
        assert_eq!((f.min_square.clone(), f.residue_mod8.clone()), (b(3), b(3)));
        assert!(f.accepts(&Rat::from_integer(b(3))));
        assert!(f.accepts(&Rat::from_integer(b(11))));
        assert!(!f.accepts(&Rat::from_integer(b(-5))));
        assert!(!f.accepts(&Rat::new(b(7), b(2))));
    }

    #[test]
    fn wall_cases() {
        let h = HomologyClass::<BigInt>::h(2);
        let k = HomologyClass::from_i64s(&[3, -1, -1]);
        assert_eq!(wall_test(&k, &h, &h).unwrap().outcome, WallOutcome::Same);
        let period = HomologyClass::from_i64s(&[2, 1, 0]);
        assert_eq!(wall_test(&k, &h, &period).unwrap().outcome, WallOutcome::Same);
        let across = HomologyClass::from_i64s(&[1, 2, 2]);
        let r = wall_test(&across, &h, &HomologyClass::from_i64s(&[3, 2, 2])).unwrap();
        assert_eq!(r.outcome, WallOutcome::Wall);
        let on = HomologyClass::from_i64s(&[0, 1, 0]);
        assert_eq!(wall_test(&on, &h, &h).unwrap().outcome, WallOutcome::OnWall);
        assert!(matches!(wall_test(&k, &h, &HomologyClass::e(2, 1)), Err(Error::ChamberPrecondition(_))));
        assert!(matches!(wall_test(&k, &h, &h.neg()), Err(Error::ChamberPrecondition(_))));
    }

    #[test]
    fn blow_up_doubles() {
        let k = HomologyClass::<BigInt>::from_i64s(&[3, -1, -1, -1, -1, -1, -1]);
        let s = BasicClassSet::symmetric([k]);
        for t in 0..4 {
            assert_eq!(blow_up_basics(&s, t).len(), 2usize << t);
        }
        assert!(blow_up_basics(&BasicClassSet::<BigInt>::default(), 3).is_empty());
        let once = blow_up_basics(&s, 1);
        assert!(once.iter().all(|c| once.contains(&c.neg())));
    }
}
