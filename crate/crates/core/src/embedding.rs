//! Sphere configurations inside `CP² # n(−CP²)`, blow-down invariants,
//! fiber null vectors, and the two homology moves used to build
//! configurations (smoothing an intersection, blowing up a point).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{gram, orthogonal_complement, pair, AmbientLattice, HomologyClass};
use crate::plumbing::{FramedGraph, LinearChain};
use crate::scalar::{gcd_all, int, Int};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Genus {
    Sphere,
    Torus,
}

impl Genus {
    pub fn value(self) -> u32 {
        match self {
            Genus::Sphere => 0,
            Genus::Torus => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereConfiguration<T: Int> {
    pub ambient: AmbientLattice,
    pub classes: Vec<HomologyClass<T>>,
    pub chain: LinearChain<T>,
    pub genus_tags: Vec<Genus>,
}

impl<T: Int> SphereConfiguration<T> {
    /// All classes tagged as spheres.
    pub fn new(ambient: AmbientLattice, classes: Vec<HomologyClass<T>>, chain: LinearChain<T>) -> Self {
        let genus_tags = vec![Genus::Sphere; classes.len()];
        SphereConfiguration { ambient, classes, chain, genus_tags }
    }
}

/// One itemized mismatch. Positions are 1-based, as in a written class list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConfigFailure {
    Count { classes: usize, chain: usize },
    Ambient { position: usize, n: usize, expected: usize },
    Square { position: usize, expected: String, found: String },
    Pairing { position: usize, other: usize, expected: String, found: String },
}

impl std::fmt::Display for ConfigFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigFailure::Count { classes, chain } => write!(f, "{classes} classes for a chain of length {chain}"),
            ConfigFailure::Ambient { position, n, expected } => {
                write!(f, "position {position}: class lives in n = {n}, expected n = {expected}")
            }
            ConfigFailure::Square { position, expected, found } => {
                write!(f, "position {position}: square {found} != {expected}")
            }
            ConfigFailure::Pairing { position, other, expected, found } => {
                write!(f, "position {position}: pairing {found} != {expected} against position {other}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub failures: Vec<ConfigFailure>,
}

impl VerificationReport {
    /// Failures mentioning `position` on either side.
    pub fn failures_at(&self, position: usize) -> Vec<&ConfigFailure> {
        self.failures
            .iter()
            .filter(|f| match f {
                ConfigFailure::Count { .. } => false,
                ConfigFailure::Ambient { position: p, .. } | ConfigFailure::Square { position: p, .. } => {
                    *p == position
                }
                ConfigFailure::Pairing { position: p, other, .. } => *p == position || *other == position,
            })
            .collect()
    }
}

/// Compares the Gram matrix of the classes with the chain's tridiagonal matrix entry by entry.
pub fn verify_configuration<T: Int>(c: &SphereConfiguration<T>) -> VerificationReport {
    let mut failures = Vec::new();
    if c.classes.len() != c.chain.len() {
        failures.push(ConfigFailure::Count { classes: c.classes.len(), chain: c.chain.len() });
    }
    for (i, class) in c.classes.iter().enumerate() {
        if class.n() != c.ambient.n {
            failures.push(ConfigFailure::Ambient { position: i + 1, n: class.n(), expected: c.ambient.n });
        }
    }
    if !failures.is_empty() {
        return VerificationReport { pass: false, failures };
    }
    let actual = gram(&c.classes).expect("ambients checked above");
    let expected = c.chain.gram();
    let k = c.classes.len();
    for i in 0..k {
        if actual[(i, i)] != expected[(i, i)] {
            failures.push(ConfigFailure::Square {
                position: i + 1,
                expected: expected[(i, i)].to_string(),
                found: actual[(i, i)].to_string(),
            });
        }
        for j in i + 1..k {
            if actual[(i, j)] != expected[(i, j)] {
                failures.push(ConfigFailure::Pairing {
                    position: i + 1,
                    other: j + 1,
                    expected: expected[(i, j)].to_string(),
                    found: actual[(i, j)].to_string(),
                });
            }
        }
    }
    VerificationReport { pass: failures.is_empty(), failures }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub chi: i64,
    pub sigma: i64,
    pub b2_plus: i64,
    pub b2_minus: i64,
    /// Parity of the form on the complement lattice; absent without a class list.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
}

#[derive(Clone, Debug)]
pub struct BlowdownScenario<T: Int> {
    pub name: String,
    pub ambient_n: usize,
    /// `None` models the degenerate empty configuration.
    pub chain: Option<LinearChain<T>>,
    pub configuration: Option<SphereConfiguration<T>>,
}

/// `χ(X) = χ(ambient) − χ(C) + 1` and `σ(X) = σ(ambient) + len`, since the
/// plumbing of `len` spheres has `χ = len + 1` and is negative definite while
/// the rational ball has `χ = 1`, `σ = 0`. Assumes `b₁ = b₃ = 0`.
pub fn blowdown_invariants<T: Int>(s: &BlowdownScenario<T>) -> Result<Invariants> {
    let len = s.chain.as_ref().map_or(0, LinearChain::len) as i64;
    let n = s.ambient_n as i64;
    let mut parity = None;
    if let Some(config) = &s.configuration {
        let report = verify_configuration(config);
        if !report.pass {
            let items: Vec<String> = report.failures.iter().map(ToString::to_string).collect();
            return Err(Error::UnverifiedConfiguration(items.join("; ")));
        }
        let complement = orthogonal_complement(config.ambient, &config.classes)?;
        let odd = complement.iter().any(|c| c.square().is_odd());
        parity = Some(if odd { Parity::Odd } else { Parity::Even });
    }
    let chi = (n + 3) - (len + 1) + 1;
    let sigma = (1 - n) + len;
    let b2 = chi - 2;
    Ok(Invariants { chi, sigma, b2_plus: (b2 + sigma) / 2, b2_minus: (b2 - sigma) / 2, parity })
}

/// Primitive positive generator of the radical of the linking matrix.
///
/// `Ok(None)` when the radical is trivial or its generator has mixed signs;
/// a radical of rank two or more is an error.
pub fn null_vector<T: Int>(g: &FramedGraph<T>) -> Result<Option<Vec<T>>> {
    let kernel = g.gram().kernel();
    match kernel.len() {
        0 => Ok(None),
        1 => {
            let mut v = kernel.into_iter().next().expect("one kernel vector");
            let d = gcd_all(&v);
            for x in &mut v {
                *x = x.clone() / d.clone();
            }
            if v.iter().all(|x| !x.is_positive()) {
                for x in &mut v {
                    *x = -x.clone();
                }
            }
            Ok(v.iter().all(|x| x.is_positive()).then_some(v))
        }
        r => Err(Error::KernelRank(r)),
    }
}

/// Homology class of the surface obtained by smoothing the intersections of `a` and `b`.
pub fn smooth_pair<T: Int>(a: &HomologyClass<T>, b: &HomologyClass<T>) -> Result<HomologyClass<T>> {
    let ab = pair(a, b)?;
    if !ab.is_positive() {
        return Err(Error::NonPositivePairing(ab.to_string()));
    }
    a.add(b)
}

/// Blows up one point. `through` lists `(index into classes, multiplicity)`;
/// listed classes get `e_{n+1}` coefficient `−m`, the rest are extended by 0.
pub fn blow_up<T: Int>(classes: &[HomologyClass<T>], through: &[(usize, i64)]) -> Result<Vec<HomologyClass<T>>> {
    let mut out: Vec<HomologyClass<T>> = classes.iter().map(|c| c.extend(1)).collect();
    for &(i, m) in through {
        if m < 0 {
            return Err(Error::NegativeMultiplicity(m));
        }
        let len = out.len();
        let c = out.get_mut(i).ok_or(Error::VertexOutOfRange { index: i, len })?;
        let last = c.n();
        *c = c.clone().with_coeff(last, int(-m));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type C = HomologyClass<BigInt>;

    fn ch(w: &[i64]) -> LinearChain<BigInt> {
        LinearChain::from_i64s(w).unwrap()
    }

    #[test]
    fn single_difference_class() {
        let c = SphereConfiguration::new(
            AmbientLattice::new(17),
            vec![C::from_terms(17, 0, &[(16, 1), (17, -1)])],
            ch(&[-2]),
        );
        assert!(verify_configuration(&c).pass);
        let bad = SphereConfiguration::new(AmbientLattice::new(17), vec![C::e(17, 1)], ch(&[-2]));
        let r = verify_configuration(&bad);
        assert!(!r.pass);
        assert_eq!(r.failures_at(1).len(), 1);
    }

    #[test]
    fn count_mismatch_is_itemized() {
        let c = SphereConfiguration::new(AmbientLattice::new(3), vec![], ch(&[-2]));
        let r = verify_configuration(&c);
        assert_eq!(r.failures, vec![ConfigFailure::Count { classes: 0, chain: 1 }]);
    }

    #[test]
    fn degenerate_scenario_keeps_ambient_invariants() {
        let s = BlowdownScenario::<BigInt> { name: "empty".into(), ambient_n: 5, chain: None, configuration: None };
        let inv = blowdown_invariants(&s).unwrap();
        assert_eq!((inv.chi, inv.sigma), (8, -4));
        assert_eq!((inv.b2_plus, inv.b2_minus), (1, 5));
    }

    #[test]
    fn null_vectors() {
        let g = FramedGraph::from_chain(&ch(&[-2, -2]));
        assert_eq!(null_vector(&g).unwrap(), None);

        let mut g = FramedGraph::new(vec![BigInt::from(-2), BigInt::from(-2)]);
        g.add_edge(0, 1, BigInt::from(2));
        assert_eq!(null_vector(&g).unwrap(), Some(vec![BigInt::from(1), BigInt::from(1)]));

        let g = FramedGraph::new(vec![BigInt::from(0), BigInt::from(0)]);
        assert!(matches!(null_vector(&g), Err(Error::KernelRank(2))));
    }

    #[test]
    fn smoothing() {
        let a = C::from_terms(4, 1, &[(1, -1), (2, -1), (3, -1)]);
        let b = C::from_terms(4, 0, &[(3, 1), (4, -1)]);
        assert_eq!(smooth_pair(&a, &b).unwrap(), C::from_terms(4, 1, &[(1, -1), (2, -1), (4, -1)]));
        assert!(matches!(smooth_pair(&a, &a), Err(Error::NonPositivePairing(_))));
        assert!(smooth_pair(&C::e(4, 1), &C::e(4, 2)).is_err());
    }

    #[test]
    fn fishtail_section_smoothing_is_vector_addition() {
        let fishtail = AmbientLattice::new(9).anticanonical::<BigInt>();
        let section = C::e(9, 9);
        assert_eq!(pair(&fishtail, &section).unwrap(), BigInt::from(1));
        let s = smooth_pair(&fishtail, &section).unwrap();
        let mut expect = fishtail.clone();
        expect = expect.with_coeff(9, BigInt::from(0));
        assert_eq!(s, expect);
    }

    #[test]
    fn blow_up_rules() {
        let f = AmbientLattice::new(9).anticanonical::<BigInt>();
        let up = blow_up(std::slice::from_ref(&f), &[(0, 2)]).unwrap();
        assert_eq!(up[0].square(), f.square() - BigInt::from(4));
        assert_eq!(up[0].coeffs()[10], BigInt::from(-2));

        let none = blow_up(&[f.clone(), C::e(9, 1)], &[]).unwrap();
        assert_eq!(none[0], f.extend(1));
        assert_eq!(none[1].square(), BigInt::from(-1));

        let s = C::from_terms(2, 1, &[(1, -2)]);
        let once = blow_up(std::slice::from_ref(&s), &[(0, 1)]).unwrap();
        let twice = blow_up(&once, &[(0, 1)]).unwrap();
        assert_eq!(twice[0].square(), s.square() - BigInt::from(2));

        assert!(matches!(blow_up(&[f], &[(0, -1)]), Err(Error::NegativeMultiplicity(-1))));
    }
}
