//! Singular members and base points of a pencil `t₁p₁ + t₂p₂` of plane curves.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use super::poly::{RationalPoly, VARIABLES};
use super::unipoly::{minimal_polynomial, UniPoly};
use crate::error::{Error, Result};
use crate::json::rat_to_string;
use crate::scalar::{Int, Rat};

/// The pair as homogeneous forms of a common degree and as affine curves in the chart `z = 1`.
struct Pencil<T: Int> {
    degree: u32,
    hom: [RationalPoly<T>; 2],
    affine: [RationalPoly<T>; 2],
}

fn normalize<T: Int>(p1: &RationalPoly<T>, p2: &RationalPoly<T>) -> Result<Pencil<T>> {
    if p1.is_zero() || p2.is_zero() {
        return Err(Error::UnsupportedPencil("zero member".into()));
    }
    let d = p1.degree().max(p2.degree()).unwrap_or(0);
    if p1.involves(2) || p2.involves(2) {
        if !(p1.is_homogeneous() && p2.is_homogeneous() && p1.degree() == p2.degree()) {
            return Err(Error::UnsupportedPencil("projective inputs must be forms of equal degree".into()));
        }
        Ok(Pencil { degree: d, hom: [p1.clone(), p2.clone()], affine: [p1.dehomogenize(), p2.dehomogenize()] })
    } else {
        let h1 = p1.homogenize(d).expect("degree bound");
        let h2 = p2.homogenize(d).expect("degree bound");
        Ok(Pencil { degree: d, hom: [h1, h2], affine: [p1.clone(), p2.clone()] })
    }
}

/// The value of `t₁/t₂` for one or more singular members.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MemberParameter<T: Int> {
    /// `t₂ = 0`, the member `p₁`.
    Infinity,
    /// All roots of this monic irreducible polynomial; `λ` itself when linear.
    Algebraic(UniPoly<T>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularMember<T: Int> {
    pub parameter: MemberParameter<T>,
    /// Number of members described (the degree of the minimal polynomial).
    pub count: usize,
    /// Where it came from: the `t₂ = 0` inspection or a factor of the determinant.
    pub source: String,
}

impl<T: Int> SingularMember<T> {
    pub fn describe(&self) -> String {
        match &self.parameter {
            MemberParameter::Infinity => "t2 = 0".into(),
            MemberParameter::Algebraic(m) if m.degree() == Some(1) => {
                let lambda = -m.coeffs()[0].clone();
                if lambda.is_zero() {
                    "t1 = 0".into()
                } else {
                    format!("t1 = {} t2", rat_to_string(&lambda))
                }
            }
            MemberParameter::Algebraic(m) => {
                format!("t1 = l t2 with {} = 0 ({} members)", m.display_in("l"), self.count)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrationalRoots<T: Int> {
    pub factor: UniPoly<T>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilReport<T: Int> {
    pub p1_member_singular: bool,
    pub p1_member_reason: String,
    /// `[[q₁, q₂], [q₁', q₂']]` with `qᵢ = pᵢ(x, 0)`.
    pub matrix: [[UniPoly<T>; 2]; 2],
    pub determinant: UniPoly<T>,
    pub square_free: UniPoly<T>,
    pub distinct_roots: usize,
    pub rational_roots: Vec<(Rat<T>, usize)>,
    pub irrational: Vec<IrrationalRoots<T>>,
    pub members: Vec<SingularMember<T>>,
    pub total: usize,
}

/// Singular members of `t₁p₁ + t₂p₂` in the chart `z = 1`, for the shape where
/// `p₁` does not involve `y` and `∂p₂/∂y = c·y`.
///
/// Then `∂p_t/∂y = t₂·c·y`, so for `t₂ ≠ 0` singular points lie on `y = 0` and
/// `(t₁, t₂)` is a kernel vector of `[[q₁, q₂], [q₁', q₂']]` at a root of its
/// determinant. The member `t₂ = 0` is the binary form `p₁(x, z)`: a union of
/// lines through `[0:1:0]`, singular as soon as it has degree at least 2.
pub fn pencil_singular_members<T: Int>(p1: &RationalPoly<T>, p2: &RationalPoly<T>) -> Result<PencilReport<T>> {
    let pencil = normalize(p1, p2)?;
    let [a1, a2] = &pencil.affine;
    if a1.involves(1) {
        return Err(Error::UnsupportedPencil("p1 involves y".into()));
    }
    let dy = a2.derivative(1);
    let shape_ok = dy.terms().count() == 1 && dy.terms().all(|(m, _)| m.0 == [0, 1, 0]);
    if !shape_ok {
        return Err(Error::UnsupportedPencil(format!("d/dy of p2 is {dy}, not a multiple of y")));
    }

    let y0 = RationalPoly::zero();
    let q1 = a1.to_univariate(0).ok_or_else(|| Error::UnsupportedPencil("p1 not univariate in x".into()))?;
    let q2 = a2.substitute(1, &y0).to_univariate(0).expect("y removed and z dehomogenized");
    let matrix = [[q1.clone(), q2.clone()], [q1.derivative(), q2.derivative()]];
    let determinant = matrix[0][0].mul(&matrix[1][1]).sub(&matrix[0][1].mul(&matrix[1][0]));
    if determinant.is_zero() {
        return Err(Error::UnsupportedPencil("every member is singular along y = 0".into()));
    }
    let square_free = determinant.square_free_part();
    let distinct_roots = square_free.degree().unwrap_or(0);
    let factors = determinant.factor()?;
    let rational_roots = determinant.rational_roots();
    let irrational: Vec<IrrationalRoots<T>> = factors
        .iter()
        .filter(|(f, _)| f.degree().unwrap_or(0) > 1)
        .map(|(f, m)| IrrationalRoots { factor: f.clone(), multiplicity: *m })
        .collect();

    let mut params: BTreeMap<MemberParameter<T>, String> = BTreeMap::new();
    let (p1_member_singular, p1_member_reason) = inspect_p1_member(&pencil)?;
    if p1_member_singular {
        params.insert(MemberParameter::Infinity, "t2 = 0 inspection".into());
    }
    for (g, _) in &factors {
        let param = member_for_factor(&matrix, g)?;
        params.entry(param).or_insert_with(|| format!("root of {}", g));
    }
    let members: Vec<SingularMember<T>> = params
        .into_iter()
        .map(|(parameter, source)| {
            let count = match &parameter {
                MemberParameter::Infinity => 1,
                MemberParameter::Algebraic(m) => m.degree().unwrap_or(0),
            };
            SingularMember { parameter, count, source }
        })
        .collect();
    let total = members.iter().map(|m| m.count).sum();
    Ok(PencilReport {
        p1_member_singular,
        p1_member_reason,
        matrix,
        determinant,
        square_free,
        distinct_roots,
        rational_roots,
        irrational,
        members,
        total,
    })
}

fn inspect_p1_member<T: Int>(pencil: &Pencil<T>) -> Result<(bool, String)> {
    let h1 = &pencil.hom[0];
    let d = pencil.degree;
    if d < 2 {
        return Ok((false, "a single line".into()));
    }
    let reason = match linear_components(h1) {
        Ok(lines) if lines.iter().any(|(_, m)| *m > 1) => "non-reduced component".to_string(),
        Ok(lines) => format!("{} lines through [0:1:0]", lines.len()),
        Err(_) => format!("{d} lines through [0:1:0] over C"),
    };
    Ok((true, reason))
}

/// `t₁/t₂` at the roots of the irreducible `g`, via the first row of the
/// matrix that does not vanish identically there.
fn member_for_factor<T: Int>(matrix: &[[UniPoly<T>; 2]; 2], g: &UniPoly<T>) -> Result<MemberParameter<T>> {
    for row in matrix {
        let a = row[0].div_rem(g).1;
        let b = row[1].div_rem(g).1;
        if a.is_zero() && b.is_zero() {
            continue;
        }
        if a.is_zero() {
            return Ok(MemberParameter::Infinity);
        }
        // t₁ q₁ + t₂ q₂ = 0 gives t₁/t₂ = −q₂/q₁.
        let m = minimal_polynomial(&b.neg(), &a, g).expect("q1 is a unit modulo an irreducible g");
        return Ok(MemberParameter::Algebraic(m));
    }
    Err(Error::UnsupportedPencil(format!("both rows vanish at the roots of {g}")))
}

/// Linear factors of a binary form, as `(form, multiplicity)`.
///
/// A form is `[a_x, a_y, a_z]` for `a_x x + a_y y + a_z z`.
fn linear_components<T: Int>(f: &RationalPoly<T>) -> Result<Vec<([Rat<T>; 3], usize)>> {
    let (u, v, _) = binary_variables(f)?;
    let d = f.degree().unwrap_or(0) as usize;
    // F(u, 1) as a univariate polynomial in u.
    let fu = f.substitute(v, &RationalPoly::constant(Rat::one()));
    let fu = relabel(&fu, u).ok_or_else(|| Error::UnsupportedPencil(format!("{f} is not a binary form")))?;
    let mut out = Vec::new();
    let k = d - fu.degree().unwrap_or(0);
    if k > 0 {
        let mut form = [Rat::zero(), Rat::zero(), Rat::zero()];
        form[v] = Rat::one();
        out.push((form, k));
    }
    for (g, m) in fu.factor()? {
        if g.degree() != Some(1) {
            return Err(Error::UnsupportedPencil(format!(
                "{f} has the non-linear factor {}",
                g.display_in(VARIABLES[u])
            )));
        }
        let r = -g.coeffs()[0].clone();
        let mut form = [Rat::zero(), Rat::zero(), Rat::zero()];
        form[u] = Rat::one();
        form[v] = -r;
        out.push((form, m));
    }
    Ok(out)
}

/// `(u, v, w)`: the variables of a binary form `F(u, v)` and the one it omits.
fn binary_variables<T: Int>(f: &RationalPoly<T>) -> Result<(usize, usize, usize)> {
    let used: Vec<usize> = (0..3).filter(|&i| f.involves(i)).collect();
    let (u, v) = match used.as_slice() {
        [a, b] => (*a, *b),
        [a] => (*a, (0..3).find(|i| i != a).expect("three variables")),
        _ => return Err(Error::UnsupportedPencil(format!("{f} is not a form in two variables"))),
    };
    let w = (0..3).find(|i| *i != u && *i != v).expect("three variables");
    Ok((u, v, w))
}

fn relabel<T: Int>(p: &RationalPoly<T>, var: usize) -> Option<UniPoly<T>> {
    p.to_univariate(var)
}

/// Substitutes linear forms in `(s, t)` (stored in the `x`, `y` slots) for `x, y, z`.
fn compose<T: Int>(p: &RationalPoly<T>, forms: &[RationalPoly<T>; 3]) -> RationalPoly<T> {
    let mut out = RationalPoly::zero();
    for (m, c) in p.terms() {
        let mut t = RationalPoly::constant(c.clone());
        for (form, &e) in forms.iter().zip(&m.0) {
            t = t.mul(&form.pow(e));
        }
        out = out.add(&t);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasePoint<T: Int> {
    /// Scaled so the first nonzero coordinate is 1.
    #[serde(serialize_with = "serialize_point")]
    pub point: [Rat<T>; 3],
    pub multiplicity: usize,
}

fn serialize_point<T: Int, S: serde::Serializer>(p: &[Rat<T>; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.iter().map(rat_to_string))
}

/// Conjugate points on one line of `p₁`: `(x, y, z) = coords(s, 1)` at the roots of `factor(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrationalBasePoints<T: Int> {
    pub line: String,
    /// Coordinates as `a·s + b` for each of `x, y, z`.
    pub coords: [[Rat<T>; 2]; 3],
    pub factor: UniPoly<T>,
    pub count: usize,
    pub multiplicity: usize,
}

impl<T: Int> IrrationalBasePoints<T> {
    pub fn coords_display(&self) -> String {
        let parts: Vec<String> =
            self.coords.iter().map(|[a, b]| UniPoly::new(vec![b.clone(), a.clone()]).display_in("s")).collect();
        format!("({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePoints<T: Int> {
    pub rational: Vec<BasePoint<T>>,
    pub irrational: Vec<IrrationalBasePoints<T>>,
    pub total: usize,
}

impl<T: Int> BasePoints<T> {
    /// Multiplicities of every point, rational and irrational, descending.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.rational.iter().map(|p| p.multiplicity).collect();
        for g in &self.irrational {
            out.extend(std::iter::repeat_n(g.multiplicity, g.count));
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

fn line_display<T: Int>(form: &[Rat<T>; 3]) -> String {
    let p = RationalPoly::from_terms(form.iter().enumerate().map(|(i, c)| {
        let mut e = [0; 3];
        e[i] = 1;
        (e, c.clone())
    }));
    p.to_string()
}

/// Intersection points of the curves `p₁ = 0` and `p₂ = 0` with multiplicities,
/// when `p₁` splits into rational lines.
///
/// Each line is parametrised, `p₂` is restricted to a binary form, and root
/// multiplicities are weighted by the line's multiplicity in `p₁`. Rational
/// points are merged across lines; conjugate irrational points are reported
/// per irreducible factor.
pub fn base_points<T: Int>(p1: &RationalPoly<T>, p2: &RationalPoly<T>) -> Result<BasePoints<T>> {
    if !(p1.is_homogeneous() && p2.is_homogeneous() && p1.degree() == p2.degree()) || p1.degree().unwrap_or(0) == 0 {
        return Err(Error::UnsupportedPencil("base points need forms of equal positive degree".into()));
    }
    let (_, _, w) = binary_variables(p1)?;
    let mut merged: BTreeMap<[Rat<T>; 3], usize> = BTreeMap::new();
    let mut irrational = Vec::new();
    for (form, m) in linear_components(p1)? {
        // Solve the form for a variable `a` with nonzero coefficient; the
        // other non-`w` variable `b` becomes `s`, and `w` becomes `t`.
        let a = (0..3).find(|&i| i != w && !form[i].is_zero()).expect("nonzero form");
        let b = (0..3).find(|&i| i != w && i != a).expect("three variables");
        let mut coords: [[Rat<T>; 2]; 3] = Default::default();
        coords[b] = [Rat::one(), Rat::zero()];
        coords[w] = [Rat::zero(), Rat::one()];
        coords[a] = [-form[b].clone() / form[a].clone(), Rat::zero()];
        let forms: [RationalPoly<T>; 3] = std::array::from_fn(|i| {
            RationalPoly::from_terms([([1, 0, 0], coords[i][0].clone()), ([0, 1, 0], coords[i][1].clone())])
        });
        let restricted = compose(p2, &forms);
        if restricted.is_zero() {
            return Err(Error::SharedComponent(line_display(&form)));
        }
        let d = restricted.degree().unwrap_or(0) as usize;
        let bs = restricted.substitute(1, &RationalPoly::constant(Rat::one())).to_univariate(0).expect("binary form");
        let at_infinity = d - bs.degree().unwrap_or(0);
        let point = |s: Rat<T>, t: Rat<T>| -> [Rat<T>; 3] {
            std::array::from_fn(|i| coords[i][0].clone() * s.clone() + coords[i][1].clone() * t.clone())
        };
        if at_infinity > 0 {
            *merged.entry(normalize_point(point(Rat::one(), Rat::zero()))).or_default() += at_infinity * m;
        }
        for (g, k) in bs.factor()? {
            if g.degree() == Some(1) {
                let s = -g.coeffs()[0].clone();
                *merged.entry(normalize_point(point(s, Rat::one()))).or_default() += k * m;
            } else {
                let count = g.degree().unwrap_or(0);
                irrational.push(IrrationalBasePoints {
                    line: line_display(&form),
                    coords: std::array::from_fn(|i| [coords[i][0].clone(), coords[i][1].clone()]),
                    factor: g,
                    count,
                    multiplicity: k * m,
                });
            }
        }
    }
    let rational: Vec<BasePoint<T>> =
        merged.into_iter().map(|(point, multiplicity)| BasePoint { point, multiplicity }).collect();
    let total = rational.iter().map(|p| p.multiplicity).sum::<usize>()
        + irrational.iter().map(|g| g.count * g.multiplicity).sum::<usize>();
    Ok(BasePoints { rational, irrational, total })
}

fn normalize_point<T: Int>(p: [Rat<T>; 3]) -> [Rat<T>; 3] {
    let lead = p.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Rat::one);
    p.map(|c| c / lead.clone())
}

impl<T: Int> PencilReport<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p1_member_singular": self.p1_member_singular,
            "p1_member_reason": self.p1_member_reason,
            "matrix": self.matrix.iter().map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "determinant": self.determinant.to_string(),
            "square_free": self.square_free.to_string(),
            "distinct_roots": self.distinct_roots,
            "rational_roots": self.rational_roots.iter()
                .map(|(r, m)| serde_json::json!({"root": rat_to_string(r), "multiplicity": m}))
                .collect::<Vec<_>>(),
            "irrational_factors": self.irrational.iter()
                .map(|f| serde_json::json!({
                    "factor": f.factor.to_string(),
                    "roots": f.factor.degree().unwrap_or(0),
                    "multiplicity": f.multiplicity,
                }))
                .collect::<Vec<_>>(),
            "members": self.members.iter()
                .map(|m| serde_json::json!({"member": m.describe(), "count": m.count, "source": m.source}))
                .collect::<Vec<_>>(),
            "total": self.total,
        })
    }
}

impl<T: Int> BasePoints<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rational": self.rational.iter()
                .map(|p| serde_json::json!({"point": point_display(&p.point), "multiplicity": p.multiplicity}))
                .collect::<Vec<_>>(),
            "irrational": self.irrational.iter()
                .map(|g| serde_json::json!({
                    "line": g.line,
                    "coords": g.coords_display(),
                    "factor": g.factor.display_in("s"),
                    "count": g.count,
                    "multiplicity": g.multiplicity,
                }))
                .collect::<Vec<_>>(),
            "multiplicities": self.multiplicities(),
            "total": self.total,
        })
    }
}

/// Formats a projective point as `[a:b:c]`.
pub fn point_display<T: Int>(p: &[Rat<T>; 3]) -> String {
    let parts: Vec<String> = p.iter().map(rat_to_string).collect();
    format!("[{}]", parts.join(":"))
}

/// Distinct parameters in a report, for callers that only need the set.
pub fn member_parameters<T: Int>(r: &PencilReport<T>) -> BTreeSet<MemberParameter<T>> {
    r.members.iter().map(|m| m.parameter.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = RationalPoly<BigInt>;
    type U = UniPoly<BigInt>;

    fn p(s: &str) -> P {
        P::parse(s).unwrap()
    }

    #[test]
    fn cusp_pencil() {
        let r = pencil_singular_members(&p("x"), &p("x^3-y^2")).unwrap();
        assert_eq!(r.determinant, U::from_i64s(&[0, 0, 0, 2]));
        assert_eq!(r.square_free, U::from_i64s(&[0, 1]));
        assert_eq!(r.distinct_roots, 1);
        assert!(r.members.iter().any(|m| m.describe() == "t1 = 0"));
    }

    #[test]
    fn unsupported_shapes() {
        assert!(matches!(pencil_singular_members(&p("x-y"), &p("x^3-y^2")), Err(Error::UnsupportedPencil(_))));
        assert!(matches!(pencil_singular_members(&p("x-1"), &p("x^3-y^3")), Err(Error::UnsupportedPencil(_))));
    }

    #[test]
    fn two_lines_meet_once() {
        let b = base_points(&p("x"), &p("y")).unwrap();
        assert_eq!(b.total, 1);
        assert_eq!(b.rational.len(), 1);
        assert_eq!(point_display(&b.rational[0].point), "[0:0:1]");
    }

    #[test]
    fn shared_component_rejected() {
        assert!(matches!(base_points(&p("x z"), &p("x y")), Err(Error::SharedComponent(_))));
    }

    #[test]
    fn conic_and_double_line() {
        // The line x = 0 meets the conic y z = x² at [0:1:0] and [0:0:1]; doubling the line doubles both.
        let b = base_points(&p("x^2"), &p("y z - x^2")).unwrap();
        assert_eq!(b.total, 4);
        assert_eq!(b.multiplicities(), vec![2, 2]);
    }
}
