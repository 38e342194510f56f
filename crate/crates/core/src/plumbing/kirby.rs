//! Framed graphs and (−1)-blow-downs.
//!
//! A vertex is an unknot with an integer framing; an edge with multiplicity
//! `m` records linking number `m` between two components. Blowing down a
//! (−1)-framed vertex `v` adds `m_u²` to each neighbour's framing and
//! `m_u·m_w` to the linking of each pair of neighbours.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::LinearChain;
use crate::error::Result;
use crate::lattice::GramMatrix;
use crate::matrix::IntMatrix;
use crate::scalar::{int, Int, Rat};

pub const DEFAULT_MAX_MULT: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedGraph<T> {
    framings: Vec<T>,
    /// Keyed by `(i, j)` with `i < j`; multiplicities are positive.
    edges: BTreeMap<(usize, usize), T>,
}

impl<T: Int> FramedGraph<T> {
    pub fn new(framings: Vec<T>) -> Self {
        FramedGraph { framings, edges: BTreeMap::new() }
    }

    pub fn from_chain(chain: &LinearChain<T>) -> Self {
        let mut g = Self::new(chain.weights().to_vec());
        for i in 1..chain.len() {
            g.add_edge(i - 1, i, T::one());
        }
        g
    }

    /// Adds `mult` to the linking between `a` and `b`. Self-edges and
    /// non-positive multiplicities are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize, mult: T) {
        assert!(a < self.framings.len() && b < self.framings.len(), "edge endpoint out of range");
        if a == b || !mult.is_positive() {
            return;
        }
        let key = (a.min(b), a.max(b));
        let entry = self.edges.entry(key).or_insert_with(T::zero);
        *entry = entry.clone() + mult;
    }

    pub fn push_vertex(&mut self, framing: T) -> usize {
        self.framings.push(framing);
        self.framings.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.framings.len()
    }

    pub fn framings(&self) -> &[T] {
        &self.framings
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.edges.iter().map(|(&(a, b), m)| (a, b, m))
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> T {
        self.edges.get(&(a.min(b), a.max(b))).cloned().unwrap_or_else(T::zero)
    }

    /// Linking matrix: framings on the diagonal, multiplicities off it.
    pub fn gram(&self) -> GramMatrix<T> {
        let n = self.vertex_count();
        IntMatrix::from_fn(n, n, |i, j| if i == j { self.framings[i].clone() } else { self.multiplicity(i, j) })
    }

    /// Induced subgraph on `keep` (in that order).
    fn induced(&self, keep: &[usize]) -> Self {
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut g = Self::new(keep.iter().map(|&v| self.framings[v].clone()).collect());
        for (&(a, b), m) in &self.edges {
            if let (Some(&na), Some(&nb)) = (index.get(&a), index.get(&b)) {
                g.add_edge(na, nb, m.clone());
            }
        }
        g
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<serde_json::Value>,
    edges: Vec<[serde_json::Value; 3]>,
}

impl<T: Int> Serialize for FramedGraph<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::json::int_to_value;
        GraphJson {
            vertices: self.framings.iter().map(int_to_value).collect(),
            edges: self
                .edges()
                .map(|(a, b, m)| [serde_json::Value::from(a), serde_json::Value::from(b), int_to_value(m)])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Int> Deserialize<'de> for FramedGraph<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use crate::json::value_to_int;
        use serde::de::Error as _;
        let raw = GraphJson::deserialize(d)?;
        let framings = raw
            .vertices
            .iter()
            .map(|v| value_to_int(v).ok_or_else(|| D::Error::custom(format!("bad framing {v}"))))
            .collect::<std::result::Result<Vec<T>, _>>()?;
        let mut g = FramedGraph::new(framings);
        for [a, b, m] in &raw.edges {
            let a = a.as_u64().ok_or_else(|| D::Error::custom("bad edge endpoint"))? as usize;
            let b = b.as_u64().ok_or_else(|| D::Error::custom("bad edge endpoint"))? as usize;
            let m: T = value_to_int(m).ok_or_else(|| D::Error::custom("bad edge multiplicity"))?;
            if a == b || a >= g.vertex_count() || b >= g.vertex_count() {
                return Err(D::Error::custom(format!("invalid edge [{a}, {b}]")));
            }
            if !m.is_positive() {
                return Err(D::Error::custom("edge multiplicities must be >= 1"));
            }
            g.add_edge(a, b, m);
        }
        Ok(g)
    }
}

/// One deletion in a blow-down sequence. Vertex labels refer to the input graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "T: Int")]
pub struct BlowDownStep<T: Int> {
    pub vertex: usize,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub det_before: T,
    #[serde(serialize_with = "crate::json::serialize_int")]
    pub det_after: T,
    pub rank_before: usize,
    pub rank_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "T: Int")]
pub struct BlowDownResult<T: Int> {
    pub reduced: FramedGraph<T>,
    /// Input labels of the surviving vertices, in order.
    pub survivors: Vec<usize>,
    pub count: usize,
    pub trace: Vec<BlowDownStep<T>>,
}

/// Blows down (−1)-framed vertices, lowest label first, until none is left.
pub fn blow_down_reduce<T: Int>(g: &FramedGraph<T>) -> BlowDownResult<T> {
    let minus_one = -T::one();
    let mut current = g.clone();
    let mut labels: Vec<usize> = (0..g.vertex_count()).collect();
    let mut trace = Vec::new();
    while let Some(v) = (0..current.vertex_count()).find(|&i| current.framings[i] == minus_one) {
        let before = current.gram();
        let neighbours: Vec<(usize, T)> = (0..current.vertex_count())
            .filter(|&u| u != v)
            .map(|u| (u, current.multiplicity(u, v)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        for (u, m) in &neighbours {
            current.framings[*u] = current.framings[*u].clone() + m.clone() * m.clone();
        }
        for (i, (u, mu)) in neighbours.iter().enumerate() {
            for (w, mw) in &neighbours[i + 1..] {
                current.add_edge(*u, *w, mu.clone() * mw.clone());
            }
        }
        let keep: Vec<usize> = (0..current.vertex_count()).filter(|&i| i != v).collect();
        current = current.induced(&keep);
        let removed = labels.remove(v);
        let after = current.gram();
        trace.push(BlowDownStep {
            vertex: removed,
            det_before: before.det(),
            det_after: after.det(),
            rank_before: before.rank(),
            rank_after: after.rank(),
        });
    }
    BlowDownResult { count: trace.len(), reduced: current, survivors: labels, trace }
}

/// An extra (−1)-framed unknot linking chain vertex `i` with multiplicity
/// `multiplicities[i]`, whose blow-downs collapse the chain to a 0-framed unknot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "T: Int")]
pub struct Certificate<T: Int> {
    #[serde(serialize_with = "crate::json::serialize_ints")]
    pub multiplicities: Vec<T>,
    pub graph: FramedGraph<T>,
    pub reduction: BlowDownResult<T>,
}

/// The attached graph for a multiplicity vector.
pub fn attach_unknot<T: Int>(chain: &LinearChain<T>, multiplicities: &[T]) -> FramedGraph<T> {
    let mut g = FramedGraph::from_chain(chain);
    let k = g.push_vertex(-T::one());
    for (i, m) in multiplicities.iter().enumerate() {
        g.add_edge(i, k, m.clone());
    }
    g
}

/// Exhaustive search over multiplicity vectors in `[0, max_mult]^k`,
/// returning the lexicographically smallest certificate.
///
/// A blow-down multiplies the determinant by `−1`, and the end state `(0)` is
/// singular, so the attached graph must be singular too:
/// `det [[Q, m], [mᵀ, −1]] = −det Q · (1 + mᵀQ⁻¹m) = 0`. With `P = −Q⁻¹`
/// positive definite this is `mᵀPm = 1`, an ellipsoid whose lattice points
/// are enumerated coordinate by coordinate from an `LDLᵀ` factorisation.
pub fn embedding_certificate<T: Int>(chain: &LinearChain<T>, max_mult: u32) -> Result<Option<Certificate<T>>> {
    let k = chain.len();
    let q = chain.gram();
    let qinv = q.rational_inverse().ok_or(crate::error::Error::SingularGram)?;
    let p: Vec<Vec<Rat<T>>> = qinv.into_iter().map(|row| row.into_iter().map(|x| -x).collect()).collect();
    let (l, d) = ldl(&p);
    let mults: Vec<T> = (0..=max_mult).map(|m| int(i64::from(m))).collect();

    let mut found: Vec<Vec<T>> = Vec::new();
    let mut m = vec![T::zero(); k];
    search(k, &l, &d, &mults, Rat::one(), &mut m, &mut found);

    found.sort();
    for cand in found {
        if cand.iter().all(Zero::is_zero) {
            continue;
        }
        let graph = attach_unknot(chain, &cand);
        let reduction = blow_down_reduce(&graph);
        let collapsed =
            reduction.count == k && reduction.reduced.vertex_count() == 1 && reduction.reduced.framings()[0].is_zero();
        if collapsed {
            return Ok(Some(Certificate { multiplicities: cand, graph, reduction }));
        }
    }
    Ok(None)
}

/// `P = L D Lᵀ` with unit lower-triangular `L`.
fn ldl<T: Int>(p: &[Vec<Rat<T>>]) -> (Vec<Vec<Rat<T>>>, Vec<Rat<T>>) {
    let n = p.len();
    let mut l = vec![vec![Rat::zero(); n]; n];
    let mut d = vec![Rat::zero(); n];
    for j in 0..n {
        let mut dj = p[j][j].clone();
        for s in 0..j {
            dj = dj - l[j][s].clone() * l[j][s].clone() * d[s].clone();
        }
        d[j] = dj;
        l[j][j] = Rat::one();
        for i in j + 1..n {
            let mut v = p[i][j].clone();
            for s in 0..j {
                v = v - l[i][s].clone() * l[j][s].clone() * d[s].clone();
            }
            l[i][j] = v / d[j].clone();
        }
    }
    (l, d)
}

/// Assigns coordinates from the last to the first. With `y = Lᵀm`,
/// `mᵀPm = Σ dᵢ yᵢ²` and `yᵢ = mᵢ + Σ_{j>i} l[j][i] m_j` depends only on
/// already-fixed coordinates, so partial sums bound the remainder.
fn search<T: Int>(
    level: usize,
    l: &[Vec<Rat<T>>],
    d: &[Rat<T>],
    mults: &[T],
    remaining: Rat<T>,
    m: &mut Vec<T>,
    found: &mut Vec<Vec<T>>,
) {
    if level == 0 {
        if remaining.is_zero() {
            found.push(m.clone());
        }
        return;
    }
    let i = level - 1;
    let n = m.len();
    let shift = (i + 1..n).fold(Rat::<T>::zero(), |acc, j| acc + l[j][i].clone() * Rat::from_integer(m[j].clone()));
    for v in mults {
        let y = Rat::from_integer(v.clone()) + shift.clone();
        let used = d[i].clone() * y.clone() * y;
        if used > remaining {
            continue;
        }
        m[i] = v.clone();
        search(i, l, d, mults, remaining.clone() - used, m, found);
    }
    m[i] = T::zero();
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn lone_minus_one_disappears() {
        let g = FramedGraph::new(vec![b(-1)]);
        let r = blow_down_reduce(&g);
        assert_eq!(r.count, 1);
        assert_eq!(r.reduced.vertex_count(), 0);
    }

    #[test]
    fn double_linking_adds_four() {
        let mut g = FramedGraph::new(vec![b(-4), b(-1)]);
        g.add_edge(0, 1, b(2));
        let r = blow_down_reduce(&g);
        assert_eq!(r.count, 1);
        assert_eq!(r.reduced.framings(), &[b(0)]);
        assert_eq!(r.survivors, vec![0]);
    }

    #[test]
    fn neighbours_become_linked() {
        // (−2) - (−1) - (−3) becomes (−1) - (−2), then (−1), then nothing.
        let mut g = FramedGraph::new(vec![b(-2), b(-1), b(-3)]);
        g.add_edge(0, 1, b(1));
        g.add_edge(1, 2, b(1));
        let r = blow_down_reduce(&g);
        assert_eq!(r.count, 3);
        assert_eq!(r.reduced.vertex_count(), 0);
        let order: Vec<usize> = r.trace.iter().map(|s| s.vertex).collect();
        assert_eq!(order, vec![1, 0, 2]);
        for step in &r.trace {
            assert_eq!(step.det_before, -step.det_after.clone());
            assert_eq!(step.rank_before, step.rank_after + 1);
        }
    }

    #[test]
    fn certificate_for_minus_four() {
        let c = LinearChain::<BigInt>::from_i64s(&[-4]).unwrap();
        let cert = embedding_certificate(&c, 3).unwrap().unwrap();
        assert_eq!(cert.multiplicities, vec![b(2)]);
        assert!(embedding_certificate(&c, 1).unwrap().is_none());
    }

    #[test]
    fn no_certificate_for_two_minus_twos() {
        let c = LinearChain::<BigInt>::from_i64s(&[-2, -2]).unwrap();
        for max in 1..=3 {
            assert!(embedding_certificate(&c, max).unwrap().is_none());
        }
    }

    #[test]
    fn wahl_chains_collapse_through_both_ends() {
        for (p, q) in [(28, 9), (32, 15)] {
            let c = super::super::cf_expand(b(p), b(q)).unwrap();
            let cert = embedding_certificate(&c, 3).unwrap().unwrap();
            let k = c.len();
            let mut expect = vec![b(0); k];
            expect[0] = b(1);
            expect[k - 1] = b(1);
            assert_eq!(cert.multiplicities, expect);
            assert_eq!(cert.reduction.count, k);
            assert_eq!(cert.reduction.reduced.framings(), &[b(0)]);
        }
    }

    #[test]
    fn graph_json_shape() {
        let mut g = FramedGraph::new(vec![b(-4), b(-1)]);
        g.add_edge(1, 0, b(2));
        let v = serde_json::to_value(&g).unwrap();
        assert_eq!(v, serde_json::json!({"vertices": [-4, -1], "edges": [[0, 1, 2]]}));
        let back: FramedGraph<BigInt> = serde_json::from_value(v).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_value::<FramedGraph<BigInt>>(
            serde_json::json!({"vertices": [1], "edges": [[0, 0, 1]]})
        )
        .is_err());
    }
}
