//! Dense integer matrices with exact reductions: Bareiss determinant,
//! row Hermite form with unimodular transform, Smith normal form with both
//! transforms, integer kernels, and rational inverses.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::scalar::{Int, Rat};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Int> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged matrix rows");
            data.extend(r);
        }
        IntMatrix { rows: nrows, cols: ncols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self[(i, k)].clone() * other[(k, j)].clone())
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    /// `vᵀ M w`.
    pub fn bilinear(&self, v: &[T], w: &[T]) -> T {
        self.mul_vec(w).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &T) {
        for j in 0..self.cols {
            let v = self[(src, j)].clone() * c.clone();
            self[(dst, j)] = self[(dst, j)].clone() + v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &T) {
        for i in 0..self.rows {
            let v = self[(i, src)].clone() * c.clone();
            self[(i, dst)] = self[(i, dst)].clone() + v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return T::one();
        }
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return T::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                    a[(i, j)] = num / prev.clone();
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Row-style Hermite normal form.
    ///
    /// Returns `(h, u)` with `u` unimodular and `u * self == h`. Pivots of
    /// `h` are positive and entries above each pivot lie in `[0, pivot)`, so
    /// the nonzero rows of `h` are the canonical basis of the row lattice.
    pub fn hermite(&self) -> (Self, Self) {
        let mut h = self.clone();
        let mut u = Self::identity(self.rows);
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            loop {
                let pivot = (r..h.rows)
                    .filter(|&i| !h[(i, c)].is_zero())
                    .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
                let Some(p) = pivot else { break };
                h.swap_rows(p, r);
                u.swap_rows(p, r);
                let mut done = true;
                for i in r + 1..h.rows {
                    if h[(i, c)].is_zero() {
                        continue;
                    }
                    let q = -h[(i, c)].div_floor(&h[(r, c)]);
                    h.add_row(i, r, &q);
                    u.add_row(i, r, &q);
                    if !h[(i, c)].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h[(r, c)].is_zero() {
                continue;
            }
            if h[(r, c)].is_negative() {
                h.negate_row(r);
                u.negate_row(r);
            }
            for i in 0..r {
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                if !q.is_zero() {
                    h.add_row(i, r, &q);
                    u.add_row(i, r, &q);
                }
            }
            r += 1;
        }
        (h, u)
    }

    pub fn rank(&self) -> usize {
        let (h, _) = self.hermite();
        (0..h.rows).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
    }

    /// Canonical integer basis of `{x : self * x = 0}`, as rows in Hermite form.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let (h, u) = self.transpose().hermite();
        let kernel_rows: Vec<Vec<T>> =
            (0..h.rows).filter(|&i| h.row(i).iter().all(Zero::is_zero)).map(|i| u.row(i).to_vec()).collect();
        if kernel_rows.is_empty() {
            return kernel_rows;
        }
        let (hk, _) = Self::from_rows(kernel_rows).hermite();
        hk.to_rows().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
    }

    /// Smith normal form `u * self * v = d` with `u`, `v` unimodular.
    pub fn smith(&self) -> Smith<T> {
        let mut d = self.clone();
        let mut u = Self::identity(self.rows);
        let mut v = Self::identity(self.cols);
        let n = self.rows.min(self.cols);
        for t in 0..n {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..d.rows {
                    for j in t..d.cols {
                        if d[(i, j)].is_zero() {
                            continue;
                        }
                        if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    return Smith { u, d, v };
                };
                d.swap_rows(pi, t);
                u.swap_rows(pi, t);
                d.swap_cols(pj, t);
                v.swap_cols(pj, t);

                let mut clean = true;
                for i in t + 1..d.rows {
                    let q = -d[(i, t)].div_floor(&d[(t, t)]);
                    if !q.is_zero() {
                        d.add_row(i, t, &q);
                        u.add_row(i, t, &q);
                    }
                    if !d[(i, t)].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..d.cols {
                    let q = -d[(t, j)].div_floor(&d[(t, t)]);
                    if !q.is_zero() {
                        d.add_col(j, t, &q);
                        v.add_col(j, t, &q);
                    }
                    if !d[(t, j)].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                // Divisibility: fold a violating row into row t and retry.
                let pivot = d[(t, t)].clone();
                let bad = (t + 1..d.rows).find(|&i| (t + 1..d.cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
                match bad {
                    Some(i) => {
                        let one = T::one();
                        d.add_row(t, i, &one);
                        u.add_row(t, i, &one);
                    }
                    None => break,
                }
            }
            if d[(t, t)].is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
        }
        Smith { u, d, v }
    }

    /// Inverse over the rationals, or `None` when singular.
    pub fn rational_inverse(&self) -> Option<Vec<Vec<Rat<T>>>> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<Rat<T>>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rat<T>> = self.row(i).iter().map(|x| Rat::from_integer(x.clone())).collect();
                row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| !a[i][c].is_zero())?;
            a.swap(p, c);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x = x.clone() * inv.clone();
            }
            for i in 0..n {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..2 * n {
                        let delta = f.clone() * a[c][j].clone();
                        a[i][j] = a[i][j].clone() - delta;
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// Solves `self * x = b` over the rationals for square nonsingular `self`.
    pub fn rational_solve(&self, b: &[T]) -> Option<Vec<Rat<T>>> {
        let inv = self.rational_inverse()?;
        Some(
            inv.iter()
                .map(|row| {
                    row.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x.clone() * Rat::from_integer(y.clone()))
                })
                .collect(),
        )
    }
}

/// Result of [`IntMatrix::smith`].
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub u: IntMatrix<T>,
    pub d: IntMatrix<T>,
    pub v: IntMatrix<T>,
}

impl<T: Int> Smith<T> {
    /// Invariant factors in divisibility order; zeros (free summands) last.
    pub fn invariants(&self) -> Vec<T> {
        let diag = self.d.diagonal();
        let mut nonzero: Vec<T> = diag.iter().filter(|x| !x.is_zero()).cloned().collect();
        nonzero.sort();
        let zeros = diag.len() - nonzero.len();
        nonzero.extend(std::iter::repeat_n(T::zero(), zeros));
        nonzero
    }
}

impl<T> Index<(usize, usize)> for IntMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for IntMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:?}", self.data[i * self.cols + j])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
