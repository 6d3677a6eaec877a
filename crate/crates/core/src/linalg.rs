//! Dense exact linear algebra over the rationals.
//!
//! Ranks are computed with fraction-free (Bareiss) elimination on integer
//! matrices; rational input is first cleared of denominators row by row,
//! which leaves the rank unchanged.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exact::Rational;

/// Row-major dense rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// `self - s·I`.
    pub fn minus_scalar(&self, s: &Rational) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] -= s;
        }
        m
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Rational::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = &self[(i, j)];
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        integer_rank(self.integer_rows())
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Each row multiplied by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Rank of an integer matrix by Bareiss fraction-free elimination.
///
/// Every intermediate entry is a minor of the input, so the division by the
/// previous pivot is exact.
pub fn integer_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let factor = core::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m = rows;
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of the right null space `{x : A x = 0}`.
pub fn null_space(a: &Matrix) -> Vec<Vec<Rational>> {
    let (reduced, pivots) = rref(a.to_rows());
    let n = a.cols();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (row, &pc) in reduced.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Characteristic polynomial `det(tI - A)`, lowest degree first.
///
/// Reduces to upper Hessenberg form by similarity transforms and then expands
/// along the subdiagonal.
pub fn charpoly(a: &Matrix) -> Vec<Rational> {
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
            continue;
        };
        if i != m {
            for j in 0..n {
                let t = h[(i, j)].clone();
                h[(i, j)] = core::mem::replace(&mut h[(m, j)], t);
            }
            for j in 0..n {
                let t = h[(j, i)].clone();
                h[(j, i)] = core::mem::replace(&mut h[(j, m)], t);
            }
        }
        let piv = h[(m, m - 1)].clone();
        for k in m + 1..n {
            if h[(k, m - 1)].is_zero() {
                continue;
            }
            let u = &h[(k, m - 1)] / &piv;
            for j in 0..n {
                let d = &u * &h[(m, j)];
                h[(k, j)] -= d;
            }
            for j in 0..n {
                let d = &u * &h[(j, k)];
                h[(j, m)] += d;
            }
        }
    }
    // p[k] = characteristic polynomial of the leading k×k block.
    let mut p: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    for k in 1..=n {
        let prev = &p[k - 1];
        let mut next = vec![Rational::zero(); k + 1];
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= &h[(k - 1, k - 1)] * c;
        }
        let mut t = Rational::one();
        for i in (1..k).rev() {
            t *= &h[(i, i - 1)];
            if t.is_zero() {
                break;
            }
            let coeff = &h[(i - 1, k - 1)] * &t;
            for (d, c) in p[i - 1].iter().enumerate() {
                next[d] -= &coeff * c;
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

/// Expands `∏ (t - root)^mult`, lowest degree first.
pub fn poly_from_roots<'a>(
    roots: impl IntoIterator<Item = (&'a Rational, usize)>,
) -> Vec<Rational> {
    let mut poly = vec![Rational::one()];
    for (root, mult) in roots {
        for _ in 0..mult {
            let mut next = vec![Rational::zero(); poly.len() + 1];
            for (d, c) in poly.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= root * c;
            }
            poly = next;
        }
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    /// Leibniz expansion, for tiny matrices only.
    fn det_brute(a: &Matrix) -> Rational {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = a.rows();
        let mut total = Rational::zero();
        for p in perms(n) {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            let mut term = if inv % 2 == 0 { int(1) } else { int(-1) };
            for (i, &pi) in p.iter().enumerate() {
                term *= &a[(i, pi)];
            }
            total += term;
        }
        total
    }

    fn eval(poly: &[Rational], t: &Rational) -> Rational {
        poly.iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(m(&[&[0, 1, 2], &[0, 2, 5], &[0, 0, 0]]).rank(), 2);
        assert_eq!(Matrix::identity(4).nullity(), 0);
        let half = Matrix::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 2)],
            vec![ratio(1, 2), ratio(1, 2)],
        ]);
        assert_eq!(half.nullity(), 1);
    }

    #[test]
    fn null_space_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = null_space(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let col = Matrix::from_rows(v.iter().map(|x| vec![x.clone()]).collect());
            assert!(a.mul(&col).is_zero());
        }
    }

    #[test]
    fn charpoly_matches_determinant_at_sample_points() {
        let a = m(&[&[0, 1, 0, 2], &[3, 0, 1, 0], &[0, 0, 2, 1], &[1, 1, 0, 0]]);
        let cp = charpoly(&a);
        assert_eq!(cp.len(), 5);
        for t in -3..=3 {
            let t = int(t);
            let lhs = eval(&cp, &t);
            let rhs = det_brute(&Matrix::identity(4).scale(&t).add(&a.scale(&int(-1))));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn charpoly_handles_zero_subdiagonal() {
        let a = m(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 3]]);
        assert_eq!(charpoly(&a), poly_from_roots([(&int(2), 1), (&int(3), 2)]));
    }

    #[test]
    fn rref_identity_from_invertible() {
        let (r, piv) = rref(m(&[&[2, 1], &[1, 1]]).to_rows());
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(Matrix::from_rows(r), Matrix::identity(2));
    }
}
