//! Exact linear algebra over `Q`.
//!
//! Rank, determinant and echelon forms use fraction-free (Bareiss)
//! elimination on integer rows obtained by clearing each row's
//! denominators. Every intermediate entry is a minor of the input, so the
//! division by the previous pivot is always exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::Scalar;
use crate::error::Error;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| clear_denominators(self.row(i))).collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Multiplies a rational row by the lcm of its denominators.
fn clear_denominators(row: &[Scalar]) -> Vec<BigInt> {
    let l = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&l / x.denom()))
        .collect()
}

/// Fraction-free row echelon form in place. Returns the pivot columns and
/// the number of row swaps performed.
fn bareiss_echelon(a: &mut [Vec<BigInt>], ncols: usize) -> (Vec<usize>, usize) {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut swaps = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[col]);
            for j in col + 1..ncols {
                let v = &piv * &row[j] - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = piv;
        pivots.push(col);
        r += 1;
    }
    (pivots, swaps)
}

/// Exact rank by fraction-free elimination.
pub fn matrix_rank(m: &Matrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mut a = m.integer_rows();
    bareiss_echelon(&mut a, m.cols).0.len()
}

/// Exact determinant of a square matrix.
pub fn determinant(m: &Matrix) -> Scalar {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return Scalar::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let row = m.row(i);
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }
    let (pivots, swaps) = bareiss_echelon(&mut a, n);
    if pivots.len() < n {
        return Scalar::zero();
    }
    let mut det = a[n - 1][n - 1].clone();
    if swaps % 2 == 1 {
        det = -det;
    }
    Scalar::from_big(det, scale).unwrap()
}

/// Reduced echelon data for `A x = b`.
#[derive(Clone, Debug)]
pub struct Solution {
    /// Echelon rows of `[A | b]` restricted to pivot rows, as rationals.
    echelon: Vec<Vec<Scalar>>,
    pub pivot_cols: Vec<usize>,
    pub free_cols: Vec<usize>,
    ncols: usize,
}

impl Solution {
    /// Completes a solution from values for the free columns (in the order
    /// of `free_cols`).
    pub fn particular(&self, free_values: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(free_values.len(), self.free_cols.len());
        let mut x = vec![Scalar::zero(); self.ncols];
        for (&c, v) in self.free_cols.iter().zip(free_values) {
            x[c] = v.clone();
        }
        for (r, &pc) in self.pivot_cols.iter().enumerate().rev() {
            let row = &self.echelon[r];
            let mut acc = row[self.ncols].clone();
            for j in pc + 1..self.ncols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc -= &(&row[j] * &x[j]);
                }
            }
            x[pc] = acc / &row[pc];
        }
        x
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

/// Echelonizes `[A | b]`. Pivot columns are the first nonzero column of each
/// echelon row in column order; the remaining columns are free.
pub fn linear_solve(a: &Matrix, b: &[Scalar]) -> Result<Solution, Error> {
    assert_eq!(a.rows, b.len(), "rhs length mismatch");
    let n = a.cols;
    let mut aug: Vec<Vec<BigInt>> = (0..a.rows)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            clear_denominators(&row)
        })
        .collect();
    let (pivots, _) = bareiss_echelon(&mut aug, n + 1);
    if pivots.last() == Some(&n) {
        return Err(Error::Inconsistent);
    }
    let echelon = aug
        .into_iter()
        .take(pivots.len())
        .map(|row| row.into_iter().map(Scalar::from_bigint).collect())
        .collect();
    let free_cols = (0..n).filter(|c| !pivots.contains(c)).collect();
    Ok(Solution {
        echelon,
        pivot_cols: pivots,
        free_cols,
        ncols: n,
    })
}

/// Basis of the right kernel `{x : A x = 0}`.
pub fn nullspace(a: &Matrix) -> Vec<Vec<Scalar>> {
    let sol = linear_solve(a, &vec![Scalar::zero(); a.rows]).expect("homogeneous system");
    let nf = sol.free_cols.len();
    (0..nf)
        .map(|k| {
            let mut fv = vec![Scalar::zero(); nf];
            fv[k] = Scalar::one();
            sol.particular(&fv)
        })
        .collect()
}

/// Lower bound on the rank over `Q` from the rank modulo a 61-bit prime.
///
/// Any minor nonzero mod `p` is nonzero over `Z`, so when the result equals
/// `min(rows, cols)` it is the exact rank. Returns `None` if some denominator
/// vanishes mod `p`.
pub fn rank_mod_p_lower_bound(m: &Matrix) -> Option<usize> {
    const P: u64 = (1 << 61) - 1;
    let pb = BigInt::from(P);
    let reduce = |x: &BigInt| -> u64 { x.mod_floor(&pb).to_u64().unwrap() };
    let mut a: Vec<Vec<u64>> = Vec::with_capacity(m.rows);
    for i in 0..m.rows {
        let mut row = Vec::with_capacity(m.cols);
        for x in m.row(i) {
            let d = reduce(x.denom());
            if d == 0 {
                return None;
            }
            row.push(mulmod(reduce(x.numer()), powmod(d, P - 2, P), P));
        }
        a.push(row);
    }
    let mut r = 0;
    for col in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(piv) = (r..m.rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(piv, r);
        let inv = powmod(a[r][col], P - 2, P);
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            if row[col] == 0 {
                continue;
            }
            let f = mulmod(row[col], inv, P);
            for j in col..m.cols {
                if prow[j] != 0 {
                    row[j] = (row[j] + P - mulmod(f, prow[j], P)) % P;
                }
            }
        }
        r += 1;
    }
    Some(r)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Exact rank, taking the modular shortcut when it certifies full rank.
pub fn certified_rank(m: &Matrix) -> usize {
    let full = m.rows.min(m.cols);
    match rank_mod_p_lower_bound(m) {
        Some(r) if r == full => r,
        _ => matrix_rank(m),
    }
}

/// Number system usable in generic Gauss-Jordan elimination.
pub trait Numeric:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_scalar(s: &Scalar) -> Self;
    /// Multiplicative inverse, `None` if not invertible.
    fn inv(&self) -> Option<Self>;
}

impl Numeric for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn inv(&self) -> Option<Self> {
        self.recip().ok()
    }
}

/// Inverse of a small square matrix by Gauss-Jordan elimination.
pub fn invert<T: Numeric>(m: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = m.len();
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut inv: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| a[i][col].inv().is_some())?;
        a.swap(piv, col);
        inv.swap(piv, col);
        let f = a[col][col].inv().unwrap();
        for j in 0..n {
            a[col][j] = a[col][j].clone() * f.clone();
            inv[col][j] = inv[col][j].clone() * f.clone();
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let g = a[i][col].clone();
            for j in 0..n {
                a[i][j] = a[i][j].clone() - g.clone() * a[col][j].clone();
                inv[i][j] = inv[i][j].clone() - g.clone() * inv[col][j].clone();
            }
        }
    }
    Some(inv)
}

/// Count of positive and negative eigenvalues of a symmetric matrix, via
/// the signs of an `L D L^T` factorization with symmetric pivoting.
pub fn inertia(m: &Matrix) -> (usize, usize) {
    assert_eq!(m.rows, m.cols);
    let mut a = m.clone();
    let mut n = a.rows;
    let (mut pos, mut neg) = (0, 0);
    while n > 0 {
        // diagonal pivot if available, otherwise a 2x2 block
        if let Some(k) = (0..n).find(|&k| !a[(k, k)].is_zero()) {
            let d = a[(k, k)].clone();
            if d.is_negative() {
                neg += 1;
            } else {
                pos += 1;
            }
            a = schur_1x1(&a, k);
        } else if let Some((i, j)) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[(i, j)].is_zero())
        {
            // block [[0, b], [b, 0]] has one eigenvalue of each sign
            pos += 1;
            neg += 1;
            a = schur_2x2(&a, i, j);
        } else {
            break;
        }
        n = a.rows;
    }
    (pos, neg)
}

fn schur_1x1(a: &Matrix, k: usize) -> Matrix {
    let n = a.rows;
    let keep: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let d = a[(k, k)].clone();
    let mut out = Matrix::zeros(n - 1, n - 1);
    for (ii, &i) in keep.iter().enumerate() {
        for (jj, &j) in keep.iter().enumerate() {
            out[(ii, jj)] = &a[(i, j)] - &(&(&a[(i, k)] * &a[(k, j)]) / &d);
        }
    }
    out
}

fn schur_2x2(a: &Matrix, p: usize, q: usize) -> Matrix {
    let n = a.rows;
    let keep: Vec<usize> = (0..n).filter(|&i| i != p && i != q).collect();
    let block = vec![
        vec![a[(p, p)].clone(), a[(p, q)].clone()],
        vec![a[(q, p)].clone(), a[(q, q)].clone()],
    ];
    let binv = invert(&block).expect("nonsingular 2x2 pivot");
    let mut out = Matrix::zeros(n - 2, n - 2);
    for (ii, &i) in keep.iter().enumerate() {
        for (jj, &j) in keep.iter().enumerate() {
            let left = [&a[(i, p)], &a[(i, q)]];
            let right = [&a[(p, j)], &a[(q, j)]];
            let mut s = Scalar::zero();
            for (u, l) in left.iter().enumerate() {
                for (w, r) in right.iter().enumerate() {
                    s += &(&(*l * &binv[u][w]) * *r);
                }
            }
            out[(ii, jj)] = &a[(i, j)] - &s;
        }
    }
    out
}

/// Sign of a big integer as `-1, 0, 1`.
pub fn sign(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(matrix_rank(&Matrix::identity(4)), 4);
        assert_eq!(matrix_rank(&Matrix::zeros(8, 4)), 0);
        assert_eq!(matrix_rank(&Matrix::from_ints(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn rank_with_fractions_and_skipped_columns() {
        let m = Matrix::from_rows(vec![
            vec![Scalar::zero(), Scalar::new(1, 2), Scalar::new(1, 3)],
            vec![Scalar::zero(), Scalar::one(), Scalar::new(2, 3)],
            vec![Scalar::zero(), Scalar::zero(), Scalar::new(5, 7)],
        ]);
        assert_eq!(matrix_rank(&m), 2);
        assert_eq!(rank_mod_p_lower_bound(&m), Some(2));
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(3);
        let b = vec![Scalar::from_int(4), Scalar::new(-1, 2), Scalar::from_int(9)];
        let s = linear_solve(&id, &b).unwrap();
        assert!(s.free_cols.is_empty());
        assert_eq!(s.particular(&[]), b);

        let a = Matrix::from_ints(&[&[1, 1]]);
        let s = linear_solve(&a, &[Scalar::from_int(2)]).unwrap();
        assert_eq!(s.pivot_cols, vec![0]);
        assert_eq!(s.free_cols, vec![1]);
        assert_eq!(s.particular(&[Scalar::zero()]), vec![Scalar::from_int(2), Scalar::zero()]);

        let z = Matrix::from_ints(&[&[0]]);
        assert!(matches!(linear_solve(&z, &[Scalar::one()]), Err(Error::Inconsistent)));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_rows(vec![
            vec![Scalar::from_int(0), Scalar::new(1, 2), Scalar::from_int(3)],
            vec![Scalar::from_int(2), Scalar::from_int(1), Scalar::new(-1, 3)],
            vec![Scalar::from_int(1), Scalar::from_int(0), Scalar::from_int(5)],
        ]);
        // cofactor expansion along the first row
        let expect = -(Scalar::new(1, 2) * (Scalar::from_int(10) + Scalar::new(1, 3)))
            + Scalar::from_int(3) * (Scalar::from_int(0) - Scalar::from_int(1));
        assert_eq!(determinant(&m), expect);
        let inv = invert(&m.to_rows()).unwrap();
        assert_eq!(m.mul(&Matrix::from_rows(inv)), Matrix::identity(3));
    }

    #[test]
    fn inertia_of_split_form() {
        // dt dx + dz dy has signature (2, 2)
        let h = Scalar::new(1, 2);
        let z = Scalar::zero();
        let g = Matrix::from_rows(vec![
            vec![z.clone(), h.clone(), z.clone(), z.clone()],
            vec![h.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), h.clone()],
            vec![z.clone(), z.clone(), h.clone(), z.clone()],
        ]);
        assert_eq!(inertia(&g), (2, 2));
        assert_eq!(inertia(&Matrix::identity(3)), (3, 0));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = Matrix::from_ints(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ker = nullspace(&a);
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(a.mul_vec(&v).iter().all(Scalar::is_zero));
        }
    }
}
