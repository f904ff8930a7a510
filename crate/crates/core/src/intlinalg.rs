//! Exact linear algebra over arbitrary-precision integers and rationals.
//!
//! Everything in this module is exact: entries are [`BigInt`] or
//! [`BigRational`] and no floating point value is ever produced. The main
//! entry point is [`snf`], which computes a Smith normal form `P·A·Q = D`
//! together with the unimodular transforms. [`minor_gcd`] is an independent,
//! exponential-cost route to the elementary divisors and is meant for
//! verification on small matrices only.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest `min(rows, cols)` accepted by [`minor_gcd`].
pub const MINOR_GCD_LIMIT: usize = 6;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(Error::EntryCount {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from a list of rows; ragged input is rejected.
    pub fn from_rows<T>(rows: &[Vec<T>]) -> Result<Self>
    where
        T: Clone + Into<BigInt>,
    {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row {bad} has {} entries, expected {cols}",
                rows[bad].len()
            )));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().cloned().map(Into::into))
            .collect();
        Self::new(rows.len(), cols, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Zero matrix. Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "IntMatrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_zero_column(&self, j: usize) -> bool {
        (0..self.rows).all(|i| self.get(i, j).is_zero())
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rows as `i64`, failing if any entry does not fit.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string())))
                    .collect()
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.entries[idx] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect())
    }

    /// Submatrix on the given row and column index sets.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<IntMatrix> {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        IntMatrix::new(rows.len(), cols.len(), entries)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += factor * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let delta = factor * self.get(src, j);
            self.entries[dst * self.cols + j] += delta;
        }
    }

    /// `col[dst] += factor * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let delta = factor * self.get(i, src);
            self.entries[i * self.cols + dst] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.entries[idx] = -std::mem::take(&mut self.entries[idx]);
        }
    }

    fn to_nested(&self) -> Vec<Vec<BigInt>> {
        self.to_rows()
    }
}

/// Text format: one row per line, entries separated by single spaces.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(lineno, l)| {
                l.split_whitespace()
                    .map(|tok| {
                        tok.parse::<BigInt>().map_err(|_| {
                            Error::Parse(format!("line {}: invalid integer {tok:?}", lineno + 1))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Err(Error::Parse("matrix text is empty".into()));
        }
        IntMatrix::from_rows(&rows)
    }
}

/// Dense matrix of exact rationals, always in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    /// The matrix as an [`IntMatrix`] if every entry is an integer.
    pub fn to_integer_matrix(&self) -> Option<IntMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|r| r.is_integer().then(|| r.to_integer()))
            .collect::<Option<Vec<_>>>()?;
        IntMatrix::new(self.rows, self.cols, entries).ok()
    }

    pub fn mul_int_vec(&self, v: &[BigInt]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * BigRational::from_integer(v[j].clone()))
                    .fold(BigRational::zero(), |acc, x| acc + x)
            })
            .collect())
    }

    pub fn mul_int(&self, rhs: &IntMatrix) -> Result<RationalMatrix> {
        if self.cols != rhs.rows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols,
                rhs.rows(),
                rhs.cols()
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * rhs.cols());
        for i in 0..self.rows {
            for j in 0..rhs.cols() {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * BigRational::from_integer(rhs.get(k, j).clone());
                }
                entries.push(acc);
            }
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: rhs.cols(),
            entries,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Smith normal form `p · a · q = d` with unimodular `p`, `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub p: IntMatrix,
    pub d: IntMatrix,
    pub q: IntMatrix,
    pub rank: usize,
    /// Positive elementary divisors `d_1 | d_2 | ... | d_rank`.
    pub divisors: Vec<BigInt>,
}

impl SnfDecomposition {
    /// Checks every invariant of the decomposition against the input matrix.
    pub fn verify(&self, a: &IntMatrix) -> Result<()> {
        let paq = self.p.mul(a)?.mul(&self.q)?;
        if paq != self.d {
            return Err(Error::Invariant("P·A·Q differs from D".into()));
        }
        for (name, t) in [("P", &self.p), ("Q", &self.q)] {
            if !det_exact(t)?.abs().is_one() {
                return Err(Error::Invariant(format!("{name} is not unimodular")));
            }
        }
        if self.divisors.len() != self.rank {
            return Err(Error::Invariant("divisor count differs from rank".into()));
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                let e = self.d.get(i, j);
                let ok = if i == j && i < self.rank {
                    *e == self.divisors[i]
                } else {
                    e.is_zero()
                };
                if !ok {
                    return Err(Error::Invariant(format!("D has unexpected entry at ({i}, {j})")));
                }
            }
        }
        if self.divisors.iter().any(|d| !d.is_positive()) {
            return Err(Error::Invariant("non-positive elementary divisor".into()));
        }
        if self
            .divisors
            .windows(2)
            .any(|w| !w[1].is_multiple_of(&w[0]))
        {
            return Err(Error::Invariant("divisibility chain broken".into()));
        }
        Ok(())
    }

    /// True when `d` is `(I_r | 0)` with `r = rows`, i.e. full row rank and
    /// every elementary divisor equal to one.
    pub fn is_unit_full_row_rank(&self) -> bool {
        self.rank == self.d.rows() && self.divisors.iter().all(One::is_one)
    }
}

/// Position of the nonzero entry of least absolute value in the trailing
/// submatrix starting at `(t, t)`; ties go to the lowest `(row, col)`.
fn min_abs_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let e = d.get(i, j);
            if e.is_zero() {
                continue;
            }
            let mag = e.abs();
            if best.as_ref().is_none_or(|(_, b)| mag < *b) {
                best = Some(((i, j), mag));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

/// Clears row `t` and column `t` outside the pivot using floor-division
/// remainders. Returns `true` if a nonzero remainder is left behind.
fn reduce_cross(d: &mut IntMatrix, p: &mut IntMatrix, q: &mut IntMatrix, t: usize) -> bool {
    let pivot = d.get(t, t).clone();
    for i in t + 1..d.rows() {
        if d.get(i, t).is_zero() {
            continue;
        }
        let factor = -d.get(i, t).div_floor(&pivot);
        d.add_row_multiple(i, t, &factor);
        p.add_row_multiple(i, t, &factor);
    }
    for j in t + 1..d.cols() {
        if d.get(t, j).is_zero() {
            continue;
        }
        let factor = -d.get(t, j).div_floor(&pivot);
        d.add_col_multiple(j, t, &factor);
        q.add_col_multiple(j, t, &factor);
    }
    (t + 1..d.rows()).any(|i| !d.get(i, t).is_zero())
        || (t + 1..d.cols()).any(|j| !d.get(t, j).is_zero())
}

/// First row below `t` holding an entry not divisible by the pivot.
fn non_divisible_row(d: &IntMatrix, t: usize) -> Option<usize> {
    let pivot = d.get(t, t);
    (t + 1..d.rows()).find(|&i| (t + 1..d.cols()).any(|j| !d.get(i, j).is_multiple_of(pivot)))
}

/// Smith normal form with transform tracking.
///
/// Classical gcd reduction: at each stage the nonzero entry of least absolute
/// value in the remaining submatrix becomes the pivot, its row and column are
/// reduced by floor division, and the stage repeats until the pivot divides
/// the whole remaining submatrix. Divisors are normalized positive. The
/// procedure is deterministic.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut p = IntMatrix::identity(m);
    let mut q = IntMatrix::identity(n);

    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_abs_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        p.swap_rows(t, pi);
        d.swap_cols(t, pj);
        q.swap_cols(t, pj);

        if reduce_cross(&mut d, &mut p, &mut q, t) {
            continue;
        }
        if let Some(i) = non_divisible_row(&d, t) {
            let one = BigInt::one();
            d.add_row_multiple(t, i, &one);
            p.add_row_multiple(t, i, &one);
            continue;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
        t += 1;
    }

    let divisors = (0..t).map(|i| d.get(i, i).clone()).collect();
    SnfDecomposition {
        p,
        d,
        q,
        rank: t,
        divisors,
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det_exact(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut m = a.to_nested();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                debug_assert!(num.is_multiple_of(&prev));
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// Rank over the rationals, by fraction-free elimination.
pub fn rank(a: &IntMatrix) -> usize {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.to_nested();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                debug_assert!(num.is_multiple_of(&prev));
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Exact inverse over the rationals by Gauss-Jordan elimination.
pub fn inverse_rational(a: &IntMatrix) -> Result<RationalMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut left: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            a.row(i)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut right: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();

    for c in 0..n {
        let piv = (c..n).find(|&i| !left[i][c].is_zero()).ok_or(Error::Singular)?;
        left.swap(c, piv);
        right.swap(c, piv);
        let inv = left[c][c].recip();
        for j in 0..n {
            left[c][j] = &left[c][j] * &inv;
            right[c][j] = &right[c][j] * &inv;
        }
        for i in 0..n {
            if i == c || left[i][c].is_zero() {
                continue;
            }
            let factor = left[i][c].clone();
            for j in 0..n {
                let dl = &factor * &left[c][j];
                left[i][j] -= dl;
                let dr = &factor * &right[c][j];
                right[i][j] -= dr;
            }
        }
    }
    Ok(RationalMatrix {
        rows: n,
        cols: n,
        entries: right.into_iter().flatten().collect(),
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// g.c.d. of all `order × order` minors (nonnegative; zero iff every such
/// minor vanishes).
///
/// Enumerates every minor, so the cost is combinatorial. This is a
/// verification oracle for [`snf`] and refuses matrices with
/// `min(rows, cols) > MINOR_GCD_LIMIT`.
pub fn minor_gcd(a: &IntMatrix, order: usize) -> Result<BigInt> {
    let max = a.rows().min(a.cols());
    if max > MINOR_GCD_LIMIT {
        return Err(Error::MinorGuard {
            limit: MINOR_GCD_LIMIT,
            actual: max,
        });
    }
    if order == 0 || order > max {
        return Err(Error::MinorOrder { order, max });
    }
    let row_sets = combinations(a.rows(), order);
    let col_sets = combinations(a.cols(), order);
    let mut g = BigInt::zero();
    for rs in &row_sets {
        for cs in &col_sets {
            let minor = det_exact(&a.select(rs, cs)?)?;
            g = g.gcd(&minor);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows(&v).unwrap()
    }

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(3);
        let s = snf(&a);
        assert_eq!(s.p, a);
        assert_eq!(s.q, a);
        assert_eq!(s.d, a);
        assert_eq!(s.divisors, big(&[1, 1, 1]));
        s.verify(&a).unwrap();
    }

    #[test]
    fn snf_two_by_three_unit_divisors() {
        let a = m(&[&[1, 0, 1], &[0, 2, 1]]);
        let s = snf(&a);
        s.verify(&a).unwrap();
        assert_eq!(s.d, m(&[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(s.divisors, big(&[1, 1]));
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn snf_already_diagonal_chain() {
        let a = m(&[&[2, 0], &[0, 4]]);
        let s = snf(&a);
        s.verify(&a).unwrap();
        assert_eq!(s.divisors, big(&[2, 4]));
        // minor-gcd route: Δ1 = 2, Δ2 = 8
        assert_eq!(minor_gcd(&a, 1).unwrap(), BigInt::from(2));
        assert_eq!(minor_gcd(&a, 2).unwrap(), BigInt::from(8));
    }

    #[test]
    fn snf_fixes_non_divisible_diagonal() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let s = snf(&a);
        s.verify(&a).unwrap();
        assert_eq!(s.divisors, big(&[1, 6]));
    }

    #[test]
    fn snf_negative_and_zero_rows() {
        let a = m(&[&[0, 0, 0], &[-4, 6, 0], &[0, 0, 0]]);
        let s = snf(&a);
        s.verify(&a).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.divisors, big(&[2]));
    }

    #[test]
    fn snf_zero_matrix() {
        let a = IntMatrix::zeros(2, 3);
        let s = snf(&a);
        s.verify(&a).unwrap();
        assert_eq!(s.rank, 0);
        assert!(s.divisors.is_empty());
    }

    #[test]
    fn determinant_cases() {
        assert_eq!(det_exact(&IntMatrix::identity(4)).unwrap(), BigInt::one());
        let a3 = m(&[&[1, 5, 3], &[2, 10, 5], &[0, 1, 8]]);
        assert_eq!(det_exact(&a3).unwrap(), BigInt::one());
        assert_eq!(det_exact(&m(&[&[1, 2], &[2, 4]])).unwrap(), BigInt::zero());
        assert_eq!(det_exact(&m(&[&[0, 1], &[1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(
            det_exact(&m(&[&[1, 2, 3]])),
            Err(Error::NotSquare { rows: 1, cols: 3 })
        );
    }

    #[test]
    fn rank_cases() {
        assert_eq!(rank(&m(&[&[1, 0, 1], &[0, 2, 1]])), 2);
        assert_eq!(rank(&IntMatrix::zeros(3, 2)), 0);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[0, 1, 2], &[0, 2, 4], &[1, 0, 0]])), 2);
    }

    #[test]
    fn inverse_cases() {
        let id = IntMatrix::identity(3);
        assert!(inverse_rational(&id).unwrap().is_identity());

        let a3 = m(&[&[1, 5, 3], &[2, 10, 5], &[0, 1, 8]]);
        let inv = inverse_rational(&a3).unwrap();
        assert_eq!(
            inv.to_integer_matrix().unwrap(),
            m(&[&[75, -37, -5], &[-16, 8, 1], &[2, -1, 0]])
        );

        let half = inverse_rational(&m(&[&[2, 0], &[0, 2]])).unwrap();
        let h = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(half.get(0, 0), &h);
        assert_eq!(half.get(1, 1), &h);
        assert!(half.get(0, 1).is_zero());
        assert!(half.to_integer_matrix().is_none());

        assert_eq!(inverse_rational(&m(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
    }

    #[test]
    fn minor_gcd_cases() {
        let a = m(&[&[1, 0, 1], &[0, 2, 1]]);
        assert_eq!(minor_gcd(&a, 1).unwrap(), BigInt::one());
        assert_eq!(minor_gcd(&IntMatrix::identity(3), 2).unwrap(), BigInt::one());
        assert_eq!(minor_gcd(&m(&[&[2, 4], &[6, 8]]), 1).unwrap(), BigInt::from(2));
        assert!(matches!(minor_gcd(&a, 3), Err(Error::MinorOrder { .. })));
        assert!(matches!(minor_gcd(&a, 0), Err(Error::MinorOrder { .. })));
        assert!(matches!(
            minor_gcd(&IntMatrix::identity(7), 1),
            Err(Error::MinorGuard { .. })
        ));
    }

    #[test]
    fn text_format_round_trip() {
        let a = m(&[&[1, 0, 1], &[0, -2, 1]]);
        let text = a.to_string();
        assert_eq!(text, "1 0 1\n0 -2 1\n");
        assert_eq!(text.parse::<IntMatrix>().unwrap(), a);
        assert!("1 2\n3".parse::<IntMatrix>().is_err());
        assert!("1 x".parse::<IntMatrix>().is_err());
        assert!("".parse::<IntMatrix>().is_err());
    }

    #[test]
    fn constructor_validation() {
        assert!(IntMatrix::new(0, 1, vec![]).is_err());
        assert!(IntMatrix::new(1, 2, big(&[1])).is_err());
    }
}
