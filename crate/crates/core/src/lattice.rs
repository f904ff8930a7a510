//! Nonnegative integer solutions of `A·k = b`.
//!
//! Three routes produce a [`SolutionFamily`]: the one-parameter line read off a
//! Smith normal form when `rank = m = n - 1` with unit divisors, the singleton
//! `A⁻¹·b` for square invertible `A`, and a depth-first enumerator that works
//! for any natural-number matrix without zero columns. The enumerator doubles
//! as the oracle for the other two.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlinalg::{snf, IntMatrix, RationalMatrix, SnfDecomposition};

/// How a (preprocessed) matrix is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MethodTag {
    SingleIndex,
    Invertible,
    EnumerateOnly,
}

impl MethodTag {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodTag::SingleIndex => "single-index",
            MethodTag::Invertible => "invertible",
            MethodTag::EnumerateOnly => "enumerate-only",
        }
    }
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The set `{k ∈ ℕⁿ : A·k = b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionFamily {
    Empty,
    Singleton(Vec<u64>),
    /// `{base + j·direction : j_min <= j <= j_max}`; at least two points.
    Line {
        base: Vec<BigInt>,
        direction: Vec<BigInt>,
        j_min: BigInt,
        j_max: BigInt,
    },
    Finite(Vec<Vec<u64>>),
}

impl SolutionFamily {
    pub fn len(&self) -> usize {
        match self {
            SolutionFamily::Empty => 0,
            SolutionFamily::Singleton(_) => 1,
            SolutionFamily::Line { j_min, j_max, .. } => (j_max - j_min + 1u32)
                .to_usize()
                .expect("line length fits in usize"),
            SolutionFamily::Finite(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every solution vector, in parameter order for lines.
    pub fn points(&self) -> Result<Vec<Vec<u64>>> {
        match self {
            SolutionFamily::Empty => Ok(Vec::new()),
            SolutionFamily::Singleton(k) => Ok(vec![k.clone()]),
            SolutionFamily::Finite(v) => Ok(v.clone()),
            SolutionFamily::Line {
                base,
                direction,
                j_min,
                j_max,
            } => {
                let mut out = Vec::new();
                let mut j = j_min.clone();
                while &j <= j_max {
                    out.push(line_point(base, direction, &j)?);
                    j += 1u32;
                }
                Ok(out)
            }
        }
    }
}

fn line_point(base: &[BigInt], direction: &[BigInt], j: &BigInt) -> Result<Vec<u64>> {
    base.iter()
        .zip(direction)
        .map(|(u, v)| {
            let x = u + j * v;
            x.to_u64()
                .ok_or_else(|| Error::Invariant(format!("line point coordinate {x} is not a u64")))
        })
        .collect()
}

/// Checks that `a` has natural-number entries and no zero column.
fn check_natural_no_zero_column(a: &IntMatrix) -> Result<()> {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a.get(i, j).is_negative() {
                return Err(Error::NegativeEntry { row: i, col: j });
            }
        }
    }
    if let Some(j) = (0..a.cols()).find(|&j| a.is_zero_column(j)) {
        return Err(Error::ZeroColumn(j));
    }
    Ok(())
}

/// Classification together with the data each path needs.
#[derive(Clone, Debug)]
pub enum Reduction {
    SingleIndex(SnfDecomposition),
    Invertible(RationalMatrix),
    EnumerateOnly,
}

impl Reduction {
    pub fn tag(&self) -> MethodTag {
        match self {
            Reduction::SingleIndex(_) => MethodTag::SingleIndex,
            Reduction::Invertible(_) => MethodTag::Invertible,
            Reduction::EnumerateOnly => MethodTag::EnumerateOnly,
        }
    }
}

/// Works out which evaluation path applies to a preprocessed matrix.
pub fn analyze(a: &IntMatrix) -> Result<Reduction> {
    check_natural_no_zero_column(a)?;
    let s = snf(a);
    if s.rank < a.rows() {
        return Err(Error::Invariant(format!(
            "rank {} below row count {}; rows must be independent",
            s.rank,
            a.rows()
        )));
    }
    if a.is_square() {
        return Ok(Reduction::Invertible(crate::intlinalg::inverse_rational(a)?));
    }
    if a.cols() == a.rows() + 1 && s.is_unit_full_row_rank() {
        return Ok(Reduction::SingleIndex(s));
    }
    Ok(Reduction::EnumerateOnly)
}

pub fn classify(a: &IntMatrix) -> Result<MethodTag> {
    analyze(a).map(|r| r.tag())
}

/// The line `k(j) = Q·(P·b ; j)` intersected with the nonnegative orthant.
///
/// The parameter runs over all integers; the interval is found with exact
/// ceiling and floor division so that its endpoints are tight.
pub fn parametrize_single_index(s: &SnfDecomposition, b: &[i64]) -> Result<SolutionFamily> {
    let m = s.d.rows();
    let n = s.d.cols();
    if n != m + 1 || !s.is_unit_full_row_rank() {
        return Err(Error::MethodNotApplicable {
            method: "single-index",
            reason: format!(
                "need rank = rows = cols - 1 with unit divisors (got {m}x{n}, rank {})",
                s.rank
            ),
        });
    }
    if b.len() != m {
        return Err(Error::Dimension(format!(
            "observation has {} entries, matrix has {m} rows",
            b.len()
        )));
    }
    let b: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
    let mut w = s.p.mul_vec(&b)?;
    w.push(BigInt::zero());
    let base = s.q.mul_vec(&w)?;
    let direction = s.q.column(n - 1);

    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for (u, v) in base.iter().zip(&direction) {
        let neg_u = -u;
        if v.is_positive() {
            let c = neg_u.div_ceil(v);
            if lo.as_ref().is_none_or(|l| c > *l) {
                lo = Some(c);
            }
        } else if v.is_negative() {
            let f = neg_u.div_floor(v);
            if hi.as_ref().is_none_or(|h| f < *h) {
                hi = Some(f);
            }
        } else if u.is_negative() {
            return Ok(SolutionFamily::Empty);
        }
    }
    let (Some(j_min), Some(j_max)) = (lo, hi) else {
        return Err(Error::Invariant(
            "unbounded solution line; kernel direction is one-signed".into(),
        ));
    };
    if j_min > j_max {
        return Ok(SolutionFamily::Empty);
    }
    if j_min == j_max {
        return Ok(SolutionFamily::Singleton(line_point(&base, &direction, &j_min)?));
    }
    Ok(SolutionFamily::Line {
        base,
        direction,
        j_min,
        j_max,
    })
}

/// `k = A⁻¹·b` if it is a nonnegative integer vector.
pub fn solve_invertible(inv: &RationalMatrix, b: &[i64]) -> Result<SolutionFamily> {
    let b: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
    let k = inv.mul_int_vec(&b)?;
    let point: Option<Vec<u64>> = k
        .iter()
        .map(|x: &BigRational| {
            if x.is_integer() {
                x.to_integer().to_u64()
            } else {
                None
            }
        })
        .collect();
    Ok(match point {
        Some(k) => SolutionFamily::Singleton(k),
        None => SolutionFamily::Empty,
    })
}

struct Enumerator<'a> {
    cols: Vec<Vec<u64>>,
    /// rows whose last nonzero entry sits in column `j`
    closing: Vec<Vec<usize>>,
    residual: Vec<u64>,
    current: Vec<u64>,
    out: &'a mut Vec<Vec<u64>>,
}

impl Enumerator<'_> {
    fn descend(&mut self, j: usize) {
        if j == self.cols.len() {
            self.out.push(self.current.clone());
            return;
        }
        let bound = self.cols[j]
            .iter()
            .zip(&self.residual)
            .filter(|(a, _)| **a > 0)
            .map(|(a, r)| r / a)
            .min()
            .expect("column has a positive entry");
        let saved = self.residual.clone();
        for x in 0..=bound {
            if x > 0 {
                for (r, a) in self.residual.iter_mut().zip(&self.cols[j]) {
                    *r -= a;
                }
            }
            if self.closing[j].iter().all(|&i| self.residual[i] == 0) {
                self.current[j] = x;
                self.descend(j + 1);
            }
        }
        self.current[j] = 0;
        self.residual = saved;
    }
}

/// Every `k ∈ ℕⁿ` with `A·k = b`, by depth-first search over the columns.
///
/// Column `j` is bounded by `min_i floor(r_i / a_ij)` over rows with
/// `a_ij >= 1`, where `r` is the residual of `b`; a row is checked for a zero
/// residual as soon as its last nonzero column has been assigned.
pub fn enumerate_solutions(a: &IntMatrix, b: &[i64]) -> Result<SolutionFamily> {
    check_natural_no_zero_column(a)?;
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "observation has {} entries, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    if b.iter().any(|&x| x < 0) {
        return Ok(SolutionFamily::Empty);
    }
    let (m, n) = (a.rows(), a.cols());
    let cols: Vec<Vec<u64>> = (0..n)
        .map(|j| {
            a.column(j)
                .iter()
                .map(|x| x.to_u64().ok_or_else(|| Error::Overflow(x.to_string())))
                .collect()
        })
        .collect::<Result<_>>()?;
    let residual: Vec<u64> = b.iter().map(|&x| x as u64).collect();

    let mut closing = vec![Vec::new(); n];
    for i in 0..m {
        match (0..n).rev().find(|&j| cols[j][i] > 0) {
            Some(j) => closing[j].push(i),
            None if residual[i] != 0 => return Ok(SolutionFamily::Finite(Vec::new())),
            None => {}
        }
    }

    let mut out = Vec::new();
    Enumerator {
        cols,
        closing,
        residual,
        current: vec![0; n],
        out: &mut out,
    }
    .descend(0);
    Ok(SolutionFamily::Finite(out))
}

/// `b[row] = Σ coefficient · b[kept_row]`, a consistency condition inherited
/// from a linearly dependent row of the original matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowRelation {
    pub row: usize,
    pub terms: Vec<(usize, BigRational)>,
}

impl RowRelation {
    pub fn is_satisfied(&self, b: &[i64]) -> bool {
        let rhs = self
            .terms
            .iter()
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(b[*i])))
            .fold(BigRational::zero(), |acc, x| acc + x);
        rhs == BigRational::from_integer(BigInt::from(b[self.row]))
    }
}

impl fmt::Display for RowRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row{} = ", self.row)?;
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (i, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "row{i}")?;
            } else {
                write!(f, "({c})*row{i}")?;
            }
        }
        Ok(())
    }
}

/// What [`preprocess`] removed and what it requires of an observation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PreprocessReport {
    pub original_rows: usize,
    pub original_cols: usize,
    pub removed_columns: Vec<usize>,
    pub kept_columns: Vec<usize>,
    pub kept_rows: Vec<usize>,
    pub relations: Vec<RowRelation>,
}

impl PreprocessReport {
    pub fn is_identity(&self) -> bool {
        self.removed_columns.is_empty() && self.relations.is_empty()
    }

    /// Restricts `b` to the kept rows, or `None` if a relation is violated.
    pub fn reduce_observation(&self, b: &[i64]) -> Option<Vec<i64>> {
        if !self.relations.iter().all(|r| r.is_satisfied(b)) {
            return None;
        }
        Some(self.kept_rows.iter().map(|&i| b[i]).collect())
    }
}

#[derive(Clone, Debug)]
pub struct Preprocessed {
    /// `None` when every column was zero.
    pub matrix: Option<IntMatrix>,
    pub lambda: Vec<f64>,
    pub report: PreprocessReport,
}

/// Drops zero columns and linearly dependent rows.
///
/// A zero column belongs to a variable that never reaches `Y`, so it
/// marginalizes out with total probability one. Rows are scanned in order and
/// each one in the rational span of the rows kept so far is dropped; its exact
/// dependence is recorded as a [`RowRelation`].
pub fn preprocess(a: &IntMatrix, lambda: &[f64]) -> Result<Preprocessed> {
    if lambda.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "{} rates for {} columns",
            lambda.len(),
            a.cols()
        )));
    }
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a.get(i, j).is_negative() {
                return Err(Error::NegativeEntry { row: i, col: j });
            }
        }
    }
    if let Some((index, &value)) = lambda
        .iter()
        .enumerate()
        .find(|(_, l)| !l.is_finite() || **l < 0.0)
    {
        return Err(Error::InvalidRate { index, value });
    }

    let (removed_columns, kept_columns): (Vec<usize>, Vec<usize>) =
        (0..a.cols()).partition(|&j| a.is_zero_column(j));

    let mut report = PreprocessReport {
        original_rows: a.rows(),
        original_cols: a.cols(),
        removed_columns,
        kept_columns: kept_columns.clone(),
        ..Default::default()
    };

    // Echelon basis: (reduced row, pivot column, combination of original rows)
    let mut basis: Vec<(Vec<BigRational>, usize, Vec<BigRational>)> = Vec::new();
    for r in 0..a.rows() {
        let mut x: Vec<BigRational> = kept_columns
            .iter()
            .map(|&j| BigRational::from_integer(a.get(r, j).clone()))
            .collect();
        let mut combo = vec![BigRational::zero(); a.rows()];
        combo[r] = BigRational::one();
        for (row, pivot, bc) in &basis {
            if x[*pivot].is_zero() {
                continue;
            }
            let factor = &x[*pivot] / &row[*pivot];
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi -= &factor * ri;
            }
            for (ci, bi) in combo.iter_mut().zip(bc) {
                *ci -= &factor * bi;
            }
        }
        match x.iter().position(|e| !e.is_zero()) {
            Some(pivot) => {
                report.kept_rows.push(r);
                basis.push((x, pivot, combo));
            }
            None => {
                let terms = combo
                    .iter()
                    .enumerate()
                    .filter(|(i, c)| *i != r && !c.is_zero())
                    .map(|(i, c)| (i, -c))
                    .collect();
                report.relations.push(RowRelation { row: r, terms });
            }
        }
    }

    let matrix = if kept_columns.is_empty() {
        None
    } else {
        Some(a.select(&report.kept_rows, &kept_columns)?)
    };
    Ok(Preprocessed {
        matrix,
        lambda: kept_columns.iter().map(|&j| lambda[j]).collect(),
        report,
    })
}
