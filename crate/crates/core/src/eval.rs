//! Probability mass and generating function of `Y = A·X` for independent
//! `X_i ~ Poisson(λ_i)`.
//!
//! All probabilities are accumulated in log space: each solution `k` of
//! `A·k = b` contributes `Σ_i k_i ln λ_i − λ_i − ln k_i!` and the
//! contributions are combined by a max-shifted, compensated log-sum-exp.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::intlinalg::{IntMatrix, RationalMatrix, SnfDecomposition};
use crate::lattice::{
    analyze, enumerate_solutions, parametrize_single_index, preprocess, solve_invertible,
    MethodTag, PreprocessReport, Reduction, SolutionFamily,
};

/// Probabilities above one by at most this much are clamped to one.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

/// Relative tolerance used when comparing evaluation paths.
pub const METHOD_AGREEMENT_RTOL: f64 = 1e-12;

const FACTORIALS: [u64; 21] = {
    let mut t = [1u64; 21];
    let mut i = 1;
    while i < 21 {
        t[i] = t[i - 1] * i as u64;
        i += 1;
    }
    t
};

/// `ln k!`. Exact-table lookup up to `20!`, Stirling series for `ln Γ(k+1)`
/// beyond, where the truncation error is below `1e-17`.
pub fn ln_factorial(k: u64) -> f64 {
    if let Some(&f) = FACTORIALS.get(k as usize) {
        return (f as f64).ln();
    }
    let x = k as f64 + 1.0;
    let x2 = x * x;
    let series = (1.0 / 12.0
        - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * x2)) / x2) / x2)
        / x;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// `ln Π_i λ_i^{k_i} e^{−λ_i} / k_i!`, with `0·ln 0 = 0`.
pub fn log_term(k: &[u64], lambda: &[f64]) -> Result<f64> {
    if k.len() != lambda.len() {
        return Err(Error::Dimension(format!(
            "{} counts for {} rates",
            k.len(),
            lambda.len()
        )));
    }
    let mut total = 0.0;
    for (index, (&ki, &li)) in k.iter().zip(lambda).enumerate() {
        if !li.is_finite() || li < 0.0 {
            return Err(Error::InvalidRate { index, value: li });
        }
        if ki == 0 {
            total -= li;
            continue;
        }
        if li == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        total += ki as f64 * li.ln() - li - ln_factorial(ki);
    }
    Ok(total)
}

/// `ln Σ e^{t_i}`: shift by the maximum, sort the scaled terms in descending
/// order and add them with Neumaier compensation.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut scaled: Vec<f64> = terms.iter().map(|t| (t - max).exp()).collect();
    scaled.sort_by(|a, b| b.total_cmp(a));
    max + compensated_sum(&scaled).ln()
}

pub(crate) fn compensated_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// A validated `(A, λ)` pair, preprocessed and classified once.
#[derive(Clone, Debug)]
pub struct PoissonModel {
    a: IntMatrix,
    lambda: Vec<f64>,
    reduced: Option<IntMatrix>,
    reduced_lambda: Vec<f64>,
    report: PreprocessReport,
    /// `None` iff every column of `a` is zero.
    reduction: Option<Reduction>,
}

impl PoissonModel {
    pub fn new(a: IntMatrix, lambda: Vec<f64>) -> Result<Self> {
        let pre = preprocess(&a, &lambda)?;
        let reduction = pre.matrix.as_ref().map(analyze).transpose()?;
        Ok(Self {
            a,
            lambda,
            reduced: pre.matrix,
            reduced_lambda: pre.lambda,
            report: pre.report,
            reduction,
        })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn reduced_matrix(&self) -> Option<&IntMatrix> {
        self.reduced.as_ref()
    }

    pub fn reduced_lambda(&self) -> &[f64] {
        &self.reduced_lambda
    }

    pub fn report(&self) -> &PreprocessReport {
        &self.report
    }

    pub fn method(&self) -> MethodTag {
        self.reduction
            .as_ref()
            .map_or(MethodTag::EnumerateOnly, Reduction::tag)
    }

    pub fn snf(&self) -> Option<&SnfDecomposition> {
        match &self.reduction {
            Some(Reduction::SingleIndex(s)) => Some(s),
            _ => None,
        }
    }

    pub fn inverse(&self) -> Option<&RationalMatrix> {
        match &self.reduction {
            Some(Reduction::Invertible(inv)) => Some(inv),
            _ => None,
        }
    }

    /// `A·k` over the original matrix.
    pub fn image(&self, k: &[u64]) -> Result<Vec<i64>> {
        let k: Vec<BigInt> = k.iter().map(|&x| BigInt::from(x)).collect();
        self.a
            .mul_vec(&k)?
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string())))
            .collect()
    }
}

/// Which evaluation path to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Auto,
    SingleIndex,
    Invertible,
    Enumerate,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::SingleIndex => "single-index",
            Method::Invertible => "invertible",
            Method::Enumerate => "enumerate",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "single-index" => Ok(Method::SingleIndex),
            "invertible" => Ok(Method::Invertible),
            "enumerate" => Ok(Method::Enumerate),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PmfResult {
    pub log_prob: f64,
    pub prob: f64,
    pub method: MethodTag,
    pub terms: usize,
    /// Set when rounding pushed the probability above one and it was clamped.
    pub clamped: bool,
}

impl PmfResult {
    fn zero(method: MethodTag) -> Self {
        Self {
            log_prob: f64::NEG_INFINITY,
            prob: 0.0,
            method,
            terms: 0,
            clamped: false,
        }
    }

    fn from_log_terms(logs: &[f64], method: MethodTag) -> Result<Self> {
        let mut log_prob = log_sum_exp(logs);
        let mut prob = log_prob.exp();
        let mut clamped = false;
        if prob > 1.0 {
            if prob > 1.0 + CLAMP_TOLERANCE {
                return Err(Error::Invariant(format!("probability {prob} exceeds one")));
            }
            prob = 1.0;
            log_prob = 0.0;
            clamped = true;
        }
        Ok(Self {
            log_prob,
            prob,
            method,
            terms: logs.len(),
            clamped,
        })
    }
}

impl PoissonModel {
    fn resolve(&self, method: Method) -> Result<MethodTag> {
        let available = self.method();
        let wanted = match method {
            Method::Auto => return Ok(available),
            Method::Enumerate => return Ok(MethodTag::EnumerateOnly),
            Method::SingleIndex => MethodTag::SingleIndex,
            Method::Invertible => MethodTag::Invertible,
        };
        if wanted != available {
            return Err(Error::MethodNotApplicable {
                method: method.name(),
                reason: format!("model is classified {available}"),
            });
        }
        Ok(wanted)
    }

    /// The solution set of `A·k = b` over the reduced model, or `None` when
    /// `b` fails a sign or consistency check.
    pub fn solutions(&self, b: &[i64], method: Method) -> Result<(MethodTag, Option<SolutionFamily>)> {
        let tag = self.resolve(method)?;
        if b.len() != self.rows() {
            return Err(Error::Dimension(format!(
                "observation has {} entries, model has {} rows",
                b.len(),
                self.rows()
            )));
        }
        if b.iter().any(|&x| x < 0) {
            return Ok((tag, None));
        }
        let Some(rb) = self.report.reduce_observation(b) else {
            return Ok((tag, None));
        };
        let family = match (&self.reduction, &self.reduced, tag) {
            (None, _, _) | (_, None, _) => SolutionFamily::Finite(vec![Vec::new()]),
            (Some(Reduction::SingleIndex(s)), _, MethodTag::SingleIndex) => {
                parametrize_single_index(s, &rb)?
            }
            (Some(Reduction::Invertible(inv)), _, MethodTag::Invertible) => {
                solve_invertible(inv, &rb)?
            }
            (_, Some(a), _) => enumerate_solutions(a, &rb)?,
        };
        Ok((tag, Some(family)))
    }

    /// `P(Y = b)` along a chosen path; a forced path that does not apply is
    /// an error.
    pub fn pmf_method(&self, b: &[i64], method: Method) -> Result<PmfResult> {
        let (tag, family) = self.solutions(b, method)?;
        let Some(family) = family else {
            return Ok(PmfResult::zero(tag));
        };
        let logs = family
            .points()?
            .iter()
            .map(|k| log_term(k, &self.reduced_lambda))
            .collect::<Result<Vec<_>>>()?;
        PmfResult::from_log_terms(&logs, tag)
    }
}

/// `P(Y = b)` through whichever path the model qualifies for.
pub fn pmf(model: &PoissonModel, b: &[i64]) -> Result<PmfResult> {
    model.pmf_method(b, Method::Auto)
}

/// Sum over the single parameter of the solution line.
pub fn pmf_single_index(model: &PoissonModel, b: &[i64]) -> Result<PmfResult> {
    model.pmf_method(b, Method::SingleIndex)
}

/// Closed form at `k = A⁻¹·b`.
pub fn pmf_invertible(model: &PoissonModel, b: &[i64]) -> Result<PmfResult> {
    model.pmf_method(b, Method::Invertible)
}

/// Reference evaluation by exhaustive enumeration of `A·k = b`.
pub fn pmf_enumerate(model: &PoissonModel, b: &[i64]) -> Result<PmfResult> {
    model.pmf_method(b, Method::Enumerate)
}

fn check_z(model: &PoissonModel, z: &[f64]) -> Result<()> {
    if z.len() != model.rows() {
        return Err(Error::Dimension(format!(
            "z has {} entries, model has {} rows",
            z.len(),
            model.rows()
        )));
    }
    if let Some((index, &value)) = z
        .iter()
        .enumerate()
        .find(|(_, v)| !(0.0..=1.0).contains(*v))
    {
        return Err(Error::ZOutOfRange { index, value });
    }
    Ok(())
}

fn pow_big(z: f64, e: &BigInt) -> f64 {
    match e.to_i32() {
        Some(e) => z.powi(e),
        None => z.powf(e.to_f64().unwrap_or(f64::INFINITY)),
    }
}

/// Closed form `G(z) = exp(Σ_j λ_j (Π_i z_i^{a_ij} − 1))`, i.e.
/// `E[Π z_i^{Y_i}]` including the `e^{−Σλ}` normalization, so `G(1) = 1`.
/// `0^0` is taken as one.
pub fn gf_eval(model: &PoissonModel, z: &[f64]) -> Result<f64> {
    check_z(model, z)?;
    let a = model.matrix();
    let exponent: f64 = (0..a.cols())
        .map(|j| {
            let monomial: f64 = (0..a.rows()).map(|i| pow_big(z[i], a.get(i, j))).product();
            model.lambda()[j] * (monomial - 1.0)
        })
        .sum();
    Ok(exponent.exp())
}

/// Truncated series `Σ_{b ∈ [0, degree]^m} P(Y = b)·Π_i z_i^{b_i}`.
pub fn gf_eval_series(model: &PoissonModel, z: &[f64], degree: u32) -> Result<f64> {
    check_z(model, z)?;
    let m = model.rows();
    let mut b = vec![0i64; m];
    let mut parts = Vec::new();
    loop {
        let weight: f64 = b.iter().zip(z).map(|(&bi, &zi)| zi.powi(bi as i32)).product();
        if weight != 0.0 {
            let p = pmf(model, &b)?.prob;
            parts.push(p * weight);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == m {
                parts.sort_by(|x, y| y.total_cmp(x));
                return Ok(compensated_sum(&parts));
            }
            if b[i] < i64::from(degree) {
                b[i] += 1;
                break;
            }
            b[i] = 0;
            i += 1;
        }
    }
}
