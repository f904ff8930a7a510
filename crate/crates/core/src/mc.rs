//! Monte Carlo cross-check of [`pmf`](crate::eval::pmf).
//!
//! # Reproducibility
//!
//! Randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `seed_from_u64(seed)`. Every coordinate `i` of `X` draws from its own
//! ChaCha stream, and shard `s` of a sharded run uses the streams
//! `(s << 32) | i`. A single-shard run is therefore the reference, and a run
//! with `S` shards is reproducible given `(seed, S)`. Samples are split over
//! shards in contiguous blocks, the first `n % S` shards taking one extra.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::eval::{ln_factorial, pmf, PoissonModel};

/// Rates below this use sequential-search inversion; at or above it the
/// transformed-rejection sampler takes over.
pub const INVERSION_LIMIT: f64 = 30.0;

/// One Poisson draw.
pub fn sample_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    if lambda <= 0.0 {
        0
    } else if lambda < INVERSION_LIMIT {
        poisson_inversion(lambda, rng)
    } else {
        poisson_ptrs(lambda, rng)
    }
}

fn poisson_inversion<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    let start = (-lambda).exp();
    loop {
        let u: f64 = rng.random();
        let mut k = 0u64;
        let mut p = start;
        let mut cdf = p;
        while u > cdf {
            k += 1;
            p *= lambda / k as f64;
            let next = cdf + p;
            if next == cdf {
                break;
            }
            cdf = next;
        }
        // the cdf stalled just short of u through rounding; redraw
        if u <= cdf {
            return k;
        }
    }
}

/// Hörmann's PTRS transformed rejection with squeeze, exact for `λ >= 10`.
fn poisson_ptrs<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    let slam = lambda.sqrt();
    let loglam = lambda.ln();
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let vr = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.random::<f64>() - 0.5;
        let v: f64 = rng.random();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + lambda + 0.43).floor();
        if us >= 0.07 && v <= vr {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
        let rhs = -lambda + k * loglam - ln_factorial(k as u64);
        if lhs <= rhs {
            return k as u64;
        }
    }
}

/// Per-coordinate ChaCha streams for one shard.
#[derive(Clone, Debug)]
pub struct XSampler {
    lambda: Vec<f64>,
    streams: Vec<ChaCha20Rng>,
}

impl XSampler {
    pub fn new(lambda: &[f64], seed: u64, shard: u32) -> Self {
        let streams = (0..lambda.len())
            .map(|i| {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                rng.set_stream((u64::from(shard) << 32) | i as u64);
                rng
            })
            .collect();
        Self {
            lambda: lambda.to_vec(),
            streams,
        }
    }

    /// One draw of `X`.
    pub fn sample_x(&mut self) -> Vec<u64> {
        self.lambda
            .iter()
            .zip(&mut self.streams)
            .map(|(&l, rng)| sample_poisson(l, rng))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleReport {
    pub b: Vec<i64>,
    pub exact_prob: f64,
    pub empirical_prob: f64,
    pub hits: u64,
    pub n_samples: u64,
    pub z_score: f64,
    pub seed: u64,
    pub shards: u32,
}

fn z_score(exact: f64, empirical: f64, n: u64) -> f64 {
    if exact > 0.0 && exact < 1.0 {
        (empirical - exact) / (exact * (1.0 - exact) / n as f64).sqrt()
    } else if empirical == exact {
        0.0
    } else {
        f64::INFINITY.copysign(empirical - exact)
    }
}

fn count_hits(a: &[Vec<u64>], lambda: &[f64], b: &[i64], n: u64, seed: u64, shard: u32) -> u64 {
    let mut sampler = XSampler::new(lambda, seed, shard);
    let mut hits = 0;
    for _ in 0..n {
        let x = sampler.sample_x();
        let hit = a.iter().zip(b).all(|(row, &bi)| {
            let y: u64 = row.iter().zip(&x).map(|(aij, xj)| aij * xj).sum();
            y as i64 == bi
        });
        hits += u64::from(hit);
    }
    hits
}

/// Samples `X` `n_samples` times on a single shard and compares the
/// frequency of `A·X = b` with the exact probability.
pub fn verify(model: &PoissonModel, b: &[i64], n_samples: u64, seed: u64) -> Result<SampleReport> {
    verify_sharded(model, b, n_samples, seed, 1)
}

/// As [`verify`], with the samples spread over `shards` threads.
pub fn verify_sharded(
    model: &PoissonModel,
    b: &[i64],
    n_samples: u64,
    seed: u64,
    shards: u32,
) -> Result<SampleReport> {
    if n_samples == 0 {
        return Err(Error::Dimension("n_samples must be at least 1".into()));
    }
    if shards == 0 {
        return Err(Error::Dimension("shards must be at least 1".into()));
    }
    let exact = pmf(model, b)?.prob;
    let a: Vec<Vec<u64>> = model
        .matrix()
        .to_i64_rows()?
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as u64).collect())
        .collect();
    let lambda = model.lambda();

    let per = n_samples / u64::from(shards);
    let extra = n_samples % u64::from(shards);
    let hits: u64 = if shards == 1 {
        count_hits(&a, lambda, b, n_samples, seed, 0)
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..shards)
                .map(|s| {
                    let n = per + u64::from(u64::from(s) < extra);
                    let a = &a;
                    scope.spawn(move || count_hits(a, lambda, b, n, seed, s))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("shard panicked")).sum()
        })
    };

    let empirical = hits as f64 / n_samples as f64;
    Ok(SampleReport {
        b: b.to_vec(),
        exact_prob: exact,
        empirical_prob: empirical,
        hits,
        n_samples,
        z_score: z_score(exact, empirical, n_samples),
        seed,
        shards,
    })
}
