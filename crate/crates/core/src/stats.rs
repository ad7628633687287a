//! Concentration checks on neighborhood counts and rank-trend tests.

use std::collections::BTreeMap;

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Hypergeometric};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::grid::{threshold_count, GridConfig, GridState};
use crate::rng::{self, SimRng};
use crate::theory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestId {
    Prop1,
    #[serde(rename = "lemmaA1")]
    LemmaA1,
    PuMatch,
    Fig2Trend,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatTestReport {
    pub test_id: TestId,
    pub parameters: BTreeMap<String, f64>,
    pub sample_size: u64,
    pub pass_floor: f64,
    pub pass: bool,
    pub statistics: BTreeMap<String, f64>,
    pub note: Option<String>,
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Number of `-1` agents among `len` fair coins, and among the first `sub` of them.
fn coin_counts(rng: &mut SimRng, len: usize, sub: usize) -> (u32, u32) {
    let (mut all, mut first) = (0, 0);
    let mut i = 0;
    while i < len {
        let take = (len - i).min(64);
        let word = rng.next_u64() & (u64::MAX >> (64 - take));
        let ones = word.count_ones();
        all += ones;
        if i + take <= sub {
            first += ones;
        } else if i < sub {
            first += (word & (u64::MAX >> (64 - (sub - i)))).count_ones();
        }
        i += take;
    }
    (all, first)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Conditioning {
    /// Draw whole neighborhoods and keep those with `W < tau N`; fails
    /// when fewer than `samples` are accepted within `max_draws`.
    Rejection { max_draws: u64 },
    /// `W` from the binomial law truncated to `W < tau N`, then `W'` from
    /// the hypergeometric law of a `gamma N` subset given `W`.
    Exact,
}

/// Frequency of `|W' - gamma tau N| < c N^{1/2+eps}` given `W < tau N`,
/// where `W` counts `-1` agents in a fair-coin neighborhood of size `N`
/// and `W'` those in a fixed sub-neighborhood of size `floor(gamma N)`.
#[allow(clippy::too_many_arguments)]
pub fn prop1_test(
    big_n: usize,
    gamma: f64,
    tau_tilde: f64,
    c: f64,
    eps: f64,
    samples: u64,
    seed: u64,
    conditioning: Conditioning,
    floor: f64,
) -> Result<StatTestReport> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Domain(format!("gamma = {gamma} outside (0, 1]")));
    }
    let k = threshold_count(tau_tilde, big_n);
    let tau = k as f64 / big_n as f64;
    let sub = (gamma * big_n as f64).floor() as usize;
    let bound = c * (big_n as f64).powf(0.5 + eps);
    let centre = gamma * tau * big_n as f64;
    let mut rng = rng::stream_rng(seed, rng::MEASURE_STREAM);
    let mut hits = 0u64;
    let mut draws = 0u64;
    let mut accepted = 0u64;
    match conditioning {
        Conditioning::Rejection { max_draws } => {
            while accepted < samples {
                if draws >= max_draws {
                    return Err(Error::Domain(format!(
                        "conditioning event W < {k} too rare: {accepted} of {samples} samples in {draws} draws"
                    )));
                }
                draws += 1;
                let (w_all, w_sub) = coin_counts(&mut rng, big_n, sub);
                if (w_all as usize) < k {
                    accepted += 1;
                    hits += ((w_sub as f64 - centre).abs() < bound) as u64;
                }
            }
        }
        Conditioning::Exact => {
            // inverse CDF over j < K with weights C(N, j) / 2^N
            let ln_total = theory::ln_binomial_cdf_half(big_n as u64, k as i64 - 1);
            if ln_total == f64::NEG_INFINITY {
                return Err(Error::Domain(format!("conditioning event W < {k} is empty")));
            }
            let pmf: Vec<f64> = (0..k)
                .map(|j| {
                    let lo = theory::ln_binomial_cdf_half(big_n as u64, j as i64 - 1);
                    let hi = theory::ln_binomial_cdf_half(big_n as u64, j as i64);
                    (hi - ln_total).exp() - (lo - ln_total).exp()
                })
                .collect();
            let cdf: Vec<f64> = pmf
                .iter()
                .scan(0.0, |acc, p| {
                    *acc += p;
                    Some(*acc)
                })
                .collect();
            while accepted < samples {
                draws += 1;
                let u: f64 = rng.random::<f64>() * cdf[k - 1];
                let w_all = cdf.partition_point(|&x| x < u).min(k - 1);
                let w_sub = Hypergeometric::new(big_n as u64, w_all as u64, sub as u64)
                    .map_err(|e| Error::Domain(e.to_string()))?
                    .sample(&mut rng);
                accepted += 1;
                hits += ((w_sub as f64 - centre).abs() < bound) as u64;
            }
        }
    }
    let freq = hits as f64 / accepted as f64;
    let tail = 1.0 - freq;
    let scale = (big_n as f64).powf(2.0 * eps);
    let mut statistics = params(&[
        ("frequency", freq),
        ("bound", bound),
        ("K", k as f64),
        ("sub_size", sub as f64),
        ("draws", draws as f64),
    ]);
    if tail > 0.0 {
        statistics.insert("fitted_c_prime".into(), -tail.ln() / scale);
    }
    Ok(StatTestReport {
        test_id: TestId::Prop1,
        parameters: params(&[("N", big_n as f64), ("gamma", gamma), ("tau_tilde", tau_tilde), ("c", c), ("eps", eps)]),
        sample_size: accepted,
        pass_floor: floor,
        pass: freq >= floor,
        statistics,
        note: Some(match conditioning {
            Conditioning::Rejection { .. } => "rejection sampling".into(),
            Conditioning::Exact => "exact conditional sampling".into(),
        }),
    })
}

/// Frequency of `|W - N/2| < c N^{1/2+eps}` for fair-coin neighborhoods,
/// with the `c'` for which the empirical tail equals `2 e^{-c' N^{2 eps}}`.
pub fn lemma_a1_test(big_n: usize, c: f64, eps: f64, samples: u64, seed: u64, floor: f64) -> StatTestReport {
    let bound = c * (big_n as f64).powf(0.5 + eps);
    let half = big_n as f64 / 2.0;
    let mut rng = rng::stream_rng(seed, rng::MEASURE_STREAM);
    let hits = (0..samples)
        .filter(|_| ((coin_counts(&mut rng, big_n, 0).0 as f64) - half).abs() < bound)
        .count() as u64;
    let freq = hits as f64 / samples as f64;
    let tail = 1.0 - freq;
    let scale = (big_n as f64).powf(2.0 * eps);
    let mut statistics = params(&[("frequency", freq), ("bound", bound)]);
    if tail > 0.0 {
        let c_prime = -(tail / 2.0).ln() / scale;
        statistics.insert("fitted_c_prime".into(), c_prime);
        statistics.insert("tail_bound_at_fit".into(), 2.0 * (-c_prime * scale).exp());
    }
    statistics.insert("empirical_tail".into(), tail);
    StatTestReport {
        test_id: TestId::LemmaA1,
        parameters: params(&[("N", big_n as f64), ("c", c), ("eps", eps)]),
        sample_size: samples,
        pass_floor: floor,
        pass: freq >= floor,
        statistics,
        note: None,
    }
}

/// Initial unhappy fraction of one random grid against the exact
/// probability; passes within `sigmas` binomial standard errors.
pub fn pu_match_test(n: usize, w: usize, tau_tilde: f64, seed: u64, sigmas: f64) -> Result<StatTestReport> {
    let cfg = GridConfig::new_unchecked_size(n, w, tau_tilde, 0.5, seed)?;
    let state = GridState::new_random(cfg)?;
    let cells = (n * n) as f64;
    let frac = state.unhappy_count() as f64 / cells;
    let p = theory::p_unhappy_exact(state.neighborhood_size(), state.k())?;
    let sigma = (p * (1.0 - p) / cells).sqrt();
    let z = (frac - p) / sigma;
    Ok(StatTestReport {
        test_id: TestId::PuMatch,
        parameters: params(&[("n", n as f64), ("w", w as f64), ("tau_tilde", tau_tilde), ("seed", seed as f64)]),
        sample_size: (n * n) as u64,
        pass_floor: sigmas,
        pass: z.abs() <= sigmas,
        statistics: params(&[("empirical", frac), ("exact", p), ("sigma", sigma), ("z", z)]),
        note: Some("agents of one grid are weakly dependent; sigma is the i.i.d. binomial value".into()),
    })
}

/// Average ranks, ties sharing the mean rank.
pub fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = r;
        }
        i = j + 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spearman {
    pub rho: f64,
    pub n: usize,
    /// One-sided p-values from the t approximation with `n - 2` degrees of freedom.
    pub p_increasing: f64,
    pub p_decreasing: f64,
}

pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<Spearman> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::Domain("spearman needs two samples of equal length >= 3".into()));
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let sxy: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    let rho = if sxx == 0.0 || syy == 0.0 { 0.0 } else { sxy / (sxx * syy).sqrt() };
    let df = n - 2.0;
    let t_dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::Domain(e.to_string()))?;
    let (p_inc, p_dec) = if rho >= 1.0 {
        (0.0, 1.0)
    } else if rho <= -1.0 {
        (1.0, 0.0)
    } else {
        let t = rho * (df / (1.0 - rho * rho)).sqrt();
        (1.0 - t_dist.cdf(t), t_dist.cdf(t))
    };
    Ok(Spearman { rho, n: xs.len(), p_increasing: p_inc, p_decreasing: p_dec })
}

/// Trend check on `(tau_tilde, M)` pairs: passes unless `M` increases
/// with `tau_tilde` at the given significance.
pub fn fig2_trend_test(tau: &[f64], m: &[f64], alpha: f64) -> Result<StatTestReport> {
    let s = spearman(tau, m)?;
    Ok(StatTestReport {
        test_id: TestId::Fig2Trend,
        parameters: params(&[("alpha", alpha), ("pairs", tau.len() as f64)]),
        sample_size: tau.len() as u64,
        pass_floor: alpha,
        pass: s.p_increasing >= alpha,
        statistics: params(&[("rho", s.rho), ("p_increasing", s.p_increasing), ("p_decreasing", s.p_decreasing)]),
        note: Some("non-increasing: no significant positive rank correlation".into()),
    })
}
