//! Closed-form quantities: entropy, thresholds, exponents and exact
//! finite-N probabilities for the initial Bernoulli(1/2) configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::threshold_count;

/// Half-up rounding used for every non-integer radius.
pub fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor().max(0.0) as usize
}

/// Horizon `w` with `(2w+1)^2 = N`, if `N` is such a square.
pub fn horizon_of(big_n: usize) -> Option<usize> {
    let s = (big_n as f64).sqrt().round() as usize;
    (s * s == big_n && s % 2 == 1).then_some((s - 1) / 2)
}

/// Binary entropy in bits, `H(0) = H(1) = 0`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("entropy argument {x} outside [0,1]")));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(x) + term(1.0 - x))
}

/// `[3(t-1/2) + sqrt(9(t-1/2)^2 - 7(t-1/2)(3t+1/2))] / (2(3t+1/2))`, the
/// smallest admissible `eps'`.
pub fn f_tau(tau: f64) -> Result<f64> {
    let x = tau - 0.5;
    let y = 3.0 * tau + 0.5;
    let disc = 9.0 * x * x - 7.0 * x * y;
    if disc < 0.0 || y <= 0.0 {
        return Err(Error::Domain(format!("f(tau) undefined at tau = {tau}")));
    }
    Ok((3.0 * x + disc.sqrt()) / (2.0 * y))
}

/// `3/4 [1 - H(4t/3)] - [1 - H(t)]`.
pub fn tau1_residual(tau: f64) -> Result<f64> {
    Ok(0.75 * (1.0 - entropy(4.0 * tau / 3.0)?) - (1.0 - entropy(tau)?))
}

/// Root of [`tau1_residual`] in `(3/8, 1/2)` by bisection.
pub fn tau1() -> f64 {
    let (mut lo, mut hi) = (0.375, 0.5);
    let r = |t: f64| tau1_residual(t).expect("inside domain");
    debug_assert!(r(lo) < 0.0 && r(hi) > 0.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if r(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Larger root of `1024 t^2 - 384 t + 11`, i.e. `(384 + sqrt(102400)) / 2048`.
pub fn tau2() -> f64 {
    let disc: f64 = 384.0 * 384.0 - 4.0 * 1024.0 * 11.0;
    (384.0 + disc.sqrt()) / 2048.0
}

/// `(tau N - 2) / (N - 1)` with `tau = K/N`.
pub fn tau_prime(big_n: usize, k: usize) -> f64 {
    (k as f64 - 2.0) / (big_n as f64 - 1.0)
}

/// `tau (1 - 1/(tau N^{1/2 - eps}))`.
pub fn tau_hat(tau: f64, big_n: usize, eps: f64) -> f64 {
    tau * (1.0 - 1.0 / (tau * (big_n as f64).powf(0.5 - eps)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub tau: f64,
    pub tau_prime: f64,
    pub eps_prime: f64,
    pub a: f64,
    pub b: f64,
}

/// `a = [1 - (2e' + e'^2)][1 - H(t')]` and `b = 3/2 (1+e')^2 [1 - H(t')]`
/// with `e' = f(tau) + slack`. With `big_n`, `tau` is replaced by
/// `K/N` and `t' = (K-2)/(N-1)`; otherwise `t' = tau`.
pub fn exponents(tau: f64, big_n: Option<usize>, slack: f64) -> Result<Exponents> {
    if !(tau > tau2() && tau <= 0.5) {
        return Err(Error::Domain(format!("tau = {tau} outside (tau2, 1/2]")));
    }
    let (tau, tp) = match big_n {
        Some(n) => {
            let k = threshold_count(tau, n);
            (k as f64 / n as f64, tau_prime(n, k))
        }
        None => (tau, tau),
    };
    let eps_prime = f_tau(tau)? + slack;
    let gap = 1.0 - entropy(tp.clamp(0.0, 1.0))?;
    Ok(Exponents {
        tau,
        tau_prime: tp,
        eps_prime,
        a: (1.0 - (2.0 * eps_prime + eps_prime * eps_prime)) * gap,
        b: 1.5 * (1.0 + eps_prime).powi(2) * gap,
    })
}

pub fn a_tau(tau: f64, big_n: Option<usize>) -> Result<f64> {
    Ok(exponents(tau, big_n, 0.0)?.a)
}

pub fn b_tau(tau: f64, big_n: Option<usize>) -> Result<f64> {
    Ok(exponents(tau, big_n, 0.0)?.b)
}

fn ln_choose(m: u64, k: u64) -> f64 {
    let k = k.min(m - k);
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    for i in 1..=k {
        let y = (((m - k + i) as f64) / i as f64).ln() - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    acc
}

/// `ln P(Bin(m, 1/2) <= t)`.
pub fn ln_binomial_cdf_half(m: u64, t: i64) -> f64 {
    if t < 0 {
        return f64::NEG_INFINITY;
    }
    let t = t as u64;
    if t >= m {
        return 0.0;
    }
    if 2 * t >= m {
        // upper part: 1 - P(X <= m - t - 1)
        return (-ln_binomial_cdf_half(m, (m - t - 1) as i64).exp()).ln_1p();
    }
    // terms increase up to t; sum ratios downward from the largest
    let mut s = 1.0f64;
    let mut r = 1.0f64;
    let mut j = t;
    while j >= 1 {
        r *= j as f64 / (m - j + 1) as f64;
        s += r;
        if r < 1e-18 * s {
            break;
        }
        j -= 1;
    }
    ln_choose(m, t) - m as f64 * std::f64::consts::LN_2 + s.ln()
}

pub fn binomial_cdf_half(m: u64, t: i64) -> f64 {
    ln_binomial_cdf_half(m, t).exp()
}

/// Probability that an agent is unhappy in the initial fair-coin
/// configuration: `P(X <= K - 2)`, `X ~ Bin(N-1, 1/2)` counting same-type
/// others.
pub fn p_unhappy_exact(big_n: usize, k: usize) -> Result<f64> {
    Ok(ln_p_unhappy_exact(big_n, k)?.exp())
}

pub fn ln_p_unhappy_exact(big_n: usize, k: usize) -> Result<f64> {
    if k < 1 || k > big_n {
        return Err(Error::Domain(format!("K = {k} outside [1, N = {big_n}]")));
    }
    Ok(ln_binomial_cdf_half(big_n as u64 - 1, k as i64 - 2))
}

/// `2^{-[1 - H(t')] N} / sqrt(N)`: the rate shared by the two-sided bounds
/// on the unhappy probability (constants left out).
pub fn p_unhappy_scale(big_n: usize, k: usize) -> f64 {
    let tp = tau_prime(big_n, k).clamp(0.0, 1.0);
    let gap = 1.0 - entropy(tp).unwrap();
    (-gap * big_n as f64).exp2() / (big_n as f64).sqrt()
}

/// Geometry and threshold of a radical region around one center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadicalGeometry {
    pub w: usize,
    pub radius: usize,
    pub area: usize,
    pub unhappy_radius: usize,
    pub tau_hat: f64,
    /// The region is radical iff its `-1` count is strictly below this.
    pub threshold: i64,
    /// `floor(tau eps'^2 N - N^{1/2+eps})`, the unhappy-region bound.
    pub unhappy_bound: i64,
}

pub fn radical_geometry(w: usize, k: usize, eps_prime: f64, eps: f64) -> Result<RadicalGeometry> {
    if eps_prime.is_nan() || eps_prime <= 0.0 || eps.is_nan() || eps <= 0.0 || eps >= 0.5 {
        return Err(Error::Domain(format!("eps' = {eps_prime}, eps = {eps}")));
    }
    let big_n = (2 * w + 1) * (2 * w + 1);
    let nf = big_n as f64;
    let tau = k as f64 / nf;
    let th = tau_hat(tau, big_n, eps);
    let radius = round_half_up((1.0 + eps_prime) * w as f64);
    Ok(RadicalGeometry {
        w,
        radius,
        area: (2 * radius + 1) * (2 * radius + 1),
        unhappy_radius: round_half_up(eps_prime * w as f64),
        tau_hat: th,
        threshold: (th * (1.0 + eps_prime).powi(2) * nf).floor() as i64,
        unhappy_bound: (tau * eps_prime * eps_prime * nf - nf.powf(0.5 + eps)).floor() as i64,
    })
}

/// Probability that a fixed center is radical in the initial fair-coin
/// configuration: `P(Bin(area, 1/2) < threshold)` over the rasterized square.
pub fn p_radical_exact(big_n: usize, k: usize, eps_prime: f64, eps: f64) -> Result<f64> {
    let w = horizon_of(big_n).ok_or_else(|| Error::Domain(format!("N = {big_n} is not (2w+1)^2")))?;
    let g = radical_geometry(w, k, eps_prime, eps)?;
    Ok(binomial_cdf_half(g.area as u64, g.threshold - 1))
}

/// Threshold for `tau_tilde > 1/2` in terms of the opposite type:
/// `K_bar = N - K + 2` and `tau_bar = 1 - tau + 2/N = K_bar / N`.
pub fn bar_tau(tau_tilde: f64, big_n: usize) -> Result<(usize, f64)> {
    if !(tau_tilde > 0.5 && tau_tilde < 1.0 - tau2()) {
        return Err(Error::Domain(format!("tau_tilde = {tau_tilde} outside (1/2, 1 - tau2)")));
    }
    let k = threshold_count(tau_tilde, big_n);
    let kb = big_n - k + 2;
    Ok((kb, kb as f64 / big_n as f64))
}

/// `[1 - 1/4 - (1/4 + 1/2 - z) v - 1/4 (1/8 - v)] / 2 - tau` with
/// `z = (3 - 8 tau)/2` and `v = (16 tau - 5)/6`.
pub fn spread_inequality_residual(tau: f64) -> f64 {
    let z = (3.0 - 8.0 * tau) / 2.0;
    let v = (16.0 * tau - 5.0) / 6.0;
    (1.0 - 0.25 - (0.75 - z) * v - 0.25 * (0.125 - v)) * 0.5 - tau
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadParams {
    pub zeta: f64,
    pub nu: f64,
    pub residual: f64,
}

pub fn spread_params(tau: f64) -> Result<SpreadParams> {
    if !(tau > tau2() && tau <= 0.375) {
        return Err(Error::Domain(format!("tau = {tau} outside (tau2, 3/8]")));
    }
    Ok(SpreadParams {
        zeta: (3.0 - 8.0 * tau) / 2.0,
        nu: (16.0 * tau - 5.0) / 6.0,
        residual: spread_inequality_residual(tau),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryPoint {
    pub tau_tilde: f64,
    #[serde(rename = "N")]
    pub big_n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub tau: f64,
    pub tau_prime: f64,
    pub eps: f64,
    pub eps_prime: f64,
    pub tau_hat: f64,
    pub bar_tau: Option<f64>,
    pub f_tau: Option<f64>,
    pub a_tau: Option<f64>,
    pub b_tau: Option<f64>,
    pub p_unhappy_exact: f64,
    pub p_unhappy_scale: f64,
    pub p_radical_exact: f64,
}

/// All quantities at one `(tau_tilde, w)`; `eps_prime` defaults to
/// `f(tau)` when in range.
pub fn theory_point(tau_tilde: f64, w: usize, eps: f64, eps_prime: Option<f64>) -> Result<TheoryPoint> {
    let big_n = (2 * w + 1) * (2 * w + 1);
    let k = threshold_count(tau_tilde, big_n);
    let tau = k as f64 / big_n as f64;
    let f = f_tau(tau).ok().filter(|v| *v > 0.0);
    let eps_prime = eps_prime.or(f).ok_or_else(|| Error::Domain("eps' required outside (tau2, 1/2)".into()))?;
    let ex = exponents(tau, None, 0.0).ok();
    Ok(TheoryPoint {
        tau_tilde,
        big_n,
        k,
        tau,
        tau_prime: tau_prime(big_n, k),
        eps,
        eps_prime,
        tau_hat: tau_hat(tau, big_n, eps),
        bar_tau: bar_tau(tau_tilde, big_n).ok().map(|b| b.1),
        f_tau: f,
        a_tau: ex.map(|e| e.a),
        b_tau: ex.map(|e| e.b),
        p_unhappy_exact: p_unhappy_exact(big_n, k.max(1))?,
        p_unhappy_scale: p_unhappy_scale(big_n, k.max(1)),
        p_radical_exact: p_radical_exact(big_n, k, eps_prime, eps)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    F,
    A,
    B,
    Pu,
    Pradical,
}

impl std::str::FromStr for Curve {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f" => Ok(Curve::F),
            "a" => Ok(Curve::A),
            "b" => Ok(Curve::B),
            "pu" => Ok(Curve::Pu),
            "pradical" => Ok(Curve::Pradical),
            _ => Err(Error::InvalidConfig(format!("unknown curve {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub tau: f64,
    pub value: f64,
    pub finite_n_value: f64,
}

/// Inclusive grid `from, from + step, ...` up to `to` (with 1e-9 slack),
/// snapped to 10 decimals so printed values stay clean.
pub fn tau_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || to < from {
        return Err(Error::InvalidConfig(format!("bad tau grid {from}..{to} step {step}")));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| ((from + i as f64 * step) * 1e10).round() / 1e10).collect())
}

/// One point per `tau`. For `f`, `a`, `b` the value is the limit and the
/// finite-N value uses `tau = K/N` (NaN when `K/N` leaves the domain). For `pu` and `pradical` both columns
/// are exponent rates: `value` is the limit `-log2(p)/N` (`1 - H(tau)` and
/// `(1+eps')^2 [1 - H(tau)]`), `finite_n_value` the exact `-log2(p)/N`.
pub fn curve(kind: Curve, taus: &[f64], w: usize, eps: f64, slack: f64) -> Result<Vec<CurvePoint>> {
    let big_n = (2 * w + 1) * (2 * w + 1);
    let nf = big_n as f64;
    taus.iter()
        .map(|&tau| {
            let k = threshold_count(tau, big_n).max(1);
            let tau_n = k as f64 / nf;
            let (value, finite_n_value) = match kind {
                Curve::F => (f_tau(tau)?, f_tau(tau_n).unwrap_or(f64::NAN)),
                Curve::A => (exponents(tau, None, slack)?.a, exponents(tau, Some(big_n), slack).map_or(f64::NAN, |e| e.a)),
                Curve::B => (exponents(tau, None, slack)?.b, exponents(tau, Some(big_n), slack).map_or(f64::NAN, |e| e.b)),
                Curve::Pu => {
                    let limit = 1.0 - entropy(tau)?;
                    (limit, -ln_p_unhappy_exact(big_n, k)? / std::f64::consts::LN_2 / nf)
                }
                Curve::Pradical => {
                    let ep = f_tau(tau)? + slack;
                    let limit = (1.0 + ep).powi(2) * (1.0 - entropy(tau)?);
                    let g = radical_geometry(w, k, ep, eps)?;
                    let lp = ln_binomial_cdf_half(g.area as u64, g.threshold - 1);
                    (limit, -lp / std::f64::consts::LN_2 / nf)
                }
            };
            Ok(CurvePoint { tau, value, finite_n_value })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_traits::{One, ToPrimitive, Zero};
    use proptest::prelude::*;

    /// Exact `P(Bin(m, 1/2) <= t)` as a ratio of big integers.
    fn exact_cdf(m: u64, t: i64) -> f64 {
        if t < 0 {
            return 0.0;
        }
        let mut c = BigUint::one();
        let mut sum = BigUint::zero();
        for j in 0..=(t as u64).min(m) {
            if j > 0 {
                c = c * (m - j + 1) / j;
            }
            sum += &c;
        }
        let bits = sum.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (sum >> shift as u64).to_f64().unwrap();
        top * 2f64.powi((shift - m as i64) as i32)
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(0.5).unwrap(), 1.0);
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        assert!((entropy(0.25).unwrap() - 0.811_278_124_459_132_9).abs() < 1e-12);
        assert!(entropy(1.5).is_err());
    }

    #[test]
    fn f_values() {
        assert_eq!(f_tau(0.5).unwrap(), 0.0);
        assert!((f_tau(11.0 / 32.0).unwrap() - 0.29638).abs() < 5e-6);
        assert!((f_tau(0.45).unwrap() - 0.18069).abs() < 5e-6);
        for i in 1..100 {
            let t = tau2() + (0.5 - tau2()) * i as f64 / 100.0;
            let v = f_tau(t).unwrap();
            assert!((0.0..0.5).contains(&v), "f({t}) = {v}");
        }
    }

    #[test]
    fn thresholds() {
        assert_eq!(tau2(), 11.0 / 32.0);
        // exact rational check: 1024 (11/32)^2 - 384 (11/32) + 11 = 0
        assert_eq!(1024 * 11 * 11 - 384 * 11 * 32 + 11 * 32 * 32, 0);
        assert_eq!(1024 - 384 * 32 + 11 * 32 * 32, 0);
        let t1 = tau1();
        assert!((t1 - 0.433).abs() < 1e-3);
        assert!(tau1_residual(t1).unwrap().abs() < 1e-9);
    }

    #[test]
    fn exponent_values() {
        assert!((a_tau(0.433, None).unwrap() - 0.00709).abs() < 2e-5);
        assert!(a_tau(0.5, None).unwrap().abs() < 1e-15);
        assert!(b_tau(0.5, None).unwrap().abs() < 1e-15);
        assert!(a_tau(0.3, None).is_err());
        let mut prev = (f64::INFINITY, f64::INFINITY);
        let mut t = tau2() + 0.005;
        while t < 0.495 + 1e-12 {
            let (a, b) = (a_tau(t, None).unwrap(), b_tau(t, None).unwrap());
            assert!(a < prev.0 && b < prev.1, "not decreasing at {t}");
            assert!(a <= b);
            prev = (a, b);
            t += 0.005;
        }
        let e = exponents(0.45, None, 0.05).unwrap();
        assert!((e.eps_prime - f_tau(0.45).unwrap() - 0.05).abs() < 1e-15);
    }

    #[test]
    fn unhappy_probability() {
        assert_eq!(p_unhappy_exact(9, 1).unwrap(), 0.0);
        assert!((p_unhappy_exact(9, 5).unwrap() - 93.0 / 256.0).abs() < 1e-15);
        for w in 1..=15usize {
            let n = (2 * w + 1) * (2 * w + 1);
            for tau in [0.3, 0.42, 0.45, 0.5, 0.6] {
                let k = threshold_count(tau, n);
                let got = p_unhappy_exact(n, k).unwrap();
                assert!(close(got, exact_cdf(n as u64 - 1, k as i64 - 2), 1e-12), "w={w} tau={tau}");
            }
        }
        assert!(p_unhappy_exact(9, 0).is_err());
    }

    #[test]
    fn unhappy_rate_ratio_is_stable() {
        for tau in [0.4, 0.45] {
            let ratios: Vec<f64> = (3..=15usize)
                .map(|w| {
                    let n = (2 * w + 1) * (2 * w + 1);
                    let k = threshold_count(tau, n);
                    p_unhappy_exact(n, k).unwrap() / p_unhappy_scale(n, k)
                })
                .collect();
            let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ratios.iter().cloned().fold(0.0, f64::max);
            assert!(lo > 0.0 && hi / lo < 4.0, "tau={tau} ratios {ratios:?}");
        }
    }

    #[test]
    fn radical_probability() {
        let g = radical_geometry(10, threshold_count(0.45, 441), 0.35, 0.1).unwrap();
        assert_eq!(g.radius, 14);
        let got = p_radical_exact(441, threshold_count(0.45, 441), 0.35, 0.1).unwrap();
        let want = exact_cdf(g.area as u64, g.threshold - 1);
        assert!((got - want).abs() < 1e-10 && close(got, want, 1e-10));
        assert_eq!(binomial_cdf_half(50, -1), 0.0);
        assert_eq!(binomial_cdf_half(50, 50), 1.0);
        assert!(p_radical_exact(440, 200, 0.3, 0.1).is_err());
    }

    #[test]
    fn bar_tau_and_spread() {
        let (kb, tb) = bar_tau(0.6, 441).unwrap();
        assert_eq!(kb, 178);
        assert_eq!(tb, 178.0 / 441.0);
        let sp = spread_params(0.375).unwrap();
        assert_eq!(sp.zeta, 0.0);
        assert!((sp.nu - 1.0 / 6.0).abs() < 1e-15);
        assert!(spread_inequality_residual(11.0 / 32.0).abs() < 1e-15);
        let below = spread_inequality_residual(11.0 / 32.0 - 1e-3);
        let above = spread_inequality_residual(11.0 / 32.0 + 1e-3);
        assert!(below * above < 0.0);
        assert!(spread_params(0.3).is_err());
        assert!(bar_tau(0.45, 441).is_err());
    }

    #[test]
    fn eligibility_matches_bar_tau() {
        // a -1 agent with W agents of type -1 (itself included) is eligible
        // iff W < K and N - W + 1 >= K; super-unhappy iff W < tau_bar N
        for w in 1..=6usize {
            let n = (2 * w + 1) * (2 * w + 1);
            for tau in [0.52, 0.55, 0.6, 0.65] {
                let k = threshold_count(tau, n);
                let (kb, tb) = bar_tau(tau, n).unwrap();
                assert_eq!(kb as f64, (tb * n as f64).round());
                for big_w in 1..=n {
                    let eligible = big_w < k && n - big_w + 1 >= k;
                    let super_unhappy = big_w < kb;
                    assert_eq!(eligible, super_unhappy && big_w < k);
                    if 2 * k >= n + 2 {
                        assert_eq!(eligible, super_unhappy, "w={w} tau={tau} W={big_w}");
                    }
                }
            }
        }
    }

    #[test]
    fn curves() {
        let taus = tau_grid(0.35, 0.5, 0.005).unwrap();
        assert_eq!(taus.len(), 31);
        let f = curve(Curve::F, &taus, 10, 0.1, 0.0).unwrap();
        assert_eq!(f.last().unwrap().value, 0.0);
        let pu = curve(Curve::Pu, &taus, 10, 0.1, 0.0).unwrap();
        assert!(pu.iter().all(|p| p.finite_n_value >= 0.0));
        assert!("x".parse::<Curve>().is_err());
    }

    proptest! {
        #[test]
        fn entropy_symmetric(x in 0.0f64..=1.0) {
            prop_assert!((entropy(x).unwrap() - entropy(1.0 - x).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn cdf_matches_big_integers(m in 1u64..600, t in -2i64..600) {
            let got = binomial_cdf_half(m, t);
            let want = exact_cdf(m, t.min(m as i64));
            prop_assert!((got - want).abs() <= 1e-12 * want.max(1e-300) || (got - want).abs() < 1e-15);
        }
    }
}
