//! Exact sampling of the full ordered GUE(n) spectrum.
//!
//! The Vandermonde factor is bounded by pairing the outermost coordinates
//! `(x_j, x_{n+1-j})` and applying AM-GM to everything nested between them:
//!
//! ```text
//! prod_{i<j} (x_j - x_i)^2 <= 2^{2 floor(n/2) - 2 C(n,2)} prod_{j < (n+1)/2} (x_{n+1-j} - x_j)^{4n - 8j + 2}
//! ```
//!
//! Times the Gaussian weight, the right side is a product of independent
//! bivariate densities `(y - x)^p e^{-(x^2 + y^2)/2}`, each sampled exactly as
//! `((Z - W)/2, (Z + W)/2)` with `Z = sqrt(2) N` and `W = 2 sqrt(Gamma((p+1)/2))`.
//! For odd `n` the middle coordinate only carries the Gaussian weight.
//!
//! The Gaussian beta-ensemble `prod |x_j - x_i|^beta e^{-(beta/4) sum x^2}` is
//! handled by raising the bound to the power `beta/2` and drawing every
//! coordinate on the scale `sqrt(2/beta)`.

use std::f64::consts::{LN_2, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RandomStream;

pub const DEFAULT_MAX_ATTEMPTS: u64 = 10_000_000;
pub const PROGRESS_EVERY: u64 = 100_000;

/// `p_j = 4n - 8j + 2` for pair `j` in `1..=n/2`.
pub fn pair_exponent(n: usize, j: usize) -> f64 {
    (4 * n + 2 - 8 * j) as f64
}

/// A candidate spectrum from the product density, not yet order-checked.
#[derive(Clone, Debug, PartialEq)]
pub struct JointProposal {
    pub n: usize,
    pub beta: f64,
    /// `values[j-1]` and `values[n-j]` hold pair `j`.
    pub values: Vec<f64>,
    /// Exponent of the gap of each pair, `p_j beta / 2`.
    pub pair_exponents: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointSample {
    pub n: usize,
    pub beta: f64,
    /// Strictly increasing.
    pub values: Vec<f64>,
    /// Proposals consumed, including the accepted one.
    pub attempts: u64,
}

/// One pair with joint density proportional to `(y - x)^p e^{-x^2/2 - y^2/2}`
/// on `y > x`.
pub fn pair_transform(p: f64, stream: &mut RandomStream) -> Result<(f64, f64)> {
    if !(p >= 0.0) {
        return Err(Error::param(format!("pair exponent must be nonnegative, got {p}")));
    }
    let z = SQRT_2 * stream.standard_normal();
    let w = 2.0 * stream.gamma(0.5 * (p + 1.0))?.sqrt();
    Ok((0.5 * (z - w), 0.5 * (z + w)))
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::param(format!("joint sampling needs n >= 2, got {n}")));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::param(format!("beta must be positive and finite, got {beta}")));
    }
    Ok(())
}

/// GUE proposal, written out for `beta = 2`.
pub fn propose(n: usize, stream: &mut RandomStream) -> Result<JointProposal> {
    check_n(n)?;
    let mut values = vec![0.0; n];
    let mut pair_exponents = Vec::with_capacity(n / 2);
    for j in 1..=n / 2 {
        let p = pair_exponent(n, j);
        let z = SQRT_2 * stream.standard_normal();
        let w = 2.0 * stream.gamma(0.5 * (p + 1.0))?.sqrt();
        values[n - j] = 0.5 * (z + w);
        values[j - 1] = 0.5 * (z - w);
        pair_exponents.push(p);
    }
    if n % 2 == 1 {
        values[n / 2] = stream.standard_normal();
    }
    Ok(JointProposal { n, beta: 2.0, values, pair_exponents })
}

/// Proposal for the Gaussian beta-ensemble.
pub fn propose_beta(n: usize, beta: f64, stream: &mut RandomStream) -> Result<JointProposal> {
    check_n(n)?;
    check_beta(beta)?;
    let scale = (2.0 / beta).sqrt();
    let mut values = vec![0.0; n];
    let mut pair_exponents = Vec::with_capacity(n / 2);
    for j in 1..=n / 2 {
        let p = pair_exponent(n, j) * (0.5 * beta);
        let z = SQRT_2 * stream.standard_normal() * scale;
        let w = 2.0 * stream.gamma(0.5 * (p + 1.0))?.sqrt() * scale;
        values[n - j] = 0.5 * (z + w);
        values[j - 1] = 0.5 * (z - w);
        pair_exponents.push(p);
    }
    if n % 2 == 1 {
        values[n / 2] = stream.standard_normal() * scale;
    }
    Ok(JointProposal { n, beta, values, pair_exponents })
}

fn strictly_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] < w[1])
}

/// `sum_{i<j} ln(x_j - x_i)` for increasing `values`.
pub fn log_vandermonde(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (i, &xi) in values.iter().enumerate() {
        for &xj in &values[i + 1..] {
            sum += (xj - xi).ln();
        }
    }
    sum
}

/// `ln` of the constant `2^{2 floor(n/2) - 2 C(n,2)}`.
fn log_bound_constant(n: usize) -> f64 {
    let pairs = (n * (n - 1) / 2) as f64;
    (2.0 * (n / 2) as f64 - 2.0 * pairs) * LN_2
}

/// Log of the dominating function at the proposal, for any `beta`.
pub fn log_bound(proposal: &JointProposal) -> f64 {
    let n = proposal.n;
    let mut sum = 0.5 * proposal.beta * log_bound_constant(n);
    for (idx, &p) in proposal.pair_exponents.iter().enumerate() {
        let j = idx + 1;
        sum += p * (proposal.values[n - j] - proposal.values[j - 1]).ln();
    }
    sum
}

/// Log of the unnormalized target, `beta * sum_{i<j} ln(x_j - x_i)`.
pub fn log_target(proposal: &JointProposal) -> f64 {
    proposal.beta * log_vandermonde(&proposal.values)
}

/// Rejects unordered proposals outright; otherwise draws `U` and accepts
/// iff `ln U + log_bound < log_target`.
pub fn accept_test(proposal: &JointProposal, stream: &mut RandomStream) -> bool {
    if !strictly_increasing(&proposal.values) {
        return false;
    }
    let u = stream.uniform();
    u.ln() + log_bound(proposal) < log_target(proposal)
}

/// The `beta = 2` acceptance test with the constants written out.
fn accept_test_gue(proposal: &JointProposal, stream: &mut RandomStream) -> bool {
    let values = &proposal.values;
    let n = values.len();
    if !strictly_increasing(values) {
        return false;
    }
    let u = stream.uniform();
    let mut bound = log_bound_constant(n);
    for j in 1..=n / 2 {
        bound += pair_exponent(n, j) * (values[n - j] - values[j - 1]).ln();
    }
    u.ln() + bound < 2.0 * log_vandermonde(values)
}

/// Repeats proposals until one is accepted.
#[derive(Clone, Debug)]
pub struct JointSampler {
    n: usize,
    beta: Option<f64>,
    max_attempts: u64,
}

impl JointSampler {
    /// GUE(n).
    pub fn new(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(JointSampler { n, beta: None, max_attempts: DEFAULT_MAX_ATTEMPTS })
    }

    /// Gaussian beta-ensemble of size `n`.
    pub fn with_beta(n: usize, beta: f64) -> Result<Self> {
        check_n(n)?;
        check_beta(beta)?;
        Ok(JointSampler { n, beta: Some(beta), max_attempts: DEFAULT_MAX_ATTEMPTS })
    }

    pub fn max_attempts(mut self, cap: u64) -> Self {
        self.max_attempts = cap.max(1);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta.unwrap_or(2.0)
    }

    pub fn sample(&self, stream: &mut RandomStream) -> Result<JointSample> {
        self.sample_with_progress(stream, &mut |_| {})
    }

    /// Like [`JointSampler::sample`], calling `progress(attempts)` every
    /// [`PROGRESS_EVERY`] rejected attempts.
    pub fn sample_with_progress(&self, stream: &mut RandomStream, progress: &mut dyn FnMut(u64)) -> Result<JointSample> {
        for attempt in 1..=self.max_attempts {
            let accepted = match self.beta {
                None => {
                    let p = propose(self.n, stream)?;
                    accept_test_gue(&p, stream).then_some(p)
                }
                Some(beta) => {
                    let p = propose_beta(self.n, beta, stream)?;
                    accept_test(&p, stream).then_some(p)
                }
            };
            if let Some(p) = accepted {
                return Ok(JointSample { n: self.n, beta: p.beta, values: p.values, attempts: attempt });
            }
            if attempt % PROGRESS_EVERY == 0 {
                progress(attempt);
            }
        }
        Err(Error::Budget { what: "joint eigenvalue sampler", attempts: self.max_attempts })
    }
}

/// One exact draw of the ordered spectrum; `beta = 2` is GUE.
pub fn sample_joint(n: usize, beta: f64, stream: &mut RandomStream, max_attempts: u64) -> Result<JointSample> {
    if max_attempts == 0 {
        return Err(Error::param("max_attempts must be at least 1"));
    }
    JointSampler::with_beta(n, beta)?.max_attempts(max_attempts).sample(stream)
}

/// `ln M_n`, where `M_n` is the maximum of `prod_{i<j} (x_j - x_i)` over
/// `0 = x_1 < ... < x_n = 1`:
///
/// `M_n = prod_{j=0}^{n-1} j^j (j+1)^{(j+1)/2} / (j+n-1)^{(j+n-1)/2}`, with `0^0 = 1`.
pub fn log_vandermonde_max(n: usize) -> Result<f64> {
    check_n(n)?;
    let xlnx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    let mut sum = 0.0;
    for j in 0..n {
        let j = j as f64;
        let m = j + n as f64 - 1.0;
        sum += xlnx(j) + 0.5 * xlnx(j + 1.0) - 0.5 * xlnx(m);
    }
    Ok(sum)
}

pub fn vandermonde_max(n: usize) -> Result<f64> {
    log_vandermonde_max(n).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{ks_two_sample, Moments};

    #[test]
    fn exponents() {
        assert_eq!(pair_exponent(2, 1), 2.0);
        assert_eq!(pair_exponent(3, 1), 6.0);
        assert_eq!((pair_exponent(4, 1), pair_exponent(4, 2)), (10.0, 2.0));
        let mut s = RandomStream::new(1);
        let p = propose(3, &mut s).unwrap();
        assert_eq!(p.pair_exponents, vec![6.0]);
        let p = propose(4, &mut s).unwrap();
        assert_eq!(p.pair_exponents, vec![10.0, 2.0]);
        assert!(propose(1, &mut s).is_err());
    }

    #[test]
    fn pairs_are_ordered_and_have_the_right_gap() {
        let mut s = RandomStream::new(2);
        let count = 100_000;
        let mut gaps = Vec::with_capacity(count);
        for _ in 0..count {
            let (x, y) = pair_transform(2.0, &mut s).unwrap();
            assert!(y > x);
            gaps.push((y - x).powi(2));
        }
        // E[W^2] = 4 (p+1)/2 = 6
        let m = Moments::of(&gaps);
        assert!((m.mean - 6.0).abs() < 3.0 * m.mean_stderr, "{m:?}");
        assert!(pair_transform(-0.5, &mut s).is_err());
    }

    #[test]
    fn zero_exponent_gap_is_half_normal() {
        // (Y - X)/2 = sqrt(Gamma(1/2)) has the law of |N| / sqrt(2)
        let mut s = RandomStream::new(3);
        let a: Vec<f64> = (0..20_000).map(|_| {
            let (x, y) = pair_transform(0.0, &mut s).unwrap();
            0.5 * (y - x)
        }).collect();
        let b: Vec<f64> = (0..20_000).map(|_| s.standard_normal().abs() / SQRT_2).collect();
        assert!(ks_two_sample(&a, &b).unwrap().passes(0.01));
    }

    #[test]
    fn n_two_always_accepts_first_attempt() {
        let sampler = JointSampler::new(2).unwrap();
        let mut s = RandomStream::new(4);
        for _ in 0..10_000 {
            let draw = sampler.sample(&mut s).unwrap();
            assert_eq!(draw.attempts, 1);
            assert!(draw.values[0] < draw.values[1]);
        }
    }

    #[test]
    fn n_two_is_the_pair_transform() {
        let mut a = RandomStream::new(6);
        let mut b = RandomStream::new(6);
        for _ in 0..100 {
            let draw = JointSampler::new(2).unwrap().sample(&mut a).unwrap();
            let (x, y) = pair_transform(2.0, &mut b).unwrap();
            b.uniform();
            assert_eq!(draw.values, vec![x, y]);
        }
    }

    #[test]
    fn bound_dominates_target() {
        let mut s = RandomStream::new(5);
        for n in 2..=12 {
            for _ in 0..1000 {
                let mut values: Vec<f64> = (0..n).map(|_| 3.0 * s.standard_normal()).collect();
                values.sort_by(f64::total_cmp);
                let pairs = (1..=n / 2).map(|j| pair_exponent(n, j)).collect();
                let prop = JointProposal { n, beta: 2.0, values, pair_exponents: pairs };
                assert!(log_bound(&prop) >= log_target(&prop) - 1e-9 * log_target(&prop).abs(), "n={n}");
            }
        }
    }

    #[test]
    fn unordered_proposals_are_rejected_without_drawing() {
        let mut s = RandomStream::new(5);
        let prop = JointProposal { n: 3, beta: 2.0, values: vec![0.0, 2.0, 1.0], pair_exponents: vec![6.0] };
        let before = s.draw_count();
        assert!(!accept_test(&prop, &mut s));
        assert_eq!(s.draw_count(), before);
        let tie = JointProposal { n: 3, beta: 2.0, values: vec![0.0, 1.0, 1.0], pair_exponents: vec![6.0] };
        assert!(!accept_test(&tie, &mut s));
    }

    #[test]
    fn beta_two_paths_agree_bitwise() {
        for n in 2..=6 {
            let mut a = RandomStream::new(n as u64);
            let mut b = RandomStream::new(n as u64);
            let gue = JointSampler::new(n).unwrap();
            let general = JointSampler::with_beta(n, 2.0).unwrap();
            for _ in 0..200 {
                assert_eq!(gue.sample(&mut a).unwrap(), general.sample(&mut b).unwrap());
            }
        }
    }

    #[test]
    fn trace_variance_for_n_three() {
        let sampler = JointSampler::new(3).unwrap();
        let mut s = RandomStream::new(7);
        let traces: Vec<f64> = (0..10_000).map(|_| sampler.sample(&mut s).unwrap().values.iter().sum()).collect();
        let m = Moments::of(&traces);
        assert!((m.variance - 3.0).abs() < 3.0 * m.variance_stderr, "{m:?}");
    }

    #[test]
    fn budget_and_parameter_errors() {
        let mut s = RandomStream::new(8);
        let r = sample_joint(8, 2.0, &mut s, 1);
        assert!(matches!(r, Err(Error::Budget { attempts: 1, .. })) || r.is_ok());
        let capped = JointSampler::new(12).unwrap().max_attempts(3);
        assert!(matches!(capped.sample(&mut s), Err(Error::Budget { attempts: 3, .. })));
        assert!(sample_joint(3, 0.0, &mut s, 10).is_err());
        assert!(sample_joint(3, 2.0, &mut s, 0).is_err());
        assert!(JointSampler::new(1).is_err());
    }

    #[test]
    fn progress_is_reported() {
        let sampler = JointSampler::new(14).unwrap().max_attempts(2 * PROGRESS_EVERY);
        let mut s = RandomStream::new(9);
        let mut calls = Vec::new();
        let r = sampler.sample_with_progress(&mut s, &mut |a| calls.push(a));
        if r.is_err() {
            assert_eq!(calls, vec![PROGRESS_EVERY, 2 * PROGRESS_EVERY]);
        }
    }

    /// `E[(X2 - X1)^2]` under `|x2 - x1|^beta exp(-beta (x1^2 + x2^2) / 4)`,
    /// integrating over the gap `d` after the sum factors out.
    fn gap_second_moment_by_quadrature(beta: f64) -> f64 {
        let weight = |d: f64, power: f64| d.powf(power) * (-beta * d * d / 8.0).exp();
        let top = crate::quadrature::integrate_to_infinity(|d| weight(d, beta + 2.0), 0.0, 1e-12).unwrap();
        let bottom = crate::quadrature::integrate_to_infinity(|d| weight(d, beta), 0.0, 1e-12).unwrap();
        top / bottom
    }

    #[test]
    fn beta_gap_moment_matches_the_target_density() {
        assert!((gap_second_moment_by_quadrature(2.0) - 6.0).abs() < 1e-9);
        assert!((gap_second_moment_by_quadrature(1.0) - 8.0).abs() < 1e-9);
        for (beta, seed) in [(1.0, 40), (4.0, 41)] {
            let sampler = JointSampler::with_beta(2, beta).unwrap();
            let mut s = RandomStream::new(seed);
            let gaps: Vec<f64> = (0..100_000)
                .map(|_| {
                    let v = sampler.sample(&mut s).unwrap().values;
                    (v[1] - v[0]).powi(2)
                })
                .collect();
            let m = Moments::of(&gaps);
            let target = gap_second_moment_by_quadrature(beta);
            assert!((m.mean - target).abs() < 3.0 * m.mean_stderr, "beta={beta}: {} vs {target}", m.mean);
        }
    }

    #[test]
    fn vandermonde_maximum() {
        assert!(log_vandermonde_max(2).unwrap().abs() < 1e-12);
        assert!((log_vandermonde_max(3).unwrap() - 0.25f64.ln()).abs() < 1e-12);
        assert!((crate::oracle::vandermonde_max_search(3).unwrap() - 0.25).abs() < 1e-12);
        let oracle = crate::oracle::vandermonde_max_search(5).unwrap();
        let formula = vandermonde_max(5).unwrap();
        assert!((formula / oracle - 1.0).abs() < 1e-6, "{formula} vs {oracle}");
        assert!(vandermonde_max(1).is_err());
    }
}
