//! Goodness-of-fit tests and scaling fits.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

const MIN_SAMPLES: usize = 100;
const CDF_SLACK: f64 = 1e-12;

/// Significance levels reported in [`KsResult::pass_at`].
pub const LEVELS: [f64; 3] = [0.05, 0.01, 0.001];

#[derive(Clone, Debug, Serialize)]
pub struct KsResult {
    /// Supremum distance `D`, in `[0, 1]`.
    pub statistic: f64,
    pub n_effective: f64,
    /// `D * sqrt(n_effective)`, compared against Kolmogorov quantiles.
    pub scaled: f64,
    /// Asymptotic p-value.
    pub p_value: f64,
    pub pass_at: BTreeMap<String, bool>,
}

impl KsResult {
    fn new(statistic: f64, n_effective: f64) -> Self {
        let scaled = statistic * n_effective.sqrt();
        let pass_at = LEVELS
            .iter()
            .map(|&a| (format!("{a}"), scaled < critical_value(a)))
            .collect();
        KsResult {
            statistic,
            n_effective,
            scaled,
            p_value: kolmogorov_survival(scaled),
            pass_at,
        }
    }

    /// Whether the test accepts at significance `alpha`.
    pub fn passes(&self, alpha: f64) -> bool {
        self.scaled < critical_value(alpha)
    }
}

/// Asymptotic critical value `c(alpha) = sqrt(-ln(alpha/2) / 2)` of the
/// scaled statistic (1.628 at 0.01, 1.949 at 0.001).
pub fn critical_value(alpha: f64) -> f64 {
    (-0.5 * (0.5 * alpha).ln()).sqrt()
}

/// `P(K > t)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(t: f64) -> f64 {
    if t < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * t * t).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn sorted_finite(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::param(format!("KS test needs at least {MIN_SAMPLES} samples, got {}", samples.len())));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::param("KS test samples contain NaN"));
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// One-sample Kolmogorov–Smirnov test against a CDF oracle. The oracle is
/// checked for range and monotonicity along the sorted sample.
pub fn ks_one_sample<F>(samples: &[f64], mut cdf: F) -> Result<KsResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let sorted = sorted_finite(samples)?;
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    let mut last = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x)?;
        if !(-CDF_SLACK..=1.0 + CDF_SLACK).contains(&f) {
            return Err(Error::Oracle(format!("cdf({x}) = {f} lies outside [0, 1]")));
        }
        if f < last - CDF_SLACK {
            return Err(Error::Oracle(format!("cdf decreases at x = {x}: {last} -> {f}")));
        }
        last = f;
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(KsResult::new(d.min(1.0), n))
}

/// Two-sample Kolmogorov–Smirnov test; ties are stepped over together.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let a = sorted_finite(a)?;
    let b = sorted_finite(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(KsResult::new(d, na * nb / (na + nb)))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
}

/// Least-squares fit of `ln y` against `ln n`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(Error::param(format!("slope fit needs at least 3 points, got {}", points.len())));
    }
    if let Some(&(n, y)) = points.iter().find(|&&(n, y)| !(n > 0.0 && y > 0.0)) {
        return Err(Error::Domain {
            what: "log-log fit needs positive coordinates",
            x: if n > 0.0 { y } else { n },
            limit: 0.0,
        });
    }
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (rss / (m - 2.0) / sxx).sqrt();
    Ok(SlopeFit { slope, intercept, stderr })
}

/// Sample mean and variance with their standard errors.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub mean_stderr: f64,
    pub variance: f64,
    /// From the fourth central moment: `sqrt((m4 - s^4) / count)`.
    pub variance_stderr: f64,
}

impl Moments {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let variance = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
        Moments {
            count: xs.len(),
            mean,
            mean_stderr: (variance / n).sqrt(),
            variance,
            variance_stderr: ((m4 - variance * variance).max(0.0) / n).sqrt(),
        }
    }
}

fn short(v: f64) -> String {
    if v == 0.0 || (1e-3..1e6).contains(&v.abs()) {
        format!("{}", (v * 1e6).round() / 1e6)
    } else {
        format!("{v:e}")
    }
}

/// One line of a verification report.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub test: String,
    pub statistic: f64,
    pub threshold: String,
    pub pass: bool,
}

impl Check {
    pub fn below(test: impl Into<String>, statistic: f64, limit: f64) -> Self {
        Check {
            test: test.into(),
            statistic,
            threshold: format!("< {}", short(limit)),
            pass: statistic < limit,
        }
    }

    pub fn within(test: impl Into<String>, statistic: f64, lo: f64, hi: f64) -> Self {
        Check {
            test: test.into(),
            statistic,
            threshold: format!("in [{}, {}]", short(lo), short(hi)),
            pass: (lo..=hi).contains(&statistic),
        }
    }

    /// `|statistic - target| <= tol`
    pub fn near(test: impl Into<String>, statistic: f64, target: f64, tol: f64) -> Self {
        Check {
            test: test.into(),
            statistic,
            threshold: format!("{} +/- {:.3e}", short(target), tol),
            pass: (statistic - target).abs() <= tol,
        }
    }

    pub fn ks(test: impl Into<String>, result: &KsResult, alpha: f64) -> Self {
        Check::below(test, result.scaled, critical_value(alpha))
    }

    pub fn flag(test: impl Into<String>, ok: bool) -> Self {
        Check {
            test: test.into(),
            statistic: if ok { 1.0 } else { 0.0 },
            threshold: "== 1".into(),
            pass: ok,
        }
    }
}
