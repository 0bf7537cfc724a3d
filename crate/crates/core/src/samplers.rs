//! Rejection samplers for `phi_k^2` and for one eigenvalue of GUE(n).
//!
//! Both modes propose from the envelope `h_k` and accept when
//! `U h_k(X) <= phi_k^2(X)`. In squeeze mode the van Veen bounds settle most
//! proposals with `|X| <= x1` in constant time, and the O(k) recurrence only
//! runs when `U h_k(X)` lands between them or `X` falls outside the bulk.

use std::fmt;
use std::ops::AddAssign;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::dominator::DominatorSpec;
use crate::error::{Error, Result};
use crate::hermite::HermiteTable;
use crate::rng::RandomStream;
use crate::vanveen::VanVeen;

pub const DEFAULT_MAX_PROPOSALS: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Exact evaluation on every proposal.
    Plain,
    /// Constant-time squeeze first, exact evaluation only when inconclusive.
    Squeeze,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Plain => "plain",
            Mode::Squeeze => "squeeze",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Mode::Plain),
            "squeeze" => Ok(Mode::Squeeze),
            other => Err(Error::param(format!("mode must be 'plain' or 'squeeze', got '{other}'"))),
        }
    }
}

/// Counters accumulated over calls to a sampler. Additive across workers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SamplerStats {
    pub proposals: u64,
    pub squeeze_lower_accepts: u64,
    pub squeeze_upper_rejects: u64,
    pub exact_evals: u64,
    pub accepted: u64,
    #[serde(serialize_with = "serialize_secs")]
    pub elapsed: Duration,
}

fn serialize_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl SamplerStats {
    pub fn proposals_per_accept(&self) -> f64 {
        self.proposals as f64 / self.accepted as f64
    }

    /// Fraction of proposals that needed the O(k) recurrence.
    pub fn exact_eval_share(&self) -> f64 {
        self.exact_evals as f64 / self.proposals as f64
    }

    /// `(proposals + k * exact_evals) / accepted`: expected work per variate
    /// counting one unit per proposal and `k` per recurrence evaluation.
    pub fn cost_proxy(&self, k: u64) -> f64 {
        (self.proposals as f64 + k as f64 * self.exact_evals as f64) / self.accepted as f64
    }
}

impl AddAssign for SamplerStats {
    fn add_assign(&mut self, rhs: Self) {
        self.proposals += rhs.proposals;
        self.squeeze_lower_accepts += rhs.squeeze_lower_accepts;
        self.squeeze_upper_rejects += rhs.squeeze_upper_rejects;
        self.exact_evals += rhs.exact_evals;
        self.accepted += rhs.accepted;
        self.elapsed += rhs.elapsed;
    }
}

/// How a single proposal was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    QuickAccept,
    QuickReject,
    ExactAccept,
    ExactReject,
}

impl Decision {
    pub fn accepted(self) -> bool {
        matches!(self, Decision::QuickAccept | Decision::ExactAccept)
    }
}

/// Exact sampler for the density `phi_k^2`.
#[derive(Clone, Debug)]
pub struct PhiSquaredSampler {
    k: u64,
    mode: Mode,
    envelope: Option<DominatorSpec>,
    vanveen: VanVeen,
    table: Arc<HermiteTable>,
    max_proposals: u64,
}

impl PhiSquaredSampler {
    pub fn new(k: u64, mode: Mode) -> Result<Self> {
        Self::with_table(k, mode, Arc::new(HermiteTable::new(k)))
    }

    /// Shares a coefficient table, which must cover degree `k`.
    pub fn with_table(k: u64, mode: Mode, table: Arc<HermiteTable>) -> Result<Self> {
        if table.max_k() < k {
            return Err(Error::param(format!("coefficient table covers k <= {}, need {k}", table.max_k())));
        }
        let envelope = if k == 0 { None } else { Some(DominatorSpec::new(k)?) };
        Ok(PhiSquaredSampler {
            k,
            mode,
            envelope,
            vanveen: VanVeen::new(k),
            table,
            max_proposals: DEFAULT_MAX_PROPOSALS,
        })
    }

    pub fn with_max_proposals(mut self, cap: u64) -> Self {
        self.max_proposals = cap.max(1);
        self
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `None` for `k = 0`, which is sampled as a standard normal.
    pub fn envelope(&self) -> Option<&DominatorSpec> {
        self.envelope.as_ref()
    }

    pub fn sample(&self, stream: &mut RandomStream, stats: &mut SamplerStats) -> Result<f64> {
        let start = Instant::now();
        let out = self.sample_inner(stream, stats);
        stats.elapsed += start.elapsed();
        out
    }

    fn sample_inner(&self, stream: &mut RandomStream, stats: &mut SamplerStats) -> Result<f64> {
        let Some(envelope) = &self.envelope else {
            stats.proposals += 1;
            stats.accepted += 1;
            return Ok(stream.standard_normal());
        };
        for _ in 0..self.max_proposals {
            let x = envelope.sample(stream);
            let u = stream.uniform();
            if self.decide(x, u, stats).accepted() {
                stats.accepted += 1;
                return Ok(x);
            }
        }
        Err(Error::Budget {
            what: "phi^2 rejection sampler",
            attempts: self.max_proposals,
        })
    }

    /// Settles the proposal `(x, u)`, counting the work in `stats`.
    ///
    /// # Panics
    /// For `k = 0`, which has no envelope.
    pub fn decide(&self, x: f64, u: f64, stats: &mut SamplerStats) -> Decision {
        let envelope = self.envelope.as_ref().expect("k = 0 has no rejection step");
        stats.proposals += 1;
        if !x.is_finite() {
            return Decision::QuickReject;
        }
        let y = u * envelope.h(x);
        if self.mode == Mode::Squeeze && x.abs() <= envelope.x1 {
            if let Ok(terms) = self.vanveen.evaluate(x) {
                if y <= terms.lower() {
                    stats.squeeze_lower_accepts += 1;
                    return Decision::QuickAccept;
                }
                if y > terms.upper() {
                    stats.squeeze_upper_rejects += 1;
                    return Decision::QuickReject;
                }
            }
        }
        stats.exact_evals += 1;
        if y <= self.table.phi_squared(self.k, x) {
            Decision::ExactAccept
        } else {
            Decision::ExactReject
        }
    }

    /// The plain acceptance test `u h_k(x) <= phi_k^2(x)`.
    pub fn exact_accepts(&self, x: f64, u: f64) -> bool {
        let envelope = self.envelope.as_ref().expect("k = 0 has no rejection step");
        x.is_finite() && u * envelope.h(x) <= self.table.phi_squared(self.k, x)
    }
}

/// One variate from `phi_k^2` by plain rejection.
pub fn sample_phi_sq_plain(k: u64, stream: &mut RandomStream, stats: &mut SamplerStats) -> Result<f64> {
    PhiSquaredSampler::new(k, Mode::Plain)?.sample(stream, stats)
}

/// One variate from `phi_k^2` by squeeze-accelerated rejection.
pub fn sample_phi_sq_squeeze(k: u64, stream: &mut RandomStream, stats: &mut SamplerStats) -> Result<f64> {
    PhiSquaredSampler::new(k, Mode::Squeeze)?.sample(stream, stats)
}

/// One uniformly chosen eigenvalue of a GUE(n) matrix: a uniform index
/// `K < n`, then a variate from `phi_K^2`.
#[derive(Clone, Debug)]
pub struct GueEigenvalueSampler {
    n: u64,
    mode: Mode,
    table: Arc<HermiteTable>,
    max_proposals: u64,
}

impl GueEigenvalueSampler {
    pub fn new(n: u64, mode: Mode) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("GUE dimension must be at least 1"));
        }
        Ok(GueEigenvalueSampler {
            n,
            mode,
            table: Arc::new(HermiteTable::new(n - 1)),
            max_proposals: DEFAULT_MAX_PROPOSALS,
        })
    }

    pub fn with_max_proposals(mut self, cap: u64) -> Self {
        self.max_proposals = cap.max(1);
        self
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Draws the index uniformly on `{0, ..., n-1}` (one uniform).
    pub fn draw_index(&self, stream: &mut RandomStream) -> u64 {
        ((stream.uniform() * self.n as f64) as u64).min(self.n - 1)
    }

    /// The component sampler used for index `k`.
    pub fn component(&self, k: u64) -> Result<PhiSquaredSampler> {
        Ok(PhiSquaredSampler::with_table(k, self.mode, Arc::clone(&self.table))?.with_max_proposals(self.max_proposals))
    }

    /// Returns `(index, eigenvalue)`.
    pub fn sample_with_index(&self, stream: &mut RandomStream, stats: &mut SamplerStats) -> Result<(u64, f64)> {
        let k = self.draw_index(stream);
        let x = self.component(k)?.sample(stream, stats)?;
        Ok((k, x))
    }

    pub fn sample(&self, stream: &mut RandomStream, stats: &mut SamplerStats) -> Result<f64> {
        self.sample_with_index(stream, stats).map(|(_, x)| x)
    }
}

pub fn sample_gue_eigenvalue(n: u64, stream: &mut RandomStream, stats: &mut SamplerStats) -> Result<f64> {
    GueEigenvalueSampler::new(n, Mode::Squeeze)?.sample(stream, stats)
}

/// Aggregates for one degree in a benchmark run.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub mode: Mode,
    pub n: u64,
    pub accepted: u64,
    pub mean_proposals: f64,
    pub exact_eval_share: f64,
    pub exact_evals_per_accept: f64,
    pub cost_proxy: f64,
    pub ns_per_sample: f64,
    pub expected_proposals: f64,
}

/// Samples `samples_per_n` variates from `phi_n^2` for every `n` in the list
/// and reports per-degree aggregates. Degree `i` of the list uses stream
/// `RandomStream::new(seed).derive(i)`.
pub fn benchmark(mode: Mode, n_list: &[u64], samples_per_n: u64, seed: u64) -> Result<Vec<BenchRow>> {
    if n_list.is_empty() {
        return Err(Error::param("benchmark needs at least one n"));
    }
    if let Some(&bad) = n_list.iter().find(|&&n| n == 0) {
        return Err(Error::param(format!("benchmark degrees must be >= 1, got {bad}")));
    }
    let master = RandomStream::new(seed);
    n_list
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let sampler = PhiSquaredSampler::new(n, mode)?;
            let mut stream = master.derive(i as u64);
            let mut stats = SamplerStats::default();
            for _ in 0..samples_per_n {
                sampler.sample(&mut stream, &mut stats)?;
            }
            Ok(BenchRow {
                mode,
                n,
                accepted: stats.accepted,
                mean_proposals: stats.proposals_per_accept(),
                exact_eval_share: stats.exact_eval_share(),
                exact_evals_per_accept: stats.exact_evals as f64 / stats.accepted as f64,
                cost_proxy: stats.cost_proxy(n),
                ns_per_sample: stats.elapsed.as_nanos() as f64 / stats.accepted as f64,
                expected_proposals: sampler.envelope().map_or(1.0, |e| e.total_mass()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::ks_one_sample;
    use crate::PhiSqCdf;

    #[test]
    fn k_zero_is_standard_normal() {
        let sampler = PhiSquaredSampler::new(0, Mode::Squeeze).unwrap();
        let mut a = RandomStream::new(8);
        let mut b = RandomStream::new(8);
        let mut stats = SamplerStats::default();
        for _ in 0..100 {
            assert_eq!(sampler.sample(&mut a, &mut stats).unwrap(), b.standard_normal());
        }
        assert_eq!(stats.proposals, 100);
        assert_eq!(stats.exact_evals, 0);
    }

    #[test]
    fn n_one_eigenvalue_is_standard_normal() {
        let sampler = GueEigenvalueSampler::new(1, Mode::Squeeze).unwrap();
        let mut a = RandomStream::new(3);
        let mut b = RandomStream::new(3);
        let mut stats = SamplerStats::default();
        for _ in 0..100 {
            let x = sampler.sample(&mut a, &mut stats).unwrap();
            b.uniform();
            assert_eq!(x, b.standard_normal());
        }
        assert!(GueEigenvalueSampler::new(0, Mode::Plain).is_err());
    }

    #[test]
    fn plain_sampler_matches_phi_one() {
        let sampler = PhiSquaredSampler::new(1, Mode::Plain).unwrap();
        let mut stream = RandomStream::new(2024);
        let mut stats = SamplerStats::default();
        let xs: Vec<f64> = (0..100_000).map(|_| sampler.sample(&mut stream, &mut stats).unwrap()).collect();
        let cdf = PhiSqCdf::new(1, 1e-10).unwrap();
        let ks = ks_one_sample(&xs, |x| cdf.cdf(x)).unwrap();
        assert!(ks.scaled < 1.95, "{ks:?}");
        // symmetric
        let pos = xs.iter().filter(|&&x| x > 0.0).count() as f64 / xs.len() as f64;
        assert!((pos - 0.5).abs() < 3.0 * (0.25f64 / xs.len() as f64).sqrt());
        // proposals per accept against the envelope mass, 3 negative-binomial sigma
        let mass = sampler.envelope().unwrap().total_mass();
        let se = mass * ((1.0 - 1.0 / mass) / stats.accepted as f64).sqrt();
        assert!((stats.proposals_per_accept() - mass).abs() < 3.0 * se, "{stats:?}");
        assert_eq!(stats.exact_evals, stats.proposals);
    }

    #[test]
    fn squeeze_only_shortcuts_decisions_the_exact_test_agrees_with() {
        for &k in &[1u64, 3, 10, 100, 1000] {
            let sampler = PhiSquaredSampler::new(k, Mode::Squeeze).unwrap();
            let envelope = *sampler.envelope().unwrap();
            let mut stream = RandomStream::new(k);
            let mut stats = SamplerStats::default();
            for _ in 0..10_000 {
                let x = envelope.sample(&mut stream);
                let u = stream.uniform();
                let d = sampler.decide(x, u, &mut stats);
                assert_eq!(d.accepted(), sampler.exact_accepts(x, u), "k={k} x={x} u={u} {d:?}");
            }
            assert_eq!(
                stats.exact_evals,
                stats.proposals - stats.squeeze_lower_accepts - stats.squeeze_upper_rejects
            );
            if k >= 10 {
                assert!(stats.squeeze_lower_accepts > 0 && stats.squeeze_upper_rejects > 0);
            }
        }
    }

    #[test]
    fn fixed_seed_reproduces_output() {
        let run = || {
            let sampler = PhiSquaredSampler::new(37, Mode::Squeeze).unwrap();
            let mut stream = RandomStream::new(0xfeed);
            let mut stats = SamplerStats::default();
            (0..200).map(|_| sampler.sample(&mut stream, &mut stats).unwrap().to_bits()).collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn mixture_conditioned_on_index_is_the_component_sampler() {
        let mixture = GueEigenvalueSampler::new(40, Mode::Squeeze).unwrap();
        let mut a = RandomStream::new(77);
        let mut stats = SamplerStats::default();
        for _ in 0..200 {
            let mut b = a.clone();
            let (k, x) = mixture.sample_with_index(&mut a, &mut stats).unwrap();
            let k_again = mixture.draw_index(&mut b);
            assert_eq!(k, k_again);
            let y = PhiSquaredSampler::new(k, Mode::Squeeze).unwrap().sample(&mut b, &mut SamplerStats::default()).unwrap();
            assert_eq!(x.to_bits(), y.to_bits());
            assert_eq!(a.draw_count(), b.draw_count());
        }
    }

    #[test]
    fn budget_error_when_capped() {
        let sampler = PhiSquaredSampler::new(500, Mode::Plain).unwrap().with_max_proposals(1);
        let mut stream = RandomStream::new(1);
        let mut stats = SamplerStats::default();
        let errors: Vec<Error> = (0..200).filter_map(|_| sampler.sample(&mut stream, &mut stats).err()).collect();
        assert!(errors.len() > 150);
        assert!(errors.iter().all(|e| matches!(e, Error::Budget { attempts: 1, .. })));
    }

    #[test]
    fn stats_invariants_and_merge() {
        let sampler = PhiSquaredSampler::new(64, Mode::Squeeze).unwrap();
        let mut total = SamplerStats::default();
        for w in 0..3 {
            let mut stream = RandomStream::new(9).derive(w);
            let mut stats = SamplerStats::default();
            for _ in 0..500 {
                sampler.sample(&mut stream, &mut stats).unwrap();
            }
            assert!(stats.accepted <= stats.proposals);
            assert!(stats.exact_evals <= stats.proposals - stats.squeeze_lower_accepts - stats.squeeze_upper_rejects);
            total += stats;
        }
        assert_eq!(total.accepted, 1500);
    }

    #[test]
    fn benchmark_rows() {
        let rows = benchmark(Mode::Squeeze, &[10, 100], 200, 1).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.accepted == 200 && r.mean_proposals >= 1.0));
        assert!(benchmark(Mode::Plain, &[], 10, 1).is_err());
        assert!(benchmark(Mode::Plain, &[0], 10, 1).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("plain".parse::<Mode>().unwrap(), Mode::Plain);
        assert_eq!("squeeze".parse::<Mode>().unwrap(), Mode::Squeeze);
        assert!("fast".parse::<Mode>().is_err());
        assert_eq!(Mode::Squeeze.to_string(), "squeeze");
    }
}
