use gue_sampler::samplers::benchmark;
use gue_sampler::stats::loglog_slope;
use gue_sampler::verify::squeeze_gap_integral;
use gue_sampler::{DominatorSpec, Mode, PhiSquaredSampler, RandomStream, SamplerStats};

/// Probability that a proposal needs the recurrence: inside `[-x1, x1]` when
/// `U h(X)` falls between the bounds, outside it always.
fn predicted_exact_share(n: u64) -> f64 {
    let spec = DominatorSpec::new(n).unwrap();
    let inconclusive = 2.0 * squeeze_gap_integral(n, 1e-7).unwrap() + 2.0 * (spec.p2 + spec.p3);
    inconclusive / spec.total_mass()
}

#[test]
fn exact_evaluation_share_at_ten_thousand() {
    let n = 10_000;
    let predicted = predicted_exact_share(n);
    let sampler = PhiSquaredSampler::new(n, Mode::Squeeze).unwrap();
    let mut stream = RandomStream::new(31);
    let mut stats = SamplerStats::default();
    for _ in 0..20_000 {
        sampler.sample(&mut stream, &mut stats).unwrap();
    }
    let share = stats.exact_eval_share();
    let se = (predicted * (1.0 - predicted) / stats.proposals as f64).sqrt();
    assert!((share - predicted).abs() < 4.0 * se, "measured {share}, predicted {predicted} +/- {se}");
    assert!((0.22..0.25).contains(&predicted), "{predicted}");
}

#[test]
fn exact_evaluations_per_variate_shrink_like_a_cube_root() {
    let rows = benchmark(Mode::Squeeze, &[100, 1_000, 10_000, 100_000], 2_000, 8).unwrap();
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.exact_evals_per_accept)).collect();
    let fit = loglog_slope(&points).unwrap();
    assert!((-0.45..=-0.20).contains(&fit.slope), "{fit:?}");
    for r in &rows {
        let p = predicted_exact_share(r.n);
        assert!((r.exact_eval_share - p).abs() < 0.03, "n={}: {} vs {p}", r.n, r.exact_eval_share);
    }
}
