// How the cost per variate grows with the degree. With the squeeze the
// recurrence is needed on a shrinking share of proposals, so the total
// work grows like n^(2/3) instead of n.

use gue_sampler::samplers::benchmark;
use gue_sampler::stats::loglog_slope;
use gue_sampler::Mode;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let degrees = [100, 400, 1_600, 6_400];
    for mode in [Mode::Squeeze, Mode::Plain] {
        let rows = benchmark(mode, &degrees, 1_000, 77)?;
        println!("{mode}:");
        for r in &rows {
            println!(
                "  n={:>5}  proposals {:6.2} (expected {:6.2})  recurrence share {:.4}  cost {:10.1}  {:9.0} ns",
                r.n, r.mean_proposals, r.expected_proposals, r.exact_eval_share, r.cost_proxy, r.ns_per_sample
            );
        }
        let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.cost_proxy)).collect();
        let fit = loglog_slope(&points)?;
        println!("  cost slope {:.3} +/- {:.3}", fit.slope, fit.stderr);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
