// A uniformly chosen eigenvalue of a 60 x 60 GUE matrix, drawn without
// building the matrix. The histogram follows the mixture density
// `(1/n) sum_k phi_k^2`, a semicircle with ripples.

use gue_sampler::{mixture_density, GueEigenvalueSampler, Mode, RandomStream, SamplerStats};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 60;
    let sampler = GueEigenvalueSampler::new(n, Mode::Squeeze)?;
    let mut stream = RandomStream::new(2024);
    let mut stats = SamplerStats::default();

    let edge = 2.0 * (n as f64).sqrt() + 2.0;
    let bins = 24;
    let width = 2.0 * edge / bins as f64;
    let mut counts = vec![0usize; bins];
    let draws = 20_000;
    for _ in 0..draws {
        let x = sampler.sample(&mut stream, &mut stats)?;
        let b = ((x + edge) / width).floor();
        if (0.0..bins as f64).contains(&b) {
            counts[b as usize] += 1;
        }
    }
    println!("{:>8} {:>10} {:>10}", "x", "empirical", "density");
    for (i, &c) in counts.iter().enumerate() {
        let mid = -edge + (i as f64 + 0.5) * width;
        let empirical = c as f64 / (draws as f64 * width);
        let bar = "#".repeat((empirical * 400.0) as usize);
        println!("{mid:8.2} {empirical:10.5} {:10.5} {bar}", mixture_density(n, mid)?);
    }
    println!("proposals per variate: {:.3}", stats.proposals_per_accept());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
