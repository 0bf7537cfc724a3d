// Whole ordered spectra from the joint rejection sampler, for the unitary
// ensemble and for the orthogonal one via the beta parameter.

use gue_sampler::{JointSampler, RandomStream};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut stream = RandomStream::new(5);
    for n in [2usize, 3, 4, 5] {
        let sampler = JointSampler::new(n)?;
        let mut attempts = 0;
        let reps = 200;
        let mut last = Vec::new();
        for _ in 0..reps {
            let s = sampler.sample(&mut stream)?;
            attempts += s.attempts;
            last = s.values;
        }
        let shown: Vec<String> = last.iter().map(|v| format!("{v:7.3}")).collect();
        println!("n={n}: mean attempts {:7.2}, last spectrum [{}]", attempts as f64 / reps as f64, shown.join(", "));
    }

    let goe = JointSampler::with_beta(3, 1.0)?;
    let s = goe.sample(&mut stream)?;
    println!("beta=1, n=3: {:?} after {} attempts", s.values, s.attempts);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
