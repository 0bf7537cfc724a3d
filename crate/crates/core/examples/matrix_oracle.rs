// Builds GUE matrices entry by entry, diagonalizes them, and checks that
// the joint sampler produces the same smallest eigenvalue distribution.

use gue_sampler::stats::ks_two_sample;
use gue_sampler::{eigenvalues_small, sample_gue_matrix, Convention, JointSampler, RandomStream};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 3;
    let draws = 2_000;
    let mut stream = RandomStream::new(99);

    let mut from_matrices = Vec::with_capacity(draws);
    for _ in 0..draws {
        let m = sample_gue_matrix(n, Convention::Unscaled, &mut stream)?;
        from_matrices.push(eigenvalues_small(&m)?[0]);
    }
    let joint = JointSampler::new(n)?;
    let from_joint = (0..draws)
        .map(|_| joint.sample(&mut stream).map(|s| s.values[0]))
        .collect::<Result<Vec<_>, _>>()?;

    let ks = ks_two_sample(&from_matrices, &from_joint)?;
    println!(
        "smallest eigenvalue, n={n}: sqrt(N) D = {:.3}, p = {:.3}, accepted at 0.01: {}",
        ks.scaled,
        ks.p_value,
        ks.passes(0.01)
    );

    let m = sample_gue_matrix(4, Convention::Intro, &mut stream)?;
    println!("a 4x4 matrix in the [-2, 2] normalization has spectrum {:?}", eigenvalues_small(&m)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
