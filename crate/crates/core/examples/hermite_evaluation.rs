// Hermite values far beyond the range of f64, and `phi_k^2` at a degree
// where the naive product of polynomial and Gaussian would be 0 * inf.

use gue_sampler::{hermite_poly, phi_squared, PhiSqCdf};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let h = hermite_poly(300, 20.0);
    println!("He_300(20) = {h}  (ln |.| = {:.3})", h.ln_abs());

    let k = 100_000;
    let x = 2.0 * (k as f64).sqrt() * 0.5;
    println!("phi_{k}^2({x:.1}) = {:.6e}", phi_squared(k, x));

    let cdf = PhiSqCdf::new(25, 1e-10)?;
    for t in [0.0, 2.0, 5.0, 8.0, 12.0] {
        println!("P(X <= {t:4.1}) = {:.8} under phi_25^2", cdf.cdf(t)?);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
