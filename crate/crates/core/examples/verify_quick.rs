// Runs the cheaper acceptance criteria at reduced sample counts. The full
// suite is `gue verify --suite all` or `cargo test --test acceptance`.

use gue_sampler::verify::{run_criterion, VerifyConfig, DEFAULT_SEED};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = VerifyConfig::quick(DEFAULT_SEED);
    for id in [5, 6, 8, 11] {
        for line in run_criterion(id, &cfg)?.lines() {
            println!("{line}");
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
