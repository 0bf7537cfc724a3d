// The sandwich `(f - eps-) <= phi_n^2 <= min(f + eps+, h_n)` around the
// target at n = 10, written as CSV. Pass a path to save it; otherwise a few
// rows go to stdout.

use gue_sampler::tabulate::{squeeze_rows, write_squeeze_csv};
use gue_sampler::DominatorSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 10;
    let spec = DominatorSpec::new(n)?;
    println!(
        "n={n}: bulk ends at x1 = {:.4}, plateau to x2 = {:.4}, envelope mass {:.4}",
        spec.x1,
        spec.x2,
        spec.total_mass()
    );
    let rows = squeeze_rows(n, 401)?;
    let gap: f64 = rows.iter().map(|r| r.upper - r.lower).sum::<f64>() * (2.0 * spec.x1 / 400.0);
    println!("area between the bounds: {gap:.4}");
    match std::env::args().nth(1) {
        Some(path) => {
            let mut file = std::fs::File::create(&path)?;
            write_squeeze_csv(&mut file, &rows, true)?;
            println!("wrote {} rows to {path}", rows.len());
        }
        None => {
            let mut out = Vec::new();
            write_squeeze_csv(&mut out, &rows[195..206], false)?;
            print!("{}", String::from_utf8(out)?);
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
