//! Grids of the density, its squeeze bounds and its envelope, for plotting.

use std::io::Write;

use serde::Serialize;

use crate::dominator::DominatorSpec;
use crate::error::{Error, Result};
use crate::hermite::HermiteTable;
use crate::vanveen::VanVeen;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EnvelopeRow {
    pub x: f64,
    pub h_n: f64,
    pub phi_sq: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SqueezeRow {
    pub x: f64,
    pub phi_sq: f64,
    pub f_n: f64,
    /// `(f - eps_minus)_+`
    pub lower: f64,
    /// `min(f + eps_plus, h_n)`
    pub upper: f64,
    pub h_n: f64,
}

fn grid(lo: f64, hi: f64, points: usize) -> Result<impl Iterator<Item = f64>> {
    if points < 2 {
        return Err(Error::param("a grid needs at least 2 points"));
    }
    Ok((0..points).map(move |i| lo + (hi - lo) * i as f64 / (points - 1) as f64))
}

/// `h_n` and `phi_n^2` on `[-(x2 + 2), x2 + 2]`.
pub fn envelope_rows(n: u64, points: usize) -> Result<Vec<EnvelopeRow>> {
    let spec = DominatorSpec::new(n)?;
    let table = HermiteTable::new(n);
    let limit = spec.x2 + 2.0;
    Ok(grid(-limit, limit, points)?
        .map(|x| EnvelopeRow { x, h_n: spec.h(x), phi_sq: table.phi_squared(n, x) })
        .collect())
}

/// The squeeze sandwich on `[-x1, x1]`, where it is used for sampling.
pub fn squeeze_rows(n: u64, points: usize) -> Result<Vec<SqueezeRow>> {
    let spec = DominatorSpec::new(n)?;
    let vv = VanVeen::new(n);
    let table = HermiteTable::new(n);
    grid(-spec.x1, spec.x1, points)?
        .map(|x| {
            let t = vv.evaluate(x)?;
            let h_n = spec.h(x);
            Ok(SqueezeRow {
                x,
                phi_sq: table.phi_squared(n, x),
                f_n: t.f,
                lower: t.lower(),
                upper: t.upper().min(h_n),
                h_n,
            })
        })
        .collect()
}

pub fn write_envelope_csv<W: Write>(out: &mut W, rows: &[EnvelopeRow]) -> std::io::Result<()> {
    writeln!(out, "x,h_n,phi_sq")?;
    for r in rows {
        writeln!(out, "{},{},{}", r.x, r.h_n, r.phi_sq)?;
    }
    Ok(())
}

/// Four columns `x,lower,phi_sq,upper`, or all six with `all_columns`.
pub fn write_squeeze_csv<W: Write>(out: &mut W, rows: &[SqueezeRow], all_columns: bool) -> std::io::Result<()> {
    if all_columns {
        writeln!(out, "x,phi_sq,f_n,lower,upper,h_n")?;
        for r in rows {
            writeln!(out, "{},{},{},{},{},{}", r.x, r.phi_sq, r.f_n, r.lower, r.upper, r.h_n)?;
        }
    } else {
        writeln!(out, "x,lower,phi_sq,upper")?;
        for r in rows {
            writeln!(out, "{},{},{},{}", r.x, r.lower, r.phi_sq, r.upper)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squeeze_table_for_n_ten() {
        let rows = squeeze_rows(10, 501).unwrap();
        assert_eq!(rows.len(), 501);
        for r in &rows {
            assert!(r.lower <= r.phi_sq + 1e-12 && r.phi_sq <= r.upper + 1e-12, "{r:?}");
        }
        let mut buf = Vec::new();
        write_squeeze_csv(&mut buf, &rows, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,lower,phi_sq,upper\n"));
        assert_eq!(text.lines().count(), 502);
    }

    #[test]
    fn envelope_table() {
        let rows = envelope_rows(5, 101).unwrap();
        assert!(rows.iter().all(|r| r.phi_sq <= r.h_n));
        assert!(envelope_rows(5, 1).is_err());
        assert!(envelope_rows(0, 10).is_err());
    }
}
