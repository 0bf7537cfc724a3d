//! Piecewise dominating envelope `h_n` for `phi_n^2` and its inversion sampler.
//!
//! On the half line the envelope has three pieces:
//!
//! ```text
//! (8 pi / 3) / sqrt(4n + 2 - x^2)                 0  <= x <= x1
//! (8 (pi + 1) / 3) n^(-1/6)                       x1 <  x <= x2
//! 2 sqrt(2) B^2 n^(-5/6) / (x - sqrt(4n + 2))^4   x2 <  x
//! ```
//!
//! with `B = (pi + 1)^2 sqrt(8 (pi + 1) / 3)`. The breakpoints are chosen so
//! that `h_n` is continuous, and each piece has a closed-form integral and
//! inverse CDF.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rng::RandomStream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DominatorSpec {
    pub n: u64,
    pub b: f64,
    pub x1: f64,
    pub x2: f64,
    /// `sqrt(4n + 2)`
    pub edge: f64,
    /// Masses of the three pieces over the half line `[0, inf)`.
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    /// `x2 - edge`
    tail_scale: f64,
    /// The constant middle piece, also the value at both breakpoints.
    plateau: f64,
    tail_coeff: f64,
    /// `arcsin(x1 / edge)`
    arc1: f64,
}

/// Which piece of the envelope a proposal came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece {
    Bulk,
    Plateau,
    Tail,
}

impl DominatorSpec {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("envelope is defined for n >= 1"));
        }
        let nf = n as f64;
        let b = (PI + 1.0).powi(2) * (8.0 * (PI + 1.0) / 3.0).sqrt();
        let edge_sq = 4.0 * nf + 2.0;
        let edge = edge_sq.sqrt();
        let x1 = (edge_sq - PI * PI / (PI + 1.0).powi(2) * nf.cbrt()).sqrt();
        let tail_scale = b.sqrt() * (3.0 / (2.0 * 2f64.sqrt() * (PI + 1.0))).powf(0.25) * nf.powf(-1.0 / 6.0);
        let x2 = edge + tail_scale;
        let plateau = 8.0 * (PI + 1.0) / 3.0 * nf.powf(-1.0 / 6.0);
        let arc1 = (x1 / edge).asin();
        let p1 = 8.0 * PI / 3.0 * arc1;
        let p2 = plateau * (x2 - x1).abs();
        let p3 = b.sqrt() * (2.0 * 2f64.sqrt() / 3.0).powf(7.0 / 4.0) * (PI + 1.0).powf(0.75) * nf.powf(-1.0 / 3.0);
        Ok(DominatorSpec {
            n,
            b,
            x1,
            x2,
            edge,
            p1,
            p2,
            p3,
            tail_scale,
            plateau,
            tail_coeff: 2.0 * 2f64.sqrt() * b * b * nf.powf(-5.0 / 6.0),
            arc1,
        })
    }

    /// `integral_R h_n = 2 (p1 + p2 + p3)`, the expected number of
    /// proposals per accepted variate.
    pub fn total_mass(&self) -> f64 {
        2.0 * (self.p1 + self.p2 + self.p3)
    }

    pub fn plateau(&self) -> f64 {
        self.plateau
    }

    pub fn piece(&self, x: f64) -> Piece {
        let ax = x.abs();
        if ax <= self.x1 {
            Piece::Bulk
        } else if ax <= self.x2 {
            Piece::Plateau
        } else {
            Piece::Tail
        }
    }

    /// The envelope `h_n(x)`.
    #[inline]
    pub fn h(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax <= self.x1 {
            8.0 * PI / 3.0 / (self.edge * self.edge - ax * ax).sqrt()
        } else if ax <= self.x2 {
            self.plateau
        } else {
            self.tail_coeff / (ax - self.edge).powi(4)
        }
    }

    /// Draws from `h_n / integral h_n`: sign, piece selector, then position
    /// within the piece, in that order.
    #[inline]
    pub fn sample(&self, stream: &mut RandomStream) -> f64 {
        let sign = stream.rademacher();
        let u = stream.uniform();
        let v = stream.uniform();
        self.sample_from(sign, u, v)
    }

    /// Deterministic core of [`DominatorSpec::sample`]: `u` selects the piece
    /// and `v` is inverted within it.
    pub fn sample_from(&self, sign: f64, u: f64, v: f64) -> f64 {
        let total = self.p1 + self.p2 + self.p3;
        let magnitude = if u < self.p1 / total {
            self.bulk_inverse(v)
        } else if u < (self.p1 + self.p2) / total {
            self.x1 + (self.x2 - self.x1) * v
        } else {
            // v = 0 maps to +inf, which the caller rejects
            self.edge + self.tail_scale * v.powf(-1.0 / 3.0)
        };
        sign * magnitude
    }

    /// Inverse CDF of the bulk piece restricted to `[0, x1]`.
    pub fn bulk_inverse(&self, v: f64) -> f64 {
        self.edge * (v * self.arc1).sin().abs()
    }

    /// CDF of the bulk piece restricted to `[0, x1]`.
    pub fn bulk_cdf(&self, x: f64) -> f64 {
        ((x.clamp(0.0, self.x1) / self.edge).asin() / self.arc1).min(1.0)
    }

    /// CDF of `|X|` when `X` has density `h_n / integral h_n`.
    pub fn abs_cdf(&self, t: f64) -> f64 {
        let total = self.p1 + self.p2 + self.p3;
        if t <= 0.0 {
            0.0
        } else if t <= self.x1 {
            8.0 * PI / 3.0 * (t / self.edge).asin() / total
        } else if t <= self.x2 {
            (self.p1 + self.plateau * (t - self.x1)) / total
        } else {
            let tail_left = self.p3 * (self.tail_scale / (t - self.edge)).powi(3);
            (total - tail_left) / total
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature;

    #[test]
    fn breakpoints_for_n_one() {
        let s = DominatorSpec::new(1).unwrap();
        let expected = (6.0 - PI * PI / (PI + 1.0).powi(2)).sqrt();
        assert!((s.x1 - expected).abs() < 1e-15);
        assert!((s.x1 - 2.32907).abs() < 1e-5);
        assert!((s.h(0.0) - 8.0 * PI / (3.0 * 6f64.sqrt())).abs() < 1e-14);
        assert!((s.h(0.0) - 3.420_133).abs() < 1e-6);
        assert!(DominatorSpec::new(0).is_err());
    }

    #[test]
    fn ordering_and_continuity() {
        for &n in &[1u64, 2, 3, 10, 100, 12_345, 1_000_000] {
            let s = DominatorSpec::new(n).unwrap();
            assert!(0.0 < s.x1 && s.x1 < s.edge && s.edge < s.x2, "n={n}");
            let level = 8.0 * (PI + 1.0) / 3.0 * (n as f64).powf(-1.0 / 6.0);
            let bulk_at_x1 = 8.0 * PI / 3.0 / (s.edge * s.edge - s.x1 * s.x1).sqrt();
            let tail_at_x2 = s.tail_coeff / (s.x2 - s.edge).powi(4);
            // rounding x1 to f64 moves the steep bulk piece by ~ n^(2/3) ulps
            let tol = if n <= 12_345 { 1e-12 } else { 1e-8 };
            assert!((bulk_at_x1 / level - 1.0).abs() < tol, "n={n}");
            assert!((tail_at_x2 / level - 1.0).abs() < 1e-12, "n={n}");
            assert_eq!(s.h(s.edge), level);
            for &eps in &[1e-10, 1e-9] {
                assert!((s.h(s.x1 + eps) / s.h(s.x1 - eps) - 1.0).abs() < 1e-6);
                assert!((s.h(s.x2 + eps) / s.h(s.x2 - eps) - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn tail_mass_scales_as_cube_root() {
        for &n in &[1u64, 7, 1000] {
            let a = DominatorSpec::new(n).unwrap();
            let b = DominatorSpec::new(8 * n).unwrap();
            assert!((a.p3 / b.p3 - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn even() {
        let s = DominatorSpec::new(40).unwrap();
        for i in 0..200 {
            let x = i as f64 * 0.1;
            assert_eq!(s.h(x), s.h(-x));
        }
    }

    #[test]
    fn closed_form_masses_match_quadrature() {
        for &n in &[1u64, 10, 1000, 100_000] {
            let s = DominatorSpec::new(n).unwrap();
            let bulk = quadrature::integrate(|x| s.h(x), 0.0, s.x1, 1e-14).unwrap();
            let plateau = quadrature::integrate(|x| s.h(x), s.x1, s.x2, 1e-14).unwrap();
            let tail = quadrature::integrate_to_infinity(|x| s.h(x), s.x2, 1e-14).unwrap();
            let numeric = bulk + plateau + tail;
            let closed = s.p1 + s.p2 + s.p3;
            assert!((numeric / closed - 1.0).abs() < 1e-8, "n={n}: {numeric} vs {closed}");
        }
    }

    #[test]
    fn forced_branches() {
        let s = DominatorSpec::new(25).unwrap();
        let total = s.p1 + s.p2 + s.p3;
        assert_eq!(s.sample_from(1.0, 0.0, 0.0), 0.0);
        let at_x2 = s.sample_from(-1.0, (s.p1 + 0.5 * s.p2) / total, 1.0);
        assert!((at_x2 + s.x2).abs() < 1e-12);
        let tail = s.sample_from(1.0, 0.999_999_9, 1.0);
        assert!((tail - s.x2).abs() < 1e-12);
    }

    #[test]
    fn bulk_inversion_round_trip() {
        let s = DominatorSpec::new(321).unwrap();
        for i in 0..100 {
            let v = (i as f64 + 0.5) / 100.0;
            assert!((s.bulk_cdf(s.bulk_inverse(v)) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn abs_cdf_is_continuous_and_normalized() {
        let s = DominatorSpec::new(50).unwrap();
        assert!((s.abs_cdf(s.x1 - 1e-12) - s.abs_cdf(s.x1 + 1e-12)).abs() < 1e-9);
        assert!((s.abs_cdf(s.x2 - 1e-12) - s.abs_cdf(s.x2 + 1e-12)).abs() < 1e-9);
        assert!((s.abs_cdf(1e12) - 1.0).abs() < 1e-12);
        assert_eq!(s.abs_cdf(0.0), 0.0);
    }

    #[test]
    fn envelope_mass_is_bounded() {
        let mut masses = Vec::new();
        let mut n = 10u64;
        while n <= 1_000_000 {
            let s = DominatorSpec::new(n).unwrap();
            masses.push(s.total_mass());
            let outer = (n as f64).cbrt() * 2.0 * (s.p2 + s.p3);
            assert!(outer > 100.0 && outer < 200.0, "n={n}: {outer}");
            n *= 10;
        }
        // decreasing towards 4 pi^2 / 3 from above
        for w in masses.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert!(masses.iter().all(|&m| m > 4.0 * PI * PI / 3.0 && m < 100.0));
    }
}
