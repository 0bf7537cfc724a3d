//! Constant-time approximation of `phi_n^2` with certified error bounds.
//!
//! Inside `|x| < 2 sqrt(n+1)`, `H_n(x) = A_n(x) (B_n(x) + mu R_n(x))` with
//! `|mu| <= 4.2`, where, for `alpha = arccos(x / (2 sqrt(n+1)))`,
//!
//! ```text
//! A_n = Gamma(n+1)/pi * e^{(n+1)/2 + x^2/4} / (n+1)^{n/2}
//! B_n = sqrt(pi) / sqrt((n+1) sin alpha) * sin((n+1)/2 (sin 2alpha - 2alpha) + alpha/2 + 3pi/4)
//! R_n = 1 / (3 (n+1) sin^2 alpha)
//! ```
//!
//! Dropping the `mu` term gives `f_n`, and bounding `|mu|` by 4.2 gives the
//! gaps `eps_plus`, `eps_minus` so that
//! `(f - eps_minus)_+ <= phi_n^2 <= min(f + eps_plus, h_n)`.

use std::f64::consts::PI;

use crate::dominator::DominatorSpec;
use crate::error::{Error, Result};
use crate::hermite::LN_SQRT_2PI;

const MU_BOUND: f64 = 4.2;
const EDGE_GUARD: f64 = 1e-12;

/// Per-`n` constants of the approximation.
#[derive(Clone, Copy, Debug)]
pub struct VanVeen {
    n: u64,
    np1: f64,
    /// `2 sqrt(n+1)`, the edge of the representation's domain.
    domain: f64,
    ln_gamma_np1: f64,
    ln_np1: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VanVeenTerms {
    pub n: u64,
    pub x: f64,
    /// Radians, in `(0, pi/2]`.
    pub alpha: f64,
    /// `ln(A_n^2 e^{-x^2/2} / (sqrt(2 pi) n!))`
    pub log_prefactor: f64,
    pub b_term: f64,
    pub r_term: f64,
    pub f: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
}

impl VanVeenTerms {
    /// `(f - eps_minus)_+`
    pub fn lower(&self) -> f64 {
        (self.f - self.eps_minus).max(0.0)
    }

    /// `f + eps_plus`
    pub fn upper(&self) -> f64 {
        self.f + self.eps_plus
    }
}

impl VanVeen {
    pub fn new(n: u64) -> Self {
        let np1 = n as f64 + 1.0;
        VanVeen {
            n,
            np1,
            domain: 2.0 * np1.sqrt(),
            ln_gamma_np1: libm::lgamma(np1),
            ln_np1: np1.ln(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `2 sqrt(n+1)`
    pub fn domain(&self) -> f64 {
        self.domain
    }

    /// `f_n(x)`, taken as zero outside the domain.
    pub fn f(&self, x: f64) -> f64 {
        match self.evaluate(x) {
            Ok(t) => t.f,
            Err(_) => 0.0,
        }
    }

    pub fn evaluate(&self, x: f64) -> Result<VanVeenTerms> {
        let ax = x.abs();
        if !(ax < self.domain * (1.0 - EDGE_GUARD)) {
            return Err(Error::Domain {
                what: "van Veen approximation",
                x,
                limit: self.domain,
            });
        }
        let alpha = (ax / self.domain).acos();
        let sin_a = alpha.sin();
        let np1 = self.np1;
        let nf = self.n as f64;

        let log_a = self.ln_gamma_np1 - PI.ln() + 0.5 * np1 + 0.25 * ax * ax - 0.5 * nf * self.ln_np1;
        let log_prefactor = 2.0 * log_a - 0.5 * ax * ax - LN_SQRT_2PI - self.ln_gamma_np1;
        let phase = 0.5 * np1 * ((2.0 * alpha).sin() - 2.0 * alpha) + 0.5 * alpha + 0.75 * PI;
        let b_term = PI.sqrt() / (np1 * sin_a).sqrt() * phase.sin();
        let r_term = 1.0 / (3.0 * np1 * sin_a * sin_a);

        let prefactor = log_prefactor.exp();
        let f = b_term * b_term * prefactor;
        let eps_plus = prefactor * (2.0 * MU_BOUND * b_term.max(0.0) * r_term + MU_BOUND * MU_BOUND * r_term * r_term);
        let eps_minus = prefactor * 2.0 * MU_BOUND * (b_term * r_term).abs();
        Ok(VanVeenTerms {
            n: self.n,
            x,
            alpha,
            log_prefactor,
            b_term,
            r_term,
            f,
            eps_plus,
            eps_minus,
        })
    }

    /// Gap between the upper bound `min(f + eps_plus, h_n)` and the lower
    /// bound `(f - eps_minus)_+`.
    pub fn delta_eps(&self, envelope: &DominatorSpec, x: f64) -> Result<f64> {
        let t = self.evaluate(x)?;
        Ok((t.upper().min(envelope.h(x)) - t.lower()).max(0.0))
    }
}

pub fn evaluate(n: u64, x: f64) -> Result<VanVeenTerms> {
    VanVeen::new(n).evaluate(x)
}

pub fn delta_eps(n: u64, x: f64) -> Result<f64> {
    VanVeen::new(n).delta_eps(&DominatorSpec::new(n.max(1))?, x)
}
