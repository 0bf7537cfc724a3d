//! Hermite polynomials, Hermite functions and the densities `phi_k^2`.
//!
//! `H_k` here is the probabilists' polynomial (`H_0 = 1`, `H_1 = x`,
//! `H_{k+1} = x H_k - k H_{k-1}`), and `phi_k = H_k e^{-x^2/4} / sqrt(k! sqrt(2 pi))`.
//! The raw recurrence overflows quickly (|H_k(2 sqrt k)| is of order
//! `e^k sqrt(k!)`), so [`phi_squared`] runs the normalized recurrence on
//! `psi_j = H_j / sqrt(j!)` and rescales the running pair by `2^-512`
//! whenever it grows past `2^512`, keeping the exponent on the side.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::quadrature::{self, Summation};
use crate::scaled::ScaledValue;

const RESCALE_ABOVE: f64 = 1.340_780_792_994_259_7e154; // 2^512
const RESCALE_BY: f64 = 7.458_340_731_200_207e-155; // 2^-512
const RESCALE_EXP: i64 = 512;

/// `ln(sqrt(2 pi))`
pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Value of `H_k(x)` by the three-term recurrence, O(k).
pub fn hermite_poly(k: u64, x: f64) -> ScaledValue {
    if k == 0 {
        return ScaledValue::ONE;
    }
    let (mut prev, mut cur, mut exp) = (1.0f64, x, 0i64);
    for j in 1..k {
        let next = x * cur - j as f64 * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            prev *= RESCALE_BY;
            cur *= RESCALE_BY;
            exp += RESCALE_EXP;
        }
    }
    ScaledValue::new(cur, exp)
}

/// One evaluation of the density `phi_k^2` at `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteEval {
    pub k: u64,
    pub x: f64,
    pub phi_sq: f64,
    /// `-inf` at zeros of `phi_k`.
    pub log_phi_sq: f64,
}

#[inline(always)]
fn coefficients(j: u64) -> (f64, f64) {
    let jf = j as f64;
    let jp1 = jf + 1.0;
    (1.0 / jp1.sqrt(), (jf / jp1).sqrt())
}

/// Runs the normalized recurrence up to `psi_k(x)`, with coefficient lookup
/// abstracted so cached and on-the-fly evaluation give identical bits.
#[inline(always)]
fn normalized_psi<C: Fn(u64) -> (f64, f64)>(k: u64, x: f64, coeff: C) -> ScaledValue {
    if k == 0 {
        return ScaledValue::ONE;
    }
    let (mut prev, mut cur, mut exp) = (1.0f64, x, 0i64);
    for j in 1..k {
        let (a, b) = coeff(j);
        let next = a * x * cur - b * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            prev *= RESCALE_BY;
            cur *= RESCALE_BY;
            exp += RESCALE_EXP;
        }
    }
    ScaledValue::new(cur, exp)
}

fn eval_from_psi(k: u64, x: f64, psi: ScaledValue) -> HermiteEval {
    let log_phi_sq = 2.0 * psi.ln_abs() - 0.5 * x * x - LN_SQRT_2PI;
    HermiteEval {
        k,
        x,
        phi_sq: log_phi_sq.exp(),
        log_phi_sq,
    }
}

/// `phi_k^2(x)` together with its logarithm. Uses `|x|`, so the result is
/// exactly even in `x`.
pub fn hermite_eval(k: u64, x: f64) -> HermiteEval {
    let ax = x.abs();
    eval_from_psi(k, x, normalized_psi(k, ax, coefficients))
}

/// The density `phi_k(x)^2`, O(k).
pub fn phi_squared(k: u64, x: f64) -> f64 {
    hermite_eval(k, x).phi_sq
}

/// Cached recurrence coefficients for repeated evaluation of `phi_k^2` with
/// `k` up to a fixed maximum. Results are bit-identical to [`phi_squared`].
#[derive(Clone, Debug)]
pub struct HermiteTable {
    coeffs: Vec<(f64, f64)>,
}

impl HermiteTable {
    pub fn new(max_k: u64) -> Self {
        HermiteTable {
            coeffs: (0..max_k.max(1)).map(coefficients).collect(),
        }
    }

    pub fn max_k(&self) -> u64 {
        self.coeffs.len() as u64
    }

    /// # Panics
    /// If `k` exceeds [`HermiteTable::max_k`].
    pub fn eval(&self, k: u64, x: f64) -> HermiteEval {
        assert!(k <= self.max_k(), "degree {k} beyond table capacity {}", self.max_k());
        let coeffs = &self.coeffs;
        eval_from_psi(k, x, normalized_psi(k, x.abs(), |j| coeffs[j as usize]))
    }

    pub fn phi_squared(&self, k: u64, x: f64) -> f64 {
        self.eval(k, x).phi_sq
    }
}

/// Density of one uniformly chosen eigenvalue of GUE(n):
/// `(1/n) sum_{k<n} phi_k(x)^2`, in one O(n) pass.
pub fn mixture_density(n: u64, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("mixture density needs n >= 1"));
    }
    let ax = x.abs();
    // sum of psi_j^2 for j <= current index, in the pair's current scale
    let mut sum = 1.0f64;
    let (mut prev, mut cur, mut exp) = (1.0f64, ax, 0i64);
    if n > 1 {
        sum += cur * cur;
    }
    for j in 1..n.saturating_sub(1) {
        let (a, b) = coefficients(j);
        let next = a * ax * cur - b * prev;
        prev = cur;
        cur = next;
        // the sum of squares overflows long before cur does
        if sum > RESCALE_ABOVE {
            prev *= RESCALE_BY;
            cur *= RESCALE_BY;
            sum *= RESCALE_BY * RESCALE_BY;
            exp += RESCALE_EXP;
        }
        sum += cur * cur;
    }
    let log = sum.ln() + 2.0 * exp as f64 * LN_2 - 0.5 * x * x - LN_SQRT_2PI - (n as f64).ln();
    Ok(log.exp())
}

/// Half-width of the oscillations of `phi_k^2` in the bulk, `pi / sqrt(4k+2)`.
pub fn oscillation_scale(k: u64) -> f64 {
    PI / (4.0 * k as f64 + 2.0).sqrt()
}

/// Point beyond which `phi_k^2` carries less than `1e-30` of mass.
pub fn support_cutoff(k: u64) -> f64 {
    2.0 * (k as f64 + 1.0).sqrt() + 12.0
}

/// `integral_{-inf}^{x} phi_k^2` by adaptive quadrature to absolute accuracy `tol`.
pub fn phi_sq_cdf(k: u64, x: f64, tol: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::param("cdf argument is NaN"));
    }
    let upper = x.abs().min(support_cutoff(k));
    let half = quadrature::integrate_panels(|t| phi_squared(k, t), 0.0, upper, oscillation_scale(k), 0.5 * tol)?;
    Ok((0.5 + x.signum() * half).clamp(0.0, 1.0))
}

/// Tabulated CDF of `phi_k^2` for evaluating many points cheaply.
///
/// Cumulative masses are stored at panel boundaries of width at most the
/// oscillation scale; a lookup integrates only the partial panel.
#[derive(Clone, Debug)]
pub struct PhiSqCdf {
    k: u64,
    width: f64,
    cutoff: f64,
    cumulative: Vec<f64>,
    tol: f64,
    table: HermiteTable,
}

impl PhiSqCdf {
    pub fn new(k: u64, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::param(format!("tolerance must be positive, got {tol}")));
        }
        let table = HermiteTable::new(k);
        let cutoff = support_cutoff(k);
        let panels = (cutoff / oscillation_scale(k)).ceil() as usize;
        let width = cutoff / panels as f64;
        let mut cumulative = Vec::with_capacity(panels + 1);
        let mut acc = Summation::default();
        cumulative.push(0.0);
        for i in 0..panels {
            let a = i as f64 * width;
            let piece = quadrature::integrate(|t| table.phi_squared(k, t), a, a + width, 0.5 * tol / panels as f64)?;
            acc.add(piece);
            cumulative.push(acc.value());
        }
        Ok(PhiSqCdf { k, width, cutoff, cumulative, tol, table })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Twice the integral over `[0, cutoff]`; 1 up to quadrature error.
    pub fn total_mass(&self) -> f64 {
        2.0 * self.cumulative[self.cumulative.len() - 1]
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::param("cdf argument is NaN"));
        }
        let t = x.abs();
        let half = if t >= self.cutoff {
            self.cumulative[self.cumulative.len() - 1]
        } else {
            let i = ((t / self.width) as usize).min(self.cumulative.len() - 2);
            let a = i as f64 * self.width;
            let partial = quadrature::integrate(|s| self.table.phi_squared(self.k, s), a, t, 0.5 * self.tol)?;
            self.cumulative[i] + partial
        };
        Ok((0.5 + x.signum() * half).clamp(0.0, 1.0))
    }
}
