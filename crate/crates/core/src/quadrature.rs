//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Globally adaptive: the panel with the largest error estimate is bisected
//! until the summed estimates fall below the tolerance. The error estimate of
//! a panel is the raw `|K15 - G7|` difference, which is pessimistic for
//! smooth integrands.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod panel: `(estimate, |K15 - G7|)`.
pub fn gauss_kronrod_15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` to absolute accuracy `tol`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return check_tol(tol).map(|_| 0.0);
    }
    integrate_panels(f, a, b, (b - a).abs(), tol)
}

/// Integrates over `[a, b]` after pre-splitting it into panels no wider than
/// `panel_width`. Suited to oscillatory integrands whose oscillation scale
/// is known.
pub fn integrate_panels<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panel_width: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(panel_width > 0.0) {
        return Err(Error::param("panel width must be positive"));
    }
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let panels = ((hi - lo) / panel_width).ceil().max(1.0) as usize;
    let width = (hi - lo) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(2 * panels);
    let mut total_error = 0.0;
    for i in 0..panels {
        let left = lo + i as f64 * width;
        let right = if i + 1 == panels { hi } else { left + width };
        let panel = Panel::new(&mut f, left, right);
        total_error += panel.error;
        heap.push(panel);
    }
    let budget = panels + MAX_REFINEMENTS;
    while total_error > tol {
        if heap.len() >= budget {
            return Err(worst_error(&heap, total_error, tol));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            heap.push(worst);
            return Err(worst_error(&heap, total_error, tol));
        }
        let left = Panel::new(&mut f, worst.a, mid);
        let right = Panel::new(&mut f, mid, worst.b);
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if heap.len() % 64 == 0 {
            // drift from the running update
            total_error = heap.iter().map(|p| p.error).sum();
        }
    }
    let mut total = Summation::default();
    for p in heap.iter() {
        if !p.estimate.is_finite() {
            return Err(Error::Convergence { a: p.a, b: p.b, estimate: p.error, tol });
        }
        total.add(p.estimate);
    }
    Ok(sign * total.value())
}

/// Integrates `f` over `[a, inf)` through the map `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, tol: f64) -> Result<f64> {
    integrate(
        |t| {
            let s = 1.0 - t;
            f(a + t / s) / (s * s)
        },
        0.0,
        1.0,
        tol,
    )
}

const MAX_REFINEMENTS: usize = 200_000;

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("quadrature tolerance must be positive, got {tol}")))
    }
}

fn worst_error(heap: &BinaryHeap<Panel>, total_error: f64, tol: f64) -> Error {
    let worst = heap.peek().expect("heap is never empty");
    Error::Convergence { a: worst.a, b: worst.b, estimate: total_error, tol }
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    estimate: f64,
    error: f64,
}

impl Panel {
    fn new<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Self {
        let (estimate, raw) = gauss_kronrod_15(f, a, b);
        // differences at the level of rounding are not refinable
        let error = if !estimate.is_finite() {
            f64::INFINITY
        } else if raw <= 50.0 * f64::EPSILON * estimate.abs() {
            0.0
        } else {
            raw
        };
        Panel { a, b, estimate, error }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Neumaier compensated summation.
#[derive(Default, Clone, Copy, Debug)]
pub(crate) struct Summation {
    sum: f64,
    compensation: f64,
}

impl Summation {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
