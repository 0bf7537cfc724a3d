//! Floating-point values with an out-of-band base-2 exponent.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

/// `mantissa * 2^exponent` with `|mantissa|` in `[1, 2)`, or exactly zero.
///
/// Hermite polynomials evaluated near the edge of the spectrum reach
/// magnitudes around `e^n`, far outside the `f64` range, so the recurrences
/// carry their exponent separately and hand results back in this form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledValue {
    mantissa: f64,
    exponent: i64,
}

impl ScaledValue {
    pub const ZERO: ScaledValue = ScaledValue { mantissa: 0.0, exponent: 0 };
    pub const ONE: ScaledValue = ScaledValue { mantissa: 1.0, exponent: 0 };

    /// Normalizes `value * 2^exponent`.
    pub fn new(value: f64, exponent: i64) -> Self {
        if value == 0.0 || !value.is_finite() {
            return ScaledValue {
                mantissa: if value == 0.0 { 0.0 } else { value },
                exponent: 0,
            };
        }
        let (m, e) = libm::frexp(value);
        // frexp gives |m| in [0.5, 1)
        ScaledValue {
            mantissa: m * 2.0,
            exponent: exponent + e as i64 - 1,
        }
    }

    pub fn from_f64(value: f64) -> Self {
        Self::new(value, 0)
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn signum(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.mantissa == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.mantissa.abs().ln() + self.exponent as f64 * std::f64::consts::LN_2
        }
    }

    /// Nearest `f64`; saturates to infinity or flushes to zero out of range.
    pub fn to_f64(&self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        if self.exponent > 1100 {
            return self.mantissa.signum() * f64::INFINITY;
        }
        if self.exponent < -1100 {
            return 0.0 * self.mantissa.signum();
        }
        libm::ldexp(self.mantissa, self.exponent as i32)
    }

    pub fn abs(&self) -> Self {
        ScaledValue { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    pub fn add(self, other: ScaledValue) -> ScaledValue {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= other.exponent { (self, other) } else { (other, self) };
        let shift = big.exponent - small.exponent;
        if shift > 60 {
            return big;
        }
        let sum = big.mantissa + libm::ldexp(small.mantissa, -(shift as i32));
        ScaledValue::new(sum, big.exponent)
    }

    pub fn sub(self, other: ScaledValue) -> ScaledValue {
        self.add(-other)
    }

    pub fn powi(self, p: u32) -> ScaledValue {
        let mut acc = ScaledValue::ONE;
        for _ in 0..p {
            acc = acc * self;
        }
        acc
    }
}

impl Neg for ScaledValue {
    type Output = ScaledValue;
    fn neg(self) -> ScaledValue {
        ScaledValue { mantissa: -self.mantissa, exponent: self.exponent }
    }
}

impl Mul for ScaledValue {
    type Output = ScaledValue;
    fn mul(self, rhs: ScaledValue) -> ScaledValue {
        ScaledValue::new(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Mul<f64> for ScaledValue {
    type Output = ScaledValue;
    fn mul(self, rhs: f64) -> ScaledValue {
        ScaledValue::new(self.mantissa * rhs, self.exponent)
    }
}

impl PartialOrd for ScaledValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.sub(*other).mantissa.partial_cmp(&0.0)
    }
}

impl fmt::Display for ScaledValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent.abs() < 1000 {
            write!(f, "{}", self.to_f64())
        } else {
            write!(f, "{}*2^{}", self.mantissa, self.exponent)
        }
    }
}
