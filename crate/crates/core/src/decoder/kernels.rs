//! Check-node and variable-node combining functions.

use std::ops::{Add, Neg, Sub};

/// Types the min-sum kernels operate on: integer labels and real LLRs.
pub trait Llr:
    Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self>
{
    const ZERO: Self;
    fn magnitude(self) -> Self;
}

impl Llr for i64 {
    const ZERO: Self = 0;
    fn magnitude(self) -> Self {
        self.abs()
    }
}

impl Llr for f64 {
    const ZERO: Self = 0.0;
    fn magnitude(self) -> Self {
        self.abs()
    }
}

/// `sign(a) sign(b) min(|a|, |b|)` with `sign(0) = 0`.
#[inline]
pub fn f_tilde<T: Llr>(a: T, b: T) -> T {
    if a == T::ZERO || b == T::ZERO {
        return T::ZERO;
    }
    let (ma, mb) = (a.magnitude(), b.magnitude());
    let m = if ma < mb { ma } else { mb };
    if (a > T::ZERO) == (b > T::ZERO) {
        m
    } else {
        -m
    }
}

/// `b + a` when `u = 0` and `b - a` when `u = 1`.
#[inline]
pub fn g<T: Llr>(u: u8, a: T, b: T) -> T {
    if u == 0 {
        b + a
    } else {
        b - a
    }
}

/// Exact check-node function on natural-log LLRs.
#[inline]
pub fn f_exact(a: f64, b: f64) -> f64 {
    const LIMIT: f64 = 1.0 - 1e-15;
    let t = ((0.5 * a).tanh() * (0.5 * b).tanh()).clamp(-LIMIT, LIMIT);
    2.0 * t.atanh()
}
