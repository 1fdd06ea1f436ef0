//! Reduction mod 1 and the additive character `e(x) = exp(2 pi i x)`.
//!
//! Phases such as `n^2 alpha / 2` grow quadratically with `n`, so every
//! evaluation of `e` goes through the fractional part first. Where the
//! argument is assembled from several large products the assembly is done
//! in double-double arithmetic and only the reduced value is rounded.

use num_complex::Complex64;
use std::f64::consts::TAU;
use twofloat::TwoFloat;

/// Fractional part in `[0, 1)`, also for negative arguments.
#[inline]
pub fn frac(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance to the nearest integer. Ties at `±1/2` give `1/2`.
#[inline]
pub fn nearest_int_dist(x: f64) -> f64 {
    (x - x.round_ties_even()).abs()
}

/// `e(x) = exp(2 pi i x)`, evaluated from the representative of `x` in `[-1/2, 1/2]`.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let r = x - x.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// Fractional part of a double-double value, rounded to `f64`.
#[inline]
pub fn frac_tf(x: TwoFloat) -> f64 {
    let shifted = x - x.hi().floor();
    frac(shifted.hi() + shifted.lo())
}

/// `e(x)` for a double-double argument.
#[inline]
pub fn e_tf(x: TwoFloat) -> Complex64 {
    e(frac_tf(x))
}
