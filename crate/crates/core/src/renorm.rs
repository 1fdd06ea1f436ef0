//! Diophantine renormalization data for the horocycle point `u + i N^{-2}`.
//!
//! `c_N(u)` is the least `c >= 1` with `||c u|| <= 1/N`, `d` the integer with
//! `-1/2 <= c u + d < 1/2`, and `a` the inverse of `d` modulo `c`. The matrix
//! `gamma = ((a, b), (c, d))` moves `(u + i N^{-2}, 0)` to a frame whose
//! height `c^{-2}`-scaled coordinates stay bounded along good subsequences.

use crate::error::{Error, Result};
use crate::modular::{mobius_act, FramePoint, IntMat2};
use crate::phase::frac;
use serde::Serialize;
use std::ops::RangeInclusive;
use twofloat::TwoFloat;

/// Bound on the residuals of the frame relations.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenormData {
    pub n: u64,
    pub u: f64,
    pub c: u64,
    pub d: i64,
    pub a: u64,
    pub b: i64,
    pub gamma: IntMat2,
    pub omega: f64,
    pub varphi: f64,
    /// `N^2 ||c u|| / c`
    pub excursion: f64,
    /// `c / N`
    pub shrink: f64,
}

/// `c u` exactly, as a double-double.
fn scaled(u: f64, c: u64) -> TwoFloat {
    TwoFloat::new_mul(c as f64, u)
}

fn nearest_int_dist_tf(x: TwoFloat) -> f64 {
    let r = x - x.hi().round();
    let r = r.hi() + r.lo();
    (r - r.round()).abs()
}

fn scan_c(u: f64, n: u64, start: u64) -> Result<u64> {
    let bound = 1.0 / n as f64;
    (start.max(1)..=n)
        .find(|&c| nearest_int_dist_tf(scaled(u, c)) <= bound)
        .ok_or(Error::DirichletScanFailed { u, n })
}

/// Least `c` in `1..=N` with `||c u|| <= 1/N`, by exhaustive scan.
pub fn c_of(u: f64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    scan_c(u, n, 1)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `d` modulo `c` in `[0, c)`, by the extended Euclidean algorithm.
fn inverse_mod(d: i128, c: i128) -> Option<i128> {
    let (mut r0, mut r1) = (d.rem_euclid(c), c);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(c))
}

fn data_for_c(u: f64, n: u64, c: u64) -> Result<RenormData> {
    let cu = scaled(u, c);
    // d = -floor(c u + 1/2), so that c u + d lies in [-1/2, 1/2)
    let shifted = cu + 0.5;
    let mut fl = shifted.hi().floor();
    if shifted.hi() == fl && shifted.lo() < 0.0 {
        fl -= 1.0;
    }
    let d = -(fl as i64);
    let (ci, di) = (c as i128, d as i128);
    let g = gcd(ci, di);
    if g != 1 {
        return Err(Error::InconsistentConvergent { c: c as i64, d, gcd: g as i64 });
    }
    let a = if c == 1 {
        0
    } else {
        inverse_mod(di, ci).ok_or(Error::InconsistentConvergent { c: c as i64, d, gcd: g as i64 })?
    };
    let num = a * di - 1;
    if num % ci != 0 {
        return Err(Error::InconsistentConvergent { c: c as i64, d, gcd: g as i64 });
    }
    let b = num / ci;
    let gamma = IntMat2::new(a as i64, b as i64, c as i64, d);
    debug_assert_eq!(gamma.det(), 1);
    let dist = nearest_int_dist_tf(cu);
    let nf = n as f64;
    Ok(RenormData {
        n,
        u,
        c,
        d,
        a: a as u64,
        b: b as i64,
        gamma,
        omega: frac(a as f64 / c as f64),
        varphi: (n % c) as f64 / c as f64,
        excursion: nf * nf * dist / c as f64,
        shrink: c as f64 / nf,
    })
}

pub fn renorm_data(u: f64, n: u64) -> Result<RenormData> {
    let c = c_of(u, n)?;
    data_for_c(u, n, c)
}

/// The image frame and the residuals of its defining relations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenormFrame {
    pub frame: FramePoint,
    /// `v^{-1/2} cos phi - N (c u + d)`
    pub cos_residual: f64,
    /// `v^{-1/2} sin phi - c / N`
    pub sin_residual: f64,
    /// `u + v cot phi - a / c`
    pub horocycle_residual: f64,
    /// `(1 + N^4 (c u + d)^2 / c^2)^{-1/2}`
    pub sin_phi_closed: f64,
    /// `sin phi - sin_phi_closed`
    pub sin_phi_residual: f64,
}

impl RenormFrame {
    pub fn max_residual(&self) -> f64 {
        self.cos_residual
            .abs()
            .max(self.sin_residual.abs())
            .max(self.horocycle_residual.abs())
            .max(self.sin_phi_residual.abs())
    }
}

/// `gamma (u + i N^{-2}, 0)` with the relations it satisfies.
pub fn renorm_frame(u: f64, n: u64) -> Result<(RenormData, RenormFrame)> {
    let data = renorm_data(u, n)?;
    let nf = n as f64;
    let start = FramePoint::try_new(u, 1.0 / (nf * nf), 0.0)?;
    let frame = mobius_act(&data.gamma.to_real(), &start)?;
    let (c, a) = (data.c as f64, data.a as f64);
    let offset = scaled(u, data.c) + data.d as f64;
    let offset = offset.hi() + offset.lo();
    let (s, co) = frame.phi().sin_cos();
    let root = frame.v().sqrt();
    let ratio = nf * nf * offset / c;
    let sin_phi_closed = 1.0 / (1.0 + ratio * ratio).sqrt();
    Ok((
        data,
        RenormFrame {
            frame,
            cos_residual: co / root - nf * offset,
            sin_residual: s / root - c / nf,
            horocycle_residual: frame.u() + frame.v() * co / s - a / c,
            sin_phi_closed,
            sin_phi_residual: s - sin_phi_closed,
        },
    ))
}

/// Filter for subsequence scans: `shrink <= shrink_max` and
/// `sin phi >= (1 + excursion_max^2)^{-1/2}`, i.e. `excursion <= excursion_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanFilter {
    pub excursion_max: f64,
    pub shrink_max: f64,
}

/// Records for every `N` in the range that pass the filter, in order of `N`.
/// Relies on `c_N` being nondecreasing in `N`.
pub fn subsequence_scan(u: f64, range: RangeInclusive<u64>, filter: ScanFilter) -> Result<Vec<RenormData>> {
    let sin_min = 1.0 / (1.0 + filter.excursion_max * filter.excursion_max).sqrt();
    let mut out = Vec::new();
    let mut c = 1;
    for n in range {
        if n == 0 {
            continue;
        }
        c = scan_c(u, n, c)?;
        let data = data_for_c(u, n, c)?;
        let sin_phi = 1.0 / (1.0 + data.excursion * data.excursion).sqrt();
        if data.shrink <= filter.shrink_max && sin_phi >= sin_min {
            out.push(data);
        }
    }
    Ok(out)
}
