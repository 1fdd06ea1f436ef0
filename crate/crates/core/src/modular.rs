//! Iwasawa coordinates on `SL(2,R)`, its action on `H x [0, 2pi)`, and the
//! Jacobi group `SL(2,R) ⋉ R^2` with its lattice acting on theta arguments.
//!
//! A matrix `M` factors uniquely as
//!
//! ```text
//! M = [1 u; 0 1] [v^{1/2} 0; 0 v^{-1/2}] [cos phi  -sin phi; sin phi  cos phi]
//! ```
//!
//! and we identify `M` with the frame point `(u + iv, phi)`. Left
//! multiplication becomes `g (tau, phi) = (g tau, phi + arg(c tau + d))`.

use crate::error::{Error, Result};
use crate::phase::frac;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use std::ops::Mul;

const DET_TOL: f64 = 1e-9;
const DOMAIN_TOL: f64 = 1e-12;
const MAX_REDUCTION_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Horocycle factor `n(u)`.
    pub fn shear(u: f64) -> Self {
        Mat2::new(1.0, u, 0.0, 1.0)
    }

    /// Geodesic factor `Phi^t = diag(e^{-t/2}, e^{t/2})`.
    pub fn geodesic(t: f64) -> Self {
        Mat2::new((-0.5 * t).exp(), 0.0, 0.0, (0.5 * t).exp())
    }

    pub fn rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, r: Mat2) -> Mat2 {
        Mat2::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

/// Integer 2x2 matrix, used for elements of `SL(2,Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntMat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMat2 {
    pub const IDENTITY: IntMat2 = IntMat2::new(1, 0, 0, 1);
    /// `T = [1 1; 0 1]`
    pub const T: IntMat2 = IntMat2::new(1, 1, 0, 1);
    /// `S = [0 -1; 1 0]`
    pub const S: IntMat2 = IntMat2::new(0, -1, 1, 0);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMat2 { a, b, c, d }
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    pub fn to_real(self) -> Mat2 {
        Mat2::new(self.a as f64, self.b as f64, self.c as f64, self.d as f64)
    }
}

impl Mul for IntMat2 {
    type Output = IntMat2;

    fn mul(self, r: IntMat2) -> IntMat2 {
        IntMat2::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

/// Iwasawa coordinates `(tau = u + iv, phi)` of an element of `SL(2,R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FramePoint {
    u: f64,
    v: f64,
    phi: f64,
}

/// Reduce an angle into `[0, 2pi)`.
pub fn reduce_angle(phi: f64) -> f64 {
    let r = phi - TAU * (phi / TAU).floor();
    if !(0.0..TAU).contains(&r) {
        0.0
    } else {
        r
    }
}

impl FramePoint {
    /// Panics unless `v > 0` and all coordinates are finite; use
    /// [`FramePoint::try_new`] for untrusted input.
    pub fn new(u: f64, v: f64, phi: f64) -> Self {
        Self::try_new(u, v, phi).expect("invalid frame point")
    }

    pub fn try_new(u: f64, v: f64, phi: f64) -> Result<Self> {
        if !(u.is_finite() && v.is_finite() && phi.is_finite()) || v <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "frame point needs finite u, phi and v > 0, got ({u}, {v}, {phi})"
            )));
        }
        Ok(FramePoint {
            u,
            v,
            phi: reduce_angle(phi),
        })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn tau(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }
}

/// Theta function argument: a frame point with `xi = (x, y)` on the torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaArg {
    pub frame: FramePoint,
    x: f64,
    y: f64,
}

impl ThetaArg {
    /// `x` and `y` are reduced mod 1.
    pub fn new(frame: FramePoint, x: f64, y: f64) -> Self {
        ThetaArg {
            frame,
            x: frac(x),
            y: frac(y),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// Element `(gamma; (ab/2, cd/2) + m)` of the lattice in the Jacobi group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiElement {
    gamma: IntMat2,
    zeta: [f64; 2],
}

impl JacobiElement {
    pub fn new(gamma: IntMat2, m: [i64; 2]) -> Result<Self> {
        if gamma.det() != 1 {
            return Err(Error::NotUnimodular {
                det: gamma.det() as f64,
            });
        }
        let zeta = [
            0.5 * (gamma.a * gamma.b) as f64 + m[0] as f64,
            0.5 * (gamma.c * gamma.d) as f64 + m[1] as f64,
        ];
        Ok(JacobiElement { gamma, zeta })
    }

    pub fn identity() -> Self {
        JacobiElement {
            gamma: IntMat2::IDENTITY,
            zeta: [0.0, 0.0],
        }
    }

    pub fn gamma(&self) -> IntMat2 {
        self.gamma
    }

    pub fn zeta(&self) -> [f64; 2] {
        self.zeta
    }

    /// The generators `(T; (1/2, 0))`, `(S; (0, 0))`, `(I; (1, 0))`, `(I; (0, 1))`.
    pub fn generators() -> [JacobiElement; 4] {
        [
            JacobiElement::new(IntMat2::T, [0, 0]).expect("T in SL(2,Z)"),
            JacobiElement::new(IntMat2::S, [0, 0]).expect("S in SL(2,Z)"),
            JacobiElement::new(IntMat2::IDENTITY, [1, 0]).expect("I in SL(2,Z)"),
            JacobiElement::new(IntMat2::IDENTITY, [0, 1]).expect("I in SL(2,Z)"),
        ]
    }
}

pub fn frame_to_matrix(f: &FramePoint) -> Mat2 {
    let sv = f.v.sqrt();
    Mat2::shear(f.u) * Mat2::new(sv, 0.0, 0.0, 1.0 / sv) * Mat2::rotation(f.phi)
}

/// Iwasawa coordinates of `m`: its action on the base point `(i, 0)`.
pub fn matrix_to_frame(m: &Mat2) -> Result<FramePoint> {
    let det = m.det();
    if !det.is_finite() || (det - 1.0).abs() > DET_TOL {
        return Err(Error::NotUnimodular { det });
    }
    let denom = Complex64::new(m.d, m.c);
    if denom.norm() < 1e-300 {
        return Err(Error::DegenerateDenominator);
    }
    let tau = Complex64::new(m.b, m.a) / denom;
    FramePoint::try_new(tau.re, tau.im, m.c.atan2(m.d))
}

/// `g (tau, phi) = ((a tau + b) / (c tau + d), phi + arg(c tau + d))`.
pub fn mobius_act(g: &Mat2, f: &FramePoint) -> Result<FramePoint> {
    let det = g.det();
    if !det.is_finite() || (det - 1.0).abs() > DET_TOL {
        return Err(Error::NotUnimodular { det });
    }
    // fused real parts keep c u + d accurate when it nearly cancels
    let denom = Complex64::new(g.c.mul_add(f.u, g.d), g.c * f.v);
    if denom.norm() < 1e-300 {
        return Err(Error::DegenerateDenominator);
    }
    let image = Complex64::new(g.a.mul_add(f.u, g.b), g.a * f.v) / denom;
    // Im(g tau) = v / |c tau + d|^2 avoids cancellation in the quotient.
    let v = f.v / denom.norm_sqr();
    FramePoint::try_new(image.re, v, f.phi + denom.arg())
}

/// Left action of the Jacobi lattice element on a theta argument.
pub fn jacobi_act(h: &JacobiElement, arg: &ThetaArg) -> Result<ThetaArg> {
    let g = h.gamma;
    let frame = mobius_act(&g.to_real(), &arg.frame)?;
    let x = h.zeta[0] + g.a as f64 * arg.x + g.b as f64 * arg.y;
    let y = h.zeta[1] + g.c as f64 * arg.x + g.d as f64 * arg.y;
    Ok(ThetaArg::new(frame, x, y))
}

/// Moves `tau` into the standard fundamental domain
/// `|u| <= 1/2, |tau| >= 1`, carrying `phi` along. Returns the element of
/// `SL(2,Z)` used and the image. Boundary ties resolve toward `u >= 0`.
pub fn reduce_fundamental(f: &FramePoint) -> Result<(IntMat2, FramePoint)> {
    let mut gamma = IntMat2::IDENTITY;
    let mut cur = *f;
    for _ in 0..MAX_REDUCTION_STEPS {
        // shift u into (-1/2, 1/2]
        let n = (cur.u - 0.5).ceil();
        if n != 0.0 {
            let shift = IntMat2::new(1, -(n as i64), 0, 1);
            cur = mobius_act(&shift.to_real(), &cur)?;
            gamma = shift * gamma;
        }
        let r2 = cur.u * cur.u + cur.v * cur.v;
        if r2 < 1.0 - DOMAIN_TOL {
            cur = mobius_act(&IntMat2::S.to_real(), &cur)?;
            gamma = IntMat2::S * gamma;
            continue;
        }
        if r2 <= 1.0 + DOMAIN_TOL && cur.u < 0.0 {
            // on the unit circle S reflects u -> -u
            cur = mobius_act(&IntMat2::S.to_real(), &cur)?;
            gamma = IntMat2::S * gamma;
        }
        return Ok((gamma, cur));
    }
    Err(Error::ReductionDidNotTerminate {
        steps: MAX_REDUCTION_STEPS,
    })
}

/// `n(u) Phi^t` in Iwasawa coordinates: `(u + i e^{-t}, 0)`.
pub fn geodesic_horocycle_point(u: f64, t: f64) -> FramePoint {
    FramePoint::new(u, (-t).exp(), 0.0)
}

/// Angular distance between two angles, accounting for wrap-around.
pub fn angle_dist(a: f64, b: f64) -> f64 {
    let d = reduce_angle(a - b);
    d.min(TAU - d)
}

/// True when `phi` is within `tol` of an integer multiple of `pi`.
pub fn near_multiple_of_pi(phi: f64, tol: f64) -> bool {
    let r = reduce_angle(phi);
    r < tol || (r - PI).abs() < tol || TAU - r < tol
}
