//! Theta series `Theta_f(tau, phi; xi)` for the Gaussian and the sharp
//! cut-off window, the transformed windows `f_phi`, and Monte Carlo
//! estimates of `nu_f[F](M)`.
//!
//! ```text
//! Theta_f(u + iv, phi; (x, y)) = v^{1/4} sum_n f_phi((n - y) v^{1/2}) e((n - y)^2 u / 2 + n x)
//! ```
//!
//! `f_phi` is `f` at `phi = 0`, `f(-w)` at `phi = pi`, and otherwise the
//! oscillatory integral
//! `|sin phi|^{-1/2} ∫ e[((w^2 + w'^2) cos phi / 2 - w w') / sin phi] f(w') dw'`.

use crate::error::{Error, Result};
use crate::modular::{near_multiple_of_pi, reduce_angle, FramePoint, ThetaArg};
use crate::phase::{e, e_tf, frac};
use crate::quad::composite_complex;
use crate::rng::{derive_seed, substream};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use twofloat::TwoFloat;

/// Angles within this distance of a multiple of `pi` use the exact cases.
pub const EXACT_PHI_TOL: f64 = 1e-12;
/// Below this `|sin phi|` the oscillatory integral is refused.
pub const AXIS_SIN_TOL: f64 = 1e-8;
/// `chi^(0)` series are only formed for `|sin phi|` at least this large.
pub const CHI0_SIN_BAND: f64 = 0.05;
/// Gaussian terms with `|(n - y) v^{1/2}| > GAUSSIAN_CUTOFF` are below 1e-110.
pub const GAUSSIAN_CUTOFF: f64 = 9.0;
/// Integration range `[-8, 8]` for the Gaussian window.
pub const GAUSSIAN_SUPPORT: f64 = 8.0;
const BASE_PANELS_PER_UNIT: f64 = 16.0;
const POLE_TOL: f64 = 1e-12;
const NU_TAG: u64 = 0x4E55;

/// `2^{1/4}`, the L2 normalization of `e^{-pi w^2}`.
const GAUSS_NORM: f64 = 1.189_207_115_002_721;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowFunction {
    /// Characteristic function of `(0, 1]`.
    Indicator,
    /// `2^{1/4} e^{-pi w^2}`.
    Gaussian,
}

impl WindowFunction {
    pub fn eval(&self, w: f64) -> f64 {
        match self {
            WindowFunction::Indicator => {
                if w > 0.0 && w <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            WindowFunction::Gaussian => GAUSS_NORM * (-PI * w * w).exp(),
        }
    }

    /// Both shipped windows have unit L2 norm.
    pub fn l2_norm(&self) -> f64 {
        1.0
    }

    fn support(&self) -> (f64, f64) {
        match self {
            WindowFunction::Indicator => (0.0, 1.0),
            WindowFunction::Gaussian => (-GAUSSIAN_SUPPORT, GAUSSIAN_SUPPORT),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            WindowFunction::Indicator => "indicator_01",
            WindowFunction::Gaussian => "gaussian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationPolicy {
    /// Symmetric cutoff `|n| <= n_max` for slowly decaying series.
    pub n_max: u32,
    /// Multiplier on the oscillation-adapted panel density.
    pub panel_scale: u32,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            n_max: 1000,
            panel_scale: 1,
        }
    }
}

enum PhiCase {
    Zero,
    Pi,
    Generic { sin: f64, cos: f64 },
}

fn classify(phi: f64) -> Result<PhiCase> {
    let r = reduce_angle(phi);
    if r < EXACT_PHI_TOL || TAU - r < EXACT_PHI_TOL {
        return Ok(PhiCase::Zero);
    }
    if (r - PI).abs() < EXACT_PHI_TOL {
        return Ok(PhiCase::Pi);
    }
    let (sin, cos) = r.sin_cos();
    if sin.abs() < AXIS_SIN_TOL {
        return Err(Error::PhiNearAxis { phi });
    }
    Ok(PhiCase::Generic { sin, cos })
}

/// `f_phi(w)` with the default panel density.
pub fn window_transform(f: WindowFunction, phi: f64, w: f64) -> Result<Complex64> {
    window_transform_refined(f, phi, w, 1)
}

/// `f_phi(w)`, with the generic case evaluated by composite Gauss–Legendre
/// quadrature over the support of `f`. The panel density per unit length is
/// `panel_scale * (ceil(|w| / |sin phi|) + ceil(|cot phi|) + 16)`.
pub fn window_transform_refined(
    f: WindowFunction,
    phi: f64,
    w: f64,
    panel_scale: u32,
) -> Result<Complex64> {
    match classify(phi)? {
        PhiCase::Zero => Ok(Complex64::new(f.eval(w), 0.0)),
        PhiCase::Pi => Ok(Complex64::new(f.eval(-w), 0.0)),
        PhiCase::Generic { sin, cos } => {
            let cot = cos / sin;
            let (a, b) = f.support();
            let per_unit = panel_scale.max(1) as f64
                * ((w.abs() / sin.abs()).ceil() + cot.abs().ceil() + BASE_PANELS_PER_UNIT);
            let panels = (per_unit * (b - a)).ceil() as usize;
            // the w^2 part of the phase is constant in w'
            let outer = e(frac(0.5 * w * w * cot));
            let inner = composite_complex(a, b, panels, |wp| {
                e((0.5 * wp * wp * cos - w * wp) / sin) * f.eval(wp)
            });
            Ok(outer * inner / sin.abs().sqrt())
        }
    }
}

/// Closed form of `f_phi` for the Gaussian window:
/// `f_phi(w) = |sin phi|^{-1/2} (1 - i cot phi)^{-1/2} f(w)` off the axis.
pub fn gaussian_transform(phi: f64, w: f64) -> Complex64 {
    gaussian_phase(phi) * WindowFunction::Gaussian.eval(w)
}

fn gaussian_phase(phi: f64) -> Complex64 {
    match classify(phi) {
        Ok(PhiCase::Zero) | Ok(PhiCase::Pi) => Complex64::new(1.0, 0.0),
        _ => {
            let (sin, cos) = reduce_angle(phi).sin_cos();
            let z = Complex64::new(1.0, -cos / sin);
            z.sqrt().inv() / sin.abs().sqrt()
        }
    }
}

/// Sign `eps_phi`: `+1` on `[0, pi)`, `-1` on `[pi, 2pi)`.
pub fn eps_phi(phi: f64) -> f64 {
    if reduce_angle(phi) < PI {
        1.0
    } else {
        -1.0
    }
}

/// Leading-order approximation of `chi_phi(w)` for large `|w|`:
///
/// ```text
/// chi0_phi(w) = eps_phi |sin phi|^{1/2} e(w^2 cot phi / 2) (1 - e(cot phi / 2 - w / sin phi)) / (2 pi i w)
/// ```
pub fn chi0_window(phi: f64, w: f64) -> Result<Complex64> {
    if w == 0.0 {
        return Err(Error::WindowPole);
    }
    let r = reduce_angle(phi);
    let (sin, cos) = r.sin_cos();
    if near_multiple_of_pi(r, 1e-8) {
        return Err(Error::PhiNearAxis { phi });
    }
    let cot = cos / sin;
    let numer = Complex64::new(1.0, 0.0) - e(frac(0.5 * cot - w / sin));
    let prefactor = eps_phi(r) * sin.abs().sqrt();
    Ok(e(frac(0.5 * w * w * cot)) * numer * prefactor / Complex64::new(0.0, TAU * w))
}

fn theta_series<F>(u: f64, v: f64, x: f64, y: f64, n_lo: i64, n_hi: i64, mut coeff: F) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    let sv = v.sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in n_lo..=n_hi {
        let m = n as f64 - y;
        let phase = frac(0.5 * m * m * u) + frac(n as f64 * x);
        acc += coeff(m * sv) * e(phase);
    }
    acc * v.powf(0.25)
}

/// `Theta_f(arg)`. The Gaussian is summed over `|(n - y) v^{1/2}| <= 9` and is
/// available at every `phi`; the indicator only at `phi = 0, pi`, where the
/// sum is finite and exact.
pub fn theta(f: WindowFunction, arg: &ThetaArg, trunc: &TruncationPolicy) -> Result<Complex64> {
    let _ = trunc;
    let fr = arg.frame;
    let (u, v, x, y) = (fr.u(), fr.v(), arg.x(), arg.y());
    let reach = 1.0 / v.sqrt();
    match f {
        WindowFunction::Gaussian => {
            let phase = gaussian_phase(fr.phi());
            let lo = (y - GAUSSIAN_CUTOFF * reach).ceil() as i64;
            let hi = (y + GAUSSIAN_CUTOFF * reach).floor() as i64;
            Ok(theta_series(u, v, x, y, lo, hi, |w| {
                phase * WindowFunction::Gaussian.eval(w)
            }))
        }
        WindowFunction::Indicator => match classify(fr.phi()) {
            // 0 < (n - y) v^{1/2} <= 1
            Ok(PhiCase::Zero) => {
                let lo = y.floor() as i64 + 1;
                let hi = (y + reach).floor() as i64;
                Ok(theta_series(u, v, x, y, lo, hi, |_| Complex64::new(1.0, 0.0)))
            }
            // -1 <= (n - y) v^{1/2} < 0
            Ok(PhiCase::Pi) => {
                let lo = (y - reach).ceil() as i64;
                let hi = y.ceil() as i64 - 1;
                Ok(theta_series(u, v, x, y, lo, hi, |_| Complex64::new(1.0, 0.0)))
            }
            _ => Err(Error::TransformUnavailable {
                window: f.name(),
                phi: fr.phi(),
            }),
        },
    }
}

/// `Theta_chi(u + i N^{-2}, 0; (x, y))`, the finite sum over `y < n <= y + N`
/// with prefactor `N^{-1/2}`.
pub fn theta_chi_exact(u: f64, n_terms: u64, x: f64, y: f64) -> Complex64 {
    theta_chi_exact_tf(TwoFloat::from(u), n_terms, TwoFloat::from(x), y)
}

/// Same sum with the phase `(n - y)^2 u / 2 + n x` assembled in
/// double-double arithmetic, so that `u` and `x` may carry more than 53 bits.
pub(crate) fn theta_chi_exact_tf(u: TwoFloat, n_terms: u64, x: TwoFloat, y: f64) -> Complex64 {
    let start = y.floor() as i64 + 1;
    let half_u = u * 0.5;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n_terms as i64 {
        let n = (start + j) as f64;
        let m = TwoFloat::new_sub(n, y);
        let phase = m * m * half_u + x * n;
        acc += e_tf(phase);
    }
    acc / (n_terms as f64).sqrt()
}

/// `v^{1/4} sum_{|n| <= n_max} chi0_phi((n - y) v^{1/2}) e((n - y)^2 u / 2 + n x)`,
/// skipping indices with `|n - y| < 1e-12`.
pub fn approx_theta_chi0(
    u: f64,
    v: f64,
    phi: f64,
    x: f64,
    y: f64,
    trunc: &TruncationPolicy,
) -> Result<Complex64> {
    let sin = reduce_angle(phi).sin();
    if sin.abs() < CHI0_SIN_BAND {
        return Err(Error::PhiOutsideBand {
            sin_phi: sin.abs(),
            band: CHI0_SIN_BAND,
        });
    }
    if !(v > 0.0) {
        return Err(Error::InvalidArgument(format!("v must be positive, got {v}")));
    }
    let sv = v.sqrt();
    let n_max = trunc.n_max as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in -n_max..=n_max {
        let m = n as f64 - y;
        if m.abs() < POLE_TOL {
            continue;
        }
        let phase = frac(0.5 * m * m * u) + frac(n as f64 * x);
        acc += chi0_window(phi, m * sv)? * e(phase);
    }
    Ok(acc * v.powf(0.25))
}

/// Coefficientwise L2 (in `x`) distance between the theta series of `chi`
/// and its `chi^(0)` approximant, by Parseval:
/// `v^{1/2} sum_{|n| <= n_max} |chi_phi(w_n) - chi0_phi(w_n)|^2`, `w_n = (n - y) v^{1/2}`.
pub fn chi0_coefficient_l2_error(
    phi: f64,
    v: f64,
    y: f64,
    n_max: u32,
    panel_scale: u32,
) -> Result<f64> {
    let sv = v.sqrt();
    let n_max = n_max as i64;
    let mut acc = 0.0;
    for n in -n_max..=n_max {
        let m = n as f64 - y;
        if m.abs() < POLE_TOL {
            continue;
        }
        let w = m * sv;
        let exact = window_transform_refined(WindowFunction::Indicator, phi, w, panel_scale)?;
        acc += (exact - chi0_window(phi, w)?).norm_sqr();
    }
    Ok(sv * acc)
}

/// Bounded test functionals `F` on `C`. All are radial or constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional {
    Const1,
    AbsSquare,
    /// `1{|z| > R}`
    TailIndicator(f64),
    /// `1{|z| <= r}`
    CdfIndicator(f64),
}

impl Functional {
    pub fn eval(&self, z: Complex64) -> f64 {
        match *self {
            Functional::Const1 => 1.0,
            Functional::AbsSquare => z.norm_sqr(),
            Functional::TailIndicator(r) => (z.norm() > r) as u8 as f64,
            Functional::CdfIndicator(r) => (z.norm() <= r) as u8 as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Monte Carlo estimate of `∫_{T^3} F(e(t) |Theta_f(frame; xi)|) dt dxi`.
/// Draw `i` uses substream `i` of `seed`.
pub fn nu_estimate(
    f: WindowFunction,
    frame: &FramePoint,
    functional: Functional,
    samples: u64,
    seed: u64,
) -> Result<NuEstimate> {
    if samples == 0 {
        return Err(Error::EmptySample);
    }
    let trunc = TruncationPolicy::default();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let base = derive_seed(seed, NU_TAG);
    for i in 0..samples {
        let mut rng = substream(base, i);
        let t: f64 = rng.gen();
        let x: f64 = rng.gen();
        let y: f64 = rng.gen();
        let arg = ThetaArg::new(*frame, x, y);
        let z = e(t) * theta(f, &arg, &trunc)?.norm();
        let val = functional.eval(z);
        sum += val;
        sum_sq += val * val;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = if samples > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(NuEstimate {
        mean,
        std_error: (var / n).sqrt(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{jacobi_act, JacobiElement};
    use crate::quad::panel_rule;
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    /// Composite Simpson on [0, 1] for chi_phi(w), independent of the panel logic.
    fn chi_phi_simpson(phi: f64, w: f64, panels: usize) -> Complex64 {
        let (s, c) = phi.sin_cos();
        let g = |wp: f64| {
            let arg = TAU * ((0.5 * (w * w + wp * wp) * c - w * wp) / s);
            Complex64::from_polar(1.0, arg)
        };
        let h = 1.0 / panels as f64;
        let mut acc = g(0.0) + g(1.0);
        for j in 1..panels {
            let wgt = if j % 2 == 1 { 4.0 } else { 2.0 };
            acc += g(j as f64 * h) * wgt;
        }
        acc * (h / 3.0) / s.abs().sqrt()
    }

    #[test]
    fn gaussian_exact_cases() {
        for &w in &[0.0, 0.3, -1.2] {
            let expect = GAUSS_NORM * (-PI * w * w).exp();
            assert_eq!(window_transform(WindowFunction::Gaussian, 0.0, w).unwrap().re, expect);
            assert_eq!(window_transform(WindowFunction::Gaussian, PI, w).unwrap().re, expect);
        }
        assert_eq!(window_transform(WindowFunction::Indicator, PI, -0.5).unwrap().re, 1.0);
        assert_eq!(window_transform(WindowFunction::Indicator, PI, 0.5).unwrap().re, 0.0);
    }

    #[test]
    fn gaussian_is_self_dual() {
        for &w in &[0.0, 0.4, -0.9, 1.7] {
            let v = window_transform(WindowFunction::Gaussian, PI / 2.0, w).unwrap();
            let expect = GAUSS_NORM * (-PI * w * w).exp();
            assert_abs_diff_eq!(v.re, expect, epsilon = 1e-12);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gaussian_closed_form_matches_quadrature() {
        for &phi in &[0.3, PI / 6.0, 2.0, 3.5, 5.9] {
            for &w in &[0.0, 0.5, -1.3, 2.2] {
                let q = window_transform(WindowFunction::Gaussian, phi, w).unwrap();
                let c = gaussian_transform(phi, w);
                assert!((q - c).norm() < 1e-10, "phi={phi} w={w}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn indicator_transform_matches_brute_force() {
        let q = window_transform(WindowFunction::Indicator, PI / 2.0, 3.7).unwrap();
        let oracle = chi_phi_simpson(PI / 2.0, 3.7, 100_000);
        assert!((q - oracle).norm() < 1e-8);
        for &(phi, w) in &[(PI / 3.0, 5.0), (2.0, -7.5), (4.0, 12.0), (0.2, 1.0)] {
            let q = window_transform(WindowFunction::Indicator, phi, w).unwrap();
            let oracle = chi_phi_simpson(phi, w, 100_000);
            assert!((q - oracle).norm() < 1e-8, "phi={phi} w={w}");
        }
    }

    #[test]
    fn transform_refuses_near_axis() {
        let err = window_transform(WindowFunction::Gaussian, 1e-10, 0.5).unwrap_err();
        assert!(err.to_string().contains("phi too close to axis"));
        assert!(window_transform(WindowFunction::Gaussian, PI + 1e-9, 0.5).is_err());
        assert!(window_transform(WindowFunction::Gaussian, 1e-13, 0.5).is_ok());
    }

    #[test]
    fn unitarity_of_gaussian_transform() {
        for &phi in &[PI / 6.0, PI / 3.0, PI / 2.0, 2.0] {
            // ∫ |f_phi|^2 over [-8, 8], composite GL on the outer variable
            let panels = 64;
            let h = 16.0 / panels as f64;
            let mut norm2 = 0.0;
            for j in 0..panels {
                let mid = -8.0 + (j as f64 + 0.5) * h;
                for &(x, wt) in panel_rule() {
                    let w = mid + 0.5 * h * x;
                    let val = window_transform(WindowFunction::Gaussian, phi, w).unwrap();
                    norm2 += wt * 0.5 * h * val.norm_sqr();
                }
            }
            assert_abs_diff_eq!(norm2, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn chi0_modulus_at_quarter_turn() {
        for &w in &[0.25, 0.5, 1.3, 7.2] {
            let m = chi0_window(PI / 2.0, w).unwrap().norm();
            assert_abs_diff_eq!(m, (PI * w).sin().abs() / (PI * w), epsilon = 1e-14);
        }
        assert_abs_diff_eq!(chi0_window(PI / 2.0, 0.5).unwrap().norm(), 2.0 / PI, epsilon = 1e-15);
        assert_eq!(chi0_window(PI / 2.0, 0.0).unwrap_err(), Error::WindowPole);
    }

    #[test]
    fn chi0_sign_flips_on_lower_half() {
        let a = chi0_window(PI / 3.0, 4.0).unwrap();
        assert_eq!(eps_phi(PI / 3.0), 1.0);
        assert_eq!(eps_phi(PI + 0.1), -1.0);
        // phi + pi flips sin, cos and eps; w -> -w then restores every factor
        let b = chi0_window(PI / 3.0 + PI, -4.0).unwrap();
        assert!((a - b).norm() < 1e-12, "{a} {b}");
    }

    #[test]
    fn chi0_approximation_is_second_order() {
        for &phi in &[PI / 3.0, PI / 2.0, 2.0 * PI / 3.0] {
            let mut worst: f64 = 0.0;
            for k in 1..=25 {
                let w = 2.0 * k as f64;
                let d = window_transform(WindowFunction::Indicator, phi, w).unwrap()
                    - chi0_window(phi, w).unwrap();
                worst = worst.max(w * w * d.norm());
            }
            assert!(worst.is_finite() && worst < 1.0, "phi={phi}: {worst}");
        }
    }

    #[test]
    fn theta_indicator_examples() {
        let trunc = TruncationPolicy::default();
        let arg = ThetaArg::new(FramePoint::new(0.0, 1.0, 0.0), 0.0, 0.0);
        assert_abs_diff_eq!(theta(WindowFunction::Indicator, &arg, &trunc).unwrap().re, 1.0, epsilon = 1e-15);
        let arg = ThetaArg::new(FramePoint::new(0.0, 0.25, 0.0), 0.0, 0.0);
        let v = theta(WindowFunction::Indicator, &arg, &trunc).unwrap();
        assert_abs_diff_eq!(v.re, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
        let arg = ThetaArg::new(FramePoint::new(0.0, 1.0, 1.0), 0.0, 0.0);
        assert!(matches!(
            theta(WindowFunction::Indicator, &arg, &trunc),
            Err(Error::TransformUnavailable { .. })
        ));
    }

    #[test]
    fn theta_indicator_at_pi_reflects() {
        // f_pi(w) = chi(-w): terms with -1 <= (n - y) v^{1/2} < 0
        let trunc = TruncationPolicy::default();
        let arg = ThetaArg::new(FramePoint::new(0.3, 0.25, PI), 0.2, 0.5);
        let got = theta(WindowFunction::Indicator, &arg, &trunc).unwrap();
        // n - 0.5 in [-2, 0): n = -1, 0
        let direct: Complex64 = [-1.0f64, 0.0]
            .iter()
            .map(|&n| e(0.5 * (n - 0.5).powi(2) * 0.3 + n * 0.2))
            .sum::<Complex64>()
            * 0.25f64.powf(0.25);
        assert!((got - direct).norm() < 1e-14);
    }

    #[test]
    fn theta_chi_exact_single_term() {
        let v = theta_chi_exact(0.77, 1, 0.13, 0.0);
        assert!((v - e(0.77 / 2.0 + 0.13)).norm() < 1e-15);
    }

    #[test]
    fn theta_chi_exact_matches_generic_theta() {
        let trunc = TruncationPolicy::default();
        let mut rng = substream(21, 0);
        for _ in 0..20 {
            let (u, x, y): (f64, f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen(), rng.gen());
            let n = rng.gen_range(1..40u64);
            let arg = ThetaArg::new(FramePoint::new(u, 1.0 / (n * n) as f64, 0.0), x, y);
            let a = theta(WindowFunction::Indicator, &arg, &trunc).unwrap();
            let b = theta_chi_exact(u, n, x, y);
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn gaussian_theta_invariance() {
        let trunc = TruncationPolicy::default();
        let mut rng = substream(22, 0);
        for _ in 0..100 {
            let frame = FramePoint::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU));
            let arg = ThetaArg::new(frame, rng.gen(), rng.gen());
            let base = theta(WindowFunction::Gaussian, &arg, &trunc).unwrap().norm();
            for h in JacobiElement::generators() {
                let moved = jacobi_act(&h, &arg).unwrap();
                let val = theta(WindowFunction::Gaussian, &moved, &trunc).unwrap().norm();
                assert!((val - base).abs() <= 1e-8 * base.max(1e-3), "{h:?}: {val} vs {base}");
            }
        }
    }

    #[test]
    fn parseval_and_holder_on_grid() {
        let trunc = TruncationPolicy::default();
        let mut rng = substream(23, 0);
        let grid = 256;
        for _ in 0..2 {
            let frame = FramePoint::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU));
            let (mut l2, mut l1) = (0.0, 0.0);
            for i in 0..grid {
                for j in 0..grid {
                    let x = (i as f64 + 0.5) / grid as f64;
                    let y = (j as f64 + 0.5) / grid as f64;
                    let z = theta(WindowFunction::Gaussian, &ThetaArg::new(frame, x, y), &trunc).unwrap();
                    l2 += z.norm_sqr();
                    l1 += z.norm();
                }
            }
            let cells = (grid * grid) as f64;
            assert_abs_diff_eq!(l2 / cells, 1.0, epsilon = 1e-3);
            assert!(l1 / cells <= 1.0 + 1e-3);
        }
    }

    #[test]
    fn approx_theta_chi0_recomposes_termwise() {
        let trunc = TruncationPolicy { n_max: 30, panel_scale: 1 };
        let (u, v, phi, x, y) = (0.31, 5.0, 1.1, 0.27, 0.43);
        let got = approx_theta_chi0(u, v, phi, x, y, &trunc).unwrap();
        let mut direct = Complex64::new(0.0, 0.0);
        for n in -30i64..=30 {
            let m = n as f64 - y;
            direct += chi0_window(phi, m * v.sqrt()).unwrap() * e(0.5 * m * m * u + n as f64 * x);
        }
        direct *= v.powf(0.25);
        assert!((got - direct).norm() < 1e-12);
    }

    #[test]
    fn approx_theta_chi0_band_and_dominant_terms() {
        let trunc = TruncationPolicy::default();
        let err = approx_theta_chi0(0.0, 1.0, 0.01, 0.0, 0.3, &trunc).unwrap_err();
        assert!(matches!(err, Error::PhiOutsideBand { .. }));
        // y = 1/2, v^{1/2} = 101: |w_n| = 101 |n - 1/2| and |sin(pi w_n)| = 1,
        // so n in {0, 1} give the two largest terms by a factor of 3
        let (v, y) = (101.0f64 * 101.0, 0.5);
        let term = |n: i64| chi0_window(PI / 2.0, (n as f64 - y) * v.sqrt()).unwrap().norm();
        let lead = term(0).min(term(1));
        assert_abs_diff_eq!(term(0), term(1), epsilon = 1e-15);
        for n in (-1000i64..=1000).filter(|n| *n != 0 && *n != 1) {
            assert!(term(n) <= lead / 3.0 + 1e-15);
        }
    }

    #[test]
    fn nu_estimate_basics() {
        let frame = FramePoint::new(0.1, 1.3, 0.7);
        let one = nu_estimate(WindowFunction::Gaussian, &frame, Functional::Const1, 100, 3).unwrap();
        assert_eq!(one.mean, 1.0);
        let sq = nu_estimate(WindowFunction::Gaussian, &frame, Functional::AbsSquare, 20_000, 3).unwrap();
        assert!((sq.mean - 1.0).abs() <= 3.0 * sq.std_error, "{sq:?}");
        let tail = nu_estimate(WindowFunction::Gaussian, &frame, Functional::TailIndicator(10.0), 20_000, 4).unwrap();
        assert!(tail.mean <= 1e-2 + 3.0 * tail.std_error);
        let again = nu_estimate(WindowFunction::Gaussian, &frame, Functional::AbsSquare, 20_000, 3).unwrap();
        assert_eq!(sq, again);
    }
}
