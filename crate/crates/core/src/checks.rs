//! Seeded verification suites shared by the CLI and the integration tests.
//! Each suite returns the measured quantities alongside their bounds.

use crate::error::Result;
use crate::limits::{
    alpha0_sample, radial_cdf, radial_density, xtilde_sample, y00_sample, y00_sample_at_x, y_sample,
    LimitParams,
};
use crate::modular::{jacobi_act, FramePoint, JacobiElement, ThetaArg};
use crate::renorm::{renorm_data, RenormData};
use crate::rng::{derive_seed, substream};
use crate::skew::{abs_sum_sample, birkhoff_sum, connection_rhs, x_sample, Harmonic, TorusPoint};
use crate::stats::{abs_square_mean, histogram, ks_critical_1pct, ks_two_sample, ks_vs_cdf, Histogram};
use crate::theta::{
    chi0_coefficient_l2_error, chi0_window, theta, window_transform_refined, TruncationPolicy,
    WindowFunction,
};
use rand::Rng;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub measured: f64,
    pub bound: String,
    pub passed: bool,
}

impl CheckOutcome {
    pub fn at_most(name: &str, measured: f64, max: f64) -> Self {
        CheckOutcome {
            name: name.into(),
            measured,
            bound: format!("<= {max:e}"),
            passed: measured <= max,
        }
    }

    pub fn within(name: &str, measured: f64, lo: f64, hi: f64) -> Self {
        CheckOutcome {
            name: name.into(),
            measured,
            bound: format!("in [{lo}, {hi}]"),
            passed: (lo..=hi).contains(&measured),
        }
    }

    pub fn equals(name: &str, measured: i64, expected: i64) -> Self {
        CheckOutcome {
            name: name.into(),
            measured: measured as f64,
            bound: format!("== {expected}"),
            passed: measured == expected,
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {:.6e} ({})", self.name, self.measured, self.bound)
    }
}

pub fn all_passed(checks: &[CheckOutcome]) -> bool {
    checks.iter().all(|c| c.passed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Parseval,
    Invariance,
    Connection,
    Alpha0,
    Y00,
    Variance,
    Chi0,
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<CheckOutcome>> {
    match suite {
        Suite::Parseval => parseval(seed),
        Suite::Invariance => invariance(seed),
        Suite::Connection => connection(seed),
        Suite::Alpha0 => alpha0(seed),
        Suite::Y00 => y00(seed),
        Suite::Variance => variance(seed),
        Suite::Chi0 => {
            let mut out = chi0_stability()?;
            out.extend(chi0_scaling(std::f64::consts::FRAC_PI_2)?);
            Ok(out)
        }
    }
}

/// Birkhoff sum over `sqrt(N)` against the theta side, on random
/// `(alpha, k, l != 0, p, q)` and `N in {1, 7, 100, 1000}`.
pub fn connection(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let mut rng = substream(derive_seed(seed, 1), i);
        let alpha: f64 = rng.gen_range(-1.0..1.0);
        let k: i64 = rng.gen_range(-5..=5);
        let mut l: i64 = rng.gen_range(-5..=4);
        if l >= 0 {
            l += 1;
        }
        let pt = TorusPoint::new(rng.gen(), rng.gen());
        let h = Harmonic::new(k, l);
        for &n in &[1u64, 7, 100, 1000] {
            let lhs = birkhoff_sum(n, alpha, &h, &pt)? / (n as f64).sqrt();
            let rhs = connection_rhs(n, alpha, &h, &pt)?;
            worst = worst.max((lhs - rhs).norm() / lhs.norm());
        }
    }
    Ok(vec![CheckOutcome::at_most("connection max relative error", worst, 1e-12)])
}

fn random_frames(seed: u64, tag: u64, count: u64) -> Vec<FramePoint> {
    (0..count)
        .map(|i| {
            let mut rng = substream(derive_seed(seed, tag), i);
            FramePoint::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU))
        })
        .collect()
}

/// Midpoint-grid averages of `|Theta|^2` and `|Theta|` over the torus.
pub fn grid_moments(frame: &FramePoint, grid: usize) -> Result<(f64, f64)> {
    let trunc = TruncationPolicy::default();
    let (mut l2, mut l1) = (0.0, 0.0);
    for i in 0..grid {
        for j in 0..grid {
            let x = (i as f64 + 0.5) / grid as f64;
            let y = (j as f64 + 0.5) / grid as f64;
            let z = theta(WindowFunction::Gaussian, &ThetaArg::new(*frame, x, y), &trunc)?;
            l2 += z.norm_sqr();
            l1 += z.norm();
        }
    }
    let cells = (grid * grid) as f64;
    Ok((l2 / cells, l1 / cells))
}

/// Gaussian window at 5 random frames: the mean of `|Theta|^2` is 1 and
/// the mean of `|Theta|` is at most 1.
pub fn parseval(seed: u64) -> Result<Vec<CheckOutcome>> {
    let (mut dev, mut holder): (f64, f64) = (0.0, 0.0);
    for frame in random_frames(seed, 2, 5) {
        let (l2, l1) = grid_moments(&frame, 256)?;
        dev = dev.max((l2 - 1.0).abs());
        holder = holder.max(l1);
    }
    Ok(vec![
        CheckOutcome::at_most("parseval max |mean |theta|^2 - 1|", dev, 1e-3),
        CheckOutcome::at_most("holder max mean |theta|", holder, 1.0 + 1e-3),
    ])
}

/// `|Theta|` under each lattice generator at 100 random arguments.
pub fn invariance(seed: u64) -> Result<Vec<CheckOutcome>> {
    let trunc = TruncationPolicy::default();
    let frames = random_frames(seed, 3, 100);
    let mut worst: f64 = 0.0;
    for (i, frame) in frames.iter().enumerate() {
        let mut rng = substream(derive_seed(seed, 4), i as u64);
        let arg = ThetaArg::new(*frame, rng.gen(), rng.gen());
        let base = theta(WindowFunction::Gaussian, &arg, &trunc)?.norm();
        for h in JacobiElement::generators() {
            let moved = theta(WindowFunction::Gaussian, &jacobi_act(&h, &arg)?, &trunc)?.norm();
            worst = worst.max((moved - base).abs() / base);
        }
    }
    Ok(vec![CheckOutcome::at_most("invariance max relative deviation", worst, 1e-8)])
}

/// Mean of `|X|^2` at `alpha = sqrt 2`, `N = 500`, `(k, l) = (1, 1)`.
pub fn variance(seed: u64) -> Result<Vec<CheckOutcome>> {
    let s = x_sample(500, 2f64.sqrt(), &Harmonic::new(1, 1), 100_000, seed)?;
    Ok(vec![CheckOutcome::within("variance mean |X|^2", abs_square_mean(&s), 0.95, 1.05)])
}

/// The `alpha = 0` law: unnormalized sums against the radial CDF, the
/// closed-form sampler against the same CDF, and the density at `0+`.
pub fn alpha0(seed: u64) -> Result<Vec<CheckOutcome>> {
    let sums = abs_sum_sample(1000, 0.0, &Harmonic::new(0, 1), 10_000, seed)?;
    let direct = alpha0_sample(100_000, seed)?;
    let at_zero = radial_density(1e-12)?;
    Ok(vec![
        CheckOutcome::at_most("KS(|S_1000,0|, radial cdf)", ks_vs_cdf(&sums, radial_cdf), 0.03),
        CheckOutcome::at_most("KS(alpha0 sampler, radial cdf)", ks_vs_cdf(&direct, radial_cdf), 0.02),
        CheckOutcome::at_most("|density(0+) - 4/pi^2|", (at_zero - 4.0 / (PI * PI)).abs(), 1e-6),
    ])
}

/// `Y_{0,0}` against the `alpha = 0` variable, and the effect of fixing `x = 1/2`.
pub fn y00(seed: u64) -> Result<Vec<CheckOutcome>> {
    let n = 100_000;
    let y = y00_sample(n, 1000, seed)?;
    let a = alpha0_sample(n, derive_seed(seed, 5))?;
    let half = y00_sample_at_x(0.5, n, 1000, derive_seed(seed, 6))?;
    let ks = ks_two_sample(&y, &a);
    let ks_half = ks_two_sample(&half, &a);
    let crit = ks_critical_1pct(n, n);
    Ok(vec![
        CheckOutcome::at_most("KS(Y00, alpha0)", ks, 0.02),
        CheckOutcome::at_most("|KS(Y00 | x=1/2, alpha0) - KS(Y00, alpha0)|", (ks_half - ks).abs(), crit),
        CheckOutcome::at_most("KS(Y00 | x=1/2, Y00)", ks_two_sample(&half, &y), crit),
    ])
}

/// `max_{w in 2, 4, .., 50} w^2 |chi_phi(w) - chi0_phi(w)|` at a given panel density.
pub fn chi0_scaled_max(phi: f64, panel_scale: u32) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 1..=25 {
        let w = 2.0 * k as f64;
        let exact = window_transform_refined(WindowFunction::Indicator, phi, w, panel_scale)?;
        worst = worst.max(w * w * (exact - chi0_window(phi, w)?).norm());
    }
    Ok(worst)
}

/// The `w^{-2}` bound for `phi in {pi/3, pi/2, 2pi/3}` and its stability
/// under doubling the quadrature panels.
pub fn chi0_stability() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for (label, phi) in [("pi/3", PI / 3.0), ("pi/2", PI / 2.0), ("2pi/3", 2.0 * PI / 3.0)] {
        let coarse = chi0_scaled_max(phi, 1)?;
        let fine = chi0_scaled_max(phi, 2)?;
        out.push(CheckOutcome {
            name: format!("w^2 |chi - chi0| max at phi={label}, finite"),
            measured: coarse,
            bound: "finite".into(),
            passed: coarse.is_finite(),
        });
        out.push(CheckOutcome::at_most(
            &format!("panel-doubling change at phi={label}"),
            (fine - coarse).abs(),
            1e-3,
        ));
    }
    Ok(out)
}

/// Slope of the least-squares line through `(log x, log y)`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Offset used for the coefficient errors; keeps `n - y` away from 0.
pub const CHI0_SCALING_Y: f64 = 0.3;
/// Index cutoff for the coefficient errors; the terms decay like `w^{-4}`.
pub const CHI0_SCALING_N_MAX: u32 = 100;

/// Coefficientwise L2 error between the theta series of `chi` and its
/// `chi^(0)` approximant at `v in {10, 100, 1000}`, with the fitted slope.
pub fn chi0_scaling_errors(phi: f64) -> Result<(Vec<(f64, f64)>, f64)> {
    let pts = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&v| Ok((v, chi0_coefficient_l2_error(phi, v, CHI0_SCALING_Y, CHI0_SCALING_N_MAX, 1)?)))
        .collect::<Result<Vec<_>>>()?;
    let slope = log_log_slope(&pts);
    Ok((pts, slope))
}

pub fn chi0_scaling(phi: f64) -> Result<Vec<CheckOutcome>> {
    let (_, slope) = chi0_scaling_errors(phi)?;
    Ok(vec![CheckOutcome::at_most(
        &format!("log-log slope of chi0 coefficient error at phi={phi:.6}"),
        slope,
        -1.3,
    )])
}

/// Parameters baked into the two figure reproductions.
pub const FIGURE_U: f64 = PI - 3.0;

pub fn figure_n(which: u8) -> Option<u64> {
    match which {
        1 => Some(2260),
        2 => Some(2300),
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureReport {
    pub renorm: RenormData,
    pub ks: f64,
    pub xtilde_hist: Histogram,
    pub y_hist: Histogram,
}

/// Histograms of `|X~_{N, pi-3}|` (`k = 0, l = 1`) and of `|Y_{omega,phi}|`
/// with `(omega, phi)` from the renormalization data, and their KS distance.
pub fn figure(which: u8, samples: usize, n_max: u32, bin_width: f64, seed: u64) -> Result<FigureReport> {
    let n = figure_n(which).ok_or_else(|| crate::Error::InvalidArgument(format!("no figure {which}")))?;
    let renorm = renorm_data(FIGURE_U, n)?;
    let xt = xtilde_sample(n, FIGURE_U, &Harmonic::new(0, 1), samples, seed)?;
    let params = LimitParams::new(renorm.omega, renorm.varphi, n_max)?;
    let ys = y_sample(&params, samples, seed)?;
    let ks = ks_two_sample(&xt, &ys);
    let hx = histogram(&xt, bin_width, 0.0)?;
    let hy = histogram(&ys, bin_width, 0.0)?;
    let len = hx.counts.len().max(hy.counts.len());
    Ok(FigureReport {
        renorm,
        ks,
        xtilde_hist: hx.padded(len),
        y_hist: hy.padded(len),
    })
}
