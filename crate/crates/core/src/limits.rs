//! Limit random variables for the renormalized Birkhoff sums.
//!
//! ```text
//! Y_{omega,phi} = e(t) / (2 pi) sum_n (1 + e(t' - n phi)) / (n - y) e((n - y)^2 omega / 2 + n x)
//! Y_{0,0}       = (1 + e(t')) / (2 pi) sum_n e(n x) / (n - y)
//! alpha = 0     : e(t) (1 - e(y)) / (1 - e(x))
//! ```
//!
//! with all of `t, t', x, y` uniform on the torus and the `n`-sums truncated
//! symmetrically at `n_max`.

use crate::error::{Error, Result};
use crate::phase::{e, frac, nearest_int_dist};
use crate::quad::adaptive_real;
use crate::renorm::c_of;
use crate::rng::{derive_seed, substream};
use crate::skew::{abs_sum_draws, Harmonic};
use crate::stats::EmpiricalDistribution;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// Draws with `x` or `y` this close to an integer are rejected.
pub const POLE_MARGIN: f64 = 1e-12;
pub const DEFAULT_N_MAX: u32 = 1000;

const Y_TAG: u64 = 0x59;
const Y00_TAG: u64 = 0x5900;
const ALPHA0_TAG: u64 = 0xA0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitParams {
    omega: f64,
    varphi: f64,
    n_max: u32,
}

impl LimitParams {
    /// Reduces `omega` and `varphi` mod 1.
    pub fn new(omega: f64, varphi: f64, n_max: u32) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidArgument("n_max must be at least 1".into()));
        }
        if !omega.is_finite() || !varphi.is_finite() {
            return Err(Error::InvalidArgument("omega and varphi must be finite".into()));
        }
        Ok(LimitParams {
            omega: frac(omega),
            varphi: frac(varphi),
            n_max,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn varphi(&self) -> f64 {
        self.varphi
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }
}

fn check_pole(y: f64) -> Result<()> {
    if nearest_int_dist(y) < POLE_MARGIN {
        return Err(Error::SeriesPole { y });
    }
    Ok(())
}

/// `Y_{omega,phi}` as a complex number, including the `e(t)` phase.
pub fn y_complex(p: &LimitParams, t: f64, t_prime: f64, x: f64, y: f64) -> Result<Complex64> {
    check_pole(y)?;
    let n_max = p.n_max as i64;
    let one = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in -n_max..=n_max {
        let nf = n as f64;
        let m = nf - y;
        let weight = one + e(t_prime - frac(nf * p.varphi));
        acc += weight * e(frac(0.5 * m * m * p.omega) + frac(nf * x)) / m;
    }
    Ok(e(t) * acc / TAU)
}

/// `|Y_{omega,phi}|` at the given point; `t` only rotates the value.
pub fn y_value(p: &LimitParams, t_prime: f64, x: f64, y: f64) -> Result<f64> {
    Ok(y_complex(p, 0.0, t_prime, x, y)?.norm())
}

fn uniform_off_integers(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let y: f64 = rng.gen();
        if nearest_int_dist(y) >= POLE_MARGIN {
            return y;
        }
    }
}

/// Draws of `|Y_{omega,phi}|`.
pub fn y_sample(p: &LimitParams, count: usize, seed: u64) -> Result<EmpiricalDistribution> {
    let base = derive_seed(seed, Y_TAG);
    let draws = (0..count as u64)
        .map(|i| {
            let mut rng = substream(base, i);
            let t_prime: f64 = rng.gen();
            let x: f64 = rng.gen();
            let y = uniform_off_integers(&mut rng);
            y_value(p, t_prime, x, y)
        })
        .collect::<Result<Vec<_>>>()?;
    EmpiricalDistribution::new(
        draws,
        seed,
        format!("|Y| omega={} varphi={} n_max={}", p.omega, p.varphi, p.n_max),
    )
}

/// `|(1 + e(t')) / (2 pi) sum_{|n| <= n_max} e(n x) / (n - y)|`.
pub fn y00_value(t_prime: f64, x: f64, y: f64, n_max: u32) -> Result<f64> {
    check_pole(y)?;
    let n_max = n_max as i64;
    // e(n x) by a running product from n = -n_max
    let step = e(x);
    let mut phasor = e(frac(-(n_max as f64) * x));
    let mut acc = Complex64::new(0.0, 0.0);
    for n in -n_max..=n_max {
        acc += phasor / (n as f64 - y);
        phasor *= step;
    }
    let weight = (Complex64::new(1.0, 0.0) + e(t_prime)).norm();
    Ok(weight * acc.norm() / TAU)
}

fn y00_draws(count: usize, n_max: u32, seed: u64, fixed_x: Option<f64>) -> Result<Vec<f64>> {
    let base = derive_seed(seed, Y00_TAG);
    (0..count as u64)
        .map(|i| {
            let mut rng = substream(base, i);
            let t_prime: f64 = rng.gen();
            let x: f64 = rng.gen();
            let y = uniform_off_integers(&mut rng);
            y00_value(t_prime, fixed_x.unwrap_or(x), y, n_max)
        })
        .collect()
}

/// Draws of `|Y_{0,0}|` with `t', x, y` uniform.
pub fn y00_sample(count: usize, n_max: u32, seed: u64) -> Result<EmpiricalDistribution> {
    EmpiricalDistribution::new(y00_draws(count, n_max, seed, None)?, seed, format!("|Y00| n_max={n_max}"))
}

/// Draws of `|Y_{0,0}|` with `x` held fixed.
pub fn y00_sample_at_x(x: f64, count: usize, n_max: u32, seed: u64) -> Result<EmpiricalDistribution> {
    if nearest_int_dist(x) < POLE_MARGIN {
        return Err(Error::InvalidArgument(format!("x = {x} must not be an integer")));
    }
    EmpiricalDistribution::new(
        y00_draws(count, n_max, seed, Some(x))?,
        seed,
        format!("|Y00| x={x} n_max={n_max}"),
    )
}

/// `|(1 - e(y)) / (1 - e(x))| = |sin(pi y)| / |sin(pi x)|`.
pub fn alpha0_value(x: f64, y: f64) -> Result<f64> {
    check_pole(x)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(((one - e(y)) / (one - e(x))).norm())
}

pub fn alpha0_sample(count: usize, seed: u64) -> Result<EmpiricalDistribution> {
    let base = derive_seed(seed, ALPHA0_TAG);
    let draws = (0..count as u64)
        .map(|i| {
            let mut rng = substream(base, i);
            let x = uniform_off_integers(&mut rng);
            let y: f64 = rng.gen();
            alpha0_value(x, y)
        })
        .collect::<Result<Vec<_>>>()?;
    EmpiricalDistribution::new(draws, seed, "|alpha0|")
}

/// `2 / (pi^2 r) log|(1 + r) / (1 - r)|`; `+inf` at `r = 1`.
pub fn radial_density(r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    if r == 1.0 {
        return Ok(f64::INFINITY);
    }
    if r.is_infinite() {
        return Ok(0.0);
    }
    // log|(1 + r)/(1 - r)| = 2 atanh(min(r, 1/r))
    let s = r.min(1.0 / r);
    Ok(4.0 * s.atanh() / (PI * PI * r))
}

fn density_on_unit(s: f64) -> f64 {
    // r = s in (0, 1); atanh(s)/s -> 1 as s -> 0
    4.0 * s.atanh() / (PI * PI * s)
}

/// Mass of the radial law on `[lo, hi]` with `0 <= lo <= hi <= 1`. The
/// logarithmic singularity at 1 is removed by `s = 1 - sigma^2`.
fn mass_on_unit(lo: f64, hi: f64) -> f64 {
    const TOL: f64 = 1e-12;
    const SPLIT: f64 = 0.5;
    let mut total = 0.0;
    if lo < SPLIT {
        total += adaptive_real(lo, hi.min(SPLIT), TOL, density_on_unit);
    }
    if hi > SPLIT {
        let a = (1.0 - lo.max(SPLIT)).sqrt();
        let b = (1.0 - hi).sqrt();
        total += adaptive_real(b, a, TOL, |sigma| {
            let s2 = sigma * sigma;
            // atanh(1 - sigma^2), without forming 1 - sigma^2 first
            let atanh = 0.5 * ((2.0 - s2).ln() - 2.0 * sigma.ln());
            8.0 * sigma * atanh / (PI * PI * (1.0 - s2))
        });
    }
    total
}

/// `P(R <= r)` for the radial law. The density is invariant under
/// `r -> 1/r` with total mass 1/2 on each side of 1, so `r > 1` is folded
/// onto `(0, 1)`: `P(R <= r) = 1 - P(R <= 1/r)`.
pub fn radial_cdf(r: f64) -> f64 {
    if !(r > 0.0) {
        return 0.0;
    }
    if r.is_infinite() {
        return 1.0;
    }
    if r == 1.0 {
        return 0.5;
    }
    if r < 1.0 {
        mass_on_unit(0.0, r)
    } else {
        1.0 - mass_on_unit(0.0, 1.0 / r)
    }
}

/// Draws of `|X~_{N,alpha}| = |S_N| / sqrt(c_N(l alpha))`.
pub fn xtilde_sample(
    n_terms: u64,
    alpha: f64,
    h: &Harmonic,
    count: usize,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    if h.is_geometric() {
        return Err(Error::GeometricCase);
    }
    let c = c_of(h.l as f64 * alpha, n_terms)?;
    let scale = (c as f64).sqrt();
    let draws = abs_sum_draws(n_terms, alpha, h, count, seed)?;
    EmpiricalDistribution::new(
        draws.into_iter().map(|s| s / scale).collect(),
        seed,
        format!("|X~| N={n_terms} alpha={alpha} k={} l={} c={c}", h.k, h.l),
    )
}
