//! The skew translation `(p, q) -> (p + alpha, q + p)`, its Birkhoff sums for
//! the harmonic `e(kp + lq)` and the theta-sum side of the connection identity.
//!
//! Phases are assembled in double-double arithmetic before reduction mod 1,
//! so `n (n - 1) alpha / 2` stays accurate up to `N = 10^6`.

use crate::error::{Error, Result};
use crate::phase::{e_tf, frac, frac_tf};
use crate::rng::{derive_seed, substream};
use crate::stats::EmpiricalDistribution;
use crate::theta::theta_chi_exact_tf;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use twofloat::TwoFloat;

const ORBIT_TAG: u64 = 0x5E;

/// Largest number of iterates accepted.
pub const MAX_ITERATES: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusPoint {
    p: f64,
    q: f64,
}

impl TorusPoint {
    pub fn new(p: f64, q: f64) -> Self {
        TorusPoint {
            p: frac(p),
            q: frac(q),
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Harmonic {
    pub k: i64,
    pub l: i64,
}

impl Harmonic {
    pub fn new(k: i64, l: i64) -> Self {
        Harmonic { k, l }
    }

    /// `l = 0`: the sum is geometric.
    pub fn is_geometric(&self) -> bool {
        self.l == 0
    }
}

fn check_len(n: u64) -> Result<()> {
    if n > MAX_ITERATES {
        return Err(Error::TooManyIterates {
            n,
            max: MAX_ITERATES,
        });
    }
    Ok(())
}

pub fn skew_step(pt: &TorusPoint, alpha: f64) -> TorusPoint {
    TorusPoint::new(pt.p + alpha, pt.q + pt.p)
}

fn iterate_reduced(pt: &TorusPoint, alpha: f64, n: u64) -> (f64, f64) {
    let nf = n as f64;
    let tri = (n * n.saturating_sub(1) / 2) as f64;
    let p = frac_tf(TwoFloat::new_mul(nf, alpha) + pt.p);
    let q = frac_tf(TwoFloat::new_mul(nf, pt.p) + TwoFloat::new_mul(tri, alpha) + pt.q);
    (p, q)
}

/// `(p + n alpha, q + n p + n (n - 1) alpha / 2) mod 1`.
pub fn skew_iterate(pt: &TorusPoint, alpha: f64, n: u64) -> Result<TorusPoint> {
    check_len(n)?;
    let (p, q) = iterate_reduced(pt, alpha, n);
    Ok(TorusPoint::new(p, q))
}

/// `S_N = sum_{n=1..N} e(k p_n + l q_n)` along the orbit of `pt`.
pub fn birkhoff_sum(n_terms: u64, alpha: f64, h: &Harmonic, pt: &TorusPoint) -> Result<Complex64> {
    check_len(n_terms)?;
    let (k, l) = (h.k as f64, h.l as f64);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=n_terms {
        let (p, q) = iterate_reduced(pt, alpha, n);
        acc += e_tf(TwoFloat::new_mul(k, p) + TwoFloat::new_mul(l, q));
    }
    Ok(acc)
}

/// `Theta_chi(l alpha + i N^{-2}, 0; ((k - l/2) alpha + l p, 0)) e(kp + lq)`,
/// which equals `S_N / sqrt(N)`.
pub fn connection_rhs(n_terms: u64, alpha: f64, h: &Harmonic, pt: &TorusPoint) -> Result<Complex64> {
    if h.is_geometric() {
        return Err(Error::GeometricCase);
    }
    check_len(n_terms)?;
    let (k, l) = (h.k as f64, h.l as f64);
    let u = TwoFloat::new_mul(l, alpha);
    let x = TwoFloat::new_mul(k - 0.5 * l, alpha) + TwoFloat::new_mul(l, pt.p);
    let outer = TwoFloat::new_mul(k, pt.p) + TwoFloat::new_mul(l, pt.q);
    Ok(theta_chi_exact_tf(u, n_terms, x, 0.0) * e_tf(outer))
}

/// `|S_N(p, q)|` for `count` uniform points; draw `i` uses substream `i`.
pub(crate) fn abs_sum_draws(
    n_terms: u64,
    alpha: f64,
    h: &Harmonic,
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    check_len(n_terms)?;
    let base = derive_seed(seed, ORBIT_TAG);
    (0..count as u64)
        .map(|i| {
            let mut rng = substream(base, i);
            let pt = TorusPoint::new(rng.gen(), rng.gen());
            Ok(birkhoff_sum(n_terms, alpha, h, &pt)?.norm())
        })
        .collect()
}

/// Draws of `|X_{N,alpha}| = |S_N| / sqrt(N)` with `(p, q)` uniform.
pub fn x_sample(
    n_terms: u64,
    alpha: f64,
    h: &Harmonic,
    count: usize,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    if h.is_geometric() {
        return Err(Error::GeometricCase);
    }
    if n_terms == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let scale = (n_terms as f64).sqrt();
    let draws = abs_sum_draws(n_terms, alpha, h, count, seed)?;
    EmpiricalDistribution::new(
        draws.into_iter().map(|s| s / scale).collect(),
        seed,
        format!("|X| N={n_terms} alpha={alpha} k={} l={}", h.k, h.l),
    )
}

/// Draws of the unnormalized `|S_N|`.
pub fn abs_sum_sample(
    n_terms: u64,
    alpha: f64,
    h: &Harmonic,
    count: usize,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    EmpiricalDistribution::new(
        abs_sum_draws(n_terms, alpha, h, count, seed)?,
        seed,
        format!("|S| N={n_terms} alpha={alpha} k={} l={}", h.k, h.l),
    )
}
