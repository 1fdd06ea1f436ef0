//! Empirical distributions of nonnegative moduli, Kolmogorov–Smirnov
//! distances and fixed-width histograms.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
    seed: u64,
    meta: String,
}

impl EmpiricalDistribution {
    /// Sorts the samples. Rejects empty input and anything negative or NaN.
    pub fn new(mut samples: Vec<f64>, seed: u64, meta: impl Into<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(&bad) = samples.iter().find(|s| !(**s >= 0.0)) {
            return Err(Error::InvalidSample(bad));
        }
        samples.sort_by(f64::total_cmp);
        Ok(EmpiricalDistribution {
            samples,
            seed,
            meta: meta.into(),
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn meta(&self) -> &str {
        &self.meta
    }

    /// Right-continuous empirical CDF `#{s <= x} / n`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s <= x) as f64 / self.count() as f64
    }

    /// Lower empirical quantile: smallest sample with CDF at least `p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.count();
        let idx = ((p.clamp(0.0, 1.0) * n as f64).ceil() as usize).clamp(1, n) - 1;
        self.samples[idx]
    }

    pub fn median(&self) -> f64 {
        let n = self.count();
        if n % 2 == 1 {
            self.samples[n / 2]
        } else {
            0.5 * (self.samples[n / 2 - 1] + self.samples[n / 2])
        }
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.count() as f64
    }
}

/// `sup_x |F_A(x) - F_B(x)|` over the merged sample points.
pub fn ks_two_sample(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> f64 {
    let (xa, xb) = (a.samples(), b.samples());
    let (n, m) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// One-sample KS statistic. The empirical CDF just below `x_i` is compared
/// with `cdf` one ulp below `x_i`, which makes atoms of `cdf` harmless.
pub fn ks_vs_cdf<F: Fn(f64) -> f64>(a: &EmpiricalDistribution, cdf: F) -> f64 {
    let n = a.count() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in a.samples().iter().enumerate() {
        let hi = (i + 1) as f64 / n;
        let lo = i as f64 / n;
        d = d.max((hi - cdf(x)).abs()).max((lo - cdf(x.next_down())).abs());
    }
    d
}

/// Asymptotic two-sample KS critical value at the 1% level.
pub fn ks_critical_1pct(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.63 * ((n + m) / (n * m)).sqrt()
}

pub fn abs_square_mean(a: &EmpiricalDistribution) -> f64 {
    a.samples().iter().map(|s| s * s).sum::<f64>() / a.count() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub origin: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_left(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.bin_width
    }

    /// `count / (n w)`, so that the bars integrate to one.
    pub fn densities(&self) -> Vec<f64> {
        let scale = self.total() as f64 * self.bin_width;
        self.counts.iter().map(|&c| c as f64 / scale).collect()
    }

    /// Extends with empty bins up to `len`.
    pub fn padded(mut self, len: usize) -> Self {
        if self.counts.len() < len {
            self.counts.resize(len, 0);
        }
        self
    }
}

/// Bin `i` covers `[origin + i w, origin + (i + 1) w)`; bins run up to the
/// one holding the largest sample.
pub fn histogram(a: &EmpiricalDistribution, bin_width: f64, origin: f64) -> Result<Histogram> {
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(Error::InvalidArgument(format!("bin width must be positive, got {bin_width}")));
    }
    if a.samples()[0] < origin {
        return Err(Error::InvalidArgument(format!(
            "sample {} lies below histogram origin {origin}",
            a.samples()[0]
        )));
    }
    let bin = |x: f64| ((x - origin) / bin_width).floor() as usize;
    let mut counts = vec![0u64; bin(*a.samples().last().unwrap()) + 1];
    for &x in a.samples() {
        counts[bin(x)] += 1;
    }
    Ok(Histogram {
        bin_width,
        origin,
        counts,
    })
}
