//! Gauss–Legendre quadrature helpers.

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

/// Degree of the per-panel rule.
pub const PANEL_DEGREE: usize = 16;

/// Nodes and weights of the degree-16 rule on `[-1, 1]`.
pub fn panel_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let degree = NonZeroUsize::new(PANEL_DEGREE).expect("nonzero degree");
        GaussLegendre::new(degree).iter().map(|(x, w)| (*x, *w)).collect()
    })
}

/// Composite rule with `panels` equal panels on `[a, b]` for a complex integrand.
pub fn composite_complex<F>(a: f64, b: f64, panels: usize, mut f: F) -> Complex64
where
    F: FnMut(f64) -> Complex64,
{
    let panels = panels.max(1);
    let rule = panel_rule();
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..panels {
        let lo = a + j as f64 * h;
        let mid = lo + 0.5 * h;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, w) in rule {
            acc += f(mid + 0.5 * h * x) * w;
        }
        total += acc * (0.5 * h);
    }
    total
}

fn panel_real<F: FnMut(f64) -> f64>(a: f64, b: f64, f: &mut F) -> f64 {
    let h = b - a;
    let mid = a + 0.5 * h;
    panel_rule()
        .iter()
        .map(|&(x, w)| w * f(mid + 0.5 * h * x))
        .sum::<f64>()
        * (0.5 * h)
}

/// Adaptive bisection on `[a, b]`: a panel is accepted once the single-panel
/// value and the sum over its two halves agree to its share of `tol`
/// (proportional to its length), or to rounding level.
pub fn adaptive_real<F: FnMut(f64) -> f64>(a: f64, b: f64, tol: f64, mut f: F) -> f64 {
    const MAX_DEPTH: u32 = 40;
    let width = (b - a).abs();
    if width == 0.0 {
        return 0.0;
    }
    let mut total = 0.0;
    let whole = panel_real(a, b, &mut f);
    let mut stack = vec![(a, b, whole, 0u32)];
    while let Some((lo, hi, coarse, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel_real(lo, mid, &mut f);
        let right = panel_real(mid, hi, &mut f);
        let fine = left + right;
        let local = (tol * (hi - lo).abs() / width).max(8.0 * f64::EPSILON * fine.abs());
        if (fine - coarse).abs() <= local || depth >= MAX_DEPTH {
            total += fine;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    total
}
