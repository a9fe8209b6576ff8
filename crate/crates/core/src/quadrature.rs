//! Gauss–Legendre rules and adaptive panel integration.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent when `std` is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::vector::compensated_sum;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Applies the rule on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

/// `(P_n(x), P_n′(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

/// Settings for [`integrate_adaptive`].
#[derive(Clone, Copy, Debug)]
pub struct PanelRule {
    pub nodes: usize,
    pub max_panels: usize,
    /// Initial panels are no wider than this.
    pub max_width: f64,
}

impl Default for PanelRule {
    fn default() -> Self {
        PanelRule {
            nodes: 16,
            max_panels: 400_000,
            max_width: PI / 8.0,
        }
    }
}

/// Adaptive composite Gauss–Legendre integration of `f` over `[a, b]`.
///
/// Panel boundaries are pinned at every entry of `breakpoints` inside
/// `(a, b)`. Each panel is compared against the sum over its two halves and
/// bisected until the difference is below its share of `tol`. The integrand
/// is never evaluated at a panel endpoint. Panels are summed in parameter
/// order, so the result does not depend on the refinement path.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
    rule: &PanelRule,
) -> Result<Quadrature> {
    if b <= a {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            panels: 0,
        });
    }
    let gl = GaussLegendre::new(rule.nodes);
    let total = b - a;
    let min_width = total * 1e-13;

    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&c| c > a + min_width && c < b - min_width)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() <= min_width);

    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    // (lo, hi, whole-panel estimate)
    let mut stack: Vec<(f64, f64, f64)> = Vec::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let pieces = (((hi - lo) / rule.max_width).ceil() as usize).max(1);
        let h = (hi - lo) / pieces as f64;
        for i in (0..pieces).rev() {
            let pa = lo + h * i as f64;
            let pb = if i + 1 == pieces {
                hi
            } else {
                lo + h * (i + 1) as f64
            };
            let est = gl.integrate(pa, pb, &mut f);
            stack.push((pa, pb, est));
        }
    }

    let mut accepted: Vec<(f64, f64, f64)> = Vec::new();
    let mut evaluated = stack.len();
    while let Some((pa, pb, whole)) = stack.pop() {
        let mid = 0.5 * (pa + pb);
        let left = gl.integrate(pa, mid, &mut f);
        let right = gl.integrate(mid, pb, &mut f);
        evaluated += 2;
        let diff = (left + right - whole).abs();
        let share = tol * (pb - pa) / total;
        if diff <= share || pb - pa <= min_width {
            accepted.push((pa, left + right, diff));
            continue;
        }
        if evaluated >= rule.max_panels {
            accepted.push((pa, left + right, diff));
            accepted.extend(stack.drain(..).map(|(x, _, w)| (x, w, w.abs())));
            let (value, error) = summarize(&mut accepted);
            return Err(Error::Accuracy {
                estimate: value,
                error,
            });
        }
        stack.push((mid, pb, right));
        stack.push((pa, mid, left));
    }
    let panels = accepted.len();
    let (value, error) = summarize(&mut accepted);
    if error > tol {
        return Err(Error::Accuracy {
            estimate: value,
            error,
        });
    }
    Ok(Quadrature {
        value,
        error,
        panels,
    })
}

fn summarize(panels: &mut [(f64, f64, f64)]) -> (f64, f64) {
    panels.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    (
        compensated_sum(panels.iter().map(|p| p.1)),
        compensated_sum(panels.iter().map(|p| p.2)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_16_integrates_degree_31_exactly() {
        let gl = GaussLegendre::new(16);
        let sum_w: f64 = gl.weights.iter().sum();
        assert!((sum_w - 2.0).abs() < 1e-14);
        // ∫_{-1}^{1} x^30 dx = 2/31
        let v = gl.integrate(-1.0, 1.0, |x| x.powi(30));
        assert!((v - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_kink_at_breakpoint() {
        let q = integrate_adaptive(
            |x| (x - 1.0).abs(),
            0.0,
            3.0,
            &[1.0],
            1e-12,
            &PanelRule::default(),
        )
        .unwrap();
        assert!((q.value - 2.5).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_kink_without_breakpoint() {
        let q = integrate_adaptive(
            |x| (x - 1.1).abs(),
            0.0,
            3.0,
            &[],
            1e-10,
            &PanelRule::default(),
        )
        .unwrap();
        let exact = 0.5 * 1.1 * 1.1 + 0.5 * 1.9 * 1.9;
        assert!((q.value - exact).abs() < 1e-10);
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let rule = PanelRule {
            max_panels: 50,
            ..PanelRule::default()
        };
        let err = integrate_adaptive(|x| (x - 1.1).abs().sqrt(), 0.0, 3.0, &[], 1e-14, &rule)
            .unwrap_err();
        assert!(matches!(err, Error::Accuracy { .. }));
    }
}
