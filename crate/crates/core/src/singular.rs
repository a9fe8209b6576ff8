//! Singular points: location, vanishing order and the cusp criterion
//! `γ′(c) = 0, det(γ″(c), γ‴(c)) ≠ 0`.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent when `std` is linked
use num_traits::Float;

use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::vector::{canonical_param, det2, dot, norm, Wrap};
use crate::PERIOD;

pub const SCAN_POINTS: usize = 4096;
/// Grid dips with `‖γ′‖ < SPEED_THRESHOLD · scale` are candidates.
pub const SPEED_THRESHOLD: f64 = 1e-6;
/// Relative size below which a higher derivative counts as vanishing.
pub const ORDER_THRESHOLD: f64 = 1e-6;
/// `|det(γ″, γ‴)| > CUSP_THRESHOLD · scale³` for a cusp.
pub const CUSP_THRESHOLD: f64 = 1e-8;
const REFINE_TOL: f64 = 1e-12;

/// A parameter where `γ′` vanishes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularPoint {
    pub t: f64,
    /// `r` with `γ′(t) = (t − c)^r x(t)`, `x(c) ≠ 0`.
    pub order: u32,
    pub is_cusp: bool,
    /// `det(γ″(c), γ‴(c))`, planar curves only.
    pub cusp_det: Option<f64>,
}

/// Safeguarded Newton on a bracket with `f(lo) < 0 ≤ f(hi)`.
fn refine_root<F: FnMut(f64) -> (f64, f64)>(mut f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step < 1e-15 * x.abs().max(1.0) || (hi - lo) < 1e-3 * REFINE_TOL {
            break;
        }
    }
    x
}

/// Largest norm of each derivative order `1..=4` over a coarse grid.
fn derivative_scales(curve: &ClosedCurve) -> [f64; 5] {
    let (a, b) = curve.domain();
    let mut m = [0.0f64; 5];
    let samples = 512;
    for i in 0..=samples {
        let t = a + (b - a) * i as f64 / samples as f64;
        let jet = curve.derivative_jet(t, 4);
        for (j, slot) in m.iter_mut().enumerate().skip(1) {
            *slot = slot.max(norm(jet.derivative(j)));
        }
    }
    m
}

/// Finds every zero of `γ′` on the parameter domain, sorted by `t`.
///
/// Local minima of `‖γ′‖²` are bracketed from sign changes of
/// `d/dt ‖γ′‖² = 2 γ′·γ″` on a uniform grid, refined by safeguarded Newton,
/// and kept when the refined speed is below the singular threshold.
pub fn detect_singular_points(curve: &ClosedCurve) -> Result<Vec<SingularPoint>> {
    let (a, b) = curve.domain();
    let closed = curve.is_closed();
    let scale = curve.scale();
    let speed_tol = SPEED_THRESHOLD * scale;
    let h = (b - a) / SCAN_POINTS as f64;
    let count = if closed { SCAN_POINTS } else { SCAN_POINTS + 1 };

    let mut slope = Vec::with_capacity(count);
    let mut low = Vec::with_capacity(count);
    for i in 0..count {
        let jet = curve.derivative_jet(a + h * i as f64, 2);
        slope.push(dot(jet.derivative(1), jet.derivative(2)));
        low.push(norm(jet.derivative(1)) < speed_tol);
    }

    // Runs of consecutive low-speed samples: (first index, length).
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < count {
        if low[i] {
            let start = i;
            while i < count && low[i] {
                i += 1;
            }
            runs.push((start, i - start));
        } else {
            i += 1;
        }
    }
    if closed && runs.len() > 1 && runs[0].0 == 0 && low[count - 1] {
        let (s, l) = runs.pop().unwrap();
        runs[0] = (s, l + runs[0].1);
    }

    let pairs = if closed { count } else { count - 1 };
    let mut found: Vec<f64> = Vec::new();
    for i in 0..pairs {
        let j = (i + 1) % count;
        if !(slope[i] < 0.0 && slope[j] >= 0.0) {
            continue;
        }
        let lo = a + h * i as f64;
        let hi = lo + h;
        let t = refine_root(
            |t| {
                let jet = curve.derivative_jet(t, 3);
                let (d1, d2, d3) = (jet.derivative(1), jet.derivative(2), jet.derivative(3));
                (dot(d1, d2), dot(d2, d2) + dot(d1, d3))
            },
            lo,
            hi,
        );
        if norm(curve.derivative_jet(t, 1).derivative(1)) <= speed_tol {
            found.push(if closed {
                canonical_param(t, REFINE_TOL)
            } else {
                t
            });
        }
    }
    found.sort_by(|x, y| x.partial_cmp(y).unwrap());
    found.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
    if closed && found.len() > 1 && found[0] + PERIOD - found[found.len() - 1] < 1e-9 {
        found.pop();
    }

    let in_run = |t: f64, (start, len): (usize, usize)| {
        let lo = a + h * start as f64 - h;
        let d = (t - lo).wrap(if closed { PERIOD } else { f64::INFINITY });
        d <= h * (len + 1) as f64
    };
    // Wide dips must contain an isolated zero of finite order.
    for &run in runs.iter().filter(|r| r.1 >= 3) {
        if !found.iter().any(|&t| in_run(t, run)) {
            return Err(Error::DegenerateCurve(format!(
                "γ′ is nearly zero on an interval near t = {}",
                a + h * run.0 as f64
            )));
        }
    }
    if found.is_empty() {
        return Ok(Vec::new());
    }
    let scales = derivative_scales(curve);
    found
        .into_iter()
        .map(|t| {
            let jet = curve.derivative_jet(t, 4);
            let order = (1..=3u32).find(|&r| {
                let j = r as usize + 1;
                norm(jet.derivative(j)) > ORDER_THRESHOLD * scales[j]
            });
            let Some(order) = order else {
                if runs.iter().any(|&r| r.1 >= 3 && in_run(t, r)) {
                    return Err(Error::DegenerateCurve(format!(
                        "γ′ vanishes on an interval near t = {t}"
                    )));
                }
                return Err(Error::UnsupportedSingularity { t });
            };
            Ok(SingularPoint {
                t,
                order,
                is_cusp: false,
                cusp_det: None,
            })
        })
        .collect()
}

/// Evaluates the cusp criterion at a detected singular point.
pub fn classify_cusp(curve: &ClosedCurve, p: &SingularPoint) -> Result<SingularPoint> {
    if curve.dimension() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: curve.dimension(),
        });
    }
    let jet = curve.derivative_jet(p.t, 3);
    let det = det2(jet.derivative(2), jet.derivative(3));
    let threshold = CUSP_THRESHOLD * curve.scale().powi(3);
    Ok(SingularPoint {
        cusp_det: Some(det),
        is_cusp: p.order == 1 && det.abs() > threshold,
        ..*p
    })
}

/// Detects singular points and, for planar curves, classifies them.
pub fn analyze_singular_points(curve: &ClosedCurve) -> Result<Vec<SingularPoint>> {
    let points = detect_singular_points(curve)?;
    if curve.dimension() != 2 {
        return Ok(points);
    }
    points.iter().map(|p| classify_cusp(curve, p)).collect()
}

/// Number of cusps among classified points.
pub fn cusp_count(points: &[SingularPoint]) -> usize {
    points.iter().filter(|p| p.is_cusp).count()
}

/// Whether every singular point is a cusp.
pub fn all_cusps(points: &[SingularPoint]) -> bool {
    points.iter().all(|p| p.is_cusp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Family;
    use crate::trig::TrigPoly;
    use alloc::vec;

    #[test]
    fn circle_has_no_singular_points() {
        let c = ClosedCurve::from_family(Family::Circle { radius: 3.0 }).unwrap();
        assert!(detect_singular_points(&c).unwrap().is_empty());
    }

    #[test]
    fn model_cusp_at_origin() {
        let c = ClosedCurve::from_family(Family::ModelCusp).unwrap();
        let pts = analyze_singular_points(&c).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].t.abs() < 1e-12);
        assert_eq!(pts[0].order, 1);
        assert!(pts[0].is_cusp);
        // γ″ = (2, 0), γ‴ = (0, 6)
        assert!((pts[0].cusp_det.unwrap() - 12.0).abs() < 1e-9);
    }

    #[test]
    fn double_zero_is_order_two_and_not_a_cusp() {
        // γ′ = (1 − cos t)(sin t, cos 2t)
        let x = TrigPoly::new(0.0, vec![-1.0, 0.25], vec![]);
        let y = TrigPoly::new(0.0, vec![], vec![-0.5, 0.5, -1.0 / 6.0]);
        let c = ClosedCurve::fourier(vec![x, y]).unwrap();
        let pts = analyze_singular_points(&c).unwrap();
        assert_eq!(pts.len(), 1);
        let d = pts[0].t.min(PERIOD - pts[0].t);
        assert!(d < 1e-6);
        assert_eq!(pts[0].order, 2);
        assert!(!pts[0].is_cusp);
    }

    #[test]
    fn segment_has_two_non_cusp_singularities() {
        let c = ClosedCurve::fourier(vec![
            TrigPoly::new(0.0, vec![1.0], vec![]),
            TrigPoly::new(0.0, vec![], vec![]),
        ])
        .unwrap();
        let pts = analyze_singular_points(&c).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|p| p.order == 1 && !p.is_cusp));
    }

    #[test]
    fn classify_needs_planar_curve() {
        let c = ClosedCurve::fourier(vec![
            TrigPoly::new(0.0, vec![1.0], vec![]),
            TrigPoly::new(0.0, vec![], vec![1.0]),
            TrigPoly::new(0.0, vec![], vec![]),
        ])
        .unwrap();
        let p = SingularPoint {
            t: 0.0,
            order: 1,
            is_cusp: false,
            cusp_det: None,
        };
        assert!(matches!(
            classify_cusp(&c, &p),
            Err(Error::Dimension { .. })
        ));
    }
}
