//! Curvature measure `‖e′‖ dt`, total absolute curvature, oriented
//! curvature `κ̃ = det(e, e′)`, local L-convexity, indicatrix length and
//! planarity.

use alloc::vec::Vec;
use core::cell::Cell;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
#[allow(unused_imports)] // inherent when `std` is linked
use num_traits::Float;

use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::frame::{FrontalFrame, HalfInt};
use crate::quadrature::{integrate_adaptive, PanelRule, Quadrature};
use crate::vector::{angle_between, compensated_sum, det2, dot, Wrap};
use crate::PERIOD;

/// Default absolute quadrature tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
const LCONVEX_GRID: usize = 8192;
const KINK_GRID: usize = 4096;
const PLANARITY_SAMPLES: usize = 4096;
pub const PLANARITY_TOL: f64 = 1e-9;

/// Sign behaviour of `κ̃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LConvexity {
    NonNegative,
    NonPositive,
    Mixed,
}

impl LConvexity {
    pub fn is_convex(self) -> bool {
        self != LConvexity::Mixed
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LConvexity::NonNegative => "nonneg",
            LConvexity::NonPositive => "nonpos",
            LConvexity::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureSummary {
    /// `K(γ) = ∫ ‖e′‖ dt` in radians.
    pub total: f64,
    pub quad_error_estimate: f64,
    pub index: Option<HalfInt>,
    pub l_convex: Option<LConvexity>,
    /// Sign of `κ̃` when it does not change.
    pub sigma: Option<i8>,
    pub oriented_total: Option<f64>,
    pub planar: bool,
    pub planarity_residual: f64,
    pub indicatrix_length: f64,
    pub indicatrix_error: f64,
}

fn is_exactly_singular(frame: &FrontalFrame<'_>, t0: f64) -> bool {
    frame.singular_points().iter().any(|p| p.t == t0)
}

/// A pair `(u, w)` with `u ∧ w / ‖u‖²` equal to `γ′ ∧ γ″ / ‖γ′‖²` at a
/// regular parameter: `(γ′, γ″)` away from singular points and the
/// desingularized `(x, x′)` near them. Exactly at a singular parameter the
/// result is a domain error.
fn regular_jet(frame: &FrontalFrame<'_>, t: f64) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let t0 = t.wrap(PERIOD);
    if is_exactly_singular(frame, t0) {
        return Err(Error::Domain(t));
    }
    let (v, a) = match frame.desingularized(t0) {
        Some(pair) => pair,
        None => {
            let jet = frame.curve().derivative_jet(t0, 2);
            (jet.derivative(1).to_vec(), jet.derivative(2).to_vec())
        }
    };
    let s2 = dot(&v, &v);
    if s2 == 0.0 {
        return Err(Error::Domain(t));
    }
    Ok((v, a, s2))
}

/// Curvature measure density `k·ds/dt = ‖e′(t)‖` at a regular parameter.
pub fn curvature_integrand(frame: &FrontalFrame<'_>, t: f64) -> Result<f64> {
    let (v, a, s2) = regular_jet(frame, t)?;
    if v.len() == 2 {
        return Ok(det2(&v, &a).abs() / s2);
    }
    // ‖γ′ ∧ γ″‖ from its 2×2 minors; the Lagrange form ‖γ′‖²‖γ″‖² − (γ′·γ″)²
    // cancels catastrophically next to a singular point.
    let n = v.len();
    let mut wedge = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let m = v[i] * a[j] - v[j] * a[i];
            wedge += m * m;
        }
    }
    Ok(wedge.sqrt() / s2)
}

/// `κ̃(t) = det(e, e′)` for planar curves. Since `e = ±T`, this is
/// `det(γ′, γ″)/‖γ′‖²` whatever the sign of `e`.
pub fn oriented_curvature(frame: &FrontalFrame<'_>, t: f64) -> Result<f64> {
    require_planar(frame)?;
    let (v, a, s2) = regular_jet(frame, t)?;
    Ok(det2(&v, &a) / s2)
}

fn require_planar(frame: &FrontalFrame<'_>) -> Result<()> {
    if frame.dimension() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: frame.dimension(),
        });
    }
    Ok(())
}

/// Zeros of `κ̃` where it changes sign; `|κ̃|` has a kink there.
pub fn sign_changes(frame: &FrontalFrame<'_>) -> Vec<f64> {
    if frame.dimension() != 2 {
        return Vec::new();
    }
    let h = PERIOD / KINK_GRID as f64;
    let value = |t: f64| oriented_curvature(frame, t).ok();
    let samples: Vec<(f64, Option<f64>)> = (0..=KINK_GRID)
        .map(|i| {
            let t = h * (i as f64 + 0.5);
            (t, value(t))
        })
        .collect();
    let mut out = Vec::new();
    for w in samples.windows(2) {
        let ((mut lo, Some(flo)), (mut hi, Some(fhi))) = (w[0], w[1]) else {
            continue;
        };
        if flo == 0.0 || fhi == 0.0 || flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            match value(mid) {
                Some(fm) if fm.signum() == flo.signum() => lo = mid,
                Some(_) => hi = mid,
                None => break,
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        out.push((0.5 * (lo + hi)).wrap(PERIOD));
    }
    out
}

/// Panel boundaries for curvature integrals: singular parameters and sign
/// changes of `κ̃`.
pub fn breakpoints(frame: &FrontalFrame<'_>) -> Vec<f64> {
    let mut b = frame.breakpoints();
    b.extend(sign_changes(frame));
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b
}

/// All lifts `c + 2πk` of the breakpoints that fall inside `[a, b]`.
fn lifted(points: &[f64], a: f64, b: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let k0 = (a / PERIOD).floor() as i64 - 1;
    let k1 = (b / PERIOD).ceil() as i64 + 1;
    for k in k0..=k1 {
        for &c in points {
            let x = c + PERIOD * k as f64;
            if x >= a && x <= b {
                out.push(x);
            }
        }
    }
    out
}

/// `∫ₐᵇ ‖e′‖ dt` with panels pinned at the lifted breakpoints.
pub fn total_absolute_curvature_on(
    frame: &FrontalFrame<'_>,
    breaks: &[f64],
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Quadrature> {
    let pins = lifted(breaks, a, b);
    integrate_adaptive(
        |t| curvature_integrand(frame, t).unwrap_or(0.0),
        a,
        b,
        &pins,
        tol,
        &PanelRule::default(),
    )
}

/// `K(γ)` over one period.
pub fn total_absolute_curvature(frame: &FrontalFrame<'_>, tol: f64) -> Result<Quadrature> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    total_absolute_curvature_on(frame, &breakpoints(frame), 0.0, PERIOD, tol)
}

/// `∫₀^{2π} κ̃ dt`.
pub fn oriented_total(frame: &FrontalFrame<'_>, tol: f64) -> Result<Quadrature> {
    require_planar(frame)?;
    let pins = breakpoints(frame);
    integrate_adaptive(
        |t| oriented_curvature(frame, t).unwrap_or(0.0),
        0.0,
        PERIOD,
        &pins,
        tol,
        &PanelRule::default(),
    )
}

/// Classifies the sign of `κ̃` from an 8192-point grid plus the nodes of the
/// oriented-total quadrature. Returns the classification and that total.
pub fn l_convexity_with_total(
    frame: &FrontalFrame<'_>,
    tol: f64,
) -> Result<(LConvexity, Quadrature)> {
    require_planar(frame)?;
    let lo = Cell::new(f64::INFINITY);
    let hi = Cell::new(f64::NEG_INFINITY);
    let mut record = |t: f64| -> f64 {
        match oriented_curvature(frame, t) {
            Ok(k) => {
                lo.set(lo.get().min(k));
                hi.set(hi.get().max(k));
                k
            }
            Err(_) => 0.0,
        }
    };
    let h = PERIOD / LCONVEX_GRID as f64;
    for i in 0..LCONVEX_GRID {
        record(h * i as f64);
    }
    let pins = breakpoints(frame);
    let total = integrate_adaptive(&mut record, 0.0, PERIOD, &pins, tol, &PanelRule::default())?;
    let (min, max) = (lo.get(), hi.get());
    let tol_sign = 1e-9 * min.abs().max(max.abs());
    let verdict = if min >= -tol_sign {
        LConvexity::NonNegative
    } else if max <= tol_sign {
        LConvexity::NonPositive
    } else {
        LConvexity::Mixed
    };
    Ok((verdict, total))
}

pub fn l_convexity(frame: &FrontalFrame<'_>) -> Result<LConvexity> {
    Ok(l_convexity_with_total(frame, DEFAULT_TOL)?.0)
}

/// Geodesic polyline length of `e` on `[a, b]` with `n` equal chords.
fn polyline(frame: &FrontalFrame<'_>, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut prev = frame.e(a);
    compensated_sum((1..=n).map(|i| {
        let t = if i == n { b } else { a + h * i as f64 };
        let next = frame.e(t);
        let d = angle_between(&prev, &next);
        prev = next;
        d
    }))
}

/// Length of the tangent indicatrix `e` over `[a, b]`, from sphere
/// polylines with two levels of Richardson extrapolation. Pieces are split
/// at the breakpoints. Returns `(length, error estimate)`.
pub fn indicatrix_length_on(
    frame: &FrontalFrame<'_>,
    breaks: &[f64],
    a: f64,
    b: f64,
) -> (f64, f64) {
    let mut edges = alloc::vec![a];
    let mut inner = lifted(breaks, a, b);
    inner.retain(|&x| x > a + 1e-12 && x < b - 1e-12);
    inner.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges.extend(inner);
    edges.push(b);
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for w in edges.windows(2) {
        let (p, q) = (w[0], w[1]);
        let n = (((q - p) / PERIOD * 8192.0).ceil() as usize).max(16);
        let l1 = polyline(frame, p, q, n);
        let l2 = polyline(frame, p, q, 2 * n);
        let l4 = polyline(frame, p, q, 4 * n);
        let r1 = l2 + (l2 - l1) / 3.0;
        let r2 = l4 + (l4 - l2) / 3.0;
        let r = r2 + (r2 - r1) / 15.0;
        values.push(r);
        errors.push((r - r2).abs());
    }
    (compensated_sum(values), compensated_sum(errors))
}

/// Length of `e` over `[0, 2π]`.
pub fn indicatrix_length(frame: &FrontalFrame<'_>) -> (f64, f64) {
    indicatrix_length_on(frame, &breakpoints(frame), 0.0, PERIOD)
}

/// Largest distance from `points` to the best-fitting 2-plane, affine
/// (through the centroid) or linear (through the origin).
pub fn plane_fit_residual(points: &[Vec<f64>], affine: bool) -> f64 {
    let n = points[0].len();
    if n <= 2 {
        return 0.0;
    }
    let count = points.len() as f64;
    let mut center = DVector::<f64>::zeros(n);
    if affine {
        for p in points {
            center += DVector::from_column_slice(p);
        }
        center /= count;
    }
    let mut cov = DMatrix::<f64>::zeros(n, n);
    for p in points {
        let d = DVector::from_column_slice(p) - &center;
        cov += &d * d.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let u = eig.eigenvectors.column(order[0]).into_owned();
    let v = eig.eigenvectors.column(order[1]).into_owned();
    points
        .iter()
        .map(|p| {
            let d = DVector::from_column_slice(p) - &center;
            let r = &d - &u * u.dot(&d) - &v * v.dot(&d);
            r.norm()
        })
        .fold(0.0, f64::max)
}

/// Affine plane fit over 4096 samples; `(planar, residual)`.
pub fn planarity_check(curve: &ClosedCurve) -> (bool, f64) {
    if curve.dimension() == 2 {
        return (true, 0.0);
    }
    let pts = curve.sample_positions(PLANARITY_SAMPLES);
    let r = plane_fit_residual(&pts, true);
    (r <= PLANARITY_TOL * curve.scale(), r)
}

/// Largest `|θ′ − κ̃|` over `count` regular sample points, with `θ′` from a
/// fourth-order central difference of the locally unwrapped angle.
pub fn theta_prime_deviation(frame: &FrontalFrame<'_>, count: usize) -> Result<f64> {
    require_planar(frame)?;
    let h = 2e-4;
    let sing = frame.breakpoints();
    let mut worst = 0.0f64;
    for i in 0..count {
        let t = PERIOD * (i as f64 + 0.5) / count as f64;
        if sing.iter().any(|&c| {
            let d = (t - c).wrap(PERIOD);
            d.min(PERIOD - d) < 1e-3
        }) {
            continue;
        }
        let e0 = frame.e(t);
        let turn = |s: f64| {
            let e1 = frame.e(t + s);
            det2(&e0, &e1).atan2(dot(&e0, &e1))
        };
        let fd = (-turn(2.0 * h) + 8.0 * turn(h) - 8.0 * turn(-h) + turn(-2.0 * h)) / (12.0 * h);
        worst = worst.max((fd - oriented_curvature(frame, t)?).abs());
    }
    Ok(worst)
}

/// Whether the unit vectors lie on one great circle and wind around it
/// monotonically, once per doubled period. Returns the verdict with the
/// linear plane-fit residual.
pub fn great_circle_once(frame: &FrontalFrame<'_>, samples: usize) -> (bool, f64) {
    let h = 2.0 * PERIOD / samples as f64;
    let es: Vec<Vec<f64>> = (0..=samples).map(|i| frame.e(h * i as f64)).collect();
    let residual = plane_fit_residual(&es[..samples], false);
    if residual > PLANARITY_TOL {
        return (false, residual);
    }
    let n = es[0].len();
    let (u, v) = if n == 2 {
        (alloc::vec![1.0, 0.0], alloc::vec![0.0, 1.0])
    } else {
        let mut cov = DMatrix::<f64>::zeros(n, n);
        for e in &es[..samples] {
            let d = DVector::from_column_slice(e);
            cov += &d * d.transpose();
        }
        let eig = SymmetricEigen::new(cov);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
        let col = |k: usize| {
            eig.eigenvectors
                .column(order[k])
                .iter()
                .copied()
                .collect::<Vec<f64>>()
        };
        (col(0), col(1))
    };
    let angle = |e: &[f64]| dot(e, &v).atan2(dot(e, &u));
    let mut forward = 0usize;
    let mut backward = 0usize;
    let mut total = 0.0;
    for w in es.windows(2) {
        let mut d = angle(&w[1]) - angle(&w[0]);
        if d > core::f64::consts::PI {
            d -= PERIOD;
        } else if d < -core::f64::consts::PI {
            d += PERIOD;
        }
        if d > 1e-12 {
            forward += 1;
        } else if d < -1e-12 {
            backward += 1;
        }
        total += d;
    }
    let monotone = forward == 0 || backward == 0;
    (monotone && (total.abs() - PERIOD).abs() < 1e-6, residual)
}

/// Runs every curvature computation on a built frame.
pub fn summarize(frame: &FrontalFrame<'_>, tol: f64) -> Result<CurvatureSummary> {
    let k = total_absolute_curvature(frame, tol)?;
    let (indicatrix_length, indicatrix_error) = indicatrix_length(frame);
    let (planar, planarity_residual) = planarity_check(frame.curve());
    let mut summary = CurvatureSummary {
        total: k.value,
        quad_error_estimate: k.error,
        index: None,
        l_convex: None,
        sigma: None,
        oriented_total: None,
        planar,
        planarity_residual,
        indicatrix_length,
        indicatrix_error,
    };
    if frame.dimension() == 2 {
        let lift = frame.angle_lift()?;
        summary.index = Some(lift.rotation_index()?);
        let (lc, total) = l_convexity_with_total(frame, tol)?;
        summary.l_convex = Some(lc);
        summary.sigma = match lc {
            LConvexity::NonNegative => Some(1),
            LConvexity::NonPositive => Some(-1),
            LConvexity::Mixed => None,
        };
        summary.oriented_total = Some(total.value);
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Family;
    use crate::frame::build_frame;
    use crate::singular::analyze_singular_points;
    use crate::trig::TrigPoly;
    use alloc::vec;

    #[test]
    fn circle_integrand_is_one() {
        let c = ClosedCurve::from_family(Family::Circle { radius: 3.0 }).unwrap();
        let f = build_frame(&c, &[]).unwrap();
        assert!((curvature_integrand(&f, 0.7).unwrap() - 1.0).abs() < 1e-14);
        let k = total_absolute_curvature(&f, 1e-9).unwrap();
        assert!((k.value - PERIOD).abs() < 1e-12);
    }

    #[test]
    fn integrand_rejects_singular_parameter() {
        let c = ClosedCurve::from_family(Family::Hypocycloid { m: 1 }).unwrap();
        let pts = analyze_singular_points(&c).unwrap();
        let f = build_frame(&c, &pts).unwrap();
        let t = pts[1].t;
        assert!(matches!(curvature_integrand(&f, t), Err(Error::Domain(_))));
    }

    #[test]
    fn factored_integrand_is_bounded_near_cusps() {
        // Eye: ‖e′‖ tends to 2a at the cusp t = 0.
        let a = 10.0;
        let c = ClosedCurve::from_family(Family::Eye { a }).unwrap();
        let pts = analyze_singular_points(&c).unwrap();
        let f = build_frame(&c, &pts).unwrap();
        for d in [1e-3, 1e-6, 1e-9, 1e-12] {
            for t in [d, PERIOD - d] {
                let v = curvature_integrand(&f, t).unwrap();
                assert!(
                    (v - 2.0 * a).abs() < 1e4 * d * d + 1e-13 * a,
                    "t = {t}: {v}"
                );
            }
        }
        // Inside the expansion radius the factored form agrees with the
        // direct quotient where the latter is still well conditioned.
        let t = 0.05;
        let (x, dx) = f.desingularized(t).unwrap();
        let jet = c.eval_jet(t, 2).unwrap();
        let (v, acc) = (jet.derivative(1), jet.derivative(2));
        let direct = det2(v, acc) / dot(v, v);
        let factored = det2(&x, &dx) / dot(&x, &x);
        assert!((direct - factored).abs() < 1e-9 * direct.abs());
    }

    #[test]
    fn segment_has_zero_curvature() {
        let c = ClosedCurve::fourier(vec![
            TrigPoly::new(0.0, vec![1.0], vec![]),
            TrigPoly::new(0.0, vec![], vec![]),
        ])
        .unwrap();
        let pts = analyze_singular_points(&c).unwrap();
        let f = build_frame(&c, &pts).unwrap();
        assert!(f.co_orientable());
        let k = total_absolute_curvature(&f, 1e-9).unwrap();
        assert!(k.value.abs() < 1e-12);
    }

    #[test]
    fn plane_fit_detects_tilt() {
        let flat: Vec<Vec<f64>> = (0..50)
            .map(|i| {
                let t = i as f64 * 0.1;
                vec![t.cos(), t.sin(), 0.3 * t.cos() + 2.0]
            })
            .collect();
        assert!(plane_fit_residual(&flat, true) < 1e-12);
        let bent: Vec<Vec<f64>> = (0..50)
            .map(|i| {
                let t = i as f64 * 0.1;
                vec![t.cos(), t.sin(), (2.0 * t).sin()]
            })
            .collect();
        assert!(plane_fit_residual(&bent, true) > 0.1);
    }
}
