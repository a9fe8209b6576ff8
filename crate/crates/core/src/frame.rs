//! The continuous unit tangent field `e`, its sign function, the planar
//! angle lift and the rotation index.

use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)] // inherent when `std` is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::singular::SingularPoint;
use crate::vector::{angle_between, det2, dot, norm, normalized, Wrap};
use crate::PERIOD;

/// A multiple of 1/2, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Nearest half-integer to `x` and the distance to it.
    pub fn round(x: f64) -> (HalfInt, f64) {
        let twice = (2.0 * x).round();
        (HalfInt(twice as i64), (x - twice / 2.0).abs())
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Offset at which one-sided limits of `e` are probed, per vanishing order.
fn probe_offset(order: u32) -> f64 {
    match order {
        1 => 1e-5,
        2 => 1e-3,
        _ => 1e-2,
    }
}

fn continuity_tolerance(order: u32) -> f64 {
    if order == 1 {
        1e-6
    } else {
        1e-4
    }
}

/// Within this distance of a singular parameter, `e` is evaluated from the
/// factored jet `γ′ = (t − c)^r x(t)` instead of `γ′/‖γ′‖`.
const FACTORED_RADIUS: f64 = 1e-6;

/// Coefficients kept in the local expansion of `γ′` at a singular point.
const SERIES_TERMS: usize = 24;
/// Relative size of the truncated tail at the edge of the expansion radius.
const SERIES_TAIL: f64 = 1e-16;
/// Upper bound for the expansion radius.
const SERIES_MAX_RADIUS: f64 = 0.5;

/// `γ′(c + d) = Σ aₖ dᵏ` at a singular parameter `c`, trusted for
/// `|d| < radius`.
#[derive(Clone, Debug)]
struct LocalSeries {
    coeffs: Vec<Vec<f64>>,
    radius: f64,
}

fn local_series(curve: &ClosedCurve, p: &SingularPoint, gap: f64) -> LocalSeries {
    let coeffs = curve.velocity_coefficients::<SERIES_TERMS>(p.t);
    let r = p.order as usize;
    let lead = norm(&coeffs[r]);
    let last = coeffs.len() - 1;
    let mut radius = SERIES_MAX_RADIUS.min(0.5 * gap);
    for k in [last - 1, last] {
        let c = norm(&coeffs[k]);
        if c > 0.0 && k > r {
            radius = radius.min((SERIES_TAIL * lead / c).powf(1.0 / (k - r) as f64));
        }
    }
    LocalSeries { coeffs, radius }
}

/// Continuous unit tangent field along a closed frontal.
///
/// On the `j`-th regular interval `e = σ_j·γ′/‖γ′‖`, with `σ` flipping
/// across singular points of odd vanishing order. The interval containing
/// `t = 0⁺` has `σ = +1`. Beyond `2π` the field continues as
/// `e(t + 2π) = ±e(t)`.
#[derive(Clone, Debug)]
pub struct FrontalFrame<'a> {
    curve: &'a ClosedCurve,
    singular: Vec<SingularPoint>,
    /// `σ_j` for the interval with `j` singular parameters below it.
    signs: Vec<f64>,
    co_orientable: bool,
    /// Jets at each singular parameter.
    jets: Vec<Jet>,
    series: Vec<LocalSeries>,
}

/// A regular interval and the value of the sign function `ε = T·e` on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignInterval {
    pub start: f64,
    pub end: f64,
    pub epsilon: i8,
}

/// Builds the frame from the curve and its singular points.
pub fn build_frame<'a>(
    curve: &'a ClosedCurve,
    singular: &[SingularPoint],
) -> Result<FrontalFrame<'a>> {
    curve.require_closed()?;
    let mut singular = singular.to_vec();
    singular.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
    let mut signs = Vec::with_capacity(singular.len() + 1);
    signs.push(1.0);
    for p in &singular {
        let last = *signs.last().unwrap();
        signs.push(if p.order % 2 == 1 { -last } else { last });
    }
    let first = singular.iter().take_while(|p| p.t <= 1e-9).count();
    let norm_sign = signs[first];
    signs.iter_mut().for_each(|s| *s *= norm_sign);
    let flips = singular.iter().filter(|p| p.order % 2 == 1).count();
    let jets = singular
        .iter()
        .map(|p| curve.derivative_jet(p.t, 4))
        .collect();
    let series = singular
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let gap = if singular.len() < 2 {
                PERIOD
            } else {
                let next = singular[(i + 1) % singular.len()].t;
                let prev = singular[(i + singular.len() - 1) % singular.len()].t;
                (next - p.t).wrap(PERIOD).min((p.t - prev).wrap(PERIOD))
            };
            local_series(curve, p, gap)
        })
        .collect();
    let frame = FrontalFrame {
        curve,
        singular,
        signs,
        co_orientable: flips % 2 == 0,
        jets,
        series,
    };
    frame.check_continuity()?;
    Ok(frame)
}

impl<'a> FrontalFrame<'a> {
    pub fn curve(&self) -> &'a ClosedCurve {
        self.curve
    }

    pub fn singular_points(&self) -> &[SingularPoint] {
        &self.singular
    }

    pub fn co_orientable(&self) -> bool {
        self.co_orientable
    }

    pub fn dimension(&self) -> usize {
        self.curve.dimension()
    }

    /// Parameters where the frame is not given by `±γ′/‖γ′‖`.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.singular.iter().map(|p| p.t).collect()
    }

    /// `(t mod 2π, ±1)` where the sign accounts for `e(t + 2π) = ±e(t)`.
    fn reduce(&self, t: f64) -> (f64, f64) {
        let k = (t / PERIOD).floor();
        let t0 = t - k * PERIOD;
        let (t0, k) = if t0 >= PERIOD {
            (t0 - PERIOD, k + 1.0)
        } else {
            (t0, k)
        };
        let odd = (k as i64).rem_euclid(2) == 1;
        let flip = if !self.co_orientable && odd {
            -1.0
        } else {
            1.0
        };
        (t0, flip)
    }

    /// `σ_j` of the regular interval containing `t0 ∈ [0, 2π)`.
    fn interval_sign(&self, t0: f64) -> f64 {
        let j = self.singular.iter().take_while(|p| p.t < t0).count();
        self.signs[j]
    }

    /// Sign relating `e` and `T = γ′/‖γ′‖` at a regular parameter.
    pub fn sign(&self, t: f64) -> f64 {
        let (t0, flip) = self.reduce(t);
        flip * self.interval_sign(t0)
    }

    /// Index of a singular parameter within `radius` of `t0`, if any.
    fn nearby_singular(&self, t0: f64, radius: f64) -> Option<usize> {
        self.singular.iter().position(|p| {
            let d = (t0 - p.t).abs();
            d.min(PERIOD - d) < radius
        })
    }

    /// `e` near singular point `i` from the factored jet.
    fn factored(&self, i: usize, t0: f64) -> Vec<f64> {
        let p = &self.singular[i];
        let jet = &self.jets[i];
        let r = p.order as usize;
        let mut d = t0 - p.t;
        if d > PERIOD / 2.0 {
            d -= PERIOD;
        } else if d < -PERIOD / 2.0 {
            d += PERIOD;
        }
        let n = jet.dimension();
        let mut x = alloc::vec![0.0; n];
        let mut fact = 1.0;
        for j in 1..=r {
            fact *= j as f64;
        }
        let mut pow = 1.0;
        for j in r..=3 {
            let dj = jet.derivative(j + 1);
            for (xi, v) in x.iter_mut().zip(dj) {
                *xi += v * pow / fact;
            }
            pow *= d;
            fact *= (j + 1) as f64;
        }
        // σ after the singular point; one-sided limits agree.
        let after = if p.t <= 1e-9 && t0 > PERIOD / 2.0 {
            // t0 sits just below 2π, i.e. before the singular point at 0.
            self.signs[self.signs.len() - 1] * if p.order % 2 == 1 { -1.0 } else { 1.0 }
        } else {
            self.signs[self.singular.iter().take_while(|q| q.t <= p.t).count()]
        };
        let l = norm(&x);
        x.iter_mut().for_each(|v| *v *= after / l);
        x
    }

    /// `(x, x′)` with `γ′(t) = (t − c)ʳ x(t)` when `t0 ∈ [0, 2π)` lies
    /// within the expansion radius of a singular point `c`. Near `c` the
    /// products in `γ′ ∧ γ″` cancel almost completely, while `x ∧ x′` has no
    /// such cancellation.
    pub(crate) fn desingularized(&self, t0: f64) -> Option<(Vec<f64>, Vec<f64>)> {
        let (i, d) = self.singular.iter().enumerate().find_map(|(i, p)| {
            let mut d = t0 - p.t;
            if d > PERIOD / 2.0 {
                d -= PERIOD;
            } else if d < -PERIOD / 2.0 {
                d += PERIOD;
            }
            (d.abs() < self.series[i].radius).then_some((i, d))
        })?;
        let r = self.singular[i].order as usize;
        let coeffs = &self.series[i].coeffs;
        let n = self.dimension();
        let mut x = alloc::vec![0.0; n];
        let mut dx = alloc::vec![0.0; n];
        for k in (r..coeffs.len()).rev() {
            for c in 0..n {
                x[c] = x[c] * d + coeffs[k][c];
            }
        }
        for k in (r + 1..coeffs.len()).rev() {
            let j = (k - r) as f64;
            for c in 0..n {
                dx[c] = dx[c] * d + j * coeffs[k][c];
            }
        }
        Some((x, dx))
    }

    /// The unit tangent field at any real `t`.
    pub fn e(&self, t: f64) -> Vec<f64> {
        let (t0, flip) = self.reduce(t);
        if let Some(i) = self.nearby_singular(t0, FACTORED_RADIUS) {
            let mut v = self.factored(i, t0);
            v.iter_mut().for_each(|x| *x *= flip);
            return v;
        }
        let v = self.curve.derivative_jet(t0, 1).derivative(1).to_vec();
        let s = flip * self.interval_sign(t0) / norm(&v);
        v.into_iter().map(|x| x * s).collect()
    }

    /// `T = γ′/‖γ′‖`, or `None` where `γ′ = 0`.
    pub fn tangent(&self, t: f64) -> Option<Vec<f64>> {
        let v = self.curve.velocity(t);
        let l = norm(&v);
        (l > 0.0).then(|| normalized(&v))
    }

    fn check_continuity(&self) -> Result<()> {
        for p in &self.singular {
            let d = probe_offset(p.order);
            let limit = |dir: f64| {
                let e1 = self.e(p.t + dir * d);
                let e2 = self.e(p.t + dir * 2.0 * d);
                let e3 = self.e(p.t + dir * 3.0 * d);
                let v: Vec<f64> = (0..e1.len())
                    .map(|i| 3.0 * e1[i] - 3.0 * e2[i] + e3[i])
                    .collect();
                normalized(&v)
            };
            let angle = angle_between(&limit(-1.0), &limit(1.0));
            if !(angle <= continuity_tolerance(p.order)) {
                return Err(Error::FrameConstruction { t: p.t, angle });
            }
        }
        Ok(())
    }

    /// Sign function on each regular interval of `[0, 2π]`.
    pub fn sign_trace(&self) -> Vec<SignInterval> {
        let mut edges: Vec<f64> = alloc::vec![0.0];
        edges.extend(self.singular.iter().map(|p| p.t).filter(|&t| t > 1e-9));
        edges.push(PERIOD);
        edges
            .windows(2)
            .filter(|w| w[1] - w[0] > 1e-9)
            .map(|w| SignInterval {
                start: w[0],
                end: w[1],
                epsilon: self.interval_sign(0.5 * (w[0] + w[1])) as i8,
            })
            .collect()
    }

    /// Unwraps the planar angle `θ` with `e = (cos θ, sin θ)` over `[0, 2π]`.
    pub fn angle_lift(&self) -> Result<AngleLift<'_, 'a>> {
        if self.dimension() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: self.dimension(),
            });
        }
        const INITIAL: usize = 4096;
        const LIMIT: usize = 1 << 22;
        let threshold = (core::f64::consts::PI / 3.0).cos();
        let mut ts = Vec::with_capacity(INITIAL + 1);
        let mut es = Vec::with_capacity(INITIAL + 1);
        let h = PERIOD / INITIAL as f64;
        let mut stack: Vec<(f64, Vec<f64>)> = Vec::new();
        // Process intervals left to right; the stack holds pending right ends.
        for i in (1..=INITIAL).rev() {
            let t = if i == INITIAL { PERIOD } else { h * i as f64 };
            stack.push((t, self.e(t)));
        }
        let mut cur_t = 0.0;
        let mut cur_e = self.e(0.0);
        ts.push(cur_t);
        es.push(cur_e.clone());
        while let Some((t, e)) = stack.pop() {
            if dot(&cur_e, &e) > threshold {
                ts.push(t);
                es.push(e.clone());
                cur_t = t;
                cur_e = e;
                if ts.len() > LIMIT {
                    return Err(Error::PathologicalCurve(LIMIT));
                }
                continue;
            }
            if ts.len() + stack.len() > LIMIT || t - cur_t < 1e-14 {
                return Err(Error::PathologicalCurve(LIMIT));
            }
            let mid = 0.5 * (cur_t + t);
            stack.push((t, e));
            stack.push((mid, self.e(mid)));
        }
        let mut theta = Vec::with_capacity(ts.len());
        theta.push(es[0][1].atan2(es[0][0]));
        for i in 1..es.len() {
            let step = det2(&es[i - 1], &es[i]).atan2(dot(&es[i - 1], &es[i]));
            theta.push(theta[i - 1] + step);
        }
        Ok(AngleLift {
            frame: self,
            ts,
            theta,
        })
    }

    /// Whether `f(t) = e(t)·ξ` vanishes or changes sign on a 4096-sample grid
    /// of `[0, 2π]`.
    pub fn crosses_great_hypersphere(&self, xi: &[f64]) -> bool {
        let samples = 4096;
        let mut prev: Option<f64> = None;
        for i in 0..=samples {
            let f = dot(&self.e(PERIOD * i as f64 / samples as f64), xi);
            if f == 0.0 {
                return true;
            }
            if let Some(p) = prev {
                if p * f < 0.0 {
                    return true;
                }
            }
            prev = Some(f);
        }
        false
    }

    /// Draws `trials` uniform unit vectors and checks that each great
    /// hypersphere they define meets the image of `e` over `[0, 2π]`.
    pub fn hypersphere_crossing_check(&self, trials: usize, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.dimension();
        (0..trials).all(|_| {
            let xi = loop {
                let v: Vec<f64> = (0..n)
                    .map(|_| rng.sample::<f64, _>(StandardNormal))
                    .collect();
                if norm(&v) > 1e-6 {
                    break normalized(&v);
                }
            };
            self.crosses_great_hypersphere(&xi)
        })
    }
}

/// Unwrapped angle function of a planar frame.
#[derive(Clone, Debug)]
pub struct AngleLift<'f, 'a> {
    frame: &'f FrontalFrame<'a>,
    ts: Vec<f64>,
    theta: Vec<f64>,
}

impl AngleLift<'_, '_> {
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.ts.iter().copied().zip(self.theta.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.theta[0]
    }

    pub fn end(&self) -> f64 {
        *self.theta.last().unwrap()
    }

    /// `θ(t)` for `t ∈ [0, 2π]`, continuing from the nearest sample below.
    pub fn theta(&self, t: f64) -> f64 {
        let i = match self.ts.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => return self.theta[i],
            Err(0) => 0,
            Err(i) => i - 1,
        };
        let base = self.frame.e(self.ts[i]);
        let e = self.frame.e(t);
        self.theta[i] + det2(&base, &e).atan2(dot(&base, &e))
    }

    /// `(θ(2π) − θ(0)) / 2π` snapped to a half-integer.
    pub fn rotation_index(&self) -> Result<HalfInt> {
        let raw = (self.end() - self.start()) / PERIOD;
        let (index, residual) = HalfInt::round(raw);
        if residual >= 1e-6 {
            return Err(Error::LiftInconsistency { residual });
        }
        Ok(index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Family;
    use crate::singular::analyze_singular_points;

    #[test]
    fn half_int_display_and_rounding() {
        assert_eq!(alloc::format!("{}", HalfInt::from_twice(1)), "1/2");
        assert_eq!(alloc::format!("{}", HalfInt::from_twice(-3)), "-3/2");
        assert_eq!(alloc::format!("{}", HalfInt::from_twice(4)), "2");
        let (h, r) = HalfInt::round(1.4999999);
        assert_eq!(h.twice(), 3);
        assert!(r < 1e-6);
    }

    #[test]
    fn circle_frame_is_tangent() {
        let c = ClosedCurve::from_family(Family::Circle { radius: 2.0 }).unwrap();
        let f = build_frame(&c, &[]).unwrap();
        assert!(f.co_orientable());
        let e = f.e(1.0);
        assert!((e[0] + 1.0f64.sin()).abs() < 1e-15 && (e[1] - 1.0f64.cos()).abs() < 1e-15);
        let trace = f.sign_trace();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace[0].epsilon, 1);
    }

    #[test]
    fn wrong_order_breaks_continuity() {
        let c = ClosedCurve::from_family(Family::Hypocycloid { m: 1 }).unwrap();
        let mut pts = analyze_singular_points(&c).unwrap();
        pts[1].order = 2;
        assert!(matches!(
            build_frame(&c, &pts),
            Err(Error::FrameConstruction { .. })
        ));
    }

    #[test]
    fn lift_needs_planar_frame() {
        let c = ClosedCurve::from_family(Family::Circle { radius: 1.0 })
            .unwrap()
            .placed(crate::curve::Placement {
                rows: 3,
                cols: 2,
                matrix: alloc::vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
                offset: alloc::vec![0.0; 3],
                shift: 0.0,
                reverse: false,
            })
            .unwrap();
        let f = build_frame(&c, &[]).unwrap();
        assert!(matches!(f.angle_lift(), Err(Error::Dimension { .. })));
    }
}
