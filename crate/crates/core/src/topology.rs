//! Self-intersections, simplicity, segment windows with endpoint-angle
//! bounds, and the Gauss–Bonnet residual for cusped fronts.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // inherent when `std` is linked
use num_traits::Float;

use crate::curvature::{breakpoints, total_absolute_curvature_on};
use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::frame::FrontalFrame;
use crate::quadrature::GaussLegendre;
use crate::singular::all_cusps;
use crate::vector::{compensated_sum, det2, dot, norm, Wrap};
use crate::verify::VerdictStatus;
use crate::PERIOD;

pub const POLYLINE_SAMPLES: usize = 8192;
/// Pairs closer than this in parameter (mod 2π) are the trivial diagonal.
pub const SEPARATION: f64 = 1e-3;
pub const DEDUP_TOL: f64 = 1e-6;
const RESIDUAL_TOL: f64 = 1e-10;
const CHUNK: usize = 32;

/// `γ(a) = γ(b)` with `0 ≤ a < b < 2π`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionPair {
    pub a: f64,
    pub b: f64,
    pub point: Vec<f64>,
    pub refinement_residual: f64,
}

/// A polyline crossing that Newton could not pin down.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unresolved {
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntersectionCensus {
    pub pairs: Vec<IntersectionPair>,
    pub unresolved: Vec<Unresolved>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simplicity {
    Simple,
    NotSimple,
    Indeterminate,
}

impl Simplicity {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Simplicity::Simple => Some(true),
            Simplicity::NotSimple => Some(false),
            Simplicity::Indeterminate => None,
        }
    }
}

impl IntersectionCensus {
    pub fn simplicity(&self) -> Simplicity {
        if !self.pairs.is_empty() {
            Simplicity::NotSimple
        } else if !self.unresolved.is_empty() {
            Simplicity::Indeterminate
        } else {
            Simplicity::Simple
        }
    }
}

#[derive(Clone, Copy)]
struct Bbox {
    lo: [f64; 2],
    hi: [f64; 2],
}

impl Bbox {
    fn of(points: &[[f64; 2]]) -> Bbox {
        let mut b = Bbox {
            lo: [f64::INFINITY; 2],
            hi: [f64::NEG_INFINITY; 2],
        };
        for p in points {
            for k in 0..2 {
                b.lo[k] = b.lo[k].min(p[k]);
                b.hi[k] = b.hi[k].max(p[k]);
            }
        }
        b
    }

    fn overlaps(&self, o: &Bbox) -> bool {
        self.lo[0] <= o.hi[0]
            && o.lo[0] <= self.hi[0]
            && self.lo[1] <= o.hi[1]
            && o.lo[1] <= self.hi[1]
    }
}

fn orient(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
}

/// Crossing fractions `(s, u)` along segments `pq` and `rs`.
fn segment_crossing(p: [f64; 2], q: [f64; 2], r: [f64; 2], s: [f64; 2]) -> Option<(f64, f64)> {
    let d1 = orient(r, s, p);
    let d2 = orient(r, s, q);
    let d3 = orient(p, q, r);
    let d4 = orient(p, q, s);
    let straddle = |x: f64, y: f64| (x <= 0.0 && y >= 0.0) || (x >= 0.0 && y <= 0.0);
    if !(straddle(d1, d2) && straddle(d3, d4)) {
        return None;
    }
    let den = (q[0] - p[0]) * (s[1] - r[1]) - (q[1] - p[1]) * (s[0] - r[0]);
    if den == 0.0 {
        // collinear overlap: take the midpoints as a Newton start
        return Some((0.5, 0.5));
    }
    let sp = ((r[0] - p[0]) * (s[1] - r[1]) - (r[1] - p[1]) * (s[0] - r[0])) / den;
    let up = ((r[0] - p[0]) * (q[1] - p[1]) - (r[1] - p[1]) * (q[0] - p[0])) / den;
    Some((sp.clamp(0.0, 1.0), up.clamp(0.0, 1.0)))
}

/// Crossing segment pairs `(i, j, s, u)`, `i < j`, adjacent pairs excluded.
fn polyline_candidates(points: &[[f64; 2]]) -> Vec<(usize, usize, f64, f64)> {
    let m = points.len();
    let seg = |i: usize| (points[i], points[(i + 1) % m]);
    let chunks: Vec<(usize, usize, Bbox)> = (0..m)
        .step_by(CHUNK)
        .map(|start| {
            let end = (start + CHUNK).min(m);
            let mut pts: Vec<[f64; 2]> = points[start..end].to_vec();
            pts.push(points[end % m]);
            (start, end, Bbox::of(&pts))
        })
        .collect();
    let mut out = Vec::new();
    for (ci, &(s0, e0, b0)) in chunks.iter().enumerate() {
        for &(s1, e1, b1) in &chunks[ci..] {
            if !b0.overlaps(&b1) {
                continue;
            }
            for i in s0..e0 {
                let (p, q) = seg(i);
                let bi = Bbox::of(&[p, q]);
                for j in s1.max(i + 2)..e1 {
                    if i == 0 && j == m - 1 {
                        continue;
                    }
                    let (r, s) = seg(j);
                    if !bi.overlaps(&Bbox::of(&[r, s])) {
                        continue;
                    }
                    if let Some((sp, up)) = segment_crossing(p, q, r, s) {
                        out.push((i, j, sp, up));
                    }
                }
            }
        }
    }
    out
}

fn param_gap(a: f64, b: f64) -> f64 {
    let d = (b - a).wrap(PERIOD);
    d.min(PERIOD - d)
}

enum Refined {
    Pair(IntersectionPair),
    Diagonal,
    Failed(Unresolved),
}

/// Newton on `γ(a) − γ(b) = 0`.
fn refine_pair(curve: &ClosedCurve, a0: f64, b0: f64) -> Refined {
    let scale = curve.scale();
    let (mut a, mut b) = (a0, b0);
    let mut residual = f64::INFINITY;
    for _ in 0..60 {
        let pa = curve.position(a);
        let pb = curve.position(b);
        let f = [pa[0] - pb[0], pa[1] - pb[1]];
        residual = norm(&f);
        if residual <= 1e-3 * RESIDUAL_TOL * scale {
            break;
        }
        let va = curve.velocity(a);
        let vb = curve.velocity(b);
        // J = [va, −vb]
        let det = -va[0] * vb[1] + vb[0] * va[1];
        let jn = norm(&va) * norm(&vb);
        if !(det.abs() > 1e-12 * jn) || jn == 0.0 {
            break;
        }
        let da = (-vb[1] * f[0] + vb[0] * f[1]) / det;
        let db = (-va[1] * f[0] + va[0] * f[1]) / det;
        a -= da;
        b -= db;
        if !(a.is_finite() && b.is_finite()) {
            return Refined::Failed(Unresolved { a: a0, b: b0 });
        }
        if da.abs().max(db.abs()) < 1e-15 {
            let pa = curve.position(a);
            let pb = curve.position(b);
            residual = norm(&[pa[0] - pb[0], pa[1] - pb[1]]);
            break;
        }
    }
    if param_gap(a, b) <= SEPARATION {
        return Refined::Diagonal;
    }
    if !(residual <= RESIDUAL_TOL * scale) {
        if param_gap(a0, b0) <= 4.0 * SEPARATION {
            return Refined::Diagonal;
        }
        return Refined::Failed(Unresolved { a: a0, b: b0 });
    }
    let (mut a, mut b) = (a.wrap(PERIOD), b.wrap(PERIOD));
    if a > b {
        core::mem::swap(&mut a, &mut b);
    }
    Refined::Pair(IntersectionPair {
        a,
        b,
        point: curve.position(a),
        refinement_residual: residual,
    })
}

fn same_pair(x: (f64, f64), y: (f64, f64)) -> bool {
    param_gap(x.0, y.0) < DEDUP_TOL && param_gap(x.1, y.1) < DEDUP_TOL
}

/// Self-intersection census of a closed planar curve.
pub fn self_intersections(curve: &ClosedCurve) -> Result<IntersectionCensus> {
    if curve.dimension() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: curve.dimension(),
        });
    }
    curve.require_closed()?;
    let h = PERIOD / POLYLINE_SAMPLES as f64;
    let points: Vec<[f64; 2]> = (0..POLYLINE_SAMPLES)
        .map(|i| {
            let p = curve.position(h * i as f64);
            [p[0], p[1]]
        })
        .collect();
    let mut census = IntersectionCensus::default();
    for (i, j, s, u) in polyline_candidates(&points) {
        let a0 = h * (i as f64 + s);
        let b0 = h * (j as f64 + u);
        match refine_pair(curve, a0, b0) {
            Refined::Pair(p) => {
                if !census
                    .pairs
                    .iter()
                    .any(|q| same_pair((q.a, q.b), (p.a, p.b)))
                {
                    census.pairs.push(p);
                }
            }
            Refined::Diagonal => {}
            Refined::Failed(c) => {
                let known = census
                    .unresolved
                    .iter()
                    .any(|q| param_gap(q.a, c.a) < 2.0 * h && param_gap(q.b, c.b) < 2.0 * h);
                if !known {
                    census.unresolved.push(c);
                }
            }
        }
    }
    // a crossing found through a neighbouring candidate resolves it
    let pairs = &census.pairs;
    census.unresolved.retain(|c| {
        !pairs.iter().any(|p| {
            (param_gap(p.a, c.a) < 2.0 * h && param_gap(p.b, c.b) < 2.0 * h)
                || (param_gap(p.a, c.b) < 2.0 * h && param_gap(p.b, c.a) < 2.0 * h)
        })
    });
    census
        .pairs
        .sort_by(|x, y| (x.a, x.b).partial_cmp(&(y.a, y.b)).unwrap());
    Ok(census)
}

pub fn is_simple(curve: &ClosedCurve) -> Result<Simplicity> {
    Ok(self_intersections(curve)?.simplicity())
}

/// The restriction `γ|[a, b]` with data for the endpoint-angle bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentWindow {
    pub a: f64,
    pub b: f64,
    /// Singular points in `(a, b)`.
    pub interior_singular: usize,
    /// Whether every interior singular point is a cusp.
    pub interior_all_cusps: bool,
    /// `arccos(−T(a)·T(b))`.
    pub phi: f64,
    pub k_segment: f64,
    pub k_error: f64,
    pub epsilon_a: i8,
    pub epsilon_b: i8,
    /// `arccos(e(a)·e(b))`.
    pub e_angle: f64,
}

fn near_singular(frame: &FrontalFrame<'_>, t: f64) -> bool {
    frame
        .singular_points()
        .iter()
        .any(|p| param_gap(p.t, t) <= 1e-9)
}

/// Builds the window `[a, b]`, `a < b ≤ a + 2π`, lifting to the universal
/// cover when it wraps past `2π`.
pub fn segment_window(frame: &FrontalFrame<'_>, a: f64, b: f64, tol: f64) -> Result<SegmentWindow> {
    if !(a < b) || b - a > PERIOD + 1e-12 {
        return Err(Error::Precondition("window needs a < b ≤ a + 2π".into()));
    }
    for t in [a, b] {
        if near_singular(frame, t) {
            return Err(Error::EndpointSingular(t));
        }
    }
    let mut interior = 0;
    let mut cusps = true;
    for p in frame.singular_points() {
        let k0 = ((a - p.t) / PERIOD).floor() as i64;
        for k in k0..=k0 + 2 {
            let x = p.t + PERIOD * k as f64;
            if x > a && x < b {
                interior += 1;
                cusps &= p.is_cusp;
            }
        }
    }
    let ta = frame.tangent(a).ok_or(Error::EndpointSingular(a))?;
    let tb = frame.tangent(b).ok_or(Error::EndpointSingular(b))?;
    let phi = (-dot(&ta, &tb)).clamp(-1.0, 1.0).acos();
    let ea = frame.e(a);
    let eb = frame.e(b);
    let k = total_absolute_curvature_on(frame, &breakpoints(frame), a, b, tol)?;
    Ok(SegmentWindow {
        a,
        b,
        interior_singular: interior,
        interior_all_cusps: cusps,
        phi,
        k_segment: k.value,
        k_error: k.error,
        epsilon_a: dot(&ta, &ea).signum() as i8,
        epsilon_b: dot(&tb, &eb).signum() as i8,
        e_angle: dot(&ea, &eb).clamp(-1.0, 1.0).acos(),
    })
}

/// The endpoint bound that applies to a window, and how it fared.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndpointBound {
    pub j: usize,
    /// Right-hand side of the inequality, when one applies.
    pub bound: Option<f64>,
    pub strict: bool,
    pub margin: f64,
    pub status: VerdictStatus,
}

/// `j = 0`: `K > π`; `j = 1`: `K > φ`; `j = 2`: `K ≥ π − φ`.
///
/// The strict bounds need a positive computed margin. The non-strict one is
/// attained exactly by some fronts, so it accepts a margin down to `−tol`,
/// the accuracy of the segment quadrature.
pub fn check_endpoint_bounds(w: &SegmentWindow, tol: f64) -> EndpointBound {
    let j = w.interior_singular;
    let (bound, strict) = match j {
        0 => (Some(PI), true),
        1 => (Some(w.phi), true),
        2 => (Some(PI - w.phi), false),
        _ => (None, false),
    };
    match bound {
        Some(rhs) if w.interior_all_cusps => {
            let margin = w.k_segment - rhs;
            let ok = if strict { margin > 0.0 } else { margin >= -tol };
            EndpointBound {
                j,
                bound: Some(rhs),
                strict,
                margin,
                status: if ok {
                    VerdictStatus::Pass
                } else {
                    VerdictStatus::Fail
                },
            }
        }
        _ => EndpointBound {
            j,
            bound,
            strict,
            margin: 0.0,
            status: VerdictStatus::NotApplicable,
        },
    }
}

/// Both closed sub-loops `[a, b]` and `[b, a + 2π]` cut out by a pair.
pub fn pair_windows(
    frame: &FrontalFrame<'_>,
    pair: &IntersectionPair,
    tol: f64,
) -> Result<[SegmentWindow; 2]> {
    Ok([
        segment_window(frame, pair.a, pair.b, tol)?,
        segment_window(frame, pair.b, pair.a + PERIOD, tol)?,
    ])
}

/// `½∮ (x y′ − y x′) dt`.
pub fn signed_area(curve: &ClosedCurve) -> Result<f64> {
    if curve.dimension() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: curve.dimension(),
        });
    }
    let rule = GaussLegendre::new(16);
    let panels = 256;
    let h = PERIOD / panels as f64;
    let parts = (0..panels).map(|i| {
        let a = h * i as f64;
        rule.integrate(a, a + h, |t| {
            let p = curve.position(t);
            let v = curve.velocity(t);
            det2(&p, &v)
        })
    });
    Ok(0.5 * compensated_sum(parts))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussBonnet {
    pub cusps: usize,
    /// `+1` when the interior lies on the left of the traversal.
    pub eta: i8,
    /// `∫ κ ds` with the interior on the left.
    pub turning: f64,
    pub residual: f64,
}

/// `|0 − (N − 2)π − η ∫κ̃ dt|` for a simple front whose singular points are
/// all cusps.
pub fn gauss_bonnet_residual(
    frame: &FrontalFrame<'_>,
    simplicity: Simplicity,
    oriented_total: f64,
) -> Result<GaussBonnet> {
    if simplicity != Simplicity::Simple {
        return Err(Error::Precondition(
            "curve is not known to be simple".into(),
        ));
    }
    if !all_cusps(frame.singular_points()) {
        return Err(Error::Precondition("a singular point is not a cusp".into()));
    }
    let area = signed_area(frame.curve())?;
    let eta: i8 = if area >= 0.0 { 1 } else { -1 };
    let n = frame.singular_points().len();
    let turning = eta as f64 * oriented_total;
    let residual = (-(n as f64 - 2.0) * PI - turning).abs();
    Ok(GaussBonnet {
        cusps: n,
        eta,
        turning,
        residual,
    })
}
