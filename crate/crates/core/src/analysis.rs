//! The full pipeline on one curve. [`Analysis`] is plain data; every
//! verdict in [`crate::verify`] is a pure function of it.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent when `std` is linked
use num_traits::Float;

use crate::curvature::{
    breakpoints, great_circle_once, indicatrix_length_on, summarize, theta_prime_deviation,
    total_absolute_curvature_on, CurvatureSummary, DEFAULT_TOL,
};
use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::frame::{build_frame, FrontalFrame, SignInterval};
use crate::singular::{all_cusps, analyze_singular_points, cusp_count, SingularPoint};
use crate::topology::{
    check_endpoint_bounds, gauss_bonnet_residual, pair_windows, self_intersections, EndpointBound,
    GaussBonnet, IntersectionCensus, Simplicity,
};
use crate::vector::dot;
use crate::PERIOD;

/// Sample count for the pointwise `θ′ = κ̃` cross-check.
pub const THETA_PRIME_SAMPLES: usize = 1000;
const GREAT_CIRCLE_SAMPLES: usize = 4096;
const THETA_WINDOWS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionMode {
    /// Planar curves only.
    Auto,
    Never,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalysisOptions {
    /// Absolute quadrature tolerance.
    pub tol: f64,
    pub intersections: IntersectionMode,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            tol: DEFAULT_TOL,
            intersections: IntersectionMode::Auto,
        }
    }
}

/// The tangent field over the doubled period `[0, 4π]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubledIndicatrix {
    pub length: f64,
    pub error: f64,
    pub great_circle: bool,
    pub great_circle_residual: f64,
}

/// `ε(b) = (−1)^j ε(a)` over windows between regular-interval midpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignBoundary {
    pub windows: usize,
    pub mismatches: usize,
}

/// Endpoint bound on one sub-loop cut out by a self-intersection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowBound {
    pub a: f64,
    pub b: f64,
    pub phi: f64,
    pub k_segment: f64,
    pub bound: EndpointBound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub dimension: usize,
    pub tol: f64,
    pub singular_points: Vec<SingularPoint>,
    pub cusp_count: usize,
    pub all_cusps: bool,
    pub co_orientable: bool,
    pub sign_trace: Vec<SignInterval>,
    pub curvature: CurvatureSummary,
    /// `|indicatrix length − K|`.
    pub indicatrix_gap: f64,
    pub doubled: Option<DoubledIndicatrix>,
    pub theta_prime_deviation: Option<f64>,
    pub sign_boundary: SignBoundary,
    /// `min (K[a, b] − arccos(e(a)·e(b)))` over sample windows.
    pub theta_integral_margin: f64,
    pub intersections: Option<IntersectionCensus>,
    pub simplicity: Option<Simplicity>,
    pub window_bounds: Vec<WindowBound>,
    pub gauss_bonnet: Option<GaussBonnet>,
}

impl Analysis {
    pub fn k(&self) -> f64 {
        self.curvature.total
    }
}

fn sign_boundary(frame: &FrontalFrame<'_>, trace: &[SignInterval]) -> SignBoundary {
    let mut mids: Vec<f64> = trace.iter().map(|s| 0.5 * (s.start + s.end)).collect();
    mids.push(mids[0] + PERIOD);
    let epsilon = |t: f64| -> f64 {
        let tan = frame.tangent(t).unwrap_or_default();
        dot(&tan, &frame.e(t)).signum()
    };
    let parity = |a: f64, b: f64| -> u32 {
        let mut odd = 0;
        for p in frame.singular_points() {
            for k in 0..3 {
                let x = p.t + PERIOD * k as f64;
                if x > a && x < b {
                    odd += p.order;
                }
            }
        }
        odd % 2
    };
    let mut windows = 0;
    let mut mismatches = 0;
    let e0 = epsilon(mids[0]);
    for w in mids.windows(2) {
        let expect = if parity(w[0], w[1]) == 1 { -1.0 } else { 1.0 };
        windows += 1;
        if epsilon(w[1]) != expect * epsilon(w[0]) {
            mismatches += 1;
        }
    }
    for &b in &mids[1..] {
        let expect = if parity(mids[0], b) == 1 { -1.0 } else { 1.0 };
        windows += 1;
        if epsilon(b) != expect * e0 {
            mismatches += 1;
        }
    }
    SignBoundary {
        windows,
        mismatches,
    }
}

fn theta_integral_margin(frame: &FrontalFrame<'_>, tol: f64) -> Result<f64> {
    let breaks = breakpoints(frame);
    let mut margin = f64::INFINITY;
    for k in 0..THETA_WINDOWS {
        let a = PERIOD * k as f64 / THETA_WINDOWS as f64 + 0.1234;
        let b = a + PERIOD * (k + 1) as f64 / THETA_WINDOWS as f64;
        let seg = total_absolute_curvature_on(frame, &breaks, a, b, tol)?;
        let chord = dot(&frame.e(a), &frame.e(b)).clamp(-1.0, 1.0).acos();
        margin = margin.min(seg.value - chord);
    }
    Ok(margin)
}

/// Runs every stage on `curve`.
pub fn analyze(curve: &ClosedCurve, options: &AnalysisOptions) -> Result<Analysis> {
    if !(options.tol > 0.0 && options.tol.is_finite()) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    curve.require_closed()?;
    let tol = options.tol;
    let singular = analyze_singular_points(curve)?;
    let frame = build_frame(curve, &singular)?;
    let curvature = summarize(&frame, tol)?;
    let co_orientable = frame.co_orientable();
    let planar_dim = curve.dimension() == 2;
    let sign_trace = frame.sign_trace();

    let doubled = if co_orientable {
        None
    } else {
        let (length, error) = indicatrix_length_on(&frame, &breakpoints(&frame), 0.0, 2.0 * PERIOD);
        let (great_circle, great_circle_residual) = great_circle_once(&frame, GREAT_CIRCLE_SAMPLES);
        Some(DoubledIndicatrix {
            length,
            error,
            great_circle,
            great_circle_residual,
        })
    };
    let theta_prime = if planar_dim {
        Some(theta_prime_deviation(&frame, THETA_PRIME_SAMPLES)?)
    } else {
        None
    };

    let all = all_cusps(&singular);
    let intersections = if planar_dim && options.intersections == IntersectionMode::Auto {
        Some(self_intersections(curve)?)
    } else {
        None
    };
    let simplicity = intersections.as_ref().map(|c| c.simplicity());

    let mut window_bounds = Vec::new();
    if let (Some(census), true) = (&intersections, all) {
        for pair in &census.pairs {
            for w in pair_windows(&frame, pair, tol)? {
                window_bounds.push(WindowBound {
                    a: w.a,
                    b: w.b,
                    phi: w.phi,
                    k_segment: w.k_segment,
                    bound: check_endpoint_bounds(&w, tol),
                });
            }
        }
    }
    let gauss_bonnet = match (simplicity, curvature.oriented_total) {
        (Some(Simplicity::Simple), Some(total)) if all => {
            Some(gauss_bonnet_residual(&frame, Simplicity::Simple, total)?)
        }
        _ => None,
    };

    Ok(Analysis {
        dimension: curve.dimension(),
        tol,
        cusp_count: cusp_count(&singular),
        all_cusps: all,
        co_orientable,
        sign_boundary: sign_boundary(&frame, &sign_trace),
        theta_integral_margin: theta_integral_margin(&frame, tol)?,
        sign_trace,
        indicatrix_gap: (curvature.indicatrix_length - curvature.total).abs(),
        curvature,
        doubled,
        theta_prime_deviation: theta_prime,
        intersections,
        simplicity,
        window_bounds,
        gauss_bonnet,
        singular_points: singular,
    })
}
