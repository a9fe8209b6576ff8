//! The per-curve analysis report and its JSON form.

use frontal_core::analysis::Analysis;
use frontal_core::topology::Simplicity;
use frontal_core::verify::verify_all;
use frontal_core::{TheoremVerdict, VerdictStatus};
use serde::Serialize;

use crate::spec::CurveSpec;

pub const UNITS: &str =
    "angles, curvature totals and parameters t are in radians; t ranges over [0, 2π)";
pub const SIGN_CONVENTION: &str =
    "e(0+) = T(0+): the unit tangent field agrees with γ′/‖γ′‖ on the regular interval starting at t = 0";

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularPointJson {
    pub t: f64,
    pub order: u32,
    pub is_cusp: bool,
    pub cusp_det: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignIntervalJson {
    pub start: f64,
    pub end: f64,
    pub epsilon: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error_estimate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DoubledJson {
    pub length: f64,
    pub great_circle: bool,
    pub great_circle_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairJson {
    pub a: f64,
    pub b: f64,
    pub point: Vec<f64>,
    pub refinement_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateJson {
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionsJson {
    pub pairs: Vec<PairJson>,
    pub unresolved: Vec<CandidateJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowJson {
    pub a: f64,
    pub b: f64,
    pub interior_cusps: usize,
    pub phi: f64,
    pub k_segment: f64,
    pub bound: Option<f64>,
    pub margin: f64,
    pub status: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussBonnetJson {
    pub cusps: usize,
    pub eta: i8,
    pub turning: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictJson {
    pub id: &'static str,
    pub status: &'static str,
    pub margin: f64,
    pub details: String,
}

impl From<&TheoremVerdict> for VerdictJson {
    fn from(v: &TheoremVerdict) -> Self {
        VerdictJson {
            id: v.id.as_str(),
            status: v.status.as_str(),
            margin: v.margin,
            details: v.details.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub tool: Tool,
    pub units: &'static str,
    pub sign_convention: &'static str,
    pub curve: CurveSpec,
    pub dimension: usize,
    pub tolerance: f64,
    pub singular_points: Vec<SingularPointJson>,
    pub cusp_count: usize,
    pub all_cusps: bool,
    pub co_orientable: bool,
    pub sign_trace: Vec<SignIntervalJson>,
    pub rotation_index: Option<String>,
    pub total_absolute_curvature: Estimate,
    pub indicatrix_length: Estimate,
    pub indicatrix_gap: f64,
    pub l_convexity: Option<&'static str>,
    pub sigma: Option<&'static str>,
    pub oriented_total: Option<f64>,
    pub planar: bool,
    pub planarity_residual: f64,
    pub doubled_indicatrix: Option<DoubledJson>,
    pub theta_prime_deviation: Option<f64>,
    pub self_intersections: Option<IntersectionsJson>,
    pub simplicity: Option<&'static str>,
    pub endpoint_bounds: Vec<WindowJson>,
    pub gauss_bonnet: Option<GaussBonnetJson>,
    pub verdicts: Vec<VerdictJson>,
}

fn simplicity_name(s: Simplicity) -> &'static str {
    match s {
        Simplicity::Simple => "simple",
        Simplicity::NotSimple => "not-simple",
        Simplicity::Indeterminate => "indeterminate",
    }
}

impl AnalysisReport {
    pub fn new(curve: CurveSpec, a: &Analysis) -> Self {
        let verdicts = verify_all(a);
        Self::with_verdicts(curve, a, &verdicts)
    }

    pub fn with_verdicts(curve: CurveSpec, a: &Analysis, verdicts: &[TheoremVerdict]) -> Self {
        let c = &a.curvature;
        AnalysisReport {
            tool: Tool {
                name: "frontal",
                version: env!("CARGO_PKG_VERSION"),
            },
            units: UNITS,
            sign_convention: SIGN_CONVENTION,
            curve,
            dimension: a.dimension,
            tolerance: a.tol,
            singular_points: a
                .singular_points
                .iter()
                .map(|p| SingularPointJson {
                    t: p.t,
                    order: p.order,
                    is_cusp: p.is_cusp,
                    cusp_det: p.cusp_det,
                })
                .collect(),
            cusp_count: a.cusp_count,
            all_cusps: a.all_cusps,
            co_orientable: a.co_orientable,
            sign_trace: a
                .sign_trace
                .iter()
                .map(|s| SignIntervalJson {
                    start: s.start,
                    end: s.end,
                    epsilon: s.epsilon,
                })
                .collect(),
            rotation_index: c.index.map(|h| h.to_string()),
            total_absolute_curvature: Estimate {
                value: c.total,
                error_estimate: c.quad_error_estimate,
            },
            indicatrix_length: Estimate {
                value: c.indicatrix_length,
                error_estimate: c.indicatrix_error,
            },
            indicatrix_gap: a.indicatrix_gap,
            l_convexity: c.l_convex.map(|l| l.as_str()),
            sigma: c.sigma.map(|s| if s > 0 { "+" } else { "-" }),
            oriented_total: c.oriented_total,
            planar: c.planar,
            planarity_residual: c.planarity_residual,
            doubled_indicatrix: a.doubled.map(|d| DoubledJson {
                length: d.length,
                great_circle: d.great_circle,
                great_circle_residual: d.great_circle_residual,
            }),
            theta_prime_deviation: a.theta_prime_deviation,
            self_intersections: a.intersections.as_ref().map(|census| IntersectionsJson {
                pairs: census
                    .pairs
                    .iter()
                    .map(|p| PairJson {
                        a: p.a,
                        b: p.b,
                        point: p.point.clone(),
                        refinement_residual: p.refinement_residual,
                    })
                    .collect(),
                unresolved: census
                    .unresolved
                    .iter()
                    .map(|u| CandidateJson { a: u.a, b: u.b })
                    .collect(),
            }),
            simplicity: a.simplicity.map(simplicity_name),
            endpoint_bounds: a
                .window_bounds
                .iter()
                .map(|w| WindowJson {
                    a: w.a,
                    b: w.b,
                    interior_cusps: w.bound.j,
                    phi: w.phi,
                    k_segment: w.k_segment,
                    bound: w.bound.bound,
                    margin: w.bound.margin,
                    status: w.bound.status.as_str(),
                })
                .collect(),
            gauss_bonnet: a.gauss_bonnet.map(|g| GaussBonnetJson {
                cusps: g.cusps,
                eta: g.eta,
                turning: g.turning,
                residual: g.residual,
            }),
            verdicts: verdicts.iter().map(VerdictJson::from).collect(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts
            .iter()
            .all(|v| v.status != VerdictStatus::Fail.as_str())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
