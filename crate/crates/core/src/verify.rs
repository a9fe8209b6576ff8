//! Theorem-level verdicts computed from an [`Analysis`], and the corpus
//! runner over generated curves.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{analyze, Analysis, AnalysisOptions, DoubledIndicatrix};
use crate::curvature::LConvexity;
use crate::curve::ClosedCurve;
use crate::error::Result;
use crate::frame::HalfInt;
use crate::generator::{generate, GeneratorSpec, ThetaMode, Topology};
use crate::topology::Simplicity;
use crate::PERIOD;

/// `|K − π|` below this counts as the equality case.
pub const EQUALITY_BAND: f64 = 1e-8;
/// Allowed `|θ′ − κ̃|` at sample points.
pub const THETA_PRIME_TOL: f64 = 1e-6;
/// Allowed Gauss–Bonnet residual.
pub const GAUSS_BONNET_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremId {
    ABound,
    AEquality,
    BParity,
    BSimplicity,
    TLength,
    ThetaPrime,
    SgnBoundary,
    ThetaIntegral,
    CuspBounds,
    GaussBonnet,
    RsDoubled,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        TheoremId::ABound,
        TheoremId::AEquality,
        TheoremId::BParity,
        TheoremId::BSimplicity,
        TheoremId::TLength,
        TheoremId::ThetaPrime,
        TheoremId::SgnBoundary,
        TheoremId::ThetaIntegral,
        TheoremId::CuspBounds,
        TheoremId::GaussBonnet,
        TheoremId::RsDoubled,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::ABound => "A-bound",
            TheoremId::AEquality => "A-equality",
            TheoremId::BParity => "B-parity",
            TheoremId::BSimplicity => "B-simplicity",
            TheoremId::TLength => "t-length",
            TheoremId::ThetaPrime => "theta-prime",
            TheoremId::SgnBoundary => "sgn-boundary",
            TheoremId::ThetaIntegral => "theta-integral",
            TheoremId::CuspBounds => "cusp-bounds",
            TheoremId::GaussBonnet => "gauss-bonnet",
            TheoremId::RsDoubled => "RS-doubled",
        }
    }

    pub fn from_name(name: &str) -> Option<TheoremId> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl VerdictStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictStatus::Pass => "pass",
            VerdictStatus::Fail => "fail",
            VerdictStatus::NotApplicable => "not-applicable",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            VerdictStatus::Pass
        } else {
            VerdictStatus::Fail
        }
    }
}

/// Outcome of one check. A positive margin is slack in the inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoremVerdict {
    pub id: TheoremId,
    pub status: VerdictStatus,
    pub margin: f64,
    pub details: String,
}

impl TheoremVerdict {
    fn new(id: TheoremId, ok: bool, margin: f64, details: String) -> Self {
        TheoremVerdict {
            id,
            status: VerdictStatus::from_bool(ok),
            margin,
            details,
        }
    }

    fn not_applicable(id: TheoremId, details: &str) -> Self {
        TheoremVerdict {
            id,
            status: VerdictStatus::NotApplicable,
            margin: 0.0,
            details: details.into(),
        }
    }
}

fn is_half_unit(index: Option<HalfInt>) -> bool {
    index.map(|h| h.twice().abs() == 1).unwrap_or(false)
}

/// `K ≥ π`, and the equality classification in both directions.
pub fn verify_theorem_a(a: &Analysis) -> [TheoremVerdict; 2] {
    if a.co_orientable {
        return [
            TheoremVerdict::not_applicable(TheoremId::ABound, "co-orientable"),
            TheoremVerdict::not_applicable(TheoremId::AEquality, "co-orientable"),
        ];
    }
    let c = &a.curvature;
    let k = c.total;
    let bound = TheoremVerdict::new(
        TheoremId::ABound,
        k >= PI - a.tol,
        k - PI,
        format!("K = {k:.15} rad, π − tol = {:.15}", PI - a.tol),
    );
    let equal = (k - PI).abs() <= EQUALITY_BAND;
    // Distance of |K − π| from the band edge: how firmly the case was decided.
    let decided = ((k - PI).abs() - EQUALITY_BAND).abs();
    let convex = c.l_convex.map(LConvexity::is_convex);
    let equality = if a.dimension == 2 {
        let rhs = c.planar && convex == Some(true) && is_half_unit(c.index);
        TheoremVerdict::new(
            TheoremId::AEquality,
            equal == rhs,
            decided,
            format!(
                "|K − π| = {:.3e}, planar = {}, l_convex = {}, index = {}",
                (k - PI).abs(),
                c.planar,
                c.l_convex.map(LConvexity::as_str).unwrap_or("unset"),
                c.index
                    .map(|h| format!("{h}"))
                    .unwrap_or_else(|| "unset".into())
            ),
        )
    } else if equal {
        TheoremVerdict::new(
            TheoremId::AEquality,
            c.planar,
            decided,
            format!(
                "|K − π| = {:.3e} requires planarity; plane-fit residual {:.3e}",
                (k - PI).abs(),
                c.planarity_residual
            ),
        )
    } else {
        TheoremVerdict::not_applicable(TheoremId::AEquality, "K > π; equality case not triggered")
    };
    [bound, equality]
}

/// Cusp parity and the three-cusp simplicity law for `K = π` fronts.
pub fn verify_theorem_b(a: &Analysis) -> [TheoremVerdict; 2] {
    let reason = if a.dimension != 2 {
        Some("needs a planar curve")
    } else if a.co_orientable {
        Some("co-orientable")
    } else if !a.all_cusps {
        Some("a singular point is not a cusp")
    } else if (a.k() - PI).abs() > EQUALITY_BAND {
        Some("K ≠ π")
    } else {
        None
    };
    if let Some(r) = reason {
        return [
            TheoremVerdict::not_applicable(TheoremId::BParity, r),
            TheoremVerdict::not_applicable(TheoremId::BSimplicity, r),
        ];
    }
    let n = a.cusp_count;
    let parity = TheoremVerdict::new(
        TheoremId::BParity,
        n % 2 == 1 && n >= 3,
        n as f64 - 3.0,
        format!("N = {n}"),
    );
    let simplicity = match a.simplicity {
        Some(Simplicity::Indeterminate) | None => TheoremVerdict::not_applicable(
            TheoremId::BSimplicity,
            "simplicity indeterminate (unresolved crossing candidates)",
        ),
        Some(s) => {
            let simple = s == Simplicity::Simple;
            TheoremVerdict::new(
                TheoremId::BSimplicity,
                (n == 3) == simple,
                0.0,
                format!("N = {n}, simple = {simple}"),
            )
        }
    };
    [parity, simplicity]
}

/// Length of the indicatrix against `K`.
pub fn verify_t_length(a: &Analysis) -> TheoremVerdict {
    let allowed = 2.0 * a.tol;
    TheoremVerdict::new(
        TheoremId::TLength,
        a.indicatrix_gap <= allowed,
        allowed - a.indicatrix_gap,
        format!(
            "indicatrix length = {:.15}, K = {:.15}, gap = {:.3e}",
            a.curvature.indicatrix_length,
            a.k(),
            a.indicatrix_gap
        ),
    )
}

pub fn verify_theta_prime(a: &Analysis) -> TheoremVerdict {
    match a.theta_prime_deviation {
        None => TheoremVerdict::not_applicable(TheoremId::ThetaPrime, "needs a planar curve"),
        Some(d) => TheoremVerdict::new(
            TheoremId::ThetaPrime,
            d <= THETA_PRIME_TOL,
            THETA_PRIME_TOL - d,
            format!("max |θ′ − κ̃| = {d:.3e}"),
        ),
    }
}

pub fn verify_sgn_boundary(a: &Analysis) -> TheoremVerdict {
    let s = a.sign_boundary;
    TheoremVerdict::new(
        TheoremId::SgnBoundary,
        s.mismatches == 0,
        0.0 - s.mismatches as f64,
        format!("{} windows, {} mismatches", s.windows, s.mismatches),
    )
}

/// `K[a, b] ≥ arccos(e(a)·e(b))`, with the quadrature tolerance as slack.
pub fn verify_theta_integral(a: &Analysis) -> TheoremVerdict {
    let m = a.theta_integral_margin;
    TheoremVerdict::new(
        TheoremId::ThetaIntegral,
        m >= -a.tol,
        m,
        format!("min K[a, b] − arccos(e(a)·e(b)) = {m:.3e}"),
    )
}

pub fn verify_cusp_bounds(a: &Analysis) -> TheoremVerdict {
    let applicable: Vec<_> = a
        .window_bounds
        .iter()
        .filter(|w| w.bound.status != VerdictStatus::NotApplicable)
        .collect();
    if applicable.is_empty() {
        return TheoremVerdict::not_applicable(TheoremId::CuspBounds, "no window with j ≤ 2");
    }
    let worst = applicable
        .iter()
        .min_by(|x, y| x.bound.margin.partial_cmp(&y.bound.margin).unwrap())
        .unwrap();
    let ok = applicable
        .iter()
        .all(|w| w.bound.status == VerdictStatus::Pass);
    TheoremVerdict::new(
        TheoremId::CuspBounds,
        ok,
        worst.bound.margin,
        format!(
            "{} windows; tightest [{:.9}, {:.9}] j = {}, K = {:.12}, bound = {:.12}",
            applicable.len(),
            worst.a,
            worst.b,
            worst.bound.j,
            worst.k_segment,
            worst.bound.bound.unwrap_or(0.0)
        ),
    )
}

/// Applies to simple fronts whose cusps all have zero interior angle: regular
/// curves, and the `K = π` case where every cusp points outward.
pub fn verify_gauss_bonnet(a: &Analysis) -> TheoremVerdict {
    let Some(gb) = a.gauss_bonnet else {
        return TheoremVerdict::not_applicable(
            TheoremId::GaussBonnet,
            "needs a simple all-cusp planar front",
        );
    };
    if gb.cusps > 0 && (a.k() - PI).abs() > EQUALITY_BAND {
        return TheoremVerdict::not_applicable(
            TheoremId::GaussBonnet,
            "cusp interior angles are only known to vanish when K = π",
        );
    }
    TheoremVerdict::new(
        TheoremId::GaussBonnet,
        gb.residual <= GAUSS_BONNET_TOL,
        GAUSS_BONNET_TOL - gb.residual,
        format!(
            "N = {}, η = {}, ∫κ ds = {:.15}, residual = {:.3e}",
            gb.cusps, gb.eta, gb.turning, gb.residual
        ),
    )
}

/// The doubled indicatrix has length at least `2π`, with equality only on a
/// great circle traversed once.
pub fn verify_rs_doubled(a: &Analysis) -> TheoremVerdict {
    let Some(d) = a.doubled else {
        return TheoremVerdict::not_applicable(TheoremId::RsDoubled, "co-orientable");
    };
    let margin = d.length - PERIOD;
    let tight = margin.abs() <= EQUALITY_BAND;
    TheoremVerdict::new(
        TheoremId::RsDoubled,
        margin >= -EQUALITY_BAND && tight == d.great_circle,
        margin,
        format!(
            "doubled length = {:.15}, great circle = {} (residual {:.3e})",
            d.length, d.great_circle, d.great_circle_residual
        ),
    )
}

/// Every verdict, in [`TheoremId::ALL`] order.
pub fn verify_all(a: &Analysis) -> Vec<TheoremVerdict> {
    let mut out = Vec::with_capacity(11);
    out.extend(verify_theorem_a(a));
    out.extend(verify_theorem_b(a));
    out.push(verify_t_length(a));
    out.push(verify_theta_prime(a));
    out.push(verify_sgn_boundary(a));
    out.push(verify_theta_integral(a));
    out.push(verify_cusp_bounds(a));
    out.push(verify_gauss_bonnet(a));
    out.push(verify_rs_doubled(a));
    out
}

/// Distribution of generated curves for a corpus run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusKind {
    /// Planar, indices cycling through `1/2, −1/2, 3/2, −3/2`, monotone and
    /// free `θ` alternating in blocks of four.
    N2,
    /// Planar, index `±1/2`, monotone `θ`.
    N2Monotone,
    /// Non-co-orientable spherical tangent fields in ℝ³.
    N3,
}

impl CorpusKind {
    pub fn from_name(name: &str) -> Option<CorpusKind> {
        match name {
            "n2" => Some(CorpusKind::N2),
            "n2-monotone" => Some(CorpusKind::N2Monotone),
            "n3" => Some(CorpusKind::N3),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CorpusKind::N2 => "n2",
            CorpusKind::N2Monotone => "n2-monotone",
            CorpusKind::N3 => "n3",
        }
    }
}

/// The `i`-th spec of a corpus. Deterministic in `(kind, seed, i)`.
pub fn corpus_spec(kind: CorpusKind, seed: u64, i: usize) -> GeneratorSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64 + 1);
    let degree = rng.random_range(1..=4usize);
    let curve_seed: u64 = rng.random();
    match kind {
        CorpusKind::N2 | CorpusKind::N2Monotone => {
            let (twice, monotone) = if kind == CorpusKind::N2 {
                ([1i64, -1, 3, -3][i % 4], (i / 4).is_multiple_of(2))
            } else {
                ([1i64, -1][i % 2], true)
            };
            let index = (twice as f64 / 2.0).abs();
            let amplitude = if monotone {
                index * rng.random_range(0.05..0.9)
            } else {
                index + rng.random_range(0.2..2.0)
            };
            GeneratorSpec {
                dimension: 2,
                topology: Topology::Index(HalfInt::from_twice(twice)),
                degree,
                amplitude,
                theta_mode: if monotone {
                    ThetaMode::Monotone
                } else {
                    ThetaMode::Free
                },
                seed: curve_seed,
            }
        }
        CorpusKind::N3 => GeneratorSpec {
            dimension: 3,
            topology: Topology::Spherical {
                co_orientable: false,
            },
            degree,
            amplitude: rng.random_range(0.2..1.5),
            theta_mode: ThetaMode::Free,
            seed: curve_seed,
        },
    }
}

/// One analyzed corpus member.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusRecord {
    pub position: usize,
    pub spec: GeneratorSpec,
    pub k: f64,
    pub planar: bool,
    pub indicatrix_gap: f64,
    pub doubled: Option<DoubledIndicatrix>,
    pub verdicts: Vec<TheoremVerdict>,
}

/// A corpus member that failed a verdict or the pipeline itself.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusFailure {
    pub position: usize,
    pub spec: GeneratorSpec,
    pub curve: Option<ClosedCurve>,
    pub reason: String,
}

/// Min and median margin of one theorem id across the corpus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarginStats {
    pub id: TheoremId,
    pub evaluated: usize,
    pub passed: usize,
    pub min: Option<f64>,
    pub median: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusSummary {
    pub kind: CorpusKind,
    pub seed: u64,
    pub count: usize,
    pub records: Vec<CorpusRecord>,
    pub failures: Vec<CorpusFailure>,
    pub margins: Vec<MarginStats>,
}

fn margin_stats(records: &[CorpusRecord]) -> Vec<MarginStats> {
    TheoremId::ALL
        .iter()
        .map(|&id| {
            let mut margins: Vec<f64> = Vec::new();
            let mut passed = 0;
            for r in records {
                for v in r.verdicts.iter().filter(|v| v.id == id) {
                    if v.status == VerdictStatus::NotApplicable {
                        continue;
                    }
                    margins.push(v.margin);
                    passed += (v.status == VerdictStatus::Pass) as usize;
                }
            }
            margins.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let median = if margins.is_empty() {
                None
            } else if margins.len() % 2 == 1 {
                Some(margins[margins.len() / 2])
            } else {
                let h = margins.len() / 2;
                Some(0.5 * (margins[h - 1] + margins[h]))
            };
            MarginStats {
                id,
                evaluated: margins.len(),
                passed,
                min: margins.first().copied(),
                median,
            }
        })
        .collect()
}

/// Generates, analyzes and verifies `count` curves. Stops at the first
/// failing curve.
pub fn run_corpus(
    kind: CorpusKind,
    count: usize,
    seed: u64,
    options: &AnalysisOptions,
) -> Result<CorpusSummary> {
    if count == 0 {
        return Err(crate::error::Error::Precondition(
            "corpus count must be at least 1".into(),
        ));
    }
    let mut records = Vec::with_capacity(count);
    let mut failures = Vec::new();
    for i in 0..count {
        let spec = corpus_spec(kind, seed, i);
        let curve = generate(&spec)?;
        match analyze(&curve, options) {
            Ok(analysis) => {
                let verdicts = verify_all(&analysis);
                let failed: Vec<&str> = verdicts
                    .iter()
                    .filter(|v| v.status == VerdictStatus::Fail)
                    .map(|v| v.id.as_str())
                    .collect();
                if !failed.is_empty() {
                    failures.push(CorpusFailure {
                        position: i,
                        spec,
                        curve: Some(curve),
                        reason: format!("failed: {}", failed.join(", ")),
                    });
                }
                records.push(CorpusRecord {
                    position: i,
                    spec,
                    k: analysis.k(),
                    planar: analysis.curvature.planar,
                    indicatrix_gap: analysis.indicatrix_gap,
                    doubled: analysis.doubled,
                    verdicts,
                });
            }
            Err(e) => failures.push(CorpusFailure {
                position: i,
                spec,
                curve: Some(curve),
                reason: format!("analysis error: {e}"),
            }),
        }
        if !failures.is_empty() {
            break;
        }
    }
    Ok(CorpusSummary {
        kind,
        seed,
        count: records.len(),
        margins: margin_stats(&records),
        records,
        failures,
    })
}
