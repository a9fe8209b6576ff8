//! Property tests: derivative consistency, periodicity, invariance of `K`,
//! simplicity and rotation index under reparametrization and motions.

use std::f64::consts::PI;

use frontal_core::analysis::{analyze, AnalysisOptions, IntersectionMode};
use frontal_core::curvature::total_absolute_curvature;
use frontal_core::frame::build_frame;
use frontal_core::generator::generate;
use frontal_core::singular::analyze_singular_points;
use frontal_core::topology::is_simple;
use frontal_core::verify::{corpus_spec, CorpusKind};
use frontal_core::{ClosedCurve, GeneratorSpec, HalfInt, ThetaMode, Topology, PERIOD};
use proptest::prelude::*;

fn family(name: &str, params: &[(&str, f64)]) -> ClosedCurve {
    let p: Vec<(String, f64)> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    ClosedCurve::family(name, &p).unwrap()
}

/// Families plus generated curves from every corpus kind.
fn any_curve() -> impl Strategy<Value = ClosedCurve> {
    prop_oneof![
        (1u32..=3).prop_map(|m| family("hypocycloid", &[("m", m as f64)])),
        (0.05f64..5.0).prop_map(|a| family("eye", &[("a", a)])),
        (0.2f64..3.0, 0.2f64..3.0).prop_map(|(a, b)| family("ellipse", &[("a", a), ("b", b)])),
        (any::<u64>(), 0usize..8)
            .prop_map(|(s, i)| generate(&corpus_spec(CorpusKind::N2, s, i)).unwrap()),
        (any::<u64>(), 0usize..8)
            .prop_map(|(s, i)| generate(&corpus_spec(CorpusKind::N3, s, i)).unwrap()),
    ]
}

fn planar_curve() -> impl Strategy<Value = ClosedCurve> {
    prop_oneof![
        (1u32..=3).prop_map(|m| family("hypocycloid", &[("m", m as f64)])),
        (0.05f64..5.0).prop_map(|a| family("eye", &[("a", a)])),
        (any::<u64>(), 0usize..8)
            .prop_map(|(s, i)| generate(&corpus_spec(CorpusKind::N2, s, i)).unwrap()),
    ]
}

fn k_of(curve: &ClosedCurve) -> f64 {
    let sing = analyze_singular_points(curve).unwrap();
    let frame = build_frame(curve, &sing).unwrap();
    total_absolute_curvature(&frame, 1e-10).unwrap().value
}

fn index_of(curve: &ClosedCurve) -> HalfInt {
    let sing = analyze_singular_points(curve).unwrap();
    let frame = build_frame(curve, &sing).unwrap();
    let lift = frame.angle_lift().unwrap();
    lift.rotation_index().unwrap()
}

fn rotation(angle: f64) -> Vec<f64> {
    let (s, c) = angle.sin_cos();
    vec![c, -s, s, c]
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Five-point central difference of `f` at `t`.
fn five_point(f: impl Fn(f64) -> Vec<f64>, t: f64, h: f64) -> Vec<f64> {
    let (a, b, c, d) = (f(t - 2.0 * h), f(t - h), f(t + h), f(t + 2.0 * h));
    (0..a.len())
        .map(|i| (a[i] - 8.0 * b[i] + 8.0 * c[i] - d[i]) / (12.0 * h))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn jet_matches_finite_differences(curve in any_curve(), t in 0.0f64..PERIOD) {
        let h = 1e-3;
        let jet = curve.eval_jet(t, 3).unwrap();
        for k in 1..=3 {
            let fd = five_point(|s| curve.eval_jet(s, k - 1).unwrap().derivative(k - 1).to_vec(), t, h);
            let exact = jet.derivative(k);
            let diff: Vec<f64> = fd.iter().zip(exact).map(|(a, b)| a - b).collect();
            let scale = norm(exact).max(curve.scale());
            prop_assert!(norm(&diff) <= 1e-6 * scale, "order {} at t = {}: {} vs scale {}", k, t, norm(&diff), scale);
        }
    }

    #[test]
    fn closed_curves_are_periodic(curve in any_curve(), t in 0.0f64..PERIOD) {
        let a = curve.eval_jet(t, 2).unwrap();
        let b = curve.eval_jet(t + PERIOD, 2).unwrap();
        for k in 0..=2 {
            let diff: Vec<f64> = a.derivative(k).iter().zip(b.derivative(k)).map(|(x, y)| x - y).collect();
            prop_assert!(norm(&diff) <= 1e-9 * curve.scale().max(norm(a.derivative(k))));
        }
    }

    #[test]
    fn k_is_invariant(curve in any_curve(), angle in 0.0f64..PERIOD, shift in 0.0f64..PERIOD, scale in 0.2f64..5.0) {
        let k = k_of(&curve);
        let n = curve.dimension();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = scale;
        }
        let r = rotation(angle);
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            m[i * n + j] = scale * r[i * 2 + j];
        }
        let offset: Vec<f64> = (0..n).map(|i| i as f64 - 0.5).collect();
        let moved = curve.transformed(m, offset).unwrap();
        let variants = [moved, curve.shifted(shift).unwrap(), curve.reversed().unwrap()];
        for v in &variants {
            let kv = k_of(v);
            prop_assert!((kv - k).abs() <= 1e-8, "K = {} vs {}", k, kv);
        }
    }

    #[test]
    fn index_negates_under_reflection(curve in planar_curve(), angle in 0.0f64..PERIOD) {
        let index = index_of(&curve);
        let rotated = curve.transformed(rotation(angle), vec![0.0, 0.0]).unwrap();
        prop_assert_eq!(index_of(&rotated), index);
        let reflected = curve.transformed(vec![1.0, 0.0, 0.0, -1.0], vec![0.0, 0.0]).unwrap();
        prop_assert_eq!(index_of(&reflected).twice(), -index.twice());
    }

    #[test]
    fn halving_tolerance_is_stable(curve in any_curve()) {
        let opts = AnalysisOptions { tol: 1e-9, intersections: IntersectionMode::Never };
        let coarse = analyze(&curve, &opts).unwrap();
        let fine = analyze(&curve, &AnalysisOptions { tol: 0.5e-9, ..opts }).unwrap();
        prop_assert!((coarse.k() - fine.k()).abs() <= 1e-9);
        prop_assert_eq!(coarse.singular_points.len(), fine.singular_points.len());
        prop_assert_eq!(coarse.curvature.index, fine.curvature.index);
        prop_assert_eq!(coarse.co_orientable, fine.co_orientable);
    }

    #[test]
    fn generation_is_deterministic(
        seed in any::<u64>(),
        twice in prop::sample::select(vec![-3i64, -1, 1, 3]),
        degree in 1usize..5,
        monotone in any::<bool>(),
    ) {
        let amplitude = if monotone { 0.3 * (twice.abs() as f64) / 2.0 } else { 0.8 };
        let spec = GeneratorSpec {
            dimension: 2,
            topology: Topology::Index(HalfInt::from_twice(twice)),
            degree,
            amplitude,
            theta_mode: if monotone { ThetaMode::Monotone } else { ThetaMode::Free },
            seed,
        };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        prop_assert_eq!(a.backend(), b.backend());
        prop_assert_eq!(index_of(&a), HalfInt::from_twice(twice));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn simplicity_is_invariant(curve in planar_curve(), angle in 0.0f64..PERIOD, shift in 0.0f64..PERIOD) {
        let s = is_simple(&curve).unwrap();
        let variants = [
            curve.transformed(rotation(angle).iter().map(|x| 3.0 * x).collect(), vec![1.0, -2.0]).unwrap(),
            curve.shifted(shift).unwrap(),
            curve.reversed().unwrap(),
        ];
        for v in &variants {
            prop_assert_eq!(is_simple(v).unwrap(), s);
        }
    }
}

#[test]
fn monotone_half_index_attains_pi() {
    for seed in 0..6 {
        let spec = GeneratorSpec {
            dimension: 2,
            topology: Topology::Index(HalfInt::from_twice(1)),
            degree: 3,
            amplitude: 0.3,
            theta_mode: ThetaMode::Monotone,
            seed,
        };
        let k = k_of(&generate(&spec).unwrap());
        assert!((k - PI).abs() <= 1e-8, "seed {seed}: {k}");
    }
}
