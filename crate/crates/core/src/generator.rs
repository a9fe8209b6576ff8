//! Random closed frontals with a prescribed tangent field.
//!
//! The tangent field `e` is chosen first (an angle function for planar
//! output, a normalized trigonometric curve otherwise), then a speed
//! function `ρ` is projected so that `γ′ = ρ·e` integrates to a closed
//! curve. Curvature quantities depend on `e` only, so they are exact by
//! construction; only positions go through quadrature.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent when `std` is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::curve::{Backend, ClosedCurve};
use crate::error::{Error, Result};
use crate::frame::HalfInt;
use crate::jet::Taylor;
use crate::quadrature::GaussLegendre;
use crate::trig::TrigPoly;
use crate::vector::{dot, norm, Wrap};
use crate::PERIOD;

/// Panels of the cumulative position table.
pub const POSITION_PANELS: usize = 4096;
const POSITION_NODES: usize = 8;
const PROJECTION_NODES: usize = 4096;
const MAX_ATTEMPTS: usize = 16;

/// Unit tangent field of a generated curve.
#[derive(Clone, Debug, PartialEq)]
pub enum Direction {
    /// `e = cos θ·u + sin θ·v` with `θ(t) = slope·t + periodic(t)`; `basis`
    /// is `(u, v)`, defaulting to the standard basis of ℝ².
    Angle {
        slope: f64,
        periodic: TrigPoly,
        basis: Option<[Vec<f64>; 2]>,
    },
    /// `e = v/‖v‖` for a trigonometric curve `v` in ℝⁿ.
    Spherical { components: Vec<TrigPoly> },
}

impl Direction {
    pub fn dimension(&self) -> usize {
        match self {
            Direction::Angle { basis: None, .. } => 2,
            Direction::Angle { basis: Some(b), .. } => b[0].len(),
            Direction::Spherical { components } => components.len(),
        }
    }

    pub fn series<const N: usize>(&self, t: f64) -> Vec<Taylor<N>> {
        match self {
            Direction::Angle {
                slope,
                periodic,
                basis,
            } => {
                let theta = periodic.taylor::<N>(t) + Taylor::<N>::variable(t) * *slope;
                let (s, c) = theta.sin_cos();
                match basis {
                    None => alloc::vec![c, s],
                    Some([u, v]) => u.iter().zip(v).map(|(a, b)| c * *a + s * *b).collect(),
                }
            }
            Direction::Spherical { components } => {
                let v: Vec<Taylor<N>> = components.iter().map(|p| p.taylor::<N>(t)).collect();
                let mut sq = Taylor::<N>::constant(0.0);
                for x in &v {
                    sq = sq + *x * *x;
                }
                let inv = sq.sqrt().recip();
                v.into_iter().map(|x| x * inv).collect()
            }
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.series::<1>(t).iter().map(|s| s.value()).collect()
    }
}

/// A curve defined by `γ(t) = base + ∫₀ᵗ ρ(s) e(s) ds`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedCurve {
    direction: Direction,
    rho: TrigPoly,
    base_point: Vec<f64>,
    table: Vec<Vec<f64>>,
}

impl GeneratedCurve {
    /// Builds the curve and its position table. No closure projection is
    /// applied here.
    pub fn new(direction: Direction, rho: TrigPoly, base_point: Vec<f64>) -> Result<Self> {
        let n = direction.dimension();
        if n < 2 || base_point.len() != n {
            return Err(Error::Spec(format!(
                "generated curve: base point has {} coordinates, direction has {n}",
                base_point.len()
            )));
        }
        if let Direction::Angle {
            basis: Some([u, v]),
            ..
        } = &direction
        {
            if u.len() != v.len() {
                return Err(Error::Spec(
                    "generated curve: basis vectors differ in length".into(),
                ));
            }
        }
        if rho.is_zero() {
            return Err(Error::Spec("generated curve: ρ is identically zero".into()));
        }
        let mut curve = GeneratedCurve {
            direction,
            rho,
            base_point,
            table: Vec::new(),
        };
        curve.table = curve.build_table();
        Ok(curve)
    }

    pub fn direction(&self) -> &Direction {
        &self.direction
    }

    pub fn rho(&self) -> &TrigPoly {
        &self.rho
    }

    pub fn base_point(&self) -> &[f64] {
        &self.base_point
    }

    pub fn dimension(&self) -> usize {
        self.direction.dimension()
    }

    /// Taylor series of the components of `γ′ = ρ·e`.
    pub fn velocity_series<const N: usize>(&self, t: f64) -> Vec<Taylor<N>> {
        let rho = self.rho.taylor::<N>(t);
        self.direction
            .series::<N>(t)
            .into_iter()
            .map(|e| e * rho)
            .collect()
    }

    fn velocity(&self, t: f64) -> Vec<f64> {
        let r = self.rho.eval(t);
        self.direction.eval(t).into_iter().map(|e| e * r).collect()
    }

    fn build_table(&self) -> Vec<Vec<f64>> {
        let n = self.dimension();
        let gl = GaussLegendre::new(POSITION_NODES);
        let h = PERIOD / POSITION_PANELS as f64;
        let mut table = Vec::with_capacity(POSITION_PANELS + 1);
        let mut acc = alloc::vec![0.0; n];
        let mut comp = alloc::vec![0.0; n];
        table.push(acc.clone());
        for k in 0..POSITION_PANELS {
            let inc = self.integrate_panel(&gl, h * k as f64, h * (k + 1) as f64);
            for d in 0..n {
                let y = inc[d] - comp[d];
                let s = acc[d] + y;
                comp[d] = (s - acc[d]) - y;
                acc[d] = s;
            }
            table.push(acc.clone());
        }
        table
    }

    fn integrate_panel(&self, gl: &GaussLegendre, a: f64, b: f64) -> Vec<f64> {
        let n = self.dimension();
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut out = alloc::vec![0.0; n];
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            let v = self.velocity(mid + half * x);
            for d in 0..n {
                out[d] += w * half * v[d];
            }
        }
        out
    }

    /// `γ(t)` from the cumulative table plus a partial panel.
    pub fn position(&self, t: f64) -> Vec<f64> {
        let t = t.wrap(PERIOD);
        let h = PERIOD / POSITION_PANELS as f64;
        let k = ((t / h).floor() as usize).min(POSITION_PANELS - 1);
        let t0 = h * k as f64;
        let mut p: Vec<f64> = self.table[k]
            .iter()
            .zip(&self.base_point)
            .map(|(a, b)| a + b)
            .collect();
        if t > t0 {
            let gl = GaussLegendre::new(POSITION_NODES);
            let inc = self.integrate_panel(&gl, t0, t);
            p.iter_mut().zip(inc).for_each(|(x, d)| *x += d);
        }
        p
    }

    /// `‖∫₀^{2π} ρ e dt‖` by 16-point Gauss–Legendre on 512 panels.
    pub fn closure_residual(&self) -> f64 {
        let gl = GaussLegendre::new(16);
        let panels = 512;
        let h = PERIOD / panels as f64;
        let mut total = alloc::vec![0.0; self.dimension()];
        for k in 0..panels {
            let inc = self.integrate_panel(&gl, h * k as f64, h * (k + 1) as f64);
            total.iter_mut().zip(inc).for_each(|(x, d)| *x += d);
        }
        norm(&total)
    }
}

/// Closure residual of a generated curve.
pub fn closure_residual(curve: &ClosedCurve) -> Result<f64> {
    match curve.backend() {
        Backend::Generated(g) => Ok(g.closure_residual()),
        _ => Err(Error::Precondition(
            "closure residual needs a generated curve".into(),
        )),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaMode {
    /// `θ′` keeps one sign: `amplitude` must stay below `|index|`.
    Monotone,
    /// No constraint on the perturbation.
    Free,
}

/// Global type of the tangent field to generate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Topology {
    /// Planar tangent field with the given rotation index. For `n ≥ 3` the
    /// field lives in a random 2-plane.
    Index(HalfInt),
    /// Non-planar field for `n ≥ 3`.
    Spherical { co_orientable: bool },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub dimension: usize,
    pub topology: Topology,
    pub degree: usize,
    pub amplitude: f64,
    pub theta_mode: ThetaMode,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dimension < 2 {
            return Err(Error::Spec(
                "generator: dimension must be at least 2".into(),
            ));
        }
        if self.degree < 1 {
            return Err(Error::Spec("generator: degree must be at least 1".into()));
        }
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(Error::Spec(
                "generator: amplitude must be finite and ≥ 0".into(),
            ));
        }
        match self.topology {
            Topology::Index(h) => {
                if self.theta_mode == ThetaMode::Monotone && self.amplitude >= h.value().abs() {
                    return Err(Error::Spec(format!(
                        "generator: monotone θ needs amplitude < |index| = {}, got {}",
                        h.value().abs(),
                        self.amplitude
                    )));
                }
            }
            Topology::Spherical { .. } => {
                if self.dimension < 3 {
                    return Err(Error::Spec(
                        "generator: spherical tangent fields need dimension ≥ 3".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn antiperiodic(&self) -> bool {
        match self.topology {
            Topology::Index(h) => !h.is_integer(),
            Topology::Spherical { co_orientable } => !co_orientable,
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Random polynomial with coefficient decay `1/k`. Antiperiodic ones use
/// frequency 1/2 with odd harmonics `1, 3, …, 2·harmonics − 1` only.
fn random_poly(
    rng: &mut ChaCha8Rng,
    harmonics: usize,
    antiperiodic: bool,
    constant: bool,
) -> TrigPoly {
    if antiperiodic {
        let len = 2 * harmonics - 1;
        let mut cos = alloc::vec![0.0; len];
        let mut sin = alloc::vec![0.0; len];
        for k in (1..=len).step_by(2) {
            cos[k - 1] = gaussian(rng) / k as f64;
            sin[k - 1] = gaussian(rng) / k as f64;
        }
        TrigPoly::new(0.0, cos, sin).with_frequency(0.5)
    } else {
        let c0 = if constant { gaussian(rng) } else { 0.0 };
        let cos = (1..=harmonics).map(|k| gaussian(rng) / k as f64).collect();
        let sin = (1..=harmonics).map(|k| gaussian(rng) / k as f64).collect();
        TrigPoly::new(c0, cos, sin)
    }
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        let l = norm(&v);
        if l > 1e-3 {
            return v.into_iter().map(|x| x / l).collect();
        }
    }
}

fn random_direction(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Direction {
    match spec.topology {
        Topology::Index(h) => {
            let raw = random_poly(rng, spec.degree, false, false);
            let bound = raw.derivative_bound();
            let periodic = if bound > 0.0 {
                raw.scale(spec.amplitude / bound)
            } else {
                raw
            };
            let basis = if spec.dimension == 2 {
                None
            } else {
                let u = random_unit(rng, spec.dimension);
                let v = loop {
                    let w = random_unit(rng, spec.dimension);
                    let p = dot(&u, &w);
                    let r: Vec<f64> = w.iter().zip(&u).map(|(a, b)| a - p * b).collect();
                    let l = norm(&r);
                    if l > 1e-2 {
                        break r.into_iter().map(|x| x / l).collect::<Vec<f64>>();
                    }
                };
                Some([u, v])
            };
            Direction::Angle {
                slope: h.value(),
                periodic,
                basis,
            }
        }
        Topology::Spherical { co_orientable } => Direction::Spherical {
            components: (0..spec.dimension)
                .map(|_| random_poly(rng, spec.degree, !co_orientable, true))
                .collect(),
        },
    }
}

/// Rejects spherical fields whose generating curve passes near the origin.
fn direction_is_tame(direction: &Direction) -> bool {
    let Direction::Spherical { components } = direction else {
        return true;
    };
    let grid = 2048;
    let norms: Vec<f64> = (0..grid)
        .map(|i| {
            let t = PERIOD * i as f64 / grid as f64;
            let v: Vec<f64> = components.iter().map(|p| p.eval(t)).collect();
            norm(&v)
        })
        .collect();
    let max = norms.iter().copied().fold(0.0, f64::max);
    let min = norms.iter().copied().fold(f64::INFINITY, f64::min);
    min > 0.2 * max
}

/// Speed function basis: functions with the same (anti)periodicity as `e`.
fn speed_basis(spec: &GeneratorSpec) -> Vec<TrigPoly> {
    let harmonics = spec.degree + spec.dimension;
    let mut basis = Vec::new();
    if spec.antiperiodic() {
        for k in (1..2 * harmonics).step_by(2) {
            let mut cos = alloc::vec![0.0; k];
            cos[k - 1] = 1.0;
            basis.push(TrigPoly::new(0.0, cos, Vec::new()).with_frequency(0.5));
            let mut sin = alloc::vec![0.0; k];
            sin[k - 1] = 1.0;
            basis.push(TrigPoly::new(0.0, Vec::new(), sin).with_frequency(0.5));
        }
    } else {
        basis.push(TrigPoly::new(1.0, Vec::new(), Vec::new()));
        for k in 1..=harmonics {
            let mut cos = alloc::vec![0.0; k];
            cos[k - 1] = 1.0;
            basis.push(TrigPoly::new(0.0, cos, Vec::new()));
            let mut sin = alloc::vec![0.0; k];
            sin[k - 1] = 1.0;
            basis.push(TrigPoly::new(0.0, Vec::new(), sin));
        }
    }
    basis
}

/// Projects the coefficient vector onto the null space of
/// `c ↦ ∫₀^{2π} ρ_c(t) e(t) dt`, with the functionals evaluated by the
/// periodic trapezoidal rule and orthonormalized by Gram–Schmidt.
fn project_closed(direction: &Direction, basis: &[TrigPoly], coeffs: &mut [f64]) {
    let n = direction.dimension();
    let m = basis.len();
    let h = PERIOD / PROJECTION_NODES as f64;
    let mut rows = alloc::vec![alloc::vec![0.0; m]; n];
    for q in 0..PROJECTION_NODES {
        let t = h * q as f64;
        let e = direction.eval(t);
        for (i, phi) in basis.iter().enumerate() {
            let p = phi.eval(t) * h;
            for d in 0..n {
                rows[d][i] += p * e[d];
            }
        }
    }
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for mut r in rows {
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for q in &ortho {
                let p = dot(&r, q);
                r.iter_mut().zip(q).for_each(|(x, y)| *x -= p * y);
            }
        }
        let l = norm(&r);
        if l > 1e-12 {
            ortho.push(r.into_iter().map(|x| x / l).collect());
        }
    }
    for _ in 0..2 {
        for q in &ortho {
            let p = dot(coeffs, q);
            coeffs.iter_mut().zip(q).for_each(|(x, y)| *x -= p * y);
        }
    }
}

fn assemble(basis: &[TrigPoly], coeffs: &[f64]) -> TrigPoly {
    let len = basis.iter().map(|b| b.degree()).max().unwrap_or(0);
    let mut out = TrigPoly::new(0.0, alloc::vec![0.0; len], alloc::vec![0.0; len])
        .with_frequency(basis[0].frequency);
    for (b, &c) in basis.iter().zip(coeffs) {
        out.constant += c * b.constant;
        for (k, v) in b.cos.iter().enumerate() {
            out.cos[k] += c * v;
        }
        for (k, v) in b.sin.iter().enumerate() {
            out.sin[k] += c * v;
        }
    }
    out
}

/// Generates a closed frontal. Equal specs (including the seed) give
/// bit-identical curves.
pub fn generate(spec: &GeneratorSpec) -> Result<ClosedCurve> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let basis = speed_basis(spec);
    for _ in 0..MAX_ATTEMPTS {
        let direction = random_direction(spec, &mut rng);
        if !direction_is_tame(&direction) {
            continue;
        }
        let mut coeffs: Vec<f64> = basis
            .iter()
            .map(|b| {
                let k = b.degree().max(1) as f64;
                gaussian(&mut rng) / k
            })
            .collect();
        let before = norm(&coeffs);
        project_closed(&direction, &basis, &mut coeffs);
        let after = norm(&coeffs);
        if !(after > 1e-6 * before) {
            continue;
        }
        coeffs.iter_mut().for_each(|c| *c /= after);
        let rho = assemble(&basis, &coeffs);
        let base: Vec<f64> = (0..spec.dimension).map(|_| gaussian(&mut rng)).collect();
        let generated = GeneratedCurve::new(direction, rho, base)?;
        let curve = ClosedCurve::generated(generated.clone())?;
        if generated.closure_residual() <= 1e-10 * curve.scale() {
            return Ok(curve);
        }
    }
    Err(Error::DegenerateCurve(format!(
        "generator: no admissible draw after {MAX_ATTEMPTS} attempts (seed {})",
        spec.seed
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planar(index_twice: i64, mode: ThetaMode, amplitude: f64, seed: u64) -> GeneratorSpec {
        GeneratorSpec {
            dimension: 2,
            topology: Topology::Index(HalfInt::from_twice(index_twice)),
            degree: 3,
            amplitude,
            theta_mode: mode,
            seed,
        }
    }

    #[test]
    fn generated_curves_close() {
        for seed in 0..5 {
            let c = generate(&planar(1, ThetaMode::Monotone, 0.3, seed)).unwrap();
            let r = closure_residual(&c).unwrap();
            assert!(r <= 1e-10 * c.scale(), "seed {seed}: residual {r}");
            let p0 = c.position(0.0);
            let p1 = c.position(PERIOD - 1e-9);
            assert!(crate::vector::dist(&p0, &p1) < 1e-7 * c.scale());
        }
    }

    #[test]
    fn same_seed_same_curve() {
        let a = generate(&planar(3, ThetaMode::Free, 2.0, 11)).unwrap();
        let b = generate(&planar(3, ThetaMode::Free, 2.0, 11)).unwrap();
        assert_eq!(a, b);
        let c = generate(&planar(3, ThetaMode::Free, 2.0, 12)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn monotone_with_large_amplitude_is_rejected() {
        assert!(matches!(
            generate(&planar(1, ThetaMode::Monotone, 0.5, 0)),
            Err(Error::Spec(_))
        ));
    }

    #[test]
    fn circle_as_generated_closes() {
        let g = GeneratedCurve::new(
            Direction::Angle {
                slope: 1.0,
                periodic: TrigPoly::zero(),
                basis: None,
            },
            TrigPoly::new(1.0, Vec::new(), Vec::new()),
            alloc::vec![1.0, 0.0],
        )
        .unwrap();
        assert!(g.closure_residual() < 1e-14);
        let p = g.position(core::f64::consts::FRAC_PI_2);
        // (sin t, 1 − cos t) from the base point (1, 0)
        assert!(crate::vector::dist(&p, &[2.0, 1.0]) < 1e-13);
    }

    #[test]
    fn unprojected_speed_does_not_close() {
        let g = GeneratedCurve::new(
            Direction::Angle {
                slope: 0.5,
                periodic: TrigPoly::zero(),
                basis: None,
            },
            TrigPoly::new(0.0, alloc::vec![1.0, 0.0, 0.4], alloc::vec![0.3]).with_frequency(0.5),
            alloc::vec![0.0, 0.0],
        )
        .unwrap();
        assert!(g.closure_residual() > 0.1);
    }
}
