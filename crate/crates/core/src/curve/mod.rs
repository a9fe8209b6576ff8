//! Closed curves with exact derivative jets.

mod family;

pub use family::Family;

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::generator::GeneratedCurve;
use crate::jet::{Jet, Taylor, MAX_ORDER};
use crate::trig::TrigPoly;
use crate::vector::dist;
use crate::PERIOD;

/// How the coordinates of a curve are produced.
#[derive(Clone, Debug, PartialEq)]
pub enum Backend {
    /// One trigonometric polynomial per coordinate.
    Fourier(Vec<TrigPoly>),
    Family(Family),
    /// `γ′ = ρ·e` built from a prescribed tangent field.
    Generated(GeneratedCurve),
}

/// Rigid, affine or reparametrizing map applied on top of a backend:
/// `t ↦ M·γ(s·t + shift) + offset` with `s = −1` when `reverse` is set.
///
/// `M` may be rectangular, which embeds a planar curve into ℝⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct Placement {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `rows × cols`.
    pub matrix: Vec<f64>,
    pub offset: Vec<f64>,
    pub shift: f64,
    pub reverse: bool,
}

impl Placement {
    pub fn identity(n: usize) -> Self {
        let mut matrix = alloc::vec![0.0; n * n];
        for i in 0..n {
            matrix[i * n + i] = 1.0;
        }
        Placement {
            rows: n,
            cols: n,
            matrix,
            offset: alloc::vec![0.0; n],
            shift: 0.0,
            reverse: false,
        }
    }

    fn apply_linear(&self, v: &[f64], out: &mut [f64]) {
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..self.cols)
                .map(|c| self.matrix[r * self.cols + c] * v[c])
                .sum();
        }
    }

    /// Composition `self ∘ inner`.
    fn compose(&self, inner: &Placement) -> Placement {
        let mut matrix = alloc::vec![0.0; self.rows * inner.cols];
        for r in 0..self.rows {
            for c in 0..inner.cols {
                matrix[r * inner.cols + c] = (0..self.cols)
                    .map(|k| self.matrix[r * self.cols + k] * inner.matrix[k * inner.cols + c])
                    .sum();
            }
        }
        let mut offset = alloc::vec![0.0; self.rows];
        self.apply_linear(&inner.offset, &mut offset);
        offset
            .iter_mut()
            .zip(&self.offset)
            .for_each(|(o, b)| *o += b);
        // outer: u = s_o t + h_o; inner: v = s_i u + h_i
        let s_inner = if inner.reverse { -1.0 } else { 1.0 };
        Placement {
            rows: self.rows,
            cols: inner.cols,
            matrix,
            offset,
            shift: s_inner * self.shift + inner.shift,
            reverse: self.reverse != inner.reverse,
        }
    }
}

/// A 2π-periodic curve in ℝⁿ (or the open cusp germ on `[−1, 1]`).
///
/// Curves are immutable; every evaluation is a pure function of `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedCurve {
    backend: Backend,
    placement: Option<Placement>,
    dimension: usize,
    scale: f64,
}

impl ClosedCurve {
    pub fn family(name: &str, params: &[(alloc::string::String, f64)]) -> Result<Self> {
        Self::from_backend(Backend::Family(Family::from_name(name, params)?), None)
    }

    pub fn from_family(family: Family) -> Result<Self> {
        Self::from_backend(Backend::Family(family), None)
    }

    pub fn fourier(coords: Vec<TrigPoly>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Spec("empty coefficient table".into()));
        }
        if coords.len() < 2 {
            return Err(Error::Spec("a curve needs at least two coordinates".into()));
        }
        if let Some(p) = coords.iter().find(|p| p.frequency != 1.0) {
            return Err(Error::Spec(format!(
                "fourier coordinates must be 2π-periodic (frequency 1), got {}",
                p.frequency
            )));
        }
        Self::from_backend(Backend::Fourier(coords), None)
    }

    pub fn generated(curve: GeneratedCurve) -> Result<Self> {
        Self::from_backend(Backend::Generated(curve), None)
    }

    pub fn from_backend(backend: Backend, placement: Option<Placement>) -> Result<Self> {
        let base_dim = match &backend {
            Backend::Fourier(c) => c.len(),
            Backend::Family(_) => 2,
            Backend::Generated(g) => g.dimension(),
        };
        let dimension = match &placement {
            Some(p) => {
                if p.cols != base_dim
                    || p.matrix.len() != p.rows * p.cols
                    || p.offset.len() != p.rows
                {
                    return Err(Error::Spec(
                        "placement shape does not match the curve".into(),
                    ));
                }
                if p.rows < 2 {
                    return Err(Error::Spec("placement must map into at least ℝ²".into()));
                }
                p.rows
            }
            None => base_dim,
        };
        let mut curve = ClosedCurve {
            backend,
            placement,
            dimension,
            scale: 0.0,
        };
        curve.scale = curve.measure_diameter();
        if !(curve.max_speed() > 0.0) {
            return Err(Error::Spec("the regular set of the curve is empty".into()));
        }
        Ok(curve)
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn placement(&self) -> Option<&Placement> {
        self.placement.as_ref()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Diameter of the image, used to make thresholds unit-free.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_closed(&self) -> bool {
        match &self.backend {
            Backend::Family(f) => f.is_closed(),
            _ => true,
        }
    }

    /// Parameter domain: `[0, 2π]`, or `[−1, 1]` for the cusp germ.
    pub fn domain(&self) -> (f64, f64) {
        if self.is_closed() {
            (0.0, PERIOD)
        } else {
            (-1.0, 1.0)
        }
    }

    pub fn require_closed(&self) -> Result<()> {
        if self.is_closed() {
            Ok(())
        } else {
            Err(Error::NotClosed)
        }
    }

    /// Position and the first `order` derivatives at `t`.
    pub fn eval_jet(&self, t: f64, order: usize) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(Error::UnsupportedOrder(order));
        }
        Ok(self.jet_impl(t, order, true))
    }

    /// Like [`eval_jet`](Self::eval_jet) but entry 0 is left at zero. Avoids
    /// the cumulative quadrature of generated curves.
    pub(crate) fn derivative_jet(&self, t: f64, order: usize) -> Jet {
        self.jet_impl(t, order, false)
    }

    pub fn position(&self, t: f64) -> Vec<f64> {
        self.jet_impl(t, 0, true).position().to_vec()
    }

    pub fn velocity(&self, t: f64) -> Vec<f64> {
        self.jet_impl(t, 1, false).derivative(1).to_vec()
    }

    fn jet_impl(&self, t: f64, order: usize, with_position: bool) -> Jet {
        let (u, sign) = match &self.placement {
            Some(p) => {
                let s = if p.reverse { -1.0 } else { 1.0 };
                (s * t + p.shift, s)
            }
            None => (t, 1.0),
        };
        let base = if order <= 2 {
            self.backend_jet::<3>(u, order, with_position)
        } else {
            self.backend_jet::<5>(u, order, with_position)
        };
        match &self.placement {
            None => base,
            Some(p) => {
                let mut out = Jet::zeros(order, p.rows);
                let mut factor = 1.0;
                for j in 0..=order {
                    if j > 0 || with_position {
                        let mut v = alloc::vec![0.0; p.rows];
                        p.apply_linear(base.derivative(j), &mut v);
                        let dst = out.derivative_mut(j);
                        for (d, x) in dst.iter_mut().zip(&v) {
                            *d = factor * x;
                        }
                        if j == 0 {
                            dst.iter_mut().zip(&p.offset).for_each(|(d, b)| *d += b);
                        }
                    }
                    factor *= sign;
                }
                out
            }
        }
    }

    fn backend_jet<const N: usize>(&self, t: f64, order: usize, with_position: bool) -> Jet {
        match &self.backend {
            Backend::Fourier(coords) => {
                let mut jet = Jet::zeros(order, coords.len());
                for (i, c) in coords.iter().enumerate() {
                    jet.set_coordinate(i, &c.taylor::<N>(t));
                }
                jet
            }
            Backend::Family(f) => {
                let mut jet = Jet::zeros(order, 2);
                for (i, s) in f.series::<N>(t).iter().enumerate() {
                    jet.set_coordinate(i, s);
                }
                jet
            }
            Backend::Generated(g) => {
                let n = g.dimension();
                let mut jet = Jet::zeros(order, n);
                if order > 0 {
                    let speed: Vec<Taylor<N>> = g.velocity_series::<N>(t);
                    for (i, s) in speed.iter().enumerate() {
                        for j in 1..=order {
                            jet.derivative_mut(j)[i] = s.derivative(j - 1);
                        }
                    }
                }
                if with_position {
                    jet.derivative_mut(0).copy_from_slice(&g.position(t));
                }
                jet
            }
        }
    }

    /// Normalized Taylor coefficients `γ⁽ᵏ⁺¹⁾(t)/k!` of `γ′` at `t` for
    /// `k < N − 1`, indexed `[k][coordinate]`.
    pub(crate) fn velocity_coefficients<const N: usize>(&self, t: f64) -> Vec<Vec<f64>> {
        let (u, sign) = match &self.placement {
            Some(p) => {
                let s = if p.reverse { -1.0 } else { 1.0 };
                (s * t + p.shift, s)
            }
            None => (t, 1.0),
        };
        let from_position = |p: &Taylor<N>| -> Vec<f64> {
            (0..N - 1).map(|k| (k + 1) as f64 * p.0[k + 1]).collect()
        };
        let per_coord: Vec<Vec<f64>> = match &self.backend {
            Backend::Fourier(coords) => coords
                .iter()
                .map(|c| from_position(&c.taylor::<N>(u)))
                .collect(),
            Backend::Family(f) => f.series::<N>(u).iter().map(from_position).collect(),
            Backend::Generated(g) => g
                .velocity_series::<N>(u)
                .iter()
                .map(|s| s.0[..N - 1].to_vec())
                .collect(),
        };
        let base_dim = per_coord.len();
        let mut factor = sign;
        (0..N - 1)
            .map(|k| {
                let b: Vec<f64> = (0..base_dim).map(|i| factor * per_coord[i][k]).collect();
                factor *= sign;
                match &self.placement {
                    None => b,
                    Some(p) => {
                        let mut out = alloc::vec![0.0; p.rows];
                        p.apply_linear(&b, &mut out);
                        out
                    }
                }
            })
            .collect()
    }

    /// Returns the curve composed with an additional placement.
    pub fn placed(&self, outer: Placement) -> Result<ClosedCurve> {
        let placement = match &self.placement {
            None => outer,
            Some(inner) => {
                if outer.cols != inner.rows {
                    return Err(Error::Spec(
                        "placement shape does not match the curve".into(),
                    ));
                }
                outer.compose(inner)
            }
        };
        Self::from_backend(self.backend.clone(), Some(placement))
    }

    /// `t ↦ γ(t + c)`.
    pub fn shifted(&self, c: f64) -> Result<ClosedCurve> {
        let mut p = Placement::identity(self.dimension);
        p.shift = c;
        self.placed(p)
    }

    /// `t ↦ γ(−t)`.
    pub fn reversed(&self) -> Result<ClosedCurve> {
        let mut p = Placement::identity(self.dimension);
        p.reverse = true;
        self.placed(p)
    }

    /// `t ↦ M γ(t) + b` for a square matrix `M` (row-major).
    pub fn transformed(&self, matrix: Vec<f64>, offset: Vec<f64>) -> Result<ClosedCurve> {
        let n = self.dimension;
        self.placed(Placement {
            rows: offset.len(),
            cols: n,
            matrix,
            offset,
            shift: 0.0,
            reverse: false,
        })
    }

    /// Samples `count` positions uniformly over the domain (end excluded for
    /// closed curves).
    pub fn sample_positions(&self, count: usize) -> Vec<Vec<f64>> {
        let (a, b) = self.domain();
        let denom = if self.is_closed() {
            count
        } else {
            count.max(2) - 1
        };
        (0..count)
            .map(|i| self.position(a + (b - a) * i as f64 / denom as f64))
            .collect()
    }

    fn measure_diameter(&self) -> f64 {
        let pts = self.sample_positions(512);
        let mut d: f64 = 0.0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                d = d.max(dist(&pts[i], &pts[j]));
            }
        }
        d
    }

    fn max_speed(&self) -> f64 {
        let (a, b) = self.domain();
        (0..257)
            .map(|i| {
                let t = a + (b - a) * (i as f64 + 0.37) / 257.0;
                crate::vector::norm(&self.velocity(t))
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn circle() -> ClosedCurve {
        ClosedCurve::from_family(Family::Circle { radius: 1.0 }).unwrap()
    }

    #[test]
    fn circle_jet_at_zero() {
        let jet = circle().eval_jet(0.0, 2).unwrap();
        let expected = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]];
        for (j, e) in expected.iter().enumerate() {
            assert!(dist(jet.derivative(j), e) < 1e-15);
        }
    }

    #[test]
    fn order_five_is_rejected() {
        assert_eq!(circle().eval_jet(0.0, 5), Err(Error::UnsupportedOrder(5)));
    }

    #[test]
    fn empty_fourier_table_is_rejected() {
        assert!(ClosedCurve::fourier(vec![]).is_err());
    }

    #[test]
    fn constant_curve_is_rejected() {
        let c = vec![
            TrigPoly::new(1.0, vec![], vec![]),
            TrigPoly::new(2.0, vec![], vec![]),
        ];
        assert!(ClosedCurve::fourier(c).is_err());
    }

    #[test]
    fn placement_reverses_and_shifts() {
        let c = circle();
        let r = c.reversed().unwrap().shifted(0.5).unwrap();
        // r(t) = c(−(t + 0.5))
        for &t in &[0.0, 1.0, 2.5] {
            let a = r.eval_jet(t, 3).unwrap();
            let b = c.eval_jet(-(t + 0.5), 3).unwrap();
            for j in 0..=3 {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                let bj: Vec<f64> = b.derivative(j).iter().map(|x| s * x).collect();
                assert!(dist(a.derivative(j), &bj) < 1e-14);
            }
        }
    }

    #[test]
    fn embedding_into_r3() {
        let c = circle();
        let e = c
            .placed(Placement {
                rows: 3,
                cols: 2,
                matrix: vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
                offset: vec![0.0, 0.0, 2.0],
                shift: 0.0,
                reverse: false,
            })
            .unwrap();
        assert_eq!(e.dimension(), 3);
        assert!(dist(&e.position(0.0), &[1.0, 0.0, 2.0]) < 1e-15);
        assert!((e.scale() - 2.0).abs() < 1e-3);
    }
}
