//! Small helpers over `&[f64]` vectors.

use alloc::vec::Vec;
#[allow(unused_imports)] // inherent when `std` is linked
use num_traits::Float;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `det(a, b)` for planar vectors.
#[inline]
pub fn det2(a: &[f64], b: &[f64]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn normalized(a: &[f64]) -> Vec<f64> {
    let n = norm(a);
    scaled(a, 1.0 / n)
}

/// Angle between unit vectors, stable for nearly (anti)parallel inputs.
pub fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let c = dist(a, b);
    let s: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x + y) * (x + y))
        .sum::<f64>()
        .sqrt();
    2.0 * c.atan2(s)
}

/// Neumaier-compensated sum in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Maps `t` into `[0, 2π)`; values within `snap` of `2π` go to `0`.
pub fn canonical_param(t: f64, snap: f64) -> f64 {
    let p = crate::PERIOD;
    let mut r = t.wrap(p);
    if p - r <= snap {
        r = 0.0;
    }
    r
}

/// Euclidean remainder for `f64` without `std`.
pub trait Wrap {
    fn wrap(self, rhs: f64) -> f64;
}

impl Wrap for f64 {
    fn wrap(self, rhs: f64) -> f64 {
        let r = self % rhs;
        if r < 0.0 {
            r + rhs.abs()
        } else {
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_between_extremes() {
        assert!((angle_between(&[1.0, 0.0], &[-1.0, 0.0]) - core::f64::consts::PI).abs() < 1e-15);
        assert_eq!(angle_between(&[0.0, 1.0], &[0.0, 1.0]), 0.0);
        let a = angle_between(&[1.0, 0.0], &[0.0, 1.0]);
        assert!((a - core::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn canonical_param_snaps_to_zero() {
        assert_eq!(canonical_param(crate::PERIOD - 1e-14, 1e-12), 0.0);
        assert!((canonical_param(-1.0, 1e-12) - (crate::PERIOD - 1.0)).abs() < 1e-15);
    }
}
