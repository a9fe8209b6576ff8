//! Closed-form curve families.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // inherent when `std` is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::jet::Taylor;

/// Named analytic curves.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `r (cos t, sin t)`
    Circle { radius: f64 },
    /// `(a cos t, b sin t)`
    Ellipse { a: f64, b: f64 },
    /// `(m cos(m+1)t + (m+1) cos mt, m sin(m+1)t − (m+1) sin mt)`, with
    /// `2m+1` cusps and total absolute curvature `π`.
    Hypocycloid { m: u32 },
    /// `(3 cos t − cos 3t, 4a sin³t) / (5 − 3 cos 2t)`: a co-orientable front
    /// with two cusps whose total absolute curvature shrinks with `a`.
    Eye { a: f64 },
    /// The cusp germ `(t², t³)` on `[−1, 1]`. Not closed.
    ModelCusp,
}

impl Family {
    pub const NAMES: [&'static str; 5] = ["circle", "ellipse", "hypocycloid", "eye", "model-cusp"];

    /// Looks up a family by name and validates its parameters.
    pub fn from_name(name: &str, params: &[(String, f64)]) -> Result<Family> {
        let get = |key: &str| params.iter().find(|(k, _)| k == key).map(|(_, v)| *v);
        let allowed: &[&str] = match name {
            "circle" => &["r"],
            "ellipse" => &["a", "b"],
            "hypocycloid" => &["m"],
            "eye" => &["a"],
            "model-cusp" => &[],
            _ => return Err(Error::Spec(format!("unknown family '{name}'"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::Spec(format!(
                "family '{name}' has no parameter '{k}'"
            )));
        }
        let positive = |key: &str, default: Option<f64>| -> Result<f64> {
            let v = get(key)
                .or(default)
                .ok_or_else(|| Error::Spec(format!("family '{name}' needs parameter '{key}'")))?;
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(Error::Spec(format!(
                    "parameter '{key}' must be positive, got {v}"
                )))
            }
        };
        match name {
            "circle" => Ok(Family::Circle {
                radius: positive("r", Some(1.0))?,
            }),
            "ellipse" => Ok(Family::Ellipse {
                a: positive("a", Some(2.0))?,
                b: positive("b", Some(1.0))?,
            }),
            "hypocycloid" => {
                let m = positive("m", None)?;
                if m.fract() != 0.0 || m > 1000.0 {
                    return Err(Error::Spec(format!(
                        "hypocycloid needs an integer m ≥ 1, got {m}"
                    )));
                }
                Ok(Family::Hypocycloid { m: m as u32 })
            }
            "eye" => Ok(Family::Eye {
                a: positive("a", None)?,
            }),
            _ => Ok(Family::ModelCusp),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Circle { .. } => "circle",
            Family::Ellipse { .. } => "ellipse",
            Family::Hypocycloid { .. } => "hypocycloid",
            Family::Eye { .. } => "eye",
            Family::ModelCusp => "model-cusp",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Family::Circle { radius } => alloc::vec![("r", radius)],
            Family::Ellipse { a, b } => alloc::vec![("a", a), ("b", b)],
            Family::Hypocycloid { m } => alloc::vec![("m", m as f64)],
            Family::Eye { a } => alloc::vec![("a", a)],
            Family::ModelCusp => Vec::new(),
        }
    }

    pub fn is_closed(&self) -> bool {
        !matches!(self, Family::ModelCusp)
    }

    /// Coordinates as Taylor series in `t`.
    pub fn series<const N: usize>(&self, t: f64) -> [Taylor<N>; 2] {
        let t = Taylor::<N>::variable(t);
        match *self {
            Family::Circle { radius } => {
                let (s, c) = t.sin_cos();
                [c * radius, s * radius]
            }
            Family::Ellipse { a, b } => {
                let (s, c) = t.sin_cos();
                [c * a, s * b]
            }
            Family::Hypocycloid { m } => {
                let m = m as f64;
                let (s1, c1) = (t * (m + 1.0)).sin_cos();
                let (s0, c0) = (t * m).sin_cos();
                [c1 * m + c0 * (m + 1.0), s1 * m - s0 * (m + 1.0)]
            }
            Family::Eye { a } => {
                let (s, c) = t.sin_cos();
                let (_, c3) = (t * 3.0).sin_cos();
                let (_, c2) = (t * 2.0).sin_cos();
                let denom = (c2 * -3.0 + 5.0).recip();
                let x = (c * 3.0 - c3) * denom;
                let y = s.powi(3) * (4.0 * a) * denom;
                [x, y]
            }
            Family::ModelCusp => [t * t, t * t * t],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(k: &str, v: f64) -> (String, f64) {
        (k.to_string(), v)
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Family::from_name("hypocycloid", &[p("m", 1.5)]).is_err());
        assert!(Family::from_name("hypocycloid", &[p("m", 0.0)]).is_err());
        assert!(Family::from_name("eye", &[p("a", -1.0)]).is_err());
        assert!(Family::from_name("eye", &[]).is_err());
        assert!(Family::from_name("spiral", &[]).is_err());
        assert!(Family::from_name("circle", &[p("q", 1.0)]).is_err());
    }

    #[test]
    fn hypocycloid_m2_starts_at_five() {
        let f = Family::from_name("hypocycloid", &[p("m", 2.0)]).unwrap();
        let [x, y] = f.series::<1>(0.0);
        assert_eq!((x.value(), y.value()), (5.0, 0.0));
    }

    #[test]
    fn eye_anchor_values() {
        let f = Family::Eye { a: 1.0 };
        let [x, y] = f.series::<1>(0.0);
        assert!((x.value() - 1.0).abs() < 1e-15 && y.value().abs() < 1e-15);
        let [x, y] = f.series::<1>(core::f64::consts::FRAC_PI_2);
        assert!(x.value().abs() < 1e-15);
        assert!((y.value() - 0.5).abs() < 1e-15);
    }
}
