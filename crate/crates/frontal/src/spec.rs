//! Curve-spec JSON: one document per curve.

use std::collections::BTreeMap;

use frontal_core::generator::Direction;
use frontal_core::{
    Backend, ClosedCurve, Family, GeneratedCurve, GeneratorSpec, Placement, ThetaMode, Topology,
    TrigPoly,
};
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub dimension: usize,
    pub backend: BackendKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fourier: Option<FourierSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated: Option<GeneratedSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement: Option<PlacementSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Family,
    Fourier,
    Generated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierSpec {
    pub coords: Vec<TrigSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigSpec {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
    /// Base frequency `ω`; term `k` oscillates at `kω`.
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub frequency: f64,
}

fn one() -> f64 {
    1.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratedSpec {
    pub direction: DirectionSpec,
    pub rho: TrigSpec,
    pub base_point: Vec<f64>,
    /// The generator input that produced this curve, kept for replay.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpecJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DirectionSpec {
    /// `θ(t) = slope·t + periodic(t)`, `e = cos θ·u + sin θ·v`.
    Angle {
        slope: f64,
        periodic: TrigSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<[Vec<f64>; 2]>,
    },
    /// `e = v/‖v‖`.
    Spherical { components: Vec<TrigSpec> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpecJson {
    pub dimension: usize,
    /// Twice the rotation index, for planar tangent fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_twice: Option<i64>,
    /// For spherical tangent fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub co_orientable: Option<bool>,
    pub degree: usize,
    pub amplitude: f64,
    pub theta_mode: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementSpec {
    /// Row-major, `dimension` rows by the backend's dimension columns.
    pub matrix: Vec<Vec<f64>>,
    #[serde(default)]
    pub offset: Vec<f64>,
    #[serde(default)]
    pub shift: f64,
    #[serde(default)]
    pub reverse: bool,
}

impl From<&TrigPoly> for TrigSpec {
    fn from(p: &TrigPoly) -> Self {
        TrigSpec {
            constant: p.constant,
            cos: p.cos.clone(),
            sin: p.sin.clone(),
            frequency: p.frequency,
        }
    }
}

impl TrigSpec {
    fn to_poly(&self) -> Result<TrigPoly, Error> {
        let finite = self.constant.is_finite()
            && self.frequency.is_finite()
            && self.frequency > 0.0
            && self.cos.iter().chain(&self.sin).all(|x| x.is_finite());
        if !finite {
            return Err(Error::Validation(
                "trigonometric coefficients must be finite".into(),
            ));
        }
        Ok(
            TrigPoly::new(self.constant, self.cos.clone(), self.sin.clone())
                .with_frequency(self.frequency),
        )
    }
}

impl From<&GeneratorSpec> for GeneratorSpecJson {
    fn from(g: &GeneratorSpec) -> Self {
        let (index_twice, co_orientable) = match g.topology {
            Topology::Index(h) => (Some(h.twice()), None),
            Topology::Spherical { co_orientable } => (None, Some(co_orientable)),
        };
        GeneratorSpecJson {
            dimension: g.dimension,
            index_twice,
            co_orientable,
            degree: g.degree,
            amplitude: g.amplitude,
            theta_mode: theta_mode_name(g.theta_mode).into(),
            seed: g.seed,
        }
    }
}

pub fn theta_mode_name(mode: ThetaMode) -> &'static str {
    match mode {
        ThetaMode::Monotone => "monotone",
        ThetaMode::Free => "free",
    }
}

impl GeneratorSpecJson {
    pub fn to_spec(&self) -> Result<GeneratorSpec, Error> {
        let topology = match (self.index_twice, self.co_orientable) {
            (Some(t), None) => Topology::Index(frontal_core::HalfInt::from_twice(t)),
            (None, Some(c)) => Topology::Spherical { co_orientable: c },
            _ => {
                return Err(Error::Validation(
                    "generator spec needs exactly one of index_twice and co_orientable".into(),
                ))
            }
        };
        let theta_mode = match self.theta_mode.as_str() {
            "monotone" => ThetaMode::Monotone,
            "free" => ThetaMode::Free,
            other => return Err(Error::Validation(format!("unknown theta_mode '{other}'"))),
        };
        Ok(GeneratorSpec {
            dimension: self.dimension,
            topology,
            degree: self.degree,
            amplitude: self.amplitude,
            theta_mode,
            seed: self.seed,
        })
    }
}

impl CurveSpec {
    pub fn family(name: &str, params: &[(String, f64)]) -> Self {
        CurveSpec {
            dimension: 2,
            backend: BackendKind::Family,
            family: Some(FamilySpec {
                name: name.into(),
                params: params.iter().cloned().collect(),
            }),
            fourier: None,
            generated: None,
            placement: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("curve spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve spec serializes")
    }

    /// Validates the document and builds the curve.
    pub fn build(&self) -> Result<ClosedCurve, Error> {
        let present = [
            self.family.is_some(),
            self.fourier.is_some(),
            self.generated.is_some(),
        ];
        let expected = match self.backend {
            BackendKind::Family => 0,
            BackendKind::Fourier => 1,
            BackendKind::Generated => 2,
        };
        if !present[expected] || present.iter().filter(|&&p| p).count() != 1 {
            return Err(Error::Validation(format!(
                "backend '{}' needs exactly the matching section",
                backend_name(self.backend)
            )));
        }
        let backend = match self.backend {
            BackendKind::Family => {
                let f = self.family.as_ref().unwrap();
                let params: Vec<(String, f64)> =
                    f.params.iter().map(|(k, v)| (k.clone(), *v)).collect();
                Backend::Family(Family::from_name(&f.name, &params)?)
            }
            BackendKind::Fourier => {
                let coords = self
                    .fourier
                    .as_ref()
                    .unwrap()
                    .coords
                    .iter()
                    .map(TrigSpec::to_poly)
                    .collect::<Result<Vec<_>, _>>()?;
                Backend::Fourier(coords)
            }
            BackendKind::Generated => {
                let g = self.generated.as_ref().unwrap();
                let direction = match &g.direction {
                    DirectionSpec::Angle {
                        slope,
                        periodic,
                        basis,
                    } => Direction::Angle {
                        slope: *slope,
                        periodic: periodic.to_poly()?,
                        basis: basis.clone(),
                    },
                    DirectionSpec::Spherical { components } => Direction::Spherical {
                        components: components
                            .iter()
                            .map(TrigSpec::to_poly)
                            .collect::<Result<_, _>>()?,
                    },
                };
                Backend::Generated(GeneratedCurve::new(
                    direction,
                    g.rho.to_poly()?,
                    g.base_point.clone(),
                )?)
            }
        };
        let placement = match &self.placement {
            None => None,
            Some(p) => {
                let rows = p.matrix.len();
                let cols = p.matrix.first().map(Vec::len).unwrap_or(0);
                if rows == 0 || p.matrix.iter().any(|r| r.len() != cols) {
                    return Err(Error::Validation(
                        "placement matrix must be rectangular and non-empty".into(),
                    ));
                }
                Some(Placement {
                    rows,
                    cols,
                    matrix: p.matrix.concat(),
                    offset: if p.offset.is_empty() {
                        vec![0.0; rows]
                    } else {
                        p.offset.clone()
                    },
                    shift: p.shift,
                    reverse: p.reverse,
                })
            }
        };
        let curve = ClosedCurve::from_backend(backend, placement)?;
        if curve.dimension() != self.dimension {
            return Err(Error::Validation(format!(
                "declared dimension {} but the curve has dimension {}",
                self.dimension,
                curve.dimension()
            )));
        }
        Ok(curve)
    }

    /// Document describing an existing curve.
    pub fn describe(curve: &ClosedCurve) -> Self {
        let mut spec = CurveSpec {
            dimension: curve.dimension(),
            backend: BackendKind::Family,
            family: None,
            fourier: None,
            generated: None,
            placement: curve.placement().map(|p| PlacementSpec {
                matrix: p.matrix.chunks(p.cols).map(<[f64]>::to_vec).collect(),
                offset: p.offset.clone(),
                shift: p.shift,
                reverse: p.reverse,
            }),
        };
        match curve.backend() {
            Backend::Family(f) => {
                spec.family = Some(FamilySpec {
                    name: f.name().into(),
                    params: f
                        .params()
                        .into_iter()
                        .map(|(k, v)| (k.to_string(), v))
                        .collect(),
                });
            }
            Backend::Fourier(coords) => {
                spec.backend = BackendKind::Fourier;
                spec.fourier = Some(FourierSpec {
                    coords: coords.iter().map(TrigSpec::from).collect(),
                });
            }
            Backend::Generated(g) => {
                spec.backend = BackendKind::Generated;
                let direction = match g.direction() {
                    Direction::Angle {
                        slope,
                        periodic,
                        basis,
                    } => DirectionSpec::Angle {
                        slope: *slope,
                        periodic: periodic.into(),
                        basis: basis.clone(),
                    },
                    Direction::Spherical { components } => DirectionSpec::Spherical {
                        components: components.iter().map(TrigSpec::from).collect(),
                    },
                };
                spec.generated = Some(GeneratedSpec {
                    direction,
                    rho: g.rho().into(),
                    base_point: g.base_point().to_vec(),
                    generator: None,
                });
            }
        }
        spec
    }

    /// Document for a generated curve, recording the generator input.
    pub fn describe_generated(curve: &ClosedCurve, input: &GeneratorSpec) -> Self {
        let mut spec = CurveSpec::describe(curve);
        if let Some(g) = spec.generated.as_mut() {
            g.generator = Some(input.into());
        }
        spec
    }
}

pub fn backend_name(kind: BackendKind) -> &'static str {
    match kind {
        BackendKind::Family => "family",
        BackendKind::Fourier => "fourier",
        BackendKind::Generated => "generated",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_round_trip() {
        let text = r#"{"dimension": 2, "backend": "family", "family": {"name": "hypocycloid", "params": {"m": 2}}}"#;
        let spec = CurveSpec::from_json(text).unwrap();
        let curve = spec.build().unwrap();
        let p = curve.position(0.0);
        assert!((p[0] - 5.0).abs() < 1e-14 && p[1].abs() < 1e-14);
        assert_eq!(CurveSpec::describe(&curve), spec);
    }

    #[test]
    fn fourier_matches_family() {
        let text = r#"{"dimension": 2, "backend": "fourier",
            "fourier": {"coords": [{"cos": [2, 1]}, {"sin": [-2, 1]}]}}"#;
        let a = CurveSpec::from_json(text).unwrap().build().unwrap();
        let b = ClosedCurve::from_family(Family::Hypocycloid { m: 1 }).unwrap();
        for i in 0..50 {
            let t = 0.13 * i as f64;
            let (p, q) = (a.position(t), b.position(t));
            assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn missing_section_is_a_validation_error() {
        let text = r#"{"dimension": 2, "backend": "fourier"}"#;
        let err = CurveSpec::from_json(text).unwrap().build().unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(
            CurveSpec::from_json(r#"{"dimension": 2, "backend": "family", "colour": 1}"#).is_err()
        );
    }

    #[test]
    fn dimension_must_match() {
        let mut spec = CurveSpec::family("circle", &[]);
        spec.dimension = 3;
        assert!(matches!(spec.build(), Err(Error::Validation(_))));
    }

    #[test]
    fn embedding_placement() {
        let text = r#"{"dimension": 3, "backend": "family", "family": {"name": "circle"},
            "placement": {"matrix": [[1, 0], [0, 1], [0, 0]]}}"#;
        let c = CurveSpec::from_json(text).unwrap().build().unwrap();
        assert_eq!(c.dimension(), 3);
        assert_eq!(CurveSpec::describe(&c).placement.unwrap().matrix.len(), 3);
    }
}
