//! Standalone SVG figures: the curve with its cusps, and the tangent
//! indicatrix on the unit circle.

use std::fmt::Write as _;

use frontal_core::frame::build_frame;
use frontal_core::singular::analyze_singular_points;
use frontal_core::{ClosedCurve, PERIOD};

use crate::{Error, Result};

const PANEL: f64 = 400.0;
const MARGIN: f64 = 20.0;

#[derive(Clone, Copy, Debug)]
pub struct RenderOptions {
    pub samples: usize,
    pub mark_cusps: bool,
    pub show_indicatrix: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            samples: 2000,
            mark_cusps: true,
            show_indicatrix: false,
        }
    }
}

/// Maps a bounding box into a square panel, y up.
struct View {
    x0: f64,
    y0: f64,
    scale: f64,
    left: f64,
}

impl View {
    fn fit(points: &[[f64; 2]], left: f64) -> View {
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in points {
            xmin = xmin.min(p[0]);
            xmax = xmax.max(p[0]);
            ymin = ymin.min(p[1]);
            ymax = ymax.max(p[1]);
        }
        let span = (xmax - xmin).max(ymax - ymin).max(1e-12);
        let inner = PANEL - 2.0 * MARGIN;
        View {
            x0: 0.5 * (xmin + xmax) - 0.5 * span,
            y0: 0.5 * (ymin + ymax) - 0.5 * span,
            scale: inner / span,
            left,
        }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let x = self.left + MARGIN + (p[0] - self.x0) * self.scale;
        let y = PANEL - MARGIN - (p[1] - self.y0) * self.scale;
        (x, y)
    }
}

fn polyline(out: &mut String, view: &View, points: &[[f64; 2]], stroke: &str, closed: bool) {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = view.map(*p);
        let _ = write!(d, "{}{:.3},{:.3}", if i == 0 { "M" } else { " L" }, x, y);
    }
    if closed {
        d.push_str(" Z");
    }
    let _ = writeln!(
        out,
        r#"  <path d="{d}" fill="none" stroke="{stroke}" stroke-width="1.5" stroke-linejoin="round"/>"#
    );
}

fn xy(v: &[f64]) -> [f64; 2] {
    [v[0], v[1]]
}

/// Sample parameters on `[0, end)` with the given extra points merged in.
fn parameters(samples: usize, end: f64, extra: &[f64]) -> Vec<f64> {
    let mut ts: Vec<f64> = (0..samples)
        .map(|i| end * i as f64 / samples as f64)
        .chain(extra.iter().copied())
        .collect();
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    ts
}

/// Renders `curve` as an SVG document.
pub fn render_svg(curve: &ClosedCurve, options: &RenderOptions) -> Result<String> {
    let n = curve.dimension();
    if n > 3 {
        return Err(Error::Validation(format!(
            "rendering is unsupported in dimension {n}"
        )));
    }
    if n == 3 && !options.show_indicatrix {
        return Err(Error::Validation(
            "dimension 3 renders only the indicatrix; pass --show-indicatrix".into(),
        ));
    }
    if options.samples < 16 {
        return Err(Error::Validation("--samples must be at least 16".into()));
    }
    let singular = analyze_singular_points(curve)?;
    let frame = build_frame(curve, &singular)?;
    let singular_ts: Vec<f64> = singular.iter().map(|p| p.t).collect();

    let panels = usize::from(n == 2) + usize::from(options.show_indicatrix);
    let width = PANEL * panels as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL}" viewBox="0 0 {width} {PANEL}">"#
    );
    let _ = writeln!(
        out,
        r#"  <rect x="0" y="0" width="{width}" height="{PANEL}" fill="white"/>"#
    );

    let mut left = 0.0;
    if n == 2 {
        let ts = parameters(options.samples, PERIOD, &singular_ts);
        let points: Vec<[f64; 2]> = ts.iter().map(|&t| xy(&curve.position(t))).collect();
        let view = View::fit(&points, left);
        let _ = writeln!(out, r#"  <g id="curve">"#);
        polyline(&mut out, &view, &points, "black", true);
        if options.mark_cusps {
            for p in &singular {
                let (x, y) = view.map(xy(&curve.position(p.t)));
                let fill = if p.is_cusp { "red" } else { "orange" };
                let _ = writeln!(
                    out,
                    r#"  <circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{fill}"><title>t = {:.6}</title></circle>"#,
                    p.t
                );
            }
        }
        let _ = writeln!(out, "  </g>");
        left += PANEL;
    }

    if options.show_indicatrix {
        // A non-co-orientable field closes up only after two periods.
        let end = if frame.co_orientable() {
            PERIOD
        } else {
            2.0 * PERIOD
        };
        let extra: Vec<f64> = singular_ts
            .iter()
            .flat_map(|&t| [t, t + PERIOD])
            .filter(|&t| t < end)
            .collect();
        let ts = parameters(options.samples, end, &extra);
        let points: Vec<[f64; 2]> = ts.iter().map(|&t| xy(&frame.e(t))).collect();
        let view = View::fit(&[[-1.0, -1.0], [1.0, 1.0]], left);
        let circle: Vec<[f64; 2]> = (0..256)
            .map(|i| {
                let a = PERIOD * i as f64 / 256.0;
                [a.cos(), a.sin()]
            })
            .collect();
        let _ = writeln!(out, r#"  <g id="indicatrix">"#);
        polyline(&mut out, &view, &circle, "#bbbbbb", true);
        polyline(&mut out, &view, &points, "steelblue", true);
        if options.mark_cusps {
            for &t in &extra {
                let (x, y) = view.map(xy(&frame.e(t)));
                let _ = writeln!(
                    out,
                    r#"  <circle cx="{x:.3}" cy="{y:.3}" r="3" fill="red"/>"#
                );
            }
        }
        let _ = writeln!(out, "  </g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(name: &str, params: &[(&str, f64)]) -> ClosedCurve {
        let p: Vec<(String, f64)> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        ClosedCurve::family(name, &p).unwrap()
    }

    #[test]
    fn hypocycloid_marks_three_cusps() {
        let svg = render_svg(
            &family("hypocycloid", &[("m", 1.0)]),
            &RenderOptions::default(),
        )
        .unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches(r#"fill="red""#).count(), 3);
    }

    #[test]
    fn side_by_side_doubles_width() {
        let opts = RenderOptions {
            show_indicatrix: true,
            ..RenderOptions::default()
        };
        let svg = render_svg(&family("circle", &[]), &opts).unwrap();
        assert!(svg.contains(r#"width="800""#));
        assert!(svg.contains(r#"id="indicatrix""#));
    }

    #[test]
    fn space_curve_needs_indicatrix() {
        let c = ClosedCurve::fourier(vec![
            frontal_core::TrigPoly::new(0.0, vec![1.0], vec![0.0]),
            frontal_core::TrigPoly::new(0.0, vec![0.0], vec![1.0]),
            frontal_core::TrigPoly::new(0.0, vec![0.0, 0.3], vec![0.0]),
        ])
        .unwrap();
        assert!(matches!(
            render_svg(&c, &RenderOptions::default()),
            Err(Error::Validation(_))
        ));
        let opts = RenderOptions {
            show_indicatrix: true,
            ..RenderOptions::default()
        };
        assert!(render_svg(&c, &opts).is_ok());
    }
}
