//! Static SVG cross-sections of fans in rank 2 and 3.
//!
//! Every ray `r` is drawn at `r / ℓ(r)`, where `ℓ` is the facet sum of the
//! support cone. In rank 3 these points lie on the plane `ℓ = 1`, which is
//! drawn in an orthonormal basis of `ℓ⊥`; in rank 2 each cone is a wedge
//! from the origin. Floats appear only here, after the exact data is fixed.

use std::fmt::Write as _;
use std::path::Path;

use num_traits::ToPrimitive;
use torifan_core::linalg::Int;
use torifan_core::{Cone, Error, Fan, LatticeVector};

use crate::error::CliResult;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 56.0;

fn f(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn to_f64(x: &Int) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Plane coordinates of the slice points.
struct Slice {
    ell: Vec<f64>,
    basis: Option<[Vec<f64>; 2]>,
}

impl Slice {
    fn new(ell: &LatticeVector) -> Self {
        let ell: Vec<f64> = ell.coords().iter().map(to_f64).collect();
        if ell.len() != 3 {
            return Slice { ell, basis: None };
        }
        let n = normalize(&ell);
        // the standard basis vector farthest from the normal starts the frame
        let e = (0..3)
            .map(|k| {
                let mut e = vec![0.0; 3];
                e[k] = 1.0;
                let t = dot(&e, &n);
                e.iter().zip(&n).map(|(x, y)| x - t * y).collect::<Vec<f64>>()
            })
            .fold(None::<Vec<f64>>, |best, v| match best {
                Some(b) if dot(&b, &b) >= dot(&v, &v) => Some(b),
                _ => Some(v),
            })
            .expect("three candidates");
        let e1 = normalize(&e);
        let e2 = vec![
            n[1] * e1[2] - n[2] * e1[1],
            n[2] * e1[0] - n[0] * e1[2],
            n[0] * e1[1] - n[1] * e1[0],
        ];
        Slice {
            ell,
            basis: Some([e1, e2]),
        }
    }

    fn point(&self, r: &LatticeVector) -> (f64, f64) {
        let x: Vec<f64> = r.coords().iter().map(to_f64).collect();
        let h = dot(&x, &self.ell);
        let p: Vec<f64> = x.iter().map(|c| c / h).collect();
        match &self.basis {
            Some([e1, e2]) => (dot(&p, e1), dot(&p, e2)),
            None => (p[0], p[1]),
        }
    }
}

/// The SVG document for `fan`; sliced by the facet sum of its support, or of
/// the cone spanned by its rays when no support is recorded.
pub fn render_svg(fan: &Fan) -> CliResult<String> {
    let d = fan.ambient_dim();
    if d != 2 && d != 3 {
        return Err(Error::UnsupportedRank(d).into());
    }
    let rays = fan.rays();
    let support = match fan.support() {
        Some(s) => s.clone(),
        None => Cone::from_generators(fan.side(), d, &rays)?,
    };
    let slice = Slice::new(&support.facet_sum());
    let pts: Vec<(f64, f64)> = rays.iter().map(|r| slice.point(r)).collect();

    let mut all = pts.clone();
    if d == 2 {
        all.push((0.0, 0.0));
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let screen = |(x, y): (f64, f64)| (SIZE / 2.0 + (x - cx) * scale, SIZE / 2.0 - (y - cy) * scale);
    let origin = screen((0.0, 0.0));
    let centre = {
        let n = pts.len() as f64;
        screen((pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n))
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        SIZE
    );
    let _ = writeln!(out, r#"<rect width="{0}" height="{0}" fill="white"/>"#, SIZE);
    let _ = writeln!(out, r##"<g fill="#dbe7f3" stroke="#1f3b57" stroke-width="1.5" stroke-linejoin="round">"##);
    for c in fan.maximal_cones() {
        let mut corners: Vec<(f64, f64)> = c
            .rays()
            .iter()
            .map(|r| screen(pts[rays.binary_search(r).expect("fan ray")]))
            .collect();
        if d == 2 {
            corners.insert(0, origin);
        } else {
            let n = corners.len() as f64;
            let (mx, my) = (corners.iter().map(|p| p.0).sum::<f64>() / n, corners.iter().map(|p| p.1).sum::<f64>() / n);
            corners.sort_by(|a, b| (a.1 - my).atan2(a.0 - mx).total_cmp(&(b.1 - my).atan2(b.0 - mx)));
        }
        let path: Vec<String> = corners.iter().map(|&(x, y)| format!("{},{}", f(x), f(y))).collect();
        let _ = writeln!(out, r#"<polygon points="{}"/>"#, path.join(" "));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g fill="#1f3b57" font-family="monospace" font-size="12" text-anchor="middle">"##);
    for (r, &p) in rays.iter().zip(&pts) {
        let (x, y) = screen(p);
        let (dx, dy) = (x - centre.0, y - centre.1);
        let len = (dx * dx + dy * dy).sqrt();
        let (ox, oy) = if len < 1e-9 { (0.0, -14.0) } else { (18.0 * dx / len, 18.0 * dy / len + 4.0) };
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="3"/>"#, f(x), f(y));
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, f(x + ox), f(y + oy), r);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

pub fn write_svg(fan: &Fan, path: &Path) -> CliResult<()> {
    std::fs::write(path, render_svg(fan)?)?;
    Ok(())
}
