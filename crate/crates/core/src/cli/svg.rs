//! Static SVG plots of a run: estimated residual against the square root of
//! the number of degrees of freedom, and the final hp-mesh.

use std::fmt::Write as _;

use crate::adapt::RunLog;
use crate::mesh::HpMesh;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <title>{title}</title>\n\
         <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <line x1=\"{MARGIN}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{MARGIN}\" y1=\"{MARGIN}\" x2=\"{MARGIN}\" y2=\"{y0}\" stroke=\"black\"/>\n",
        y0 = HEIGHT - MARGIN,
        x1 = WIDTH - MARGIN,
    )
}

fn scale(v: f64, lo: f64, hi: f64, out_lo: f64, out_hi: f64) -> f64 {
    if hi > lo {
        out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo)
    } else {
        0.5 * (out_lo + out_hi)
    }
}

/// The estimate on each space, taken from the last record before the space
/// changed, plotted as `log10(total)` against `sqrt(n_dof)`.
pub fn residual_points(log: &RunLog) -> Vec<(f64, f64)> {
    let mut points: Vec<(usize, f64)> = Vec::new();
    for r in log.iter() {
        match points.last_mut() {
            Some(last) if last.0 == r.n_dof => last.1 = r.total,
            _ => points.push((r.n_dof, r.total)),
        }
    }
    points
        .into_iter()
        .filter(|(_, t)| *t > 0.0 && t.is_finite())
        .map(|(n, t)| ((n as f64).sqrt(), t.log10()))
        .collect()
}

pub fn residual_svg(log: &RunLog) -> String {
    let pts = residual_points(log);
    let mut s = header("estimated residual");
    let (xmin, xmax) = bounds(pts.iter().map(|p| p.0));
    let (ymin, ymax) = bounds(pts.iter().map(|p| p.1));
    let coords: Vec<String> = pts
        .iter()
        .map(|&(x, y)| {
            format!(
                "{:.2},{:.2}",
                scale(x, xmin, xmax, MARGIN, WIDTH - MARGIN),
                scale(y, ymin, ymax, HEIGHT - MARGIN, MARGIN)
            )
        })
        .collect();
    let _ = writeln!(
        s,
        "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>",
        coords.join(" ")
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">sqrt(n_dof): {xmin:.2} .. {xmax:.2}</text>",
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        "<text x=\"15\" y=\"{}\" transform=\"rotate(-90 15 {})\" text-anchor=\"middle\">log10(estimate): {ymin:.2} .. {ymax:.2}</text>",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    s.push_str("</svg>\n");
    s
}

/// One bar per element spanning its extent, with height proportional to its
/// polynomial degree.
pub fn mesh_svg(mesh: &HpMesh) -> String {
    let mut s = header("hp-mesh");
    let pmax = mesh.degrees().iter().copied().max().unwrap_or(1) as f64;
    for j in 0..mesh.num_elements() {
        let (xl, xr) = mesh.element(j);
        let x0 = scale(xl, mesh.a(), mesh.b(), MARGIN, WIDTH - MARGIN);
        let x1 = scale(xr, mesh.a(), mesh.b(), MARGIN, WIDTH - MARGIN);
        let top = scale(mesh.degree(j) as f64, 0.0, pmax, HEIGHT - MARGIN, MARGIN);
        let _ = writeln!(
            s,
            "<rect x=\"{x0:.3}\" y=\"{top:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"lightsteelblue\" stroke=\"black\" stroke-width=\"0.5\"/>",
            x1 - x0,
            HEIGHT - MARGIN - top
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">x in [{}, {}], max degree {pmax}</text>",
        WIDTH / 2.0,
        HEIGHT - 15.0,
        mesh.a(),
        mesh.b()
    );
    s.push_str("</svg>\n");
    s
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}
