//! Static SVG plots. The only line that may differ between runs of the same
//! input is the version comment.

use std::fmt::Write;

use chenciner::classify::Raster;
use chenciner::Orbit;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 520.0;
const MARGIN: f64 = 64.0;
const LEGEND: f64 = 110.0;

/// Fill colour for regions 1 to 8.
pub const REGION_COLORS: [&str; 8] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf",
];
const UNCLASSIFIED: &str = "#d9d9d9";

/// Maps data coordinates into the plot box.
struct Frame {
    x: (f64, f64),
    y: (f64, f64),
    w: f64,
    h: f64,
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64), w: f64, h: f64) -> Self {
        Self { x, y, w, h }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * self.w
    }

    fn py(&self, y: f64) -> f64 {
        MARGIN + (self.y.1 - y) / (self.y.1 - self.y.0) * self.h
    }
}

fn header(out: &mut String, title: &str, width: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{HEIGHT:.0}" viewBox="0 0 {width:.0} {HEIGHT:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, "<!-- chenciner {} -->", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="14">{title}</text>"#,
        width / 2.0
    );
}

fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (x0, x1) = (MARGIN, MARGIN + f.w);
    let (y0, y1) = (MARGIN, MARGIN + f.h);
    let _ = writeln!(
        out,
        r#"<rect x="{x0:.1}" y="{y0:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        f.w, f.h
    );
    for (v, anchor, x) in [(f.x.0, "start", x0), (f.x.1, "end", x1)] {
        let _ = writeln!(
            out,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="{anchor}">{}</text>"#,
            y1 + 16.0,
            num(v)
        );
    }
    for (v, y) in [(f.y.0, y1), (f.y.1, y0 + 10.0)] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{y:.1}" text-anchor="end">{}</text>"#,
            x0 - 4.0,
            num(v)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xlabel}</text>"#,
        (x0 + x1) / 2.0,
        y1 + 36.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">{ylabel}</text>"#,
        x0 - 40.0,
        (y0 + y1) / 2.0,
        x0 - 40.0,
        (y0 + y1) / 2.0
    );
}

fn num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e-2 && v.abs() < 1e3 {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

fn polyline(out: &mut String, f: &Frame, pts: &[(f64, f64)], style: &str) {
    let coords: Vec<String> = pts
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" {style}/>"#,
        coords.join(" ")
    );
}

/// Region shading over the `(mu2, mu1)` plane with both boundary curves.
pub fn diagram(r: &Raster) -> String {
    let (w, h) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
    let f = Frame::new(r.window.mu2, r.window.mu1, w, h);
    let mut out = String::new();
    header(
        &mut out,
        &format!("Bifurcation diagram {}", r.diagram.diagram),
        WIDTH + LEGEND,
    );
    let _ = writeln!(
        out,
        r#"<defs><clipPath id="plot"><rect x="{MARGIN:.1}" y="{MARGIN:.1}" width="{w:.1}" height="{h:.1}"/></clipPath></defs>"#
    );
    let _ = writeln!(
        out,
        r#"<g clip-path="url(#plot)" shape-rendering="crispEdges">"#
    );
    let cw = w / r.nx.max(1) as f64;
    let ch = h / r.ny.max(1) as f64;
    for c in &r.cells {
        let fill = c
            .label
            .number()
            .map_or(UNCLASSIFIED, |n| REGION_COLORS[n as usize - 1]);
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
            f.px(c.mu2) - cw / 2.0,
            f.py(c.mu1) - ch / 2.0,
            cw + 0.05,
            ch + 0.05
        );
    }
    let zero_y = f.py(0.0);
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN:.1}" y1="{zero_y:.2}" x2="{:.1}" y2="{zero_y:.2}" stroke="black" stroke-dasharray="4 3"/>"#,
        MARGIN + w
    );
    polyline(
        &mut out,
        &f,
        &r.curves.b1,
        r#"stroke="black" stroke-width="2""#,
    );
    polyline(
        &mut out,
        &f,
        &r.curves.b2,
        r#"stroke="black" stroke-width="2" stroke-dasharray="8 4""#,
    );
    let _ = writeln!(out, "</g>");
    axes(&mut out, &f, "μ2", "μ1");

    let lx = MARGIN + w + 20.0;
    for (i, color) in REGION_COLORS.iter().enumerate() {
        let y = MARGIN + 20.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{lx:.1}" y="{y:.1}" width="14" height="14" fill="{color}" stroke="black"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}">region {}</text>"#,
            lx + 20.0,
            y + 11.0,
            i + 1
        );
    }
    let y = MARGIN + 180.0;
    let _ = writeln!(
        out,
        r#"<line x1="{lx:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black" stroke-width="2"/>"#,
        lx + 24.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}">B1</text>"#,
        lx + 30.0,
        y + 4.0
    );
    let y = y + 20.0;
    let _ = writeln!(
        out,
        r#"<line x1="{lx:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black" stroke-width="2" stroke-dasharray="8 4"/>"#,
        lx + 24.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}">B2</text>"#,
        lx + 30.0,
        y + 4.0
    );
    out.push_str("</svg>\n");
    out
}

/// Scatter of an orbit in the `(x, y)` plane, with the invariant circles drawn
/// dashed.
pub fn orbit(o: &Orbit, circles: &[f64]) -> String {
    let side = HEIGHT - 2.0 * MARGIN;
    let start = o.start.0.abs();
    let reach = o
        .points
        .iter()
        .map(|p| p.rho)
        .filter(|r| r.is_finite())
        .chain(circles.iter().copied())
        .fold(start, f64::max)
        .max(1e-12)
        * 1.1;
    let f = Frame::new((-reach, reach), (-reach, reach), side, side);
    let width = side + 2.0 * MARGIN;
    let mut out = String::new();
    header(
        &mut out,
        &format!("Orbit from rho1 = {}, {}", num(o.start.0), o.outcome),
        width,
    );
    let _ = writeln!(
        out,
        r#"<defs><clipPath id="plot"><rect x="{MARGIN:.1}" y="{MARGIN:.1}" width="{side:.1}" height="{side:.1}"/></clipPath></defs>"#
    );
    let _ = writeln!(out, r#"<g clip-path="url(#plot)">"#);
    let scale = side / (2.0 * reach);
    for r in circles {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="#377eb8" stroke-dasharray="5 3"/>"##,
            f.px(0.0),
            f.py(0.0),
            r * scale
        );
    }
    for p in o
        .points
        .iter()
        .filter(|p| p.x.is_finite() && p.y.is_finite())
    {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="1.2" fill="black"/>"#,
            f.px(p.x),
            f.py(p.y)
        );
    }
    let _ = writeln!(
        out,
        r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#e41a1c"/>"##,
        f.px(o.start.0 * o.start.1.cos()),
        f.py(o.start.0 * o.start.1.sin())
    );
    let _ = writeln!(out, "</g>");
    axes(&mut out, &f, "x", "y");
    out.push_str("</svg>\n");
    out
}
