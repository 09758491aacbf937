//! Minimal self-contained SVG figures.
//!
//! Coordinates are printed with two decimals and labels with fixed
//! precision, so identical inputs give identical bytes.

use std::fmt::Write;

use tcct_core::sim::{HeatmapCell, PowerCurve, PowerHeatmap};

const TCCT_COLOR: &str = "#d62728";
const CCT_COLOR: &str = "#000000";

fn header(out: &mut String, width: u32, height: u32) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r##"<rect width="{width}" height="{height}" fill="#ffffff"/>"##
    );
}

fn text(out: &mut String, x: f64, y: f64, anchor: &str, s: &str) {
    let _ = writeln!(
        out,
        r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}">{s}</text>"#
    );
}

/// Power against `c` for TCCT (red) and CCT (black).
pub fn power_curve(curve: &PowerCurve) -> String {
    let (w, h) = (560.0, 400.0);
    let (left, right, top, bottom) = (60.0, 130.0, 30.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;
    let c_lo = curve.c.first().copied().unwrap_or(0.0);
    let c_hi = curve.c.last().copied().unwrap_or(1.0);
    let span = if c_hi > c_lo { c_hi - c_lo } else { 1.0 };
    let sx = |c: f64| left + (c - c_lo) / span * pw;
    let sy = |p: f64| top + (1.0 - p.clamp(0.0, 1.0)) * ph;

    let mut out = String::new();
    header(&mut out, w as u32, h as u32);
    let _ = writeln!(
        out,
        r##"<rect x="{left:.2}" y="{top:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="#444444"/>"##
    );
    for k in 0..=4 {
        let p = k as f64 / 4.0;
        let y = sy(p);
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{left:.2}" y2="{y:.2}" stroke="#444444"/>"##,
            left - 5.0
        );
        text(&mut out, left - 8.0, y + 4.0, "end", &format!("{p:.2}"));
    }
    let step = curve.c.len().div_ceil(10).max(1);
    for &c in curve.c.iter().step_by(step) {
        let x = sx(c);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#444444"/>"##,
            top + ph,
            top + ph + 5.0
        );
        text(&mut out, x, top + ph + 18.0, "middle", &format!("{c:.2}"));
    }
    text(&mut out, left + pw / 2.0, h - 10.0, "middle", "c");
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">power</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );

    for (values, color) in [(&curve.cct, CCT_COLOR), (&curve.tcct, TCCT_COLOR)] {
        let points: Vec<String> = curve
            .c
            .iter()
            .zip(values.iter())
            .map(|(&c, &p)| format!("{:.2},{:.2}", sx(c), sy(p)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            points.join(" ")
        );
        for (&c, &p) in curve.c.iter().zip(values.iter()) {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                sx(c),
                sy(p)
            );
        }
    }

    let lx = left + pw + 15.0;
    for (i, (label, color)) in [("TCCT", TCCT_COLOR), ("CCT", CCT_COLOR)]
        .into_iter()
        .enumerate()
    {
        let y = top + 10.0 + 20.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 25.0
        );
        text(&mut out, lx + 32.0, y + 4.0, "start", label);
    }
    out.push_str("</svg>\n");
    out
}

/// Sequential blue scale on `[0, 1]`.
fn color(v: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 3] = [
        (0.0, [247.0, 251.0, 255.0]),
        (0.5, [107.0, 174.0, 214.0]),
        (1.0, [8.0, 48.0, 107.0]),
    ];
    let v = if v.is_finite() {
        v.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (lo, hi) = if v <= 0.5 {
        (STOPS[0], STOPS[1])
    } else {
        (STOPS[1], STOPS[2])
    };
    let t = (v - lo.0) / (hi.0 - lo.0);
    let ch = |k: usize| (lo.1[k] + t * (hi.1[k] - lo.1[k])).round() as u8;
    format!("#{:02x}{:02x}{:02x}", ch(0), ch(1), ch(2))
}

type Panel = (&'static str, fn(&HeatmapCell) -> f64);

/// Three panels over the Beta grid: TCCT power, CCT power, and the gain.
pub fn power_heatmap(map: &PowerHeatmap) -> String {
    let n1 = map.shape1.len().max(1);
    let n2 = map.shape2.len().max(1);
    let cell = (240.0 / n1.max(n2) as f64).max(4.0);
    let (pw, ph) = (cell * n1 as f64, cell * n2 as f64);
    let (left, top, gap) = (50.0, 40.0, 50.0);
    let legend_w = 80.0;
    let w = left + 3.0 * pw + 2.0 * gap + 30.0 + legend_w;
    let h = top + ph + 55.0;

    let mut out = String::new();
    header(&mut out, w.ceil() as u32, h.ceil() as u32);
    let panels: [Panel; 3] = [
        ("TCCT power", |c| c.tcct),
        ("CCT power", |c| c.cct),
        ("gain (TCCT - CCT)", |c| c.gain),
    ];
    for (p_idx, (title, value)) in panels.iter().enumerate() {
        let x0 = left + p_idx as f64 * (pw + gap);
        text(&mut out, x0 + pw / 2.0, top - 12.0, "middle", title);
        for i in 0..map.shape1.len() {
            for j in 0..map.shape2.len() {
                let k = i * map.shape2.len() + j;
                // shape1 runs left to right, shape2 bottom to top
                let x = x0 + i as f64 * cell;
                let y = top + (n2 - 1 - j) as f64 * cell;
                let _ = writeln!(
                    out,
                    r#"<rect x="{x:.2}" y="{y:.2}" width="{cell:.2}" height="{cell:.2}" fill="{}"/>"#,
                    color(value(&map.cells[k]))
                );
            }
        }
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{top:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="#444444"/>"##
        );
        if let (Some(a0), Some(a1)) = (map.shape1.first(), map.shape1.last()) {
            text(&mut out, x0, top + ph + 15.0, "start", &format!("{a0:.1}"));
            text(
                &mut out,
                x0 + pw,
                top + ph + 15.0,
                "end",
                &format!("{a1:.1}"),
            );
        }
        if let (Some(b0), Some(b1)) = (map.shape2.first(), map.shape2.last()) {
            text(&mut out, x0 - 4.0, top + ph, "end", &format!("{b0:.1}"));
            text(&mut out, x0 - 4.0, top + 10.0, "end", &format!("{b1:.1}"));
        }
        text(&mut out, x0 + pw / 2.0, top + ph + 35.0, "middle", "shape1");
    }
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">shape2</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );

    let lx = left + 3.0 * pw + 2.0 * gap;
    let steps = 10;
    let lh = ph / steps as f64;
    for s in 0..steps {
        let v = (s as f64 + 0.5) / steps as f64;
        let y = top + (steps - 1 - s) as f64 * lh;
        let _ = writeln!(
            out,
            r#"<rect x="{lx:.2}" y="{y:.2}" width="20" height="{lh:.2}" fill="{}"/>"#,
            color(v)
        );
    }
    let _ = writeln!(
        out,
        r##"<rect x="{lx:.2}" y="{top:.2}" width="20" height="{ph:.2}" fill="none" stroke="#444444"/>"##
    );
    for v in [0.0, 0.5, 1.0] {
        text(
            &mut out,
            lx + 26.0,
            top + (1.0 - v) * ph + 4.0,
            "start",
            &format!("{v:.1}"),
        );
    }
    out.push_str("</svg>\n");
    out
}
