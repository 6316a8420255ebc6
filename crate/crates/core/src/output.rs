//! CSV and SVG emission for trajectories.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::Result;
use crate::signal::InputSet;
use crate::sim::{tracking_errors, BoundSet, Trajectory};

/// Formats `x` with 12 significant digits, dropping trailing zeros.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.11e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Column names: `[k,] t, x1..xN, v1..vN, [z1..zN,] avg, err1..errN, [bound_s, bound_tracking]`.
pub fn csv_header(traj: &Trajectory, bounds: &BoundSet) -> Vec<String> {
    let n = traj.n();
    let mut cols = Vec::new();
    if traj.discrete {
        cols.push("k".to_string());
    }
    cols.push("t".into());
    for prefix in ["x", "v"] {
        cols.extend((1..=n).map(|i| format!("{prefix}{i}")));
    }
    if traj.states.first().is_some_and(|s| s.z.is_some()) {
        cols.extend((1..=n).map(|i| format!("z{i}")));
    }
    cols.push("avg".into());
    cols.extend((1..=n).map(|i| format!("err{i}")));
    if bounds.transient.is_some() {
        cols.push("bound_s".into());
    }
    if bounds.tracking.is_some() {
        cols.push("bound_tracking".into());
    }
    cols
}

/// Writes every `stride`-th grid point (the last point is always written).
/// A diverged run ends with a `# diverged ...` comment line.
pub fn write_csv<W: Write>(
    mut w: W,
    traj: &Trajectory,
    inputs: &InputSet,
    bounds: &BoundSet,
    stride: usize,
) -> Result<()> {
    writeln!(w, "{}", csv_header(traj, bounds).join(","))?;
    let (avg, errs) = tracking_errors(traj, inputs);
    let stride = stride.max(1);
    let last = traj.len().saturating_sub(1);
    let mut line = String::new();
    for k in (0..traj.len()).filter(|k| k % stride == 0 || *k == last) {
        line.clear();
        let s = &traj.states[k];
        if traj.discrete {
            write!(line, "{k},").unwrap();
        }
        line.push_str(&format_sig(traj.times[k]));
        let z = s.z.iter().flatten();
        for v in s.x.iter().chain(&s.v).chain(z).chain([&avg[k]]).chain(&errs[k]) {
            line.push(',');
            line.push_str(&format_sig(*v));
        }
        for curve in [&bounds.transient, &bounds.tracking].into_iter().flatten() {
            line.push(',');
            line.push_str(&format_sig(curve.values[k]));
        }
        writeln!(w, "{line}")?;
    }
    if let Some(d) = traj.divergence {
        writeln!(w, "# diverged at t = {}: component {} = {}", d.t, d.index, d.value)?;
    }
    Ok(())
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const MAX_POINTS: usize = 2000;

/// Line plot of `x^i(t)` (thin) and `avg(u(t))` (thick, black).
pub fn render_svg(traj: &Trajectory, inputs: &InputSet, title: &str) -> String {
    let (w, h, pad) = (800.0, 420.0, 50.0);
    let (avg, _) = tracking_errors(traj, inputs);
    let stride = (traj.len() / MAX_POINTS).max(1);
    let idx: Vec<usize> = (0..traj.len()).step_by(stride).collect();

    let t_max = traj.times.last().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
    let values = idx
        .iter()
        .flat_map(|&k| traj.states[k].x.iter().copied().chain([avg[k]]))
        .filter(|v| v.is_finite());
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, u), v| (l.min(v), u.max(v)));
    let (lo, hi) = if lo < hi { (lo, hi) } else { (lo - 1.0, lo + 1.0) };
    let sx = |t: f64| pad + (w - 2.0 * pad) * t / t_max;
    let sy = |v: f64| h - pad - (h - 2.0 * pad) * (v - lo) / (hi - lo);
    let path = |f: &dyn Fn(usize) -> f64| {
        let mut d = String::new();
        for (j, &k) in idx.iter().enumerate() {
            let cmd = if j == 0 { 'M' } else { 'L' };
            write!(d, "{cmd}{:.2},{:.2} ", sx(traj.times[k]), sy(f(k))).unwrap();
        }
        d
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        w / 2.0,
        escape(title)
    )
    .unwrap();
    writeln!(
        svg,
        r#"<path d="M{pad},{pad} L{pad},{y0} L{x1},{y0}" fill="none" stroke="black" stroke-width="1"/>"#,
        y0 = h - pad,
        x1 = w - pad
    )
    .unwrap();
    for (label, x, y, anchor) in [
        (format_sig(0.0), pad, h - pad + 16.0, "middle"),
        (format_sig(t_max), w - pad, h - pad + 16.0, "middle"),
        (format!("{hi:.3}"), pad - 4.0, pad + 4.0, "end"),
        (format!("{lo:.3}"), pad - 4.0, h - pad, "end"),
    ] {
        writeln!(
            svg,
            r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{label}</text>"#
        )
        .unwrap();
    }
    for i in 0..traj.n() {
        writeln!(
            svg,
            r#"<path d="{}" fill="none" stroke="{}" stroke-width="1"/>"#,
            path(&|k| traj.states[k].x[i]),
            PALETTE[i % PALETTE.len()]
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<path d="{}" fill="none" stroke="black" stroke-width="3"/>"#,
        path(&|k| avg[k])
    )
    .unwrap();
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
