//! Self-contained SVG of a first return map, plus the sampled points.

use std::fmt::Write as _;

use fibnest_core::nest::{DomainSet, Interval};
use fibnest_core::numerics::{HpNum, MapSpec};
use rug::Float;

use crate::commands::csv_bytes;
use crate::error::CliError;

pub const SAMPLES_PER_DOMAIN: usize = 256;
const SIZE: f64 = 640.0;
const MARGIN: f64 = 48.0;

pub struct Branch {
    pub return_time: u64,
    pub central: bool,
    pub points: Vec<(Float, Float)>,
}

/// `R(x) = f^r(x)` at evenly spaced interior points of every domain.
pub fn sample_return_map(map: &MapSpec, set: &DomainSet) -> Result<Vec<Branch>, CliError> {
    set.domains
        .iter()
        .map(|d| {
            let points = d
                .interior_samples(SAMPLES_PER_DOMAIN, map.prec())
                .into_iter()
                .map(|x| {
                    let y = map.eval_n(&x, d.return_time)?;
                    Ok((x, y))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(Branch {
                return_time: d.return_time,
                central: d.contains_critical,
                points,
            })
        })
        .collect()
}

pub fn render_csv(branches: &[Branch]) -> Result<Vec<u8>, CliError> {
    let rows = branches.iter().enumerate().flat_map(|(i, b)| {
        b.points.iter().map(move |(x, y)| {
            vec![
                i.to_string(),
                b.return_time.to_string(),
                HpNum::new(x.clone()).to_hex(),
                HpNum::new(y.clone()).to_hex(),
                x.prec().to_string(),
            ]
        })
    });
    csv_bytes(&["domain", "return_time", "x", "r_x", "prec"], rows)
}

/// Position of `x` in `j`, with `0` and `1` at the endpoints.
fn unit(j: &Interval, x: &Float) -> f64 {
    let prec = x.prec().max(j.lo().prec());
    let num = Float::with_val(prec, x - j.lo());
    (num / j.width()).to_f64()
}

fn px(t: f64) -> f64 {
    MARGIN + t * (SIZE - 2.0 * MARGIN)
}

fn py(t: f64) -> f64 {
    SIZE - MARGIN - t * (SIZE - 2.0 * MARGIN)
}

pub fn render_svg(
    title: &str,
    j: &Interval,
    branches: &[Branch],
    marks: &[(String, Float)],
) -> String {
    let mut s = String::new();
    let (lo, hi) = (px(0.0), px(1.0));
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{title}</text>"#,
        SIZE / 2.0
    );
    let _ = writeln!(
        s,
        r#"<rect x="{lo:.3}" y="{lo:.3}" width="{w:.3}" height="{w:.3}" fill="none" stroke="black"/>"#,
        w = hi - lo
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="gray" stroke-dasharray="4 4"/>"#,
        px(0.0),
        py(0.0),
        px(1.0),
        py(1.0)
    );
    for (label, x) in marks {
        let t = unit(j, x);
        if !(0.0..=1.0).contains(&t) {
            continue;
        }
        let _ = writeln!(
            s,
            r#"<line x1="{x:.3}" y1="{top:.3}" x2="{x:.3}" y2="{bot:.3}" stroke="green" stroke-width="0.8"/><text x="{x:.3}" y="{ty:.3}" text-anchor="middle" fill="green">{label}</text>"#,
            x = px(t),
            top = py(1.0),
            bot = py(0.0),
            ty = py(0.0) + 16.0
        );
    }
    for b in branches {
        let colour = if b.central { "firebrick" } else { "steelblue" };
        let pts: Vec<String> = b
            .points
            .iter()
            .map(|(x, y)| format!("{:.3},{:.3}", px(unit(j, x)), py(unit(j, y))))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"><title>return time {}</title></polyline>"#,
            pts.join(" "),
            b.return_time
        );
    }
    s.push_str("</svg>\n");
    s
}
