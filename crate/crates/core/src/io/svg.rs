use std::fmt::Write;

use super::numfmt::format_significant;
use crate::error::{Error, Result};
use crate::geometry::{construct_prefractal_with_cap, CantorParams, IntervalSet};

/// Default cap on the total number of bars across all rendered stages.
pub const DEFAULT_RECT_CAP: usize = 100_000;

const WIDTH: f64 = 800.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const ROW_PITCH: f64 = 56.0;
const BAR_HEIGHT: f64 = 14.0;
const SPAN: f64 = WIDTH - LEFT - RIGHT;

fn px(v: f64) -> String {
    format!("{v:.4}")
}

/// Renders stages `0..=max_stage` as rows of filled bars, with the scale
/// factor and the outermost gap annotated on stage 1.
pub fn render_stages_svg(params: &CantorParams, max_stage: u32) -> Result<String> {
    render_stages_svg_with_cap(params, max_stage, DEFAULT_RECT_CAP)
}

pub fn render_stages_svg_with_cap(
    params: &CantorParams,
    max_stage: u32,
    cap: usize,
) -> Result<String> {
    let n = u128::from(params.n().get());
    let mut total: u128 = 0;
    for s in 0..=max_stage {
        total = n
            .checked_pow(s)
            .and_then(|c| total.checked_add(c))
            .unwrap_or(u128::MAX);
    }
    if total > cap as u128 {
        return Err(Error::CapExceeded {
            requested: total,
            cap,
        });
    }
    let stages = (0..=max_stage)
        .map(|s| construct_prefractal_with_cap(&params.with_stage(s), cap))
        .collect::<Result<Vec<IntervalSet>>>()?;

    let height = TOP + ROW_PITCH * f64::from(max_stage + 1) + 10.0;
    let mut svg = String::new();
    let w = &mut svg;
    // Writing into a String cannot fail.
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        px(WIDTH),
        px(height),
        px(WIDTH),
        px(height)
    );
    let _ = writeln!(
        w,
        r#"<rect x="0" y="0" width="100%" height="100%" fill="white"/>"#
    );
    let _ = writeln!(
        w,
        r#"<text x="{}" y="22" font-family="serif" font-size="15">N = {}, γ = {}, ε = {}</text>"#,
        px(LEFT),
        params.n(),
        format_significant(params.gamma(), 6),
        format_significant(params.epsilon(), 6)
    );

    for (s, set) in stages.iter().enumerate() {
        let y = TOP + ROW_PITCH * s as f64 + 18.0;
        let _ = writeln!(w, r#"<g id="stage-{s}">"#);
        let _ = writeln!(
            w,
            r#"<text x="10" y="{}" font-family="serif" font-size="13">S = {s}</text>"#,
            px(y + BAR_HEIGHT - 2.0)
        );
        for iv in set.intervals() {
            let _ = writeln!(
                w,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="black"/>"#,
                px(LEFT + iv.start * SPAN),
                px(y),
                px(iv.length() * SPAN),
                px(BAR_HEIGHT)
            );
        }
        if s == 1 {
            annotate_stage_one(w, params, set, y);
        }
        let _ = writeln!(w, "</g>");
    }
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}

fn bracket(w: &mut String, x0: f64, x1: f64, y: f64, label: &str) {
    let _ = writeln!(
        w,
        r#"<path d="M {a} {lo} L {a} {y} L {b} {y} L {b} {lo}" stroke="gray" fill="none"/>"#,
        a = px(x0),
        b = px(x1),
        y = px(y),
        lo = px(y + 4.0)
    );
    let _ = writeln!(
        w,
        r#"<text x="{}" y="{}" font-family="serif" font-size="12" text-anchor="middle">{label}</text>"#,
        px((x0 + x1) / 2.0),
        px(y - 3.0)
    );
}

fn annotate_stage_one(w: &mut String, params: &CantorParams, set: &IntervalSet, y: f64) {
    let ivs = set.intervals();
    let first = ivs[0];
    bracket(
        w,
        LEFT + first.start * SPAN,
        LEFT + first.end * SPAN,
        y - 6.0,
        &format!("γ = {}", format_significant(params.gamma(), 6)),
    );
    if params.n().get() >= 4 {
        let second = ivs[1];
        bracket(
            w,
            LEFT + first.end * SPAN,
            LEFT + second.start * SPAN,
            y + BAR_HEIGHT + 12.0,
            &format!("ε = {}", format_significant(params.epsilon(), 6)),
        );
    }
}
