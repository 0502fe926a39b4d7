use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use goising::replay::{GameMeta, GameVerdict, StrengthSeries, TransitionEvent};
use goising::energy::ParameterSet;

/// One line of the per-move series, shared by the CSV and JSON encodings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub move_number: u32,
    pub color: char,
    pub coord: String,
    #[serde(rename = "S_black")]
    pub s_black: f64,
    #[serde(rename = "S_white")]
    pub s_white: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub transition: u8,
}

pub fn rows(series: &StrengthSeries, events: &[TransitionEvent]) -> Vec<Row> {
    series
        .records
        .iter()
        .map(|r| Row {
            move_number: r.move_number,
            color: r.color.letter(),
            coord: r.coord(),
            s_black: r.s_black,
            s_white: r.s_white,
            h: r.h,
            transition: u8::from(events.iter().any(|e| e.move_number == r.move_number)),
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct GameReport<'a> {
    pub source: String,
    pub meta: &'a GameMeta,
    pub params: &'a ParameterSet,
    pub verdict: Option<&'a GameVerdict>,
    pub transitions: &'a [TransitionEvent],
    pub series: &'a [Row],
}

pub fn csv_bytes(rows: &[Row]) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        writer.write_record(["move_number", "color", "coord", "S_black", "S_white", "H", "transition"])?;
    }
    for row in rows {
        writer.serialize(row)?;
    }
    writer.into_inner().context("flushing csv")
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;
const TICK_EVERY: u32 = 50;

/// Static line chart: black strength in blue, white strength in red.
pub fn svg_string(rows: &[Row], title: &str) -> String {
    let last_move = rows.last().map_or(1, |r| r.move_number.max(1));
    let values = rows.iter().flat_map(|r| [r.s_black, r.s_white]);
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let (lo, hi) = if lo.is_finite() && hi > lo { (lo, hi) } else { (lo.min(0.0).min(hi), lo.max(hi) + 1.0) };
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 1.0) };
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let x = |m: u32| MARGIN + plot_w * f64::from(m) / f64::from(last_move);
    let y = |v: f64| HEIGHT - MARGIN - plot_h * (v - lo) / (hi - lo);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(s, r#"<path d="M{x0},{y0} L{x0},{y1} L{x1},{y1}" fill="none" stroke="black"/>"#);
    let mut tick = 0;
    while tick <= last_move {
        let tx = format!("{:.2}", x(tick));
        let _ = writeln!(s, r#"<line x1="{tx}" y1="{y1}" x2="{tx}" y2="{}" stroke="black"/>"#, y1 + 5.0);
        let _ = writeln!(s, r#"<text x="{tx}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{tick}</text>"#, y1 + 18.0);
        tick += TICK_EVERY;
    }
    for v in [lo, hi] {
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{v:.3e}</text>"#, x0 - 4.0, y(v) + 4.0);
    }
    for (stroke, pick) in [("blue", (|r: &Row| r.s_black) as fn(&Row) -> f64), ("red", |r: &Row| r.s_white)] {
        let points: Vec<String> = rows.iter().map(|r| format!("{:.2},{:.2}", x(r.move_number), y(pick(r)))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{stroke}" stroke-width="1.5" points="{}"/>"#, points.join(" "));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
