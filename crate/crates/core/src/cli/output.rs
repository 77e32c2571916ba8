//! CSV tables with `#` metadata and minimal SVG line charts.

use std::fmt::Write as _;
use std::path::Path;

use super::config::RunConfig;
use crate::error::Result;
use crate::units::UnitSystem;

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Flag(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Flag(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `# key = value` lines after the common header.
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.into(), value.to_string()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match &r[i] {
                    Cell::Num(v) => *v,
                    Cell::Int(v) => *v as f64,
                    _ => f64::NAN,
                })
                .collect(),
        )
    }

    pub fn render(&self, cfg: &RunConfig, units: &UnitSystem) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# tunneltime {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "# command = {}", cfg.command);
        for (k, v) in cfg.effective() {
            let _ = writeln!(s, "# config {k} = {v}");
        }
        let _ = writeln!(s, "# constant hbar_ev_s = {:e}", units.hbar_ev_s);
        let _ = writeln!(s, "# constant hbarc_ev_a = {:e}", units.hbarc_ev_a);
        let _ = writeln!(s, "# constant electron_rest_ev = {:e}", units.electron_rest_ev);
        let _ = writeln!(s, "# constant c_a_per_s = {:e}", units.c_a_per_s);
        for (k, v) in &self.notes {
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.iter().map(Cell::render).collect::<Vec<_>>().join(","));
        }
        s
    }

    pub fn write(&self, dir: &Path, cfg: &RunConfig, units: &UnitSystem) -> Result<std::path::PathBuf> {
        let path = dir.join(format!("{}.csv", self.name));
        std::fs::write(&path, self.render(cfg, units))?;
        Ok(path)
    }
}

/// A named polyline for [`svg_chart`].
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// Static line chart with axes, tick labels and a legend.
pub fn svg_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (w, h) = (640.0, 420.0);
    let (l, r, t, b) = (80.0, 170.0, 40.0, 60.0);
    let pts = series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + y0.abs().max(1.0) * 1e-3;
    }
    let px = |x: f64| l + (x - x0) / (x1 - x0) * (w - l - r);
    let py = |y: f64| h - b - (y - y0) / (y1 - y0) * (h - t - b);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, (w - r + l) / 2.0, esc(title));
    let _ = writeln!(
        s,
        r#"<path d="M{l} {t} L{l} {} L{} {}" fill="none" stroke="black"/>"#,
        h - b,
        w - r,
        h - b
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{fx:.3e}</text>"#, px(fx), h - b + 16.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{fy:.3e}</text>"#, l - 6.0, py(fy) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (w - r + l) / 2.0, h - 18.0, esc(x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        (h - b + t) / 2.0,
        esc(y_label)
    );
    let mut legend = 0;
    for (i, se) in series.iter().enumerate() {
        let col = PALETTE[i % PALETTE.len()];
        let d: Vec<String> = se
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{col}" stroke-width="1.5"/>"#, d.join(" "));
        if se.label.is_empty() {
            continue;
        }
        let ly = t + 16.0 * legend as f64;
        legend += 1;
        let _ = writeln!(s, r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{col}" stroke-width="2"/>"#, w - r + 10.0, w - r + 30.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, w - r + 34.0, ly + 4.0, esc(&se.label));
    }
    s.push_str("</svg>\n");
    s
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::Command;

    #[test]
    fn header_then_rows() {
        let cfg = RunConfig::parse(Command::Times, "v0 = 10", &[]).unwrap();
        cfg.f64_req("v0").unwrap();
        let mut t = Table::new("x", &["a", "b"]);
        t.push(vec![1.5.into(), true.into()]);
        let out = t.render(&cfg, &UnitSystem::ELECTRON);
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("# tunneltime "));
        assert!(lines.contains(&"# config v0 = 1e1"));
        assert_eq!(lines[lines.len() - 2], "a,b");
        assert_eq!(lines[lines.len() - 1], "1.5e0,true");
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let s = svg_chart("t", "x", "y", &[Series { label: "a<b".into(), points: vec![(0.0, 1.0), (1.0, 2.0)] }]);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a&lt;b"));
        assert_eq!(s.matches("<polyline").count(), 1);
    }
}
