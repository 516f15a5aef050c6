use std::fmt::Write as _;

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    /// Exact integers too large for `i64`, kept as decimal text.
    BigInt(String),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::BigInt(s) | Cell::Text(s) => s.clone(),
            Cell::Float(v) => sig6(*v),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::BigInt(s) | Cell::Text(s) => Value::String(s.clone()),
            Cell::Float(v) => sig6(*v)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }

    fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Six significant digits, plain notation where it stays short.
pub fn sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-4..15).contains(&exp) {
        return format!("{v:.5e}");
    }
    let decimals = (5 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // rounding can carry into a new leading digit (9.999995 -> 10.00000)
    let digits = s.chars().filter(char::is_ascii_digit).count();
    let lead_zeros = s
        .trim_start_matches('-')
        .chars()
        .take_while(|c| *c == '0' || *c == '.')
        .filter(char::is_ascii_digit)
        .count();
    if digits - lead_zeros > 6 && decimals > 0 {
        format!("{v:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    /// Passes when `|value - expected| <= tolerance`; `value` stores the
    /// deviation.
    pub fn near(name: impl Into<String>, got: f64, expected: f64, tolerance: f64) -> Self {
        Self::below(name, (got - expected).abs(), tolerance)
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: ok,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub title: String,
    pub spec: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
    /// Column indices used for the SVG polyline.
    pub plot: Option<(usize, usize)>,
}

impl Report {
    pub fn new(title: impl Into<String>, spec: Value, columns: Vec<&'static str>) -> Self {
        Self {
            title: title.into(),
            spec,
            columns,
            rows: Vec::new(),
            checks: Vec::new(),
            plot: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if !self.columns.is_empty() {
            out.push_str(&self.columns.join(","));
            out.push('\n');
            for row in &self.rows {
                let cells: Vec<String> = row.iter().map(|c| csv_escape(&c.render())).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        if !self.checks.is_empty() {
            if !out.is_empty() {
                out.push('\n');
            }
            out.push_str("check,value,tolerance,pass\n");
            for c in &self.checks {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    csv_escape(&c.name),
                    sig6(c.value),
                    sig6(c.tolerance),
                    c.pass
                );
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let data: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), v.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut obj = Map::new();
                obj.insert("name".into(), Value::String(c.name.clone()));
                obj.insert("value".into(), Cell::Float(c.value).to_json());
                obj.insert("tolerance".into(), Cell::Float(c.tolerance).to_json());
                obj.insert("pass".into(), Value::Bool(c.pass));
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("spec".into(), self.spec.clone());
        top.insert("data".into(), Value::Array(data));
        top.insert("checks".into(), Value::Array(checks));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &rendered {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: Vec<&str>| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = format!("# {}\n", self.title);
        if !self.columns.is_empty() {
            out.push_str(&line(self.columns.clone()));
            out.push('\n');
        }
        for row in &rendered {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{} {}  ({} <= {})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                sig6(c.value),
                sig6(c.tolerance)
            );
        }
        out
    }

    /// Single polyline over the `plot` columns, or `None` when the report
    /// has no plottable series.
    pub fn to_svg(&self) -> Option<String> {
        let (xi, yi) = self.plot?;
        let points: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter_map(|r| Some((r[xi].as_f64()?, r[yi].as_f64()?)))
            .collect();
        if points.is_empty() {
            return None;
        }
        let (w, h, m) = (640.0, 400.0, 50.0);
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in &points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x1 == x0 {
            x1 = x0 + 1.0;
        }
        if y1 == y0 {
            y1 = y0 + 1.0;
        }
        let sx = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
        let sy = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<path d="M{m} {m} V{b} H{r}" fill="none" stroke="black"/>"#,
            b = h - m,
            r = w - m
        );
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
        for &(x, y) in &points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="steelblue"/>"#,
                sx(x),
                sy(y)
            );
        }
        let label = |x: f64, y: f64, anchor: &str, text: String| {
            format!(r#"<text x="{x:.2}" y="{y:.2}" font-size="12" text-anchor="{anchor}">{text}</text>"#)
        };
        let _ = writeln!(svg, "{}", label(w / 2.0, 20.0, "middle", xml_escape(&self.title)));
        let _ = writeln!(svg, "{}", label(w / 2.0, h - 10.0, "middle", self.columns[xi].to_string()));
        let _ = writeln!(svg, "{}", label(m, h - m + 15.0, "middle", sig6(x0)));
        let _ = writeln!(svg, "{}", label(w - m, h - m + 15.0, "middle", sig6(x1)));
        let _ = writeln!(svg, "{}", label(m - 5.0, h - m, "end", sig6(y0)));
        let _ = writeln!(svg, "{}", label(m - 5.0, m + 4.0, "end", sig6(y1)));
        let _ = writeln!(svg, "{}", label(12.0, h / 2.0, "start", self.columns[yi].to_string()));
        svg.push_str("</svg>\n");
        Some(svg)
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
