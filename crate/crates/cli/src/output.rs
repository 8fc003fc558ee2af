//! CSV tables and the human-readable summary formats.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(usize),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => csv_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.iter().map(Cell::render).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn csv_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Three significant digits with the exponent glued on: `2.36-6`, `1.52+0`.
pub fn short_sci(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.2e}");
    let (mant, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < 0 {
        format!("{mant}{exp}")
    } else {
        format!("{mant}+{exp}")
    }
}

/// Error column with local orders and the overall estimate.
pub fn order_summary(title: &str, ns: &[usize], errors: &[f64], order: f64, ls_order: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{title}");
    let _ = writeln!(s, "  {:>6}  {:>9}  {:>6}", "N", "error", "local");
    for (i, (&n, &e)) in ns.iter().zip(errors).enumerate() {
        let local = if i == 0 {
            "-".to_string()
        } else {
            let o = (errors[i - 1] / e).ln() / (n as f64 / ns[i - 1] as f64).ln();
            format!("{o:.2}")
        };
        let _ = writeln!(s, "  {n:>6}  {:>9}  {local:>6}", short_sci(e));
    }
    let _ = writeln!(s, "  estimated order {order:.3} (least squares {ls_order:.3})");
    s
}
