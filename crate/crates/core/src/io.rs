//! Deterministic CSV output: header row, `.` decimals, LF line endings,
//! floats in `{:.16e}`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

/// A CSV field.
#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Text(String),
    Int(i64),
    Float(f64),
    Bool(bool),
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Float(x)
    }
}

impl From<usize> for Field {
    fn from(x: usize) -> Self {
        Field::Int(x as i64)
    }
}

impl From<bool> for Field {
    fn from(x: bool) -> Self {
        Field::Bool(x)
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn render(f: &Field, out: &mut String) {
    match f {
        Field::Text(s) if s.contains([',', '"', '\n']) => {
            out.push('"');
            out.push_str(&s.replace('"', "\"\""));
            out.push('"');
        }
        Field::Text(s) => out.push_str(s),
        Field::Int(i) => write!(out, "{i}").expect("string write"),
        Field::Float(x) => out.push_str(&format_float(*x)),
        Field::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
    }
}

/// Renders a table as CSV text.
pub fn to_csv(header: &[&str], rows: &[Vec<Field>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (i, f) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            render(f, &mut out);
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<Field>]) -> Result<()> {
    std::fs::write(path, to_csv(header, rows))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let rows = vec![
            vec![Field::from("1,1"), 0.5.into(), 3usize.into(), true.into()],
            vec![Field::from("0"), (-2.0).into(), 0usize.into(), false.into()],
        ];
        assert_eq!(
            to_csv(&["alpha", "x", "k", "ok"], &rows),
            "alpha,x,k,ok\n\"1,1\",5.0000000000000000e-1,3,true\n0,-2.0000000000000000e0,0,false\n"
        );
    }
}
