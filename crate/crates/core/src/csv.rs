//! Byte-stable CSV output for sweep results.

use std::io::Write;

use crate::error::Result;

/// One cell; reals are rendered with 17 significant digits so a re-run of the
/// same computation produces byte-identical files.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Real(v) => format_real(*v),
            Cell::Text(s) => {
                if s.contains(',') || s.contains('"') || s.contains('\n') {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
        }
    }
}

pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.16e}")
    }
}

/// Write header + rows with `\n` line endings. Rows must match the header
/// width; violations are a programming error and panic in debug.
pub fn emit_csv<W: Write>(out: &mut W, header: &[&str], rows: &[Vec<Cell>]) -> Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len(), "csv row width mismatch");
        let line: Vec<String> = row.iter().map(Cell::render).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_is_byte_stable() {
        let header = ["a", "b", "c"];
        let rows = vec![
            vec![Cell::Int(-3), Cell::Real(1.0 / 3.0), Cell::Text("plain".into())],
            vec![Cell::UInt(7), Cell::Real(-0.0), Cell::Text("with,comma".into())],
        ];
        let mut one = Vec::new();
        let mut two = Vec::new();
        emit_csv(&mut one, &header, &rows).unwrap();
        emit_csv(&mut two, &header, &rows).unwrap();
        assert_eq!(one, two);
        let text = String::from_utf8(one).unwrap();
        assert!(text.starts_with("a,b,c\n"));
        assert!(text.contains("\"with,comma\""));
    }

    #[test]
    fn reals_roundtrip_through_17_digits() {
        for v in [1.0 / 3.0, std::f64::consts::PI, 1e-300, -2.5e17, 0.1 + 0.2] {
            let s = format_real(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "value {v} rendered {s}");
        }
        assert_eq!(format_real(f64::INFINITY), "inf");
        assert_eq!(format_real(f64::NAN), "nan");
    }

    #[test]
    fn quotes_are_escaped() {
        let mut out = Vec::new();
        emit_csv(&mut out, &["x"], &[vec![Cell::Text("say \"hi\"".into())]]).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "x\n\"say \"\"hi\"\"\"\n");
    }
}
