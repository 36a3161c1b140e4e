//! CSV and JSON serialization of result rows.
//!
//! Numbers are written in scientific notation with 17 significant digits,
//! which round-trips every finite double exactly.

use std::io::{self, Write};

use crate::sweep::ResultRow;

pub const HEADER: [&str; 12] = [
    "swept_value",
    "mode",
    "intensity",
    "reduced_i",
    "i1",
    "i2",
    "i3",
    "i4",
    "i5",
    "phase_difference",
    "residual",
    "oracle_dev",
];

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

/// Numeric cells of a row after `swept_value` and `mode`, `None` where empty.
fn cells(row: &ResultRow) -> [Option<f64>; 10] {
    let mut out = [None; 10];
    if let Some(v) = &row.values {
        out[0] = Some(v.intensity);
        out[1] = Some(v.reduced_i);
        for (slot, t) in out[2..7].iter_mut().zip(v.terms) {
            *slot = Some(t);
        }
        out[7] = Some(v.phase_difference);
        out[8] = Some(v.residual);
    }
    out[9] = row.oracle_dev;
    out
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        let mut record = vec![
            format_number(row.swept_value),
            row.mode.as_str().to_string(),
        ];
        record.extend(
            cells(row)
                .iter()
                .map(|c| c.map(format_number).unwrap_or_default()),
        );
        w.write_record(&record)?;
    }
    w.flush()
}

pub fn write_json<W: Write>(rows: &[ResultRow], mut out: W) -> io::Result<()> {
    writeln!(out, "[")?;
    for (i, row) in rows.iter().enumerate() {
        let mut fields = vec![
            format!("\"swept_value\": {}", format_number(row.swept_value)),
            format!("\"mode\": \"{}\"", row.mode.as_str()),
        ];
        for (name, cell) in HEADER[2..].iter().zip(cells(row)) {
            let v = cell.map(format_number).unwrap_or_else(|| "null".into());
            fields.push(format!("\"{name}\": {v}"));
        }
        if let Some(e) = &row.error {
            let quoted = serde_json::to_string(e).map_err(io::Error::other)?;
            fields.push(format!("\"error\": {quoted}"));
        }
        let sep = if i + 1 < rows.len() { "," } else { "" };
        writeln!(out, "  {{{}}}{sep}", fields.join(", "))?;
    }
    writeln!(out, "]")
}

pub fn write_rows<W: Write>(rows: &[ResultRow], format: Format, out: W) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    }
}
