use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Row;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 7] = ["axis", "axis_value", "metric", "value", "std_error", "trials", "seed"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Failed points are written with value `NaN`.
pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Output(e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in rows {
        w.write_record([
            r.axis.clone(),
            r.axis_value.to_string(),
            r.metric.clone(),
            r.value.unwrap_or(f64::NAN).to_string(),
            opt(r.std_error),
            opt(r.trials),
            opt(r.seed),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Output(e.to_string()))
}

pub fn write_json<W: Write>(rows: &[Row], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Output(e.to_string()))?;
    writeln!(out).map_err(|e| Error::Output(e.to_string()))
}

/// Parse a table written by [`write_csv`]. Error messages are not part of
/// the CSV, so `error` is always `None`.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<Row>> {
    let mut rd = csv::Reader::from_reader(input);
    let bad = |line: u64, what: &str| Error::Config(format!("csv line {line}: {what}"));
    let header = rd.headers().map_err(|e| Error::Config(e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Config(format!("unexpected csv header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| Error::Config(e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let float = |i: usize| rec[i].parse::<f64>().map_err(|_| bad(line, &format!("bad number in `{}`", CSV_HEADER[i])));
        let maybe = |i: usize| -> Result<Option<f64>> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                float(i).map(Some)
            }
        };
        let maybe_int = |i: usize| -> Result<Option<u64>> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                rec[i]
                    .parse()
                    .map(Some)
                    .map_err(|_| bad(line, &format!("bad integer in `{}`", CSV_HEADER[i])))
            }
        };
        let value = float(3)?;
        rows.push(Row {
            axis: rec[0].to_string(),
            axis_value: float(1)?,
            metric: rec[2].to_string(),
            value: (!value.is_nan()).then_some(value),
            std_error: maybe(4)?,
            trials: maybe_int(5)?,
            seed: maybe_int(6)?,
            error: None,
        });
    }
    Ok(rows)
}

/// Write `rows` to `path`, or to stdout when `path` is `None`.
pub fn emit(rows: &[Row], format: Format, path: Option<&Path>) -> Result<()> {
    let write = |out: &mut dyn Write| match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    };
    match path {
        Some(p) => {
            let io = |source| Error::Io {
                path: p.to_path_buf(),
                source,
            };
            let mut file = std::io::BufWriter::new(std::fs::File::create(p).map_err(io)?);
            write(&mut file)?;
            file.flush().map_err(io)
        }
        None => write(&mut std::io::stdout().lock()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows() -> Vec<Row> {
        vec![
            Row {
                axis: "snr_d_db".into(),
                axis_value: -10.0,
                metric: "sop[N=5]".into(),
                value: Some(0.123_456_789_012_345_6),
                std_error: None,
                trials: None,
                seed: None,
                error: None,
            },
            Row {
                axis: "snr_d_db".into(),
                axis_value: 0.5,
                metric: "mc_sop".into(),
                value: Some(1e-7),
                std_error: Some(3.2e-8),
                trials: Some(100_000),
                seed: Some(42),
                error: None,
            },
            Row {
                axis: "snr_d_db".into(),
                axis_value: 2.0,
                metric: "sop_asymptotic".into(),
                value: None,
                std_error: None,
                trials: None,
                seed: None,
                error: None,
            },
        ]
    }

    #[test]
    fn csv_round_trip() {
        let mut buf = Vec::new();
        write_csv(&rows(), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("axis,axis_value,metric,value,std_error,trials,seed\n"));
        assert!(text.contains(",NaN,"));
        assert_eq!(read_csv(&buf[..]).unwrap(), rows());
    }

    #[test]
    fn json_uses_null_for_missing() {
        let mut buf = Vec::new();
        write_json(&rows(), &mut buf).unwrap();
        let back: Vec<Row> = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, rows());
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
