//! CSV and JSON writers. Floats are written with 17 significant digits in
//! scientific notation so that reruns give byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use qwalk::engine::Row;
use qwalk::trotter::SweepRow;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// `t,p0,...,p{N-1}`, one line per recorded row.
pub fn distribution_csv<W: Write>(rows: &[Row], out: W) -> CliResult<()> {
    let n = rows.first().map_or(0, |r| r.dist.len());
    let mut w = csv::Writer::from_writer(out);
    let header = std::iter::once("t".to_string()).chain((0..n).map(|x| format!("p{x}")));
    w.write_record(header)?;
    for row in rows {
        let fields = std::iter::once(row.time)
            .chain(row.dist.as_slice().iter().copied())
            .map(fmt_float);
        w.write_record(fields)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `j,error,oracle_calls`.
pub fn sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["j", "error", "oracle_calls"])?;
    for r in rows {
        w.write_record([
            r.j.to_string(),
            fmt_float(r.error),
            r.oracle_calls.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qwalk::ProbDist;

    #[test]
    fn csv_layout() {
        let rows = vec![
            Row {
                time: 0.0,
                dist: ProbDist::point_mass(2, 0),
                state: None,
            },
            Row {
                time: 1.0,
                dist: ProbDist::uniform(2),
                state: None,
            },
        ];
        let mut buf = Vec::new();
        distribution_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,p0,p1");
        assert_eq!(
            lines[2],
            "1.0000000000000000e0,5.0000000000000000e-1,5.0000000000000000e-1"
        );
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 6.02e23, -2.5e-300, 0.0] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }
}
