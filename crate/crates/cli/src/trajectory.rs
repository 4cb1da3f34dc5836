//! Per-iteration CSV traces. Pair indices are 1-based; `0,0` marks the
//! initial record. `wall_ms` is written as zero unless timing is requested,
//! which keeps traces byte-identical across reruns.

use std::io::{Read, Write};

use tensor_jacobi_core::IterationRecord;

use crate::error::{CliError, Result};
use crate::format::fmt_f64;

pub const HEADER: [&str; 10] =
    ["k", "sweep", "i", "j", "theta", "f", "offdiag_sq", "lambda_norm", "skipped", "wall_ms"];

pub fn write_trajectory<W: Write>(out: W, records: &[IterationRecord], timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        let (i, j) = r.pair.map_or((0, 0), |(i, j)| (i + 1, j + 1));
        let wall = if timing { r.wall_ms } else { 0.0 };
        w.write_record([
            r.k.to_string(),
            r.sweep.to_string(),
            i.to_string(),
            j.to_string(),
            fmt_f64(r.theta),
            fmt_f64(r.f),
            fmt_f64(r.offdiag_sq),
            fmt_f64(r.lambda_norm),
            r.skipped.to_string(),
            fmt_f64(wall),
        ])?;
    }
    w.flush().map_err(|e| CliError::io("<trajectory>", e))?;
    Ok(())
}

pub fn read_trajectory<R: Read>(input: R) -> Result<Vec<IterationRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(HEADER) {
        return Err(CliError::parse(1, "unexpected trajectory header"));
    }
    let mut records = Vec::new();
    for (row, rec) in rd.records().enumerate() {
        let rec = rec?;
        let line = row + 2;
        let int = |k: usize| -> Result<usize> {
            rec[k].parse().map_err(|_| CliError::parse(line, format!("bad {}", HEADER[k])))
        };
        let float = |k: usize| -> Result<f64> {
            rec[k].parse().map_err(|_| CliError::parse(line, format!("bad {}", HEADER[k])))
        };
        let (i, j) = (int(2)?, int(3)?);
        let pair = match (i, j) {
            (0, 0) => None,
            (i, j) if i >= 1 && j > i => Some((i - 1, j - 1)),
            _ => return Err(CliError::parse(line, "bad pair")),
        };
        records.push(IterationRecord {
            k: int(0)?,
            sweep: int(1)?,
            pair,
            theta: float(4)?,
            f: float(5)?,
            offdiag_sq: float(6)?,
            lambda_norm: float(7)?,
            skipped: rec[8].parse().map_err(|_| CliError::parse(line, "bad skipped"))?,
            wall_ms: float(9)?,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(k: usize, pair: Option<(usize, usize)>) -> IterationRecord {
        IterationRecord {
            k,
            sweep: 0,
            pair,
            theta: 0.1 * k as f64,
            f: 1.0 / 3.0,
            offdiag_sq: 2.0 / 3.0,
            lambda_norm: 1e-17,
            skipped: k % 2 == 1,
            wall_ms: 12.5,
        }
    }

    #[test]
    fn round_trip() {
        let recs = vec![record(0, None), record(1, Some((0, 3))), record(2, Some((2, 3)))];
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &recs, true).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("k,sweep,i,j,theta,f,offdiag_sq,lambda_norm,skipped,wall_ms\n"));
        assert!(text.lines().nth(2).unwrap().starts_with("1,0,1,4,"));
        assert_eq!(read_trajectory(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn timing_is_opt_in() {
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &[record(0, None)], false).unwrap();
        assert_eq!(read_trajectory(buf.as_slice()).unwrap()[0].wall_ms, 0.0);
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_trajectory("a,b\n1,2\n".as_bytes()).is_err());
    }
}
