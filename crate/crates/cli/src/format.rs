//! Plain-text tensor and orthogonal-matrix files.
//!
//! ```text
//! symtensor v1 d=3 n=2 m=1
//! 1.0000000000000000e0 0.0000000000000000e0
//! ...
//! ```
//!
//! After the header come `m` blocks of `n^d` row-major values (last index
//! fastest). Layout within the body is free; the writer puts one `n`-row per
//! line and a blank line between blocks.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use tensor_jacobi_core::{SymTensor, TensorSet};

use crate::error::{CliError, Result};

/// Relative symmetry tolerance applied when loading a tensor.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// 17 significant digits, enough to round-trip every `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_tensor_set(set: &TensorSet) -> String {
    let (d, n) = (set.order(), set.dim());
    let mut out = format!("symtensor v1 d={d} n={n} m={}\n", set.len());
    for (b, t) in set.iter().enumerate() {
        if b > 0 {
            out.push('\n');
        }
        for row in t.data().chunks(n) {
            let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn parse_tensor_set(text: &str) -> Result<TensorSet> {
    let (header, body) = split_header(text)?;
    let fields = parse_header(header, "symtensor", &["d", "n", "m"])?;
    let (d, n, m) = (fields[0], fields[1], fields[2]);
    if !(2..=4).contains(&d) {
        return Err(CliError::parse(1, format!("unsupported order d={d}")));
    }
    if n < 2 || m == 0 {
        return Err(CliError::parse(1, "need n >= 2 and m >= 1"));
    }
    let per = n
        .checked_pow(d as u32)
        .ok_or_else(|| CliError::parse(1, "tensor too large"))?;
    let values = parse_values(body, per * m)?;
    let tensors = values
        .chunks(per)
        .map(|chunk| SymTensor::from_data(d, n, chunk.to_vec(), SYMMETRY_TOL))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(TensorSet::new(tensors)?)
}

pub fn load_tensor_set(path: &Path) -> Result<TensorSet> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_tensor_set(&text)
}

pub fn save_tensor_set(path: &Path, set: &TensorSet) -> Result<()> {
    fs::write(path, format_tensor_set(set)).map_err(|e| CliError::io(path, e))
}

/// `orthomat v1 n=<n>` followed by `n` rows of `n` values.
pub fn format_orthomat(q: &DMatrix<f64>) -> String {
    let n = q.nrows();
    let mut out = format!("orthomat v1 n={n}\n");
    for r in 0..n {
        let line: Vec<String> = (0..n).map(|c| fmt_f64(q[(r, c)])).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn parse_orthomat(text: &str) -> Result<DMatrix<f64>> {
    let (header, body) = split_header(text)?;
    let n = parse_header(header, "orthomat", &["n"])?[0];
    if n == 0 {
        return Err(CliError::parse(1, "need n >= 1"));
    }
    let values = parse_values(body, n * n)?;
    Ok(DMatrix::from_row_slice(n, n, &values))
}

pub fn load_orthomat(path: &Path) -> Result<DMatrix<f64>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_orthomat(&text)
}

pub fn save_orthomat(path: &Path, q: &DMatrix<f64>) -> Result<()> {
    fs::write(path, format_orthomat(q)).map_err(|e| CliError::io(path, e))
}

fn split_header(text: &str) -> Result<(&str, &str)> {
    let text = text.trim_start_matches('\u{feff}');
    match text.split_once('\n') {
        Some((h, rest)) => Ok((h.trim_end_matches('\r'), rest)),
        None if !text.trim().is_empty() => Ok((text, "")),
        None => Err(CliError::parse(1, "empty file")),
    }
}

/// Checks `<magic> v1 key=value ...` and returns the values of `keys` in order.
fn parse_header(line: &str, magic: &str, keys: &[&str]) -> Result<Vec<usize>> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some(magic) {
        return Err(CliError::parse(1, format!("expected '{magic}' header")));
    }
    if tokens.next() != Some("v1") {
        return Err(CliError::parse(1, "unsupported format version"));
    }
    let mut values = vec![None; keys.len()];
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| CliError::parse(1, format!("malformed header field '{tok}'")))?;
        let slot = keys
            .iter()
            .position(|&key| key == k)
            .ok_or_else(|| CliError::parse(1, format!("unknown header field '{k}'")))?;
        let parsed = v
            .parse()
            .map_err(|_| CliError::parse(1, format!("bad value for '{k}': '{v}'")))?;
        if values[slot].replace(parsed).is_some() {
            return Err(CliError::parse(1, format!("duplicate header field '{k}'")));
        }
    }
    keys.iter()
        .zip(values)
        .map(|(k, v)| v.ok_or_else(|| CliError::parse(1, format!("missing header field '{k}'"))))
        .collect()
}

fn parse_values(body: &str, expected: usize) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(expected);
    for (idx, line) in body.lines().enumerate() {
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| CliError::parse(idx + 2, format!("not a number: '{tok}'")))?;
            if !v.is_finite() {
                return Err(CliError::parse(idx + 2, format!("non-finite value '{tok}'")));
            }
            values.push(v);
        }
    }
    if values.len() != expected {
        return Err(CliError::parse(
            1,
            format!("expected {expected} values, found {}", values.len()),
        ));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_width_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1e-300, f64::MAX, 0.0, 5e-324] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn matrix_body_parses() {
        let set = parse_tensor_set("symtensor v1 d=2 n=2 m=1\n1 0.5\n0.5 2\n").unwrap();
        assert_eq!(set.tensors()[0].get(&[0, 1]), 0.5);
        assert_eq!(set.tensors()[0].get(&[1, 1]), 2.0);
    }

    #[test]
    fn header_errors() {
        for bad in [
            "",
            "tensor v1 d=2 n=2 m=1\n1 0 0 1",
            "symtensor v2 d=2 n=2 m=1\n1 0 0 1",
            "symtensor v1 d=5 n=2 m=1\n",
            "symtensor v1 d=2 n=2\n1 0 0 1",
            "symtensor v1 d=2 n=2 m=1 m=1\n1 0 0 1",
            "symtensor v1 d=2 n=2 m=1\n1 0 0",
            "symtensor v1 d=2 n=2 m=1\n1 0 x 1",
            "symtensor v1 d=2 n=2 m=1\n1 0 0 NaN",
        ] {
            assert!(parse_tensor_set(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let err = parse_tensor_set("symtensor v1 d=2 n=2 m=1\n1 0.5\n0.4 2\n").unwrap_err();
        assert!(matches!(err, CliError::Core(_)));
        let ok = parse_tensor_set("symtensor v1 d=2 n=2 m=1\n1 0.5\n0.5000000000001 2\n").unwrap();
        assert_eq!(ok.tensors()[0].max_asymmetry(), 0.0);
    }

    #[test]
    fn orthomat_round_trip() {
        let q = DMatrix::from_row_slice(2, 2, &[0.6, -0.8, 0.8, 0.6]);
        assert_eq!(parse_orthomat(&format_orthomat(&q)).unwrap(), q);
        assert!(parse_orthomat("orthomat v1 n=2\n1 0 0").is_err());
    }
}
