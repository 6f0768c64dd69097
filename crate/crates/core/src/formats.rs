//! Text formats shared by the CLI and the harness.
//!
//! * Matrices: CSV without header, one matrix row per line, comma separated,
//!   `.` as decimal mark. Values are written with Rust's shortest
//!   round-trip formatting, so writing and re-reading is lossless.
//! * Eigenvalue tables: header `eigenvalue`, one value per line, ascending.
//! * Law tables: header `x,pdf,cdf`.
//! * Grids: `LO:HI:STEP`.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::laws::ReferenceLaw;
use crate::spectral::SpectrumESD;

/// Upper bound on the number of points a grid may expand to.
pub const MAX_GRID_POINTS: usize = 1_000_000;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_value(field: &str, line: usize) -> Result<f64> {
    let field = field.trim();
    let v: f64 = field
        .parse()
        .map_err(|_| parse_error(line, format!("not a number: {field:?}")))?;
    if !v.is_finite() {
        return Err(parse_error(line, format!("non-finite value: {field:?}")));
    }
    Ok(v)
}

/// Parses a header-less numeric CSV into a dense matrix. Blank lines are
/// ignored; every other line must have the same number of fields.
pub fn parse_matrix_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut values = Vec::new();
    let mut ncols = None;
    let mut nrows = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        let before = values.len();
        for field in raw.split(',') {
            values.push(parse_value(field, line)?);
        }
        let width = values.len() - before;
        match ncols {
            None => ncols = Some(width),
            Some(c) if c != width => {
                return Err(parse_error(
                    line,
                    format!("expected {c} fields, found {width}"),
                ))
            }
            _ => {}
        }
        nrows += 1;
    }
    let ncols = ncols.ok_or_else(|| parse_error(0, "empty matrix"))?;
    Ok(DMatrix::from_row_slice(nrows, ncols, &values))
}

pub fn format_matrix_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{v:?}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

/// Eigenvalue table with a header line.
pub fn format_eigenvalues_csv(f: &SpectrumESD) -> String {
    let mut out = String::from("eigenvalue\n");
    out.push_str(&format_eigenvalue_lines(f));
    out
}

/// Bare eigenvalue list: exactly `d` lines, ascending.
pub fn format_eigenvalue_lines(f: &SpectrumESD) -> String {
    let mut out = String::new();
    for v in f.eigenvalues() {
        writeln!(out, "{v:?}").expect("writing to a String");
    }
    out
}

/// Reads an eigenvalue list, with or without the `eigenvalue` header.
pub fn parse_eigenvalues_csv(text: &str) -> Result<SpectrumESD> {
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let raw = raw.trim();
        if raw.is_empty() || (idx == 0 && raw == "eigenvalue") {
            continue;
        }
        values.push(parse_value(raw, idx + 1)?);
    }
    SpectrumESD::new(values).map_err(|e| parse_error(0, e.to_string()))
}

/// Expands `LO:HI:STEP` into `LO, LO + STEP, …` up to and including `HI`
/// (with a relative slack of 1e−9 steps for rounding).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    if parts.len() != 3 {
        return Err(parse_error(1, "grid must look like LO:HI:STEP"));
    }
    let lo = parse_value(parts[0], 1)?;
    let hi = parse_value(parts[1], 1)?;
    let step = parse_value(parts[2], 1)?;
    if step <= 0.0 {
        return Err(parse_error(1, "grid step must be positive"));
    }
    if hi < lo {
        return Err(parse_error(1, "grid upper bound is below the lower bound"));
    }
    let span = (hi - lo) / step;
    if !span.is_finite() || span + 1.0 > MAX_GRID_POINTS as f64 {
        return Err(parse_error(
            1,
            format!("grid would exceed {MAX_GRID_POINTS} points"),
        ));
    }
    let count = (span + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| lo + k as f64 * step).collect())
}

/// `x,pdf,cdf` rows over `grid`. Where the density is undefined (the
/// Marčenko-Pastur atom at 0 for `y ≥ 1`) the pdf column holds `NaN`.
pub fn format_law_table(law: &ReferenceLaw, grid: &[f64]) -> String {
    let mut out = String::from("x,pdf,cdf\n");
    for &x in grid {
        let pdf = law.pdf(x).unwrap_or(f64::NAN);
        writeln!(out, "{x:?},{pdf:?},{:?}", law.cdf(x)).expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_rectangular_csv() {
        let m = parse_matrix_csv("1,2,3\n4.5, -6e-3 ,7\n\n").unwrap();
        assert_eq!(m.shape(), (2, 3));
        assert_eq!(m[(1, 1)], -6e-3);
    }

    #[test]
    fn crlf_is_accepted() {
        let m = parse_matrix_csv("1,2\r\n3,4\r\n").unwrap();
        assert_eq!(m[(1, 0)], 3.0);
    }

    #[test]
    fn rejects_ragged_and_garbage() {
        assert!(matches!(
            parse_matrix_csv("1,2\n3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_matrix_csv("1,x\n").is_err());
        assert!(parse_matrix_csv("1,NaN\n").is_err());
        assert!(parse_matrix_csv("1,inf\n").is_err());
        assert!(parse_matrix_csv("").is_err());
        assert!(parse_matrix_csv("1,,2").is_err());
    }

    #[test]
    fn eigenvalue_files() {
        let f = SpectrumESD::new(vec![2.0, -1.0, 0.5]).unwrap();
        let with_header = format_eigenvalues_csv(&f);
        assert_eq!(with_header, "eigenvalue\n-1.0\n0.5\n2.0\n");
        assert_eq!(format_eigenvalue_lines(&f).lines().count(), 3);
        assert_eq!(parse_eigenvalues_csv(&with_header).unwrap(), f);
        assert_eq!(parse_eigenvalues_csv("-1\n0.5\n2").unwrap(), f);
        assert!(parse_eigenvalues_csv("eigenvalue\n").is_err());
    }

    #[test]
    fn grid_expansion() {
        let g = parse_grid("-2:2:0.5").unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], -2.0);
        assert_eq!(g[8], 2.0);
        assert_eq!(parse_grid("0:0.3:0.1").unwrap().len(), 4);
        assert_eq!(parse_grid("1:1:1").unwrap(), vec![1.0]);
    }

    #[test]
    fn grid_errors() {
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1:-1").is_err());
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1e300:1e-300").is_err());
    }

    #[test]
    fn law_table_marks_undefined_density() {
        let mp = ReferenceLaw::marchenko_pastur(2.0).unwrap();
        let table = format_law_table(&mp, &[0.0, 1.0]);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines[0], "x,pdf,cdf");
        assert_eq!(lines[1], "0.0,NaN,0.5");
        assert_eq!(lines.len(), 3);
    }

    proptest! {
        #[test]
        fn matrix_csv_round_trip(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(-1e6f64..1e6, 36)) {
            let m = DMatrix::from_fn(rows, cols, |i, j| seed[i * 6 + j] * 1e-3f64.powi((i + j) as i32));
            let back = parse_matrix_csv(&format_matrix_csv(&m)).unwrap();
            prop_assert_eq!(back, m);
        }

        #[test]
        fn parsers_never_panic(s in "\\PC*") {
            let _ = parse_matrix_csv(&s);
            let _ = parse_grid(&s);
            let _ = parse_eigenvalues_csv(&s);
        }
    }
}
