//! Text formats `symtensor v1`, `frame v1` and the decomposition file.
//!
//! Blank lines and lines starting with `#` are skipped. Line numbers in
//! parse errors are 1-based.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::decomposition::Decomposition;
use crate::error::{FradecoError, Result};
use crate::funtf::Frame;
use crate::tensor::{basis_len, exponent_rank, SymTensor};

/// Shortest round-trip decimal, switching to exponent form for very large or
/// very small magnitudes.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> FradecoError {
    FradecoError::Parse {
        line,
        message: message.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("not a number: '{tok}'")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value '{tok}'")));
    }
    Ok(v)
}

/// Parses `<kind> a=<x> b=<y>` and returns `(x, y)`.
fn parse_header(line_no: usize, line: &str, kind: &str, keys: [&str; 2]) -> Result<(usize, usize)> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != kind {
        return Err(parse_err(
            line_no,
            format!("expected header '{kind} {}=.. {}=..', got '{line}'", keys[0], keys[1]),
        ));
    }
    let mut out = [0usize; 2];
    for (slot, (key, t)) in keys.iter().zip(&toks[1..]).enumerate() {
        let value = t
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| parse_err(line_no, format!("expected '{key}=<int>', got '{t}'")))?;
        out[slot] = value
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad integer in '{t}'")))?;
    }
    Ok((out[0], out[1]))
}

pub fn write_symtensor(t: &SymTensor) -> String {
    let mut s = format!("symtensor n={} d={}\n", t.n(), t.d());
    for (a, c) in t.exponents().iter().zip(t.coords()) {
        if *c != 0.0 {
            let exps: Vec<String> = a.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(s, "{} {}", exps.join(" "), fmt_f64(*c));
        }
    }
    s
}

pub fn parse_symtensor(text: &str) -> Result<SymTensor> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or_else(|| parse_err(1, "empty symtensor file"))?;
    let (n, d) = parse_header(line_no, header, "symtensor", ["n", "d"])?;
    if n == 0 {
        return Err(parse_err(line_no, "n must be positive"));
    }
    let mut coords = vec![0.0; basis_len(n, d)];
    let mut seen = vec![false; coords.len()];
    for (line_no, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != n + 1 {
            return Err(parse_err(
                line_no,
                format!("expected {n} exponents and a value, got {} fields", toks.len()),
            ));
        }
        let a = toks[..n]
            .iter()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| parse_err(line_no, format!("bad exponent '{t}'")))
            })
            .collect::<Result<Vec<u32>>>()?;
        if a.iter().map(|&e| e as usize).sum::<usize>() != d {
            return Err(parse_err(line_no, format!("exponents {a:?} do not sum to d = {d}")));
        }
        let k = exponent_rank(&a);
        if seen[k] {
            return Err(parse_err(line_no, format!("exponent {a:?} listed twice")));
        }
        seen[k] = true;
        coords[k] = parse_f64(toks[n], line_no)?;
    }
    SymTensor::new(n, d, coords)
}

pub fn write_frame(v: &DMatrix<f64>) -> String {
    let mut s = format!("frame n={} r={}\n", v.nrows(), v.ncols());
    for row in v.row_iter() {
        let vals: Vec<String> = row.iter().map(|x| fmt_f64(*x)).collect();
        let _ = writeln!(s, "{}", vals.join(" "));
    }
    s
}

/// Reads a frame from the content lines, leaving the rest of the iterator.
fn parse_frame_lines<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<DMatrix<f64>> {
    let (line_no, header) = lines.next().ok_or_else(|| parse_err(1, "empty frame file"))?;
    let (n, r) = parse_header(line_no, header, "frame", ["n", "r"])?;
    let mut v = DMatrix::zeros(n, r);
    for i in 0..n {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| parse_err(line_no + i + 1, format!("expected {n} rows, found {i}")))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != r {
            return Err(parse_err(line_no, format!("expected {r} values, got {}", toks.len())));
        }
        for (j, t) in toks.iter().enumerate() {
            v[(i, j)] = parse_f64(t, line_no)?;
        }
    }
    Ok(v)
}

pub fn parse_frame(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = content_lines(text);
    let v = parse_frame_lines(&mut lines)?;
    if let Some((line_no, _)) = lines.next() {
        return Err(parse_err(line_no, "trailing content after frame"));
    }
    Ok(v)
}

pub fn write_decomposition(dec: &Decomposition) -> String {
    let mut s = write_frame(dec.frame.matrix());
    let w: Vec<String> = dec.weights.iter().map(|x| fmt_f64(*x)).collect();
    let _ = writeln!(s, "weights: {}", w.join(" "));
    let _ = writeln!(s, "residual: {}", fmt_f64(dec.fit_residual));
    s
}

pub fn parse_decomposition(text: &str) -> Result<Decomposition> {
    let end = text.lines().count() + 1;
    let mut lines = content_lines(text);
    let v = parse_frame_lines(&mut lines)?;
    let r = v.ncols();
    let (line_no, line) = lines.next().ok_or_else(|| parse_err(end, "missing 'weights:' line"))?;
    let rest = line
        .strip_prefix("weights:")
        .ok_or_else(|| parse_err(line_no, "expected 'weights: ...'"))?;
    let weights = rest
        .split_whitespace()
        .map(|t| parse_f64(t, line_no))
        .collect::<Result<Vec<f64>>>()?;
    if weights.len() != r {
        return Err(parse_err(line_no, format!("expected {r} weights, got {}", weights.len())));
    }
    let (line_no, line) = lines.next().ok_or_else(|| parse_err(end, "missing 'residual:' line"))?;
    let fit_residual = line
        .strip_prefix("residual:")
        .map(str::trim)
        .ok_or_else(|| parse_err(line_no, "expected 'residual: ...'"))
        .and_then(|t| parse_f64(t, line_no))?;
    if let Some((line_no, _)) = lines.next() {
        return Err(parse_err(line_no, "trailing content after residual"));
    }
    Ok(Decomposition {
        frame: Frame::new(v),
        weights,
        fit_residual,
    })
}

pub fn read_symtensor(path: &Path) -> Result<SymTensor> {
    parse_symtensor(&read(path)?)
}

pub fn read_frame(path: &Path) -> Result<DMatrix<f64>> {
    parse_frame(&read(path)?)
}

pub fn read_decomposition(path: &Path) -> Result<Decomposition> {
    parse_decomposition(&read(path)?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| FradecoError::Io(format!("{}: {e}", path.display())))
}
