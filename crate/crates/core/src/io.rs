//! Text formats for point sets and generator matrices.
//!
//! Point sets: a header `q <q> v <v>`, then one normalized point per line as
//! `v` digits, optionally followed by ` x<m>` for multiplicity `m > 1`.
//! Matrices: a header `q <q> k <k> n <n>`, then `k` lines of `n` digits.

use std::fmt::Write as _;

use crate::analysis::PointMultiset;
use crate::code::GeneratorMatrix;
use crate::error::{Error, Result};
use crate::geom::Space;
use crate::gf::{Elem, Field};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses `key value` pairs of a header line in the given order.
fn header(line: &str, keys: &[&str]) -> Result<Vec<u64>> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 2 * keys.len() {
        return Err(perr(1, format!("expected header `{}`", keys.iter().map(|k| format!("{k} <{k}>")).collect::<Vec<_>>().join(" "))));
    }
    keys.iter()
        .enumerate()
        .map(|(i, k)| {
            if toks[2 * i] != *k {
                return Err(perr(1, format!("expected `{k}`, found `{}`", toks[2 * i])));
            }
            toks[2 * i + 1]
                .parse()
                .map_err(|_| perr(1, format!("bad value for {k}: `{}`", toks[2 * i + 1])))
        })
        .collect()
}

fn digits(s: &str, len: usize, q: usize, line: usize) -> Result<Vec<Elem>> {
    if s.len() != len {
        return Err(perr(line, format!("expected {len} symbols, found {}", s.len())));
    }
    s.bytes()
        .map(|b| match b {
            b'0'..=b'9' if ((b - b'0') as usize) < q => Ok(b - b'0'),
            _ => Err(perr(line, format!("bad symbol `{}` for q = {q}", b as char))),
        })
        .collect()
}

fn field_for(q: u64, field: Option<&Field>) -> Result<Field> {
    match field {
        Some(f) if f.q() as u64 == q => Ok(f.clone()),
        Some(f) => Err(Error::ParameterMismatch(format!("file has q = {q}, field has q = {}", f.q()))),
        None => Field::with_order(q),
    }
}

fn check_digit_range(q: u64) -> Result<()> {
    if q > 10 {
        return Err(perr(1, format!("q = {q} does not fit single-digit symbols")));
    }
    Ok(())
}

/// Reads a point set; `field` overrides the default modulus.
pub fn parse_point_set(text: &str, field: Option<&Field>) -> Result<PointMultiset> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, head) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let h = header(head, &["q", "v"])?;
    let (q, v) = (h[0], h[1] as usize);
    check_digit_range(q)?;
    let f = field_for(q, field)?;
    let s = Space::new(&f, v)?;
    let mut m = PointMultiset::new(&s);
    for (i, l) in lines {
        let no = i + 1;
        let mut toks = l.split_whitespace();
        let x = digits(toks.next().unwrap(), v, f.q(), no)?;
        let mult = match toks.next() {
            None => 1,
            Some(t) => t
                .strip_prefix('x')
                .and_then(|c| c.parse::<u32>().ok())
                .filter(|&c| c > 0)
                .ok_or_else(|| perr(no, format!("bad multiplicity `{t}`")))?,
        };
        if toks.next().is_some() {
            return Err(perr(no, "trailing tokens"));
        }
        if x.iter().all(|&c| c == 0) {
            return Err(perr(no, "zero vector"));
        }
        if s.normalize(&x)? != x {
            return Err(perr(no, "point is not normalized"));
        }
        m.add(s.id_of_vec(&x).unwrap(), mult);
    }
    Ok(m)
}

/// Writes a point set in ascending id order.
pub fn format_point_set(m: &PointMultiset) -> String {
    let mut out = format!("q {} v {}\n", m.q(), m.v());
    for (id, c) in m.iter() {
        for &e in m.space().point(id) {
            out.push(char::from(b'0' + e));
        }
        if c > 1 {
            let _ = write!(out, " x{c}");
        }
        out.push('\n');
    }
    out
}

/// Reads a generator matrix; `field` overrides the default modulus.
pub fn parse_matrix(text: &str, field: Option<&Field>) -> Result<GeneratorMatrix> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, head) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let h = header(head, &["q", "k", "n"])?;
    let (q, k, n) = (h[0], h[1] as usize, h[2] as usize);
    check_digit_range(q)?;
    let f = field_for(q, field)?;
    let mut rows = Vec::with_capacity(k);
    for (i, l) in lines {
        if rows.len() == k {
            return Err(perr(i + 1, format!("more than {k} rows")));
        }
        rows.push(digits(l.trim(), n, f.q(), i + 1)?);
    }
    if rows.len() != k {
        return Err(perr(k + 1, format!("expected {k} rows, found {}", rows.len())));
    }
    GeneratorMatrix::new(&f, rows)
}

pub fn format_matrix(g: &GeneratorMatrix) -> String {
    let mut out = format!("q {} k {} n {}\n", g.field().q(), g.k(), g.n());
    for r in g.rows() {
        out.extend(r.iter().map(|&e| char::from(b'0' + e)));
        out.push('\n');
    }
    out
}
