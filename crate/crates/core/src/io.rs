//! Point-set CSV files and command-line literals.
//!
//! Disk points use columns `re,im`, ball vectors `x,y,z`, table elements
//! `index`, and integers `value`.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::carrier::Gyrogroup;
use crate::error::{GyroError, Result};
use crate::instances::{EinsteinVec, MobiusPoint};

/// Row encoding of a single element.
pub trait PointRecord: Sized {
    const HEADER: &'static [&'static str];

    fn to_record(&self) -> Vec<String>;

    /// Parses a row. Carrier-specific domain checks happen in [`read_points`].
    fn from_record(fields: &[&str]) -> Result<Self>;
}

fn field<T: std::str::FromStr>(fields: &[&str], i: usize, what: &str) -> Result<T> {
    let raw = fields
        .get(i)
        .ok_or_else(|| GyroError::Format(format!("missing column `{what}`")))?;
    raw.trim()
        .parse()
        .map_err(|_| GyroError::Format(format!("cannot parse `{raw}` as {what}")))
}

fn check_width(fields: &[&str], n: usize) -> Result<()> {
    if fields.len() != n {
        return Err(GyroError::Format(format!(
            "expected {n} columns, found {}",
            fields.len()
        )));
    }
    Ok(())
}

// `{:?}` on f64 prints the shortest round-tripping representation
fn num(x: f64) -> String {
    format!("{x:?}")
}

impl PointRecord for MobiusPoint {
    const HEADER: &'static [&'static str] = &["re", "im"];

    fn to_record(&self) -> Vec<String> {
        vec![num(self.re()), num(self.im())]
    }

    fn from_record(fields: &[&str]) -> Result<Self> {
        check_width(fields, 2)?;
        MobiusPoint::from_parts(field(fields, 0, "re")?, field(fields, 1, "im")?)
    }
}

impl PointRecord for EinsteinVec {
    const HEADER: &'static [&'static str] = &["x", "y", "z"];

    fn to_record(&self) -> Vec<String> {
        self.0.iter().map(|&v| num(v)).collect()
    }

    fn from_record(fields: &[&str]) -> Result<Self> {
        check_width(fields, 3)?;
        Ok(EinsteinVec([
            field(fields, 0, "x")?,
            field(fields, 1, "y")?,
            field(fields, 2, "z")?,
        ]))
    }
}

impl PointRecord for usize {
    const HEADER: &'static [&'static str] = &["index"];

    fn to_record(&self) -> Vec<String> {
        vec![self.to_string()]
    }

    fn from_record(fields: &[&str]) -> Result<Self> {
        check_width(fields, 1)?;
        field(fields, 0, "index")
    }
}

impl PointRecord for i64 {
    const HEADER: &'static [&'static str] = &["value"];

    fn to_record(&self) -> Vec<String> {
        vec![self.to_string()]
    }

    fn from_record(fields: &[&str]) -> Result<Self> {
        check_width(fields, 1)?;
        field(fields, 0, "value")
    }
}

pub fn write_points<T: PointRecord, W: Write>(writer: W, points: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(T::HEADER)?;
    for p in points {
        w.write_record(p.to_record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_points_file<T: PointRecord>(path: impl AsRef<Path>, points: &[T]) -> Result<()> {
    write_points(std::fs::File::create(path)?, points)
}

/// Reads a point CSV and validates each point against the carrier.
pub fn read_points<G: Gyrogroup, R: Read>(g: &G, reader: R) -> Result<Vec<G::Element>> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if header != <G::Element as PointRecord>::HEADER {
        return Err(GyroError::Format(format!(
            "expected header {:?}, found {header:?}",
            <G::Element as PointRecord>::HEADER
        )));
    }
    let zero = g.identity();
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let fields: Vec<&str> = rec.iter().collect();
        let p = G::Element::from_record(&fields)
            .map_err(|e| GyroError::Format(format!("row {}: {e}", line + 1)))?;
        // ⊕ rejects operands outside the carrier
        g.add(&zero, &p)
            .map_err(|e| GyroError::Format(format!("row {}: {e}", line + 1)))?;
        out.push(p);
    }
    Ok(out)
}

pub fn read_points_file<G: Gyrogroup>(g: &G, path: impl AsRef<Path>) -> Result<Vec<G::Element>> {
    read_points(g, std::fs::File::open(path)?)
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i` and `-i`, with optional signs and
/// exponents. Whitespace is ignored.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || GyroError::Format(format!("cannot parse `{s}` as a complex number"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0));
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() {
        0.0
    } else {
        re.parse().map_err(|_| bad())?
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Parses a comma-separated triple `x,y,z`.
pub fn parse_vector(s: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(GyroError::Format(format!("`{s}` is not a comma triple")));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p
            .parse()
            .map_err(|_| GyroError::Format(format!("cannot parse `{p}` in `{s}`")))?;
    }
    Ok(out)
}
