//! Plain-text polyline files: one `x,y` pair per line, blank lines and
//! `#` comments ignored. Coordinates are written in shortest round-trip
//! decimal form, so a written curve reads back bit for bit.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::geometry::{GeometryError, Point, Polyline};

#[derive(Debug, Error)]
pub enum PolylineFileError {
    #[error("line {line}: expected `x,y`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: {source}")]
    Number {
        line: usize,
        source: std::num::ParseFloatError,
    },
    #[error(transparent)]
    Invalid(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn parse_polyline(text: &str) -> Result<Polyline, PolylineFileError> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut fields = body.split(',').map(str::trim);
        let (Some(x), Some(y), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(PolylineFileError::Malformed {
                line,
                text: raw.to_string(),
            });
        };
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|source| PolylineFileError::Number { line, source })
        };
        points.push(Point::new(parse(x)?, parse(y)?));
    }
    Ok(Polyline::new(points)?)
}

pub fn read_polyline(path: impl AsRef<Path>) -> Result<Polyline, PolylineFileError> {
    parse_polyline(&fs::read_to_string(path)?)
}

pub fn write_polyline<W: Write>(curve: &Polyline, mut out: W) -> io::Result<()> {
    for p in curve.points() {
        writeln!(out, "{},{}", p.x, p.y)?;
    }
    Ok(())
}
