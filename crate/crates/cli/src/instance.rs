//! Instance files: `{"points": [[x, y], ...], "triangles": [[i, j, k], ...]}`.
//!
//! Coordinates are integers; `"p/q"` strings are accepted as well.

use std::fmt::Write as _;

use serde::Deserialize;
use triselect::geometry::{format_rational, parse_rational};
use triselect::{Error, Point2, PointSet, Rational, Triangle, TriangleSet};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Coord {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    points: Vec<[Coord; 2]>,
    triangles: Vec<[usize; 3]>,
}

fn coord(c: &Coord, field: &str) -> Result<Rational, String> {
    match c {
        Coord::Int(v) => Ok(Rational::from_integer((*v).into())),
        Coord::Text(s) => parse_rational(s).map_err(|e| format!("{field}: {e}")),
    }
}

/// Parses and validates an instance. Errors name the offending field.
pub fn parse_instance(text: &str, label: &str) -> Result<(PointSet, TriangleSet), String> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| format!("invalid instance JSON: {e}"))?;
    let mut points = Vec::with_capacity(raw.points.len());
    for (i, [x, y]) in raw.points.iter().enumerate() {
        points.push(Point2::new(
            coord(x, &format!("points[{i}][0]"))?,
            coord(y, &format!("points[{i}][1]"))?,
        ));
    }
    let n = points.len();
    let s = PointSet::new(points, label).map_err(|e| match e {
        Error::Collinear(..) | Error::DuplicatePoint(..) => format!("points: {e}"),
        other => other.to_string(),
    })?;
    let mut tris = Vec::with_capacity(raw.triangles.len());
    for (k, &[i, j, l]) in raw.triangles.iter().enumerate() {
        let t = Triangle::new(i, j, l).map_err(|e| format!("triangles[{k}]: {e}"))?;
        tris.push(t);
    }
    let t = TriangleSet::new(tris, n).map_err(|e| format!("triangles: {e}"))?;
    Ok((s, t))
}

fn coord_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("\"{}\"", format_rational(r))
    }
}

/// One point or triangle per line, in input order.
pub fn format_instance(s: &PointSet, t: &TriangleSet) -> String {
    let mut out = String::from("{\n  \"points\": [");
    for (i, p) in s.points().iter().enumerate() {
        let sep = if i == 0 { "" } else { "," };
        write!(out, "{sep}\n    [{}, {}]", coord_text(&p.x), coord_text(&p.y)).unwrap();
    }
    out.push_str("\n  ],\n  \"triangles\": [");
    for (i, tr) in t.iter().enumerate() {
        let sep = if i == 0 { "" } else { "," };
        write!(out, "{sep}\n    [{}, {}, {}]", tr.a, tr.b, tr.c).unwrap();
    }
    out.push_str("\n  ]\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let text = r#"{"points": [[0, 0], [4, 0], ["1/2", 3], [3, 2]], "triangles": [[0, 1, 2], [3, 1, 0]]}"#;
        let (s, t) = parse_instance(text, "x").unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(t[1].indices(), [0, 1, 3]);
        let again = parse_instance(&format_instance(&s, &t), "x").unwrap();
        assert_eq!(again, (s, t));
    }

    #[test]
    fn diagnostics() {
        let e = parse_instance(r#"{"points": [[0, 0], [1, 1], [2, 2]], "triangles": []}"#, "x").unwrap_err();
        assert!(e.contains("general position violated"), "{e}");
        let e = parse_instance(r#"{"points": [[0, 0], [1, "a"]], "triangles": []}"#, "x").unwrap_err();
        assert!(e.contains("points[1][1]"), "{e}");
        let e = parse_instance(r#"{"points": [[0, 0], [1, 0], [0, 1]], "triangles": [[0, 1, 7]]}"#, "x").unwrap_err();
        assert!(e.contains("triangles"), "{e}");
        let e = parse_instance(r#"{"points": [[0, 0]], "triangles": [[0, 0, 1]]}"#, "x").unwrap_err();
        assert!(e.contains("triangles[0]"), "{e}");
        let e = parse_instance("{\n  \"points\": [[0, 0],\n", "x").unwrap_err();
        assert!(e.contains("line"), "{e}");
    }
}
