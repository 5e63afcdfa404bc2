//! Exact planar primitives.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

/// Formats as `p/q`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub(crate) mod rational_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point2 {
    #[serde(with = "rational_str")]
    pub x: Rational,
    #[serde(with = "rational_str")]
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2::new(int(x), int(y))
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

impl Orientation {
    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Greater => Orientation::CounterClockwise,
            Ordering::Less => Orientation::Clockwise,
            Ordering::Equal => Orientation::Collinear,
        }
    }

    pub fn reverse(self) -> Self {
        match self {
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Unreduced fraction with positive denominator; every operation is checked so
/// overflow falls back to the big-integer path instead of giving a wrong sign.
#[derive(Clone, Copy)]
struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    fn of(r: &Rational) -> Option<Frac> {
        Some(Frac {
            num: r.numer().to_i64()? as i128,
            den: r.denom().to_i64()? as i128,
        })
    }

    fn sub(self, o: Frac) -> Option<Frac> {
        if self.den == o.den {
            return Some(Frac {
                num: self.num.checked_sub(o.num)?,
                den: self.den,
            });
        }
        let num = self
            .num
            .checked_mul(o.den)?
            .checked_sub(o.num.checked_mul(self.den)?)?;
        Some(Frac {
            num,
            den: self.den.checked_mul(o.den)?,
        })
    }

    fn mul(self, o: Frac) -> Option<Frac> {
        Some(Frac {
            num: self.num.checked_mul(o.num)?,
            den: self.den.checked_mul(o.den)?,
        })
    }

    fn cmp(self, o: Frac) -> Option<Ordering> {
        if self.den == o.den {
            return Some(self.num.cmp(&o.num));
        }
        Some(self.num.checked_mul(o.den)?.cmp(&o.num.checked_mul(self.den)?))
    }
}

fn orient_small(p: &Point2, q: &Point2, r: &Point2) -> Option<Ordering> {
    let (px, py) = (Frac::of(&p.x)?, Frac::of(&p.y)?);
    let (qx, qy) = (Frac::of(&q.x)?, Frac::of(&q.y)?);
    let (rx, ry) = (Frac::of(&r.x)?, Frac::of(&r.y)?);
    let lhs = qx.sub(px)?.mul(ry.sub(py)?)?;
    let rhs = qy.sub(py)?.mul(rx.sub(px)?)?;
    lhs.cmp(rhs)
}

/// Sign of the determinant of `(q - p, r - p)`.
pub fn orient(p: &Point2, q: &Point2, r: &Point2) -> Orientation {
    let ord = orient_small(p, q, r).unwrap_or_else(|| {
        let lhs = (&q.x - &p.x) * (&r.y - &p.y);
        let rhs = (&q.y - &p.y) * (&r.x - &p.x);
        lhs.cmp(&rhs)
    });
    Orientation::from_ordering(ord)
}

/// Strict containment in the open triangle `abc`; boundary points are outside.
pub fn point_in_open_triangle(pt: &Point2, a: &Point2, b: &Point2, c: &Point2) -> bool {
    let o1 = orient(a, b, pt);
    if o1 == Orientation::Collinear {
        return false;
    }
    orient(b, c, pt) == o1 && orient(c, a, pt) == o1
}

pub fn point_in_triangle_interior(pt: &Point2, t: &Triangle, s: &PointSet) -> bool {
    let [a, b, c] = t.vertices(s);
    point_in_open_triangle(pt, a, b, c)
}

/// Number of triangles of `t` whose open interior contains `p`.
pub fn count_containing(p: &Point2, t: &TriangleSet, s: &PointSet) -> usize {
    t.iter()
        .filter(|tri| point_in_triangle_interior(p, tri, s))
        .count()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment2 {
    pub p: Point2,
    pub q: Point2,
}

impl Segment2 {
    pub fn new(p: Point2, q: Point2) -> Result<Self> {
        if p == q {
            return Err(Error::DegenerateSegment);
        }
        Ok(Segment2 { p, q })
    }

    pub fn x_projection_length(&self) -> Rational {
        (&self.q.x - &self.p.x).abs()
    }

    /// The y-coordinate where the segment crosses `x = x0`; the crossing must
    /// be strictly between the endpoints' x-coordinates.
    pub fn vertical_line_intersection(&self, x0: &Rational) -> Result<Rational> {
        let (lo, hi) = if self.p.x < self.q.x {
            (&self.p, &self.q)
        } else {
            (&self.q, &self.p)
        };
        if !(&lo.x < x0 && x0 < &hi.x) {
            return Err(Error::NotCrossing);
        }
        Ok(line_y_at(lo, hi, x0))
    }
}

pub fn x_projection_length(s: &Segment2) -> Rational {
    s.x_projection_length()
}

pub fn vertical_line_intersection(s: &Segment2, x0: &Rational) -> Result<Rational> {
    s.vertical_line_intersection(x0)
}

/// y of the line through `a` and `b` at `x`; requires `a.x != b.x`.
pub(crate) fn line_y_at(a: &Point2, b: &Point2, x: &Rational) -> Rational {
    &a.y + (&b.y - &a.y) * (x - &a.x) / (&b.x - &a.x)
}

/// A triangle as a sorted triple of point indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangle {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl Triangle {
    pub fn new(i: usize, j: usize, k: usize) -> Result<Self> {
        if i == j || j == k || i == k {
            return Err(Error::DegenerateTriangle(i, j, k));
        }
        let mut v = [i, j, k];
        v.sort_unstable();
        Ok(Triangle {
            a: v[0],
            b: v[1],
            c: v[2],
        })
    }

    pub fn indices(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }

    pub fn vertices<'a>(&self, s: &'a PointSet) -> [&'a Point2; 3] {
        [&s[self.a], &s[self.b], &s[self.c]]
    }

    pub fn centroid(&self, s: &PointSet) -> Point2 {
        let [a, b, c] = self.vertices(s);
        let three = int(3);
        Point2::new((&a.x + &b.x + &c.x) / &three, (&a.y + &b.y + &c.y) / &three)
    }
}

/// Distinct, non-collinear points. Distinct x-coordinates are not required
/// here; [`shear_to_distinct_x`] establishes them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point2>,
    label: String,
}

impl PointSet {
    pub fn new(points: Vec<Point2>, label: impl Into<String>) -> Result<Self> {
        let report = validate_general_position(&points);
        if let Some(&(i, j)) = report.duplicate_points.first() {
            return Err(Error::DuplicatePoint(i, j));
        }
        if let Some(&(i, j, k)) = report.collinear_triples.first() {
            return Err(Error::Collinear(i, j, k));
        }
        Ok(PointSet {
            points,
            label: label.into(),
        })
    }

    pub fn from_ints(coords: &[(i64, i64)], label: impl Into<String>) -> Result<Self> {
        let pts = coords.iter().map(|&(x, y)| Point2::from_ints(x, y)).collect();
        PointSet::new(pts, label)
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn has_distinct_x(&self) -> bool {
        let xs: BTreeSet<&Rational> = self.points.iter().map(|p| &p.x).collect();
        xs.len() == self.points.len()
    }

    pub fn report(&self) -> GeneralPositionReport {
        validate_general_position(&self.points)
    }
}

impl std::ops::Index<usize> for PointSet {
    type Output = Point2;

    fn index(&self, i: usize) -> &Point2 {
        &self.points[i]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneralPositionReport {
    pub collinear_triples: Vec<(usize, usize, usize)>,
    pub duplicate_points: Vec<(usize, usize)>,
    pub duplicate_x: Vec<(usize, usize)>,
}

impl GeneralPositionReport {
    pub fn is_clean(&self) -> bool {
        self.collinear_triples.is_empty() && self.duplicate_points.is_empty() && self.duplicate_x.is_empty()
    }
}

/// Lists every collinear triple, duplicate point and shared x-coordinate.
/// Triples that contain a duplicated point are not reported as collinear.
pub fn validate_general_position(points: &[Point2]) -> GeneralPositionReport {
    let n = points.len();
    let mut report = GeneralPositionReport::default();
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                report.duplicate_points.push((i, j));
            } else if points[i].x == points[j].x {
                report.duplicate_x.push((i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                continue;
            }
            for k in j + 1..n {
                if points[k] == points[i] || points[k] == points[j] {
                    continue;
                }
                if orient(&points[i], &points[j], &points[k]) == Orientation::Collinear {
                    report.collinear_triples.push((i, j, k));
                }
            }
        }
    }
    report
}

/// Applies `x' = x + eps * y` with `eps` half the smallest positive critical
/// ratio `(x_j - x_i) / (y_i - y_j)`, or 1 if there is none. The result has
/// pairwise distinct x-coordinates.
pub fn shear_to_distinct_x(s: &PointSet) -> Result<(PointSet, Rational)> {
    let pts = s.points();
    let mut min_ratio: Option<Rational> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i] == pts[j] {
                return Err(Error::DuplicatePoint(i, j));
            }
            let dy = &pts[i].y - &pts[j].y;
            if dy.is_zero() {
                continue;
            }
            let r = (&pts[j].x - &pts[i].x) / dy;
            if r.is_positive() && min_ratio.as_ref().is_none_or(|m| &r < m) {
                min_ratio = Some(r);
            }
        }
    }
    let eps = match min_ratio {
        Some(r) => r / int(2),
        None => Rational::one(),
    };
    Ok((shear(s, &eps), eps))
}

pub fn shear(s: &PointSet, eps: &Rational) -> PointSet {
    PointSet {
        points: s.points.iter().map(|p| shear_point(p, eps)).collect(),
        label: s.label.clone(),
    }
}

pub fn shear_point(p: &Point2, eps: &Rational) -> Point2 {
    Point2::new(&p.x + eps * &p.y, p.y.clone())
}

pub fn unshear_point(p: &Point2, eps: &Rational) -> Point2 {
    Point2::new(&p.x - eps * &p.y, p.y.clone())
}

/// Distinct triangles over a common point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleSet {
    triangles: Vec<Triangle>,
}

impl TriangleSet {
    pub fn new(triangles: Vec<Triangle>, n: usize) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for t in &triangles {
            for index in t.indices() {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            if !seen.insert(*t) {
                return Err(Error::DuplicateTriangle(t.a, t.b, t.c));
            }
        }
        Ok(TriangleSet { triangles })
    }

    pub fn from_triples(triples: &[[usize; 3]], n: usize) -> Result<Self> {
        let tris = triples
            .iter()
            .map(|&[i, j, k]| Triangle::new(i, j, k))
            .collect::<Result<Vec<_>>>()?;
        TriangleSet::new(tris, n)
    }

    pub fn subset(&self, indices: &[usize]) -> TriangleSet {
        TriangleSet {
            triangles: indices.iter().map(|&i| self.triangles[i]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Triangle> {
        self.triangles.iter()
    }

    pub fn as_slice(&self) -> &[Triangle] {
        &self.triangles
    }
}

impl std::ops::Index<usize> for TriangleSet {
    type Output = Triangle;

    fn index(&self, i: usize) -> &Triangle {
        &self.triangles[i]
    }
}
