//! Seeded instance families.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{orient, Orientation, Point2, PointSet, Triangle, TriangleSet};
use crate::{Error, Result};

const MAX_REJECTIONS: usize = 1000;
const TRIANGLE_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    UniformGridPerturbed,
    RandomInteger,
    ConvexPosition,
    TwoClusters,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::UniformGridPerturbed,
        Family::RandomInteger,
        Family::ConvexPosition,
        Family::TwoClusters,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::UniformGridPerturbed => "uniform_grid_perturbed",
            Family::RandomInteger => "random_integer",
            Family::ConvexPosition => "convex_position",
            Family::TwoClusters => "two_clusters",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriangleCount {
    All,
    Count(usize),
}

impl FromStr for TriangleCount {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(TriangleCount::All);
        }
        s.parse()
            .map(TriangleCount::Count)
            .map_err(|_| format!("expected ALL or a count, got {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub m: TriangleCount,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::TooFewPoints(self.n));
        }
        if let TriangleCount::Count(m) = self.m {
            let max = choose3(self.n);
            if m > max {
                return Err(Error::TooManyTriangles { m, n: self.n, max });
            }
        }
        Ok(())
    }
}

pub fn choose3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Side of the square coordinate box, `8 n⁴`.
pub fn box_side(n: usize) -> i64 {
    8 * (n as i64).pow(4)
}

/// Whether `cand` can join `pts` keeping distinct points, distinct
/// x-coordinates and no three collinear.
fn admissible(pts: &[Point2], cand: &Point2) -> bool {
    if pts.iter().any(|p| p.x == cand.x) {
        return false;
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if orient(&pts[i], &pts[j], cand) == Orientation::Collinear {
                return false;
            }
        }
    }
    true
}

fn candidate(family: Family, k: usize, n: usize, rng: &mut ChaCha8Rng) -> (i64, i64) {
    let side = box_side(n);
    match family {
        Family::RandomInteger => (rng.gen_range(0..side), rng.gen_range(0..side)),
        Family::UniformGridPerturbed => {
            let cols = (n as f64).sqrt().ceil() as i64;
            let cell = side / cols;
            let (cx, cy) = (k as i64 % cols, k as i64 / cols);
            (cx * cell + rng.gen_range(0..cell), cy * cell + rng.gen_range(0..cell))
        }
        Family::ConvexPosition => {
            // two parabolic arcs bounding a convex region inside the box
            let r = 2 * (n as i64).pow(2);
            let x = rng.gen_range(-r..=r);
            let y = if rng.gen_bool(0.5) { x * x } else { 2 * r * r - x * x };
            (x + r, y)
        }
        Family::TwoClusters => {
            let c = side / 8;
            let off = if k.is_multiple_of(2) { 0 } else { side - c };
            (off + rng.gen_range(0..c), off + rng.gen_range(0..c))
        }
    }
}

/// Integer points in general position with distinct x-coordinates.
pub fn gen_points(spec: &GeneratorSpec) -> Result<PointSet> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut pts: Vec<Point2> = Vec::with_capacity(spec.n);
    while pts.len() < spec.n {
        let mut rejections = 0;
        loop {
            let (x, y) = candidate(spec.family, pts.len(), spec.n, &mut rng);
            let cand = Point2::from_ints(x, y);
            if admissible(&pts, &cand) {
                pts.push(cand);
                break;
            }
            rejections += 1;
            if rejections >= MAX_REJECTIONS {
                return Err(Error::GeneratorDegenerate(rejections));
            }
        }
    }
    let label = format!("{}-n{}-s{}", spec.family, spec.n, spec.seed);
    let set = PointSet::new(pts, label)?;
    debug_assert!(set.report().is_clean());
    Ok(set)
}

/// Every index triple, lexicographically.
pub fn all_triples(n: usize) -> Vec<Triangle> {
    let mut v = Vec::with_capacity(choose3(n));
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                v.push(Triangle { a: i, b: j, c: k });
            }
        }
    }
    v
}

/// All triples, or a uniform `m`-subset of them sorted canonically.
pub fn gen_triangles(s: &PointSet, m: TriangleCount, seed: u64) -> Result<TriangleSet> {
    let n = s.len();
    let all = all_triples(n);
    let chosen = match m {
        TriangleCount::All => all,
        TriangleCount::Count(m) => {
            if m > all.len() {
                return Err(Error::TooManyTriangles { m, n, max: all.len() });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ TRIANGLE_STREAM);
            let mut idx = sample(&mut rng, all.len(), m).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| all[i]).collect()
        }
    };
    TriangleSet::new(chosen, n)
}

pub fn gen_instance(spec: &GeneratorSpec) -> Result<(PointSet, TriangleSet)> {
    let s = gen_points(spec)?;
    let t = gen_triangles(&s, spec.m, spec.seed)?;
    Ok((s, t))
}
