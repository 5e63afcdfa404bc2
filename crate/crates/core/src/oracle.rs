//! Exact maximum depth by a slab sweep.
//!
//! Depth is constant on every face of the arrangement of triangle edges, and
//! every face meets a vertical line placed strictly between two consecutive
//! event abscissae (vertices and edge crossings). Along such a line the
//! crossing edges keep a fixed vertical order, so each triangle's cross
//! section is an interval of edge ranks and the deepest point is found by
//! interval stabbing.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub use crate::geometry::count_containing as depth_at;
use crate::geometry::{int, line_y_at, midpoint, Point2, PointSet, Rational, TriangleSet};
use crate::intervals::{max_stabbing, Interval1, IntervalMultiset};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthResult {
    pub point: Point2,
    pub depth: usize,
    /// The open vertical slab whose probe line found `point`.
    pub slab: Option<(Rational, Rational)>,
}

/// Abscissa where segments `p1p2` and `p3p4` cross in their relative
/// interiors, if they do.
fn crossing_x(p1: &Point2, p2: &Point2, p3: &Point2, p4: &Point2) -> Option<Rational> {
    let cross = |ax: Rational, ay: Rational, bx: Rational, by: Rational| ax * by - ay * bx;
    let d = cross(&p2.x - &p1.x, &p2.y - &p1.y, &p4.x - &p3.x, &p4.y - &p3.y);
    if d.is_zero() {
        return None;
    }
    let t = cross(&p3.x - &p1.x, &p3.y - &p1.y, &p4.x - &p3.x, &p4.y - &p3.y) / &d;
    let u = cross(&p3.x - &p1.x, &p3.y - &p1.y, &p2.x - &p1.x, &p2.y - &p1.y) / &d;
    let open = |v: &Rational| v.is_positive() && *v < Rational::one();
    (open(&t) && open(&u)).then(|| &p1.x + t * (&p2.x - &p1.x))
}

fn edges_of(t: &TriangleSet) -> Vec<(usize, usize)> {
    let set: BTreeSet<(usize, usize)> = t
        .iter()
        .flat_map(|tr| [(tr.a, tr.b), (tr.a, tr.c), (tr.b, tr.c)])
        .collect();
    set.into_iter().collect()
}

/// Sorted distinct abscissae of triangle vertices and edge crossings.
pub fn event_abscissae(s: &PointSet, t: &TriangleSet) -> Vec<Rational> {
    let edges = edges_of(t);
    let mut xs: BTreeSet<Rational> = t
        .iter()
        .flat_map(|tr| tr.indices())
        .map(|i| s[i].x.clone())
        .collect();
    for (k, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[k + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if let Some(x) = crossing_x(&s[a], &s[b], &s[c], &s[d]) {
                xs.insert(x);
            }
        }
    }
    xs.into_iter().collect()
}

fn strictly_spans(s: &PointSet, (a, b): (usize, usize), x: &Rational) -> bool {
    let (lo, hi) = if s[a].x < s[b].x { (&s[a].x, &s[b].x) } else { (&s[b].x, &s[a].x) };
    lo < x && x < hi
}

/// Deepest point on the vertical line `x = px`, which must avoid every event.
fn probe_line(s: &PointSet, t: &TriangleSet, edges: &[(usize, usize)], px: &Rational) -> Option<(Point2, usize)> {
    let mut crossing: Vec<((usize, usize), Rational)> = edges
        .iter()
        .filter(|&&e| strictly_spans(s, e, px))
        .map(|&(a, b)| ((a, b), line_y_at(&s[a], &s[b], px)))
        .collect();
    crossing.sort_by(|l, r| l.1.cmp(&r.1));
    let rank: BTreeMap<(usize, usize), usize> = crossing.iter().enumerate().map(|(i, (e, _))| (*e, i)).collect();

    let items: Vec<Interval1> = t
        .iter()
        .enumerate()
        .filter_map(|(w, tr)| {
            let ranks: Vec<usize> = [(tr.a, tr.b), (tr.a, tr.c), (tr.b, tr.c)]
                .iter()
                .filter_map(|e| rank.get(e).copied())
                .collect();
            match ranks[..] {
                [r1, r2] => {
                    let (lo, hi) = (r1.min(r2), r1.max(r2));
                    Some(Interval1::new(int(lo as i64), int(hi as i64), w).expect("distinct edge ranks"))
                }
                _ => None,
            }
        })
        .collect();
    if items.is_empty() {
        return None;
    }
    let stab = max_stabbing(&IntervalMultiset::new(items)).ok()?;
    let rank_of = |r: &Rational| -> usize { r.to_integer().try_into().expect("rank fits") };
    let (lo, hi) = (rank_of(&stab.gap.0), rank_of(&stab.gap.1));
    let y = midpoint(&crossing[lo].1, &crossing[hi].1);
    Some((Point2::new(px.clone(), y), stab.depth))
}

fn better(a: &DepthResult, b: &DepthResult) -> Ordering {
    a.depth
        .cmp(&b.depth)
        .then_with(|| b.point.cmp(&a.point))
}

/// Maximum number of triangles whose open interiors share a point, with a
/// witness. Ties go to the lexicographically smallest `(x, y)`.
pub fn exact_max_depth(s: &PointSet, t: &TriangleSet) -> Result<DepthResult> {
    if t.is_empty() {
        return Err(Error::NoTriangles);
    }
    let edges = edges_of(t);
    let xs = event_abscissae(s, t);
    let slabs: Vec<(&Rational, &Rational)> = xs.windows(2).map(|w| (&w[0], &w[1])).collect();
    let eval = |&(l, r): &(&Rational, &Rational)| {
        let px = midpoint(l, r);
        probe_line(s, t, &edges, &px).map(|(point, depth)| DepthResult {
            point,
            depth,
            slab: Some((l.clone(), r.clone())),
        })
    };
    let pick = |a: DepthResult, b: DepthResult| if better(&b, &a) == Ordering::Greater { b } else { a };

    #[cfg(feature = "parallel")]
    let best = slabs.par_iter().filter_map(eval).reduce_with(pick);
    #[cfg(not(feature = "parallel"))]
    let best = slabs.iter().filter_map(eval).reduce(pick);

    Ok(best.expect("a nondegenerate triangle has interior slabs"))
}

/// Best triangle centroid. Carries no depth guarantee.
pub fn heuristic_baseline(s: &PointSet, t: &TriangleSet) -> Result<DepthResult> {
    let mut best: Option<DepthResult> = None;
    for tr in t.iter() {
        let c = tr.centroid(s);
        let cand = DepthResult {
            depth: depth_at(&c, t, s),
            point: c,
            slab: None,
        };
        if best.as_ref().is_none_or(|b| cand.depth > b.depth) {
            best = Some(cand);
        }
    }
    best.ok_or(Error::NoTriangles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ratio, shear, Triangle};

    fn all_triangles(n: usize) -> TriangleSet {
        let mut v = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    v.push([i, j, k]);
                }
            }
        }
        TriangleSet::from_triples(&v, n).unwrap()
    }

    /// Depth at the midpoints of a fine rational grid over the hull box.
    fn grid_max(s: &PointSet, t: &TriangleSet, steps: i64, lo: i64, hi: i64) -> usize {
        let mut best = 0;
        for i in 0..steps {
            for j in 0..steps {
                let x = int(lo) + ratio((2 * i + 1) * (hi - lo), 2 * steps);
                let y = int(lo) + ratio((2 * j + 1) * (hi - lo), 2 * steps);
                best = best.max(depth_at(&Point2::new(x, y), t, s));
            }
        }
        best
    }

    #[test]
    fn lone_triangle() {
        let s = PointSet::from_ints(&[(0, 0), (3, 0), (0, 3)], "lone").unwrap();
        let t = all_triangles(3);
        let r = exact_max_depth(&s, &t).unwrap();
        assert_eq!(r.depth, 1);
        assert_eq!(depth_at(&r.point, &t, &s), 1);
        let h = heuristic_baseline(&s, &t).unwrap();
        assert_eq!((h.point.clone(), h.depth), (Point2::from_ints(1, 1), 1));
    }

    #[test]
    fn unit_square() {
        let s = PointSet::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)], "square").unwrap();
        let t = all_triangles(4);
        assert_eq!(grid_max(&s, &t, 24, 0, 1), 2);
        let r = exact_max_depth(&s, &t).unwrap();
        assert_eq!(r.depth, 2);
        assert_eq!(depth_at(&r.point, &t, &s), 2);
        assert_eq!(depth_at(&Point2::new(ratio(1, 2), ratio(1, 4)), &t, &s), 2);
        // every centroid lies on the opposite diagonal, a boundary of two triangles
        assert_eq!(heuristic_baseline(&s, &t).unwrap().depth, 1);
    }

    #[test]
    fn one_point_inside() {
        let s = PointSet::from_ints(&[(0, 0), (6, 0), (0, 6), (1, 2)], "inside").unwrap();
        let t = all_triangles(4);
        assert_eq!(grid_max(&s, &t, 30, 0, 6), 2);
        assert_eq!(exact_max_depth(&s, &t).unwrap().depth, 2);
    }

    #[test]
    fn disjoint_triangles() {
        let s = PointSet::from_ints(&[(0, 0), (2, 1), (1, 3), (10, 0), (12, 1), (11, 4)], "apart").unwrap();
        let t = TriangleSet::from_triples(&[[0, 1, 2], [3, 4, 5]], 6).unwrap();
        assert_eq!(exact_max_depth(&s, &t).unwrap().depth, 1);
        assert_eq!(heuristic_baseline(&s, &t).unwrap().depth, 1);
    }

    #[test]
    fn empty_rejected() {
        let s = PointSet::from_ints(&[(0, 0), (3, 0), (0, 3)], "lone").unwrap();
        let t = TriangleSet::new(vec![], 3).unwrap();
        assert_eq!(exact_max_depth(&s, &t), Err(Error::NoTriangles));
        assert_eq!(heuristic_baseline(&s, &t), Err(Error::NoTriangles));
    }

    #[test]
    fn vertical_edges_and_permutations() {
        // shared x-coordinates, so some edges are vertical
        let s = PointSet::from_ints(&[(0, 0), (0, 5), (4, 1), (4, 7), (2, 9)], "vert").unwrap();
        let t = all_triangles(5);
        let d = exact_max_depth(&s, &t).unwrap().depth;
        assert_eq!(d, grid_max(&s, &t, 36, 0, 9).max(d));
        let mut rev: Vec<Triangle> = t.iter().copied().collect();
        rev.reverse();
        let t2 = TriangleSet::new(rev, 5).unwrap();
        assert_eq!(exact_max_depth(&s, &t2).unwrap().depth, d);
        let sheared = shear(&s, &ratio(1, 3));
        assert_eq!(exact_max_depth(&sheared, &t).unwrap().depth, d);
    }

    #[test]
    fn crossing_abscissa() {
        let p = Point2::from_ints;
        assert_eq!(crossing_x(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)), Some(int(1)));
        assert_eq!(crossing_x(&p(0, 0), &p(1, 1), &p(0, 2), &p(2, 0)), None);
        assert_eq!(crossing_x(&p(0, 0), &p(2, 0), &p(0, 1), &p(2, 1)), None);
    }
}
