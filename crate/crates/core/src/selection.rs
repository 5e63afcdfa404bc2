//! The planar selection pipeline.
//!
//! Every triangle gets a base, the edge with the longest x-projection. Bases
//! carrying fewer than `m/n²` triangles are discarded, the rest are bucketed
//! by size into geometric levels, and one level is kept. Pairs of triangles
//! over a common base project to intervals on the x-axis; the weighted
//! interval selection picks a vertical line `x = z0` crossed by many of them.
//! Each pair crosses that line in a vertical segment covered by its two
//! triangles, and the deepest point among those segments is the witness.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::certificate::{rat, segments_distinct, ChainCheck, Relation, SelectionCertificate};
use crate::geometry::{
    count_containing, int, line_y_at, midpoint, point_in_open_triangle, shear_to_distinct_x, unshear_point,
    Point2, PointSet, Rational, TriangleSet,
};
use crate::intervals::{max_stabbing, weighted_select, Interval1, IntervalMultiset, WeightedSelection};
use crate::oracle::exact_max_depth;
use crate::{Error, Result};

/// Triangles sharing the base `(left, right)`, `left.x < right.x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseGroup {
    pub base: (usize, usize),
    pub apexes: Vec<usize>,
    /// Indices into the input triangle set, parallel to `apexes`.
    pub triangles: Vec<usize>,
}

impl BaseGroup {
    pub fn m_ab(&self) -> usize {
        self.triangles.len()
    }
}

/// Endpoints of the longest-x-projection edge of triangle `idx`, left first.
/// Equal projections go to the lexicographically smaller (left, right) pair.
pub fn base_of(tri: [usize; 3], s: &PointSet) -> (usize, usize) {
    let oriented = |i: usize, j: usize| {
        if (&s[i].x, i) < (&s[j].x, j) {
            (i, j)
        } else {
            (j, i)
        }
    };
    let [a, b, c] = tri;
    let mut best: Option<(Rational, (usize, usize))> = None;
    for (i, j) in [(a, b), (a, c), (b, c)] {
        let e = oriented(i, j);
        let len = (&s[e.1].x - &s[e.0].x).abs();
        let better = match &best {
            None => true,
            Some((bl, be)) => len > *bl || (len == *bl && e < *be),
        };
        if better {
            best = Some((len, e));
        }
    }
    best.expect("three edges").1
}

pub fn assign_bases(s: &PointSet, t: &TriangleSet) -> BTreeMap<(usize, usize), BaseGroup> {
    let mut groups: BTreeMap<(usize, usize), BaseGroup> = BTreeMap::new();
    for (idx, tri) in t.iter().enumerate() {
        let base = base_of(tri.indices(), s);
        let apex = tri
            .indices()
            .into_iter()
            .find(|&v| v != base.0 && v != base.1)
            .expect("a triangle has a vertex off its base");
        let g = groups.entry(base).or_insert_with(|| BaseGroup {
            base,
            apexes: Vec::new(),
            triangles: Vec::new(),
        });
        g.apexes.push(apex);
        g.triangles.push(idx);
    }
    groups
}

/// Drops groups with `m_ab < m/n²`; returns the survivors and the number of
/// triangles dropped.
pub fn prune_sparse_bases(groups: Vec<BaseGroup>, m: usize, n: usize) -> (Vec<BaseGroup>, usize) {
    let n2 = (n as u128) * (n as u128);
    let (kept, dropped): (Vec<_>, Vec<_>) = groups
        .into_iter()
        .partition(|g| g.m_ab() as u128 * n2 >= m as u128);
    let discarded = dropped.iter().map(BaseGroup::m_ab).sum();
    (kept, discarded)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelBucket {
    pub j: usize,
    pub bases: Vec<BaseGroup>,
    pub m_j: usize,
}

impl LevelBucket {
    pub fn triangle_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.bases.iter().flat_map(|g| g.triangles.iter().copied()).collect();
        v.sort_unstable();
        v
    }
}

/// Smallest `j >= 1` with `m_ab * n² < 4^j * m`, by integer comparison.
/// Requires `m_ab * n² >= m`.
pub fn level_of(m_ab: usize, m: usize, n: usize) -> usize {
    let lhs = m_ab as u128 * (n as u128) * (n as u128);
    let mut j = 1;
    let mut bound = 4 * m as u128;
    while lhs >= bound {
        j += 1;
        bound *= 4;
    }
    j
}

/// Whether `4^(j-1) m / n² <= m_ab < 4^j m / n²`.
pub fn in_level_range(m_ab: usize, j: usize, m: usize, n: usize) -> bool {
    let lhs = BigInt::from(m_ab) * BigInt::from(n) * BigInt::from(n);
    let low = BigInt::from(4u8).pow(j as u32 - 1) * BigInt::from(m);
    low <= lhs && lhs < &low * 4
}

/// Groups survivors by level. Only nonempty levels are returned, ascending.
pub fn bucket_bases(groups: Vec<BaseGroup>, m: usize, n: usize) -> Result<Vec<LevelBucket>> {
    let n_cubed = (n as u128).pow(3);
    if m as u128 > n_cubed {
        return Err(Error::BucketRangeEmpty { m, n_cubed });
    }
    let mut levels: BTreeMap<usize, Vec<BaseGroup>> = BTreeMap::new();
    for g in groups {
        levels.entry(level_of(g.m_ab(), m, n)).or_default().push(g);
    }
    Ok(levels
        .into_iter()
        .map(|(j, bases)| LevelBucket {
            j,
            m_j: bases.iter().map(BaseGroup::m_ab).sum(),
            bases,
        })
        .collect())
}

/// `m_j * 2^(j+1) >= m`.
pub fn level_is_heavy(j: usize, m_j: usize, m: usize) -> bool {
    (BigInt::from(m_j) << (j + 1)) >= BigInt::from(m)
}

/// Level maximizing `2^(j+1) * m_j` over `(j, m_j)` pairs; ties go to the
/// smallest `j`.
pub fn choose_level_from_counts(counts: &[(usize, usize)], m: usize) -> Result<usize> {
    let best = counts
        .iter()
        .filter(|(_, mj)| *mj > 0)
        .map(|&(j, mj)| (BigInt::from(mj) << (j + 1), j))
        .fold(None::<(BigInt, usize)>, |acc, (slack, j)| match acc {
            Some((s, bj)) if s > slack || (s == slack && bj < j) => Some((s, bj)),
            _ => Some((slack, j)),
        });
    match best {
        Some((_, j)) if level_is_heavy(j, counts.iter().find(|c| c.0 == j).unwrap().1, m) => Ok(j),
        _ => Err(Error::CheckFailed {
            name: "C3".into(),
            detail: "no level holds 2^-(j+1) m triangles".into(),
        }),
    }
}

pub fn choose_level(buckets: &[LevelBucket], m: usize) -> Result<usize> {
    let counts: Vec<_> = buckets.iter().map(|b| (b.j, b.m_j)).collect();
    choose_level_from_counts(&counts, m)
}

/// Two triangles `abc`, `abd` over a common base, `c.x < d.x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedPair {
    pub base: (usize, usize),
    pub apex_pair: (usize, usize),
}

/// One pair per unordered apex pair of every base in the bucket. The interval
/// witness is the pair's index in the returned vector.
pub fn build_projected_pairs(bucket: &LevelBucket, s: &PointSet) -> (Vec<ProjectedPair>, IntervalMultiset) {
    let mut pairs = Vec::new();
    let mut items = Vec::new();
    for g in &bucket.bases {
        for (i, &c) in g.apexes.iter().enumerate() {
            for &d in &g.apexes[i + 1..] {
                let (c, d) = if s[c].x < s[d].x { (c, d) } else { (d, c) };
                let w = pairs.len();
                items.push(Interval1::new(s[c].x.clone(), s[d].x.clone(), w).expect("apex x-coordinates are distinct"));
                pairs.push(ProjectedPair {
                    base: g.base,
                    apex_pair: (c, d),
                });
            }
        }
    }
    (pairs, IntervalMultiset::new(items))
}

/// Vertical segment on `x = z0` spanned by the crossings of `ad` and `bc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedSegment {
    pub x: Rational,
    pub y_lo: Rational,
    pub y_hi: Rational,
    /// `(a, b, c, d)`: base `ab`, apexes `c` left and `d` right of the line.
    pub witness: [usize; 4],
}

impl LiftedSegment {
    pub fn contains_y(&self, y: &Rational) -> bool {
        &self.y_lo < y && y < &self.y_hi
    }

    /// Where the base line `ab` crosses the segment's line.
    pub fn base_crossing(&self, s: &PointSet) -> Rational {
        let [a, b, _, _] = self.witness;
        line_y_at(&s[a], &s[b], &self.x)
    }

    /// Three interior sample heights at 1/4, 1/2 and 3/4 of the segment. A
    /// sample landing on the base line moves up by 1/8; the base line lies
    /// on both triangles' boundary.
    pub fn samples(&self, s: &PointSet) -> [Rational; 3] {
        let r = self.base_crossing(s);
        let len = &self.y_hi - &self.y_lo;
        let at = |k: i64| &self.y_lo + &len * Rational::new(k.into(), 8.into());
        [2, 4, 6].map(|k| {
            let y = at(k);
            if y == r {
                at(k + 1)
            } else {
                y
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftOutcome {
    pub segments: Vec<LiftedSegment>,
    /// Pairs whose two crossings coincide.
    pub degenerate: usize,
    /// Pairs whose segment repeats an earlier one.
    pub duplicates: usize,
}

pub fn lift_to_vertical(pairs: &[&ProjectedPair], z0: &Rational, s: &PointSet) -> Result<LiftOutcome> {
    if s.points().iter().any(|p| &p.x == z0) {
        return Err(Error::ZNotGeneral);
    }
    let mut seen = BTreeSet::new();
    let mut out = LiftOutcome {
        segments: Vec::new(),
        degenerate: 0,
        duplicates: 0,
    };
    for pair in pairs {
        let (a, b) = pair.base;
        let (c, d) = pair.apex_pair;
        if !(s[a].x < *z0 && *z0 < s[b].x && s[c].x < *z0 && *z0 < s[d].x) {
            return Err(Error::Degenerate(format!(
                "line x = {z0} does not separate pair base {a}-{b}, apexes {c}-{d}"
            )));
        }
        let p = line_y_at(&s[a], &s[d], z0);
        let q = line_y_at(&s[b], &s[c], z0);
        if p == q {
            out.degenerate += 1;
            continue;
        }
        let (y_lo, y_hi) = if p < q { (p, q) } else { (q, p) };
        if !seen.insert((y_lo.clone(), y_hi.clone())) {
            out.duplicates += 1;
            continue;
        }
        out.segments.push(LiftedSegment {
            x: z0.clone(),
            y_lo,
            y_hi,
            witness: [a, b, c, d],
        });
    }
    Ok(out)
}

pub fn distinct_endpoints(segments: &[LiftedSegment]) -> usize {
    segments
        .iter()
        .flat_map(|s| [&s.y_lo, &s.y_hi])
        .collect::<BTreeSet<_>>()
        .len()
}

/// `m³ / (n⁶ (log₂ n)²)`, with `log₂ n` rounded to nine decimals.
pub fn bound_rhs(n: usize, m: usize) -> Rational {
    let scale = 1_000_000_000i64;
    let log = ((n as f64).log2() * scale as f64).round() as i64;
    let log = Rational::new(log.into(), scale.into());
    let num = Rational::from_integer(BigInt::from(m).pow(3));
    let den = Rational::from_integer(BigInt::from(n).pow(6)) * &log * &log;
    if den.is_zero() {
        return Rational::zero();
    }
    num / den
}

/// Constructors for each named inequality of the certificate.
pub mod chain {
    use super::*;

    pub fn c1_discarded(m: usize, discarded: usize) -> ChainCheck {
        ChainCheck::evaluate("C1a", "discarded triangles < m/2", rat(discarded), Relation::Lt, rat(m) / int(2))
    }

    pub fn c1_survivors(kept: &[BaseGroup], m: usize, n: usize) -> ChainCheck {
        let min = kept.iter().map(BaseGroup::m_ab).min().unwrap_or(0);
        ChainCheck::evaluate(
            "C1b",
            "smallest surviving m_ab >= m/n^2",
            rat(min),
            Relation::Ge,
            rat(m) / rat(n * n),
        )
    }

    pub fn c2_bucket_ranges(buckets: &[LevelBucket], m: usize, n: usize) -> ChainCheck {
        let bad = buckets
            .iter()
            .flat_map(|b| b.bases.iter().map(move |g| (b.j, g.m_ab())))
            .filter(|&(j, mab)| !in_level_range(mab, j, m, n))
            .count();
        ChainCheck::evaluate(
            "C2",
            "bases outside 4^(j-1) m/n^2 <= m_ab < 4^j m/n^2",
            rat(bad),
            Relation::Eq,
            Rational::zero(),
        )
    }

    pub fn c3_level(j: usize, m_j: usize, m: usize) -> ChainCheck {
        let rhs = rat(m) / Rational::from_integer(BigInt::from(1u8) << (j + 1));
        ChainCheck::evaluate("C3", "m_j >= 2^-(j+1) m", rat(m_j), Relation::Ge, rhs)
    }

    pub fn c4_pairs(bucket: &LevelBucket, m0: usize, m: usize, n: usize) -> ChainCheck {
        let per_base = Rational::from_integer(BigInt::from(4u8).pow(bucket.j as u32 - 1)) * rat(m) / rat(n * n);
        let rhs = rat(bucket.m_j) / int(2) * (per_base - int(1));
        ChainCheck::evaluate("C4", "|M0| >= (m_j/2)(4^(j-1) m/n^2 - 1)", rat(m0), Relation::Ge, rhs)
    }

    pub fn c5_weighted(m1: usize, n1: usize, m0: usize, n0: usize, levels: usize) -> ChainCheck {
        ChainCheck::evaluate(
            "C5",
            "|M1|/n1 >= |M0|/(n0 L)",
            rat(m1) / rat(n1),
            Relation::Ge,
            rat(m0) / rat(n0 * levels),
        )
    }

    pub fn c6_endpoints(n2: usize, n: usize, n1: usize) -> ChainCheck {
        ChainCheck::evaluate("C6", "n2 <= n n1", rat(n2), Relation::Le, rat(n * n1))
    }

    pub fn c7_distinct(segments: &[LiftedSegment]) -> ChainCheck {
        ChainCheck::evaluate(
            "C7",
            "distinct lifted segments == |M2|",
            rat(segments_distinct(segments)),
            Relation::Eq,
            rat(segments.len()),
        )
    }

    pub fn c8_depth(depth_triangles: usize, depth_pairs: usize, j: usize, m: usize, n: usize) -> ChainCheck {
        let per_triangle = BigInt::from(4u8).pow(j as u32) * BigInt::from(m);
        let need = (BigInt::from(depth_pairs) * BigInt::from(n * n)).div_ceil(&per_triangle);
        ChainCheck::evaluate(
            "C8",
            "depth_triangles >= ceil(depth_pairs / (4^j m/n^2))",
            rat(depth_triangles),
            Relation::Ge,
            Rational::from_integer(need),
        )
    }

    pub fn c9_containment(segments: &[LiftedSegment], s: &PointSet) -> ChainCheck {
        let inside: usize = segments
            .iter()
            .map(|sg| {
                let [a, b, c, d] = sg.witness;
                sg.samples(s)
                    .iter()
                    .filter(|y| {
                        let pt = Point2::new(sg.x.clone(), (*y).clone());
                        point_in_open_triangle(&pt, &s[a], &s[b], &s[c])
                            || point_in_open_triangle(&pt, &s[a], &s[b], &s[d])
                    })
                    .count()
            })
            .sum();
        ChainCheck::evaluate(
            "C9",
            "lifted segment samples inside abc or abd",
            rat(inside),
            Relation::Eq,
            rat(3 * segments.len()),
        )
    }

    pub fn c10_oracle(depth_triangles: usize, depth_max: usize) -> ChainCheck {
        ChainCheck::evaluate(
            "C10",
            "depth_triangles <= exact maximum depth",
            rat(depth_triangles),
            Relation::Le,
            rat(depth_max),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionOptions {
    /// Run the exact oracle (check C10) when `n` is at most this.
    pub oracle_max_n: Option<usize>,
    /// Dyadic moves of `z0` allowed to escape degenerate lifts.
    pub max_z_retries: usize,
}

impl Default for SelectionOptions {
    fn default() -> Self {
        SelectionOptions {
            oracle_max_n: Some(12),
            max_z_retries: 32,
        }
    }
}

/// Everything the pipeline built, in sheared coordinates.
#[derive(Debug, Clone)]
pub struct SelectionRun {
    pub certificate: SelectionCertificate,
    pub sheared: PointSet,
    pub buckets: Vec<LevelBucket>,
    /// Indices into the input triangle set.
    pub level_triangles: Vec<usize>,
    pub pairs: Vec<ProjectedPair>,
    pub m0: IntervalMultiset,
    pub selection: WeightedSelection,
    pub segments: Vec<LiftedSegment>,
    pub x0_sheared: Point2,
}

pub fn run_selection(s: &PointSet, t: &TriangleSet, opts: &SelectionOptions) -> Result<SelectionCertificate> {
    run_selection_detailed(s, t, opts).map(|r| r.certificate)
}

pub fn run_selection_detailed(s: &PointSet, t: &TriangleSet, opts: &SelectionOptions) -> Result<SelectionRun> {
    let (n, m) = (s.len(), t.len());
    if n < 4 || m < 2 {
        return Err(Error::InstanceTooSmall { n, m });
    }
    let (sheared, eps) = shear_to_distinct_x(s)?;

    let groups = assign_bases(&sheared, t);
    debug_assert_eq!(groups.values().map(BaseGroup::m_ab).sum::<usize>(), m);
    let (kept, m_discarded) = prune_sparse_bases(groups.into_values().collect(), m, n);
    let mut checks = vec![chain::c1_discarded(m, m_discarded), chain::c1_survivors(&kept, m, n)];
    let buckets = bucket_bases(kept, m, n)?;
    checks.push(chain::c2_bucket_ranges(&buckets, m, n));

    let j_star = pick_level(&buckets, m)?;
    let bucket = buckets.iter().find(|b| b.j == j_star).expect("chosen level exists");
    checks.push(chain::c3_level(bucket.j, bucket.m_j, m));

    let (pairs, m0) = build_projected_pairs(bucket, &sheared);
    checks.push(chain::c4_pairs(bucket, m0.len(), m, n));

    let sel = weighted_select(&m0)?;
    let n0 = m0.endpoints().len();
    checks.push(chain::c5_weighted(sel.m_prime, sel.n_prime, m0.len(), n0, sel.levels_used));
    let selected: Vec<&ProjectedPair> = sel.selected.iter().map(|&i| &pairs[m0.items()[i].witness]).collect();

    let (z0, lift, retries) = place_line(&selected, &sel.gap, &sheared, opts.max_z_retries)?;
    let segments = lift.segments;
    if segments.is_empty() {
        return Err(Error::Degenerate(format!(
            "every lifted segment is degenerate at z0 = {z0} after {retries} retries"
        )));
    }
    let n2 = distinct_endpoints(&segments);
    checks.push(chain::c6_endpoints(n2, n, sel.n_prime));
    checks.push(chain::c7_distinct(&segments));

    let m2 = IntervalMultiset::new(
        segments
            .iter()
            .enumerate()
            .map(|(w, sg)| Interval1::new(sg.y_lo.clone(), sg.y_hi.clone(), w).expect("lifts are nondegenerate"))
            .collect(),
    );
    let stab = max_stabbing(&m2)?;
    // Stay off the base lines of the covering pairs; depth is constant on the gap.
    let forbidden: BTreeSet<Rational> = stab.covering.iter().map(|&w| segments[w].base_crossing(&sheared)).collect();
    let y0 = clear_point(&stab.gap, &forbidden);
    let x0_sheared = Point2::new(z0.clone(), y0);
    let depth_pairs = segments.iter().filter(|sg| sg.contains_y(&x0_sheared.y)).count();
    debug_assert_eq!(depth_pairs, stab.depth);

    let level_triangles = bucket.triangle_indices();
    let x0 = unshear_point(&x0_sheared, &eps);
    let depth_triangles = count_containing(&x0_sheared, &t.subset(&level_triangles), &sheared);
    let depth_all = count_containing(&x0_sheared, t, &sheared);
    checks.push(chain::c8_depth(depth_triangles, depth_pairs, j_star, m, n));
    checks.push(chain::c9_containment(&segments, &sheared));

    let depth_max = match opts.oracle_max_n {
        Some(limit) if n <= limit => {
            let d = exact_max_depth(s, t)?.depth;
            checks.push(chain::c10_oracle(depth_triangles, d));
            Some(d)
        }
        _ => None,
    };

    let certificate = SelectionCertificate {
        n,
        m,
        shear_epsilon: eps,
        m_discarded,
        j_star,
        m_j: bucket.m_j,
        m0_size: m0.len(),
        n0,
        m1_size: sel.m_prime,
        n1: sel.n_prime,
        levels_used: sel.levels_used,
        z0,
        z0_retries: retries,
        m2_size: segments.len(),
        n2,
        lifts_dropped_degenerate: lift.degenerate,
        lifts_dropped_duplicate: lift.duplicates,
        x0,
        depth_pairs,
        depth_triangles,
        depth_all,
        depth_max,
        bound_rhs: bound_rhs(n, m),
        chain_checks: checks,
    };
    Ok(SelectionRun {
        certificate,
        sheared,
        buckets: buckets.clone(),
        level_triangles,
        pairs,
        m0,
        selection: sel,
        segments,
        x0_sheared,
    })
}

/// The max-slack level, unless its bases carry no pair of triangles; then the
/// max-slack level among the heavy levels that do.
fn pick_level(buckets: &[LevelBucket], m: usize) -> Result<usize> {
    let has_pair = |b: &LevelBucket| b.bases.iter().any(|g| g.m_ab() >= 2);
    let j = choose_level(buckets, m)?;
    if buckets.iter().any(|b| b.j == j && has_pair(b)) {
        return Ok(j);
    }
    let candidates: Vec<_> = buckets
        .iter()
        .filter(|b| has_pair(b) && level_is_heavy(b.j, b.m_j, m))
        .map(|b| (b.j, b.m_j))
        .collect();
    choose_level_from_counts(&candidates, m).map_err(|_| {
        Error::Degenerate("no heavy level has two triangles sharing a base".into())
    })
}

/// Moves `z0` through dyadic midpoints of the left half of the gap until no
/// lift is degenerate or duplicated and the line misses every point.
fn place_line(
    selected: &[&ProjectedPair],
    gap: &(Rational, Rational),
    s: &PointSet,
    max_retries: usize,
) -> Result<(Rational, LiftOutcome, usize)> {
    let lo = gap.0.clone();
    let mut z = midpoint(&gap.0, &gap.1);
    let mut last = None;
    for attempt in 0..=max_retries {
        match lift_to_vertical(selected, &z, s) {
            Ok(out) if out.degenerate == 0 && out.duplicates == 0 => return Ok((z, out, attempt)),
            Ok(out) => last = Some((z.clone(), out, attempt)),
            Err(Error::ZNotGeneral) => {}
            Err(e) => return Err(e),
        }
        z = midpoint(&lo, &z);
    }
    last.ok_or_else(|| Error::Degenerate(format!("z0 hits a point x-coordinate after {max_retries} retries")))
}

/// A point of the open `gap` outside `forbidden`, starting at the midpoint.
fn clear_point(gap: &(Rational, Rational), forbidden: &BTreeSet<Rational>) -> Rational {
    let mut y = midpoint(&gap.0, &gap.1);
    while forbidden.contains(&y) {
        y = midpoint(&gap.0, &y);
    }
    y
}

/// `C(k, 2)` summed over the bucket's bases.
pub fn pair_count(bucket: &LevelBucket) -> usize {
    bucket.bases.iter().map(|g| g.m_ab() * (g.m_ab().saturating_sub(1)) / 2).sum()
}

pub fn empirical_constant(depth: usize, n: usize, m: usize) -> f64 {
    let bound = bound_rhs(n, m);
    if bound.is_zero() {
        return 0.0;
    }
    (rat(depth) / bound).to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    fn ps(coords: &[(i64, i64)]) -> PointSet {
        PointSet::from_ints(coords, "test").unwrap()
    }

    fn group(base: (usize, usize), size: usize) -> BaseGroup {
        BaseGroup {
            base,
            apexes: (0..size).collect(),
            triangles: (0..size).collect(),
        }
    }

    #[test]
    fn base_is_longest_projection() {
        let s = ps(&[(0, 0), (3, 1), (1, 2)]);
        assert_eq!(base_of([0, 1, 2], &s), (0, 1));
    }

    #[test]
    fn base_tie_break_is_lexicographic() {
        // edges 0-1 and 1-2 both project to length 2 (x not distinct)
        let s = ps(&[(0, 0), (2, 1), (0, 2)]);
        assert_eq!(base_of([0, 1, 2], &s), (0, 1));
    }

    #[test]
    fn shared_base_groups() {
        let s = ps(&[(0, 0), (4, 0), (1, 2), (3, 2)]);
        let t = TriangleSet::from_triples(&[[0, 1, 2], [0, 1, 3]], 4).unwrap();
        let g = assign_bases(&s, &t);
        assert_eq!(g.len(), 1);
        let g = &g[&(0, 1)];
        assert_eq!(g.apexes, vec![2, 3]);
        assert_eq!(g.m_ab(), 2);
    }

    #[test]
    fn prune_examples() {
        let (kept, d) = prune_sparse_bases(vec![group((0, 1), 1), group((1, 2), 1), group((0, 2), 2)], 4, 4);
        assert_eq!((kept.len(), d), (3, 0));
        let (kept, d) = prune_sparse_bases(vec![group((0, 1), 1)], 1, 3);
        assert_eq!((kept.len(), d), (1, 0));
        // threshold 200/100 = 2
        let groups = vec![group((0, 1), 1), group((0, 2), 1), group((0, 3), 3), group((0, 4), 195)];
        let (kept, d) = prune_sparse_bases(groups, 200, 10);
        assert_eq!(d, 2);
        assert_eq!(kept.iter().map(BaseGroup::m_ab).sum::<usize>(), 198);
    }

    #[test]
    fn level_examples() {
        // m/n² = 1
        assert_eq!(level_of(1, 100, 10), 1);
        assert_eq!(level_of(4, 100, 10), 2);
        assert_eq!(level_of(7, 100, 10), 2);
        assert_eq!(level_of(16, 100, 10), 3);
        // m/n² = 1/4: m_ab = 1 is exactly 4 m/n²
        assert_eq!(level_of(1, 4, 4), 2);
        for mab in 2..40 {
            assert!(in_level_range(mab, level_of(mab, 50, 7), 50, 7));
        }
    }

    #[test]
    fn bucket_rejects_m_above_n_cubed() {
        assert!(matches!(bucket_bases(vec![], 28, 3), Err(Error::BucketRangeEmpty { .. })));
    }

    #[test]
    fn level_choice_examples() {
        assert_eq!(choose_level_from_counts(&[(1, 6)], 8).unwrap(), 1);
        // m = 8: m_1 = 1, m_2 = 3 gives slacks 4 and 24
        assert_eq!(choose_level_from_counts(&[(1, 1), (2, 3)], 8).unwrap(), 2);
        assert_eq!(choose_level_from_counts(&[(1, 5), (2, 5), (3, 5)], 30).unwrap(), 3);
        assert!(choose_level_from_counts(&[(1, 1)], 100).is_err());
    }

    #[test]
    fn pair_counts() {
        let parabola: Vec<(i64, i64)> = (0..8).map(|i| (i, i * i)).collect();
        let s = ps(&parabola);
        let bucket = |sizes: &[usize]| {
            let mut next = 2;
            let bases = sizes
                .iter()
                .map(|&k| {
                    let apexes: Vec<usize> = (next..next + k).collect();
                    next += k;
                    BaseGroup {
                        base: (0, 1),
                        triangles: apexes.clone(),
                        apexes,
                    }
                })
                .collect();
            LevelBucket {
                j: 1,
                m_j: sizes.iter().sum(),
                bases,
            }
        };
        assert_eq!(build_projected_pairs(&bucket(&[3]), &s).0.len(), 3);
        assert_eq!(build_projected_pairs(&bucket(&[1]), &s).0.len(), 0);
        let b = bucket(&[2, 4]);
        let (pairs, m0) = build_projected_pairs(&b, &s);
        assert_eq!((pairs.len(), m0.len(), pair_count(&b)), (7, 7, 7));
        for (p, it) in pairs.iter().zip(m0.items()) {
            assert!(s[p.apex_pair.0].x < s[p.apex_pair.1].x);
            assert_eq!(it.lo, s[p.apex_pair.0].x);
        }
    }

    fn figure_pair() -> (PointSet, ProjectedPair) {
        let s = ps(&[(0, 0), (4, 0), (1, 2), (3, 2)]);
        let p = ProjectedPair {
            base: (0, 1),
            apex_pair: (2, 3),
        };
        (s, p)
    }

    #[test]
    fn lift_figure_example() {
        let (s, pair) = figure_pair();
        let out = lift_to_vertical(&[&pair], &ratio(3, 2), &s).unwrap();
        assert_eq!(out.segments.len(), 1);
        let sg = &out.segments[0];
        // ad: y = 2x/3 gives 1; bc: y = 2(4 - x)/3 gives 5/3
        assert_eq!((sg.y_lo.clone(), sg.y_hi.clone()), (int(1), ratio(5, 3)));
        let inner = Point2::new(ratio(3, 2), ratio(4, 3));
        assert!(point_in_open_triangle(&inner, &s[0], &s[1], &s[2]));
        assert!(chain::c9_containment(&out.segments, &s).pass);
    }

    #[test]
    fn lift_symmetric_line_is_degenerate() {
        let (s, pair) = figure_pair();
        let out = lift_to_vertical(&[&pair], &int(2), &s).unwrap();
        assert!(out.segments.is_empty());
        assert_eq!(out.degenerate, 1);
    }

    #[test]
    fn lift_mirror_has_same_length() {
        let (s, pair) = figure_pair();
        let mirrored = ps(&[(0, 0), (-4, 0), (-1, 2), (-3, 2)]);
        let mpair = ProjectedPair {
            base: (1, 0),
            apex_pair: (3, 2),
        };
        let a = lift_to_vertical(&[&pair], &ratio(3, 2), &s).unwrap().segments;
        let b = lift_to_vertical(&[&mpair], &ratio(-3, 2), &mirrored).unwrap().segments;
        assert_eq!(&a[0].y_hi - &a[0].y_lo, &b[0].y_hi - &b[0].y_lo);
    }

    #[test]
    fn lift_rejects_point_abscissa() {
        let (s, pair) = figure_pair();
        assert_eq!(lift_to_vertical(&[&pair], &int(1), &s), Err(Error::ZNotGeneral));
    }

    #[test]
    fn figure_instance_end_to_end() {
        let s = ps(&[(0, 0), (4, 0), (1, 2), (3, 2)]);
        let t = TriangleSet::from_triples(&[[0, 1, 2], [0, 1, 3]], 4).unwrap();
        let run = run_selection_detailed(&s, &t, &SelectionOptions::default()).unwrap();
        let c = &run.certificate;
        assert!(c.all_pass(), "{:#?}", c.chain_checks);
        assert!(c.depth_triangles >= 1);
        assert_eq!(c.m2_size, 1);
        assert_eq!(c.depth_max, Some(2));
        assert!(count_containing(&c.x0, &t, &s) >= 1);
    }

    #[test]
    fn unit_square_end_to_end() {
        let s = ps(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let t = TriangleSet::from_triples(&[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]], 4).unwrap();
        let c = run_selection(&s, &t, &SelectionOptions::default()).unwrap();
        assert!(c.all_pass());
        assert!((1..=2).contains(&c.depth_triangles));
        assert_eq!(c.depth_max, Some(2));
    }

    #[test]
    fn too_small_rejected() {
        let s = ps(&[(0, 0), (1, 0), (0, 1)]);
        let t = TriangleSet::from_triples(&[[0, 1, 2]], 3).unwrap();
        assert!(matches!(
            run_selection(&s, &t, &SelectionOptions::default()),
            Err(Error::InstanceTooSmall { .. })
        ));
    }

    #[test]
    fn chain_c8_uses_ceiling() {
        // 4^1 * 10 / 10² = 2/5 pairs per triangle bound, so 1 pair needs 3 triangles
        let c = chain::c8_depth(2, 1, 1, 10, 10);
        assert_eq!(c.rhs, int(3));
        assert!(!c.pass);
    }

    #[test]
    fn bound_is_positive() {
        assert!(bound_rhs(10, 120) > Rational::zero());
        assert!(empirical_constant(3, 10, 120) > 0.0);
    }
}
