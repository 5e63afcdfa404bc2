//! The certificate record and its independent re-verification.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{
    count_containing, format_rational, int, rational_str, shear_point, shear_to_distinct_x, Point2, PointSet,
    Rational, TriangleSet,
};
use crate::intervals::weighted_select;
use crate::oracle::exact_max_depth;
use crate::selection::{self, chain, LiftedSegment};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "==",
            Relation::Ge => ">=",
        })
    }
}

/// One inequality of the counting argument, evaluated on concrete numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub name: String,
    pub description: String,
    #[serde(with = "rational_str")]
    pub lhs: Rational,
    pub relation: Relation,
    #[serde(with = "rational_str")]
    pub rhs: Rational,
    pub pass: bool,
}

impl ChainCheck {
    pub fn evaluate(name: &str, description: &str, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        ChainCheck {
            name: name.to_string(),
            description: description.to_string(),
            pass: relation.holds(&lhs, &rhs),
            lhs,
            relation,
            rhs,
        }
    }
}

impl fmt::Display for ChainCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {} {} {} [{}] {}",
            self.name,
            format_rational(&self.lhs),
            self.relation,
            format_rational(&self.rhs),
            if self.pass { "ok" } else { "FAIL" },
            self.description
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub struct SelectionCertificate {
    pub n: usize,
    pub m: usize,
    /// Shear applied before base assignment, `x' = x + eps * y`.
    #[serde(with = "rational_str")]
    pub shear_epsilon: Rational,
    pub m_discarded: usize,
    pub j_star: usize,
    pub m_j: usize,
    #[serde(rename = "M0_size")]
    pub m0_size: usize,
    pub n0: usize,
    #[serde(rename = "M1_size")]
    pub m1_size: usize,
    pub n1: usize,
    pub levels_used: usize,
    /// Vertical line position, in sheared coordinates.
    #[serde(with = "rational_str")]
    pub z0: Rational,
    pub z0_retries: usize,
    #[serde(rename = "M2_size")]
    pub m2_size: usize,
    pub n2: usize,
    pub lifts_dropped_degenerate: usize,
    pub lifts_dropped_duplicate: usize,
    /// Witness point, in input coordinates.
    pub x0: Point2,
    pub depth_pairs: usize,
    /// Triangles of the chosen level containing `x0`.
    pub depth_triangles: usize,
    /// Triangles of the whole input containing `x0`.
    pub depth_all: usize,
    pub depth_max: Option<usize>,
    #[serde(with = "rational_str")]
    pub bound_rhs: Rational,
    pub chain_checks: Vec<ChainCheck>,
}

impl SelectionCertificate {
    pub fn all_pass(&self) -> bool {
        self.chain_checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&ChainCheck> {
        self.chain_checks.iter().find(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&ChainCheck> {
        self.chain_checks.iter().find(|c| c.name == name)
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} {} {} {} {}",
            self.n,
            self.m,
            self.j_star,
            self.depth_triangles,
            format_rational(&self.bound_rhs)
        )
    }
}

/// Outcome of re-checking one named item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyItem {
    pub name: String,
    pub problems: Vec<String>,
}

impl VerifyItem {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

#[derive(Debug, Default)]
struct Ledger {
    items: Vec<VerifyItem>,
}

impl Ledger {
    fn item(&mut self, name: &str) -> &mut VerifyItem {
        if let Some(i) = self.items.iter().position(|it| it.name == name) {
            return &mut self.items[i];
        }
        self.items.push(VerifyItem {
            name: name.to_string(),
            problems: Vec::new(),
        });
        self.items.last_mut().unwrap()
    }

    fn touch(&mut self, name: &str) {
        self.item(name);
    }

    fn expect_eq<T: PartialEq + fmt::Debug>(&mut self, name: &str, field: &str, recorded: &T, recomputed: &T) {
        let it = self.item(name);
        if recorded != recomputed {
            it.problems
                .push(format!("recorded {field} {recorded:?} != recomputed {recomputed:?}"));
        }
    }

    fn require(&mut self, name: &str, cond: bool, msg: impl FnOnce() -> String) {
        let it = self.item(name);
        if !cond {
            it.problems.push(msg());
        }
    }
}

/// Re-derives every quantity of `cert` from the instance and re-evaluates the
/// chain. Returns one item per check; the certificate is valid iff all are ok.
///
/// Quantities that the pipeline obtains by a choice (the level, the line
/// position, the witness point) are taken from the certificate and only
/// checked for validity; everything counted from them is recounted.
pub fn verify_items(s: &PointSet, t: &TriangleSet, cert: &SelectionCertificate) -> Vec<VerifyItem> {
    let mut led = Ledger::default();
    led.expect_eq("instance", "n", &cert.n, &s.len());
    led.expect_eq("instance", "m", &cert.m, &t.len());
    if cert.n != s.len() || cert.m != t.len() {
        return led.items;
    }
    let (n, m) = (cert.n, cert.m);

    let (sheared, eps) = match shear_to_distinct_x(s) {
        Ok(v) => v,
        Err(e) => {
            led.require("instance", false, || e.to_string());
            return led.items;
        }
    };
    led.expect_eq("instance", "shear_epsilon", &cert.shear_epsilon, &eps);

    let groups = selection::assign_bases(&sheared, t);
    let (kept, discarded) = selection::prune_sparse_bases(groups.into_values().collect(), m, n);
    led.expect_eq("C1a", "m_discarded", &cert.m_discarded, &discarded);
    let buckets = match selection::bucket_bases(kept.clone(), m, n) {
        Ok(b) => b,
        Err(e) => {
            led.require("C2", false, || e.to_string());
            return led.items;
        }
    };
    let mut checks = vec![chain::c1_discarded(m, discarded), chain::c1_survivors(&kept, m, n)];
    checks.push(chain::c2_bucket_ranges(&buckets, m, n));

    let Some(bucket) = buckets.iter().find(|b| b.j == cert.j_star) else {
        led.require("C3", false, || format!("level {} holds no bases", cert.j_star));
        return led.items;
    };
    led.expect_eq("C3", "m_j", &cert.m_j, &bucket.m_j);
    checks.push(chain::c3_level(bucket.j, bucket.m_j, m));

    let (pairs, m0) = selection::build_projected_pairs(bucket, &sheared);
    led.expect_eq("C4", "M0_size", &cert.m0_size, &m0.len());
    led.expect_eq("C4", "n0", &cert.n0, &m0.endpoints().len());
    checks.push(chain::c4_pairs(bucket, m0.len(), m, n));

    // z0 must be a valid line position for the recorded selection.
    let xs: BTreeSet<&Rational> = sheared.points().iter().map(|p| &p.x).collect();
    led.require("C5", !xs.contains(&cert.z0), || "z0 coincides with a point x-coordinate".into());
    let sel = match weighted_select(&m0) {
        Ok(sel) => sel,
        Err(e) => {
            led.require("C5", false, || e.to_string());
            return led.items;
        }
    };
    led.expect_eq("C5", "M1_size", &cert.m1_size, &sel.m_prime);
    led.expect_eq("C5", "n1", &cert.n1, &sel.n_prime);
    led.expect_eq("C5", "levels_used", &cert.levels_used, &sel.levels_used);
    led.require(
        "C5",
        sel.selected.iter().all(|&i| m0.items()[i].contains(&cert.z0)),
        || "z0 is not inside every selected interval".into(),
    );
    checks.push(chain::c5_weighted(sel.m_prime, sel.n_prime, m0.len(), m0.endpoints().len(), sel.levels_used));

    let selected: Vec<_> = sel.selected.iter().map(|&i| &pairs[m0.items()[i].witness]).collect();
    let lift = match selection::lift_to_vertical(&selected, &cert.z0, &sheared) {
        Ok(l) => l,
        Err(e) => {
            led.require("C6", false, || e.to_string());
            return led.items;
        }
    };
    let segments = lift.segments;
    let n2 = selection::distinct_endpoints(&segments);
    led.expect_eq("C6", "M2_size", &cert.m2_size, &segments.len());
    led.expect_eq("C6", "n2", &cert.n2, &n2);
    led.expect_eq("C7", "lifts_dropped_degenerate", &cert.lifts_dropped_degenerate, &lift.degenerate);
    led.expect_eq("C7", "lifts_dropped_duplicate", &cert.lifts_dropped_duplicate, &lift.duplicates);
    checks.push(chain::c6_endpoints(n2, n, sel.n_prime));
    checks.push(chain::c7_distinct(&segments));

    let x0s = shear_point(&cert.x0, &eps);
    led.require("C8", x0s.x == cert.z0, || "x0 does not lie on the line x = z0".into());
    let depth_pairs = segments.iter().filter(|sg| sg.contains_y(&x0s.y)).count();
    let level_tris = t.subset(&bucket.triangle_indices());
    let depth_triangles = count_containing(&cert.x0, &level_tris, s);
    led.expect_eq("C8", "depth_pairs", &cert.depth_pairs, &depth_pairs);
    led.expect_eq("C8", "depth_triangles", &cert.depth_triangles, &depth_triangles);
    led.expect_eq("C8", "depth_all", &cert.depth_all, &count_containing(&cert.x0, t, s));
    checks.push(chain::c8_depth(depth_triangles, depth_pairs, bucket.j, m, n));
    checks.push(chain::c9_containment(&segments, &sheared));

    if let Some(recorded) = cert.depth_max {
        match exact_max_depth(s, t) {
            Ok(res) => {
                led.expect_eq("C10", "depth_max", &recorded, &res.depth);
                checks.push(chain::c10_oracle(depth_triangles, res.depth));
            }
            Err(e) => led.require("C10", false, || e.to_string()),
        }
    }
    led.expect_eq("bound", "bound_rhs", &cert.bound_rhs, &selection::bound_rhs(n, m));

    for check in &checks {
        led.touch(&check.name);
        if !check.pass {
            let c = check.clone();
            led.require(&check.name, false, || format!("recomputed inequality fails: {c}"));
        }
        match cert.chain_checks.iter().find(|c| c.name == check.name) {
            Some(rec) => {
                let c = check.clone();
                let rec = rec.clone();
                led.require(&check.name, rec == c, || format!("recorded `{rec}` != recomputed `{c}`"));
            }
            None => led.require(&check.name, false, || "check missing from certificate".into()),
        }
    }
    let known: BTreeSet<&str> = checks.iter().map(|c| c.name.as_str()).collect();
    for rec in &cert.chain_checks {
        let name = rec.name.clone();
        led.require(&rec.name, known.contains(rec.name.as_str()), || format!("unknown check {name}"));
    }
    led.items
}

/// `Ok(())` iff every item re-verifies; otherwise names the first failure.
pub fn verify(s: &PointSet, t: &TriangleSet, cert: &SelectionCertificate) -> Result<()> {
    match verify_items(s, t, cert).into_iter().find(|it| !it.ok()) {
        None => Ok(()),
        Some(it) => Err(Error::CheckFailed {
            detail: it.problems.join("; "),
            name: it.name,
        }),
    }
}

pub(crate) fn rat(v: usize) -> Rational {
    int(v as i64)
}

pub(crate) fn segments_distinct(segments: &[LiftedSegment]) -> usize {
    segments
        .iter()
        .map(|s| (&s.y_lo, &s.y_hi))
        .collect::<BTreeSet<_>>()
        .len()
}
