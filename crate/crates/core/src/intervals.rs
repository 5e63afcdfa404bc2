//! One-dimensional selection on open intervals.
//!
//! [`max_stabbing`] finds a point of maximum depth by an endpoint sweep.
//! [`weighted_select`] distributes a multiset of intervals over a balanced
//! tree of endpoint gaps and returns the node with the best ratio of
//! intervals to distinct endpoints; all of its intervals share that node's
//! gap.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::geometry::{midpoint, Rational};
use crate::{Error, Result};

/// Open interval `(lo, hi)` with an opaque witness id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval1 {
    pub lo: Rational,
    pub hi: Rational,
    pub witness: usize,
}

impl Interval1 {
    pub fn new(lo: Rational, hi: Rational, witness: usize) -> Result<Self> {
        if lo >= hi {
            return Err(Error::EmptyInterval);
        }
        Ok(Interval1 { lo, hi, witness })
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalMultiset {
    items: Vec<Interval1>,
    endpoints: Vec<Rational>,
}

impl IntervalMultiset {
    pub fn new(items: Vec<Interval1>) -> Self {
        let endpoints: BTreeSet<&Rational> = items.iter().flat_map(|i| [&i.lo, &i.hi]).collect();
        let endpoints = endpoints.into_iter().cloned().collect();
        IntervalMultiset { items, endpoints }
    }

    pub fn items(&self) -> &[Interval1] {
        &self.items
    }

    /// Sorted distinct endpoint values.
    pub fn endpoints(&self) -> &[Rational] {
        &self.endpoints
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    fn index_of(&self, v: &Rational) -> usize {
        self.endpoints
            .binary_search(v)
            .expect("endpoint belongs to the endpoint set")
    }

    fn index_pair(&self, i: &Interval1) -> (usize, usize) {
        (self.index_of(&i.lo), self.index_of(&i.hi))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabbingResult {
    pub point: Rational,
    pub depth: usize,
    /// Witnesses of the intervals containing `point`.
    pub covering: Vec<usize>,
    /// The open gap between consecutive endpoints that `point` bisects; every
    /// point of it has the same depth.
    pub gap: (Rational, Rational),
}

/// Point of maximum depth; ties go to the leftmost gap.
pub fn max_stabbing(e: &IntervalMultiset) -> Result<StabbingResult> {
    if e.is_empty() {
        return Err(Error::NoIntervals);
    }
    let k = e.endpoints.len();
    let mut delta = vec![0i64; k];
    for it in &e.items {
        let (i, j) = e.index_pair(it);
        delta[i] += 1;
        delta[j] -= 1;
    }
    let (mut best_gap, mut best_depth, mut running) = (0, 0i64, 0i64);
    for (g, d) in delta.iter().enumerate().take(k - 1) {
        running += d;
        if running > best_depth {
            best_depth = running;
            best_gap = g;
        }
    }
    let gap = (e.endpoints[best_gap].clone(), e.endpoints[best_gap + 1].clone());
    let point = midpoint(&gap.0, &gap.1);
    let covering: Vec<usize> = e
        .items
        .iter()
        .filter(|i| i.contains(&point))
        .map(|i| i.witness)
        .collect();
    debug_assert_eq!(covering.len() as i64, best_depth);
    Ok(StabbingResult {
        point,
        depth: covering.len(),
        covering,
        gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    pub id: usize,
    /// 1 for the root.
    pub level: usize,
    /// Inclusive range of endpoint indices covered by the node.
    pub first: usize,
    pub last: usize,
    /// Index `s` of the split gap `(V[s-1], V[s])`; `None` for single-endpoint nodes.
    pub split: Option<usize>,
}

/// Balanced binary decomposition of the gaps between sorted endpoints.
///
/// Node ids are heap indices (root 0, children `2i+1`, `2i+2`). A node over
/// `len` endpoints splits after its first `ceil(len/2)`.
#[derive(Debug, Clone)]
pub struct EndpointTree {
    nodes: Vec<Option<TreeNode>>,
    endpoints: usize,
}

impl EndpointTree {
    pub fn new(endpoints: usize) -> Self {
        let mut tree = EndpointTree {
            nodes: Vec::new(),
            endpoints,
        };
        if endpoints > 0 {
            tree.build(0, 1, 0, endpoints - 1);
        }
        tree
    }

    fn build(&mut self, id: usize, level: usize, first: usize, last: usize) {
        if self.nodes.len() <= id {
            self.nodes.resize(id + 1, None);
        }
        let len = last - first + 1;
        let split = (len >= 2).then(|| first + len.div_ceil(2));
        self.nodes[id] = Some(TreeNode {
            id,
            level,
            first,
            last,
            split,
        });
        if let Some(s) = split {
            self.build(2 * id + 1, level + 1, first, s - 1);
            self.build(2 * id + 2, level + 1, s, last);
        }
    }

    pub fn node(&self, id: usize) -> Option<&TreeNode> {
        self.nodes.get(id).and_then(Option::as_ref)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().flatten()
    }

    pub fn endpoint_count(&self) -> usize {
        self.endpoints
    }

    /// Number of levels that carry a split gap.
    pub fn height(&self) -> usize {
        self.nodes()
            .filter(|n| n.split.is_some())
            .map(|n| n.level)
            .max()
            .unwrap_or(0)
    }

    /// Highest node whose split gap lies inside the index interval `(i, j)`.
    /// An interval over adjacent endpoints lands on the node owning that gap.
    pub fn canonical_node(&self, i: usize, j: usize) -> usize {
        assert!(i < j && j < self.endpoints, "interval indices out of order or range");
        let mut id = 0;
        loop {
            let node = self.node(id).expect("descent stays inside the tree");
            let s = node.split.expect("nodes spanning two endpoints are split");
            if i < s && s <= j {
                return id;
            }
            id = if j < s { 2 * id + 1 } else { 2 * id + 2 };
        }
    }
}

/// Canonical node of `interval` in the tree built over `e`'s endpoints.
pub fn assign_canonical_node(interval: &Interval1, e: &IntervalMultiset, tree: &EndpointTree) -> usize {
    let (i, j) = e.index_pair(interval);
    tree.canonical_node(i, j)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSelection {
    /// Indices into the input multiset's items.
    pub selected: Vec<usize>,
    pub common_point: Rational,
    /// The selected node's split gap; contained in every selected interval.
    pub gap: (Rational, Rational),
    pub node: usize,
    pub m_prime: usize,
    pub n_prime: usize,
    /// Number of tree levels holding at least one interval.
    pub levels_used: usize,
}

/// Per-node statistics of the canonical assignment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeLoad {
    pub members: Vec<usize>,
    pub distinct_endpoints: usize,
}

pub fn node_loads(e: &IntervalMultiset, tree: &EndpointTree) -> Vec<NodeLoad> {
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); tree.nodes.len()];
    for (idx, it) in e.items.iter().enumerate() {
        members[assign_canonical_node(it, e, tree)].push(idx);
    }
    members
        .into_iter()
        .map(|members| {
            let ends: BTreeSet<usize> = members
                .iter()
                .flat_map(|&m| {
                    let (i, j) = e.index_pair(&e.items[m]);
                    [i, j]
                })
                .collect();
            NodeLoad {
                distinct_endpoints: ends.len(),
                members,
            }
        })
        .collect()
}

pub fn weighted_select(e: &IntervalMultiset) -> Result<WeightedSelection> {
    if e.is_empty() {
        return Err(Error::NoIntervals);
    }
    let tree = EndpointTree::new(e.endpoints.len());
    let loads = node_loads(e, &tree);

    // ratio m/n, then larger m, then smaller id
    let mut best: Option<usize> = None;
    for (id, load) in loads.iter().enumerate() {
        if load.members.is_empty() {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => {
                let cur = &loads[b];
                let lhs = load.members.len() * cur.distinct_endpoints;
                let rhs = cur.members.len() * load.distinct_endpoints;
                lhs > rhs || (lhs == rhs && load.members.len() > cur.members.len())
            }
        };
        if better {
            best = Some(id);
        }
    }
    let id = best.expect("nonempty multiset occupies some node");
    let node = tree.node(id).expect("occupied node exists");
    let s = node.split.expect("occupied node has a split gap");
    let gap = (e.endpoints[s - 1].clone(), e.endpoints[s].clone());
    let levels: BTreeSet<usize> = loads
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.members.is_empty())
        .map(|(i, _)| tree.node(i).expect("occupied node exists").level)
        .collect();

    let sel = WeightedSelection {
        selected: loads[id].members.clone(),
        common_point: midpoint(&gap.0, &gap.1),
        gap,
        node: id,
        m_prime: loads[id].members.len(),
        n_prime: loads[id].distinct_endpoints,
        levels_used: levels.len(),
    };
    assert!(
        ratio_guarantee_holds(&sel, e.len(), e.endpoints.len()),
        "weighted selection guarantee violated"
    );
    Ok(sel)
}

/// `m' / n' >= m / (n * L)` by cross-multiplication.
pub fn ratio_guarantee_holds(sel: &WeightedSelection, m: usize, n: usize) -> bool {
    let lhs = BigInt::from(sel.m_prime) * BigInt::from(n) * BigInt::from(sel.levels_used);
    let rhs = BigInt::from(m) * BigInt::from(sel.n_prime);
    lhs >= rhs
}
