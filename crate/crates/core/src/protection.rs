//! Protection routings built from a pair of completely independent spanning
//! trees, and packet forwarding over them under node failures.
//!
//! For destination `d`, the pair is ordered so that `d` is a leaf of the
//! second tree. `L1` holds the vertices that are leaves only in the first
//! tree and `L2` the leaves of the second tree. Removing `L1` from the first
//! tree and `L2` from the second leaves two skeletons that partition the
//! vertex set; the second one hangs off `d` through the unique tree-2 edge
//! at `d` (the bridge). Primary next-hops point along the skeletons toward
//! `d`; a vertex in `L_i` uses its only tree-`i` neighbor as second next-hop.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::cist::CistSet;
use crate::error::{Error, Result};
use crate::topology::{LogicGraph, VertexId};
use crate::tree::Tree;
use crate::verify::{FailedComponent, ProtectionDefect, VerificationReport, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Skeleton {
    First,
    Second,
}

/// A destination-rooted routing with one primary and one second next-hop
/// per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtectionRouting {
    destination: VertexId,
    trees: (usize, usize),
    pnh: Vec<VertexId>,
    snh: Vec<VertexId>,
    skeleton: Vec<Skeleton>,
    bridge: (VertexId, VertexId),
    leaf_bridge: Option<(VertexId, VertexId)>,
}

impl ProtectionRouting {
    /// Assembles a routing from raw tables; entries at the destination are
    /// ignored. Only shape is checked here, use [`verify_protected`] for
    /// semantics.
    pub fn from_tables(
        destination: VertexId,
        trees: (usize, usize),
        pnh: Vec<VertexId>,
        snh: Vec<VertexId>,
        skeleton: Vec<Skeleton>,
        bridge: (VertexId, VertexId),
        leaf_bridge: Option<(VertexId, VertexId)>,
    ) -> Result<Self> {
        let n = pnh.len();
        if snh.len() != n || skeleton.len() != n || destination.index() >= n {
            return Err(Error::Structural(
                "routing tables have mismatched sizes".into(),
            ));
        }
        if pnh.iter().chain(&snh).any(|v| v.index() >= n) {
            return Err(Error::Structural(
                "next-hop outside the vertex range".into(),
            ));
        }
        Ok(ProtectionRouting {
            destination,
            trees,
            pnh,
            snh,
            skeleton,
            bridge,
            leaf_bridge,
        })
    }

    pub fn destination(&self) -> VertexId {
        self.destination
    }

    /// Indices of the (first, second) trees in the originating set, after
    /// ordering the pair so the destination is a leaf of the second.
    pub fn trees(&self) -> (usize, usize) {
        self.trees
    }

    pub fn vertex_count(&self) -> usize {
        self.pnh.len()
    }

    /// Primary next-hop; `None` at the destination.
    pub fn pnh(&self, u: VertexId) -> Option<VertexId> {
        (u != self.destination).then(|| self.pnh[u.index()])
    }

    /// Second next-hop; `None` at the destination.
    pub fn snh(&self, u: VertexId) -> Option<VertexId> {
        (u != self.destination).then(|| self.snh[u.index()])
    }

    pub fn skeleton(&self, u: VertexId) -> Skeleton {
        self.skeleton[u.index()]
    }

    /// The tree-2 edge at the destination, directed `(skeleton vertex, d)`.
    pub fn bridge(&self) -> (VertexId, VertexId) {
        self.bridge
    }

    /// When the destination is a leaf of both trees, its tree-1 edge,
    /// directed `(skeleton vertex, d)`.
    pub fn leaf_bridge(&self) -> Option<(VertexId, VertexId)> {
        self.leaf_bridge
    }

    /// Vertices that are leaves only in the first tree (the second skeleton).
    pub fn first_leaves(&self) -> Vec<VertexId> {
        self.members(Skeleton::Second)
    }

    /// Leaves of the second tree (the first skeleton).
    pub fn second_leaves(&self) -> Vec<VertexId> {
        self.members(Skeleton::First)
    }

    pub fn members(&self, which: Skeleton) -> Vec<VertexId> {
        (0..self.vertex_count())
            .map(VertexId::from_index)
            .filter(|&v| self.skeleton(v) == which)
            .collect()
    }

    /// Directed primary links inside one skeleton, `(u, pnh(u))`.
    pub fn skeleton_links(&self, which: Skeleton) -> Vec<(VertexId, VertexId)> {
        let d = self.destination;
        (0..self.vertex_count())
            .map(VertexId::from_index)
            .filter(|&u| u != d && self.skeleton(u) == which)
            .map(|u| (u, self.pnh[u.index()]))
            .filter(|&link| link != self.bridge)
            .collect()
    }

    /// Primary next-hops indexed by vertex; the destination maps to itself.
    pub fn pnh_table(&self) -> &[VertexId] {
        &self.pnh
    }

    /// Second next-hops indexed by vertex; the destination maps to itself.
    pub fn snh_table(&self) -> &[VertexId] {
        &self.snh
    }

    pub fn skeleton_table(&self) -> &[Skeleton] {
        &self.skeleton
    }
}

/// Configures the routing toward `d` from two trees of a dual-CIST.
pub fn configure_protection_routing(
    t_a: &Tree,
    t_b: &Tree,
    d: VertexId,
) -> Result<ProtectionRouting> {
    configure_indexed(t_a, t_b, (0, 1), d)
}

/// Like [`configure_protection_routing`] for trees `a` and `b` of a set.
pub fn configure_pair(set: &CistSet, a: usize, b: usize, d: VertexId) -> Result<ProtectionRouting> {
    let trees = set.trees();
    if a == b || a >= trees.len() || b >= trees.len() {
        return Err(Error::params(format!(
            "tree pair ({a}, {b}) is not valid for a set of {}",
            trees.len()
        )));
    }
    configure_indexed(&trees[a], &trees[b], (a, b), d)
}

fn configure_indexed(
    t_a: &Tree,
    t_b: &Tree,
    (a, b): (usize, usize),
    d: VertexId,
) -> Result<ProtectionRouting> {
    let n = t_a.vertex_count();
    if t_b.vertex_count() != n {
        return Err(Error::params("trees span different vertex sets"));
    }
    if d.index() >= n {
        return Err(Error::params(format!("destination {d} is not a vertex")));
    }
    if let Some(v) = (0..n)
        .map(VertexId::from_index)
        .find(|&v| t_a.is_inner(v) && t_b.is_inner(v))
    {
        return Err(Error::NotDualCist(v));
    }

    let (first, second, trees) = if t_b.is_leaf(d) {
        (t_a, t_b, (a, b))
    } else if t_a.is_leaf(d) {
        (t_b, t_a, (b, a))
    } else {
        return Err(Error::Structural(format!(
            "destination {d} is a leaf of neither tree"
        )));
    };

    // L1 = leaves of the first tree that are inner in the second.
    let skeleton: Vec<Skeleton> = (0..n)
        .map(VertexId::from_index)
        .map(|v| {
            if first.is_leaf(v) && !second.is_leaf(v) {
                Skeleton::Second
            } else {
                Skeleton::First
            }
        })
        .collect();

    const UNSET: VertexId = VertexId(u32::MAX);
    let mut pnh = vec![UNSET; n];
    pnh[d.index()] = d;

    let orient = |tree: &Tree, root: VertexId, which: Skeleton, pnh: &mut Vec<VertexId>| {
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in tree.neighbors(u) {
                if skeleton[w.index()] == which && pnh[w.index()] == UNSET {
                    pnh[w.index()] = u;
                    queue.push_back(w);
                }
            }
        }
    };

    orient(first, d, Skeleton::First, &mut pnh);
    let anchor = second.neighbors(d)[0];
    pnh[anchor.index()] = d;
    orient(second, anchor, Skeleton::Second, &mut pnh);

    if let Some(i) = pnh.iter().position(|&p| p == UNSET) {
        return Err(Error::Structural(format!(
            "vertex {i} is not reached from the destination through its skeleton"
        )));
    }

    let snh = (0..n)
        .map(VertexId::from_index)
        .map(|u| match skeleton[u.index()] {
            _ if u == d => d,
            Skeleton::Second => first.neighbors(u)[0],
            Skeleton::First => second.neighbors(u)[0],
        })
        .collect();

    let leaf_bridge = first.is_leaf(d).then(|| (first.neighbors(d)[0], d));

    Ok(ProtectionRouting {
        destination: d,
        trees,
        pnh,
        snh,
        skeleton,
        bridge: (anchor, d),
        leaf_bridge,
    })
}

/// One routing per unordered tree pair `a < b`, in lexicographic order.
pub fn build_mpr(set: &CistSet, d: VertexId) -> Result<Vec<ProtectionRouting>> {
    let t = set.len();
    if t < 2 {
        return Err(Error::Config(format!(
            "multi-protection routing needs at least two trees, got {t}"
        )));
    }
    let mut out = Vec::with_capacity(t * (t - 1) / 2);
    for a in 0..t {
        for b in a + 1..t {
            out.push(configure_pair(set, a, b, d)?);
        }
    }
    Ok(out)
}

/// Checks every non-destination vertex against the failure of its primary
/// next-hop and of its primary link.
pub fn verify_protected(g: &LogicGraph, r: &ProtectionRouting) -> VerificationReport {
    let n = r.vertex_count();
    let d = r.destination;
    let fail = VerificationReport::Fail;
    if n != g.vertex_count() {
        return fail(Witness::PrimaryLoop { vertex: d });
    }
    let vertices = || (0..n).map(VertexId::from_index).filter(move |&u| u != d);

    for u in vertices() {
        let p = r.pnh[u.index()];
        if !g.has_edge(u, p) {
            return fail(Witness::NonEdgeHop { from: u, to: p });
        }
    }
    for u in vertices() {
        let mut cur = u;
        let mut steps = 0;
        while cur != d {
            cur = r.pnh[cur.index()];
            steps += 1;
            if steps > n {
                return fail(Witness::PrimaryLoop { vertex: u });
            }
        }
    }

    for u in vertices() {
        let p = r.pnh[u.index()];
        let w = r.snh[u.index()];
        let mut failures = vec![];
        if p != d {
            failures.push(FailedComponent::Node(p));
        }
        failures.push(FailedComponent::Link(u, p));

        for f in failures {
            let usable = w != u
                && g.has_edge(u, w)
                && match f {
                    FailedComponent::Node(x) => w != x,
                    FailedComponent::Link(_, x) => w != x,
                };
            if !usable {
                return fail(Witness::Unprotected {
                    vertex: u,
                    failure: f,
                    defect: ProtectionDefect::NotUsableNeighbor,
                });
            }
            let mut cur = w;
            while cur != d {
                if cur == u {
                    return fail(Witness::Unprotected {
                        vertex: u,
                        failure: f,
                        defect: ProtectionDefect::Upstream,
                    });
                }
                if f == FailedComponent::Node(cur) {
                    return fail(Witness::Unprotected {
                        vertex: u,
                        failure: f,
                        defect: ProtectionDefect::NoPathToDestination,
                    });
                }
                cur = r.pnh[cur.index()];
            }
        }
    }
    VerificationReport::Pass
}

/// A set of faulty vertices over `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultSet {
    bits: Vec<u64>,
    len: usize,
}

impl FaultSet {
    pub fn new(vertex_count: usize) -> Self {
        FaultSet {
            bits: vec![0; vertex_count.div_ceil(64)],
            len: 0,
        }
    }

    pub fn from_vertices(vertex_count: usize, faults: impl IntoIterator<Item = VertexId>) -> Self {
        let mut set = FaultSet::new(vertex_count);
        for v in faults {
            set.insert(v);
        }
        set
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.bits[v.index() / 64] >> (v.index() % 64) & 1 == 1
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        let word = &mut self.bits[v.index() / 64];
        let mask = 1u64 << (v.index() % 64);
        let fresh = *word & mask == 0;
        *word |= mask;
        self.len += fresh as usize;
        fresh
    }

    pub fn clear(&mut self) {
        self.bits.iter_mut().for_each(|w| *w = 0);
        self.len = 0;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| VertexId::from_index(i * 64 + b))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ForwardMode {
    /// Hop along primary next-hops, switching to the second next-hop when
    /// the primary one is faulty.
    #[default]
    Forwarding,
    /// Follow primary next-hops only; the route fails if it meets a fault.
    #[serde(alias = "path-check")]
    Path,
    /// Switch to a second next-hop at most once, then follow primary
    /// next-hops only.
    Detour,
}

impl ForwardMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ForwardMode::Forwarding => "forwarding",
            ForwardMode::Path => "path",
            ForwardMode::Detour => "detour",
        }
    }

    fn detour_budget(self) -> usize {
        match self {
            ForwardMode::Forwarding => usize::MAX,
            ForwardMode::Path => 0,
            ForwardMode::Detour => 1,
        }
    }
}

impl std::str::FromStr for ForwardMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forwarding" => Ok(ForwardMode::Forwarding),
            "path" | "path-check" => Ok(ForwardMode::Path),
            "detour" => Ok(ForwardMode::Detour),
            _ => Err(Error::params(format!("unknown forwarding mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureCause {
    /// Both next-hops of `at` are faulty.
    DeadEnd {
        at: VertexId,
    },
    /// The walk came back to `at`.
    Loop {
        at: VertexId,
    },
    HopLimit,
    /// The primary path runs into faulty vertex `at` and no detour is left.
    FaultOnPath {
        at: VertexId,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteStatus {
    Delivered,
    Failed(FailureCause),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouteOutcome {
    pub status: RouteStatus,
    /// The vertices visited, starting at the source.
    pub hops: Vec<VertexId>,
    pub mode: ForwardMode,
}

impl RouteOutcome {
    pub fn delivered(&self) -> bool {
        self.status == RouteStatus::Delivered
    }
}

/// Reusable visited marks for repeated walks over graphs of one size.
#[derive(Debug, Clone)]
pub struct WalkScratch {
    stamp: Vec<u32>,
    epoch: u32,
}

impl WalkScratch {
    pub fn new(vertex_count: usize) -> Self {
        WalkScratch {
            stamp: vec![0; vertex_count],
            epoch: 0,
        }
    }

    fn reset(&mut self, vertex_count: usize) {
        if self.stamp.len() != vertex_count {
            self.stamp = vec![0; vertex_count];
            self.epoch = 0;
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    /// Marks `v`, returning false if it was already marked in this walk.
    fn visit(&mut self, v: VertexId) -> bool {
        let slot = &mut self.stamp[v.index()];
        if *slot == self.epoch {
            false
        } else {
            *slot = self.epoch;
            true
        }
    }
}

fn walk(
    r: &ProtectionRouting,
    s: VertexId,
    faults: &FaultSet,
    mode: ForwardMode,
    scratch: &mut WalkScratch,
    mut record: impl FnMut(VertexId),
) -> RouteStatus {
    let d = r.destination;
    let n = r.vertex_count();
    let hop_limit = 2 * n;
    scratch.reset(n);

    let mut detours = mode.detour_budget();
    let mut cur = s;
    scratch.visit(cur);
    record(cur);
    for _ in 0..hop_limit {
        if cur == d {
            return RouteStatus::Delivered;
        }
        let p = r.pnh[cur.index()];
        let next = if !faults.contains(p) {
            p
        } else if detours == 0 {
            return RouteStatus::Failed(FailureCause::FaultOnPath { at: p });
        } else {
            detours -= 1;
            let w = r.snh[cur.index()];
            if faults.contains(w) {
                return RouteStatus::Failed(FailureCause::DeadEnd { at: cur });
            }
            w
        };
        if !scratch.visit(next) {
            return RouteStatus::Failed(FailureCause::Loop { at: next });
        }
        record(next);
        cur = next;
    }
    if cur == d {
        RouteStatus::Delivered
    } else {
        RouteStatus::Failed(FailureCause::HopLimit)
    }
}

fn check_endpoints(r: &ProtectionRouting, s: VertexId, faults: &FaultSet) -> Result<()> {
    if s.index() >= r.vertex_count() {
        return Err(Error::params(format!("source {s} is not a vertex")));
    }
    if s == r.destination {
        return Err(Error::params("source equals destination"));
    }
    if faults.contains(s) || faults.contains(r.destination) {
        return Err(Error::params("source and destination must be fault-free"));
    }
    Ok(())
}

/// Routes one packet from `s` and records the walk.
pub fn forward(
    r: &ProtectionRouting,
    s: VertexId,
    faults: &FaultSet,
    mode: ForwardMode,
) -> Result<RouteOutcome> {
    check_endpoints(r, s, faults)?;
    let mut hops = Vec::new();
    let mut scratch = WalkScratch::new(r.vertex_count());
    let status = walk(r, s, faults, mode, &mut scratch, |v| hops.push(v));
    Ok(RouteOutcome { status, hops, mode })
}

/// [`forward`] without the walk record, for hot loops.
pub fn delivers(
    r: &ProtectionRouting,
    s: VertexId,
    faults: &FaultSet,
    mode: ForwardMode,
    scratch: &mut WalkScratch,
) -> bool {
    walk(r, s, faults, mode, scratch, |_| {}) == RouteStatus::Delivered
}
