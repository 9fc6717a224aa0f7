//! Two independent checks that a set of spanning trees is completely
//! independent.
//!
//! [`verify_cists_characterization`] uses the edge-disjoint plus
//! inner-vertex-exclusive characterization and runs in linear time.
//! [`verify_cists_definitional`] goes back to the definition and compares
//! the tree paths of every vertex pair in every pair of trees; it is the
//! oracle for the first one and is only meant for small graphs.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::cist::CistSet;
use crate::error::{Error, Result};
use crate::topology::{LogicGraph, VertexId};
use crate::tree::{edge, Edge, Tree};

/// Outcome of a check. A failure always names a concrete violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "lowercase")]
pub enum VerificationReport {
    Pass,
    Fail(Witness),
}

impl VerificationReport {
    pub fn is_pass(&self) -> bool {
        matches!(self, VerificationReport::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            VerificationReport::Pass => None,
            VerificationReport::Fail(w) => Some(w),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanningDefect {
    WrongEdgeCount { expected: usize, found: usize },
    Cycle { edge: Edge },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathOverlap {
    Edge(Edge),
    Vertex(VertexId),
}

/// A component taken out of the routing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailedComponent {
    Node(VertexId),
    Link(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtectionDefect {
    /// The second next-hop is the failed component or not a graph neighbor.
    NotUsableNeighbor,
    /// The second next-hop leads back to the protected vertex.
    Upstream,
    /// Following primary next-hops from the second next-hop hits the failure.
    NoPathToDestination,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    NotSpanningTree {
        tree: usize,
        defect: SpanningDefect,
    },
    DuplicatedEdge {
        edge: Edge,
        trees: (usize, usize),
    },
    SharedInnerVertex {
        vertex: VertexId,
        trees: (usize, usize),
    },
    PathConflict {
        x: VertexId,
        y: VertexId,
        trees: (usize, usize),
        overlap: PathOverlap,
    },
    Unprotected {
        vertex: VertexId,
        failure: FailedComponent,
        defect: ProtectionDefect,
    },
    /// Following primary next-hops from `vertex` never reaches the destination.
    PrimaryLoop {
        vertex: VertexId,
    },
    /// A next-hop that is not a neighbor in the graph.
    NonEdgeHop {
        from: VertexId,
        to: VertexId,
    },
}

impl Witness {
    /// The vertices the witness names, in order of appearance.
    pub fn vertices(&self) -> Vec<VertexId> {
        match *self {
            Witness::NotSpanningTree { defect, .. } => match defect {
                SpanningDefect::Cycle { edge } => vec![edge.0, edge.1],
                SpanningDefect::WrongEdgeCount { .. } => vec![],
            },
            Witness::DuplicatedEdge { edge, .. } => vec![edge.0, edge.1],
            Witness::SharedInnerVertex { vertex, .. } | Witness::PrimaryLoop { vertex } => {
                vec![vertex]
            }
            Witness::PathConflict { x, y, overlap, .. } => match overlap {
                PathOverlap::Edge(e) => vec![x, y, e.0, e.1],
                PathOverlap::Vertex(v) => vec![x, y, v],
            },
            Witness::Unprotected {
                vertex, failure, ..
            } => match failure {
                FailedComponent::Node(v) => vec![vertex, v],
                FailedComponent::Link(a, b) => vec![vertex, a, b],
            },
            Witness::NonEdgeHop { from, to } => vec![from, to],
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NotSpanningTree { tree, defect } => {
                write!(f, "tree {tree} is not a spanning tree: {defect:?}")
            }
            Witness::DuplicatedEdge { edge, trees } => write!(
                f,
                "edge ({}, {}) is in trees {} and {}",
                edge.0, edge.1, trees.0, trees.1
            ),
            Witness::SharedInnerVertex { vertex, trees } => write!(
                f,
                "vertex {vertex} is inner in trees {} and {}",
                trees.0, trees.1
            ),
            Witness::PathConflict {
                x,
                y,
                trees,
                overlap,
            } => write!(
                f,
                "paths {x}-{y} in trees {} and {} share {overlap:?}",
                trees.0, trees.1
            ),
            Witness::Unprotected {
                vertex,
                failure,
                defect,
            } => write!(
                f,
                "vertex {vertex} unprotected against {failure:?}: {defect:?}"
            ),
            Witness::PrimaryLoop { vertex } => {
                write!(
                    f,
                    "primary next-hops from {vertex} do not reach the destination"
                )
            }
            Witness::NonEdgeHop { from, to } => {
                write!(f, "next-hop {from} -> {to} is not a graph edge")
            }
        }
    }
}

struct DisjointSets {
    parent: Vec<u32>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra as usize] = rb;
        true
    }
}

fn spanning_defect(vertex_count: usize, tree: &Tree) -> Option<SpanningDefect> {
    if tree.edge_count() + 1 != vertex_count {
        return Some(SpanningDefect::WrongEdgeCount {
            expected: vertex_count.saturating_sub(1),
            found: tree.edge_count(),
        });
    }
    let mut sets = DisjointSets::new(vertex_count);
    for &(u, v) in tree.edges() {
        if !sets.union(u.0, v.0) {
            return Some(SpanningDefect::Cycle { edge: (u, v) });
        }
    }
    // n - 1 edges and no cycle means connected
    None
}

fn check_structure(g: &LogicGraph, set: &CistSet) -> Result<()> {
    if set.vertex_count() != g.vertex_count() {
        return Err(Error::Structural(format!(
            "trees cover {} vertices, graph has {}",
            set.vertex_count(),
            g.vertex_count()
        )));
    }
    for (i, tree) in set.trees().iter().enumerate() {
        if tree.vertex_count() != g.vertex_count() {
            return Err(Error::Structural(format!(
                "tree {i} has a different vertex set"
            )));
        }
        if let Some(&(u, v)) = tree.edges().iter().find(|&&(u, v)| !g.has_edge(u, v)) {
            return Err(Error::Structural(format!(
                "tree {i} uses ({}, {}) which is not an edge of the graph",
                g.label(u),
                g.label(v)
            )));
        }
    }
    Ok(())
}

fn first_spanning_failure(set: &CistSet) -> Option<Witness> {
    set.trees().iter().enumerate().find_map(|(i, t)| {
        spanning_defect(set.vertex_count(), t)
            .map(|defect| Witness::NotSpanningTree { tree: i, defect })
    })
}

/// True iff `t` is connected, acyclic, covers every vertex and uses only
/// edges of `g`.
pub fn is_spanning_tree(g: &LogicGraph, t: &Tree) -> bool {
    t.vertex_count() == g.vertex_count()
        && t.edges().iter().all(|&(u, v)| g.has_edge(u, v))
        && spanning_defect(g.vertex_count(), t).is_none()
}

/// Spanning trees that are pairwise edge-disjoint and where no vertex is
/// inner in two of them.
///
/// Returns `Err` when a tree uses a non-edge of `g` or the vertex sets
/// differ; any other defect is a `Fail` verdict.
pub fn verify_cists_characterization(g: &LogicGraph, set: &CistSet) -> Result<VerificationReport> {
    check_structure(g, set)?;
    if let Some(w) = first_spanning_failure(set) {
        return Ok(VerificationReport::Fail(w));
    }

    let mut owner: HashMap<Edge, usize> = HashMap::new();
    for (i, tree) in set.trees().iter().enumerate() {
        for &e in tree.edges() {
            if let Some(&first) = owner.get(&e) {
                return Ok(VerificationReport::Fail(Witness::DuplicatedEdge {
                    edge: e,
                    trees: (first, i),
                }));
            }
            owner.insert(e, i);
        }
    }

    for v in g.vertices() {
        let mut inner_in = set
            .trees()
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_inner(v))
            .map(|(i, _)| i);
        if let (Some(a), Some(b)) = (inner_in.next(), inner_in.next()) {
            return Ok(VerificationReport::Fail(Witness::SharedInnerVertex {
                vertex: v,
                trees: (a, b),
            }));
        }
    }
    Ok(VerificationReport::Pass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefinitionalOptions {
    /// Refuse graphs with more vertices than this unless `force` is set.
    pub cap: usize,
    pub force: bool,
}

impl Default for DefinitionalOptions {
    fn default() -> Self {
        DefinitionalOptions {
            cap: 64,
            force: false,
        }
    }
}

/// A tree rooted at vertex 0, for path extraction.
struct Rooted {
    parent: Vec<u32>,
    depth: Vec<u32>,
}

impl Rooted {
    fn new(tree: &Tree) -> Self {
        let n = tree.vertex_count();
        let mut parent = vec![u32::MAX; n];
        let mut depth = vec![0u32; n];
        let mut queue = VecDeque::from([VertexId(0)]);
        parent[0] = 0;
        while let Some(u) = queue.pop_front() {
            for &w in tree.neighbors(u) {
                if parent[w.index()] == u32::MAX {
                    parent[w.index()] = u.0;
                    depth[w.index()] = depth[u.index()] + 1;
                    queue.push_back(w);
                }
            }
        }
        Rooted { parent, depth }
    }

    /// Vertices on the path from `x` to `y`, both ends included.
    fn path(&self, x: VertexId, y: VertexId) -> Vec<VertexId> {
        let (mut a, mut b) = (x.0, y.0);
        let mut left = vec![a];
        let mut right = vec![b];
        while self.depth[a as usize] > self.depth[b as usize] {
            a = self.parent[a as usize];
            left.push(a);
        }
        while self.depth[b as usize] > self.depth[a as usize] {
            b = self.parent[b as usize];
            right.push(b);
        }
        while a != b {
            a = self.parent[a as usize];
            b = self.parent[b as usize];
            left.push(a);
            right.push(b);
        }
        right.pop();
        left.extend(right.into_iter().rev());
        left.into_iter().map(VertexId).collect()
    }
}

fn overlap(pa: &[VertexId], pb: &[VertexId]) -> Option<PathOverlap> {
    let edges_b: Vec<Edge> = pb.windows(2).map(|w| edge(w[0], w[1])).collect();
    if let Some(e) = pa
        .windows(2)
        .map(|w| edge(w[0], w[1]))
        .find(|e| edges_b.contains(e))
    {
        return Some(PathOverlap::Edge(e));
    }
    let inner_b = &pb[1..pb.len() - 1];
    pa[1..pa.len() - 1]
        .iter()
        .find(|v| inner_b.contains(v))
        .map(|&v| PathOverlap::Vertex(v))
}

/// Checks every pair of trees and every vertex pair `x < y` for paths that
/// share an edge or an internal vertex. Tree pairs are scanned before
/// vertex pairs and the first violation is reported.
pub fn verify_cists_definitional(
    g: &LogicGraph,
    set: &CistSet,
    opts: DefinitionalOptions,
) -> Result<VerificationReport> {
    if g.vertex_count() > opts.cap && !opts.force {
        return Err(Error::TooLarge {
            vertices: g.vertex_count(),
            cap: opts.cap,
        });
    }
    check_structure(g, set)?;
    if let Some(w) = first_spanning_failure(set) {
        return Ok(VerificationReport::Fail(w));
    }

    let rooted: Vec<Rooted> = set.trees().iter().map(Rooted::new).collect();
    let n = g.vertex_count();
    for a in 0..rooted.len() {
        for b in a + 1..rooted.len() {
            for x in 0..n {
                for y in x + 1..n {
                    let (x, y) = (VertexId::from_index(x), VertexId::from_index(y));
                    let pa = rooted[a].path(x, y);
                    let pb = rooted[b].path(x, y);
                    if let Some(o) = overlap(&pa, &pb) {
                        return Ok(VerificationReport::Fail(Witness::PathConflict {
                            x,
                            y,
                            trees: (a, b),
                            overlap: o,
                        }));
                    }
                }
            }
        }
    }
    Ok(VerificationReport::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cist::{cists_complete_graph, cists_rcube};

    fn fig3() -> (LogicGraph, CistSet) {
        (
            LogicGraph::build(2, 4, 1).unwrap(),
            cists_rcube(2, 4, 1).unwrap(),
        )
    }

    fn id(g: &LogicGraph, s: &str) -> VertexId {
        g.index_of(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn fig3_passes_both() {
        let (g, set) = fig3();
        assert!(verify_cists_characterization(&g, &set).unwrap().is_pass());
        let r = verify_cists_definitional(&g, &set, DefinitionalOptions::default()).unwrap();
        assert!(r.is_pass());
        for t in set.trees() {
            assert!(is_spanning_tree(&g, t));
        }
    }

    #[test]
    fn fig3_pair_00_15_paths_are_disjoint() {
        let (g, set) = fig3();
        let (x, y) = (id(&g, "00"), id(&g, "15"));
        let p1 = Rooted::new(&set.trees()[0]).path(x, y);
        let p2 = Rooted::new(&set.trees()[1]).path(x, y);
        let l = |p: &[VertexId]| p.iter().map(|&v| g.label(v)).collect::<Vec<_>>();
        assert_eq!(l(&p1), ["00", "10", "13", "15"]);
        assert_eq!(l(&p2), ["00", "04", "01", "11", "14", "15"]);
        assert_eq!(overlap(&p1, &p2), None);
    }

    #[test]
    fn duplicated_edge_is_reported() {
        let (g, set) = fig3();
        let mut trees = set.trees().to_vec();
        // re-hang leaf 03 of T2 on 00, an edge T1 already owns
        let (a, b) = (id(&g, "03"), id(&g, "01"));
        let mut edges: Vec<Edge> = trees[1].edges().to_vec();
        edges.retain(|&e| e != edge(a, b));
        edges.push(edge(a, id(&g, "00")));
        trees[1] = Tree::new(g.vertex_count(), edges);
        let bad = CistSet::new(set.params(), g.vertex_count(), trees);
        let r = verify_cists_characterization(&g, &bad).unwrap();
        assert_eq!(
            r,
            VerificationReport::Fail(Witness::DuplicatedEdge {
                edge: edge(id(&g, "00"), a),
                trees: (0, 1)
            })
        );
        assert!(
            !verify_cists_definitional(&g, &bad, DefinitionalOptions::default())
                .unwrap()
                .is_pass()
        );
    }

    #[test]
    fn spanning_tree_mutations() {
        let (g, set) = fig3();
        let t1 = &set.trees()[0];
        let mut fewer = t1.edges().to_vec();
        fewer.pop();
        assert!(!is_spanning_tree(&g, &Tree::new(12, fewer)));
        let mut more = t1.edges().to_vec();
        let extra = g.edges().find(|&(u, v)| !t1.contains_edge(u, v)).unwrap();
        more.push(extra);
        assert!(!is_spanning_tree(&g, &Tree::new(12, more)));
    }

    #[test]
    fn non_edge_is_structural() {
        let (g, set) = fig3();
        let mut trees = set.trees().to_vec();
        let mut edges = trees[0].edges().to_vec();
        // 03 and 13 are not adjacent
        let leaf = id(&g, "05");
        edges.retain(|&(u, v)| u != leaf && v != leaf);
        edges.push(edge(leaf, id(&g, "11")));
        trees[0] = Tree::new(12, edges);
        let bad = CistSet::new(None, 12, trees);
        assert!(matches!(
            verify_cists_characterization(&g, &bad),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn single_tree_and_complete_graphs() {
        let g = LogicGraph::build(1, 3, 1).unwrap();
        let set = cists_complete_graph(4).unwrap();
        let set = CistSet::new(None, 4, set.into_trees());
        assert!(verify_cists_definitional(&g, &set, Default::default())
            .unwrap()
            .is_pass());
        let one = CistSet::new(None, 4, vec![set.trees()[0].clone()]);
        assert!(verify_cists_definitional(&g, &one, Default::default())
            .unwrap()
            .is_pass());
    }

    #[test]
    fn cap_is_enforced() {
        let g = LogicGraph::build(3, 5, 2).unwrap();
        let set = cists_rcube(3, 5, 2).unwrap();
        assert_eq!(
            verify_cists_definitional(&g, &set, Default::default()),
            Err(Error::TooLarge {
                vertices: 72,
                cap: 64
            })
        );
        let forced = DefinitionalOptions {
            force: true,
            ..Default::default()
        };
        assert!(verify_cists_definitional(&g, &set, forced)
            .unwrap()
            .is_pass());
    }

    #[test]
    fn rcube_342_passes_both_routes() {
        let g = LogicGraph::build(3, 4, 2).unwrap();
        let set = cists_rcube(3, 4, 2).unwrap();
        assert!(verify_cists_characterization(&g, &set).unwrap().is_pass());
        assert!(verify_cists_definitional(&g, &set, Default::default())
            .unwrap()
            .is_pass());
    }
}
