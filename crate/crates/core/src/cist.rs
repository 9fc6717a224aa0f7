//! Completely independent spanning trees of complete graphs and of
//! L-RCube(n, m, k).
//!
//! The RCube construction works bottom-up. Each basic element `K_{n+m}`
//! gets the first `t` trees of the complete-graph scheme, where tree `j`
//! has inner vertices at positions `j` and `j + s`. Every further level
//! takes `n` copies of the previous level's trees (one per leading digit)
//! and joins copy `i` to copy 1 through the vertex at position `j` of the
//! first element. When `m = 0` both positions `j` and `j + s` are joined and
//! the `(j, j + s)` edge inside copies `2..n` is dropped.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::topology::{LogicGraph, Params, VertexId};
use crate::tree::{edge, Edge, Tree};

/// An ordered set of spanning trees over one vertex universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CistSet {
    params: Option<Params>,
    vertex_count: usize,
    trees: Vec<Tree>,
}

impl CistSet {
    pub fn new(params: Option<Params>, vertex_count: usize, trees: Vec<Tree>) -> Self {
        CistSet {
            params,
            vertex_count,
            trees,
        }
    }

    /// The RCube parameters, or `None` for a bare complete graph.
    pub fn params(&self) -> Option<Params> {
        self.params
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn into_trees(self) -> Vec<Tree> {
        self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }
}

/// `floor((n + m) / 2)`: offset between the two inner positions of a tree
/// inside each basic element.
pub fn spread(n: usize, m: usize) -> usize {
    (n + m) / 2
}

/// Number of trees built for L-RCube(n, m, k), or why there is none.
pub fn cist_count(n: usize, m: usize, k: usize) -> Result<usize> {
    let unsupported = |reason| Error::UnsupportedParameters { n, m, k, reason };
    Params::new(n, m, k)?;
    if n + m < 4 {
        return Err(unsupported("n + m must be at least 4"));
    }
    if k == 0 {
        return Err(unsupported("order k must be at least 1"));
    }
    let s = spread(n, m);
    Ok(if n == 1 { s } else { n.min(s) })
}

/// Edges of tree `i` (1-based) of the complete-graph scheme on `size`
/// vertices with `t` trees, shifted by `base`.
fn complete_graph_tree(size: usize, t: usize, i: usize, base: usize) -> Vec<Edge> {
    let v = |j: usize| VertexId::from_index(base + j - 1);
    let mut edges = Vec::with_capacity(size - 1);
    edges.push(edge(v(i), v(i + t)));
    edges.extend((i + 1..=t + i - 1).map(|j| edge(v(i), v(j))));
    edges.extend((1..i).chain(t + i + 1..=size).map(|j| edge(v(i + t), v(j))));
    edges
}

/// The `floor(N/2)` CISTs of `K_N`, tree `T_i` having inner vertices `v_i`
/// and `v_{i+t}`. Vertex `v_j` is index `j - 1`.
pub fn cists_complete_graph(n_vertices: usize) -> Result<CistSet> {
    if n_vertices < 4 {
        return Err(Error::UnsupportedSize(n_vertices));
    }
    let t = n_vertices / 2;
    let trees = (1..=t)
        .map(|i| Tree::new(n_vertices, complete_graph_tree(n_vertices, t, i, 0)))
        .collect();
    Ok(CistSet::new(None, n_vertices, trees))
}

/// CISTs of L-RCube(n, m, 1).
pub fn cists_rcube_order1(n: usize, m: usize) -> Result<CistSet> {
    cists_rcube(n, m, 1)
}

/// CISTs of L-RCube(n, m, k) for `n + m >= 4`, `k >= 1`. Vertex indices
/// match [`LogicGraph`] numbering.
pub fn cists_rcube(n: usize, m: usize, k: usize) -> Result<CistSet> {
    Ok(build_traced(n, m, k)?.0)
}

/// Convenience: the graph and its trees together.
pub fn build_with_graph(n: usize, m: usize, k: usize) -> Result<(LogicGraph, CistSet)> {
    let cists = cists_rcube(n, m, k)?;
    Ok((LogicGraph::build(n, m, k)?, cists))
}

/// One connecting edge added while assembling a level, with the degrees its
/// endpoints had in their own sub-trees just before the join.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct JoinRecord {
    pub level: usize,
    pub tree: usize,
    pub edge: Edge,
    pub degrees_before: (usize, usize),
}

pub(crate) fn build_traced(n: usize, m: usize, k: usize) -> Result<(CistSet, Vec<JoinRecord>)> {
    let t = cist_count(n, m, k)?;
    let params = Params::new(n, m, k)?;
    let radix = n + m;
    let s = spread(n, m);

    let mut trees: Vec<Vec<Edge>> = (1..=t)
        .map(|j| complete_graph_tree(radix, s, j, 0))
        .collect();
    let mut size = radix;
    let mut joins = Vec::new();

    // n = 1 is a single complete graph at every order.
    let levels = if n == 1 { 0 } else { k };
    for level in 1..=levels {
        let mut next = Vec::with_capacity(t);
        for (j0, sub) in trees.iter().enumerate() {
            let mut edges: Vec<Edge> = Vec::with_capacity(sub.len() * n + 2 * n);
            for block in 0..n {
                let off = block * size;
                edges.extend(sub.iter().map(|&(u, v)| {
                    (
                        VertexId::from_index(u.index() + off),
                        VertexId::from_index(v.index() + off),
                    )
                }));
            }

            let mut degree = vec![0usize; size * n];
            for &(u, v) in &edges {
                degree[u.index()] += 1;
                degree[v.index()] += 1;
            }

            let anchor = |block: usize, pos: usize| VertexId::from_index(block * size + pos);
            let mut removed = HashSet::new();
            for block in 1..n {
                let mut join = |pos: usize| {
                    let e = edge(anchor(0, pos), anchor(block, pos));
                    joins.push(JoinRecord {
                        level,
                        tree: j0,
                        edge: e,
                        degrees_before: (degree[e.0.index()], degree[e.1.index()]),
                    });
                    edges.push(e);
                };
                join(j0);
                if m == 0 {
                    join(j0 + s);
                    removed.insert(edge(anchor(block, j0), anchor(block, j0 + s)));
                }
            }
            if !removed.is_empty() {
                let before = edges.len();
                edges.retain(|e| !removed.contains(e));
                assert_eq!(
                    before - edges.len(),
                    removed.len(),
                    "every removed edge must be a tree edge of its copy"
                );
            }
            next.push(edges);
        }
        trees = next;
        size *= n;
    }
    debug_assert_eq!(size, params.vertex_count());

    let trees = trees.into_iter().map(|e| Tree::new(size, e)).collect();
    Ok((CistSet::new(Some(params), size, trees), joins))
}

/// Diameter predicted for every tree built for L-RCube(n, m, k).
pub fn expected_diameter(n: usize, m: usize, k: usize) -> usize {
    if n == 1 {
        3
    } else if n == 2 || m == 0 {
        2 * k + 3
    } else {
        2 * k + 4
    }
}
