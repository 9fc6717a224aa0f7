use std::collections::VecDeque;

use crate::topology::VertexId;

/// Undirected edge with `.0 < .1`.
pub type Edge = (VertexId, VertexId);

pub fn edge(u: VertexId, v: VertexId) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// An undirected tree (or candidate tree) over vertices `0..vertex_count`.
///
/// The edge list is kept sorted and normalized. Degree and adjacency tables
/// are derived at construction so consumers can root it however they like.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    vertex_count: usize,
    edges: Vec<Edge>,
    degree: Vec<u32>,
    offsets: Vec<u32>,
    targets: Vec<VertexId>,
}

impl Tree {
    /// Builds from any edge list. No tree property is enforced here; see
    /// [`crate::verify::is_spanning_tree`] for that.
    ///
    /// Panics if an endpoint is outside `0..vertex_count`.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut edges: Vec<Edge> = edges.into_iter().map(|(u, v)| edge(u, v)).collect();
        edges.sort_unstable();

        let mut degree = vec![0u32; vertex_count];
        for &(u, v) in &edges {
            degree[u.index()] += 1;
            degree[v.index()] += 1;
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        let mut acc = 0u32;
        offsets.push(0);
        for &d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut fill = offsets.clone();
        let mut targets = vec![VertexId(0); acc as usize];
        for &(u, v) in &edges {
            targets[fill[u.index()] as usize] = v;
            fill[u.index()] += 1;
            targets[fill[v.index()] as usize] = u;
            fill[v.index()] += 1;
        }
        Tree {
            vertex_count,
            edges,
            degree,
            offsets,
            targets,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.binary_search(&edge(u, v)).is_ok()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v.index()] as usize
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let lo = self.offsets[v.index()] as usize;
        let hi = self.offsets[v.index() + 1] as usize;
        &self.targets[lo..hi]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.degree(v) == 1
    }

    /// Degree at least two.
    pub fn is_inner(&self, v: VertexId) -> bool {
        self.degree(v) >= 2
    }

    pub fn inner_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count)
            .map(VertexId::from_index)
            .filter(|&v| self.is_inner(v))
    }

    /// Hop distances from `root`; unreachable vertices get `u32::MAX`.
    pub fn distances_from(&self, root: VertexId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count];
        let mut queue = VecDeque::new();
        dist[root.index()] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if dist[w.index()] == u32::MAX {
                    dist[w.index()] = dist[u.index()] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Longest shortest path, by double breadth-first search. Only meaningful
    /// for a connected tree.
    pub fn diameter(&self) -> usize {
        if self.vertex_count <= 1 {
            return 0;
        }
        let far = |dist: &[u32]| {
            dist.iter()
                .enumerate()
                .filter(|(_, &d)| d != u32::MAX)
                .max_by_key(|(_, &d)| d)
                .map(|(i, &d)| (VertexId::from_index(i), d))
                .unwrap()
        };
        let (a, _) = far(&self.distances_from(VertexId(0)));
        let (_, d) = far(&self.distances_from(a));
        d as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn path_and_star() {
        let path = Tree::new(4, [(v(0), v(1)), (v(2), v(1)), (v(2), v(3))]);
        assert_eq!(path.diameter(), 3);
        assert_eq!(path.edges()[1], (v(1), v(2)));
        assert!(path.is_leaf(v(0)) && path.is_inner(v(1)));
        assert_eq!(path.inner_vertices().collect::<Vec<_>>(), [v(1), v(2)]);

        let star = Tree::new(5, (1..5).map(|i| (v(0), v(i))));
        assert_eq!(star.diameter(), 2);
        assert_eq!(star.neighbors(v(0)).len(), 4);
        assert!(star.contains_edge(v(3), v(0)));
        assert!(!star.contains_edge(v(3), v(1)));
    }
}
