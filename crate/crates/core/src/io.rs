//! File formats. Addresses are integer arrays everywhere; the display form
//! is only used by the edge list.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::address::Address;
use crate::cist::CistSet;
use crate::error::{Error, Result};
use crate::protection::{ProtectionRouting, Skeleton};
use crate::topology::{LogicGraph, VertexId};
use crate::tree::Tree;

fn json_err(e: serde_json::Error) -> Error {
    Error::Config(format!("json: {e}"))
}

fn io_err(e: std::io::Error) -> Error {
    Error::Config(format!("io: {e}"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub vertices: Vec<Address>,
    pub edges: Vec<(Address, Address)>,
}

impl GraphDoc {
    pub fn from_graph(g: &LogicGraph) -> Self {
        let p = g.params();
        GraphDoc {
            n: p.n,
            m: p.m,
            k: p.k,
            vertices: g.vertices().map(|v| g.address(v)).collect(),
            edges: g
                .edges()
                .map(|(u, v)| (g.address(u), g.address(v)))
                .collect(),
        }
    }

    /// Rebuilds the graph from its parameters and checks that the stored
    /// vertex and edge lists describe exactly that graph.
    pub fn into_graph(self) -> Result<LogicGraph> {
        let g = LogicGraph::build(self.n, self.m, self.k)?;
        let expected = GraphDoc::from_graph(&g);
        if expected.vertices != self.vertices {
            return Err(Error::Structural(
                "vertex list does not match the parameters".into(),
            ));
        }
        let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(self.edges.len());
        for (a, b) in &self.edges {
            let (u, v) = (g.index_of(a)?, g.index_of(b)?);
            edges.push(if u < v { (u, v) } else { (v, u) });
        }
        edges.sort_unstable();
        if edges != g.edges().collect::<Vec<_>>() {
            return Err(Error::Structural(
                "edge list does not match the parameters".into(),
            ));
        }
        Ok(g)
    }
}

pub fn write_graph_json<W: Write>(g: &LogicGraph, out: W) -> Result<()> {
    serde_json::to_writer(out, &GraphDoc::from_graph(g)).map_err(json_err)
}

pub fn read_graph_json<R: Read>(input: R) -> Result<LogicGraph> {
    let doc: GraphDoc = serde_json::from_reader(input).map_err(json_err)?;
    doc.into_graph()
}

/// One `u v` line per edge in display form.
pub fn write_edge_list<W: Write>(g: &LogicGraph, mut out: W) -> Result<()> {
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", g.label(u), g.label(v)).map_err(io_err)?;
    }
    Ok(())
}

/// Trees as lists of address pairs.
pub type TreesDoc = Vec<Vec<(Address, Address)>>;

pub fn trees_doc(g: &LogicGraph, set: &CistSet) -> TreesDoc {
    set.trees()
        .iter()
        .map(|t| {
            t.edges()
                .iter()
                .map(|&(u, v)| (g.address(u), g.address(v)))
                .collect()
        })
        .collect()
}

pub fn write_trees_json<W: Write>(g: &LogicGraph, set: &CistSet, out: W) -> Result<()> {
    serde_json::to_writer(out, &trees_doc(g, set)).map_err(json_err)
}

pub fn read_trees_json<R: Read>(input: R) -> Result<TreesDoc> {
    serde_json::from_reader(input).map_err(json_err)
}

/// Resolves the trees against a graph.
pub fn trees_on_graph(g: &LogicGraph, doc: &TreesDoc) -> Result<CistSet> {
    let trees = doc
        .iter()
        .map(|edges| {
            let resolved = edges
                .iter()
                .map(|(a, b)| Ok((g.index_of(a)?, g.index_of(b)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Tree::new(g.vertex_count(), resolved))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CistSet::new(Some(g.params()), g.vertex_count(), trees))
}

/// Resolves the trees against the addresses they mention, indexed in
/// lexicographic order. Used when no graph is at hand.
pub fn trees_standalone(doc: &TreesDoc) -> Result<(Vec<Address>, CistSet)> {
    let mut universe: Vec<Address> = doc
        .iter()
        .flatten()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect();
    universe.sort();
    universe.dedup();
    if let Some(w) = universe.windows(2).find(|w| w[0].order() != w[1].order()) {
        return Err(Error::InvalidAddress(format!(
            "addresses {} and {} differ in length",
            w[0], w[1]
        )));
    }
    let index = |a: &Address| VertexId::from_index(universe.binary_search(a).unwrap());
    let trees = doc
        .iter()
        .map(|edges| {
            Tree::new(
                universe.len(),
                edges.iter().map(|(a, b)| (index(a), index(b))),
            )
        })
        .collect();
    let set = CistSet::new(None, universe.len(), trees);
    Ok((universe, set))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingEntry {
    pub vertex: Address,
    pub pnh: Option<Address>,
    pub snh: Option<Address>,
    pub skeleton: Skeleton,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingDoc {
    pub destination: Address,
    /// Tree indices, first tree then second.
    pub pair: (usize, usize),
    pub bridge: (Address, Address),
    pub leaf_bridge: Option<(Address, Address)>,
    pub entries: Vec<RoutingEntry>,
}

impl RoutingDoc {
    /// `names` maps vertex indices to addresses.
    pub fn new(r: &ProtectionRouting, names: &[Address]) -> Self {
        let name = |v: VertexId| names[v.index()].clone();
        let pair = |(a, b): (VertexId, VertexId)| (name(a), name(b));
        RoutingDoc {
            destination: name(r.destination()),
            pair: r.trees(),
            bridge: pair(r.bridge()),
            leaf_bridge: r.leaf_bridge().map(pair),
            entries: (0..r.vertex_count())
                .map(VertexId::from_index)
                .map(|v| RoutingEntry {
                    vertex: name(v),
                    pnh: r.pnh(v).map(name),
                    snh: r.snh(v).map(name),
                    skeleton: r.skeleton(v),
                })
                .collect(),
        }
    }
}
