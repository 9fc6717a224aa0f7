//! The logic graph L-RCube(n, m, k).
//!
//! Switches are transparent, so the graph has one vertex per server and an
//! edge between every pair of servers that share a switch. Vertices are
//! numbered by the lexicographic order of their addresses, which is the
//! mixed-radix value of `a_k ... a_1 a_0` with radix `n` for `a_k..a_1` and
//! radix `n + m` for `a_0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::address::{Address, VertexClass};
use crate::error::{Error, Result};

/// Dense vertex index into a [`LogicGraph`] (or any vertex universe of a
/// [`Tree`](crate::Tree)).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        VertexId(i as u32)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The triple `(n, m, k)`: core servers and edge servers per basic element,
/// and the order of the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

impl Params {
    pub fn new(n: usize, m: usize, k: usize) -> Result<Self> {
        let p = Params { n, m, k };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::params("n must be at least 1"));
        }
        if self.n + self.m < 2 {
            return Err(Error::params("n + m must be at least 2"));
        }
        if self.n + self.m > u8::MAX as usize + 1 {
            return Err(Error::params("n + m must not exceed 256"));
        }
        let count = (self.n as u128)
            .checked_pow(self.k as u32)
            .and_then(|p| p.checked_mul((self.n + self.m) as u128));
        match count {
            Some(c) if c <= u32::MAX as u128 => Ok(()),
            _ => Err(Error::params("graph does not fit in 32-bit vertex indices")),
        }
    }

    /// Servers per basic element, also the radix of `a_0`.
    pub fn radix(&self) -> usize {
        self.n + self.m
    }

    /// `(n + m) * n^k`.
    pub fn vertex_count(&self) -> usize {
        self.radix() * self.n.pow(self.k as u32)
    }

    /// Number of basic elements, `n^k`.
    pub fn element_count(&self) -> usize {
        self.n.pow(self.k as u32)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L-RCube({},{},{})", self.n, self.m, self.k)
    }
}

/// Where a vertex sits in the recursive decomposition. All fields are
/// zero-based: `block` is `i - 1` (the leading digit), `element` is `l - 1`
/// and `position` is `j - 1` (the rightmost digit).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementPosition {
    pub block: usize,
    pub element: usize,
    pub position: usize,
}

/// One basic building element, a `K_{n+m}`; vertices are listed by position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub vertices: Vec<VertexId>,
}

/// One sub-graph `H_i`, isomorphic to L-RCube(n, m, k-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub leading_digit: usize,
    pub elements: Vec<Element>,
}

impl Block {
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.elements
            .iter()
            .flat_map(|e| e.vertices.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
}

/// Immutable L-RCube(n, m, k) with explicit sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicGraph {
    params: Params,
    offsets: Vec<u32>,
    targets: Vec<VertexId>,
}

impl LogicGraph {
    /// Builds L-RCube(n, m, k). `k = 0` gives a single complete graph.
    pub fn build(n: usize, m: usize, k: usize) -> Result<Self> {
        let params = Params::new(n, m, k)?;
        let count = params.vertex_count();
        let mut offsets = Vec::with_capacity(count + 1);
        let mut targets = Vec::new();
        offsets.push(0u32);

        let mut digits = vec![0u8; k + 1];
        let mut scratch = Vec::new();
        for v in 0..count {
            decode_into(&params, v, &mut digits);
            scratch.clear();
            neighbors_by_rule(&params, &digits, &mut scratch);
            scratch.sort_unstable();
            scratch.dedup();
            scratch.retain(|&u| u != v);
            targets.extend(scratch.iter().map(|&u| VertexId::from_index(u)));
            offsets.push(targets.len() as u32);
        }
        Ok(LogicGraph {
            params,
            offsets,
            targets,
        })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId::from_index)
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let lo = self.offsets[v.index()] as usize;
        let hi = self.offsets[v.index() + 1] as usize;
        &self.targets[lo..hi]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    /// Adjacency lookup on the stored edge set.
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u.index() < self.vertex_count()
            && v.index() < self.vertex_count()
            && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    pub fn address(&self, v: VertexId) -> Address {
        let mut digits = vec![0u8; self.params.k + 1];
        decode_into(&self.params, v.index(), &mut digits);
        Address::new(digits)
    }

    pub fn index_of(&self, a: &Address) -> Result<VertexId> {
        let p = &self.params;
        let d = a.digits();
        if d.len() != p.k + 1 {
            return Err(Error::InvalidAddress(format!(
                "{a}: expected {} digits for {p}",
                p.k + 1
            )));
        }
        let mut idx = 0usize;
        for (pos, &digit) in d.iter().enumerate() {
            let last = pos == p.k;
            let radix = if last { p.radix() } else { p.n };
            if digit as usize >= radix {
                return Err(Error::InvalidAddress(format!(
                    "{a}: digit out of range for {p}"
                )));
            }
            idx = idx * radix + digit as usize;
        }
        Ok(VertexId::from_index(idx))
    }

    /// Display form of a vertex's address.
    pub fn label(&self, v: VertexId) -> String {
        self.address(v).render(self.params.radix())
    }

    pub fn classify(&self, v: VertexId) -> VertexClass {
        if v.index() % self.params.radix() < self.params.n {
            VertexClass::Core
        } else {
            VertexClass::Edge
        }
    }

    pub fn class_members(&self, class: VertexClass) -> Vec<VertexId> {
        self.vertices()
            .filter(|&v| self.classify(v) == class)
            .collect()
    }

    /// Rule-based adjacency on addresses, independent of the stored lists.
    pub fn are_adjacent(&self, u: &Address, v: &Address) -> bool {
        are_adjacent(&self.params, u, v)
    }

    pub fn position(&self, v: VertexId) -> ElementPosition {
        let p = &self.params;
        let idx = v.index();
        let per_element = p.radix();
        let elements_per_block = if p.k == 0 { 1 } else { p.n.pow(p.k as u32 - 1) };
        ElementPosition {
            block: idx / (per_element * elements_per_block),
            element: (idx / per_element) % elements_per_block,
            position: idx % per_element,
        }
    }

    /// Splits the graph into the sub-graphs `H_i` (by leading digit) and each
    /// of those into its basic elements. For `k = 0` the result is a single
    /// block holding the graph itself as one element.
    pub fn decompose(&self) -> Decomposition {
        let p = &self.params;
        let per_element = p.radix();
        let (block_count, elements_per_block) = if p.k == 0 {
            (1, 1)
        } else {
            (p.n, p.n.pow(p.k as u32 - 1))
        };
        let blocks = (0..block_count)
            .map(|b| Block {
                leading_digit: b,
                elements: (0..elements_per_block)
                    .map(|e| {
                        let base = (b * elements_per_block + e) * per_element;
                        Element {
                            vertices: (base..base + per_element)
                                .map(VertexId::from_index)
                                .collect(),
                        }
                    })
                    .collect(),
            })
            .collect();
        Decomposition { blocks }
    }
}

/// Writes the digits of vertex `idx`, most significant first.
fn decode_into(p: &Params, mut idx: usize, digits: &mut [u8]) {
    digits[0] = (idx % p.radix()) as u8;
    idx /= p.radix();
    for d in digits.iter_mut().skip(1) {
        *d = (idx % p.n) as u8;
        idx /= p.n;
    }
    digits.reverse();
}

fn encode_le(p: &Params, le: &[u8]) -> usize {
    let mut idx = 0usize;
    for &d in le[1..].iter().rev() {
        idx = idx * p.n + d as usize;
    }
    idx * p.radix() + le[0] as usize
}

/// Pushes every vertex adjacent to `be_digits` (most significant first),
/// possibly with duplicates.
fn neighbors_by_rule(p: &Params, be_digits: &[u8], out: &mut Vec<usize>) {
    let k = p.k;
    let n = p.n as u8;
    let radix = p.radix() as u8;
    let mut le: Vec<u8> = be_digits.iter().rev().copied().collect();
    let orig = le.clone();

    // same element
    for x in 0..radix {
        le[0] = x;
        out.push(encode_le(p, &le));
    }
    le.copy_from_slice(&orig);

    if orig[0] < n {
        // core: one digit above a_0 changes
        for i in 1..=k {
            for x in 0..n {
                le[i] = x;
                out.push(encode_le(p, &le));
            }
            le[i] = orig[i];
        }
        // edge servers whose level-i switch this core server sits on
        for i in 1..=k {
            let mut u = orig.clone();
            u[1..=i].copy_from_slice(&orig[..i]);
            for e in n..radix {
                u[0] = e;
                out.push(encode_le(p, &u));
            }
        }
    } else {
        // edge: the n core servers on each level-i switch
        for i in 1..=k {
            let mut v = orig.clone();
            v[..i].copy_from_slice(&orig[1..=i]);
            for x in 0..n {
                v[i] = x;
                out.push(encode_le(p, &v));
            }
        }
    }
}

/// The three adjacency rules checked directly on digit strings.
pub fn are_adjacent(p: &Params, u: &Address, v: &Address) -> bool {
    if u.digits().len() != p.k + 1 || v.digits().len() != p.k + 1 || u == v {
        return false;
    }
    let k = p.k;
    let a = |x: &Address, i: usize| x.digit(i) as usize;

    let rule1 = (1..=k).all(|i| a(u, i) == a(v, i)) && a(u, 0) != a(v, 0);
    if rule1 {
        return true;
    }
    let rule2 = a(u, 0) < p.n
        && (1..=k).any(|i| a(u, i) != a(v, i) && (0..=k).all(|j| j == i || a(u, j) == a(v, j)));
    if rule2 {
        return true;
    }
    let rule3 = |x: &Address, y: &Address| {
        a(x, 0) >= p.n
            && (1..=k).any(|i| {
                (0..i).all(|j| a(y, j) == a(x, j + 1)) && (i + 1..=k).all(|j| a(x, j) == a(y, j))
            })
    };
    rule3(u, v) || rule3(v, u)
}
