//! Simple undirected graphs on at most [`MAX_VERTICES`] vertices, stored as
//! one `u64` neighbourhood bitset per vertex.
//!
//! Vertex identities are always `0..n` with no gaps. Every operation that
//! builds a new graph out of old ones (union, join, inflation) uses a fixed
//! numbering rule so that results compare as labeled graphs.

use std::fmt;

use crate::error::{Error, Result};

/// Hard limit on the number of vertices of a [`Graph`].
pub const MAX_VERTICES: usize = 64;

/// A set of vertices of some host graph, as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The set `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in it {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < 64 && (self.0 >> v) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Smallest member, if any.
    #[inline]
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Largest member, if any.
    #[inline]
    pub fn last(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros() as usize)
        }
    }

    #[inline]
    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in ascending order.
    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_vertices(iter)
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;
    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
#[derive(Clone, Debug)]
pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for VertexIter {}

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        let all = VertexSet::full(n).0;
        for v in 0..n {
            g.adj[v] = all & !(1u64 << v);
        }
        Ok(g)
    }

    /// Path `0 - 1 - .. - (n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Cycle `0 - 1 - .. - (n-1) - 0`; needs `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("cycle needs at least 3 vertices, got {n}")));
        }
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from raw neighbourhood rows, validating symmetry and
    /// irreflexivity.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        check_size(n)?;
        let mask = VertexSet::full(n).0;
        for (v, &row) in rows.iter().enumerate() {
            if row & !mask != 0 {
                return Err(Error::VertexOutOfRange { vertex: row.trailing_zeros() as usize, n });
            }
            if (row >> v) & 1 == 1 {
                return Err(Error::SelfLoop(v));
            }
            for u in VertexSet(row) {
                if (rows[u] >> v) & 1 == 0 {
                    return Err(Error::InvalidArgument(format!("adjacency not symmetric at ({v},{u})")));
                }
            }
        }
        Ok(Graph { n, adj: rows })
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.adj[u] |= 1u64 << v;
        self.adj[v] |= 1u64 << u;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.adj[u] &= !(1u64 << v);
        self.adj[v] &= !(1u64 << u);
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        (self.adj[u] >> v) & 1 == 1
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in VertexSet(self.adj[u] >> u >> 1 << u << 1) {
                out.push((u, v));
            }
        }
        out
    }

    /// Raw neighbourhood rows.
    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    pub fn complement(&self) -> Graph {
        let all = VertexSet::full(self.n).0;
        let adj = (0..self.n).map(|v| !self.adj[v] & all & !(1u64 << v)).collect();
        Graph { n: self.n, adj }
    }

    /// `self ⊎ other`; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let n = self.n + other.n;
        check_size(n)?;
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|&r| r << self.n));
        Ok(Graph { n, adj })
    }

    /// `self ∗ other`: the disjoint union plus every cross edge.
    pub fn join(&self, other: &Graph) -> Result<Graph> {
        let mut g = self.disjoint_union(other)?;
        let left = VertexSet::full(self.n).0;
        let right = VertexSet::full(g.n).0 & !left;
        for v in 0..self.n {
            g.adj[v] |= right;
        }
        for v in self.n..g.n {
            g.adj[v] |= left;
        }
        Ok(g)
    }

    /// The subgraph induced by `s`, renumbered `0..|s|` in ascending order of
    /// the original ids.
    pub fn induced_subgraph(&self, s: VertexSet) -> Result<Graph> {
        if let Some(last) = s.last() {
            self.check_vertex(last)?;
        }
        let verts = s.to_vec();
        let adj = verts.iter().map(|&v| compress(self.adj[v], s.0)).collect();
        Ok(Graph { n: verts.len(), adj })
    }

    /// Relabels the graph so that new vertex `i` is old vertex `order[i]`.
    /// `order` must be a permutation of `0..n`.
    pub fn permuted(&self, order: &[usize]) -> Result<Graph> {
        if order.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "permutation has length {}, graph has {} vertices",
                order.len(),
                self.n
            )));
        }
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in order.iter().enumerate() {
            self.check_vertex(v)?;
            if pos[v] != usize::MAX {
                return Err(Error::InvalidArgument(format!("vertex {v} repeated in permutation")));
            }
            pos[v] = i;
        }
        let mut adj = vec![0u64; self.n];
        for (i, &v) in order.iter().enumerate() {
            for u in self.neighbors(v) {
                adj[i] |= 1u64 << pos[u];
            }
        }
        Ok(Graph { n: self.n, adj })
    }

    /// Substitutes `parts[v]` for every vertex `v` of the skeleton `self`.
    ///
    /// Block `v` occupies a contiguous id range, blocks in skeleton order.
    pub fn inflation(&self, parts: &[Graph]) -> Result<Inflation> {
        if parts.len() != self.n {
            return Err(Error::PartCountMismatch { expected: self.n, found: parts.len() });
        }
        if let Some(i) = parts.iter().position(|p| p.n == 0) {
            return Err(Error::EmptyPart(i));
        }
        let total: usize = parts.iter().map(|p| p.n).sum();
        check_size(total)?;
        let mut offsets = Vec::with_capacity(self.n);
        let mut block_of = Vec::with_capacity(total);
        let mut acc = 0;
        for (v, p) in parts.iter().enumerate() {
            offsets.push(acc);
            block_of.extend(std::iter::repeat_n(v, p.n));
            acc += p.n;
        }
        let block_mask = |v: usize| VertexSet::full(parts[v].n).0 << offsets[v];
        let mut adj = vec![0u64; total];
        for (v, p) in parts.iter().enumerate() {
            let mut cross = 0u64;
            for u in self.neighbors(v) {
                cross |= block_mask(u);
            }
            for i in 0..p.n {
                adj[offsets[v] + i] = (p.adj[i] << offsets[v]) | cross;
            }
        }
        Ok(Inflation { graph: Graph { n: total, adj }, block_of })
    }

    pub fn components(&self) -> Vec<VertexSet> {
        flood_components(self.n, |v| self.adj[v])
    }

    /// Connected components of the complement.
    pub fn co_components(&self) -> Vec<VertexSet> {
        let all = VertexSet::full(self.n).0;
        flood_components(self.n, |v| !self.adj[v] & all & !(1u64 << v))
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_of(0, self.vertices()) == self.vertices()
    }

    /// Vertices of `within` reachable from `start` inside `G[within]`.
    pub fn component_of(&self, start: usize, within: VertexSet) -> VertexSet {
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = 0u64;
            for v in frontier {
                next |= self.adj[v];
            }
            let next = VertexSet(next).intersection(within).difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen
    }

    /// Whether `G[s]` is connected (the empty set counts as connected).
    pub fn is_connected_within(&self, s: VertexSet) -> bool {
        match s.first() {
            None => true,
            Some(v) => self.component_of(v, s) == s,
        }
    }

    /// Whether the complement of `G[s]` is connected.
    pub fn is_co_connected_within(&self, s: VertexSet) -> bool {
        let Some(start) = s.first() else { return true };
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = 0u64;
            for v in frontier {
                next |= !self.adj[v] & s.0;
            }
            let next = VertexSet(next).difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen == s
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Result of [`Graph::inflation`]: the inflated graph plus, for every vertex,
/// the skeleton vertex whose block contains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inflation {
    pub graph: Graph,
    pub block_of: Vec<usize>,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        Err(Error::TooManyVertices { n, max: MAX_VERTICES })
    } else {
        Ok(())
    }
}

/// Packs the bits of `row` selected by `mask` into the low bits, preserving order.
#[inline]
pub(crate) fn compress(row: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    let mut i = 0;
    while m != 0 {
        let b = m.trailing_zeros();
        out |= ((row >> b) & 1) << i;
        i += 1;
        m &= m - 1;
    }
    out
}

fn flood_components(n: usize, nbrs: impl Fn(usize) -> u64) -> Vec<VertexSet> {
    let mut left = VertexSet::full(n);
    let mut out = Vec::new();
    while let Some(start) = left.first() {
        let mut comp = VertexSet::singleton(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = 0u64;
            for v in frontier {
                next |= nbrs(v);
            }
            let next = VertexSet(next).difference(comp);
            comp = comp.union(next);
            frontier = next;
        }
        left = left.difference(comp);
        out.push(comp);
    }
    out
}
