//! Dense undirected graphs with an alive-set, plus the single-vertex
//! operations elimination is built from.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// An undirected edge stored with the smaller endpoint first.
pub type Edge = (usize, usize);

pub type EdgeSet = BTreeSet<Edge>;

/// Normalizes an unordered pair.
#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} is not alive")]
    NotAlive(usize),
    #[error("vertex {0} is out of range")]
    OutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is not chordal")]
    NotChordal,
    #[error("elimination order is not a permutation of the alive vertices")]
    BadOrder,
    #[error("edge {0:?} is already present")]
    EdgePresent(Edge),
    #[error("edge {0:?} is not a fill edge")]
    NotFill(Edge),
    #[error("edge {0:?} is a minimal fill edge")]
    MinimalEdge(Edge),
    #[error("maximal clique around {0:?} contains deterministic vertex {1}")]
    DeterministicInClique(Edge, usize),
}

/// Undirected simple graph over `0..n` with an alive subset.
///
/// Eliminated vertices stay in the index space but are dead and have no
/// incident edges, so vertex ids stay stable across eliminations.
#[derive(Clone, PartialEq, Eq)]
pub struct UGraph {
    adj: Vec<FixedBitSet>,
    alive: FixedBitSet,
}

impl UGraph {
    pub fn new(n: usize) -> Self {
        let mut alive = FixedBitSet::with_capacity(n);
        alive.insert_range(..);
        UGraph {
            adj: vec![FixedBitSet::with_capacity(n); n],
            alive,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = UGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("in range");
            }
        }
        g
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = UGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Size of the index space, including dead vertices.
    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn is_alive(&self, v: usize) -> bool {
        v < self.n() && self.alive.contains(v)
    }

    pub fn alive_count(&self) -> usize {
        self.alive.count_ones(..)
    }

    pub fn alive_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.alive.ones()
    }

    pub fn alive_set(&self) -> &FixedBitSet {
        &self.alive
    }

    fn check_alive(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n() {
            Err(GraphError::OutOfRange(v))
        } else if !self.alive.contains(v) {
            Err(GraphError::NotAlive(v))
        } else {
            Ok(())
        }
    }

    /// Adds `{u, v}`; returns whether the edge was new.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.check_alive(u)?;
        self.check_alive(v)?;
        let fresh = !self.adj[u].contains(v);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(fresh)
    }

    /// Removes `{u, v}`; returns whether it was present.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n() || v >= self.n() || !self.adj[u].contains(v) {
            return false;
        }
        self.adj[u].set(v, false);
        self.adj[v].set(u, false);
        true
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbor_set(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn edges(&self) -> EdgeSet {
        let mut out = EdgeSet::new();
        for u in self.alive.ones() {
            for v in self.adj[u].ones().filter(|&v| v > u) {
                out.insert((u, v));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.alive.ones().map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Alive pairs that are not edges, in ascending order.
    pub fn non_edges(&self) -> Vec<Edge> {
        let alive: Vec<usize> = self.alive.ones().collect();
        let mut out = Vec::new();
        for (i, &u) in alive.iter().enumerate() {
            for &v in &alive[i + 1..] {
                if !self.adj[u].contains(v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// True when every pair of `set` is adjacent.
    pub fn is_clique(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|u| {
            let mut rest = set.clone();
            rest.set(u, false);
            rest.is_subset(&self.adj[u])
        })
    }

    /// The missing edges among the neighbours of `v`.
    pub fn deficiency(&self, v: usize) -> Result<EdgeSet, GraphError> {
        self.check_alive(v)?;
        let nbrs: Vec<usize> = self.adj[v].ones().collect();
        let mut out = EdgeSet::new();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if !self.adj[a].contains(b) {
                    out.insert((a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn deficiency_size(&self, v: usize) -> Result<usize, GraphError> {
        self.check_alive(v)?;
        let mut missing = 0;
        for a in self.adj[v].ones() {
            // neighbours of v other than a that a does not see
            let mut others = self.adj[v].clone();
            others.set(a, false);
            others.difference_with(&self.adj[a]);
            missing += others.count_ones(..);
        }
        Ok(missing / 2)
    }

    pub fn is_simplicial(&self, v: usize) -> Result<bool, GraphError> {
        self.check_alive(v)?;
        Ok(self.is_clique(&self.adj[v]))
    }

    /// Returns `G_v`: the deficiency of `v` is filled in, then `v` removed.
    pub fn eliminate_vertex(&self, v: usize) -> Result<UGraph, GraphError> {
        let mut g = self.clone();
        g.eliminate_in_place(v)?;
        Ok(g)
    }

    /// In-place elimination; returns the fill edges it added.
    pub fn eliminate_in_place(&mut self, v: usize) -> Result<EdgeSet, GraphError> {
        let added = self.deficiency(v)?;
        for &(a, b) in &added {
            self.adj[a].insert(b);
            self.adj[b].insert(a);
        }
        self.remove_vertex(v);
        Ok(added)
    }

    /// Drops `v` and its incident edges without adding fill.
    pub fn remove_vertex(&mut self, v: usize) {
        if v >= self.n() {
            return;
        }
        let nbrs: Vec<usize> = self.adj[v].ones().collect();
        for u in nbrs {
            self.adj[u].set(v, false);
        }
        self.adj[v].clear();
        self.alive.set(v, false);
    }

    /// Subgraph induced by `keep` (other vertices become dead).
    pub fn induced(&self, keep: &FixedBitSet) -> UGraph {
        let mut g = self.clone();
        for v in self.alive.ones() {
            if !keep.contains(v) {
                g.remove_vertex(v);
            }
        }
        g
    }

    /// Union with a set of extra edges.
    pub fn with_edges<'a, I>(&self, extra: I) -> Result<UGraph, GraphError>
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        let mut g = self.clone();
        for &(u, v) in extra {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}

impl fmt::Debug for UGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UGraph")
            .field("alive", &self.alive.ones().collect::<Vec<_>>())
            .field("edges", &self.edges())
            .finish()
    }
}
