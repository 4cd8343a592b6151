//! Elimination orders, elimination graphs, minimal triangulations, and
//! recognition of triangulations that some elimination order produces.

use fixedbitset::FixedBitSet;
use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::chordal::check_chordal;
use crate::graph::{edge, Edge, EdgeSet, GraphError, UGraph};
use crate::model::Network;

/// A permutation of the alive vertices; index 0 is eliminated first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EliminationOrder(Vec<usize>);

impl EliminationOrder {
    /// Checks that `order` lists every alive vertex of `g` exactly once.
    pub fn new(order: Vec<usize>, g: &UGraph) -> Result<Self, GraphError> {
        if order.len() != g.alive_count() {
            return Err(GraphError::BadOrder);
        }
        let mut seen = FixedBitSet::with_capacity(g.n());
        for &v in &order {
            if !g.is_alive(v) || seen.put(v) {
                return Err(GraphError::BadOrder);
            }
        }
        Ok(EliminationOrder(order))
    }

    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        EliminationOrder(order)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `positions()[v]` is the step at which `v` is eliminated, or
    /// `usize::MAX` for vertices not in the order.
    pub fn positions(&self, n: usize) -> Vec<usize> {
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in self.0.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

/// A chordal supergraph `total` of `base` with `total = base ∪ fill`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    base: UGraph,
    fill: EdgeSet,
    total: UGraph,
}

impl Triangulation {
    pub fn new(base: UGraph, fill: EdgeSet) -> Result<Self, GraphError> {
        let mut total = base.clone();
        for &(u, v) in &fill {
            if !total.add_edge(u, v)? || base.has_edge(u, v) {
                return Err(GraphError::EdgePresent((u, v)));
            }
        }
        if !check_chordal(&total) {
            return Err(GraphError::NotChordal);
        }
        Ok(Triangulation { base, fill, total })
    }

    pub fn base(&self) -> &UGraph {
        &self.base
    }

    pub fn fill(&self) -> &EdgeSet {
        &self.fill
    }

    pub fn total(&self) -> &UGraph {
        &self.total
    }

    /// The same triangulation with one fill edge dropped, if still chordal.
    pub fn without_fill_edge(&self, e: Edge) -> Option<Triangulation> {
        let e = edge(e.0, e.1);
        if !self.fill.contains(&e) {
            return None;
        }
        let mut total = self.total.clone();
        total.remove_edge(e.0, e.1);
        if !check_chordal(&total) {
            return None;
        }
        let mut fill = self.fill.clone();
        fill.remove(&e);
        Some(Triangulation {
            base: self.base.clone(),
            fill,
            total,
        })
    }
}

/// Eliminates along `order` and returns `ξ_α(g)` as a triangulation of `g`.
pub fn elimination_graph(
    g: &UGraph,
    order: &EliminationOrder,
) -> Result<Triangulation, GraphError> {
    EliminationOrder::new(order.0.clone(), g)?;
    let mut work = g.clone();
    let mut fill = EdgeSet::new();
    for &v in &order.0 {
        fill.extend(work.eliminate_in_place(v)?);
    }
    let total = g.with_edges(&fill)?;
    Ok(Triangulation {
        base: g.clone(),
        fill,
        total,
    })
}

/// Whether `{u, v}` becomes a fill edge under `order`: some path from `u`
/// to `v` in `g` has every interior vertex eliminated before both ends.
pub fn fill_path_predicate(
    g: &UGraph,
    order: &EliminationOrder,
    u: usize,
    v: usize,
) -> Result<bool, GraphError> {
    if u == v {
        return Err(GraphError::SelfLoop(u));
    }
    if g.has_edge(u, v) {
        return Err(GraphError::EdgePresent(edge(u, v)));
    }
    EliminationOrder::new(order.0.clone(), g)?;
    let pos = order.positions(g.n());
    let bound = pos[u].min(pos[v]);
    let mut seen = FixedBitSet::with_capacity(g.n());
    let mut stack: Vec<usize> = g.neighbors(u).filter(|&w| pos[w] < bound).collect();
    for &w in &stack {
        seen.insert(w);
    }
    while let Some(w) = stack.pop() {
        if g.has_edge(w, v) {
            return Ok(true);
        }
        for x in g.neighbors(w) {
            if pos[x] < bound && !seen.put(x) {
                stack.push(x);
            }
        }
    }
    Ok(false)
}

/// Fill edges whose individual removal keeps the graph chordal.
pub fn non_minimal_edges(t: &Triangulation) -> EdgeSet {
    t.fill
        .iter()
        .copied()
        .filter(|&e| t.without_fill_edge(e).is_some())
        .collect()
}

/// Drops removable fill edges one at a time, lowest edge first, rescanning
/// after every removal, until the triangulation is minimal.
pub fn minimalize(t: &Triangulation) -> Triangulation {
    let mut cur = t.clone();
    'scan: loop {
        for &e in &cur.fill {
            if let Some(next) = cur.without_fill_edge(e) {
                cur = next;
                continue 'scan;
            }
        }
        return cur;
    }
}

/// Finds an order whose elimination graph is exactly `t`, if one exists.
///
/// At each step the candidates are the vertices that are simplicial in the
/// current triangulation and have no fill edges; the lowest id is taken and
/// removed from both graphs. The chosen vertices, in order, form the
/// witness.
pub fn elimination_witness(t: &Triangulation) -> Option<EliminationOrder> {
    let mut base = t.base.clone();
    let mut total = t.total.clone();
    let mut order = Vec::with_capacity(base.alive_count());
    while base.alive_count() > 0 {
        let v = base.alive_vertices().find(|&v| {
            base.neighbor_set(v) == total.neighbor_set(v) && total.is_simplicial(v).expect("alive")
        })?;
        base.eliminate_in_place(v).expect("alive");
        total.remove_vertex(v);
        order.push(v);
    }
    Some(EliminationOrder(order))
}

pub fn is_elimination_graph(t: &Triangulation) -> bool {
    elimination_witness(t).is_some()
}

/// Change in state space from removing a non-minimal fill edge whose
/// enclosing maximal clique is entirely stochastic.
///
/// `C_u` and `C_v` are the two halves left behind (`C_u` keeps `u`). Each
/// either stays maximal or is swallowed by a clique outside `C`, and the
/// delta follows from which ones survive.
pub fn delta_state_space_on_removal(
    t: &Triangulation,
    e: Edge,
    net: &Network,
) -> Result<BigInt, GraphError> {
    let (u, v) = edge(e.0, e.1);
    if !t.fill.contains(&(u, v)) {
        return Err(GraphError::NotFill((u, v)));
    }
    let g = &t.total;
    let mut rest = g.neighbor_set(u).clone();
    rest.intersect_with(g.neighbor_set(v));
    if !g.is_clique(&rest) {
        return Err(GraphError::MinimalEdge((u, v)));
    }
    let mut clique = rest.clone();
    clique.insert(u);
    clique.insert(v);
    if let Some(d) = clique.ones().find(|&x| net.is_deterministic(x)) {
        return Err(GraphError::DeterministicInClique((u, v), d));
    }

    let c: BigUint = rest
        .ones()
        .fold(BigUint::one(), |acc, x| acc * net.cardinality(x));
    let c = BigInt::from(c);
    let card_u = BigInt::from(net.cardinality(u));
    let card_v = BigInt::from(net.cardinality(v));

    // swallowed iff some vertex outside C sees every vertex of the half
    let swallowed = |half: &FixedBitSet| {
        g.alive_vertices()
            .any(|x| !clique.contains(x) && half.is_subset(g.neighbor_set(x)))
    };
    let mut half_u = rest.clone();
    half_u.insert(u);
    let mut half_v = rest;
    half_v.insert(v);

    let delta = match (swallowed(&half_u), swallowed(&half_v)) {
        (false, false) => &c * (&card_u + &card_v - &card_u * &card_v),
        (true, false) => (BigInt::one() - &card_u) * &c * &card_v,
        (false, true) => (BigInt::one() - &card_v) * &c * &card_u,
        (true, true) => -(&c * &card_u * &card_v),
    };
    Ok(delta)
}
