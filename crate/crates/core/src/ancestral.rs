//! Ancestral pairs and the pre-triangulation heuristics that choose which
//! of them to wire up before ordinary elimination.
//!
//! An ancestral edge joins a parent of a deterministic vertex `d` to a
//! child or other non-parent neighbour of `d`. Edges are chosen in groups:
//! one group per `(d, endpoint)` carries every missing `parent–endpoint`
//! edge, since `d` only becomes free in a clique once all its parents are
//! in it.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elimination::{elimination_graph, EliminationOrder, Triangulation};
use crate::graph::{edge, Edge, EdgeSet, GraphError, UGraph};
use crate::model::Network;
use crate::statespace::{clique_state_space, Scoring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cause {
    /// The endpoint is a child of the deterministic vertex.
    Child,
    /// The endpoint is some other undirected neighbour.
    Undirected,
}

impl Cause {
    pub fn as_str(self) -> &'static str {
        match self {
            Cause::Child => "child",
            Cause::Undirected => "undirected",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AncestralGroup {
    pub det: usize,
    pub endpoint: usize,
    pub edges: EdgeSet,
    pub cause: Cause,
}

/// Groups selected by a heuristic, in selection order, and the union of
/// their edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AncestralPlan {
    pub groups: Vec<AncestralGroup>,
    pub chosen_edges: EdgeSet,
}

impl AncestralPlan {
    /// Each chosen edge with the group that first selected it.
    pub fn attributions(&self) -> Vec<(Edge, &AncestralGroup)> {
        let mut seen = EdgeSet::new();
        let mut out = Vec::new();
        for group in &self.groups {
            for &e in &group.edges {
                if seen.insert(e) {
                    out.push((e, group));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureMode {
    All,
    /// Skip groups whose adjacency comes from a pre-existing undirected
    /// edge rather than a child edge or an earlier ancestral addition.
    Some,
}

/// One group per deterministic `d` and non-parent neighbour `c` that still
/// misses at least one `parent–c` edge, in ascending `(d, c)` order.
pub fn ancestral_groups(g: &UGraph, net: &Network) -> Vec<AncestralGroup> {
    let mut out = Vec::new();
    for d in 0..net.len() {
        if !net.is_deterministic(d) || !g.is_alive(d) {
            continue;
        }
        let parents = net.parents(d);
        for c in g.neighbors(d) {
            if parents.contains(&c) {
                continue;
            }
            let edges: EdgeSet = parents
                .iter()
                .filter(|&&p| !g.has_edge(p, c))
                .map(|&p| edge(p, c))
                .collect();
            if edges.is_empty() {
                continue;
            }
            let cause = if net.is_parent_of(d, c) {
                Cause::Child
            } else {
                Cause::Undirected
            };
            out.push(AncestralGroup {
                det: d,
                endpoint: c,
                edges,
                cause,
            });
        }
    }
    out
}

/// True when an edge `{u, v}` would be ancestral in `g`.
pub fn is_ancestral_pair(g: &UGraph, net: &Network, u: usize, v: usize) -> bool {
    let one_way = |p: usize, c: usize| {
        (0..net.len()).any(|d| {
            d != c
                && net.is_deterministic(d)
                && net.parents(d).contains(&p)
                && !net.parents(d).contains(&c)
                && g.has_edge(d, c)
        })
    };
    u != v && (one_way(u, v) || one_way(v, u))
}

/// Splits the fill of `t` into the edges that are ancestral in `t.total()`
/// and the rest.
pub fn split_ancestral_fill(t: &Triangulation, net: &Network) -> (EdgeSet, EdgeSet) {
    t.fill()
        .iter()
        .partition(|&&(u, v)| is_ancestral_pair(t.total(), net, u, v))
}

/// Repeatedly computes the groups of the current graph, adds those that
/// `select` accepts, and stops once nothing new is accepted.
fn closure_with<F>(g: &UGraph, net: &Network, mut select: F) -> AncestralPlan
where
    F: FnMut(&AncestralGroup, &EdgeSet) -> bool,
{
    let mut cur = g.clone();
    let mut plan = AncestralPlan::default();
    loop {
        let picked: Vec<AncestralGroup> = ancestral_groups(&cur, net)
            .into_iter()
            .filter(|group| select(group, &plan.chosen_edges))
            .collect();
        if picked.is_empty() {
            return plan;
        }
        for group in picked {
            for &(u, v) in &group.edges {
                cur.add_edge(u, v).expect("endpoints alive");
                plan.chosen_edges.insert((u, v));
            }
            plan.groups.push(group);
        }
    }
}

pub fn pretriangulation_closure(g: &UGraph, net: &Network, mode: ClosureMode) -> AncestralPlan {
    match mode {
        ClosureMode::All => closure_with(g, net, |_, _| true),
        ClosureMode::Some => closure_with(g, net, |group, added| {
            group.cause == Cause::Child || added.contains(&edge(group.det, group.endpoint))
        }),
    }
}

/// Takes a group only when merging `c`, `d` and `pa(d)` into one clique is
/// cheaper than keeping `{c, d}` and `{d} ∪ pa(d)` apart.
pub fn lo_extra(g: &UGraph, net: &Network) -> AncestralPlan {
    let scoring = Scoring::default();
    closure_with(g, net, |group, _| {
        let d = group.det;
        let mut family = vec![d];
        family.extend_from_slice(net.parents(d));
        let mut merged = family.clone();
        merged.push(group.endpoint);
        let joined = clique_state_space(&merged, net, scoring);
        let apart = clique_state_space(&[group.endpoint, d], net, scoring)
            + clique_state_space(&family, net, scoring);
        joined < apart
    })
}

/// Accepts each newly seen `(d, c)` group independently with probability
/// `q`; a group is decided once and keeps that decision.
pub fn sampled_extra(g: &UGraph, net: &Network, seed: u64, q: f64) -> AncestralPlan {
    let q = q.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut decided: HashMap<(usize, usize), bool> = HashMap::new();
    closure_with(g, net, |group, _| {
        *decided
            .entry((group.det, group.endpoint))
            .or_insert_with(|| rng.gen_bool(q))
    })
}

/// Adds the plan's edges to `g`, then eliminates along `order`. The result
/// is a triangulation of `g` whose fill holds both the extra edges and the
/// elimination fill.
pub fn extra_eliminate(
    g: &UGraph,
    plan: &AncestralPlan,
    order: &EliminationOrder,
) -> Result<Triangulation, GraphError> {
    for &(u, v) in &plan.chosen_edges {
        if g.has_edge(u, v) {
            return Err(GraphError::EdgePresent((u, v)));
        }
    }
    let augmented = g.with_edges(&plan.chosen_edges)?;
    let t = elimination_graph(&augmented, order)?;
    let mut fill = plan.chosen_edges.clone();
    fill.extend(t.fill().iter().copied());
    Triangulation::new(g.clone(), fill)
}
