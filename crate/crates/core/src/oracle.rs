//! Exhaustive ground truth for small networks: the best elimination order,
//! the best triangulation, and the threshold decision on the latter.

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::chordal::{check_chordal, maximal_cliques_chordal};
use crate::elimination::{elimination_graph, EliminationOrder};
use crate::graph::{Edge, EdgeSet, GraphError, UGraph};
use crate::model::{moralize, Network};
use crate::statespace::{cliques_state_space, graph_state_space, Scoring, StateSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{found} vertices exceeds the order enumeration bound of {bound}")]
    TooManyVertices { found: usize, bound: usize },
    #[error("{found} non-adjacent pairs exceeds the fill enumeration bound of {bound}")]
    TooManyPairs { found: usize, bound: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_vertices: usize,
    pub max_fill_pairs: usize,
    pub scoring: Scoring,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_vertices: 9,
            max_fill_pairs: 22,
            scoring: Scoring::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub best_elim_score: StateSpace,
    pub best_elim_order: EliminationOrder,
    pub best_tri_score: StateSpace,
    pub best_tri_fill: EdgeSet,
    /// The best triangulation beats every elimination graph.
    pub gap: bool,
}

/// Minimum state space over all `|V|!` elimination orders of the moral
/// graph; ties go to the lexicographically smallest order.
pub fn best_over_orders(
    net: &Network,
    cfg: &OracleConfig,
) -> Result<(StateSpace, EliminationOrder), OracleError> {
    let n = net.len();
    if n > cfg.max_vertices {
        return Err(OracleError::TooManyVertices {
            found: n,
            bound: cfg.max_vertices,
        });
    }
    let g = moralize(net).graph;
    let mut best: Option<(StateSpace, EliminationOrder)> = None;
    // permutations of a sorted range come out in lexicographic order
    for perm in (0..n).permutations(n) {
        let order = EliminationOrder::new(perm, &g)?;
        let t = elimination_graph(&g, &order)?;
        let score = graph_state_space(t.total(), net, cfg.scoring)?;
        if best.as_ref().is_none_or(|(b, _)| score < *b) {
            best = Some((score, order));
        }
    }
    Ok(best.expect("at least one permutation"))
}

/// Visits the fill set of every chordal supergraph of `g` reachable by
/// adding a subset of `candidates`, along with its maximal cliques.
pub fn triangulations(g: &UGraph, candidates: &[Edge]) -> Vec<(EdgeSet, Vec<Vec<usize>>)> {
    let k = candidates.len();
    (0..1u64 << k)
        .into_par_iter()
        .filter_map(|mask| {
            let mut total = g.clone();
            let mut fill = EdgeSet::new();
            for (i, &(u, v)) in candidates.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    total.add_edge(u, v).expect("alive");
                    fill.insert((u, v));
                }
            }
            if !check_chordal(&total) {
                return None;
            }
            let cliques = maximal_cliques_chordal(&total).expect("chordal");
            Some((fill, cliques))
        })
        .collect()
}

fn check_pairs(pairs: usize, cfg: &OracleConfig) -> Result<(), OracleError> {
    if pairs > cfg.max_fill_pairs {
        Err(OracleError::TooManyPairs {
            found: pairs,
            bound: cfg.max_fill_pairs,
        })
    } else {
        Ok(())
    }
}

/// Minimum state space over all triangulations of the moral graph.
///
/// Among optimal fill sets the smallest one wins, then the lexicographically
/// smallest.
pub fn best_over_triangulations(
    net: &Network,
    cfg: &OracleConfig,
) -> Result<(StateSpace, EdgeSet), OracleError> {
    let g = moralize(net).graph;
    let pairs = g.non_edges();
    check_pairs(pairs.len(), cfg)?;
    let best = triangulations(&g, &pairs)
        .into_par_iter()
        .map(|(fill, cliques)| {
            let score = cliques_state_space(&cliques, net, cfg.scoring);
            let key: Vec<Edge> = fill.iter().copied().collect();
            (score, key.len(), key, fill)
        })
        .min_by(|a, b| (&a.0, a.1, &a.2).cmp(&(&b.0, b.1, &b.2)))
        .expect("the complete graph is always a triangulation");
    Ok((best.0, best.3))
}

/// Whether some triangulation has state space strictly below `alpha`.
pub fn maxstatspace_decide(
    net: &Network,
    alpha: &StateSpace,
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    let (best, _) = best_over_triangulations(net, cfg)?;
    Ok(best < *alpha)
}

/// Polynomial certificate check: `moral ∪ fill` is chordal and scores
/// below `alpha`.
pub fn verify_certificate(
    net: &Network,
    fill: &EdgeSet,
    alpha: &StateSpace,
    scoring: Scoring,
) -> bool {
    let g = moralize(net).graph;
    let mut total = g.clone();
    for &(u, v) in fill {
        if g.has_edge(u, v) || total.add_edge(u, v).is_err() {
            return false;
        }
    }
    match graph_state_space(&total, net, scoring) {
        Ok(score) => score < *alpha,
        Err(_) => false,
    }
}

pub fn oracle_report(net: &Network, cfg: &OracleConfig) -> Result<OracleReport, OracleError> {
    let (best_elim_score, best_elim_order) = best_over_orders(net, cfg)?;
    let (best_tri_score, best_tri_fill) = best_over_triangulations(net, cfg)?;
    let gap = best_tri_score < best_elim_score;
    Ok(OracleReport {
        best_elim_score,
        best_elim_order,
        best_tri_score,
        best_tri_fill,
        gap,
    })
}
