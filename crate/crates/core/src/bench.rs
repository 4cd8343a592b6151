//! Random network generation and the method comparison harness.
//!
//! Methods are compared by the state space of their best pooled
//! triangulation. Ratios to the per-graph best are bucketed as
//! best / <×2 / ×2–×4 / ×4–×8 / ×8–×16 / ≥×16.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{Network, Vertex};
use crate::search::{run_pool, HeuristicSpec, SearchError};
use crate::statespace::{Scoring, StateSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("invalid generator parameters: {0}")]
    Params(String),
    #[error("no methods given")]
    NoMethods,
    #[error(transparent)]
    Search(#[from] SearchError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub nodes: usize,
    pub max_in_degree: usize,
    pub p_det: f64,
    pub p_obs: f64,
    /// Inclusive cardinality range for stochastic, unobserved vertices.
    pub stoch_card: (u64, u64),
    pub obs_card: u64,
    pub det_card_cap: u64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            nodes: 30,
            max_in_degree: 4,
            p_det: 0.5,
            p_obs: 0.1,
            stoch_card: (2, 5),
            obs_card: 50,
            det_card_cap: 125,
            seed: 0,
        }
    }
}

impl GenParams {
    fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::Params(m.to_string()));
        if self.nodes == 0 {
            return bad("nodes must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.p_det) || !(0.0..=1.0).contains(&self.p_obs) {
            return bad("probabilities must lie in [0, 1]");
        }
        if self.stoch_card.0 < 1 || self.stoch_card.0 > self.stoch_card.1 {
            return bad("stochastic cardinality range is empty");
        }
        if self.obs_card < 1 {
            return bad("observed cardinality must be at least 1");
        }
        if self.det_card_cap < 2 {
            return bad("deterministic cardinality cap must be at least 2");
        }
        Ok(())
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Uniform subset of `0..pool` with at most `max` elements.
fn bounded_subset<R: Rng>(pool: usize, max: usize, rng: &mut R) -> Vec<usize> {
    let weights: Vec<u128> = (0..=max.min(pool)).map(|s| binomial(pool, s)).collect();
    let total: u128 = weights.iter().sum();
    let mut draw = rng.gen_range(0..total);
    let mut size = 0;
    for (s, &w) in weights.iter().enumerate() {
        if draw < w {
            size = s;
            break;
        }
        draw -= w;
    }
    let mut picked = sample(rng, pool, size).into_vec();
    picked.sort_unstable();
    picked
}

/// Draws a DAG whose vertices are declared in topological order. Each
/// vertex's parent set is uniform over subsets of earlier vertices within
/// the in-degree bound.
pub fn gen_random_network(p: &GenParams) -> Result<Network, BenchError> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut vertices: Vec<Vertex> = Vec::with_capacity(p.nodes);
    for i in 0..p.nodes {
        let parents = bounded_subset(i, p.max_in_degree, &mut rng);
        let det = rng.gen_bool(p.p_det) && !parents.is_empty();
        let obs = rng.gen_bool(p.p_obs);
        let cardinality = if det {
            let product = parents.iter().fold(1u64, |acc, &q: &usize| {
                acc.saturating_mul(vertices[q].cardinality)
            });
            rng.gen_range(2..=product.min(p.det_card_cap).max(2))
        } else if obs {
            p.obs_card
        } else {
            rng.gen_range(p.stoch_card.0..=p.stoch_card.1)
        };
        vertices.push(Vertex {
            name: format!("v{i}"),
            cardinality,
            deterministic: det,
            observed: obs,
            parents,
        });
    }
    Ok(Network::new(format!("rand{}", p.seed), vertices).expect("generated network is valid"))
}

/// Seed of the `index`-th graph drawn from a master seed.
pub fn graph_seed(master: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index as u64 + 1);
    rng.next_u64()
}

pub const BUCKET_LABELS: [&str; 6] = ["best", "<x2", "x2-x4", "x4-x8", "x8-x16", ">=x16"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphRow {
    pub graph: usize,
    pub seed: u64,
    pub deterministic: usize,
    pub scores: Vec<StateSpace>,
    /// Lowest-index method reaching the minimum.
    pub winner: usize,
}

impl GraphRow {
    pub fn best(&self) -> &StateSpace {
        &self.scores[self.winner]
    }

    /// Bucket of method `m`: 0 for the winner, then by ratio to the best.
    pub fn bucket(&self, m: usize) -> usize {
        if m == self.winner {
            return 0;
        }
        let best = &self.best().0;
        let score = &self.scores[m].0;
        [2u32, 4, 8, 16]
            .iter()
            .position(|&k| score < &(best * BigUint::from(k)))
            .map_or(5, |i| i + 1)
    }

    pub fn is_tied_loser(&self, m: usize) -> bool {
        m != self.winner && self.scores[m] == *self.best()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchReport {
    pub methods: Vec<String>,
    pub rows: Vec<GraphRow>,
}

impl BenchReport {
    /// Per method, counts for each bucket.
    pub fn buckets(&self) -> Vec<[usize; 6]> {
        let mut out = vec![[0usize; 6]; self.methods.len()];
        for row in &self.rows {
            for (m, counts) in out.iter_mut().enumerate() {
                counts[row.bucket(m)] += 1;
            }
        }
        out
    }

    /// Per method, graphs where it reached the minimum without winning.
    pub fn ties(&self) -> Vec<usize> {
        (0..self.methods.len())
            .map(|m| self.rows.iter().filter(|r| r.is_tied_loser(m)).count())
            .collect()
    }

    /// Per method, graphs where it reached the minimum.
    pub fn win_or_tie(&self) -> Vec<usize> {
        (0..self.methods.len())
            .map(|m| {
                self.rows
                    .iter()
                    .filter(|r| r.scores[m] == *r.best())
                    .count()
            })
            .collect()
    }

    /// Per deterministic-vertex count, the percentage of graphs where each
    /// method was best or within ×2 of the best.
    pub fn by_determinism(&self) -> BTreeMap<usize, (usize, Vec<f64>)> {
        let mut groups: BTreeMap<usize, Vec<&GraphRow>> = BTreeMap::new();
        for row in &self.rows {
            groups.entry(row.deterministic).or_default().push(row);
        }
        groups
            .into_iter()
            .map(|(k, rows)| {
                let pct = (0..self.methods.len())
                    .map(|m| {
                        let hits = rows.iter().filter(|r| r.bucket(m) <= 1).count();
                        100.0 * hits as f64 / rows.len() as f64
                    })
                    .collect();
                (k, (rows.len(), pct))
            })
            .collect()
    }

    pub fn to_tsv(&self, table2: bool) -> String {
        let mut out = String::new();
        out.push_str("# cost: state space of the best pooled triangulation per method\n");
        out.push_str("# generator: uniform parent subsets over a fixed topological order (approximates uniform bounded in-degree DAGs)\n");
        out.push_str("# ties: `best` goes to the lowest method index; other methods at the minimum are counted under `ties` and `<x2`\n");
        write!(out, "graph\tseed\tdeterministic").unwrap();
        for m in &self.methods {
            write!(out, "\t{m}").unwrap();
        }
        out.push_str("\twinner\n");
        for row in &self.rows {
            write!(out, "{}\t{}\t{}", row.graph, row.seed, row.deterministic).unwrap();
            for s in &row.scores {
                write!(out, "\t{s}").unwrap();
            }
            writeln!(out, "\t{}", self.methods[row.winner]).unwrap();
        }
        out.push('\n');
        write!(out, "method").unwrap();
        for label in BUCKET_LABELS {
            write!(out, "\t{label}").unwrap();
        }
        out.push_str("\tties\n");
        let ties = self.ties();
        for (m, counts) in self.buckets().iter().enumerate() {
            write!(out, "{}", self.methods[m]).unwrap();
            for c in counts {
                write!(out, "\t{c}").unwrap();
            }
            writeln!(out, "\t{}", ties[m]).unwrap();
        }
        if table2 {
            out.push('\n');
            write!(out, "deterministic\tgraphs").unwrap();
            for m in &self.methods {
                write!(out, "\t{m}").unwrap();
            }
            out.push('\n');
            for (k, (count, pct)) in self.by_determinism() {
                write!(out, "{k}\t{count}").unwrap();
                for p in pct {
                    write!(out, "\t{p:.1}").unwrap();
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Generates `n_graphs` networks and runs every method's pool on each.
pub fn run_benchmark(
    params: &GenParams,
    n_graphs: usize,
    methods: &[HeuristicSpec],
    objective: Scoring,
) -> Result<BenchReport, BenchError> {
    if methods.is_empty() {
        return Err(BenchError::NoMethods);
    }
    params.validate()?;
    let rows = (0..n_graphs)
        .into_par_iter()
        .map(|graph| {
            let seed = graph_seed(params.seed, graph);
            let net = gen_random_network(&GenParams {
                seed,
                ..params.clone()
            })?;
            let scores = methods
                .iter()
                .map(|spec| Ok(run_pool(&net, spec, objective)?.best_score))
                .collect::<Result<Vec<_>, BenchError>>()?;
            let winner = (0..scores.len())
                .min_by(|&a, &b| scores[a].cmp(&scores[b]).then(a.cmp(&b)))
                .expect("methods nonempty");
            Ok(GraphRow {
                graph,
                seed,
                deterministic: net.deterministic_count(),
                scores,
                winner,
            })
        })
        .collect::<Result<Vec<_>, BenchError>>()?;
    Ok(BenchReport {
        methods: methods.iter().map(|m| m.to_string()).collect(),
        rows,
    })
}
