//! Greedy elimination heuristics and the pool search that combines them
//! with ancestral pre-triangulation plans.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::ancestral::{
    extra_eliminate, lo_extra, pretriangulation_closure, sampled_extra, AncestralPlan, ClosureMode,
};
use crate::elimination::{is_elimination_graph, EliminationOrder, Triangulation};
use crate::graph::{GraphError, UGraph};
use crate::model::{moralize, Network};
use crate::statespace::{clique_state_space, graph_state_space, Scoring, StateSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("bad heuristic spec: {0}")]
    Spec(String),
    #[error("no vertex left to choose")]
    Empty,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// State space of the clique that eliminating the vertex would close.
    Weight,
    /// Number of fill edges eliminating the vertex would add.
    Fill,
    /// Current degree.
    Size,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Weight, Criterion::Fill, Criterion::Size];

    fn name(self) -> &'static str {
        match self {
            Criterion::Weight => "weight",
            Criterion::Fill => "fill",
            Criterion::Size => "size",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HeuristicKind {
    /// One-step lookahead ranked lexicographically by the criteria.
    Lookahead(Vec<Criterion>),
    /// Maximum cardinality search; the order is the reverse visit order.
    Mcs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtraMode {
    None,
    All,
    Some,
    Lo,
    Sampled,
}

impl ExtraMode {
    pub fn name(self) -> &'static str {
        match self {
            ExtraMode::None => "none",
            ExtraMode::All => "all",
            ExtraMode::Some => "some",
            ExtraMode::Lo => "lo",
            ExtraMode::Sampled => "sampled",
        }
    }
}

impl FromStr for ExtraMode {
    type Err = SearchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "none" => ExtraMode::None,
            "all" => ExtraMode::All,
            "some" => ExtraMode::Some,
            "lo" => ExtraMode::Lo,
            "sampled" => ExtraMode::Sampled,
            _ => return Err(SearchError::Spec(format!("unknown extra mode `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicSpec {
    pub kind: HeuristicKind,
    pub top_x: usize,
    pub extra_mode: ExtraMode,
    pub sampled_q: f64,
    pub pool: usize,
    pub seed: u64,
    /// Price the weight criterion as a plain product, ignoring determinism.
    pub plain_weight: bool,
}

impl Default for HeuristicSpec {
    fn default() -> Self {
        HeuristicSpec {
            kind: HeuristicKind::Lookahead(vec![Criterion::Weight]),
            top_x: 1,
            extra_mode: ExtraMode::None,
            sampled_q: 0.5,
            pool: 1,
            seed: 0,
            plain_weight: false,
        }
    }
}

impl HeuristicSpec {
    pub fn lookahead(criteria: &[Criterion]) -> Self {
        HeuristicSpec {
            kind: HeuristicKind::Lookahead(criteria.to_vec()),
            ..Default::default()
        }
    }

    pub fn mcs() -> Self {
        HeuristicSpec {
            kind: HeuristicKind::Mcs,
            ..Default::default()
        }
    }

    pub fn with_extra(mut self, mode: ExtraMode) -> Self {
        self.extra_mode = mode;
        self
    }

    pub fn with_top_x(mut self, top_x: usize) -> Self {
        self.top_x = top_x;
        self
    }

    pub fn with_pool(mut self, pool: usize) -> Self {
        self.pool = pool;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<(), SearchError> {
        if let HeuristicKind::Lookahead(c) = &self.kind {
            if c.is_empty() {
                return Err(SearchError::Spec(
                    "lookahead needs at least one criterion".into(),
                ));
            }
        }
        if self.top_x == 0 {
            return Err(SearchError::Spec("topx must be at least 1".into()));
        }
        if self.pool == 0 {
            return Err(SearchError::Spec("pool must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.sampled_q) {
            return Err(SearchError::Spec("q must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

impl fmt::Display for HeuristicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            HeuristicKind::Mcs => write!(f, "mcs")?,
            HeuristicKind::Lookahead(c) => {
                let names: Vec<&str> = c.iter().map(|c| c.name()).collect();
                write!(f, "la:{}", names.join("+"))?;
            }
        }
        write!(f, ",topx={},extra={}", self.top_x, self.extra_mode.name())?;
        if self.extra_mode == ExtraMode::Sampled {
            write!(f, ",q={}", self.sampled_q)?;
        }
        write!(f, ",pool={},seed={}", self.pool, self.seed)?;
        if self.plain_weight {
            write!(f, ",weight=plain")?;
        }
        Ok(())
    }
}

impl FromStr for HeuristicSpec {
    type Err = SearchError;

    /// `[mcs|la:<crit>[+<crit>...]][,topx=n][,extra=mode][,q=p][,pool=n][,seed=n][,weight=det|plain]`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: String| SearchError::Spec(msg);
        let mut spec = HeuristicSpec::default();
        for (i, part) in s.trim().split(',').enumerate() {
            let part = part.trim();
            if i == 0 && part == "mcs" {
                spec.kind = HeuristicKind::Mcs;
                continue;
            }
            if i == 0 {
                if let Some(list) = part.strip_prefix("la:") {
                    let criteria = list
                        .split('+')
                        .map(|c| match c {
                            "weight" => Ok(Criterion::Weight),
                            "fill" => Ok(Criterion::Fill),
                            "size" => Ok(Criterion::Size),
                            _ => Err(bad(format!("unknown criterion `{c}`"))),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    spec.kind = HeuristicKind::Lookahead(criteria);
                    continue;
                }
                if part.is_empty() && s.trim().is_empty() {
                    break;
                }
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{part}`")))?;
            let int = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| bad(format!("bad integer `{v}` for {key}")))
            };
            match key {
                "topx" => spec.top_x = int(value)? as usize,
                "extra" => spec.extra_mode = value.parse()?,
                "q" => {
                    spec.sampled_q = value
                        .parse()
                        .map_err(|_| bad(format!("bad probability `{value}`")))?
                }
                "pool" => spec.pool = int(value)? as usize,
                "seed" => spec.seed = int(value)?,
                "weight" => {
                    spec.plain_weight = match value {
                        "plain" => true,
                        "det" => false,
                        _ => return Err(bad(format!("unknown weight mode `{value}`"))),
                    }
                }
                _ => return Err(bad(format!("unknown key `{key}`"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// The generated heuristic catalog: every ordered chain of one or two
/// distinct criteria, plus maximum cardinality search, each at top-x 1..=3.
pub fn catalog() -> Vec<HeuristicSpec> {
    let mut chains: Vec<Vec<Criterion>> = Criterion::ALL.iter().map(|&c| vec![c]).collect();
    for &a in &Criterion::ALL {
        for &b in &Criterion::ALL {
            if a != b {
                chains.push(vec![a, b]);
            }
        }
    }
    let mut out = Vec::new();
    for top_x in 1..=3 {
        for chain in &chains {
            out.push(HeuristicSpec::lookahead(chain).with_top_x(top_x));
        }
        out.push(HeuristicSpec::mcs().with_top_x(top_x));
    }
    out
}

fn pick_among<R: Rng + ?Sized>(ranked: &[usize], top_x: usize, rng: &mut R) -> usize {
    let k = top_x.min(ranked.len());
    if k == 1 {
        ranked[0]
    } else {
        ranked[rng.gen_range(0..k)]
    }
}

/// Chooses the next vertex.
///
/// For lookahead specs `g` is the current elimination graph and `numbered`
/// is ignored. For MCS `g` is the graph being searched and `numbered` the
/// vertices already visited; the returned vertex is the next one visited.
pub fn next_vertex<R: Rng + ?Sized>(
    g: &UGraph,
    net: &Network,
    spec: &HeuristicSpec,
    objective: Scoring,
    numbered: &FixedBitSet,
    rng: &mut R,
) -> Result<usize, SearchError> {
    match &spec.kind {
        HeuristicKind::Lookahead(criteria) => {
            let weight_scoring = if spec.plain_weight {
                Scoring {
                    ignore_determinism: true,
                    ..objective
                }
            } else {
                objective
            };
            let mut scored: Vec<(Vec<BigUint>, usize)> = g
                .alive_vertices()
                .map(|v| {
                    let key = criteria
                        .iter()
                        .map(|c| match c {
                            Criterion::Weight => {
                                let mut clique: Vec<usize> = g.neighbors(v).collect();
                                clique.push(v);
                                clique_state_space(&clique, net, weight_scoring).0
                            }
                            Criterion::Fill => BigUint::from(g.deficiency_size(v).expect("alive")),
                            Criterion::Size => BigUint::from(g.degree(v)),
                        })
                        .collect();
                    (key, v)
                })
                .collect();
            if scored.is_empty() {
                return Err(SearchError::Empty);
            }
            scored.sort();
            let ranked: Vec<usize> = scored.into_iter().map(|(_, v)| v).collect();
            Ok(pick_among(&ranked, spec.top_x, rng))
        }
        HeuristicKind::Mcs => {
            let mut scored: Vec<(std::cmp::Reverse<usize>, usize)> = g
                .alive_vertices()
                .filter(|&v| !numbered.contains(v))
                .map(|v| {
                    let mut seen = g.neighbor_set(v).clone();
                    seen.intersect_with(numbered);
                    (std::cmp::Reverse(seen.count_ones(..)), v)
                })
                .collect();
            if scored.is_empty() {
                return Err(SearchError::Empty);
            }
            scored.sort();
            let ranked: Vec<usize> = scored.into_iter().map(|(_, v)| v).collect();
            Ok(pick_among(&ranked, spec.top_x, rng))
        }
    }
}

/// Builds a full elimination order for `g` with the spec's heuristic.
pub fn build_order<R: Rng + ?Sized>(
    g: &UGraph,
    net: &Network,
    spec: &HeuristicSpec,
    objective: Scoring,
    rng: &mut R,
) -> Result<EliminationOrder, SearchError> {
    let mut numbered = FixedBitSet::with_capacity(g.n());
    let mut order = Vec::with_capacity(g.alive_count());
    match spec.kind {
        HeuristicKind::Lookahead(_) => {
            let mut work = g.clone();
            while work.alive_count() > 0 {
                let v = next_vertex(&work, net, spec, objective, &numbered, rng)?;
                work.eliminate_in_place(v)?;
                order.push(v);
            }
        }
        HeuristicKind::Mcs => {
            for _ in 0..g.alive_count() {
                let v = next_vertex(g, net, spec, objective, &numbered, rng)?;
                numbered.insert(v);
                order.push(v);
            }
            order.reverse();
        }
    }
    Ok(EliminationOrder::new(order, g)?)
}

pub fn ancestral_plan(g: &UGraph, net: &Network, spec: &HeuristicSpec) -> AncestralPlan {
    match spec.extra_mode {
        ExtraMode::None => AncestralPlan::default(),
        ExtraMode::All => pretriangulation_closure(g, net, ClosureMode::All),
        ExtraMode::Some => pretriangulation_closure(g, net, ClosureMode::Some),
        ExtraMode::Lo => lo_extra(g, net),
        ExtraMode::Sampled => sampled_extra(g, net, spec.seed, spec.sampled_q),
    }
}

/// One candidate: plan on the moral graph, order the augmented graph, and
/// eliminate. Deterministic in `(net, spec)`.
pub fn run_heuristic(
    net: &Network,
    spec: &HeuristicSpec,
    objective: Scoring,
) -> Result<Triangulation, SearchError> {
    spec.validate()?;
    let moral = moralize(net).graph;
    let plan = ancestral_plan(&moral, net, spec);
    let augmented = moral.with_edges(&plan.chosen_edges)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(1);
    let order = build_order(&augmented, net, spec, objective, &mut rng)?;
    Ok(extra_eliminate(&moral, &plan, &order)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub index: usize,
    pub seed: u64,
    pub score: StateSpace,
    pub elimination_graph: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub best: Triangulation,
    pub best_score: StateSpace,
    pub best_index: usize,
    pub candidates: Vec<Candidate>,
}

/// Runs `spec.pool` candidates with seeds `spec.seed ^ index` and keeps the
/// lowest state space, earliest index on ties. Candidates may run in
/// parallel; the result does not depend on scheduling.
pub fn run_pool(
    net: &Network,
    spec: &HeuristicSpec,
    objective: Scoring,
) -> Result<SearchResult, SearchError> {
    spec.validate()?;
    let runs: Vec<(Triangulation, Candidate)> = (0..spec.pool)
        .into_par_iter()
        .map(|index| {
            let seed = spec.seed ^ index as u64;
            let mut one = spec.clone();
            one.seed = seed;
            let t = run_heuristic(net, &one, objective)?;
            let score = graph_state_space(t.total(), net, objective)?;
            let elimination_graph = is_elimination_graph(&t);
            Ok((
                t,
                Candidate {
                    index,
                    seed,
                    score,
                    elimination_graph,
                },
            ))
        })
        .collect::<Result<_, SearchError>>()?;

    let best_index = runs
        .iter()
        .min_by(|a, b| a.1.score.cmp(&b.1.score).then(a.1.index.cmp(&b.1.index)))
        .map(|r| r.1.index)
        .expect("pool is nonempty");
    let best = runs[best_index].0.clone();
    let best_score = runs[best_index].1.score.clone();
    Ok(SearchResult {
        best,
        best_score,
        best_index,
        candidates: runs.into_iter().map(|r| r.1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordal::check_chordal;
    use crate::fixtures::{fix_a, fix_b};

    #[test]
    fn parse_and_display() {
        let s: HeuristicSpec = "la:weight+fill,topx=2,extra=all,pool=100,seed=7"
            .parse()
            .unwrap();
        assert_eq!(
            s.kind,
            HeuristicKind::Lookahead(vec![Criterion::Weight, Criterion::Fill])
        );
        assert_eq!(
            (s.top_x, s.extra_mode, s.pool, s.seed),
            (2, ExtraMode::All, 100, 7)
        );
        assert_eq!(s.to_string().parse::<HeuristicSpec>().unwrap(), s);

        let m: HeuristicSpec = "mcs,extra=sampled,q=0.25".parse().unwrap();
        assert_eq!(m.kind, HeuristicKind::Mcs);
        assert_eq!(m.sampled_q, 0.25);
        assert_eq!(m.to_string().parse::<HeuristicSpec>().unwrap(), m);

        let d: HeuristicSpec = "extra=lo".parse().unwrap();
        assert_eq!(d.kind, HeuristicKind::Lookahead(vec![Criterion::Weight]));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in [
            "la:",
            "la:speed",
            "mcs,topx=0",
            "mcs,pool=0",
            "mcs,q=2",
            "mcs,extra=most",
            "mcs,color=red",
            "mcs,seed",
        ] {
            assert!(bad.parse::<HeuristicSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn catalog_is_distinct() {
        let c = catalog();
        assert_eq!(c.len(), 30);
        let labels: std::collections::HashSet<String> = c.iter().map(|s| s.to_string()).collect();
        assert_eq!(labels.len(), 30);
    }

    #[test]
    fn fill_lookahead_picks_c_on_fixture_a() {
        let net = fix_a(3);
        let g = moralize(&net).graph;
        let spec = HeuristicSpec::lookahead(&[Criterion::Fill]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let empty = FixedBitSet::with_capacity(5);
        let v = next_vertex(&g, &net, &spec, Scoring::default(), &empty, &mut rng).unwrap();
        assert_eq!(v, net.id_of("c").unwrap());
    }

    #[test]
    fn top_one_is_seed_independent() {
        let net = fix_b();
        let g = moralize(&net).graph;
        let spec = HeuristicSpec::lookahead(&[Criterion::Weight, Criterion::Size]);
        let empty = FixedBitSet::with_capacity(5);
        let picks: Vec<usize> = (0..10)
            .map(|s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                next_vertex(&g, &net, &spec, Scoring::default(), &empty, &mut rng).unwrap()
            })
            .collect();
        assert!(picks.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn single_and_empty_graphs() {
        let net = Network::new("one", vec![crate::model::Vertex::stochastic("x", 3)]).unwrap();
        let g = UGraph::new(1);
        let empty = FixedBitSet::with_capacity(1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for spec in [HeuristicSpec::default(), HeuristicSpec::mcs()] {
            assert_eq!(
                next_vertex(&g, &net, &spec, Scoring::default(), &empty, &mut rng),
                Ok(0)
            );
        }
        let mut dead = g.clone();
        dead.remove_vertex(0);
        assert_eq!(
            next_vertex(
                &dead,
                &net,
                &HeuristicSpec::default(),
                Scoring::default(),
                &empty,
                &mut rng
            ),
            Err(SearchError::Empty)
        );
    }

    #[test]
    fn fixture_runs() {
        let a = fix_a(3);
        let greedy: Vec<HeuristicSpec> = catalog().into_iter().filter(|s| s.top_x == 1).collect();
        for spec in greedy.clone() {
            let t = run_heuristic(
                &a,
                &spec.clone().with_extra(ExtraMode::All),
                Scoring::default(),
            )
            .unwrap();
            assert!(check_chordal(t.total()));
            let s = graph_state_space(t.total(), &a, Scoring::default()).unwrap();
            assert_eq!(s, 54u64.into(), "{spec}");
        }
        let b = fix_b();
        for mode in [ExtraMode::Lo, ExtraMode::None] {
            for spec in greedy.clone() {
                let t = run_heuristic(&b, &spec.with_extra(mode), Scoring::default()).unwrap();
                assert_eq!(
                    graph_state_space(t.total(), &b, Scoring::default()).unwrap(),
                    900u64.into()
                );
            }
        }
    }

    #[test]
    fn pool_on_fixture_a() {
        let a = fix_a(3);
        let none = run_pool(
            &a,
            &HeuristicSpec::default().with_top_x(3).with_pool(20),
            Scoring::default(),
        )
        .unwrap();
        assert!(none.best_score >= 81u64.into());
        assert!(none.candidates.iter().all(|c| c.elimination_graph));
        let all = run_pool(
            &a,
            &HeuristicSpec::default()
                .with_extra(ExtraMode::All)
                .with_pool(5),
            Scoring::default(),
        )
        .unwrap();
        assert_eq!(all.best_score, 54u64.into());
        assert!(!all.candidates[all.best_index].elimination_graph);
    }

    #[test]
    fn pool_of_one_wraps_single_run() {
        let a = fix_a(3);
        let spec = HeuristicSpec::mcs().with_top_x(2).with_seed(9);
        let r = run_pool(&a, &spec, Scoring::default()).unwrap();
        assert_eq!(r.candidates.len(), 1);
        assert_eq!(
            r.best,
            run_heuristic(&a, &spec, Scoring::default()).unwrap()
        );
    }
}
