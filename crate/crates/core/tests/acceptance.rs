//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mixtri::ancestral::{is_ancestral_pair, lo_extra, split_ancestral_fill};
use mixtri::bench::{gen_random_network, run_benchmark, GenParams};
use mixtri::chordal::{check_chordal, maximal_cliques_chordal};
use mixtri::elimination::{
    delta_state_space_on_removal, elimination_graph, elimination_witness, fill_path_predicate,
    is_elimination_graph, minimalize, non_minimal_edges,
};
use mixtri::fixtures::{fix_a, fix_b, FIX_A_TEXT, FIX_B_TEXT};
use mixtri::oracle::{best_over_orders, best_over_triangulations, triangulations, OracleConfig};
use mixtri::search::{run_heuristic, run_pool, HeuristicSpec};
use mixtri::statespace::{cliques_state_space, graph_state_space};
use mixtri::trifile::{parse_triangulation, write_triangulation};
use mixtri::{
    edge, moralize, parse_network, serialize_network, EdgeSet, EliminationOrder, GraphError,
    Network, Scoring, StateSpace, Triangulation, UGraph, Vertex,
};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn random_graph(r: &mut ChaCha8Rng, n: usize) -> UGraph {
    let p: f64 = r.gen_range(0.15..0.7);
    let mut g = UGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn random_order(r: &mut ChaCha8Rng, g: &UGraph) -> EliminationOrder {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(r);
    EliminationOrder::new(order, g).unwrap()
}

/// Random DAG declared in topological order. Deterministic vertices need a
/// parent; their cardinality stays within the product of the parents'.
fn random_network(r: &mut ChaCha8Rng, n: usize, p_det: f64, cards: (u64, u64)) -> Network {
    let mut vs: Vec<Vertex> = Vec::with_capacity(n);
    for j in 0..n {
        let parents: Vec<usize> = (0..j).filter(|_| r.gen_bool(0.45)).take(3).collect();
        let det = !parents.is_empty() && r.gen_bool(p_det);
        let v = if det {
            let prod: u64 = parents.iter().map(|&q| vs[q].cardinality).product();
            Vertex::deterministic(format!("x{j}"), r.gen_range(2..=prod.min(12)))
        } else {
            Vertex::stochastic(format!("x{j}"), r.gen_range(cards.0..=cards.1))
        };
        vs.push(v.with_parents(parents));
    }
    Network::new(format!("r{n}"), vs).unwrap()
}

fn score(g: &UGraph, net: &Network) -> StateSpace {
    graph_state_space(g, net, Scoring::default()).unwrap()
}

fn named_fill(net: &Network, pairs: &[(&str, &str)]) -> EdgeSet {
    pairs
        .iter()
        .map(|(u, v)| edge(net.id_of(u).unwrap(), net.id_of(v).unwrap()))
        .collect()
}

fn c1_fixture_a() -> Outcome {
    let eta = 3u64;
    let net = fix_a(eta);
    let g = moralize(&net).graph;
    let cases: [(&[(&str, &str)], u64); 4] = [
        (&[], 2 * eta.pow(4) - eta.pow(2)),
        (&[("b", "c")], eta.pow(4) + eta.pow(3) - eta.pow(2)),
        (&[("b", "c"), ("c", "e"), ("a", "e")], eta.pow(4)),
        (&[("b", "c"), ("a", "e")], 2 * eta.pow(3)),
    ];
    let mut got = Vec::new();
    for (pairs, want) in cases {
        let total = g.with_edges(&named_fill(&net, pairs)).unwrap();
        let s = score(&total, &net);
        ensure!(s == want.into(), "fill {pairs:?}: got {s}, want {want}");
        got.push(s.to_string());
    }
    Ok(got.join(", "))
}

fn c2_separation() -> Outcome {
    let cfg = OracleConfig::default();
    let net = fix_a(3);
    let (elim, _) = best_over_orders(&net, &cfg).map_err(|e| e.to_string())?;
    let (tri, fill) = best_over_triangulations(&net, &cfg).map_err(|e| e.to_string())?;
    ensure!(elim == 81u64.into(), "best order scored {elim}");
    ensure!(tri == 54u64.into(), "best triangulation scored {tri}");
    let t = Triangulation::new(moralize(&net).graph, fill).unwrap();
    ensure!(
        !is_elimination_graph(&t),
        "optimal triangulation is an elimination graph"
    );
    let mut ratios = Vec::new();
    for eta in [3u64, 4, 5] {
        let net = fix_a(eta);
        let (elim, _) = best_over_orders(&net, &cfg).map_err(|e| e.to_string())?;
        let (tri, _) = best_over_triangulations(&net, &cfg).map_err(|e| e.to_string())?;
        // elim / tri == eta / 2
        ensure!(&elim.0 * 2u32 == &tri.0 * eta, "eta {eta}: {elim} / {tri}");
        ratios.push(format!("{:.1}", elim.to_f64() / tri.to_f64()));
    }
    Ok(format!("81 vs 54, ratios {}", ratios.join("/")))
}

fn c3_fixture_b() -> Outcome {
    let net = fix_b();
    let g = moralize(&net).graph;
    let none = score(&g, &net);
    let all = run_heuristic(
        &net,
        &"la:weight,extra=all".parse().unwrap(),
        Scoring::default(),
    )
    .map_err(|e| e.to_string())?;
    let all = score(all.total(), &net);
    let lo_plan = lo_extra(&g, &net);
    let lo = run_heuristic(
        &net,
        &"la:weight,extra=lo".parse().unwrap(),
        Scoring::default(),
    )
    .map_err(|e| e.to_string())?;
    let lo = score(lo.total(), &net);
    ensure!(none == 900u64.into(), "no fill scored {none}");
    ensure!(all == 2000u64.into(), "all-extra scored {all}");
    ensure!(
        lo_plan.chosen_edges.is_empty(),
        "lo-extra chose {:?}",
        lo_plan.chosen_edges
    );
    ensure!(lo == 900u64.into(), "lo-extra scored {lo}");
    Ok(format!("{none}, {all}, {lo}"))
}

/// A chordal supergraph of `g` that usually has removable fill.
fn random_supergraph(r: &mut ChaCha8Rng, g: &UGraph) -> Triangulation {
    let t = elimination_graph(g, &random_order(r, g)).unwrap();
    let mut total = t.total().clone();
    let mut extra = total.non_edges();
    extra.shuffle(r);
    for (u, v) in extra {
        if r.gen_bool(0.4) {
            total.add_edge(u, v).unwrap();
            if !check_chordal(&total) {
                total.remove_edge(u, v);
            }
        }
    }
    let fill = total.edges().difference(&g.edges()).copied().collect();
    Triangulation::new(g.clone(), fill).unwrap()
}

fn c4_algorithm_one() -> Outcome {
    let mut r = rng(4);
    for i in 0..500 {
        let n = r.gen_range(1..=10);
        let g = random_graph(&mut r, n);
        let t = elimination_graph(&g, &random_order(&mut r, &g)).unwrap();
        let w = elimination_witness(&t)
            .ok_or(format!("instance {i}: rejected an elimination graph"))?;
        let again = elimination_graph(&g, &w).unwrap();
        ensure!(
            again.total() == t.total(),
            "instance {i}: witness rebuilds a different graph"
        );
    }
    let mut shrunk = 0;
    for i in 0..200 {
        let n = r.gen_range(2..=10);
        let g = random_graph(&mut r, n);
        let t = random_supergraph(&mut r, &g);
        let m = minimalize(&t);
        ensure!(
            m.fill().is_subset(t.fill()),
            "pair {i}: minimalize added edges"
        );
        ensure!(
            non_minimal_edges(&m).is_empty(),
            "pair {i}: result not minimal"
        );
        ensure!(
            is_elimination_graph(&m),
            "pair {i}: minimal triangulation rejected"
        );
        shrunk += usize::from(m.fill().len() < t.fill().len());
    }
    Ok(format!("500 orders, 200 supergraphs ({shrunk} shrunk)"))
}

fn c5_fill_paths() -> Outcome {
    let mut r = rng(5);
    let mut checked = 0;
    for i in 0..500 {
        let n = r.gen_range(2..=10);
        let g = random_graph(&mut r, n);
        let order = random_order(&mut r, &g);
        let t = elimination_graph(&g, &order).unwrap();
        for (u, v) in g.non_edges() {
            let predicted = fill_path_predicate(&g, &order, u, v).unwrap();
            ensure!(
                predicted == t.fill().contains(&(u, v)),
                "instance {i}: pair ({u},{v}) predicate {predicted}"
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs"))
}

fn c6_orders_match_triangulations() -> Outcome {
    let mut r = rng(6);
    let cfg = OracleConfig::default();
    for i in 0..200 {
        let n = r.gen_range(1..=6);
        let net = random_network(&mut r, n, 0.0, (2, 4));
        let (a, _) = best_over_orders(&net, &cfg).map_err(|e| e.to_string())?;
        let (b, _) = best_over_triangulations(&net, &cfg).map_err(|e| e.to_string())?;
        ensure!(
            a == b,
            "network {i}: orders {a}, triangulations {b}\n{}",
            serialize_network(&net)
        );
    }
    Ok("200 networks".into())
}

fn c7_improving_edges_are_ancestral() -> Outcome {
    let mut r = rng(7);
    let mut improving = 0usize;
    let mut failures = 0usize;
    let mut first = None;
    for i in 0..200 {
        let n = r.gen_range(2..=6);
        let net = random_network(&mut r, n, 0.5, (2, 4));
        let g = moralize(&net).graph;
        let tris = triangulations(&g, &g.non_edges());
        let scores: BTreeMap<EdgeSet, StateSpace> = tris
            .iter()
            .map(|(fill, cliques)| {
                (
                    fill.clone(),
                    cliques_state_space(cliques, &net, Scoring::default()),
                )
            })
            .collect();
        for (fill, before) in &scores {
            let total = g.with_edges(fill).unwrap();
            for (u, v) in total.non_edges() {
                let mut bigger = fill.clone();
                bigger.insert((u, v));
                let Some(after) = scores.get(&bigger) else {
                    continue;
                };
                if after < before {
                    improving += 1;
                    if !is_ancestral_pair(&total, &net, u, v) {
                        failures += 1;
                        first.get_or_insert_with(|| {
                            format!(
                                "network {i}, fill {:?}, edge {}-{} ({before} -> {after})\n{}",
                                fill,
                                net.vertex(u).name,
                                net.vertex(v).name,
                                serialize_network(&net)
                            )
                        });
                    }
                }
            }
        }
    }
    match first {
        None => Ok(format!("{improving} improving additions, all ancestral")),
        Some(ex) => Err(format!(
            "{failures}/{improving} improving additions are not ancestral; first: {ex}"
        )),
    }
}

fn c8_decomposition() -> Outcome {
    let mut r = rng(8);
    let cfg = OracleConfig::default();
    let mut failures = 0usize;
    let mut first = None;
    for i in 0..100 {
        let n = r.gen_range(2..=6);
        let net = random_network(&mut r, n, 0.5, (2, 4));
        let g = moralize(&net).graph;
        let (_, fill) = best_over_triangulations(&net, &cfg).map_err(|e| e.to_string())?;
        let t = Triangulation::new(g.clone(), fill).unwrap();
        let (ancestral, rest) = split_ancestral_fill(&t, &net);
        let augmented = g.with_edges(&ancestral).unwrap();
        let ok = match Triangulation::new(augmented, rest.clone()) {
            Ok(inner) => non_minimal_edges(&inner).is_empty(),
            Err(_) => false,
        };
        if !ok {
            failures += 1;
            first.get_or_insert_with(|| {
                format!(
                    "network {i}, ancestral {ancestral:?}, rest {rest:?}\n{}",
                    serialize_network(&net)
                )
            });
        }
    }
    match first {
        None => Ok("100 networks".into()),
        Some(ex) => Err(format!(
            "{failures}/100 optimal triangulations do not decompose; first: {ex}"
        )),
    }
}

fn c9_removal_delta() -> Outcome {
    let mut r = rng(9);
    let mut cases = [0usize; 4];
    let mut instances = 0;
    let mut edges = 0;
    while instances < 100 {
        let n = r.gen_range(3..=8);
        let net = random_network(&mut r, n, 0.0, (2, 4));
        let g = moralize(&net).graph;
        let t = random_supergraph(&mut r, &g);
        let removable = non_minimal_edges(&t);
        if removable.is_empty() {
            continue;
        }
        instances += 1;
        let before = score(t.total(), &net);
        for &e in t.fill() {
            let delta = delta_state_space_on_removal(&t, e, &net);
            let Some(after) = t.without_fill_edge(e) else {
                ensure!(
                    matches!(delta, Err(GraphError::MinimalEdge(_))),
                    "minimal edge {e:?} gave {delta:?}"
                );
                continue;
            };
            let expected = after_minus_before(&after, &net, &before);
            let got = delta.map_err(|err| format!("removable edge {e:?}: {err}"))?;
            ensure!(
                got == expected,
                "edge {e:?}: delta {got}, recomputed {expected}"
            );
            cases[split_case(&t, &after, e)] += 1;
            edges += 1;
        }
    }
    ensure!(
        cases.iter().all(|&c| c > 0),
        "cases not all covered: {cases:?}"
    );
    Ok(format!("{edges} removals, cases {cases:?}"))
}

fn after_minus_before(after: &Triangulation, net: &Network, before: &StateSpace) -> BigInt {
    score(after.total(), net).to_bigint() - before.to_bigint()
}

/// 0: both halves maximal, 1: only the `u` half absorbed, 2: only the `v`
/// half absorbed, 3: both absorbed. Read off the cliques after removal.
fn split_case(t: &Triangulation, after: &Triangulation, (u, v): (usize, usize)) -> usize {
    let g = t.total();
    let common: Vec<usize> = g.neighbors(u).filter(|&x| g.has_edge(x, v)).collect();
    let half = |w: usize| {
        let mut h = common.clone();
        h.push(w);
        h.sort_unstable();
        h
    };
    let cliques = maximal_cliques_chordal(after.total()).unwrap();
    let absorbed_u = !cliques.contains(&half(u));
    let absorbed_v = !cliques.contains(&half(v));
    usize::from(absorbed_u) + 2 * usize::from(absorbed_v)
}

fn c10_benchmark_trend() -> Outcome {
    let params = GenParams {
        nodes: 15,
        p_det: 0.5,
        seed: 10,
        ..GenParams::default()
    };
    let none: HeuristicSpec = "la:weight,topx=2,pool=50".parse().unwrap();
    let all: HeuristicSpec = "la:weight,topx=2,extra=all,pool=50".parse().unwrap();
    let report =
        run_benchmark(&params, 100, &[none, all], Scoring::default()).map_err(|e| e.to_string())?;
    let rates = report.win_or_tie();
    ensure!(
        rates[1] >= rates[0],
        "all-extra {} < elimination {}",
        rates[1],
        rates[0]
    );
    Ok(format!(
        "win-or-tie: elimination {}, all-extra {}",
        rates[0], rates[1]
    ))
}

fn c11_round_trip_and_determinism() -> Outcome {
    for text in [FIX_A_TEXT, FIX_B_TEXT] {
        let net = parse_network(text).map_err(|e| e.to_string())?;
        let again = parse_network(&serialize_network(&net)).map_err(|e| e.to_string())?;
        ensure!(
            again == net,
            "fixture {} changed in a round trip",
            net.name()
        );
    }
    let net = fix_a(3);
    let g = moralize(&net).graph;
    let fill = named_fill(&net, &[("b", "c"), ("a", "e")]);
    let t = parse_triangulation(&write_triangulation(&fill, &net), &net, &g)
        .map_err(|e| e.to_string())?;
    ensure!(t.fill() == &fill, "triangulation file round trip");
    for seed in 0..100 {
        let net = gen_random_network(&GenParams {
            seed,
            ..GenParams::default()
        })
        .map_err(|e| e.to_string())?;
        let text = serialize_network(&net);
        let again = parse_network(&text).map_err(|e| e.to_string())?;
        ensure!(
            again == net && serialize_network(&again) == text,
            "generated network {seed}"
        );
    }

    let params = GenParams {
        nodes: 12,
        seed: 99,
        ..GenParams::default()
    };
    let methods: Vec<HeuristicSpec> = [
        "la:fill+weight,topx=3,pool=8",
        "mcs,topx=2,extra=sampled,q=0.5,pool=8",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let spec: HeuristicSpec = "la:size,topx=3,extra=some,pool=16,seed=7".parse().unwrap();
    let big = gen_random_network(&GenParams {
        nodes: 20,
        seed: 5,
        ..GenParams::default()
    })
    .unwrap();
    let mut reports = Vec::new();
    let mut pools = Vec::new();
    for jobs in [1, 2, 4, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .unwrap();
        let report = pool.install(|| run_benchmark(&params, 12, &methods, Scoring::default()));
        reports.push(report.map_err(|e| e.to_string())?.to_tsv(true));
        pools.push(
            pool.install(|| run_pool(&big, &spec, Scoring::default()))
                .map_err(|e| e.to_string())?,
        );
    }
    ensure!(
        reports.windows(2).all(|w| w[0] == w[1]),
        "bench reports differ across thread counts"
    );
    ensure!(
        pools.windows(2).all(|w| w[0] == w[1]),
        "pool results differ across thread counts"
    );
    Ok("fixtures, 100 generated networks, jobs 1/2/4/8 identical".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (
            "fixture A exact values",
            Duration::from_secs(1),
            c1_fixture_a,
        ),
        (
            "orders vs triangulations separation",
            Duration::from_secs(10),
            c2_separation,
        ),
        (
            "fixture B exact values",
            Duration::from_secs(1),
            c3_fixture_b,
        ),
        (
            "elimination graph recognition",
            Duration::from_secs(120),
            c4_algorithm_one,
        ),
        (
            "fill path characterisation",
            Duration::from_secs(120),
            c5_fill_paths,
        ),
        (
            "stochastic orders match triangulations",
            Duration::from_secs(600),
            c6_orders_match_triangulations,
        ),
        (
            "improving single edges are ancestral",
            Duration::from_secs(600),
            c7_improving_edges_are_ancestral,
        ),
        (
            "optimal triangulation decomposition",
            Duration::from_secs(600),
            c8_decomposition,
        ),
        (
            "edge removal delta",
            Duration::from_secs(10),
            c9_removal_delta,
        ),
        (
            "benchmark trend",
            Duration::from_secs(900),
            c10_benchmark_trend,
        ),
        (
            "round trip and determinism",
            Duration::from_secs(60),
            c11_round_trip_and_determinism,
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > *limit => Err(format!("{msg}; took {took:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{took:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
