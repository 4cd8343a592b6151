use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mixtri::ancestral::{lo_extra, pretriangulation_closure, sampled_extra, ClosureMode};
use mixtri::bench::{gen_random_network, run_benchmark, GenParams};
use mixtri::elimination::{elimination_witness, minimalize};
use mixtri::oracle::{maxstatspace_decide, oracle_report, OracleConfig};
use mixtri::search::{run_pool, HeuristicSpec};
use mixtri::statespace::graph_state_space;
use mixtri::trifile::{parse_triangulation, write_triangulation};
use mixtri::{
    moralize, parse_network, serialize_network, Network, Scoring, StateSpace, Triangulation,
};

/// Triangulation of graphical models with deterministic variables.
#[derive(Parser)]
#[command(name = "tri", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a heuristic pool and write the best triangulation.
    Triangulate {
        net: PathBuf,
        /// e.g. `la:weight+fill,topx=2,extra=all,pool=50,seed=1`
        #[arg(long)]
        spec: HeuristicSpec,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Decide whether a triangulation is some elimination order's graph.
    CheckElim { net: PathBuf, tri: PathBuf },
    /// Print the state space of the moral graph, or of a triangulation.
    Statespace {
        net: PathBuf,
        tri: Option<PathBuf>,
        /// Observed variables contribute a factor of 1.
        #[arg(long)]
        observed_as_unit: bool,
    },
    /// List the extra edges an ancestral heuristic adds to the moral graph.
    Ancestral {
        net: PathBuf,
        #[arg(long, value_enum)]
        mode: PlanMode,
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Drop removable fill edges until the triangulation is minimal.
    Minimalize {
        net: PathBuf,
        tri: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search over orders and triangulations (small networks).
    Oracle {
        net: PathBuf,
        /// Only answer whether some triangulation scores below this value.
        #[arg(long)]
        decide: Option<StateSpace>,
        #[arg(long, default_value_t = OracleConfig::default().max_fill_pairs)]
        max_fill_pairs: usize,
        #[arg(long, default_value_t = OracleConfig::default().max_vertices)]
        max_vertices: usize,
    },
    /// Generate a random network.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value_t = 30)]
        nodes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare methods on generated networks by state space.
    Bench {
        #[arg(long, default_value_t = 100)]
        graphs: usize,
        /// Methods separated by `;`.
        #[arg(long)]
        methods: String,
        /// Add a breakdown by number of deterministic vertices.
        #[arg(long)]
        table2: bool,
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value_t = 15)]
        nodes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PlanMode {
    All,
    Some,
    Lo,
    Sampled,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    max_parents: usize,
    #[arg(long, default_value_t = 0.5)]
    pdet: f64,
    #[arg(long, default_value_t = 0.1)]
    pobs: f64,
    #[arg(long, default_value_t = 2)]
    card_min: u64,
    #[arg(long, default_value_t = 5)]
    card_max: u64,
    #[arg(long, default_value_t = 50)]
    obs_card: u64,
    #[arg(long, default_value_t = 125)]
    det_cap: u64,
}

impl GenArgs {
    fn params(&self, nodes: usize) -> GenParams {
        GenParams {
            nodes,
            max_in_degree: self.max_parents,
            p_det: self.pdet,
            p_obs: self.pobs,
            stoch_card: (self.card_min, self.card_max),
            obs_card: self.obs_card,
            det_card_cap: self.det_cap,
            seed: self.seed,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_net(path: &Path) -> Result<Network> {
    parse_network(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn load_tri(net: &Network, path: &Path) -> Result<Triangulation> {
    let base = moralize(net).graph;
    parse_triangulation(&read(path)?, net, &base).with_context(|| format!("{}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn set_jobs(jobs: Option<usize>) -> Result<()> {
    if let Some(n) = jobs {
        if n == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn names(net: &Network, ids: &[usize]) -> String {
    ids.iter()
        .map(|&v| net.vertex(v).name.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs a subcommand; `Ok(false)` is a negative verdict.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Triangulate {
            net,
            spec,
            out,
            jobs,
        } => {
            set_jobs(jobs)?;
            let net = load_net(&net)?;
            let res = run_pool(&net, &spec, Scoring::default())?;
            let text = write_triangulation(res.best.fill(), &net);
            match out {
                Some(path) => {
                    emit(Some(&path), &text)?;
                    println!("{}", res.best_score);
                }
                None => {
                    print!("{text}");
                    eprintln!("state space {}", res.best_score);
                }
            }
            Ok(true)
        }
        Command::CheckElim { net, tri } => {
            let net = load_net(&net)?;
            let t = load_tri(&net, &tri)?;
            match elimination_witness(&t) {
                Some(order) => {
                    println!("elimination-graph");
                    println!("order {}", names(&net, order.as_slice()));
                    Ok(true)
                }
                None => {
                    println!("not-elimination-graph");
                    Ok(false)
                }
            }
        }
        Command::Statespace {
            net,
            tri,
            observed_as_unit,
        } => {
            let net = load_net(&net)?;
            let scoring = Scoring {
                observed_as_unit,
                ..Scoring::default()
            };
            let score = match tri {
                Some(path) => graph_state_space(load_tri(&net, &path)?.total(), &net, scoring)?,
                None => {
                    let g = moralize(&net).graph;
                    graph_state_space(&g, &net, scoring)
                        .context("moral graph is not chordal; pass a triangulation")?
                }
            };
            println!("{score}");
            Ok(true)
        }
        Command::Ancestral { net, mode, q, seed } => {
            let net = load_net(&net)?;
            if !(0.0..=1.0).contains(&q) {
                bail!("--q must lie in [0, 1]");
            }
            let g = moralize(&net).graph;
            let (plan, label) = match mode {
                PlanMode::All => (pretriangulation_closure(&g, &net, ClosureMode::All), "all"),
                PlanMode::Some => (
                    pretriangulation_closure(&g, &net, ClosureMode::Some),
                    "some",
                ),
                PlanMode::Lo => (lo_extra(&g, &net), "lo"),
                PlanMode::Sampled => (sampled_extra(&g, &net, seed, q), "sampled"),
            };
            for ((u, v), group) in plan.attributions() {
                let name = |x: usize| net.vertex(x).name.as_str();
                println!(
                    "extra {} {} {label} {} {}",
                    name(u),
                    name(v),
                    name(group.det),
                    group.cause.as_str()
                );
            }
            Ok(true)
        }
        Command::Minimalize { net, tri, out } => {
            let net = load_net(&net)?;
            let t = minimalize(&load_tri(&net, &tri)?);
            emit(out.as_deref(), &write_triangulation(t.fill(), &net))?;
            Ok(true)
        }
        Command::Oracle {
            net,
            decide,
            max_fill_pairs,
            max_vertices,
        } => {
            let net = load_net(&net)?;
            let cfg = OracleConfig {
                max_vertices,
                max_fill_pairs,
                scoring: Scoring::default(),
            };
            if let Some(alpha) = decide {
                let yes = maxstatspace_decide(&net, &alpha, &cfg)?;
                println!("{}", if yes { "yes" } else { "no" });
                return Ok(yes);
            }
            let r = oracle_report(&net, &cfg)?;
            let fill: Vec<String> = r
                .best_tri_fill
                .iter()
                .map(|&(u, v)| format!("{}-{}", net.vertex(u).name, net.vertex(v).name))
                .collect();
            println!("best_elim_score\t{}", r.best_elim_score);
            println!(
                "best_elim_order\t{}",
                names(&net, r.best_elim_order.as_slice())
            );
            println!("best_tri_score\t{}", r.best_tri_score);
            println!("best_tri_fill\t{}", fill.join(" "));
            println!("gap\t{}", r.gap);
            Ok(true)
        }
        Command::Gen { gen, nodes, out } => {
            let net = gen_random_network(&gen.params(nodes))?;
            emit(out.as_deref(), &serialize_network(&net))?;
            Ok(true)
        }
        Command::Bench {
            graphs,
            methods,
            table2,
            gen,
            nodes,
            out,
            jobs,
        } => {
            set_jobs(jobs)?;
            let methods = methods
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<HeuristicSpec>()
                        .map_err(|e| anyhow!("method `{s}`: {e}"))
                })
                .collect::<Result<Vec<_>>>()?;
            let report = run_benchmark(&gen.params(nodes), graphs, &methods, Scoring::default())?;
            emit(out.as_deref(), &report.to_tsv(table2))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
