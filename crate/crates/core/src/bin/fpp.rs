use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use sublinear_fpp::geodesy::{distance, shortest_path};
use sublinear_fpp::graph::{build_graph, Graph, GraphSpec, Vertex};
use sublinear_fpp::harness::{run_and_write, summarize, trials_from_jsonl, ExperimentSpec};
use sublinear_fpp::kappa::Kappa;
use sublinear_fpp::percolation::{sample_weights, DistributionSpec, WeightAssignment};
use sublinear_fpp::recurrence::{classify_direction, named_ray, recurrence_profile};
use sublinear_fpp::Error;

#[derive(Parser)]
#[command(
    name = "fpp",
    version,
    about = "First passage percolation geometry checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the graph file for a spec such as `tree:3,10` or `lattice:2,20`.
    Generate {
        graph: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample i.i.d. edge weights, e.g. `exp:1`.
    Percolate {
        graph: String,
        dist: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance and tie-broken shortest path between two vertex ids.
    Geodesic {
        graph: String,
        from: Vertex,
        to: Vertex,
        /// Use ω distances with weights sampled from this distribution.
        #[arg(long)]
        dist: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recurrence profile and verdict of a named ray (`first`, `last`, `axis`, ...).
    Recur {
        graph: String,
        ray: String,
        #[arg(long = "C", default_value_t = 2.0)]
        slope: f64,
        /// Scales are (0, k) for k = 2..=rmax.
        #[arg(long)]
        rmax: Option<usize>,
        /// Comma separated κ specs tried in order.
        #[arg(
            long,
            default_value = "const:1,log:1,0,pow:1,0.5",
            value_delimiter = ';'
        )]
        family: Vec<String>,
    },
    /// Run an experiment spec file.
    Experiment {
        spec: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        /// Directory receiving `trials.jsonl` and `summary.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize a trials JSON-lines file as CSV.
    Report {
        trials: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Parse(Error),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn parsed<T>(r: sublinear_fpp::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Parse)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Run(e.into())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn graph_of(spec: &str) -> Result<Graph, Failure> {
    let spec: GraphSpec = parsed(spec.parse())?;
    Ok(build_graph(&spec)?)
}

/// `const:1,log:1,0` splits on the kind prefixes.
fn parse_family(items: &[String]) -> sublinear_fpp::Result<Vec<Kappa>> {
    let mut specs: Vec<String> = Vec::new();
    for piece in items.iter().flat_map(|s| s.split(',')) {
        match specs.last_mut() {
            Some(last) if !piece.contains(':') => {
                last.push(',');
                last.push_str(piece);
            }
            _ => specs.push(piece.to_string()),
        }
    }
    specs.iter().map(|s| s.parse()).collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { graph, out } => emit(&graph_of(&graph)?.to_text(), out.as_deref()),
        Command::Percolate {
            graph,
            dist,
            seed,
            out,
        } => {
            let g = graph_of(&graph)?;
            let dist: DistributionSpec = parsed(dist.parse())?;
            emit(
                &sample_weights(&g, &dist, seed)?.to_text(&g),
                out.as_deref(),
            )
        }
        Command::Geodesic {
            graph,
            from,
            to,
            dist,
            seed,
        } => {
            let g = graph_of(&graph)?;
            let omega: Option<WeightAssignment> = match dist {
                Some(d) => Some(sample_weights(&g, &parsed(d.parse())?, seed)?),
                None => None,
            };
            let d = distance(&g, from, to, omega.as_ref())?;
            let p = shortest_path(&g, from, to, omega.as_ref())?;
            println!("distance {d}");
            println!("{}", p.to_line());
            Ok(())
        }
        Command::Recur {
            graph,
            ray,
            slope,
            rmax,
            family,
        } => {
            let g = graph_of(&graph)?;
            let family = parsed(parse_family(&family))?;
            let gamma = named_ray(&g, &ray)?;
            let rmax = rmax.unwrap_or_else(|| g.unclipped_radius().min(gamma.graph_length()));
            let v = gamma.vertices();
            if rmax >= v.len() {
                return Err(Failure::Run(Error::Truncation {
                    radius: rmax,
                    limit: v.len() - 1,
                }));
            }
            let scales: Vec<(Vertex, Vertex)> = (2..=rmax).map(|k| (v[0], v[k])).collect();
            let profile = recurrence_profile(&g, &gamma, slope, &scales, None)?;
            let verdict = classify_direction(&profile, &family);
            let out = json!({
                "verdict": verdict.to_json(),
                "profile": profile.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).map_err(|e| Failure::Run(e.into()))?
            );
            Ok(())
        }
        Command::Experiment {
            spec,
            seed,
            trials,
            workers,
            out,
        } => {
            let mut spec = parsed(ExperimentSpec::from_file(&spec))?;
            if let Some(s) = seed {
                spec.seed = s;
            }
            if let Some(t) = trials {
                if t == 0 {
                    return Err(Failure::Parse(Error::Config(
                        "trials must be at least 1".into(),
                    )));
                }
                spec.trials = t;
            }
            if let Some(w) = workers {
                spec.workers = w.max(1);
            }
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir).map_err(|e| Failure::Run(e.into()))?;
                spec.out_trials = Some(dir.join("trials.jsonl").display().to_string());
                spec.out_summary = Some(dir.join("summary.csv").display().to_string());
            }
            let (_, csv) = run_and_write(&spec)?;
            if spec.out_summary.is_none() {
                print!("{csv}");
            }
            Ok(())
        }
        Command::Report { trials, out } => {
            let text = std::fs::read_to_string(&trials).map_err(|e| Failure::Run(e.into()))?;
            let results = parsed(trials_from_jsonl(&text))?;
            emit(&summarize(&results)?.to_csv(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Parse(e))
        | Err(Failure::Run(e @ (Error::Config(_) | Error::Parse { .. }))) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::SizeCap { .. }) {
                3
            } else {
                2
            })
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::SizeCap { .. }) {
                3
            } else {
                1
            })
        }
    }
}
