use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thinfrac_cli::*;
use thinfrac_core::{MonoidContext, Result};

#[derive(Parser)]
#[command(name = "thinfrac", version, about = "Normal forms and Garside structure of homogeneous monoids")]
struct Cli {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    limits: Limits,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Built-in presentation: M1, M2, M3, B3, free(n), free_comm(n).
    #[arg(long, global = true)]
    fixture: Option<String>,
    /// Presentation file.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Limits {
    /// Search bound for mcms; defaults to twice the longest relation plus 2.
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Radius of the bounded cancellativity and uniformity checks.
    #[arg(long, global = true, default_value_t = 6)]
    radius: usize,
    /// Largest norm tried when searching for Garside elements.
    #[arg(long, global = true, default_value_t = 4)]
    garside_norm: usize,
    /// Cap on enumerated elements per ball.
    #[arg(long, global = true, default_value_t = 100_000)]
    ball_cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Cancellativity, primitives, simples and minimal Garside elements.
    Analyze,
    /// Normal form of an element over S (default P_M) or Div(Δ).
    Normalize {
        element: String,
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Every normal decomposition of an element.
    AllNormalForms {
        element: String,
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Decide u = v in the group of fractions, e.g. "a^-1 b" "b^-1 a".
    WordProblem {
        u: String,
        v: String,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Normal-form automaton as DOT (default) or JSON.
    Automaton {
        #[arg(long)]
        delta: Option<String>,
        /// Leave the failure state out of the DOT output.
        #[arg(long)]
        omit_failure: bool,
    },
    /// Growth coefficients c_0..c_n as CSV.
    Growth {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long)]
        delta: Option<String>,
        /// Count group elements instead of monoid elements.
        #[arg(long)]
        group: bool,
    },
    /// Characteristic graph of S (default P_M) in DOT.
    Graph {
        #[arg(long)]
        set: Option<String>,
    },
    /// Synchronous distance between two normal forms, given as
    /// comma-separated letters such as "Δ^-1, ab".
    Distance {
        u: String,
        v: String,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Grid proof that two comma-separated words over S are equal; a random
    /// equal pair when none are given.
    Prove {
        u: Option<String>,
        v: Option<String>,
        #[arg(long)]
        set: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: &Cli) -> Result<String> {
    let bounds = Bounds {
        radius: cli.limits.radius,
        bound: cli.limits.bound,
        garside_norm: cli.limits.garside_norm,
        ball_cap: cli.limits.ball_cap,
    };
    let p = load(cli.source.fixture.as_deref(), cli.source.file.as_deref())?;
    let ctx: MonoidContext = context(p, &bounds);
    let json = cli.json;
    match &cli.command {
        Command::Analyze => {
            let r = cmd_analyze(&ctx, &bounds);
            Ok(if json {
                format!("{:#}\n", r.to_json())
            } else {
                r.to_text()
            })
        }
        Command::Normalize { element, set, delta } => {
            let n = normalizer(&ctx, set.as_deref(), delta.as_deref(), &bounds)?;
            cmd_normalize(&ctx, &n, element, json).map(|s| s + "\n")
        }
        Command::AllNormalForms { element, set, delta } => {
            let n = normalizer(&ctx, set.as_deref(), delta.as_deref(), &bounds)?;
            cmd_all_normal_forms(&ctx, &n, element, json)
        }
        Command::WordProblem { u, v, delta } => {
            let gs = garside(&ctx, delta.as_deref(), &bounds)?;
            cmd_word_problem(&ctx, &gs, u, v, json)
        }
        Command::Automaton { delta, omit_failure } => {
            let gs = garside(&ctx, delta.as_deref(), &bounds)?;
            Ok(cmd_automaton(&ctx, &gs, json, *omit_failure))
        }
        Command::Growth { n, delta, group } => {
            let gs = garside(&ctx, delta.as_deref(), &bounds)?;
            cmd_growth(&ctx, &gs, *n, *group, bounds.radius)
        }
        Command::Graph { set } => {
            let s = match set {
                Some(text) => parse_set(&ctx, text)?,
                None => primitives(&ctx, &bounds)?,
            };
            Ok(export_characteristic_graph(&ctx, &s))
        }
        Command::Distance { u, v, delta } => {
            let gs = garside(&ctx, delta.as_deref(), &bounds)?;
            cmd_distance(&ctx, &gs, u, v)
        }
        Command::Prove { u, v, set, seed } => {
            let s = spanning_set(&ctx, set.as_deref(), &bounds)?;
            let words = match (u, v) {
                (Some(u), Some(v)) => Some((u.as_str(), v.as_str())),
                (None, None) => None,
                _ => {
                    return Err(thinfrac_core::Error::Precondition(
                        "give both words or neither".into(),
                    ))
                }
            };
            cmd_prove(&ctx, &s, words, *seed, json)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
