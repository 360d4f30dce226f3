//! Command-line front end for `hypermyerson-core`.
//!
//! [`run`] takes the argument vector and the standard-input text and returns
//! what should be written to standard output and standard error together
//! with the exit code, so it can be driven directly from tests.

use std::fs;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use hypermyerson_core::analysis::{self, random_hypergraph, Instance, PropertyReport};
use hypermyerson_core::game::{random_superadditive_game, random_table_game};
use hypermyerson_core::values::{myerson_monte_carlo, shapley_monte_carlo};
use hypermyerson_core::{io, rational, ConnectivitySemantics, EdgeId, Error, TUGame};
use serde_json::{json, Value};

/// Exit code for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code when a `verify-*` command finds a failing property.
pub const EXIT_FAILS: i32 = 1;
/// Exit code for usage and input errors.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hypermyerson",
    version,
    about = "Myerson values for TU games restricted by directed hypergraphs"
)]
pub struct Cli {
    /// Instance document (or JSON array of documents); defaults to stdin.
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<String>,

    /// Override the connectivity semantics given in the document.
    #[arg(long, global = true, value_enum)]
    semantics: Option<SemanticsArg>,

    /// Emit canonical JSON (default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,

    /// Emit a human-readable table.
    #[arg(long, global = true)]
    table: bool,

    /// Seed for `generate` and `estimate`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Strong,
    Weak,
}

impl From<SemanticsArg> for ConnectivitySemantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Strong => Self::Strong,
            SemanticsArg::Weak => Self::Weak,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partition of the players into components.
    Components,
    /// Bridge classification of every edge.
    Bridges,
    /// Players on every path between two players.
    Critical {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Exact Myerson value.
    Myerson,
    /// Exact Shapley value of the unrestricted game.
    Shapley,
    /// Whether any player on the edge gains from deleting it.
    Stability(EdgeArg),
    /// Whether any player at all gains from deleting the edge.
    Safety(EdgeArg),
    /// Component efficiency and fairness of the Myerson value.
    VerifyAxioms,
    /// Bridge/safety agreement table (requires a convex game).
    VerifyTheorem,
    /// Component-slice decomposition of the restricted game.
    Decomposition,
    /// Check reported allocations against grand-coalition efficiency.
    Audit {
        /// JSON file with a "reported" list of allocations.
        #[arg(long, value_name = "FILE")]
        reported: String,
    },
    /// Print a seeded random instance.
    Generate(GenerateArgs),
    /// Monte Carlo estimate by permutation sampling.
    Estimate {
        #[arg(long)]
        samples: u64,
        /// Estimate the Shapley value of the unrestricted game instead.
        #[arg(long)]
        shapley: bool,
    },
}

#[derive(Debug, Args)]
struct EdgeArg {
    /// One-based edge label.
    #[arg(long)]
    edge: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GameKind {
    Table,
    Supermodular,
    Superadditive,
    CardinalityPower,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    players: usize,
    #[arg(long)]
    edges: usize,
    #[arg(long, default_value_t = 2)]
    tail_max: usize,
    #[arg(long, default_value_t = 2)]
    head_max: usize,
    #[arg(long, value_enum, default_value = "table")]
    game: GameKind,
    /// Unanimity terms for supermodular games.
    #[arg(long, default_value_t = 3)]
    terms: usize,
    /// Quadratic term for supermodular games, as "p/q".
    #[arg(long, default_value = "0")]
    epsilon: String,
    /// Exponent for cardinality-power games.
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Number of instances; more than one prints a JSON array.
    #[arg(long, default_value_t = 1)]
    count: usize,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Rendered {
    json: Value,
    table: String,
    fails: bool,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, stdin: impl FnOnce() -> std::io::Result<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    match execute(&cli, stdin) {
        Ok((stdout, fails)) => Outcome {
            code: if fails { EXIT_FAILS } else { EXIT_OK },
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
        },
    }
}

fn execute(
    cli: &Cli,
    stdin: impl FnOnce() -> std::io::Result<String>,
) -> anyhow::Result<(String, bool)> {
    if let Command::Generate(args) = &cli.command {
        return generate(cli, args);
    }
    let text = match &cli.input {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => stdin().context("reading standard input")?,
    };
    let is_corpus = text.trim_start().starts_with('[');
    let mut instances = io::parse_instances(&text)?;
    if let Some(sem) = cli.semantics {
        instances = instances
            .iter()
            .map(|i| i.with_semantics(sem.into()))
            .collect();
    }
    let mut rendered = Vec::with_capacity(instances.len());
    for instance in &instances {
        rendered.push(render(cli, instance)?);
    }
    let fails = rendered.iter().any(|r| r.fails);
    let out = if cli.table {
        rendered
            .iter()
            .map(|r| r.table.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    } else if is_corpus {
        io::canonical_text(&Value::Array(
            rendered.into_iter().map(|r| r.json).collect(),
        ))
    } else {
        io::canonical_text(&rendered.into_iter().next().expect("one instance").json)
    };
    Ok((out, fails))
}

fn edge_id(instance: &Instance, label: usize) -> anyhow::Result<EdgeId> {
    let id = EdgeId::from_label(label).context("edge labels start at 1")?;
    instance.graph.edge(id)?;
    Ok(id)
}

fn report_output(report: PropertyReport, counts_as_failure: bool) -> Rendered {
    Rendered {
        json: io::report_to_json(&report),
        table: io::report_table(&report),
        fails: counts_as_failure && !report.holds(),
    }
}

fn render(cli: &Cli, instance: &Instance) -> anyhow::Result<Rendered> {
    let sem = instance.semantics;
    Ok(match &cli.command {
        Command::Components => {
            let parts = instance.graph.strong_components(sem);
            let table = parts
                .blocks()
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            Rendered {
                json: json!({"semantics": sem.as_str(), "components": parts.to_indices()}),
                table: format!("components [{sem}]: {table}\n"),
                fails: false,
            }
        }
        Command::Bridges => {
            let mut rows = Vec::new();
            let mut table = format!("edge  tail      head      bridge [{sem}]\n");
            for (id, e) in instance.graph.edges() {
                let bridge = instance.graph.is_bridge(id, sem)?;
                table.push_str(&format!(
                    "{:<5} {:<9} {:<9} {bridge}\n",
                    id.to_string(),
                    e.tail().to_string(),
                    e.head().to_string()
                ));
                rows.push(json!({
                    "edge": id.label(),
                    "tail": e.tail().indices(),
                    "head": e.head().indices(),
                    "bridge": bridge,
                }));
            }
            Rendered {
                json: json!({"semantics": sem.as_str(), "edges": rows}),
                table,
                fails: false,
            }
        }
        Command::Critical { from, to } => {
            let (s, t) = (instance.graph.player(*from)?, instance.graph.player(*to)?);
            let critical = match instance.graph.critical_players(s, t) {
                Ok(c) => Some(c),
                Err(Error::NoPath { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            Rendered {
                json: json!({
                    "from": from,
                    "to": to,
                    "path_exists": critical.is_some(),
                    "critical": critical.map(|c| c.indices()),
                }),
                table: match critical {
                    Some(c) => format!("critical players {from} -> {to}: {c}\n"),
                    None => format!("no path from {from} to {to}\n"),
                },
                fails: false,
            }
        }
        Command::Myerson => allocation_output(instance.myerson()?),
        Command::Shapley => allocation_output(hypermyerson_core::shapley_exact(&instance.game)?),
        Command::Stability(arg) => report_output(
            analysis::check_stability(instance, edge_id(instance, arg.edge)?)?,
            false,
        ),
        Command::Safety(arg) => report_output(
            analysis::check_safety(instance, edge_id(instance, arg.edge)?)?,
            false,
        ),
        Command::Decomposition => report_output(analysis::check_decomposition(instance)?, false),
        Command::VerifyAxioms => {
            let reports = [
                analysis::check_component_efficiency(instance)?,
                analysis::check_fairness(instance)?,
            ];
            let fails = reports.iter().any(|r| !r.holds());
            Rendered {
                json: json!({
                    "fingerprint": instance.fingerprint(),
                    "reports": reports.iter().map(io::report_to_json).collect::<Vec<_>>(),
                    "verdict": if fails { "fails" } else { "holds" },
                }),
                table: reports.iter().map(io::report_table).collect(),
                fails,
            }
        }
        Command::VerifyTheorem => {
            report_output(analysis::verify_bridge_safety_theorem(instance)?, true)
        }
        Command::Audit { reported } => {
            let text =
                fs::read_to_string(reported).with_context(|| format!("reading {reported}"))?;
            let entries = io::parse_reported_allocations(&text)?;
            report_output(
                analysis::audit_reported_allocations(instance, &entries)?,
                false,
            )
        }
        Command::Estimate { samples, shapley } => {
            let est = if *shapley {
                shapley_monte_carlo(&instance.game, *samples, cli.seed)?
            } else {
                myerson_monte_carlo(&instance.graph, &instance.game, sem, *samples, cli.seed)?
            };
            let mut table = String::from("player  estimate\n");
            for (k, p) in est.payoffs.iter().enumerate() {
                table.push_str(&format!("{:>6}  {p:.6}\n", k + 1));
            }
            Rendered {
                json: io::estimate_to_json(&est),
                table,
                fails: false,
            }
        }
        Command::Generate(_) => unreachable!("handled before input is read"),
    })
}

fn allocation_output(allocation: hypermyerson_core::Allocation) -> Rendered {
    Rendered {
        json: io::allocation_to_json(&allocation),
        table: io::allocation_table(&allocation),
        fails: false,
    }
}

fn generate(cli: &Cli, args: &GenerateArgs) -> anyhow::Result<(String, bool)> {
    let epsilon =
        rational::parse_fraction(&args.epsilon).map_err(|m| anyhow::anyhow!("--epsilon: {m}"))?;
    let semantics = cli.semantics.map(Into::into).unwrap_or_default();
    let mut instances = Vec::with_capacity(args.count);
    for k in 0..args.count as u64 {
        let seed = cli.seed.wrapping_add(k);
        let graph =
            random_hypergraph(args.players, args.edges, args.tail_max, args.head_max, seed)?;
        let game = match args.game {
            GameKind::Table => random_table_game(args.players, seed)?,
            GameKind::Supermodular => {
                TUGame::random_supermodular(args.players, args.terms, seed, epsilon.clone())?
            }
            GameKind::Superadditive => random_superadditive_game(args.players, seed)?,
            GameKind::CardinalityPower => TUGame::cardinality_power(args.players, args.k)?,
        };
        instances.push(Instance::new(graph, game, semantics)?);
    }
    let text = if args.count == 1 {
        io::emit_instance(&instances[0])
    } else {
        io::emit_instances(&instances)
    };
    Ok((text, false))
}
