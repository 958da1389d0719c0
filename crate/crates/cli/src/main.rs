//! `eskmc` — command-line front end for the epistemic skill model checker.
//!
//! Subcommands: `check` (does a formula hold at a world), `truthset`
//! (where does it hold), `validate` (is a model file well formed), `ueg`
//! (solve an edge-geography game directly and through the logic), and
//! `demo` (emit the built-in example model). Exit codes: 0 for a positive
//! verdict (holds / valid / routes agree), 1 for a negative verdict, 2 for
//! usage, parse, or file-format errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use eskmc_core::ueg::DEFAULT_EDGE_LIMIT;
use eskmc_core::{
    holds, parse_formula, reduction_check_with, truth_set, Formula, Model, Player,
    ReductionVariant, RootedGraph, WorldId,
};

#[derive(Parser)]
#[command(
    name = "eskmc",
    version,
    about = "Model checker for epistemic logics with skills",
    max_term_width = 100
)]
struct Cli {
    /// Emit machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a formula holds at a world of a model.
    Check {
        /// Path to a model JSON file.
        model: PathBuf,
        /// World at which to evaluate.
        world: String,
        #[command(flatten)]
        formula: FormulaSource,
    },
    /// List every world of a model where a formula holds.
    Truthset {
        /// Path to a model JSON file.
        model: PathBuf,
        #[command(flatten)]
        formula: FormulaSource,
    },
    /// Check that a model file is well formed and summarize it.
    Validate {
        /// Path to a model JSON file.
        model: PathBuf,
    },
    /// Solve an undirected edge geography game twice — by exhaustive
    /// search and by model-checking the translated formula — and compare.
    Ueg {
        /// Path to a rooted-graph JSON file:
        /// {"nodes": [...], "edges": [["u","v"], ...], "root": "u"}.
        graph: PathBuf,
        /// Quantifier family used by the translation.
        #[arg(long, value_enum, default_value_t = VariantArg::Plus)]
        variant: VariantArg,
        /// Largest edge count accepted for the translation route; the
        /// work roughly squares with each extra edge.
        #[arg(long, default_value_t = DEFAULT_EDGE_LIMIT)]
        max_edges: usize,
    },
    /// Write the built-in five-world example model as JSON.
    Demo {
        /// Output path; prints to stdout when omitted.
        out: Option<PathBuf>,
    },
}

/// A formula given inline or in a file.
#[derive(Args)]
struct FormulaSource {
    /// Formula text, e.g. "K_a (p1 -> ~p4)".
    #[arg(
        value_name = "FORMULA",
        required_unless_present = "formula_file",
        conflicts_with = "formula_file"
    )]
    inline: Option<String>,
    /// Read the formula from this file instead.
    #[arg(long, value_name = "PATH")]
    formula_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// Translate moves as skill gains.
    Plus,
    /// Translate moves as skill sheddings.
    Minus,
    /// Translate moves as outright skill replacements.
    Box,
}

impl From<VariantArg> for ReductionVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Plus => ReductionVariant::BoxPlus,
            VariantArg::Minus => ReductionVariant::BoxMinus,
            VariantArg::Box => ReductionVariant::BoxAssign,
        }
    }
}

#[derive(Serialize)]
struct CheckReport {
    holds: bool,
    world: String,
    formula: String,
    fragment: String,
    formula_length: usize,
}

#[derive(Serialize)]
struct TruthsetReport {
    formula: String,
    worlds: Vec<String>,
}

#[derive(Serialize)]
struct ValidateReport {
    ok: bool,
    worlds: usize,
    labeled_edges: usize,
    capable_agents: usize,
}

#[derive(Serialize)]
struct UegReport {
    variant: String,
    winner: String,
    logic: bool,
    agree: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Check {
            model,
            world,
            formula,
        } => {
            let model = load_model(model)?;
            let world = WorldId::new(world.clone()).map_err(|e| e.to_string())?;
            let formula = formula.resolve()?;
            let verdict = holds(&model, &world, &formula).map_err(|e| e.to_string())?;
            if cli.json {
                print_json(&CheckReport {
                    holds: verdict,
                    world: world.to_string(),
                    formula: formula.to_string(),
                    fragment: formula.fragment().to_string(),
                    formula_length: formula.length(),
                });
            } else {
                println!("{verdict}");
            }
            Ok(verdict_code(verdict))
        }
        Command::Truthset { model, formula } => {
            let model = load_model(model)?;
            let formula = formula.resolve()?;
            let worlds = truth_set(&model, &formula);
            if cli.json {
                print_json(&TruthsetReport {
                    formula: formula.to_string(),
                    worlds: worlds.iter().map(|w| w.to_string()).collect(),
                });
            } else {
                println!("{worlds}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { model } => {
            let model = load_model(model)?;
            if cli.json {
                print_json(&ValidateReport {
                    ok: true,
                    worlds: model.world_count(),
                    labeled_edges: model.edges().count(),
                    capable_agents: model.capable_agents().count(),
                });
            } else {
                println!(
                    "ok: {} worlds, {} labeled edges, {} agents with skills",
                    model.world_count(),
                    model.edges().count(),
                    model.capable_agents().count()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ueg {
            graph,
            variant,
            max_edges,
        } => {
            let text = read_file(graph)?;
            let graph = RootedGraph::from_json(&text).map_err(|e| e.to_string())?;
            let report = reduction_check_with(&graph, (*variant).into(), *max_edges)
                .map_err(|e| e.to_string())?;
            let winner = match report.winner {
                Player::One => "PlayerOne",
                Player::Two => "PlayerTwo",
            };
            if cli.json {
                print_json(&UegReport {
                    variant: ReductionVariant::from(*variant).to_string(),
                    winner: winner.to_string(),
                    logic: report.logic_holds,
                    agree: report.agree,
                });
            } else {
                println!("game winner: {}", report.winner);
                println!("formula verdict: {}", report.logic_holds);
                println!("routes agree: {}", report.agree);
            }
            Ok(verdict_code(report.agree))
        }
        Command::Demo { out } => {
            let text = Model::demo().to_json();
            match out {
                Some(path) => fs::write(path, &text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

impl FormulaSource {
    fn resolve(&self) -> Result<Formula, String> {
        let text = match (&self.inline, &self.formula_file) {
            (Some(text), None) => text.clone(),
            (None, Some(path)) => read_file(path)?,
            _ => unreachable!("clap enforces exactly one formula source"),
        };
        parse_formula(text.trim()).map_err(|e| e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_model(path: &Path) -> Result<Model, String> {
    Model::from_json(&read_file(path)?).map_err(|e| e.to_string())
}

fn print_json(report: &impl Serialize) {
    println!(
        "{}",
        serde_json::to_string(report).expect("reports serialize")
    );
}

fn verdict_code(positive: bool) -> ExitCode {
    if positive {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
