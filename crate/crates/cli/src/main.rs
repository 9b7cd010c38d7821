//! `satdef`: batch front end over satdef-core.
//!
//! Output is one JSON document per run (or one JSON object per line for
//! streamed verbs); `--pretty` switches to plain text. Exit codes: 0 on
//! success, 1 on a domain error (printed as `{"error": ...}`), 2 on a usage
//! error.

mod commands;
mod inputs;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "satdef", version, about = "Formula hierarchies, coding, schemata, finite models and forcing")]
struct Cli {
    /// Human-readable text instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct SigArgs {
    /// Signature JSON file (default: the arithmetic signature).
    #[arg(long, value_name = "FILE")]
    sig: Option<String>,
    /// Extra relation symbols, as NAME/ARITY.
    #[arg(long = "rel", value_name = "NAME/ARITY")]
    relations: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its rendering, AST and free variables.
    Parse {
        formula: String,
        #[command(flatten)]
        sig: SigArgs,
    },
    /// Quantifier-alternation rank and depths.
    Classify {
        formula: String,
        #[command(flatten)]
        sig: SigArgs,
    },
    /// Goedel code of a formula (or of a term with --term).
    Encode {
        text: String,
        #[arg(long)]
        term: bool,
        #[command(flatten)]
        sig: SigArgs,
    },
    /// Formula or term with the given decimal code.
    Decode { code: String },
    /// Schema instances as newline-delimited s-expressions.
    GenSchema {
        /// tb, usb, def, skolem, twotb, utb-term or rsat.
        #[arg(long)]
        schema: String,
        /// Use every formula whose code is at most N as a source.
        #[arg(long, value_name = "N", conflicts_with = "sources")]
        max_code: Option<u64>,
        /// Source formulas, one per line.
        #[arg(long, value_name = "FILE")]
        sources: Option<String>,
        /// Closed terms for utb-term, one per line.
        #[arg(long, value_name = "FILE")]
        terms: Option<String>,
        /// Code p for rsat.
        #[arg(long)]
        p: Option<String>,
        /// Cutoff n for rsat.
        #[arg(long, default_value_t = 1)]
        cutoff: usize,
        /// Write the JSON manifest (schema, source codes, instance codes) here.
        #[arg(long, value_name = "FILE")]
        manifest: Option<String>,
        #[command(flatten)]
        sig: SigArgs,
    },
    /// Evaluate sentences over the naturals or in a finite model.
    Eval {
        /// The sentence; without it, sentences are read from stdin, one per line.
        formula: Option<String>,
        /// Finite model (file, `hf:R`, or `A+B` for a disjoint union).
        #[arg(long)]
        model: Option<String>,
        /// Truth oracle interpreting T, T1 and T2 over the naturals.
        #[arg(long, value_name = "FILE")]
        truth: Option<String>,
        /// Declare the fresh symbols of this schema.
        #[arg(long)]
        schema: Option<String>,
        /// Search bound for unbounded quantifiers.
        #[arg(long, default_value_t = 64)]
        bound: u64,
        #[command(flatten)]
        sig: SigArgs,
    },
    /// Check the adjunctive-set axioms and extensionality.
    CheckModel { model: String },
    /// Least definition of every definable element.
    Definables {
        model: String,
        #[arg(long, default_value_t = 7)]
        max_size: usize,
        /// Only definitions of rank at most this level.
        #[arg(long)]
        level: Option<usize>,
    },
    /// All automorphisms.
    Autos { model: String },
    /// Whether two models agree on sentences up to a level and size.
    Nequiv {
        left: String,
        right: String,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
    },
    /// Whether a condition forces a set formula.
    Force {
        /// Bit string such as 0110 (`-` for the empty condition).
        condition: String,
        formula: String,
        /// Budgeted mode instead of exact.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run the generic-set construction.
    BuildGeneric {
        #[arg(long)]
        stages: usize,
        /// Set formulas phi_k, one per line.
        #[arg(long, value_name = "FILE")]
        phis: String,
        /// Truth oracle for the sentences xi_k.
        #[arg(long, value_name = "FILE")]
        truth: String,
        /// Sentences xi_k, one per line (default: the oracle's codes in order).
        #[arg(long, value_name = "FILE")]
        xis: Option<String>,
    },
    /// Audit a stage trace for genericity.
    Audit {
        trace: String,
        #[arg(long, value_name = "FILE")]
        phis: String,
        /// Also re-verify every stage against these sentences.
        #[arg(long, value_name = "FILE")]
        xis: Option<String>,
    },
    /// Check a truth oracle against the compositional truth clauses.
    CheckCt {
        #[arg(long, value_name = "FILE")]
        truth: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        numerals: u64,
    },
    /// Check a satisfaction table against the compositional clauses.
    CheckCompositional {
        /// Formulas, one per line.
        #[arg(long, value_name = "FILE")]
        formulas: String,
        /// Table JSON: [[code, {var: value}, bool], ...].
        #[arg(long, value_name = "FILE", required_unless_present = "own_table")]
        table: Option<String>,
        /// Use the model's own satisfaction table.
        #[arg(long)]
        own_table: bool,
        #[arg(long, conflicts_with = "bound")]
        model: Option<String>,
        /// Context of the naturals below this bound.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Check a Hilbert-style proof.
    CheckProof {
        proof: String,
        /// Premises: a JSON array of s-expressions.
        #[arg(long, value_name = "FILE")]
        premises: Option<String>,
    },
}

pub enum Output {
    /// One rendered JSON document and its text form.
    Json(String, String),
    /// One rendered JSON object per line.
    Stream(Vec<String>, String),
    /// Lines written as they are, in either mode.
    Raw(String),
}

fn run(cli: Cli) -> anyhow::Result<Output> {
    use commands as c;
    match cli.command {
        Command::Parse { formula, sig } => c::parse(&formula, &sig),
        Command::Classify { formula, sig } => c::classify(&formula, &sig),
        Command::Encode { text, term, sig } => c::encode(&text, term, &sig),
        Command::Decode { code } => c::decode(&code),
        Command::GenSchema {
            schema,
            max_code,
            sources,
            terms,
            p,
            cutoff,
            manifest,
            sig,
        } => c::gen_schema(c::SchemaRequest {
            schema: &schema,
            max_code,
            sources: sources.as_deref(),
            terms: terms.as_deref(),
            p: p.as_deref(),
            cutoff,
            manifest: manifest.as_deref(),
            sig: &sig,
        }),
        Command::Eval {
            formula,
            model,
            truth,
            schema,
            bound,
            sig,
        } => c::eval(formula.as_deref(), model.as_deref(), truth.as_deref(), schema.as_deref(), bound, &sig),
        Command::CheckModel { model } => c::check_model(&model),
        Command::Definables { model, max_size, level } => c::definables(&model, max_size, level),
        Command::Autos { model } => c::autos(&model),
        Command::Nequiv {
            left,
            right,
            level,
            max_size,
        } => c::nequiv(&left, &right, level, max_size),
        Command::Force {
            condition,
            formula,
            budget,
        } => c::force(&condition, &formula, budget),
        Command::BuildGeneric {
            stages,
            phis,
            truth,
            xis,
        } => c::build_generic(stages, &phis, &truth, xis.as_deref()),
        Command::Audit { trace, phis, xis } => c::audit(&trace, &phis, xis.as_deref()),
        Command::CheckCt { truth, depth, numerals } => c::check_ct(&truth, depth, numerals),
        Command::CheckCompositional {
            formulas,
            table,
            own_table,
            model,
            bound,
        } => c::check_compositional(&formulas, table.as_deref(), own_table, model.as_deref(), bound),
        Command::CheckProof { proof, premises } => c::check_proof(&proof, premises.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.pretty;
    let mut out = std::io::stdout().lock();
    let written = match run(cli) {
        Ok(Output::Json(json, text)) => {
            if pretty {
                writeln!(out, "{}", text.trim_end())
            } else {
                writeln!(out, "{json}")
            }
        }
        Ok(Output::Stream(items, text)) => {
            if pretty {
                writeln!(out, "{}", text.trim_end())
            } else {
                items.iter().try_for_each(|j| writeln!(out, "{j}"))
            }
        }
        Ok(Output::Raw(text)) => write!(out, "{text}"),
        Err(e) => {
            let _ = writeln!(out, "{}", serde_json::json!({ "error": format!("{e:#}") }));
            return ExitCode::from(1);
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        // a closed pipe downstream is not our failure
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(_) => ExitCode::from(1),
    }
}
