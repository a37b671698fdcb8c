//! Front end for `klr`: argument handling, expression parsing and output.

pub mod commands;
pub mod expr;
pub mod render;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use klr_core::combinatorics::SequenceKind;
use klr_core::KlrError;
use serde_json::json;

use commands::{Outcome, Session};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "klr", version, about = "Exact computations in KLR algebras of type A")]
pub struct Cli {
    /// Quantum characteristic; 0 is the linear quiver.
    #[arg(long, global = true, default_value_t = 3)]
    pub e: u32,
    /// Multicharge κ, comma separated.
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true)]
    pub charge: String,
    /// Number of strands.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Slice cache directory; KLR_CACHE takes precedence when set.
    #[arg(long = "cache-dir", global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the ψ-basis of R^Λ_n.
    Basis {
        #[arg(long)]
        block: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i64>,
    },
    /// Normal form of an expression, optionally modulo the cyclotomic ideal.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long = "mod", visible_alias = "mod-lambda")]
        cyclotomic: bool,
    },
    /// Coordinates of an expression in the ψ-basis.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Check that the ψ-elements form a basis of every graded slice.
    VerifyRank,
    /// Expansion of ψ_{st} times one generator.
    Struct {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long = "gen")]
        generator: String,
    },
    /// Gram matrix of the Specht module S^λ.
    Gram {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Shapes whose Specht module has a nonzero simple head.
    Simples {
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Whether λ is a Kleshchev multipartition.
    Kleshchev {
        #[arg(long)]
        lambda: String,
    },
    /// Least degree in which the cyclotomic ideal meets a block.
    MinDegree {
        #[arg(long)]
        alpha: String,
    },
    /// Check the affine ψ-basis in one degree.
    AffineBasis {
        #[arg(long, value_parser = parse_kind)]
        seq: SequenceKind,
        /// Initial weight, e.g. L0+L1; defaults to the weight of --charge.
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Strand listing of the normal form of an expression.
    Render {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long = "mod", visible_alias = "mod-lambda")]
        cyclotomic: bool,
    },
    /// Graded dimension of R^Λ_n.
    GradedDim,
}

fn parse_kind(s: &str) -> Result<SequenceKind, String> {
    s.parse().map_err(|e: KlrError| e.to_string())
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exit {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn wants_json(args: &[OsString]) -> bool {
    args.windows(2).any(|w| w[0] == "--format" && w[1] == "json") || args.iter().any(|a| a == "--format=json")
}

fn failure(json: bool, kind: &str, message: &str, code: i32) -> Exit {
    if json {
        let body = json!({ "error": { "kind": kind, "message": message } });
        Exit { code, stdout: format!("{}\n", serde_json::to_string_pretty(&body).unwrap()), stderr: String::new() }
    } else {
        Exit { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

fn dispatch(cli: &Cli, cache_dir: Option<PathBuf>) -> klr_core::Result<Outcome> {
    let s = Session::new(cli.e, &cli.charge, cli.n, cache_dir.as_deref())?;
    match &cli.command {
        Command::Basis { block, degree } => commands::basis(&s, block.as_deref(), *degree),
        Command::Reduce { expr, cyclotomic } => commands::reduce(&s, expr, *cyclotomic),
        Command::Expand { expr } => commands::expand(&s, expr),
        Command::VerifyRank => commands::verify_rank(&s),
        Command::Struct { lambda, s: st, t, generator } => commands::structure(&s, lambda, st, t, generator),
        Command::Gram { lambda, prime } => commands::gram(&s, lambda, *prime),
        Command::Simples { prime } => commands::simples(&s, *prime),
        Command::Kleshchev { lambda } => commands::kleshchev(&s, lambda),
        Command::MinDegree { alpha } => commands::min_degree_of(&s, alpha),
        Command::AffineBasis { seq, seed, degree, alpha } => {
            commands::affine_basis(&s, *seq, seed.as_deref(), *degree, alpha.as_deref())
        }
        Command::Render { expr, cyclotomic } => commands::render(&s, expr, *cyclotomic),
        Command::GradedDim => commands::graded_dim(&s),
    }
}

/// Runs `klr` on `args` (program name first). `env_cache` is the value of `KLR_CACHE`.
pub fn run(args: impl IntoIterator<Item = impl Into<OsString>>, env_cache: Option<PathBuf>) -> Exit {
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json = wants_json(&args);
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Exit { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ if json => failure(true, "usage", text.trim(), EXIT_ERROR),
                _ => Exit { code: EXIT_ERROR, stdout: String::new(), stderr: text },
            };
        }
    };
    let json = cli.format == Format::Json;
    let cache_dir = env_cache.filter(|p| !p.as_os_str().is_empty()).or_else(|| cli.cache_dir.clone());
    match dispatch(&cli, cache_dir) {
        Ok(out) => {
            let code = if out.mismatch { EXIT_MISMATCH } else { EXIT_OK };
            let stdout = if json { format!("{}\n", serde_json::to_string_pretty(&out.json).unwrap()) } else { out.human };
            Exit { code, stdout, stderr: String::new() }
        }
        Err(KlrError::Mismatch(m)) => failure(json, "mismatch", &format!("verification failed: {m}"), EXIT_MISMATCH),
        Err(e @ (KlrError::Parse(_) | KlrError::InvalidInput(_) | KlrError::StrandMismatch(..))) => {
            failure(json, "input", &e.to_string(), EXIT_ERROR)
        }
        Err(e) => failure(json, "engine", &e.to_string(), EXIT_ERROR),
    }
}
