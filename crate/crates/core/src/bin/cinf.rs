use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cinf::cli::{self, parse_rational_arg, TransferOptions};
use cinf::Scalar;

/// Exact A∞/C∞ computations on finite graded algebras.
#[derive(Parser)]
#[command(name = "cinf", version)]
struct Cli {
    /// Append a JSON block to the report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra or morphism file.
    Check {
        file: PathBuf,
        #[arg(long)]
        max_degree: i32,
        /// Also require shuffle vanishing.
        #[arg(long)]
        cinf: bool,
    },
    /// Transfer a dga or cdga file to a minimal structure on its homology.
    Transfer {
        file: PathBuf,
        #[arg(long)]
        max_arity: usize,
        #[arg(long)]
        max_degree: i32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cinf: bool,
        /// Where to write the transferred structure.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the morphism into the algebra.
        #[arg(long)]
        morphism_out: Option<PathBuf>,
    },
    /// Homotopy invariants of a minimal structure.
    Invariants {
        #[command(subcommand)]
        which: Invariant,
    },
}

#[derive(Subcommand)]
enum Invariant {
    /// Ranks of the bar construction homology.
    Bar {
        file: PathBuf,
        #[arg(long)]
        max_degree: i32,
    },
    /// Rational homotopy ranks.
    Pi {
        file: PathBuf,
        #[arg(long)]
        max_degree: i32,
    },
    Formality {
        file: PathBuf,
        #[arg(long)]
        max_arity: usize,
    },
    /// Compare two structures on H*(S²∨S²∨S⁵).
    ClassifyExample {
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        p: Scalar,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        q: Scalar,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        p2: Scalar,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        q2: Scalar,
    },
    /// Extend the linear part of a morphism file to a C∞-morphism.
    Realize {
        file: PathBuf,
        #[arg(long)]
        max_arity: usize,
    },
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let report = match args.command {
        Command::Check { file, max_degree, cinf } => cli::cmd_check(&file, max_degree, cinf),
        Command::Transfer { file, max_arity, max_degree, seed, cinf, out, morphism_out } => {
            let opts = TransferOptions { max_arity, max_degree, seed, cinf, structure_out: out, morphism_out };
            let r = cli::cmd_transfer(&file, &opts);
            if r.code == 0 && opts.structure_out.is_none() && !args.json {
                print!("{}", serde_json::to_string_pretty(&r.json["structure"]).expect("json"));
                println!();
            }
            r
        }
        Command::Invariants { which } => match which {
            Invariant::Bar { file, max_degree } => cli::cmd_bar(&file, max_degree),
            Invariant::Pi { file, max_degree } => cli::cmd_pi(&file, max_degree),
            Invariant::Formality { file, max_arity } => cli::cmd_formality(&file, max_arity),
            Invariant::ClassifyExample { p, q, p2, q2 } => cli::cmd_classify_example(&p, &q, &p2, &q2),
            Invariant::Realize { file, max_arity } => cli::cmd_realize(&file, max_arity),
        },
    };
    let text = report.render(args.json);
    if report.code == 0 {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    ExitCode::from(report.code as u8)
}
