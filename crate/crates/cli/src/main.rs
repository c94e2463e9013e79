//! `natcode`: codecs, Kraft audits, dominating-code constructions and
//! evidence reports for length functions on the naturals.
//!
//! Exit status: 0 success, 1 no witness below the horizon, 2 parse or file
//! format error (also I/O), 3 resource cap, 4 contract violation.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use natcode::construct::ConstructConfig;
use natcode::Nat;

#[derive(Parser)]
#[command(name = "natcode", version, about = "Universal codes for the naturals")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on completion steps per construction.
    #[arg(long, global = true, value_name = "N")]
    max_steps: Option<u64>,
    /// Cap on runs walked by a single scan inside a construction.
    #[arg(long, global = true, value_name = "N")]
    max_scan: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Range {
    #[arg(long, default_value = "0")]
    from: Nat,
    #[arg(long, default_value = "15")]
    to: Nat,
}

#[derive(Args)]
struct Evidence {
    /// Largest index examined.
    #[arg(long, default_value_t = 1000)]
    horizon: u64,
    /// A witness is an index where the first code is shorter by at least this much.
    #[arg(long, default_value = "10")]
    gap: Nat,
}

#[derive(Subcommand)]
enum Command {
    /// Print code lengths over an index range.
    Lengths {
        #[arg(long)]
        code: String,
        #[command(flatten)]
        range: Range,
    },
    /// Exact Kraft partial sum of the first N lengths and the gap to one.
    Kraft {
        #[arg(long)]
        code: String,
        #[arg(short = 'n', default_value = "64")]
        n: Nat,
    },
    /// Encode whitespace-separated decimal naturals into a NATC file.
    Encode {
        #[arg(long)]
        code: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Decode a NATC file to decimal naturals, one per line.
    Decode {
        #[arg(long)]
        input: PathBuf,
        /// Written to stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Require the file to be encoded with this code.
        #[arg(long)]
        code: Option<String>,
    },
    /// Build a code better than every listed code and search for witnesses.
    Dominate {
        /// Comma-separated code specs; the last one repeats forever.
        #[arg(long)]
        codes: String,
        #[command(flatten)]
        evidence: Evidence,
        /// Write the completion trace here (JSON when the name ends in `.json`).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Evidence that code A is better than code B over a finite range.
    Compare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        evidence: Evidence,
    },
    /// Hierarchy codes indexed by ordinals below w^w.
    Hierarchy {
        #[arg(long)]
        ordinal: String,
        #[command(flatten)]
        range: Range,
        /// Print the first N elements of the fundamental sequence instead.
        #[arg(long, value_name = "N")]
        fundamental: Option<u64>,
        /// Compare against the code of this ordinal instead.
        #[arg(long, value_name = "ORDINAL")]
        against: Option<String>,
        #[command(flatten)]
        evidence: Evidence,
    },
    /// Print canonical codewords over an index range.
    Codewords {
        #[arg(long)]
        code: String,
        #[command(flatten)]
        range: Range,
    },
    /// Run completion steps of a domination and export the trace.
    Trace {
        #[arg(long)]
        codes: String,
        #[arg(long, default_value_t = 16)]
        steps: u64,
        /// Written to stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = ConstructConfig::default();
    if let Some(s) = cli.max_steps {
        config.max_steps = s;
    }
    if let Some(s) = cli.max_scan {
        config.max_scan = s;
    }
    let ctx = commands::Context { json: cli.json, config };
    let outcome = match cli.command {
        Command::Lengths { code, range } => ctx.lengths(&code, &range.from, &range.to),
        Command::Kraft { code, n } => ctx.kraft(&code, &n),
        Command::Encode { code, input, output } => ctx.encode(&code, &input, &output),
        Command::Decode { input, output, code } => ctx.decode(&input, output.as_deref(), code.as_deref()),
        Command::Dominate { codes, evidence, trace } => {
            ctx.dominate(&codes, evidence.horizon, &evidence.gap, trace.as_deref())
        }
        Command::Compare { a, b, evidence } => ctx.compare(&a, &b, evidence.horizon, &evidence.gap),
        Command::Hierarchy {
            ordinal,
            range,
            fundamental,
            against,
            evidence,
        } => match (fundamental, against) {
            (Some(count), _) => ctx.fundamental(&ordinal, count),
            (None, Some(b)) => ctx.compare_ordinals(&ordinal, &b, evidence.horizon, &evidence.gap),
            (None, None) => ctx.lengths(&format!("hier({ordinal})"), &range.from, &range.to),
        },
        Command::Codewords { code, range } => ctx.codewords(&code, &range.from, &range.to),
        Command::Trace { codes, steps, output } => ctx.trace(&codes, steps, output.as_deref()),
    };
    match outcome {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
