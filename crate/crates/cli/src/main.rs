use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use b3tower_cli::commands::{self, GrowthOptions};
use b3tower_cli::{golden, CliError, Document, Report};
use clap::{Parser, Subcommand};

/// Exact derived flags, prolongations and pseudo-product certificates for
/// (3,6)-distributions.
///
/// Exit status: 0 pass, 1 certificate failure, 2 input error, 3 internal
/// invariant violation.
#[derive(Parser)]
#[command(name = "b3tower", version)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Growth vector of the distribution, generically and at a point.
    Growth {
        /// Document path, or `-` for standard input.
        doc: PathBuf,
        /// `random`, or assignments like `x1=1,x6=1/2,m'(x6)=3`.
        #[arg(long)]
        at: Option<String>,
        /// Seed for `--at random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum number of flag steps (default: chart dimension).
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Prolong a (3,6)-distribution.
    Prolong {
        doc: PathBuf,
        /// projective, fiber-line, dual or svc-cone.
        #[arg(long)]
        kind: String,
        /// Further prolongations, threaded through the splitting.
        #[arg(long)]
        then: Vec<String>,
        /// Also write the prolonged document to this file.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check a pseudo-product structure on a split document.
    Check {
        doc: PathBuf,
        /// b3-23, b3-123, b3-13 or b3-13-strict.
        #[arg(long)]
        structure: String,
    },
    /// Verify a singular-velocity-cone tangency claim.
    Svc {
        doc: PathBuf,
        /// svc-d-full, svc-e-split, svc-f-strata or svc-l-quadric.
        #[arg(long)]
        claim: String,
    },
    /// Emit a flag-manifold model or the example family as a document.
    Model {
        /// F123, F23, F13, F3 or example.
        #[arg(long)]
        name: String,
        /// Check the printed bracket table as well.
        #[arg(long)]
        brackets: bool,
        /// Also write the document to this file.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the golden-file regression suite.
    Golden {
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Rewrite the fixtures from the current output.
        #[arg(long)]
        bless: bool,
    },
}

fn read_doc(path: &PathBuf) -> Result<Document, CliError> {
    let mut src = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut src)?;
    } else {
        src = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Document::parse(&src)
}

fn write_doc(report: &Report, path: &Option<PathBuf>) -> Result<(), CliError> {
    if let (Some(path), Some(raw)) = (path, &report.document) {
        let doc = Document::from_raw(raw)?;
        std::fs::write(path, doc.emit() + "\n")?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Growth {
            doc,
            at,
            seed,
            max_depth,
        } => commands::growth(
            &read_doc(doc)?,
            &GrowthOptions {
                at: at.clone(),
                seed: *seed,
                max_depth: *max_depth,
            },
        ),
        Command::Prolong {
            doc,
            kind,
            then,
            output,
        } => {
            let r = commands::prolong(&read_doc(doc)?, kind, then)?;
            write_doc(&r, output)?;
            Ok(r)
        }
        Command::Check { doc, structure } => commands::check(&read_doc(doc)?, structure),
        Command::Svc { doc, claim } => commands::svc(&read_doc(doc)?, claim),
        Command::Model { name, brackets, output } => {
            let r = commands::model(name, *brackets)?;
            write_doc(&r, output)?;
            Ok(r)
        }
        Command::Golden { dir, bless } => {
            let dir = dir.clone().unwrap_or_else(golden::default_dir);
            golden::golden(&dir, *bless)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.render());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            if cli.json {
                let v = serde_json::json!({
                    "error": { "kind": e.kind(), "message": e.to_string() },
                    "status": "error",
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("error serializes"));
            }
            eprintln!("error ({}): {e}", e.kind());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
