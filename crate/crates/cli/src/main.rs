use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use galois_descent::cli::{self, CommandOptions, Outcome};
use galois_descent::multipoly::MonomialOrder;

#[derive(Parser)]
#[command(name = "galdesc", version, about = "Galois descent of affine varieties over number fields")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Lex,
    Grevlex,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a model over the fixed field and print the result document.
    Descend {
        file: PathBuf,
        /// Drop coordinates that are polynomial in the others.
        #[arg(long)]
        prune: bool,
        /// Skip the search for an explicit inverse.
        #[arg(long)]
        no_inverse: bool,
        /// Monomial order of the output ring.
        #[arg(long, value_enum)]
        order: Option<Order>,
        /// Reduction budget per Gröbner computation.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the document here instead of standard output.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Check the cocycle and into-conjugate conditions of the datum.
    VerifyDatum {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Verify a claimed model against the problem's datum.
    CheckModel {
        file: PathBuf,
        #[arg(long)]
        claimed: PathBuf,
        /// Also descend afresh and map the two models onto each other.
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        budget: Option<u64>,
    },
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome {
        code: cli::EXIT_INPUT,
        stdout: String::new(),
        stderr: format!("error: cannot read {}: {e}\n", path.display()),
    })
}

fn run(args: Args) -> Result<Outcome, Outcome> {
    Ok(match args.command {
        Command::Descend {
            file,
            prune,
            no_inverse,
            order,
            budget,
            output,
        } => {
            let opts = CommandOptions {
                prune,
                no_inverse,
                order: order.map(|o| match o {
                    Order::Lex => MonomialOrder::Lex,
                    Order::Grevlex => MonomialOrder::GrevLex,
                }),
                budget,
            };
            let mut out = cli::cmd_descend(&read(&file)?, &opts);
            if let (Some(path), 0) = (output, out.code) {
                std::fs::write(&path, &out.stdout).map_err(|e| Outcome {
                    code: cli::EXIT_INPUT,
                    stdout: String::new(),
                    stderr: format!("error: cannot write {}: {e}\n", path.display()),
                })?;
                out.stdout.clear();
            }
            out
        }
        Command::VerifyDatum { file, budget } => {
            let opts = CommandOptions {
                budget,
                ..CommandOptions::default()
            };
            cli::cmd_verify_datum(&read(&file)?, &opts)
        }
        Command::CheckModel {
            file,
            claimed,
            compare,
            budget,
        } => {
            let opts = CommandOptions {
                budget,
                ..CommandOptions::default()
            };
            cli::cmd_check_model(&read(&file)?, &read(&claimed)?, compare, &opts)
        }
    })
}

fn main() -> ExitCode {
    let out = run(Args::parse()).unwrap_or_else(|e| e);
    print!("{}", out.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
