use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hypsolve::quotient::SolveConfig;
use hypsolve_cli::{batch_command, solve_command, Mode, Options};

#[derive(Parser)]
#[command(name = "hypsolve", version, about = "Find 2F1-type solutions of second-order linear differential operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one operator, e.g. "x*(1-x)*Dx^2 + (1-2*x)*Dx - 1/4".
    Solve {
        operator: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Solve one operator per line of a file; '#' starts a comment.
    Batch {
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args)]
struct Flags {
    /// Prime for the modular search.
    #[arg(long, default_value_t = 4099)]
    prime: u64,
    /// Prime tried when the first one is unlucky; 0 disables the retry.
    #[arg(long, default_value_t = 7919)]
    retry_prime: u64,
    /// Largest degree of the pullback over Q(x).
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=2))]
    afmax: u64,
    /// Bit budget for lifting.
    #[arg(long, default_value_t = 2000)]
    max_lift_bits: u64,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl Flags {
    fn options(&self) -> Result<Options, String> {
        for p in [self.prime, self.retry_prime] {
            if p != 0 && !is_prime(p) {
                return Err(format!("{p} is not prime"));
            }
        }
        if self.prime == 0 {
            return Err("0 is not prime".into());
        }
        Ok(Options {
            cfg: SolveConfig {
                prime: self.prime,
                retry_prime: (self.retry_prime != 0).then_some(self.retry_prime),
                afmax: self.afmax as usize,
                max_lift_bits: self.max_lift_bits,
                ..SolveConfig::default()
            },
            mode: self.mode,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = match &cli.command {
        Command::Solve { flags, .. } | Command::Batch { flags, .. } => flags,
    };
    let opts = match flags.options() {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    match &cli.command {
        Command::Solve { operator, .. } => {
            let r = solve_command(operator, &opts);
            if flags.json {
                println!("{}", serde_json::to_string_pretty(&r.to_json()).unwrap());
            } else {
                print!("{}", r.to_text());
            }
            ExitCode::from(r.status.exit_code() as u8)
        }
        Command::Batch { file, .. } => {
            let content = match std::fs::read_to_string(file) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {}: {e}", file.display());
                    return ExitCode::from(3);
                }
            };
            let mut worst = 0;
            let mut reports = Vec::new();
            let summary = batch_command(&content, &opts, |line, r| {
                worst = worst.max(r.status.exit_code());
                if flags.json {
                    let mut v = r.to_json();
                    v["line"] = json!(line);
                    reports.push(v);
                } else {
                    println!("line {line}: {}", r.status.as_str());
                    for l in r.to_text().lines().skip(1) {
                        println!("  {l}");
                    }
                }
            });
            if flags.json {
                let out = json!({
                    "reports": reports,
                    "summary": {
                        "solved": summary.solved,
                        "no-solution-found": summary.no_solution_found,
                        "unsupported": summary.unsupported,
                        "invalid-input": summary.invalid_input,
                    },
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                print!("{}", summary.to_text());
            }
            ExitCode::from(worst as u8)
        }
    }
}
