use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wrt_core::lens::{self, Backend, InvariantResult, LensSpace};
use wrt_core::{
    cf_expand, cf_for_lens, default_tolerance, normalize_lens, rep_bruteforce, Complex64,
    CyclotomicNumber, Error, TheoryParams,
};

const EXIT_DOMAIN: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "wrt", version, about = "WRT invariants of lens spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariant of L(p, q) at level r.
    Invariant {
        #[arg(short)]
        p: i64,
        #[arg(short, allow_negative_numbers = true)]
        q: i64,
        #[arg(short)]
        r: i64,
        #[arg(long, value_enum, default_value_t = MethodArg::Oracle)]
        method: MethodArg,
        /// Exact cyclotomic arithmetic instead of floats.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// The matrix R(U) for the surgery presentation of L(p, q).
    Rep {
        #[arg(short)]
        p: i64,
        #[arg(short, allow_negative_numbers = true)]
        q: i64,
        #[arg(short)]
        r: i64,
        #[arg(long)]
        exact: bool,
    },
    /// Continued fraction normal form of NUM/DEN.
    Cf {
        #[arg(allow_hyphen_values = true)]
        fraction: String,
    },
    /// Compare both evaluation paths over a grid of lens spaces.
    Verify {
        #[arg(long)]
        pmax: i64,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<i64>,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// CSV table of oracle values with their deviation from the closed formula.
    Table {
        #[arg(long)]
        pmax: i64,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<i64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Oracle,
    Closed,
    Both,
}

enum Failure {
    Domain(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}

fn params_for(r: i64) -> Result<TheoryParams, Failure> {
    let params = TheoryParams::new(r)?;
    if params.is_experimental() {
        eprintln!("note: r = {r} is composite; results are experimental");
    }
    Ok(params)
}

fn lens_for(p: i64, q: i64) -> Result<LensSpace, Failure> {
    let lens = normalize_lens(p, q)?;
    if (lens.p, lens.q) != (p, q) {
        eprintln!("note: L({p},{q}) normalized to L({},{})", lens.p, lens.q);
    }
    Ok(lens)
}

fn print_json(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable output")
    );
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Invariant {
            p,
            q,
            r,
            method,
            exact,
            tolerance,
        } => {
            let lens = lens_for(p, q)?;
            let params = params_for(r)?;
            let backend = if exact {
                Backend::Exact
            } else {
                Backend::Numeric
            };
            let tol = tolerance.unwrap_or_else(default_tolerance);
            match method {
                MethodArg::Oracle => print_json(&lens::wrt_oracle(&lens, &params, backend)?),
                MethodArg::Closed => print_json(&lens::wrt_closed(&lens, &params, backend)?),
                MethodArg::Both => {
                    let oracle = lens::wrt_oracle(&lens, &params, backend)?;
                    let closed = lens::wrt_closed(&lens, &params, backend)?;
                    print_json(&[&oracle, &closed]);
                    return compare(&oracle, &closed, tol);
                }
            }
            Ok(())
        }
        Command::Rep { p, q, r, exact } => {
            let lens = lens_for(p, q)?;
            let params = params_for(r)?;
            let (cf, _) = cf_for_lens(lens.p, lens.q)?;
            let matrix = if exact {
                rep_bruteforce::<CyclotomicNumber>(&params, &cf).to_json()
            } else {
                rep_bruteforce::<Complex64>(&params, &cf).to_json()
            };
            print_json(&matrix);
            Ok(())
        }
        Command::Cf { fraction } => {
            let (num, den) = parse_fraction(&fraction)?;
            println!("{}", cf_expand(num, den)?);
            Ok(())
        }
        Command::Verify {
            pmax,
            r,
            exact,
            tolerance,
            json,
        } => {
            if pmax < 2 {
                return Err(Failure::Domain(format!(
                    "--pmax must be at least 2, got {pmax}"
                )));
            }
            for &level in &r {
                params_for(level)?;
            }
            let backend = if exact {
                Backend::Exact
            } else {
                Backend::Numeric
            };
            let tol = tolerance.unwrap_or_else(default_tolerance);
            let report = lens::verify_grid(pmax, &r, backend, tol)?;
            if json {
                print_json(&report);
            } else {
                println!("{report}");
            }
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Verify(format!(
                    "verification failed: {} comparisons out of tolerance",
                    report.failures
                )))
            }
        }
        Command::Table { pmax, r } => {
            if pmax < 2 {
                return Err(Failure::Domain(format!(
                    "--pmax must be at least 2, got {pmax}"
                )));
            }
            for &level in &r {
                params_for(level)?;
            }
            let report = lens::verify_grid(pmax, &r, Backend::Numeric, default_tolerance())?;
            let stdout = io::stdout();
            let mut out = csv::Writer::from_writer(stdout.lock());
            out.write_record(["r", "p", "q", "re", "im", "phi", "deviation"])
                .map_err(|e| Failure::Domain(e.to_string()))?;
            for e in &report.entries {
                out.write_record([
                    e.r.to_string(),
                    e.p.to_string(),
                    e.q.to_string(),
                    format!("{:.15e}", e.oracle.re),
                    format!("{:.15e}", e.oracle.im),
                    e.phi.to_string(),
                    format!("{:.3e}", e.deviation),
                ])
                .map_err(|e| Failure::Domain(e.to_string()))?;
            }
            out.flush().map_err(|e| Failure::Domain(e.to_string()))?;
            io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn compare(oracle: &InvariantResult, closed: &InvariantResult, tol: f64) -> Result<(), Failure> {
    let deviation = (oracle.numeric.value() - closed.numeric.value()).norm();
    let agree = match (&oracle.exact, &closed.exact) {
        (Some(a), Some(b)) => a == b,
        _ => deviation <= tol,
    };
    if agree {
        eprintln!("oracle and closed agree (deviation {deviation:.3e})");
        Ok(())
    } else {
        Err(Failure::Verify(format!(
            "oracle and closed differ by {deviation:.3e} (tolerance {tol:e})"
        )))
    }
}

fn parse_fraction(s: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Domain(format!("expected NUM/DEN, got {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        ),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    Ok((num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction("5/2").ok(), Some((5, 2)));
        assert_eq!(parse_fraction(" -7 / 3 ").ok(), Some((-7, 3)));
        assert_eq!(parse_fraction("4").ok(), Some((4, 1)));
        assert!(parse_fraction("a/b").is_err());
    }

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from(["wrt", "verify", "--pmax", "6", "--r", "5,13"]).unwrap();
        match cli.command {
            Command::Verify { pmax, r, .. } => assert_eq!((pmax, r), (6, vec![5, 13])),
            _ => panic!("wrong subcommand"),
        }
        assert!(Cli::try_parse_from([
            "wrt",
            "invariant",
            "-p",
            "2",
            "-q",
            "-1",
            "-r",
            "5",
            "--method",
            "x"
        ])
        .is_err());
    }
}
