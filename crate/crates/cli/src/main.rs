//! CLI for the Fermat-surface skew-line toolkit.
//!
//! Exit codes: 0 success/valid; 1 family invalid (`check`) or disagreement
//! found (`oracle`); 2 usage error; 3 solver timeout without optimality.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use clap::{Parser, Subcommand};

use fermat_lines::{
    build_graph, construct_2d, construct_auto, construct_builtin, construct_even,
    construct_odd_1mod4, construct_odd_3mod4, enumerate_lines, export_dimacs, is_skew_family,
    max_independent_set, meets, meets_geometric, meets_modular, oracle_primes, validate_structured,
    Family, LineId, MisOptions, SearchStatus, SurfaceParams, TwoDVariant, ValidationReport,
};

#[derive(Parser)]
#[command(name = "fermat-lines")]
#[command(about = "Lines on Fermat surfaces: intersection rules, skew families, maximum skew sets")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print all 3d² lines in canonical `s k i` form
    Lines {
        #[arg(long)]
        d: u32,
    },
    /// Decide whether two lines meet; prints MEET or SKEW
    Meet {
        #[arg(long)]
        d: u32,
        /// First line as `s k i`
        #[arg(long)]
        a: String,
        /// Second line as `s k i`
        #[arg(long)]
        b: String,
    },
    /// Validate a family file and print its residue profile tables
    Check {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        file: PathBuf,
        /// Validate via the structural criteria instead of pairwise checks
        #[arg(long)]
        structural: bool,
    },
    /// Construct a skew family and write it to a family file
    Construct {
        #[arg(long)]
        d: u32,
        /// auto | even | odd1 | odd3 | builtin | 2d:A | 2d:B | 2d:C
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact maximum independent (skew) set search
    Mis {
        #[arg(long)]
        d: u32,
        /// Time limit in seconds
        #[arg(long, default_value_t = 900)]
        time_limit: u64,
        /// Seed the search with the constructed family for this degree
        #[arg(long)]
        seed_construction: bool,
        /// Write the certificate to this file
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Cross-check the residue rules against the exact geometric oracle
    Oracle {
        #[arg(long)]
        d: u32,
        /// Use the multi-prime fast path (exact fallback on zeros)
        #[arg(long)]
        fast: bool,
        /// Number of primes for the fast path
        #[arg(long, default_value_t = 3)]
        primes: usize,
    },
    /// Export the intersection graph
    Export {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value = "dimacs")]
        format: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cmd {
        Command::Lines { d } => {
            let params = SurfaceParams::canonical(d)?;
            let stdout = std::io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            for line in enumerate_lines(&params) {
                writeln!(out, "{line}")?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Meet { d, a, b } => {
            let params = SurfaceParams::canonical(d)?;
            let a = LineId::from_str(&a)?;
            let b = LineId::from_str(&b)?;
            println!(
                "{}",
                if meets(&params, a, b)? {
                    "MEET"
                } else {
                    "SKEW"
                }
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            d,
            file,
            structural,
        } => {
            let params = SurfaceParams::canonical(d)?;
            let family = Family::read_from(BufReader::new(File::open(&file)?))?;
            if family.d() != d {
                return Err(
                    format!("family file declares d={}, flag says d={d}", family.d()).into(),
                );
            }
            let report = if structural {
                validate_structured(&params, &family)?
            } else {
                is_skew_family(&params, &family)?
            };
            print_report(d, family.len(), &report);
            Ok(if report.is_skew {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Construct { d, method, out } => {
            let family = match method.as_str() {
                "auto" => construct_auto(d)?,
                "even" => construct_even(d)?,
                "odd1" => construct_odd_1mod4(d)?,
                "odd3" => construct_odd_3mod4(d)?,
                "builtin" => construct_builtin(d)?,
                other => match other.strip_prefix("2d:") {
                    Some(v) => construct_2d(d, TwoDVariant::from_str(v)?)?,
                    None => return Err(format!("unknown method `{other}`").into()),
                },
            };
            let mut w = BufWriter::new(File::create(&out)?);
            family.write_to(&mut w)?;
            w.flush()?;
            println!(
                "d={d} method={method} lines={} -> {}",
                family.len(),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Mis {
            d,
            time_limit,
            seed_construction,
            certificate,
        } => {
            let params = SurfaceParams::canonical(d)?;
            let graph = build_graph(&params)?;
            let seed = if seed_construction {
                let family = construct_auto(d)?;
                Some(family.lines().iter().map(|l| l.vertex_id(d)).collect())
            } else {
                None
            };
            let opts = MisOptions {
                time_limit: Duration::from_secs(time_limit),
                seed,
                ..Default::default()
            };
            let cert = max_independent_set(&graph, &opts)?;
            println!("size={} status={}", cert.size(), cert.status());
            eprintln!(
                "nodes={} elapsed={:.3}s",
                cert.nodes(),
                cert.elapsed().as_secs_f64()
            );
            if let Some(path) = certificate {
                let mut w = BufWriter::new(File::create(&path)?);
                cert.write_to(d, &mut w)?;
                w.flush()?;
            }
            Ok(match cert.status() {
                SearchStatus::Optimal => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            })
        }
        Command::Oracle { d, fast, primes } => {
            let params = SurfaceParams::canonical(d)?;
            let lines = enumerate_lines(&params);
            let prime_list = if fast {
                oracle_primes(d, primes)
            } else {
                Vec::new()
            };
            let mut disagreements = 0usize;
            for (x, &a) in lines.iter().enumerate() {
                for &b in &lines[x + 1..] {
                    let symbolic = meets(&params, a, b)?;
                    let geometric = if fast {
                        meets_modular(&params, a, b, &prime_list)?
                    } else {
                        meets_geometric(&params, a, b)?
                    };
                    if symbolic != geometric {
                        println!("DISAGREE {a} | {b}");
                        disagreements += 1;
                    }
                }
            }
            println!("{disagreements} disagreements");
            Ok(if disagreements == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Export { d, format, out } => {
            if format != "dimacs" {
                return Err(format!("unknown format `{format}`").into());
            }
            let params = SurfaceParams::canonical(d)?;
            let graph = build_graph(&params)?;
            let mut w = BufWriter::new(File::create(&out)?);
            export_dimacs(&graph, &mut w)?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Residue profile tables in the layout of the worked examples: one header
/// row of lines per stratum, then the φ/ψ rows.
fn print_report(d: u32, total: usize, report: &ValidationReport) {
    println!("# d={d} family: {total} lines");
    println!(
        "C0 size={}  C1 size={}  C2 size={}",
        report.stratum_sizes[0], report.stratum_sizes[1], report.stratum_sizes[2]
    );
    let table = |name: &str, lines: &[LineId], rows: &[(&str, &[u32])]| {
        if lines.is_empty() {
            return;
        }
        let header: Vec<String> = lines
            .iter()
            .map(|l| format!("{} {}", l.k(), l.i()))
            .collect();
        let width = header.iter().map(|h| h.len()).max().unwrap_or(1);
        let cells = |vals: &[String]| {
            vals.iter()
                .map(|v| format!("{v:>width$}"))
                .collect::<Vec<_>>()
                .join(" | ")
        };
        println!("{name:<5} | {}", cells(&header));
        for (label, vals) in rows {
            let rendered: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
            println!("{label:<5} | {}", cells(&rendered));
        }
    };
    table(
        "C0",
        &report.c0,
        &[
            ("phi-", &report.phi_minus_c0),
            ("phi+", &report.phi_plus_c0),
        ],
    );
    table(
        "C1",
        &report.c1,
        &[("phi+", &report.phi_plus_c1), ("psi", &report.psi_c1)],
    );
    table(
        "C2",
        &report.c2,
        &[("phi+", &report.phi_plus_c2), ("psi", &report.psi_c2)],
    );
    match report.violating_pair {
        None => println!("verdict: SKEW ({total} lines)"),
        Some((a, b)) => println!("verdict: NOT SKEW ({a} meets {b})"),
    }
}
