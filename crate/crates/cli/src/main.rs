use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dcompat::{
    configure_workers, guard_size, parse_matching, resolve_workers, stats_line, to_dot,
    write_atomic, GraphJson, ReportJson, WORKERS_ENV,
};
use dcompat_core::constructions::{caterpillar_path_between, tree_path_between, RotationSequence};
use dcompat_core::dcg::{analyze, build_dcg_bounded, default_bound, quotient_by_rotation};
use dcompat_core::matching::classify_matching;
use dcompat_core::oracle::{brute_force_oracle, brute_force_oracle_bounded};
use dcompat_core::verify::{verify_suite, Suite};
use dcompat_core::{
    compat::find_family_obstruction, enumerate_matchings, exists_witness, ConvexConfig, Family,
    PlaneMatching, MAX_POINTS,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dcompat",
    version,
    about = "Disjoint compatibility of plane matchings on convex point sets"
)]
struct Cli {
    /// Allow sizes above the default guards (tree 16, other families 12).
    #[arg(long, global = true)]
    unsafe_size: bool,
    /// Worker threads for parallel work; overrides DCOMPAT_WORKERS.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every plane perfect matching on the given number of points.
    Enumerate {
        #[arg(long, value_parser = even_points)]
        points: usize,
        /// Append the matching class.
        #[arg(long)]
        classify: bool,
    },
    /// Decide whether a drawing of the family is disjoint compatible to both matchings.
    Compat {
        #[arg(long, value_parser = family)]
        family: Family,
        #[arg(long)]
        m1: String,
        #[arg(long)]
        m2: String,
        /// Point count; defaults to twice the number of chords in `--m1`.
        #[arg(long, value_parser = even_points)]
        points: Option<usize>,
        /// Print the witness drawing.
        #[arg(long)]
        witness: bool,
        /// Cross-check against brute-force enumeration of spanning trees.
        #[arg(long)]
        oracle: bool,
    },
    /// Print a rotation sequence from `--m1` to `--m2`.
    Route {
        #[arg(long, value_enum, default_value = "tree")]
        family: RouteFamily,
        #[arg(long)]
        m1: String,
        #[arg(long)]
        m2: String,
        #[arg(long, value_parser = even_points)]
        points: Option<usize>,
    },
    /// Build a compatibility graph and export or summarize it.
    Dcg {
        #[arg(long, value_parser = even_points)]
        points: usize,
        #[arg(long, value_parser = family, default_value = "tree")]
        family: Family,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Print a one-line summary.
        #[arg(long)]
        stats: bool,
        /// Add the orbit structure under rotation by two positions.
        #[arg(long)]
        quotient: bool,
    },
    /// Run a verification suite; exits 0 iff every check passes.
    Verify {
        #[arg(long, value_parser = suite)]
        suite: Suite,
        #[arg(long, value_parser = even_points, default_value = "10")]
        points: usize,
        /// Report path; defaults to `report-<suite>-<points>.json`.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteFamily {
    Tree,
    Caterpillar,
    Onelegged,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

fn even_points(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if n == 0 || n % 2 == 1 {
        return Err(format!("point count must be even and positive, got {n}"));
    }
    Ok(n)
}

fn family(s: &str) -> std::result::Result<Family, String> {
    Family::parse(s)
        .ok_or_else(|| format!("unknown family `{s}` (tree, caterpillar, onelegged, path)"))
}

fn suite(s: &str) -> std::result::Result<Suite, String> {
    Suite::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite `{s}` ({})", names.join(", "))
    })
}

fn pair(m1: &str, m2: &str, points: Option<usize>) -> Result<(PlaneMatching, PlaneMatching)> {
    let a = parse_matching(m1, points).map_err(|e| anyhow!("--m1 {e}"))?;
    let b = parse_matching(m2, Some(a.config().size())).map_err(|e| anyhow!("--m2 {e}"))?;
    Ok((a, b))
}

fn print_sequence(seq: &RotationSequence) {
    println!("steps={}", seq.len());
    for (i, step) in seq.steps.iter().enumerate() {
        println!("step {}: {} -> {}", i + 1, step.before, step.after);
        if let Some(rotated) = &step.rotated {
            for k in rotated {
                let pts: Vec<String> = k.points.iter().map(|p| p.to_string()).collect();
                println!("  rotated {:?} on {}", k.kind, pts.join(" "));
            }
        }
        let edges: Vec<String> = step.witness.edges.iter().map(|c| c.to_string()).collect();
        println!(
            "  witness {}: {}",
            step.witness.kind.name(),
            edges.join(",")
        );
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let workers = resolve_workers(cli.workers, std::env::var(WORKERS_ENV).ok().as_deref())
        .map_err(anyhow::Error::msg)?;
    configure_workers(workers).context("configuring worker pool")?;
    match cli.command {
        Command::Enumerate { points, classify } => {
            let config = ConvexConfig::new(points)?;
            for m in enumerate_matchings(config) {
                if classify {
                    println!("{m}\t{}", classify_matching(&m).name());
                } else {
                    println!("{m}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compat {
            family,
            m1,
            m2,
            points,
            witness,
            oracle,
        } => {
            let (a, b) = pair(&m1, &m2, points)?;
            let size = a.config().size();
            guard_size(size, family, cli.unsafe_size)?;
            let found = exists_witness(&a, &b, family)?;
            println!("{}", if found.is_some() { "yes" } else { "no" });
            match &found {
                Some(w) if witness => {
                    let edges: Vec<String> = w.edges.iter().map(|c| c.to_string()).collect();
                    println!("witness {}: {}", w.kind.name(), edges.join(","));
                }
                Some(_) => {}
                None => match find_family_obstruction(&a, &b, family)? {
                    Some(o) => {
                        let chords: Vec<String> = o.chords.iter().map(|c| c.to_string()).collect();
                        if chords.is_empty() {
                            println!("obstruction {}", o.kind.name());
                        } else {
                            println!("obstruction {}: {}", o.kind.name(), chords.join(","));
                        }
                    }
                    None => println!("obstruction: none of the known kinds applies"),
                },
            }
            if oracle {
                let truth = if cli.unsafe_size {
                    brute_force_oracle_bounded(&a, &b, family, MAX_POINTS)?
                } else {
                    brute_force_oracle(&a, &b, family)?
                };
                if truth != found.is_some() {
                    bail!("oracle disagrees with the decider (oracle says {truth})");
                }
                println!("oracle: agrees");
            }
            Ok(if found.is_some() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Route {
            family,
            m1,
            m2,
            points,
        } => {
            let (a, b) = pair(&m1, &m2, points)?;
            let seq = match family {
                RouteFamily::Tree => tree_path_between(&a, &b)?,
                RouteFamily::Caterpillar => caterpillar_path_between(&a, &b, false)?,
                RouteFamily::Onelegged => caterpillar_path_between(&a, &b, true)?,
            };
            seq.validate()?;
            print_sequence(&seq);
            Ok(ExitCode::SUCCESS)
        }
        Command::Dcg {
            points,
            family,
            out,
            format,
            stats,
            quotient,
        } => {
            let config = ConvexConfig::new(points)?;
            let bound = if cli.unsafe_size {
                MAX_POINTS
            } else {
                default_bound(family)
            };
            let g = build_dcg_bounded(config, family, bound)?;
            if let Some(path) = &out {
                let body = match format {
                    Format::Json => {
                        serde_json::to_string_pretty(&GraphJson::from_dcg(&g, quotient))? + "\n"
                    }
                    Format::Dot => to_dot(&g),
                };
                write_atomic(path, body.as_bytes())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if stats || out.is_none() {
                println!("{}", stats_line(&analyze(&g)));
            }
            if quotient {
                let q = quotient_by_rotation(&g);
                let sizes: Vec<String> = q.orbit_sizes().iter().map(|s| s.to_string()).collect();
                println!(
                    "orbits={} orbit_sizes={} quotient_edges={} internal={}",
                    q.orbits.len(),
                    sizes.join(","),
                    q.edges.len(),
                    q.internal.len()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            points,
            report,
        } => {
            let config = ConvexConfig::new(points)?;
            let r = verify_suite(config, suite)?;
            for c in &r.checks {
                println!(
                    "{} {}: {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            let path = report
                .unwrap_or_else(|| PathBuf::from(format!("report-{}-{points}.json", suite.name())));
            let body = serde_json::to_string_pretty(&ReportJson::from(&r))? + "\n";
            write_atomic(&path, body.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
            Ok(if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
