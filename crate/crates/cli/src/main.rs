use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use tpp_core::bounds::{omega_bound_solve, OmegaOutcome, DEFAULT_TOLERANCE};
use tpp_core::chardeg::{degrees_formula, degrees_numeric};
use tpp_core::constructions::{construct, ConstructionError, FAMILIES};
use tpp_core::embed::oracle_trials;
use tpp_core::group::parse_descriptor;
use tpp_core::report::{certificate_to_json, full_report, load_certificate, render_text, report_for, CertificateFile};
use tpp_core::search::{search, SearchConfig, SearchMode};
use tpp_core::tpp::{reverify, TppOutcome};

#[derive(Parser)]
#[command(name = "tpp", version, about = "Triple product property realizations and the bounds they give")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-verify a certificate file.
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build a named construction and print its certificate.
    Construct {
        #[arg(long)]
        family: String,
        /// Construction parameters, in order.
        #[arg(long = "param", short = 'p')]
        params: Vec<u32>,
        /// Write the certificate here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build every catalog construction and report its bounds.
    Catalog {
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include verification times (output then differs between runs).
        #[arg(long)]
        timings: bool,
        /// Restrict to one family.
        #[arg(long)]
        family: Option<String>,
    },
    /// Character degrees of a group.
    Degrees {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Solve for the exponent bound given α and the degrees of a group.
    Omega {
        /// Group descriptor; with --cert the certificate's group is used.
        #[arg(long, required_unless_present = "cert")]
        group: Option<String>,
        #[arg(long, required_unless_present = "cert")]
        alpha: Option<f64>,
        #[arg(long, conflicts_with_all = ["group", "alpha"])]
        cert: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Compare group-algebra and naive products on random matrices.
    Matmul {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Search a small group for the best triple.
    Search {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 1)]
        min_nmp: u128,
        #[arg(long)]
        no_prune: bool,
        #[arg(long)]
        subgroups_only: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Formula,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Subsets,
    Subgroups,
}

/// Errors that map to exit code 1 rather than 2.
#[derive(Debug)]
struct Failed;

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for Failed {}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn cmd_verify(file: &Path, as_json: bool) -> Result<()> {
    let text = read(file)?;
    let parsed: CertificateFile = serde_json::from_str(&text).context("parsing certificate")?;
    let cert = parsed.to_certificate()?;
    match reverify(&cert)? {
        TppOutcome::Verified(c) => {
            if as_json {
                print_json(&json!({ "verified": true, "shape": c.shape(), "alpha_upper": c.alpha_upper() }))?;
            } else {
                let [n, m, p] = c.shape();
                println!("VERIFIED <{n},{m},{p}> in {} (alpha <= {:.6})", c.group.descriptor(), c.alpha_upper().unwrap_or(f64::NAN));
            }
            Ok(())
        }
        TppOutcome::Counterexample(w) => {
            let w: Vec<String> = w.iter().map(|e| cert.group.format_elem(e)).collect();
            if as_json {
                print_json(&json!({ "verified": false, "witness": w }))?;
            } else {
                println!("NOT VERIFIED: q1 = {}, q2 = {}, q3 = {} multiply to the identity", w[0], w[1], w[2]);
            }
            Err(Failed.into())
        }
    }
}

fn cmd_construct(family: &str, params: &[u32], out: Option<&Path>) -> Result<()> {
    let cert = match construct(family, params) {
        Ok(c) => c,
        Err(e @ ConstructionError::UnknownFamily(_)) => bail!("{e}; known families: {}", FAMILIES.join(", ")),
        Err(e @ (ConstructionError::NotVerified(_) | ConstructionError::DifferenceProperty(..))) => {
            eprintln!("error: {e}");
            return Err(Failed.into());
        }
        Err(e) => return Err(e.into()),
    };
    let text = certificate_to_json(&cert);
    match out {
        Some(path) => std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_catalog(as_json: bool, seed: u64, timings: bool, family: Option<&str>) -> Result<()> {
    let rows = match family {
        None => full_report(seed, timings),
        Some(f) => {
            let entries: Vec<_> = tpp_core::constructions::catalog().into_iter().filter(|e| e.family == f).collect();
            if entries.is_empty() {
                bail!("no catalog entries for family {f:?}");
            }
            report_for(&entries, seed, timings)
        }
    };
    if as_json {
        print_json(&rows)?;
    } else {
        print!("{}", render_text(&rows));
    }
    if rows.iter().all(|r| r.verified) {
        Ok(())
    } else {
        Err(Failed.into())
    }
}

fn cmd_degrees(group: &str, method: Method, seed: u64, as_json: bool) -> Result<()> {
    let g = parse_descriptor(group)?;
    let deg = match method {
        Method::Formula => degrees_formula(&g)?,
        Method::Numeric => degrees_numeric(&g, seed)?,
        Method::Auto => tpp_core::report::degrees_for(&g, seed).map_err(anyhow::Error::msg)?,
    };
    let gamma = deg.gamma();
    if as_json {
        print_json(&json!({
            "group": g.descriptor(),
            "order": g.order(),
            "complete": deg.is_complete(),
            "counts": deg.counts(),
            "gamma": gamma.is_finite().then_some(gamma),
        }))?;
    } else {
        let parts: Vec<String> =
            deg.counts().iter().map(|&(d, m)| if m == 1 { d.to_string() } else { format!("{d}^{m}") }).collect();
        let prefix = if deg.is_complete() { "" } else { "largest degree only: " };
        println!("{}: {prefix}{}", g.descriptor(), parts.join(" "));
        println!("gamma = {}", if gamma.is_finite() { format!("{gamma:.6}") } else { "inf".into() });
    }
    Ok(())
}

fn cmd_omega(
    group: Option<&str>,
    alpha: Option<f64>,
    cert: Option<&Path>,
    seed: u64,
    tol: f64,
    as_json: bool,
) -> Result<()> {
    let (g, alpha) = match cert {
        Some(path) => {
            let c = match load_certificate(&read(path)?)? {
                TppOutcome::Verified(c) => c,
                TppOutcome::Counterexample(_) => {
                    eprintln!("error: certificate does not verify");
                    return Err(Failed.into());
                }
            };
            let a = c.alpha_upper().context("certificate has nmp = 1")?;
            (c.group, a)
        }
        None => (parse_descriptor(group.unwrap())?, alpha.unwrap()),
    };
    let deg = tpp_core::report::degrees_for(&g, seed).map_err(anyhow::Error::msg)?;
    let bound = omega_bound_solve(alpha, &deg, tol)?;
    if as_json {
        print_json(&bound)?;
    } else {
        match bound.outcome {
            OmegaOutcome::Bound(w) => println!("omega <= {w:.9}"),
            OmegaOutcome::Trivial => println!("trivial: no bound below 3"),
        }
    }
    Ok(())
}

fn cmd_matmul(cert: &Path, seed: u64, trials: usize) -> Result<()> {
    let c = match load_certificate(&read(cert)?)? {
        TppOutcome::Verified(c) => c,
        TppOutcome::Counterexample(_) => {
            println!("REJECTED: certificate does not verify");
            return Err(Failed.into());
        }
    };
    let r = oracle_trials(&c, trials, seed, true)?;
    if r.all_match() {
        println!("MATCH {} of {} trials", r.trials, r.trials);
        Ok(())
    } else {
        println!("MISMATCH in {} of {} trials", r.mismatches, r.trials);
        Err(Failed.into())
    }
}

fn cmd_search(group: &str, mode: Mode, budget: Option<u64>, min_nmp: u128, no_prune: bool, subgroups_only: bool) -> Result<()> {
    let g = parse_descriptor(group)?;
    let mode = match mode {
        Mode::Subsets => SearchMode::Subsets,
        Mode::Subgroups => SearchMode::Subgroups,
    };
    let mut cfg = SearchConfig::new(g, mode);
    if let Some(b) = budget {
        cfg.budget = b;
    }
    cfg.min_nmp = min_nmp;
    cfg.prune = !no_prune;
    cfg.subgroups_only = subgroups_only;
    let r = search(&cfg)?;
    let best = r.best.as_ref().map(CertificateFile::from_certificate);
    print_json(&json!({
        "group": cfg.group.descriptor(),
        "mode": mode,
        "exhaustive": r.exhaustive,
        "examined": r.examined,
        "work": r.work,
        "nmp": r.nmp(),
        "alpha_upper": r.best.as_ref().and_then(|c| c.alpha_upper()),
        "best": best,
    }))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Verify { file, json } => cmd_verify(&file, json),
        Command::Construct { family, params, out } => cmd_construct(&family, &params, out.as_deref()),
        Command::Catalog { json, seed, timings, family } => cmd_catalog(json, seed, timings, family.as_deref()),
        Command::Degrees { group, method, seed, json } => cmd_degrees(&group, method, seed, json),
        Command::Omega { group, alpha, cert, seed, tol, json } => {
            cmd_omega(group.as_deref(), alpha, cert.as_deref(), seed, tol, json)
        }
        Command::Matmul { cert, seed, trials } => cmd_matmul(&cert, seed, trials),
        Command::Search { group, mode, budget, min_nmp, no_prune, subgroups_only } => {
            cmd_search(&group, mode, budget, min_nmp, no_prune, subgroups_only)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Failed>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
