//! Command-line front end: run verification suites, construct catalogued
//! polynomials, measure invariant dimension series, and express polynomials
//! in terms of named generators.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ortho_invar::invariants::{c22_poly, catalog, khovanskii_generators, minor_m, Catalog};
use ortho_invar::matgroup::{generators, GroupKind};
use ortho_invar::ring::{PolyJson, Polynomial};
use ortho_invar::solver::{express, invariant_series};
use ortho_invar::verifier::{run_suite, CheckStatus, SuiteFilter};

#[derive(Parser)]
#[command(
    name = "ortho-invar",
    about = "Invariant theory of finite orthogonal groups of plus type in odd characteristic",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the named verification checks and print one line per instance.
    Verify {
        /// Substring filter on check names (e.g. "sylow", "m2_").
        #[arg(long)]
        suite: Option<String>,
        /// Restrict to one field size.
        #[arg(long)]
        q: Option<u64>,
        /// Restrict to one rank.
        #[arg(long)]
        m: Option<u32>,
        /// Override the degree cap of the checks that use one.
        #[arg(long)]
        max_degree: Option<u64>,
        /// Also run the instances marked heavy (long-running constructions).
        #[arg(long)]
        heavy: bool,
        /// Write the full reports as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Build a catalogued polynomial and print it.
    Construct {
        #[arg(value_enum)]
        target: Target,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u32,
        /// Index for xi, d, norm, and minor targets.
        #[arg(long, default_value_t = 0)]
        i: u32,
        /// For the norm target: build the x-side norm instead of the y-side.
        #[arg(long)]
        x_side: bool,
        /// Print the polynomial as JSON (reusable as an express target).
        #[arg(long)]
        json: bool,
    },
    /// Measure the dimension of the invariant space degree by degree.
    Hilbert {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        max_degree: u64,
    },
    /// Express a polynomial (JSON file) in catalogued generators.
    Express {
        /// Path to a polynomial serialized by the construct --json output
        /// or the library's JSON form.
        #[arg(long)]
        target: PathBuf,
        /// Comma-separated generator names, e.g. "xi0,xi1,xi2" or "Ny1,Nx1".
        #[arg(long)]
        gens: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u32,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Target {
    Xi,
    Norm,
    U,
    D,
    Minor,
    C22,
    Catalog,
}

#[derive(Copy, Clone, ValueEnum)]
enum Group {
    Oplus,
    Borel,
    Sylow,
    Hook,
    Torus,
}

fn named_polynomial(cat: &Catalog, name: &str) -> Result<Polynomial, String> {
    let parse_idx = |s: &str| -> Result<u32, String> {
        s.parse::<u32>().map_err(|_| format!("bad index in '{name}'"))
    };
    if let Some(i) = name.strip_prefix("xi") {
        return Ok(cat.xi(parse_idx(i)?).clone());
    }
    if let Some(i) = name.strip_prefix("d") {
        if let Ok(i) = i.parse::<u32>() {
            return Ok(cat.d(i).clone());
        }
    }
    if let Some(i) = name.strip_prefix("Ny") {
        return Ok(cat.norm_y(parse_idx(i)?).clone());
    }
    if let Some(i) = name.strip_prefix("Nx") {
        return Ok(cat.norm_x(parse_idx(i)?).clone());
    }
    match name {
        "u" => Ok(cat.u().clone()),
        "c22" => Ok(c22_poly(cat)),
        _ => {
            // Fall back to the per-group generator catalogs.
            for kind in [GroupKind::Sylow, GroupKind::Hook, GroupKind::Borel] {
                if let Some((_, f)) = khovanskii_generators(cat, kind)
                    .into_iter()
                    .find(|(label, _)| label == name)
                {
                    return Ok(f);
                }
            }
            Err(format!("unknown generator name '{name}'"))
        }
    }
}

fn cmd_verify(
    suite: Option<String>,
    q: Option<u64>,
    m: Option<u32>,
    max_degree: Option<u64>,
    heavy: bool,
    json: Option<PathBuf>,
) -> ExitCode {
    let filter = SuiteFilter {
        name: suite,
        q,
        m,
        heavy,
        max_degree,
    };
    let reports = run_suite(&filter);
    if reports.is_empty() {
        eprintln!("no checks match the filter");
        return ExitCode::from(2);
    }
    let mut counts = (0usize, 0usize, 0usize);
    for r in &reports {
        let tag = match r.status {
            CheckStatus::Pass => {
                counts.0 += 1;
                "PASS"
            }
            CheckStatus::Fail => {
                counts.1 += 1;
                "FAIL"
            }
            CheckStatus::Skip => {
                counts.2 += 1;
                "skip"
            }
        };
        println!("[{tag}] {:<22} {:<18} {:>8}ms  {}", r.name, r.params, r.wall_ms, r.witness);
    }
    println!(
        "summary: {} passed, {} failed, {} skipped across {} instances",
        counts.0,
        counts.1,
        counts.2,
        reports.len()
    );
    if let Some(path) = json {
        match serde_json::to_string_pretty(&reports) {
            Ok(body) => {
                if let Err(e) = std::fs::write(&path, body) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            Err(e) => {
                eprintln!("cannot serialize reports: {e}");
                return ExitCode::from(2);
            }
        }
    }
    if counts.1 > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_construct(target: Target, q: u64, m: u32, i: u32, x_side: bool, json: bool) -> ExitCode {
    let cat = catalog(q, m);
    let print_poly = |label: &str, f: &Polynomial| {
        if json {
            println!("{}", serde_json::to_string_pretty(&f.to_json()).unwrap());
        } else {
            println!("{label}: degree {:?}, {} terms", f.degree(), f.num_terms());
            println!("{}", f.render());
        }
    };
    match target {
        Target::Xi => print_poly(&format!("xi_{i}"), cat.xi(i)),
        Target::Norm => {
            if x_side {
                print_poly(&format!("N(x_{i})"), cat.norm_x(i))
            } else {
                print_poly(&format!("N(y_{i})"), cat.norm_y(i))
            }
        }
        Target::U => print_poly("u", cat.u()),
        Target::D => print_poly(&format!("d_{i}"), cat.d(i)),
        Target::C22 => print_poly("c22", &c22_poly(&cat)),
        Target::Minor => {
            let mi = minor_m(cat.spec(), m, i);
            println!(
                "M({i}): weighted degree {:?}, {} terms",
                mi.weighted_degree(),
                mi.num_terms()
            );
            println!("{}", mi.render());
        }
        Target::Catalog => {
            println!("{}", serde_json::to_string_pretty(&cat.summary()).unwrap())
        }
    }
    ExitCode::SUCCESS
}

fn cmd_hilbert(group: Group, q: u64, m: u32, max_degree: u64) -> ExitCode {
    let cat = catalog(q, m);
    let kind = match group {
        Group::Oplus => GroupKind::OPlus,
        Group::Borel => GroupKind::Borel,
        Group::Sylow => GroupKind::Sylow,
        Group::Hook => GroupKind::Hook,
        Group::Torus => GroupKind::Torus,
    };
    let gens = generators(kind, cat.frame(), cat.spec());
    match invariant_series(cat.frame(), cat.spec(), &gens, max_degree) {
        Ok(dims) => {
            for (d, dim) in dims.iter().enumerate() {
                println!("degree {d:>3}: {dim}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("dimension scan out of budget: {e:?}");
            ExitCode::from(2)
        }
    }
}

fn cmd_express(target: PathBuf, gens: String, q: u64, m: u32) -> ExitCode {
    let cat = catalog(q, m);
    let body = match std::fs::read_to_string(&target) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("cannot read {}: {e}", target.display());
            return ExitCode::from(2);
        }
    };
    let pj: PolyJson = match serde_json::from_str(&body) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cannot parse the target JSON: {e}");
            return ExitCode::from(2);
        }
    };
    let f = match Polynomial::from_json(&pj) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("cannot rebuild the target polynomial: {e:?}");
            return ExitCode::from(2);
        }
    };
    if f.frame().m() != m || f.spec().q() as u64 != q {
        eprintln!("the target was built for q={} m={}", f.spec().q(), f.frame().m());
        return ExitCode::from(2);
    }
    let mut named = Vec::new();
    for name in gens.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match named_polynomial(&cat, name) {
            Ok(g) => named.push((name.to_string(), g)),
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        }
    }
    if named.is_empty() {
        eprintln!("no generators given");
        return ExitCode::from(2);
    }
    match express(&f, &named, None) {
        Ok(out) => match &out.solution {
            Some(_) => {
                let labels: Vec<String> = named.iter().map(|(l, _)| l.clone()).collect();
                println!("{}", out.render(&labels).unwrap_or_default());
                ExitCode::SUCCESS
            }
            None => {
                println!(
                    "no combination exists (rank {}, {} columns)",
                    out.rank, out.columns
                );
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("solve out of budget: {e:?}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify {
            suite,
            q,
            m,
            max_degree,
            heavy,
            json,
        } => cmd_verify(suite, q, m, max_degree, heavy, json),
        Command::Construct {
            target,
            q,
            m,
            i,
            x_side,
            json,
        } => cmd_construct(target, q, m, i, x_side, json),
        Command::Hilbert {
            group,
            q,
            m,
            max_degree,
        } => cmd_hilbert(group, q, m, max_degree),
        Command::Express { target, gens, q, m } => cmd_express(target, gens, q, m),
    }
}
