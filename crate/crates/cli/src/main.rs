//! `orbifold-hurwitz`: compute q-orbifold r-spin Hurwitz numbers and run the
//! verification suites, printing reports as text, JSON or CSV.

mod render;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use orbifold_hurwitz::a_operators::{residue_check, verify_hurw_aop};
use orbifold_hurwitz::fock::Partition;
use orbifold_hurwitz::hurwitz::{
    completed_cycle_count, connected_hurwitz, disconnected_hurwitz, HurwitzKey,
};
use orbifold_hurwitz::polynomiality::{all_admissible_residues, verify_polynomiality};
use orbifold_hurwitz::report::{params, Item, Report, Status};
use orbifold_hurwitz::scalar::rational_string;
use orbifold_hurwitz::spectral_tr::{conjecture_check, CurveData};
use orbifold_hurwitz::unstable::{bergman_check, f01_check, f02_check};
use orbifold_hurwitz::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "orbifold-hurwitz",
    version,
    about = "Exact q-orbifold r-spin Hurwitz numbers and verification suites"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report `elapsed_ms` as 0 so that output is byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Accepted and ignored; nothing here is random.
    #[arg(long, global = true, hide = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// A single Hurwitz number with its admissibility diagnostics.
    Compute {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        mu: Vec<u32>,
        /// Connected numbers (the default).
        #[arg(long, conflicts_with = "disconnected")]
        connected: bool,
        /// Disconnected numbers instead.
        #[arg(long)]
        disconnected: bool,
    },
    /// Run a verification suite.
    Check {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Connected numbers over all profiles with `n` parts, each at most `mu-max`.
    Table {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        mu_max: u32,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct Curve {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    r: u32,
}

#[derive(Subcommand, Debug)]
enum Suite {
    /// Hurwitz numbers against the A-operator correlators, per power of u.
    HurwAop {
        #[command(flatten)]
        curve: Curve,
        /// A single profile; without it every profile of size up to `max-size`.
        #[arg(long, value_delimiter = ',')]
        mu: Option<Vec<u32>>,
        #[arg(long, default_value_t = 4)]
        max_size: u32,
        #[arg(long, default_value_t = 6)]
        max_u: i64,
    },
    /// Closed form of the (0,1) sector.
    F01 {
        #[command(flatten)]
        curve: Curve,
        #[arg(long, default_value_t = 3)]
        max: u64,
    },
    /// Closed form of the (0,2) sector for `μ1 + μ2 ≤ max`.
    F02 {
        #[command(flatten)]
        curve: Curve,
        #[arg(long, default_value_t = 10)]
        max: u64,
    },
    /// Bergman kernel series identity.
    Bergman {
        #[command(flatten)]
        curve: Curve,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Residues of the symbolic correlator at the floor pole.
    Residue {
        #[command(flatten)]
        curve: Curve,
        /// A single residue; without it all of `[0, qr)`.
        #[arg(long)]
        eta: Option<u32>,
        /// Largest number of further insertions.
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 3)]
        max_u: i64,
    },
    /// Interpolation of the polynomial part on a grid of floors.
    Polynomiality {
        #[command(flatten)]
        curve: Curve,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
        /// A single residue tuple; without it every admissible one.
        #[arg(long, value_delimiter = ',')]
        residues: Option<Vec<u32>>,
        /// Grid size (default: the smallest allowed).
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long, default_value_t = 2)]
        holdouts: usize,
    },
    /// Topological recursion expansions against the exact numbers.
    Tr {
        #[command(flatten)]
        curve: Curve,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        mu_max: u32,
        #[arg(long, default_value_t = 256)]
        prec: u32,
    },
}

fn positive(name: &str, v: u32) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidInput(format!("{name} must be positive")));
    }
    Ok(())
}

fn check_curve(c: Curve) -> Result<()> {
    positive("q", c.q)?;
    positive("r", c.r)
}

fn list(v: &[u32]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn merge(
    command: &str,
    params: std::collections::BTreeMap<String, String>,
    reports: Vec<Report>,
) -> Report {
    let items = reports.into_iter().flat_map(|r| r.items).collect();
    Report::new(command, params, items)
}

fn compute(g: u32, q: u32, r: u32, mu: &[u32], connected: bool) -> Result<Report> {
    positive("q", q)?;
    positive("r", r)?;
    if mu.is_empty() || mu.contains(&0) {
        return Err(Error::InvalidInput(
            "mu must be a list of positive integers".into(),
        ));
    }
    let key = HurwitzKey::new(g, q, r, mu);
    let value = if connected {
        connected_hurwitz(&key)
    } else {
        disconnected_hurwitz(&key)
    };
    let size = key.size();
    let reason = if !size.is_multiple_of(q as u64) {
        "q does not divide |mu|".to_string()
    } else if completed_cycle_count(&key).is_none() {
        "b non-integral".to_string()
    } else {
        "admissible".to_string()
    };
    let b = completed_cycle_count(&key).map_or("-".to_string(), |b| b.to_string());
    let kind = if connected {
        "connected"
    } else {
        "disconnected"
    };
    Ok(Report::new(
        "compute",
        params([
            ("g", g.to_string()),
            ("q", q.to_string()),
            ("r", r.to_string()),
            ("mu", list(mu)),
            ("kind", kind.to_string()),
        ]),
        vec![
            Item::new("hurwitz", "", rational_string(&value), Status::Pass),
            Item::new("b", "", b, Status::Pass),
            Item::new("admissibility", "", reason, Status::Pass),
        ],
    ))
}

fn profiles(n: usize, mu_max: u32) -> Vec<Vec<u32>> {
    // non-increasing tuples, lexicographic
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                let cap = p.last().copied().unwrap_or(mu_max);
                (1..=cap).map(move |m| {
                    let mut p = p.clone();
                    p.push(m);
                    p
                })
            })
            .collect();
    }
    out.sort();
    out
}

fn table(g: u32, q: u32, r: u32, n: usize, mu_max: u32) -> Result<Report> {
    positive("q", q)?;
    positive("r", r)?;
    positive("mu-max", mu_max)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let items: Vec<Item> = profiles(n, mu_max)
        .par_iter()
        .map(|mu| {
            let h = connected_hurwitz(&HurwitzKey::new(g, q, r, mu));
            Item::new(
                format!("mu={}", list(mu)),
                "",
                rational_string(&h),
                Status::Pass,
            )
        })
        .collect();
    Ok(Report::new(
        "table",
        params([
            ("g", g.to_string()),
            ("q", q.to_string()),
            ("r", r.to_string()),
            ("n", n.to_string()),
            ("mu_max", mu_max.to_string()),
        ]),
        items,
    ))
}

fn check(suite: &Suite) -> Result<Report> {
    match *suite {
        Suite::HurwAop {
            curve,
            ref mu,
            max_size,
            max_u,
        } => {
            check_curve(curve)?;
            let profiles: Vec<Vec<u32>> = match mu {
                Some(mu) => {
                    if mu.is_empty() || mu.contains(&0) {
                        return Err(Error::InvalidInput(
                            "mu must be a list of positive integers".into(),
                        ));
                    }
                    vec![mu.clone()]
                }
                None => (1..=max_size)
                    .flat_map(|d| {
                        Partition::all_of_size(d)
                            .into_iter()
                            .map(|p| p.parts().to_vec())
                    })
                    .collect(),
            };
            let reports = profiles
                .par_iter()
                .map(|mu| {
                    let mut rep = verify_hurw_aop(mu, curve.q, curve.r, max_u)?;
                    for it in &mut rep.items {
                        it.key = format!("mu={} {}", list(mu), it.key);
                    }
                    Ok(rep)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(merge(
                "check hurw-aop",
                params([
                    ("q", curve.q.to_string()),
                    ("r", curve.r.to_string()),
                    ("max_u", max_u.to_string()),
                ]),
                reports,
            ))
        }
        Suite::F01 { curve, max } => {
            check_curve(curve)?;
            Ok(f01_check(curve.q, curve.r, max))
        }
        Suite::F02 { curve, max } => {
            check_curve(curve)?;
            Ok(f02_check(curve.q, curve.r, max))
        }
        Suite::Bergman { curve, order } => {
            check_curve(curve)?;
            bergman_check(curve.q, curve.r, order)
        }
        Suite::Residue {
            curve,
            eta,
            m,
            max_u,
        } => {
            check_curve(curve)?;
            let qr = curve.q * curve.r;
            let etas: Vec<u32> = match eta {
                Some(e) => vec![e],
                None => (0..qr).collect(),
            };
            if m == 0 {
                return Err(Error::InvalidInput("m must be positive".into()));
            }
            let cases: Vec<(u32, u32)> = etas
                .iter()
                .flat_map(|&e| (1..=m).map(move |k| (e, k)))
                .collect();
            let reports = cases
                .par_iter()
                .map(|&(e, k)| {
                    let mut rep = residue_check(e, k, curve.q, curve.r, max_u)?;
                    for it in &mut rep.items {
                        it.key = format!("eta={e} m={k} {}", it.key);
                    }
                    Ok(rep)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(merge(
                "check residue",
                params([
                    ("q", curve.q.to_string()),
                    ("r", curve.r.to_string()),
                    ("m", m.to_string()),
                    ("max_u", max_u.to_string()),
                ]),
                reports,
            ))
        }
        Suite::Polynomiality {
            curve,
            g,
            n,
            ref residues,
            grid,
            holdouts,
        } => {
            check_curve(curve)?;
            let chi = 2 * g as i64 - 2 + n as i64;
            if chi <= 0 {
                return Err(Error::InvalidInput(format!(
                    "(g, n) = ({g}, {n}) is unstable"
                )));
            }
            let grid = grid.unwrap_or(2 * chi as u64 + 2);
            let tuples = match residues {
                Some(r) => vec![r.clone()],
                None => all_admissible_residues(g, n, curve.q, curve.r),
            };
            let mut reports = Vec::new();
            for res in &tuples {
                reports.push(
                    verify_polynomiality(g, n, curve.q, curve.r, res, grid, holdouts)?.to_report(),
                );
            }
            Ok(merge(
                "check polynomiality",
                params([
                    ("g", g.to_string()),
                    ("n", n.to_string()),
                    ("q", curve.q.to_string()),
                    ("r", curve.r.to_string()),
                    ("grid", grid.to_string()),
                    ("holdouts", holdouts.to_string()),
                ]),
                reports,
            ))
        }
        Suite::Tr {
            curve,
            g,
            n,
            mu_max,
            prec,
        } => {
            let data = CurveData::new(curve.q, curve.r, prec)?;
            if mu_max == 0 {
                return Err(Error::InvalidInput("mu-max must be positive".into()));
            }
            Ok(conjecture_check(g, n, &data, mu_max)?.report)
        }
    }
}

fn exit_code(status: Status) -> ExitCode {
    match status {
        Status::Pass | Status::Evidence => ExitCode::SUCCESS,
        Status::Fail => ExitCode::from(1),
        Status::InvalidInput => ExitCode::from(2),
    }
}

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Compute { .. } => "compute".into(),
        Command::Table { .. } => "table".into(),
        Command::Check { suite } => {
            let name = match suite {
                Suite::HurwAop { .. } => "hurw-aop",
                Suite::F01 { .. } => "f01",
                Suite::F02 { .. } => "f02",
                Suite::Bergman { .. } => "bergman",
                Suite::Residue { .. } => "residue",
                Suite::Polynomiality { .. } => "polynomiality",
                Suite::Tr { .. } => "tr",
            };
            format!("check {name}")
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool configured once");
    }
    let start = Instant::now();
    let result = match &cli.command {
        Command::Compute {
            g,
            q,
            r,
            mu,
            disconnected,
            ..
        } => compute(*g, *q, *r, mu, !*disconnected),
        Command::Table { g, q, r, n, mu_max } => table(*g, *q, *r, *n, *mu_max),
        Command::Check { suite } => check(suite),
    };
    let mut report = match result {
        Ok(rep) => rep,
        Err(e) => {
            eprintln!("error: {e}");
            let mut rep = Report::new(
                command_name(&cli.command),
                Default::default(),
                vec![Item::new("error", "", e.to_string(), Status::InvalidInput)],
            );
            if !matches!(e, Error::InvalidInput(_) | Error::Inadmissible(_)) {
                rep.status = Status::Fail;
                rep.items[0].status = Status::Fail;
            }
            rep
        }
    };
    report.elapsed_ms = if cli.no_timing {
        0
    } else {
        start.elapsed().as_millis() as u64
    };
    let out = match cli.format {
        Format::Text => render::text(&report),
        Format::Json => render::json(&report),
        Format::Csv => render::csv(&report),
    };
    print!("{out}");
    exit_code(report.status)
}
