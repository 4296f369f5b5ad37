//! `mumford`: batch verification runner.
//!
//! Exit status: 0 when no check fails, 1 when some check fails (including an
//! unreached building vertex), 2 on usage or I/O errors.

mod checks;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use mumford_core::building::{check_transitivity_for, standard_vertex, ball_layers, TransitivityReport};
use mumford_core::lattice_group::{enumerate_similitudes, in_gamma_mum, write_similitudes};
use mumford_core::levels::sylow2_p;
use mumford_core::padic::DEFAULT_PRECISION;
use rayon::prelude::*;
use serde_json::json;

use checks::{Config, Ctx};
use report::{Check, Report, Status};

#[derive(Parser, Debug)]
#[command(name = "mumford", version, about = "Machine checks for Mumford's fake projective plane data")]
struct Cli {
    /// Starting 2-adic precision in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Float tolerance for numeric consistency checks.
    #[arg(long, global = true, default_value_t = mumford_core::hermitian::DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Ceiling for `building --radius`.
    #[arg(long, global = true, default_value_t = mumford_core::building::DEFAULT_MAX_RADIUS)]
    max_radius: u32,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the algebraic and arithmetic checks.
    Verify {
        /// Only run checks whose id starts with this prefix.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Transitivity of the lattice on a ball of the building.
    Building {
        #[arg(long, default_value_t = 2)]
        radius: u32,
        /// Similitude factors to search, each a power of 2.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        factors: Vec<u64>,
    },
    /// Write the integral similitudes with factor `c` in the text format.
    Enumerate {
        #[arg(long)]
        factor: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if let Some(path) = &cli.json {
                if let Err(e) = fs::write(path, report.to_json()) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if report.has_failures() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn config(cli: &Cli) -> Config {
    Config { precision: cli.precision, tolerance: cli.tolerance, seed: cli.seed, max_radius: cli.max_radius }
}

fn base_config(cfg: &Config) -> serde_json::Map<String, serde_json::Value> {
    let v = json!({
        "precision": cfg.precision,
        "tolerance": cfg.tolerance,
        "seed": cfg.seed,
        "max_radius": cfg.max_radius,
    });
    match v {
        serde_json::Value::Object(m) => m,
        _ => unreachable!(),
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let cfg = config(cli);
    if cfg.precision == 0 {
        return Err(Failure::Usage("--precision must be positive".into()));
    }
    let report = match &cli.command {
        Command::Verify { filter } => verify(cfg, filter.as_deref()),
        Command::Building { radius, factors } => building(cfg, *radius, factors)?,
        Command::Enumerate { factor, output } => return enumerate(cfg, *factor, output.as_ref()),
    };
    print!("{}", report.render_text());
    Ok(report)
}

fn verify(cfg: Config, filter: Option<&str>) -> Report {
    let mut conf = base_config(&cfg);
    conf.insert("filter".into(), json!(filter));
    let ctx = Ctx::new(cfg);
    let defs: Vec<_> = checks::registry()
        .into_iter()
        .filter(|d| filter.map_or(true, |f| d.id.starts_with(f)))
        .collect();
    let timed: Vec<(Check, Duration)> = defs
        .par_iter()
        .map(|d| {
            let t = Instant::now();
            let (status, witness) = (d.run)(&ctx);
            let check = Check {
                id: d.id.into(),
                anchor: d.anchor.into(),
                summary: d.summary.into(),
                status,
                witness,
            };
            (check, t.elapsed())
        })
        .collect();
    Report::new("verify", conf.into(), timed)
}

fn exponent_of(c: u64, what: &str) -> Result<u32, Failure> {
    if c.is_power_of_two() {
        Ok(c.trailing_zeros())
    } else {
        Err(Failure::Usage(format!("{what} {c} is not a power of 2")))
    }
}

fn building(cfg: Config, radius: u32, factors: &[u64]) -> Result<Report, Failure> {
    if radius > cfg.max_radius {
        return Err(Failure::Usage(format!("radius {radius} exceeds --max-radius {}", cfg.max_radius)));
    }
    let mut exps = factors.iter().map(|&c| exponent_of(c, "factor")).collect::<Result<Vec<_>, _>>()?;
    exps.sort_unstable();
    exps.dedup();
    if exps.is_empty() {
        return Err(Failure::Usage("no factors given".into()));
    }
    let mut conf = base_config(&cfg);
    conf.insert("radius".into(), json!(radius));
    conf.insert("factors".into(), json!(exps.iter().map(|k| 1u64 << k).collect::<Vec<_>>()));

    let t = Instant::now();
    let std_v = standard_vertex();
    let layers = ball_layers(&std_v, radius);
    let std_v = &std_v;
    let mismatched: Vec<String> = layers
        .iter()
        .enumerate()
        .flat_map(|(d, layer)| layer.iter().filter(move |v| std_v.distance(v) != d as u32).map(|v| v.to_string()))
        .collect();
    let ball = Check {
        id: "Thm-3.6-ball".into(),
        anchor: "thm-mumford".into(),
        summary: "ball layers by adjacency agree with the elementary-divisor distance".into(),
        status: Status::from_bool(mismatched.is_empty()),
        witness: json!({
            "layer_sizes": layers.iter().map(Vec::len).collect::<Vec<_>>(),
            "ball_size": layers.iter().map(Vec::len).sum::<usize>(),
            "mismatched": mismatched,
        }),
    };
    let ball_time = t.elapsed();

    let t = Instant::now();
    let (trans, stab) = match check_transitivity_for(radius, &exps, &sylow2_p(), cfg.precision) {
        Ok(r) => transitivity_checks(&r),
        Err(e) => action_failed(&e.to_string()),
    };
    let search_time = t.elapsed();
    Ok(Report::new("building", conf.into(), vec![(ball, ball_time), (trans, search_time), (stab, Duration::ZERO)]))
}

fn action_failed(err: &str) -> (Check, Check) {
    let trans = Check {
        id: "Thm-3.6-transitivity".into(),
        anchor: "thm-mumford".into(),
        summary: "the group action on the ball could not be computed".into(),
        status: Status::Fail,
        witness: json!({ "error": err }),
    };
    let stab = Check {
        id: "Thm-3.6-stabilizers".into(),
        anchor: "thm-mumford".into(),
        summary: "no non-scalar member fixes the standard vertex".into(),
        status: Status::Skipped,
        witness: json!({ "reason": "action failed" }),
    };
    (trans, stab)
}

fn transitivity_checks(r: &TransitivityReport) -> (Check, Check) {
    let table: Vec<_> = r
        .layer_sizes
        .iter()
        .zip(&r.reached)
        .enumerate()
        .map(|(d, (n, hit))| json!({ "distance": d, "vertices": n, "reached": hit }))
        .collect();
    let witnesses: Vec<_> = r
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "vertex": w.vertex.to_string(),
                "distance": w.distance,
                "factor": 1u64 << w.factor_exp,
                "gamma": w.gamma.matrix().to_string(),
            })
        })
        .collect();
    let trans = Check {
        id: "Thm-3.6-transitivity".into(),
        anchor: "thm-mumford".into(),
        summary: format!("every vertex within distance {} is the image of the standard vertex", r.radius),
        status: Status::from_bool(r.all_reached()),
        witness: json!({
            "table": table,
            "members_examined": r
                .factor_exps
                .iter()
                .zip(&r.members_examined)
                .map(|(k, n)| json!({ "factor": 1u64 << k, "members": n }))
                .collect::<Vec<_>>(),
            "unreached": r.unreached.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "witnesses": witnesses,
        }),
    };
    let stab = Check {
        id: "Thm-3.6-stabilizers".into(),
        anchor: "thm-mumford".into(),
        summary: "no non-scalar member fixes the standard vertex".into(),
        status: Status::from_bool(r.stabilizer_free()),
        witness: json!({ "stabilizers": r.stabilizers.iter().map(|g| g.matrix().to_string()).collect::<Vec<_>>() }),
    };
    (trans, stab)
}

fn enumerate(cfg: Config, factor: u64, output: Option<&PathBuf>) -> Result<Report, Failure> {
    let k = exponent_of(factor, "--factor")?;
    let t = Instant::now();
    let list = enumerate_similitudes(k);
    let text = write_similitudes(&list);
    let elapsed = t.elapsed();
    match output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Failure::Io(format!("writing {}: {e}", path.display())))?;
            println!("wrote {} similitudes with factor {factor} to {}", list.len(), path.display());
        }
        None => print!("{text}"),
    }
    let p = sylow2_p();
    let members = list.iter().filter(|g| in_gamma_mum(g, &p)).count();
    let mut conf = base_config(&cfg);
    conf.insert("factor".into(), json!(factor));
    conf.insert("output".into(), json!(output.map(|p| p.display().to_string())));
    let check = Check {
        id: "Thm-3.6-enumeration".into(),
        anchor: "thm-mumford".into(),
        summary: format!("integral similitudes of H with factor {factor}"),
        status: Status::Pass,
        witness: json!({ "similitudes": list.len(), "gamma_mum_members": members }),
    };
    Ok(Report::new("enumerate", conf.into(), vec![(check, elapsed)]))
}
