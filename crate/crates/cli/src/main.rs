use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sdeinv_core::counting::{closed_forms, Family};
use sdeinv_core::invariants::{evaluate_invariant, g_matrix, RATIO_SLOTS};
use sdeinv_core::jet::sample::{random_germ, sample_with_counts};
use sdeinv_core::run::{run_group, run_groups, CheckGroup, DegreeCutoffs, RunOutcome, SampleCounts};
use sdeinv_core::{rng, Error, JetGerm, RunConfig, SDESystem, Scalar, Which};

const CONFIG_ENV: &str = "SDEINV_CONFIG";

#[derive(Parser)]
#[command(name = "sdeinv", version, about = "Exact checks for a four-dimensional self-duality system")]
struct Cli {
    /// TOML run configuration; flags override it.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    /// Sample count used by every sampled check.
    #[arg(long)]
    samples: Option<usize>,
    /// Monomial degree cutoff `m + n <= d` for every generator check.
    #[arg(long)]
    max_degree: Option<u32>,
    /// Write `<stem>.md` and `<stem>.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the JSON report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the system and check which half of the Weyl operator vanishes.
    DeriveSde(Common),
    /// Run one check group.
    Verify {
        #[arg(value_parser = verify_group)]
        group: CheckGroup,
        #[command(flatten)]
        common: Common,
    },
    /// Orbit dimensions and invariant counts up to `kmax`.
    Dims {
        /// Orders above 5 are slow; at most 7.
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=7))]
        kmax: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form Hilbert polynomial values for `k <= kmax`.
    Hilbert {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 12)]
        kmax: u32,
    },
    /// Power series coefficients of the Poincaré function.
    Poincare {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 13)]
        terms: usize,
    },
    /// Random germ on the prolonged equation, as JSON.
    SampleGerm {
        #[arg(long, default_value_t = 3)]
        order: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Unconstrained jets instead of a solution.
        #[arg(long)]
        off_equation: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    #[command(subcommand)]
    Invariants(InvariantsCommand),
    /// Every check group, with a markdown and JSON report.
    Report {
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long)]
        terms: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum InvariantsCommand {
    /// Exact `K`, `I_1 … I_4` and, from order three, the nine metric ratios.
    Eval {
        #[arg(long)]
        germ: PathBuf,
    },
}

fn verify_group(s: &str) -> Result<CheckGroup, String> {
    let g: CheckGroup = s.parse().map_err(|e: Error| e.to_string())?;
    match g {
        CheckGroup::DeriveSde | CheckGroup::Dims | CheckGroup::Hilbert => {
            Err(format!("{s} has its own subcommand"))
        }
        _ => Ok(g),
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, Error> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn apply(cfg: &mut RunConfig, c: &Common) {
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(n) = c.samples {
        cfg.samples = SampleCounts::uniform(n);
    }
    if let Some(d) = c.max_degree {
        cfg.max_degree = DegreeCutoffs::uniform(d);
    }
    if c.out.is_some() {
        cfg.out = c.out.clone();
    }
}

fn finish(out: &RunOutcome, cfg: &RunConfig, c: &Common) -> Result<bool, Error> {
    for r in &out.reports {
        println!("{}", r.summary_line());
    }
    if let Some(stem) = &cfg.out {
        out.write(stem)?;
    }
    if let Some(path) = &c.json {
        std::fs::write(path, out.json())?;
    }
    Ok(out.all_passed())
}

fn integer(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        s.to_string()
    }
}

fn eval_germ(path: &Path) -> Result<serde_json::Value, Error> {
    let g = JetGerm::from_json(&std::fs::read_to_string(path)?)?;
    if g.order() < 2 {
        return Err(Error::OrderTooLow { have: g.order(), need: 2 });
    }
    let mut vals = serde_json::Map::new();
    for (name, w) in [("K", Which::K), ("I1", Which::I1), ("I2", Which::I2), ("I3", Which::I3), ("I4", Which::I4)] {
        let v = match evaluate_invariant(w, &g) {
            Ok(x) => json!(x),
            Err(Error::ZeroDenominator) => serde_json::Value::Null,
            Err(e) => return Err(e),
        };
        vals.insert(name.into(), v);
    }
    let ratios = if g.order() < 3 {
        serde_json::Value::Null
    } else {
        match g_matrix(&g) {
            Ok(m) => RATIO_SLOTS
                .iter()
                .zip(&m.ratios)
                .map(|((i, j), r)| (format!("G{}{}/G44", i + 1, j + 1), json!(r)))
                .collect::<serde_json::Map<_, _>>()
                .into(),
            Err(Error::SingularJacobian | Error::ZeroG44) => serde_json::Value::Null,
            Err(e) => return Err(e),
        }
    };
    Ok(json!({
        "order": g.order(),
        "invariants": vals,
        "g_ratios": ratios,
    }))
}

fn dispatch(cli: Cli) -> Result<bool, Error> {
    let mut cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::DeriveSde(c) => {
            apply(&mut cfg, &c);
            let sys = SDESystem::get();
            for (i, f) in sys.f.iter().enumerate() {
                println!("F{} = {f}", i + 1);
            }
            let out = run_group(CheckGroup::DeriveSde, &cfg)?;
            if let Some(o) = out.orientation {
                println!("vanishing half: {}", serde_json::to_value(o)?.as_str().unwrap_or("?"));
            }
            finish(&out, &cfg, &c)
        }
        Command::Verify { group, common } => {
            apply(&mut cfg, &common);
            let out = run_group(group, &cfg)?;
            finish(&out, &cfg, &common)
        }
        Command::Dims { kmax, common } => {
            apply(&mut cfg, &common);
            if let Some(k) = kmax {
                cfg.kmax = k;
            }
            let out = run_group(CheckGroup::Dims, &cfg)?;
            if let Some(t) = &out.table {
                print!("{}", t.to_markdown());
                println!();
            }
            finish(&out, &cfg, &common)
        }
        Command::Hilbert { family, kmax } => {
            let f = closed_forms(family);
            for k in 0..=kmax {
                println!("{k} {}", integer(&f.hilbert(k)));
            }
            Ok(true)
        }
        Command::Poincare { family, terms } => {
            let s = closed_forms(family).series(terms);
            let cells: Vec<String> = s.0.iter().map(integer).collect();
            println!("{}", cells.join(","));
            Ok(true)
        }
        Command::SampleGerm { order, seed, off_equation, out } => {
            let mut r = rng::rng(seed);
            let g = if off_equation || order < 2 {
                random_germ(order, &mut r)
            } else {
                sample_with_counts(order, &mut r)?.0
            };
            match out {
                Some(p) => std::fs::write(p, g.to_json())?,
                None => println!("{}", g.to_json()),
            }
            Ok(true)
        }
        Command::Invariants(InvariantsCommand::Eval { germ }) => {
            println!("{}", serde_json::to_string_pretty(&eval_germ(&germ)?)?);
            Ok(true)
        }
        Command::Report { kmax, terms, common } => {
            apply(&mut cfg, &common);
            if let Some(k) = kmax {
                cfg.kmax = k;
            }
            if let Some(t) = terms {
                cfg.terms = t;
            }
            let out = run_groups(&CheckGroup::ALL, &cfg)?;
            if cfg.out.is_none() && common.json.is_none() {
                print!("{}", out.markdown());
            }
            finish(&out, &cfg, &common)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DegenerateSample(_) => 3,
        Error::BadParameter(_)
        | Error::Parse(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::OrderTooLow { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
