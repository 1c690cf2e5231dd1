use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qwalk::cache::Cache;
use qwalk::commands::{self, AsymArgs, GuessArgs, Outcome, SeriesMethod, Suite};
use qwalk::data::{ensure_validated, load_bundle, Bundle};
use qwalk::error::{CliError, CliResult};
use qwalk_core::asymptotics::{DEFAULT_LEVELS, DEFAULT_NMAX, DEFAULT_PREC, DEFAULT_TOL, GUESS_GUARD};
use qwalk_core::walks::SpecPoint;

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Small-step walks in the quarter plane: counts, operators, closed forms and asymptotics")]
struct Cli {
    /// Model file to use instead of the bundled one.
    #[arg(long, global = true)]
    models: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Skip the load-time validation of the model file.
    #[arg(long, global = true)]
    skip_validation: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Dp,
    Recurrence,
    Residue,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count quadrant walks of each length.
    Enum {
        #[arg(long, conflicts_with = "steps")]
        model: Option<u32>,
        /// Steps as "dx,dy;dx,dy;...".
        #[arg(long, allow_hyphen_values = true)]
        steps: Option<String>,
        #[arg(long)]
        n: usize,
        /// Also list counts by endpoint.
        #[arg(long)]
        endpoints: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = ["kernel", "eq29", "residue", "lemma9", "identities", "closedforms", "operators", "guess", "models"])]
        suite: String,
        #[arg(long)]
        order: Option<usize>,
        /// Restrict to these models (repeatable).
        #[arg(long)]
        model: Vec<u32>,
    },
    /// Guess a differential operator from enumerated terms.
    Guess {
        #[arg(long)]
        model: u32,
        #[arg(long, default_value = "11")]
        spec: String,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 140)]
        terms: usize,
        #[arg(long, default_value_t = GUESS_GUARD)]
        guard: usize,
    },
    /// Compare extrapolated constants κ with the tabulated ones.
    Asym {
        #[arg(long, required_unless_present = "all")]
        model: Option<u32>,
        #[arg(long)]
        spec: Option<String>,
        /// Every model at every point.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = DEFAULT_NMAX)]
        nmax: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_LEVELS)]
        levels: usize,
        #[arg(long, default_value_t = DEFAULT_PREC)]
        prec: u32,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The integral I for case 7 or 5.
    Integral {
        #[arg(long)]
        case: u32,
        #[arg(long, default_value_t = 128)]
        prec: u32,
    },
    /// Integral and κ for the conjectured constants of cases 7 and 5.
    Conjectures {
        #[arg(long, default_value_t = 128)]
        prec: u32,
        #[arg(long, default_value_t = DEFAULT_NMAX)]
        nmax: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Q(α, β; t) through t^n.
    Series {
        #[arg(long)]
        model: u32,
        #[arg(long, default_value = "11")]
        spec: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Dp)]
        method: Method,
    },
    /// Bundled closed forms, checked against enumeration.
    ClosedForm {
        #[arg(long)]
        model: Option<u32>,
        #[arg(long, default_value_t = 30)]
        n: usize,
    },
}

fn spec(s: &str) -> CliResult<SpecPoint> {
    s.parse().map_err(|_| CliError::Usage(format!("bad --spec {:?}, expected 00, 10, 01 or 11", s)))
}

fn bundle(cli: &Cli, cache: &Cache) -> CliResult<Bundle> {
    let b = load_bundle(cli.models.as_deref())?;
    if !cli.skip_validation {
        ensure_validated(&b, cache, 12, cli.jobs)?;
    }
    Ok(b)
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let cache = if cli.no_cache { Cache::disabled() } else { Cache::from_env() };
    let jobs = cli.jobs.max(1);
    match &cli.cmd {
        Cmd::Enum { model, steps, n, endpoints } => {
            let s = match (model, steps) {
                (None, Some(st)) => commands::parse_steps(st)?,
                _ => commands::pick_steps(&bundle(cli, &cache)?, *model, steps.as_deref())?,
            };
            commands::cmd_enum(&s, *n, *endpoints, &cache)
        }
        Cmd::Verify { suite, order, model } => {
            let b = bundle(cli, &cache)?;
            commands::cmd_verify(&b, Suite::parse(suite)?, *order, model, jobs, &cache)
        }
        Cmd::Guess { model, spec: sp, r, d, terms, guard } => {
            let b = bundle(cli, &cache)?;
            commands::cmd_guess(b.get(*model)?, spec(sp)?, &GuessArgs { r: *r, d: *d, terms: *terms, guard: *guard })
        }
        Cmd::Asym { model, spec: sp, all, nmax, tol, levels, prec, out } => {
            let b = bundle(cli, &cache)?;
            let points: Vec<SpecPoint> = match sp {
                Some(s) => vec![spec(s)?],
                None => SpecPoint::ALL.to_vec(),
            };
            let ids: Vec<u32> = match (model, all) {
                (Some(m), false) => vec![*m],
                (None, true) => b.models.iter().map(|m| m.id).collect(),
                _ => return Err(CliError::Usage("give --model or --all".into())),
            };
            let tasks: Vec<(u32, SpecPoint)> = ids.iter().flat_map(|&id| points.iter().map(move |&p| (id, p))).collect();
            let o = commands::cmd_asym(&b, &tasks, &AsymArgs { nmax: *nmax, tol: *tol, levels: *levels, prec: *prec }, jobs, &cache)?;
            if let Some(p) = out {
                std::fs::write(p, serde_json::to_string_pretty(&o.report)?)?;
            }
            Ok(o)
        }
        Cmd::Integral { case, prec } => commands::cmd_integral(*case, *prec),
        Cmd::Conjectures { prec, nmax, tol } => commands::cmd_conjectures(&bundle(cli, &cache)?, *prec, *nmax, *tol),
        Cmd::Series { model, spec: sp, n, method } => {
            let b = bundle(cli, &cache)?;
            let method = match method {
                Method::Dp => SeriesMethod::Dp,
                Method::Recurrence => SeriesMethod::Recurrence,
                Method::Residue => SeriesMethod::Residue,
            };
            commands::cmd_series(b.get(*model)?, spec(sp)?, *n, method, &cache)
        }
        Cmd::ClosedForm { model, n } => commands::cmd_closed_form(&bundle(cli, &cache)?, *model, *n, jobs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            println!("{}", serde_json::to_string_pretty(&o.report).expect("report serializes"));
            if o.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("qwalk: some checks failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("qwalk: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
