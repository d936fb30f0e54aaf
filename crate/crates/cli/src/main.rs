use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kempe::conformance::conformance_report;
use kempe::io::read_state;
use kempe::sampling::write_scatter_csv;
use kempe::slocc::{diagonal_bound, fuzz, orbit_scan, write_fuzz_csv, write_orbit_csv, FuzzRow};
use kempe::{
    classify, grassl, preset_state, sample_scatter, scan, tangle_vector, to_acin, AcinParams, Ensemble, Error,
    GrasslValue, Preset, PureState3, TangleTarget, TangleVector,
};

#[derive(Parser)]
#[command(name = "kempe", version, about = "Invariants of three-qubit pure states")]
struct Cli {
    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Numerical tolerance (classification threshold, fuzz violation threshold).
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Output format; `conformance` defaults to json, everything else to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Tangles, I5, canonical form and Grassl invariant of one state.
    Invariants(StateInput),
    /// Canonical form and the local unitaries that produce it.
    Acin(StateInput),
    /// One-parameter family of canonical states with fixed tangles.
    Family(FamilyArgs),
    /// I5 against tau3 for a random ensemble.
    Scatter(ScatterArgs),
    /// Random two-outcome local channels: average change of 1 - I5.
    Fuzz(FuzzArgs),
    /// Diagonal SL(2) orbit of a state's canonical form.
    Orbit(OrbitArgs),
    /// Quoted reference values against computed ones.
    Conformance,
}

#[derive(Args)]
struct StateInput {
    /// ghz, w, product000 or psi_alpha.
    #[arg(long, conflicts_with = "state")]
    preset: Option<String>,
    /// Phase for psi_alpha, in radians.
    #[arg(long)]
    alpha: Option<f64>,
    /// JSON file with eight [re, im] pairs.
    #[arg(long)]
    state: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    /// Use the tangles of psi_alpha for this alpha (radians).
    #[arg(long, conflicts_with_all = ["tau3", "c12", "c13", "c23"])]
    alpha: Option<f64>,
    /// Target three-tangle; needs --c12, --c13 and --c23 as well.
    #[arg(long, requires_all = ["c12", "c13", "c23"])]
    tau3: Option<f64>,
    #[arg(long)]
    c12: Option<f64>,
    #[arg(long)]
    c13: Option<f64>,
    #[arg(long)]
    c23: Option<f64>,
    /// Number of lambda4 samples across the validity interval.
    #[arg(long, default_value_t = 200)]
    points: usize,
}

#[derive(Args)]
struct ScatterArgs {
    /// haar, ghz_class, acin_random, w_class or vanishing_concurrence.
    #[arg(long, default_value = "ghz_class")]
    ensemble: String,
    #[arg(long, default_value_t = 5000)]
    points: usize,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    input: StateInput,
    /// Upper end of the t scan; defaults to three times the bound.
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 100)]
    points: usize,
}

enum Failure {
    Input(String),
    Numeric(String),
    Empty(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Empty(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Numeric(m) | Failure::Empty(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::EmptyInterval => Failure::Empty(msg),
            Error::AllZero
            | Error::BadQubitSet(_)
            | Error::BadPair(..)
            | Error::UnknownPreset(_)
            | Error::BadParam(_)
            | Error::BoundaryParams(_)
            | Error::OutOfInterval { .. }
            | Error::OutOfBound { .. }
            | Error::Parse(_) => Failure::Input(msg),
            Error::SingularOp(_)
            | Error::BadOperator { .. }
            | Error::DegenerateState(_)
            | Error::NegativeRadicand(_)
            | Error::NegativeDiscriminant(_)
            | Error::IncompleteChannel(_) => Failure::Numeric(msg),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(format!("output: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(format!("output: {e}"))
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    seed: u64,
    tol: f64,
    format: Option<Format>,
    out: Option<PathBuf>,
}

impl Ctx {
    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn sink(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn write_json<T: Serialize + ?Sized>(&self, value: &T) -> Outcome {
        let mut w = self.sink()?;
        serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::Input(format!("output: {e}")))?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn write_with(&self, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Outcome {
        let mut w = self.sink()?;
        f(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

fn load_state(input: &StateInput) -> Result<PureState3, Failure> {
    match (&input.preset, &input.state) {
        (Some(name), None) => Ok(preset_state(Preset::parse(name, input.alpha)?)?),
        (None, Some(path)) => Ok(read_state(path)?),
        (None, None) if input.alpha.is_some() => Ok(preset_state(Preset::PsiAlpha(input.alpha.unwrap_or(0.0)))?),
        _ => Err(Failure::Input("give exactly one of --preset or --state".into())),
    }
}

fn check_finite(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Input(format!("--{name} must be finite")))
    }
}

#[derive(Serialize)]
struct InvariantReport {
    tangles: TangleVector,
    class: String,
    acin: AcinParams,
    grassl: GrasslValue,
    reduction_residual: f64,
}

const INVARIANT_HEADER: [&str; 18] = [
    "c12", "c13", "c23", "tau3", "tau11", "tau12", "tau13", "i5", "i6", "l0", "l1", "l2", "l3", "l4", "phi", "re_ig",
    "im_ig", "class",
];

fn cmd_invariants(ctx: &Ctx, input: &StateInput) -> Outcome {
    let state = load_state(input)?;
    let red = to_acin(&state)?;
    let report = InvariantReport {
        tangles: tangle_vector(&state),
        class: classify(&state, ctx.tol).label.to_string(),
        acin: red.params,
        grassl: grassl(&red.params),
        reduction_residual: red.residual,
    };
    if ctx.format(Format::Csv) == Format::Json {
        return ctx.write_json(&report);
    }
    let p = report.acin.as_array();
    let mut row: Vec<String> = report.tangles.csv_row().iter().map(f64::to_string).collect();
    row.extend(p.iter().map(f64::to_string));
    row.extend([report.grassl.re.to_string(), report.grassl.im.to_string(), report.class]);
    let mut w = csv::Writer::from_writer(ctx.sink()?);
    w.write_record(INVARIANT_HEADER)?;
    w.write_record(&row)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct AcinReport {
    params: AcinParams,
    residual: f64,
    /// Row-major `[re, im]` entries of the three local unitaries.
    unitaries: [[[f64; 2]; 4]; 3],
}

fn cmd_acin(ctx: &Ctx, input: &StateInput) -> Outcome {
    let state = load_state(input)?;
    let red = to_acin(&state)?;
    let flat = |op: &kempe::LocalOp| {
        let m = op.matrix();
        [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]].map(|z| [z.re, z.im])
    };
    let report = AcinReport {
        params: red.params,
        residual: red.residual,
        unitaries: [flat(&red.u1), flat(&red.u2), flat(&red.u3)],
    };
    if ctx.format(Format::Csv) == Format::Json {
        return ctx.write_json(&report);
    }
    let mut w = csv::Writer::from_writer(ctx.sink()?);
    w.write_record(["l0", "l1", "l2", "l3", "l4", "phi", "residual"])?;
    let mut row: Vec<String> = red.params.as_array().iter().map(f64::to_string).collect();
    row.push(red.residual.to_string());
    w.write_record(&row)?;
    w.flush()?;
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".interval.json");
    PathBuf::from(name)
}

fn cmd_family(ctx: &Ctx, args: &FamilyArgs) -> Outcome {
    let target = match (args.alpha, args.tau3) {
        (Some(alpha), None) => {
            TangleTarget::from_state(&preset_state(Preset::PsiAlpha(check_finite("alpha", alpha)?))?)?
        }
        (None, Some(tau3)) => {
            let get = |v: Option<f64>, name: &str| v.ok_or_else(|| Failure::Input(format!("--{name} is required")));
            TangleTarget::new(tau3, get(args.c12, "c12")?, get(args.c13, "c13")?, get(args.c23, "c23")?)?
        }
        _ => return Err(Failure::Input("give --alpha or all of --tau3 --c12 --c13 --c23".into())),
    };
    let table = scan(&target, args.points)?;
    if let Some(out) = &ctx.out {
        #[derive(Serialize)]
        struct Sidecar<'a> {
            target: &'a TangleTarget,
            interval: &'a kempe::ValidityInterval,
        }
        let file = File::create(sidecar_path(out))?;
        let mut w = BufWriter::new(file);
        let sidecar = Sidecar {
            target: &table.target,
            interval: &table.interval,
        };
        serde_json::to_writer_pretty(&mut w, &sidecar).map_err(|e| Failure::Input(format!("output: {e}")))?;
        writeln!(w)?;
        w.flush()?;
    }
    match ctx.format(Format::Csv) {
        Format::Json => ctx.write_json(&table),
        Format::Csv => ctx.write_with(|w| table.write_csv(w)),
    }
}

fn cmd_scatter(ctx: &Ctx, args: &ScatterArgs) -> Outcome {
    let ensemble: Ensemble = args.ensemble.parse()?;
    let rows = sample_scatter(ensemble, args.points, ctx.seed)?;
    match ctx.format(Format::Csv) {
        Format::Json => ctx.write_json(&rows),
        Format::Csv => ctx.write_with(|w| write_scatter_csv(&rows, w)),
    }
}

fn cmd_fuzz(ctx: &Ctx, args: &FuzzArgs) -> Outcome {
    if args.trials == 0 {
        return Err(Failure::Input("--trials must be at least 1".into()));
    }
    let rows = fuzz(args.trials, ctx.seed)?;
    match ctx.format(Format::Csv) {
        Format::Json => ctx.write_json(&rows)?,
        Format::Csv => ctx.write_with(|w| write_fuzz_csv(&rows, w))?,
    }
    let worst: &FuzzRow = rows.iter().min_by(|a, b| a.margin.total_cmp(&b.margin)).expect("trials >= 1");
    let violations = rows.iter().filter(|r| r.margin < -ctx.tol).count();
    eprintln!(
        "{} trials, min margin {:e} (trial {}, seed {}), {violations} below -{:e}",
        rows.len(),
        worst.margin,
        worst.trial,
        worst.seed,
        ctx.tol
    );
    Ok(())
}

fn cmd_orbit(ctx: &Ctx, args: &OrbitArgs) -> Outcome {
    let state = load_state(&args.input)?;
    let params = to_acin(&state)?.params;
    let bound = diagonal_bound(&params)?;
    let t_max = match args.t_max {
        Some(t) => check_finite("t-max", t)?,
        None => 3.0 * bound,
    };
    if t_max < bound {
        return Err(Failure::Input(format!("--t-max {t_max} is below the bound {bound}")));
    }
    let rows = orbit_scan(&params, bound, t_max, args.points)?;
    if rows.is_empty() {
        return Err(Failure::Empty("orbit scan produced no rows".into()));
    }
    match ctx.format(Format::Csv) {
        Format::Json => ctx.write_json(&rows),
        Format::Csv => ctx.write_with(|w| write_orbit_csv(&rows, w)),
    }
}

fn cmd_conformance(ctx: &Ctx) -> Outcome {
    let report = conformance_report()?;
    match ctx.format(Format::Json) {
        Format::Json => ctx.write_json(&report),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(ctx.sink()?);
            w.write_record(["claim", "paper_value", "computed_value", "agree"])?;
            for e in &report {
                w.write_record([
                    e.claim.clone(),
                    e.paper_value.to_string(),
                    e.computed_value.to_string(),
                    e.agree.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Err(Failure::Input("--tol must be a nonnegative number".into()));
    }
    let ctx = Ctx {
        seed: cli.seed,
        tol: cli.tol,
        format: cli.format,
        out: cli.out,
    };
    match &cli.command {
        Command::Invariants(input) => cmd_invariants(&ctx, input),
        Command::Acin(input) => cmd_acin(&ctx, input),
        Command::Family(args) => cmd_family(&ctx, args),
        Command::Scatter(args) => cmd_scatter(&ctx, args),
        Command::Fuzz(args) => cmd_fuzz(&ctx, args),
        Command::Orbit(args) => cmd_orbit(&ctx, args),
        Command::Conformance => cmd_conformance(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
