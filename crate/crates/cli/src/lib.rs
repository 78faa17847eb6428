//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a `--check` verdict
//! failed, 3 the constructions disagreed under `diagram --method all`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use boxball::config::{parse_config, serialize_config};
use boxball::forests::{forest_of_path, young_from_forest};
use boxball::paths::path_of_config;
use boxball::permutations::{
    avoids, greedy_lambda_rho, rs_shape, sigma_of_config, sigma_of_forest, sigma_of_path, Permutation,
};
use boxball::random::{
    dual_config, harris_walk, sample_config_with, sample_gw_forest_with, sample_path_with, stream_rng,
    uniform_dyck_path_with, uniform_stack_sortable_with, RandomParams,
};
use boxball::stats::{run_experiment, ExperimentKind, ExperimentReport};
use boxball::young::{young_columns, young_diagram, young_rows};
use boxball::{BoxBallConfig, Error, YoungDiagram};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "BOXBALL_THREADS";

const EXPERIMENT_HELP: &str = "\
Outputs:
  --out FILE      full JSON report; every field except \"metadata\" is
                  reproducible from (kind, n, p, trials, seed)
  --csv FILE      one row per trial:
                  stream,rho1,rho2,rho3,rho4,rho5,lambda1,lambda2,lambda3,lambda4,lambda5,sweeps,micros
                  sweeps is empty for n > 2048; micros is wall time
  --cdf-dir DIR   one two-column file <name>.dat per distribution function

Defaults (n, p, trials):
  rows                   100000  0.5  200
  rows-clt               100000  0.5  10000
  columns-subcritical    100000  0.3  1000
  columns-critical       100000  0.5  1000
  columns-supercritical  100000  0.7  1000
  permutation            2000    -    1000";

#[derive(Parser, Debug)]
#[command(name = "boxball", version, about = "Box-ball system solitons, Young diagrams and their limit laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run carrier sweeps and print the orbit.
    Evolve(EvolveArgs),
    /// Young diagram of a configuration.
    Diagram(DiagramArgs),
    /// Stack-sorting permutation of a configuration, or statistics of a
    /// given permutation.
    Perm(PermArgs),
    /// Draw one random object.
    Sample(SampleArgs),
    /// Monte Carlo experiment with reference laws and verdicts.
    #[command(after_help = EXPERIMENT_HELP)]
    Experiment(ExperimentArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct ConfigArg {
    /// Configuration as a 0/1 string, or @FILE to read one from a file.
    #[arg(long)]
    config: String,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Number of sweeps to print.
    #[arg(long, default_value_t = 1, conflicts_with = "stabilize")]
    sweeps: usize,
    /// Sweep until stable and report the soliton lengths.
    #[arg(long)]
    stabilize: bool,
    /// Sweep budget for --stabilize; defaults to m^2 + m + 1 for m balls.
    #[arg(long, requires = "stabilize")]
    max_sweeps: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Rows by hill flattening and columns by excursions, checked conjugate.
    Path,
    Rows,
    Columns,
    Forest,
    Rsk,
    Solitons,
    All,
}

#[derive(Args, Debug)]
struct DiagramArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long, value_enum, default_value_t = Method::Path)]
    method: Method,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["config", "perm"]))]
struct PermArgs {
    /// Configuration as a 0/1 string, or @FILE.
    #[arg(long)]
    config: Option<String>,
    /// Permutation in one-line notation, e.g. "1 4 6 5 3 2".
    #[arg(long, allow_hyphen_values = true)]
    perm: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SampleKind {
    /// Bernoulli configuration on boxes 1..n.
    Config,
    /// Its lattice path.
    Path,
    /// Its dual configuration.
    Dual,
    /// Harris walk heights over 0..n.
    Walk,
    /// Galton-Watson forest explored for n moves.
    Forest,
    /// Uniform Dyck path with n up steps.
    Dyck,
    /// Uniform stack-sortable permutation of length n.
    StackSortable,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(value_enum)]
    kind: SampleKind,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Decimal or 0x-prefixed hexadecimal.
    #[arg(long, default_value = "1", value_parser = parse_seed)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(value_parser = parse_kind)]
    kind: ExperimentKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Decimal or 0x-prefixed hexadecimal.
    #[arg(long, default_value = "1", value_parser = parse_seed)]
    seed: u64,
    /// Write the full JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the per-trial CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write one data file per distribution function into this directory.
    #[arg(long)]
    cdf_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Exit with status 2 if any verdict fails.
    #[arg(long)]
    check: bool,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn parse_kind(s: &str) -> Result<ExperimentKind, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown experiment {s:?}; expected one of {}", names.join(", "))
    })
}

/// Failure of a subcommand, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Check,
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Evolve(a) => evolve(a, out),
        Command::Diagram(a) => diagram(a, out),
        Command::Perm(a) => perm(a, out),
        Command::Sample(a) => sample(a, out),
        Command::Experiment(a) => experiment(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Check) => {
            let _ = writeln!(err, "error: acceptance check failed");
            EXIT_CHECK_FAILED
        }
        Err(Failure::Mismatch) => {
            let _ = writeln!(err, "error: constructions disagree");
            EXIT_MISMATCH
        }
    }
}

fn read_config(arg: &str) -> Result<BoxBallConfig, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(file) => std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{file}: {e}")))?,
        None => arg.to_string(),
    };
    Ok(parse_config(text.trim())?)
}

fn to_json(out: &mut dyn Write, v: &serde_json::Value) -> Outcome {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("values serialize"))?;
    Ok(())
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn padded_bits(x: &BoxBallConfig, width: usize) -> String {
    x.to_bits(width).iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn evolve(a: EvolveArgs, out: &mut dyn Write) -> Outcome {
    let x = read_config(&a.config.config)?;
    let (orbit, solitons) = if a.stabilize {
        let s = x.stabilize(a.max_sweeps)?;
        let lengths = s.config.soliton_lengths()?;
        (x.evolve(s.sweeps as usize), Some(lengths))
    } else {
        (x.evolve(a.sweeps), None)
    };
    let width = orbit.iter().map(|y| y.extent()).max().unwrap_or(0) + 1;
    let width = width.max(a.config.config.trim().len());
    match a.format {
        Format::Text => {
            for (s, y) in orbit.iter().enumerate() {
                writeln!(out, "s={s:<3} {}", padded_bits(y, width))?;
            }
            if let Some(l) = &solitons {
                writeln!(out, "stable after {} sweeps; soliton lengths {}", orbit.len() - 1, join(l, ","))?;
            }
        }
        Format::Csv => {
            writeln!(out, "sweep,config")?;
            for (s, y) in orbit.iter().enumerate() {
                writeln!(out, "{s},{}", padded_bits(y, width))?;
            }
        }
        Format::Json => {
            let rows: Vec<_> = orbit
                .iter()
                .enumerate()
                .map(|(s, y)| json!({"sweep": s, "config": serialize_config(y), "occupied": y.occupied()}))
                .collect();
            to_json(out, &json!({"orbit": rows, "soliton_lengths": solitons}))?;
        }
    }
    Ok(())
}

fn diagram_by(method: Method, x: &BoxBallConfig) -> Result<YoungDiagram, Failure> {
    let g = path_of_config(x);
    let d = match method {
        Method::Path | Method::All => young_diagram(&g)?,
        Method::Rows => YoungDiagram::from_rows(young_rows(&g)?)?,
        Method::Columns => YoungDiagram::from_columns(young_columns(&g)?)?,
        Method::Forest => young_from_forest(&forest_of_path(&g)?)?,
        Method::Rsk => rs_shape(&sigma_of_config(x)),
        Method::Solitons => {
            let mut l = x.stabilize(None)?.config.soliton_lengths()?;
            l.sort_unstable_by(|a, b| b.cmp(a));
            YoungDiagram::from_columns(l)?
        }
    };
    Ok(d)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Path => "path",
        Method::Rows => "rows",
        Method::Columns => "columns",
        Method::Forest => "forest",
        Method::Rsk => "rsk",
        Method::Solitons => "solitons",
        Method::All => "all",
    }
}

fn diagram(a: DiagramArgs, out: &mut dyn Write) -> Outcome {
    let x = read_config(&a.config.config)?;
    let methods: Vec<Method> = if a.method == Method::All {
        vec![Method::Path, Method::Rows, Method::Columns, Method::Forest, Method::Rsk, Method::Solitons]
    } else {
        vec![a.method]
    };
    let results: Vec<(Method, Option<YoungDiagram>)> = if let [m] = methods[..] {
        vec![(m, Some(diagram_by(m, &x)?))]
    } else {
        // A failed internal check in one route counts as a disagreement.
        methods.iter().map(|&m| (m, diagram_by(m, &x).ok())).collect()
    };
    let first = results[0].1.clone();
    let consistent = results.iter().all(|(_, d)| d.is_some() && *d == first);
    match a.format {
        Format::Text => {
            if let [(_, Some(d))] = results.as_slice() {
                writeln!(out, "{d}")?;
                writeln!(out, "ρ={}", join(&d.rows(), ","))?;
            } else {
                for (m, d) in &results {
                    let shown = d.as_ref().map_or("failed".to_string(), |d| d.to_string());
                    writeln!(out, "{:<9} {shown}", method_name(*m))?;
                }
                writeln!(out, "{}", if consistent { "consistent" } else { "MISMATCH" })?;
            }
        }
        Format::Csv => {
            writeln!(out, "method,lambda,rho")?;
            for (m, d) in &results {
                let (l, r) = d
                    .as_ref()
                    .map_or((String::new(), String::new()), |d| (join(d.columns(), " "), join(&d.rows(), " ")));
                writeln!(out, "{},{l},{r}", method_name(*m))?;
            }
        }
        Format::Json => {
            let routes: serde_json::Map<String, serde_json::Value> = results
                .iter()
                .map(|(m, d)| (method_name(*m).to_string(), serde_json::to_value(d).unwrap()))
                .collect();
            to_json(out, &json!({"consistent": consistent, "routes": routes}))?;
        }
    }
    if consistent {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn perm(a: PermArgs, out: &mut dyn Write) -> Outcome {
    let p231: Permutation = "2 3 1".parse().unwrap();
    let p312: Permutation = "3 1 2".parse().unwrap();
    let mut fields = serde_json::Map::new();
    let mut lines = Vec::new();
    let sigma = match (&a.config, &a.perm) {
        (Some(c), _) => {
            let x = read_config(c)?;
            let sigma = sigma_of_config(&x);
            let g = path_of_config(&x);
            let from_path = sigma_of_path(&g)?;
            let from_forest = sigma_of_forest(&forest_of_path(&g)?);
            lines.push(format!("sigma          {sigma}"));
            lines.push(format!("inverse        {}", sigma.inverse()));
            lines.push(format!("sigma(path)    {from_path}"));
            lines.push(format!("sigma(forest)  {from_forest}"));
            fields.insert("inverse".into(), json!(sigma.inverse()));
            fields.insert("sigma_of_path".into(), json!(from_path));
            fields.insert("sigma_of_forest".into(), json!(from_forest));
            sigma
        }
        (None, Some(p)) => {
            let sigma: Permutation = p.parse()?;
            lines.push(format!("sigma          {sigma}"));
            sigma
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let shape = rs_shape(&sigma);
    let greedy = greedy_lambda_rho(&sigma);
    let (a231, a312) = if sigma.len() >= 3 {
        (avoids(&sigma, &p231)?, avoids(&sigma, &p312)?)
    } else {
        (true, true)
    };
    lines.push(format!("rs shape       {shape}"));
    lines.push(format!(
        "greedy         λ={} ρ={} ({})",
        join(&greedy.lambda, ","),
        join(&greedy.rho, ","),
        if greedy.matches_rs { "matches rs" } else { "differs from rs" }
    ));
    lines.push(format!("avoids 231     {a231}"));
    lines.push(format!("avoids 312     {a312}"));
    fields.insert("sigma".into(), json!(sigma));
    fields.insert("rs_shape".into(), json!(shape));
    fields.insert("greedy".into(), json!(greedy));
    fields.insert("avoids_231".into(), json!(a231));
    fields.insert("avoids_312".into(), json!(a312));
    match a.format {
        Format::Text => {
            for l in lines {
                writeln!(out, "{l}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "sigma,lambda,rho,avoids_231,avoids_312")?;
            writeln!(
                out,
                "{sigma},{},{},{a231},{a312}",
                join(shape.columns(), " "),
                join(&shape.rows(), " ")
            )?;
        }
        Format::Json => to_json(out, &serde_json::Value::Object(fields))?,
    }
    Ok(())
}

fn sample(a: SampleArgs, out: &mut dyn Write) -> Outcome {
    let params = RandomParams::new(a.n, a.p, a.seed)?;
    let mut rng = stream_rng(params.seed, 0);
    let (n, p) = (params.n, params.p);
    let value = match a.kind {
        SampleKind::Config => padded_bits(&sample_config_with(&mut rng, n, p), n),
        SampleKind::Path => sample_path_with(&mut rng, n, p).to_string(),
        SampleKind::Dual => padded_bits(&dual_config(&sample_config_with(&mut rng, n, p), n)?, n),
        SampleKind::Walk => {
            let t = harris_walk(&sample_config_with(&mut rng, n, p), n);
            join(&t.h, ",")
        }
        SampleKind::Forest => sample_gw_forest_with(&mut rng, n, p).to_string(),
        SampleKind::Dyck => uniform_dyck_path_with(&mut rng, n).to_string(),
        SampleKind::StackSortable => uniform_stack_sortable_with(&mut rng, n).to_string(),
    };
    let kind = a.kind.to_possible_value().unwrap();
    match a.format {
        Format::Text => writeln!(out, "{value}")?,
        Format::Csv => {
            writeln!(out, "kind,n,p,seed,value")?;
            writeln!(out, "{},{n},{p},{},\"{value}\"", kind.get_name(), a.seed)?;
        }
        Format::Json => to_json(
            out,
            &json!({"kind": kind.get_name(), "n": n, "p": p, "seed": a.seed, "value": value}),
        )?,
    }
    Ok(())
}

fn defaults(kind: ExperimentKind) -> (usize, f64, usize) {
    match kind {
        ExperimentKind::Rows => (100_000, 0.5, 200),
        ExperimentKind::RowsClt => (100_000, 0.5, 10_000),
        ExperimentKind::ColumnsSubcritical => (100_000, 0.3, 1000),
        ExperimentKind::ColumnsCritical => (100_000, 0.5, 1000),
        ExperimentKind::ColumnsSupercritical => (100_000, 0.7, 1000),
        ExperimentKind::Permutation => (2000, 0.5, 1000),
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    if let Some(t) = flag {
        return if t == 0 {
            Err(Failure::Usage("--threads must be positive".into()))
        } else {
            Ok(Some(t))
        };
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(Failure::Usage(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

fn write_file(path: &Path, contents: &str) -> Outcome {
    std::fs::write(path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn experiment(a: ExperimentArgs, out: &mut dyn Write) -> Outcome {
    let (n0, p0, t0) = defaults(a.kind);
    let params = RandomParams::new(a.n.unwrap_or(n0), a.p.unwrap_or(p0), a.seed)?;
    let trials = a.trials.unwrap_or(t0);
    let threads = thread_count(a.threads)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Failure::Usage(e.to_string()))?;
    let report = pool.install(|| run_experiment(a.kind, params, trials))?;

    if let Some(path) = &a.out {
        write_file(path, &full_json(&report))?;
    }
    if let Some(path) = &a.csv {
        write_file(path, &report.to_csv())?;
    }
    if let Some(dir) = &a.cdf_dir {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
        for grid in &report.cdfs {
            write_file(&dir.join(format!("{}.dat", grid.name)), &grid.to_dat())?;
        }
    }
    match a.format {
        Format::Text => write_summary(&report, out)?,
        Format::Csv => write!(out, "{}", report.to_csv())?,
        Format::Json => writeln!(out, "{}", full_json(&report))?,
    }
    if a.check && !report.passed() {
        return Err(Failure::Check);
    }
    Ok(())
}

fn full_json(report: &ExperimentReport) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

fn write_summary(r: &ExperimentReport, out: &mut dyn Write) -> Outcome {
    writeln!(out, "experiment {} n={} p={} trials={} seed={}", r.kind, r.n, r.p, r.trials, r.seed)?;
    writeln!(out, "mean rho1..5    {}", join(&fmt_all(&r.aggregates.row_means), " "))?;
    writeln!(out, "mean lambda1..5 {}", join(&fmt_all(&r.aggregates.column_means), " "))?;
    for (k, v) in &r.statistics {
        writeln!(out, "stat {k} = {v:.6}")?;
    }
    for (k, v) in &r.reference {
        writeln!(out, "reference {k} = {v:.6}")?;
    }
    for v in &r.verdicts {
        writeln!(out, "{v}")?;
    }
    writeln!(out, "{}", if r.passed() { "all verdicts passed" } else { "some verdicts failed" })?;
    Ok(())
}

fn fmt_all(v: &[f64]) -> Vec<String> {
    v.iter().map(|x| format!("{x:.4}")).collect()
}
