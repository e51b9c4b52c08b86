//! Command-line surface: pressure curves, quadratic-pressure solutions,
//! closed-form mean-field reports, finite-n oracle verification and beta
//! sweeps, emitted as deterministic CSV or JSON.

mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quadpress::models::{self, CwpRegime};
use quadpress::oracle::{self, ConvergenceRow, OracleOptions, PgmEvaluator};
use quadpress::quadratic::{self, QuadraticOptions};
use quadpress::{Alphabet, CylinderMeasure, Error, LocallyConstantPotential, Word};
use rayon::prelude::*;
use report::{fmt_f, json_array, json_str, JsonObject, LongTable, Meta};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "quadpress",
    version,
    about = "Quadratic pressure, mean-field Gibbs limits and finite-n oracle checks on full shifts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the pressure P(t psi) over a t-grid
    Pressure(PressureArgs),
    /// Solve the quadratic-pressure problem at one beta
    Quadratic(QuadraticArgs),
    /// Closed-form two-state mean-field solution
    Cw(CwArgs),
    /// Closed-form q-state mean-field solution
    Cwp(CwpArgs),
    /// Compare finite-n Gibbs oracles against the predicted limit
    Verify(VerifyArgs),
    /// Phase diagram over a beta range
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Collapse,
    Quadrature,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureKind {
    /// Mixture of the eigenmeasures (the predicted weak limit)
    Conformal,
    /// Mixture of the equilibrium measures H d(nu)
    Dgm,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default: csv for tables, json for structured reports)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct PotentialArgs {
    /// Built-in potential (cw, potts:<q>:<k>) or path to a potential JSON file
    #[arg(long)]
    potential: String,
    /// Also write the resolved potential table to this path
    #[arg(long)]
    dump_potential: Option<PathBuf>,
}

#[derive(Args)]
struct TolArgs {
    /// Tolerance for treating local maxima as global
    #[arg(long)]
    tol_value: Option<f64>,
    /// Minimal separation between reported maxima
    #[arg(long)]
    tol_sep: Option<f64>,
    /// Derivative threshold of the degeneracy classifier
    #[arg(long)]
    tol_laplace: Option<f64>,
}

impl TolArgs {
    fn options(&self) -> QuadraticOptions {
        let mut opts = QuadraticOptions::default();
        if self.tol_value.is_some() {
            opts.tol_value = self.tol_value;
        }
        if let Some(s) = self.tol_sep {
            opts.tol_sep = s;
        }
        if let Some(l) = self.tol_laplace {
            opts.laplace_threshold = l;
        }
        opts
    }
}

#[derive(Args)]
struct PressureArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    /// Parameter grid start:stop:points
    #[arg(long = "beta-range", allow_hyphen_values = true)]
    beta_range: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct QuadraticArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long)]
    beta: f64,
    /// Cylinders for the limit table (default: all words of length 1 and 2)
    #[arg(long = "cylinder")]
    cylinders: Vec<String>,
    /// Which measure mixture the limit table evaluates; the two coincide
    /// for memory-1 potentials
    #[arg(long, value_enum, default_value = "conformal")]
    measure: MeasureKind,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CwArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long = "cylinder")]
    cylinders: Vec<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CwpArgs {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    beta: Option<f64>,
    /// Evaluate exactly at the critical temperature
    #[arg(long)]
    at_critical: bool,
    #[arg(long = "cylinder")]
    cylinders: Vec<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Potential for the generic pipeline (exact/quadrature, or cw collapse)
    #[arg(long)]
    potential: Option<String>,
    /// q-state mean-field mode (collapse method only)
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    beta: f64,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long = "cylinder", required = true)]
    cylinders: Vec<String>,
    /// Comma-separated n schedule
    #[arg(long = "n", value_delimiter = ',', required = true)]
    schedule: Vec<u64>,
    /// Cap on exact-enumeration size
    #[arg(long)]
    enum_cap: Option<u64>,
    #[arg(long)]
    dump_potential: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long = "beta-range", allow_hyphen_values = true)]
    beta_range: String,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

enum CliError {
    Lib(Error),
    Io { path: String, message: String },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.kind(),
            CliError::Io { .. } => "io",
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) => match e {
                Error::Capacity(_) => 3,
                Error::Numeric { .. } | Error::Resolution(_) | Error::FlatMaximum { .. } => 4,
                _ => 2,
            },
            CliError::Io { .. } => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Io { path, message } => format!("{message} ({path})"),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            emit_error_json("config", &e.to_string());
            std::process::exit(2);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            emit_error_json(e.kind(), &e.message());
            std::process::exit(e.exit_code());
        }
    }
}

fn emit_error_json(kind: &str, message: &str) {
    eprintln!(
        "{{\"error\": {{\"kind\": {}, \"message\": {}}}}}",
        json_str(kind),
        json_str(message)
    );
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Pressure(a) => cmd_pressure(a),
        Command::Quadratic(a) => cmd_quadratic(a),
        Command::Cw(a) => cmd_cw(a),
        Command::Cwp(a) => cmd_cwp(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

/// Resolve a potential argument: built-in name or JSON file path.
fn load_potential(spec: &str) -> Result<LocallyConstantPotential, CliError> {
    if spec == "cw" {
        return Ok(LocallyConstantPotential::cw());
    }
    if let Some(rest) = spec.strip_prefix("potts:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(Error::Usage(format!("expected potts:<q>:<k>, got {spec:?}")).into());
        }
        let q: usize = parts[0]
            .parse()
            .map_err(|_| Error::Usage(format!("bad q in {spec:?}")))?;
        let k: usize = parts[1]
            .parse()
            .map_err(|_| Error::Usage(format!("bad k in {spec:?}")))?;
        return Ok(LocallyConstantPotential::potts_indicator(q, k)?);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| CliError::Io {
        path: spec.to_string(),
        message: format!("cannot read potential file: {e}"),
    })?;
    Ok(LocallyConstantPotential::from_json(&text)?)
}

fn dump_potential(pot: &LocallyConstantPotential, path: &Option<PathBuf>) -> Result<(), CliError> {
    if let Some(path) = path {
        write_file(path, &pot.to_json())?;
    }
    Ok(())
}

fn parse_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Usage(format!("expected start:stop:points, got {spec:?}")).into());
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Usage(format!("bad range start in {spec:?}")))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Usage(format!("bad range stop in {spec:?}")))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| Error::Usage(format!("bad range point count in {spec:?}")))?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::Usage(format!("empty or non-finite range {spec:?}")).into());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect())
}

fn parse_cylinders(
    alphabet: &Alphabet,
    specs: &[String],
    default_lengths: &[usize],
) -> Result<Vec<Word>, CliError> {
    if specs.is_empty() {
        let mut words = Vec::new();
        for &len in default_lengths {
            words.extend(alphabet.words_of_length(len));
        }
        return Ok(words);
    }
    let mut words = Vec::with_capacity(specs.len());
    for s in specs {
        words.push(alphabet.word_from_str(s)?);
    }
    Ok(words)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: format!("cannot write output: {e}"),
    })
}

fn emit(
    output: &OutputArgs,
    default_format: Format,
    csv: String,
    json: String,
) -> Result<(), CliError> {
    let format = output.format.unwrap_or(default_format);
    let content = match format {
        Format::Csv => csv,
        Format::Json => json,
    };
    match &output.out {
        Some(path) => write_file(path, &content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn limit_rows(
    measure: &CylinderMeasure,
    alphabet: &Alphabet,
    cylinders: &[Word],
) -> Vec<(String, f64)> {
    cylinders
        .iter()
        .map(|w| (alphabet.format_word(w), measure.cylinder(w)))
        .collect()
}

fn limit_json(rows: &[(String, f64)]) -> String {
    json_array(rows, |(cyl, p)| {
        format!(
            "{{\"cylinder\": {}, \"prob\": {}}}",
            json_str(cyl),
            fmt_f(*p)
        )
    })
}

fn cmd_pressure(a: PressureArgs) -> Result<(), CliError> {
    let pot = load_potential(&a.potential.potential)?;
    dump_potential(&pot, &a.potential.dump_potential)?;
    let grid = parse_range(&a.beta_range)?;
    let rows: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&t| quadpress::transfer::pressure(&pot, t).map(|p| (t, p)))
        .collect::<Result<Vec<_>, Error>>()?;

    let mut csv = String::from("t,pressure\n");
    for &(t, p) in &rows {
        csv.push_str(&format!("{},{}\n", fmt_f(t), fmt_f(p)));
    }
    let meta = Meta {
        command: "pressure",
        potential: a.potential.potential.clone(),
        beta: json_str(&a.beta_range),
    };
    let mut obj = JsonObject::new();
    obj.raw("meta", meta.json());
    obj.raw(
        "rows",
        json_array(&rows, |(t, p)| {
            format!("{{\"t\": {}, \"pressure\": {}}}", fmt_f(*t), fmt_f(*p))
        }),
    );
    emit(&a.output, Format::Csv, csv, obj.render())
}

fn cmd_quadratic(a: QuadraticArgs) -> Result<(), CliError> {
    let pot = load_potential(&a.potential.potential)?;
    dump_potential(&pot, &a.potential.dump_potential)?;
    let cylinders = parse_cylinders(pot.alphabet(), &a.cylinders, &[1, 2])?;
    let sol = quadratic::solve_quadratic(&pot, a.beta, &a.tol.options())?;
    let limit = match a.measure {
        MeasureKind::Conformal => quadratic::limit_measure(&sol),
        MeasureKind::Dgm => CylinderMeasure::Mixture {
            parts: sol
                .spectra
                .iter()
                .zip(&sol.c_list)
                .map(|(spec, &c)| (c, CylinderMeasure::spectral(spec.clone(), true)))
                .collect(),
        },
    };
    let lrows = limit_rows(&limit, pot.alphabet(), &cylinders);

    let mut table = LongTable::new();
    table.scalar("beta", sol.beta);
    table.scalar("P2", sol.value);
    for (i, &t) in sol.t_list.iter().enumerate() {
        table.indexed("t", &i.to_string(), t);
    }
    for (i, &k) in sol.k_list.iter().enumerate() {
        table.indexed("k", &i.to_string(), k as f64);
    }
    for (i, &c) in sol.c_list.iter().enumerate() {
        table.indexed("c", &i.to_string(), c);
    }
    for (cyl, p) in &lrows {
        table.indexed("limit", cyl, *p);
    }

    let meta = Meta {
        command: "quadratic",
        potential: a.potential.potential.clone(),
        beta: fmt_f(a.beta),
    };
    let maxima: Vec<(f64, u32, f64)> = sol
        .t_list
        .iter()
        .zip(&sol.k_list)
        .zip(&sol.c_list)
        .map(|((&t, &k), &c)| (t, k, c))
        .collect();
    let mut obj = JsonObject::new();
    obj.raw("meta", meta.json());
    obj.number("beta", sol.beta);
    obj.number("P2", sol.value);
    obj.raw(
        "maxima",
        json_array(&maxima, |(t, k, c)| {
            format!("{{\"t\": {}, \"k\": {k}, \"c\": {}}}", fmt_f(*t), fmt_f(*c))
        }),
    );
    obj.raw("limit", limit_json(&lrows));
    emit(&a.output, Format::Json, table.csv(), obj.render())
}

fn cmd_cw(a: CwArgs) -> Result<(), CliError> {
    let sol = models::cw_solution(a.beta)?;
    let alphabet = Alphabet::spin();
    let cylinders = parse_cylinders(&alphabet, &a.cylinders, &[1, 2])?;
    let lrows = limit_rows(&sol.limit, &alphabet, &cylinders);

    let mut table = LongTable::new();
    table.scalar("beta", sol.beta);
    table.scalar("xi", sol.xi);
    table.scalar("p_plus", sol.p_plus);
    table.scalar("pressure", models::cw_pressure_closed(a.beta));
    for (cyl, p) in &lrows {
        table.indexed("limit", cyl, *p);
    }

    let meta = Meta {
        command: "cw",
        potential: "cw".into(),
        beta: fmt_f(a.beta),
    };
    let mut obj = JsonObject::new();
    obj.raw("meta", meta.json());
    obj.number("beta", sol.beta);
    obj.number("xi", sol.xi);
    obj.number("p_plus", sol.p_plus);
    obj.number("pressure", models::cw_pressure_closed(a.beta));
    obj.raw("limit", limit_json(&lrows));
    emit(&a.output, Format::Json, table.csv(), obj.render())
}

fn cmd_cwp(a: CwpArgs) -> Result<(), CliError> {
    if a.q == 2 {
        // the q-state closed forms are 0/0 at q = 2; the two-state model is
        // the right branch for that alphabet
        let beta = a.beta.ok_or_else(|| {
            Error::Usage("q = 2 uses the two-state branch, which needs --beta".into())
        })?;
        eprintln!("note: q = 2 is handled by the two-state mean-field branch");
        return cmd_cw(CwArgs {
            beta,
            cylinders: a.cylinders,
            output: a.output,
        });
    }
    let beta_c = models::cwp_beta_c(a.q)?;
    let beta = match (a.beta, a.at_critical) {
        (Some(_), true) => {
            return Err(
                Error::Usage("--beta and --at-critical are mutually exclusive".into()).into(),
            )
        }
        (None, true) => beta_c,
        (Some(b), false) => {
            if (b - beta_c).abs() <= models::CRITICAL_TOL {
                return Err(Error::Usage(format!(
                    "beta = {b} sits at the critical point; pass --at-critical to select that branch"
                ))
                .into());
            }
            b
        }
        (None, false) => {
            return Err(Error::Usage("one of --beta or --at-critical is required".into()).into())
        }
    };
    let sol = models::cwp_solution(a.q, beta)?;
    let alphabet = Alphabet::potts(a.q)?;
    let cylinders = parse_cylinders(&alphabet, &a.cylinders, &[1, 2])?;
    let lrows = limit_rows(&sol.limit, &alphabet, &cylinders);

    let mut table = LongTable::new();
    table.scalar("q", sol.q as f64);
    table.scalar("beta", sol.beta);
    table.scalar("beta_c", sol.beta_c);
    table.scalar("s", sol.s);
    table.text("regime", sol.regime.label());
    if let (Some(wa), Some(wb)) = (sol.weight_a, sol.weight_b) {
        table.scalar("A", wa);
        table.scalar("B", wb);
    }
    for (cyl, p) in &lrows {
        table.indexed("limit", cyl, *p);
    }

    let meta = Meta {
        command: "cwp",
        potential: format!("cwp(q={})", a.q),
        beta: fmt_f(beta),
    };
    let mut obj = JsonObject::new();
    obj.raw("meta", meta.json());
    obj.integer("q", sol.q as u64);
    obj.number("beta", sol.beta);
    obj.number("beta_c", sol.beta_c);
    obj.number("s", sol.s);
    obj.string("regime", sol.regime.label());
    if sol.regime == CwpRegime::Critical {
        obj.number("A", sol.weight_a.unwrap());
        obj.number("B", sol.weight_b.unwrap());
    }
    obj.raw("limit", limit_json(&lrows));
    emit(&a.output, Format::Json, table.csv(), obj.render())
}

fn cmd_verify(a: VerifyArgs) -> Result<(), CliError> {
    let oracle_opts = OracleOptions {
        enum_cap: a.enum_cap.unwrap_or(OracleOptions::default().enum_cap),
        ..OracleOptions::default()
    };
    // resolve the oracle and the predicted limit
    let (alphabet, pot, predicted): (Alphabet, Option<LocallyConstantPotential>, CylinderMeasure) =
        match (&a.potential, a.q, a.method) {
            (None, Some(q), Method::Collapse) => {
                let sol = models::cwp_solution(q, a.beta)?;
                (Alphabet::potts(q)?, None, sol.limit)
            }
            (None, Some(_), _) => {
                return Err(
                    Error::Usage("--q verification supports only --method collapse".into()).into(),
                )
            }
            (Some(spec), None, _) => {
                let pot = load_potential(spec)?;
                dump_potential(&pot, &a.dump_potential)?;
                if a.method == Method::Collapse && pot != LocallyConstantPotential::cw() {
                    return Err(Error::Usage(
                        "--method collapse needs the cw potential or --q <int>".into(),
                    )
                    .into());
                }
                let sol = quadratic::solve_quadratic(&pot, a.beta, &QuadraticOptions::default())?;
                let limit = quadratic::limit_measure(&sol);
                (pot.alphabet().clone(), Some(pot), limit)
            }
            _ => {
                return Err(
                    Error::Usage("exactly one of --potential or --q is required".into()).into(),
                )
            }
        };
    let cylinders = parse_cylinders(&alphabet, &a.cylinders, &[])?;
    if cylinders.is_empty() {
        return Err(Error::Usage("at least one --cylinder is required".into()).into());
    }

    let rows: Vec<Vec<ConvergenceRow>> = cylinders
        .par_iter()
        .map(|w| {
            let eval = match (a.method, &pot, a.q) {
                (Method::Exact, Some(p), _) => PgmEvaluator::Exact {
                    pot: p,
                    beta: a.beta,
                    opts: oracle_opts.clone(),
                },
                (Method::Quadrature, Some(p), _) => PgmEvaluator::Quadrature {
                    pot: p,
                    beta: a.beta,
                    opts: oracle_opts.clone(),
                },
                (Method::Collapse, Some(_), _) => PgmEvaluator::CwCollapse { beta: a.beta },
                (Method::Collapse, None, Some(q)) => PgmEvaluator::CwpCollapse {
                    q,
                    beta: a.beta,
                    opts: oracle_opts.clone(),
                },
                _ => unreachable!(),
            };
            oracle::convergence_report(
                &eval,
                &predicted,
                &alphabet,
                std::slice::from_ref(w),
                &a.schedule,
            )
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let rows: Vec<ConvergenceRow> = rows.into_iter().flatten().collect();

    let mut csv = String::from("n,cylinder,oracle,predicted,gap,method\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            r.cylinder,
            fmt_f(r.oracle),
            fmt_f(r.predicted),
            fmt_f(r.gap),
            r.method
        ));
    }
    let meta = Meta {
        command: "verify",
        potential: a
            .potential
            .clone()
            .unwrap_or_else(|| format!("cwp(q={})", a.q.unwrap())),
        beta: fmt_f(a.beta),
    };
    let mut obj = JsonObject::new();
    obj.raw("meta", meta.json());
    obj.raw(
        "rows",
        json_array(&rows, |r| {
            format!(
                "{{\"n\": {}, \"cylinder\": {}, \"oracle\": {}, \"predicted\": {}, \"gap\": {}, \"method\": {}}}",
                r.n,
                json_str(&r.cylinder),
                fmt_f(r.oracle),
                fmt_f(r.predicted),
                fmt_f(r.gap),
                json_str(r.method)
            )
        }),
    );
    emit(&a.output, Format::Csv, csv, obj.render())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), CliError> {
    let pot = load_potential(&a.potential.potential)?;
    dump_potential(&pot, &a.potential.dump_potential)?;
    let betas = parse_range(&a.beta_range)?;
    if betas.iter().any(|&b| b <= 0.0 || b.is_nan()) {
        return Err(Error::Usage("sweep needs strictly positive beta values".into()).into());
    }
    let opts = a.tol.options();
    let sols = betas
        .par_iter()
        .map(|&beta| quadratic::solve_quadratic(&pot, beta, &opts))
        .collect::<Result<Vec<_>, Error>>()?;

    let mut csv = String::from("beta,J,P2,ts,cs\n");
    for sol in &sols {
        let ts: Vec<String> = sol.t_list.iter().map(|&t| fmt_f(t)).collect();
        let cs: Vec<String> = sol.c_list.iter().map(|&c| fmt_f(c)).collect();
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f(sol.beta),
            sol.t_list.len(),
            fmt_f(sol.value),
            ts.join(";"),
            cs.join(";")
        ));
    }
    let meta = Meta {
        command: "sweep",
        potential: a.potential.potential.clone(),
        beta: json_str(&a.beta_range),
    };
    let mut obj = JsonObject::new();
    obj.raw("meta", meta.json());
    obj.raw(
        "rows",
        json_array(&sols, |sol| {
            let ts = json_array(&sol.t_list, |t| fmt_f(*t));
            let cs = json_array(&sol.c_list, |c| fmt_f(*c));
            format!(
                "{{\"beta\": {}, \"J\": {}, \"P2\": {}, \"t\": {ts}, \"c\": {cs}}}",
                fmt_f(sol.beta),
                sol.t_list.len(),
                fmt_f(sol.value)
            )
        }),
    );
    emit(&a.output, Format::Csv, csv, obj.render())
}
