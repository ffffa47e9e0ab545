//! Command-line front end.
//!
//! Settings come from flags and, optionally, a config file of `key = value`
//! lines (`#` starts a comment). Flags win over the file. Keys are the flag
//! names without the leading dashes; `-` and `_` are interchangeable.
//!
//! Exit codes: 0 success, 1 numerical or I/O failure, 2 configuration error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::analysis::{scan_lambda, SolveReport};
use crate::error::{Error, Result};
use crate::mesh::UniformMesh;
use crate::problems::{example1, example2, example3, ProblemId, ProblemSpec};
use crate::stepper::StepParams;

#[derive(Parser, Debug)]
#[command(name = "ecbs", version, about = "Extended cubic B-spline solver for the generalized Burgers-Fisher equation")]
struct Args {
    /// example1 | example2 | example3
    #[arg(long, allow_hyphen_values = true)]
    problem: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    /// Positive integer exponent.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Number of mesh cells.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<String>,
    #[arg(long = "t-end", allow_hyphen_values = true)]
    t_end: Option<String>,
    /// Shape parameter.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Comma-separated snapshot times (default: t-end).
    #[arg(long = "report-times", allow_hyphen_values = true)]
    report_times: Option<String>,
    /// Shape-parameter scan as lo:hi:step.
    #[arg(long, allow_hyphen_values = true)]
    scan: Option<String>,
    /// Reproduce a preset error table: 2, 3 or 4.
    #[arg(long, allow_hyphen_values = true)]
    table: Option<String>,
    /// Directory for profile CSVs and meta.txt.
    #[arg(long, allow_hyphen_values = true)]
    out: Option<String>,
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
}

const KEYS: [&str; 13] =
    ["problem", "alpha", "mu", "eta", "q", "n", "dt", "t_end", "lambda", "report_times", "scan", "table", "out"];

/// Keys a table preset fixes.
const PRESET_KEYS: [&str; 9] = ["problem", "alpha", "mu", "eta", "q", "n", "dt", "t_end", "report_times"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TablePreset {
    Two,
    Three,
    Four,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub alpha: f64,
    pub mu: f64,
    pub eta: f64,
    pub q: u32,
    pub n_cells: usize,
    pub dt: f64,
    pub t_end: f64,
    pub lambda: f64,
    pub report_times: Vec<f64>,
    pub output_path: Option<PathBuf>,
    pub scan: Option<ScanRange>,
    pub table: Option<TablePreset>,
}

/// Where a raw setting came from, for error messages.
#[derive(Debug, Clone, Copy)]
enum Source {
    Flag,
    Line(usize),
}

struct Raw {
    values: BTreeMap<&'static str, (String, Source)>,
}

impl Raw {
    fn get(&self, key: &str) -> Option<&(String, Source)> {
        self.values.get(key)
    }

    fn err(key: &str, src: Source, msg: impl std::fmt::Display) -> Error {
        match src {
            Source::Flag => Error::Config(format!("--{}: {msg}", key.replace('_', "-"))),
            Source::Line(l) => Error::Config(format!("line {l}: key '{key}': {msg}")),
        }
    }

    fn parse<V: std::str::FromStr>(&self, key: &str) -> Result<Option<V>>
    where
        V::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some((v, src)) => v.trim().parse::<V>().map(Some).map_err(|e| Self::err(key, *src, format!("'{v}': {e}"))),
        }
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        let v = self.parse::<f64>(key)?;
        if let (Some(x), Some((_, src))) = (v, self.get(key)) {
            if !x.is_finite() {
                return Err(Self::err(key, *src, "must be finite"));
            }
        }
        Ok(v)
    }

    fn check<V>(&self, key: &str, v: V, ok: bool, msg: &str) -> Result<V> {
        if ok {
            return Ok(v);
        }
        let src = self.get(key).map_or(Source::Flag, |(_, s)| *s);
        Err(Self::err(key, src, msg))
    }
}

fn canonical_key(key: &str) -> Option<&'static str> {
    let k = key.trim().replace('-', "_");
    KEYS.iter().copied().find(|c| *c == k)
}

fn parse_file(text: &str, values: &mut BTreeMap<&'static str, (String, Source)>) -> Result<()> {
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {lineno}: expected 'key = value', got '{body}'")))?;
        let key =
            canonical_key(k).ok_or_else(|| Error::Config(format!("line {lineno}: unknown key '{}'", k.trim())))?;
        values.insert(key, (v.trim().to_string(), Source::Line(lineno)));
    }
    Ok(())
}

fn flag_values(args: &Args) -> Vec<(&'static str, &Option<String>)> {
    vec![
        ("problem", &args.problem),
        ("alpha", &args.alpha),
        ("mu", &args.mu),
        ("eta", &args.eta),
        ("q", &args.q),
        ("n", &args.n),
        ("dt", &args.dt),
        ("t_end", &args.t_end),
        ("lambda", &args.lambda),
        ("report_times", &args.report_times),
        ("scan", &args.scan),
        ("table", &args.table),
        ("out", &args.out),
    ]
}

/// Build a validated configuration from command-line arguments (without the
/// program name) and the contents of a config file.
pub fn parse_config(argv: &[String], file_text: Option<&str>) -> Result<RunConfig> {
    let args = Args::try_parse_from(std::iter::once("ecbs".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| Error::Config(e.to_string()))?;
    resolve(&args, file_text)
}

fn resolve(args: &Args, file_text: Option<&str>) -> Result<RunConfig> {
    let mut values = BTreeMap::new();
    if let Some(text) = file_text {
        parse_file(text, &mut values)?;
    }
    for (key, v) in flag_values(args) {
        if let Some(v) = v {
            values.insert(key, (v.clone(), Source::Flag));
        }
    }
    let raw = Raw { values };

    let table = match raw.get("table") {
        None => None,
        Some((v, src)) => Some(match v.trim() {
            "2" => TablePreset::Two,
            "3" => TablePreset::Three,
            "4" => TablePreset::Four,
            other => return Err(Raw::err("table", *src, format!("'{other}' is not one of 2, 3, 4"))),
        }),
    };

    let lambda = raw.real("lambda")?.unwrap_or(0.0);
    let scan = match raw.get("scan") {
        None => None,
        Some((v, src)) => Some(parse_scan(v).map_err(|m| Raw::err("scan", *src, m))?),
    };
    let output_path = raw.get("out").map(|(v, _)| PathBuf::from(v.trim()));

    if let Some(t) = table {
        if let Some(key) = PRESET_KEYS.iter().find(|k| raw.get(k).is_some()) {
            let src = raw.get(key).map(|(_, s)| *s).unwrap_or(Source::Flag);
            return Err(Raw::err(key, src, "fixed by the table preset"));
        }
        let last = preset_rows(t).iter().flat_map(|r| r.times.iter().copied()).fold(0.0, f64::max);
        return Ok(RunConfig {
            problem: ProblemId::Example1,
            alpha: 0.0,
            mu: 1.0,
            eta: 0.0,
            q: 1,
            n_cells: preset_rows(t)[0].n_cells,
            dt: PRESET_DT,
            t_end: last,
            lambda,
            report_times: Vec::new(),
            output_path,
            scan,
            table,
        });
    }

    let problem = match raw.get("problem") {
        None => return Err(Error::Config("--problem is required (or --table)".into())),
        Some((v, src)) => v.parse::<ProblemId>().map_err(|_| Raw::err("problem", *src, format!("unknown problem '{v}'")))?,
    };

    let q = match raw.get("q") {
        None => 1,
        Some((v, src)) => {
            let x: f64 = v.trim().parse().map_err(|e| Raw::err("q", *src, format!("'{v}': {e}")))?;
            if !(x.fract() == 0.0 && x >= 1.0 && x <= u32::MAX as f64) {
                return Err(Raw::err("q", *src, "must be a positive integer"));
            }
            x as u32
        }
    };
    let mu = raw.real("mu")?.unwrap_or(1.0);
    let (alpha, eta) = match problem {
        ProblemId::Example3 => {
            let alpha = raw.real("alpha")?.unwrap_or(1.0);
            let eta = raw.real("eta")?.unwrap_or(0.0);
            raw.check("alpha", (), alpha == 1.0, "fixed to 1 for example3")?;
            raw.check("eta", (), eta == 0.0, "fixed to 0 for example3")?;
            (alpha, eta)
        }
        _ => {
            let alpha = raw.real("alpha")?.ok_or_else(|| Error::Config(format!("--alpha is required for {problem}")))?;
            let eta = raw.real("eta")?.ok_or_else(|| Error::Config(format!("--eta is required for {problem}")))?;
            (alpha, eta)
        }
    };
    match problem {
        ProblemId::Example1 => {
            raw.check("mu", (), mu == 1.0, "must be 1 for example1 (the exact solution requires it)")?;
            raw.check("alpha", (), alpha != 0.0, "must be nonzero for example1")?;
        }
        _ => {
            raw.check("q", (), q == 1, "fixed to 1 for this problem")?;
        }
    }

    let n_cells = match raw.get("n") {
        None => 16,
        Some((v, src)) => v.trim().parse::<usize>().map_err(|e| Raw::err("n", *src, format!("'{v}': {e}")))?,
    };
    raw.check("n", (), n_cells >= 2, "need at least 2 cells")?;
    let dt = raw.real("dt")?.unwrap_or(1e-4);
    raw.check("dt", (), dt > 0.0, "must be positive")?;
    let t_end = raw.real("t_end")?.ok_or_else(|| Error::Config("--t-end is required".into()))?;
    raw.check("t_end", (), t_end > 0.0, "must be positive")?;

    let report_times = match raw.get("report_times") {
        None => vec![t_end],
        Some((v, src)) => {
            let mut times = Vec::new();
            for part in v.split(',') {
                let t: f64 = part.trim().parse().map_err(|e| Raw::err("report_times", *src, format!("'{part}': {e}")))?;
                if !(0.0..=t_end).contains(&t) {
                    return Err(Raw::err("report_times", *src, format!("{t} is outside [0, t_end]")));
                }
                times.push(t);
            }
            if times.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Raw::err("report_times", *src, "must be strictly increasing"));
            }
            times
        }
    };

    StepParams::new(alpha, mu, eta, q, dt)?;
    UniformMesh::new(0.0, 1.0, n_cells)?;
    if scan.is_some() && problem != ProblemId::Example1 {
        return Err(Error::Config(format!("--scan needs an exact solution; {problem} has none")));
    }

    Ok(RunConfig {
        problem,
        alpha,
        mu,
        eta,
        q,
        n_cells,
        dt,
        t_end,
        lambda,
        report_times,
        output_path,
        scan,
        table: None,
    })
}

fn parse_scan(v: &str) -> std::result::Result<ScanRange, String> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("'{v}' is not lo:hi:step"));
    }
    let mut x = [0.0; 3];
    for (slot, p) in x.iter_mut().zip(&parts) {
        *slot = p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}"))?;
    }
    let [lo, hi, step] = x;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err("need finite lo <= hi".into());
    }
    if !(step.is_finite() && step > 0.0) {
        return Err("step must be positive".into());
    }
    Ok(ScanRange { lo, hi, step })
}

impl RunConfig {
    pub fn problem_spec(&self) -> Result<ProblemSpec<f64>> {
        Ok(match self.problem {
            ProblemId::Example1 => example1(self.alpha, self.eta, self.q)?,
            ProblemId::Example2 => example2(self.alpha, self.eta, self.mu),
            ProblemId::Example3 => example3(self.mu),
        })
    }

    /// `key = value` rendering; readable back by [`parse_config`].
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        if let Some(t) = self.table {
            let n = match t {
                TablePreset::Two => 2,
                TablePreset::Three => 3,
                TablePreset::Four => 4,
            };
            let _ = writeln!(s, "table = {n}");
        } else {
            let _ = writeln!(s, "problem = {}", self.problem);
            let _ = writeln!(s, "alpha = {:e}", self.alpha);
            let _ = writeln!(s, "mu = {:e}", self.mu);
            let _ = writeln!(s, "eta = {:e}", self.eta);
            let _ = writeln!(s, "q = {}", self.q);
            let _ = writeln!(s, "n = {}", self.n_cells);
            let _ = writeln!(s, "dt = {:e}", self.dt);
            let _ = writeln!(s, "t_end = {:e}", self.t_end);
            let times: Vec<String> = self.report_times.iter().map(|t| format!("{t:e}")).collect();
            let _ = writeln!(s, "report_times = {}", times.join(","));
        }
        let _ = writeln!(s, "lambda = {:e}", self.lambda);
        if let Some(sc) = self.scan {
            let _ = writeln!(s, "scan = {:e}:{:e}:{:e}", sc.lo, sc.hi, sc.step);
        }
        if let Some(p) = &self.output_path {
            let _ = writeln!(s, "out = {}", p.display());
        }
        s
    }
}

const PRESET_DT: f64 = 1e-4;

/// One block of a preset table: a parameter set with its report times and
/// the published `lambda = 0` errors.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetRows {
    pub alpha: f64,
    pub eta: f64,
    pub q: u32,
    pub n_cells: usize,
    pub times: Vec<f64>,
    pub reference: Vec<f64>,
}

pub fn preset_rows(table: TablePreset) -> Vec<PresetRows> {
    let rows = |alpha, eta, q, n_cells, times: &[f64], reference: &[f64]| PresetRows {
        alpha,
        eta,
        q,
        n_cells,
        times: times.to_vec(),
        reference: reference.to_vec(),
    };
    let t5 = [0.1, 0.2, 0.3, 0.4, 0.5];
    let t10 = [0.2, 0.4, 0.6, 0.8, 1.0];
    match table {
        TablePreset::Two => vec![
            rows(0.1, -0.0025, 1, 16, &t5, &[1.08646e-12, 1.46944e-12, 1.61926e-12, 1.67277e-12, 1.67277e-12]),
            rows(0.1, -0.0025, 2, 16, &t5, &[2.17542e-11, 3.02457e-11, 3.33861e-11, 3.45414e-11, 3.49593e-11]),
            rows(0.1, -0.0025, 4, 16, &t5, &[3.12324e-11, 4.34227e-11, 4.79300e-11, 4.95853e-11, 5.01746e-11]),
        ],
        TablePreset::Three => vec![
            rows(1.0, 1.0, 1, 16, &t10, &[5.58038e-8, 8.54479e-8, 2.04362e-7, 2.80869e-7, 2.99588e-7]),
            rows(1.0, 1.0, 2, 16, &t10, &[2.82618e-7, 4.62302e-7, 4.29008e-7, 2.56283e-7, 8.03168e-8]),
            rows(1.0, 1.0, 4, 16, &t10, &[3.98349e-7, 2.64952e-7, 1.73948e-8, 8.61362e-8, 6.63329e-7]),
        ],
        TablePreset::Four => vec![
            rows(0.01, 1.0, 1, 8, &[0.5], &[2.43664e-11]),
            rows(0.01, 10.0, 1, 8, &[0.5], &[6.89380e-10]),
            rows(0.01, 100.0, 1, 8, &[0.5], &[9.32587e-15]),
            rows(0.001, 1.0, 1, 8, &[0.5], &[2.43607e-11]),
            rows(0.001, 10.0, 1, 8, &[0.5], &[6.87854e-10]),
            rows(0.001, 100.0, 1, 8, &[0.5], &[9.10383e-15]),
        ],
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidInput(_) => 2,
        _ => 1,
    }
}

/// Execute a validated configuration, printing to stdout.
pub fn run(config: &RunConfig) -> i32 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run_to(config, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// [`run`] with an explicit output sink.
pub fn run_to(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    if let Some(t) = config.table {
        return run_table(t, config, out);
    }
    let spec = config.problem_spec()?;
    let report = spec.solve(config.n_cells, config.lambda, config.dt, config.t_end, &config.report_times)?;

    writeln!(
        out,
        "{}  alpha={} mu={} eta={} q={} N={} dt={} lambda={}",
        config.problem, config.alpha, config.mu, config.eta, config.q, config.n_cells, config.dt, config.lambda
    )?;
    match &report.errors {
        Some(errors) => {
            let mut best = Vec::new();
            if let Some(sc) = config.scan {
                for &(t, _) in errors {
                    if t == 0.0 {
                        best.push(None);
                        continue;
                    }
                    let s = scan_lambda(&spec, config.n_cells, config.dt, t, sc.lo, sc.hi, sc.step)?;
                    best.push(Some((s.best_lambda, s.best_error)));
                }
            }
            write_error_block(out, config.q, config.lambda, errors, &best, None)?;
        }
        None => {
            writeln!(out, "{:>8}  {:>12}  {:>12}", "t", "min U", "max U")?;
            for s in &report.snapshots {
                let lo = s.knot_values.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = s.knot_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                writeln!(out, "{:>8}  {:>12.5e}  {:>12.5e}", tidy(s.t), lo, hi)?;
            }
        }
    }

    if let Some(dir) = &config.output_path {
        write_profile(&report, &spec, dir)?;
        fs::write(dir.join("meta.txt"), meta_text(config, &report))?;
    }
    Ok(())
}

fn run_table(table: TablePreset, config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    for rows in preset_rows(table) {
        let spec = example1(rows.alpha, rows.eta, rows.q)?;
        let t_end = *rows.times.last().expect("preset times");
        let report = spec.solve(rows.n_cells, config.lambda, PRESET_DT, t_end, &rows.times)?;
        let errors = report.errors.expect("example1 has an exact solution");
        let mut best = Vec::new();
        if let Some(sc) = config.scan {
            for &t in &rows.times {
                let s = scan_lambda(&spec, rows.n_cells, PRESET_DT, t, sc.lo, sc.hi, sc.step)?;
                best.push(Some((s.best_lambda, s.best_error)));
            }
        }
        writeln!(
            out,
            "# alpha={} eta={} q={} mu=1 N={} dt={}",
            rows.alpha, rows.eta, rows.q, rows.n_cells, PRESET_DT
        )?;
        write_error_block(out, rows.q, config.lambda, &errors, &best, Some(&rows.reference))?;
        writeln!(out)?;
    }
    Ok(())
}

fn write_error_block(
    out: &mut dyn Write,
    q: u32,
    lambda: f64,
    errors: &[(f64, f64)],
    best: &[Option<(f64, f64)>],
    reference: Option<&[f64]>,
) -> Result<()> {
    let mut head = format!("{:>8}  {:>14}", "t", format!("L_inf(l={lambda})"));
    if reference.is_some() {
        let _ = write!(head, "  {:>14}", "published l=0");
    }
    if !best.is_empty() {
        let _ = write!(head, "  {:>14}  {:>14}", "best l", "L_inf(best)");
    }
    writeln!(out, "{head}")?;
    for (k, &(t, e)) in errors.iter().enumerate() {
        let mut line = format!("{:>8}  {:>14.5e}", tidy(t), e);
        if let Some(r) = reference {
            let _ = write!(line, "  {:>14.5e}", r[k]);
        }
        if let Some(Some((l, be))) = best.get(k) {
            let _ = write!(line, "  {:>14.6e}  {:>14.5e}", l, be);
        }
        writeln!(out, "{line}")?;
    }
    writeln!(out, "q,t,lambda,linf")?;
    for (k, &(t, e)) in errors.iter().enumerate() {
        writeln!(out, "{q},{},{lambda:e},{e:.16e}", tidy(t))?;
        if let Some(Some((l, be))) = best.get(k) {
            writeln!(out, "{q},{},{l:e},{be:.16e}", tidy(t))?;
        }
    }
    Ok(())
}

/// Snapshot times are `dt * step`; strip the representation noise.
fn tidy(t: f64) -> f64 {
    format!("{t:.12e}").parse().unwrap_or(t)
}

/// One `profile_t<t>.csv` per snapshot in `dir` (created if missing).
pub fn write_profile(report: &SolveReport<f64>, spec: &ProblemSpec<f64>, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mesh = spec.mesh(report.meta.n_cells)?;
    let knots = mesh.knots();
    for snap in &report.snapshots {
        let mut s = String::new();
        match &spec.exact {
            Some(u) => {
                s.push_str("x,u_numeric,u_exact,abs_error\n");
                for (x, v) in knots.iter().zip(&snap.knot_values) {
                    let ex = u(*x, snap.t);
                    let _ = writeln!(s, "{x:.16e},{v:.16e},{ex:.16e},{:.16e}", (v - ex).abs());
                }
            }
            None => {
                s.push_str("x,u_numeric\n");
                for (x, v) in knots.iter().zip(&snap.knot_values) {
                    let _ = writeln!(s, "{x:.16e},{v:.16e}");
                }
            }
        }
        fs::write(dir.join(format!("profile_t{}.csv", tidy(snap.t))), s)?;
    }
    Ok(())
}

fn meta_text(config: &RunConfig, report: &SolveReport<f64>) -> String {
    let mut s = String::from("# ecbs run metadata; valid as a --config file\n");
    s.push_str(&config.to_config_text());
    for a in &report.meta.assumptions {
        let _ = writeln!(s, "# assumption: {a}");
    }
    if config.mu == 1.0 {
        let _ = writeln!(s, "# mu = 1 is the default when unset");
    }
    s
}

/// Entry point for the binary; `argv` excludes the program name.
pub fn main_with(argv: &[String]) -> i32 {
    let args = match Args::try_parse_from(std::iter::once("ecbs".to_string()).chain(argv.iter().cloned())) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let text = match &args.config {
        None => None,
        Some(p) => match fs::read_to_string(p) {
            Ok(t) => Some(t),
            Err(e) => {
                eprintln!("error: configuration error: cannot read {}: {e}", p.display());
                return 2;
            }
        },
    };
    match resolve(&args, text.as_deref()) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
