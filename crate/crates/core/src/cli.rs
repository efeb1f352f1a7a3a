//! The `fockmel` command-line front end.
//!
//! Subcommands: `pint`, `matrices`, `solve`, `coalescence` and `selftest`.
//! Machine output is plain decimal strings; a grouped human-readable energy
//! summary goes to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::basis::SelectionRule;
use crate::coalescence::{scan_line, write_csv, CoalescenceSample, LineKind, Wavefunction};
use crate::eigen::{optimize_delta, BasisSpec, DeltaProblem, PivotPolicy, ScanPoint, SpectrumResult};
use crate::error::{FockError, Result};
use crate::integrals::{p_integral, PCache, PKey};
use crate::numeric::{check_precision, parse_real, round_trip_digits, to_decimal, to_short_decimal, BigReal};
use crate::selftest::{coalescence_suite, hydrogenic_suite, identity_suite, integral_suite, kinetic_suite, SuiteReport};

#[derive(Debug, Parser)]
#[command(name = "fockmel", version, about = "Hylleraas-log matrix elements, ground states and coalescence diagnostics")]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, env = "FOCKMEL_PRECISION", default_value_t = 256, global = true)]
    pub precision: u32,
    /// Significant decimal digits in the output.
    #[arg(long, default_value_t = 30, global = true)]
    pub digits: usize,
    /// Worker threads for parallel assembly (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format; each subcommand has its own default.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Output file (a directory for `matrices --format csv`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one basic integral P_{ι,ȷ}(ν,ℓ,μ).
    Pint(PintArgs),
    /// Assemble the overlap, potential and kinetic matrices.
    Matrices(MatricesArgs),
    /// Solve for the ground state at a fixed δ or with δ optimization.
    Solve(SolveArgs),
    /// Scan the Schrödinger residual along a coalescence line.
    Coalescence(CoalescenceArgs),
    /// Run an oracle suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct PintArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub iota: i32,
    #[arg(long, allow_hyphen_values = true)]
    pub logpow: i32,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: i32,
    #[arg(long, allow_hyphen_values = true)]
    pub ell: i32,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: i32,
}

#[derive(Debug, Clone, Args)]
pub struct BasisArgs {
    /// Nuclear charge.
    #[arg(long = "Z")]
    pub z: String,
    /// Size cutoff n + 2l + m + i ≤ Ω for individual terms.
    #[arg(long, default_value_t = 6)]
    pub omega: i32,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub n_min: i32,
    #[arg(long, default_value_t = 2)]
    pub j_max: i32,
    /// Prepend the sixteen composite functions.
    #[arg(long)]
    pub composites: bool,
    /// Use the single term e^{−s/2} instead of the enumerated individuals.
    #[arg(long)]
    pub single_term: bool,
}

impl BasisArgs {
    fn spec(&self) -> Result<BasisSpec> {
        make_spec(self.omega, self.n_min, self.j_max, self.composites, self.single_term)
    }
}

fn make_spec(omega: i32, n_min: i32, j_max: i32, composites: bool, single_term: bool) -> Result<BasisSpec> {
    let rule = SelectionRule { omega, n_min, j_max };
    rule.validate()?;
    Ok(BasisSpec { rule, composites, single_term })
}

/// A δ-scan range lo:hi:steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaScan {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl FromStr for DeltaScan {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<DeltaScan, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:steps, got {s:?}"));
        }
        let lo: f64 = parts[0].parse().map_err(|e| format!("bad lo: {e}"))?;
        let hi: f64 = parts[1].parse().map_err(|e| format!("bad hi: {e}"))?;
        let steps: usize = parts[2].parse().map_err(|e| format!("bad steps: {e}"))?;
        if !(lo > 0.0 && lo < hi) || steps < 3 {
            return Err(format!("need 0 < lo < hi and steps >= 3, got {s:?}"));
        }
        Ok(DeltaScan { lo, hi, steps })
    }
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct DeltaChoice {
    /// Fixed scale parameter δ.
    #[arg(long)]
    pub delta: Option<String>,
    /// Optimize δ: coarse scan lo:hi:steps, then golden-section refinement.
    #[arg(long)]
    pub delta_scan: Option<DeltaScan>,
}

#[derive(Debug, Args)]
pub struct MatricesArgs {
    #[command(flatten)]
    pub basis: BasisArgs,
    #[arg(long)]
    pub delta: String,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub basis: BasisArgs,
    #[command(flatten)]
    pub delta: DeltaChoice,
    /// Fail on a dependent overlap column instead of dropping it.
    #[arg(long)]
    pub strict_pivots: bool,
}

#[derive(Debug, Args)]
pub struct CoalescenceArgs {
    /// Coalescence line: en (electron-nucleus) or ee (electron-electron).
    #[arg(long, default_value = "en")]
    pub line: String,
    /// Solution file written by `solve` (JSON).
    #[arg(long, conflicts_with_all = ["z", "delta", "delta_scan"])]
    pub solution: Option<PathBuf>,
    #[arg(long = "Z")]
    pub z: Option<String>,
    #[arg(long, default_value_t = 6)]
    pub omega: i32,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub n_min: i32,
    #[arg(long, default_value_t = 2)]
    pub j_max: i32,
    #[arg(long)]
    pub composites: bool,
    #[arg(long)]
    pub single_term: bool,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub delta_scan: Option<DeltaScan>,
    #[arg(long, default_value_t = 0.05)]
    pub rmin: f64,
    #[arg(long, default_value_t = 2.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 20)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Integrals,
    Identities,
    Kinetic,
    Hydrogenic,
    Coalescence,
    All,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

/// A solved system as written by `solve` and read back by `coalescence`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SolveReport {
    #[serde(rename = "Z")]
    pub z: String,
    pub omega: i32,
    pub n_min: i32,
    pub j_max: i32,
    pub composites: bool,
    #[serde(default)]
    pub single_term: bool,
    pub precision: u32,
    pub energy: String,
    pub delta: String,
    pub residual_norm: String,
    pub min_pivot: String,
    pub dropped: Vec<usize>,
    pub jacobi_sweeps: usize,
    pub at_boundary: bool,
    pub basis_hash: String,
    pub coefficients: Vec<String>,
    pub scan: Vec<ScanPoint>,
}

impl SolveReport {
    pub fn new(spec: &BasisSpec, z: &BigReal, res: &SpectrumResult, scan: Vec<ScanPoint>, digits: usize) -> SolveReport {
        SolveReport {
            z: to_short_decimal(z, digits),
            omega: spec.rule.omega,
            n_min: spec.rule.n_min,
            j_max: spec.rule.j_max,
            composites: spec.composites,
            single_term: spec.single_term,
            precision: z.prec(),
            energy: to_decimal(&res.energy, digits),
            delta: to_decimal(&res.delta, round_trip_digits(res.delta.prec()).max(digits)),
            residual_norm: to_decimal(&res.residual_norm, 6),
            min_pivot: to_decimal(&res.min_pivot, 6),
            dropped: res.dropped.clone(),
            jacobi_sweeps: res.jacobi_sweeps,
            at_boundary: res.at_boundary,
            basis_hash: res.basis_hash.clone(),
            coefficients: res.coefficients.iter().map(|c| to_decimal(c, digits)).collect(),
            scan,
        }
    }

    /// Flat (field, value) records; coefficients as c0, c1, …
    pub fn to_records(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            ("Z".to_string(), self.z.clone()),
            ("omega".into(), self.omega.to_string()),
            ("n_min".into(), self.n_min.to_string()),
            ("j_max".into(), self.j_max.to_string()),
            ("composites".into(), self.composites.to_string()),
            ("single_term".into(), self.single_term.to_string()),
            ("precision".into(), self.precision.to_string()),
            ("energy".into(), self.energy.clone()),
            ("delta".into(), self.delta.clone()),
            ("residual_norm".into(), self.residual_norm.clone()),
            ("min_pivot".into(), self.min_pivot.clone()),
            ("jacobi_sweeps".into(), self.jacobi_sweeps.to_string()),
            ("at_boundary".into(), self.at_boundary.to_string()),
            ("basis_hash".into(), self.basis_hash.clone()),
        ];
        rows.extend(self.dropped.iter().map(|d| ("dropped".to_string(), d.to_string())));
        rows.extend(self.coefficients.iter().enumerate().map(|(i, c)| (format!("c{i}"), c.clone())));
        for p in &self.scan {
            rows.push((format!("scan:{}", p.delta), p.energy.clone()));
        }
        rows
    }

    /// Inverse of [`SolveReport::to_records`].
    pub fn from_records(rows: &[(String, String)]) -> Result<SolveReport> {
        let get = |k: &str| -> Result<String> {
            rows.iter()
                .find(|(f, _)| f == k)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| FockError::InvalidInput(format!("missing field {k}")))
        };
        let num = |k: &str| -> Result<i64> {
            get(k)?.parse().map_err(|e| FockError::InvalidInput(format!("field {k}: {e}")))
        };
        let flag = |k: &str| -> Result<bool> {
            get(k)?.parse().map_err(|e| FockError::InvalidInput(format!("field {k}: {e}")))
        };
        let mut scan = Vec::new();
        let mut coefficients = Vec::new();
        let mut dropped = Vec::new();
        for (f, v) in rows {
            if let Some(d) = f.strip_prefix("scan:") {
                let delta = d.parse().map_err(|e| FockError::InvalidInput(format!("scan delta {d}: {e}")))?;
                scan.push(ScanPoint { delta, energy: v.clone() });
            } else if f.starts_with('c') && f[1..].chars().all(|c| c.is_ascii_digit()) && f.len() > 1 {
                coefficients.push(v.clone());
            } else if f == "dropped" {
                dropped.push(v.parse().map_err(|e| FockError::InvalidInput(format!("dropped: {e}")))?);
            }
        }
        Ok(SolveReport {
            z: get("Z")?,
            omega: num("omega")? as i32,
            n_min: num("n_min")? as i32,
            j_max: num("j_max")? as i32,
            composites: flag("composites")?,
            single_term: flag("single_term").unwrap_or(false),
            precision: num("precision")? as u32,
            energy: get("energy")?,
            delta: get("delta")?,
            residual_norm: get("residual_norm")?,
            min_pivot: get("min_pivot")?,
            dropped,
            jacobi_sweeps: num("jacobi_sweeps")? as usize,
            at_boundary: flag("at_boundary")?,
            basis_hash: get("basis_hash")?,
            coefficients,
            scan,
        })
    }

    /// Rebuild Ψ at working precision `prec`, checking the basis hash.
    pub fn wavefunction(&self, prec: u32) -> Result<Wavefunction> {
        let z = parse_real(prec, &self.z)?;
        let delta = parse_real(prec, &self.delta)?;
        let energy = parse_real(prec, &self.energy)?;
        let spec = make_spec(self.omega, self.n_min, self.j_max, self.composites, self.single_term)?;
        let basis = spec.basis(&z, &delta)?;
        let coefficients = self.coefficients.iter().map(|c| parse_real(prec, c)).collect::<Result<Vec<_>>>()?;
        let psi = Wavefunction::new(&basis, &coefficients, &energy, &delta, &z)?;
        if psi.basis_hash != self.basis_hash {
            return Err(FockError::InvalidInput("solution file does not match the rebuilt basis (hash differs)".into()));
        }
        Ok(psi)
    }
}

/// Process exit status for an error.
pub fn exit_code(err: &FockError) -> i32 {
    match err {
        FockError::IndexSet(_) => 4,
        FockError::Convergence(_) | FockError::LinearDependence { .. } | FockError::Domain(_) | FockError::Boundary(_) => 3,
        FockError::InvalidInput(_) => 2,
        FockError::Io(_) | FockError::Json(_) | FockError::Csv(_) => 1,
    }
}

/// Group the digits after the decimal point in threes: −2.903 724 377 0…
pub fn group_digits(s: &str) -> String {
    let (head, exp) = match s.find('e') {
        Some(k) => s.split_at(k),
        None => (s, ""),
    };
    let Some(dot) = head.find('.') else { return s.to_string() };
    let (int, frac) = head.split_at(dot + 1);
    let groups: Vec<String> = frac.as_bytes().chunks(3).map(|c| String::from_utf8_lossy(c).into_owned()).collect();
    format!("{int}{}{exp}", groups.join(" "))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn records_csv(rows: &[(String, String)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "value"])?;
    for (k, v) in rows {
        w.write_record([k, v])?;
    }
    let bytes = w.into_inner().map_err(|e| FockError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Parse (field, value) records written by `solve --format csv`.
pub fn parse_records_csv(text: &str) -> Result<Vec<(String, String)>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push((rec.get(0).unwrap_or("").to_string(), rec.get(1).unwrap_or("").to_string()));
    }
    Ok(rows)
}

fn solve_system(spec: BasisSpec, z: &BigReal, delta: &DeltaChoice, policy: PivotPolicy) -> Result<(SpectrumResult, Vec<ScanPoint>)> {
    let cache = PCache::new(z.prec());
    let problem = DeltaProblem::new(spec, z, &cache, policy)?;
    match (&delta.delta, &delta.delta_scan) {
        (Some(d), None) => Ok((problem.ground_state(&parse_real(z.prec(), d)?)?, Vec::new())),
        (None, Some(scan)) => optimize_delta(&problem, scan.lo, scan.hi, scan.steps),
        _ => Err(FockError::InvalidInput("give exactly one of --delta and --delta-scan".into())),
    }
}

fn load_report(path: &Path) -> Result<SolveReport> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(&text)?)
    } else {
        SolveReport::from_records(&parse_records_csv(&text)?)
    }
}

fn samples_json(kind: LineKind, psi: &Wavefunction, samples: &[CoalescenceSample], digits: usize) -> Result<String> {
    #[derive(Serialize)]
    struct Row {
        #[serde(rename = "R")]
        r: String,
        wf_value: String,
        residual: String,
        log10_ratio: String,
        fit_error: String,
    }
    #[derive(Serialize)]
    struct Doc {
        kind: &'static str,
        #[serde(rename = "Z")]
        z: String,
        delta: String,
        basis_hash: String,
        residual_definition: &'static str,
        samples: Vec<Row>,
    }
    let doc = Doc {
        kind: kind.tag(),
        z: to_short_decimal(&psi.z, digits),
        delta: to_decimal(&psi.delta, digits),
        basis_hash: psi.basis_hash.clone(),
        residual_definition: "regular coefficient of a/eps + f + b*eps fitted at eps, eps/2, eps/4 with eps = 1e-6 R",
        samples: samples
            .iter()
            .map(|s| Row {
                r: to_decimal(&s.r, digits),
                wf_value: to_decimal(&s.wf_value, digits),
                residual: to_decimal(&s.residual, digits),
                log10_ratio: to_decimal(&s.log10_ratio, digits),
                fit_error: to_decimal(&s.fit_error, 6),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

fn run_selftest(suite: Suite, prec: u32) -> Vec<SuiteReport> {
    let all = suite == Suite::All;
    let mut out = Vec::new();
    if all || suite == Suite::Integrals {
        out.push(integral_suite(200, 7, prec, 1e-10));
    }
    if all || suite == Suite::Identities {
        out.push(identity_suite(prec, 1e-20));
    }
    if all || suite == Suite::Kinetic {
        out.push(kinetic_suite(8, 3, prec, 1e-8));
    }
    if all || suite == Suite::Hydrogenic {
        out.push(hydrogenic_suite(prec));
    }
    if all || suite == Suite::Coalescence {
        out.push(coalescence_suite(prec, 1e-8));
    }
    out
}

/// Execute a parsed command line.
pub fn execute(cli: &Cli) -> Result<()> {
    check_precision(cli.precision)?;
    let prec = cli.precision;
    let digits = cli.digits;
    match &cli.command {
        Command::Pint(a) => {
            let key = PKey::new(a.iota, a.logpow, a.nu, a.ell, a.mu)?;
            let v = p_integral(key, &PCache::new(prec))?;
            let text = match cli.format {
                None => format!("{}\n", to_short_decimal(&v, digits)),
                Some(Format::Json) => {
                    format!("{}\n", serde_json::json!({ "key": key.to_string(), "value": to_decimal(&v, digits) }))
                }
                Some(Format::Csv) => format!("key,value\n\"{key}\",{}\n", to_decimal(&v, digits)),
            };
            emit(&cli.out, &text)
        }
        Command::Matrices(a) => {
            let spec = a.basis.spec()?;
            let z = parse_real(prec, &a.basis.z)?;
            let delta = parse_real(prec, &a.delta)?;
            let basis = spec.basis(&z, &delta)?;
            let mats = crate::matrix::assemble(&basis, &z, &delta, &PCache::new(prec))?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => emit(&cli.out, &(mats.to_json(digits)? + "\n")),
                Format::Csv => {
                    let dir = cli.out.clone().ok_or_else(|| FockError::InvalidInput("--format csv needs --out DIR".into()))?;
                    std::fs::create_dir_all(&dir)?;
                    for p in mats.write_csv(&dir, "matrices", digits)? {
                        println!("{}", p.display());
                    }
                    Ok(())
                }
            }
        }
        Command::Solve(a) => {
            let spec = a.basis.spec()?;
            let z = parse_real(prec, &a.basis.z)?;
            let policy = if a.strict_pivots { PivotPolicy::Strict } else { PivotPolicy::default() };
            let (res, scan) = solve_system(spec, &z, &a.delta, policy)?;
            let report = SolveReport::new(&spec, &z, &res, scan, digits);
            eprintln!("E = {}  (delta = {})", group_digits(&to_decimal(&res.energy, digits)), to_short_decimal(&res.delta, 12));
            if res.at_boundary {
                eprintln!("warning: the optimal delta lies on the boundary of the scanned range");
            }
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Csv => records_csv(&report.to_records())?,
            };
            emit(&cli.out, &text)
        }
        Command::Coalescence(a) => {
            let kind: LineKind = a.line.parse()?;
            let psi = match &a.solution {
                Some(path) => load_report(path)?.wavefunction(prec)?,
                None => {
                    let z = a.z.as_ref().ok_or_else(|| FockError::InvalidInput("give --solution or --Z with --delta/--delta-scan".into()))?;
                    let z = parse_real(prec, z)?;
                    let spec = make_spec(a.omega, a.n_min, a.j_max, a.composites, a.single_term)?;
                    let choice = DeltaChoice { delta: a.delta.clone(), delta_scan: a.delta_scan };
                    let (res, _) = solve_system(spec, &z, &choice, PivotPolicy::default())?;
                    let basis = spec.basis(&z, &res.delta)?;
                    Wavefunction::new(&basis, &res.coefficients, &res.energy, &res.delta, &z)?
                }
            };
            let samples = scan_line(kind, &psi, a.rmin, a.rmax, a.points)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_csv(&mut buf, kind, &psi, &samples, digits)?;
                    emit(&cli.out, &String::from_utf8(buf).expect("csv output is UTF-8"))
                }
                Format::Json => emit(&cli.out, &samples_json(kind, &psi, &samples, digits)?),
            }
        }
        Command::Selftest(a) => {
            let reports = run_selftest(a.suite, prec);
            let text = match cli.format {
                Some(Format::Json) => serde_json::to_string_pretty(&reports)? + "\n",
                Some(Format::Csv) => {
                    let rows: Vec<(String, String)> = reports
                        .iter()
                        .flat_map(|r| r.checks.iter().map(move |c| (format!("{}:{}", r.name, c.label), format!("{:e}", c.rel_error))))
                        .collect();
                    records_csv(&rows)?
                }
                None => reports.iter().map(|r| r.summary() + "\n").collect(),
            };
            emit(&cli.out, &text)?;
            for r in &reports {
                for c in r.failures() {
                    eprintln!("FAIL {}: {} (error {:e}, tolerance {:e})", r.name, c.label, c.rel_error, c.tolerance);
                }
            }
            if reports.iter().all(|r| r.passed()) {
                Ok(())
            } else {
                Err(FockError::Convergence("self-test failures".into()))
            }
        }
    }
}

/// Parse arguments, run, and return the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("fockmel: cannot configure {n} threads: {e}");
            return 2;
        }
    }
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fockmel: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_line_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn delta_scan_parsing() {
        assert_eq!("2:6:17".parse::<DeltaScan>().unwrap(), DeltaScan { lo: 2.0, hi: 6.0, steps: 17 });
        assert!("6:2:17".parse::<DeltaScan>().is_err());
        assert!("2:6".parse::<DeltaScan>().is_err());
    }

    #[test]
    fn grouping() {
        assert_eq!(group_digits("-2.903724377023"), "-2.903 724 377 023");
        assert_eq!(group_digits("-5.2775e-1"), "-5.277 5e-1");
        assert_eq!(group_digits("7"), "7");
    }

    #[test]
    fn solve_report_round_trips_through_csv_and_basis_hash() {
        let prec = 128;
        let z = parse_real(prec, "2").unwrap();
        let spec = BasisSpec::new(SelectionRule::with_omega(1), true);
        let choice = DeltaChoice { delta: None, delta_scan: Some(DeltaScan { lo: 3.0, hi: 5.0, steps: 3 }) };
        let (res, scan) = solve_system(spec, &z, &choice, PivotPolicy::default()).unwrap();
        let report = SolveReport::new(&spec, &z, &res, scan, 20);
        let back = SolveReport::from_records(&parse_records_csv(&records_csv(&report.to_records()).unwrap()).unwrap()).unwrap();
        assert_eq!(back, report);
        let psi = back.wavefunction(prec).unwrap();
        assert_eq!(psi.basis_hash, res.basis_hash);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&FockError::IndexSet("x".into())), 4);
        assert_eq!(exit_code(&FockError::Convergence("x".into())), 3);
        let parse = Cli::try_parse_from(["fockmel", "pint", "--iota", "0"]).unwrap_err();
        assert_eq!(parse.exit_code(), 2);
        assert_eq!(main_with_args(["fockmel", "pint", "--iota", "-4", "--logpow", "1", "--nu", "0", "--ell", "0", "--mu", "0"]), 4);
    }
}
