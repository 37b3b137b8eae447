//! Command-line front end: `spectrum`, `wavefunction`, `pekeris`, `validate`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{PhysicalContext, PotentialParams, QuantumNumbers, Symmetry};
use crate::oracle::{self, Centrifugal, OracleConfig};
use crate::pekeris::{contact_residuals, matched_coeffs, max_deviation, closed_form_coeffs, PekerisCoeffs};
use crate::spectra::{self, solve_bound_states, EnergyResidualSpec, SearchWindow, DEFAULT_GRID_POINTS};
use crate::validate::{self, ValidationConfig};
use crate::wavefun::{self, SpinorSolution};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "rmdirac", version, about = "Dirac-Rosen-Morse bound states and their finite-difference check")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bound-state energies for every (kappa, n)
    Spectrum,
    /// Normalized F and G samples of one state
    Wavefunction,
    /// Centrifugal approximation coefficients
    Pekeris,
    /// Full analytic-vs-oracle report
    Validate,
}

#[derive(Debug, Default, Args)]
struct Flags {
    /// key = value file; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    v1: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    v2: Option<f64>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long = "r-e", global = true)]
    r_e: Option<f64>,
    #[arg(long, global = true)]
    mc2: Option<f64>,
    #[arg(long, global = true)]
    hbarc: Option<f64>,
    /// C_s on the spin branch, C_ps on the pseudospin branch
    #[arg(long = "sym-const", global = true, allow_hyphen_values = true)]
    sym_const: Option<f64>,
    #[arg(long, global = true)]
    branch: Option<String>,
    /// comma list, ranges as a..b (inclusive)
    #[arg(long, global = true, allow_hyphen_values = true)]
    kappa: Option<String>,
    #[arg(long, global = true)]
    n: Option<String>,
    #[arg(long, global = true)]
    centrifugal: Option<String>,
    /// Confirm each analytic level with the oracle
    #[arg(long, global = true)]
    validate: bool,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    emin: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    emax: Option<f64>,
    #[arg(long = "grid-points", global = true)]
    grid_points: Option<usize>,
    #[arg(long = "r-min", global = true)]
    r_min: Option<f64>,
    #[arg(long = "r-max", global = true)]
    r_max: Option<f64>,
    #[arg(long = "r-points", global = true)]
    r_points: Option<usize>,
    #[arg(long = "fault-delta-scale", global = true, hide = true)]
    fault_delta_scale: Option<f64>,
}

/// Everything a command needs, validated before any computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub params: PotentialParams,
    pub context: PhysicalContext,
    pub kappas: Vec<i32>,
    pub ns: Vec<u32>,
    pub centrifugal: Centrifugal,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub grid_points: usize,
    pub oracle_points: usize,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub r_points: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub validate: bool,
    pub fault_delta_scale: f64,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for ConfigError {
    fn from(e: Error) -> Self {
        Self(e.to_string())
    }
}

const KEYS: [&str; 22] = [
    "v1",
    "v2",
    "alpha",
    "r_e",
    "mc2",
    "hbarc",
    "sym_const",
    "branch",
    "kappa",
    "n",
    "centrifugal",
    "emin",
    "emax",
    "grid_points",
    "oracle_points",
    "r_min",
    "r_max",
    "r_points",
    "format",
    "out",
    "validate",
    "fault_delta_scale",
];

/// Parses a flat `key = value` file. `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError(format!("line {}: expected key = value", i + 1)));
        };
        let key = k.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError(format!("unknown config key `{key}`")));
        }
        out.insert(key.to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| ConfigError(format!("bad value `{v}` for `{key}`")))
}

/// `"-1,-3..-2, 4"` style lists; ranges are inclusive and may run downwards.
pub fn parse_int_list(key: &str, v: &str) -> Result<Vec<i64>, ConfigError> {
    let mut out = Vec::new();
    for part in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (i64, i64) = (parse_num(key, a.trim())?, parse_num(key, b.trim())?);
            if a <= b {
                out.extend(a..=b);
            } else {
                out.extend((b..=a).rev());
            }
        } else {
            out.push(parse_num(key, part)?);
        }
    }
    if out.is_empty() {
        return Err(ConfigError(format!("empty list for `{key}`")));
    }
    Ok(out)
}

fn parse_bool(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(ConfigError(format!("bad value `{v}` for `{key}`"))),
    }
}

impl RunConfig {
    /// Defaults, then the file, then flags.
    fn build(flags: &Flags) -> Result<Self, ConfigError> {
        let mut kv = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        let mut set = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                kv.insert(k.to_string(), v);
            }
        };
        for (k, v) in [
            ("v1", flags.v1),
            ("v2", flags.v2),
            ("alpha", flags.alpha),
            ("r_e", flags.r_e),
            ("mc2", flags.mc2),
            ("hbarc", flags.hbarc),
            ("sym_const", flags.sym_const),
        ] {
            set(k, v.map(|v| v.to_string()));
        }
        set("branch", flags.branch.clone());
        set("kappa", flags.kappa.clone());
        set("n", flags.n.clone());
        set("centrifugal", flags.centrifugal.clone());
        set("emin", flags.emin.map(|v| v.to_string()));
        set("emax", flags.emax.map(|v| v.to_string()));
        set("grid_points", flags.grid_points.map(|v| v.to_string()));
        set("r_min", flags.r_min.map(|v| v.to_string()));
        set("r_max", flags.r_max.map(|v| v.to_string()));
        set("r_points", flags.r_points.map(|v| v.to_string()));
        set("fault_delta_scale", flags.fault_delta_scale.map(|v| v.to_string()));
        set("out", flags.out.as_ref().map(|p| p.display().to_string()));
        set(
            "format",
            flags.format.map(|f| match f {
                Format::Csv => "csv".to_string(),
                Format::Json => "json".to_string(),
            }),
        );
        if flags.validate {
            kv.insert("validate".into(), "true".into());
        }
        Self::from_map(&kv)
    }

    pub fn from_map(kv: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let num = |k: &str, d: f64| -> Result<f64, ConfigError> { kv.get(k).map_or(Ok(d), |v| parse_num(k, v)) };
        let opt = |k: &str| -> Result<Option<f64>, ConfigError> { kv.get(k).map(|v| parse_num(k, v)).transpose() };
        let count = |k: &str, d: usize| -> Result<usize, ConfigError> { kv.get(k).map_or(Ok(d), |v| parse_num(k, v)) };
        let alpha = num("alpha", 0.5)?;
        let r_e = opt("r_e")?.unwrap_or(1.0 / alpha);
        let params = PotentialParams::new(num("v1", 3.0)?, num("v2", 1.0)?, alpha, r_e)?;
        let symmetry: Symmetry = match kv.get("branch") {
            Some(v) => v.parse().map_err(|_| ConfigError(format!("bad value `{v}` for `branch`")))?,
            None => Symmetry::Spin,
        };
        let context = PhysicalContext::new(num("mc2", 5.0)?, num("hbarc", 1.0)?, symmetry, num("sym_const", 0.0)?)?;
        let kappas = match kv.get("kappa") {
            Some(v) => parse_int_list("kappa", v)?
                .into_iter()
                .map(|k| match i32::try_from(k) {
                    Ok(0) => Err(ConfigError("kappa = 0 is not allowed".into())),
                    Ok(k) => Ok(k),
                    Err(_) => Err(ConfigError(format!("kappa {k} out of range"))),
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![if symmetry == Symmetry::Spin { -1 } else { 1 }],
        };
        let ns = match kv.get("n") {
            Some(v) => parse_int_list("n", v)?
                .into_iter()
                .map(|n| u32::try_from(n).map_err(|_| ConfigError(format!("n = {n} must be >= 0"))))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![0],
        };
        let centrifugal = match kv.get("centrifugal") {
            Some(v) => v.parse().map_err(|_| ConfigError(format!("bad value `{v}` for `centrifugal`")))?,
            None => Centrifugal::Pekeris,
        };
        let format = match kv.get("format").map(String::as_str) {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(v) => return Err(ConfigError(format!("bad value `{v}` for `format`"))),
        };
        let cfg = Self {
            params,
            context,
            kappas,
            ns,
            centrifugal,
            e_min: opt("emin")?,
            e_max: opt("emax")?,
            grid_points: count("grid_points", DEFAULT_GRID_POINTS)?,
            oracle_points: count("oracle_points", 4000)?,
            r_min: opt("r_min")?,
            r_max: opt("r_max")?,
            r_points: count("r_points", 20000)?,
            format,
            out: kv.get("out").map(PathBuf::from),
            validate: kv.get("validate").map_or(Ok(false), |v| parse_bool("validate", v))?,
            fault_delta_scale: num("fault_delta_scale", 1.0)?,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), ConfigError> {
        if let (Some(a), Some(b)) = (self.e_min, self.e_max) {
            SearchWindow::new(a, b, self.grid_points)?;
        }
        if self.grid_points < 100 {
            return Err(ConfigError("grid_points must be >= 100".into()));
        }
        if self.oracle_points < 200 {
            return Err(ConfigError("oracle_points must be >= 200".into()));
        }
        if self.r_points < 2 {
            return Err(ConfigError("r_points must be >= 2".into()));
        }
        if let Some(r) = self.r_min {
            if !(r > 0.0) {
                return Err(ConfigError("r_min must be > 0".into()));
            }
        }
        if let (Some(a), Some(b)) = (self.r_min, self.r_max) {
            if !(a < b) {
                return Err(ConfigError("r_min must be < r_max".into()));
            }
        }
        if !(self.fault_delta_scale > 0.0) {
            return Err(ConfigError("fault_delta_scale must be > 0".into()));
        }
        Ok(())
    }

    fn coeffs(&self) -> Result<PekerisCoeffs, Error> {
        matched_coeffs(self.params.alpha, self.params.r_e)
    }

    fn spec(&self, n: u32, kappa: i32) -> Result<EnergyResidualSpec, Error> {
        Ok(EnergyResidualSpec::general(
            self.params,
            self.context,
            QuantumNumbers::new(n, kappa)?,
            self.coeffs()?,
        ))
    }

    fn window(&self, spec: &EnergyResidualSpec) -> Result<SearchWindow, Error> {
        let d = SearchWindow::default_for(spec)?;
        SearchWindow::new(self.e_min.unwrap_or(d.e_min), self.e_max.unwrap_or(d.e_max), self.grid_points)
    }
}

/// A rectangular table rendered as CSV or JSON with the same values.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

/// 17 significant digits, scientific.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(v) => v.to_string(),
                    Cell::Float(v) => fmt_float(*v),
                    Cell::Bool(v) => v.to_string(),
                    Cell::Text(t) if t.contains([',', '"', '\n']) => format!("\"{}\"", t.replace('"', "\"\"")),
                    Cell::Text(t) => t.clone(),
                })
                .collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| {
                        let v = match c {
                            Cell::Int(v) => serde_json::json!(v),
                            Cell::Float(v) if v.is_finite() => serde_json::json!(v),
                            Cell::Float(_) => serde_json::Value::Null,
                            Cell::Bool(v) => serde_json::json!(v),
                            Cell::Text(t) => serde_json::json!(t),
                        };
                        (k.to_string(), v)
                    })
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).unwrap_or_default();
        s.push('\n');
        s
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

#[derive(Debug)]
enum Failure {
    Config(String),
    NotFound(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::Config(e.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: u32,
    pub kappa: i32,
    pub l: u32,
    pub branch: Symmetry,
    pub energy: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub residual: f64,
    pub oracle_energy: Option<f64>,
    pub confirmed: Option<bool>,
}

pub const CONFIRM_TOL: f64 = 1e-6;

/// Rows ordered by `(kappa, n, E)` whatever order the workers finish in.
pub fn spectrum_rows(cfg: &RunConfig) -> Result<Vec<SpectrumRow>, Error> {
    let jobs: Vec<(i32, u32)> = cfg.kappas.iter().flat_map(|&k| cfg.ns.iter().map(move |&n| (k, n))).collect();
    let per_job: Vec<Vec<SpectrumRow>> = jobs
        .par_iter()
        .map(|&(kappa, n)| -> Result<Vec<SpectrumRow>, Error> {
            let spec = cfg.spec(n, kappa)?;
            let states = solve_bound_states(&spec, &cfg.window(&spec)?)?;
            let oracle_e = if cfg.validate && !states.is_empty() {
                let ocfg = OracleConfig {
                    points: cfg.oracle_points,
                    ..OracleConfig::default()
                };
                oracle::self_consistent_energy(n, &cfg.params, &cfg.context, &spec.qn, cfg.centrifugal, &spec.coeffs, &ocfg)?
                    .map(|r| r.energy)
            } else {
                None
            };
            states
                .iter()
                .map(|s| {
                    let confirmed = cfg
                        .validate
                        .then(|| oracle_e.is_some_and(|eo| (s.energy - eo).abs() <= CONFIRM_TOL * eo.abs()));
                    Ok(SpectrumRow {
                        n,
                        kappa,
                        l: match cfg.context.symmetry {
                            Symmetry::Spin => spec.qn.l(),
                            Symmetry::Pseudospin => spec.qn.l_tilde(),
                        },
                        branch: cfg.context.symmetry,
                        energy: s.energy,
                        epsilon: s.epsilon,
                        delta: s.delta,
                        residual: spectra::residual(s.energy, &spec)?,
                        oracle_energy: if cfg.validate { oracle_e } else { None },
                        confirmed,
                    })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let mut rows: Vec<SpectrumRow> = per_job.into_iter().flatten().collect();
    rows.sort_by(|a, b| (a.kappa, a.n).cmp(&(b.kappa, b.n)).then(a.energy.total_cmp(&b.energy)));
    Ok(rows)
}

fn spectrum_table(cfg: &RunConfig, rows: &[SpectrumRow]) -> Table {
    let l_name = match cfg.context.symmetry {
        Symmetry::Spin => "l",
        Symmetry::Pseudospin => "l_tilde",
    };
    let mut columns = vec!["n", "kappa", l_name, "branch", "energy", "epsilon", "delta", "residual"];
    if cfg.validate {
        columns.extend(["oracle_energy", "confirmed"]);
    }
    let rows = rows
        .iter()
        .map(|r| {
            let mut row = vec![
                Cell::Int(r.n as i64),
                Cell::Int(r.kappa as i64),
                Cell::Int(r.l as i64),
                Cell::Text(r.branch.as_str().to_string()),
                Cell::Float(r.energy),
                Cell::Float(r.epsilon),
                Cell::Float(r.delta),
                Cell::Float(r.residual),
            ];
            if cfg.validate {
                row.push(Cell::Float(r.oracle_energy.unwrap_or(f64::NAN)));
                row.push(Cell::Bool(r.confirmed.unwrap_or(false)));
            }
            row
        })
        .collect();
    Table { columns, rows }
}

fn single<T: Copy + std::fmt::Display>(name: &str, v: &[T]) -> Result<T, Failure> {
    match v {
        [x] => Ok(*x),
        _ => Err(Failure::Config(format!("wavefunction needs exactly one `{name}`"))),
    }
}

fn wavefunction_table(cfg: &RunConfig) -> Result<Table, Failure> {
    let (n, kappa) = (single("n", &cfg.ns)?, single("kappa", &cfg.kappas)?);
    let spec = cfg.spec(n, kappa)?;
    let states = solve_bound_states(&spec, &cfg.window(&spec)?)?;
    let Some(state) = states.first() else {
        return Err(Failure::NotFound(format!(
            "no {} bound state with n = {n}, kappa = {kappa} in the window",
            cfg.context.symmetry.as_str()
        )));
    };
    let sol = SpinorSolution::new(*state, cfg.params, cfg.context, spec.coeffs)?;
    let r_max = cfg.r_max.unwrap_or_else(|| wavefun::r_cut(&sol));
    let r_min = cfg.r_min.unwrap_or(1e-6 / cfg.params.alpha);
    if !(r_min < r_max) {
        return Err(Failure::Config("r_min must be < r_max".into()));
    }
    let m = cfg.r_points;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let r = r_min + (r_max - r_min) * i as f64 / (m - 1) as f64;
        let (f, g) = sol.components(r)?;
        rows.push(vec![Cell::Float(r), Cell::Float(f), Cell::Float(g)]);
    }
    Ok(Table {
        columns: vec!["r", "F", "G"],
        rows,
    })
}

fn pekeris_table(cfg: &RunConfig) -> Result<Table, Failure> {
    let (alpha, r_e) = (cfg.params.alpha, cfg.params.r_e);
    let mut rows = Vec::new();
    for (name, c) in [("closed_form", closed_form_coeffs(alpha, r_e)), ("contact_matched", matched_coeffs(alpha, r_e))] {
        let c = c?;
        let res = contact_residuals(alpha, r_e, &c);
        rows.push(vec![
            Cell::Text(name.to_string()),
            Cell::Float(alpha * r_e),
            Cell::Float(c.d0),
            Cell::Float(c.d1),
            Cell::Float(c.d2),
            Cell::Float(res[0]),
            Cell::Float(res[1]),
            Cell::Float(res[2]),
            Cell::Float(max_deviation(alpha, r_e, &c, 0.5 * r_e, 2.0 * r_e, 2001)),
        ]);
    }
    Ok(Table {
        columns: vec![
            "source",
            "alpha_re",
            "d0",
            "d1",
            "d2",
            "residual_value",
            "residual_slope",
            "residual_curvature",
            "max_deviation",
        ],
        rows,
    })
}

fn validation_config(cfg: &RunConfig) -> ValidationConfig {
    ValidationConfig {
        params: cfg.params,
        context: cfg.context,
        oracle_points: cfg.oracle_points,
        delta_scale: cfg.fault_delta_scale,
        ..ValidationConfig::default()
    }
}

fn validate_table(report: &validate::ValidationReport) -> Table {
    let mut rows: Vec<Vec<Cell>> = report
        .criteria
        .iter()
        .map(|c| {
            vec![
                Cell::Text(c.id.to_string()),
                Cell::Text(c.name.clone()),
                Cell::Text(if c.passed { "pass" } else { "fail" }.to_string()),
                Cell::Float(c.measured),
                Cell::Text(c.detail.clone()),
            ]
        })
        .collect();
    for info in &report.informational {
        rows.push(vec![
            Cell::Text("info".into()),
            Cell::Text("Pekeris formula vs contact matching".into()),
            Cell::Text("info".into()),
            Cell::Float(f64::NAN),
            Cell::Text(info.clone()),
        ]);
    }
    Table {
        columns: vec!["criterion", "name", "status", "measured", "detail"],
        rows,
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<i32, Failure> {
    match cmd {
        Command::Spectrum => {
            let rows = spectrum_rows(cfg)?;
            emit(&spectrum_table(cfg, &rows).render(cfg.format), cfg.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Wavefunction => {
            emit(&wavefunction_table(cfg)?.render(cfg.format), cfg.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Pekeris => {
            emit(&pekeris_table(cfg)?.render(cfg.format), cfg.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Validate => {
            let report = validate::run_all(&validation_config(cfg));
            for c in &report.criteria {
                eprintln!("{c}");
            }
            emit(&validate_table(&report).render(cfg.format), cfg.out.as_deref())?;
            Ok(if report.all_passed() { EXIT_OK } else { EXIT_VALIDATION })
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let cfg = match RunConfig::build(&cli.flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_CONFIG;
        }
    };
    match execute(&cli.command, &cfg) {
        Ok(code) => code,
        Err(Failure::Config(m)) => {
            eprintln!("config error: {m}");
            EXIT_CONFIG
        }
        Err(Failure::NotFound(m)) => {
            eprintln!("state not found: {m}");
            EXIT_NOT_FOUND
        }
        Err(Failure::Io(m)) => {
            eprintln!("{m}");
            EXIT_CONFIG
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_parsing() {
        let kv = parse_config_text("# sample\nv1 = 3\n\nalpha=0.5 # trailing\n").unwrap();
        assert_eq!(kv["v1"], "3");
        assert_eq!(kv["alpha"], "0.5");
        let e = parse_config_text("v1 = 3\nbogus = 1\n").unwrap_err();
        assert!(e.0.contains("bogus"));
        assert!(parse_config_text("just words").is_err());
    }

    #[test]
    fn int_lists() {
        assert_eq!(parse_int_list("k", "-1..-3").unwrap(), vec![-1, -2, -3]);
        assert_eq!(parse_int_list("k", "0..2, 5").unwrap(), vec![0, 1, 2, 5]);
        assert!(parse_int_list("k", "").is_err());
        assert!(parse_int_list("k", "a").is_err());
    }

    #[test]
    fn defaults_and_rejections() {
        let cfg = RunConfig::from_map(&BTreeMap::new()).unwrap();
        assert_eq!(cfg.params.r_e, 2.0);
        assert_eq!(cfg.kappas, vec![-1]);
        let mut kv = BTreeMap::new();
        kv.insert("kappa".to_string(), "0".to_string());
        assert!(RunConfig::from_map(&kv).is_err());
        kv.insert("kappa".to_string(), "-1".to_string());
        kv.insert("alpha".to_string(), "-2".to_string());
        assert!(RunConfig::from_map(&kv).is_err());
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, -3.178800491266, 1e-300, 6.02214076e23] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            assert_eq!(s.split('e').next().unwrap().trim_start_matches('-').len(), 18);
        }
    }

    #[test]
    fn csv_quotes_text_with_commas() {
        let t = Table {
            columns: vec!["a", "b"],
            rows: vec![vec![Cell::Text("x,y".into()), Cell::Int(2)]],
        };
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",2\n");
    }
}
