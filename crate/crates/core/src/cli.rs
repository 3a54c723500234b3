//! The `permsym` command line.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ci::{missing_levels_experiment, run_ci, CiState, ComparisonReport};
use crate::error::{Error, Result};
use crate::levelsym::{decompose_level, level_characters, salc, ROUNDING_GUARD};
use crate::oscillator::{enumerate_levels, make_model, LevelDescriptor};
use crate::spin::{allowed_spatial_irreps, HalfInt};
use crate::symgroup::{character_table, CharacterTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Verify {
    Constructive,
}

#[derive(Parser, Debug)]
#[command(name = "permsym", version, about = "Permutation symmetry and missing levels of coupled oscillator models")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the artifact here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Character table of S_N.
    Table {
        #[arg(long)]
        n: usize,
    },
    /// Exact energy levels up to a total number of quanta.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        xi: f64,
        #[arg(long, default_value_t = 4)]
        max_quanta: usize,
    },
    /// Exact levels with their irrep content.
    Irreps {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        xi: f64,
        #[arg(long, default_value_t = 4)]
        max_quanta: usize,
    },
    /// Spatial irreps allowed by antisymmetry and their total spins.
    Allowed {
        #[arg(long)]
        n: usize,
        /// Also build the antisymmetrized space-spin functions explicitly.
        #[arg(long, value_enum)]
        verify: Option<Verify>,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        xi: f64,
    },
    /// Symmetry-adapted combinations of one degenerate level.
    Project {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        nsym: usize,
        #[arg(long)]
        irrep: String,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        xi: f64,
    },
    /// Full CI in the lowest M oscillator orbitals.
    Ci {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        xi: f64,
        #[arg(long)]
        orbitals: usize,
        #[arg(long, allow_hyphen_values = true)]
        ms: Option<HalfInt>,
    },
    /// Match CI states against the exact spectrum.
    Compare {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        xi: f64,
        #[arg(long)]
        orbitals: usize,
        #[arg(long)]
        max_quanta: usize,
        #[arg(long, allow_negative_numbers = true)]
        tol: f64,
        #[arg(long, allow_hyphen_values = true)]
        ms: Option<HalfInt>,
    },
}

/// Fully resolved invocation, echoed into every artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub n: usize,
    pub xi: Option<f64>,
    pub orbitals: Option<usize>,
    pub max_quanta: Option<usize>,
    pub ms: Option<HalfInt>,
    #[serde(with = "crate::serde_float::option")]
    pub tol: Option<f64>,
    pub nsym: Option<usize>,
    pub irrep: Option<String>,
    pub verify: Option<Verify>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    fn new(command: &str, n: usize, format: Format, output: Option<PathBuf>) -> Self {
        RunConfig {
            command: command.into(),
            n,
            xi: None,
            orbitals: None,
            max_quanta: None,
            ms: None,
            tol: None,
            nsym: None,
            irrep: None,
            verify: None,
            format,
            output,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(3..=4).contains(&self.n) {
            return Err(Error::Domain(format!("N must be 3 or 4, got {}", self.n)));
        }
        if let Some(xi) = self.xi {
            make_model(self.n, xi)?;
        }
        if let Some(tol) = self.tol {
            if tol.is_nan() || tol <= 0.0 {
                return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
            }
        }
        if self.orbitals == Some(0) {
            return Err(Error::Domain("at least one orbital is required".into()));
        }
        Ok(())
    }
}

/// One emitted file: the configuration plus the command's payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact<T> {
    pub config: RunConfig,
    pub result: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOutput {
    pub levels: Vec<LevelDescriptor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrrepsOutput {
    pub levels: Vec<LevelDescriptor>,
    pub max_rounding: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllowedRow {
    pub irrep: String,
    pub spins: Vec<HalfInt>,
    pub multiplets: Vec<String>,
    pub forbidden: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllowedOutput {
    pub rows: Vec<AllowedRow>,
    pub constructive_agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectOutput {
    pub irrep: String,
    pub copies: usize,
    /// Degenerate-mode quanta of each basis function.
    pub basis: Vec<Vec<usize>>,
    pub vectors: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CiOutput {
    pub dimension: usize,
    pub states: Vec<CiState>,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_usage() {
        EXIT_USAGE
    } else {
        EXIT_NUMERICAL
    }
}

/// Rounds every non-integer number to 9 significant digits.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(num) if num.is_f64() => {
            let x = num.as_f64().unwrap();
            let r: f64 = format!("{x:.8e}").parse().unwrap();
            serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

fn sig9(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.8e}").parse::<f64>().unwrap().to_string()
    } else {
        x.to_string()
    }
}

struct Emitted {
    json: Value,
    csv: String,
    code: i32,
}

fn emit<T: Serialize>(config: &RunConfig, result: &T, csv: String, code: i32) -> Emitted {
    let artifact = Artifact { config: config.clone(), result };
    let json = round_floats(serde_json::to_value(&artifact).expect("artifact serializes"));
    Emitted { json, csv, code }
}

fn table_csv(t: &CharacterTable) -> String {
    let mut s = String::from("irrep,dim");
    for c in &t.classes {
        write!(s, ",{}", c.alias).unwrap();
    }
    s.push('\n');
    for (g, row) in t.irreps.iter().zip(&t.chars) {
        write!(s, "{},{}", g.label, g.dim).unwrap();
        for x in row {
            write!(s, ",{x}").unwrap();
        }
        s.push('\n');
    }
    s
}

fn levels_csv(levels: &[LevelDescriptor]) -> String {
    let mut s = String::from("n_sym,n_last,energy,degeneracy,parity\n");
    for l in levels {
        writeln!(s, "{},{},{},{},{}", l.n_sym, l.n_last, sig9(l.energy), l.degeneracy, l.parity).unwrap();
    }
    s
}

fn dispatch(command: Command, format: Format, output: Option<PathBuf>) -> Result<Emitted> {
    match command {
        Command::Table { n } => {
            let config = RunConfig::new("table", n, format, output);
            config.validate()?;
            let t = character_table(n)?;
            Ok(emit(&config, &t, table_csv(&t), EXIT_OK))
        }
        Command::Spectrum { n, xi, max_quanta } => {
            let config = RunConfig {
                xi: Some(xi),
                max_quanta: Some(max_quanta),
                ..RunConfig::new("spectrum", n, format, output)
            };
            config.validate()?;
            let m = make_model(n, xi)?;
            let levels = enumerate_levels(&m, max_quanta);
            let csv = levels_csv(&levels);
            Ok(emit(&config, &SpectrumOutput { levels }, csv, EXIT_OK))
        }
        Command::Irreps { n, xi, max_quanta } => {
            let config =
                RunConfig { xi: Some(xi), max_quanta: Some(max_quanta), ..RunConfig::new("irreps", n, format, output) };
            config.validate()?;
            let m = make_model(n, xi)?;
            let t = character_table(n)?;
            let mut levels = Vec::new();
            let mut max_rounding: f64 = 0.0;
            for l in enumerate_levels(&m, max_quanta) {
                max_rounding = max_rounding.max(level_characters(&m, &l)?.max_rounding);
                levels.push(decompose_level(&m, &l, &t)?);
            }
            if max_rounding > ROUNDING_GUARD {
                return Err(Error::NumericalIntegrity(format!("trace rounding {max_rounding} exceeds guard")));
            }
            let mut csv = String::from("n_sym,n_last,energy,degeneracy,parity");
            for g in &t.irreps {
                write!(csv, ",{}", g.label).unwrap();
            }
            csv.push('\n');
            for l in &levels {
                write!(csv, "{},{},{},{},{}", l.n_sym, l.n_last, sig9(l.energy), l.degeneracy, l.parity).unwrap();
                for g in &t.irreps {
                    write!(csv, ",{}", l.irrep_mults.get(&g.label).copied().unwrap_or(0)).unwrap();
                }
                csv.push('\n');
            }
            Ok(emit(&config, &IrrepsOutput { levels, max_rounding }, csv, EXIT_OK))
        }
        Command::Allowed { n, verify, xi } => {
            let config = RunConfig { verify, xi: verify.map(|_| xi), ..RunConfig::new("allowed", n, format, output) };
            config.validate()?;
            let by_chars = allowed_spatial_irreps(n, None)?;
            let constructive_agrees = match verify {
                Some(Verify::Constructive) => {
                    // errors with Consistency when the two routes disagree
                    let both = allowed_spatial_irreps(n, Some(xi))?;
                    Some(both == by_chars)
                }
                None => None,
            };
            let rows: Vec<AllowedRow> = by_chars
                .entries
                .iter()
                .map(|e| AllowedRow {
                    irrep: e.irrep.label.clone(),
                    spins: e.spins.clone(),
                    multiplets: e.spins.iter().map(|s| s.multiplet_name().to_string()).collect(),
                    forbidden: e.spins.is_empty(),
                })
                .collect();
            let mut csv = String::from("irrep,spins,multiplets\n");
            for r in &rows {
                let spins: Vec<String> = r.spins.iter().map(ToString::to_string).collect();
                let label = if r.forbidden { "forbidden".to_string() } else { r.multiplets.join(" ") };
                writeln!(csv, "{},{},{}", r.irrep, spins.join(" "), label).unwrap();
            }
            Ok(emit(&config, &AllowedOutput { rows, constructive_agrees }, csv, EXIT_OK))
        }
        Command::Project { n, nsym, irrep, xi } => {
            let config = RunConfig {
                xi: Some(xi),
                nsym: Some(nsym),
                irrep: Some(irrep.clone()),
                ..RunConfig::new("project", n, format, output)
            };
            config.validate()?;
            let m = make_model(n, xi)?;
            let t = character_table(n)?;
            let g = t.irrep(&irrep)?.clone();
            let level = m.level(nsym, 0);
            let set = salc(&m, &level, &g, &t)?;
            let basis = m.level_patterns(nsym);
            let mut csv = String::from("vector");
            for p in &basis {
                let p: Vec<String> = p.iter().map(ToString::to_string).collect();
                write!(csv, ",psi{}", p.join("")).unwrap();
            }
            csv.push('\n');
            for (i, v) in set.vectors.iter().enumerate() {
                write!(csv, "{i}").unwrap();
                for x in v {
                    write!(csv, ",{}", sig9(*x)).unwrap();
                }
                csv.push('\n');
            }
            let out = ProjectOutput { irrep, copies: set.copies, basis, vectors: set.vectors };
            Ok(emit(&config, &out, csv, EXIT_OK))
        }
        Command::Ci { n, xi, orbitals, ms } => {
            let config =
                RunConfig { xi: Some(xi), orbitals: Some(orbitals), ms, ..RunConfig::new("ci", n, format, output) };
            config.validate()?;
            let m = make_model(n, xi)?;
            let res = run_ci(&m, orbitals, ms)?;
            let mut csv = String::from("energy,S,ms,parity,s_squared\n");
            for s in &res.states {
                writeln!(csv, "{},{},{},{},{}", sig9(s.energy), s.s, s.ms, s.parity, sig9(s.s_squared)).unwrap();
            }
            let out = CiOutput { dimension: res.basis.len(), states: res.states };
            Ok(emit(&config, &out, csv, EXIT_OK))
        }
        Command::Compare { n, xi, orbitals, max_quanta, tol, ms } => {
            let config = RunConfig {
                xi: Some(xi),
                orbitals: Some(orbitals),
                max_quanta: Some(max_quanta),
                tol: Some(tol),
                ms,
                ..RunConfig::new("compare", n, format, output)
            };
            config.validate()?;
            let report = missing_levels_experiment(n, xi, orbitals, max_quanta, tol, ms)?;
            let code = if report.verified() { EXIT_OK } else { EXIT_VERIFICATION };
            let csv = compare_csv(&report);
            Ok(emit(&config, &report, csv, code))
        }
    }
}

fn compare_csv(r: &ComparisonReport) -> String {
    let mut s = String::from("kind,ci_energy,exact_energy,n_sym,n_last,S,ms,parity\n");
    for m in &r.matched {
        let (a, b) = m.quanta_key;
        writeln!(s, "matched,{},{},{a},{b},{},{},{}", sig9(m.ci_energy), sig9(m.exact_energy), m.s, m.ms, m.parity)
            .unwrap();
    }
    for m in &r.missing {
        let (a, b) = m.quanta_key;
        writeln!(s, "missing,,{},{a},{b},,,", sig9(m.energy)).unwrap();
    }
    for m in &r.spurious {
        writeln!(s, "spurious,{},,,,{},{},{}", sig9(m.ci_energy), m.s, m.ms, m.parity).unwrap();
    }
    for m in &r.incomplete {
        let (a, b) = m.quanta_key;
        writeln!(s, "incomplete,,{},{a},{b},,,", sig9(m.energy)).unwrap();
    }
    s
}

/// Parses `args` (program name first), runs the command and writes the
/// artifact. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let format = cli.format;
    let output = cli.output.clone();
    let emitted = match dispatch(cli.command, format, output.clone()) {
        Ok(e) => e,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&emitted.json).expect("json renders");
            s.push('\n');
            s
        }
        Format::Csv => {
            let config = serde_json::to_string(&emitted.json["config"]).expect("json renders");
            format!("# config: {config}\n{}", emitted.csv)
        }
    };
    let written = match &output {
        Some(path) => std::fs::write(path, body),
        None => stdout.write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    if emitted.code == EXIT_VERIFICATION {
        let _ = writeln!(stderr, "missing-level verification failed");
    }
    emitted.code
}
