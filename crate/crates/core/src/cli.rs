//! Command-line front end: system files, reports, and the benchmark driver.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decompose::analyze;
use crate::error::{Error, Result};
use crate::families::{embedded_system, random_injections, shifted_injections, unit_injections};
use crate::geometry::{mixed_volume, mv_zero_witness};
use crate::random::Seed;
use crate::solver::{
    blackbox_with_stats, decomposable_start_system, random_system, solve_decomposable,
    solve_general, SolveReport, SolverSettings,
};
use crate::supports::{Point, SparseSystem, Support, SupportSystem};
use crate::torus::TorusPoint;

/// One polynomial of a system file. Coefficients are `[re, im]` pairs
/// aligned with `support`; they may be omitted for support-only files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFile {
    pub support: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub n: usize,
    pub polynomials: Vec<PolynomialFile>,
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        file.validate()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        if self.polynomials.len() != self.n {
            return Err(Error::Parse(format!(
                "field polynomials: expected {} entries, found {}",
                self.n,
                self.polynomials.len()
            )));
        }
        for (i, p) in self.polynomials.iter().enumerate() {
            if p.support.is_empty() {
                return Err(Error::Parse(format!("polynomials[{i}].support is empty")));
            }
            for (k, a) in p.support.iter().enumerate() {
                if a.len() != self.n {
                    return Err(Error::Parse(format!(
                        "polynomials[{i}].support[{k}] has {} entries, expected {}",
                        a.len(),
                        self.n
                    )));
                }
            }
            let mut sorted = p.support.clone();
            sorted.sort();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::Parse(format!(
                    "polynomials[{i}].support repeats exponent {:?}",
                    w[0]
                )));
            }
            if let Some(c) = &p.coefficients {
                if c.len() != p.support.len() {
                    return Err(Error::Parse(format!(
                        "polynomials[{i}].coefficients has {} entries for {} exponents",
                        c.len(),
                        p.support.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn has_coefficients(&self) -> bool {
        self.polynomials.iter().all(|p| p.coefficients.is_some())
    }

    pub fn supports(&self) -> Result<SupportSystem> {
        let supports = self
            .polynomials
            .iter()
            .map(|p| Support::new(self.n, p.support.clone()))
            .collect::<Result<Vec<_>>>()?;
        SupportSystem::new(supports)
    }

    pub fn system(&self) -> Result<SparseSystem> {
        if !self.has_coefficients() {
            return Err(Error::InvalidSystem("coefficients required".into()));
        }
        let polys = self
            .polynomials
            .iter()
            .map(|p| {
                p.support
                    .iter()
                    .cloned()
                    .zip(p.coefficients.as_ref().expect("checked above"))
                    .map(|(a, c)| (a, Complex64::new(c[0], c[1])))
                    .collect()
            })
            .collect();
        SparseSystem::from_terms(self.n, polys)
    }

    pub fn from_supports(s: &SupportSystem) -> Self {
        SystemFile {
            n: s.n(),
            polynomials: s
                .supports()
                .iter()
                .map(|sup| PolynomialFile {
                    support: sup.points().to_vec(),
                    coefficients: None,
                })
                .collect(),
        }
    }

    pub fn from_system(f: &SparseSystem) -> Self {
        SystemFile {
            n: f.n(),
            polynomials: (0..f.n())
                .map(|i| {
                    let (support, coefficients) =
                        f.terms(i).map(|(a, c)| (a.clone(), [c.re, c.im])).unzip();
                    PolynomialFile {
                        support,
                        coefficients: Some(coefficients),
                    }
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system files serialize")
    }
}

fn point_pairs(p: &TorusPoint) -> Vec<[f64; 2]> {
    p.0.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    solutions: Vec<Vec<[f64; 2]>>,
    residuals: &'a [f64],
    mv: u64,
    paths_tracked: u64,
    retry_paths: u64,
    blackbox_calls: usize,
    seed: u64,
    warnings: &'a [String],
    tree: &'a crate::decompose::DecompositionTree,
}

impl<'a> SolveOutput<'a> {
    fn new(report: &'a SolveReport, mv: u64) -> Self {
        SolveOutput {
            solutions: report.solutions.points.iter().map(point_pairs).collect(),
            residuals: &report.solutions.residuals,
            mv,
            paths_tracked: report.paths_tracked,
            retry_paths: report.retry_paths,
            blackbox_calls: report.blackbox_calls,
            seed: report.seed,
            warnings: &report.warnings,
            tree: &report.tree,
        }
    }
}

#[derive(Serialize)]
struct StartOutput {
    system: SystemFile,
    solutions: Vec<Vec<[f64; 2]>>,
    mv: u64,
}

#[derive(Parser, Debug)]
#[command(
    name = "decomp",
    version,
    about = "Solve decomposable sparse polynomial systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct RunOptions {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative residual required of every solution.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[arg(long)]
    pub json: bool,
}

impl RunOptions {
    fn settings(&self) -> SolverSettings {
        let mut s = SolverSettings::default();
        s.tracker.success_residual = self.tolerance;
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Injections by the first four unit vectors.
    EBasis,
    /// Injections by consecutive differences of unit vectors.
    Shifted,
    /// Random injections with entries in [-2, 2].
    Random,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the decomposition tree predicted from the supports.
    Analyze {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Mixed volume of the supports.
    Mv { input: PathBuf },
    /// Solve a system with coefficients.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        options: RunOptions,
    },
    /// Random start system on the vertex supports, with its solutions.
    Start {
        input: PathBuf,
        #[command(flatten)]
        options: RunOptions,
    },
    /// Compare the decomposition solver with the direct blackbox on a family.
    Bench {
        #[arg(long, value_enum, default_value_t = Family::EBasis)]
        family: Family,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the direct blackbox solve.
        #[arg(long)]
        no_blackbox: bool,
        /// CSV destination (default: stdout).
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Structural,
    Partial,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Structural => 1,
            Status::Partial => 2,
        }
    }
}

pub fn cmd_analyze(file: &SystemFile, json: bool) -> Result<String> {
    let supports = file.supports()?;
    let tree = analyze(&supports)?;
    if json {
        return Ok(serde_json::to_string_pretty(&tree).expect("trees serialize"));
    }
    Ok(format!(
        "{tree}total MV {}, predicted paths {}",
        tree.mv,
        tree.total_paths()
    ))
}

pub fn cmd_mv(file: &SystemFile) -> Result<u64> {
    Ok(mixed_volume(&file.supports()?))
}

/// Decomposition first; if the system turns out not to be generic for its
/// supports, a homotopy from a random start system takes over.
pub fn cmd_solve(file: &SystemFile, options: &RunOptions) -> Result<(String, Status)> {
    let f = file.system()?;
    if let Some(witness) = mv_zero_witness(f.supports()) {
        return Err(Error::ZeroMixedVolume { witness });
    }
    let settings = options.settings();
    let seed = Seed(options.seed);
    let report = match solve_decomposable(&f, seed, &settings) {
        Ok(r) => r,
        Err(Error::CountMismatch { .. } | Error::DegenerateFiber { .. }) => {
            let mut r = solve_general(&f, seed, &settings)?;
            r.warnings.insert(
                0,
                "decomposition lost solutions; used a start-system homotopy".into(),
            );
            r
        }
        Err(e) => return Err(e),
    };
    let mv = report.tree.mv;
    let status = if report.solutions.len() as u64 == mv {
        Status::Success
    } else {
        Status::Partial
    };
    let text = if options.json {
        serde_json::to_string_pretty(&SolveOutput::new(&report, mv)).expect("reports serialize")
    } else {
        let mut out = format!(
            "{} of {} solutions, {} paths, seed {}\n",
            report.solutions.len(),
            mv,
            report.paths_tracked,
            report.seed
        );
        for (p, r) in report
            .solutions
            .points
            .iter()
            .zip(&report.solutions.residuals)
        {
            let coords: Vec<String> =
                p.0.iter()
                    .map(|z| format!("{:+.12e}{:+.12e}i", z.re, z.im))
                    .collect();
            out.push_str(&format!("{}  residual {r:.1e}\n", coords.join("  ")));
        }
        for w in &report.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    };
    Ok((text, status))
}

pub fn cmd_start(file: &SystemFile, options: &RunOptions) -> Result<String> {
    let supports = file.supports()?;
    if let Some(witness) = mv_zero_witness(&supports) {
        return Err(Error::ZeroMixedVolume { witness });
    }
    let (g, report) =
        decomposable_start_system(&supports, Seed(options.seed), &options.settings())?;
    let out = StartOutput {
        system: SystemFile::from_system(&g),
        solutions: report.solutions.points.iter().map(point_pairs).collect(),
        mv: report.tree.mv,
    };
    Ok(serde_json::to_string_pretty(&out).expect("start systems serialize"))
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub instance_id: usize,
    pub mv: u64,
    pub paths_dec: u64,
    pub paths_bb: u64,
    pub time_dec_ms: f64,
    pub time_bb_ms: f64,
    pub status: String,
}

pub fn bench_rows(family: Family, count: usize, seed: Seed, blackbox: bool) -> Vec<BenchRow> {
    let settings = SolverSettings::default();
    (0..count)
        .map(|id| {
            let instance = seed.child(id as u64);
            let (i, j) = match family {
                Family::EBasis => unit_injections(),
                Family::Shifted => shifted_injections(),
                Family::Random => random_injections(instance.child(0)),
            };
            let supports = embedded_system(&i, &j);
            let f = random_system(&supports, instance.child(1));
            let t = Instant::now();
            let dec = solve_decomposable(&f, instance.child(2), &settings);
            let time_dec_ms = millis(t);
            let (mv, paths_dec, mut status) = match &dec {
                Ok(r) => (r.tree.mv, r.paths_tracked, "ok".to_string()),
                Err(e) => (0, 0, format!("decomposition failed: {e}")),
            };
            let (mut paths_bb, mut time_bb_ms) = (0, 0.0);
            if blackbox {
                let t = Instant::now();
                match blackbox_with_stats(&f, instance.child(3), &settings) {
                    Ok((_, tree)) => {
                        paths_bb = tree.ledger.total_degree_paths + tree.ledger.retry_paths;
                        time_bb_ms = millis(t);
                    }
                    Err(e) if status == "ok" => status = format!("blackbox failed: {e}"),
                    Err(_) => {}
                }
            }
            BenchRow {
                instance_id: id,
                mv,
                paths_dec,
                paths_bb,
                time_dec_ms,
                time_bb_ms,
                status,
            }
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "instance_id",
            "mv",
            "paths_dec",
            "paths_bb",
            "time_dec_ms",
            "time_bb_ms",
            "status",
        ])
        .map_err(|e| Error::Parse(e.to_string()))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn quartiles(mut v: Vec<f64>) -> [f64; 3] {
    v.sort_by(|a, b| a.total_cmp(b));
    let at = |q: f64| {
        let pos = q * (v.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
    };
    [at(0.25), at(0.5), at(0.75)]
}

/// Quartiles of both timings per mixed volume, successful rows only.
pub fn bench_summary(rows: &[BenchRow]) -> String {
    let mut mvs: Vec<u64> = rows
        .iter()
        .filter(|r| r.status == "ok")
        .map(|r| r.mv)
        .collect();
    mvs.sort_unstable();
    mvs.dedup();
    let mut out = String::from("mv  count  dec_ms q1/q2/q3  bb_ms q1/q2/q3\n");
    for mv in mvs {
        let group: Vec<&BenchRow> = rows
            .iter()
            .filter(|r| r.status == "ok" && r.mv == mv)
            .collect();
        let d = quartiles(group.iter().map(|r| r.time_dec_ms).collect());
        let b = quartiles(group.iter().map(|r| r.time_bb_ms).collect());
        out.push_str(&format!(
            "{mv}  {}  {:.1}/{:.1}/{:.1}  {:.1}/{:.1}/{:.1}\n",
            group.len(),
            d[0],
            d[1],
            d[2],
            b[0],
            b[1],
            b[2]
        ));
    }
    let failed = rows.iter().filter(|r| r.status != "ok").count();
    if failed > 0 {
        out.push_str(&format!("{failed} failed instances excluded\n"));
    }
    out
}

/// Prints to stdout, treating a closed pipe as a normal end of output.
fn emit(text: &str) -> Result<()> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn millis(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

/// Runs a parsed command line, writing results to stdout.
pub fn run(cli: Cli) -> Result<Status> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidSystem(e.to_string()))?;
    }
    match cli.command {
        Command::Analyze { input, json } => {
            emit(&cmd_analyze(&SystemFile::read(&input)?, json)?.to_string())?;
            Ok(Status::Success)
        }
        Command::Mv { input } => {
            emit(&cmd_mv(&SystemFile::read(&input)?)?.to_string())?;
            Ok(Status::Success)
        }
        Command::Solve { input, options } => {
            let (text, status) = cmd_solve(&SystemFile::read(&input)?, &options)?;
            emit(&text)?;
            Ok(status)
        }
        Command::Start { input, options } => {
            emit(&cmd_start(&SystemFile::read(&input)?, &options)?.to_string())?;
            Ok(Status::Success)
        }
        Command::Bench {
            family,
            count,
            seed,
            no_blackbox,
            output,
        } => {
            let rows = bench_rows(family, count, Seed(seed), !no_blackbox);
            match output {
                Some(path) => write_csv(&rows, fs::File::create(path)?)?,
                None => write_csv(&rows, std::io::stdout().lock())?,
            }
            eprint!("{}", bench_summary(&rows));
            Ok(Status::Success)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const COLLINEAR: &str = r#"{"n": 2, "polynomials": [
        {"support": [[0, 0], [1, 1]]},
        {"support": [[0, 0], [2, 2]]}]}"#;

    #[test]
    fn parse_errors_name_the_field() {
        let e =
            SystemFile::parse(r#"{"n": 1, "polynomials": [{"support": [[0], [0]]}]}"#).unwrap_err();
        assert!(e.to_string().contains("repeats"), "{e}");
        let e = SystemFile::parse(r#"{"n": 2, "polynomials": [{"support": [[0]]}]}"#).unwrap_err();
        assert!(e.to_string().contains("expected 2"), "{e}");
        let e = SystemFile::parse("{\"n\": 1,\n \"polynomials\": [}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn support_only_files() {
        let f = SystemFile::parse(COLLINEAR).unwrap();
        assert_eq!(cmd_mv(&f).unwrap(), 0);
        let e = f.system().unwrap_err();
        assert!(e.to_string().contains("coefficients required"));
        assert!(matches!(
            cmd_analyze(&f, false),
            Err(Error::ZeroMixedVolume { .. })
        ));
    }

    #[test]
    fn round_trip() {
        let text = r#"{"n": 1, "polynomials": [{"support": [[2], [0]], "coefficients": [[1, 0], [-1, 0]]}]}"#;
        let f = SystemFile::parse(text).unwrap();
        let sys = f.system().unwrap();
        let again = SystemFile::from_system(&sys);
        // Serialization sorts the support.
        assert_eq!(again.polynomials[0].support, vec![vec![0], vec![2]]);
        assert_eq!(
            again.polynomials[0].coefficients,
            Some(vec![[-1.0, 0.0], [1.0, 0.0]])
        );
        let parsed = SystemFile::parse(&again.to_json()).unwrap();
        assert_eq!(parsed, again);
    }

    #[test]
    fn empty_bench_has_header() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap().trim(),
            "instance_id,mv,paths_dec,paths_bb,time_dec_ms,time_bb_ms,status"
        );
    }

    #[test]
    fn quartile_interpolation() {
        assert_eq!(quartiles(vec![4.0, 1.0, 3.0, 2.0, 5.0]), [2.0, 3.0, 4.0]);
        assert_eq!(quartiles(vec![7.0]), [7.0, 7.0, 7.0]);
    }
}
