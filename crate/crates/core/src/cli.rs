//! Command-line harness behind the `latfac` binary: `factor`, `bench`,
//! `demo3q` and `analysis`.
//!
//! Exit codes: 0 success, 1 internal failure, 2 invalid input (including
//! even, prime and prime-power inputs), 3 lattice budget exhausted, 4 golden
//! mismatch in `demo3q`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{self, DickmanTable, MRule};
use crate::heuristics::{self, Heuristic, LatticeInstance, QaoaSettings};
use crate::ising::{self, Rational};
use crate::lattice::{self, IntMatrix, Permutation};
use crate::numth::{self, FactorBase};
use crate::qaoa::{self, AnsatzConfig};
use crate::record::{self, io_err, ExperimentRecord, TableRow};
use crate::relations::{self, Screening};
use crate::solver::{self, FactorConfig, Method, Params, DEFAULT_BUDGET_LATTICES};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_GOLDEN: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "latfac", version, about = "Lattice-based integer factoring laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor one integer.
    Factor(FactorArgs),
    /// Average factoring statistics over random semiprimes per bit length.
    Bench(BenchArgs),
    /// Reproduce the three-qubit walkthrough for n = 1961 and check it.
    Demo3q(DemoArgs),
    /// Emit plot data: Dickman rho, smooth densities, lattice scaling.
    Analysis(AnalysisArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeuristicName {
    Babai,
    ExactMin,
    HillClimb,
    Qaoa,
    LocalSearch,
    RandomRound,
}

#[derive(Debug, Clone, Args)]
pub struct HeuristicArgs {
    /// Local search width.
    #[arg(long, default_value_t = heuristics::DEFAULT_LOCAL_SEARCH_K)]
    pub k: usize,
    /// QAOA layers.
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    /// Use one parameter per gate in QAOA.
    #[arg(long)]
    pub multi_angle: bool,
    /// QAOA measurement shots.
    #[arg(long, default_value_t = heuristics::DEFAULT_SHOTS)]
    pub shots: u64,
    /// Candidates per lattice for random rounding.
    #[arg(long, default_value_t = heuristics::DEFAULT_CANDIDATE_CAP)]
    pub cap: usize,
}

impl HeuristicArgs {
    pub fn build(&self, name: HeuristicName) -> Result<Heuristic> {
        if self.k == 0 {
            return Err(Error::InvalidArgument("--k must be at least 1".into()));
        }
        if self.cap == 0 {
            return Err(Error::InvalidArgument("--cap must be at least 1".into()));
        }
        if self.shots == 0 {
            return Err(Error::InvalidArgument("--shots must be at least 1".into()));
        }
        Ok(match name {
            HeuristicName::Babai => Heuristic::Babai,
            HeuristicName::ExactMin => Heuristic::ExactMin,
            HeuristicName::HillClimb => Heuristic::HillClimb,
            HeuristicName::Qaoa => Heuristic::Qaoa(QaoaSettings {
                layers: self.layers,
                multi_angle: self.multi_angle,
                shots: self.shots,
            }),
            HeuristicName::LocalSearch => Heuristic::LocalSearch { k: self.k },
            HeuristicName::RandomRound => Heuristic::RandomRound { cap: self.cap },
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Lattice dimension.
    #[arg(long)]
    pub m: Option<usize>,
    /// Precision of the logarithm row.
    #[arg(long)]
    pub c: Option<f64>,
    /// Extended factor base size.
    #[arg(long = "M")]
    pub big_m: Option<usize>,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Parallel lattice workers.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Give up after this many lattices.
    #[arg(long, default_value_t = DEFAULT_BUDGET_LATTICES)]
    pub budget_lattices: u64,
    /// Write experiment records as JSON lines.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self, heuristic: Heuristic) -> FactorConfig {
        FactorConfig {
            heuristic,
            m: self.m,
            c: self.c,
            big_m: self.big_m,
            seed: self.seed,
            workers: self.workers,
            budget_lattices: self.budget_lattices,
            ..FactorConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FactorArgs {
    pub n: String,
    #[arg(long, value_enum, default_value = "local-search")]
    pub heuristic: HeuristicName,
    #[command(flatten)]
    pub heuristic_args: HeuristicArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Input bit lengths.
    #[arg(long, value_delimiter = ',', default_values_t = vec![15, 20, 25, 30])]
    pub bits: Vec<u32>,
    /// Semiprimes per bit length.
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// One table per heuristic.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "babai")]
    pub heuristic: Vec<HeuristicName>,
    #[command(flatten)]
    pub heuristic_args: HeuristicArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// CSV output; with several heuristics the name is appended to the stem.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    /// Skip the QAOA convergence traces.
    #[arg(long)]
    pub no_qaoa: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    Dickman,
    Density,
    LatticeScaling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MRuleName {
    Sublinear,
    Default,
    Squared,
}

#[derive(Debug, Clone, Args)]
pub struct AnalysisArgs {
    #[arg(value_enum)]
    pub curve: Curve,
    /// Largest argument of rho.
    #[arg(long, default_value_t = 6.0)]
    pub max: f64,
    /// Grid spacing for rho.
    #[arg(long, default_value_t = analysis::DEFAULT_STEP)]
    pub step: f64,
    /// Spacing of the printed rho points.
    #[arg(long, default_value_t = 0.01)]
    pub every: f64,
    #[arg(long, default_value_t = 10)]
    pub min_bits: u32,
    #[arg(long, default_value_t = 60)]
    pub max_bits: u32,
    #[arg(long, value_enum, default_value = "sublinear")]
    pub m_rule: MRuleName,
    /// JSON-lines records from `bench --log`.
    #[arg(long)]
    pub from: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExhausted { .. } => EXIT_BUDGET,
        Error::Inconsistent(_) | Error::NonFinite { .. } => EXIT_FAILURE,
        _ => EXIT_INVALID,
    }
}

/// Result of one subcommand: text for stdout and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmdOutput {
    pub stdout: String,
    pub code: i32,
}

impl CmdOutput {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: EXIT_OK }
    }
}

/// Parses `args` (including the program name), runs the command, prints
/// its output and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            let _ = std::io::stdout().flush();
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(command: &Command) -> Result<CmdOutput> {
    match command {
        Command::Factor(a) => cmd_factor(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Demo3q(a) => cmd_demo3q(a),
        Command::Analysis(a) => cmd_analysis(a),
    }
}

fn parse_n(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .ok()
        .filter(|n| n > &BigInt::from(0))
        .ok_or_else(|| Error::InvalidArgument(format!("{s:?} is not a positive integer")))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    File::create(path)
        .and_then(|mut f| f.write_all(contents))
        .map_err(io_err)
}

fn write_log(path: &Path, records: &[ExperimentRecord]) -> Result<()> {
    let mut buf = Vec::new();
    record::write_jsonl(&mut buf, records)?;
    write_file(path, &buf)
}

pub fn cmd_factor(args: &FactorArgs) -> Result<CmdOutput> {
    let n = parse_n(&args.n)?;
    let heuristic = args.heuristic_args.build(args.heuristic)?;
    let cfg = args.run.config(heuristic);
    let report = solver::collect(&n, &cfg)?;
    if let Some(path) = &args.run.log {
        write_log(path, std::slice::from_ref(&report.record))?;
    }
    let mut out = String::new();
    match &report.factors {
        Some((p, q)) => writeln!(out, "{n} = {p} x {q}").unwrap(),
        None => writeln!(
            out,
            "no factor of {n} after {} lattices",
            report.record.lattices_tested
        )
        .unwrap(),
    }
    match report.method {
        Some(Method::Congruence) => writeln!(out, "method: congruence of squares").unwrap(),
        Some(Method::SharedFactor) => writeln!(out, "method: shared factor with a relation").unwrap(),
        None => {}
    }
    if let Some(c) = &report.congruence {
        writeln!(out, "congruence: {}^2 = {}^2 (mod {n})", c.x, c.y).unwrap();
    }
    writeln!(out, "{}", report.record.to_json_line()).unwrap();
    let code = if report.factors.is_some() { EXIT_OK } else { EXIT_BUDGET };
    Ok(CmdOutput { stdout: out, code })
}

/// Seed of trial `trial` at `bits`, shared by all heuristics.
pub fn trial_seed(master: u64, bits: u32, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream((u64::from(bits) << 32) | trial as u64);
    rng.gen()
}

/// One benchmark table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable {
    pub heuristic: String,
    pub rows: Vec<TableRow>,
    pub records: Vec<ExperimentRecord>,
}

impl BenchTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        record::write_table(&mut buf, &self.rows)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub bits: Vec<u32>,
    pub trials: usize,
    pub heuristics: Vec<Heuristic>,
    /// Template config; `m`, `c` and `M` default per bit length.
    pub config: FactorConfig,
}

/// Factors `trials` random semiprimes per bit length with every heuristic.
/// Budget exhaustion is recorded in the rows, not raised.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchTable>> {
    if spec.trials == 0 {
        return Err(Error::InvalidArgument("--trials must be at least 1".into()));
    }
    if let Some(&b) = spec.bits.iter().find(|&&b| b < 10) {
        return Err(Error::InvalidArgument(format!("bit length {b} is below 10")));
    }
    let mut tables = Vec::new();
    for heuristic in &spec.heuristics {
        let mut rows = Vec::new();
        let mut records = Vec::new();
        for &bits in &spec.bits {
            let defaults = Params::for_bits(bits)?;
            let m = spec.config.m.unwrap_or(defaults.m);
            let cfg_template = FactorConfig {
                heuristic: *heuristic,
                m: Some(m),
                c: Some(spec.config.c.unwrap_or(m as f64 / 4.0)),
                big_m: Some(spec.config.big_m.unwrap_or(m * m)),
                ..spec.config.clone()
            };
            let mut group = Vec::with_capacity(spec.trials);
            for trial in 0..spec.trials {
                let seed = trial_seed(spec.config.seed, bits, trial);
                let n = numth::random_semiprime(bits, seed)?;
                let cfg = FactorConfig {
                    seed,
                    ..cfg_template.clone()
                };
                group.push(solver::collect(&n, &cfg)?.record);
            }
            rows.push(TableRow::average(u64::from(bits), m, &group)?);
            records.extend(group);
        }
        tables.push(BenchTable {
            heuristic: heuristic.name().to_string(),
            rows,
            records,
        });
    }
    Ok(tables)
}

fn suffixed(path: &Path, name: &str) -> PathBuf {
    let stem = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let file = match path.extension() {
        Some(ext) => format!("{stem}-{name}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{name}"),
    };
    path.with_file_name(file)
}

pub fn cmd_bench(args: &BenchArgs) -> Result<CmdOutput> {
    let heuristics = args
        .heuristic
        .iter()
        .map(|&h| args.heuristic_args.build(h))
        .collect::<Result<Vec<_>>>()?;
    let spec = BenchSpec {
        bits: args.bits.clone(),
        trials: args.trials,
        heuristics,
        config: args.run.config(Heuristic::Babai),
    };
    let tables = run_bench(&spec)?;
    let mut out = String::new();
    let several = tables.len() > 1;
    for table in &tables {
        let csv = table.to_csv()?;
        match &args.out {
            Some(path) => {
                let path = if several { suffixed(path, &table.heuristic) } else { path.clone() };
                write_file(&path, csv.as_bytes())?;
                writeln!(out, "wrote {}", path.display()).unwrap();
            }
            None => {
                if several {
                    writeln!(out, "# {}", table.heuristic).unwrap();
                }
                out.push_str(&csv);
            }
        }
    }
    if let Some(path) = &args.run.log {
        let all: Vec<ExperimentRecord> = tables.iter().flat_map(|t| t.records.clone()).collect();
        write_log(path, &all)?;
    }
    Ok(CmdOutput::ok(out))
}

/// Walkthrough output and the checks that failed.
#[derive(Debug, Clone, PartialEq)]
pub struct DemoReport {
    pub text: String,
    pub mismatches: Vec<String>,
}

struct Checker {
    text: String,
    mismatches: Vec<String>,
}

impl Checker {
    fn check<T: PartialEq + std::fmt::Debug>(&mut self, label: &str, got: &T, expected: &T) {
        let status = if got == expected { "ok" } else { "MISMATCH" };
        writeln!(self.text, "{label}: {got:?} [{status}]").unwrap();
        if got != expected {
            self.mismatches
                .push(format!("{label}: expected {expected:?}, got {got:?}"));
        }
    }

    fn note(&mut self, line: impl AsRef<str>) {
        writeln!(self.text, "{}", line.as_ref()).unwrap();
    }
}

/// Lowest-energy eigen-pairs and their relation pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub state: String,
    pub energy: i128,
    pub pair: (BigInt, BigInt),
    pub s: BigInt,
    pub smooth: bool,
}

const DEMO_N: i64 = 1961;

/// The three-qubit walkthrough: `n = 1961`, `m = 3`, `c = 1.5`, `M = 15`,
/// identity permutation.
pub fn demo3q(with_qaoa: bool, seed: u64) -> Result<DemoReport> {
    let n = BigInt::from(DEMO_N);
    let mut ck = Checker {
        text: String::new(),
        mismatches: Vec::new(),
    };
    ck.note("n = 1961, m = 3, c = 1.5, M = 15");
    let lat = lattice::build_prime_lattice(&n, 3, 1.5, &Permutation::identity(3))?;
    ck.check(
        "prime lattice rows",
        &lat.basis.to_rows(),
        &vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 2], vec![22, 35, 51]],
    );
    ck.check("target", &lat.target, &vec![0, 0, 0, 240]);

    let expected_reduced = vec![vec![1, -2, 2, 3], vec![-4, 1, 2, -2], vec![-3, 2, 0, 4]];
    let inst = LatticeInstance::new(lat.clone(), 0.99)?;
    ck.check("LLL columns (delta 0.99)", &inst.reduced.raw.columns().to_vec(), &expected_reduced);
    let loose = lattice::lll_reduce(&lat, 0.75)?;
    ck.check(
        "LLL columns (delta 0.75)",
        &loose.raw.columns().to_vec(),
        &vec![vec![1, -2, 2, 3], vec![-3, 2, 0, 4], vec![-4, 1, 2, -2]],
    );
    ck.check("b_op", &inst.babai.b_op, &vec![0, 4, 4, 242]);
    ck.check("kappa", &inst.babai.kappa, &vec![-1, -1, -1]);

    let h = inst.hamiltonian()?;
    ck.check(
        "Hamiltonian",
        &h.to_string(),
        &"-4 Z0Z1 + 5/2 Z0Z2 + 3 Z1Z2 - 3/2 Z0 - 7/2 Z1 - 4 Z2 + 87/2".to_string(),
    );

    let table = eigen_table(&inst, &h, &n, 4)?;
    ck.note("level | energy | state | (u, v) | S = u - vn | smooth");
    for (level, e) in table.iter().enumerate() {
        ck.note(format!(
            "{level} | {} | {} | ({}, {}) | {} | {}",
            e.energy,
            e.state,
            e.pair.0,
            e.pair.1,
            e.s,
            if e.smooth { "yes" } else { "no" }
        ));
    }
    let summary: Vec<(String, i128, (i64, i64), i64, bool)> = table
        .iter()
        .map(|e| {
            (
                e.state.clone(),
                e.energy,
                (to_i64(&e.pair.0), to_i64(&e.pair.1)),
                to_i64(&e.s),
                e.smooth,
            )
        })
        .collect();
    ck.check(
        "eigen-pair table",
        &summary,
        &vec![
            ("100".to_string(), 33, (1800, 1), -161, true),
            ("011".to_string(), 35, (1944, 1), -17, true),
            ("000".to_string(), 36, (2025, 1), 64, true),
            ("001".to_string(), 42, (3645, 2), -277, false),
        ],
    );

    if with_qaoa {
        for layers in [1usize, 2] {
            let cfg = AnsatzConfig::standard(layers).with_seed(seed);
            let best = qaoa::optimize_multistart(&h, &cfg, 50)?;
            let state = qaoa::evolve(&h, &cfg, &best.params)?;
            let mut probs: Vec<(f64, u64)> = state
                .probabilities()
                .into_iter()
                .enumerate()
                .map(|(x, p)| (p, x as u64))
                .collect();
            probs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            let trace: Vec<String> = best.trace.iter().map(|v| format!("{v:.6}")).collect();
            ck.note(format!("QAOA p = {layers} trace: {}", trace.join(" ")));
            let top: Vec<String> = probs
                .iter()
                .take(3)
                .map(|&(p, x)| format!("{}:{p:.4}", ising::Bitstring::new(x, 3).unwrap()))
                .collect();
            ck.note(format!("QAOA p = {layers} most likely: {}", top.join(" ")));
            ck.check(
                &format!("QAOA p = {layers} below uniform average"),
                &(best.expectation < 43.5),
                &true,
            );
            if layers == 2 {
                let top3: Vec<u64> = probs.iter().take(3).map(|&(_, x)| x).collect();
                ck.check("QAOA p = 2 favours 100", &top3.contains(&0b100), &true);
            }
        }
    }
    Ok(DemoReport {
        text: ck.text,
        mismatches: ck.mismatches,
    })
}

fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).unwrap_or(i64::MAX)
}

/// The `rows` lowest-energy states with their relation pairs.
pub fn eigen_table(
    inst: &LatticeInstance,
    h: &ising::RoundingHamiltonian,
    n: &BigInt,
    rows: usize,
) -> Result<Vec<TableEntry>> {
    let base = FactorBase::first(15)?;
    let all = ising::exact_minimize(h, Rational::from_integer(i128::MAX))?;
    let mut out = Vec::with_capacity(rows);
    for (x, energy) in all.into_iter().take(rows) {
        let b = lattice::refine(&inst.reduced.basis, &inst.babai.b_op, &inst.babai.kappa, x.value())?;
        let e = lattice::lattice_coords(&inst.lattice, &b)?;
        let (u, v) = relations::extract_pair(&e, &inst.lattice.primes)?;
        let s = &u - &v * n;
        let smooth = matches!(relations::test_candidate(&u, &v, n, &base)?, Screening::Smooth(_));
        out.push(TableEntry {
            state: x.to_string(),
            energy: energy.to_integer(),
            pair: (u, v),
            s,
            smooth,
        });
    }
    Ok(out)
}

pub fn cmd_demo3q(args: &DemoArgs) -> Result<CmdOutput> {
    let report = demo3q(!args.no_qaoa, args.seed)?;
    let mut out = report.text;
    if report.mismatches.is_empty() {
        out.push_str("all golden values match\n");
        Ok(CmdOutput::ok(out))
    } else {
        writeln!(out, "first divergence: {}", report.mismatches[0]).unwrap();
        Ok(CmdOutput {
            stdout: out,
            code: EXIT_GOLDEN,
        })
    }
}

fn format_points(points: &[(f64, f64)]) -> String {
    let mut out = String::new();
    for &(x, y) in points {
        writeln!(out, "{x:.4} {y:.9e}").unwrap();
    }
    out
}

pub fn cmd_analysis(args: &AnalysisArgs) -> Result<CmdOutput> {
    let text = match args.curve {
        Curve::Dickman => {
            let table = DickmanTable::new(args.max, args.step)?;
            let stride = (args.every / args.step).round().max(1.0) as usize;
            format_points(&table.curve(stride))
        }
        Curve::Density => {
            if args.min_bits > args.max_bits {
                return Err(Error::InvalidArgument("--min-bits exceeds --max-bits".into()));
            }
            let rule = match args.m_rule {
                MRuleName::Sublinear => MRule::Sublinear,
                MRuleName::Default => MRule::Default,
                MRuleName::Squared => MRule::Squared,
            };
            format_points(&analysis::density_curve(args.min_bits..=args.max_bits, rule)?)
        }
        Curve::LatticeScaling => {
            let path = args.from.as_ref().ok_or_else(|| {
                Error::InvalidArgument("lattice-scaling needs --from <records.jsonl>".into())
            })?;
            let file = File::open(path).map_err(io_err)?;
            let records = record::read_jsonl(BufReader::new(file))?;
            let points = analysis::lattice_scaling(&records);
            let fit = analysis::log_linear_fit(&points)?;
            let mut text = format!(
                "# log-linear fit: slope {:.6} per bit, intercept {:.6}, r^2 {:.6}\n",
                fit.slope, fit.intercept, fit.r_squared
            );
            text.push_str(&format_points(&points));
            text
        }
    };
    match &args.out {
        Some(path) => {
            write_file(path, text.as_bytes())?;
            Ok(CmdOutput::ok(format!("wrote {}\n", path.display())))
        }
        None => Ok(CmdOutput::ok(text)),
    }
}

/// Convenience for examples and tests: the reduced three-qubit instance.
pub fn demo_instance() -> Result<LatticeInstance> {
    let lat = lattice::build_prime_lattice(&BigInt::from(DEMO_N), 3, 1.5, &Permutation::identity(3))?;
    LatticeInstance::new(lat, 0.99)
}

/// The reduced basis of the walkthrough as published, for callers that want
/// to build the Hamiltonian by hand.
pub fn demo_reduced_basis() -> IntMatrix {
    IntMatrix::from_columns(vec![vec![1, -2, 2, 3], vec![-4, 1, 2, -2], vec![-3, 2, 0, 4]])
        .expect("three columns of equal length")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walkthrough_matches_without_qaoa() {
        let r = demo3q(false, 0).unwrap();
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
    }

    #[test]
    fn trial_seeds_differ() {
        assert_ne!(trial_seed(1, 15, 0), trial_seed(1, 15, 1));
        assert_ne!(trial_seed(1, 15, 0), trial_seed(1, 20, 0));
        assert_eq!(trial_seed(1, 15, 0), trial_seed(1, 15, 0));
    }

    #[test]
    fn suffixes_output_paths() {
        assert_eq!(suffixed(Path::new("out/t.csv"), "babai"), PathBuf::from("out/t-babai.csv"));
        assert_eq!(suffixed(Path::new("t"), "qaoa"), PathBuf::from("t-qaoa"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::PrimeInput { n: 17.into() }), EXIT_INVALID);
        assert_eq!(exit_code(&Error::BudgetExhausted { lattices: 1, unique: 0 }), EXIT_BUDGET);
    }
}
