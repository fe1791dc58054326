//! Command-line front end: design, threshold, analyze, build, simulate and
//! reproduce.
//!
//! Every command takes its parameters from flags, from the matching section
//! of a JSON config file (`--config`), or from built-in defaults, in that
//! order of precedence. Tabular outputs are CSV files whose first line is a
//! provenance comment carrying the crate version, the seed and a SHA-256
//! digest of the effective configuration.

pub mod reproduce;

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::alist::{read_alist, write_alist};
use crate::component::CodeKind;
use crate::construct::{expand_parity_check, peg_construct, sample_random_code, TannerGraph};
use crate::de::{evolve, parse_code_support, DeConfig};
use crate::ensemble::DegreeDistributionPair;
use crate::error::{Error, Result};
use crate::exit::{
    iteration_constrained_threshold, ChannelKind, ChannelParameter, ExitCurves, Evaluation, OutputMeasure,
    ThresholdQuery, DEFAULT_XI,
};
use crate::growth::{GrowthRateCurve, CURVE_POINTS};
use crate::sim::{monte_carlo, SimulationTask, DEFAULT_MAX_WORDS, DEFAULT_TARGET_BIT_ERRORS};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "FASTLDPC_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "fastldpc", version, about = "Iteration-constrained LDPC/GLDPC ensemble toolkit")]
pub struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory for relative output paths (default: $FASTLDPC_OUT_DIR or `.`).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Global seed for every randomized step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize a degree-distribution pair by differential evolution.
    Design(DesignArgs),
    /// Iteration-constrained threshold of a DDP file.
    Threshold(ThresholdArgs),
    /// Growth rate of the weight distribution of a DDP file.
    Analyze(AnalyzeArgs),
    /// Construct a finite-length code from a DDP file.
    Build(BuildArgs),
    /// Monte Carlo bit-error-rate simulation.
    Simulate(SimulateArgs),
    /// Rerun a packaged study and print a pass/fail report.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignArgs {
    #[arg(long)]
    pub channel: Option<String>,
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long)]
    pub imax: Option<usize>,
    /// Allowed variable degrees, e.g. `2-30` or `2,3,10-12`.
    #[arg(long)]
    pub vn_degrees: Option<String>,
    /// Allowed check codes, e.g. `spc-7,hamming-7-4,hamming-15-11`.
    #[arg(long)]
    pub cn_codes: Option<String>,
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long)]
    pub f: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub generations: Option<usize>,
    #[arg(long)]
    pub xi: Option<f64>,
    /// Output DDP file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-generation progress CSV.
    #[arg(long)]
    pub history: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub ddp: Option<PathBuf>,
    #[arg(long)]
    pub channel: Option<String>,
    #[arg(long)]
    pub imax: Option<usize>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Output measure: `last-vn`, `after-cn` or `app`.
    #[arg(long)]
    pub measure: Option<String>,
    /// Trajectory CSV at the threshold.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub ddp: Option<PathBuf>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildArgs {
    #[arg(long)]
    pub ddp: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// `random` or `peg`.
    #[arg(long)]
    pub method: Option<String>,
    /// `.alist` writes the parity-check matrix, anything else the graph as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateArgs {
    /// `.alist` file, graph `.json` file, or `ddp=<file>,n=<N>[,method=random|peg][,seed=<s>]`.
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long)]
    pub channel: Option<String>,
    /// `start:stop:step` or a single value (ε, or Eb/N0 in dB).
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub imax: Option<usize>,
    #[arg(long)]
    pub target_errors: Option<u64>,
    #[arg(long)]
    pub max_words: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReproduceArgs {
    /// One of table1-checks, table2-checks, fig2-desk, fig3-desk, fig4-desk, fig5-curves.
    pub study: Option<String>,
    /// Block length of the desk-scale simulations.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub max_words: Option<u64>,
}

/// Config file layout: global fields plus one optional section per command.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    pub design: DesignArgs,
    pub threshold: ThresholdArgs,
    pub analyze: AnalyzeArgs,
    pub build: BuildArgs,
    pub simulate: SimulateArgs,
    pub reproduce: ReproduceArgs,
}

/// Fills every `None` field of `$flags` from `$file`.
macro_rules! merge_fields {
    ($flags:expr, $file:expr, $($field:ident),+) => {
        $( if $flags.$field.is_none() { $flags.$field = $file.$field.clone(); } )+
    };
}

/// Fully resolved invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
    pub command: CommandConfig,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum CommandConfig {
    Design(DesignArgs),
    Threshold(ThresholdArgs),
    Analyze(AnalyzeArgs),
    Build(BuildArgs),
    Simulate(SimulateArgs),
    Reproduce(ReproduceArgs),
}

impl RunConfig {
    /// Merges flags, config file and environment.
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let file: ConfigFile = match &cli.config {
            Some(p) => serde_json::from_str(&read_input(p)?)
                .map_err(|e| Error::Parse(format!("config {}: {e}", p.display())))?,
            None => ConfigFile::default(),
        };
        let out_dir = cli
            .out_dir
            .or(file.out_dir.clone())
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let command = match cli.command {
            Command::Design(mut a) => {
                let f = &file.design;
                merge_fields!(a, f, channel, rate, imax, vn_degrees, cn_codes, population, f, eta, generations, xi, out, history);
                CommandConfig::Design(a)
            }
            Command::Threshold(mut a) => {
                let f = &file.threshold;
                merge_fields!(a, f, ddp, channel, imax, xi, tolerance, measure, out);
                CommandConfig::Threshold(a)
            }
            Command::Analyze(mut a) => {
                let f = &file.analyze;
                merge_fields!(a, f, ddp, points, out);
                CommandConfig::Analyze(a)
            }
            Command::Build(mut a) => {
                let f = &file.build;
                merge_fields!(a, f, ddp, n, method, out);
                CommandConfig::Build(a)
            }
            Command::Simulate(mut a) => {
                let f = &file.simulate;
                merge_fields!(a, f, code, channel, grid, imax, target_errors, max_words, out);
                CommandConfig::Simulate(a)
            }
            Command::Reproduce(mut a) => {
                let f = &file.reproduce;
                merge_fields!(a, f, study, n, max_words);
                CommandConfig::Reproduce(a)
            }
        };
        let config = Self { seed: cli.seed.or(file.seed).unwrap_or(1), out_dir, threads: cli.threads.or(file.threads), command };
        config.check_inputs()?;
        Ok(config)
    }

    fn check_inputs(&self) -> Result<()> {
        let ddp = match &self.command {
            CommandConfig::Threshold(a) => &a.ddp,
            CommandConfig::Analyze(a) => &a.ddp,
            CommandConfig::Build(a) => &a.ddp,
            _ => return Ok(()),
        };
        match ddp {
            None => Err(Error::InvalidConfig("--ddp is required".into())),
            Some(p) if !p.is_file() => Err(Error::InvalidConfig(format!("DDP file {} not found", p.display()))),
            Some(_) => Ok(()),
        }
    }

    /// Hex SHA-256 of the canonical JSON form of this configuration.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config serialization cannot fail");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Provenance comment placed at the top of every CSV.
    pub fn provenance(&self) -> String {
        format!("# fastldpc {} seed={} config_sha256={}\n", env!("CARGO_PKG_VERSION"), self.seed, self.digest())
    }

    pub fn resolve_output(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.out_dir.join(path)
        }
    }

    /// Writes `body` to `path` under the output directory via a temporary
    /// file and rename. CSV outputs get the provenance line.
    pub fn write_output(&self, path: &Path, body: &str) -> Result<PathBuf> {
        let target = self.resolve_output(path);
        let dir = target.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        if target.extension().is_some_and(|e| e == "csv") {
            tmp.write_all(self.provenance().as_bytes())?;
        }
        tmp.write_all(body.as_bytes())?;
        tmp.persist(&target).map_err(|e| Error::Io(e.error))?;
        Ok(target)
    }
}

fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))
}

/// Diagnostic class and exit status of an error.
pub fn classify(e: &Error) -> (&'static str, i32) {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::UnknownCode(_) => ("parse", 2),
        Error::InvalidDistribution(_)
        | Error::InvalidConfig(_)
        | Error::InvalidChannel(_)
        | Error::LengthTooSmall(_)
        | Error::UnsupportedHamming(_)
        | Error::UnsupportedAwgnGeneralized
        | Error::WrongVariant(_)
        | Error::Domain(_) => ("config", 2),
        Error::InfeasibleSupport(_) | Error::UnrealizableLength(_) | Error::UnsatisfiableBracket => ("infeasible", 1),
        Error::NonConvergence(_) | Error::RepairStall(_) | Error::NoEligibleCn(_) => ("non-convergence", 1),
        Error::DimensionTooLarge(_) | Error::InconsistentWord | Error::Io(_) => ("runtime", 1),
        Error::ChecksFailed(_) => ("checks", 1),
    }
}

/// Parses `2-30`, `2,3,7` or mixtures such as `2-5,10,30`.
pub fn parse_degree_list(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Parse(format!("bad degree list `{s}`"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once('-') {
            let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// Parses `start:stop:step` (stop inclusive) or a single value.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("bad grid `{s}` (expected start:stop:step)"));
    let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?;
    match parts[..] {
        [x] => Ok(vec![x]),
        [a, b, step] if step > 0.0 && b >= a => {
            let count = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|k| a + step * k as f64).map(|x| (x * 1e12).round() / 1e12).collect())
        }
        _ => Err(bad()),
    }
}

fn load_ddp(path: &Option<PathBuf>) -> Result<DegreeDistributionPair> {
    let p = path.as_ref().ok_or_else(|| Error::InvalidConfig("--ddp is required".into()))?;
    DegreeDistributionPair::load(p)
}

fn channel_kind(s: &Option<String>) -> Result<ChannelKind> {
    s.as_deref().unwrap_or("bec").parse()
}

/// Builds or loads the code named by a `--code` argument.
pub fn resolve_code(spec: &str, default_seed: u64) -> Result<TannerGraph> {
    if spec.contains('=') {
        let mut ddp = None;
        let mut n = None;
        let mut method = "random".to_string();
        let mut seed = default_seed;
        for kv in spec.split(',') {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("bad code spec item `{kv}`")))?;
            match k.trim() {
                "ddp" => ddp = Some(PathBuf::from(v.trim())),
                "n" => n = Some(v.trim().parse().map_err(|_| Error::Parse(format!("bad block length `{v}`")))?),
                "method" => method = v.trim().to_string(),
                "seed" => seed = v.trim().parse().map_err(|_| Error::Parse(format!("bad seed `{v}`")))?,
                other => return Err(Error::Parse(format!("unknown code spec key `{other}`"))),
            }
        }
        let ddp = load_ddp(&ddp)?;
        let n = n.ok_or_else(|| Error::InvalidConfig("code spec needs n=<block length>".into()))?;
        return build_graph(&ddp, n, &method, seed);
    }
    let path = Path::new(spec);
    let text = read_input(path)?;
    if path.extension().is_some_and(|e| e == "alist") {
        TannerGraph::from_spc_rows(&read_alist(&text)?)
    } else {
        TannerGraph::from_json(&text)
    }
}

fn build_graph(ddp: &DegreeDistributionPair, n: usize, method: &str, seed: u64) -> Result<TannerGraph> {
    match method {
        "random" => sample_random_code(ddp, n, seed),
        "peg" => peg_construct(ddp, n, seed),
        other => Err(Error::InvalidConfig(format!("unknown construction method `{other}` (random or peg)"))),
    }
}

/// Executes a resolved configuration; prints a summary to stdout.
pub fn run(config: &RunConfig) -> Result<()> {
    match &config.command {
        CommandConfig::Design(a) => run_design(config, a),
        CommandConfig::Threshold(a) => run_threshold(config, a),
        CommandConfig::Analyze(a) => run_analyze(config, a),
        CommandConfig::Build(a) => run_build(config, a),
        CommandConfig::Simulate(a) => run_simulate(config, a),
        CommandConfig::Reproduce(a) => reproduce::run_study(config, a),
    }
}

fn run_design(config: &RunConfig, a: &DesignArgs) -> Result<()> {
    let kind = channel_kind(&a.channel)?;
    let vn = parse_degree_list(a.vn_degrees.as_deref().unwrap_or("2-30"))?;
    let default_codes = match kind {
        ChannelKind::Bec => "spc-7,hamming-7-4,hamming-15-11",
        ChannelKind::Awgn => "spc-6,spc-7,spc-8,spc-9,spc-10,spc-11",
    };
    let codes: Vec<String> = a.cn_codes.as_deref().unwrap_or(default_codes).split(',').map(|s| s.trim().to_string()).collect();
    let codes: Vec<CodeKind> = parse_code_support(&codes)?;
    let mut de = DeConfig::new(kind, a.rate.unwrap_or(0.5), a.imax.unwrap_or(10), vn, codes);
    if let Some(p) = a.population {
        de.population = p;
    }
    if let Some(f) = a.f {
        de.f = f;
    }
    if let Some(eta) = a.eta {
        de.eta = eta;
    }
    if let Some(g) = a.generations {
        de.max_generations = g;
    }
    de.xi = a.xi.unwrap_or(DEFAULT_XI);
    de.seed = config.seed;
    let mut history = String::from("generation,best,accepted_trials,rejected_members\n");
    let outcome = evolve(&de, &mut |r| {
        history.push_str(&format!("{},{:.8},{},{}\n", r.generation, r.best, r.accepted_trials, r.rejected_members));
    })?;
    let out = config.write_output(a.out.as_deref().unwrap_or(Path::new("design.json")), &outcome.ddp.to_json())?;
    let hist = config.write_output(a.history.as_deref().unwrap_or(Path::new("design_history.csv")), &history)?;
    let label = match kind {
        ChannelKind::Bec => "epsilon*",
        ChannelKind::Awgn => "ebn0*_db",
    };
    println!(
        "{label}={:.6} rate={:.6} generations={} ddp={} history={}",
        outcome.threshold,
        outcome.ddp.design_rate(),
        outcome.history.len() - 1,
        out.display(),
        hist.display()
    );
    Ok(())
}

fn run_threshold(config: &RunConfig, a: &ThresholdArgs) -> Result<()> {
    let ddp = load_ddp(&a.ddp)?;
    let kind = channel_kind(&a.channel)?;
    let i_max = a.imax.unwrap_or(10);
    let output: OutputMeasure = match &a.measure {
        Some(m) => m.parse()?,
        None => OutputMeasure::default_for(kind),
    };
    let mut q = ThresholdQuery::new(ddp.clone(), kind, i_max).with_output(output);
    if let Some(xi) = a.xi {
        q = q.with_xi(xi);
    }
    if let Some(t) = a.tolerance {
        q = q.with_tolerance(t);
    }
    let p = iteration_constrained_threshold(&q)?;
    let traj = ExitCurves::new(&ddp, Evaluation::Tabulated).trajectory(&p, i_max, output)?;
    let out = config.write_output(a.out.as_deref().unwrap_or(Path::new("trajectory.csv")), &traj.to_csv())?;
    match p {
        ChannelParameter::Bec { epsilon } => println!("epsilon*={epsilon:.6} i_max={i_max} trajectory={}", out.display()),
        ChannelParameter::Awgn { eb_n0_db, .. } => {
            println!("ebn0*_db={eb_n0_db:.6} i_max={i_max} trajectory={}", out.display())
        }
    }
    Ok(())
}

fn run_analyze(config: &RunConfig, a: &AnalyzeArgs) -> Result<()> {
    let ddp = load_ddp(&a.ddp)?;
    let curve = GrowthRateCurve::compute(&ddp, a.points.unwrap_or(CURVE_POINTS))?;
    let out = config.write_output(a.out.as_deref().unwrap_or(Path::new("growth.csv")), &curve.to_csv())?;
    let stability = match ddp.stability_product() {
        Ok(s) => format!("stability_product={s:.6}"),
        Err(_) => format!("weight2_functional={:.6}", ddp.weight2_functional()),
    };
    let star = curve.alpha_star.map_or("none".to_string(), |a| format!("{a:.6}"));
    println!(
        "good_growth={} alpha_star={star} {stability} rate={:.6} curve={}",
        curve.good_growth,
        ddp.design_rate(),
        out.display()
    );
    Ok(())
}

fn run_build(config: &RunConfig, a: &BuildArgs) -> Result<()> {
    let ddp = load_ddp(&a.ddp)?;
    let n = a.n.ok_or_else(|| Error::InvalidConfig("--n is required".into()))?;
    let graph = build_graph(&ddp, n, a.method.as_deref().unwrap_or("random"), config.seed)?;
    let path = a.out.clone().unwrap_or_else(|| PathBuf::from("code.alist"));
    let body = if path.extension().is_some_and(|e| e == "alist") {
        if !graph.all_spc() {
            return Err(Error::InvalidConfig(
                "alist output loses generalized check codes; write a .json graph instead".into(),
            ));
        }
        write_alist(&expand_parity_check(&graph))
    } else {
        graph.to_json()
    };
    let out = config.write_output(&path, &body)?;
    println!(
        "n={} checks={} edges={} design_rate={:.6} out={}",
        graph.block_length(),
        graph.check_count(),
        graph.edge_count(),
        graph.design_rate(),
        out.display()
    );
    Ok(())
}

fn run_simulate(config: &RunConfig, a: &SimulateArgs) -> Result<()> {
    let spec = a.code.as_deref().ok_or_else(|| Error::InvalidConfig("--code is required".into()))?;
    let graph = Arc::new(resolve_code(spec, config.seed)?);
    let kind = channel_kind(&a.channel)?;
    let values = parse_grid(a.grid.as_deref().ok_or_else(|| Error::InvalidConfig("--grid is required".into()))?)?;
    let rate = graph.design_rate();
    let grid: Vec<ChannelParameter> = values
        .iter()
        .map(|&v| match kind {
            ChannelKind::Bec => ChannelParameter::bec(v),
            ChannelKind::Awgn => ChannelParameter::awgn(v, rate),
        })
        .collect::<Result<_>>()?;
    let mut task = SimulationTask::new(graph, grid, a.imax.unwrap_or(10), config.seed);
    task.target_bit_errors = a.target_errors.unwrap_or(DEFAULT_TARGET_BIT_ERRORS);
    task.max_words = a.max_words.unwrap_or(DEFAULT_MAX_WORDS);
    let curve = monte_carlo(&task)?;
    let path = a.out.clone().unwrap_or_else(|| PathBuf::from("ber.csv"));
    let out = config.write_output(&path, &curve.to_csv())?;
    let stem = path.file_stem().map_or("ber".into(), |s| s.to_string_lossy().into_owned());
    let hist = config.write_output(&path.with_file_name(format!("{stem}_iterations.csv")), &curve.histogram_csv())?;
    for (p, q) in curve.params.iter().zip(&curve.points) {
        println!("param={} ber={:.4e} cer={:.4e} words={}", p.value(), q.ber(), q.cer(), q.words);
    }
    println!("curve={} iterations={}", out.display(), hist.display());
    Ok(())
}

/// Parses arguments, runs the command and returns the process exit status.
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
    let threads = cli.threads;
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(e) => return report(&e),
    };
    if let Some(t) = threads.or(config.threads) {
        // A second initialization in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    match run(&config) {
        Ok(()) => 0,
        Err(e) => report(&e),
    }
}

fn report(e: &Error) -> i32 {
    let (class, code) = classify(e);
    eprintln!("error[{class}]: {e}");
    code
}
