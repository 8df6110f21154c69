//! Command-line front end. The binary only forwards `argv` to [`main_with_args`].
//!
//! Every statistical input is a required flag. Each run prints an audit
//! block of `# audit key = value` lines: a SHA-256 digest over the
//! arguments and the bytes of every input file, the seed (or `none`), and
//! the methods applied.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or numerical error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use crate::conjugate::{
    credibility_decomposition, fit_gamma_prior_from_interval, lognormal_credibility, lognormal_normal_update_step,
    poisson_gamma_trajectory, AnnualCounts, ElicitedInterval, LogLossSample,
};
use crate::dirichlet::dp_posterior;
use crate::distributions::{gig_mean, gig_mode, ContinuousDistribution, GammaParams, LognormalParams, NormalParams, PhiZero};
use crate::error::{Error, Result};
use crate::evidence::{dempster_combine, ks_bounds, CombineOptions};
use crate::io::{parse_ds, write_band, write_ds, write_histogram, write_pbox, CellsConfig, ColumnTable, ScenarioConfig};
use crate::lda::{
    compute_capital, data_sufficiency, data_sufficiency_exact, histogram, min_variance_combine,
    simulate_annual_loss, capital_from_sample, single_loss_quantile_level, sufficiency_epsilon, AggregationMode,
    Estimate, SimulationConfig, SimulationMode, Source,
};
use crate::three_source::{
    gig_trajectory, lnn_posterior, ExpertIntensityOpinions, FrequencyEvidence, SeverityEvidence,
};

#[derive(Debug, Parser)]
#[command(name = "opcombine", version, about = "Combine loss data, external data and expert opinion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a gamma prior on a Poisson intensity to an expert's mean and interval.
    FitPrior(FitPriorArgs),
    /// Conjugate two-source update, year by year or loss by loss.
    Update(UpdateArgs),
    /// Combine internal data, external prior and expert opinions.
    ThreeSource(ThreeSourceArgs),
    /// Dirichlet-process blend of a scenario distribution with losses.
    Dirichlet(DirichletArgs),
    /// Dempster's rule on two structure files.
    DsCombine(DsCombineArgs),
    /// Kolmogorov-Smirnov p-box around a sample.
    KsBounds(KsBoundsArgs),
    /// Monte Carlo annual-loss VaR.
    Var(VarArgs),
    /// Observations needed for a relative quantile error, or its inverse.
    Sufficiency(SufficiencyArgs),
    /// Minimum-variance combination of unbiased estimates.
    MinVar(MinVarArgs),
}

/// Internal losses from a CSV file, filtered to one cell.
#[derive(Debug, Args, Clone)]
pub struct LossFileArgs {
    /// Loss file with header `date,cell,gross_loss,recovery`.
    #[arg(long, requires_all = ["threshold", "cell"])]
    pub losses: Option<PathBuf>,
    /// Reporting threshold; smaller gross losses are dropped.
    #[arg(long, requires = "losses")]
    pub threshold: Option<f64>,
    #[arg(long, requires = "losses")]
    pub cell: Option<String>,
}

#[derive(Debug, Args)]
pub struct FitPriorArgs {
    /// Expert's estimate of the mean intensity.
    #[arg(long)]
    pub mean: f64,
    /// Lower end of the expert's interval.
    #[arg(long)]
    pub a: f64,
    /// Upper end of the expert's interval.
    #[arg(long)]
    pub b: f64,
    /// Probability that the intensity lies in [a, b].
    #[arg(long)]
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UpdateFamily {
    PoissonGamma,
    LognormalNormal,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("data").required(true).args(["counts", "log_losses", "losses"])))]
pub struct UpdateArgs {
    #[arg(long, value_enum)]
    pub family: UpdateFamily,
    #[arg(long, required_if_eq("family", "poisson-gamma"))]
    pub prior_shape: Option<f64>,
    #[arg(long, required_if_eq("family", "poisson-gamma"))]
    pub prior_scale: Option<f64>,
    #[arg(long, required_if_eq("family", "lognormal-normal"))]
    pub prior_mu: Option<f64>,
    #[arg(long, required_if_eq("family", "lognormal-normal"))]
    pub prior_sd: Option<f64>,
    /// Known standard deviation of log-losses.
    #[arg(long, required_if_eq("family", "lognormal-normal"))]
    pub sigma: Option<f64>,
    /// Annual event counts, oldest first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub counts: Option<Vec<u64>>,
    /// Log-losses, in order of occurrence.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub log_losses: Option<Vec<f64>>,
    #[command(flatten)]
    pub loss_file: LossFileArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ThreeSourceModel {
    Frequency,
    Severity,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("data").required(true).args(["counts", "log_losses", "losses"])))]
pub struct ThreeSourceArgs {
    #[arg(long, value_enum)]
    pub model: ThreeSourceModel,
    /// Gamma prior from external data.
    #[arg(long, required_if_eq("model", "frequency"))]
    pub prior_shape: Option<f64>,
    #[arg(long, required_if_eq("model", "frequency"))]
    pub prior_scale: Option<f64>,
    /// Exposure scale applied to the intensity each year.
    #[arg(long, required_if_eq("model", "frequency"))]
    pub exposure: Option<f64>,
    /// Expert intensity estimates.
    #[arg(long, value_delimiter = ',', requires = "xi")]
    pub opinions: Option<Vec<f64>>,
    /// Expert shape parameter, or `estimate` to fit it from the opinions.
    #[arg(long, requires = "opinions")]
    pub xi: Option<String>,
    /// Normal prior on the log-location from external data.
    #[arg(long, required_if_eq("model", "severity"), allow_hyphen_values = true)]
    pub prior_mu: Option<f64>,
    #[arg(long, required_if_eq("model", "severity"))]
    pub prior_sd: Option<f64>,
    #[arg(long, required_if_eq("model", "severity"))]
    pub sigma: Option<f64>,
    /// Expert estimates of the log-location.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required_if_eq("model", "severity"))]
    pub expert_mus: Option<Vec<f64>>,
    /// Standard deviation of an expert's log-location estimate.
    #[arg(long, required_if_eq("model", "severity"))]
    pub expert_xi: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub counts: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub log_losses: Option<Vec<f64>>,
    #[command(flatten)]
    pub loss_file: LossFileArgs,
}

#[derive(Debug, Args)]
pub struct DirichletArgs {
    /// Scenario file with a `[dirichlet]` section.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Grid of loss amounts at which to report the band.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub grid: Vec<f64>,
    #[arg(long)]
    pub lower_q: f64,
    #[arg(long)]
    pub upper_q: f64,
    /// Observed losses to blend in.
    #[arg(long, value_delimiter = ',', conflicts_with = "losses")]
    pub samples: Option<Vec<f64>>,
    #[command(flatten)]
    pub loss_file: LossFileArgs,
}

#[derive(Debug, Args)]
pub struct DsCombineArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    /// Permit combining statistical with sure bounds.
    #[arg(long)]
    pub acknowledge_mixed_kinds: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("data").required(true).args(["samples", "losses"])))]
pub struct KsBoundsArgs {
    /// File of numbers separated by whitespace or commas.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    #[command(flatten)]
    pub loss_file: LossFileArgs,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, requires = "support_hi", allow_hyphen_values = true)]
    pub support_lo: Option<f64>,
    #[arg(long, requires = "support_lo", allow_hyphen_values = true)]
    pub support_hi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    PluginMean,
    FullPredictive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregationArg {
    SumOfVars,
    SingleCell,
}

#[derive(Debug, Clone, Args)]
pub struct VarArgs {
    /// Cells file with `[[cell]]` tables.
    #[arg(long)]
    pub cells: PathBuf,
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub n_sims: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long, value_enum)]
    pub aggregation: AggregationArg,
    /// Parallel streams; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub streams: usize,
    /// Write a histogram of the total annual loss here.
    #[arg(long, requires = "bins")]
    pub histogram: Option<PathBuf>,
    #[arg(long, requires = "histogram")]
    pub bins: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeverityFamily {
    Lognormal,
    Gamma,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["eps", "n"])))]
pub struct SufficiencyArgs {
    #[arg(long, value_enum)]
    pub family: SeverityFamily,
    #[arg(long, required_if_eq("family", "lognormal"), allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, required_if_eq("family", "lognormal"))]
    pub sigma: Option<f64>,
    #[arg(long, required_if_eq("family", "gamma"))]
    pub shape: Option<f64>,
    #[arg(long, required_if_eq("family", "gamma"))]
    pub scale: Option<f64>,
    #[arg(long)]
    pub q: f64,
    /// Target relative error; prints the required sample size.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Sample size; prints the attained relative error.
    #[arg(long)]
    pub n: Option<u64>,
    /// Expected annual count; also prints the single-loss quantile level.
    #[arg(long)]
    pub expected_n: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MinVarArgs {
    /// `value:variance` or `value:variance:source`; repeat at least twice.
    #[arg(long = "estimate", required = true, allow_hyphen_values = true)]
    pub estimates: Vec<String>,
}

/// Report text plus its audit trail.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub body: String,
    pub audit: Audit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Audit {
    pub command: &'static str,
    pub digest: String,
    pub seed: Option<u64>,
    pub methods: Vec<&'static str>,
    pub notes: Vec<(String, String)>,
}

impl Audit {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# audit command = {}", self.command);
        let _ = writeln!(s, "# audit inputs_sha256 = {}", self.digest);
        let _ = writeln!(s, "# audit seed = {}", self.seed.map_or("none".to_string(), |v| v.to_string()));
        let _ = writeln!(s, "# audit methods = {}", self.methods.join("; "));
        for (k, v) in &self.notes {
            let _ = writeln!(s, "# audit {k} = {v}");
        }
        s
    }
}

/// Hashes arguments and input file bytes as they are read.
struct InputDigest(Sha256);

impl InputDigest {
    fn new(args: &impl std::fmt::Debug) -> Self {
        let mut h = Sha256::new();
        h.update(format!("{args:?}").as_bytes());
        Self(h)
    }

    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.0.update(&bytes);
        String::from_utf8(bytes).map_err(|_| Error::Parse { line: 0, message: format!("{} is not UTF-8", path.display()) })
    }

    fn finish(self) -> String {
        hex::encode(self.0.finalize())
    }
}

struct Ctx {
    digest: InputDigest,
    notes: Vec<(String, String)>,
}

impl Ctx {
    fn new(args: &impl std::fmt::Debug) -> Self {
        Self { digest: InputDigest::new(args), notes: Vec::new() }
    }

    fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    fn finish(self, command: &'static str, seed: Option<u64>, methods: Vec<&'static str>, body: String) -> RunOutput {
        RunOutput {
            body,
            audit: Audit { command, digest: self.digest.finish(), seed, methods, notes: self.notes },
        }
    }

    /// Losses for one cell, with truncation and row errors noted in the audit.
    fn cell_losses(&mut self, a: &LossFileArgs) -> Result<Option<(AnnualCounts, Vec<f64>)>> {
        let (Some(path), Some(threshold), Some(cell)) = (&a.losses, a.threshold, &a.cell) else {
            return Ok(None);
        };
        let text = self.digest.read(path)?;
        let data = crate::io::read_losses(text.as_bytes(), threshold)?;
        self.note("threshold", threshold);
        self.note("truncated_losses", data.truncation.excluded);
        self.note("rejected_rows", data.row_errors.len());
        for e in &data.row_errors {
            self.note(&format!("rejected_row.{}", e.line), &e.message);
        }
        let counts = data
            .annual_counts(cell)
            .ok_or_else(|| Error::EmptyData(format!("no losses above threshold for cell '{cell}'")))?;
        Ok(Some((counts, data.losses(cell))))
    }
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<RunOutput> {
    match &cli.command {
        Command::FitPrior(a) => fit_prior(a),
        Command::Update(a) => update(a),
        Command::ThreeSource(a) => three_source(a),
        Command::Dirichlet(a) => dirichlet(a),
        Command::DsCombine(a) => ds_combine(a),
        Command::KsBounds(a) => ks(a),
        Command::Var(a) => var(a),
        Command::Sufficiency(a) => sufficiency(a),
        Command::MinVar(a) => min_var(a),
    }
}

/// Parses `args`, runs, prints the audit block and report to stdout and
/// errors to stderr, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}{}", out.audit.to_text(), out.body);
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn kv(s: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(s, "{key} = {value}");
}

fn fit_prior(a: &FitPriorArgs) -> Result<RunOutput> {
    let ctx = Ctx::new(a);
    let prior = fit_gamma_prior_from_interval(&ElicitedInterval::new(a.mean, a.a, a.b, a.p)?)?;
    let coverage = prior.cdf(a.b) - prior.cdf(a.a);
    let mut body = String::new();
    kv(&mut body, "alpha", prior.shape);
    kv(&mut body, "beta", prior.scale);
    kv(&mut body, "prior_mean", prior.shape * prior.scale);
    kv(&mut body, "interval_probability", coverage);
    Ok(ctx.finish("fit-prior", None, vec!["gamma prior from elicited mean and interval"], body))
}

fn update(a: &UpdateArgs) -> Result<RunOutput> {
    let mut ctx = Ctx::new(a);
    let from_file = ctx.cell_losses(&a.loss_file)?;
    match a.family {
        UpdateFamily::PoissonGamma => {
            let prior = GammaParams::new(a.prior_shape.expect("clap"), a.prior_scale.expect("clap"))?;
            let counts = match (&a.counts, from_file) {
                (Some(c), _) => AnnualCounts::new(c.clone()),
                (None, Some((c, _))) => c,
                (None, None) => return Err(Error::InvalidParameter("poisson-gamma needs --counts or --losses".into())),
            };
            let traj = poisson_gamma_trajectory(prior, &counts);
            let mut t = ColumnTable::new(&["year", "n", "alpha", "beta", "mean", "stderr", "mle"])
                .with_meta("prior_alpha", prior.shape)
                .with_meta("prior_beta", prior.scale);
            let mut running = 0u64;
            for (k, (p, &n)) in traj.iter().zip(&counts.counts).enumerate() {
                running += n;
                t.push(vec![
                    (k + 1) as f64,
                    n as f64,
                    p.shape,
                    p.scale,
                    p.shape * p.scale,
                    p.stdev(),
                    running as f64 / (k + 1) as f64,
                ]);
            }
            let d = credibility_decomposition(prior, &counts);
            t = t.with_meta("credibility_weight", d.weight);
            Ok(ctx.finish("update", None, vec!["poisson-gamma conjugate update"], t.to_text()))
        }
        UpdateFamily::LognormalNormal => {
            let prior = NormalParams::new(a.prior_mu.expect("clap"), a.prior_sd.expect("clap"))?;
            let sigma = a.sigma.expect("clap");
            let logs: Vec<f64> = match (&a.log_losses, from_file) {
                (Some(v), _) => v.clone(),
                (None, Some((_, losses))) => losses.iter().map(|x| x.ln()).collect(),
                (None, None) => {
                    return Err(Error::InvalidParameter("lognormal-normal needs --log-losses or --losses".into()))
                }
            };
            let sample = LogLossSample::new(logs.clone(), sigma)?;
            let mut t = ColumnTable::new(&["k", "log_loss", "mu", "sd"])
                .with_meta("prior_mu", prior.mean)
                .with_meta("prior_sd", prior.stdev)
                .with_meta("sigma", sigma);
            let mut p = prior;
            for (k, &y) in logs.iter().enumerate() {
                p = lognormal_normal_update_step(p, y, sigma);
                t.push(vec![(k + 1) as f64, y, p.mean, p.stdev]);
            }
            t = t.with_meta("credibility_weight", lognormal_credibility(prior, &sample).weight);
            Ok(ctx.finish("update", None, vec!["lognormal-normal conjugate update"], t.to_text()))
        }
    }
}

fn parse_xi(opinions: &[f64], xi: &str) -> Result<ExpertIntensityOpinions> {
    if xi == "estimate" {
        return ExpertIntensityOpinions::with_estimated_xi(opinions.to_vec());
    }
    let v: f64 = xi
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("--xi must be a number or 'estimate', got '{xi}'")))?;
    ExpertIntensityOpinions::new(opinions.to_vec(), v)
}

fn three_source(a: &ThreeSourceArgs) -> Result<RunOutput> {
    let mut ctx = Ctx::new(a);
    let from_file = ctx.cell_losses(&a.loss_file)?;
    match a.model {
        ThreeSourceModel::Frequency => {
            let prior = GammaParams::new(a.prior_shape.expect("clap"), a.prior_scale.expect("clap"))?;
            let counts = match (&a.counts, from_file) {
                (Some(c), _) => AnnualCounts::new(c.clone()),
                (None, Some((c, _))) => c,
                (None, None) => return Err(Error::InvalidParameter("frequency model needs --counts or --losses".into())),
            };
            let experts = match (&a.opinions, &a.xi) {
                (Some(o), Some(xi)) => Some(parse_xi(o, xi)?),
                _ => None,
            };
            if let Some(e) = &experts {
                ctx.note("xi", e.xi);
                ctx.note("xi_source", e.xi_source.as_str());
            }
            let ev = FrequencyEvidence::new(prior, counts.clone(), a.exposure.expect("clap"), experts)?;
            let mut t = ColumnTable::new(&["year", "n", "nu", "omega", "phi", "mean", "mode"]);
            for (k, (p, &n)) in gig_trajectory(&ev)?.iter().zip(&counts.counts).enumerate() {
                let mean = gig_mean(p, PhiZero::GammaLimit)?;
                t.push(vec![(k + 1) as f64, n as f64, p.nu, p.omega, p.phi, mean, gig_mode(p)]);
            }
            Ok(ctx.finish("three-source", None, vec!["poisson-gamma-gamma posterior (generalised inverse gaussian)"], t.to_text()))
        }
        ThreeSourceModel::Severity => {
            let prior = NormalParams::new(a.prior_mu.expect("clap"), a.prior_sd.expect("clap"))?;
            let sigma = a.sigma.expect("clap");
            let logs: Vec<f64> = match (&a.log_losses, from_file) {
                (Some(v), _) => v.clone(),
                (None, Some((_, losses))) => losses.iter().map(|x| x.ln()).collect(),
                (None, None) => return Err(Error::InvalidParameter("severity model needs --log-losses or --losses".into())),
            };
            let ev = SeverityEvidence::new(
                prior,
                LogLossSample::new(logs, sigma)?,
                a.expert_mus.clone().expect("clap"),
                a.expert_xi.expect("clap"),
            )?;
            let post = lnn_posterior(&ev);
            let mut body = String::new();
            kv(&mut body, "mu_mean", post.posterior.mean);
            kv(&mut body, "mu_sd", post.posterior.stdev);
            kv(&mut body, "weight_prior", post.weights[0]);
            kv(&mut body, "weight_internal", post.weights[1]);
            kv(&mut body, "weight_experts", post.weights[2]);
            Ok(ctx.finish("three-source", None, vec!["lognormal-normal-normal posterior"], body))
        }
    }
}

fn dirichlet(a: &DirichletArgs) -> Result<RunOutput> {
    let mut ctx = Ctx::new(a);
    let cfg = ScenarioConfig::from_toml(&ctx.digest.read(&a.scenario)?)?;
    let section = cfg
        .dirichlet
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("scenario file has no [dirichlet] section".into()))?;
    let prior = section.to_prior()?;
    let samples = match (&a.samples, ctx.cell_losses(&a.loss_file)?) {
        (Some(s), _) => s.clone(),
        (None, Some((_, losses))) => losses,
        (None, None) => Vec::new(),
    };
    let post = dp_posterior(&prior, &samples)?;
    ctx.note("observations", samples.len());
    let band = crate::dirichlet::dp_band_curve(&post, &a.grid, a.lower_q, a.upper_q)?;
    Ok(ctx.finish("dirichlet", None, vec!["dirichlet process posterior with beta marginal band"], write_band(&band)))
}

fn ds_combine(a: &DsCombineArgs) -> Result<RunOutput> {
    let mut ctx = Ctx::new(a);
    let x = parse_ds(&ctx.digest.read(&a.a)?)?;
    let y = parse_ds(&ctx.digest.read(&a.b)?)?;
    let c = dempster_combine(&x, &y, CombineOptions { acknowledge_mixed_kinds: a.acknowledge_mixed_kinds })?;
    let body = format!("# conflict: {}\n{}", c.conflict, write_ds(&c.structure));
    Ok(ctx.finish("ds-combine", None, vec!["dempster rule of combination"], body))
}

/// Numbers separated by whitespace or commas; `#` starts a comment line.
fn parse_numbers(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            out.push(tok.parse().map_err(|_| Error::Parse { line: i + 1, message: format!("not a number: '{tok}'") })?);
        }
    }
    Ok(out)
}

fn ks(a: &KsBoundsArgs) -> Result<RunOutput> {
    let mut ctx = Ctx::new(a);
    let samples = match (&a.samples, ctx.cell_losses(&a.loss_file)?) {
        (Some(path), _) => parse_numbers(&ctx.digest.read(path)?)?,
        (None, Some((_, losses))) => losses,
        (None, None) => return Err(Error::InvalidParameter("need --samples or --losses".into())),
    };
    let support = a.support_lo.zip(a.support_hi);
    let p = ks_bounds(&samples, a.alpha, support)?;
    ctx.note("sample_size", samples.len());
    Ok(ctx.finish("ks-bounds", None, vec!["kolmogorov-smirnov confidence band"], write_pbox(&p)))
}

fn var(a: &VarArgs) -> Result<RunOutput> {
    // stream count cannot change results, so it stays out of the digest
    let mut ctx = Ctx::new(&VarArgs { streams: 1, ..a.clone() });
    let cells = CellsConfig::from_toml(&ctx.digest.read(&a.cells)?)?.cells()?;
    let mode = match a.mode {
        ModeArg::PluginMean => SimulationMode::PluginMean,
        ModeArg::FullPredictive => SimulationMode::FullPredictive,
    };
    let aggregation = match a.aggregation {
        AggregationArg::SumOfVars => AggregationMode::SumOfVars,
        AggregationArg::SingleCell => AggregationMode::SingleCell,
    };
    let config = SimulationConfig::new(a.n_sims, a.seed, mode).with_streams(a.streams);
    let report = match (&a.histogram, a.bins) {
        (Some(path), Some(bins)) => {
            let sample = simulate_annual_loss(&cells, &config)?;
            std::fs::write(path, write_histogram(&histogram(&sample.total, bins)?))?;
            ctx.note("histogram", path.display());
            capital_from_sample(&cells, &sample, &config, a.q, aggregation)?
        }
        _ => compute_capital(&cells, &config, a.q, aggregation)?,
    };
    Ok(ctx.finish(
        "var",
        Some(a.seed),
        vec!["compound frequency-severity monte carlo", "order-statistic quantile with kernel density standard error"],
        report.to_text(),
    ))
}

fn sufficiency(a: &SufficiencyArgs) -> Result<RunOutput> {
    let ctx = Ctx::new(a);
    let severity: Box<dyn ContinuousDistribution> = match a.family {
        SeverityFamily::Lognormal => Box::new(LognormalParams::new(a.mu.expect("clap"), a.sigma.expect("clap"))?),
        SeverityFamily::Gamma => Box::new(GammaParams::new(a.shape.expect("clap"), a.scale.expect("clap"))?),
    };
    let mut body = String::new();
    if let Some(eps) = a.eps {
        kv(&mut body, "n", data_sufficiency(a.q, eps, severity.as_ref())?);
        kv(&mut body, "n_exact", data_sufficiency_exact(a.q, eps, severity.as_ref())?);
    }
    if let Some(n) = a.n {
        kv(&mut body, "eps", sufficiency_epsilon(a.q, n, severity.as_ref())?);
    }
    if let Some(en) = a.expected_n {
        kv(&mut body, "single_loss_level", single_loss_quantile_level(a.q, en)?);
    }
    Ok(ctx.finish("sufficiency", None, vec!["asymptotic order-statistic variance"], body))
}

fn parse_estimate(s: &str) -> Result<Estimate> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidParameter(format!("estimate must be value:variance[:source], got '{s}'"));
    let (value, variance) = match parts.as_slice() {
        [v, s2] | [v, s2, _] => (v.parse().map_err(|_| bad())?, s2.parse().map_err(|_| bad())?),
        _ => return Err(bad()),
    };
    let source: Source = match parts.get(2) {
        Some(src) => src.parse()?,
        None => Source::Internal,
    };
    Estimate::new(value, variance, source)
}

fn min_var(a: &MinVarArgs) -> Result<RunOutput> {
    let ctx = Ctx::new(a);
    let estimates = a.estimates.iter().map(|s| parse_estimate(s)).collect::<Result<Vec<_>>>()?;
    let c = min_variance_combine(&estimates)?;
    let mut body = String::new();
    kv(&mut body, "value", c.value);
    kv(&mut body, "variance", c.variance);
    kv(&mut body, "certain", c.certain);
    for (i, w) in c.weights.iter().enumerate() {
        kv(&mut body, &format!("weight.{i}"), w);
    }
    Ok(ctx.finish("min-var", None, vec!["minimum-variance unbiased linear combination"], body))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<RunOutput> {
        let cli = Cli::try_parse_from(std::iter::once("opcombine").chain(args.iter().copied()))
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        run(&cli)
    }

    #[test]
    fn sufficiency_command() {
        let out = run_args(&["sufficiency", "--family", "lognormal", "--mu", "0", "--sigma", "2", "--q", "0.999", "--eps", "0.1"])
            .unwrap();
        assert!(out.body.starts_with("n = 140986\n"), "{}", out.body);
        assert_eq!(out.audit.seed, None);
        assert_eq!(out.audit.digest.len(), 64);
    }

    #[test]
    fn missing_flag_is_usage_error() {
        let e = run_args(&["sufficiency", "--family", "lognormal", "--mu", "0", "--q", "0.999", "--eps", "0.1"]).unwrap_err();
        assert!(e.to_string().contains("--sigma"), "{e}");
        assert_eq!(main_with_args(["opcombine", "var", "--q", "0.999"]), 1);
        assert_eq!(main_with_args(["opcombine", "fit-prior", "--mean", "0.5", "--a", "0.75", "--b", "0.25", "--p", "0.5"]), 2);
    }

    #[test]
    fn min_var_command() {
        let out = run_args(&["min-var", "--estimate", "1:1", "--estimate", "5:3:external"]).unwrap();
        assert!(out.body.contains("value = 2\n"), "{}", out.body);
        assert!(run_args(&["min-var", "--estimate", "1:x"]).is_err());
    }

    #[test]
    fn numbers_file() {
        assert_eq!(parse_numbers("# header\n1, 2\n3\t4\n").unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(parse_numbers("1\nx\n"), Err(Error::Parse { line: 2, .. })));
    }
}
