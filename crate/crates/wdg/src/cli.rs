//! The `wdg` command-line tool. Each subcommand parses its inputs, calls
//! the library and prints the JSON serialization of the result.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde_json::{json, Value};

use wdg_core::algebra::cumulant::cumulant_of;
use wdg_core::algebra::table::{factorial_scaled_deviation, reduced_factorial_table, scqf_report, uniform_graph};
use wdg_core::models::markov::{classical_cumulant_two_ways, markov_moment_oracle, markov_wdg, pattern_family, TimeState};
use wdg_core::models::pairings::{
    crossings_moments_exact, crossings_product_family, crossings_variance_closed_form, crossings_wdg, pairing_wdg,
    CrossingsMode, Pair,
};
use wdg_core::models::permutations::{perm_pairs_wdg, perm_wdg, PositionIndex};
use wdg_core::models::random_graphs::{gnm_wdg, subgraph_variance, subgraph_wdg, Edge, GnmParams, GraphPattern, VarianceMode};
use wdg_core::models::ssep::{ssep_wdg, SsepParams};
use wdg_core::montecarlo::Statistic;
use wdg_core::scalar::parse_rational;
use wdg_core::wdg::{criterion_diagnostic, verify_with, BoundForm, ScanMode, WdgCandidate, FLOAT_TOLERANCE};
use wdg_core::wgraph::{mwst, mwst_bruteforce, mwst_log};
use wdg_core::Rational;

use crate::error::{CliError, CliResult};
use crate::formats::{
    chain_config_from_json, clt_report_json, criterion_json, fit_report_json, graph_from_json, histograms_csv,
    parse_list, scqf_json, ssep_config_from_json, ChainConfig, CriterionSeries, IndexJson, ParsedGraph, ScalarJson,
    SCHEMA,
};
use crate::runner;

#[derive(Parser, Debug)]
#[command(name = "wdg", version, about = "Joint cumulants, weighted dependency graphs and CLT experiments")]
pub struct Cli {
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fit the cumulant-bound constants of a model's candidate graph
    Verify(VerifyArgs),
    /// Exact joint cumulant of model variables
    Cumulant(CumulantArgs),
    /// Maximum spanning-tree weight of a weighted graph
    Mwst(MwstArgs),
    /// Small-cumulant / quasi-factorization report for factorial tables
    Scqf(ScqfArgs),
    /// Exact or sampled variance of a model statistic
    Variance(VarianceArgs),
    /// Seeded Monte Carlo normality experiment
    Clt(CltArgs),
    /// Finite-size diagnostic of the normality criterion
    Criterion(CriterionArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Pairings,
    Gnm,
    Perm,
    Ssep,
    Markov,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Numeric {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Cumulant,
    Components,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    /// Size: pairs, vertices, permutation size, sites, or horizon
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of edges of G(n, m)
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    /// SSEP config JSON
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Markov chain config JSON
    #[arg(long)]
    pub chain: Option<PathBuf>,
    /// Derived family: crossings, crossings-product, triangles, pairs, pattern
    #[arg(long)]
    pub family: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 3)]
    pub rmax: usize,
    /// exhaustive or sampled:K
    #[arg(long, default_value = "exhaustive")]
    pub scan: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "cumulant")]
    pub form: Form,
    #[arg(long, value_enum, default_value = "exact")]
    pub numeric: Numeric,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CumulantArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// pairings 1-2,3-4; gnm 0-1,1-2; perm 1:2,3:4; ssep 1,3; markov 0:a,3:b
    #[arg(long)]
    pub indices: String,
}

#[derive(Args, Debug)]
pub struct MwstArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Also enumerate all spanning trees (at most 9 vertices)
    #[arg(long)]
    pub bruteforce: bool,
}

#[derive(Args, Debug)]
pub struct ScqfArgs {
    /// Use the factorial tables u_Δ = (X − Σ_{i∈Δ} a_i)!
    #[arg(long)]
    pub factorial: bool,
    #[arg(long = "X")]
    pub x: String,
    #[arg(long)]
    pub a: String,
}

#[derive(Args, Debug)]
pub struct VarianceArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: Option<usize>,
    /// pairings: class_sum or bruteforce; gnm: exhaustive or montecarlo:K
    #[arg(long, default_value = "class_sum")]
    pub mode: String,
    /// gnm pattern: edge, triangle or path:K
    #[arg(long, default_value = "triangle")]
    pub pattern: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct CltArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub statistic: String,
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Directory receiving report.json and histograms.csv
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CriterionArgs {
    #[arg(long)]
    pub series: PathBuf,
    #[arg(long, default_value = "3,4")]
    pub s: String,
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return 2;
        }
    };
    match run(&cli) {
        Ok(Outcome { output, violation }) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{output}");
            match violation {
                Some(msg) => {
                    eprintln!("{}", CliError::Violation(msg).to_json());
                    1
                }
                None => 0,
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

/// Printed output and an optional violation message (exit code 1).
pub struct Outcome {
    pub output: String,
    pub violation: Option<String>,
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).unwrap_or_default()
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let ok = |v: Value| Outcome { output: pretty(&v), violation: None };
    match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Cumulant(a) => cumulant(a).map(ok),
        Command::Mwst(a) => mwst_cmd(a).map(ok),
        Command::Scqf(a) => scqf(a).map(ok),
        Command::Variance(a) => variance(a).map(ok),
        Command::Clt(a) => clt(a, cli.workers).map(ok),
        Command::Criterion(a) => criterion(a).map(ok),
    }
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

fn need<T: Copy>(x: Option<T>, flag: &str) -> CliResult<T> {
    x.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn rational_flag(x: &Option<String>, flag: &str) -> CliResult<Rational> {
    let s = x.as_deref().ok_or_else(|| CliError::Usage(format!("missing --{flag}")))?;
    parse_rational(s).ok_or_else(|| CliError::Usage(format!("--{flag} is not a rational: {s:?}")))
}

impl ModelArgs {
    fn ssep(&self) -> CliResult<SsepParams<Rational>> {
        if let Some(p) = &self.config {
            let params = ssep_config_from_json(&read_json(p)?)?;
            return Ok(match self.n {
                Some(n) => params.with_sites(n),
                None => params,
            });
        }
        Ok(SsepParams::new(
            rational_flag(&self.alpha, "alpha")?,
            rational_flag(&self.beta, "beta")?,
            rational_flag(&self.gamma, "gamma")?,
            rational_flag(&self.delta, "delta")?,
            need(self.n, "n")?,
        )?)
    }

    fn chain(&self) -> CliResult<ChainConfig> {
        match &self.chain {
            Some(p) => chain_config_from_json(&read_json(p)?),
            None => Ok(ChainConfig {
                labels: vec!["a".into(), "b".into()],
                chain: wdg_core::montecarlo::default_chain(),
                pattern: Some(wdg_core::models::markov::PatternSpec::new(vec![vec![0], vec![1]])?),
            }),
        }
    }

    fn gnm(&self) -> CliResult<GnmParams> {
        Ok(GnmParams::new(need(self.n, "n")?, need(self.m, "m")?)?)
    }

    fn family(&self) -> Option<&str> {
        self.family.as_deref()
    }
}

fn parse_scan(s: &str, seed: u64) -> CliResult<ScanMode> {
    match s.split_once(':') {
        None if s == "exhaustive" => Ok(ScanMode::Exhaustive),
        Some(("sampled", k)) => Ok(ScanMode::Sampled {
            count: k.parse().map_err(|_| CliError::Usage(format!("bad sample count in --scan {s:?}")))?,
            seed,
        }),
        _ => Err(CliError::Usage(format!("--scan must be exhaustive or sampled:K, got {s:?}"))),
    }
}

fn fit_json<C>(c: &C, a: &VerifyArgs) -> CliResult<(Value, usize)>
where
    C: WdgCandidate,
    C::Index: IndexJson,
    C::Value: ScalarJson,
{
    let form = match a.form {
        Form::Cumulant => BoundForm::Cumulant,
        Form::Components => BoundForm::Components,
    };
    let report = verify_with(c, a.rmax, parse_scan(&a.scan, a.seed)?, form, FLOAT_TOLERANCE)?;
    Ok((fit_report_json(&report), report.violation_count()))
}

fn verify_typed<T: ScalarJson>(a: &VerifyArgs) -> CliResult<(Value, usize)> {
    let m = &a.model;
    match (m.model, m.family()) {
        (Model::Pairings, None | Some("pairs")) => fit_json(&pairing_wdg::<T>(need(m.n, "n")?), a),
        (Model::Pairings, Some("crossings")) => fit_json(&crossings_wdg::<T>(need(m.n, "n")?), a),
        (Model::Pairings, Some("crossings-product")) => fit_json(&crossings_product_family::<T>(need(m.n, "n")?)?, a),
        (Model::Gnm, None | Some("edges")) => fit_json(&gnm_wdg::<T>(m.gnm()?)?, a),
        (Model::Gnm, Some("triangles")) => fit_json(&subgraph_wdg::<T>(&GraphPattern::triangle(), m.gnm()?)?, a),
        (Model::Perm, None | Some("positions")) => fit_json(&perm_wdg::<T>(need(m.n, "n")?), a),
        (Model::Perm, Some("pairs")) => fit_json(&perm_pairs_wdg::<T>(need(m.n, "n")?)?, a),
        (Model::Ssep, None | Some("sites")) => fit_json(&ssep_wdg::<T>(&m.ssep()?.map(T::from_rational)), a),
        (Model::Markov, None | Some("states")) => fit_json(&markov_wdg::<T>(&m.chain()?.chain, need(m.n, "n")? as u64), a),
        (Model::Markov, Some("pattern")) => {
            let cfg = m.chain()?;
            let pattern = cfg.pattern.ok_or_else(|| CliError::Usage("chain config has no pattern".into()))?;
            fit_json(&pattern_family::<T>(&cfg.chain, &pattern, need(m.n, "n")? as u64)?, a)
        }
        (model, Some(f)) => Err(CliError::Usage(format!("unknown family {f:?} for {model:?}"))),
    }
}

fn verify(a: &VerifyArgs) -> CliResult<Outcome> {
    let (mut report, violations) = match a.numeric {
        Numeric::Exact => verify_typed::<Rational>(a)?,
        Numeric::Float => verify_typed::<f64>(a)?,
    };
    report["model"] = json!(format!("{:?}", a.model.model).to_lowercase());
    let output = pretty(&report);
    if let Some(p) = &a.out {
        fs::write(p, format!("{output}\n"))?;
    }
    let violation = (violations > 0).then(|| format!("{violations} hard violations of the cumulant bound"));
    Ok(Outcome { output, violation })
}

fn split_pair<A: std::str::FromStr, B: std::str::FromStr>(s: &str, sep: char) -> CliResult<(A, B)> {
    let bad = || CliError::Usage(format!("cannot parse index {s:?}"));
    let (x, y) = s.split_once(sep).ok_or_else(bad)?;
    Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
}

fn index_items(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

fn cumulant(a: &CumulantArgs) -> CliResult<Value> {
    let m = &a.model;
    let (indices, value): (Value, Rational) = match m.model {
        Model::Pairings => {
            let b = index_items(&a.indices)
                .map(|x| split_pair::<u32, u32>(x, '-').map(|(p, q)| Pair::new(p, q)))
                .collect::<CliResult<Vec<_>>>()?;
            (b.to_json(), cumulant_of(&pairing_wdg::<Rational>(need(m.n, "n")?), &b)?)
        }
        Model::Gnm => {
            let b = index_items(&a.indices)
                .map(|x| {
                    let (p, q) = split_pair::<u32, u32>(x, '-')?;
                    Ok(Edge::new(p, q)?)
                })
                .collect::<CliResult<Vec<_>>>()?;
            (b.to_json(), cumulant_of(&gnm_wdg::<Rational>(m.gnm()?)?, &b)?)
        }
        Model::Perm => {
            let b = index_items(&a.indices)
                .map(|x| split_pair::<u32, u32>(x, ':').map(|(i, l)| PositionIndex(i, l)))
                .collect::<CliResult<Vec<_>>>()?;
            (b.to_json(), cumulant_of(&perm_wdg::<Rational>(need(m.n, "n")?), &b)?)
        }
        Model::Ssep => {
            let b: Vec<u32> = parse_list(&a.indices)?;
            (b.to_json(), cumulant_of(&ssep_wdg::<Rational>(&m.ssep()?), &b)?)
        }
        Model::Markov => {
            let cfg = m.chain()?;
            let b = index_items(&a.indices)
                .map(|x| {
                    let (t, s) = x.split_once(':').ok_or_else(|| CliError::Usage(format!("markov index {x:?} is not time:state")))?;
                    let t: u64 = t.parse().map_err(|_| CliError::Usage(format!("bad time in {x:?}")))?;
                    Ok(TimeState(t, cfg.state(s)?))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let (value, _) = classical_cumulant_two_ways(&markov_moment_oracle::<Rational>(&cfg.chain), &b)?;
            (b.to_json(), value)
        }
    };
    Ok(json!({
        "schema": SCHEMA,
        "kind": "cumulant",
        "model": format!("{:?}", m.model).to_lowercase(),
        "indices": indices,
        "value": value.to_json(),
    }))
}

fn mwst_cmd(a: &MwstArgs) -> CliResult<Value> {
    let mut out = json!({ "schema": SCHEMA, "kind": "mwst" });
    match graph_from_json(&read_json(&a.graph)?)? {
        ParsedGraph::Exact(g) => {
            out["value"] = mwst(&g)?.to_json();
            if a.bruteforce {
                out["bruteforce"] = mwst_bruteforce(&g)?.to_json();
            }
        }
        ParsedGraph::Float(g) => {
            out["value"] = mwst(&g)?.to_json();
            out["log_path"] = mwst_log(&g)?.to_json();
            if a.bruteforce {
                out["bruteforce"] = mwst_bruteforce(&g)?.to_json();
            }
        }
    }
    Ok(out)
}

fn scqf(a: &ScqfArgs) -> CliResult<Value> {
    if !a.factorial {
        return Err(CliError::Usage("only --factorial tables are built in".into()));
    }
    let xs: Vec<u64> = parse_list(&a.x)?;
    let avec: Vec<u64> = parse_list(&a.a)?;
    let mut tables = Vec::new();
    let mut graphs = Vec::new();
    let mut scaled = Vec::new();
    for &x in &xs {
        tables.push(reduced_factorial_table(x, &avec)?);
        graphs.push(uniform_graph(avec.len(), wdg_core::rat(1, x as i64))?);
        scaled.push(factorial_scaled_deviation(x, &avec)?);
    }
    let report = scqf_report(&tables, &graphs)?;
    Ok(scqf_json(&xs, &avec, &report, &scaled))
}

fn parse_pattern(s: &str) -> CliResult<GraphPattern> {
    match s.split_once(':') {
        None if s == "edge" => Ok(GraphPattern::edge()),
        None if s == "triangle" => Ok(GraphPattern::triangle()),
        Some(("path", k)) => Ok(GraphPattern::path(k.parse().map_err(|_| CliError::Usage(format!("bad path length {k:?}")))?)?),
        _ => Err(CliError::Usage(format!("unknown pattern {s:?}"))),
    }
}

fn variance(a: &VarianceArgs) -> CliResult<Value> {
    match a.model {
        Model::Pairings => {
            let mode = match a.mode.as_str() {
                "class_sum" => CrossingsMode::ClassSum,
                "bruteforce" => CrossingsMode::Bruteforce,
                other => return Err(CliError::Usage(format!("pairings variance mode {other:?}"))),
            };
            let (mean, var) = crossings_moments_exact(a.n, mode)?;
            let n = a.n as i64;
            let printed = wdg_core::rat(n * (n - 1) * (n - 3), 45);
            Ok(json!({
                "schema": SCHEMA,
                "kind": "variance",
                "model": "pairings",
                "statistic": "crossings",
                "n": a.n,
                "mode": a.mode,
                "mean": mean.to_json(),
                "variance": var.to_json(),
                "closed_form": crossings_variance_closed_form(n).to_json(),
                "printed_form": printed.to_json(),
                "matches_closed_form": var == crossings_variance_closed_form(n),
                "matches_printed_form": var == printed,
            }))
        }
        Model::Gnm => {
            let params = GnmParams::new(a.n, need(a.m, "m")?)?;
            let h = parse_pattern(&a.pattern)?;
            let mode = match a.mode.split_once(':') {
                None if a.mode == "exhaustive" => VarianceMode::Exhaustive,
                Some(("montecarlo", k)) => VarianceMode::MonteCarlo {
                    samples: k.parse().map_err(|_| CliError::Usage(format!("bad sample count {k:?}")))?,
                    seed: a.seed,
                },
                _ => return Err(CliError::Usage(format!("gnm variance mode {:?}", a.mode))),
            };
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
            let r = subgraph_variance(&h, params, mode, &mut rng)?;
            Ok(json!({
                "schema": SCHEMA,
                "kind": "variance",
                "model": "gnm",
                "statistic": a.pattern,
                "n": a.n,
                "m": params.m,
                "mode": a.mode,
                "variance": r.variance.to_json(),
                "exact": r.exact.as_ref().map(ScalarJson::to_json),
                "lower_bound_scale": r.lower_bound_scale.to_json(),
                "ratio": r.ratio.map(|x| x.to_json()),
            }))
        }
        other => Err(CliError::Usage(format!("no variance oracle for {other:?}"))),
    }
}

fn clt(a: &CltArgs, workers: Option<usize>) -> CliResult<Value> {
    let stat = Statistic::lookup(&a.model, &a.statistic)?;
    let grid: Vec<usize> = parse_list(&a.grid)?;
    let pool = runner::pool(workers)?;
    let report = runner::clt_experiment(&pool, &stat, &grid, a.samples, a.seed)?;
    let v = clt_report_json(&report);
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), format!("{}\n", pretty(&v)))?;
        fs::write(dir.join("histograms.csv"), histograms_csv(&report))?;
    }
    Ok(v)
}

fn criterion(a: &CriterionArgs) -> CliResult<Value> {
    let series = CriterionSeries::from_json(&read_json(&a.series)?)?;
    let s: Vec<f64> = parse_list(&a.s)?;
    Ok(criterion_json(&criterion_diagnostic(&series.tuples(), &s)?))
}
