//! JSON, CSV and binary layouts. Every JSON document carries
//! `"schema": "wdg/1"`; rationals are written as `"num/den"` strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use wdg_core::algebra::table::{MomentTable, ScqfReport};
use wdg_core::models::markov::{MarkovChain, PatternSpec, TimeState};
use wdg_core::models::pairings::{CrossingIndex, Pair, PairPartition};
use wdg_core::models::permutations::{alignment_dips, exceedance_sis, PositionIndex, StatTable};
use wdg_core::models::random_graphs::{Edge, SimpleGraph};
use wdg_core::models::ssep::{Configuration, SsepParams};
use wdg_core::montecarlo::{CltReport, ExponentFit};
use wdg_core::scalar::{format_rational, parse_rational};
use wdg_core::wdg::{BoundForm, CriterionDiagnostic, FitReport, ScanMode};
use wdg_core::wgraph::WeightedGraph;
use wdg_core::{Rational, Scalar};

use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = "wdg/1";

fn format_err(m: impl Into<String>) -> CliError {
    CliError::Format(m.into())
}

/// Accepts documents without a schema field; rejects other versions.
pub fn check_schema(v: &Value) -> CliResult<()> {
    match v.get("schema") {
        None => Ok(()),
        Some(Value::String(s)) if s == SCHEMA => Ok(()),
        Some(other) => Err(format_err(format!("unsupported schema {other}, expected \"{SCHEMA}\""))),
    }
}

/// A rational from `"num/den"`, an integer string, or a JSON number
/// (taken at its exact binary value).
pub fn parse_rational_value(v: &Value) -> CliResult<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| format_err(format!("not a rational: {s:?}"))),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(<Rational as Scalar>::from_i64(i))
            } else {
                let x = n.as_f64().ok_or_else(|| format_err("number out of range"))?;
                Rational::from_float(x).ok_or_else(|| format_err(format!("non-finite number {x}")))
            }
        }
        other => Err(format_err(format!("expected a rational, got {other}"))),
    }
}

/// Scalars as JSON: rationals as strings, floats as numbers.
pub trait ScalarJson: Scalar {
    fn to_json(&self) -> Value;
}

impl ScalarJson for Rational {
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
}

impl ScalarJson for f64 {
    fn to_json(&self) -> Value {
        float_json(*self)
    }
}

fn float_json(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(x.to_string()), Value::Number)
}

fn opt_float(x: Option<f64>) -> Value {
    x.map_or(Value::Null, float_json)
}

/// Family indices as JSON.
pub trait IndexJson {
    fn to_json(&self) -> Value;
}

macro_rules! number_index {
    ($($t:ty),*) => {$(
        impl IndexJson for $t {
            fn to_json(&self) -> Value {
                json!(self)
            }
        }
    )*};
}
number_index!(u32, u64, usize);

impl IndexJson for Pair {
    fn to_json(&self) -> Value {
        json!([self.0, self.1])
    }
}

impl IndexJson for CrossingIndex {
    fn to_json(&self) -> Value {
        json!([self.0, self.1, self.2, self.3])
    }
}

impl IndexJson for Edge {
    fn to_json(&self) -> Value {
        json!([self.0, self.1])
    }
}

impl IndexJson for PositionIndex {
    fn to_json(&self) -> Value {
        json!([self.0, self.1])
    }
}

impl IndexJson for TimeState {
    fn to_json(&self) -> Value {
        json!([self.0, self.1])
    }
}

impl<I: IndexJson> IndexJson for Vec<I> {
    fn to_json(&self) -> Value {
        Value::Array(self.iter().map(IndexJson::to_json).collect())
    }
}

fn index_list<I: IndexJson>(b: &[I]) -> Value {
    Value::Array(b.iter().map(IndexJson::to_json).collect())
}

pub fn fit_report_json<I: IndexJson, T: ScalarJson>(report: &FitReport<I, T>) -> Value {
    let form = match report.form {
        BoundForm::Cumulant => "cumulant",
        BoundForm::Components => "components",
    };
    let mode = match report.mode {
        ScanMode::Exhaustive => json!({ "kind": "exhaustive" }),
        ScanMode::Sampled { count, seed } => json!({ "kind": "sampled", "count": count, "seed": seed }),
    };
    let orders: Vec<Value> = report
        .orders
        .iter()
        .map(|o| {
            json!({
                "r": o.r,
                "scanned": o.scanned,
                "constant": o.constant.to_json(),
                "witness": o.witness.as_deref().map_or(Value::Null, index_list),
                "violations": o.violations.iter().map(|v| json!({
                    "multiset": index_list(&v.multiset),
                    "cumulant": v.cumulant.to_json(),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "kind": "fit_report",
        "form": form,
        "mode": mode,
        "certificate": report.certificate,
        "violation_count": report.violation_count(),
        "orders": orders,
    })
}

pub fn criterion_json(d: &CriterionDiagnostic) -> Value {
    json!({
        "schema": SCHEMA,
        "kind": "criterion",
        "s_values": d.s_values,
        "rows": d.rows.iter().map(|r| json!({
            "n": r.n, "r": r.r, "q": r.q, "sigma": r.sigma, "rho": r.rho,
        })).collect::<Vec<_>>(),
        "slopes": d.slopes,
        "trend": d.trend,
        "label": d.label,
    })
}

/// Input of `wdg criterion`: one row (n, R, Q, σ) per size.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct CriterionSeries {
    #[serde(default)]
    pub schema: Option<String>,
    pub rows: Vec<SeriesRow>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct SeriesRow {
    pub n: f64,
    pub r: f64,
    pub q: f64,
    pub sigma: f64,
}

impl CriterionSeries {
    pub fn from_json(v: &Value) -> CliResult<Self> {
        check_schema(v)?;
        Ok(serde_json::from_value(v.clone())?)
    }

    pub fn tuples(&self) -> Vec<(f64, f64, f64, f64)> {
        self.rows.iter().map(|r| (r.n, r.r, r.q, r.sigma)).collect()
    }
}

pub fn scqf_json(xs: &[u64], a: &[u64], report: &ScqfReport<Rational>, scaled: &[Rational]) -> Value {
    json!({
        "schema": SCHEMA,
        "kind": "scqf",
        "a": a,
        "entries": xs.iter().zip(&report.entries).zip(scaled).map(|((x, e), s)| json!({
            "X": x,
            "small_cumulant": e.small_cumulant.to_json(),
            "quasi_factorization": e.quasi_factorization.to_json(),
            "max_scaled_p_minus_one": s.to_json(),
            "violations": e.violations,
        })).collect::<Vec<_>>(),
        "unbounded": report.unbounded,
    })
}

fn exponent_json(e: &ExponentFit) -> Value {
    json!({ "fitted": float_json(e.fitted), "predicted": opt_float(e.predicted) })
}

pub fn clt_report_json(r: &CltReport) -> Value {
    json!({
        "schema": SCHEMA,
        "kind": "clt_report",
        "model": r.model,
        "statistic": r.statistic,
        "seed": r.seed,
        "jittered": r.jittered,
        "rows": r.rows.iter().map(|row| json!({
            "n": row.n,
            "count": row.count,
            "mean": float_json(row.mean),
            "variance": float_json(row.variance),
            "kappa3": float_json(row.kappa3),
            "kappa4": float_json(row.kappa4),
            "ks": opt_float(row.ks),
            "exact_mean": opt_float(row.exact_mean),
            "exact_variance": opt_float(row.exact_variance),
        })).collect::<Vec<_>>(),
        "variance_exponent": exponent_json(&r.variance_exponent),
        "kappa3_exponent": exponent_json(&r.kappa3_exponent),
        "kappa4_exponent": exponent_json(&r.kappa4_exponent),
    })
}

/// Per-n histograms, 64 bins over z ∈ [−4, 4] plus two overflow rows.
pub fn histograms_csv(r: &CltReport) -> String {
    let mut out = String::from("n,bin,z_lo,z_hi,count\n");
    for row in &r.rows {
        let h = &row.histogram;
        let width = (h.hi - h.lo) / h.counts.len() as f64;
        out.push_str(&format!("{},below,-inf,{},{}\n", row.n, h.lo, h.below));
        for (b, c) in h.counts.iter().enumerate() {
            let lo = h.lo + b as f64 * width;
            out.push_str(&format!("{},{b},{lo},{},{c}\n", row.n, lo + width));
        }
        out.push_str(&format!("{},above,{},inf,{}\n", row.n, h.hi, h.above));
    }
    out
}

fn subset_key(mask: u64) -> String {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// `{"l": ℓ, "u": {"": .., "1": .., "1,2": ..}}` with 1-based elements.
pub fn moment_table_to_json<T: ScalarJson>(t: &MomentTable<T>) -> Value {
    let mut u = Map::new();
    for (mask, v) in t.entries().iter().enumerate() {
        u.insert(subset_key(mask as u64), v.to_json());
    }
    json!({ "schema": SCHEMA, "l": t.order(), "u": u })
}

pub fn moment_table_from_json(v: &Value) -> CliResult<MomentTable<Rational>> {
    check_schema(v)?;
    let l = v.get("l").and_then(Value::as_u64).ok_or_else(|| format_err("missing integer field l"))? as usize;
    if l > 20 {
        return Err(format_err(format!("table order {l} too large")));
    }
    let u = v.get("u").and_then(Value::as_object).ok_or_else(|| format_err("missing object field u"))?;
    let mut entries: Vec<Option<Rational>> = vec![None; 1 << l];
    for (key, val) in u {
        let mut mask = 0u64;
        for part in key.split(',').filter(|p| !p.trim().is_empty()) {
            let i: usize = part.trim().parse().map_err(|_| format_err(format!("bad subset key {key:?}")))?;
            if i == 0 || i > l {
                return Err(format_err(format!("element {i} outside 1..={l} in key {key:?}")));
            }
            mask |= 1 << (i - 1);
        }
        entries[mask as usize] = Some(parse_rational_value(val)?);
    }
    let u = entries
        .into_iter()
        .enumerate()
        .map(|(m, e)| e.ok_or_else(|| format_err(format!("missing subset {{{}}}", subset_key(m as u64)))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(MomentTable::new(l, u)?)
}

/// A graph read from JSON: exact when every weight is a rational string
/// or an integer, float otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedGraph {
    Exact(WeightedGraph<Rational>),
    Float(WeightedGraph<f64>),
}

pub fn graph_to_json<T: ScalarJson>(g: &WeightedGraph<T>) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .into_iter()
        .map(|(u, v, w)| json!([u, v, w.to_json()]))
        .collect();
    json!({ "schema": SCHEMA, "vertices": g.labels(), "edges": edges })
}

pub fn graph_from_json(v: &Value) -> CliResult<ParsedGraph> {
    check_schema(v)?;
    let vertices = v.get("vertices").and_then(Value::as_array).ok_or_else(|| format_err("missing array field vertices"))?;
    let labels: Vec<String> = vertices
        .iter()
        .map(|x| match x {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect();
    let locate = |x: &Value| -> CliResult<usize> {
        match x {
            Value::Number(n) => n
                .as_u64()
                .map(|i| i as usize)
                .filter(|&i| i < labels.len())
                .ok_or_else(|| format_err(format!("vertex {n} out of range"))),
            Value::String(s) => labels
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| format_err(format!("unknown vertex {s:?}"))),
            other => Err(format_err(format!("bad vertex reference {other}"))),
        }
    };
    let raw = v.get("edges").and_then(Value::as_array).ok_or_else(|| format_err("missing array field edges"))?;
    let mut edges = Vec::with_capacity(raw.len());
    let mut float = false;
    for e in raw {
        let triple = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| format_err(format!("edge {e} is not [u, v, w]")))?;
        let (a, b) = (locate(&triple[0])?, locate(&triple[1])?);
        if triple[2].as_f64().is_some() && !triple[2].is_i64() && !triple[2].is_u64() {
            float = true;
        }
        edges.push((a, b, triple[2].clone()));
    }
    if float {
        let mut g = WeightedGraph::<f64>::with_labels(labels);
        for (a, b, w) in edges {
            let x = match &w {
                Value::String(_) => parse_rational_value(&w)?.to_f64(),
                other => other.as_f64().ok_or_else(|| format_err("bad weight"))?,
            };
            g.set_weight(a, b, x)?;
        }
        Ok(ParsedGraph::Float(g))
    } else {
        let mut g = WeightedGraph::<Rational>::with_labels(labels);
        for (a, b, w) in edges {
            g.set_weight(a, b, parse_rational_value(&w)?)?;
        }
        Ok(ParsedGraph::Exact(g))
    }
}

const DUMP_MAGIC: &[u8; 4] = b"WDGG";
const DUMP_VERSION: u8 = 1;

/// Binary dump of simple graphs on the same n vertices: magic `WDGG`,
/// version byte, n and count as little-endian u32, then per graph the
/// upper triangle (0,1), (0,2), .., (0,n−1), (1,2), .. packed LSB first
/// into ⌈n(n−1)/16⌉ bytes.
pub fn write_graph_dump(graphs: &[SimpleGraph]) -> CliResult<Vec<u8>> {
    let n = graphs.first().map_or(0, SimpleGraph::order);
    if graphs.iter().any(|g| g.order() != n) {
        return Err(CliError::Usage("all graphs in a dump need the same order".into()));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let bytes = bits.div_ceil(8);
    let mut out = Vec::with_capacity(13 + graphs.len() * bytes);
    out.extend_from_slice(DUMP_MAGIC);
    out.push(DUMP_VERSION);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&(graphs.len() as u32).to_le_bytes());
    for g in graphs {
        let mut buf = vec![0u8; bytes];
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if g.has_edge(u, v) {
                    buf[k / 8] |= 1 << (k % 8);
                }
                k += 1;
            }
        }
        out.extend_from_slice(&buf);
    }
    Ok(out)
}

pub fn read_graph_dump(data: &[u8]) -> CliResult<Vec<SimpleGraph>> {
    if data.len() < 13 || &data[..4] != DUMP_MAGIC {
        return Err(format_err("not a WDGG graph dump"));
    }
    if data[4] != DUMP_VERSION {
        return Err(format_err(format!("unsupported dump version {}", data[4])));
    }
    let word = |at: usize| u32::from_le_bytes([data[at], data[at + 1], data[at + 2], data[at + 3]]) as usize;
    let (n, count) = (word(5), word(9));
    let bytes = (n * n.saturating_sub(1) / 2).div_ceil(8);
    if data.len() != 13 + count * bytes {
        return Err(format_err(format!("dump length {} does not match {count} graphs on {n} vertices", data.len())));
    }
    let mut graphs = Vec::with_capacity(count);
    for c in 0..count {
        let buf = &data[13 + c * bytes..13 + (c + 1) * bytes];
        let mut g = SimpleGraph::empty(n);
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if buf[k / 8] >> (k % 8) & 1 == 1 {
                    g.add_edge(u, v);
                }
                k += 1;
            }
        }
        graphs.push(g);
    }
    Ok(graphs)
}

/// A pairing of [2n] as its 1-based partner array.
pub fn pairing_to_json(p: &PairPartition) -> Value {
    json!({ "schema": SCHEMA, "n": p.n(), "partner": p.partner_array() })
}

pub fn pairing_from_json(v: &Value) -> CliResult<PairPartition> {
    check_schema(v)?;
    let partner: Vec<u32> = serde_json::from_value(
        v.get("partner").cloned().ok_or_else(|| format_err("missing field partner"))?,
    )?;
    Ok(PairPartition::from_partner(partner)?)
}

/// `{alpha, beta, gamma, delta, N}` with rational strings or numbers.
pub fn ssep_config_from_json(v: &Value) -> CliResult<SsepParams<Rational>> {
    check_schema(v)?;
    let get = |k: &str| -> CliResult<Rational> {
        parse_rational_value(v.get(k).ok_or_else(|| format_err(format!("missing field {k}")))?)
    };
    let n = v.get("N").and_then(Value::as_u64).ok_or_else(|| format_err("missing integer field N"))?;
    Ok(SsepParams::new(get("alpha")?, get("beta")?, get("gamma")?, get("delta")?, n as usize)?)
}

pub fn ssep_config_to_json(p: &SsepParams<Rational>) -> Value {
    json!({
        "schema": SCHEMA,
        "alpha": p.alpha.to_json(),
        "beta": p.beta.to_json(),
        "gamma": p.gamma.to_json(),
        "delta": p.delta.to_json(),
        "N": p.n,
    })
}

/// Site occupations as a string of 0 and 1, site 1 first.
pub fn config_to_bits(c: &Configuration) -> String {
    c.iter().map(|&x| if x == 1 { '1' } else { '0' }).collect()
}

pub fn bits_to_config(s: &str) -> CliResult<Configuration> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(format_err(format!("configuration character {other:?}"))),
        })
        .collect()
}

/// A chain config: state labels, transition matrix and optional pattern.
#[derive(Clone, Debug)]
pub struct ChainConfig {
    pub labels: Vec<String>,
    pub chain: MarkovChain,
    pub pattern: Option<PatternSpec>,
}

impl ChainConfig {
    pub fn state(&self, label: &str) -> CliResult<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .or_else(|| label.parse::<usize>().ok().filter(|&i| i < self.labels.len()))
            .ok_or_else(|| format_err(format!("unknown state {label:?}")))
    }
}

/// `{states: [..], P: [[..]], pattern: {blocks: [..]}}`; a block is an
/// array of state labels, or a string whose characters are labels.
pub fn chain_config_from_json(v: &Value) -> CliResult<ChainConfig> {
    check_schema(v)?;
    let labels: Vec<String> = serde_json::from_value(v.get("states").cloned().ok_or_else(|| format_err("missing field states"))?)?;
    let rows = v.get("P").and_then(Value::as_array).ok_or_else(|| format_err("missing array field P"))?;
    let p = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| format_err("P rows must be arrays"))?
                .iter()
                .map(parse_rational_value)
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    if p.len() != labels.len() {
        return Err(format_err(format!("{} states but {} rows in P", labels.len(), p.len())));
    }
    let chain = MarkovChain::new(p)?;
    let mut cfg = ChainConfig { labels, chain, pattern: None };
    if let Some(pat) = v.get("pattern") {
        let blocks = pat.get("blocks").and_then(Value::as_array).ok_or_else(|| format_err("pattern needs blocks"))?;
        let mut out = Vec::with_capacity(blocks.len());
        for b in blocks {
            let block = match b {
                Value::String(s) => s.chars().map(|c| cfg.state(&c.to_string())).collect::<CliResult<Vec<_>>>()?,
                Value::Array(a) => a
                    .iter()
                    .map(|x| cfg.state(x.as_str().ok_or_else(|| format_err("block letters must be strings"))?))
                    .collect::<CliResult<Vec<_>>>()?,
                other => return Err(format_err(format!("bad block {other}"))),
            };
            out.push(block);
        }
        cfg.pattern = Some(PatternSpec::new(out)?);
    }
    Ok(cfg)
}

pub fn chain_config_to_json(cfg: &ChainConfig) -> Value {
    let mut v = json!({
        "schema": SCHEMA,
        "states": cfg.labels,
        "P": cfg.chain.transition().iter().map(|r| r.iter().map(ScalarJson::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    if let Some(p) = &cfg.pattern {
        v["pattern"] = json!({
            "blocks": p.blocks().iter().map(|b| b.iter().map(|&s| cfg.labels[s].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
    }
    v
}

/// Generator form of a statistic table.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct TableGenerator {
    #[serde(default)]
    pub schema: Option<String>,
    pub generator: String,
    pub n: usize,
}

impl TableGenerator {
    pub fn build(&self) -> CliResult<StatTable<Rational>> {
        match self.generator.as_str() {
            "exceedance" => Ok(exceedance_sis(self.n)),
            "alignment" => Ok(alignment_dips(self.n)),
            other => Err(format_err(format!("unknown table generator {other:?}"))),
        }
    }
}

/// Dense CSV: a SIS table as n rows of n values a(i, ·); a DIPS table as
/// n² rows indexed by (i, j) with n² columns indexed by (k, l).
pub fn stat_table_to_csv(t: &StatTable<Rational>) -> String {
    let n = t.n();
    let mut out = String::new();
    let mut line = |cells: Vec<String>| {
        out.push_str(&cells.join(","));
        out.push('\n');
    };
    match t {
        StatTable::Sis { .. } => {
            for i in 1..=n {
                line((1..=n).map(|l| format_rational(t.a(i, l))).collect());
            }
        }
        StatTable::Dips { .. } => {
            for i in 1..=n {
                for j in 1..=n {
                    line(
                        (1..=n)
                            .flat_map(|k| (1..=n).map(move |l| (k, l)))
                            .map(|(k, l)| format_rational(t.zeta(i, j, k, l)))
                            .collect(),
                    );
                }
            }
        }
    }
    out
}

pub fn stat_table_from_csv(s: &str, dips: bool) -> CliResult<StatTable<Rational>> {
    let rows: Vec<Vec<Rational>> = s
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .map(|c| parse_rational(c).ok_or_else(|| format_err(format!("bad CSV cell {c:?}"))))
                .collect()
        })
        .collect::<CliResult<_>>()?;
    let r = rows.len();
    if rows.iter().any(|row| row.len() != r) {
        return Err(format_err("statistic table CSV must be square"));
    }
    let flat: Vec<Rational> = rows.into_iter().flatten().collect();
    if !dips {
        return Ok(StatTable::sis(r, flat)?);
    }
    let root = (1..=r).find(|k| k * k >= r).unwrap_or(0);
    if root * root != r {
        return Err(format_err(format!("a DIPS CSV needs a square number of rows, got {r}")));
    }
    Ok(StatTable::dips(root, flat)?)
}

/// A table given as generator JSON, or as CSV of the given kind.
pub fn stat_table_from_text(text: &str, dips: bool) -> CliResult<StatTable<Rational>> {
    match serde_json::from_str::<Value>(text) {
        Ok(v) => {
            check_schema(&v)?;
            let g: TableGenerator = serde_json::from_value(v)?;
            g.build()
        }
        Err(_) => stat_table_from_csv(text, dips),
    }
}

/// Parses a comma-separated list.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse().map_err(|_| CliError::Usage(format!("cannot parse {p:?} in list {s:?}"))))
        .collect()
}

/// Sorted map of labelled values, for reports.
pub fn labelled<T: ScalarJson>(entries: &[(String, T)]) -> Value {
    let m: BTreeMap<&str, Value> = entries.iter().map(|(k, v)| (k.as_str(), v.to_json())).collect();
    json!(m)
}
