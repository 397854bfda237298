//! Seeded sampling of model statistics, plug-in cumulant estimates and
//! normality diagnostics.
//!
//! Every replica draws from its own ChaCha8 stream keyed by (seed,
//! statistic, n) and selected by the replica index, so a batch is the same
//! whichever way replicas are split across workers.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::models::markov::{count_pattern, longest_run, sample_chain, MarkovChain, PatternSpec};
use crate::models::pairings::{count_crossings, crossings_moments_exact, sample_pairing, CrossingsMode};
use crate::models::permutations::{cumulants_of_counts, exceedance_prefix_counts, lattice_floor, sample_permutation};
use crate::models::random_graphs::{sample_gnm, GnmParams};
use crate::models::ssep::{gillespie, product_start, SsepParams};
use crate::scalar::{rat, Scalar};
use crate::wdg::fit_loglog;

/// Smallest batch accepted by the estimators.
pub const MIN_SAMPLES: usize = 10;

/// Bins of the fixed histogram layout, spanning z ∈ [−4, 4].
pub const HISTOGRAM_BINS: usize = 64;

/// KS envelope at 10⁴ samples used by the acceptance runs.
pub const KS_THRESHOLD: f64 = 0.03;

/// The RNG of one replica.
pub fn replica_rng(seed: u64, stream_key: u64, replica: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream_key.to_le_bytes());
    key[16..24].copy_from_slice(b"wdg/mc01");
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replica);
    rng
}

/// FNV-1a hash of a tag and a size, used as stream key.
pub fn stream_key(tag: &str, n: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes().chain(n.to_le_bytes()) {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Plug-in cumulants κ̂_1..κ̂_rmax from sample central moments:
/// κ̂₂ = m₂, κ̂₃ = m₃, κ̂₄ = m₄ − 3m₂². Biased by O(1/count).
pub fn empirical_cumulants(values: &[f64], rmax: usize) -> Result<Vec<f64>> {
    if values.len() < MIN_SAMPLES {
        return Err(Error::Input(alloc::format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            values.len()
        )));
    }
    if !(1..=4).contains(&rmax) {
        return Err(Error::Input(alloc::format!("rmax must be in 1..=4, got {rmax}")));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let mut m = [0.0f64; 5];
    for &x in values {
        let d = x - mean;
        let d2 = d * d;
        m[2] += d2;
        m[3] += d2 * d;
        m[4] += d2 * d2;
    }
    for v in &mut m[2..] {
        *v /= n;
    }
    let all = [mean, m[2], m[3], m[4] - 3.0 * m[2] * m[2]];
    Ok(all[..rmax].to_vec())
}

/// κ̂₃/κ̂₂^{3/2} and κ̂₄/κ̂₂².
pub fn standardized_cumulants(values: &[f64]) -> Result<(f64, f64)> {
    let k = empirical_cumulants(values, 4)?;
    if !(k[1] > 0.0) {
        return Err(Error::Domain("zero sample variance".into()));
    }
    Ok((k[2] / libm::pow(k[1], 1.5), k[3] / (k[1] * k[1])))
}

/// Delete-one jackknife standard error of the plug-in variance.
pub fn jackknife_variance_se(values: &[f64]) -> Result<f64> {
    if values.len() < MIN_SAMPLES {
        return Err(Error::Input("too few samples for the jackknife".into()));
    }
    let n = values.len() as f64;
    let s1: f64 = values.iter().sum();
    let s2: f64 = values.iter().map(|x| x * x).sum();
    let loo: Vec<f64> = values
        .iter()
        .map(|x| {
            let m = (s1 - x) / (n - 1.0);
            (s2 - x * x) / (n - 1.0) - m * m
        })
        .collect();
    let bar = loo.iter().sum::<f64>() / n;
    let ss: f64 = loo.iter().map(|v| (v - bar) * (v - bar)).sum();
    Ok(libm::sqrt((n - 1.0) / n * ss))
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / core::f64::consts::SQRT_2)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Standardization {
    /// sample mean and plug-in variance
    Empirical,
    Exact { mean: f64, variance: f64 },
}

/// sup_x |F̂(x) − Φ(x)| for the standardized values.
pub fn ks_normal(values: &[f64], standardization: Standardization) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Input("empty batch".into()));
    }
    let (mean, var) = match standardization {
        Standardization::Empirical => {
            let k = empirical_cumulants(values, 2)?;
            (k[0], k[1])
        }
        Standardization::Exact { mean, variance } => (mean, variance),
    };
    if !(var > 0.0) {
        return Err(Error::Domain("zero variance".into()));
    }
    let sd = libm::sqrt(var);
    let mut z: Vec<f64> = values.iter().map(|x| (x - mean) / sd).collect();
    z.sort_by(f64::total_cmp);
    let n = z.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in z.iter().enumerate() {
        let f = normal_cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Randomized continuity correction: X + U − 1/2 with U uniform on [0, 1).
pub fn jitter<R: Rng + ?Sized>(x: f64, rng: &mut R) -> f64 {
    x + rng.gen::<f64>() - 0.5
}

/// Fixed 64-bin histogram of standardized values over [−4, 4]; values
/// outside are counted in `below` and `above`.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
}

pub fn histogram64(values: &[f64], mean: f64, sd: f64) -> Histogram {
    let (lo, hi) = (-4.0, 4.0);
    let mut h = Histogram { lo, hi, counts: vec![0; HISTOGRAM_BINS], below: 0, above: 0 };
    let width = (hi - lo) / HISTOGRAM_BINS as f64;
    for x in values {
        let z = (x - mean) / sd;
        if z < lo {
            h.below += 1;
        } else if z >= hi {
            h.above += 1;
        } else {
            let b = ((z - lo) / width) as usize;
            h.counts[b.min(HISTOGRAM_BINS - 1)] += 1;
        }
    }
    h
}

/// Parameters of the SSEP runs: rates (α, β, γ, δ) and burn-in as a
/// multiple of N² time units.
#[derive(Clone, Debug, PartialEq)]
pub struct SsepRun {
    pub rates: [f64; 4],
    pub burn_in_factor: f64,
}

impl Default for SsepRun {
    fn default() -> Self {
        SsepRun { rates: [1.0, 1.0 / 3.0, 0.5, 2.0], burn_in_factor: 0.1 }
    }
}

/// A registered statistic of a model.
#[derive(Clone, Debug)]
pub enum Statistic {
    /// crossings of a uniform pairing with n pairs
    Crossings,
    /// triangles in G(n, m) with m = round(p·C(n, 2))
    Triangles { p: f64 },
    /// #{i ≤ ⌊nt⌋ : π(i) ≥ i}
    Exceedances { t: f64 },
    /// particles in the N sites after burn-in from the product measure
    SsepParticles(SsepRun),
    /// occurrences of a subword pattern in M_0..M_N
    MarkovPattern { chain: MarkovChain, pattern: PatternSpec },
    /// longest run of `state` in M_0..M_N (non-Gaussian control)
    MarkovLongestRun { chain: MarkovChain, state: usize },
}

/// Registered (model, statistic) tags.
pub const REGISTRY: [(&str, &str); 6] = [
    ("pairings", "crossings"),
    ("gnm", "triangles"),
    ("perm", "exceedances"),
    ("ssep", "particles"),
    ("markov", "pattern"),
    ("markov", "longest_run"),
];

/// The two-state chain P = [[7/10, 3/10], [1/5, 4/5]] (λ₂ = 1/2).
pub fn default_chain() -> MarkovChain {
    MarkovChain::new(vec![vec![rat(7, 10), rat(3, 10)], vec![rat(1, 5), rat(4, 5)]])
        .unwrap_or_else(|_| unreachable!("fixed chain is primitive"))
}

impl Statistic {
    /// Default parameters for a registered pair.
    pub fn lookup(model: &str, statistic: &str) -> Result<Self> {
        Ok(match (model, statistic) {
            ("pairings", "crossings") => Statistic::Crossings,
            ("gnm", "triangles") => Statistic::Triangles { p: 0.3 },
            ("perm", "exceedances") => Statistic::Exceedances { t: 0.5 },
            ("ssep", "particles") => Statistic::SsepParticles(SsepRun::default()),
            ("markov", "pattern") => Statistic::MarkovPattern {
                chain: default_chain(),
                pattern: PatternSpec::new(vec![vec![0], vec![1]])?,
            },
            ("markov", "longest_run") => Statistic::MarkovLongestRun { chain: default_chain(), state: 1 },
            _ => {
                return Err(Error::Input(alloc::format!(
                    "unknown model/statistic {model}/{statistic}"
                )))
            }
        })
    }

    pub fn tags(&self) -> (&'static str, &'static str) {
        match self {
            Statistic::Crossings => REGISTRY[0],
            Statistic::Triangles { .. } => REGISTRY[1],
            Statistic::Exceedances { .. } => REGISTRY[2],
            Statistic::SsepParticles(_) => REGISTRY[3],
            Statistic::MarkovPattern { .. } => REGISTRY[4],
            Statistic::MarkovLongestRun { .. } => REGISTRY[5],
        }
    }

    /// Whether values are integers (and get jittered).
    pub fn is_integer(&self) -> bool {
        true
    }

    /// Predicted exponent of Var in the size parameter, when known.
    pub fn variance_exponent(&self) -> Option<f64> {
        match self {
            Statistic::Crossings | Statistic::Triangles { .. } => Some(3.0),
            Statistic::Exceedances { .. } | Statistic::SsepParticles(_) => Some(1.0),
            Statistic::MarkovPattern { pattern, .. } => Some(2.0 * pattern.d() as f64 - 1.0),
            Statistic::MarkovLongestRun { .. } => None,
        }
    }

    /// Predicted exponent of the standardized κ_r: 1 − r/2 for the
    /// statistics covered by a normality criterion.
    pub fn standardized_exponent(&self, r: usize) -> Option<f64> {
        match self {
            Statistic::MarkovLongestRun { .. } => None,
            _ => Some(1.0 - r as f64 / 2.0),
        }
    }

    /// Exact mean and variance where an oracle is available.
    pub fn exact_moments(&self, n: usize) -> Result<Option<(f64, f64)>> {
        Ok(match self {
            Statistic::Crossings => {
                let (m, v) = crossings_moments_exact(n, CrossingsMode::ClassSum)?;
                Some((m.to_f64(), v.to_f64()))
            }
            Statistic::Exceedances { t } => {
                let k = lattice_floor(n, *t);
                let c = cumulants_of_counts(&exceedance_prefix_counts(n, k)?, 2);
                Some((c[0].to_f64(), c[1].to_f64()))
            }
            _ => None,
        })
    }

    /// One draw of the statistic at size n, before jitter.
    pub fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<f64> {
        Ok(match self {
            Statistic::Crossings => count_crossings(&sample_pairing(n, rng)) as f64,
            Statistic::Triangles { p } => {
                let slots = n * n.saturating_sub(1) / 2;
                let m = libm::round(p * slots as f64) as usize;
                sample_gnm(GnmParams::new(n, m)?, rng).triangle_count() as f64
            }
            Statistic::Exceedances { t } => {
                let k = lattice_floor(n, *t);
                let perm = sample_permutation(n, rng);
                perm[..k].iter().enumerate().filter(|(i, &v)| v as usize > *i).count() as f64
            }
            Statistic::SsepParticles(run) => {
                let [a, b, g, d] = run.rates;
                let params = SsepParams::new(a, b, g, d, n)?;
                let mut config = product_start(&params, rng);
                gillespie(&params, &mut config, run.burn_in_factor * (n * n) as f64, rng)?;
                config.iter().map(|&x| u64::from(x)).sum::<u64>() as f64
            }
            Statistic::MarkovPattern { chain, pattern } => {
                count_pattern(&sample_chain(chain, n as u64, rng), pattern) as f64
            }
            Statistic::MarkovLongestRun { chain, state } => {
                longest_run(&sample_chain(chain, n as u64, rng), *state) as f64
            }
        })
    }
}

/// Values of one statistic at one size, one per replica.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBatch {
    pub model: String,
    pub statistic: String,
    pub n: usize,
    pub seed: u64,
    pub jittered: bool,
    pub values: Vec<f64>,
}

/// Replicas `range` of a batch. Concatenating disjoint consecutive ranges
/// gives the same values as one call on their union.
pub fn draw_replicas(stat: &Statistic, n: usize, seed: u64, range: core::ops::Range<u64>) -> Result<Vec<f64>> {
    let (model, name) = stat.tags();
    let key = stream_key(&alloc::format!("{model}/{name}"), n as u64);
    range
        .map(|rep| {
            let mut rng = replica_rng(seed, key, rep);
            let x = stat.draw(n, &mut rng)?;
            Ok(if stat.is_integer() { jitter(x, &mut rng) } else { x })
        })
        .collect()
}

/// A whole batch drawn sequentially.
pub fn sample_batch(stat: &Statistic, n: usize, count: usize, seed: u64) -> Result<SampleBatch> {
    let (model, name) = stat.tags();
    Ok(SampleBatch {
        model: model.into(),
        statistic: name.into(),
        n,
        seed,
        jittered: stat.is_integer(),
        values: draw_replicas(stat, n, seed, 0..count as u64)?,
    })
}

/// Summary of one batch.
#[derive(Clone, Debug, PartialEq)]
pub struct CltRow {
    pub n: usize,
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    /// standardized κ̂₃
    pub kappa3: f64,
    /// standardized κ̂₄
    pub kappa4: f64,
    /// KS distance with empirical standardization; None if σ̂ = 0
    pub ks: Option<f64>,
    pub exact_mean: Option<f64>,
    /// exact variance of the statistic before jitter
    pub exact_variance: Option<f64>,
    pub histogram: Histogram,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFit {
    pub fitted: f64,
    pub predicted: Option<f64>,
}

impl ExponentFit {
    pub fn within(&self, tol: f64) -> Option<bool> {
        self.predicted.map(|p| libm::fabs(self.fitted - p) <= tol)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CltReport {
    pub model: String,
    pub statistic: String,
    pub seed: u64,
    pub jittered: bool,
    pub rows: Vec<CltRow>,
    pub variance_exponent: ExponentFit,
    /// log-log slope of |κ̂₃| (standardized)
    pub kappa3_exponent: ExponentFit,
    /// log-log slope of |κ̂₄| (standardized)
    pub kappa4_exponent: ExponentFit,
}

impl CltReport {
    /// KS at the largest size.
    pub fn final_ks(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.ks)
    }
}

/// Summarizes one batch.
pub fn summarize(stat: &Statistic, batch: &SampleBatch) -> Result<CltRow> {
    let k = empirical_cumulants(&batch.values, 4)?;
    let (mean, variance) = (k[0], k[1]);
    let degenerate = !(variance > 0.0);
    let (kappa3, kappa4) = if degenerate { (0.0, 0.0) } else { standardized_cumulants(&batch.values)? };
    let ks = if degenerate { None } else { Some(ks_normal(&batch.values, Standardization::Empirical)?) };
    let exact = stat.exact_moments(batch.n)?;
    let sd = if degenerate { 1.0 } else { libm::sqrt(variance) };
    Ok(CltRow {
        n: batch.n,
        count: batch.values.len(),
        mean,
        variance,
        kappa3,
        kappa4,
        ks,
        exact_mean: exact.map(|e| e.0),
        exact_variance: exact.map(|e| e.1),
        histogram: histogram64(&batch.values, mean, sd),
    })
}

/// Assembles a report from batches sorted by n, fitting log-log slopes.
pub fn clt_report(stat: &Statistic, batches: &[SampleBatch]) -> Result<CltReport> {
    if batches.len() < 2 {
        return Err(Error::Input("need at least two grid points".into()));
    }
    let mut rows = batches.iter().map(|b| summarize(stat, b)).collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.n);
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let fit = |ys: Vec<f64>, predicted: Option<f64>| ExponentFit { fitted: fit_loglog(&xs, &ys), predicted };
    let (model, name) = stat.tags();
    Ok(CltReport {
        model: model.into(),
        statistic: name.into(),
        seed: batches[0].seed,
        jittered: stat.is_integer(),
        variance_exponent: fit(rows.iter().map(|r| r.variance).collect(), stat.variance_exponent()),
        kappa3_exponent: fit(rows.iter().map(|r| libm::fabs(r.kappa3)).collect(), stat.standardized_exponent(3)),
        kappa4_exponent: fit(rows.iter().map(|r| libm::fabs(r.kappa4)).collect(), stat.standardized_exponent(4)),
        rows,
    })
}

/// Sequential experiment over a grid.
pub fn clt_experiment(stat: &Statistic, grid: &[usize], count: usize, seed: u64) -> Result<CltReport> {
    let batches = grid
        .iter()
        .map(|&n| sample_batch(stat, n, count, seed))
        .collect::<Result<Vec<_>>>()?;
    clt_report(stat, &batches)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Box–Muller.
    fn std_normal<R: Rng>(rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let v: f64 = rng.gen();
        libm::sqrt(-2.0 * libm::log(1.0 - u)) * libm::cos(2.0 * core::f64::consts::PI * v)
    }

    #[test]
    fn constant_batch() {
        let k = empirical_cumulants(&[3.0; 20], 4).unwrap();
        assert_eq!(k, vec![3.0, 0.0, 0.0, 0.0]);
        assert!(empirical_cumulants(&[1.0; 5], 2).is_err());
        assert!(ks_normal(&[1.0; 20], Standardization::Empirical).is_err());
    }

    #[test]
    fn normal_batch() {
        let mut rng = replica_rng(7, 0, 0);
        let xs: Vec<f64> = (0..100_000).map(|_| std_normal(&mut rng)).collect();
        let k = empirical_cumulants(&xs, 4).unwrap();
        assert!(k[2].abs() <= 0.03 && k[3].abs() <= 0.1, "{k:?}");
    }

    #[test]
    fn quantile_batch_ks() {
        // Φ⁻¹((i + 1/2)/n) by bisection
        let n = 2000;
        let xs: Vec<f64> = (0..n)
            .map(|i| {
                let target = (i as f64 + 0.5) / n as f64;
                let (mut lo, mut hi) = (-10.0, 10.0);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if normal_cdf(mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            })
            .collect();
        let d = ks_normal(&xs, Standardization::Exact { mean: 0.0, variance: 1.0 }).unwrap();
        assert!(d <= 1.0 / (2.0 * n as f64) + 1e-9, "{d}");
    }

    #[test]
    fn bernoulli_negative_control() {
        let mut rng = replica_rng(1, 2, 3);
        let xs: Vec<f64> = (0..1000).map(|_| f64::from(u8::from(rng.gen::<bool>()))).collect();
        assert!(ks_normal(&xs, Standardization::Empirical).unwrap() > 0.2);
    }

    #[test]
    fn replicas_split_anyhow() {
        let stat = Statistic::lookup("pairings", "crossings").unwrap();
        let whole = draw_replicas(&stat, 12, 5, 0..40).unwrap();
        let mut parts = draw_replicas(&stat, 12, 5, 0..13).unwrap();
        parts.extend(draw_replicas(&stat, 12, 5, 13..40).unwrap());
        assert_eq!(whole, parts);
    }

    #[test]
    fn registry_runs() {
        for (m, s) in REGISTRY {
            let stat = Statistic::lookup(m, s).unwrap();
            let batch = sample_batch(&stat, 12, 20, 1).unwrap();
            assert_eq!(batch.values.len(), 20);
        }
        assert!(Statistic::lookup("gnm", "cliques").is_err());
    }

    #[test]
    fn variance_against_exact_oracle() {
        let stat = Statistic::Crossings;
        let batch = sample_batch(&stat, 4, 20_000, 11).unwrap();
        let (_, v) = stat.exact_moments(4).unwrap().unwrap();
        // jitter adds 1/12
        let target = v + 1.0 / 12.0;
        let k = empirical_cumulants(&batch.values, 2).unwrap();
        let se = jackknife_variance_se(&batch.values).unwrap();
        assert!((k[1] - target).abs() <= 5.0 * se, "{} vs {target} (se {se})", k[1]);
    }
}
