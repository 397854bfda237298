//! Symmetric simple exclusion process on `N` sites with open boundaries.
//! Site 1 is fed at rate α and emptied at rate γ; site N is fed at rate β
//! and emptied at rate δ, so that ρ_a = α/(α+γ) and ρ_b = β/(β+δ) are the
//! reservoir densities. Sites are 1-based.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use rand::Rng;

use crate::algebra::cumulant::{moment_from_cumulants, MomentOracle};
use crate::algebra::partition::for_each_partition;
use crate::error::{size_limit, Error, Result};
use crate::linalg::stationary_vector;
use crate::models::permutations::PathProcess;
use crate::scalar::Scalar;
use crate::wdg::WdgCandidate;

/// Largest order handled by the cumulant recursion.
pub const MAX_ORDER: usize = 6;
/// Largest system solved exactly (2^N states).
pub const EXACT_SITE_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct SsepParams<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
    pub n: usize,
}

impl<T: Scalar> SsepParams<T> {
    pub fn new(alpha: T, beta: T, gamma: T, delta: T, n: usize) -> Result<Self> {
        let zero = T::zero();
        if alpha < zero || beta < zero || gamma < zero || delta < zero {
            return Err(Error::Input("rates must be nonnegative".into()));
        }
        if (alpha.clone() + gamma.clone()).is_zero() || (beta.clone() + delta.clone()).is_zero() {
            return Err(Error::Input("α+γ and β+δ must be positive".into()));
        }
        if n == 0 {
            return Err(Error::Input("need at least one site".into()));
        }
        Ok(SsepParams { alpha, beta, gamma, delta, n })
    }

    pub fn with_sites(&self, n: usize) -> Self {
        SsepParams { n, ..self.clone() }
    }

    pub fn rho_a(&self) -> T {
        self.alpha.clone() / (self.alpha.clone() + self.gamma.clone())
    }

    pub fn rho_b(&self) -> T {
        self.beta.clone() / (self.beta.clone() + self.delta.clone())
    }

    pub fn map<U: Scalar, F: Fn(&T) -> U>(&self, f: F) -> SsepParams<U> {
        SsepParams {
            alpha: f(&self.alpha),
            beta: f(&self.beta),
            gamma: f(&self.gamma),
            delta: f(&self.delta),
            n: self.n,
        }
    }
}

fn expectation_at<T: Scalar>(i: usize, n: usize, p: &SsepParams<T>) -> T {
    let inv_a = T::one() / (p.alpha.clone() + p.gamma.clone());
    let inv_b = T::one() / (p.beta.clone() + p.delta.clone());
    let (ni, nn) = (T::from_i64(i as i64), T::from_i64(n as i64));
    let num = p.rho_a() * (nn.clone() + inv_b.clone() - ni.clone()) + p.rho_b() * (ni - T::one() + inv_a.clone());
    num / (nn + inv_a + inv_b - T::one())
}

/// E τ_i in the stationary state.
pub fn ssep_expectation<T: Scalar>(i: usize, params: &SsepParams<T>) -> Result<T> {
    if i == 0 || i > params.n {
        return Err(Error::Domain(alloc::format!("site {i} outside 1..={}", params.n)));
    }
    Ok(expectation_at(i, params.n, params))
}

/// Memoized joint cumulants of distinct sites for all system sizes ≤ N.
#[derive(Debug)]
pub struct CumulantCache<T> {
    params: SsepParams<T>,
    memo: RefCell<BTreeMap<(usize, Vec<u32>), T>>,
}

impl<T: Scalar> CumulantCache<T> {
    pub fn new(params: SsepParams<T>) -> Self {
        CumulantCache { params, memo: RefCell::new(BTreeMap::new()) }
    }

    pub fn params(&self) -> &SsepParams<T> {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.memo.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.borrow().is_empty()
    }

    /// κ^N(τ_{i_1}, .., τ_{i_r}) for strictly increasing sites.
    pub fn cumulant(&self, sites: &[u32]) -> Result<T> {
        self.cumulant_at(self.params.n, sites)
    }

    pub fn cumulant_at(&self, n: usize, sites: &[u32]) -> Result<T> {
        size_limit("SSEP cumulant order", sites.len(), MAX_ORDER)?;
        if sites.is_empty() {
            return Err(Error::Input("cumulant of no sites".into()));
        }
        if sites.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input(alloc::format!("sites {sites:?} are not strictly increasing")));
        }
        if sites[0] == 0 || *sites.last().unwrap() as usize > n {
            return Err(Error::Domain(alloc::format!(
                "sites {sites:?} need N ≥ {}, got N = {n}",
                sites.last().unwrap()
            )));
        }
        self.eval(n, sites)
    }

    fn eval(&self, n: usize, sites: &[u32]) -> Result<T> {
        if sites.len() == 1 {
            return Ok(expectation_at(sites[0] as usize, n, &self.params));
        }
        let key = (n, sites.to_vec());
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let (head, last) = sites.split_at(sites.len() - 1);
        if n < 2 {
            return Err(Error::Domain(alloc::format!("Δ applied at N = {n}; sites {sites:?} need N ≥ 2")));
        }
        // −Δκ for every sub-block, evaluated once
        let r = head.len();
        let mut diff: Vec<Option<T>> = vec![None; 1 << r];
        for mask in 1..1usize << r {
            let sub: Vec<u32> = (0..r).filter(|k| mask >> k & 1 == 1).map(|k| head[k]).collect();
            let now = self.eval(n, &sub)?;
            let before = self.eval(n - 1, &sub)?;
            diff[mask] = Some(before - now);
        }
        let mut total = T::zero();
        for_each_partition(r, |labels, blocks| {
            let mut masks = [0usize; MAX_ORDER];
            for (k, &l) in labels.iter().enumerate() {
                masks[l] |= 1 << k;
            }
            let mut prod = T::one();
            for &m in &masks[..blocks] {
                prod = prod * diff[m].clone().expect("all blocks evaluated");
            }
            total = total.clone() + prod;
        });
        let value = (expectation_at(last[0] as usize, n, &self.params) - self.params.rho_b()) * total;
        self.memo.borrow_mut().insert(key, value.clone());
        Ok(value)
    }
}

/// κ^N(τ_{i_1}, .., τ_{i_r}) for strictly increasing sites.
pub fn ssep_cumulant<T: Scalar>(sites: &[u32], params: &SsepParams<T>) -> Result<T> {
    CumulantCache::new(params.clone()).cumulant(sites)
}

/// Occupation variables τ_1..τ_N: complete graph with weight 1/N, Ψ ≡ 1.
/// Moments come from the recursion through the moment-cumulant formula
/// after collapsing repeated sites (τ² = τ).
#[derive(Debug)]
pub struct SsepFamily<T> {
    cache: CumulantCache<T>,
}

pub fn ssep_wdg<T: Scalar>(params: &SsepParams<T>) -> SsepFamily<T> {
    SsepFamily { cache: CumulantCache::new(params.clone()) }
}

impl<T: Scalar> SsepFamily<T> {
    pub fn cache(&self) -> &CumulantCache<T> {
        &self.cache
    }
}

impl<T: Scalar> MomentOracle for SsepFamily<T> {
    type Index = u32;
    type Value = T;

    fn moment(&self, b: &[u32]) -> Result<T> {
        let mut d = b.to_vec();
        d.sort_unstable();
        d.dedup();
        moment_from_cumulants(|s: &[u32]| self.cache.cumulant(s), &d)
    }
}

impl<T: Scalar> WdgCandidate for SsepFamily<T> {
    fn indices(&self) -> Vec<u32> {
        (1..=self.cache.params.n as u32).collect()
    }

    fn weight(&self, _a: &u32, _b: &u32) -> T {
        T::from_ratio(1, self.cache.params.n as i64)
    }

    fn psi(&self, _b: &[u32]) -> T {
        T::one()
    }
}

/// Stationary law over configurations, indexed by bit mask (bit i−1 is
/// τ_i), from the null space of the generator.
pub fn ssep_exact_stationary<T: Scalar>(params: &SsepParams<T>) -> Result<Vec<T>> {
    let n = params.n;
    size_limit("sites for the exact stationary law", n, EXACT_SITE_LIMIT)?;
    let states = 1usize << n;
    let mut q = vec![vec![T::zero(); states]; states];
    let add = |q: &mut Vec<Vec<T>>, s: usize, t: usize, rate: T| {
        if rate.is_zero() {
            return;
        }
        q[s][t] = q[s][t].clone() + rate.clone();
        q[s][s] = q[s][s].clone() - rate;
    };
    for s in 0..states {
        for k in 0..n - 1 {
            if (s >> k & 1) != (s >> (k + 1) & 1) {
                add(&mut q, s, s ^ (0b11 << k), T::one());
            }
        }
        let first = s & 1 == 1;
        add(&mut q, s, s ^ 1, if first { params.gamma.clone() } else { params.alpha.clone() });
        let last = s >> (n - 1) & 1 == 1;
        add(&mut q, s, s ^ (1 << (n - 1)), if last { params.delta.clone() } else { params.beta.clone() });
    }
    stationary_vector(&q)
}

/// P(τ_i = 1 for all i in `sites`) under a law over bit masks.
pub fn occupation_moment<T: Scalar>(dist: &[T], sites: &[u32]) -> T {
    let want = sites.iter().fold(0usize, |m, &i| m | 1 << (i - 1));
    dist.iter()
        .enumerate()
        .filter(|(s, _)| s & want == want)
        .fold(T::zero(), |acc, (_, p)| acc + p.clone())
}

/// Moment oracle of an explicit law over configurations.
pub struct StationaryOracle<T> {
    pub dist: Vec<T>,
}

impl<T: Scalar> MomentOracle for StationaryOracle<T> {
    type Index = u32;
    type Value = T;

    fn moment(&self, b: &[u32]) -> Result<T> {
        Ok(occupation_moment(&self.dist, b))
    }
}

/// A configuration τ_1..τ_N.
pub type Configuration = Vec<u8>;

/// Independent Bernoulli(E τ_i) sites.
pub fn product_start<R: Rng + ?Sized>(params: &SsepParams<f64>, rng: &mut R) -> Configuration {
    (1..=params.n)
        .map(|i| u8::from(rng.gen::<f64>() < expectation_at(i, params.n, params)))
        .collect()
}

/// Continuous-time evolution of `config` for `t_end` time units. Events
/// are drawn at the constant total rate Λ = (N−1) + (α+γ) + (β+δ): a bond
/// event exchanges the two sites, a boundary event redraws the boundary
/// site from its reservoir density. Returns the number of events.
pub fn gillespie<R: Rng + ?Sized>(params: &SsepParams<f64>, config: &mut Configuration, t_end: f64, rng: &mut R) -> Result<u64> {
    let mut events = 0;
    evolve(params, config, t_end, rng, |_, _| {}, &mut events)?;
    Ok(events)
}

fn evolve<R: Rng + ?Sized, F: FnMut(&Configuration, f64)>(
    params: &SsepParams<f64>,
    config: &mut Configuration,
    t_end: f64,
    rng: &mut R,
    mut hold: F,
    events: &mut u64,
) -> Result<()> {
    let n = params.n;
    if config.len() != n {
        return Err(Error::Input(alloc::format!("configuration has {} sites, expected {n}", config.len())));
    }
    let left = params.alpha + params.gamma;
    let right = params.beta + params.delta;
    if !(left > 0.0) || !(right > 0.0) {
        return Err(Error::Domain("degenerate chain: a boundary has no rates".into()));
    }
    let (ra, rb) = (params.rho_a(), params.rho_b());
    let bonds = (n - 1) as f64;
    let total = bonds + left + right;
    let mut t = 0.0;
    loop {
        let u: f64 = rng.gen();
        let dt = -libm::log(1.0 - u) / total;
        if t + dt >= t_end {
            hold(config, t_end - t);
            return Ok(());
        }
        hold(config, dt);
        t += dt;
        *events += 1;
        let x = rng.gen::<f64>() * total;
        if x < bonds {
            let k = (x as usize).min(n - 2);
            config.swap(k, k + 1);
        } else if x < bonds + left {
            config[0] = u8::from(rng.gen::<f64>() < ra);
        } else {
            config[n - 1] = u8::from(rng.gen::<f64>() < rb);
        }
    }
}

/// Default burn-in, 20 N² time units.
pub fn default_burn_in(n: usize) -> f64 {
    20.0 * (n * n) as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct OccupationEstimate {
    /// time-averaged τ_i
    pub mean: Vec<f64>,
    /// batch-means standard errors
    pub stderr: Vec<f64>,
}

/// Time-averaged occupations over `batches` consecutive windows of length
/// `window` after `burn_in`, started from the product measure.
pub fn occupation_average<R: Rng + ?Sized>(
    params: &SsepParams<f64>,
    burn_in: f64,
    window: f64,
    batches: usize,
    rng: &mut R,
) -> Result<OccupationEstimate> {
    if batches < 2 {
        return Err(Error::Input("need at least two batches".into()));
    }
    let n = params.n;
    let mut config = product_start(params, rng);
    let mut events = 0;
    evolve(params, &mut config, burn_in, rng, |_, _| {}, &mut events)?;
    let mut per_batch = Vec::with_capacity(batches);
    for _ in 0..batches {
        let mut acc = vec![0.0; n];
        evolve(
            params,
            &mut config,
            window,
            rng,
            |c, dt| {
                for (a, &x) in acc.iter_mut().zip(c.iter()) {
                    if x == 1 {
                        *a += dt;
                    }
                }
            },
            &mut events,
        )?;
        per_batch.push(acc.into_iter().map(|a| a / window).collect::<Vec<f64>>());
    }
    let b = batches as f64;
    let mut mean = vec![0.0; n];
    let mut stderr = vec![0.0; n];
    for i in 0..n {
        let m = per_batch.iter().map(|v| v[i]).sum::<f64>() / b;
        let var = per_batch.iter().map(|v| (v[i] - m) * (v[i] - m)).sum::<f64>() / (b - 1.0);
        mean[i] = m;
        stderr[i] = libm::sqrt(var / b);
    }
    Ok(OccupationEstimate { mean, stderr })
}

/// X_N(t) = number of particles in the first N t sites, affine in between.
pub fn particle_process(config: &[u8]) -> PathProcess<f64> {
    let mut nodes = Vec::with_capacity(config.len() + 1);
    let mut acc = 0.0;
    nodes.push(acc);
    for &x in config {
        acc += x as f64;
        nodes.push(acc);
    }
    PathProcess::Line { n: config.len(), nodes }
}

/// σ(t, u) = ∫_0^{t∧u} ρ(1−ρ) − (ρ_a−ρ_b)² ∫_0^t ∫_0^u (x∧y)(1 − x∨y),
/// with ρ(x) = ρ_a(1−x) + ρ_b x.
pub fn ssep_cov_limit(t: f64, u: f64, rho_a: f64, rho_b: f64) -> f64 {
    let s = t.min(u);
    let (a, c) = (rho_a, rho_b - rho_a);
    let diag = a * (1.0 - a) * s + c * (1.0 - 2.0 * a) * s * s / 2.0 - c * c * s * s * s / 3.0;
    let (lo, hi) = (s, t.max(u));
    let k = lo * lo * hi / 2.0 - lo * lo * lo / 6.0 - lo * lo * hi * hi / 4.0;
    diag - (rho_a - rho_b) * (rho_a - rho_b) * k
}

/// N^{−1} Cov(X_N(t), X_N(u)) at lattice times from exact cumulants.
pub fn finite_covariance<T: Scalar>(cache: &CumulantCache<T>, t: f64, u: f64) -> Result<T> {
    let n = cache.params().n;
    let kt = crate::models::permutations::lattice_floor(n, t);
    let ku = crate::models::permutations::lattice_floor(n, u);
    let mut total = T::zero();
    for i in 1..=kt {
        for j in 1..=ku {
            let v = match i.cmp(&j) {
                core::cmp::Ordering::Equal => {
                    let e = expectation_at(i, n, cache.params());
                    e.clone() * (T::one() - e)
                }
                core::cmp::Ordering::Less => cache.cumulant(&[i as u32, j as u32])?,
                core::cmp::Ordering::Greater => cache.cumulant(&[j as u32, i as u32])?,
            };
            total = total + v;
        }
    }
    Ok(total / T::from_i64(n as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::cumulant::cumulant_of;
    use crate::scalar::{rat, Rational};

    fn rates() -> SsepParams<Rational> {
        SsepParams::new(rat(1, 1), rat(1, 3), rat(1, 2), rat(2, 1), 5).unwrap()
    }

    #[test]
    fn expectation_examples() {
        let p = SsepParams::new(rat(1, 1), rat(0, 1), rat(0, 1), rat(1, 1), 3).unwrap();
        assert_eq!(ssep_expectation(1, &p).unwrap(), rat(3, 4));
        let q = SsepParams::new(rat(1, 1), rat(2, 1), rat(3, 1), rat(6, 1), 4).unwrap();
        for i in 1..=4 {
            assert_eq!(ssep_expectation(i, &q).unwrap(), rat(1, 4));
        }
    }

    #[test]
    fn recursion_matches_null_space() {
        let p = rates();
        let dist = ssep_exact_stationary(&p).unwrap();
        let oracle = StationaryOracle { dist };
        let cache = CumulantCache::new(p.clone());
        for sites in [vec![1u32], vec![3], vec![1, 3], vec![2, 4], vec![1, 2, 4], vec![1, 3, 5]] {
            assert_eq!(cache.cumulant(&sites).unwrap(), cumulant_of(&oracle, &sites).unwrap(), "{sites:?}");
        }
    }

    #[test]
    fn equal_densities_decorrelate() {
        let p = SsepParams::new(rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1), 6).unwrap();
        assert_eq!(ssep_cumulant(&[1, 4], &p).unwrap(), rat(0, 1));
        assert_eq!(ssep_cumulant(&[1, 2, 6], &p).unwrap(), rat(0, 1));
    }

    #[test]
    fn covariance_limit_examples() {
        assert!((ssep_cov_limit(0.3, 0.7, 0.4, 0.4) - 0.24 * 0.3).abs() < 1e-15);
        assert!((ssep_cov_limit(1.0, 1.0, 1.0, 0.0) - (1.0 / 6.0 - 1.0 / 12.0)).abs() < 1e-15);
    }

    #[test]
    fn bad_sites_rejected() {
        let p = rates();
        assert!(ssep_cumulant(&[2, 1], &p).is_err());
        assert!(ssep_cumulant(&[1, 6], &p).is_err());
    }
}
