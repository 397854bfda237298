//! Weighted dependency graphs: checking the cumulant bound
//! |κ(B)| ≤ C_r Ψ(B) MWST(L̃[B]), fitting the constants, the parameters
//! R and T_ℓ, and the normality criterion diagnostic.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::cumulant::{cumulant_from_subset_moments, cumulant_of, MomentOracle};
use crate::error::{size_limit, Error, Result};
use crate::scalar::Scalar;
use crate::wgraph::{mwst_of, next_multiset, w_between_fn, WeightedGraph};

/// Default relative tolerance for "MWST = 0 ⇒ κ = 0" in float mode.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// A family of random variables with a candidate weighted dependency graph.
pub trait WdgCandidate: MomentOracle {
    /// The vertex set A.
    fn indices(&self) -> Vec<Self::Index>;

    /// Weight of the edge between two distinct indices, in [0, 1].
    fn weight(&self, a: &Self::Index, b: &Self::Index) -> Self::Value;

    /// Ψ(B) > 0 for a multiset B.
    fn psi(&self, b: &[Self::Index]) -> Self::Value;

    /// |A|; families too large to materialize override the three lazy
    /// accessors below.
    fn index_count(&self) -> usize {
        self.indices().len()
    }

    fn index_at(&self, k: usize) -> Self::Index {
        self.indices().swap_remove(k)
    }

    fn visit_indices(&self, f: &mut dyn FnMut(&Self::Index)) {
        for a in self.indices() {
            f(&a);
        }
    }
}

impl<C: WdgCandidate + ?Sized> WdgCandidate for &C {
    fn indices(&self) -> Vec<Self::Index> {
        (**self).indices()
    }
    fn weight(&self, a: &Self::Index, b: &Self::Index) -> Self::Value {
        (**self).weight(a, b)
    }
    fn psi(&self, b: &[Self::Index]) -> Self::Value {
        (**self).psi(b)
    }
    fn index_count(&self) -> usize {
        (**self).index_count()
    }
    fn index_at(&self, k: usize) -> Self::Index {
        (**self).index_at(k)
    }
    fn visit_indices(&self, f: &mut dyn FnMut(&Self::Index)) {
        (**self).visit_indices(f)
    }
}

/// Weight in the graph induced on a multiset: copies of one index are
/// joined by weight 1.
pub fn induced_weight<C: WdgCandidate>(c: &C, a: &C::Index, b: &C::Index) -> C::Value {
    if a == b {
        C::Value::one()
    } else {
        c.weight(a, b)
    }
}

/// MWST(L̃[B]).
pub fn induced_mwst<C: WdgCandidate>(c: &C, b: &[C::Index]) -> C::Value {
    mwst_of(b.len(), |i, j| induced_weight(c, &b[i], &b[j]))
}

/// Which multisets a scan visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

/// Which form of the bound is fitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundForm {
    /// |κ(Y_α : α ∈ B)| against Ψ(B) MWST(L̃[B]).
    Cumulant,
    /// |κ(∏_{B_1} Y, .., ∏_{B_ℓ} Y)| over the weight-1 components B_i of
    /// L̃₁[B], against the same right-hand side.
    Components,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation<I, T> {
    pub multiset: Vec<I>,
    pub cumulant: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderFit<I, T> {
    pub r: usize,
    pub scanned: u64,
    /// max of |κ| / (Ψ · MWST) over scanned multisets with MWST > 0
    pub constant: T,
    pub witness: Option<Vec<I>>,
    pub violations: Vec<Violation<I, T>>,
}

impl<I: Ord + Clone, T: Scalar> OrderFit<I, T> {
    pub fn new(r: usize) -> Self {
        OrderFit {
            r,
            scanned: 0,
            constant: T::zero(),
            witness: None,
            violations: Vec::new(),
        }
    }

    fn offer(&mut self, b: &[I], ratio: T) {
        let better = match &self.witness {
            None => true,
            Some(w) => match ratio.partial_cmp(&self.constant) {
                Some(Ordering::Greater) => true,
                Some(Ordering::Equal) => b < w.as_slice(),
                _ => false,
            },
        };
        if better {
            self.constant = ratio;
            self.witness = Some(b.to_vec());
        }
    }

    /// Order-independent merge of two partial scans of the same order.
    pub fn merge(mut self, other: Self) -> Self {
        self.scanned += other.scanned;
        if let Some(w) = other.witness {
            self.offer(&w, other.constant);
        }
        self.violations.extend(other.violations);
        self.violations.sort_by(|a, b| a.multiset.cmp(&b.multiset));
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitReport<I, T> {
    pub form: BoundForm,
    pub mode: ScanMode,
    /// exhaustive scans certify the fitted constants; sampled ones do not
    pub certificate: bool,
    pub orders: Vec<OrderFit<I, T>>,
}

impl<I, T> FitReport<I, T> {
    pub fn violation_count(&self) -> usize {
        self.orders.iter().map(|o| o.violations.len()).sum()
    }
}

/// Classical cumulant of the products of family variables over the given
/// blocks.
pub fn product_cumulant<O: MomentOracle>(oracle: &O, blocks: &[Vec<O::Index>]) -> Result<O::Value> {
    let l = blocks.len();
    size_limit("number of product blocks", l, 12)?;
    let mut m = Vec::with_capacity(1 << l);
    for sel in 0..1u64 << l {
        let merged: Vec<O::Index> = blocks
            .iter()
            .enumerate()
            .filter(|(i, _)| sel >> i & 1 == 1)
            .flat_map(|(_, b)| b.iter().cloned())
            .collect();
        m.push(oracle.moment(&merged)?);
    }
    Ok(cumulant_from_subset_moments(l, &m))
}

/// Weight-1 components of L̃[B] (copies of an index are always joined).
pub fn weight_one_blocks<C: WdgCandidate>(c: &C, b: &[C::Index]) -> Vec<Vec<C::Index>> {
    let r = b.len();
    let mut label: Vec<usize> = (0..r).collect();
    let mut stack = Vec::new();
    let mut seen = vec![false; r];
    for s in 0..r {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        while let Some(u) = stack.pop() {
            label[u] = s;
            for v in 0..r {
                if !seen[v] && induced_weight(c, &b[u], &b[v]) == C::Value::one() {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<C::Index>> = Vec::new();
    let mut owner: Vec<(usize, usize)> = Vec::new();
    for (p, &l) in label.iter().enumerate() {
        match owner.iter().find(|(k, _)| *k == l) {
            Some(&(_, i)) => blocks[i].push(b[p].clone()),
            None => {
                owner.push((l, blocks.len()));
                blocks.push(vec![b[p].clone()]);
            }
        }
    }
    blocks
}

/// Scans the given multisets of one order.
pub fn scan_order<C, It>(c: &C, r: usize, multisets: It, form: BoundForm, tol: f64) -> Result<OrderFit<C::Index, C::Value>>
where
    C: WdgCandidate,
    It: IntoIterator<Item = Vec<C::Index>>,
{
    let mut fit = OrderFit::new(r);
    for b in multisets {
        fit.scanned += 1;
        let kappa = match form {
            BoundForm::Cumulant => cumulant_of(c, &b),
            BoundForm::Components => product_cumulant(c, &weight_one_blocks(c, &b)),
        }
        .map_err(|e| Error::Oracle {
            index: alloc::format!("{b:?}"),
            message: alloc::format!("{e}"),
        })?;
        let psi = c.psi(&b);
        let w = induced_mwst(c, &b);
        let abs = kappa.abs_val();
        if w.is_zero() {
            if !abs.is_negligible(&psi, tol) {
                fit.violations.push(Violation { multiset: b, cumulant: kappa });
            }
            continue;
        }
        fit.offer(&b, abs / (psi * w));
    }
    Ok(fit)
}

/// Number of multisets of size `r` over `n` items.
pub fn multiset_count(n: usize, r: usize) -> u128 {
    // C(n + r - 1, r)
    let mut acc: u128 = 1;
    for k in 0..r as u128 {
        acc = acc * (n as u128 + k) / (k + 1);
    }
    acc
}

/// All multisets of size `r` over positions `0..n`, lexicographic order.
pub fn exhaustive_multisets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut cur = vec![0usize; r];
    loop {
        out.push(cur.clone());
        if !next_multiset(&mut cur, n) {
            return out;
        }
    }
}

/// `count` multisets of size `r` over `0..n`, each uniform among all
/// C(n+r−1, r) multisets (stars and bars), from a seeded stream.
pub fn sampled_multisets(n: usize, r: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64);
    let span = n + r - 1;
    (0..count)
        .map(|_| {
            let mut picks = rand::seq::index::sample(&mut rng, span, r).into_vec();
            picks.sort_unstable();
            picks.iter().enumerate().map(|(j, &x)| x - j).collect()
        })
        .collect()
}

/// Multisets visited for order `r`, as positions into `indices()`.
pub fn scan_positions(n: usize, r: usize, mode: ScanMode) -> Vec<Vec<usize>> {
    match mode {
        ScanMode::Exhaustive => exhaustive_multisets(n, r),
        ScanMode::Sampled { count, seed } => sampled_multisets(n, r, count, seed),
    }
}

fn fit<C: WdgCandidate>(c: &C, rmax: usize, mode: ScanMode, form: BoundForm, tol: f64) -> Result<FitReport<C::Index, C::Value>> {
    let a = c.indices();
    let mut orders = Vec::with_capacity(rmax);
    for r in 1..=rmax {
        let ms = scan_positions(a.len(), r, mode)
            .into_iter()
            .map(|p| p.into_iter().map(|i| a[i].clone()).collect::<Vec<_>>());
        orders.push(scan_order(c, r, ms, form, tol)?);
    }
    Ok(FitReport {
        form,
        mode,
        certificate: mode == ScanMode::Exhaustive,
        orders,
    })
}

/// Fits C_r for r ≤ rmax; hard violations are recorded, never raised.
pub fn verify_bounds<C: WdgCandidate>(c: &C, rmax: usize, mode: ScanMode) -> Result<FitReport<C::Index, C::Value>> {
    fit(c, rmax, mode, BoundForm::Cumulant, FLOAT_TOLERANCE)
}

/// Fits D_r for the bound on cumulants of products over weight-1
/// components.
pub fn verify_alternate<C: WdgCandidate>(c: &C, rmax: usize, mode: ScanMode) -> Result<FitReport<C::Index, C::Value>> {
    fit(c, rmax, mode, BoundForm::Components, FLOAT_TOLERANCE)
}

pub fn verify_with<C: WdgCandidate>(
    c: &C,
    rmax: usize,
    mode: ScanMode,
    form: BoundForm,
    tol: f64,
) -> Result<FitReport<C::Index, C::Value>> {
    fit(c, rmax, mode, form, tol)
}

/// R = Σ_α Ψ({α}).
pub fn compute_r<C: WdgCandidate>(c: &C) -> C::Value {
    let mut total = C::Value::zero();
    c.visit_indices(&mut |a| total = total.clone() + c.psi(core::slice::from_ref(a)));
    total
}

/// A value of T_ℓ, exact when every tuple was visited.
#[derive(Clone, Debug, PartialEq)]
pub struct TValue<I, T> {
    pub value: T,
    /// false for sampled scans: the value is then a lower bound
    pub exact: bool,
    pub argmax: Vec<I>,
}

/// Σ_β W({β}, tuple) Ψ(tuple + β) / Ψ(tuple) for one tuple.
pub fn neighbourhood_sum<C: WdgCandidate>(c: &C, tuple: &[C::Index]) -> C::Value {
    let base = c.psi(tuple);
    let mut ext: Vec<C::Index> = tuple.to_vec();
    ext.push(tuple[0].clone());
    let last = ext.len() - 1;
    let mut total = C::Value::zero();
    c.visit_indices(&mut |beta| {
        let w = w_between_fn(core::slice::from_ref(beta), tuple, |x, y| c.weight(x, y));
        if w.is_zero() {
            return;
        }
        ext[last] = beta.clone();
        total = total.clone() + w * c.psi(&ext) / base.clone();
    });
    total
}

/// Limit on the number of (tuple, β) evaluations of an exhaustive T_ℓ.
pub const T_EXHAUSTIVE_LIMIT: u128 = 50_000_000;

/// T_ℓ = max over tuples (α_1..α_ℓ) of the weighted neighbourhood sum.
pub fn compute_t<C: WdgCandidate>(c: &C, l: usize, mode: ScanMode) -> Result<TValue<C::Index, C::Value>> {
    if l == 0 {
        return Err(Error::Input("T_ℓ needs ℓ ≥ 1".into()));
    }
    let n = c.index_count();
    if mode == ScanMode::Exhaustive {
        let work = multiset_count(n, l) * n as u128;
        if work > T_EXHAUSTIVE_LIMIT {
            return Err(Error::SizeLimit {
                what: "exhaustive T_ℓ evaluations (use a sampled scan)",
                value: usize::try_from(work).unwrap_or(usize::MAX),
                limit: T_EXHAUSTIVE_LIMIT as usize,
            });
        }
    }
    let mut best: Option<(C::Value, Vec<C::Index>)> = None;
    for pos in scan_positions(n, l, mode) {
        let tuple: Vec<C::Index> = pos.iter().map(|&i| c.index_at(i)).collect();
        let s = neighbourhood_sum(c, &tuple);
        if best.as_ref().is_none_or(|(v, _)| s > *v) {
            best = Some((s, tuple));
        }
    }
    let (value, argmax) = best.ok_or_else(|| Error::Input("empty index set".into()))?;
    Ok(TValue {
        value,
        exact: mode == ScanMode::Exhaustive,
        argmax,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SumBound<T> {
    /// C_r r! R T_1 ⋯ T_{r−1}
    pub bound: T,
    /// |κ_r(Σ_α Y_α)| when the index set is small enough
    pub exact: Option<T>,
}

/// Limit on multisets expanded for the exact cumulant of a sum.
pub const SUM_EXPANSION_LIMIT: u128 = 2_000_000;

/// κ_r(Σ_α Y_α) by multilinearity, grouping tuples by multiset.
pub fn sum_cumulant<C: WdgCandidate>(c: &C, r: usize) -> Result<C::Value> {
    let a = c.indices();
    let count = multiset_count(a.len(), r);
    if count > SUM_EXPANSION_LIMIT {
        return Err(Error::SizeLimit {
            what: "multisets in the exact sum expansion",
            value: usize::try_from(count).unwrap_or(usize::MAX),
            limit: SUM_EXPANSION_LIMIT as usize,
        });
    }
    let mut fact = vec![1i64; r + 1];
    for k in 1..=r {
        fact[k] = fact[k - 1] * k as i64;
    }
    let mut total = C::Value::zero();
    for pos in exhaustive_multisets(a.len(), r) {
        let mut coef = fact[r];
        let mut run = 1;
        for k in 1..=pos.len() {
            if k < pos.len() && pos[k] == pos[k - 1] {
                run += 1;
            } else {
                coef /= fact[run];
                run = 1;
            }
        }
        let b: Vec<C::Index> = pos.iter().map(|&i| a[i].clone()).collect();
        total = total + C::Value::from_i64(coef) * cumulant_of(c, &b)?;
    }
    Ok(total)
}

/// Joint cumulant κ(Σ_{A_1} Y, .., Σ_{A_r} Y) by multilinearity.
pub fn joint_sum_cumulant<C: WdgCandidate>(c: &C, subsets: &[Vec<C::Index>]) -> Result<C::Value> {
    let total_work: u128 = subsets.iter().map(|s| s.len() as u128).product();
    if total_work > SUM_EXPANSION_LIMIT {
        return Err(Error::SizeLimit {
            what: "tuples in the joint sum expansion",
            value: usize::try_from(total_work).unwrap_or(usize::MAX),
            limit: SUM_EXPANSION_LIMIT as usize,
        });
    }
    if subsets.iter().any(Vec::is_empty) {
        return Ok(C::Value::zero());
    }
    let r = subsets.len();
    let mut idx = vec![0usize; r];
    let mut total = C::Value::zero();
    loop {
        let b: Vec<C::Index> = (0..r).map(|k| subsets[k][idx[k]].clone()).collect();
        total = total + cumulant_of(c, &b)?;
        let mut k = 0;
        loop {
            if k == r {
                return Ok(total);
            }
            idx[k] += 1;
            if idx[k] < subsets[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The bound C_r r! R T_1 ⋯ T_{r−1} together with the exact left-hand side
/// when it is affordable.
pub fn sum_cumulant_bound<C: WdgCandidate>(c: &C, r: usize, constant: &C::Value, ts: &[C::Value]) -> Result<SumBound<C::Value>> {
    if r == 0 || ts.len() + 1 < r {
        return Err(Error::Input(alloc::format!("need T_1..T_{} for r = {r}", r.saturating_sub(1))));
    }
    let mut bound = constant.clone() * C::Value::from_i64((1..=r as i64).product()) * compute_r(c);
    for t in &ts[..r - 1] {
        bound = bound * t.clone();
    }
    let exact = match sum_cumulant(c, r) {
        Ok(v) => Some(v.abs_val()),
        Err(Error::SizeLimit { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(e) = &exact {
        if *e > bound && !(e.clone() - bound.clone()).is_negligible(&bound, FLOAT_TOLERANCE) {
            return Err(Error::Internal(alloc::format!(
                "exact cumulant {e:?} exceeds the bound {bound:?}"
            )));
        }
    }
    Ok(SumBound { bound, exact })
}

/// One size of a criterion series.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionRow {
    pub n: f64,
    pub r: f64,
    pub q: f64,
    pub sigma: f64,
    /// ρ_n(s) = (R/Q)^{1/s} · Q/σ, one per requested s
    pub rho: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionDiagnostic {
    pub s_values: Vec<f64>,
    pub rows: Vec<CriterionRow>,
    /// least-squares slope of log ρ_n(s) against log n, per s
    pub slopes: Vec<f64>,
    /// ρ_n(s) strictly decreasing over the top half of the grid, per s
    pub trend: Vec<bool>,
    pub label: String,
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Log-log slope of `ys` against `xs`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| libm::log(*x)).collect();
    let ly: Vec<f64> = ys.iter().map(|y| libm::log(*y)).collect();
    fit_slope(&lx, &ly)
}

/// Finite-size diagnostic for (R_n/Q_n)^{1/s} Q_n/σ_n → 0. It reports a
/// trend on the given grid and proves nothing asymptotic.
pub fn criterion_diagnostic(series: &[(f64, f64, f64, f64)], s_values: &[f64]) -> Result<CriterionDiagnostic> {
    if series.len() < 2 {
        return Err(Error::Input("need at least two sizes".into()));
    }
    let mut rows = Vec::with_capacity(series.len());
    for &(n, r, q, sigma) in series {
        if !(sigma > 0.0) || !(r > 0.0) || !(q > 0.0) || !(n > 0.0) {
            return Err(Error::Input(alloc::format!(
                "n, R, Q and σ must be positive (n = {n}, R = {r}, Q = {q}, σ = {sigma})"
            )));
        }
        let rho = s_values
            .iter()
            .map(|&s| libm::pow(r / q, 1.0 / s) * q / sigma)
            .collect();
        rows.push(CriterionRow { n, r, q, sigma, rho });
    }
    rows.sort_by(|a, b| a.n.partial_cmp(&b.n).unwrap());
    let xs: Vec<f64> = rows.iter().map(|row| row.n).collect();
    let mut slopes = Vec::new();
    let mut trend = Vec::new();
    let half = rows.len() / 2;
    for k in 0..s_values.len() {
        let ys: Vec<f64> = rows.iter().map(|row| row.rho[k]).collect();
        slopes.push(fit_loglog(&xs, &ys));
        let top = &ys[half.min(ys.len() - 2)..];
        trend.push(top.windows(2).all(|w| w[1] < w[0]));
    }
    Ok(CriterionDiagnostic {
        s_values: s_values.to_vec(),
        rows,
        slopes,
        trend,
        label: String::from("finite-size trend diagnostic; not a proof of convergence"),
    })
}

/// Family of monomials I (multisets of base indices of size ≤ m) with
/// Y_I = ∏_{α∈I} Y_α, weights W(I, J) and Ψ({I_1..I_r}) = Ψ(I_1 ⊎ .. ⊎ I_r).
#[derive(Clone, Debug)]
pub struct ProductFamily<C: WdgCandidate> {
    pub base: C,
    pub m: usize,
    monomials: Vec<Vec<C::Index>>,
}

pub fn product_family<C: WdgCandidate>(base: C, m: usize, subfamily: Vec<Vec<C::Index>>) -> Result<ProductFamily<C>> {
    if m == 0 {
        return Err(Error::Input("monomial size bound must be positive".into()));
    }
    let mut monomials = Vec::with_capacity(subfamily.len());
    for mut mono in subfamily {
        if mono.is_empty() || mono.len() > m {
            return Err(Error::Input(alloc::format!(
                "monomial of size {} outside 1..={m}",
                mono.len()
            )));
        }
        mono.sort();
        monomials.push(mono);
    }
    Ok(ProductFamily { base, m, monomials })
}

impl<C: WdgCandidate> ProductFamily<C> {
    fn merged(b: &[Vec<C::Index>]) -> Vec<C::Index> {
        b.iter().flatten().cloned().collect()
    }
}

impl<C: WdgCandidate> MomentOracle for ProductFamily<C> {
    type Index = Vec<C::Index>;
    type Value = C::Value;

    fn moment(&self, b: &[Self::Index]) -> Result<Self::Value> {
        self.base.moment(&Self::merged(b))
    }
}

impl<C: WdgCandidate> WdgCandidate for ProductFamily<C> {
    fn indices(&self) -> Vec<Self::Index> {
        self.monomials.clone()
    }

    fn weight(&self, a: &Self::Index, b: &Self::Index) -> Self::Value {
        w_between_fn(a, b, |x, y| self.base.weight(x, y))
    }

    fn psi(&self, b: &[Self::Index]) -> Self::Value {
        self.base.psi(&Self::merged(b))
    }
}

/// A family with a usual dependency graph, turned into a weighted one by
/// giving every edge weight 1.
pub struct UsualCandidate<O: MomentOracle, P> {
    oracle: O,
    graph: WeightedGraph<<O as MomentOracle>::Value>,
    psi: P,
}

/// Indices of the oracle are the vertices `0..n` of `dep_graph`, whose
/// weights must all be 0 or 1.
pub fn from_usual<O, P>(dep_graph: WeightedGraph<O::Value>, psi: P, oracle: O) -> Result<UsualCandidate<O, P>>
where
    O: MomentOracle<Index = usize>,
    P: Fn(&[usize]) -> O::Value,
{
    for (u, v, w) in dep_graph.edges() {
        if w != O::Value::one() {
            return Err(Error::Input(alloc::format!("edge ({u}, {v}) has weight {w:?}, expected 0 or 1")));
        }
    }
    Ok(UsualCandidate {
        oracle,
        graph: dep_graph,
        psi,
    })
}

impl<O, P> MomentOracle for UsualCandidate<O, P>
where
    O: MomentOracle<Index = usize>,
{
    type Index = usize;
    type Value = O::Value;

    fn moment(&self, b: &[usize]) -> Result<Self::Value> {
        self.oracle.moment(b)
    }
}

impl<O, P> WdgCandidate for UsualCandidate<O, P>
where
    O: MomentOracle<Index = usize>,
    P: Fn(&[usize]) -> O::Value,
{
    fn indices(&self) -> Vec<usize> {
        (0..self.graph.len()).collect()
    }

    fn weight(&self, a: &usize, b: &usize) -> Self::Value {
        self.graph.weight(*a, *b).clone()
    }

    fn psi(&self, b: &[usize]) -> Self::Value {
        (self.psi)(b)
    }
}

/// r!² for r ≤ 20, the constant attached to usual dependency graphs.
pub fn usual_constant(r: usize) -> u128 {
    let f: u128 = (1..=r as u128).product();
    f * f
}

/// Multiset of `r` independent uniform positions in `0..n`, sorted.
pub fn random_multiset<R: Rng>(rng: &mut R, n: usize, r: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..r).map(|_| rng.gen_range(0..n)).collect();
    v.sort_unstable();
    v
}
