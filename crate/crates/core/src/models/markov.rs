//! Finite aperiodic irreducible Markov chains started from their
//! stationary law: occupation indicators Y_i^s = [M_i = s], their boolean
//! and classical cumulants, and subword pattern counts.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::marker::PhantomData;

use num_traits::{One, Zero};
use rand::Rng;

use crate::algebra::boolean::{boolean_cumulant, boolean_to_classical_coeffs};
use crate::algebra::cumulant::{cumulant_of, MomentOracle};
use crate::error::{size_limit, Error, Result};
use crate::linalg::{charpoly, deflate, identity, mat_mul, poly_roots, stationary_vector, vec_mat};
use crate::scalar::{Rational, Scalar};
use crate::wdg::{product_family, ProductFamily, WdgCandidate};

/// Slack added to the float λ₂ so that weights never undershoot it.
pub const LAMBDA2_SLACK: f64 = 1e-9;

/// A chain with rational transition matrix, its stationary law and its
/// second eigenvalue modulus.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovChain {
    p: Vec<Vec<Rational>>,
    pi: Vec<Rational>,
    lambda2: f64,
    lambda2_zero: bool,
}

impl MarkovChain {
    /// Validates P (nonnegative, rows summing to 1, primitive) and solves
    /// for π and λ₂.
    pub fn new(p: Vec<Vec<Rational>>) -> Result<Self> {
        let s = p.len();
        if s == 0 || p.iter().any(|row| row.len() != s) {
            return Err(Error::Input("transition matrix must be square and nonempty".into()));
        }
        size_limit("number of states", s, 50)?;
        for (i, row) in p.iter().enumerate() {
            if row.iter().any(|x| *x < Rational::zero()) {
                return Err(Error::Input(alloc::format!("row {i} has a negative entry")));
            }
            let sum = row.iter().fold(Rational::zero(), |a, x| a + x);
            if !sum.is_one() {
                return Err(Error::Input(alloc::format!("row {i} sums to {sum}, not 1")));
            }
        }
        primitivity(&p)?;
        let mut q = p.clone();
        for (i, row) in q.iter_mut().enumerate() {
            row[i] = row[i].clone() - Rational::one();
        }
        let pi = stationary_vector(&q)?;
        let (quotient, rem) = deflate(&charpoly(&p), &Rational::one());
        if !rem.is_zero() {
            return Err(Error::Internal("1 is not an eigenvalue of P".into()));
        }
        let lambda2_zero = quotient[..quotient.len() - 1].iter().all(Zero::is_zero);
        let lambda2 = if lambda2_zero {
            0.0
        } else {
            let c: Vec<f64> = quotient.iter().map(Scalar::to_f64).collect();
            poly_roots(&c).iter().map(|z| z.norm()).fold(0.0, f64::max)
        };
        Ok(MarkovChain { p, pi, lambda2, lambda2_zero })
    }

    /// The chain whose rows all equal `pi` (i.i.d. letters).
    pub fn iid(pi: Vec<Rational>) -> Result<Self> {
        Self::new(vec![pi.clone(); pi.len()])
    }

    pub fn states(&self) -> usize {
        self.p.len()
    }

    pub fn transition(&self) -> &[Vec<Rational>] {
        &self.p
    }

    pub fn stationary(&self) -> &[Rational] {
        &self.pi
    }

    /// Float value of the second largest eigenvalue modulus.
    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    /// Whether λ₂ = 0 exactly (all eigenvalues but 1 vanish).
    pub fn lambda2_is_zero(&self) -> bool {
        self.lambda2_zero
    }

    /// Upper bound on λ₂ used as WDG weight base: the float value plus
    /// 1e-9, or exactly 0.
    pub fn lambda2_upper(&self) -> f64 {
        if self.lambda2_zero {
            0.0
        } else {
            (self.lambda2 + LAMBDA2_SLACK).min(1.0)
        }
    }
}

/// Rejects periodic or reducible chains: P^k must be entrywise positive
/// for some k ≤ |S|².
fn primitivity(p: &[Vec<Rational>]) -> Result<()> {
    let s = p.len();
    let base: Vec<Vec<bool>> = p.iter().map(|r| r.iter().map(|x| !x.is_zero()).collect()).collect();
    let mut reach = base.clone();
    for _ in 1..=s * s {
        if reach.iter().all(|r| r.iter().all(|&x| x)) {
            return Ok(());
        }
        let mut next = vec![vec![false; s]; s];
        for i in 0..s {
            for k in 0..s {
                if reach[i][k] {
                    for j in 0..s {
                        next[i][j] |= base[k][j];
                    }
                }
            }
        }
        reach = next;
    }
    // distinguish the two failure modes
    let mut closure = base.clone();
    for k in 0..s {
        for i in 0..s {
            if closure[i][k] {
                for j in 0..s {
                    if closure[k][j] {
                        closure[i][j] = true;
                    }
                }
            }
        }
    }
    if closure.iter().all(|r| r.iter().all(|&x| x)) {
        Err(Error::Input("chain is periodic".into()))
    } else {
        Err(Error::Input("chain is reducible".into()))
    }
}

/// A time-state index (i, s) of Y_i^s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeState(pub u64, pub usize);

/// Occupation indicators with the matrix moment formula
/// E ∏ Y = π E_{s_1} P^{i_2−i_1} E_{s_2} ⋯ E_{s_r} 1, and the complete
/// weighted graph with weights λ₂^{|j−i|}, Ψ ≡ 1.
#[derive(Debug)]
pub struct MarkovFamily<T> {
    p: Vec<Vec<T>>,
    pi: Vec<T>,
    lambda: T,
    horizon: u64,
    powers: RefCell<BTreeMap<u64, Vec<Vec<T>>>>,
    _t: PhantomData<T>,
}

pub fn markov_moment_oracle<T: Scalar>(chain: &MarkovChain) -> MarkovFamily<T> {
    markov_wdg(chain, 0)
}

/// The family restricted to times `0..=horizon`.
pub fn markov_wdg<T: Scalar>(chain: &MarkovChain, horizon: u64) -> MarkovFamily<T> {
    MarkovFamily {
        p: chain.p.iter().map(|r| r.iter().map(T::from_rational).collect()).collect(),
        pi: chain.pi.iter().map(T::from_rational).collect(),
        lambda: if chain.lambda2_zero { T::zero() } else { T::from_f64(chain.lambda2_upper()) },
        horizon,
        powers: RefCell::new(BTreeMap::new()),
        _t: PhantomData,
    }
}

impl<T: Scalar> MarkovFamily<T> {
    pub fn states(&self) -> usize {
        self.pi.len()
    }

    /// P^k, cached.
    pub fn power(&self, k: u64) -> Vec<Vec<T>> {
        if let Some(m) = self.powers.borrow().get(&k) {
            return m.clone();
        }
        let m = if k == 0 {
            identity(self.states())
        } else if k.is_multiple_of(2) {
            let h = self.power(k / 2);
            mat_mul(&h, &h)
        } else {
            mat_mul(&self.power(k - 1), &self.p)
        };
        self.powers.borrow_mut().insert(k, m.clone());
        m
    }

    /// λ₂ (rounded up) as used in the weights.
    pub fn lambda(&self) -> &T {
        &self.lambda
    }

    fn check(&self, b: &[TimeState]) -> Result<()> {
        for x in b {
            if x.1 >= self.states() {
                return Err(Error::Input(alloc::format!("state {} out of range", x.1)));
            }
        }
        Ok(())
    }

    /// B_r by the closed form π E(1) (P^{ℓ(1)} − 1π) E(2) ⋯ E(r) 1 for
    /// strictly increasing times.
    pub fn boolean_closed_form(&self, z: &[TimeState]) -> Result<T> {
        self.check(z)?;
        if z.is_empty() {
            return Err(Error::Input("boolean cumulant of an empty tuple".into()));
        }
        if z.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Input("times must be strictly increasing".into()));
        }
        let s = self.states();
        let mut v = vec![T::zero(); s];
        v[z[0].1] = self.pi[z[0].1].clone();
        for w in z.windows(2) {
            let moved = vec_mat(&v, &self.power(w[1].0 - w[0].0));
            let mass = v.iter().fold(T::zero(), |a, x| a + x.clone());
            let keep = w[1].1;
            v = vec![T::zero(); s];
            v[keep] = moved[keep].clone() - mass * self.pi[keep].clone();
        }
        Ok(v.into_iter().fold(T::zero(), |a, x| a + x))
    }
}

impl<T: Scalar> MomentOracle for MarkovFamily<T> {
    type Index = TimeState;
    type Value = T;

    fn moment(&self, b: &[TimeState]) -> Result<T> {
        self.check(b)?;
        let mut d = b.to_vec();
        d.sort_unstable();
        d.dedup();
        if d.windows(2).any(|w| w[0].0 == w[1].0) {
            return Ok(T::zero());
        }
        let Some(first) = d.first() else {
            return Ok(T::one());
        };
        let mut acc = self.pi[first.1].clone();
        for w in d.windows(2) {
            acc = acc * self.power(w[1].0 - w[0].0)[w[0].1][w[1].1].clone();
        }
        Ok(acc)
    }
}

impl<T: Scalar> WdgCandidate for MarkovFamily<T> {
    fn indices(&self) -> Vec<TimeState> {
        let s = self.states();
        (0..=self.horizon).flat_map(|i| (0..s).map(move |x| TimeState(i, x))).collect()
    }

    fn weight(&self, a: &TimeState, b: &TimeState) -> T {
        self.lambda.powi(a.0.abs_diff(b.0) as i32)
    }

    fn psi(&self, _b: &[TimeState]) -> T {
        T::one()
    }
}

/// B_r from the closed form and from the interval-moment definition.
pub fn markov_boolean_two_ways<T: Scalar>(f: &MarkovFamily<T>, z: &[TimeState]) -> Result<(T, T)> {
    Ok((f.boolean_closed_form(z)?, boolean_cumulant(f, z)?))
}

/// The classical cumulant from the moment-cumulant formula and from the
/// expansion over irreducible partitions of boolean cumulants given by the
/// closed form. Disagreement is an error.
pub fn classical_cumulant_two_ways<T: Scalar>(f: &MarkovFamily<T>, z: &[TimeState]) -> Result<(T, T)> {
    size_limit("cumulant order", z.len(), 5)?;
    let direct = cumulant_of(f, z)?;
    let expansion = boolean_to_classical_coeffs(z.len())?;
    let via_boolean = expansion.classical(|pos| {
        let sub: Vec<TimeState> = pos.iter().map(|&p| z[p]).collect();
        f.boolean_closed_form(&sub)
    })?;
    let diff = (direct.clone() - via_boolean.clone()).abs_val();
    let scale = direct.abs_val() + via_boolean.abs_val() + T::from_f64(1e-300);
    if !(diff.is_zero() || diff.is_negligible(&scale, 1e-12)) {
        return Err(Error::Internal(alloc::format!(
            "classical cumulant disagreement at {z:?}: {direct:?} vs {via_boolean:?}"
        )));
    }
    Ok((direct, via_boolean))
}

/// Blocks u_1..u_d of a subword pattern, as state sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSpec {
    blocks: Vec<Vec<usize>>,
}

impl PatternSpec {
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(Vec::is_empty) {
            return Err(Error::Input("pattern needs at least one block, all nonempty".into()));
        }
        Ok(PatternSpec { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn d(&self) -> usize {
        self.blocks.len()
    }

    /// m = max block length.
    pub fn max_block(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The time-state indicators whose product is Y_I.
    pub fn occurrence_indices(&self, pos: &[u64]) -> Vec<TimeState> {
        let mut out = Vec::new();
        for (u, &i) in self.blocks.iter().zip(pos) {
            for (k, &s) in u.iter().enumerate() {
                out.push(TimeState(i + k as u64, s));
            }
        }
        out
    }

    /// Letter positions covered by an occurrence at `pos`.
    pub fn covered(&self, pos: &[u64]) -> Vec<u64> {
        self.occurrence_indices(pos).into_iter().map(|t| t.0).collect()
    }
}

/// Occurrence count by dynamic programming over positions.
pub fn count_pattern(word: &[usize], pattern: &PatternSpec) -> u128 {
    let d = pattern.d();
    let n = word.len();
    // prefix[j][p]: placements of blocks 1..j ending before position p
    let mut prefix = vec![vec![0u128; n + 1]; d + 1];
    prefix[0].iter_mut().for_each(|x| *x = 1);
    for j in 1..=d {
        let u = &pattern.blocks[j - 1];
        let l = u.len();
        for p in 0..n {
            let mut add = 0;
            if p + 1 >= l {
                let s = p + 1 - l;
                if word[s..=p] == u[..] {
                    add = prefix[j - 1][s];
                }
            }
            prefix[j][p + 1] = prefix[j][p] + add;
        }
    }
    prefix[d][n]
}

/// All occurrence positions (i_1, .., i_d), lexicographically.
pub fn pattern_positions(word: &[usize], pattern: &PatternSpec) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(word: &[usize], blocks: &[Vec<usize>], start: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let Some((u, rest)) = blocks.split_first() else {
            out.push(cur.clone());
            return;
        };
        let l = u.len();
        for i in start..word.len() {
            if i + l > word.len() {
                break;
            }
            if word[i..i + l] == u[..] {
                cur.push(i as u64);
                rec(word, rest, i + l, cur, out);
                cur.pop();
            }
        }
    }
    rec(word, &pattern.blocks, 0, &mut cur, &mut out);
    out
}

/// ℐ_N: positions with i_{j+1} ≥ i_j + ℓ_j and i_d + ℓ_d − 1 ≤ N.
pub fn admissible_positions(pattern: &PatternSpec, horizon: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    fn rec(blocks: &[Vec<usize>], start: u64, horizon: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let Some((u, rest)) = blocks.split_first() else {
            out.push(cur.clone());
            return;
        };
        let l = u.len() as u64;
        let mut i = start;
        while i + l - 1 <= horizon {
            cur.push(i);
            rec(rest, i + l, horizon, cur, out);
            cur.pop();
            i += 1;
        }
    }
    rec(&pattern.blocks, 0, horizon, &mut Vec::new(), &mut out);
    out
}

/// E X_N = Σ_{I ∈ ℐ_N} E Y_I from the moment oracle.
pub fn pattern_expectation<T: Scalar>(f: &MarkovFamily<T>, pattern: &PatternSpec, horizon: u64) -> Result<T> {
    let mut total = T::zero();
    for pos in admissible_positions(pattern, horizon) {
        total = total + f.moment(&pattern.occurrence_indices(&pos))?;
    }
    Ok(total)
}

/// The family (Y_I)_{I ∈ ℐ_N} as products of time-state indicators.
pub fn pattern_family<T: Scalar>(chain: &MarkovChain, pattern: &PatternSpec, horizon: u64) -> Result<ProductFamily<MarkovFamily<T>>> {
    let monomials: Vec<Vec<TimeState>> = admissible_positions(pattern, horizon)
        .iter()
        .map(|pos| pattern.occurrence_indices(pos))
        .collect();
    let m = monomials.iter().map(Vec::len).max().unwrap_or(1);
    product_family(markov_wdg(chain, horizon), m, monomials)
}

/// d(I, J): minimal distance between covered letter positions.
pub fn pattern_distance(pattern: &PatternSpec, a: &[u64], b: &[u64]) -> u64 {
    let (ca, cb) = (pattern.covered(a), pattern.covered(b));
    ca.iter()
        .flat_map(|x| cb.iter().map(move |y| x.abs_diff(*y)))
        .min()
        .unwrap_or(0)
}

/// Samples M_0..M_N with M_0 ~ π.
pub fn sample_chain<R: Rng + ?Sized>(chain: &MarkovChain, horizon: u64, rng: &mut R) -> Vec<usize> {
    let cum = |row: &[Rational]| -> Vec<f64> {
        let mut acc = 0.0;
        row.iter()
            .map(|x| {
                acc += x.to_f64();
                acc
            })
            .collect()
    };
    let pi = cum(&chain.pi);
    let rows: Vec<Vec<f64>> = chain.p.iter().map(|r| cum(r)).collect();
    let draw = |c: &[f64], rng: &mut R| {
        let u: f64 = rng.gen::<f64>() * c[c.len() - 1];
        c.iter().position(|&x| u < x).unwrap_or(c.len() - 1)
    };
    let mut out = Vec::with_capacity(horizon as usize + 1);
    let mut s = draw(&pi, rng);
    out.push(s);
    for _ in 0..horizon {
        s = draw(&rows[s], rng);
        out.push(s);
    }
    out
}

/// Length of the longest run of `state` in `word`.
pub fn longest_run(word: &[usize], state: usize) -> u64 {
    let (mut best, mut cur) = (0, 0);
    for &x in word {
        if x == state {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn two_state() -> MarkovChain {
        MarkovChain::new(vec![vec![rat(7, 10), rat(3, 10)], vec![rat(1, 5), rat(4, 5)]]).unwrap()
    }

    #[test]
    fn construction() {
        let c = two_state();
        assert_eq!(c.stationary(), &[rat(2, 5), rat(3, 5)]);
        assert!((c.lambda2() - 0.5).abs() < 1e-12);
        let periodic = MarkovChain::new(vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]]);
        assert!(matches!(periodic, Err(Error::Input(m)) if m.contains("periodic")));
        let reducible = MarkovChain::new(vec![vec![rat(1, 1), rat(0, 1)], vec![rat(1, 2), rat(1, 2)]]);
        assert!(matches!(reducible, Err(Error::Input(m)) if m.contains("reducible")));
        let iid = MarkovChain::iid(vec![rat(1, 3), rat(2, 3)]).unwrap();
        assert!(iid.lambda2_is_zero());
    }

    #[test]
    fn moments() {
        let f = markov_moment_oracle::<Rational>(&two_state());
        assert_eq!(f.moment(&[TimeState(7, 1)]).unwrap(), rat(3, 5));
        assert_eq!(f.moment(&[TimeState(0, 0), TimeState(1, 0)]).unwrap(), rat(2, 5) * rat(7, 10));
        assert_eq!(f.moment(&[TimeState(0, 0), TimeState(0, 1)]).unwrap(), rat(0, 1));
    }

    #[test]
    fn boolean_paths_agree() {
        let f = markov_moment_oracle::<Rational>(&two_state());
        let z = [TimeState(0, 0), TimeState(2, 1), TimeState(5, 0)];
        let (a, b) = markov_boolean_two_ways(&f, &z).unwrap();
        assert_eq!(a, b);
        classical_cumulant_two_ways(&f, &z).unwrap();
    }

    #[test]
    fn pattern_counts() {
        let ab = PatternSpec::new(vec![vec![0, 1]]).unwrap();
        assert_eq!(count_pattern(&[0, 1, 0, 1], &ab), 2);
        let a_b = PatternSpec::new(vec![vec![0], vec![1]]).unwrap();
        assert_eq!(count_pattern(&[0, 0, 1], &a_b), 2);
        assert_eq!(pattern_positions(&[0, 0, 1], &a_b), vec![vec![0, 2], vec![1, 2]]);
        assert_eq!(longest_run(&[0, 1, 1, 1, 0, 1], 1), 3);
    }
}
