//! Uniform random pair partitions of `[2n]` and their crossings.

use alloc::vec;
use alloc::vec::Vec;
use core::marker::PhantomData;

use num_traits::Zero;
use rand::Rng;

use crate::algebra::cumulant::MomentOracle;
use crate::combinatorics::{binomial, binomial_big, unrank_combination};
use crate::error::{size_limit, Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::wdg::{product_family, ProductFamily, WdgCandidate};

/// Largest `n` for exhaustive enumeration of pairings ((2n−1)!! = 10395).
pub const ENUMERATION_LIMIT: usize = 6;

/// A pair `{a, b}` of `[2n]` stored with `a < b` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair(pub u32, pub u32);

impl Pair {
    pub fn new(a: u32, b: u32) -> Self {
        if a < b {
            Pair(a, b)
        } else {
            Pair(b, a)
        }
    }

    pub fn shares_element(&self, other: &Pair) -> bool {
        self.0 == other.0 || self.0 == other.1 || self.1 == other.0 || self.1 == other.1
    }
}

/// A perfect matching of `[2n]` given by its partner involution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairPartition {
    partner: Vec<u32>,
}

impl PairPartition {
    /// From a 1-based partner array: `partner[i-1]` is the partner of `i`.
    pub fn from_partner(partner: Vec<u32>) -> Result<Self> {
        let m = partner.len();
        if m % 2 == 1 {
            return Err(Error::Input("odd ground set".into()));
        }
        for (i, &j) in partner.iter().enumerate() {
            let i = i as u32 + 1;
            if j == 0 || j as usize > m || j == i || partner[j as usize - 1] != i {
                return Err(Error::Input(alloc::format!("partner array is not a fixed-point-free involution at {i}")));
            }
        }
        Ok(PairPartition { partner })
    }

    pub fn from_pairs(n: usize, pairs: &[Pair]) -> Result<Self> {
        let mut partner = vec![0u32; 2 * n];
        for p in pairs {
            if p.0 == 0 || p.1 as usize > 2 * n || p.0 == p.1 {
                return Err(Error::Input(alloc::format!("invalid pair {p:?}")));
            }
            partner[p.0 as usize - 1] = p.1;
            partner[p.1 as usize - 1] = p.0;
        }
        Self::from_partner(partner)
    }

    pub fn n(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn partner(&self, i: u32) -> u32 {
        self.partner[i as usize - 1]
    }

    pub fn partner_array(&self) -> &[u32] {
        &self.partner
    }

    pub fn pairs(&self) -> Vec<Pair> {
        (1..=self.partner.len() as u32)
            .filter(|&i| i < self.partner(i))
            .map(|i| Pair(i, self.partner(i)))
            .collect()
    }

    pub fn contains(&self, p: &Pair) -> bool {
        p.1 as usize <= self.partner.len() && self.partner(p.0) == p.1
    }
}

/// Uniform pairing: an unmatched element picks its partner uniformly among
/// the remaining unmatched elements.
pub fn sample_pairing<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PairPartition {
    let mut rest: Vec<u32> = (1..=2 * n as u32).collect();
    let mut partner = vec![0u32; 2 * n];
    while let Some(i) = rest.pop() {
        let k = rng.gen_range(0..rest.len());
        let j = rest.swap_remove(k);
        partner[i as usize - 1] = j;
        partner[j as usize - 1] = i;
    }
    PairPartition { partner }
}

/// All (2n−1)!! pairings of `[2n]`, `n ≤ 6`.
pub fn enumerate_pairings(n: usize) -> Result<Vec<PairPartition>> {
    size_limit("pairing size n", n, ENUMERATION_LIMIT)?;
    let mut out = Vec::new();
    let mut partner = vec![0u32; 2 * n];
    fn rec(partner: &mut Vec<u32>, out: &mut Vec<PairPartition>) {
        let Some(i) = partner.iter().position(|&p| p == 0) else {
            out.push(PairPartition { partner: partner.clone() });
            return;
        };
        for j in i + 1..partner.len() {
            if partner[j] == 0 {
                partner[i] = j as u32 + 1;
                partner[j] = i as u32 + 1;
                rec(partner, out);
                partner[i] = 0;
                partner[j] = 0;
            }
        }
    }
    rec(&mut partner, &mut out);
    Ok(out)
}

/// Number of crossings: quadruples i<j<k<l with {i,k} and {j,l} paired.
pub fn count_crossings(p: &PairPartition) -> u64 {
    let arcs = p.pairs();
    let mut c = 0;
    for (x, a) in arcs.iter().enumerate() {
        for b in &arcs[x + 1..] {
            let (first, second) = if a.0 < b.0 { (a, b) } else { (b, a) };
            if first.0 < second.0 && second.0 < first.1 && first.1 < second.1 {
                c += 1;
            }
        }
    }
    c
}

/// Probability that all given pairs belong to a uniform pairing of `[2n]`.
pub fn pairing_moment<T: Scalar>(n: usize, pairs: &[Pair]) -> T {
    let mut distinct: Vec<Pair> = pairs.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for (x, a) in distinct.iter().enumerate() {
        if a.1 as usize > 2 * n {
            return T::zero();
        }
        if distinct[x + 1..].iter().any(|b| a.shares_element(b)) {
            return T::zero();
        }
    }
    let t = distinct.len();
    if t > n {
        return T::zero();
    }
    let mut den = T::one();
    for s in 0..t {
        den = den * T::from_i64(2 * n as i64 - 1 - 2 * s as i64);
    }
    T::one() / den
}

/// Pair indicators Y_{i,j} with weight 1 between pairs sharing an element,
/// 1/n otherwise, and Ψ(B) = n^{−#(B)}.
#[derive(Clone, Debug)]
pub struct PairingFamily<T> {
    pub n: usize,
    _t: PhantomData<T>,
}

pub fn pairing_wdg<T: Scalar>(n: usize) -> PairingFamily<T> {
    PairingFamily { n, _t: PhantomData }
}

/// The moment oracle of the pair indicators.
pub fn pairing_moment_oracle<T: Scalar>(n: usize) -> PairingFamily<T> {
    pairing_wdg(n)
}

fn distinct_count<I: Ord + Clone>(b: &[I]) -> usize {
    let mut v = b.to_vec();
    v.sort();
    v.dedup();
    v.len()
}

impl<T: Scalar> MomentOracle for PairingFamily<T> {
    type Index = Pair;
    type Value = T;

    fn moment(&self, b: &[Pair]) -> Result<T> {
        Ok(pairing_moment(self.n, b))
    }
}

impl<T: Scalar> WdgCandidate for PairingFamily<T> {
    fn indices(&self) -> Vec<Pair> {
        let m = 2 * self.n as u32;
        let mut out = Vec::new();
        for a in 1..=m {
            for b in a + 1..=m {
                out.push(Pair(a, b));
            }
        }
        out
    }

    fn weight(&self, a: &Pair, b: &Pair) -> T {
        if a.shares_element(b) {
            T::one()
        } else {
            T::from_ratio(1, self.n as i64)
        }
    }

    fn psi(&self, b: &[Pair]) -> T {
        T::from_ratio(1, self.n as i64).powi(distinct_count(b) as i32)
    }
}

/// Quadruple i<j<k<l indexing the crossing indicator of {i,k}, {j,l}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrossingIndex(pub u32, pub u32, pub u32, pub u32);

impl CrossingIndex {
    pub fn new(i: u32, j: u32, k: u32, l: u32) -> Result<Self> {
        if i == 0 || !(i < j && j < k && k < l) {
            return Err(Error::Input(alloc::format!("({i},{j},{k},{l}) is not strictly increasing")));
        }
        Ok(CrossingIndex(i, j, k, l))
    }

    pub fn pairs(&self) -> [Pair; 2] {
        [Pair(self.0, self.2), Pair(self.1, self.3)]
    }

    fn elements(&self) -> [u32; 4] {
        [self.0, self.1, self.2, self.3]
    }

    pub fn intersects(&self, other: &CrossingIndex) -> bool {
        let b = other.elements();
        self.elements().iter().any(|x| b.contains(x))
    }
}

/// Number of distinct pairs used by a multiset of crossing indices.
pub fn pairs_count(b: &[CrossingIndex]) -> usize {
    let mut v: Vec<Pair> = b.iter().flat_map(|q| q.pairs()).collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Crossing indicators Y′_{i,j,k,l}: weight 1 between intersecting
/// quadruples, 1/n otherwise, Ψ′(B) = n^{−pairs(B)}. The index set has
/// C(2n, 4) elements and is never materialized by the lazy accessors.
#[derive(Clone, Debug)]
pub struct CrossingsFamily<T> {
    pub n: usize,
    _t: PhantomData<T>,
}

pub fn crossings_wdg<T: Scalar>(n: usize) -> CrossingsFamily<T> {
    CrossingsFamily { n, _t: PhantomData }
}

impl<T: Scalar> MomentOracle for CrossingsFamily<T> {
    type Index = CrossingIndex;
    type Value = T;

    fn moment(&self, b: &[CrossingIndex]) -> Result<T> {
        let pairs: Vec<Pair> = b.iter().flat_map(|q| q.pairs()).collect();
        Ok(pairing_moment(self.n, &pairs))
    }
}

impl<T: Scalar> WdgCandidate for CrossingsFamily<T> {
    fn indices(&self) -> Vec<CrossingIndex> {
        let mut out = Vec::new();
        self.visit_indices(&mut |q| out.push(*q));
        out
    }

    fn weight(&self, a: &CrossingIndex, b: &CrossingIndex) -> T {
        if a.intersects(b) {
            T::one()
        } else {
            T::from_ratio(1, self.n as i64)
        }
    }

    fn psi(&self, b: &[CrossingIndex]) -> T {
        let mut v = [Pair(0, 0); 16];
        let mut len = 0;
        if b.len() > 8 {
            return T::from_ratio(1, self.n as i64).powi(pairs_count(b) as i32);
        }
        for q in b {
            for p in q.pairs() {
                if !v[..len].contains(&p) {
                    v[len] = p;
                    len += 1;
                }
            }
        }
        T::from_ratio(1, self.n as i64).powi(len as i32)
    }

    fn index_count(&self) -> usize {
        binomial(2 * self.n as u64, 4) as usize
    }

    fn index_at(&self, k: usize) -> CrossingIndex {
        let c = unrank_combination(2 * self.n as u64, 4, k as u128);
        CrossingIndex(c[0] as u32 + 1, c[1] as u32 + 1, c[2] as u32 + 1, c[3] as u32 + 1)
    }

    fn visit_indices(&self, f: &mut dyn FnMut(&CrossingIndex)) {
        let m = 2 * self.n as u32;
        for i in 1..=m {
            for j in i + 1..=m {
                for k in j + 1..=m {
                    for l in k + 1..=m {
                        f(&CrossingIndex(i, j, k, l));
                    }
                }
            }
        }
    }
}

/// The crossing family assembled as monomials {(i,k), (j,l)} of the pair
/// family.
pub fn crossings_product_family<T: Scalar>(n: usize) -> Result<ProductFamily<PairingFamily<T>>> {
    let monomials = crossings_wdg::<T>(n)
        .indices()
        .into_iter()
        .map(|q| q.pairs().to_vec())
        .collect();
    product_family(pairing_wdg(n), 2, monomials)
}

/// How the crossing moments are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingsMode {
    /// average over all pairings (n ≤ 6)
    Bruteforce,
    /// sum of pattern counts times exact pattern covariances
    ClassSum,
}

/// Largest n accepted by the class-sum mode.
pub const CLASS_SUM_LIMIT: usize = 200;

/// One index-equality pattern between two crossing quadruples: both
/// quadruples as subsets of `1..=v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingPattern {
    pub v: u32,
    pub first: CrossingIndex,
    pub second: CrossingIndex,
}

/// All ordered patterns of two quadruples whose union is `{1..v}`, `4 ≤ v ≤ 8`.
pub fn crossing_patterns() -> Vec<CrossingPattern> {
    let mut out = Vec::new();
    for v in 4u32..=8 {
        let quads: Vec<[u32; 4]> = (0..binomial(v as u64, 4))
            .map(|r| {
                let c = unrank_combination(v as u64, 4, r);
                [c[0] as u32 + 1, c[1] as u32 + 1, c[2] as u32 + 1, c[3] as u32 + 1]
            })
            .collect();
        for a in &quads {
            for b in &quads {
                let covered = (1..=v).all(|x| a.contains(&x) || b.contains(&x));
                if covered {
                    out.push(CrossingPattern {
                        v,
                        first: CrossingIndex(a[0], a[1], a[2], a[3]),
                        second: CrossingIndex(b[0], b[1], b[2], b[3]),
                    });
                }
            }
        }
    }
    out
}

/// Exact mean and variance of the number of crossings.
pub fn crossings_moments_exact(n: usize, mode: CrossingsMode) -> Result<(Rational, Rational)> {
    match mode {
        CrossingsMode::Bruteforce => {
            let all = enumerate_pairings(n)?;
            let total = <Rational as Scalar>::from_i64(all.len() as i64);
            let mut s1 = Rational::zero();
            let mut s2 = Rational::zero();
            for p in &all {
                let c = <Rational as Scalar>::from_i64(count_crossings(p) as i64);
                s1 += c.clone();
                s2 += c.clone() * c;
            }
            let mean = s1 / total.clone();
            let var = s2 / total - mean.clone() * mean.clone();
            Ok((mean, var))
        }
        CrossingsMode::ClassSum => {
            size_limit("class-sum size n", n, CLASS_SUM_LIMIT)?;
            let count = |v: u32| Rational::from_integer(binomial_big(2 * n as u64, v as u64));
            let single: Rational = pairing_moment(n, &CrossingIndex(1, 2, 3, 4).pairs());
            let mean = count(4) * single.clone();
            let mut var = Rational::zero();
            for pat in crossing_patterns() {
                let mut pairs = pat.first.pairs().to_vec();
                pairs.extend(pat.second.pairs());
                let joint: Rational = pairing_moment(n, &pairs);
                var += count(pat.v) * (joint - single.clone() * single.clone());
            }
            Ok((mean, var))
        }
    }
}

/// n(n−1)(n+3)/45, the closed form supported by the exact computations.
pub fn crossings_variance_closed_form(n: i64) -> Rational {
    Rational::new((n * (n - 1) * (n + 3)).into(), 45.into())
}

/// (2n−1)²(2n−3)²(2n−5)(2n−7) · Var(Cr_n), a polynomial in n of degree ≤ 9.
pub fn scaled_variance(n: usize) -> Result<Rational> {
    let (_, var) = crossings_moments_exact(n, CrossingsMode::ClassSum)?;
    let m = n as i64;
    let f = (2 * m - 1) * (2 * m - 1) * (2 * m - 3) * (2 * m - 3) * (2 * m - 5) * (2 * m - 7);
    Ok(var * <Rational as Scalar>::from_i64(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn moments_examples() {
        assert_eq!(pairing_moment::<Rational>(4, &[Pair(1, 2)]), rat(1, 7));
        assert_eq!(pairing_moment::<Rational>(4, &[Pair(1, 2), Pair(1, 3)]), rat(0, 1));
        assert_eq!(pairing_moment::<Rational>(4, &[Pair(1, 2), Pair(3, 4)]), rat(1, 35));
        assert_eq!(pairing_moment::<Rational>(1, &[Pair(1, 2), Pair(1, 2)]), rat(1, 1));
    }

    #[test]
    fn crossing_examples() {
        let h = PairPartition::from_pairs(4, &[Pair(1, 5), Pair(2, 3), Pair(4, 7), Pair(6, 8)]).unwrap();
        assert_eq!(count_crossings(&h), 2);
        let nc = PairPartition::from_pairs(3, &[Pair(1, 2), Pair(3, 4), Pair(5, 6)]).unwrap();
        assert_eq!(count_crossings(&nc), 0);
        let one = PairPartition::from_pairs(2, &[Pair(1, 3), Pair(2, 4)]).unwrap();
        assert_eq!(count_crossings(&one), 1);
    }

    #[test]
    fn enumeration_sizes() {
        let sizes: Vec<usize> = (1..=6).map(|n| enumerate_pairings(n).unwrap().len()).collect();
        assert_eq!(sizes, [1, 3, 15, 105, 945, 10395]);
        assert!(enumerate_pairings(7).is_err());
    }

    #[test]
    fn small_exact_moments() {
        let (m, v) = crossings_moments_exact(2, CrossingsMode::Bruteforce).unwrap();
        assert_eq!((m, v), (rat(1, 3), rat(2, 9)));
        for n in 0..=6 {
            let b = if n == 0 { None } else { Some(crossings_moments_exact(n, CrossingsMode::Bruteforce).unwrap()) };
            let c = crossings_moments_exact(n, CrossingsMode::ClassSum).unwrap();
            if let Some(b) = b {
                assert_eq!(b, c, "n = {n}");
            }
            assert_eq!(c.0, rat((n * (n.max(1) - 1)) as i64, 6));
        }
    }

    #[test]
    fn lazy_index_access() {
        let c = crossings_wdg::<f64>(3);
        let all = c.indices();
        assert_eq!(all.len(), c.index_count());
        for (k, q) in all.iter().enumerate() {
            assert_eq!(c.index_at(k), *q);
        }
    }
}
