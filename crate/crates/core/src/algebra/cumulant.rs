//! Moment/cumulant transforms over multisets of family indices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use super::partition::{for_each_partition, mobius_from_blocks, SetPartition};
use crate::error::{size_limit, Error, Result};
use crate::scalar::Scalar;
use num_traits::{One, Zero};

/// Default bound on the order of cumulants computed by enumeration.
pub const DEFAULT_GUARD: usize = 8;

/// A family of random variables described by its joint moments.
///
/// `moment` receives a multiset as a slice (order irrelevant, repeats
/// meaningful) and must return 1 on the empty multiset.
pub trait MomentOracle {
    type Index: Clone + Ord + Debug;
    type Value: Scalar;

    fn moment(&self, multiset: &[Self::Index]) -> Result<Self::Value>;

    fn is_exact(&self) -> bool {
        Self::Value::EXACT
    }
}

impl<O: MomentOracle + ?Sized> MomentOracle for &O {
    type Index = O::Index;
    type Value = O::Value;

    fn moment(&self, multiset: &[Self::Index]) -> Result<Self::Value> {
        (**self).moment(multiset)
    }
}

/// Sub-multiset of `b` selected by the bits of `mask`.
pub(crate) fn select<I: Clone>(b: &[I], mask: u64) -> Vec<I> {
    b.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, x)| x.clone())
        .collect()
}

/// Block masks of a restricted growth string, written into `out`.
fn masks_of(labels: &[usize], blocks: usize, out: &mut [u64; 64]) {
    out[..blocks].iter_mut().for_each(|m| *m = 0);
    for (i, &l) in labels.iter().enumerate() {
        out[l] |= 1 << i;
    }
}

/// Joint moments of every sub-multiset of `b`, indexed by bit mask.
pub fn subset_moments<O: MomentOracle>(oracle: &O, b: &[O::Index]) -> Result<Vec<O::Value>> {
    size_limit("multiset size", b.len(), 20)?;
    let r = b.len();
    let mut out = Vec::with_capacity(1 << r);
    for mask in 0..1u64 << r {
        out.push(oracle.moment(&select(b, mask))?);
    }
    Ok(out)
}

/// Classical cumulant of the full ground set `{0..r-1}` from its subset
/// moments `m[mask]`.
pub fn cumulant_from_subset_moments<T: Scalar>(r: usize, m: &[T]) -> T {
    if r == 0 {
        return T::zero();
    }
    let mut total = T::zero();
    let mut masks = [0u64; 64];
    for_each_partition(r, |labels, blocks| {
        masks_of(labels, blocks, &mut masks);
        let mut prod = T::from_i64(mobius_from_blocks(blocks));
        for &mk in &masks[..blocks] {
            prod = prod * m[mk as usize].clone();
        }
        total = total.clone() + prod;
    });
    total
}

/// Cumulant of the positions in `mask` from the full subset-moment table.
fn cumulant_of_mask<T: Scalar>(mask: u64, m: &[T]) -> T {
    let positions: Vec<u32> = (0..64).filter(|i| mask >> i & 1 == 1).collect();
    let k = positions.len();
    let mut total = T::zero();
    let mut local = [0u64; 64];
    for_each_partition(k, |labels, blocks| {
        masks_of(labels, blocks, &mut local);
        let mut prod = T::from_i64(mobius_from_blocks(blocks));
        for &lm in &local[..blocks] {
            let mut global = 0u64;
            for (j, &p) in positions.iter().enumerate() {
                if lm >> j & 1 == 1 {
                    global |= 1 << p;
                }
            }
            prod = prod * m[global as usize].clone();
        }
        total = total.clone() + prod;
    });
    total
}

/// Joint cumulants of every sub-multiset of `b`, indexed by bit mask
/// (entry 0 is zero by convention).
pub fn subset_cumulants<O: MomentOracle>(oracle: &O, b: &[O::Index]) -> Result<Vec<O::Value>> {
    let m = subset_moments(oracle, b)?;
    Ok(cumulants_from_moment_table(b.len(), &m))
}

pub(crate) fn cumulants_from_moment_table<T: Scalar>(r: usize, m: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); 1 << r];
    for mask in 1..1u64 << r {
        out[mask as usize] = cumulant_of_mask(mask, m);
    }
    out
}

/// Joint cumulant κ(Y_b : b ∈ B) with the default guard on |B|.
pub fn cumulant_of<O: MomentOracle>(oracle: &O, b: &[O::Index]) -> Result<O::Value> {
    cumulant_of_with_guard(oracle, b, DEFAULT_GUARD)
}

pub fn cumulant_of_with_guard<O: MomentOracle>(
    oracle: &O,
    b: &[O::Index],
    guard: usize,
) -> Result<O::Value> {
    size_limit("cumulant order", b.len(), guard.min(super::partition::MAX_ENUMERATION))?;
    if b.is_empty() {
        return Err(Error::Input("cumulant of an empty multiset".into()));
    }
    let m = subset_moments(oracle, b)?;
    Ok(cumulant_from_subset_moments(b.len(), &m))
}

/// Cumulants κ_1..κ_r of one variable from its moments m_1..m_r:
/// κ_n = m_n − Σ_{k<n} C(n−1, k−1) κ_k m_{n−k}.
pub fn univariate_cumulants<T: Scalar>(m: &[T]) -> Vec<T> {
    let mut k: Vec<T> = Vec::with_capacity(m.len());
    for n in 1..=m.len() {
        let mut v = m[n - 1].clone();
        let mut c: i64 = 1;
        for j in 1..n {
            v = v - T::from_i64(c) * k[j - 1].clone() * m[n - j - 1].clone();
            c = c * (n - j) as i64 / j as i64;
        }
        k.push(v);
    }
    k
}

/// Joint moment from a cumulant function: Σ_π ∏_{C∈π} κ(B|_C).
pub fn moment_from_cumulants<I, T, F>(mut kappa: F, b: &[I]) -> Result<T>
where
    I: Clone,
    T: Scalar,
    F: FnMut(&[I]) -> Result<T>,
{
    size_limit("moment order", b.len(), DEFAULT_GUARD)?;
    let r = b.len();
    if r == 0 {
        return Ok(T::one());
    }
    let mut k = vec![T::zero(); 1 << r];
    for mask in 1..1u64 << r {
        k[mask as usize] = kappa(&select(b, mask))?;
    }
    let mut total = T::zero();
    let mut masks = [0u64; 64];
    for_each_partition(r, |labels, blocks| {
        masks_of(labels, blocks, &mut masks);
        let mut prod = T::one();
        for &mk in &masks[..blocks] {
            prod = prod * k[mk as usize].clone();
        }
        total = total.clone() + prod;
    });
    Ok(total)
}

/// A partition of the positions of a multiset together with its labels.
/// Repeated labels are never merged, so a multiset of size r always has
/// Bell(r) multiset partitions counted with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisetPartition<I> {
    pub partition: SetPartition,
    pub labels: Vec<I>,
}

impl<I: Clone> MultisetPartition<I> {
    pub fn blocks(&self) -> Vec<Vec<I>> {
        self.partition
            .blocks()
            .into_iter()
            .map(|bl| bl.into_iter().map(|p| self.labels[p].clone()).collect())
            .collect()
    }
}

pub fn multiset_partitions<I: Clone>(b: &[I]) -> Result<Vec<MultisetPartition<I>>> {
    let parts = super::partition::enumerate_partitions(b.len())?;
    Ok(parts
        .into_iter()
        .map(|partition| MultisetPartition {
            partition,
            labels: b.to_vec(),
        })
        .collect())
}

/// Both evaluations of κ(∏_{B_1} Y, …, ∏_{B_ℓ} Y).
#[derive(Clone, Debug, PartialEq)]
pub struct ProductCumulant<T> {
    /// Cumulant of the product variables computed from their joint moments.
    pub direct: T,
    /// Sum over multiset partitions π with π ∨ {B_1..B_ℓ} maximal.
    pub expansion: T,
}

/// Cumulant of products of family variables, computed two independent ways.
pub fn leonov_shiryaev<O: MomentOracle>(
    oracle: &O,
    blocks: &[Vec<O::Index>],
) -> Result<ProductCumulant<O::Value>> {
    let l = blocks.len();
    if l == 0 || blocks.iter().any(Vec::is_empty) {
        return Err(Error::Input("blocks must be nonempty".into()));
    }
    let flat: Vec<O::Index> = blocks.iter().flatten().cloned().collect();
    let r = flat.len();
    size_limit("total size of product blocks", r, DEFAULT_GUARD)?;

    let m = subset_moments(oracle, &flat)?;

    // (a) product variables as an ℓ-variable family
    let mut owner = Vec::with_capacity(r);
    for (i, bl) in blocks.iter().enumerate() {
        owner.extend(core::iter::repeat_n(i, bl.len()));
    }
    let block_mask = |sel: u64| -> u64 {
        let mut mk = 0u64;
        for (p, &o) in owner.iter().enumerate() {
            if sel >> o & 1 == 1 {
                mk |= 1 << p;
            }
        }
        mk
    };
    let product_moments: Vec<O::Value> = (0..1u64 << l)
        .map(|sel| m[block_mask(sel) as usize].clone())
        .collect();
    let direct = cumulant_from_subset_moments(l, &product_moments);

    // (b) connected multiset partitions
    let kappa = cumulants_from_moment_table(r, &m);
    let mut expansion = O::Value::zero();
    let mut masks = [0u64; 64];
    for_each_partition(r, |labels, nb| {
        masks_of(labels, nb, &mut masks);
        if connects(&masks[..nb], &owner, l) {
            let mut prod = O::Value::one();
            for &mk in &masks[..nb] {
                prod = prod * kappa[mk as usize].clone();
            }
            expansion = expansion.clone() + prod;
        }
    });
    Ok(ProductCumulant { direct, expansion })
}

/// Whether the partition with the given block masks, joined with the block
/// structure `owner`, is the one-block partition.
fn connects(masks: &[u64], owner: &[usize], l: usize) -> bool {
    let mut parent: Vec<usize> = (0..l).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut comps = l;
    for &mk in masks {
        let mut first = None;
        for (p, &o) in owner.iter().enumerate() {
            if mk >> p & 1 == 1 {
                match first {
                    None => first = Some(o),
                    Some(f) => {
                        let (a, b) = (find(&mut parent, f), find(&mut parent, o));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                            comps -= 1;
                        }
                    }
                }
            }
        }
    }
    comps == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    /// Independent Bernoulli variables with the given means.
    struct IndepBernoulli(Vec<Rational>);

    impl MomentOracle for IndepBernoulli {
        type Index = usize;
        type Value = Rational;
        fn moment(&self, b: &[usize]) -> Result<Rational> {
            let mut s = b.to_vec();
            s.sort();
            s.dedup();
            Ok(s.iter().fold(rat(1, 1), |acc, &i| acc * self.0[i].clone()))
        }
    }

    #[test]
    fn low_orders() {
        let o = IndepBernoulli(vec![rat(1, 3), rat(1, 4)]);
        assert_eq!(cumulant_of(&o, &[0]).unwrap(), rat(1, 3));
        // variance of a Bernoulli(1/3)
        assert_eq!(cumulant_of(&o, &[0, 0]).unwrap(), rat(2, 9));
        assert_eq!(cumulant_of(&o, &[0, 1]).unwrap(), rat(0, 1));
        assert_eq!(cumulant_of(&o, &[0, 1, 1, 0]).unwrap(), rat(0, 1));
        // third cumulant of Bernoulli(p): p(1-p)(1-2p)
        assert_eq!(cumulant_of(&o, &[1, 1, 1]).unwrap(), rat(3, 16) * rat(1, 2));
    }

    #[test]
    fn bernoulli_cumulants() {
        let m = vec![rat(1, 2); 4];
        assert_eq!(univariate_cumulants(&m), vec![rat(1, 2), rat(1, 4), rat(0, 1), rat(-1, 8)]);
    }

    #[test]
    fn guard_applies() {
        let o = IndepBernoulli(vec![rat(1, 2)]);
        assert!(matches!(cumulant_of(&o, &[0; 9]), Err(Error::SizeLimit { .. })));
        assert!(cumulant_of_with_guard(&o, &[0; 9], 9).is_ok());
    }

    #[test]
    fn multiset_partition_count() {
        let parts = multiset_partitions(&['a', 'b', 'b']).unwrap();
        assert_eq!(parts.len(), 5);
        assert_eq!(parts[0].blocks(), vec![vec!['a', 'b', 'b']]);
    }

    #[test]
    fn moment_round_trip_low_order() {
        let o = IndepBernoulli(vec![rat(1, 3), rat(2, 5)]);
        let m = moment_from_cumulants(|s: &[usize]| cumulant_of(&o, s), &[0, 1, 0]).unwrap();
        assert_eq!(m, o.moment(&[0, 1]).unwrap());
    }
}
