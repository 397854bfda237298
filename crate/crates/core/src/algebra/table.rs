//! Moment tables indexed by subsets of `{1..ℓ}` and the small-cumulant /
//! quasi-factorization quantities built on them.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::cumulant::cumulant_from_subset_moments;
use crate::error::{size_limit, Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::wgraph::{mwst_of, WeightedGraph};

/// Values `u_Δ` for every subset Δ of `{1..ℓ}`; subset Δ is stored at the
/// bit mask with bit `i-1` set for each `i ∈ Δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable<T> {
    l: usize,
    u: Vec<T>,
}

/// 1-based elements of a subset mask.
pub fn mask_elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

impl<T: Scalar> MomentTable<T> {
    pub fn new(l: usize, u: Vec<T>) -> Result<Self> {
        size_limit("moment table order", l, 20)?;
        if u.len() != 1 << l {
            return Err(Error::Input(alloc::format!(
                "moment table of order {l} needs {} entries, got {}",
                1usize << l,
                u.len()
            )));
        }
        Ok(MomentTable { l, u })
    }

    pub fn order(&self) -> usize {
        self.l
    }

    pub fn get(&self, mask: u64) -> &T {
        &self.u[mask as usize]
    }

    pub fn entries(&self) -> &[T] {
        &self.u
    }

    /// Entry-wise product of two tables of the same order.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.l != other.l {
            return Err(Error::Input("tables of different order".into()));
        }
        Ok(MomentTable {
            l: self.l,
            u: self.u.iter().zip(&other.u).map(|(a, b)| a.clone() * b.clone()).collect(),
        })
    }

    fn empty_entry(&self) -> Result<&T> {
        let e = &self.u[0];
        if e.is_zero() {
            Err(Error::ZeroEntry(Vec::new()))
        } else {
            Ok(e)
        }
    }

    /// κ_Δ(u) = Σ_{π ∈ P(Δ)} μ(π, {Δ}) ∏_{B∈π} u_B / u_∅.
    pub fn kappa_delta(&self, delta: u64) -> Result<T> {
        self.check_mask(delta)?;
        let u0 = self.empty_entry()?.clone();
        let elems: Vec<u32> = (0..64).filter(|i| delta >> i & 1 == 1).collect();
        let k = elems.len();
        if k == 0 {
            return Err(Error::Input("κ_Δ needs a nonempty subset".into()));
        }
        let local: Vec<T> = (0..1u64 << k)
            .map(|sel| {
                let mut mk = 0u64;
                for (j, &e) in elems.iter().enumerate() {
                    if sel >> j & 1 == 1 {
                        mk |= 1 << e;
                    }
                }
                self.u[mk as usize].clone() / u0.clone()
            })
            .collect();
        Ok(cumulant_from_subset_moments(k, &local))
    }

    /// P_Δ(u) = ∏_{δ⊆Δ} u_δ^{(−1)^{|δ|}}.
    pub fn p_delta(&self, delta: u64) -> Result<T> {
        self.check_mask(delta)?;
        let mut num = T::one();
        let mut den = T::one();
        let mut sub = delta;
        loop {
            let x = &self.u[sub as usize];
            if x.is_zero() {
                return Err(Error::ZeroEntry(mask_elements(sub)));
            }
            if sub.count_ones().is_multiple_of(2) {
                num = num * x.clone();
            } else {
                den = den * x.clone();
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & delta;
        }
        Ok(num / den)
    }

    fn check_mask(&self, mask: u64) -> Result<()> {
        if mask >> self.l != 0 {
            return Err(Error::Input(alloc::format!("subset {:?} outside {{1..{}}}", mask_elements(mask), self.l)));
        }
        Ok(())
    }
}

fn falling_product(from: u64, to: u64) -> BigInt {
    // ∏_{k=from+1}^{to} k
    let mut acc = BigInt::one();
    for k in from + 1..=to {
        acc *= k;
    }
    acc
}

fn check_factorial_args(x: u64, a: &[u64]) -> Result<u64> {
    size_limit("factorial table order", a.len(), 20)?;
    let total: u64 = a.iter().sum();
    if x == 0 || x < total {
        return Err(Error::Domain(alloc::format!("X = {x} is smaller than the sum of a = {total}")));
    }
    Ok(total)
}

fn subset_sum(a: &[u64], mask: u64) -> u64 {
    a.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v).sum()
}

/// u_Δ = (X − Σ_{i∈Δ} a_i)! as exact integers.
pub fn factorial_moment_table(x: u64, a: &[u64]) -> Result<MomentTable<Rational>> {
    check_factorial_args(x, a)?;
    let l = a.len();
    let u = (0..1u64 << l)
        .map(|mask| Rational::from_integer(falling_product(0, x - subset_sum(a, mask))))
        .collect();
    MomentTable::new(l, u)
}

/// The factorial table divided by (X − Σ a_i)!, so that entries stay small.
/// Every quantity invariant under rescaling (κ_Δ, P_Δ) is unchanged.
pub fn reduced_factorial_table(x: u64, a: &[u64]) -> Result<MomentTable<Rational>> {
    let total = check_factorial_args(x, a)?;
    let l = a.len();
    let u = (0..1u64 << l)
        .map(|mask| Rational::from_integer(falling_product(x - total, x - subset_sum(a, mask))))
        .collect();
    MomentTable::new(l, u)
}

/// max over |Δ| ≥ 2 of |P_Δ − 1| · X^{|Δ|−1} for the factorial table.
pub fn factorial_scaled_deviation(x: u64, a: &[u64]) -> Result<Rational> {
    let t = reduced_factorial_table(x, a)?;
    let xr = <Rational as Scalar>::from_i64(x as i64);
    let mut best = Rational::zero();
    for delta in 0..1u64 << a.len() {
        let k = delta.count_ones() as i32;
        if k < 2 {
            continue;
        }
        let dev = (t.p_delta(delta)? - Rational::one()).abs_val() * Scalar::powi(&xr, k - 1);
        if dev > best {
            best = dev;
        }
    }
    Ok(best)
}

/// R(t) = ∏_{δ ⊆ [k]} (t − Σ_{j∈δ} a_j)^{(−1)^{|δ|+1}} − 1 for `k = a.len()`,
/// evaluated exactly at rational `t`.
pub fn alternating_product_remainder(a: &[i64], t: &Rational) -> Result<Rational> {
    size_limit("remainder order", a.len(), 20)?;
    let mut num = Rational::one();
    let mut den = Rational::one();
    for mask in 0..1u64 << a.len() {
        let s: i64 = a.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).sum();
        let f = t.clone() - <Rational as Scalar>::from_i64(s);
        if f.is_zero() {
            return Err(Error::ZeroEntry(mask_elements(mask)));
        }
        if mask.count_ones() % 2 == 1 {
            num *= f;
        } else {
            den *= f;
        }
    }
    Ok(num / den - Rational::one())
}

/// One table of an SC/QF sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct ScqfEntry<T> {
    /// max over |Δ| ≥ 2 of |κ_Δ(u)| / (∏_{i∈Δ} u_{i}/u_∅ · MWST(L̃[Δ]))
    pub small_cumulant: T,
    /// max over |Δ| ≥ 2 of |P_Δ − 1| / MWST(L̃[Δ])
    pub quasi_factorization: T,
    /// subsets (1-based) where the MWST vanishes but a numerator does not
    pub violations: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScqfReport<T> {
    pub entries: Vec<ScqfEntry<T>>,
    /// true when a ratio grows along the whole sequence by more than a
    /// factor 2, or a violation occurred
    pub unbounded: bool,
}

/// Small-cumulant and quasi-factorization ratios for a sequence of tables
/// paired with weighted graphs on `{1..ℓ}` (vertex `i-1` ↔ element `i`).
pub fn scqf_report<T: Scalar>(tables: &[MomentTable<T>], graphs: &[WeightedGraph<T>]) -> Result<ScqfReport<T>> {
    if tables.len() != graphs.len() {
        return Err(Error::Input("need one graph per table".into()));
    }
    let mut entries = Vec::with_capacity(tables.len());
    for (t, g) in tables.iter().zip(graphs) {
        let l = t.order();
        if g.len() != l {
            return Err(Error::Input(alloc::format!("graph has {} vertices, table order {l}", g.len())));
        }
        let u0 = t.empty_entry()?.clone();
        let mut sc = T::zero();
        let mut qf = T::zero();
        let mut violations = Vec::new();
        for delta in 1..1u64 << l {
            if delta.count_ones() < 2 {
                continue;
            }
            let verts: Vec<usize> = (0..l).filter(|i| delta >> i & 1 == 1).collect();
            let w = mwst_of(verts.len(), |a, b| g.weight(verts[a], verts[b]).clone());
            let kappa = t.kappa_delta(delta)?.abs_val();
            let scale = verts
                .iter()
                .fold(T::one(), |acc, &i| acc * (t.get(1 << i).clone() / u0.clone()));
            let p = (t.p_delta(delta)? - T::one()).abs_val();
            let tiny = |x: &T, s: &T| x.is_negligible(s, 1e-12);
            if w.is_zero() {
                if !tiny(&kappa, &scale) || !tiny(&p, &T::one()) {
                    violations.push(mask_elements(delta));
                }
                continue;
            }
            let r1 = kappa / (scale * w.clone());
            let r2 = p / w;
            if r1 > sc {
                sc = r1;
            }
            if r2 > qf {
                qf = r2;
            }
        }
        entries.push(ScqfEntry {
            small_cumulant: sc,
            quasi_factorization: qf,
            violations,
        });
    }
    let grows = |f: &dyn Fn(&ScqfEntry<T>) -> T| -> bool {
        if entries.len() < 2 {
            return false;
        }
        let increasing = entries.windows(2).all(|w| f(&w[1]) > f(&w[0]));
        let first = f(&entries[0]);
        let last = f(entries.last().unwrap());
        increasing && last > first.clone() + first
    };
    let unbounded = entries.iter().any(|e| !e.violations.is_empty())
        || grows(&|e| e.small_cumulant.clone())
        || grows(&|e| e.quasi_factorization.clone());
    Ok(ScqfReport { entries, unbounded })
}

/// Complete graph on ℓ vertices with every weight equal to `eps`.
pub fn uniform_graph<T: Scalar>(l: usize, eps: T) -> Result<WeightedGraph<T>> {
    WeightedGraph::complete(l, eps)
}
