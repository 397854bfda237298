//! Uniform random permutations: position indicators Y_{i,l} = [π(i) = l],
//! simply and doubly indexed statistics and their path processes.
//! Positions and values are 1-based.

use alloc::vec;
use alloc::vec::Vec;
use core::marker::PhantomData;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::cumulant::MomentOracle;
use crate::combinatorics::{falling, next_permutation};
use crate::error::{size_limit, Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::wdg::{product_family, ProductFamily, WdgCandidate};

/// Largest `n` for which all n! permutations are enumerated.
pub const ENUMERATION_LIMIT: usize = 10;

/// The index (i, l) of Y_{i,l}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositionIndex(pub u32, pub u32);

impl PositionIndex {
    pub fn collides(&self, other: &PositionIndex) -> bool {
        self.0 == other.0 || self.1 == other.1
    }
}

/// A permutation in one-line notation: `values[i-1] = π(i)`.
pub type Permutation = Vec<u32>;

pub fn sample_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut p: Vec<u32> = (1..=n as u32).collect();
    p.shuffle(rng);
    p
}

/// Calls `f` on every permutation of `[n]`, lexicographically (n ≤ 10).
pub fn for_each_permutation<F: FnMut(&[u32])>(n: usize, mut f: F) -> Result<()> {
    size_limit("permutation size n", n, ENUMERATION_LIMIT)?;
    let mut idx: Vec<usize> = (0..n).collect();
    let mut p: Vec<u32> = (1..=n as u32).collect();
    loop {
        f(&p);
        if !next_permutation(&mut idx) {
            return Ok(());
        }
        for (x, &i) in p.iter_mut().zip(&idx) {
            *x = i as u32 + 1;
        }
    }
}

fn distinct(b: &[PositionIndex]) -> Vec<PositionIndex> {
    let mut v = b.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// E ∏ Y_{i,l}: 0 on conflicting positions, else 1/n^{(r)} for r
/// distinct compatible positions.
pub fn perm_moment<T: Scalar>(n: usize, b: &[PositionIndex]) -> T {
    let d = distinct(b);
    for (k, x) in d.iter().enumerate() {
        if x.0 == 0 || x.1 == 0 || x.0 as usize > n || x.1 as usize > n {
            return T::zero();
        }
        if d[k + 1..].iter().any(|y| x.collides(y)) {
            return T::zero();
        }
    }
    T::one() / falling::<T>(n as i64, d.len() as u64)
}

/// Position indicators: weight 1 on a shared row or column, 1/n otherwise,
/// Ψ(B) = n^{−#(B)}.
#[derive(Clone, Debug)]
pub struct PermFamily<T> {
    pub n: usize,
    _t: PhantomData<T>,
}

pub fn perm_moment_oracle<T: Scalar>(n: usize) -> PermFamily<T> {
    PermFamily { n, _t: PhantomData }
}

pub fn perm_wdg<T: Scalar>(n: usize) -> PermFamily<T> {
    perm_moment_oracle(n)
}

impl<T: Scalar> MomentOracle for PermFamily<T> {
    type Index = PositionIndex;
    type Value = T;

    fn moment(&self, b: &[PositionIndex]) -> Result<T> {
        Ok(perm_moment(self.n, b))
    }
}

impl<T: Scalar> WdgCandidate for PermFamily<T> {
    fn indices(&self) -> Vec<PositionIndex> {
        let n = self.n as u32;
        (1..=n).flat_map(|i| (1..=n).map(move |l| PositionIndex(i, l))).collect()
    }

    fn weight(&self, a: &PositionIndex, b: &PositionIndex) -> T {
        if a.collides(b) {
            T::one()
        } else {
            T::from_ratio(1, self.n as i64)
        }
    }

    fn psi(&self, b: &[PositionIndex]) -> T {
        T::from_ratio(1, self.n as i64).powi(distinct(b).len() as i32)
    }
}

/// Products Y_{i,k} Y_{j,l} over compatible position pairs with i < j, as
/// a subfamily of the square of the position family.
pub fn perm_pairs_wdg<T: Scalar>(n: usize) -> Result<ProductFamily<PermFamily<T>>> {
    let base = perm_wdg::<T>(n);
    let a = base.indices();
    let mut monomials = Vec::new();
    for x in &a {
        for y in &a {
            if x.0 < y.0 && x.1 != y.1 {
                monomials.push(vec![*x, *y]);
            }
        }
    }
    product_family(base, 2, monomials)
}

/// Coefficient table of a simply (matrix a(i, l)) or doubly (tensor
/// ζ(i, j, k, l)) indexed statistic.
#[derive(Clone, Debug, PartialEq)]
pub enum StatTable<T> {
    Sis { n: usize, a: Vec<T>, centered: bool },
    Dips { n: usize, z: Vec<T>, centered: bool },
}

impl<T: Scalar> StatTable<T> {
    pub fn sis(n: usize, a: Vec<T>) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::Input(alloc::format!("SIS table has {} entries, expected {}", a.len(), n * n)));
        }
        Ok(StatTable::Sis { n, a, centered: false })
    }

    pub fn dips(n: usize, z: Vec<T>) -> Result<Self> {
        if z.len() != n * n * n * n {
            return Err(Error::Input(alloc::format!("DIPS table has {} entries, expected {}", z.len(), n * n * n * n)));
        }
        Ok(StatTable::Dips { n, z, centered: false })
    }

    pub fn n(&self) -> usize {
        match self {
            StatTable::Sis { n, .. } | StatTable::Dips { n, .. } => *n,
        }
    }

    pub fn is_centered(&self) -> bool {
        match self {
            StatTable::Sis { centered, .. } | StatTable::Dips { centered, .. } => *centered,
        }
    }

    /// a(i, l), 1-based.
    pub fn a(&self, i: usize, l: usize) -> &T {
        match self {
            StatTable::Sis { n, a, .. } => &a[(i - 1) * n + l - 1],
            StatTable::Dips { .. } => panic!("a(i, l) of a DIPS table"),
        }
    }

    /// ζ(i, j, k, l), 1-based.
    pub fn zeta(&self, i: usize, j: usize, k: usize, l: usize) -> &T {
        match self {
            StatTable::Dips { n, z, .. } => &z[(((i - 1) * n + j - 1) * n + k - 1) * n + l - 1],
            StatTable::Sis { .. } => panic!("ζ(i, j, k, l) of a SIS table"),
        }
    }

    /// The centered table: rows of a sum to zero; for ζ the off-diagonal
    /// (i ≠ j) blocks have zero sum over k ≠ l and the diagonal blocks
    /// zero sum over k = l.
    pub fn centered(&self) -> Self {
        match self {
            StatTable::Sis { n, a, .. } => {
                let n = *n;
                let mut out = a.clone();
                let nn = T::from_i64(n as i64);
                for i in 0..n {
                    let row = &a[i * n..(i + 1) * n];
                    let mean = row.iter().cloned().fold(T::zero(), |s, x| s + x) / nn.clone();
                    for l in 0..n {
                        out[i * n + l] = row[l].clone() - mean.clone();
                    }
                }
                StatTable::Sis { n, a: out, centered: true }
            }
            StatTable::Dips { n, z, .. } => {
                let n = *n;
                let mut out = z.clone();
                let at = |i: usize, j: usize, k: usize, l: usize| ((i * n + j) * n + k) * n + l;
                for i in 0..n {
                    for j in 0..n {
                        let mean = if i != j {
                            let mut s = T::zero();
                            for k in 0..n {
                                for l in 0..n {
                                    if k != l {
                                        s = s + z[at(i, j, k, l)].clone();
                                    }
                                }
                            }
                            s / T::from_i64((n * (n - 1)) as i64)
                        } else {
                            let mut s = T::zero();
                            for k in 0..n {
                                s = s + z[at(i, i, k, k)].clone();
                            }
                            s / T::from_i64(n as i64)
                        };
                        for k in 0..n {
                            for l in 0..n {
                                out[at(i, j, k, l)] = z[at(i, j, k, l)].clone() - mean.clone();
                            }
                        }
                    }
                }
                StatTable::Dips { n, z: out, centered: true }
            }
        }
    }

    /// Checks the centering conditions exactly (or to 1e-9 in floats).
    pub fn check_centered(&self) -> Result<()> {
        let ok = |s: T, scale: &T| s.is_zero() || s.is_negligible(scale, 1e-9);
        let one = T::one();
        match self {
            StatTable::Sis { n, a, .. } => {
                for i in 0..*n {
                    let s = a[i * n..(i + 1) * n].iter().cloned().fold(T::zero(), |s, x| s + x);
                    if !ok(s, &one) {
                        return Err(Error::Input(alloc::format!("row {} of a is not centered", i + 1)));
                    }
                }
            }
            StatTable::Dips { n, .. } => {
                let n = *n;
                for i in 1..=n {
                    for j in 1..=n {
                        let mut s = T::zero();
                        for k in 1..=n {
                            for l in 1..=n {
                                if (i == j) == (k == l) {
                                    s = s + self.zeta(i, j, k, l).clone();
                                }
                            }
                        }
                        if !ok(s, &one) {
                            return Err(Error::Input(alloc::format!("block ({i}, {j}) of ζ is not centered")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn map<U: Scalar, F: Fn(&T) -> U>(&self, f: F) -> StatTable<U> {
        match self {
            StatTable::Sis { n, a, centered } => StatTable::Sis { n: *n, a: a.iter().map(&f).collect(), centered: *centered },
            StatTable::Dips { n, z, centered } => StatTable::Dips { n: *n, z: z.iter().map(&f).collect(), centered: *centered },
        }
    }
}

/// a₀(i, l) = [l ≥ i]: X_n(1) counts weak exceedances.
pub fn exceedance_sis<T: Scalar>(n: usize) -> StatTable<T> {
    let mut a = Vec::with_capacity(n * n);
    for i in 1..=n {
        for l in 1..=n {
            a.push(if l >= i { T::one() } else { T::zero() });
        }
    }
    StatTable::Sis { n, a, centered: false }
}

/// ζ₀(i, j, k, l) = [j < i ≤ k < l]: X_n(1, 1) counts positive alignments.
pub fn alignment_dips<T: Scalar>(n: usize) -> StatTable<T> {
    let mut z = Vec::with_capacity(n * n * n * n);
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    z.push(if j < i && i <= k && k < l { T::one() } else { T::zero() });
                }
            }
        }
    }
    StatTable::Dips { n, z, centered: false }
}

/// Positive alignments counted from the definition.
pub fn count_positive_alignments(p: &[u32]) -> u64 {
    let mut c = 0;
    for i in 1..=p.len() {
        for j in 1..i {
            if i as u32 <= p[i - 1] && p[i - 1] < p[j - 1] {
                c += 1;
            }
        }
    }
    c
}

/// Weak exceedances #{i : π(i) ≥ i}.
pub fn count_weak_exceedances(p: &[u32]) -> u64 {
    p.iter().enumerate().filter(|(i, &v)| v as usize > *i).count() as u64
}

/// A path indexed by [0, 1] (or [0, 1]²) with values at the lattice
/// points k/n, interpolated affinely (bilinearly) in between.
#[derive(Clone, Debug, PartialEq)]
pub enum PathProcess<T> {
    Line { n: usize, nodes: Vec<T> },
    Sheet { n: usize, nodes: Vec<T> },
}

/// ⌊n t⌋ with a tolerance for float lattice points.
pub fn lattice_floor(n: usize, t: f64) -> usize {
    let x = n as f64 * t;
    let r = libm::round(x);
    let k = if (x - r).abs() < 1e-9 { r } else { libm::floor(x) };
    (k.max(0.0) as usize).min(n)
}

impl<T: Scalar> PathProcess<T> {
    pub fn n(&self) -> usize {
        match self {
            PathProcess::Line { n, .. } | PathProcess::Sheet { n, .. } => *n,
        }
    }

    /// Node value at k/n (1-D).
    pub fn node(&self, k: usize) -> &T {
        match self {
            PathProcess::Line { nodes, .. } => &nodes[k],
            PathProcess::Sheet { .. } => panic!("1-D node of a 2-D process"),
        }
    }

    /// Node value at (k1/n, k2/n) (2-D).
    pub fn node2(&self, k1: usize, k2: usize) -> &T {
        match self {
            PathProcess::Sheet { n, nodes } => &nodes[k1 * (n + 1) + k2],
            PathProcess::Line { .. } => panic!("2-D node of a 1-D process"),
        }
    }

    /// X(t) for t ∈ [0, 1].
    pub fn eval(&self, t: f64) -> Result<T> {
        let n = self.n();
        check_unit(t)?;
        let k = lattice_floor(n, t);
        if k == n {
            return Ok(self.node(n).clone());
        }
        let frac = T::from_f64(n as f64 * t - k as f64);
        let (a, b) = (self.node(k).clone(), self.node(k + 1).clone());
        Ok(a.clone() + frac * (b - a))
    }

    /// X(t1, t2) for (t1, t2) ∈ [0, 1]².
    pub fn eval2(&self, t1: f64, t2: f64) -> Result<T> {
        let n = self.n();
        check_unit(t1)?;
        check_unit(t2)?;
        let (k1, k2) = (lattice_floor(n, t1).min(n.saturating_sub(1)), lattice_floor(n, t2).min(n.saturating_sub(1)));
        let f1 = T::from_f64(n as f64 * t1 - k1 as f64);
        let f2 = T::from_f64(n as f64 * t2 - k2 as f64);
        let g = |a: usize, b: usize| self.node2(a, b).clone();
        let lo = g(k1, k2) + f2.clone() * (g(k1, k2 + 1) - g(k1, k2));
        let hi = g(k1 + 1, k2) + f2 * (g(k1 + 1, k2 + 1) - g(k1 + 1, k2));
        Ok(lo.clone() + f1 * (hi - lo))
    }
}

fn check_unit(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(alloc::format!("time {t} outside [0, 1]")));
    }
    Ok(())
}

fn check_perm(p: &[u32], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::Input(alloc::format!("permutation of size {} for a table of size {n}", p.len())));
    }
    Ok(())
}

/// X^π_n as a 1-D path: node k is Σ_{i ≤ k} a(i, π(i)).
pub fn sis_process<T: Scalar>(p: &[u32], table: &StatTable<T>) -> Result<PathProcess<T>> {
    let StatTable::Sis { n, .. } = table else {
        return Err(Error::Input("sis_process needs a SIS table".into()));
    };
    check_perm(p, *n)?;
    let mut nodes = Vec::with_capacity(n + 1);
    let mut acc = T::zero();
    nodes.push(acc.clone());
    for (i, &v) in p.iter().enumerate() {
        acc = acc + table.a(i + 1, v as usize).clone();
        nodes.push(acc.clone());
    }
    Ok(PathProcess::Line { n: *n, nodes })
}

/// X^π_n as a 2-D sheet: node (k1, k2) is Σ_{i ≤ k1, j ≤ k2} ζ(i, j, π(i), π(j)).
pub fn dips_process<T: Scalar>(p: &[u32], table: &StatTable<T>) -> Result<PathProcess<T>> {
    let StatTable::Dips { n, .. } = table else {
        return Err(Error::Input("dips_process needs a DIPS table".into()));
    };
    let n = *n;
    check_perm(p, n)?;
    let w = n + 1;
    let mut nodes = vec![T::zero(); w * w];
    for i in 1..=n {
        for j in 1..=n {
            let v = table.zeta(i, j, p[i - 1] as usize, p[j - 1] as usize).clone();
            nodes[i * w + j] = v + nodes[(i - 1) * w + j].clone() + nodes[i * w + j - 1].clone() - nodes[(i - 1) * w + j - 1].clone();
        }
    }
    Ok(PathProcess::Sheet { n, nodes })
}

fn require_centered_sis<T: Scalar>(table: &StatTable<T>) -> Result<usize> {
    match table {
        StatTable::Sis { n, .. } => {
            table.check_centered()?;
            Ok(*n)
        }
        StatTable::Dips { .. } => Err(Error::Input("f_n and g_n need a SIS table".into())),
    }
}

/// f_n(t) = n^{−2} Σ_{i ≤ ⌊nt⌋} Σ_l a(i, l)².
pub fn fn_f<T: Scalar>(table: &StatTable<T>, t: f64) -> Result<T> {
    let n = require_centered_sis(table)?;
    check_unit(t)?;
    let mut s = T::zero();
    for i in 1..=lattice_floor(n, t) {
        for l in 1..=n {
            let x = table.a(i, l).clone();
            s = s + x.clone() * x;
        }
    }
    Ok(s / T::from_i64((n * n) as i64))
}

/// g_n(t, u) = n^{−3} Σ_{i ≤ ⌊nt⌋} Σ_{j ≤ ⌊nu⌋} Σ_l a(i, l) a(j, l).
pub fn fn_g<T: Scalar>(table: &StatTable<T>, t: f64, u: f64) -> Result<T> {
    let n = require_centered_sis(table)?;
    check_unit(t)?;
    check_unit(u)?;
    let (kt, ku) = (lattice_floor(n, t), lattice_floor(n, u));
    let mut s = T::zero();
    for l in 1..=n {
        let mut ct = T::zero();
        for i in 1..=kt {
            ct = ct + table.a(i, l).clone();
        }
        let mut cu = T::zero();
        for j in 1..=ku {
            cu = cu + table.a(j, l).clone();
        }
        s = s + ct * cu;
    }
    Ok(s / T::from_i64((n * n * n) as i64))
}

/// Exact Cov(X̃_n(t), X̃_n(u)) = n/(n−1) (f_n(t∧u) − g_n(t, u)), where
/// X̃_n = (X_n − E X_n)/√n, at lattice times.
pub fn finite_covariance<T: Scalar>(table: &StatTable<T>, t: f64, u: f64) -> Result<T> {
    let n = require_centered_sis(table)?;
    if n < 2 {
        return Err(Error::Domain("covariance needs n ≥ 2".into()));
    }
    let f = fn_f(table, t.min(u))?;
    let g = fn_g(table, t, u)?;
    Ok(T::from_ratio(n as i64, n as i64 - 1) * (f - g))
}

/// σ(t, u) = f(t∧u) − g(t, u).
pub fn limit_sigma<F: Fn(f64) -> f64, G: Fn(f64, f64) -> f64>(t: f64, u: f64, f: F, g: G) -> f64 {
    f(t.min(u)) - g(t, u)
}

/// Limit of f_n for weak exceedances: t²/2 − t³/3.
pub fn exceedance_f(t: f64) -> f64 {
    t * t / 2.0 - t * t * t / 3.0
}

/// Limit of f_n for weak exceedances as printed in the literature:
/// t²/2 − t³/2, kept for comparison.
pub fn exceedance_f_printed(t: f64) -> f64 {
    t * t / 2.0 - t * t * t / 2.0
}

/// Limit of g_n for weak exceedances: t²u/2 − t³/6 − t²u²/4 for t ≤ u,
/// extended symmetrically.
pub fn exceedance_g(t: f64, u: f64) -> f64 {
    let (t, u) = if t <= u { (t, u) } else { (u, t) };
    t * t * u / 2.0 - t * t * t / 6.0 - t * t * u * u / 4.0
}

/// Exact distribution of the number of weak exceedances among the first
/// `k` positions of a uniform permutation of `[n]`: entry j is the number
/// of permutations with exactly j of them. Rook numbers of the Ferrers
/// board {(i, l) : i ≤ k, l ≥ i} turned into hit numbers.
pub fn exceedance_prefix_counts(n: usize, k: usize) -> Result<Vec<num_bigint::BigInt>> {
    use num_bigint::BigInt;
    if k > n {
        return Err(Error::Input(alloc::format!("prefix {k} longer than n = {n}")));
    }
    // rows sorted by increasing length n−k+1, .., n; nested column sets
    let mut rook = vec![BigInt::zero(); k + 1];
    rook[0] = BigInt::from(1);
    for (placed_rows, len) in (n - k + 1..=n).enumerate() {
        for j in (1..=placed_rows + 1).rev() {
            let free = len as i64 - (j as i64 - 1);
            if free > 0 {
                let add = rook[j - 1].clone() * BigInt::from(free);
                rook[j] += add;
            }
        }
    }
    // Σ_j h_j x^j = Σ_j r_j (n−j)! (x−1)^j
    let mut fact = vec![BigInt::from(1); n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1].clone() * BigInt::from(i);
    }
    let mut hits = vec![BigInt::zero(); k + 1];
    for j in 0..=k {
        let c = rook[j].clone() * fact[n - j].clone();
        // (x − 1)^j
        let mut binom = BigInt::from(1);
        for m in 0..=j {
            let sign = if (j - m) % 2 == 0 { 1 } else { -1 };
            hits[m] += c.clone() * binom.clone() * BigInt::from(sign);
            binom = binom * BigInt::from(j - m) / BigInt::from(m + 1);
        }
    }
    Ok(hits)
}

/// Exact cumulants κ_1..κ_rmax of an integer-valued distribution given by
/// counts.
pub fn cumulants_of_counts(counts: &[num_bigint::BigInt], rmax: usize) -> Vec<Rational> {
    let total: num_bigint::BigInt = counts.iter().sum();
    let mut moments = vec![Rational::zero(); rmax + 1];
    for (x, c) in counts.iter().enumerate() {
        let p = Rational::new(c.clone(), total.clone());
        let mut pw = Rational::from_integer(1.into());
        for m in moments.iter_mut() {
            *m += p.clone() * pw.clone();
            pw *= Rational::from_integer((x as i64).into());
        }
    }
    crate::algebra::cumulant::univariate_cumulants(&moments[1..])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn moments() {
        assert_eq!(perm_moment::<Rational>(5, &[PositionIndex(1, 2)]), rat(1, 5));
        assert_eq!(perm_moment::<Rational>(5, &[PositionIndex(1, 2), PositionIndex(3, 4)]), rat(1, 20));
        assert_eq!(perm_moment::<Rational>(5, &[PositionIndex(1, 2), PositionIndex(1, 3)]), rat(0, 1));
    }

    #[test]
    fn processes() {
        let id: Vec<u32> = (1..=5).collect();
        let ex = exceedance_sis::<Rational>(5);
        let x = sis_process(&id, &ex).unwrap();
        assert_eq!(x.eval(1.0).unwrap(), rat(5, 1));
        assert_eq!(x.eval(0.0).unwrap(), rat(0, 1));
        assert_eq!(x.eval(0.3).unwrap(), rat(3, 2));
        assert_eq!(count_positive_alignments(&[1, 2, 3]), 0);
        assert_eq!(count_positive_alignments(&[2, 1]), 0);
        let al = alignment_dips::<Rational>(4);
        for_each_permutation(4, |p| {
            let s = dips_process(p, &al).unwrap();
            assert_eq!(*s.node2(4, 4), <Rational as Scalar>::from_i64(count_positive_alignments(p) as i64));
        })
        .unwrap();
    }

    #[test]
    fn rook_counts_match_enumeration() {
        for n in 1..=7 {
            for k in 0..=n {
                let mut counts = vec![0i64; k + 1];
                for_each_permutation(n, |p| counts[count_weak_exceedances(&p[..k]) as usize] += 1).unwrap();
                let rook: Vec<i64> = exceedance_prefix_counts(n, k)
                    .unwrap()
                    .iter()
                    .map(|c| i64::try_from(c).unwrap())
                    .collect();
                assert_eq!(rook, counts, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn centering() {
        let t = exceedance_sis::<Rational>(5).centered();
        t.check_centered().unwrap();
        assert!(exceedance_sis::<Rational>(5).check_centered().is_err());
        let d = alignment_dips::<Rational>(4).centered();
        d.check_centered().unwrap();
        assert_eq!(fn_g(&t, 0.4, 0.0).unwrap(), rat(0, 1));
    }
}
