//! Boolean cumulants and their expansion into classical cumulants.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cumulant::{cumulant_from_subset_moments, MomentOracle};
use super::partition::{irreducible_partitions, SetPartition};
use crate::error::{size_limit, Error, Result};
use crate::linalg;
use crate::scalar::{rat, Rational, Scalar};

/// Boolean cumulant from interval moments: `interval(a, b)` is the joint
/// moment of positions `a..=b`.
pub fn boolean_from_intervals<T, F>(r: usize, mut interval: F) -> Result<T>
where
    T: Scalar,
    F: FnMut(usize, usize) -> Result<T>,
{
    if r == 0 {
        return Err(Error::Input("boolean cumulant of an empty tuple".into()));
    }
    size_limit("boolean cumulant order", r, 20)?;
    let mut table = vec![vec![T::zero(); r]; r];
    for a in 0..r {
        for b in a..r {
            table[a][b] = interval(a, b)?;
        }
    }
    let mut total = T::zero();
    // bit d of `cuts` set: cut between positions d and d+1
    for cuts in 0..1u64 << (r - 1) {
        let mut prod = T::one();
        let mut start = 0;
        for d in 0..r - 1 {
            if cuts >> d & 1 == 1 {
                prod = prod * table[start][d].clone();
                start = d + 1;
            }
        }
        prod = prod * table[start][r - 1].clone();
        if cuts.count_ones() % 2 == 1 {
            total = total - prod;
        } else {
            total = total + prod;
        }
    }
    Ok(total)
}

/// Boolean cumulant B_r(Z_1, .., Z_r) of an ordered tuple of family variables.
pub fn boolean_cumulant<O: MomentOracle>(oracle: &O, z: &[O::Index]) -> Result<O::Value> {
    boolean_from_intervals(z.len(), |a, b| oracle.moment(&z[a..=b]))
}

/// Coefficients d_ρ, indexed by irreducible partitions ρ of `{0..r-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BooleanExpansion {
    pub r: usize,
    pub terms: Vec<(SetPartition, Rational)>,
}

/// Boolean cumulant of the sub-tuple on the positions of `mask`, taken in
/// increasing order, from subset moments.
fn boolean_of_mask<T: Scalar>(mask: u64, m: &[T]) -> T {
    let pos: Vec<u32> = (0..64).filter(|i| mask >> i & 1 == 1).collect();
    boolean_from_intervals(pos.len(), |a, b| {
        let mut mk = 0u64;
        for &p in &pos[a..=b] {
            mk |= 1 << p;
        }
        Ok(m[mk as usize].clone())
    })
    .expect("nonempty mask")
}

fn random_table(rng: &mut ChaCha8Rng, r: usize) -> Vec<Rational> {
    let mut t = Vec::with_capacity(1 << r);
    t.push(rat(1, 1));
    for _ in 1..1usize << r {
        t.push(rat(rng.gen_range(-30..=30), rng.gen_range(1..=11)));
    }
    t
}

/// Solves for the universal coefficients d_ρ such that
/// κ_r = Σ_{ρ irreducible} d_ρ ∏_{C∈ρ} B_{|C|}(Z_j : j ∈ C).
///
/// Joint moments of distinct variables are treated as indeterminates: each
/// random rational moment table yields one linear equation. Extra tables
/// beyond the number of unknowns must be satisfied by the solution.
pub fn boolean_to_classical_coeffs(r: usize) -> Result<BooleanExpansion> {
    if r == 0 {
        return Err(Error::Input("order must be positive".into()));
    }
    size_limit("boolean expansion order", r, 6)?;
    let rhos = irreducible_partitions(r)?;
    let unknowns = rhos.len();
    let equations = unknowns + 8;
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9 + r as u64);
    let mut rows = Vec::with_capacity(equations);
    let mut rhs = Vec::with_capacity(equations);
    for _ in 0..equations {
        let table = random_table(&mut rng, r);
        rhs.push(cumulant_from_subset_moments(r, &table));
        let row: Vec<Rational> = rhos
            .iter()
            .map(|rho| {
                rho.block_masks()
                    .iter()
                    .fold(rat(1, 1), |acc, &mk| acc * boolean_of_mask(mk, &table))
            })
            .collect();
        rows.push(row);
    }
    let d = linalg::solve_consistent(rows, rhs)
        .map_err(|e| Error::Internal(alloc::format!("boolean expansion system: {e}")))?;
    Ok(BooleanExpansion {
        r,
        terms: rhos.into_iter().zip(d).collect(),
    })
}

impl BooleanExpansion {
    /// Evaluates Σ_ρ d_ρ ∏_C B(C) given boolean cumulants of sub-tuples,
    /// `boolean(positions)` receiving increasing positions.
    pub fn classical<T, F>(&self, mut boolean: F) -> Result<T>
    where
        T: Scalar,
        F: FnMut(&[usize]) -> Result<T>,
    {
        let mut total = T::zero();
        for (rho, d) in &self.terms {
            if num_traits::Zero::is_zero(d) {
                continue;
            }
            let mut prod = T::from_rational(d);
            for block in rho.blocks() {
                prod = prod * boolean(&block)?;
            }
            total = total + prod;
        }
        Ok(total)
    }

    /// Classical cumulant of an ordered tuple reconstructed from boolean
    /// cumulants of its sub-tuples.
    pub fn classical_of<O: MomentOracle>(&self, oracle: &O, z: &[O::Index]) -> Result<O::Value> {
        if z.len() != self.r {
            return Err(Error::Input(alloc::format!(
                "tuple of length {} for an expansion of order {}",
                z.len(),
                self.r
            )));
        }
        self.classical(|pos| {
            let sub: Vec<O::Index> = pos.iter().map(|&p| z[p].clone()).collect();
            boolean_cumulant(oracle, &sub)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn order_two_is_covariance() {
        let e = boolean_to_classical_coeffs(2).unwrap();
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.terms[0].0.to_string(), "{{1,2}}");
        assert_eq!(e.terms[0].1, rat(1, 1));
    }

    #[test]
    fn order_three_terms() {
        let e = boolean_to_classical_coeffs(3).unwrap();
        let shown: Vec<_> = e.terms.iter().map(|(p, d)| (p.to_string(), d.clone())).collect();
        assert_eq!(
            shown,
            vec![("{{1,2,3}}".to_string(), rat(1, 1)), ("{{1,3},{2}}".to_string(), rat(-1, 1))]
        );
    }

    #[test]
    fn explicit_order_three_boolean() {
        // B_3 = m123 - m12 m3 - m1 m23 + m1 m2 m3 on a table indexed by mask
        let m: Vec<Rational> = (0..8).map(|k| rat(k as i64 + 2, 3)).collect();
        let b = boolean_of_mask(0b111, &m);
        let (m1, m2, m3) = (m[1].clone(), m[2].clone(), m[4].clone());
        let expect = m[7].clone() - m[3].clone() * m3.clone() - m1.clone() * m[6].clone() + m1 * m2 * m3;
        assert_eq!(b, expect);
    }
}
