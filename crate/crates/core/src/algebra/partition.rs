//! Set partitions of `{0, .., r-1}` and their lattice operations.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{size_limit, Error, Result};

/// Hard ceiling for explicit partition enumeration.
pub const MAX_ENUMERATION: usize = 12;

/// A set partition stored as a canonical restricted growth string: element
/// `i` lies in block `labels[i]`, blocks numbered by first appearance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    labels: Vec<usize>,
    blocks: usize,
}

impl SetPartition {
    /// Canonicalizes an arbitrary labelling.
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut map: Vec<(usize, usize)> = Vec::new();
        let mut labels = Vec::with_capacity(raw.len());
        for &x in raw {
            let id = match map.iter().find(|(k, _)| *k == x) {
                Some(&(_, v)) => v,
                None => {
                    map.push((x, map.len()));
                    map.len() - 1
                }
            };
            labels.push(id);
        }
        SetPartition {
            labels,
            blocks: map.len(),
        }
    }

    /// Builds a partition from explicit blocks over `{0, .., r-1}`.
    pub fn from_blocks(r: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; r];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Input("empty block".into()));
            }
            for &x in block {
                if x >= r {
                    return Err(Error::Input(alloc::format!("element {x} outside ground set of size {r}")));
                }
                if labels[x] != usize::MAX {
                    return Err(Error::Input(alloc::format!("element {x} in two blocks")));
                }
                labels[x] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(Error::Input("blocks do not cover the ground set".into()));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn singletons(r: usize) -> Self {
        SetPartition {
            labels: (0..r).collect(),
            blocks: r,
        }
    }

    pub fn one_block(r: usize) -> Self {
        SetPartition {
            labels: vec![0; r],
            blocks: usize::from(r > 0),
        }
    }

    /// The partition with `subset` as one block and singletons elsewhere.
    pub fn from_subset(r: usize, subset: &[usize]) -> Result<Self> {
        let mut labels: Vec<usize> = (0..r).collect();
        let Some(&first) = subset.first() else {
            return Ok(Self::singletons(r));
        };
        for &x in subset {
            if x >= r {
                return Err(Error::Input(alloc::format!("element {x} outside ground set of size {r}")));
            }
            labels[x] = first;
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn ground_size(&self) -> usize {
        self.labels.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    /// Blocks as bit masks over the ground set (requires `r <= 64`).
    pub fn block_masks(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.blocks];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l] |= 1 << i;
        }
        out
    }

    /// Möbius function μ(π, 1̂) = (−1)^{#π−1} (#π−1)!.
    pub fn mobius_to_top(&self) -> i64 {
        mobius_from_blocks(self.blocks)
    }

    fn check_same_ground(&self, other: &Self) -> Result<()> {
        if self.ground_size() != other.ground_size() {
            return Err(Error::Input(alloc::format!(
                "ground sets differ: {} vs {}",
                self.ground_size(),
                other.ground_size()
            )));
        }
        Ok(())
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_same_ground(other)?;
        let mut uf = UnionFind::new(self.ground_size());
        uf.absorb(&self.labels);
        uf.absorb(&other.labels);
        Ok(uf.partition())
    }

    /// Coarsest common refinement.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_same_ground(other)?;
        let pairs: Vec<usize> = self
            .labels
            .iter()
            .zip(&other.labels)
            .map(|(&a, &b)| a * other.blocks.max(1) + b)
            .collect();
        Ok(Self::from_labels(&pairs))
    }

    /// Partial order: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Self) -> Result<bool> {
        self.check_same_ground(other)?;
        let mut image = vec![usize::MAX; self.blocks];
        for (&a, &b) in self.labels.iter().zip(&other.labels) {
            if image[a] == usize::MAX {
                image[a] = b;
            } else if image[a] != b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when no cut `{0..l}, {l+1..r-1}` is coarser than the partition.
    pub fn is_irreducible(&self) -> bool {
        let r = self.ground_size();
        if r <= 1 {
            return true;
        }
        let mut last = vec![0usize; self.blocks];
        for (i, &l) in self.labels.iter().enumerate() {
            last[l] = i;
        }
        // reach = furthest element of any block met so far
        let mut reach = 0;
        for i in 0..r - 1 {
            reach = reach.max(last[self.labels[i]]);
            if reach == i {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (b, block) in self.blocks().iter().enumerate() {
            if b > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (k, x) in block.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

pub(crate) fn mobius_from_blocks(k: usize) -> i64 {
    let mut f: i64 = 1;
    for i in 1..k as i64 {
        f *= i;
    }
    if k.is_multiple_of(2) {
        -f
    } else {
        f
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn absorb(&mut self, labels: &[usize]) {
        let mut first: Vec<Option<usize>> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            if first.len() <= l {
                first.resize(l + 1, None);
            }
            match first[l] {
                Some(j) => self.union(i, j),
                None => first[l] = Some(i),
            }
        }
    }

    fn partition(&mut self) -> SetPartition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|i| self.find(i)).collect();
        SetPartition::from_labels(&roots)
    }
}

/// Join of an arbitrary family on a common ground set.
pub fn join_all(parts: &[SetPartition]) -> Result<SetPartition> {
    let Some(first) = parts.first() else {
        return Err(Error::Input("empty family".into()));
    };
    let mut uf = UnionFind::new(first.ground_size());
    for p in parts {
        first.check_same_ground(p)?;
        uf.absorb(&p.labels);
    }
    Ok(uf.partition())
}

/// Bell numbers; exact up to `r = 25`.
pub fn bell(r: usize) -> u64 {
    // Bell triangle
    let mut row = vec![1u64];
    for _ in 0..r {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            let v = *next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// Calls `f(labels, blocks)` for every partition of `{0..r-1}` in
/// restricted-growth order, without allocating per partition.
pub fn for_each_partition<F: FnMut(&[usize], usize)>(r: usize, mut f: F) {
    if r == 0 {
        f(&[], 0);
        return;
    }
    let mut a = vec![0usize; r];
    let mut m = vec![0usize; r]; // m[i] = max(a[0..i]) + 1
    m[0] = 1;
    for i in 1..r {
        m[i] = 1;
    }
    loop {
        f(&a, m[r - 1].max(a[r - 1] + 1));
        // find rightmost position that can be incremented
        let mut i = r - 1;
        loop {
            if i == 0 {
                return;
            }
            let prev_max = m[i - 1];
            if a[i] < prev_max {
                a[i] += 1;
                m[i] = prev_max.max(a[i] + 1);
                for j in i + 1..r {
                    a[j] = 0;
                    m[j] = m[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

/// All set partitions of `{0..r-1}`; `1 <= r <= 12`.
pub fn enumerate_partitions(r: usize) -> Result<Vec<SetPartition>> {
    if r == 0 {
        return Err(Error::SizeLimit {
            what: "partition ground size",
            value: 0,
            limit: MAX_ENUMERATION,
        });
    }
    size_limit("partition ground size", r, MAX_ENUMERATION)?;
    let mut out = Vec::with_capacity(bell(r) as usize);
    for_each_partition(r, |labels, blocks| {
        out.push(SetPartition {
            labels: labels.to_vec(),
            blocks,
        })
    });
    Ok(out)
}

/// Irreducible partitions of `{0..r-1}`.
pub fn irreducible_partitions(r: usize) -> Result<Vec<SetPartition>> {
    Ok(enumerate_partitions(r)?
        .into_iter()
        .filter(SetPartition::is_irreducible)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn bell_counts() {
        let expected = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597];
        for (r, &b) in expected.iter().enumerate() {
            assert_eq!(bell(r), b);
            if (1..=9).contains(&r) {
                let all = enumerate_partitions(r).unwrap();
                assert_eq!(all.len() as u64, b);
                let mut sorted = all.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), all.len());
                assert!(all.contains(&SetPartition::singletons(r)));
                assert!(all.contains(&SetPartition::one_block(r)));
            }
        }
        assert!(enumerate_partitions(0).is_err());
        assert!(enumerate_partitions(13).is_err());
    }

    #[test]
    fn block_count_matches_labels() {
        for_each_partition(6, |labels, blocks| {
            assert_eq!(labels.iter().max().unwrap() + 1, blocks);
        });
    }

    #[test]
    fn irreducible_of_three() {
        let irr = irreducible_partitions(3).unwrap();
        let shown: Vec<_> = irr.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["{{1,2,3}}", "{{1,3},{2}}"]);
        let counts: Vec<usize> = (1..=6).map(|r| irreducible_partitions(r).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 2, 6, 22, 92]);
    }

    #[test]
    fn mobius_values() {
        assert_eq!(SetPartition::one_block(3).mobius_to_top(), 1);
        assert_eq!(SetPartition::singletons(3).mobius_to_top(), 2);
        let p = SetPartition::from_blocks(3, &[vec![0, 1], vec![2]]).unwrap();
        assert_eq!(p.mobius_to_top(), -1);
    }

    #[test]
    fn lattice_examples() {
        let a = SetPartition::from_blocks(3, &[vec![0, 1], vec![2]]).unwrap();
        let b = SetPartition::from_blocks(3, &[vec![0], vec![1, 2]]).unwrap();
        assert_eq!(a.join(&b).unwrap(), SetPartition::one_block(3));
        assert_eq!(a.meet(&b).unwrap(), SetPartition::singletons(3));
        assert_eq!(a.meet(&a).unwrap(), a);
        assert!(a.refines(&SetPartition::one_block(3)).unwrap());
        assert!(!a.refines(&b).unwrap());
        let d1 = SetPartition::from_subset(3, &[0, 1]).unwrap();
        let d2 = SetPartition::from_subset(3, &[1, 2]).unwrap();
        assert_eq!(join_all(&[d1, d2]).unwrap(), SetPartition::one_block(3));
        assert!(a.join(&SetPartition::one_block(4)).is_err());
    }

    #[test]
    fn join_and_meet_are_bounds() {
        let all = enumerate_partitions(4).unwrap();
        for p in &all {
            for q in &all {
                let j = p.join(q).unwrap();
                let m = p.meet(q).unwrap();
                assert!(p.refines(&j).unwrap() && q.refines(&j).unwrap());
                assert!(m.refines(p).unwrap() && m.refines(q).unwrap());
                for s in &all {
                    if p.refines(s).unwrap() && q.refines(s).unwrap() {
                        assert!(j.refines(s).unwrap());
                    }
                    if s.refines(p).unwrap() && s.refines(q).unwrap() {
                        assert!(s.refines(&m).unwrap());
                    }
                }
            }
        }
    }
}
