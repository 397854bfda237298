//! The uniform random graph G(n, m) with `n` vertices and `m` edges, its
//! subgraph counts and their dependency structure. Vertices are 0-based.

use alloc::vec;
use alloc::vec::Vec;
use core::marker::PhantomData;

use num_traits::Zero;
use rand::Rng;

use crate::algebra::cumulant::MomentOracle;
use crate::combinatorics::{binomial, falling, next_permutation};
use crate::error::{size_limit, Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::wdg::{product_family, ProductFamily, WdgCandidate};

/// Largest pattern handled by the brute-force automorphism search.
pub const PATTERN_VERTEX_LIMIT: usize = 8;
/// Largest number of edge sets enumerated by an exhaustive variance.
pub const EXHAUSTIVE_GRAPH_LIMIT: u128 = 1_000_000;

/// An edge `{u, v}` with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub u32, pub u32);

impl Edge {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        match a.cmp(&b) {
            core::cmp::Ordering::Less => Ok(Edge(a, b)),
            core::cmp::Ordering::Greater => Ok(Edge(b, a)),
            core::cmp::Ordering::Equal => Err(Error::Input(alloc::format!("loop at vertex {a}"))),
        }
    }
}

/// All edges of K_n in lexicographic order.
pub fn all_edges(n: usize) -> Vec<Edge> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            out.push(Edge(u, v));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GnmParams {
    pub n: usize,
    pub m: usize,
}

impl GnmParams {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let e = n * n.saturating_sub(1) / 2;
        if m > e {
            return Err(Error::Input(alloc::format!("m = {m} exceeds E = {e}")));
        }
        Ok(GnmParams { n, m })
    }

    /// E_n = n(n−1)/2.
    pub fn edge_slots(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    /// p_n = m / E_n.
    pub fn p(&self) -> Rational {
        Rational::new((self.m as i64).into(), (self.edge_slots().max(1) as i64).into())
    }
}

/// A simple graph stored as adjacency bitsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        SimpleGraph { n, words, rows: vec![0; n * words] }
    }

    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self> {
        let mut g = Self::empty(n);
        for e in edges {
            if e.1 as usize >= n || e.0 >= e.1 {
                return Err(Error::Input(alloc::format!("edge {e:?} invalid for {n} vertices")));
            }
            g.add_edge(e.0 as usize, e.1 as usize);
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<Edge> {
        all_edges(self.n)
            .into_iter()
            .filter(|e| self.has_edge(e.0 as usize, e.1 as usize))
            .collect()
    }

    /// Number of triangles by bitset intersection of neighbourhoods.
    pub fn triangle_count(&self) -> u64 {
        let mut t = 0u64;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    continue;
                }
                let (ru, rv) = (self.row(u), self.row(v));
                for k in 0..self.words {
                    let mut common = ru[k] & rv[k];
                    // only w > v
                    let lo = k * 64;
                    if v + 1 > lo {
                        let shift = (v + 1 - lo).min(64);
                        common = if shift == 64 { 0 } else { common & (!0u64 << shift) };
                    }
                    t += common.count_ones() as u64;
                }
            }
        }
        t
    }
}

/// Uniform graph with exactly `m` edges: a partial Fisher–Yates shuffle of
/// the edge slots.
pub fn sample_gnm<R: Rng + ?Sized>(params: GnmParams, rng: &mut R) -> SimpleGraph {
    let mut slots = all_edges(params.n);
    let mut g = SimpleGraph::empty(params.n);
    for k in 0..params.m {
        let j = rng.gen_range(k..slots.len());
        slots.swap(k, j);
        g.add_edge(slots[k].0 as usize, slots[k].1 as usize);
    }
    g
}

/// A small pattern graph H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphPattern {
    v: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphPattern {
    pub fn new(v: usize, edges: &[(usize, usize)]) -> Result<Self> {
        size_limit("pattern vertices", v, PATTERN_VERTEX_LIMIT)?;
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b || a >= v || b >= v {
                return Err(Error::Input(alloc::format!("pattern edge ({a}, {b}) invalid for {v} vertices")));
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        out.dedup();
        if out.is_empty() {
            return Err(Error::Input("pattern needs at least one edge".into()));
        }
        Ok(GraphPattern { v, edges: out })
    }

    pub fn edge() -> Self {
        GraphPattern { v: 2, edges: vec![(0, 1)] }
    }

    pub fn triangle() -> Self {
        GraphPattern { v: 3, edges: vec![(0, 1), (0, 2), (1, 2)] }
    }

    pub fn path(len: usize) -> Result<Self> {
        let e: Vec<(usize, usize)> = (0..len).map(|i| (i, i + 1)).collect();
        Self::new(len + 1, &e)
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// |Aut(H)| by checking all v_H! vertex permutations.
    pub fn automorphism_count(&self) -> u64 {
        let mut perm: Vec<usize> = (0..self.v).collect();
        let mut count = 0;
        loop {
            if self.edges.iter().all(|&(a, b)| self.adjacent(perm[a], perm[b])) {
                count += 1;
            }
            if !next_permutation(&mut perm) {
                return count;
            }
        }
    }

    /// (v_K, e_K) over all subgraphs K spanned by a nonempty edge subset.
    pub fn subgraph_sizes(&self) -> Vec<(usize, usize)> {
        let e = self.edges.len();
        let mut out = Vec::new();
        for mask in 1u64..1 << e {
            let mut verts = 0u32;
            for (k, &(a, b)) in self.edges.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    verts |= 1 << a | 1 << b;
                }
            }
            out.push((verts.count_ones() as usize, mask.count_ones() as usize));
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn phi_over<T: Scalar>(h: &GraphPattern, n: usize, p: &T, min_edges: usize) -> Option<T> {
    let nn = T::from_i64(n as i64);
    h.subgraph_sizes()
        .into_iter()
        .filter(|&(_, e)| e >= min_edges)
        .map(|(v, e)| nn.powi(v as i32) * p.powi(e as i32))
        .reduce(|a, b| if b < a { b } else { a })
}

/// Φ_H = min over subgraphs K with e_K ≥ 1 of n^{v_K} p^{e_K}.
pub fn phi<T: Scalar>(h: &GraphPattern, n: usize, p: &T) -> T {
    phi_over(h, n, p, 1).expect("patterns have an edge")
}

/// Φ̃_H, the same minimum over subgraphs with e_K ≥ 2; `None` when H has a
/// single edge.
pub fn phi_tilde<T: Scalar>(h: &GraphPattern, n: usize, p: &T) -> Option<T> {
    phi_over(h, n, p, 2)
}

/// Copies of H in a graph: injective homomorphisms divided by |Aut(H)|.
pub fn count_copies(h: &GraphPattern, g: &SimpleGraph) -> u64 {
    if *h == GraphPattern::triangle() {
        return g.triangle_count();
    }
    count_copies_by_homomorphisms(h, g)
}

pub fn count_copies_by_homomorphisms(h: &GraphPattern, g: &SimpleGraph) -> u64 {
    fn rec(h: &GraphPattern, g: &SimpleGraph, image: &mut Vec<usize>, used: &mut [bool]) -> u64 {
        let k = image.len();
        if k == h.v {
            return 1;
        }
        let mut total = 0;
        for x in 0..g.n {
            if used[x] {
                continue;
            }
            let ok = (0..k).all(|j| !h.adjacent(j, k) || g.has_edge(image[j], x));
            if ok {
                used[x] = true;
                image.push(x);
                total += rec(h, g, image, used);
                image.pop();
                used[x] = false;
            }
        }
        total
    }
    if h.v > g.n {
        return 0;
    }
    let mut used = vec![false; g.n];
    rec(h, g, &mut Vec::with_capacity(h.v), &mut used) / h.automorphism_count()
}

/// Copies of H counted as e_H-subsets of the graph's edges whose spanned
/// subgraph is isomorphic to H.
pub fn count_copies_by_edge_subsets(h: &GraphPattern, g: &SimpleGraph) -> Result<u64> {
    let edges = g.edges();
    let k = h.edges.len();
    let total = binomial(edges.len() as u64, k as u64);
    if total > EXHAUSTIVE_GRAPH_LIMIT {
        return Err(Error::SizeLimit {
            what: "edge subsets",
            value: usize::try_from(total).unwrap_or(usize::MAX),
            limit: EXHAUSTIVE_GRAPH_LIMIT as usize,
        });
    }
    let mut count = 0;
    let mut idx: Vec<usize> = (0..k).collect();
    if k > edges.len() {
        return Ok(0);
    }
    loop {
        let chosen: Vec<Edge> = idx.iter().map(|&i| edges[i]).collect();
        if isomorphic_to_pattern(&chosen, h) {
            count += 1;
        }
        // next k-combination of 0..edges.len()
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            if idx[i] < edges.len() - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Whether the graph spanned by `edges` (no isolated vertices) is
/// isomorphic to H.
fn isomorphic_to_pattern(edges: &[Edge], h: &GraphPattern) -> bool {
    let mut verts: Vec<u32> = edges.iter().flat_map(|e| [e.0, e.1]).collect();
    verts.sort_unstable();
    verts.dedup();
    if verts.len() != h.v || edges.len() != h.edges.len() {
        return false;
    }
    let local = |x: u32| verts.binary_search(&x).unwrap();
    let own: Vec<(usize, usize)> = edges.iter().map(|e| (local(e.0), local(e.1))).collect();
    let mut perm: Vec<usize> = (0..h.v).collect();
    loop {
        if own.iter().all(|&(a, b)| h.adjacent(perm[a], perm[b])) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

/// Distinct edges of a multiset of edges.
fn distinct_edges(b: &[Edge]) -> Vec<Edge> {
    let mut v = b.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// P(all given edges present) = m^{(r)} / E^{(r)} for r distinct edges.
pub fn edge_moment<T: Scalar>(params: GnmParams, edges: &[Edge]) -> T {
    let r = distinct_edges(edges).len() as u64;
    if r as usize > params.m {
        return T::zero();
    }
    falling::<T>(params.m as i64, r) / falling::<T>(params.edge_slots() as i64, r)
}

/// Edge indicators of G(n, m): complete weighted graph with weights 1/m and
/// Ψ(B) = p^{#(B)}.
#[derive(Clone, Debug)]
pub struct GnmFamily<T> {
    pub params: GnmParams,
    _t: PhantomData<T>,
}

pub fn edge_moment_oracle<T: Scalar>(params: GnmParams) -> GnmFamily<T> {
    GnmFamily { params, _t: PhantomData }
}

pub fn gnm_wdg<T: Scalar>(params: GnmParams) -> Result<GnmFamily<T>> {
    if params.m == 0 {
        return Err(Error::Input("G(n, m) weights need m ≥ 1".into()));
    }
    Ok(edge_moment_oracle(params))
}

impl<T: Scalar> MomentOracle for GnmFamily<T> {
    type Index = Edge;
    type Value = T;

    fn moment(&self, b: &[Edge]) -> Result<T> {
        Ok(edge_moment(self.params, b))
    }
}

impl<T: Scalar> WdgCandidate for GnmFamily<T> {
    fn indices(&self) -> Vec<Edge> {
        all_edges(self.params.n)
    }

    fn weight(&self, _a: &Edge, _b: &Edge) -> T {
        T::from_ratio(1, self.params.m as i64)
    }

    fn psi(&self, b: &[Edge]) -> T {
        T::from_rational(&self.params.p()).powi(distinct_edges(b).len() as i32)
    }
}

/// A copy of H in K_n, as its sorted edge set.
pub type GraphCopy = Vec<Edge>;

/// All copies of H in K_n (A^H_n), sorted.
pub fn pattern_copies(h: &GraphPattern, n: usize) -> Vec<GraphCopy> {
    fn rec(h: &GraphPattern, n: usize, image: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<GraphCopy>) {
        if image.len() == h.v {
            let mut copy: Vec<Edge> = h
                .edges
                .iter()
                .map(|&(a, b)| Edge(image[a].min(image[b]), image[a].max(image[b])))
                .collect();
            copy.sort_unstable();
            out.push(copy);
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                image.push(x as u32);
                rec(h, n, image, used, out);
                image.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    if h.v <= n {
        rec(h, n, &mut Vec::new(), &mut vec![false; n], &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Copy indicators X_{H'}: weight 1 when copies share an edge, 1/m
/// otherwise, Ψ(B) = p^{e(B)}.
#[derive(Clone, Debug)]
pub struct SubgraphFamily<T> {
    pub params: GnmParams,
    pub pattern: GraphPattern,
    copies: Vec<GraphCopy>,
    _t: PhantomData<T>,
}

pub fn subgraph_wdg<T: Scalar>(h: &GraphPattern, params: GnmParams) -> Result<SubgraphFamily<T>> {
    if params.m == 0 {
        return Err(Error::Input("G(n, m) weights need m ≥ 1".into()));
    }
    Ok(SubgraphFamily {
        params,
        pattern: h.clone(),
        copies: pattern_copies(h, params.n),
        _t: PhantomData,
    })
}

/// The copy family built as a subfamily of the e_H-th power of the edge
/// family.
pub fn subgraph_product_family<T: Scalar>(h: &GraphPattern, params: GnmParams) -> Result<ProductFamily<GnmFamily<T>>> {
    product_family(gnm_wdg(params)?, h.edge_count(), pattern_copies(h, params.n))
}

impl<T: Scalar> MomentOracle for SubgraphFamily<T> {
    type Index = GraphCopy;
    type Value = T;

    fn moment(&self, b: &[GraphCopy]) -> Result<T> {
        let all: Vec<Edge> = b.iter().flatten().copied().collect();
        Ok(edge_moment(self.params, &all))
    }
}

impl<T: Scalar> WdgCandidate for SubgraphFamily<T> {
    fn indices(&self) -> Vec<GraphCopy> {
        self.copies.clone()
    }

    fn weight(&self, a: &GraphCopy, b: &GraphCopy) -> T {
        if a.iter().any(|e| b.binary_search(e).is_ok()) {
            T::one()
        } else {
            T::from_ratio(1, self.params.m as i64)
        }
    }

    fn psi(&self, b: &[GraphCopy]) -> T {
        let all: Vec<Edge> = b.iter().flatten().copied().collect();
        T::from_rational(&self.params.p()).powi(distinct_edges(&all).len() as i32)
    }

    fn index_count(&self) -> usize {
        self.copies.len()
    }

    fn index_at(&self, k: usize) -> GraphCopy {
        self.copies[k].clone()
    }

    fn visit_indices(&self, f: &mut dyn FnMut(&GraphCopy)) {
        self.copies.iter().for_each(f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum VarianceMode {
    /// all C(E, m) edge sets, exact
    Exhaustive,
    /// `samples` seeded draws
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarianceReport {
    pub variance: f64,
    /// present for exhaustive runs
    pub exact: Option<Rational>,
    /// (n^{v_H} p^{e_H})² (1−p)² / Φ̃_H; zero when H has one edge
    pub lower_bound_scale: f64,
    /// variance / lower_bound_scale, `None` when the scale vanishes
    pub ratio: Option<f64>,
}

/// Exact Var(X^H) over all edge sets with `m` edges.
pub fn subgraph_variance_exact(h: &GraphPattern, params: GnmParams) -> Result<Rational> {
    let slots = all_edges(params.n);
    let total = binomial(slots.len() as u64, params.m as u64);
    if total > EXHAUSTIVE_GRAPH_LIMIT {
        return Err(Error::SizeLimit {
            what: "edge sets in an exhaustive variance",
            value: usize::try_from(total).unwrap_or(usize::MAX),
            limit: EXHAUSTIVE_GRAPH_LIMIT as usize,
        });
    }
    let m = params.m;
    let mut idx: Vec<usize> = (0..m).collect();
    let (mut s1, mut s2, mut count) = (0u128, 0u128, 0u128);
    loop {
        let chosen: Vec<Edge> = idx.iter().map(|&i| slots[i]).collect();
        let g = SimpleGraph::from_edges(params.n, &chosen)?;
        let x = count_copies(h, &g) as u128;
        s1 += x;
        s2 += x * x;
        count += 1;
        let mut i = m;
        let advanced = loop {
            if i == 0 {
                break false;
            }
            i -= 1;
            if idx[i] < slots.len() - m + i {
                idx[i] += 1;
                for j in i + 1..m {
                    idx[j] = idx[j - 1] + 1;
                }
                break true;
            }
        };
        if !advanced {
            break;
        }
    }
    let c = Rational::from_integer(count.into());
    let mean = Rational::from_integer(s1.into()) / c.clone();
    Ok(Rational::from_integer(s2.into()) / c - mean.clone() * mean)
}

/// Var(X^H) exactly or by simulation, with the variance lower-bound scale.
pub fn subgraph_variance<R: Rng + ?Sized>(
    h: &GraphPattern,
    params: GnmParams,
    mode: VarianceMode,
    rng: &mut R,
) -> Result<VarianceReport> {
    let (variance, exact) = match mode {
        VarianceMode::Exhaustive => {
            let v = subgraph_variance_exact(h, params)?;
            (v.to_f64(), Some(v))
        }
        VarianceMode::MonteCarlo { samples, .. } => {
            if samples < 2 {
                return Err(Error::Input("need at least two samples".into()));
            }
            let xs: Vec<f64> = (0..samples)
                .map(|_| count_copies(h, &sample_gnm(params, rng)) as f64)
                .collect();
            let mean = xs.iter().sum::<f64>() / samples as f64;
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (samples - 1) as f64;
            (var, None)
        }
    };
    let p = params.p().to_f64();
    let lead = libm::pow(params.n as f64, h.v as f64) * libm::pow(p, h.edge_count() as f64);
    let lower_bound_scale = match phi_tilde(h, params.n, &p) {
        Some(t) if t > 0.0 => lead * lead * (1.0 - p) * (1.0 - p) / t,
        _ => 0.0,
    };
    let ratio = (lower_bound_scale > 0.0).then(|| variance / lower_bound_scale);
    Ok(VarianceReport { variance, exact, lower_bound_scale, ratio })
}

/// Exact frequency P(all edges present) over every edge set with `m`
/// edges (n ≤ 5).
pub fn edge_moment_by_enumeration(params: GnmParams, edges: &[Edge]) -> Result<Rational> {
    size_limit("enumerated graph order", params.n, 5)?;
    let slots = all_edges(params.n);
    let e = slots.len();
    let want: u32 = distinct_edges(edges)
        .iter()
        .map(|x| 1u32 << slots.iter().position(|s| s == x).expect("edge in K_n"))
        .fold(0, |a, b| a | b);
    let (mut hit, mut total) = (0i64, 0i64);
    for mask in 0u32..1 << e {
        if mask.count_ones() as usize == params.m {
            total += 1;
            if mask & want == want {
                hit += 1;
            }
        }
    }
    if total == 0 {
        return Ok(Rational::zero());
    }
    Ok(Rational::new(hit.into(), total.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn edge_moments() {
        let p = GnmParams::new(4, 3).unwrap();
        assert_eq!(edge_moment::<Rational>(p, &[Edge(0, 1)]), rat(1, 2));
        assert_eq!(edge_moment::<Rational>(p, &[Edge(0, 1), Edge(2, 3)]), rat(1, 5));
        for m in 0..=6 {
            let p = GnmParams::new(4, m).unwrap();
            let b = [Edge(0, 1), Edge(1, 2), Edge(0, 1)];
            assert_eq!(edge_moment::<Rational>(p, &b), edge_moment_by_enumeration(p, &b).unwrap());
        }
    }

    #[test]
    fn automorphisms() {
        assert_eq!(GraphPattern::triangle().automorphism_count(), 6);
        assert_eq!(GraphPattern::edge().automorphism_count(), 2);
        assert_eq!(GraphPattern::path(2).unwrap().automorphism_count(), 2);
        let c4 = GraphPattern::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(c4.automorphism_count(), 8);
    }

    #[test]
    fn copy_counts() {
        let k4 = SimpleGraph::from_edges(4, &all_edges(4)).unwrap();
        assert_eq!(count_copies(&GraphPattern::triangle(), &k4), 4);
        assert_eq!(count_copies_by_homomorphisms(&GraphPattern::triangle(), &k4), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = sample_gnm(GnmParams::new(7, 11).unwrap(), &mut rng);
        assert_eq!(g.edge_count(), 11);
        assert_eq!(count_copies(&GraphPattern::edge(), &g), 11);
        for h in [GraphPattern::triangle(), GraphPattern::path(2).unwrap()] {
            assert_eq!(count_copies(&h, &g), count_copies_by_edge_subsets(&h, &g).unwrap());
        }
        assert_eq!(pattern_copies(&GraphPattern::triangle(), 6).len(), 20);
    }

    #[test]
    fn phi_examples() {
        let t = GraphPattern::triangle();
        let v = phi(&t, 1000, &0.01f64);
        assert!((v - 1e3).abs() < 1e-6);
        let q = rat(1, 100);
        assert_eq!(phi(&t, 1000, &q), rat(1000, 1));
        assert_eq!(phi_tilde(&t, 1000, &q), Some(rat(1000, 1)));
        assert_eq!(phi_tilde(&GraphPattern::edge(), 10, &q), None);
    }

    #[test]
    fn edge_count_has_no_variance() {
        let v = subgraph_variance_exact(&GraphPattern::edge(), GnmParams::new(5, 4).unwrap()).unwrap();
        assert!(v.is_zero());
    }
}
