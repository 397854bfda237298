//! Weighted graphs with weights in [0, 1] and maximum-weight spanning trees,
//! where the weight of a tree is the product of its edge weights.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::partition::SetPartition;
use crate::error::{size_limit, Error, Result};
use crate::scalar::Scalar;

/// Largest vertex count accepted by [`mwst_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 9;
/// Largest vertex count of a materialized power graph.
pub const POWER_LIMIT: usize = 2000;

/// Symmetric weighted graph on vertices `0..n`. A missing edge has weight 0.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph<T> {
    labels: Vec<String>,
    w: Vec<T>,
}

fn check_weight<T: Scalar>(x: &T) -> Result<()> {
    if *x >= T::zero() && *x <= T::one() {
        Ok(())
    } else {
        Err(Error::Input(alloc::format!("weight {x:?} outside [0, 1]")))
    }
}

impl<T: Scalar> WeightedGraph<T> {
    /// Graph without edges; vertices labelled `0..n`.
    pub fn empty(n: usize) -> Self {
        Self::with_labels((0..n).map(|i| alloc::format!("{i}")).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        let n = labels.len();
        WeightedGraph {
            labels,
            w: vec![T::zero(); n * n],
        }
    }

    pub fn complete(n: usize, weight: T) -> Result<Self> {
        Self::from_fn(n, |_, _| weight.clone())
    }

    pub fn from_fn<F: FnMut(usize, usize) -> T>(n: usize, mut f: F) -> Result<Self> {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_weight(u, v, f(u, v))?;
            }
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, T)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v, x) in edges {
            g.set_weight(*u, *v, x.clone())?;
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weight(&self, u: usize, v: usize) -> &T {
        &self.w[u * self.len() + v]
    }

    pub fn set_weight(&mut self, u: usize, v: usize, x: T) -> Result<()> {
        let n = self.len();
        if u >= n || v >= n {
            return Err(Error::Input(alloc::format!("unknown vertex in edge ({u}, {v})")));
        }
        if u == v {
            return Err(Error::Input(alloc::format!("self-loop at vertex {u}")));
        }
        check_weight(&x)?;
        self.w[u * n + v] = x.clone();
        self.w[v * n + u] = x;
        Ok(())
    }

    /// Edges with strictly positive weight, `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize, T)> {
        let n = self.len();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let x = self.weight(u, v);
                if *x > T::zero() {
                    out.push((u, v, x.clone()));
                }
            }
        }
        out
    }

    /// Connected components of the subgraph of weight-1 edges.
    pub fn weight_one_components(&self) -> SetPartition {
        let n = self.len();
        let mut label: Vec<usize> = (0..n).collect();
        let mut stack = Vec::new();
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                label[u] = s;
                for v in 0..n {
                    if !seen[v] && u != v && *self.weight(u, v) == T::one() {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        SetPartition::from_labels(&label)
    }
}

/// Graph induced by a multiset of host vertices: one vertex per occurrence,
/// weight 1 between copies of the same host vertex.
pub fn induced<T: Scalar>(g: &WeightedGraph<T>, b: &[usize]) -> Result<WeightedGraph<T>> {
    if b.is_empty() {
        return Err(Error::Input("empty vertex multiset".into()));
    }
    if let Some(&v) = b.iter().find(|&&v| v >= g.len()) {
        return Err(Error::Input(alloc::format!("unknown vertex {v}")));
    }
    let mut out = WeightedGraph::with_labels(b.iter().map(|&v| g.labels[v].clone()).collect());
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let x = if b[i] == b[j] {
                T::one()
            } else {
                g.weight(b[i], b[j]).clone()
            };
            out.set_weight(i, j, x)?;
        }
    }
    Ok(out)
}

/// Prim's algorithm on an implicit complete graph with weight function
/// `w`, maximizing the product of weights. Returns the insertion order and
/// the weight W({β_{j+1}}, {β_1..β_j}) paid at each step; stops early
/// when the remaining vertices are unreachable.
fn prim<T: Scalar, F: FnMut(usize, usize) -> T>(
    n: usize,
    start: usize,
    mut w: F,
) -> (Vec<usize>, Vec<T>) {
    let mut in_tree = vec![false; n];
    let mut key = vec![T::zero(); n];
    let mut order = Vec::with_capacity(n);
    let mut paid = Vec::with_capacity(n);
    in_tree[start] = true;
    order.push(start);
    for v in 0..n {
        if v != start {
            key[v] = w(start, v);
        }
    }
    for _ in 1..n {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if in_tree[v] || key[v] <= T::zero() {
                continue;
            }
            match best {
                Some(b) if key[v] <= key[b] => {}
                _ => best = Some(v),
            }
        }
        let Some(b) = best else { break };
        in_tree[b] = true;
        order.push(b);
        paid.push(key[b].clone());
        for v in 0..n {
            if !in_tree[v] {
                let x = w(b, v);
                if x > key[v] {
                    key[v] = x;
                }
            }
        }
    }
    (order, paid)
}

/// Maximum spanning-tree weight of an implicit graph on `0..n` given by a
/// weight function; exact product path.
pub fn mwst_of<T: Scalar, F: FnMut(usize, usize) -> T>(n: usize, w: F) -> T {
    if n == 0 {
        return T::zero();
    }
    let (order, paid) = prim(n, 0, w);
    if order.len() < n {
        return T::zero();
    }
    paid.into_iter().fold(T::one(), |a, x| a * x)
}

/// Maximum spanning-tree weight (product of weights; 0 when disconnected,
/// 1 for a single vertex).
pub fn mwst<T: Scalar>(g: &WeightedGraph<T>) -> Result<T> {
    if g.is_empty() {
        return Err(Error::Input("empty graph".into()));
    }
    Ok(mwst_of(g.len(), |u, v| g.weight(u, v).clone()))
}

/// Same optimum computed by Prim on summed logarithms.
pub fn mwst_log(g: &WeightedGraph<f64>) -> Result<f64> {
    if g.is_empty() {
        return Err(Error::Input("empty graph".into()));
    }
    let n = g.len();
    let logw = |u: usize, v: usize| -> f64 {
        let x = *g.weight(u, v);
        if x > 0.0 {
            libm::log(x)
        } else {
            f64::NEG_INFINITY
        }
    };
    let mut in_tree = vec![false; n];
    let mut key = vec![f64::NEG_INFINITY; n];
    in_tree[0] = true;
    for v in 1..n {
        key[v] = logw(0, v);
    }
    let mut total = 0.0;
    for _ in 1..n {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if in_tree[v] || key[v] == f64::NEG_INFINITY {
                continue;
            }
            if best.is_none_or(|b| key[v] > key[b]) {
                best = Some(v);
            }
        }
        let Some(b) = best else { return Ok(0.0) };
        in_tree[b] = true;
        total += key[b];
        for v in 0..n {
            if !in_tree[v] {
                key[v] = key[v].max(logw(b, v));
            }
        }
    }
    Ok(libm::exp(total))
}

/// Exhaustive maximum over all spanning trees, enumerated by Prüfer code.
pub fn mwst_bruteforce<T: Scalar>(g: &WeightedGraph<T>) -> Result<T> {
    let n = g.len();
    if n == 0 {
        return Err(Error::Input("empty graph".into()));
    }
    size_limit("vertices for brute-force MWST", n, BRUTEFORCE_LIMIT)?;
    if n == 1 {
        return Ok(T::one());
    }
    if n == 2 {
        return Ok(g.weight(0, 1).clone());
    }
    let mut code = vec![0usize; n - 2];
    let mut best = T::zero();
    loop {
        let w = prufer_tree(n, &code)
            .into_iter()
            .fold(T::one(), |a, (u, v)| a * g.weight(u, v).clone());
        if w > best {
            best = w;
        }
        let mut k = 0;
        loop {
            if k == code.len() {
                return Ok(best);
            }
            code[k] += 1;
            if code[k] < n {
                break;
            }
            code[k] = 0;
            k += 1;
        }
    }
}

fn prufer_tree(n: usize, code: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, c));
        degree[leaf] = 0;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Vertex ordering β_1 = start, .., β_r whose successive attachment weights
/// W({β_{j+1}}, {β_1..β_j}) multiply to the MWST.
pub fn prim_ordering<T: Scalar>(g: &WeightedGraph<T>, start: usize) -> Result<Vec<usize>> {
    let n = g.len();
    if start >= n {
        return Err(Error::Input(alloc::format!("unknown start vertex {start}")));
    }
    let (order, _) = prim(n, start, |u, v| g.weight(u, v).clone());
    if order.len() < n {
        return Err(Error::Domain("graph is disconnected".into()));
    }
    Ok(order)
}

/// W(I, J): 1 if the multisets share a vertex, otherwise the largest host
/// weight between them.
pub fn w_between<T: Scalar>(g: &WeightedGraph<T>, i: &[usize], j: &[usize]) -> T {
    w_between_fn(i, j, |a, b| g.weight(*a, *b).clone())
}

/// W(I, J) for an implicit weight function on arbitrary indices.
pub fn w_between_fn<I: PartialEq, T: Scalar, F: FnMut(&I, &I) -> T>(i: &[I], j: &[I], mut w: F) -> T {
    if i.iter().any(|a| j.contains(a)) {
        return T::one();
    }
    let mut best = T::zero();
    for a in i {
        for b in j {
            let x = w(a, b);
            if x > best {
                best = x;
            }
        }
    }
    best
}

/// Advances a sorted multiset over `0..n` to its lexicographic successor;
/// returns false after the last one.
pub fn next_multiset(cur: &mut [usize], n: usize) -> bool {
    let Some(k) = cur.iter().rposition(|&x| x + 1 < n) else {
        return false;
    };
    let v = cur[k] + 1;
    for x in &mut cur[k..] {
        *x = v;
    }
    true
}

/// Nonempty multisets of size at most `m` over `0..n`, as sorted vectors.
pub fn multisets_up_to(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for size in 1..=m {
        let mut cur = vec![0usize; size];
        loop {
            out.push(cur.clone());
            if !next_multiset(&mut cur, n) {
                break;
            }
        }
    }
    out
}

/// The m-th power graph: vertices are the multisets of size ≤ m, weighted
/// by W(I, J).
pub fn power<T: Scalar>(g: &WeightedGraph<T>, m: usize) -> Result<(Vec<Vec<usize>>, WeightedGraph<T>)> {
    if m == 0 {
        return Err(Error::Input("power exponent must be positive".into()));
    }
    let verts = multisets_up_to(g.len(), m);
    size_limit("power graph vertices", verts.len(), POWER_LIMIT)?;
    let labels = verts
        .iter()
        .map(|v| {
            let names: Vec<&str> = v.iter().map(|&x| g.labels[x].as_str()).collect();
            alloc::format!("{{{}}}", names.join(","))
        })
        .collect();
    let mut out = WeightedGraph::with_labels(labels);
    for a in 0..verts.len() {
        for b in a + 1..verts.len() {
            out.set_weight(a, b, w_between(g, &verts[a], &verts[b]))?;
        }
    }
    Ok((verts, out))
}

/// The power graph induced on a multiset {I_1, .., I_r} of monomials.
pub fn power_induced<T: Scalar>(g: &WeightedGraph<T>, family: &[Vec<usize>]) -> Result<WeightedGraph<T>> {
    if family.iter().flatten().any(|&v| v >= g.len()) {
        return Err(Error::Input("monomial uses an unknown vertex".into()));
    }
    let mut out = WeightedGraph::empty(family.len());
    for a in 0..family.len() {
        for b in a + 1..family.len() {
            out.set_weight(a, b, w_between(g, &family[a], &family[b]))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    #[test]
    fn induced_examples() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 0.3)]).unwrap();
        let h = induced(&g, &[0, 0]).unwrap();
        assert_eq!(*h.weight(0, 1), 1.0);
        let t = induced(&g, &[0, 0, 1]).unwrap();
        assert_eq!((*t.weight(0, 1), *t.weight(0, 2), *t.weight(1, 2)), (1.0, 0.3, 0.3));
        assert!(induced(&g, &[2]).is_err());
    }

    #[test]
    fn mwst_examples() {
        let eps = rat(1, 7);
        let k5 = WeightedGraph::complete(5, eps.clone()).unwrap();
        assert_eq!(mwst(&k5).unwrap(), Scalar::powi(&eps, 4));
        let two = WeightedGraph::from_edges(4, &[(0, 1, rat(1, 2)), (2, 3, rat(1, 2))]).unwrap();
        assert_eq!(mwst(&two).unwrap(), rat(0, 1));
        let path = WeightedGraph::from_edges(3, &[(0, 1, 0.5), (1, 2, 0.2), (0, 2, 0.05)]).unwrap();
        assert!((mwst(&path).unwrap() - 0.1).abs() < 1e-15);
        assert!((mwst_log(&path).unwrap() - 0.1).abs() < 1e-15);
        assert!((mwst_bruteforce(&path).unwrap() - 0.1).abs() < 1e-15);
        let single: WeightedGraph<Rational> = WeightedGraph::empty(1);
        assert_eq!(mwst(&single).unwrap(), rat(1, 1));
        assert_eq!(mwst_bruteforce(&single).unwrap(), rat(1, 1));
        assert!(mwst(&WeightedGraph::<f64>::empty(0)).is_err());
    }

    #[test]
    fn ordering_product() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, rat(1, 2)), (0, 2, rat(1, 3)), (0, 3, rat(1, 5))]).unwrap();
        for s in 0..4 {
            let order = prim_ordering(&g, s).unwrap();
            assert_eq!(order[0], s);
            let mut prod = rat(1, 1);
            for j in 1..order.len() {
                prod *= w_between(&g, &order[j..=j], &order[..j]);
            }
            assert_eq!(prod, rat(1, 30));
        }
        let disc: WeightedGraph<Rational> = WeightedGraph::empty(2);
        assert!(prim_ordering(&disc, 0).is_err());
    }

    #[test]
    fn power_weights() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 0.2), (1, 2, 0.7)]).unwrap();
        assert_eq!(w_between(&g, &[0, 1], &[1]), 1.0);
        assert_eq!(w_between(&g, &[0, 2], &[1]), 0.7);
        let h = WeightedGraph::from_edges(3, &[(0, 1, 0.2)]).unwrap();
        assert_eq!(w_between(&h, &[0, 0], &[2]), 0.0);
        let (verts, p) = power(&g, 2).unwrap();
        assert_eq!(verts.len(), 3 + 6);
        assert_eq!(p.len(), 9);
        assert!(power(&g, 0).is_err());
    }

    #[test]
    fn multiset_enumeration_counts() {
        // C(n+k-1, k) summed over k = 1..m
        assert_eq!(multisets_up_to(4, 1).len(), 4);
        assert_eq!(multisets_up_to(4, 2).len(), 4 + 10);
        assert_eq!(multisets_up_to(3, 3).len(), 3 + 6 + 10);
        assert_eq!(multisets_up_to(1, 3), vec![vec![0], vec![0, 0], vec![0, 0, 0]]);
    }

    #[test]
    fn weight_range_enforced() {
        let mut g = WeightedGraph::<f64>::empty(2);
        assert!(g.set_weight(0, 1, 1.5).is_err());
        assert!(g.set_weight(0, 0, 0.5).is_err());
        assert!(g.set_weight(0, 1, f64::NAN).is_err());
    }
}
