use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wdg_core::algebra::boolean::{boolean_cumulant, boolean_to_classical_coeffs};
use wdg_core::algebra::cumulant::{
    cumulant_of, leonov_shiryaev, moment_from_cumulants, multiset_partitions, univariate_cumulants, MomentOracle,
};
use wdg_core::algebra::partition::{bell, enumerate_partitions, irreducible_partitions, join_all, SetPartition};
use wdg_core::algebra::table::{
    alternating_product_remainder, factorial_moment_table, factorial_scaled_deviation, reduced_factorial_table,
    scqf_report, uniform_graph, MomentTable,
};
use wdg_core::{rat, Rational, Result};

/// Discrete random variables on a finite probability space.
struct FiniteSpace {
    probs: Vec<Rational>,
    values: Vec<Vec<i64>>,
}

impl FiniteSpace {
    fn random(rng: &mut ChaCha8Rng, outcomes: usize, vars: usize) -> Self {
        let weights: Vec<i64> = (0..outcomes).map(|_| rng.gen_range(1..=9)).collect();
        let total: i64 = weights.iter().sum();
        FiniteSpace {
            probs: weights.iter().map(|&w| rat(w, total)).collect(),
            values: (0..vars)
                .map(|_| (0..outcomes).map(|_| rng.gen_range(-3..=3)).collect())
                .collect(),
        }
    }

    /// Variables of `a` on the first factor, of `b` on the second.
    fn product(a: &FiniteSpace, b: &FiniteSpace) -> Self {
        let (na, nb) = (a.probs.len(), b.probs.len());
        let mut probs = Vec::with_capacity(na * nb);
        for pa in &a.probs {
            for pb in &b.probs {
                probs.push(pa * pb);
            }
        }
        let mut values = Vec::new();
        for v in &a.values {
            values.push((0..na * nb).map(|w| v[w / nb]).collect());
        }
        for v in &b.values {
            values.push((0..na * nb).map(|w| v[w % nb]).collect());
        }
        FiniteSpace { probs, values }
    }
}

impl MomentOracle for FiniteSpace {
    type Index = usize;
    type Value = Rational;

    fn moment(&self, b: &[usize]) -> Result<Rational> {
        let mut total = Rational::zero();
        for (w, p) in self.probs.iter().enumerate() {
            let prod: i64 = b.iter().map(|&i| self.values[i][w]).product();
            total += p * rat(prod, 1);
        }
        Ok(total)
    }
}

/// Arbitrary joint moments of distinct variables, with no realizability
/// constraint.
struct FreeTable {
    u: Vec<Rational>,
}

impl FreeTable {
    fn random(rng: &mut ChaCha8Rng, r: usize) -> Self {
        let mut u = vec![Rational::one()];
        for _ in 1..1usize << r {
            u.push(rat(rng.gen_range(-40..=40), rng.gen_range(1..=13)));
        }
        FreeTable { u }
    }
}

impl MomentOracle for FreeTable {
    type Index = usize;
    type Value = Rational;

    fn moment(&self, b: &[usize]) -> Result<Rational> {
        let mask = b.iter().fold(0usize, |m, &i| {
            assert_eq!(m >> i & 1, 0, "free tables only hold distinct variables");
            m | 1 << i
        });
        Ok(self.u[mask].clone())
    }
}

fn sub(b: &[usize], positions: &[usize]) -> Vec<usize> {
    positions.iter().map(|&p| b[p]).collect()
}

#[test]
fn bell_counts() {
    let known = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147];
    for (r, &b) in known.iter().enumerate() {
        assert_eq!(bell(r), b);
        if r >= 1 {
            assert_eq!(enumerate_partitions(r).unwrap().len() as u64, b);
            assert_eq!(multiset_partitions(&vec![7u8; r]).unwrap().len() as u64, b);
        }
    }
}

#[test]
fn irreducible_counts() {
    // 1, 1, 2, 6, 22, 92: irreducible set partitions
    let known = [1usize, 1, 2, 6, 22, 92];
    for (i, &k) in known.iter().enumerate() {
        assert_eq!(irreducible_partitions(i + 1).unwrap().len(), k);
    }
}

#[test]
fn mobius_sums_vanish() {
    for r in 2..=7 {
        let s: i64 = enumerate_partitions(r).unwrap().iter().map(|p| p.mobius_to_top()).sum();
        assert_eq!(s, 0);
    }
}

#[test]
fn univariate_cumulants_of_bernoulli() {
    let p = rat(1, 3);
    let m = vec![p.clone(); 4];
    let k = univariate_cumulants(&m);
    let q = Rational::one() - &p;
    assert_eq!(k[0], p);
    assert_eq!(k[1], &p * &q);
    assert_eq!(k[2], &p * &q * (&q - &p));
    assert_eq!(k[3], &p * &q * (Rational::one() - rat(6, 1) * &p * &q));
}

#[test]
fn boolean_small_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = FreeTable::random(&mut rng, 3);
    let m = |s: &[usize]| t.moment(s).unwrap();
    assert_eq!(boolean_cumulant(&t, &[0]).unwrap(), m(&[0]));
    assert_eq!(boolean_cumulant(&t, &[0, 1]).unwrap(), m(&[0, 1]) - m(&[0]) * m(&[1]));
    let b3 = m(&[0, 1, 2]) - m(&[0]) * m(&[1, 2]) - m(&[0, 1]) * m(&[2]) + m(&[0]) * m(&[1]) * m(&[2]);
    assert_eq!(boolean_cumulant(&t, &[0, 1, 2]).unwrap(), b3);
}

#[test]
fn boolean_expansion_low_orders() {
    let e2 = boolean_to_classical_coeffs(2).unwrap();
    assert_eq!(e2.terms.len(), 1);
    assert_eq!(e2.terms[0].1, Rational::one());
    let e3 = boolean_to_classical_coeffs(3).unwrap();
    let nested = SetPartition::from_blocks(3, &[vec![0, 2], vec![1]]).unwrap();
    let d = e3.terms.iter().find(|(p, _)| *p == nested).unwrap();
    assert_eq!(d.1, rat(-1, 1));
}

#[test]
fn factorial_scqf_bounded() {
    let a = [1u64, 2, 3];
    let xs = [100u64, 1000, 10000];
    let devs: Vec<Rational> = xs.iter().map(|&x| factorial_scaled_deviation(x, &a).unwrap()).collect();
    let max = devs.iter().max().unwrap();
    let min = devs.iter().min().unwrap();
    assert!(max < &(min * rat(2, 1)));
    let tables: Vec<_> = xs.iter().map(|&x| reduced_factorial_table(x, &a).unwrap()).collect();
    let graphs: Vec<_> = xs.iter().map(|&x| uniform_graph(3, rat(1, x as i64)).unwrap()).collect();
    let rep = scqf_report(&tables, &graphs).unwrap();
    assert!(!rep.unbounded);
    assert!(rep.entries.iter().all(|e| e.violations.is_empty()));
}

#[test]
fn factorial_table_unscaled_agrees() {
    let t = factorial_moment_table(30, &[2, 5]).unwrap();
    let r = reduced_factorial_table(30, &[2, 5]).unwrap();
    assert_eq!(t.p_delta(0b11).unwrap(), r.p_delta(0b11).unwrap());
}

#[test]
fn remainder_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for l in 1..=5usize {
        for _ in 0..5 {
            let a: Vec<i64> = (0..l - 1).map(|_| rng.gen_range(-9..=9)).collect();
            let scaled: Vec<Rational> = [1000i64, 10_000, 100_000]
                .iter()
                .map(|&t| {
                    let r = alternating_product_remainder(&a, &rat(t, 1)).unwrap();
                    (r * num_traits::Pow::pow(rat(t, 1), (l - 1) as u32)).abs()
                })
                .collect();
            let hi = scaled.iter().max().unwrap();
            let lo = scaled.iter().min().unwrap();
            assert!(hi <= &(lo * rat(11, 10) + rat(1, 100)), "l = {l}, a = {a:?}: {scaled:?}");
        }
    }
}

fn rational_table(l: usize) -> impl Strategy<Value = MomentTable<Rational>> {
    prop::collection::vec((1i64..40, 1i64..13), 1usize << l)
        .prop_map(move |v| MomentTable::new(l, v.into_iter().map(|(a, b)| rat(a, b)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_round_trip(raw in prop::collection::vec(0usize..6, 1..9)) {
        let p = SetPartition::from_labels(&raw);
        prop_assert_eq!(&SetPartition::from_labels(p.labels()), &p);
        prop_assert_eq!(&SetPartition::from_blocks(raw.len(), &p.blocks()).unwrap(), &p);
        let one = SetPartition::one_block(raw.len());
        prop_assert!(p.refines(&one).unwrap());
        prop_assert!(SetPartition::singletons(raw.len()).refines(&p).unwrap());
    }

    #[test]
    fn lattice_laws(a in prop::collection::vec(0usize..5, 6), b in prop::collection::vec(0usize..5, 6)) {
        let p = SetPartition::from_labels(&a);
        let q = SetPartition::from_labels(&b);
        let j = p.join(&q).unwrap();
        let m = p.meet(&q).unwrap();
        prop_assert!(p.refines(&j).unwrap() && q.refines(&j).unwrap());
        prop_assert!(m.refines(&p).unwrap() && m.refines(&q).unwrap());
        prop_assert_eq!(&join_all(&[p.clone(), q.clone()]).unwrap(), &j);
        prop_assert_eq!(&j, &q.join(&p).unwrap());
        prop_assert_eq!(&p.join(&m).unwrap(), &p);
    }

    #[test]
    fn moment_cumulant_round_trip(seed in any::<u64>(), r in 1usize..=5, repeats in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = FiniteSpace::random(&mut rng, 5, 4);
        let b: Vec<usize> = (0..r).map(|i| if repeats { rng.gen_range(0..4) } else { i % 4 }).collect();
        let direct = space.moment(&b).unwrap();
        let rebuilt = moment_from_cumulants(|s: &[usize]| cumulant_of(&space, s), &b).unwrap();
        prop_assert_eq!(direct, rebuilt);
    }

    #[test]
    fn free_table_round_trip(seed in any::<u64>(), r in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = FreeTable::random(&mut rng, r);
        let b: Vec<usize> = (0..r).collect();
        let rebuilt = moment_from_cumulants(|s: &[usize]| cumulant_of(&t, s), &b).unwrap();
        prop_assert_eq!(t.moment(&b).unwrap(), rebuilt);
    }

    #[test]
    fn independence_kills_mixed_cumulants(seed in any::<u64>(), left in 1usize..=3, right in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = FiniteSpace::random(&mut rng, 3, 2);
        let c = FiniteSpace::random(&mut rng, 3, 2);
        let joint = FiniteSpace::product(&a, &c);
        let mut b: Vec<usize> = (0..left).map(|_| rng.gen_range(0..2)).collect();
        b.extend((0..right).map(|_| rng.gen_range(2..4)));
        prop_assert_eq!(cumulant_of(&joint, &b).unwrap(), Rational::zero());
    }

    #[test]
    fn leonov_shiryaev_dual_path(seed in any::<u64>(), sizes in prop::collection::vec(1usize..=2, 1..=3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = FiniteSpace::random(&mut rng, 4, 3);
        let blocks: Vec<Vec<usize>> = sizes
            .iter()
            .map(|&k| (0..k).map(|_| rng.gen_range(0..3)).collect())
            .collect();
        let pc = leonov_shiryaev(&space, &blocks).unwrap();
        prop_assert_eq!(pc.direct, pc.expansion);
    }

    #[test]
    fn leonov_shiryaev_free_tables(seed in any::<u64>(), cut in prop::collection::vec(any::<bool>(), 4)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = FreeTable::random(&mut rng, 5);
        let mut blocks = vec![vec![0usize]];
        for (i, &c) in cut.iter().enumerate() {
            if c {
                blocks.push(vec![i + 1]);
            } else {
                blocks.last_mut().unwrap().push(i + 1);
            }
        }
        let pc = leonov_shiryaev(&t, &blocks).unwrap();
        prop_assert_eq!(pc.direct, pc.expansion);
    }

    #[test]
    fn boolean_reconstruction(seed in any::<u64>(), r in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = FreeTable::random(&mut rng, r);
        let b: Vec<usize> = (0..r).collect();
        let e = boolean_to_classical_coeffs(r).unwrap();
        prop_assert_eq!(e.classical_of(&t, &b).unwrap(), cumulant_of(&t, &b).unwrap());
        let via_sub = e.classical(|pos| boolean_cumulant(&t, &sub(&b, pos))).unwrap();
        prop_assert_eq!(via_sub, cumulant_of(&t, &b).unwrap());
    }

    #[test]
    fn product_of_tables(u in rational_table(3), v in rational_table(3), delta in 1u64..8) {
        let uv = u.product(&v).unwrap();
        prop_assert_eq!(uv.p_delta(delta).unwrap(), u.p_delta(delta).unwrap() * v.p_delta(delta).unwrap());
    }

    #[test]
    fn ratio_is_product_of_p(u in rational_table(4), delta in 0u64..16) {
        let mut prod = Rational::one();
        let mut s = delta;
        while s != 0 {
            let p = u.p_delta(s).unwrap();
            if s.count_ones() % 2 == 0 {
                prod *= p;
            } else {
                prod /= p;
            }
            s = (s - 1) & delta;
        }
        prop_assert_eq!(u.get(delta) / u.get(0), prod);
    }

    #[test]
    fn kappa_delta_scale_free(u in rational_table(3), c in 1i64..20, delta in 1u64..8) {
        let scaled = MomentTable::new(3, u.entries().iter().map(|x| x * rat(c, 1)).collect()).unwrap();
        prop_assert_eq!(u.kappa_delta(delta).unwrap(), scaled.kappa_delta(delta).unwrap());
    }
}
