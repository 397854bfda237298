//! Small dense linear algebra: exact elimination, characteristic
//! polynomials and polynomial roots.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Solves `rows · x = rhs` for a possibly overdetermined system that must
/// have full column rank and be consistent.
pub fn solve_consistent<T: Scalar>(mut rows: Vec<Vec<T>>, mut rhs: Vec<T>) -> Result<Vec<T>> {
    let n = rows.first().map_or(0, Vec::len);
    let m = rows.len();
    if rhs.len() != m || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Input("ragged linear system".into()));
    }
    let tol = 1e-10;
    let mut pivot_row = 0;
    for col in 0..n {
        let pick = if T::EXACT {
            (pivot_row..m).find(|&i| !rows[i][col].is_zero())
        } else {
            (pivot_row..m)
                .filter(|&i| rows[i][col].to_f64().abs() > tol)
                .max_by(|&a, &b| {
                    rows[a][col]
                        .to_f64()
                        .abs()
                        .partial_cmp(&rows[b][col].to_f64().abs())
                        .unwrap()
                })
        };
        let Some(p) = pick else {
            return Err(Error::Domain(alloc::format!("rank deficient at column {col}")));
        };
        rows.swap(pivot_row, p);
        rhs.swap(pivot_row, p);
        let inv = T::one() / rows[pivot_row][col].clone();
        for j in col..n {
            rows[pivot_row][j] = rows[pivot_row][j].clone() * inv.clone();
        }
        rhs[pivot_row] = rhs[pivot_row].clone() * inv;
        for i in 0..m {
            if i == pivot_row || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for j in col..n {
                let v = rows[pivot_row][j].clone();
                rows[i][j] = rows[i][j].clone() - f.clone() * v;
            }
            rhs[i] = rhs[i].clone() - f * rhs[pivot_row].clone();
        }
        pivot_row += 1;
    }
    for i in n..m {
        if !rhs[i].is_negligible(&T::one(), tol) {
            return Err(Error::Domain("inconsistent linear system".into()));
        }
    }
    rhs.truncate(n);
    Ok(rhs)
}

/// Probability vector `x` with `x · q = 0`, where `q` is a generator or
/// `P - I`.
pub fn stationary_vector<T: Scalar>(q: &[Vec<T>]) -> Result<Vec<T>> {
    let n = q.len();
    let mut rows = Vec::with_capacity(n + 1);
    let mut rhs = Vec::with_capacity(n + 1);
    rows.push(vec![T::one(); n]);
    rhs.push(T::one());
    for j in 0..n {
        rows.push((0..n).map(|i| q[i][j].clone()).collect());
        rhs.push(T::zero());
    }
    solve_consistent(rows, rhs)
}

pub fn mat_mul<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![T::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = out[i][j].clone() + a[i][l].clone() * b[l][j].clone();
            }
        }
    }
    out
}

pub fn vec_mat<T: Scalar>(v: &[T], a: &[Vec<T>]) -> Vec<T> {
    let m = a.first().map_or(0, Vec::len);
    let mut out = vec![T::zero(); m];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for j in 0..m {
            out[j] = out[j].clone() + vi.clone() * a[i][j].clone();
        }
    }
    out
}

pub fn identity<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

/// Coefficients `c[0..=n]` of det(xI − A), lowest degree first, computed
/// exactly by the Faddeev–LeVerrier recursion.
pub fn charpoly(a: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Scalar::from_i64(1);
    let mut m: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for i in 0..n {
            next[i][i] = next[i][i].clone() + c[n - k + 1].clone();
        }
        m = next;
        let am = mat_mul(a, &m);
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc + am[i][i].clone());
        c[n - k] = -trace / <Rational as Scalar>::from_i64(k as i64);
    }
    c
}

/// Divides a polynomial (lowest degree first) by `(x - root)`, returning
/// the quotient and the remainder.
pub fn deflate(p: &[Rational], root: &Rational) -> (Vec<Rational>, Rational) {
    let n = p.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (0..=n).rev() {
        let v = p[k].clone() + carry.clone() * root.clone();
        if k == 0 {
            return (q, v);
        }
        q[k - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

/// Complex roots of a polynomial with `f64` coefficients (lowest degree
/// first) by the Aberth–Ehrlich iteration.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let c: Vec<f64> = c.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(c[n], 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for k in (0..n).rev() {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        (p, dp)
    };
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * core::f64::consts::PI * (k as f64 + 0.25) / n as f64;
            Complex64::from_polar(radius * 0.5, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += Complex64::new(1.0, 0.0) / (z[i] - z[j]);
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn solves_overdetermined() {
        let rows = vec![
            vec![rat(1, 1), rat(1, 1)],
            vec![rat(1, 1), rat(-1, 1)],
            vec![rat(2, 1), rat(0, 1)],
        ];
        let x = solve_consistent(rows, vec![rat(3, 1), rat(1, 1), rat(4, 1)]).unwrap();
        assert_eq!(x, vec![rat(2, 1), rat(1, 1)]);
        let bad = vec![vec![rat(1, 1)], vec![rat(1, 1)]];
        assert!(solve_consistent(bad, vec![rat(1, 1), rat(2, 1)]).is_err());
    }

    #[test]
    fn two_state_stationary() {
        let q = vec![vec![rat(-3, 10), rat(3, 10)], vec![rat(2, 10), rat(-2, 10)]];
        assert_eq!(stationary_vector(&q).unwrap(), vec![rat(2, 5), rat(3, 5)]);
    }

    #[test]
    fn charpoly_and_roots() {
        let a = vec![vec![rat(7, 10), rat(3, 10)], vec![rat(2, 10), rat(8, 10)]];
        let c = charpoly(&a);
        // x^2 - 1.5x + 0.5 = (x-1)(x-0.5)
        assert_eq!(c, vec![rat(1, 2), rat(-3, 2), rat(1, 1)]);
        let (q, rem) = deflate(&c, &rat(1, 1));
        assert_eq!(rem, rat(0, 1));
        assert_eq!(q, vec![rat(-1, 2), rat(1, 1)]);
        let roots = poly_roots(&[2.0, -3.0, 1.0]);
        let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] - 1.0).abs() < 1e-12 && (re[1] - 2.0).abs() < 1e-12);
        let cyc = poly_roots(&[-1.0, 0.0, 0.0, 1.0]);
        assert!(cyc.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }
}
