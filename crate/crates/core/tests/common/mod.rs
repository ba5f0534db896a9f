//! Independent reference implementations used as test oracles. None of these
//! call into the library's algorithms; they are slow and simple on purpose.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn dot_rat(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Classical Gram-Schmidt over the rationals. Returns `(b*, mu)`.
pub fn gram_schmidt(columns: &[Vec<i64>]) -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>) {
    let k = columns.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(k);
    let mut mu = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        let b: Vec<BigRational> = columns[i].iter().map(|&x| rat(x)).collect();
        let mut v = b.clone();
        for j in 0..i {
            let denom = dot_rat(&star[j], &star[j]);
            mu[i][j] = dot_rat(&b, &star[j]) / denom;
            for (vi, sj) in v.iter_mut().zip(&star[j]) {
                *vi -= &mu[i][j] * sj;
            }
        }
        mu[i][i] = BigRational::one();
        star.push(v);
    }
    (star, mu)
}

/// Whether `columns` are size reduced and satisfy the Lovasz condition for
/// `delta = num / den`.
pub fn is_lll_reduced(columns: &[Vec<i64>], num: i64, den: i64) -> bool {
    let (star, mu) = gram_schmidt(columns);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for i in 0..columns.len() {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
    }
    let delta = BigRational::new(BigInt::from(num), BigInt::from(den));
    for k in 1..columns.len() {
        let lhs = dot_rat(&star[k], &star[k]);
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * dot_rat(&star[k - 1], &star[k - 1]);
        if lhs < rhs {
            return false;
        }
    }
    true
}

/// Solves `A x = y` for full-column-rank `A` (given by columns) via the
/// normal equations over the rationals. `None` if `y` is not in the span.
pub fn solve_in_span(columns: &[Vec<i64>], y: &[i64]) -> Option<Vec<BigRational>> {
    let k = columns.len();
    let a: Vec<Vec<BigRational>> = columns
        .iter()
        .map(|c| c.iter().map(|&x| rat(x)).collect())
        .collect();
    let yr: Vec<BigRational> = y.iter().map(|&x| rat(x)).collect();
    let mut g: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k).map(|j| dot_rat(&a[i], &a[j])).collect();
            row.push(dot_rat(&a[i], &yr));
            row
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !g[r][col].is_zero())?;
        g.swap(col, pivot);
        let p = g[col][col].clone();
        for x in g[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..k {
            if r != col && !g[r][col].is_zero() {
                let f = g[r][col].clone();
                for c in 0..=k {
                    let sub = &f * &g[col][c];
                    g[r][c] -= sub;
                }
            }
        }
    }
    let x: Vec<BigRational> = g.iter().map(|row| row[k].clone()).collect();
    let back: Vec<BigRational> = (0..y.len())
        .map(|i| (0..k).map(|j| &x[j] * &a[j][i]).sum())
        .collect();
    (back == yr).then_some(x)
}

fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut d = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            d = -d;
        }
        d *= &m[col][col];
        for r in col + 1..n {
            let f = &m[r][col] / &m[col][col];
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    d
}

/// Whether two full-column-rank bases generate the same lattice: the change
/// of basis must be an integral matrix of determinant +-1.
pub fn same_lattice(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut u = Vec::with_capacity(b.len());
    for col in b {
        match solve_in_span(a, col) {
            Some(x) if x.iter().all(|v| v.is_integer()) => u.push(x),
            _ => return false,
        }
    }
    det(u).abs() == BigRational::one()
}

pub fn mat_vec(columns: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    let rows = columns.first().map_or(0, Vec::len);
    let mut out = vec![0i64; rows];
    for (c, &xi) in columns.iter().zip(x) {
        for (o, &v) in out.iter_mut().zip(c) {
            *o += v * xi;
        }
    }
    out
}

pub fn dist_sq(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| ((x - y) as i128).pow(2)).sum()
}

/// Exact CVP by enumeration: every integer combination inside the box that
/// contains the ball of radius `sqrt(bound)` around the real least-squares
/// point. `bound` must be at least the true optimum (a Babai distance works).
pub fn cvp_enumerate(columns: &[Vec<i64>], t: &[i64], bound: i128) -> i128 {
    let k = columns.len();
    let x_real: Vec<f64> = solve_real(columns, t);
    // Row i of the pseudo-inverse bounds |x_i - x_real_i| by its norm times the radius.
    let pinv = pseudo_inverse(columns);
    let radius = (bound as f64).sqrt() + 1e-6;
    let ranges: Vec<(i64, i64)> = (0..k)
        .map(|i| {
            let w = pinv[i].iter().map(|v| v * v).sum::<f64>().sqrt() * radius + 1.0;
            ((x_real[i] - w).floor() as i64, (x_real[i] + w).ceil() as i64)
        })
        .collect();
    let mut best = bound;
    let mut x: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let d = dist_sq(&mat_vec(columns, &x), t);
        best = best.min(d);
        let mut i = 0;
        loop {
            if i == k {
                return best;
            }
            if x[i] < ranges[i].1 {
                x[i] += 1;
                break;
            }
            x[i] = ranges[i].0;
            i += 1;
        }
    }
}

fn gram_f64(columns: &[Vec<i64>]) -> Vec<Vec<f64>> {
    columns
        .iter()
        .map(|a| {
            columns
                .iter()
                .map(|b| a.iter().zip(b).map(|(&x, &y)| x as f64 * y as f64).sum())
                .collect()
        })
        .collect()
}

fn invert_f64(mut m: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col];
        for c in 0..n {
            m[col][c] /= p;
            inv[col][c] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                for c in 0..n {
                    m[r][c] -= f * m[col][c];
                    inv[r][c] -= f * inv[col][c];
                }
            }
        }
    }
    inv
}

/// `(A^T A)^{-1} A^T`, one row per basis column.
fn pseudo_inverse(columns: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let ginv = invert_f64(gram_f64(columns));
    let rows = columns[0].len();
    ginv.iter()
        .map(|g| {
            (0..rows)
                .map(|r| g.iter().zip(columns).map(|(gi, c)| gi * c[r] as f64).sum())
                .collect()
        })
        .collect()
}

fn solve_real(columns: &[Vec<i64>], t: &[i64]) -> Vec<f64> {
    pseudo_inverse(columns)
        .iter()
        .map(|row| row.iter().zip(t).map(|(p, &v)| p * v as f64).sum())
        .collect()
}

/// All `z` with `E z = 0` over GF(2), by enumeration.
pub fn brute_nullspace(rows: &[Vec<bool>], cols: usize) -> Vec<u64> {
    (0u64..1 << cols)
        .filter(|&z| {
            rows.iter().all(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, &b)| b && z >> j & 1 == 1)
                    .count()
                    % 2
                    == 0
            })
        })
        .collect()
}

pub fn pack(z: &[bool]) -> u64 {
    z.iter()
        .enumerate()
        .fold(0u64, |acc, (j, &b)| acc | (u64::from(b) << j))
}

/// Rank of a set of packed GF(2) vectors.
pub fn gf2_rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Smallest prime factor by trial division.
pub fn smallest_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && smallest_factor(n) == n
}

/// Euclid by repeated subtraction.
pub fn gcd_sub(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    while b != 0 {
        if a > b {
            a -= b;
        } else {
            b -= a;
        }
    }
    a
}

pub fn first_primes(count: usize) -> Vec<u64> {
    (2u64..).filter(|&p| is_prime(p)).take(count).collect()
}

/// Exponents of `x` over `primes`, or `None` if `x` is not smooth.
pub fn factor_over(mut x: u64, primes: &[u64]) -> Option<Vec<u32>> {
    if x == 0 {
        return None;
    }
    let mut exps = vec![0u32; primes.len()];
    for (e, &p) in exps.iter_mut().zip(primes) {
        while x % p == 0 {
            x /= p;
            *e += 1;
        }
    }
    (x == 1).then_some(exps)
}

pub fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

pub fn to_u64(x: &BigInt) -> u64 {
    x.to_u64().expect("fits in u64")
}

/// `rho` on `[1, 2]` in closed form.
pub fn rho_closed(a: f64) -> f64 {
    if a <= 1.0 {
        1.0
    } else {
        1.0 - a.ln()
    }
}

/// Composite Simpson integral of `f` on `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `rho` on `[2, 3]`: `1 - ln a + int_2^a ln(t - 1) / t dt`.
pub fn rho_on_2_3(a: f64) -> f64 {
    1.0 - a.ln() + simpson(|t| (t - 1.0).ln() / t, 2.0, a, 2000)
}
