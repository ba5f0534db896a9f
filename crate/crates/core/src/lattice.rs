//! Prime lattice construction, exact LLL reduction and Babai's nearest-plane
//! algorithm.
//!
//! All reduction arithmetic is exact. The Gram-Schmidt data is kept in the
//! integral form of Cohen's Algorithm 2.6.7: `d[i]` is the Gram determinant
//! of the first `i` basis vectors and `lambda[i][j] = d[j + 1] * mu[i][j]`,
//! both integers, so no rational normalization happens in the inner loops.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::numth;
use crate::{Error, Result};

/// Dense integer matrix stored column by column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    columns: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn from_columns(columns: Vec<Vec<i64>>) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: bad.len(),
            });
        }
        Ok(Self { rows, columns })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        let columns = (0..cols)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        Ok(Self {
            rows: rows.len(),
            columns,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[i64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<i64>] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.columns[j][i]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.columns.iter().map(|c| c[i]).collect())
            .collect()
    }

    /// `B * e`.
    pub fn mul_vec(&self, e: &[i64]) -> Result<Vec<i64>> {
        if e.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                got: e.len(),
            });
        }
        let mut out = vec![0i64; self.rows];
        for (col, &x) in self.columns.iter().zip(e) {
            if x == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(col) {
                *o = b
                    .checked_mul(x)
                    .and_then(|v| o.checked_add(v))
                    .ok_or_else(|| Error::Inconsistent("i64 overflow in B*e".into()))?;
            }
        }
        Ok(out)
    }
}

/// A permutation `sigma` of `{0, .., m-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    pub fn random(m: usize, rng: &mut impl Rng) -> Self {
        let mut images: Vec<usize> = (0..m).collect();
        images.shuffle(rng);
        Self(images)
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(format!(
                    "{images:?} is not a permutation"
                )));
            }
        }
        Ok(Self(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, j: usize) -> usize {
        self.0[j]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }
}

/// `max(1, round(ln p))`, the diagonal weight of prime `p`.
pub fn diagonal_weight(p: u64) -> i64 {
    ((p as f64).ln().round() as i64).max(1)
}

/// `ceil(10^c * ln_value)`.
fn scaled_log(ln_value: f64, c: f64) -> Result<i64> {
    let scaled = (10f64.powf(c) * ln_value).ceil();
    if !scaled.is_finite() || scaled.abs() > 2f64.powi(53) {
        return Err(Error::InvalidArgument(format!(
            "precision c = {c} makes lattice entries exceed 2^53"
        )));
    }
    Ok(scaled as i64)
}

/// The `(m+1) x m` prime lattice `B_{m,c}` together with its target vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeLattice {
    pub basis: IntMatrix,
    pub m: usize,
    pub c: f64,
    pub permutation: Permutation,
    pub n: BigInt,
    pub target: Vec<i64>,
    pub primes: Vec<u64>,
}

/// Diagonal `f(j) = max(1, round(ln p_sigma(j)))`; bottom row
/// `ceil(10^c ln p_j)` in natural prime order; target `(0, .., 0, ceil(10^c ln n))`.
pub fn build_prime_lattice(
    n: &BigInt,
    m: usize,
    c: f64,
    sigma: &Permutation,
) -> Result<PrimeLattice> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "lattice dimension must be at least 2, got {m}"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!("precision c must be positive, got {c}")));
    }
    if sigma.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: sigma.len(),
        });
    }
    let primes = numth::gen_primes(m);
    let largest = primes[m - 1];
    if n <= &BigInt::from(largest) {
        return Err(Error::TargetTooSmall {
            n: n.clone(),
            largest,
        });
    }
    let mut columns = Vec::with_capacity(m);
    for j in 0..m {
        let mut col = vec![0i64; m + 1];
        col[j] = diagonal_weight(primes[sigma.apply(j)]);
        col[m] = scaled_log((primes[j] as f64).ln(), c)?;
        columns.push(col);
    }
    let mut target = vec![0i64; m + 1];
    target[m] = scaled_log(numth::ln(n), c)?;
    Ok(PrimeLattice {
        basis: IntMatrix::from_columns(columns)?,
        m,
        c,
        permutation: sigma.clone(),
        n: n.clone(),
        target,
        primes,
    })
}

/// Integral Gram-Schmidt data of a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralGso {
    /// `d[0] = 1`, `d[i]` = Gram determinant of the first `i` vectors.
    pub d: Vec<BigInt>,
    /// `lambda[i][j] = d[j+1] * mu[i][j]` for `j < i`.
    pub lambda: Vec<Vec<BigInt>>,
}

impl IntegralGso {
    fn compute(columns: &[Vec<i64>]) -> Result<Self> {
        let m = columns.len();
        let mut d = Vec::with_capacity(m + 1);
        d.push(BigInt::from(1));
        let mut lambda: Vec<Vec<BigInt>> = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = Vec::with_capacity(i);
            for j in 0..=i {
                let mut u = BigInt::from(dot(&columns[i], &columns[j]));
                for k in 0..j {
                    let ljk = if j < i { &lambda[j][k] } else { &row[k] };
                    u = (&d[k + 1] * u - &row[k] * ljk) / &d[k];
                }
                if j < i {
                    row.push(u);
                } else {
                    if !u.is_positive() {
                        return Err(Error::RankDeficient);
                    }
                    d.push(u);
                }
            }
            lambda.push(row);
        }
        Ok(Self { d, lambda })
    }

    /// `lambda[.][j]` for an arbitrary integer vector against this basis.
    fn project(&self, columns: &[Vec<i64>], v: &[i64]) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = Vec::with_capacity(columns.len());
        for j in 0..columns.len() {
            let mut u = BigInt::from(dot(v, &columns[j]));
            for k in 0..j {
                u = (&self.d[k + 1] * u - &out[k] * &self.lambda[j][k]) / &self.d[k];
            }
            out.push(u);
        }
        out
    }

    pub fn mu(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.lambda[i][j].clone(), self.d[j + 1].clone())
    }

    /// `|g_i|^2 = d[i+1] / d[i]`.
    pub fn squared_norm(&self, i: usize) -> BigRational {
        BigRational::new(self.d[i + 1].clone(), self.d[i].clone())
    }
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Nearest integer to `num / den` (`den > 0`), halves away from zero.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    if num.is_negative() {
        -((-num * &two + den).div_floor(&(den * &two)))
    } else {
        (num * &two + den).div_floor(&(den * two))
    }
}

fn to_i64(x: &BigInt) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Inconsistent(format!("{x} does not fit in i64")))
}

fn axpy(target: &mut [i64], q: i64, source: &[i64]) -> Result<()> {
    for (t, &s) in target.iter_mut().zip(source) {
        *t = s
            .checked_mul(q)
            .and_then(|v| t.checked_sub(v))
            .ok_or_else(|| Error::Inconsistent("i64 overflow during reduction".into()))?;
    }
    Ok(())
}

/// LLL output: `raw` in reduction order, `basis` sorted by increasing norm
/// (stable), and the integral Gram-Schmidt data of `basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedBasis {
    pub raw: IntMatrix,
    pub basis: IntMatrix,
    pub delta: f64,
    pub gso: IntegralGso,
}

impl ReducedBasis {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Unnormalized Gram-Schmidt vectors of the sorted basis, as columns.
    pub fn gram_schmidt(&self) -> Vec<Vec<BigRational>> {
        let m = self.dim();
        let mut g: Vec<Vec<BigRational>> = Vec::with_capacity(m);
        for i in 0..m {
            let mut v: Vec<BigRational> = self
                .basis
                .column(i)
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect();
            for (j, gj) in g.iter().enumerate() {
                let mu = self.gso.mu(i, j);
                for (vi, gji) in v.iter_mut().zip(gj) {
                    *vi -= &mu * gji;
                }
            }
            g.push(v);
        }
        g
    }
}

/// Exact LLL with parameter `delta` in `(1/4, 1)`, approximated by a decimal
/// fraction with nine digits.
pub fn lll_reduce(lattice: &PrimeLattice, delta: f64) -> Result<ReducedBasis> {
    lll_reduce_matrix(&lattice.basis, delta)
}

pub fn lll_reduce_matrix(basis: &IntMatrix, delta: f64) -> Result<ReducedBasis> {
    if !(delta > 0.25 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "LLL parameter must lie in (1/4, 1), got {delta}"
        )));
    }
    let scale = 1_000_000_000i64;
    let delta_num = BigInt::from((delta * scale as f64).round() as i64);
    let delta_den = BigInt::from(scale);

    let mut b: Vec<Vec<i64>> = basis.columns().to_vec();
    let m = b.len();
    let IntegralGso {
        mut d,
        mut lambda,
    } = IntegralGso::compute(&b)?;

    let mut k = 1;
    while k < m {
        for l in (0..k).rev() {
            let q = round_div(&lambda[k][l], &d[l + 1]);
            if q.is_zero() {
                continue;
            }
            let qi = to_i64(&q)?;
            let (head, tail) = b.split_at_mut(k);
            axpy(&mut tail[0], qi, &head[l])?;
            lambda[k][l] -= &q * &d[l + 1];
            for i in 0..l {
                let delta_l = &q * &lambda[l][i];
                lambda[k][i] -= delta_l;
            }
        }
        let lam = &lambda[k][k - 1];
        let lhs = &delta_den * &d[k + 1] * &d[k - 1];
        let rhs = &delta_num * &d[k] * &d[k] - &delta_den * lam * lam;
        if lhs < rhs {
            swap(&mut b, &mut d, &mut lambda, k);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }

    let raw = IntMatrix::from_columns(b.clone())?;
    let mut sorted = b;
    sorted.sort_by_key(|c| dot(c, c));
    let gso = IntegralGso::compute(&sorted)?;
    Ok(ReducedBasis {
        raw,
        basis: IntMatrix::from_columns(sorted)?,
        delta,
        gso,
    })
}

/// Exchanges `b[k-1]` and `b[k]`, updating the integral GSO in place.
fn swap(b: &mut [Vec<i64>], d: &mut [BigInt], lambda: &mut [Vec<BigInt>], k: usize) {
    b.swap(k, k - 1);
    for j in 0..k - 1 {
        let tmp = std::mem::take(&mut lambda[k][j]);
        lambda[k][j] = std::mem::replace(&mut lambda[k - 1][j], tmp);
    }
    let lam = lambda[k][k - 1].clone();
    let new_d = (&d[k - 1] * &d[k + 1] + &lam * &lam) / &d[k];
    for i in k + 1..b.len() {
        let t = lambda[i][k].clone();
        lambda[i][k] = (&d[k + 1] * &lambda[i][k - 1] - &lam * &t) / &d[k];
        lambda[i][k - 1] = (&new_d * t + &lam * &lambda[i][k]) / &d[k + 1];
    }
    d[k] = new_d;
}

/// Babai output over the sorted reduced basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BabaiResult {
    /// The lattice vector found, `sum_j coeffs[j] * b*_j`.
    pub b_op: Vec<i64>,
    pub coeffs: Vec<i64>,
    pub mus: Vec<BigRational>,
    /// `sign(mu_j - c_j)`, with `+1` when the difference is zero.
    pub kappa: Vec<i8>,
}

pub fn babai_nearest_plane(reduced: &ReducedBasis, t: &[i64]) -> Result<BabaiResult> {
    let basis = reduced.basis.columns();
    let m = basis.len();
    if t.len() != reduced.basis.rows() {
        return Err(Error::DimensionMismatch {
            expected: reduced.basis.rows(),
            got: t.len(),
        });
    }
    let gso = &reduced.gso;
    if gso.d.iter().any(|x| !x.is_positive()) {
        return Err(Error::RankDeficient);
    }
    let mut residual = gso.project(basis, t);
    let mut coeffs = vec![0i64; m];
    let mut mus = vec![BigRational::zero(); m];
    let mut kappa = vec![1i8; m];
    let mut b_op = vec![0i64; t.len()];
    for j in (0..m).rev() {
        let mu = BigRational::new(residual[j].clone(), gso.d[j + 1].clone());
        let c = round_div(&residual[j], &gso.d[j + 1]);
        residual[j] -= &c * &gso.d[j + 1];
        for k in 0..j {
            let shift = &c * &gso.lambda[j][k];
            residual[k] -= shift;
        }
        // residual[j] / d[j+1] is now mu_j - c_j
        kappa[j] = if residual[j].is_negative() { -1 } else { 1 };
        let ci = to_i64(&c)?;
        axpy(&mut b_op, -ci, &basis[j])?;
        coeffs[j] = ci;
        mus[j] = mu;
    }
    Ok(BabaiResult {
        b_op,
        coeffs,
        mus,
        kappa,
    })
}

/// `b_op + sum_j kappa_j x_j b*_j` where bit `j` of `mask` is `x_j`.
pub fn refine(basis: &IntMatrix, b_op: &[i64], kappa: &[i8], mask: u64) -> Result<Vec<i64>> {
    let mut out = b_op.to_vec();
    for (j, &k) in kappa.iter().enumerate() {
        if mask >> j & 1 == 1 {
            axpy(&mut out, -i64::from(k), basis.column(j))?;
        }
    }
    Ok(out)
}

/// Integer `e` with `B e = b`, solved on the diagonal rows and checked
/// against the bottom row.
pub fn lattice_coords(lattice: &PrimeLattice, b: &[i64]) -> Result<Vec<i64>> {
    let m = lattice.m;
    if b.len() != m + 1 {
        return Err(Error::DimensionMismatch {
            expected: m + 1,
            got: b.len(),
        });
    }
    let mut e = Vec::with_capacity(m);
    for j in 0..m {
        let diag = lattice.basis.get(j, j);
        if b[j] % diag != 0 {
            return Err(Error::NotALatticeVector(format!(
                "coordinate {j}: {} is not a multiple of {diag}",
                b[j]
            )));
        }
        e.push(b[j] / diag);
    }
    let bottom: i128 = (0..m)
        .map(|j| e[j] as i128 * lattice.basis.get(m, j) as i128)
        .sum();
    if bottom != b[m] as i128 {
        return Err(Error::NotALatticeVector(format!(
            "bottom row gives {bottom}, vector has {}",
            b[m]
        )));
    }
    Ok(e)
}

/// Squared Euclidean distance.
pub fn distance_sq(a: &[i64], b: &[i64]) -> i128 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let diff = x as i128 - y as i128;
            diff * diff
        })
        .sum()
}
