//! GF(2) processing of relations into congruences of squares, and the
//! end-to-end relation collection loop.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::heuristics::{self, Heuristic, LatticeInstance};
use crate::lattice::{self, Permutation};
use crate::numth::{self, FactorBase};
use crate::record::{ExperimentRecord, Outcome};
use crate::relations::{self, FacRelation, RelationStore, Screening, SquareRelation};
use crate::{Error, Result};

/// Dense GF(2) matrix with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Self {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        Ok(m)
    }

    /// Row 0 is the sign; row `1 + i` is the `i`-th prime.
    pub fn from_relations(relations: &[SquareRelation]) -> Result<Self> {
        let primes = relations.first().map_or(0, |r| r.exps.exps.len());
        let mut m = Self::zeros(primes + 1, relations.len());
        for (j, r) in relations.iter().enumerate() {
            if r.exps.exps.len() != primes {
                return Err(Error::DimensionMismatch {
                    expected: primes,
                    got: r.exps.exps.len(),
                });
            }
            m.set(0, j, r.exps.sign_bit & 1 == 1);
            for (i, &e) in r.exps.exps.iter().enumerate() {
                m.set(i + 1, j, e % 2 == 1);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn xor_rows(&mut self, target: usize, source: usize) {
        for w in 0..self.words {
            let s = self.data[source * self.words + w];
            self.data[target * self.words + w] ^= s;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for w in 0..self.words {
            self.data.swap(a * self.words + w, b * self.words + w);
        }
    }

    /// `E z` over GF(2).
    pub fn mul_vec(&self, z: &[bool]) -> Result<Vec<bool>> {
        if z.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: z.len(),
            });
        }
        let packed = pack(z, self.words);
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(&packed)
                    .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                    & 1
                    == 1
            })
            .collect())
    }

    /// Reduced row echelon form and its pivot columns.
    fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.swap_rows(r, p);
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

fn pack(z: &[bool], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for (j, _) in z.iter().enumerate().filter(|(_, &b)| b) {
        out[j / 64] |= 1 << (j % 64);
    }
    out
}

pub fn build_exponent_matrix(relations: &[FacRelation]) -> Result<BitMatrix> {
    let squares: Vec<SquareRelation> = relations.iter().map(FacRelation::to_square).collect();
    BitMatrix::from_relations(&squares)
}

/// A basis of `{z : E z = 0}`, one vector per free column.
pub fn nullspace(e: &BitMatrix) -> Vec<Vec<bool>> {
    let (r, pivots) = e.rref();
    let mut is_pivot = vec![false; e.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..e.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut z = vec![false; e.cols];
            z[f] = true;
            for (row, &p) in pivots.iter().enumerate() {
                if r.get(row, f) {
                    z[p] = true;
                }
            }
            z
        })
        .collect()
}

/// `x^2 = y^2 (mod n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    pub x: BigInt,
    pub y: BigInt,
    pub n: BigInt,
}

/// Combines the relations selected by `z` into a congruence of squares.
pub fn assemble_congruence(
    relations: &[SquareRelation],
    z: &[bool],
    base: &FactorBase,
    n: &BigInt,
) -> Result<Congruence> {
    if z.len() != relations.len() {
        return Err(Error::DimensionMismatch {
            expected: relations.len(),
            got: z.len(),
        });
    }
    if !z.iter().any(|&b| b) {
        return Err(Error::InvalidArgument("the zero vector selects no relations".into()));
    }
    let mut x = BigInt::one();
    let mut sign = 0u32;
    let mut sum = vec![0u64; base.len()];
    for (r, _) in relations.iter().zip(z).filter(|(_, &b)| b) {
        if r.exps.exps.len() != base.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                got: r.exps.exps.len(),
            });
        }
        x = (x * &r.root).mod_floor(n);
        sign += u32::from(r.exps.sign_bit);
        for (s, &e) in sum.iter_mut().zip(&r.exps.exps) {
            *s += u64::from(e);
        }
    }
    if sign % 2 == 1 || sum.iter().any(|s| s % 2 == 1) {
        return Err(Error::Inconsistent(
            "selected relations do not multiply to a square".into(),
        ));
    }
    let mut y = BigInt::one();
    for (&p, &s) in base.primes().iter().zip(&sum) {
        if s > 0 {
            y = (y * BigInt::from(p).modpow(&BigInt::from(s / 2), n)).mod_floor(n);
        }
    }
    let c = Congruence { x, y, n: n.clone() };
    if !is_congruence(&c) {
        return Err(Error::Inconsistent("x^2 and y^2 differ modulo n".into()));
    }
    Ok(c)
}

fn is_congruence(c: &Congruence) -> bool {
    (&c.x * &c.x - &c.y * &c.y).mod_floor(&c.n).is_zero()
}

/// `(gcd(x - y, n), gcd(x + y, n))` when `x != +-y (mod n)`.
pub fn extract_factor(c: &Congruence) -> Option<(BigInt, BigInt)> {
    let n = &c.n;
    let diff = (&c.x - &c.y).mod_floor(n);
    let sum = (&c.x + &c.y).mod_floor(n);
    if diff.is_zero() || sum.is_zero() {
        return None;
    }
    let f1 = numth::gcd(&diff, n);
    let f2 = numth::gcd(&sum, n);
    let proper = |f: &BigInt| f > &BigInt::one() && f < n;
    (proper(&f1) && proper(&f2)).then_some((f1, f2))
}

/// Tries every nullspace basis vector, then `extra` random combinations.
pub fn search_congruences(
    relations: &[SquareRelation],
    base: &FactorBase,
    n: &BigInt,
    extra: usize,
    rng: &mut impl Rng,
) -> Result<Option<(Congruence, BigInt)>> {
    if relations.is_empty() {
        return Ok(None);
    }
    let e = BitMatrix::from_relations(relations)?;
    let basis = nullspace(&e);
    if basis.is_empty() {
        return Ok(None);
    }
    let try_vector = |z: &[bool]| -> Result<Option<(Congruence, BigInt)>> {
        if !z.iter().any(|&b| b) {
            return Ok(None);
        }
        let c = assemble_congruence(relations, z, base, n)?;
        Ok(extract_factor(&c).map(|(f, _)| (c, f)))
    };
    for z in &basis {
        if let Some(found) = try_vector(z)? {
            return Ok(Some(found));
        }
    }
    if basis.len() > 1 {
        for _ in 0..extra {
            let mut z = vec![false; relations.len()];
            for v in &basis {
                if rng.gen::<bool>() {
                    for (a, &b) in z.iter_mut().zip(v) {
                        *a ^= b;
                    }
                }
            }
            if let Some(found) = try_vector(&z)? {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

/// When relation collection hands the relations to the GF(2) stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopRule {
    /// After every new unique relation, as soon as the exponent matrix has a
    /// nontrivial nullspace.
    Nullspace,
    /// Only once there are at least `M + 2` unique relations.
    FullRank,
}

/// Lattice dimension `m`, precision `c` and extended factor base size `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub m: usize,
    pub c: f64,
    pub big_m: usize,
}

impl Params {
    /// `m = ceil(3/2 ln n / ln ln n)`, `c = m / 4`, `M = m^2` from `ln n`.
    pub fn from_ln(ln_n: f64) -> Result<Self> {
        if ln_n <= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "default parameters need ln n > 1, got {ln_n}"
            )));
        }
        let m = (1.5 * ln_n / ln_n.ln()).ceil().max(2.0) as usize;
        Ok(Self {
            m,
            c: m as f64 / 4.0,
            big_m: m * m,
        })
    }

    /// Defaults for `n`.
    pub fn for_n(n: &BigInt) -> Result<Self> {
        Self::from_ln(numth::ln(n))
    }

    /// Defaults for a `bits`-bit input, evaluated at `n = 2^(bits-1)` so the
    /// whole bit length shares one lattice dimension.
    pub fn for_bits(bits: u32) -> Result<Self> {
        if bits < 3 {
            return Err(Error::InvalidArgument(format!("bit length {bits} is too small")));
        }
        Self::from_ln(f64::from(bits - 1) * std::f64::consts::LN_2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorConfig {
    pub heuristic: Heuristic,
    pub m: Option<usize>,
    pub c: Option<f64>,
    pub big_m: Option<usize>,
    pub delta: f64,
    pub seed: u64,
    pub workers: usize,
    pub budget_lattices: u64,
    pub stop: StopRule,
}

pub const DEFAULT_BUDGET_LATTICES: u64 = 1_000_000;
pub const DEFAULT_DELTA: f64 = 0.99;
const RANDOM_COMBINATIONS: usize = 32;

impl Default for FactorConfig {
    fn default() -> Self {
        Self {
            heuristic: Heuristic::Babai,
            m: None,
            c: None,
            big_m: None,
            delta: DEFAULT_DELTA,
            seed: 0,
            workers: 1,
            budget_lattices: DEFAULT_BUDGET_LATTICES,
            stop: StopRule::Nullspace,
        }
    }
}

impl FactorConfig {
    pub fn with_heuristic(heuristic: Heuristic) -> Self {
        Self {
            heuristic,
            ..Self::default()
        }
    }

    /// Fills unset parameters with the defaults for `n`. Defaults are shrunk
    /// so that `p_M < n` and `m <= M`; explicit values that violate this are
    /// rejected.
    pub fn resolve(&self, n: &BigInt) -> Result<Params> {
        let defaults = Params::for_n(n)?;
        let m = self.m.unwrap_or(defaults.m);
        let c = self.c.unwrap_or(m as f64 / 4.0);
        let below_n = |count: usize| {
            numth::gen_primes(count)
                .last()
                .is_some_and(|&p| BigInt::from(p) < *n)
        };
        let big_m = match self.big_m {
            Some(big_m) => {
                if !below_n(big_m) {
                    return Err(Error::InvalidArgument(format!(
                        "the {big_m}-th prime is not below n = {n}"
                    )));
                }
                big_m
            }
            None => {
                let mut big_m = m * m;
                while big_m > 1 && !below_n(big_m) {
                    big_m -= 1;
                }
                big_m
            }
        };
        let m = if self.m.is_none() { m.min(big_m) } else { m };
        if m < 2 || m > big_m {
            return Err(Error::InvalidArgument(format!(
                "need 2 <= m <= M, got m = {m}, M = {big_m}"
            )));
        }
        if !(c > 0.0) {
            return Err(Error::InvalidArgument(format!("precision c must be positive, got {c}")));
        }
        Ok(Params { m, c, big_m })
    }
}

/// Rejects inputs the lattice method cannot or need not handle.
pub fn preliminary_checks(n: &BigInt) -> Result<()> {
    if n < &BigInt::from(2) {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 2")));
    }
    if n.is_even() {
        if n == &BigInt::from(2) {
            return Err(Error::PrimeInput { n: n.clone() });
        }
        return Err(Error::EvenInput { n: n.clone() });
    }
    if numth::is_probable_prime(n) {
        return Err(Error::PrimeInput { n: n.clone() });
    }
    if let Some((base, exponent)) = numth::perfect_power(n) {
        if numth::is_probable_prime(&base) {
            return Err(Error::PrimePower {
                n: n.clone(),
                base,
                exponent,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Congruence,
    SharedFactor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorReport {
    pub n: BigInt,
    pub params: Params,
    /// `(p, n / p)` with `p <= n / p`.
    pub factors: Option<(BigInt, BigInt)>,
    pub method: Option<Method>,
    pub congruence: Option<Congruence>,
    pub relations: Vec<FacRelation>,
    pub record: ExperimentRecord,
}

struct LatticeOutcome {
    candidates: u64,
    hits: Vec<Screening>,
}

fn lattice_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn process_lattice(
    n: &BigInt,
    params: &Params,
    base: &FactorBase,
    cfg: &FactorConfig,
    index: u64,
) -> Result<LatticeOutcome> {
    let mut rng = lattice_rng(cfg.seed, index);
    let sigma = Permutation::random(params.m, &mut rng);
    let lat = lattice::build_prime_lattice(n, params.m, params.c, &sigma)?;
    let primes = lat.primes.clone();
    let inst = LatticeInstance::new(lat, cfg.delta)?;
    let set = heuristics::run(&cfg.heuristic, &inst, index, &mut rng)?;
    let mut hits = Vec::new();
    for cand in &set.candidates {
        let (u, v) = relations::extract_pair(&cand.e, &primes)?;
        match relations::test_candidate(&u, &v, n, base)? {
            Screening::NotSmooth => {}
            hit => hits.push(hit),
        }
    }
    Ok(LatticeOutcome {
        candidates: set.len() as u64,
        hits,
    })
}

fn ordered(f: BigInt, n: &BigInt) -> (BigInt, BigInt) {
    let g = n / &f;
    if f <= g {
        (f, g)
    } else {
        (g, f)
    }
}

/// Collects relations until a factor appears or the lattice budget runs out.
/// A budget stop is a normal report with [`Outcome::BudgetExhausted`].
pub fn collect(n: &BigInt, cfg: &FactorConfig) -> Result<FactorReport> {
    let started = Instant::now();
    preliminary_checks(n)?;
    let params = cfg.resolve(n)?;
    let base = FactorBase::first(params.big_m)?;
    let store = RelationStore::new();
    let workers = cfg.workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let batch = (4 * workers) as u64;

    let mut found: Option<(BigInt, Method, Option<Congruence>)> = None;
    let mut next = 0u64;
    'collect: while next < cfg.budget_lattices {
        let end = (next + batch).min(cfg.budget_lattices);
        let outcomes: Vec<Result<LatticeOutcome>> = pool.install(|| {
            (next..end)
                .into_par_iter()
                .map(|i| process_lattice(n, &params, &base, cfg, i))
                .collect()
        });
        for (index, outcome) in (next..end).zip(outcomes) {
            let outcome = outcome?;
            store.record_lattice(outcome.candidates);
            for hit in outcome.hits {
                match hit {
                    Screening::SharedFactor(f) => {
                        found = Some((f, Method::SharedFactor, None));
                        break 'collect;
                    }
                    Screening::Smooth(rel) => {
                        if !store.insert(rel) {
                            continue;
                        }
                        let unique = store.unique_count();
                        if cfg.stop == StopRule::FullRank && unique < params.big_m + 2 {
                            continue;
                        }
                        let squares: Vec<SquareRelation> =
                            store.relations().iter().map(FacRelation::to_square).collect();
                        let mut rng = lattice_rng(cfg.seed ^ 0x9e37_79b9_7f4a_7c15, index);
                        if let Some((c, f)) =
                            search_congruences(&squares, &base, n, RANDOM_COMBINATIONS, &mut rng)?
                        {
                            found = Some((f, Method::Congruence, Some(c)));
                            break 'collect;
                        }
                    }
                    Screening::NotSmooth => {}
                }
            }
        }
        next = end;
    }

    let stats = store.stats();
    let factors = found.as_ref().map(|(f, _, _)| ordered(f.clone(), n));
    let record = ExperimentRecord {
        n: n.to_string(),
        n_bits: n.bits(),
        lattice_dim: params.m,
        factor_base_size: params.big_m,
        lattices_tested: stats.lattices_tested,
        candidates_extracted: stats.candidates_tested,
        total_sr_pairs: stats.total_found,
        unique_sr_pairs: stats.unique_count,
        unique_per_lattice_pct: stats.unique_per_lattice_pct(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        heuristic: cfg.heuristic.name().to_string(),
        seed: cfg.seed,
        outcome: match &factors {
            Some((p, q)) => Outcome::Factored {
                factors: [p.to_string(), q.to_string()],
            },
            None => Outcome::BudgetExhausted,
        },
    };
    let (method, congruence) = match found {
        Some((_, method, c)) => (Some(method), c),
        None => (None, None),
    };
    Ok(FactorReport {
        n: n.clone(),
        params,
        factors,
        method,
        congruence,
        relations: store.relations(),
        record,
    })
}

/// Like [`collect`], but budget exhaustion is an error.
pub fn factor(n: &BigInt, cfg: &FactorConfig) -> Result<FactorReport> {
    let report = collect(n, cfg)?;
    if report.factors.is_none() {
        return Err(Error::BudgetExhausted {
            lattices: report.record.lattices_tested,
            unique: report.record.unique_sr_pairs,
        });
    }
    Ok(report)
}

/// Checks that `n = p q` with both factors proper.
pub fn is_proper_split(n: &BigInt, p: &BigInt, q: &BigInt) -> bool {
    p.is_positive() && q.is_positive() && p > &BigInt::one() && q > &BigInt::one() && &(p * q) == n
}
