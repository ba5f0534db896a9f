//! Number theory over arbitrary-precision integers: prime generation, factor
//! bases, smoothness by trial division, primality and semiprime generation.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Returns the first `count` primes in increasing order.
pub fn gen_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    // Rosser's bound p_k < k (ln k + ln ln k) for k >= 6.
    let mut bound = if count < 6 {
        15
    } else {
        let k = count as f64;
        (k * (k.ln() + k.ln().ln())).ceil() as usize + 3
    };
    loop {
        let primes = sieve(bound);
        if primes.len() >= count {
            return primes.into_iter().take(count).collect();
        }
        bound *= 2;
    }
}

fn sieve(bound: usize) -> Vec<u64> {
    let mut composite = vec![false; bound + 1];
    let mut primes = Vec::new();
    for i in 2..=bound {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= bound {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// The first `M` primes, with position 0 of every exponent vector reserved
/// for the sign `p_0 = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBase {
    primes: Vec<u64>,
    includes_sign: bool,
}

impl FactorBase {
    pub fn first(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument(
                "a factor base needs at least one prime".into(),
            ));
        }
        Ok(Self {
            primes: gen_primes(count),
            includes_sign: true,
        })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn includes_sign(&self) -> bool {
        self.includes_sign
    }

    pub fn largest(&self) -> u64 {
        *self.primes.last().expect("factor base is never empty")
    }

    /// Base restricted to its first `count` primes.
    pub fn prefix(&self, count: usize) -> Result<Self> {
        if count == 0 || count > self.primes.len() {
            return Err(Error::InvalidArgument(format!(
                "prefix of length {count} from a base of {}",
                self.primes.len()
            )));
        }
        Ok(Self {
            primes: self.primes[..count].to_vec(),
            includes_sign: self.includes_sign,
        })
    }
}

/// Exponents of `(-1, p_1, ..., p_M)` for one integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVector {
    pub sign_bit: u8,
    pub exps: Vec<u32>,
}

impl ExponentVector {
    pub fn zero(len: usize) -> Self {
        Self {
            sign_bit: 0,
            exps: vec![0; len],
        }
    }

    /// `(-1)^sign_bit * prod p_j^exps_j`.
    pub fn reconstruct(&self, base: &FactorBase) -> BigInt {
        let mut acc = BigInt::one();
        for (&p, &e) in base.primes().iter().zip(&self.exps) {
            if e > 0 {
                acc *= num_traits::pow(BigInt::from(p), e as usize);
            }
        }
        if self.sign_bit == 1 {
            -acc
        } else {
            acc
        }
    }
}

/// Trial-divides `s` over `base`; `Some` iff `|s|` is `p_M`-smooth.
pub fn smooth_factor(s: &BigInt, base: &FactorBase) -> Result<Option<ExponentVector>> {
    if s.is_zero() {
        return Err(Error::ZeroCandidate);
    }
    let sign_bit = u8::from(s.sign() == Sign::Minus);
    let magnitude = s.magnitude();
    let exps = match magnitude.to_u128() {
        Some(small) => trial_divide_u128(small, base.primes()),
        None => trial_divide_big(magnitude.clone(), base.primes()),
    };
    Ok(exps.map(|exps| ExponentVector { sign_bit, exps }))
}

fn trial_divide_u128(mut x: u128, primes: &[u64]) -> Option<Vec<u32>> {
    let mut exps = vec![0u32; primes.len()];
    for (slot, &p) in exps.iter_mut().zip(primes) {
        if x == 1 {
            break;
        }
        let p = p as u128;
        while x % p == 0 {
            x /= p;
            *slot += 1;
        }
    }
    (x == 1).then_some(exps)
}

fn trial_divide_big(mut x: BigUint, primes: &[u64]) -> Option<Vec<u32>> {
    let mut exps = vec![0u32; primes.len()];
    for (slot, &p) in exps.iter_mut().zip(primes) {
        if let Some(small) = x.to_u128() {
            // finish on the fast path once the cofactor fits
            let rest = trial_divide_u128(small, primes)?;
            for (e, r) in exps.iter_mut().zip(rest) {
                *e += r;
            }
            return Some(exps);
        }
        loop {
            let (q, r) = x.div_rem(&BigUint::from(p));
            if !r.is_zero() {
                break;
            }
            x = q;
            *slot += 1;
        }
    }
    x.is_one().then_some(exps)
}

/// Non-negative greatest common divisor.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

const SMALL_PRIMES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller-Rabin. Deterministic below 3.3e24 (first 13 prime bases), otherwise
/// 40 extra pseudo-random bases seeded from `n` itself.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let n = n.magnitude();
    if n < &BigUint::from(2u8) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == &BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let twos = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> twos;

    let witness = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..twos {
            x = x.modpow(&BigUint::from(2u8), n);
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };

    if SMALL_PRIMES.iter().any(|&a| witness(&BigUint::from(a))) {
        return false;
    }
    let deterministic_bound: BigUint = "3317044064679887385961981".parse().unwrap();
    if n < &deterministic_bound {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n.iter_u64_digits().next().unwrap_or(0));
    for _ in 0..40 {
        let a = random_below(&mut rng, &(n - 3u8)) + 2u8;
        if witness(&a) {
            return false;
        }
    }
    true
}

fn random_below(rng: &mut impl Rng, bound: &BigUint) -> BigUint {
    let bits = bound.bits();
    loop {
        let candidate = random_bits(rng, bits);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Uniform integer in `[0, 2^bits)`.
fn random_bits(rng: &mut impl Rng, bits: u64) -> BigUint {
    let words = bits.div_ceil(32) as usize;
    let mut digits: Vec<u32> = (0..words).map(|_| rng.gen()).collect();
    let excess = (words as u64) * 32 - bits;
    if let Some(top) = digits.last_mut() {
        *top &= u32::MAX >> excess;
    }
    BigUint::from_slice(&digits)
}

/// A random prime with exactly `bits` bits.
pub fn random_prime(bits: u32, rng: &mut impl Rng) -> Result<BigInt> {
    if bits < 2 {
        return Err(Error::InvalidArgument(format!("no prime has {bits} bits")));
    }
    loop {
        let mut x = random_bits(rng, u64::from(bits));
        x.set_bit(u64::from(bits) - 1, true);
        if bits > 2 {
            x.set_bit(0, true);
        }
        let x = BigInt::from(x);
        if is_probable_prime(&x) {
            return Ok(x);
        }
    }
}

/// `n = p * q` with distinct primes of `ceil(bits/2)` and `floor(bits/2)`
/// bits, redrawn until `n` has exactly `bits` bits. Deterministic per seed.
pub fn random_semiprime(bits: u32, rng_seed: u64) -> Result<BigInt> {
    random_semiprime_with_factors(bits, rng_seed).map(|(n, _, _)| n)
}

pub fn random_semiprime_with_factors(bits: u32, rng_seed: u64) -> Result<(BigInt, BigInt, BigInt)> {
    if bits < 6 {
        return Err(Error::InvalidArgument(format!(
            "semiprimes need at least 6 bits, got {bits}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let p_bits = bits.div_ceil(2);
    let q_bits = bits - p_bits;
    loop {
        let p = random_prime(p_bits, &mut rng)?;
        let q = random_prime(q_bits, &mut rng)?;
        if p == q {
            continue;
        }
        let n = &p * &q;
        if n.bits() == u64::from(bits) {
            let (small, large) = if p < q { (p, q) } else { (q, p) };
            return Ok((n, small, large));
        }
    }
}

/// `Some((b, k))` with `k >= 2` maximal such that `n = b^k`.
pub fn perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    if n <= &BigInt::one() {
        return None;
    }
    let max_exp = n.bits() as u32;
    let mut best = None;
    for k in 2..=max_exp {
        let root = n.nth_root(k);
        if root <= BigInt::one() {
            break;
        }
        if num_traits::pow(root.clone(), k as usize) == *n {
            best = Some((root, k));
        }
    }
    best
}

/// Natural logarithm of a positive integer, accurate to f64 precision.
pub fn ln(n: &BigInt) -> f64 {
    assert!(n.is_positive(), "ln of a non-positive integer");
    let bits = n.bits();
    if bits <= 1000 {
        if let Some(f) = n.to_f64() {
            return f.ln();
        }
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit prefix");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
