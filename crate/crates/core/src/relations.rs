//! Fac-relations: `(u, v)` pairs with `u` and `u - v n` both smooth, and the
//! shared deduplicating store that counts them.

use std::collections::HashSet;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::numth::{self, ExponentVector, FactorBase};
use crate::{Error, Result};

/// `u = prod_{e_j >= 0} p_j^{e_j}`, `v = prod_{e_j < 0} p_j^{-e_j}`.
pub fn extract_pair(e: &[i64], primes: &[u64]) -> Result<(BigInt, BigInt)> {
    if e.len() > primes.len() {
        return Err(Error::DimensionMismatch {
            expected: primes.len(),
            got: e.len(),
        });
    }
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    for (&ej, &p) in e.iter().zip(primes) {
        let power = num_traits::pow(BigInt::from(p), ej.unsigned_abs() as usize);
        if ej >= 0 {
            u *= power;
        } else {
            v *= power;
        }
    }
    Ok((u, v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacRelation {
    pub u: BigInt,
    pub v: BigInt,
    /// `u - v n`.
    pub s: BigInt,
    pub u_exps: ExponentVector,
    pub s_exps: ExponentVector,
}

impl FacRelation {
    /// The relation as `u^2 = u * s (mod n)`.
    pub fn to_square(&self) -> SquareRelation {
        SquareRelation {
            root: self.u.clone(),
            exps: ExponentVector {
                sign_bit: self.s_exps.sign_bit ^ self.u_exps.sign_bit,
                exps: self
                    .u_exps
                    .exps
                    .iter()
                    .zip(&self.s_exps.exps)
                    .map(|(a, b)| a + b)
                    .collect(),
            },
        }
    }
}

/// `root^2 = (-1)^sign prod p_j^{e_j} (mod n)`: the common shape of every
/// relation the GF(2) stage consumes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareRelation {
    pub root: BigInt,
    pub exps: ExponentVector,
}

impl SquareRelation {
    /// Builds a relation from `root` and the value `root^2 mod n` is
    /// congruent to, factored over `base`.
    pub fn new(root: BigInt, value: &BigInt, base: &FactorBase) -> Result<Option<Self>> {
        Ok(numth::smooth_factor(value, base)?.map(|exps| Self { root, exps }))
    }
}

/// Outcome of screening one `(u, v)` candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Screening {
    Smooth(FacRelation),
    NotSmooth,
    /// `u` shares the given proper factor with `n`.
    SharedFactor(BigInt),
}

pub fn test_candidate(u: &BigInt, v: &BigInt, n: &BigInt, base: &FactorBase) -> Result<Screening> {
    if !u.is_positive() || !v.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "candidate pair ({u}, {v}) must be positive"
        )));
    }
    let g = numth::gcd(u, n);
    if !g.is_one() {
        if &g != n {
            return Ok(Screening::SharedFactor(g));
        }
        // n | u: a smooth u means n itself splits over the base
        return Ok(base
            .primes()
            .iter()
            .map(|&p| BigInt::from(p))
            .find(|p| (n % p).is_zero() && p != n)
            .map_or(Screening::NotSmooth, Screening::SharedFactor));
    }
    let s = u - v * n;
    let Some(u_exps) = numth::smooth_factor(u, base)? else {
        return Ok(Screening::NotSmooth);
    };
    let Some(s_exps) = numth::smooth_factor(&s, base)? else {
        return Ok(Screening::NotSmooth);
    };
    Ok(Screening::Smooth(FacRelation {
        u: u.clone(),
        v: v.clone(),
        s,
        u_exps,
        s_exps,
    }))
}

/// Counters reported per experiment.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreStats {
    pub lattices_tested: u64,
    pub candidates_tested: u64,
    pub total_found: u64,
    pub unique_count: u64,
}

impl StoreStats {
    /// `100 * unique / lattices`; `None` before any lattice was tested.
    pub fn unique_per_lattice_pct(&self) -> Option<f64> {
        (self.lattices_tested > 0)
            .then(|| 100.0 * self.unique_count as f64 / self.lattices_tested as f64)
    }
}

#[derive(Debug, Default)]
struct Inner {
    relations: Vec<FacRelation>,
    keys: HashSet<(BigInt, BigInt)>,
    stats: StoreStats,
}

/// Relations deduplicated by `(u, v)` in first-insertion order. All methods
/// take `&self` and are linearizable.
#[derive(Debug, Default)]
pub struct RelationStore {
    inner: Mutex<Inner>,
}

impl RelationStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts the relation and keeps it if its key is new; returns whether it was.
    pub fn insert(&self, relation: FacRelation) -> bool {
        let mut inner = self.lock();
        inner.stats.total_found += 1;
        let key = (relation.u.clone(), relation.v.clone());
        if !inner.keys.insert(key) {
            return false;
        }
        inner.stats.unique_count += 1;
        inner.relations.push(relation);
        true
    }

    pub fn record_lattice(&self, candidates: u64) {
        let mut inner = self.lock();
        inner.stats.lattices_tested += 1;
        inner.stats.candidates_tested += candidates;
    }

    pub fn stats(&self) -> StoreStats {
        self.lock().stats
    }

    pub fn unique_count(&self) -> usize {
        self.lock().relations.len()
    }

    pub fn relations(&self) -> Vec<FacRelation> {
        self.lock().relations.clone()
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, Inner> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn pairs_from_coordinates() {
        let p = [2, 3, 5];
        assert_eq!(extract_pair(&[0, 4, 2], &p).unwrap(), (big(2025), big(1)));
        assert_eq!(extract_pair(&[3, 2, 2], &p).unwrap(), (big(1800), big(1)));
        assert_eq!(extract_pair(&[-1, 0, 0], &p).unwrap(), (big(1), big(2)));
        assert!(extract_pair(&[1, 1, 1, 1], &p).is_err());
    }

    #[test]
    fn screening_table_pairs() {
        let base = FactorBase::first(15).unwrap();
        let n = big(1961);
        match test_candidate(&big(1944), &big(1), &n, &base).unwrap() {
            Screening::Smooth(r) => {
                assert_eq!(r.s, big(-17));
                assert_eq!(r.s_exps.reconstruct(&base), big(-17));
                assert_eq!(r.u_exps.reconstruct(&base), big(1944));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            test_candidate(&big(3645), &big(2), &n, &base).unwrap(),
            Screening::NotSmooth
        );
    }

    #[test]
    fn unit_s_is_smooth() {
        let base = FactorBase::first(5).unwrap();
        // 2^4 * 3 * 5 = 240 = 239 + 1
        match test_candidate(&big(240), &big(1), &big(239), &base).unwrap() {
            Screening::Smooth(r) => assert_eq!(r.s, big(1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shared_factors_short_circuit() {
        let base = FactorBase::first(15).unwrap();
        assert_eq!(
            test_candidate(&big(37 * 4), &big(1), &big(1961), &base).unwrap(),
            Screening::SharedFactor(big(37))
        );
        // u = n: s = 0, factor found over the base
        assert_eq!(
            test_candidate(&big(1961), &big(1), &big(1961), &base).unwrap(),
            Screening::SharedFactor(big(37))
        );
    }

    #[test]
    fn store_deduplicates() {
        let base = FactorBase::first(15).unwrap();
        let Screening::Smooth(r) = test_candidate(&big(2025), &big(1), &big(1961), &base).unwrap()
        else {
            panic!()
        };
        let store = RelationStore::new();
        assert_eq!(store.stats().unique_per_lattice_pct(), None);
        assert!(store.insert(r.clone()));
        assert!(!store.insert(r));
        store.record_lattice(3);
        let stats = store.stats();
        assert_eq!((stats.total_found, stats.unique_count), (2, 1));
        assert_eq!(stats.unique_per_lattice_pct(), Some(100.0));
    }

    #[test]
    fn square_form_combines_exponents() {
        let base = FactorBase::first(15).unwrap();
        let Screening::Smooth(r) = test_candidate(&big(1944), &big(1), &big(1961), &base).unwrap()
        else {
            panic!()
        };
        let sq = r.to_square();
        assert_eq!(sq.exps.reconstruct(&base), big(1944 * -17));
    }
}
