//! The rounding Hamiltonian: for `x in {0,1}^m`,
//! `H(x) = || t - b_op - sum_j kappa_j x_j b*_j ||^2`, written both as an
//! integer QUBO and in Pauli-Z form `const + sum h_j Z_j + sum J_jk Z_j Z_k`
//! where `Z_j = 1 - 2 x_j` is the Pauli eigenvalue.
//!
//! Bitstrings display with the highest qubit index leftmost, so `"100"` on
//! three qubits sets qubit 2.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::lattice::IntMatrix;
use crate::{Error, Result};

pub type Rational = Ratio<i128>;

/// Largest register `exact_minimize` will enumerate.
pub const ENUMERATION_LIMIT: usize = 25;

/// A computational basis state; bit `j` of `value` is qubit `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    value: u64,
    len: usize,
}

impl Bitstring {
    pub fn new(value: u64, len: usize) -> Result<Self> {
        if len > 63 || (len < 64 && value >> len != 0) {
            return Err(Error::InvalidBitstring(format!("{value:#b} on {len} qubits")));
        }
        Ok(Self { value, len })
    }

    pub fn zeros(len: usize) -> Self {
        Self { value: 0, len }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, qubit: usize) -> bool {
        self.value >> qubit & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in (0..self.len).rev() {
            f.write_str(if self.bit(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let len = s.len();
        if len > 63 {
            return Err(Error::InvalidBitstring(s.into()));
        }
        let mut value = 0u64;
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => value |= 1 << (len - 1 - k),
                _ => return Err(Error::InvalidBitstring(s.into())),
            }
        }
        Ok(Self { value, len })
    }
}

/// `offset + sum_j linear_j x_j + sum_{j<k} quad_jk x_j x_k` over integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qubo {
    pub offset: i128,
    pub linear: Vec<i128>,
    /// Symmetric, zero diagonal; the `x_j x_k` coefficient is `quad[j][k]`.
    pub quad: Vec<Vec<i128>>,
}

impl Qubo {
    pub fn evaluate(&self, mask: u64) -> i128 {
        let m = self.linear.len();
        let mut e = self.offset;
        for j in (0..m).filter(|&j| mask >> j & 1 == 1) {
            e += self.linear[j];
            for k in (j + 1..m).filter(|&k| mask >> k & 1 == 1) {
                e += self.quad[j][k];
            }
        }
        e
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundingHamiltonian {
    pub m: usize,
    /// Symmetric `Z_j Z_k` coefficients with zero diagonal.
    pub couplings: Vec<Vec<Rational>>,
    pub fields: Vec<Rational>,
    pub constant: Rational,
    pub qubo: Qubo,
    /// `t - b_op`.
    pub residual: Vec<i64>,
    /// Column `j` is `kappa_j b*_j`.
    pub directions: Vec<Vec<i64>>,
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub fn build_hamiltonian(
    t: &[i64],
    b_op: &[i64],
    kappa: &[i8],
    basis: &IntMatrix,
) -> Result<RoundingHamiltonian> {
    let m = basis.cols();
    if t.len() != basis.rows() || b_op.len() != basis.rows() {
        return Err(Error::DimensionMismatch {
            expected: basis.rows(),
            got: if t.len() != basis.rows() { t.len() } else { b_op.len() },
        });
    }
    if kappa.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: kappa.len(),
        });
    }
    let residual: Vec<i64> = t.iter().zip(b_op).map(|(a, b)| a - b).collect();
    let directions: Vec<Vec<i64>> = (0..m)
        .map(|j| basis.column(j).iter().map(|&x| x * i64::from(kappa[j])).collect())
        .collect();

    // || r - sum_j x_j a_j ||^2 with x_j^2 = x_j
    let offset = dot(&residual, &residual);
    let linear: Vec<i128> = directions
        .iter()
        .map(|a| dot(a, a) - 2 * dot(&residual, a))
        .collect();
    let mut quad = vec![vec![0i128; m]; m];
    for j in 0..m {
        for k in j + 1..m {
            let v = 2 * dot(&directions[j], &directions[k]);
            quad[j][k] = v;
            quad[k][j] = v;
        }
    }

    // x_j = (1 - Z_j) / 2
    let r = |n: i128, d: i128| Rational::new(n, d);
    let mut constant = Rational::from_integer(offset);
    let mut fields = vec![Rational::zero(); m];
    let mut couplings = vec![vec![Rational::zero(); m]; m];
    for j in 0..m {
        constant += r(linear[j], 2);
        fields[j] -= r(linear[j], 2);
        for k in j + 1..m {
            let q = r(quad[j][k], 4);
            constant += q;
            fields[j] -= q;
            fields[k] -= q;
            couplings[j][k] = q;
            couplings[k][j] = q;
        }
    }

    Ok(RoundingHamiltonian {
        m,
        couplings,
        fields,
        constant,
        qubo: Qubo {
            offset,
            linear,
            quad,
        },
        residual,
        directions,
    })
}

/// A Pauli-Z monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PauliTerm {
    ZZ(usize, usize),
    Z(usize),
}

impl RoundingHamiltonian {
    /// Non-zero terms: couplings in lexicographic order, then fields.
    pub fn pauli_terms(&self) -> Vec<(PauliTerm, Rational)> {
        let mut terms = Vec::new();
        for j in 0..self.m {
            for k in j + 1..self.m {
                if !self.couplings[j][k].is_zero() {
                    terms.push((PauliTerm::ZZ(j, k), self.couplings[j][k]));
                }
            }
        }
        for j in 0..self.m {
            if !self.fields[j].is_zero() {
                terms.push((PauliTerm::Z(j), self.fields[j]));
            }
        }
        terms
    }

    /// Integer energy of the state whose bit `j` is `x_j`.
    pub fn energy_of_mask(&self, mask: u64) -> i128 {
        self.qubo.evaluate(mask)
    }

    /// The refined vector's offset from the target: `t - b^{|x>}`.
    pub fn refined_residual(&self, mask: u64) -> Vec<i64> {
        let mut r = self.residual.clone();
        for (j, a) in self.directions.iter().enumerate() {
            if mask >> j & 1 == 1 {
                for (ri, ai) in r.iter_mut().zip(a) {
                    *ri -= ai;
                }
            }
        }
        r
    }
}

impl fmt::Display for RoundingHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut emit = |f: &mut fmt::Formatter<'_>, coef: Rational, label: String| -> fmt::Result {
            let sign = if coef.is_negative() { "-" } else { "+" };
            if first {
                if coef.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = coef.abs();
            if label.is_empty() {
                write!(f, "{mag}")
            } else if mag == Rational::from_integer(1) {
                f.write_str(&label)
            } else {
                write!(f, "{mag} {label}")
            }
        };
        for (term, coef) in self.pauli_terms() {
            let label = match term {
                PauliTerm::ZZ(j, k) => format!("Z{j}Z{k}"),
                PauliTerm::Z(j) => format!("Z{j}"),
            };
            emit(f, coef, label)?;
        }
        emit(f, self.constant, String::new())
    }
}

/// Exact eigenvalue of `H` on basis state `x`, from the Pauli form.
pub fn energy(h: &RoundingHamiltonian, x: &Bitstring) -> Result<Rational> {
    if x.len() != h.m {
        return Err(Error::DimensionMismatch {
            expected: h.m,
            got: x.len(),
        });
    }
    let z = |j: usize| if x.bit(j) { -1i128 } else { 1 };
    let mut e = h.constant;
    for j in 0..h.m {
        e += h.fields[j] * z(j);
        for k in j + 1..h.m {
            e += h.couplings[j][k] * (z(j) * z(k));
        }
    }
    Ok(e)
}

/// Visits every mask in Gray-code order with its energy.
fn for_each_energy(h: &RoundingHamiltonian, mut visit: impl FnMut(u64, i128)) {
    let m = h.m;
    let q = &h.qubo;
    // gain[j]: energy change when x_j goes 0 -> 1 given the other bits
    let mut gain: Vec<i128> = q.linear.clone();
    let mut mask = 0u64;
    let mut e = q.offset;
    visit(mask, e);
    for step in 1u64..(1u64 << m) {
        let j = step.trailing_zeros() as usize;
        let setting = mask >> j & 1 == 0;
        if setting {
            e += gain[j];
        } else {
            e -= gain[j];
        }
        mask ^= 1 << j;
        let sign = if setting { 1 } else { -1 };
        for k in 0..m {
            if k != j {
                gain[k] += sign * q.quad[j][k];
            }
        }
        visit(mask, e);
    }
}

fn check_capacity(m: usize) -> Result<()> {
    if m > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            what: "exact enumeration",
            limit: ENUMERATION_LIMIT,
            requested: m,
        });
    }
    Ok(())
}

/// All states with energy strictly below `ceiling`, ascending by energy then
/// by bitstring value.
pub fn exact_minimize(h: &RoundingHamiltonian, ceiling: Rational) -> Result<Vec<(Bitstring, Rational)>> {
    check_capacity(h.m)?;
    let mut out = Vec::new();
    for_each_energy(h, |mask, e| {
        if Rational::from_integer(e) < ceiling {
            out.push((mask, e));
        }
    });
    out.sort_unstable_by_key(|&(mask, e)| (e, mask));
    Ok(out
        .into_iter()
        .map(|(mask, e)| (Bitstring { value: mask, len: h.m }, Rational::from_integer(e)))
        .collect())
}

/// Minimum-energy state, smallest bitstring value among ties.
pub fn ground_state(h: &RoundingHamiltonian) -> Result<(Bitstring, i128)> {
    check_capacity(h.m)?;
    let mut best = (0u64, h.qubo.offset);
    for_each_energy(h, |mask, e| {
        if e < best.1 || (e == best.1 && mask < best.0) {
            best = (mask, e);
        }
    });
    Ok((Bitstring { value: best.0, len: h.m }, best.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_h() -> RoundingHamiltonian {
        let basis =
            IntMatrix::from_columns(vec![vec![1, -2, 2, 3], vec![-4, 1, 2, -2], vec![-3, 2, 0, 4]])
                .unwrap();
        build_hamiltonian(&[0, 0, 0, 240], &[0, 4, 4, 242], &[-1, -1, -1], &basis).unwrap()
    }

    #[test]
    fn three_qubit_coefficients() {
        let h = paper_h();
        let r = |n, d| Rational::new(n, d);
        assert_eq!(h.couplings[0][1], r(-4, 1));
        assert_eq!(h.couplings[0][2], r(5, 2));
        assert_eq!(h.couplings[1][2], r(3, 1));
        assert_eq!(h.fields, vec![r(-3, 2), r(-7, 2), r(-4, 1)]);
        assert_eq!(h.constant, r(87, 2));
        assert_eq!(
            h.to_string(),
            "-4 Z0Z1 + 5/2 Z0Z2 + 3 Z1Z2 - 3/2 Z0 - 7/2 Z1 - 4 Z2 + 87/2"
        );
    }

    #[test]
    fn table_energies() {
        let h = paper_h();
        for (s, e) in [("000", 36), ("100", 33), ("011", 35), ("001", 42)] {
            let x: Bitstring = s.parse().unwrap();
            assert_eq!(energy(&h, &x).unwrap(), Rational::from_integer(e), "{s}");
            assert_eq!(h.energy_of_mask(x.value()), e);
        }
        assert!(energy(&h, &"00".parse().unwrap()).is_err());
    }

    #[test]
    fn uniform_average_is_the_constant() {
        let h = paper_h();
        let total: i128 = (0..8).map(|mask| h.energy_of_mask(mask)).sum();
        assert_eq!(Rational::new(total, 8), h.constant);
    }

    #[test]
    fn minimize_below_the_babai_state() {
        let h = paper_h();
        let got = exact_minimize(&h, Rational::from_integer(36)).unwrap();
        let got: Vec<(String, Rational)> = got.into_iter().map(|(b, e)| (b.to_string(), e)).collect();
        assert_eq!(
            got,
            vec![
                ("100".to_string(), Rational::from_integer(33)),
                ("011".to_string(), Rational::from_integer(35)),
            ]
        );
        assert!(exact_minimize(&h, Rational::from_integer(-1)).unwrap().is_empty());
        assert_eq!(ground_state(&h).unwrap().0.to_string(), "100");
    }

    #[test]
    fn vanishing_column_has_no_field() {
        let basis = IntMatrix::from_columns(vec![vec![1, 0, 3], vec![0, 0, 0]]).unwrap();
        let h = build_hamiltonian(&[0, 0, 9], &[1, 0, 3], &[1, -1], &basis).unwrap();
        assert!(h.fields[1].is_zero());
        assert!(h.couplings[0][1].is_zero());
    }

    #[test]
    fn capacity_guard() {
        let cols: Vec<Vec<i64>> = (0..26).map(|j| (0..27).map(|i| i64::from(i == j)).collect()).collect();
        let basis = IntMatrix::from_columns(cols).unwrap();
        let h = build_hamiltonian(&[0; 27], &[0; 27], &[1; 26], &basis).unwrap();
        assert!(matches!(
            exact_minimize(&h, Rational::from_integer(1)),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn bitstring_parse_and_display() {
        let x: Bitstring = "100".parse().unwrap();
        assert_eq!(x.value(), 4);
        assert!(x.bit(2));
        assert_eq!(x.to_string(), "100");
        assert!("10a".parse::<Bitstring>().is_err());
        assert!(Bitstring::new(8, 3).is_err());
    }
}
