//! Exact statevector simulation of QAOA and multi-angle QAOA on a
//! [`RoundingHamiltonian`].
//!
//! One layer applies the cost gates `exp(-i a_g c_g P_g)` for every Pauli
//! term `c_g P_g` of the Hamiltonian (all `Z_j Z_k` pairs, then all `Z_j`),
//! followed by the mixer `exp(-i b_j X_j)` on every qubit. Standard QAOA ties
//! all cost angles of a layer to one `gamma` and all mixer angles to one
//! `beta`; the multi-angle ansatz gives every gate its own parameter.
//!
//! Parameter layout per layer: standard `[gamma, beta]`; multi-angle
//! `[a_01, a_02, .., a_(m-2)(m-1), a_0, .., a_(m-1), b_0, .., b_(m-1)]`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ising::{Bitstring, PauliTerm, RoundingHamiltonian};
use crate::{Error, Result};

pub const QUBIT_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzConfig {
    pub layers: usize,
    pub multi_angle: bool,
    /// Starting point; drawn uniformly from `[-pi, pi]` with `rng_seed` when absent.
    pub init_params: Option<Vec<f64>>,
    pub rng_seed: u64,
}

impl AnsatzConfig {
    pub fn standard(layers: usize) -> Self {
        Self {
            layers,
            multi_angle: false,
            init_params: None,
            rng_seed: 0,
        }
    }

    pub fn multi_angle(layers: usize) -> Self {
        Self {
            multi_angle: true,
            ..Self::standard(layers)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_init(mut self, params: Vec<f64>) -> Self {
        self.init_params = Some(params);
        self
    }

    pub fn params_per_layer(&self, m: usize) -> usize {
        if self.multi_angle {
            m * (m - 1) / 2 + 2 * m
        } else {
            2
        }
    }

    pub fn param_count(&self, m: usize) -> usize {
        self.layers * self.params_per_layer(m)
    }

    pub fn initial_params(&self, m: usize) -> Result<Vec<f64>> {
        match &self.init_params {
            Some(p) => {
                check_len(self.param_count(m), p.len())?;
                Ok(p.clone())
            }
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
                Ok(random_params(&mut rng, self.param_count(m)))
            }
        }
    }
}

fn random_params(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-PI..=PI)).collect()
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    pub amplitudes: Vec<Complex64>,
}

impl Statevector {
    pub fn uniform(m: usize) -> Self {
        let dim = 1usize << m;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self {
            amplitudes: vec![a; dim],
        }
    }

    pub fn basis(x: Bitstring) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << x.len()];
        amplitudes[x.value() as usize] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn num_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    fn apply_phases(&mut self, phase: impl Fn(usize) -> f64) {
        for (x, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, -phase(x));
        }
    }

    /// `exp(-i angle X_q)`.
    fn apply_rx(&mut self, q: usize, angle: f64) {
        let (s, c) = angle.sin_cos();
        let bit = 1usize << q;
        let minus_i_s = Complex64::new(0.0, -s);
        for x in 0..self.amplitudes.len() {
            if x & bit == 0 {
                let a = self.amplitudes[x];
                let b = self.amplitudes[x | bit];
                self.amplitudes[x] = a * c + b * minus_i_s;
                self.amplitudes[x | bit] = b * c + a * minus_i_s;
            }
        }
    }
}

fn spin(x: usize, q: usize) -> f64 {
    if x >> q & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

fn term_value(term: PauliTerm, x: usize) -> f64 {
    match term {
        PauliTerm::ZZ(j, k) => spin(x, j) * spin(x, k),
        PauliTerm::Z(j) => spin(x, j),
    }
}

/// Compiled circuit structure for one Hamiltonian and ansatz.
struct Circuit {
    m: usize,
    layers: usize,
    multi_angle: bool,
    /// Every cost gate with its Hamiltonian coefficient, in parameter order.
    terms: Vec<(PauliTerm, f64)>,
    /// `E(x) - constant`, the standard cost phase per unit gamma.
    centered: Vec<f64>,
    /// Full energies for expectations.
    energies: Vec<f64>,
}

impl Circuit {
    fn new(h: &RoundingHamiltonian, cfg: &AnsatzConfig) -> Result<Self> {
        let m = h.m;
        if m > QUBIT_LIMIT {
            return Err(Error::Capacity {
                what: "statevector simulation",
                limit: QUBIT_LIMIT,
                requested: m,
            });
        }
        let mut terms = Vec::with_capacity(m * (m + 1) / 2);
        for j in 0..m {
            for k in j + 1..m {
                terms.push((PauliTerm::ZZ(j, k), h.couplings[j][k].to_f64().unwrap_or(0.0)));
            }
        }
        for j in 0..m {
            terms.push((PauliTerm::Z(j), h.fields[j].to_f64().unwrap_or(0.0)));
        }
        let constant = h.constant.to_f64().unwrap_or(0.0);
        let energies: Vec<f64> = (0..1u64 << m).map(|x| h.energy_of_mask(x) as f64).collect();
        let centered = energies.iter().map(|e| e - constant).collect();
        Ok(Self {
            m,
            layers: cfg.layers,
            multi_angle: cfg.multi_angle,
            terms,
            centered,
            energies,
        })
    }

    fn per_layer(&self) -> usize {
        if self.multi_angle {
            self.terms.len() + self.m
        } else {
            2
        }
    }

    fn param_count(&self) -> usize {
        self.layers * self.per_layer()
    }

    /// Blocks alternate cost (`2l`) and mixer (`2l + 1`).
    fn apply_block(&self, state: &mut Statevector, block: usize, params: &[f64]) {
        let layer = block / 2;
        let p = &params[layer * self.per_layer()..(layer + 1) * self.per_layer()];
        if block % 2 == 0 {
            if self.multi_angle {
                let angles = &p[..self.terms.len()];
                state.apply_phases(|x| {
                    self.terms
                        .iter()
                        .zip(angles)
                        .map(|(&(term, c), a)| a * c * term_value(term, x))
                        .sum()
                });
            } else {
                let gamma = p[0];
                state.apply_phases(|x| gamma * self.centered[x]);
            }
        } else {
            for q in 0..self.m {
                let beta = if self.multi_angle { p[self.terms.len() + q] } else { p[1] };
                state.apply_rx(q, beta);
            }
        }
    }

    fn run_from(&self, mut state: Statevector, first_block: usize, params: &[f64]) -> Statevector {
        for block in first_block..2 * self.layers {
            self.apply_block(&mut state, block, params);
        }
        state
    }

    fn expectation(&self, state: &Statevector) -> f64 {
        state
            .amplitudes
            .iter()
            .zip(&self.energies)
            .map(|(a, e)| a.norm_sqr() * e)
            .sum()
    }

    /// Gates driven by parameter `index`: `(block, gate, coefficient)` where
    /// gate `< terms.len()` is a cost term and otherwise a mixer qubit.
    fn gates_of(&self, index: usize) -> Vec<(usize, usize, f64)> {
        let layer = index / self.per_layer();
        let local = index % self.per_layer();
        let nterms = self.terms.len();
        if self.multi_angle {
            if local < nterms {
                vec![(2 * layer, local, self.terms[local].1)]
            } else {
                vec![(2 * layer + 1, local, 1.0)]
            }
        } else if local == 0 {
            (0..nterms).map(|g| (2 * layer, g, self.terms[g].1)).collect()
        } else {
            (0..self.m).map(|q| (2 * layer + 1, nterms + q, 1.0)).collect()
        }
    }

    fn apply_extra(&self, state: &mut Statevector, gate: usize, angle: f64) {
        if gate < self.terms.len() {
            let term = self.terms[gate].0;
            state.apply_phases(|x| angle * term_value(term, x));
        } else {
            state.apply_rx(gate - self.terms.len(), angle);
        }
    }

    fn gradient(&self, params: &[f64]) -> Vec<f64> {
        let blocks = 2 * self.layers;
        let mut after = Vec::with_capacity(blocks);
        let mut state = Statevector::uniform(self.m);
        for block in 0..blocks {
            self.apply_block(&mut state, block, params);
            after.push(state.clone());
        }
        (0..self.param_count())
            .map(|i| {
                self.gates_of(i)
                    .into_iter()
                    .filter(|&(_, _, c)| c != 0.0)
                    .map(|(block, gate, c)| {
                        let mut plus = after[block].clone();
                        self.apply_extra(&mut plus, gate, FRAC_PI_4);
                        let mut minus = after[block].clone();
                        self.apply_extra(&mut minus, gate, -FRAC_PI_4);
                        let e_plus = self.expectation(&self.run_from(plus, block + 1, params));
                        let e_minus = self.expectation(&self.run_from(minus, block + 1, params));
                        c * (e_plus - e_minus)
                    })
                    .sum()
            })
            .collect()
    }
}

/// Uniform superposition followed by `layers` cost/mixer layers.
pub fn evolve(h: &RoundingHamiltonian, cfg: &AnsatzConfig, params: &[f64]) -> Result<Statevector> {
    let circuit = Circuit::new(h, cfg)?;
    check_len(circuit.param_count(), params.len())?;
    Ok(circuit.run_from(Statevector::uniform(h.m), 0, params))
}

/// `sum_x |amp_x|^2 E(x)`.
pub fn expectation(h: &RoundingHamiltonian, state: &Statevector) -> Result<f64> {
    check_len(1 << h.m, state.amplitudes.len())?;
    Ok(state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(x, a)| a.norm_sqr() * h.energy_of_mask(x as u64) as f64)
        .sum())
}

/// Analytic gradient by the two-point parameter-shift rule on every gate.
pub fn gradient(h: &RoundingHamiltonian, cfg: &AnsatzConfig, params: &[f64]) -> Result<Vec<f64>> {
    let circuit = Circuit::new(h, cfg)?;
    check_len(circuit.param_count(), params.len())?;
    Ok(circuit.gradient(params))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimized {
    pub params: Vec<f64>,
    pub expectation: f64,
    /// Expectation after every accepted step, starting with the initial value.
    pub trace: Vec<f64>,
    pub converged: bool,
}

const MAX_ITERATIONS: usize = 500;
const GRADIENT_TOLERANCE: f64 = 1e-8;

/// BFGS with backtracking (Armijo) line search from `cfg`'s initial point.
pub fn optimize(h: &RoundingHamiltonian, cfg: &AnsatzConfig) -> Result<Optimized> {
    let circuit = Circuit::new(h, cfg)?;
    let x0 = cfg.initial_params(h.m)?;
    bfgs(&circuit, x0)
}

/// Best of `starts` runs from points drawn uniformly in `[-pi, pi]`.
pub fn optimize_multistart(h: &RoundingHamiltonian, cfg: &AnsatzConfig, starts: usize) -> Result<Optimized> {
    let circuit = Circuit::new(h, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut best: Option<Optimized> = None;
    for _ in 0..starts.max(1) {
        let x0 = random_params(&mut rng, circuit.param_count());
        let run = bfgs(&circuit, x0)?;
        if best.as_ref().map_or(true, |b| run.expectation < b.expectation) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one start"))
}

fn bfgs(circuit: &Circuit, mut x: Vec<f64>) -> Result<Optimized> {
    let n = x.len();
    let eval = |p: &[f64]| {
        circuit.expectation(&circuit.run_from(Statevector::uniform(circuit.m), 0, p))
    };
    let mut f = eval(&x);
    if !f.is_finite() {
        return Err(Error::NonFinite { iteration: 0 });
    }
    let mut trace = vec![f];
    if n == 0 {
        return Ok(Optimized {
            params: x,
            expectation: f,
            trace,
            converged: true,
        });
    }
    let mut g = circuit.gradient(&x);
    let mut inv_hessian = identity(n);
    let mut converged = false;
    for iteration in 1..=MAX_ITERATIONS {
        if g.iter().all(|v| v.abs() < GRADIENT_TOLERANCE) {
            converged = true;
            break;
        }
        let mut dir: Vec<f64> = mat_vec(&inv_hessian, &g).iter().map(|v| -v).collect();
        let mut slope = dot(&g, &dir);
        if slope >= 0.0 {
            inv_hessian = identity(n);
            dir = g.iter().map(|v| -v).collect();
            slope = dot(&g, &dir);
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
            let ft = eval(&trial);
            if !ft.is_finite() {
                return Err(Error::NonFinite { iteration });
            }
            if ft <= f + 1e-4 * step * slope {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            // no descent along the quasi-Newton direction at machine precision
            converged = true;
            break;
        };
        let g_new = circuit.gradient(&x_new);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 {
            bfgs_update(&mut inv_hessian, &s, &y, sy);
        }
        let stalled = (f - f_new).abs() <= 1e-15 * f.abs().max(1.0);
        x = x_new;
        f = f_new;
        g = g_new;
        trace.push(f);
        if stalled {
            converged = true;
            break;
        }
    }
    Ok(Optimized {
        params: x,
        expectation: f,
        trace,
        converged,
    })
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn mat_vec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter().map(|row| dot(row, v)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T`.
fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy = mat_vec(h, y);
    let yhy = dot(y, &hy);
    for i in 0..n {
        for j in 0..n {
            h[i][j] += (1.0 + rho * yhy) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}

pub type Histogram = BTreeMap<Bitstring, u64>;

/// `shots` independent measurements in the computational basis.
pub fn sample(state: &Statevector, shots: u64, rng_seed: u64) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::InvalidArgument("at least one shot is required".into()));
    }
    let m = state.num_qubits();
    let mut cumulative = Vec::with_capacity(state.amplitudes.len());
    let mut acc = 0.0;
    for a in &state.amplitudes {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut hist = Histogram::new();
    for _ in 0..shots {
        let u = rng.gen::<f64>() * acc;
        let x = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
        *hist.entry(Bitstring::new(x as u64, m)?).or_insert(0) += 1;
    }
    Ok(hist)
}

/// The `k` most frequent outcomes, ties broken by bitstring value.
pub fn most_frequent(hist: &Histogram, k: usize) -> Vec<(Bitstring, u64)> {
    let mut entries: Vec<(Bitstring, u64)> = hist.iter().map(|(b, c)| (*b, *c)).collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    entries.truncate(k);
    entries
}
