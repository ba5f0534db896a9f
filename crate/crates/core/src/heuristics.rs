//! Candidate generation: each heuristic maps one reduced prime lattice and
//! its Babai point to a set of refined lattice vectors near the target.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ising::{self, RoundingHamiltonian};
use crate::lattice::{self, BabaiResult, PrimeLattice, ReducedBasis};
use crate::qaoa::{self, AnsatzConfig};
use crate::{Error, Result};

pub const DEFAULT_LOCAL_SEARCH_K: usize = 4;
pub const DEFAULT_CANDIDATE_CAP: usize = 16;
pub const DEFAULT_SHOTS: u64 = 1000;
pub const QAOA_TOP: usize = 16;
pub const HILL_CLIMB_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaoaSettings {
    pub layers: usize,
    pub multi_angle: bool,
    pub shots: u64,
}

impl Default for QaoaSettings {
    fn default() -> Self {
        Self {
            layers: 1,
            multi_angle: true,
            shots: DEFAULT_SHOTS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Heuristic {
    Babai,
    ExactMin,
    HillClimb,
    Qaoa(QaoaSettings),
    LocalSearch { k: usize },
    RandomRound { cap: usize },
}

impl Heuristic {
    pub const NAMES: [&'static str; 6] = [
        "babai",
        "exact-min",
        "hill-climb",
        "qaoa",
        "local-search",
        "random-round",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Babai => "babai",
            Self::ExactMin => "exact-min",
            Self::HillClimb => "hill-climb",
            Self::Qaoa(_) => "qaoa",
            Self::LocalSearch { .. } => "local-search",
            Self::RandomRound { .. } => "random-round",
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    /// Parses a name with default parameters.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "babai" | "babai-only" => Self::Babai,
            "exact-min" => Self::ExactMin,
            "hill-climb" => Self::HillClimb,
            "qaoa" => Self::Qaoa(QaoaSettings::default()),
            "local-search" => Self::LocalSearch {
                k: DEFAULT_LOCAL_SEARCH_K,
            },
            "random-round" => Self::RandomRound {
                cap: DEFAULT_CANDIDATE_CAP,
            },
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown heuristic {other:?}; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }
}

/// A reduced lattice with its Babai point: the input to every heuristic.
#[derive(Debug, Clone)]
pub struct LatticeInstance {
    pub lattice: PrimeLattice,
    pub reduced: ReducedBasis,
    pub babai: BabaiResult,
}

impl LatticeInstance {
    pub fn new(lattice: PrimeLattice, delta: f64) -> Result<Self> {
        let reduced = lattice::lll_reduce(&lattice, delta)?;
        let babai = lattice::babai_nearest_plane(&reduced, &lattice.target)?;
        Ok(Self {
            lattice,
            reduced,
            babai,
        })
    }

    pub fn m(&self) -> usize {
        self.lattice.m
    }

    pub fn hamiltonian(&self) -> Result<RoundingHamiltonian> {
        ising::build_hamiltonian(
            &self.lattice.target,
            &self.babai.b_op,
            &self.babai.kappa,
            &self.reduced.basis,
        )
    }

    /// Candidate for flip `mask` around `b_op` with signs `kappa`.
    fn candidate(&self, b_op: &[i64], kappa: &[i8], mask: u64) -> Result<Candidate> {
        let b = lattice::refine(&self.reduced.basis, b_op, kappa, mask)?;
        let e = lattice::lattice_coords(&self.lattice, &b)?;
        let dist_sq = lattice::distance_sq(&b, &self.lattice.target);
        Ok(Candidate { b, e, dist_sq })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub b: Vec<i64>,
    /// Coordinates over the prime lattice basis: `B e = b`.
    pub e: Vec<i64>,
    pub dist_sq: i128,
}

/// Candidates of one lattice, unique by coordinates, in generation order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateSet {
    pub lattice_id: u64,
    pub candidates: Vec<Candidate>,
    seen: HashSet<Vec<i64>>,
}

impl CandidateSet {
    pub fn new(lattice_id: u64) -> Self {
        Self {
            lattice_id,
            ..Self::default()
        }
    }

    /// Adds `c` unless its coordinates are already present.
    pub fn push(&mut self, c: Candidate) -> bool {
        if !self.seen.insert(c.e.clone()) {
            return false;
        }
        self.candidates.push(c);
        true
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn best(&self) -> Option<&Candidate> {
        self.candidates.iter().min_by_key(|c| c.dist_sq)
    }
}

pub fn babai_only(inst: &LatticeInstance, lattice_id: u64) -> Result<CandidateSet> {
    let mut set = CandidateSet::new(lattice_id);
    set.push(inst.candidate(&inst.babai.b_op, &inst.babai.kappa, 0)?);
    Ok(set)
}

/// Every rounding with energy below the Babai point's, then the Babai point.
pub fn exact_min(inst: &LatticeInstance, lattice_id: u64) -> Result<CandidateSet> {
    let h = inst.hamiltonian()?;
    let ceiling = ising::Rational::from_integer(h.energy_of_mask(0));
    let mut set = CandidateSet::new(lattice_id);
    for (x, _) in ising::exact_minimize(&h, ceiling)? {
        set.push(inst.candidate(&inst.babai.b_op, &inst.babai.kappa, x.value())?);
    }
    set.push(inst.candidate(&inst.babai.b_op, &inst.babai.kappa, 0)?);
    Ok(set)
}

/// Repeatedly moves to the ground state of the rounding Hamiltonian around
/// the current vector, flipping the signs of the moved coordinates.
pub fn hill_climb(inst: &LatticeInstance, lattice_id: u64, rng: &mut ChaCha8Rng) -> Result<CandidateSet> {
    let t = &inst.lattice.target;
    let basis = &inst.reduced.basis;
    let mut current = inst.babai.b_op.clone();
    let mut kappa = inst.babai.kappa.clone();
    let mut set = CandidateSet::new(lattice_id);
    set.push(inst.candidate(&current, &kappa, 0)?);
    let mut retried = false;
    for iteration in 0..HILL_CLIMB_CAP {
        let h = ising::build_hamiltonian(t, &current, &kappa, basis)?;
        let (psi, _) = ising::ground_state(&h)?;
        if psi.is_zero() {
            if iteration == 0 && !retried {
                retried = true;
                kappa = (0..inst.m())
                    .map(|_| if rng.gen::<bool>() { -1 } else { 1 })
                    .collect();
                continue;
            }
            break;
        }
        let next = inst.candidate(&current, &kappa, psi.value())?;
        current = next.b.clone();
        set.push(next);
        for (j, k) in kappa.iter_mut().enumerate() {
            if psi.bit(j) {
                *k = -*k;
            }
        }
    }
    Ok(set)
}

/// All `2^k` flip patterns over the `k` shortest reduced basis vectors.
pub fn local_search(inst: &LatticeInstance, lattice_id: u64, k: usize) -> Result<CandidateSet> {
    if k == 0 || k > inst.m() {
        return Err(Error::InvalidArgument(format!(
            "local search needs 1 <= k <= {}, got {k}",
            inst.m()
        )));
    }
    let mut set = CandidateSet::new(lattice_id);
    for mask in 0..1u64 << k {
        set.push(inst.candidate(&inst.babai.b_op, &inst.babai.kappa, mask)?);
    }
    Ok(set)
}

/// Up to `cap` distinct flip masks drawn uniformly from `{0,1}^m`.
pub fn random_round(
    inst: &LatticeInstance,
    lattice_id: u64,
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> Result<CandidateSet> {
    if cap == 0 {
        return Err(Error::InvalidArgument("candidate cap must be at least 1".into()));
    }
    let m = inst.m();
    let space = if m >= 63 { u64::MAX } else { 1u64 << m };
    let wanted = (cap as u64).min(space) as usize;
    let mut masks = HashSet::with_capacity(wanted);
    let mut set = CandidateSet::new(lattice_id);
    while masks.len() < wanted {
        let mask = if m >= 64 { rng.gen() } else { rng.gen_range(0..space) };
        if masks.insert(mask) {
            set.push(inst.candidate(&inst.babai.b_op, &inst.babai.kappa, mask)?);
        }
    }
    Ok(set)
}

/// Optimizes the ansatz from a random start, samples it, and refines the
/// most frequent outcomes.
pub fn qaoa_round(
    inst: &LatticeInstance,
    lattice_id: u64,
    settings: &QaoaSettings,
    rng: &mut ChaCha8Rng,
) -> Result<CandidateSet> {
    let h = inst.hamiltonian()?;
    let cfg = AnsatzConfig {
        layers: settings.layers,
        multi_angle: settings.multi_angle,
        init_params: None,
        rng_seed: rng.gen(),
    };
    let optimized = qaoa::optimize(&h, &cfg)?;
    let state = qaoa::evolve(&h, &cfg, &optimized.params)?;
    let hist = qaoa::sample(&state, settings.shots, rng.gen())?;
    let mut set = CandidateSet::new(lattice_id);
    for (x, _) in qaoa::most_frequent(&hist, QAOA_TOP) {
        set.push(inst.candidate(&inst.babai.b_op, &inst.babai.kappa, x.value())?);
    }
    Ok(set)
}

pub fn run(
    heuristic: &Heuristic,
    inst: &LatticeInstance,
    lattice_id: u64,
    rng: &mut ChaCha8Rng,
) -> Result<CandidateSet> {
    match heuristic {
        Heuristic::Babai => babai_only(inst, lattice_id),
        Heuristic::ExactMin => exact_min(inst, lattice_id),
        Heuristic::HillClimb => hill_climb(inst, lattice_id, rng),
        Heuristic::Qaoa(settings) => qaoa_round(inst, lattice_id, settings, rng),
        Heuristic::LocalSearch { k } => local_search(inst, lattice_id, (*k).min(inst.m())),
        Heuristic::RandomRound { cap } => random_round(inst, lattice_id, *cap, rng),
    }
}
