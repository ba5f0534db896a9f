//! Runs every rounding heuristic on the same random lattices of a 30-bit
//! semiprime and reports how many smooth relations each one finds.

use latfac::heuristics::{self, Heuristic, LatticeInstance, QaoaSettings};
use latfac::lattice::{self, Permutation};
use latfac::numth::{self, FactorBase};
use latfac::relations::{self, Screening};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> latfac::Result<()> {
    let n = numth::random_semiprime(30, 3)?;
    let (m, big_m, lattices) = (11, 121, 12u64);
    let base = FactorBase::first(big_m)?;
    println!("n = {n}, m = {m}, M = {big_m}, {lattices} lattices each");
    let all = [
        Heuristic::Babai,
        Heuristic::ExactMin,
        Heuristic::HillClimb,
        Heuristic::LocalSearch { k: 4 },
        Heuristic::RandomRound { cap: 16 },
        Heuristic::Qaoa(QaoaSettings { layers: 1, multi_angle: true, shots: 1000 }),
    ];
    for h in &all {
        let (mut candidates, mut smooth) = (0usize, 0usize);
        for id in 0..lattices {
            let mut rng = ChaCha8Rng::seed_from_u64(id);
            let sigma = Permutation::random(m, &mut rng);
            let lat = lattice::build_prime_lattice(&n, m, m as f64 / 4.0, &sigma)?;
            let primes = lat.primes.clone();
            let inst = LatticeInstance::new(lat, 0.99)?;
            let set = heuristics::run(h, &inst, id, &mut rng)?;
            candidates += set.len();
            for c in &set.candidates {
                let (u, v) = relations::extract_pair(&c.e, &primes)?;
                if !matches!(relations::test_candidate(&u, &v, &n, &base)?, Screening::NotSmooth) {
                    smooth += 1;
                }
            }
        }
        println!("{:>13}: {candidates:>5} candidates, {smooth:>4} smooth", h.name());
    }
    Ok(())
}
