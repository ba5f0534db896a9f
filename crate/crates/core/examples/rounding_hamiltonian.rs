//! The rounding Hamiltonian of a lattice and its lowest-energy states, with
//! each energy checked against the squared distance it encodes.

use latfac::heuristics::LatticeInstance;
use latfac::ising::{self, Rational};
use latfac::lattice::{self, Permutation};
use num_bigint::BigInt;

fn main() -> latfac::Result<()> {
    let lat = lattice::build_prime_lattice(&BigInt::from(1961), 3, 1.5, &Permutation::identity(3))?;
    let inst = LatticeInstance::new(lat, 0.99)?;
    let h = inst.hamiltonian()?;
    println!("H = {h}");
    let babai_energy = Rational::from_integer(h.energy_of_mask(0));
    println!("states below the Babai energy {babai_energy}:");
    for (x, e) in ising::exact_minimize(&h, babai_energy)? {
        let b = lattice::refine(&inst.reduced.basis, &inst.babai.b_op, &inst.babai.kappa, x.value())?;
        let d = lattice::distance_sq(&b, &inst.lattice.target);
        println!("  |{x}>  E = {e}  |t - b|^2 = {d}  b = {b:?}");
    }
    Ok(())
}
