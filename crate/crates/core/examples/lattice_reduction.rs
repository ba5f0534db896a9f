//! Builds a prime lattice, reduces it exactly, and runs Babai's nearest plane.

use latfac::lattice::{self, Permutation};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> latfac::Result<()> {
    let n = BigInt::from(612_742_391u64);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sigma = Permutation::random(6, &mut rng);
    let lat = lattice::build_prime_lattice(&n, 6, 1.5, &sigma)?;
    println!("B (rows):");
    for row in lat.basis.to_rows() {
        println!("  {row:?}");
    }
    println!("t = {:?}", lat.target);

    let reduced = lattice::lll_reduce(&lat, 0.99)?;
    println!("reduced columns, shortest first:");
    for col in reduced.basis.columns() {
        println!("  {col:?}  |b|^2 = {}", lattice::distance_sq(col, &vec![0; col.len()]));
    }

    let babai = lattice::babai_nearest_plane(&reduced, &lat.target)?;
    let e = lattice::lattice_coords(&lat, &babai.b_op)?;
    println!("b_op = {:?}", babai.b_op);
    println!("kappa = {:?}", babai.kappa);
    println!("e = {e:?}, |t - b_op|^2 = {}", lattice::distance_sq(&babai.b_op, &lat.target));
    Ok(())
}
