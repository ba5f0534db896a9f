mod common;

use common::{cvp_enumerate, dist_sq, is_lll_reduced, mat_vec, same_lattice};
use latfac::lattice::{
    babai_nearest_plane, build_prime_lattice, lattice_coords, lll_reduce, lll_reduce_matrix, refine,
    IntMatrix, Permutation,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prime_lattice(n: u64, m: usize, c: f64, seed: u64) -> latfac::lattice::PrimeLattice {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = Permutation::random(m, &mut rng);
    build_prime_lattice(&BigInt::from(n), m, c, &sigma).unwrap()
}

#[test]
fn demo_lattice_matches_hand_built_basis() {
    let l = build_prime_lattice(&BigInt::from(1961), 3, 1.5, &Permutation::identity(3)).unwrap();
    assert_eq!(
        l.basis.to_rows(),
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 2], vec![22, 35, 51]]
    );
    assert_eq!(l.target, vec![0, 0, 0, 240]);
}

#[test]
fn permutation_moves_only_the_diagonal() {
    let sigma = Permutation::from_images(vec![2, 0, 1]).unwrap();
    let l = build_prime_lattice(&BigInt::from(1961), 3, 1.5, &sigma).unwrap();
    assert_eq!(
        l.basis.to_rows(),
        vec![vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![22, 35, 51]]
    );
}

#[test]
fn rejects_small_targets_and_bad_shapes() {
    assert!(build_prime_lattice(&BigInt::from(5), 3, 1.0, &Permutation::identity(3)).is_err());
    assert!(build_prime_lattice(&BigInt::from(1961), 3, 1.0, &Permutation::identity(4)).is_err());
    assert!(build_prime_lattice(&BigInt::from(1961), 1, 1.0, &Permutation::identity(1)).is_err());
    assert!(build_prime_lattice(&BigInt::from(1961), 3, 0.0, &Permutation::identity(3)).is_err());
}

#[test]
fn lll_on_a_small_textbook_basis() {
    let b = IntMatrix::from_columns(vec![vec![1, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]]).unwrap();
    let r = lll_reduce_matrix(&b, 0.75).unwrap();
    assert!(same_lattice(b.columns(), r.raw.columns()));
    assert!(is_lll_reduced(r.raw.columns(), 3, 4));
    // |mu| = 1/2 ties make the third vector (-1, 0, 2) or (-2, 0, 1).
    let norms: Vec<i128> = r.basis.columns().iter().map(|c| dist_sq(c, &[0, 0, 0])).collect();
    assert_eq!(norms, vec![1, 2, 5]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lll_preserves_the_lattice_and_reduces(
        n in 1000u64..1_000_000_000,
        m in 2usize..=7,
        c in 0.5f64..2.5,
        seed in any::<u64>(),
    ) {
        let l = prime_lattice(n, m, c, seed);
        for (delta, num, den) in [(0.99, 99, 100), (0.75, 3, 4)] {
            let r = lll_reduce(&l, delta).unwrap();
            prop_assert!(same_lattice(l.basis.columns(), r.raw.columns()));
            prop_assert!(is_lll_reduced(r.raw.columns(), num, den));
            let mut sorted = r.basis.columns().to_vec();
            let mut raw = r.raw.columns().to_vec();
            sorted.sort();
            raw.sort();
            prop_assert_eq!(sorted, raw);
            let norms: Vec<i128> = r.basis.columns().iter().map(|c| dist_sq(c, &vec![0; c.len()])).collect();
            prop_assert!(norms.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn library_gram_schmidt_matches_oracle(
        n in 1000u64..1_000_000_000,
        m in 2usize..=6,
        seed in any::<u64>(),
    ) {
        let l = prime_lattice(n, m, m as f64 / 4.0, seed);
        let r = lll_reduce(&l, 0.99).unwrap();
        let (star, _) = common::gram_schmidt(r.basis.columns());
        prop_assert_eq!(r.gram_schmidt(), star);
    }

    #[test]
    fn babai_point_and_refinements_are_lattice_vectors(
        n in 1000u64..1_000_000_000,
        m in 2usize..=6,
        seed in any::<u64>(),
        mask in any::<u64>(),
    ) {
        let l = prime_lattice(n, m, m as f64 / 4.0, seed);
        let r = lll_reduce(&l, 0.99).unwrap();
        let babai = babai_nearest_plane(&r, &l.target).unwrap();
        prop_assert_eq!(mat_vec(r.basis.columns(), &babai.coeffs), babai.b_op.clone());
        let mask = mask & ((1 << m) - 1);
        let b = refine(&r.basis, &babai.b_op, &babai.kappa, mask).unwrap();
        let e = lattice_coords(&l, &b).unwrap();
        prop_assert_eq!(l.basis.mul_vec(&e).unwrap(), b);
    }

    #[test]
    fn babai_is_within_the_nearest_plane_bound(
        n in 1000u64..10_000_000,
        m in 2usize..=4,
        c in 0.5f64..1.5,
        seed in any::<u64>(),
    ) {
        let l = prime_lattice(n, m, c, seed);
        let r = lll_reduce(&l, 0.99).unwrap();
        let babai = babai_nearest_plane(&r, &l.target).unwrap();
        let d_babai = dist_sq(&babai.b_op, &l.target);
        let d_cvp = cvp_enumerate(l.basis.columns(), &l.target, d_babai);
        prop_assert!(d_cvp <= d_babai);
        // (2 (2/sqrt 3)^m)^2 = 4 (4/3)^m
        let bound = 4.0 * (4.0f64 / 3.0).powi(m as i32) * d_cvp as f64;
        prop_assert!(d_babai as f64 <= bound, "babai {} cvp {}", d_babai, d_cvp);
    }
}
