use latfac::heuristics::LatticeInstance;
use latfac::ising::RoundingHamiltonian;
use latfac::lattice::{build_prime_lattice, Permutation};
use latfac::qaoa::{self, AnsatzConfig, Statevector};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn hamiltonian(n: u64, m: usize, seed: u64) -> RoundingHamiltonian {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = Permutation::random(m, &mut rng);
    let l = build_prime_lattice(&BigInt::from(n), m, m as f64 / 4.0, &sigma).unwrap();
    LatticeInstance::new(l, 0.99).unwrap().hamiltonian().unwrap()
}

fn demo() -> RoundingHamiltonian {
    let l = build_prime_lattice(&BigInt::from(1961), 3, 1.5, &Permutation::identity(3)).unwrap();
    LatticeInstance::new(l, 0.99).unwrap().hamiltonian().unwrap()
}

fn central_difference(h: &RoundingHamiltonian, cfg: &AnsatzConfig, params: &[f64], i: usize) -> f64 {
    let eps = 1e-5;
    let f = |delta: f64| {
        let mut p = params.to_vec();
        p[i] += delta;
        qaoa::expectation(h, &qaoa::evolve(h, cfg, &p).unwrap()).unwrap()
    };
    // Fourth-order stencil keeps truncation error well under 1e-6 relative.
    (-f(2.0 * eps) + 8.0 * f(eps) - 8.0 * f(-eps) + f(-2.0 * eps)) / (12.0 * eps)
}

#[test]
fn zero_layers_give_the_uniform_state() {
    let h = demo();
    let cfg = AnsatzConfig::standard(0);
    let s = qaoa::evolve(&h, &cfg, &[]).unwrap();
    assert_eq!(s, Statevector::uniform(3));
    let mean: f64 = (0..8).map(|x| h.energy_of_mask(x) as f64).sum::<f64>() / 8.0;
    assert!((qaoa::expectation(&h, &s).unwrap() - mean).abs() < 1e-12);
    assert!((mean - 87.0 / 2.0).abs() < 1e-12);
}

#[test]
fn wrong_parameter_count_is_rejected() {
    let h = demo();
    assert!(qaoa::evolve(&h, &AnsatzConfig::standard(1), &[0.1]).is_err());
    assert!(qaoa::evolve(&h, &AnsatzConfig::multi_angle(1), &[0.1, 0.2]).is_err());
}

#[test]
fn sampling_concentrates_on_a_basis_state() {
    let x = "101".parse().unwrap();
    let hist = qaoa::sample(&Statevector::basis(x), 200, 9).unwrap();
    assert_eq!(hist.len(), 1);
    assert_eq!(hist[&x], 200);
}

#[test]
fn sampling_is_seeded_and_roughly_uniform() {
    let s = Statevector::uniform(3);
    let a = qaoa::sample(&s, 8000, 42).unwrap();
    assert_eq!(a, qaoa::sample(&s, 8000, 42).unwrap());
    assert_eq!(a.values().sum::<u64>(), 8000);
    for &count in a.values() {
        assert!((800..=1200).contains(&count), "count {count}");
    }
}

#[test]
fn gradients_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..12 {
        let m = rng.gen_range(2..=4);
        let h = hamiltonian(rng.gen_range(10_000..1_000_000), m, trial);
        for cfg in [AnsatzConfig::standard(2), AnsatzConfig::multi_angle(1)] {
            let params: Vec<f64> = (0..cfg.param_count(m)).map(|_| rng.gen_range(-0.3..0.3)).collect();
            let g = qaoa::gradient(&h, &cfg, &params).unwrap();
            for (i, gi) in g.iter().enumerate() {
                let fd = central_difference(&h, &cfg, &params, i);
                let scale = gi.abs().max(fd.abs()).max(1.0);
                assert!((gi - fd).abs() / scale < 1e-6, "param {i}: {gi} vs {fd}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evolution_is_unitary(
        n in 10_000u64..10_000_000,
        m in 2usize..=6,
        seed in any::<u64>(),
        layers in 1usize..=3,
        multi in any::<bool>(),
    ) {
        let h = hamiltonian(n, m, seed);
        let cfg = if multi { AnsatzConfig::multi_angle(layers) } else { AnsatzConfig::standard(layers) };
        let params = cfg.clone().with_seed(seed).initial_params(m).unwrap();
        let s = qaoa::evolve(&h, &cfg, &params).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        let total: f64 = s.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tied_multi_angle_equals_standard(
        n in 10_000u64..10_000_000,
        m in 2usize..=5,
        seed in any::<u64>(),
        layers in 1usize..=2,
        angles in proptest::collection::vec(-1.0f64..1.0, 4),
    ) {
        let h = hamiltonian(n, m, seed);
        let std_cfg = AnsatzConfig::standard(layers);
        let ma_cfg = AnsatzConfig::multi_angle(layers);
        let std_params: Vec<f64> = angles[..2 * layers].to_vec();
        let nterms = m * (m - 1) / 2 + m;
        let mut ma_params = Vec::new();
        for l in 0..layers {
            ma_params.extend(std::iter::repeat(std_params[2 * l]).take(nterms));
            ma_params.extend(std::iter::repeat(std_params[2 * l + 1]).take(m));
        }
        let a = qaoa::evolve(&h, &std_cfg, &std_params).unwrap();
        let b = qaoa::evolve(&h, &ma_cfg, &ma_params).unwrap();
        // Equal up to a global phase from the constant term.
        let pa = a.probabilities();
        let pb = b.probabilities();
        for (x, y) in pa.iter().zip(&pb) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let ea = qaoa::expectation(&h, &a).unwrap();
        let eb = qaoa::expectation(&h, &b).unwrap();
        prop_assert!((ea - eb).abs() < 1e-12 * ea.abs().max(1.0));
    }

    #[test]
    fn optimizer_never_ends_above_its_start(
        n in 10_000u64..1_000_000,
        m in 2usize..=4,
        seed in any::<u64>(),
    ) {
        let h = hamiltonian(n, m, seed);
        let cfg = AnsatzConfig::standard(1).with_seed(seed);
        let start = cfg.initial_params(m).unwrap();
        let e0 = qaoa::expectation(&h, &qaoa::evolve(&h, &cfg, &start).unwrap()).unwrap();
        let opt = qaoa::optimize(&h, &cfg).unwrap();
        prop_assert!(opt.expectation <= e0 + 1e-9);
        let min = (0..1u64 << m).map(|x| h.energy_of_mask(x)).min().unwrap() as f64;
        prop_assert!(opt.expectation >= min - 1e-9);
    }
}
