mod common;

use common::{ham, modes, random_pd, random_symmetric, random_symplectic, rng};
use gaussctl::closure::{closure, default_max_rounds};
use gaussctl::evolution::{evolve_covariance, propagate, CovarianceState, Segment};
use gaussctl::hamiltonian::{bracket_hamiltonians, SymplecticGenerator};
use gaussctl::recurrence::{conditioning_bound, mode_distance};
use gaussctl::symplectic::symplectic_defect;
use gaussctl::williamson::{spectrum_certificate, symplectic_eigenvalues, williamson_decompose, DEFAULT_DEFINITENESS_TOL};
use gaussctl::{
    build_chain, commutator, expm, identity_distance, ChainSpec, ControlSchedule, QuadraticHamiltonian, RealMatrix,
};
use proptest::prelude::*;
use rand::Rng;

fn tol() -> f64 {
    DEFAULT_DEFINITENESS_TOL
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn expm_is_a_one_parameter_group(seed in any::<u64>(), n in 1usize..=3, s in -1.5f64..1.5, t in -1.5f64..1.5) {
        let g = ham(random_symmetric(&mut rng(seed), n, 1.0)).generator().into_matrix();
        let lhs = expm(&g, s).unwrap() * expm(&g, t).unwrap();
        let rhs = expm(&g, s + t).unwrap();
        prop_assert!((&lhs - &rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
        prop_assert!(symplectic_defect(&rhs).unwrap() <= 1e-10 * rhs.norm_squared().max(1.0));
    }

    #[test]
    fn bracket_is_a_homomorphism(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let h1 = ham(random_symmetric(&mut r, n, 2.0));
        let h2 = ham(random_symmetric(&mut r, n, 2.0));
        let c = bracket_hamiltonians(&h1, &h2).unwrap();
        let direct = commutator(h1.generator().matrix(), h2.generator().matrix()).unwrap();
        prop_assert!((c.generator().matrix() - &direct).norm() <= 1e-12 * direct.norm().max(1.0));
        // antisymmetry
        let swapped = bracket_hamiltonians(&h2, &h1).unwrap();
        prop_assert!((c.matrix() + swapped.matrix()).norm() <= 1e-13 * c.matrix().norm().max(1.0));
    }

    #[test]
    fn williamson_round_trip(seed in any::<u64>(), n in 1usize..=4) {
        let a = random_pd(&mut rng(seed), n, 1e3);
        let h = ham(a.clone());
        let dec = williamson_decompose(&h, tol()).unwrap();
        prop_assert!((&a - dec.reconstruct()).norm() <= 1e-8 * a.norm());
        prop_assert!(symplectic_defect(&dec.v).unwrap() <= 1e-8);
        let nu = symplectic_eigenvalues(&h, tol()).unwrap();
        for (x, y) in nu.iter().zip(&dec.nu) {
            prop_assert!((x - y).abs() <= 1e-8 * x.max(1.0));
        }
        prop_assert!(dec.nu.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn symplectic_eigenvalues_are_congruence_invariant(seed in any::<u64>(), n in 1usize..=3, c in 0.1f64..10.0) {
        let mut r = rng(seed);
        let a = random_pd(&mut r, n, 1e2);
        let s = random_symplectic(&mut r, n, 0.3);
        let base = symplectic_eigenvalues(&ham(a.clone()), tol()).unwrap();
        let moved = symplectic_eigenvalues(&ham(s.transpose() * &a * &s), tol()).unwrap();
        let scaled = symplectic_eigenvalues(&ham(&a * c), tol()).unwrap();
        for j in 0..n {
            prop_assert!((base[j] - moved[j]).abs() <= 1e-7 * base[j]);
            prop_assert!((c * base[j] - scaled[j]).abs() <= 1e-9 * scaled[j]);
        }
    }

    #[test]
    fn positive_definite_spectrum_is_imaginary(seed in any::<u64>(), n in 1usize..=4) {
        let cert = spectrum_certificate(&ham(random_pd(&mut rng(seed), n, 1e3)), 1e-9).unwrap();
        prop_assert!(cert.max_real_part < 1e-9 * cert.eigenvalues.iter().map(|z| z.norm()).fold(1.0, f64::max));
        prop_assert!(cert.diagonalizable);
    }

    #[test]
    fn distance_is_bounded_by_mode_distance(seed in any::<u64>(), n in 1usize..=3, t in 0.0f64..50.0) {
        let h = ham(random_pd(&mut rng(seed), n, 1e2));
        let k = conditioning_bound(&h).unwrap();
        let nu = symplectic_eigenvalues(&h, tol()).unwrap();
        let d = identity_distance(&expm(h.generator().matrix(), t).unwrap());
        prop_assert!(d <= k * mode_distance(&nu, t) + 1e-9 * k.max(1.0));
    }

    #[test]
    fn closure_ignores_recombination(seed in any::<u64>(), n in 1usize..=2) {
        let mut r = rng(seed);
        let h1 = ham(random_symmetric(&mut r, n, 1.0));
        let h2 = ham(random_symmetric(&mut r, n, 1.0));
        let sum = QuadraticHamiltonian::linear_combination(&[(1.0, &h1), (1.0, &h2)], "s").unwrap();
        let diff = QuadraticHamiltonian::linear_combination(&[(1.0, &h1), (-0.5, &h2)], "d").unwrap();
        let rounds = default_max_rounds(modes(n));
        let a = closure(&[h1.generator(), h2.generator()], 1e-9, rounds).unwrap();
        let b = closure(&[sum.generator(), diff.generator()], 1e-9, rounds).unwrap();
        prop_assert_eq!(a.dimension(), b.dimension());
        let loose = closure(&[h1.generator(), h2.generator()], 1e-8, rounds).unwrap();
        let tight = closure(&[h1.generator(), h2.generator()], 1e-10, rounds).unwrap();
        prop_assert_eq!(a.dimension(), loose.dimension());
        prop_assert_eq!(a.dimension(), tight.dimension());
    }

    #[test]
    fn closure_basis_lies_in_the_algebra(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let gens: Vec<SymplecticGenerator> = (0..2).map(|_| ham(random_symmetric(&mut r, n, 1.0)).generator()).collect();
        let sub = closure(&gens, 1e-9, default_max_rounds(modes(n))).unwrap();
        prop_assert!(sub.dimension() <= modes(n).algebra_dim());
        for g in sub.basis() {
            prop_assert!(g.membership_defect() < 1e-9, "{} {}", g.membership_defect(), g.source());
        }
    }

    #[test]
    fn evolution_concatenates(seed in any::<u64>(), split in 1usize..6) {
        let model = build_chain(&ChainSpec::canonical(3).unwrap()).unwrap();
        let mut r = rng(seed);
        let segments: Vec<Segment> = (0..6)
            .map(|_| Segment { duration: r.random_range(0.01..1.0), controls: vec![r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)] })
            .collect();
        let all = ControlSchedule::new(segments.clone());
        let first = ControlSchedule::new(segments[..split].to_vec());
        let second = ControlSchedule::new(segments[split..].to_vec());
        let s = propagate(&model, &all).unwrap();
        let composed = propagate(&model, &second).unwrap() * propagate(&model, &first).unwrap();
        prop_assert!((&s - &composed).norm() <= 1e-10 * s.norm());
        prop_assert!((s.determinant() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn covariance_keeps_symplectic_spectrum(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let w = random_symplectic(&mut r, n, 0.4);
        // thermal-like state: W diag(nu) W^T with nu >= 1/2
        let nu: Vec<f64> = (0..n).map(|_| r.random_range(0.5..3.0)).collect();
        let d = RealMatrix::from_fn(2 * n, 2 * n, |i, j| if i == j { nu[i / 2] } else { 0.0 });
        let sigma = CovarianceState::new_physical(&w * d * w.transpose(), 1e-9).unwrap();
        let s = random_symplectic(&mut r, n, 0.4);
        let out = evolve_covariance(&sigma, &s).unwrap();
        let before = sigma.symplectic_eigenvalues().unwrap();
        let after = out.symplectic_eigenvalues().unwrap();
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() <= 1e-7 * x.max(1.0));
        }
        prop_assert!(out.uncertainty_eigenvalue() > -1e-9);
    }
}
