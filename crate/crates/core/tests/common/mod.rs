#![allow(dead_code)]

use gaussctl::{expm, ModeCount, QuadraticHamiltonian, RealMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn modes(n: usize) -> ModeCount {
    ModeCount::new(n).unwrap()
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, scale: f64) -> RealMatrix {
    let d = 2 * n;
    let b = RealMatrix::from_fn(d, d, |_, _| rng.random_range(-scale..scale));
    (&b + b.transpose()) * 0.5
}

/// Positive definite with spectrum log-uniform in `[s, s * max_cond]`.
pub fn random_pd(rng: &mut impl Rng, n: usize, max_cond: f64) -> RealMatrix {
    let d = 2 * n;
    let q = RealMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0)).qr().q();
    let s: f64 = rng.random_range(0.1..10.0);
    let eig = nalgebra::DVector::from_fn(d, |_, _| s * max_cond.powf(rng.random_range(0.0..1.0)));
    let a = &q * RealMatrix::from_diagonal(&eig) * q.transpose();
    (&a + a.transpose()) * 0.5
}

pub fn ham(a: RealMatrix) -> QuadraticHamiltonian {
    QuadraticHamiltonian::new(a, "random").unwrap()
}

/// `exp(-A Omega)` for a random symmetric `A` of size `scale`.
pub fn random_symplectic(rng: &mut impl Rng, n: usize, scale: f64) -> RealMatrix {
    let g = ham(random_symmetric(rng, n, scale)).generator().into_matrix();
    expm(&g, 1.0).unwrap()
}
