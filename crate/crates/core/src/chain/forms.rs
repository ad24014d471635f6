//! Quadrature forms of the mode-operator expressions appearing in the chain
//! identities.
//!
//! Every element of the symplectic algebra is written `X = i H` with
//! `H = 1/2 R^T M R` Hermitian, and is stored as the real symmetric `M`.
//! Using `a_j = (q_j + i p_j)/sqrt 2` and dropping constants:
//!
//! | form                 | operator                         | expansion                      |
//! |----------------------|----------------------------------|--------------------------------|
//! | `Number(j)`          | `i a_j^+ a_j`                    | `i (q_j^2 + p_j^2)/2`          |
//! | `Hop(j, k)`          | `i (a_j^+ a_k + a_j a_k^+)`      | `i (q_j q_k + p_j p_k)`        |
//! | `Pair(j, k)`         | `i (a_j^+ a_k^+ + a_j a_k)`      | `i (q_j q_k - p_j p_k)`        |
//! | `Squeeze(j)`         | `i (a_j^+2 + a_j^2)`             | `i (q_j^2 - p_j^2)`            |
//! | `Exchange(j, k)`     | `a_j a_k^+ - a_j^+ a_k`          | `i (p_j q_k - q_j p_k)`        |
//! | `TwoModeSqueeze(j,k)`| `a_j^+ a_k^+ - a_j a_k`          | `-i (q_j p_k + p_j q_k)`       |
//! | `SingleSqueeze(j)`   | `a_j^+2 - a_j^2`                 | `-i (q_j p_j + p_j q_j)`       |
//!
//! Derivations (products of distinct modes commute):
//! - `a^+ a = (q - ip)(q + ip)/2 = (q^2 + p^2 + i[q, p])/2 = (q^2 + p^2 - 1)/2`.
//! - `a_j^+ a_k = (q_j q_k + p_j p_k + i(q_j p_k - p_j q_k))/2`; adding the
//!   conjugate `a_j a_k^+` cancels the imaginary part, subtracting it
//!   (`a_j a_k^+ - a_j^+ a_k`) leaves `i(p_j q_k - q_j p_k)`.
//! - `a_j a_k = (q_j q_k - p_j p_k + i(q_j p_k + p_j q_k))/2`; with its
//!   conjugate the sum is `q_j q_k - p_j p_k` and `a_j^+ a_k^+ - a_j a_k` is
//!   `-i(q_j p_k + p_j q_k)`.
//! - `a^2 = (q^2 - p^2 + i(qp + pq))/2`, so `a^2 + a^+2 = q^2 - p^2` and
//!   `a^+2 - a^2 = -i(qp + pq)`.

use crate::symplectic::{ModeCount, RealMatrix};

/// Mode-operator expression; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeForm {
    Number(usize),
    Hop(usize, usize),
    Pair(usize, usize),
    Squeeze(usize),
    Exchange(usize, usize),
    TwoModeSqueeze(usize, usize),
    SingleSqueeze(usize),
}

fn q(j: usize) -> usize {
    2 * (j - 1)
}

fn p(j: usize) -> usize {
    2 * (j - 1) + 1
}

/// Adds `c x_a x_b` (symmetrized) to the form `1/2 R^T M R`.
fn add_monomial(m: &mut RealMatrix, a: usize, b: usize, c: f64) {
    if a == b {
        m[(a, a)] += 2.0 * c;
    } else {
        m[(a, b)] += c;
        m[(b, a)] += c;
    }
}

impl ModeForm {
    /// The symmetric `M` with `X = i (1/2 R^T M R)`.
    pub fn matrix(self, n: ModeCount) -> RealMatrix {
        let mut m = RealMatrix::zeros(n.dim(), n.dim());
        match self {
            Self::Number(j) => {
                add_monomial(&mut m, q(j), q(j), 0.5);
                add_monomial(&mut m, p(j), p(j), 0.5);
            }
            Self::Hop(j, k) => {
                add_monomial(&mut m, q(j), q(k), 1.0);
                add_monomial(&mut m, p(j), p(k), 1.0);
            }
            Self::Pair(j, k) => {
                add_monomial(&mut m, q(j), q(k), 1.0);
                add_monomial(&mut m, p(j), p(k), -1.0);
            }
            Self::Squeeze(j) => {
                add_monomial(&mut m, q(j), q(j), 1.0);
                add_monomial(&mut m, p(j), p(j), -1.0);
            }
            Self::Exchange(j, k) => {
                add_monomial(&mut m, p(j), q(k), 1.0);
                add_monomial(&mut m, q(j), p(k), -1.0);
            }
            Self::TwoModeSqueeze(j, k) => {
                add_monomial(&mut m, q(j), p(k), -1.0);
                add_monomial(&mut m, p(j), q(k), -1.0);
            }
            Self::SingleSqueeze(j) => {
                // -(qp + pq) = -2 sym(qp)
                add_monomial(&mut m, q(j), p(j), -2.0);
            }
        }
        m
    }
}


#[cfg(test)]
mod tests {
    use super::oracle::{element, Op};
    use super::*;
    use num_complex::Complex64;

    const ONE: Complex64 = Complex64::new(1.0, 0.0);
    const I: Complex64 = Complex64::new(0.0, 1.0);

    #[test]
    fn table_matches_operator_expansion() {
        let n = ModeCount::new(3).unwrap();
        let d = n.dim();
        let (j, k) = (1, 3);
        use Op::{Ad, A};
        let cases = [
            (ModeForm::Number(j), element(d, I, &[(ONE, Ad(j), A(j))])),
            (ModeForm::Hop(j, k), element(d, I, &[(ONE, Ad(j), A(k)), (ONE, A(j), Ad(k))])),
            (ModeForm::Pair(j, k), element(d, I, &[(ONE, Ad(j), Ad(k)), (ONE, A(j), A(k))])),
            (ModeForm::Squeeze(k), element(d, I, &[(ONE, Ad(k), Ad(k)), (ONE, A(k), A(k))])),
            (ModeForm::Exchange(j, k), element(d, ONE, &[(ONE, A(j), Ad(k)), (-ONE, Ad(j), A(k))])),
            (ModeForm::TwoModeSqueeze(j, k), element(d, ONE, &[(ONE, Ad(j), Ad(k)), (-ONE, A(j), A(k))])),
            (ModeForm::SingleSqueeze(j), element(d, ONE, &[(ONE, Ad(j), Ad(j)), (-ONE, A(j), A(j))])),
        ];
        for (form, expected) in cases {
            let got = form.matrix(n);
            assert!((&got - &expected).norm() < 1e-14, "{form:?}: {got} vs {expected}");
        }
    }
}
