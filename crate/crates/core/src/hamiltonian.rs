//! Quadratic Hamiltonians `H = 1/2 R^T A R` and their symplectic generators.
//!
//! Mode operators are `a_j = (q_j + i p_j)/sqrt(2)`. The term dictionary used
//! by [`from_terms`] (additive constants dropped):
//!
//! | term               | operator                     | quadratures        |
//! |--------------------|------------------------------|--------------------|
//! | `Number(j, w)`     | `w a_j^+ a_j`                | `w (q^2 + p^2)/2`  |
//! | `Hop(j, k, g)`     | `g (a_j a_k^+ + h.c.)`       | `g (qj qk + pj pk)`|
//! | `Pair(j, k, g)`    | `g (a_j a_k + h.c.)`         | `g (qj qk - pj pk)`|
//! | `Squeeze(j, c)`    | `c (a_j^2 + a_j^+2)`         | `c (q^2 - p^2)`    |

use crate::error::{Error, Result};
use crate::symplectic::{
    asymmetry, ensure_finite, smallest_eigenvalue, symmetric_spectral_norm, symplectic_form, ModeCount,
    RealMatrix,
};

/// Symmetry tolerance, relative to the largest entry (floored at 1).
const SYMMETRY_TOL: f64 = 1e-12;

/// A single mode-operator term. Mode indices are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianTerm {
    Number { mode: usize, coeff: f64 },
    Hop { modes: (usize, usize), coeff: f64 },
    Pair { modes: (usize, usize), coeff: f64 },
    Squeeze { mode: usize, coeff: f64 },
    /// A symmetric `2n x 2n` fragment added to `A` as is.
    Generic(RealMatrix),
}

impl HamiltonianTerm {
    pub fn number(mode: usize, coeff: f64) -> Self {
        Self::Number { mode, coeff }
    }

    pub fn hop(j: usize, k: usize, coeff: f64) -> Self {
        Self::Hop { modes: (j, k), coeff }
    }

    pub fn pair(j: usize, k: usize, coeff: f64) -> Self {
        Self::Pair { modes: (j, k), coeff }
    }

    pub fn squeeze(mode: usize, coeff: f64) -> Self {
        Self::Squeeze { mode, coeff }
    }

    fn kind(&self) -> &'static str {
        match self {
            Self::Number { .. } => "number",
            Self::Hop { .. } => "hop",
            Self::Pair { .. } => "pair",
            Self::Squeeze { .. } => "squeeze",
            Self::Generic(_) => "generic",
        }
    }

    /// Adds this term's contribution to `a`.
    fn accumulate(&self, n: ModeCount, a: &mut RealMatrix) -> Result<()> {
        let check = |mode: usize| -> Result<usize> {
            if mode == 0 || mode > n.get() {
                Err(Error::ModeIndex { index: mode, modes: n.get() })
            } else {
                Ok(mode - 1)
            }
        };
        let check_coeff = |c: f64| -> Result<()> {
            if c.is_finite() {
                Ok(())
            } else {
                Err(Error::NonFiniteCoefficient(self.kind()))
            }
        };
        let check_pair = |j: usize, k: usize| -> Result<(usize, usize)> {
            let (j0, k0) = (check(j)?, check(k)?);
            if j0 == k0 {
                return Err(Error::SameMode { kind: self.kind(), mode: j });
            }
            Ok((j0, k0))
        };
        match *self {
            Self::Number { mode, coeff } => {
                check_coeff(coeff)?;
                let j = check(mode)?;
                a[(2 * j, 2 * j)] += coeff;
                a[(2 * j + 1, 2 * j + 1)] += coeff;
            }
            Self::Squeeze { mode, coeff } => {
                check_coeff(coeff)?;
                let j = check(mode)?;
                a[(2 * j, 2 * j)] += 2.0 * coeff;
                a[(2 * j + 1, 2 * j + 1)] -= 2.0 * coeff;
            }
            Self::Hop { modes: (j, k), coeff } | Self::Pair { modes: (j, k), coeff } => {
                check_coeff(coeff)?;
                let (j, k) = check_pair(j, k)?;
                let pp = if matches!(self, Self::Hop { .. }) { coeff } else { -coeff };
                for (r, c) in [(j, k), (k, j)] {
                    a[(2 * r, 2 * c)] += coeff;
                    a[(2 * r + 1, 2 * c + 1)] += pp;
                }
            }
            Self::Generic(ref m) => {
                if m.shape() != a.shape() {
                    return Err(Error::Shape {
                        expected: format!("{0}x{0}", n.dim()),
                        found: format!("{}x{}", m.nrows(), m.ncols()),
                    });
                }
                ensure_finite(m)?;
                let asym = asymmetry(m);
                if asym > SYMMETRY_TOL * m.amax().max(1.0) {
                    return Err(Error::NotSymmetric { asymmetry: asym });
                }
                *a += m;
            }
        }
        Ok(())
    }
}

/// `H = 1/2 R^T A R` with `A` real symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    n: ModeCount,
    a: RealMatrix,
    label: String,
}

impl QuadraticHamiltonian {
    /// Wraps an explicit matrix, checking shape, finiteness and symmetry.
    pub fn new(a: RealMatrix, label: impl Into<String>) -> Result<Self> {
        let n = ModeCount::of_matrix(&a)?;
        ensure_finite(&a)?;
        let asym = asymmetry(&a);
        if asym > SYMMETRY_TOL * a.amax().max(1.0) {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        Ok(Self { n, a, label: label.into() })
    }

    pub fn zero(n: ModeCount, label: impl Into<String>) -> Self {
        Self { n, a: RealMatrix::zeros(n.dim(), n.dim()), label: label.into() }
    }

    pub fn modes(&self) -> ModeCount {
        self.n
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.a
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn min_eigenvalue(&self) -> f64 {
        smallest_eigenvalue(&self.a)
    }

    /// Smallest eigenvalue exceeds `tol * ||A||_2`.
    pub fn is_positive_definite(&self, tol: f64) -> bool {
        self.min_eigenvalue() > tol * symmetric_spectral_norm(&self.a)
    }

    /// Fails with the offending eigenvalue unless positive definite at `tol`.
    pub fn require_positive_definite(&self, tol: f64) -> Result<()> {
        let lo = self.min_eigenvalue();
        if lo > tol * symmetric_spectral_norm(&self.a) {
            Ok(())
        } else {
            Err(Error::NotPositiveDefinite { what: self.describe(), eigenvalue: lo })
        }
    }

    fn describe(&self) -> String {
        if self.label.is_empty() {
            "Hamiltonian".to_string()
        } else {
            format!("Hamiltonian '{}'", self.label)
        }
    }

    pub fn generator(&self) -> SymplecticGenerator {
        generator(self)
    }

    /// `sum_k c_k H_k` over Hamiltonians sharing a mode count.
    pub fn linear_combination(
        parts: &[(f64, &QuadraticHamiltonian)],
        label: impl Into<String>,
    ) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidParameter("empty linear combination".into()))?;
        let mut a = RealMatrix::zeros(first.1.a.nrows(), first.1.a.ncols());
        for (c, h) in parts {
            if h.n != first.1.n {
                return Err(Error::Shape {
                    expected: format!("{} modes", first.1.n),
                    found: format!("{} modes", h.n),
                });
            }
            a += &h.a * *c;
        }
        Ok(Self { n: first.1.n, a, label: label.into() })
    }
}

/// Assembles `A` from mode-operator terms. Terms are additive and order independent.
pub fn from_terms(n: ModeCount, terms: &[HamiltonianTerm], label: impl Into<String>) -> Result<QuadraticHamiltonian> {
    let mut a = RealMatrix::zeros(n.dim(), n.dim());
    for term in terms {
        term.accumulate(n, &mut a)?;
    }
    Ok(QuadraticHamiltonian { n, a, label: label.into() })
}

/// An element `G = -A Omega` of `sp(2n, R)`, representing `iH`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticGenerator {
    n: ModeCount,
    g: RealMatrix,
    source: String,
}

impl SymplecticGenerator {
    /// Accepts `g` if `G Omega` is symmetric to `tol` relative to `||G||_F`.
    pub fn new(g: RealMatrix, source: impl Into<String>, tol: f64) -> Result<Self> {
        let n = ModeCount::of_matrix(&g)?;
        ensure_finite(&g)?;
        let go = &g * symplectic_form(n);
        let asym = asymmetry(&go);
        if asym > tol * g.norm().max(1.0) {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        Ok(Self { n, g, source: source.into() })
    }

    pub(crate) fn from_parts(n: ModeCount, g: RealMatrix, source: String) -> Self {
        Self { n, g, source }
    }

    pub fn modes(&self) -> ModeCount {
        self.n
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.g
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.g
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Largest asymmetry of `G Omega`; zero for exact algebra members.
    pub fn membership_defect(&self) -> f64 {
        asymmetry(&(&self.g * symplectic_form(self.n)))
    }

    /// Recovers `A = G Omega` (symmetrized).
    pub fn hamiltonian(&self) -> QuadraticHamiltonian {
        let go = &self.g * symplectic_form(self.n);
        let a = (&go + go.transpose()) * 0.5;
        QuadraticHamiltonian { n: self.n, a, label: self.source.clone() }
    }
}

pub fn generator(h: &QuadraticHamiltonian) -> SymplecticGenerator {
    let g = -(&h.a * symplectic_form(h.n));
    SymplecticGenerator { n: h.n, g, source: h.label.clone() }
}

/// The Hamiltonian `C = A2 Omega A1 - A1 Omega A2`, so that `[iH1, iH2] = i C`
/// and `generator(C) = [generator(H1), generator(H2)]`.
pub fn bracket_hamiltonians(h1: &QuadraticHamiltonian, h2: &QuadraticHamiltonian) -> Result<QuadraticHamiltonian> {
    if h1.n != h2.n {
        return Err(Error::Shape { expected: format!("{} modes", h1.n), found: format!("{} modes", h2.n) });
    }
    let omega = symplectic_form(h1.n);
    let c = &h2.a * &omega * &h1.a - &h1.a * &omega * &h2.a;
    let c = (&c + c.transpose()) * 0.5;
    Ok(QuadraticHamiltonian { n: h1.n, a: c, label: format!("[{}, {}]", h1.label, h2.label) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::commutator;
    use approx::assert_abs_diff_eq;

    fn modes(n: usize) -> ModeCount {
        ModeCount::new(n).unwrap()
    }

    fn diag(v: &[f64]) -> RealMatrix {
        RealMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(v))
    }

    #[test]
    fn single_mode_terms() {
        let h = from_terms(modes(1), &[HamiltonianTerm::number(1, 0.7)], "").unwrap();
        assert_eq!(h.matrix(), &diag(&[0.7, 0.7]));
        let h = from_terms(modes(1), &[HamiltonianTerm::squeeze(1, 0.3)], "").unwrap();
        assert_eq!(h.matrix(), &diag(&[0.6, -0.6]));
    }

    #[test]
    fn hop_expands_to_identity_blocks() {
        let g = 0.35;
        let h = from_terms(modes(2), &[HamiltonianTerm::hop(1, 2, g)], "").unwrap();
        // g (a1 a2^+ + a1^+ a2) = g (q1 q2 + p1 p2) = 1/2 R^T A R with A_{q1 q2} = A_{q2 q1} = g.
        let mut expected = RealMatrix::zeros(4, 4);
        for (r, c) in [(0, 2), (2, 0), (1, 3), (3, 1)] {
            expected[(r, c)] = g;
        }
        assert_eq!(h.matrix(), &expected);
    }

    #[test]
    fn pair_expands_to_signed_blocks() {
        let h = from_terms(modes(2), &[HamiltonianTerm::pair(2, 1, 1.5)], "").unwrap();
        assert_eq!(h.matrix()[(0, 2)], 1.5);
        assert_eq!(h.matrix()[(1, 3)], -1.5);
        assert_eq!(h.matrix()[(3, 1)], -1.5);
        assert_eq!(h.matrix()[(0, 0)], 0.0);
    }

    #[test]
    fn term_errors() {
        let n = modes(2);
        assert_eq!(
            from_terms(n, &[HamiltonianTerm::number(3, 1.0)], ""),
            Err(Error::ModeIndex { index: 3, modes: 2 })
        );
        assert_eq!(
            from_terms(n, &[HamiltonianTerm::number(0, 1.0)], ""),
            Err(Error::ModeIndex { index: 0, modes: 2 })
        );
        assert_eq!(
            from_terms(n, &[HamiltonianTerm::hop(2, 2, 1.0)], ""),
            Err(Error::SameMode { kind: "hop", mode: 2 })
        );
        assert!(matches!(from_terms(n, &[HamiltonianTerm::pair(1, 1, 1.0)], ""), Err(Error::SameMode { .. })));
        assert!(matches!(
            from_terms(n, &[HamiltonianTerm::squeeze(1, f64::NAN)], ""),
            Err(Error::NonFiniteCoefficient("squeeze"))
        ));
        let mut asym = RealMatrix::zeros(4, 4);
        asym[(0, 1)] = 1.0;
        assert!(matches!(from_terms(n, &[HamiltonianTerm::Generic(asym)], ""), Err(Error::NotSymmetric { .. })));
        assert!(matches!(
            from_terms(n, &[HamiltonianTerm::Generic(RealMatrix::zeros(2, 2))], ""),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn explicit_matrix_validation() {
        assert!(QuadraticHamiltonian::new(RealMatrix::zeros(3, 3), "").is_err());
        let mut a = RealMatrix::identity(2, 2);
        a[(0, 1)] = 1e-3;
        assert!(matches!(QuadraticHamiltonian::new(a, ""), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn generator_examples() {
        let id = QuadraticHamiltonian::new(RealMatrix::identity(2, 2), "").unwrap();
        assert_eq!(generator(&id).matrix(), &RealMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        let p2 = QuadraticHamiltonian::new(diag(&[0.0, 2.0]), "p^2").unwrap();
        assert_eq!(generator(&p2).matrix(), &RealMatrix::from_row_slice(2, 2, &[0.0, 0.0, 2.0, 0.0]));
        let chi = 0.4;
        let sq = QuadraticHamiltonian::new(diag(&[2.0 * chi, -2.0 * chi]), "").unwrap();
        assert_eq!(
            generator(&sq).matrix(),
            &RealMatrix::from_row_slice(2, 2, &[0.0, -2.0 * chi, -2.0 * chi, 0.0])
        );
        assert!(generator(&sq).membership_defect() < 1e-12);
        assert_eq!(generator(&sq).hamiltonian().matrix(), sq.matrix());
    }

    #[test]
    fn generator_validation() {
        let bad = RealMatrix::identity(2, 2);
        assert!(SymplecticGenerator::new(bad, "", 1e-12).is_err());
        let ok = RealMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(SymplecticGenerator::new(ok, "", 1e-12).is_ok());
    }

    #[test]
    fn self_bracket_vanishes() {
        let h = from_terms(modes(2), &[HamiltonianTerm::number(1, 1.0), HamiltonianTerm::pair(1, 2, 0.3)], "").unwrap();
        assert_eq!(bracket_hamiltonians(&h, &h).unwrap().matrix(), &RealMatrix::zeros(4, 4));
    }

    #[test]
    fn squeeze_rotation_bracket_gives_qp_direction() {
        // 1/2 [i H2, i H1] with H2 = a^2 + a^+2, H1 = a^+ a is a^+2 - a^2 = -i (qp + pq),
        // i.e. i * 1/2 R^T C R with C = [[0, -2], [-2, 0]].
        let n = modes(1);
        let h2 = from_terms(n, &[HamiltonianTerm::squeeze(1, 1.0)], "").unwrap();
        let h1 = from_terms(n, &[HamiltonianTerm::number(1, 1.0)], "").unwrap();
        let half = bracket_hamiltonians(&h2, &h1).unwrap().matrix() * 0.5;
        assert_abs_diff_eq!(half, RealMatrix::from_row_slice(2, 2, &[0.0, -2.0, -2.0, 0.0]), epsilon = 1e-15);
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let a = QuadraticHamiltonian::zero(modes(1), "");
        let b = QuadraticHamiltonian::zero(modes(2), "");
        assert!(bracket_hamiltonians(&a, &b).is_err());
    }

    #[test]
    fn bracket_is_homomorphic_on_fixed_pair() {
        let n = modes(2);
        let h1 = from_terms(n, &[HamiltonianTerm::number(1, 0.9), HamiltonianTerm::hop(1, 2, 0.2)], "").unwrap();
        let h2 = from_terms(n, &[HamiltonianTerm::squeeze(2, 0.5), HamiltonianTerm::pair(1, 2, -0.3)], "").unwrap();
        let lhs = generator(&bracket_hamiltonians(&h1, &h2).unwrap()).into_matrix();
        let rhs = commutator(generator(&h1).matrix(), generator(&h2).matrix()).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-14);
    }

    #[test]
    fn positive_definiteness() {
        let omega = 1.3;
        let h = from_terms(modes(1), &[HamiltonianTerm::number(1, omega)], "").unwrap();
        assert_eq!(h.min_eigenvalue(), omega);
        assert!(h.is_positive_definite(1e-10));
        let p2 = QuadraticHamiltonian::new(diag(&[0.0, 2.0]), "p2").unwrap();
        assert!(!p2.is_positive_definite(1e-10));
        assert!(matches!(
            p2.require_positive_definite(1e-10),
            Err(Error::NotPositiveDefinite { eigenvalue, .. }) if eigenvalue == 0.0
        ));
    }
}
