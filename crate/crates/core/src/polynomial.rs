//! Univariate polynomials and matrix minimal polynomials.

use std::fmt;

use crate::error::AlgebraError;
use crate::field::{Field, FieldElem};
use crate::matrix::Matrix;

/// Coefficients lowest degree first, with no trailing zeros. The zero
/// polynomial has no coefficients and no degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl Polynomial {
    pub fn new(field: Field, mut coeffs: Vec<FieldElem>) -> Self {
        assert!(coeffs.iter().all(|c| c.field() == field), "coefficient field mismatch");
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: Field) -> Self {
        Self::new(field, vec![FieldElem::one(field)])
    }

    /// λ
    pub fn x(field: Field) -> Self {
        Self::new(field, vec![FieldElem::zero(field), FieldElem::one(field)])
    }

    /// λ − root
    pub fn linear(root: &FieldElem) -> Self {
        let f = root.field();
        Self::new(f, vec![-root, FieldElem::one(f)])
    }

    /// ∏ (λ − r)
    pub fn from_roots(field: Field, roots: &[FieldElem]) -> Self {
        roots
            .iter()
            .fold(Self::one(field), |acc, r| acc.mul(&Self::linear(r)))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coefficients(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.inverse().expect("leading coefficient is nonzero");
                Self::new(self.field, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![FieldElem::zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(self.field, out)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(Self::one(self.field), |acc, _| acc.mul(self))
    }

    /// Multiplicity of 0 as a root: the number of vanishing low-order
    /// coefficients. Zero for the zero polynomial by convention.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count().min(self.coeffs.len())
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElem::zero(self.field), |acc, c| &(&acc * x) + c)
    }

    /// p(M) by Horner's rule.
    pub fn eval_matrix(&self, m: &Matrix) -> Result<Matrix, AlgebraError> {
        let n = m.require_square()?;
        let mut acc = Matrix::zeros(m.field(), n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mat_mul(m)?.shift(c)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Polynomial {
    /// `x^3 - 2x + 1/2`; GF(p²) coefficients with an ω part are parenthesised.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = match c {
                FieldElem::Rational(r) if r < &num_rational::BigRational::from_integer(0.into()) => {
                    (true, FieldElem::Rational(-r))
                }
                _ => (false, c.clone()),
            };
            let text = mag.to_string();
            let text = if text.contains('+') { format!("({text})") } else { text };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef_shown = !(mag.is_one() && k > 0);
            if coef_shown {
                write!(f, "{text}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// The monic polynomial of least degree annihilating `m`, found as the first
/// linear dependence among the flattened powers I, m, m², ….
pub fn minimal_polynomial(m: &Matrix) -> Result<Polynomial, AlgebraError> {
    let n = m.require_square()?;
    let field = m.field();
    let mut powers = vec![Matrix::identity(field, n).vectorize()];
    let mut current = Matrix::identity(field, n);
    for k in 1..=n.max(1) {
        current = current.mat_mul(m)?;
        powers.push(current.vectorize());
        let krylov = Matrix::from_columns(field, n * n, &powers);
        let kernel = krylov.kernel_basis();
        if let Some(rel) = kernel.first() {
            debug_assert_eq!(kernel.len(), 1, "lower powers are independent");
            debug_assert!(!rel[k].is_zero());
            return Ok(Polynomial::new(field, rel.clone()).monic());
        }
    }
    unreachable!("Cayley-Hamilton bounds the degree by n")
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn q(n: i64) -> FieldElem {
        FieldElem::from_i64(Q, n)
    }

    #[test]
    fn degree_and_monic() {
        let p = Polynomial::new(Q, vec![q(2), q(4), q(0)]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.monic(), Polynomial::new(Q, vec![FieldElem::from_ratio(Q, 1, 2).unwrap(), q(1)]));
        assert_eq!(Polynomial::zero(Q).degree(), None);
    }

    #[test]
    fn display() {
        let p = Polynomial::from_roots(Q, &[q(0), q(0), q(1)]);
        assert_eq!(p.to_string(), "x^3 - x^2");
        let p = Polynomial::new(Q, vec![FieldElem::from_ratio(Q, -1, 2).unwrap(), q(-3), q(0), q(1)]);
        assert_eq!(p.to_string(), "x^3 - 3x - 1/2");
        assert_eq!(Polynomial::zero(Q).to_string(), "0");
    }

    #[test]
    fn minimal_polynomials_of_small_matrices() {
        assert_eq!(
            minimal_polynomial(&Matrix::identity(Q, 3)).unwrap(),
            Polynomial::linear(&q(1))
        );
        assert_eq!(
            minimal_polynomial(&Matrix::zeros(Q, 3, 3)).unwrap(),
            Polynomial::x(Q)
        );
        let jordan = Matrix::from_i64(Q, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(minimal_polynomial(&jordan).unwrap(), Polynomial::x(Q).pow(3));
        let d = Matrix::diag(&[q(2), q(2), q(3)]);
        assert_eq!(
            minimal_polynomial(&d).unwrap(),
            Polynomial::from_roots(Q, &[q(2), q(3)])
        );
    }

    #[test]
    fn zero_root_multiplicity_counts_low_zeros() {
        let p = Polynomial::from_roots(Q, &[q(0), q(0), q(-2)]);
        assert_eq!(p.zero_root_multiplicity(), 2);
        assert_eq!(Polynomial::one(Q).zero_root_multiplicity(), 0);
    }
}
