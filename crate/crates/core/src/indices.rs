//! Ascent and descent of square matrices.
//!
//! The ascent is the least k with ker(Aᵏ) = ker(Aᵏ⁺¹) and the descent the
//! least k with range(Aᵏ) = range(Aᵏ⁺¹). Because the kernel chain only grows
//! and the range chain only shrinks, equality of consecutive members is
//! equality of their dimensions; [`ChainCheck::Subspace`] compares the
//! canonical subspaces instead, as an independent cross-check of the
//! elimination code. In dimension n both chains settle by k = n, so the
//! infinite value of the general definition never occurs here.
//!
//! [`ascent_via_minpoly`] is a third route: the multiplicity of 0 as a root
//! of the minimal polynomial.

use serde::Serialize;

use crate::error::AlgebraError;
use crate::matrix::Matrix;
use crate::polynomial::{minimal_polynomial, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChainCheck {
    #[default]
    Dimension,
    Subspace,
}

pub fn ascent(a: &Matrix) -> Result<usize, AlgebraError> {
    ascent_with(a, ChainCheck::Dimension)
}

pub fn descent(a: &Matrix) -> Result<usize, AlgebraError> {
    descent_with(a, ChainCheck::Dimension)
}

pub fn ascent_with(a: &Matrix, check: ChainCheck) -> Result<usize, AlgebraError> {
    let n = a.require_square()?;
    let mut power = Matrix::identity(a.field(), n);
    match check {
        ChainCheck::Dimension => {
            let mut prev = 0;
            for k in 0..=n {
                power = power.mat_mul(a)?;
                let next = power.kernel_basis().len();
                if next == prev {
                    return Ok(k);
                }
                prev = next;
            }
        }
        ChainCheck::Subspace => {
            let mut prev = power.kernel();
            for k in 0..=n {
                power = power.mat_mul(a)?;
                let next = power.kernel();
                if next == prev {
                    return Ok(k);
                }
                prev = next;
            }
        }
    }
    unreachable!("the kernel chain of an n x n matrix is stable from k = n on")
}

pub fn descent_with(a: &Matrix, check: ChainCheck) -> Result<usize, AlgebraError> {
    let n = a.require_square()?;
    let mut power = Matrix::identity(a.field(), n);
    match check {
        ChainCheck::Dimension => {
            let mut prev = n;
            for k in 0..=n {
                power = power.mat_mul(a)?;
                let next = power.rank();
                if next == prev {
                    return Ok(k);
                }
                prev = next;
            }
        }
        ChainCheck::Subspace => {
            let mut prev = power.image();
            for k in 0..=n {
                power = power.mat_mul(a)?;
                let next = power.image();
                if next == prev {
                    return Ok(k);
                }
                prev = next;
            }
        }
    }
    unreachable!("the range chain of an n x n matrix is stable from k = n on")
}

/// Multiplicity of λ = 0 in the minimal polynomial.
pub fn ascent_via_minpoly(a: &Matrix) -> Result<usize, AlgebraError> {
    Ok(minimal_polynomial(a)?.zero_root_multiplicity())
}

/// Least k with aᵏ = 0, or `None` when `a` is not nilpotent.
pub fn nilindex(a: &Matrix) -> Result<Option<usize>, AlgebraError> {
    let n = a.require_square()?;
    let mut power = Matrix::identity(a.field(), n);
    for k in 1..=n.max(1) {
        power = power.mat_mul(a)?;
        if power.is_zero() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub ascent: usize,
    pub descent: usize,
    /// dim ker(aᵏ) for k = 0, 1, … up to the first repeated value.
    pub kernel_dims: Vec<usize>,
    /// rank(aᵏ) over the same range of k.
    pub image_dims: Vec<usize>,
    pub minpoly: Polynomial,
    pub zero_root_multiplicity: usize,
}

pub fn index_report(a: &Matrix) -> Result<IndexReport, AlgebraError> {
    let n = a.require_square()?;
    let mut power = Matrix::identity(a.field(), n);
    let mut kernel_dims = vec![0];
    let mut image_dims = vec![n];
    loop {
        power = power.mat_mul(a)?;
        let r = power.rank();
        let settled = image_dims.last() == Some(&r);
        kernel_dims.push(n - r);
        image_dims.push(r);
        if settled {
            break;
        }
    }
    let ascent = ascent(a)?;
    let descent = descent(a)?;
    let minpoly = minimal_polynomial(a)?;
    let zero_root_multiplicity = minpoly.zero_root_multiplicity();
    Ok(IndexReport {
        ascent,
        descent,
        kernel_dims,
        image_dims,
        minpoly,
        zero_root_multiplicity,
    })
}

impl IndexReport {
    /// Checks the chain-shape invariants and the agreement of all three
    /// index computations.
    pub fn is_consistent(&self) -> bool {
        let k = self.kernel_dims.len() - 1;
        let strictly_until = |dims: &[usize], idx: usize, increasing: bool| {
            dims.windows(2).enumerate().all(|(i, w)| {
                let moved = if increasing { w[1] > w[0] } else { w[1] < w[0] };
                if i < idx {
                    moved
                } else {
                    w[0] == w[1]
                }
            })
        };
        self.ascent == self.descent
            && self.ascent == self.zero_root_multiplicity
            && k == self.ascent + 1
            && strictly_until(&self.kernel_dims, self.ascent, true)
            && strictly_until(&self.image_dims, self.descent, false)
    }
}

#[derive(Serialize)]
struct IndexReportJson<'a> {
    ascent: usize,
    descent: usize,
    kernel_dims: &'a [usize],
    image_dims: &'a [usize],
    minpoly: String,
    minpoly_coefficients: Vec<String>,
    zero_root_multiplicity: usize,
}

impl Serialize for IndexReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IndexReportJson {
            ascent: self.ascent,
            descent: self.descent,
            kernel_dims: &self.kernel_dims,
            image_dims: &self.image_dims,
            minpoly: self.minpoly.to_string(),
            minpoly_coefficients: self.minpoly.coefficients().iter().map(|c| c.to_string()).collect(),
            zero_root_multiplicity: self.zero_root_multiplicity,
        }
        .serialize(s)
    }
}
