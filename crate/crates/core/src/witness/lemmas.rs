//! The fixed witness families and their index claims.

use std::collections::BTreeMap;

use serde::Serialize;

use super::WitnessError;
use crate::field::{Field, FieldElem};
use crate::indices::{ascent, descent, nilindex};
use crate::matrix::Matrix;
use crate::polynomial::{minimal_polynomial, Polynomial};

fn c(field: Field, n: i64) -> FieldElem {
    FieldElem::from_i64(field, n)
}

fn m3(rows: [[FieldElem; 3]; 3]) -> Matrix {
    let field = rows[0][0].field();
    Matrix::from_rows(field, rows.into_iter().map(Vec::from).collect()).expect("3x3")
}

fn m4(rows: [[FieldElem; 4]; 4]) -> Matrix {
    let field = rows[0][0].field();
    Matrix::from_rows(field, rows.into_iter().map(Vec::from).collect()).expect("4x4")
}

/// diag(1, 1, a)
pub fn c_matrix(a: &FieldElem) -> Matrix {
    let f = a.field();
    Matrix::diag(&[c(f, 1), c(f, 1), a.clone()])
}

/// T_a; needs a ≠ 1.
pub fn t_a(a: &FieldElem) -> Result<Matrix, WitnessError> {
    let f = a.field();
    let inv = (a - &c(f, 1)).inverse()?;
    Ok(m3([
        [c(f, 1), c(f, 1), c(f, 1)],
        [inv.clone(), c(f, 0), c(f, 0)],
        [-&inv, c(f, 0), c(f, 0)],
    ]))
}

/// I + u·E₁₂
pub fn a0(u: &FieldElem) -> Matrix {
    let f = u.field();
    let mut m = Matrix::identity(f, 3);
    m.set(0, 1, u.clone());
    m
}

/// The third matrix of the (u, v) family; needs 2(v − u) ≠ 0.
pub fn t_uv(u: &FieldElem, v: &FieldElem) -> Result<Matrix, WitnessError> {
    let f = u.field();
    let corner = (&c(f, 2) * &(v - u)).inverse()?;
    Ok(m3([
        [&c(f, -2) * u, c(f, 0), c(f, 0)],
        [c(f, 1), c(f, 0), c(f, 0)],
        [corner, c(f, 1), c(f, 0)],
    ]))
}

/// (A, B, T) with TAT ~ diag(0,1,2) and TBT = E₂₁.
pub fn three_by_three_triple(field: Field) -> (Matrix, Matrix, Matrix) {
    let a = Matrix::from_i64(field, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
    let b = Matrix::from_i64(field, &[&[0, 0, 0], &[0, 0, 0], &[0, 0, -1]]);
    let t = Matrix::from_i64(field, &[&[1, 1, 0], &[1, 0, 1], &[-1, 0, 0]]);
    (a, b, t)
}

/// The 4×4 block operator A(a, b): companion blocks of λ² − aλ − b.
pub fn a_ab(a: &FieldElem, b: &FieldElem) -> Matrix {
    let f = a.field();
    let z = || c(f, 0);
    m4([
        [z(), b.clone(), z(), z()],
        [c(f, 1), a.clone(), z(), z()],
        [z(), z(), z(), b.clone()],
        [z(), z(), c(f, 1), a.clone()],
    ])
}

/// w·I + A(a, b)
pub fn b_abw(a: &FieldElem, b: &FieldElem, w: &FieldElem) -> Matrix {
    a_ab(a, b).shift(w).expect("square")
}

/// Lower triangular with unit subdiagonal and t on the second subdiagonal.
pub fn n_t(t: &FieldElem) -> Matrix {
    let f = t.field();
    let z = || c(f, 0);
    m4([
        [z(), z(), z(), z()],
        [c(f, 1), z(), z(), z()],
        [t.clone(), c(f, 1), z(), z()],
        [z(), t.clone(), c(f, 1), z()],
    ])
}

/// I + N(0)
pub fn m_unipotent(field: Field) -> Matrix {
    n_t(&FieldElem::zero(field)).shift(&FieldElem::one(field)).expect("square")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub statement: String,
    pub expected: String,
    pub actual: String,
    pub holds: bool,
}

/// Named matrices with every claim about them recomputed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessBundle {
    pub name: String,
    pub field: Field,
    pub inputs: BTreeMap<String, String>,
    pub matrices: Vec<(String, Matrix)>,
    pub claims: Vec<Claim>,
}

impl WitnessBundle {
    fn new(name: &str, field: Field) -> Self {
        Self {
            name: name.to_string(),
            field,
            inputs: BTreeMap::new(),
            matrices: Vec::new(),
            claims: Vec::new(),
        }
    }

    fn input(&mut self, key: &str, value: &FieldElem) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    fn matrix(&mut self, name: &str, m: &Matrix) {
        self.matrices.push((name.to_string(), m.clone()));
    }

    fn claim(&mut self, statement: String, expected: String, actual: String) {
        let holds = expected == actual;
        self.claims.push(Claim { statement, expected, actual, holds });
    }

    fn claim_indices(&mut self, expr: &str, m: &Matrix, index: usize) -> Result<(), WitnessError> {
        let got = (ascent(m)?, descent(m)?);
        self.claim(
            format!("(ascent, descent) of {expr}"),
            format!("({index}, {index})"),
            format!("({}, {})", got.0, got.1),
        );
        Ok(())
    }

    fn claim_minpoly(&mut self, expr: &str, m: &Matrix, expected: &Polynomial) -> Result<(), WitnessError> {
        let got = minimal_polynomial(m)?;
        self.claim(format!("minimal polynomial of {expr}"), expected.to_string(), got.to_string());
        Ok(())
    }

    fn claim_equal(&mut self, expr: &str, m: &Matrix, expected: &Matrix) {
        self.claim(format!("{expr} equals"), expected.to_string(), m.to_string());
    }

    pub fn get(&self, name: &str) -> Option<&Matrix> {
        self.matrices.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    pub fn all_hold(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }

    /// Turns the first failed claim into an error.
    pub fn verified(self) -> Result<Self, WitnessError> {
        match self.claims.iter().find(|c| !c.holds) {
            None => Ok(self),
            Some(c) => Err(WitnessError::ClaimFailed {
                lemma: self.name.clone(),
                claim: format!("{}: expected {}, got {}", c.statement, c.expected, c.actual),
            }),
        }
    }
}

fn same_field(xs: &[&FieldElem]) -> Result<Field, WitnessError> {
    let f = xs[0].field();
    if xs.iter().any(|x| x.field() != f) {
        return Err(WitnessError::Precondition("parameters from different fields".into()));
    }
    Ok(f)
}

fn lambda(f: Field) -> Polynomial {
    Polynomial::x(f)
}

/// T_a·C_a·T_a has index 3 and T_a·C_b·T_a index 2. The bundle is built
/// even when a claim fails; [`lemma_list_bundle`] rejects such bundles.
pub fn build_lemma_list(a: &FieldElem, b: &FieldElem) -> Result<WitnessBundle, WitnessError> {
    let f = same_field(&[a, b])?;
    let one = c(f, 1);
    if a == &one || b == &one || a == b {
        return Err(WitnessError::Precondition("need a, b ≠ 1 and a ≠ b".into()));
    }
    let ta = t_a(a)?;
    let (ca, cb) = (c_matrix(a), c_matrix(b));
    let tcat = ta.mat_mul(&ca)?.mat_mul(&ta)?;
    let tcbt = ta.mat_mul(&cb)?.mat_mul(&ta)?;
    let mut bundle = WitnessBundle::new("list", f);
    bundle.input("a", a);
    bundle.input("b", b);
    for (name, m) in [("C_a", &ca), ("C_b", &cb), ("T_a", &ta), ("T_a C_a T_a", &tcat), ("T_a C_b T_a", &tcbt)] {
        bundle.matrix(name, m);
    }
    bundle.claim_indices("T_a C_a T_a", &tcat, 3)?;
    bundle.claim_indices("T_a C_b T_a", &tcbt, 2)?;
    bundle.claim(
        "nilindex of T_a C_a T_a".into(),
        "Some(3)".into(),
        format!("{:?}", nilindex(&tcat)?),
    );
    bundle.claim_minpoly("T_a", &ta, &Polynomial::from_roots(f, &[c(f, 0), c(f, 0), one.clone()]))?;
    let root = (a - b).checked_div(&(a - &one))?;
    bundle.claim_minpoly("T_a C_b T_a", &tcbt, &lambda(f).pow(2).mul(&Polynomial::linear(&root)))?;
    Ok(bundle)
}

pub fn lemma_list_bundle(a: &FieldElem, b: &FieldElem) -> Result<WitnessBundle, WitnessError> {
    build_lemma_list(a, b)?.verified()
}

pub fn build_lemma_12(u: &FieldElem, v: &FieldElem) -> Result<WitnessBundle, WitnessError> {
    let f = same_field(&[u, v])?;
    if u.is_zero() || v.is_zero() || u == v {
        return Err(WitnessError::Precondition("need u, v ≠ 0 and u ≠ v".into()));
    }
    let t = t_uv(u, v)?;
    let (a, b) = (a0(u), a0(v));
    let ata = a.mat_mul(&t)?.mat_mul(&a)?;
    let btb = b.mat_mul(&t)?.mat_mul(&b)?;
    let mut bundle = WitnessBundle::new("12", f);
    bundle.input("u", u);
    bundle.input("v", v);
    for (name, m) in [("A_0", &a), ("B_0", &b), ("T", &t), ("A_0 T A_0", &ata), ("B_0 T B_0", &btb)] {
        bundle.matrix(name, m);
    }
    bundle.claim_indices("A_0 T A_0", &ata, 3)?;
    bundle.claim_indices("B_0 T B_0", &btb, 2)?;
    bundle.claim_minpoly("T", &t, &lambda(f).pow(2).mul(&Polynomial::linear(&(&c(f, -2) * u))))?;
    let root = &c(f, 2) * &(v - u);
    bundle.claim_minpoly("B_0 T B_0", &btb, &lambda(f).pow(2).mul(&Polynomial::linear(&root)))?;
    Ok(bundle)
}

pub fn lemma_12_bundle(u: &FieldElem, v: &FieldElem) -> Result<WitnessBundle, WitnessError> {
    build_lemma_12(u, v)?.verified()
}

pub fn build_lemma_125(field: Field) -> Result<WitnessBundle, WitnessError> {
    if field.characteristic() == 2 {
        return Err(WitnessError::Precondition("needs characteristic other than 2".into()));
    }
    let (a, b, t) = three_by_three_triple(field);
    let tat = t.mat_mul(&a)?.mat_mul(&t)?;
    let tbt = t.mat_mul(&b)?.mat_mul(&t)?;
    let mut bundle = WitnessBundle::new("125", field);
    for (name, m) in [("A", &a), ("B", &b), ("T", &t), ("TAT", &tat), ("TBT", &tbt)] {
        bundle.matrix(name, m);
    }
    bundle.claim_indices("TAT", &tat, 1)?;
    bundle.claim_indices("TBT", &tbt, 2)?;
    bundle.claim_equal("TBT", &tbt, &Matrix::unit(field, 3, 1, 0));
    bundle.claim_minpoly("T", &t, &Polynomial::from_roots(field, &[c(field, -1), c(field, 1), c(field, 1)]))?;
    // Three distinct simple roots: TAT is diagonalizable with spectrum {0, 1, 2}.
    bundle.claim_minpoly("TAT", &tat, &Polynomial::from_roots(field, &[c(field, 0), c(field, 1), c(field, 2)]))?;
    Ok(bundle)
}

pub fn lemma_125_bundle(field: Field) -> Result<WitnessBundle, WitnessError> {
    build_lemma_125(field)?.verified()
}

/// Branch (a) for b ≠ 0 with t₀ = −(a + 2w)/(2b); branch (b) for a = b = 0.
pub fn build_lemma_13(a: &FieldElem, b: &FieldElem, w: &FieldElem) -> Result<WitnessBundle, WitnessError> {
    let f = same_field(&[a, b, w])?;
    if w.is_zero() {
        return Err(WitnessError::Precondition("need w ≠ 0".into()));
    }
    if f.characteristic() == 2 {
        return Err(WitnessError::Precondition("needs characteristic other than 2".into()));
    }
    let am = a_ab(a, b);
    let bm = b_abw(a, b, w);
    let mut bundle = WitnessBundle::new("13", f);
    bundle.input("a", a);
    bundle.input("b", b);
    bundle.input("w", w);
    bundle.matrix("A(a,b)", &am);
    bundle.matrix("B(a,b,w)", &bm);
    let two = c(f, 2);
    let e41 = Matrix::unit(f, 4, 3, 0);
    if !b.is_zero() {
        let t0 = (a + &(&two * w)).neg_ref().checked_div(&(&two * b))?;
        bundle.input("t0", &t0);
        let n = n_t(&t0);
        let nan = n.mat_mul(&am)?.mat_mul(&n)?;
        let nbn = n.mat_mul(&bm)?.mat_mul(&n)?;
        bundle.matrix("N", &n);
        bundle.matrix("NAN", &nan);
        bundle.matrix("NBN", &nbn);
        bundle.claim_indices("NAN", &nan, 3)?;
        bundle.claim_indices("NBN", &nbn, 2)?;
        let sq = b * &(a + &(&two * &(b * &t0)));
        bundle.claim("b(a + 2b t0) is nonzero".into(), "true".into(), (!sq.is_zero()).to_string());
        bundle.claim_equal("(NAN)^2", &nan.pow(2)?, &e41.scale(&sq)?);
        let z = || c(f, 0);
        let displayed_nan = m4([
            [z(), z(), z(), z()],
            [b.clone(), z(), z(), z()],
            [a + &(b * &t0), z(), z(), z()],
            [a * &t0, b * &t0, b.clone(), z()],
        ]);
        bundle.claim_equal("NAN", &nan, &displayed_nan);
        let displayed_nbn = m4([
            [z(), z(), z(), z()],
            [b.clone(), z(), z(), z()],
            [&(a + &(b * &t0)) + w, z(), z(), z()],
            [&t0 * &(&(&two * w) + a), &(b * &t0) + w, b.clone(), z()],
        ]);
        bundle.claim_equal("NBN", &nbn, &displayed_nbn);
        bundle.claim_equal("(NBN)^2", &nbn.pow(2)?, &Matrix::zeros(f, 4, 4));
    } else if a.is_zero() {
        let m = m_unipotent(f);
        let mam = m.mat_mul(&am)?.mat_mul(&m)?;
        let mbm = m.mat_mul(&bm)?.mat_mul(&m)?;
        bundle.matrix("M", &m);
        bundle.matrix("MAM", &mam);
        bundle.matrix("MBM", &mbm);
        bundle.claim("nilindex of MAM".into(), "Some(3)".into(), format!("{:?}", nilindex(&mam)?));
        bundle.claim_indices("MAM", &mam, 3)?;
        bundle.claim("MBM is invertible".into(), "true".into(), mbm.is_invertible().to_string());
        bundle.claim_indices("MBM", &mbm, 0)?;
        bundle.claim_equal("MAM", &mam, &Matrix::from_i64(f, &[&[0, 0, 0, 0], &[1, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 1, 0]]));
        let (one, w2) = (c(f, 1), &two * w);
        let z = || c(f, 0);
        let displayed_mbm = m4([
            [w.clone(), z(), z(), z()],
            [&one + &w2, w.clone(), z(), z()],
            [&one + w, w2.clone(), w.clone(), z()],
            [z(), &one + w, &one + &w2, w.clone()],
        ]);
        bundle.claim_equal("MBM", &mbm, &displayed_mbm);
    } else {
        return Err(WitnessError::Precondition("b = 0 requires a = 0".into()));
    }
    Ok(bundle)
}

pub fn lemma_13_bundle(a: &FieldElem, b: &FieldElem, w: &FieldElem) -> Result<WitnessBundle, WitnessError> {
    build_lemma_13(a, b, w)?.verified()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn q(n: i64) -> FieldElem {
        FieldElem::from_i64(Q, n)
    }

    #[test]
    fn list_family() {
        let b = lemma_list_bundle(&q(2), &q(3)).unwrap();
        assert_eq!(
            b.get("T_a C_a T_a").unwrap(),
            &Matrix::from_i64(Q, &[&[0, 1, 1], &[1, 1, 1], &[-1, -1, -1]])
        );
        assert!(lemma_list_bundle(&q(1), &q(2)).is_err());
        assert!(lemma_list_bundle(&q(2), &q(2)).is_err());
    }

    #[test]
    fn uv_family() {
        lemma_12_bundle(&q(1), &q(2)).unwrap();
        assert!(lemma_12_bundle(&q(1), &q(1)).is_err());
        assert!(lemma_12_bundle(&q(0), &q(1)).is_err());
    }

    #[test]
    fn three_by_three() {
        let b = lemma_125_bundle(Q).unwrap();
        assert_eq!(b.get("TBT").unwrap(), &Matrix::unit(Q, 3, 1, 0));
        assert!(lemma_125_bundle(Field::Prime(2)).is_err());
    }

    #[test]
    fn four_by_four() {
        let b = lemma_13_bundle(&q(0), &q(1), &q(1)).unwrap();
        assert_eq!(b.inputs["t0"], "-1");
        let b = lemma_13_bundle(&q(0), &q(0), &q(1)).unwrap();
        assert!(b.get("MBM").unwrap().is_invertible());
        assert!(lemma_13_bundle(&q(1), &q(0), &q(1)).is_err());
        assert!(lemma_13_bundle(&q(0), &q(1), &q(0)).is_err());
    }
}
