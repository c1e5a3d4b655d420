//! Exact scalars over ℚ, GF(p) and GF(p²).
//!
//! Every [`FieldElem`] carries its field. Arithmetic between elements of
//! different fields is refused: the `checked_*` methods return
//! [`AlgebraError::FieldMismatch`], and the operator impls panic. Matrix-level
//! operations check fields up front, so the operator impls only ever see
//! homogeneous operands.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;

/// Which field a scalar lives in.
///
/// `PrimeSquare(p)` is GF(p²) realised as GF(p)[ω] with ω² = c for the
/// smallest quadratic non-residue c when p is odd, and ω² = ω + 1 when p = 2
/// (no polynomial of the shape x² − c is irreducible over GF(2)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
    PrimeSquare(u32),
}

impl Field {
    pub fn prime(p: u32) -> Result<Self, AlgebraError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(AlgebraError::InvalidField(format!("{p} is not prime")))
        }
    }

    pub fn prime_square(p: u32) -> Result<Self, AlgebraError> {
        if is_prime(p) && p < (1 << 16) {
            Ok(Field::PrimeSquare(p))
        } else {
            Err(AlgebraError::InvalidField(format!(
                "GF({p}^2) unsupported: base must be a prime below 65536"
            )))
        }
    }

    /// 0 for ℚ, p otherwise.
    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) | Field::PrimeSquare(p) => p,
        }
    }

    /// Number of elements, `None` for ℚ.
    pub fn order(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p as u64),
            Field::PrimeSquare(p) => Some(p as u64 * p as u64),
        }
    }

    pub fn is_finite(self) -> bool {
        !matches!(self, Field::Rational)
    }

    /// Coefficients (c0, c1) of the relation ω² = c0 + c1·ω for GF(p²).
    pub fn quadratic_relation(self) -> Option<(u32, u32)> {
        match self {
            Field::PrimeSquare(2) => Some((1, 1)),
            Field::PrimeSquare(p) => {
                let c = (2..p)
                    .find(|&c| pow_mod(c as u64, (p as u64 - 1) / 2, p as u64) == p as u64 - 1)
                    .expect("every odd prime has a quadratic non-residue");
                Some((c, 0))
            }
            _ => None,
        }
    }

    /// The element with enumeration index `idx`; indices run over `0..order`.
    /// GF(p²) elements a + bω are indexed by a·p + b.
    pub fn element(self, idx: u64) -> FieldElem {
        match self {
            Field::Rational => panic!("ℚ cannot be enumerated"),
            Field::Prime(p) => {
                assert!(idx < p as u64, "element index out of range");
                FieldElem::Prime { p, v: idx as u32 }
            }
            Field::PrimeSquare(p) => {
                let p64 = p as u64;
                assert!(idx < p64 * p64, "element index out of range");
                FieldElem::PrimeSquare {
                    p,
                    a: (idx / p64) as u32,
                    b: (idx % p64) as u32,
                }
            }
        }
    }

    /// All elements in enumeration order. Panics for ℚ.
    pub fn elements(self) -> impl Iterator<Item = FieldElem> {
        let n = self.order().expect("ℚ cannot be enumerated");
        (0..n).map(move |i| self.element(i))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
            Field::PrimeSquare(p) => write!(f, "GF({})", *p as u64 * *p as u64),
        }
    }
}

impl FromStr for Field {
    type Err = AlgebraError;

    /// Accepts `Q`, `GF(q)` and `GFq` where q is a prime or the square of one.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" || t == "q" {
            return Ok(Field::Rational);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("GF"))
            .ok_or_else(|| AlgebraError::InvalidField(format!("unrecognised field `{s}`")))?;
        let q: u64 = inner
            .trim()
            .parse()
            .map_err(|_| AlgebraError::InvalidField(format!("unrecognised field `{s}`")))?;
        if q <= u32::MAX as u64 && is_prime(q as u32) {
            return Field::prime(q as u32);
        }
        let r = (q as f64).sqrt().round() as u64;
        for root in r.saturating_sub(1)..=r + 1 {
            if root * root == q && root <= u32::MAX as u64 && is_prime(root as u32) {
                return Field::prime_square(root as u32);
            }
        }
        Err(AlgebraError::InvalidField(format!(
            "GF({q}): order must be p or p^2 for a prime p"
        )))
    }
}

/// An exact scalar tagged with its field.
///
/// Rationals are kept in lowest terms with a positive denominator (the
/// `BigRational` normal form); residues are canonical in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rational(BigRational),
    Prime { p: u32, v: u32 },
    /// a + b·ω
    PrimeSquare { p: u32, a: u32, b: u32 },
}

impl FieldElem {
    pub fn zero(field: Field) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Self {
        Self::from_i64(field, 1)
    }

    /// Image of an integer under the canonical ring map ℤ → field.
    pub fn from_i64(field: Field, n: i64) -> Self {
        match field {
            Field::Rational => FieldElem::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldElem::Prime {
                p,
                v: n.rem_euclid(p as i64) as u32,
            },
            Field::PrimeSquare(p) => FieldElem::PrimeSquare {
                p,
                a: n.rem_euclid(p as i64) as u32,
                b: 0,
            },
        }
    }

    /// `num / den` in the given field; fails when `den` vanishes there.
    pub fn from_ratio(field: Field, num: i64, den: i64) -> Result<Self, AlgebraError> {
        Self::from_i64(field, num).checked_div(&Self::from_i64(field, den))
    }

    pub fn rational(r: BigRational) -> Self {
        FieldElem::Rational(r)
    }

    /// Builds a + bω in GF(p²).
    pub fn quadratic(field: Field, a: i64, b: i64) -> Result<Self, AlgebraError> {
        match field {
            Field::PrimeSquare(p) => Ok(FieldElem::PrimeSquare {
                p,
                a: a.rem_euclid(p as i64) as u32,
                b: b.rem_euclid(p as i64) as u32,
            }),
            other => Err(AlgebraError::InvalidField(format!(
                "{other} has no ω component"
            ))),
        }
    }

    /// The generator ω of GF(p²) over GF(p).
    pub fn omega(field: Field) -> Result<Self, AlgebraError> {
        Self::quadratic(field, 0, 1)
    }

    pub fn field(&self) -> Field {
        match self {
            FieldElem::Rational(_) => Field::Rational,
            FieldElem::Prime { p, .. } => Field::Prime(*p),
            FieldElem::PrimeSquare { p, .. } => Field::PrimeSquare(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_zero(),
            FieldElem::Prime { v, .. } => *v == 0,
            FieldElem::PrimeSquare { a, b, .. } => *a == 0 && *b == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_one(),
            FieldElem::Prime { v, .. } => *v == 1,
            FieldElem::PrimeSquare { a, b, .. } => *a == 1 && *b == 0,
        }
    }

    /// Position in [`Field::elements`]; `None` over ℚ.
    pub fn index(&self) -> Option<u64> {
        match self {
            FieldElem::Rational(_) => None,
            FieldElem::Prime { v, .. } => Some(*v as u64),
            FieldElem::PrimeSquare { p, a, b } => Some(*a as u64 * *p as u64 + *b as u64),
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch {
                left: self.field(),
                right: other.field(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElem::Rational(x), FieldElem::Rational(y)) => FieldElem::Rational(x + y),
            (FieldElem::Prime { p, v }, FieldElem::Prime { v: w, .. }) => FieldElem::Prime {
                p: *p,
                v: add_mod(*v, *w, *p),
            },
            (
                FieldElem::PrimeSquare { p, a, b },
                FieldElem::PrimeSquare { a: c, b: d, .. },
            ) => FieldElem::PrimeSquare {
                p: *p,
                a: add_mod(*a, *c, *p),
                b: add_mod(*b, *d, *p),
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElem::Rational(x), FieldElem::Rational(y)) => FieldElem::Rational(x * y),
            (FieldElem::Prime { p, v }, FieldElem::Prime { v: w, .. }) => FieldElem::Prime {
                p: *p,
                v: mul_mod(*v, *w, *p),
            },
            (
                FieldElem::PrimeSquare { p, a, b },
                FieldElem::PrimeSquare { a: c, b: d, .. },
            ) => {
                // (a + bω)(c + dω) = ac + (ad + bc)ω + bd·ω², ω² = c0 + c1·ω
                let (c0, c1) = Field::PrimeSquare(*p).quadratic_relation().unwrap();
                let bd = mul_mod(*b, *d, *p);
                let re = add_mod(mul_mod(*a, *c, *p), mul_mod(bd, c0, *p), *p);
                let im = add_mod(
                    add_mod(mul_mod(*a, *d, *p), mul_mod(*b, *c, *p), *p),
                    mul_mod(bd, c1, *p),
                    *p,
                );
                FieldElem::PrimeSquare { p: *p, a: re, b: im }
            }
            _ => unreachable!(),
        })
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Rational(r) => FieldElem::Rational(r.recip()),
            FieldElem::Prime { p, v } => FieldElem::Prime {
                p: *p,
                v: pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32,
            },
            FieldElem::PrimeSquare { p, .. } => {
                // x^(q-2) = x^(-1) in a field of order q
                let q = *p as u64 * *p as u64;
                self.pow(q - 2)
            }
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_field(other)?;
        self.checked_mul(&other.inverse()?)
    }

    pub fn neg_ref(&self) -> Self {
        match self {
            FieldElem::Rational(r) => FieldElem::Rational(-r),
            FieldElem::Prime { p, v } => FieldElem::Prime {
                p: *p,
                v: neg_mod(*v, *p),
            },
            FieldElem::PrimeSquare { p, a, b } => FieldElem::PrimeSquare {
                p: *p,
                a: neg_mod(*a, *p),
                b: neg_mod(*b, *p),
            },
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElem::one(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// x ↦ x^p. The identity on ℚ and GF(p).
    pub fn frobenius(&self) -> Self {
        match self {
            FieldElem::PrimeSquare { p, .. } => self.pow(*p as u64),
            other => other.clone(),
        }
    }

    /// Square root in ℚ when one exists.
    pub fn rational_sqrt(&self) -> Option<Self> {
        match self {
            FieldElem::Rational(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
                    Some(FieldElem::Rational(BigRational::new(n, d)))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Small integer view, used for compact hashing and display.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            FieldElem::Rational(r) if r.is_integer() => r.numer().to_i64(),
            FieldElem::Prime { v, .. } => Some(*v as i64),
            _ => None,
        }
    }

    /// Parses a scalar of `field` from text: `p/q` or `p` over ℚ and GF(p),
    /// `a+bw` or `[a,b]` over GF(p²).
    pub fn parse(field: Field, s: &str) -> Result<Self, AlgebraError> {
        let t = s.trim();
        let bad = || AlgebraError::Parse(format!("cannot read `{s}` as an element of {field}"));
        match field {
            Field::PrimeSquare(_) => {
                if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                    let parts: Vec<&str> = inner.split(',').collect();
                    if parts.len() != 2 {
                        return Err(bad());
                    }
                    let a: i64 = parts[0].trim().parse().map_err(|_| bad())?;
                    let b: i64 = parts[1].trim().parse().map_err(|_| bad())?;
                    return Self::quadratic(field, a, b);
                }
                if let Some(body) = t.strip_suffix('w').or_else(|| t.strip_suffix('ω')) {
                    // a+bw, bw, w
                    let (a, b) = match body.rfind(['+', '-']).filter(|&i| i > 0) {
                        Some(i) => (&body[..i], &body[i..]),
                        None => ("0", body),
                    };
                    let b = match b.trim() {
                        "" | "+" => 1,
                        "-" => -1,
                        other => other.trim_start_matches('+').parse().map_err(|_| bad())?,
                    };
                    let a: i64 = a.trim().parse().map_err(|_| bad())?;
                    return Self::quadratic(field, a, b);
                }
                let n: i64 = t.parse().map_err(|_| bad())?;
                Ok(Self::from_i64(field, n))
            }
            _ => {
                let (num, den) = match t.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (t, "1"),
                };
                let num: BigInt = num.parse().map_err(|_| bad())?;
                let den: BigInt = den.parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(AlgebraError::DivisionByZero);
                }
                match field {
                    Field::Rational => Ok(FieldElem::Rational(BigRational::new(num, den))),
                    Field::Prime(p) => {
                        let pm = BigInt::from(p);
                        let n = num.mod_floor(&pm).to_i64().unwrap();
                        let d = den.mod_floor(&pm).to_i64().unwrap();
                        Self::from_ratio(field, n, d)
                    }
                    Field::PrimeSquare(_) => unreachable!(),
                }
            }
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rational(r) => write!(f, "{r}"),
            FieldElem::Prime { v, .. } => write!(f, "{v}"),
            FieldElem::PrimeSquare { a, b, .. } => match (*a, *b) {
                (a, 0) => write!(f, "{a}"),
                (0, 1) => write!(f, "w"),
                (0, b) => write!(f, "{b}w"),
                (a, 1) => write!(f, "{a}+w"),
                (a, b) => write!(f, "{a}+{b}w"),
            },
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$checked(rhs).expect("mixed-field or undefined scalar operation")
            }
        }
        impl $trait<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}

fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> FieldElem {
        FieldElem::from_ratio(Field::Rational, n, d).unwrap()
    }

    #[test]
    fn rationals_stay_reduced() {
        let x = q(6, -4);
        let r = x.as_rational().unwrap();
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(&q(1, 3) + &q(1, 6), q(1, 2));
    }

    #[test]
    fn residues_are_canonical() {
        let f = Field::Prime(5);
        assert_eq!(FieldElem::from_i64(f, -1), FieldElem::Prime { p: 5, v: 4 });
        assert_eq!(FieldElem::from_i64(f, 3).inverse().unwrap(), FieldElem::from_i64(f, 2));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = FieldElem::one(Field::Rational);
        let b = FieldElem::one(Field::Prime(3));
        assert!(matches!(
            a.checked_add(&b),
            Err(AlgebraError::FieldMismatch { .. })
        ));
    }

    #[test]
    fn gf9_relation_and_frobenius() {
        let f: Field = "GF(9)".parse().unwrap();
        assert_eq!(f, Field::PrimeSquare(3));
        assert_eq!(f.quadratic_relation(), Some((2, 0)));
        let w = FieldElem::omega(f).unwrap();
        assert_eq!(&w * &w, FieldElem::from_i64(f, 2));
        // ω³ = 2ω
        assert_eq!(w.frobenius(), FieldElem::quadratic(f, 0, 2).unwrap());
        for x in f.elements() {
            assert_eq!(x.frobenius().frobenius(), x);
            if !x.is_zero() {
                assert!((&x * &x.inverse().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn gf4_uses_x2_x_1() {
        let f = Field::prime_square(2).unwrap();
        let w = FieldElem::omega(f).unwrap();
        assert_eq!(&w * &w, FieldElem::quadratic(f, 1, 1).unwrap());
        let nonzero: Vec<_> = f.elements().filter(|x| !x.is_zero()).collect();
        assert_eq!(nonzero.len(), 3);
        for x in &nonzero {
            assert!(x.pow(3).is_one());
        }
    }

    #[test]
    fn field_names_round_trip() {
        for name in ["Q", "GF(2)", "GF(3)", "GF(5)", "GF(9)", "GF(4)", "GF(25)"] {
            let f: Field = name.parse().unwrap();
            assert_eq!(f.to_string(), name);
        }
        assert!("GF(6)".parse::<Field>().is_err());
        assert!("GF(8)".parse::<Field>().is_err());
    }

    #[test]
    fn parsing_scalars() {
        assert_eq!(FieldElem::parse(Field::Rational, "-3/6").unwrap(), q(-1, 2));
        assert_eq!(
            FieldElem::parse(Field::Prime(5), "1/2").unwrap(),
            FieldElem::from_i64(Field::Prime(5), 3)
        );
        let f = Field::PrimeSquare(3);
        assert_eq!(
            FieldElem::parse(f, "1+2w").unwrap(),
            FieldElem::quadratic(f, 1, 2).unwrap()
        );
        assert_eq!(FieldElem::parse(f, "[2, 1]").unwrap().to_string(), "2+w");
        assert!(FieldElem::parse(Field::Rational, "1/0").is_err());
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(q(9, 4).rational_sqrt(), Some(q(3, 2)));
        assert_eq!(q(2, 1).rational_sqrt(), None);
        assert_eq!(q(-1, 1).rational_sqrt(), None);
    }
}
