//! Exact scalars over the two supported base fields: arbitrary-precision
//! rationals and prime fields F_p.
//!
//! Every element carries the field it belongs to, so mixing fields is caught
//! at run time instead of silently coercing. Representations are canonical
//! (rationals reduced with positive denominator, residues in `0..p`), which
//! makes structural equality the same thing as field equality.
//!
//! The serialized form is a decimal string: `-3/7` style for rationals with
//! the denominator omitted when it is 1, and the bare residue for F_p.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Names a base field: the rationals, or integers modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField { modulus: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarError {
    DivisionByZero,
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    NotPrime { modulus: u64 },
    Parse { text: String, field: FieldSpec },
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::DivisionByZero => write!(f, "division by zero"),
            ScalarError::FieldMismatch { left, right } => {
                write!(f, "field mismatch: {left} vs {right}")
            }
            ScalarError::NotPrime { modulus } => {
                write!(f, "modulus {modulus} is not prime")
            }
            ScalarError::Parse { text, field } => {
                write!(f, "cannot parse {text:?} as an element of {field}")
            }
        }
    }
}

impl core::error::Error for ScalarError {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut i = 3u64;
    while i <= n / i {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 2;
    }
    true
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// The field F_p. Primality is checked by trial division.
    pub fn prime_field(modulus: u64) -> Result<Self, ScalarError> {
        if is_prime(modulus) {
            Ok(FieldSpec::PrimeField { modulus })
        } else {
            Err(ScalarError::NotPrime { modulus })
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, FieldSpec::PrimeField { .. })
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField { modulus } => Some(*modulus),
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_integer(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_integer(1)
    }

    pub fn from_integer(&self, value: i64) -> FieldElement {
        match self {
            FieldSpec::Rationals => FieldElement::Rational(BigRational::from_integer(value.into())),
            FieldSpec::PrimeField { modulus } => FieldElement::Residue {
                value: (i128::from(value)).rem_euclid(i128::from(*modulus)) as u64,
                modulus: *modulus,
            },
        }
    }

    /// Parses the canonical decimal serialization back into an element.
    ///
    /// Rationals accept `n` or `n/d` with optional signs; any representation
    /// of a value parses to its canonical form. Prime-field input is any
    /// (signed) integer, reduced modulo p.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement, ScalarError> {
        let bad = || ScalarError::Parse {
            text: text.to_string(),
            field: *self,
        };
        let s = text.trim();
        if s.is_empty() {
            return Err(bad());
        }
        match self {
            FieldSpec::Rationals => {
                let mut parts = s.splitn(2, '/');
                let numer = BigInt::from_str(parts.next().ok_or_else(bad)?).map_err(|_| bad())?;
                let denom = match parts.next() {
                    Some(d) => BigInt::from_str(d).map_err(|_| bad())?,
                    None => BigInt::one(),
                };
                if denom.is_zero() {
                    return Err(bad());
                }
                Ok(FieldElement::Rational(BigRational::new(numer, denom)))
            }
            FieldSpec::PrimeField { modulus } => {
                let n = BigInt::from_str(s).map_err(|_| bad())?;
                let r = n.mod_floor(&BigInt::from(*modulus));
                Ok(FieldElement::Residue {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: *modulus,
                })
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField { modulus } => write!(f, "F_{modulus}"),
        }
    }
}

/// An element of the field named by a [`FieldSpec`].
///
/// The `Ord` impl is a deterministic total order used for canonical
/// enumeration; across different fields it has no algebraic meaning.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

fn residue_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = u128::from(base % p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % u128::from(p);
        }
        b = b * b % u128::from(p);
        exp >>= 1;
    }
    acc as u64
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Rational(_) => FieldSpec::Rationals,
            FieldElement::Residue { modulus, .. } => FieldSpec::PrimeField { modulus: *modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Residue { value, .. } => *value == 1,
        }
    }

    fn require_same_field(&self, other: &FieldElement) -> Result<(), ScalarError> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch {
                left: self.spec(),
                right: other.spec(),
            })
        }
    }

    pub fn checked_add(&self, rhs: &FieldElement) -> Result<FieldElement, ScalarError> {
        self.require_same_field(rhs)?;
        Ok(match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (
                FieldElement::Residue { value: a, modulus },
                FieldElement::Residue { value: b, .. },
            ) => FieldElement::Residue {
                value: ((u128::from(*a) + u128::from(*b)) % u128::from(*modulus)) as u64,
                modulus: *modulus,
            },
            _ => unreachable!("fields checked above"),
        })
    }

    pub fn checked_sub(&self, rhs: &FieldElement) -> Result<FieldElement, ScalarError> {
        self.checked_add(&rhs.neg())
    }

    pub fn checked_mul(&self, rhs: &FieldElement) -> Result<FieldElement, ScalarError> {
        self.require_same_field(rhs)?;
        Ok(match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (
                FieldElement::Residue { value: a, modulus },
                FieldElement::Residue { value: b, .. },
            ) => FieldElement::Residue {
                value: (u128::from(*a) * u128::from(*b) % u128::from(*modulus)) as u64,
                modulus: *modulus,
            },
            _ => unreachable!("fields checked above"),
        })
    }

    /// Exact division; the divisor must be nonzero and in the same field.
    pub fn div(&self, rhs: &FieldElement) -> Result<FieldElement, ScalarError> {
        self.checked_mul(&rhs.inv()?)
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self) -> Result<FieldElement, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                // Fermat: p is prime by construction of the spec.
                value: residue_pow(*value, *modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn neg(&self) -> FieldElement {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                value: if *value == 0 { 0 } else { *modulus - *value },
                modulus: *modulus,
            },
        }
    }

    /// Canonical decimal serialization; `parse_element` is its inverse.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl core::ops::$trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("mixed-field arithmetic")
            }
        }
        impl core::ops::$trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("mixed-field arithmetic")
            }
        }
        impl core::ops::$trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$checked(rhs).expect("mixed-field arithmetic")
            }
        }
        impl core::ops::$trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$checked(&rhs).expect("mixed-field arithmetic")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl core::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl core::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

/// Convenience for building test data and small constants.
pub fn elements_from_integers(spec: FieldSpec, values: &[i64]) -> Vec<FieldElement> {
    values.iter().map(|&v| spec.from_integer(v)).collect()
}
