//! Exact spectrum recovery for structured matrices.
//!
//! Triangular matrices carry their spectrum on the diagonal. For tridiagonal
//! matrices the characteristic polynomial comes from the classical
//! three-term recurrence on leading principal minors, and its roots are
//! found exactly: brute force over a small prime field, rational-root
//! extraction with deflation over Q. Anything else is reported as
//! unavailable; general eigenvalue finding is out of scope because every
//! caller either knows the spectrum or works with structured matrices.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::ExactMatrix;
use crate::scalar::{FieldElement, FieldSpec};

/// Largest prime field searched exhaustively for roots.
const ROOT_SEARCH_MODULUS_LIMIT: u64 = 1 << 20;
/// Caps on the rational-root factorizations.
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;
const DIVISOR_COUNT_LIMIT: usize = 200_000;

/// The spectrum of `m` (with multiplicity), in a deterministic order, or a
/// human-readable reason why it cannot be recovered.
pub(crate) fn matrix_spectrum(m: &ExactMatrix) -> Result<Vec<FieldElement>, String> {
    if m.is_triangular() {
        return Ok(m.diagonal_entries());
    }
    if m.is_tridiagonal() {
        let poly = tridiagonal_char_poly(m);
        let mut roots = roots_in_field(&poly, m.spec())?;
        roots.sort();
        return Ok(roots);
    }
    Err(String::from(
        "matrix is neither triangular nor tridiagonal; supply the spectrum explicitly",
    ))
}

/// Coefficients of det(xI - M), ascending by degree, for tridiagonal M.
fn tridiagonal_char_poly(m: &ExactMatrix) -> Vec<FieldElement> {
    let spec = m.spec();
    let n = m.dim();
    let mut prev = vec![spec.one()]; // p_0 = 1
    let mut cur = linear_factor(spec, &m[(0, 0)]); // p_1 = x - a_0
    for k in 2..=n {
        let a = &m[(k - 1, k - 1)];
        let offdiag = &m[(k - 2, k - 1)] * &m[(k - 1, k - 2)];
        // p_k = (x - a) p_{k-1} - offdiag * p_{k-2}
        let mut next = poly_mul_linear(&cur, a);
        for (i, c) in prev.iter().enumerate() {
            let delta = &offdiag * c;
            next[i] = &next[i] - &delta;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn linear_factor(spec: FieldSpec, root: &FieldElement) -> Vec<FieldElement> {
    vec![-root, spec.one()]
}

/// p(x) * (x - c)
fn poly_mul_linear(p: &[FieldElement], c: &FieldElement) -> Vec<FieldElement> {
    let spec = p[0].spec();
    let mut out = vec![spec.zero(); p.len() + 1];
    for (i, coeff) in p.iter().enumerate() {
        out[i + 1] = &out[i + 1] + coeff;
        let delta = c * coeff;
        out[i] = &out[i] - &delta;
    }
    out
}

fn poly_eval(p: &[FieldElement], x: &FieldElement) -> FieldElement {
    let mut acc = p.last().expect("nonempty polynomial").clone();
    for c in p.iter().rev().skip(1) {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Divides by (x - r); the remainder must be zero.
fn poly_deflate(p: &[FieldElement], r: &FieldElement) -> Vec<FieldElement> {
    let deg = p.len() - 1;
    let mut quotient = vec![p[0].spec().zero(); deg];
    let mut carry = p[deg].clone();
    for i in (0..deg).rev() {
        quotient[i] = carry.clone();
        carry = &p[i] + &(&carry * r);
    }
    debug_assert!(carry.is_zero(), "deflation requires an exact root");
    quotient
}

fn roots_in_field(poly: &[FieldElement], spec: FieldSpec) -> Result<Vec<FieldElement>, String> {
    let degree = poly.len() - 1;
    let mut roots = match spec {
        FieldSpec::PrimeField { modulus } => prime_field_roots(poly, modulus)?,
        FieldSpec::Rationals => rational_roots(poly)?,
    };
    if roots.len() != degree {
        return Err(format!(
            "characteristic polynomial has only {} of {} roots in the field",
            roots.len(),
            degree
        ));
    }
    roots.sort();
    Ok(roots)
}

fn prime_field_roots(poly: &[FieldElement], modulus: u64) -> Result<Vec<FieldElement>, String> {
    if modulus > ROOT_SEARCH_MODULUS_LIMIT {
        return Err(format!(
            "modulus {modulus} is too large for exhaustive root search"
        ));
    }
    let spec = FieldSpec::PrimeField { modulus };
    let mut work = poly.to_vec();
    let mut roots = Vec::new();
    for r in 0..modulus {
        if work.len() == 1 {
            break;
        }
        let cand = spec.from_integer(r as i64);
        while work.len() > 1 && poly_eval(&work, &cand).is_zero() {
            roots.push(cand.clone());
            work = poly_deflate(&work, &cand);
        }
    }
    Ok(roots)
}

fn rational_roots(poly: &[FieldElement]) -> Result<Vec<FieldElement>, String> {
    let spec = FieldSpec::Rationals;
    let zero = spec.zero();
    let mut work = poly.to_vec();
    let mut roots = Vec::new();

    // Zero roots first.
    while work.len() > 1 && work[0].is_zero() {
        roots.push(zero.clone());
        work.remove(0);
    }
    if work.len() == 1 {
        return Ok(roots);
    }

    // Clear denominators to integer coefficients.
    let mut lcm = BigInt::one();
    for c in &work {
        if let FieldElement::Rational(r) = c {
            lcm = lcm.lcm(r.denom());
        }
    }
    let ints: Vec<BigInt> = work
        .iter()
        .map(|c| match c {
            FieldElement::Rational(r) => r.numer() * (&lcm / r.denom()),
            _ => unreachable!("rational field"),
        })
        .collect();

    let lead = ints.last().unwrap().abs();
    let constant = ints[0].abs();
    let num_divisors =
        divisors(&constant).ok_or_else(|| String::from("constant term is too hard to factor"))?;
    let den_divisors =
        divisors(&lead).ok_or_else(|| String::from("leading term is too hard to factor"))?;
    if num_divisors.len() * den_divisors.len() * 2 > DIVISOR_COUNT_LIMIT {
        return Err(String::from("too many rational-root candidates"));
    }

    let mut candidates: Vec<FieldElement> = Vec::new();
    for n in &num_divisors {
        for d in &den_divisors {
            let pos = FieldElement::Rational(num_rational::BigRational::new(n.clone(), d.clone()));
            candidates.push(pos.neg());
            candidates.push(pos);
        }
    }
    candidates.sort();
    candidates.dedup();

    for cand in &candidates {
        while work.len() > 1 && poly_eval(&work, cand).is_zero() {
            roots.push(cand.clone());
            work = poly_deflate(&work, cand);
        }
        if work.len() == 1 {
            break;
        }
    }
    Ok(roots)
}

/// All positive divisors, or `None` when factoring gives up.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    if n.is_zero() {
        return None;
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.abs();
    let push = |p: BigInt, factors: &mut Vec<(BigInt, u32)>, rest: &mut BigInt| {
        let mut e = 0u32;
        while (&*rest % &p).is_zero() {
            *rest /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(BigInt::from(2u32), &mut factors, &mut rest);
    let mut p = 3u64;
    while p <= TRIAL_DIVISION_LIMIT {
        if rest.is_one() {
            break;
        }
        push(BigInt::from(p), &mut factors, &mut rest);
        p += 2;
    }
    if !rest.is_one() {
        // Every factor up to the trial bound is gone, so a small remainder
        // is prime; a large one is not worth pursuing.
        if rest < BigInt::from(TRIAL_DIVISION_LIMIT).pow(2) {
            factors.push((rest, 1));
        } else {
            return None;
        }
    }
    let mut out = vec![BigInt::one()];
    for (prime, exp) in factors {
        let mut extended = Vec::with_capacity(out.len() * (exp as usize + 1));
        for d in &out {
            let mut power = BigInt::one();
            for _ in 0..=exp {
                extended.push(d * &power);
                power *= &prime;
            }
        }
        out = extended;
        if out.len() > DIVISOR_COUNT_LIMIT {
            return None;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::elements_from_integers;

    #[test]
    fn triangular_read_off() {
        let q = FieldSpec::rationals();
        let m = ExactMatrix::from_rows(
            q,
            alloc::vec![
                elements_from_integers(q, &[3, 5]),
                elements_from_integers(q, &[0, -1]),
            ],
        )
        .unwrap();
        assert_eq!(
            matrix_spectrum(&m).unwrap(),
            elements_from_integers(q, &[3, -1])
        );
    }

    #[test]
    fn tridiagonal_rational_roots() {
        let q = FieldSpec::rationals();
        // Eigenvalues 2, 0, -2.
        let m = ExactMatrix::from_rows(
            q,
            alloc::vec![
                elements_from_integers(q, &[0, 2, 0]),
                elements_from_integers(q, &[1, 0, 1]),
                elements_from_integers(q, &[0, 2, 0]),
            ],
        )
        .unwrap();
        assert_eq!(
            matrix_spectrum(&m).unwrap(),
            elements_from_integers(q, &[-2, 0, 2])
        );
    }

    #[test]
    fn tridiagonal_prime_field_roots() {
        let f13 = FieldSpec::prime_field(13).unwrap();
        let m = ExactMatrix::from_rows(
            f13,
            alloc::vec![
                elements_from_integers(f13, &[0, 2, 0]),
                elements_from_integers(f13, &[1, 0, 1]),
                elements_from_integers(f13, &[0, 2, 0]),
            ],
        )
        .unwrap();
        assert_eq!(
            matrix_spectrum(&m).unwrap(),
            elements_from_integers(f13, &[0, 2, 11])
        );
    }

    #[test]
    fn irrational_spectrum_reported() {
        let q = FieldSpec::rationals();
        // x^2 - 2 has no rational roots.
        let m = ExactMatrix::from_rows(
            q,
            alloc::vec![
                elements_from_integers(q, &[0, 2]),
                elements_from_integers(q, &[1, 0]),
            ],
        )
        .unwrap();
        assert!(matrix_spectrum(&m).is_err());
    }

    #[test]
    fn dense_matrix_unsupported() {
        let q = FieldSpec::rationals();
        let m = ExactMatrix::from_fn(q, 3, |_, _| q.one());
        assert!(matrix_spectrum(&m).is_err());
    }
}
