//! Property tests for the algebraic invariants: field axioms, oracle
//! agreement between the two determinant routes, kernel and rank laws, and
//! the bracket polynomials.

use leonard_core::{q_bracket_odd, BetaContext, ExactMatrix, FieldElement, FieldSpec};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = FieldElement> + Clone {
    (-1000i64..1000, 1i64..60).prop_map(|(num, den)| {
        let spec = FieldSpec::rationals();
        spec.from_integer(num).div(&spec.from_integer(den)).unwrap()
    })
}

fn residue_mod_13() -> impl Strategy<Value = FieldElement> + Clone {
    (0i64..13).prop_map(|v| FieldSpec::prime_field(13).unwrap().from_integer(v))
}

fn matrix(
    element: impl Strategy<Value = FieldElement> + Clone,
    dim: usize,
) -> impl Strategy<Value = ExactMatrix> {
    proptest::collection::vec(element, dim * dim).prop_map(move |entries| {
        let spec = entries[0].spec();
        ExactMatrix::from_fn(spec, dim, |i, j| entries[i * dim + j].clone())
    })
}

macro_rules! field_axioms {
    ($name:ident, $strategy:expr) => {
        mod $name {
            use super::*;

            proptest! {
                #![proptest_config(ProptestConfig::with_cases(1000))]

                #[test]
                fn associative_and_distributive(
                    x in $strategy, y in $strategy, z in $strategy
                ) {
                    prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
                    prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
                    prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
                }

                #[test]
                fn inverses(x in $strategy) {
                    if !x.is_zero() {
                        prop_assert!((&x * &x.inv().unwrap()).is_one());
                    }
                    prop_assert!((&x - &x).is_zero());
                }

                #[test]
                fn serialization_round_trip(x in $strategy) {
                    let spec = x.spec();
                    let parsed = spec.parse_element(&x.serialize()).unwrap();
                    prop_assert_eq!(&parsed, &x);
                    prop_assert_eq!(parsed.serialize(), x.serialize());
                }
            }
        }
    };
}

field_axioms!(rational_axioms, rational());
field_axioms!(prime_axioms, residue_mod_13());

proptest! {
    #[test]
    fn non_canonical_input_parses_to_canonical_form(
        num in -500i64..500, den in 1i64..40, scale in 1i64..9
    ) {
        let spec = FieldSpec::rationals();
        let x = spec.from_integer(num).div(&spec.from_integer(den)).unwrap();
        let scaled = format!("{}/{}", num * scale, den * scale);
        prop_assert_eq!(spec.parse_element(&scaled).unwrap().serialize(), x.serialize());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_routes_agree_rational(m in (1usize..5).prop_flat_map(|d| matrix(rational(), d))) {
        prop_assert_eq!(m.determinant_cofactor().unwrap(), m.determinant_bareiss());
    }

    #[test]
    fn determinant_routes_agree_mod_13(m in (1usize..6).prop_flat_map(|d| matrix(residue_mod_13(), d))) {
        prop_assert_eq!(m.determinant_cofactor().unwrap(), m.determinant_bareiss());
    }

    #[test]
    fn rank_nullity_and_annihilation(m in (1usize..6).prop_flat_map(|d| matrix(residue_mod_13(), d))) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(kernel.len() + m.rank(), m.dim());
        for v in &kernel {
            prop_assert!(m.apply(v).is_zero());
        }
        prop_assert_eq!(kernel.is_empty(), !m.determinant_bareiss().is_zero());
    }

    #[test]
    fn change_basis_preserves_determinant_and_char_poly(
        m in matrix(residue_mod_13(), 4),
        p in matrix(residue_mod_13(), 4),
        lambda in residue_mod_13()
    ) {
        prop_assume!(!p.determinant_bareiss().is_zero());
        let conjugated = m.change_basis(&p).unwrap();
        prop_assert_eq!(conjugated.determinant_bareiss(), m.determinant_bareiss());
        let spec = m.spec();
        let shift = |x: &ExactMatrix| {
            ExactMatrix::from_fn(spec, x.dim(), |i, j| {
                if i == j { &x[(i, j)] - &lambda } else { x[(i, j)].clone() }
            })
        };
        prop_assert_eq!(
            shift(&conjugated).determinant_bareiss(),
            shift(&m).determinant_bareiss()
        );
    }
}

/// Integer coefficients of [n]_q as a polynomial in beta, by the same
/// recurrence run symbolically. Independent of the field code path.
fn bracket_poly_coeffs(n: usize) -> Vec<i64> {
    assert!(n % 2 == 1);
    let mut prev = vec![-1i64]; // [-1]
    let mut cur = vec![1i64]; // [1]
    let mut k = 1;
    while k < n {
        // next = beta * cur - prev
        let mut next = vec![0i64; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
        k += 2;
    }
    cur
}

proptest! {
    #[test]
    fn bracket_is_a_polynomial_in_beta(beta in rational(), n in (0usize..13).prop_map(|k| 2 * k + 1)) {
        let spec = beta.spec();
        let ctx = BetaContext::chosen(n, beta.clone());
        let coeffs = bracket_poly_coeffs(n);
        prop_assert_eq!(coeffs.len(), (n - 1) / 2 + 1);
        let mut acc = spec.zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * &beta) + &spec.from_integer(*c);
        }
        prop_assert_eq!(q_bracket_odd(n, &ctx).unwrap(), acc);
    }
}
