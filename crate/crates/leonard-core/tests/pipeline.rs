//! Cross-module pipeline checks: the example family and searched arrays run
//! through verification end to end, and the closed forms agree with the
//! dense oracles exactly.

use leonard_core::{
    beta_of, build_split_form, det_commutator_recursive, extract_parameter_array, krawtchouk_pair,
    q_bracket_odd, rhs_det1, rhs_det1_star, rhs_det2, search_parameter_arrays, verify_all,
    verify_leonard_pair, CheckStatus, FieldSpec, SplitKind, VerifyOptions,
};

fn q() -> FieldSpec {
    FieldSpec::rationals()
}

#[test]
fn krawtchouk_family_passes_verify_all() {
    for d in 1..=6 {
        let pair = krawtchouk_pair(q(), d).unwrap();
        let report = verify_all(&pair, &VerifyOptions::default());
        assert!(
            report.passed(),
            "d={d}: {:?}",
            report
                .checks
                .iter()
                .filter(|c| c.status == CheckStatus::Fail)
                .collect::<Vec<_>>()
        );
    }
}

#[test]
fn determinant_identities_odd_d() {
    for d in [1usize, 3, 5, 7] {
        let pair = krawtchouk_pair(q(), d).unwrap();
        let verified = verify_leonard_pair(&pair).verified.unwrap();
        let det = verified.dual.commutator().determinant_bareiss();
        assert_eq!(rhs_det1(&verified.dual_data).unwrap(), det, "d={d}");
        assert_eq!(rhs_det1_star(&verified.primal_data).unwrap(), det, "d={d}");
        assert_eq!(det_commutator_recursive(&verified.dual_data).unwrap(), det, "d={d}");
        let pa = verified.extract_parameter_array().unwrap();
        assert_eq!(rhs_det2(&pa, &pa.beta_context()).unwrap(), det, "d={d}");
    }
}

#[test]
fn tridiagonal_products_are_nonzero() {
    for d in 1..=6 {
        let pair = krawtchouk_pair(q(), d).unwrap();
        let (_, data) = pair.dual_eigenbasis_form().unwrap();
        for i in 1..=d {
            assert!(!(data.b(i - 1) * data.c(i)).is_zero(), "d={d} i={i}");
        }
    }
}

#[test]
fn passing_orderings_satisfy_the_ratio_condition() {
    let pair = krawtchouk_pair(q(), 5).unwrap();
    let verification = verify_leonard_pair(&pair);
    assert!(verification.passed);
    for ordering in verification
        .dual_orderings
        .iter()
        .chain(&verification.primal_orderings)
    {
        assert!(beta_of(ordering).is_ok(), "{ordering:?}");
    }
}

#[test]
fn ratio_identity_exhaustive_d5() {
    let pair = krawtchouk_pair(q(), 5).unwrap();
    let pa = extract_parameter_array(&pair).unwrap();
    let ctx = pa.beta_context();
    let ts = pa.theta_star();
    let d = pa.d();
    for i in 0..d {
        for j in i + 1..=d {
            for r in 0..d {
                for s in r + 1..=d {
                    if i + j != r + s || (i + j) % 2 == 0 {
                        continue;
                    }
                    let left = &(&ts[i] - &ts[j]) * &q_bracket_odd(s - r, &ctx).unwrap();
                    let right = &(&ts[r] - &ts[s]) * &q_bracket_odd(j - i, &ctx).unwrap();
                    assert_eq!(left, right, "(i,j,r,s)=({i},{j},{r},{s})");
                }
            }
        }
    }
}

#[test]
fn searched_arrays_verify_and_round_trip() {
    let f13 = FieldSpec::prime_field(13).unwrap();
    for d in 1..=3 {
        let arrays = search_parameter_arrays(f13, d, 2).unwrap();
        assert!(!arrays.is_empty(), "d={d}");
        for pa in &arrays {
            let pair = build_split_form(pa, SplitKind::First);
            let report = verify_all(&pair, &VerifyOptions::default());
            assert!(report.passed(), "d={d}: {:?}", report.checks);
            let again = extract_parameter_array(&pair).unwrap();
            assert_eq!(&again, pa, "d={d}");
        }
    }
}

#[test]
fn second_split_form_also_verifies() {
    let pair = krawtchouk_pair(q(), 3).unwrap();
    let pa = extract_parameter_array(&pair).unwrap();
    let second = build_split_form(&pa, SplitKind::Second);
    assert!(verify_leonard_pair(&second).passed);
    // Both split forms carry the same pair, so the determinant agrees.
    let first = build_split_form(&pa, SplitKind::First);
    assert_eq!(
        first.commutator().determinant_bareiss(),
        second.commutator().determinant_bareiss()
    );
}
