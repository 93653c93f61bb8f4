//! Brute-force enumeration of parameter arrays over small prime fields.
//!
//! Candidates are generated from eigenvalue sequences satisfying the
//! common-ratio condition and nonzero split entries, the split-form pair is
//! built for each, and only candidates passing the full constructive
//! verification are kept. Sequences are enumerated up to the affine changes
//! A -> uA + vI that preserve the Leonard property, pinning the first two
//! eigenvalues of each operator to 0 and 1; this cuts the space by orders of
//! magnitude while still producing a representative of every array shape.
//! Enumeration order is deterministic.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::pair::{
    split_pair_from_parts, verify_leonard_pair, LeonardError, ParameterArray,
};
use crate::scalar::{FieldElement, FieldSpec};

/// Cost guard: exhaustive search stays usable only for small fields.
const SEARCH_MODULUS_LIMIT: u64 = 64;

/// Enumerates up to `limit` parameter arrays of diameter `d` over a prime
/// field, each validated by the full constructive pair check.
pub fn search_parameter_arrays(
    field: FieldSpec,
    d: usize,
    limit: usize,
) -> Result<Vec<ParameterArray>, LeonardError> {
    let p = field.modulus().ok_or_else(|| LeonardError::SearchUnsupported {
        reason: String::from("search requires a prime field"),
    })?;
    if d == 0 || d > 4 {
        return Err(LeonardError::SearchUnsupported {
            reason: String::from("search supports 1 <= d <= 4"),
        });
    }
    if p > SEARCH_MODULUS_LIMIT {
        return Err(LeonardError::SearchUnsupported {
            reason: String::from("modulus too large for exhaustive search"),
        });
    }
    let mut found = Vec::new();
    if limit == 0 {
        return Ok(found);
    }

    let elem = |v: u64| field.from_integer(v as i64);
    let sequences = eigenvalue_sequences(field, p, d);
    let nonzero: Vec<FieldElement> = (1..p).map(elem).collect();

    // Shared beta: the common-ratio condition ties theta and theta_star
    // together for d >= 3, so sequences are grouped by their ratio.
    'outer: for (theta_ratio, theta) in &sequences {
        for (star_ratio, theta_star) in &sequences {
            if d >= 3 && theta_ratio != star_ratio {
                continue;
            }
            let mut split = vec![0usize; d];
            loop {
                let superdiag: Vec<FieldElement> =
                    split.iter().map(|&i| nonzero[i].clone()).collect();
                let candidate = split_pair_from_parts(theta, theta_star, &superdiag);
                // Cheap filter with the given orderings before the full
                // ordering search.
                if candidate.dual_eigenbasis_form().is_ok()
                    && candidate.primal_eigenbasis_form().is_ok()
                {
                    let verification = verify_leonard_pair(&candidate);
                    if verification.passed {
                        let array = verification
                            .verified
                            .expect("passed")
                            .extract_parameter_array()?;
                        found.push(array);
                        if found.len() == limit {
                            break 'outer;
                        }
                    }
                }
                // Odometer over the split entries.
                let mut pos = d;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    split[pos] += 1;
                    if split[pos] < nonzero.len() {
                        break;
                    }
                    split[pos] = 0;
                }
                if split.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
    }
    Ok(found)
}

/// All candidate eigenvalue sequences of length d+1 starting 0, 1, paired
/// with the window ratio that generated them (`None` when d <= 2 imposes no
/// ratio condition).
fn eigenvalue_sequences(
    field: FieldSpec,
    p: u64,
    d: usize,
) -> Vec<(Option<u64>, Vec<FieldElement>)> {
    let elem = |v: u64| field.from_integer(v as i64);
    let mut out = Vec::new();
    if p < 2 {
        return out;
    }
    match d {
        1 => out.push((None, alloc::vec![elem(0), elem(1)])),
        2 => {
            for t2 in 0..p {
                if t2 == 0 || t2 == 1 {
                    continue;
                }
                out.push((None, alloc::vec![elem(0), elem(1), elem(t2)]));
            }
        }
        _ => {
            for ratio in 0..p {
                let ratio_elem = elem(ratio);
                for t2 in 0..p {
                    if t2 == 0 || t2 == 1 {
                        continue;
                    }
                    let mut seq = alloc::vec![elem(0), elem(1), elem(t2)];
                    let mut ok = true;
                    for k in 3..=d {
                        let next =
                            &seq[k - 3] - &(&ratio_elem * &(&seq[k - 2] - &seq[k - 1]));
                        if seq.contains(&next) {
                            ok = false;
                            break;
                        }
                        seq.push(next);
                    }
                    if ok {
                        out.push((Some(ratio), seq));
                    }
                }
            }
        }
    }
    out
}
