//! The common-ratio scalar beta of an eigenvalue sequence and exact odd
//! q-bracket arithmetic.
//!
//! For a Leonard pair of diameter d >= 3 the quantity
//! `(e[i-2] - e[i+1]) / (e[i-1] - e[i])` is the same for every window of the
//! eigenvalue sequence; beta + 1 is that common value. The brackets
//! `[n]_q = q^(n-1) + q^(n-3) + ... + q^(1-n)` relate to beta through
//! `beta = q^2 + q^(-2)`, and for odd n they are polynomials in beta. We
//! therefore never construct q itself: the recurrence
//! `[n+2] = beta*[n] - [n-2]` with seeds `[-1] = -1`, `[1] = 1` stays inside
//! the base field. Even brackets genuinely need q and are rejected.

use core::fmt;

use crate::scalar::{FieldElement, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QBracketError {
    /// The windowed ratios disagree; carries the first window index i whose
    /// ratio deviates.
    RatioInconsistent { index: usize },
    NotEnoughTerms { d: usize },
    EvenIndexUnsupported { n: usize },
    BracketVanished { index: usize },
}

impl fmt::Display for QBracketError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QBracketError::RatioInconsistent { index } => {
                write!(f, "eigenvalue ratio changes at window i={index}")
            }
            QBracketError::NotEnoughTerms { d } => {
                write!(f, "beta extraction needs d >= 3, got d={d}")
            }
            QBracketError::EvenIndexUnsupported { n } => {
                write!(f, "[{n}]_q with n even is not a polynomial in beta")
            }
            QBracketError::BracketVanished { index } => {
                write!(f, "[{index}]_q = 0")
            }
        }
    }
}

impl core::error::Error for QBracketError {}

/// How a [`BetaContext`] came to hold its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaProvenance {
    /// Extracted as the common window ratio of an eigenvalue sequence.
    CommonRatio,
    /// Supplied by the caller; the convention for d <= 2, where any scalar
    /// is admissible.
    Chosen,
}

/// The scalar beta attached to a diameter d, plus where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaContext {
    d: usize,
    beta: FieldElement,
    provenance: BetaProvenance,
}

impl BetaContext {
    /// Records an explicitly chosen beta (the d <= 2 case).
    pub fn chosen(d: usize, beta: FieldElement) -> Self {
        BetaContext {
            d,
            beta,
            provenance: BetaProvenance::Chosen,
        }
    }

    /// The default convention for d <= 2: beta = 2.
    pub fn default_for_small_d(d: usize, spec: FieldSpec) -> Self {
        Self::chosen(d, spec.from_integer(2))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    pub fn provenance(&self) -> BetaProvenance {
        self.provenance
    }

    pub fn spec(&self) -> FieldSpec {
        self.beta.spec()
    }
}

/// Extracts beta from an eigenvalue sequence of length d+1, d >= 3.
///
/// Checks every window `2 <= i <= d-1` and fails with the first index whose
/// ratio deviates from the others (or whose denominator vanishes).
pub fn beta_of(eigs: &[FieldElement]) -> Result<BetaContext, QBracketError> {
    let d = eigs.len().saturating_sub(1);
    if d < 3 {
        return Err(QBracketError::NotEnoughTerms { d });
    }
    let one = eigs[0].spec().one();
    let mut common: Option<FieldElement> = None;
    for i in 2..d {
        let denom = &eigs[i - 1] - &eigs[i];
        if denom.is_zero() {
            return Err(QBracketError::RatioInconsistent { index: i });
        }
        let ratio = (&eigs[i - 2] - &eigs[i + 1])
            .div(&denom)
            .expect("denominator checked");
        match &common {
            None => common = Some(ratio),
            Some(c) => {
                if *c != ratio {
                    return Err(QBracketError::RatioInconsistent { index: i });
                }
            }
        }
    }
    let beta = &common.expect("d >= 3 gives at least one window") - &one;
    Ok(BetaContext {
        d,
        beta,
        provenance: BetaProvenance::CommonRatio,
    })
}

/// The odd q-bracket `[n]_q` as an element of the base field.
///
/// Computed by the three-term recurrence in beta; `n` must be odd and
/// positive.
pub fn q_bracket_odd(n: usize, ctx: &BetaContext) -> Result<FieldElement, QBracketError> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(QBracketError::EvenIndexUnsupported { n });
    }
    let spec = ctx.spec();
    let mut prev = -spec.one(); // [-1]
    let mut cur = spec.one(); // [1]
    let mut k = 1;
    while k < n {
        let next = &(&ctx.beta * &cur) - &prev;
        prev = cur;
        cur = next;
        k += 2;
    }
    Ok(cur)
}

/// Confirms `[i]_q != 0` for every odd i in `1..=d`. On input coming from a
/// validated Leonard pair a failure here contradicts the theory, so it
/// signals corrupted input or a bug, and the offending index is reported.
pub fn assert_odd_brackets_nonzero(d: usize, ctx: &BetaContext) -> Result<(), QBracketError> {
    for i in (1..=d).step_by(2) {
        if q_bracket_odd(i, ctx)?.is_zero() {
            return Err(QBracketError::BracketVanished { index: i });
        }
    }
    Ok(())
}
