//! Construction and validation of Leonard pairs.
//!
//! A Leonard pair is an ordered pair (A, A*) of linear maps such that some
//! basis makes A irreducible tridiagonal while A* is diagonal (the dual
//! eigenbasis), and another basis swaps the roles (the primal eigenbasis).
//! The data attached to such a pair is its parameter array: the two
//! eigenvalue sequences theta_0..theta_d and theta*_0..theta*_d together
//! with the first and second split sequences phi_1..phi_d and
//! varphi_1..varphi_d, read off the superdiagonal of A* in the split basis.
//!
//! Verification here is constructive. Candidate eigenvalue orderings are
//! enumerated (pruned by the common-ratio condition when d >= 3), each is
//! tried by an explicit change of basis, and a pair passes exactly when both
//! eigenbasis transitions produce the required shapes.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{ExactMatrix, ExactVector, LinalgError};
use crate::qbracket::{beta_of, BetaContext};
use crate::scalar::{FieldElement, FieldSpec};
use crate::spectrum::matrix_spectrum;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeonardError {
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    DimensionMismatch { a: usize, a_star: usize },
    DimensionTooSmall { dim: usize },
    InvalidParameterArray { reason: String },
    FieldTooSmall { modulus: u64, d: usize },
    RepeatedEigenvalue { operator: &'static str, first: usize, second: usize },
    SpectrumUnavailable { operator: &'static str, detail: String },
    NotTridiagonalizable { detail: String },
    SplitBasisDegenerate { detail: String },
    NotUpperBidiagonal { detail: String },
    SearchUnsupported { reason: String },
    Linalg(LinalgError),
}

impl fmt::Display for LeonardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeonardError::FieldMismatch { left, right } => {
                write!(f, "A is over {left} but A* is over {right}")
            }
            LeonardError::DimensionMismatch { a, a_star } => {
                write!(f, "A is {a}x{a} but A* is {a_star}x{a_star}")
            }
            LeonardError::DimensionTooSmall { dim } => {
                write!(f, "pair dimension {dim} is too small, need at least 2")
            }
            LeonardError::InvalidParameterArray { reason } => {
                write!(f, "InvalidParameterArray: {reason}")
            }
            LeonardError::FieldTooSmall { modulus, d } => {
                write!(f, "FieldTooSmall: F_{modulus} cannot carry this family at d={d}")
            }
            LeonardError::RepeatedEigenvalue { operator, first, second } => {
                write!(f, "RepeatedEigenvalue: {operator} eigenvalues {first} and {second} coincide")
            }
            LeonardError::SpectrumUnavailable { operator, detail } => {
                write!(f, "SpectrumUnavailable for {operator}: {detail}")
            }
            LeonardError::NotTridiagonalizable { detail } => {
                write!(f, "NotTridiagonalizable: {detail}")
            }
            LeonardError::SplitBasisDegenerate { detail } => {
                write!(f, "SplitBasisDegenerate: {detail}")
            }
            LeonardError::NotUpperBidiagonal { detail } => {
                write!(f, "NotUpperBidiagonal: {detail}")
            }
            LeonardError::SearchUnsupported { reason } => {
                write!(f, "search unsupported: {reason}")
            }
            LeonardError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for LeonardError {}

impl From<LinalgError> for LeonardError {
    fn from(e: LinalgError) -> Self {
        LeonardError::Linalg(e)
    }
}

/// Which basis a stored matrix pair is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisTag {
    Split,
    DualEigenbasis,
    PrimalEigenbasis,
    Other,
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BasisTag::Split => "split",
            BasisTag::DualEigenbasis => "dual_eigenbasis",
            BasisTag::PrimalEigenbasis => "primal_eigenbasis",
            BasisTag::Other => "other",
        };
        write!(f, "{s}")
    }
}

/// Which theta ordering the split construction uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitKind {
    First,
    Second,
}

fn find_duplicate(values: &[FieldElement]) -> Option<(usize, usize)> {
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] == values[j] {
                return Some((i, j));
            }
        }
    }
    None
}

/// The scalar data of a Leonard pair: eigenvalue sequences and both split
/// sequences. Invariants are checked at construction, so a value of this
/// type is always a plausible array (the constructive verification of the
/// pair it generates is a separate step).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterArray {
    d: usize,
    theta: Vec<FieldElement>,
    theta_star: Vec<FieldElement>,
    first_split: Vec<FieldElement>,
    second_split: Vec<FieldElement>,
}

impl ParameterArray {
    pub fn new(
        theta: Vec<FieldElement>,
        theta_star: Vec<FieldElement>,
        first_split: Vec<FieldElement>,
        second_split: Vec<FieldElement>,
    ) -> Result<Self, LeonardError> {
        let invalid = |reason: String| LeonardError::InvalidParameterArray { reason };
        if theta.len() < 2 {
            return Err(invalid(format!(
                "theta has {} entries, need at least 2",
                theta.len()
            )));
        }
        let d = theta.len() - 1;
        if theta_star.len() != d + 1 {
            return Err(invalid(format!(
                "theta_star has {} entries, expected {}",
                theta_star.len(),
                d + 1
            )));
        }
        if first_split.len() != d || second_split.len() != d {
            return Err(invalid(format!(
                "split sequences have {} and {} entries, expected {d}",
                first_split.len(),
                second_split.len()
            )));
        }
        let spec = theta[0].spec();
        for e in theta
            .iter()
            .chain(&theta_star)
            .chain(&first_split)
            .chain(&second_split)
        {
            if e.spec() != spec {
                return Err(invalid(String::from("entries come from different fields")));
            }
        }
        if let Some((i, j)) = find_duplicate(&theta) {
            return Err(invalid(format!("theta[{i}] = theta[{j}]")));
        }
        if let Some((i, j)) = find_duplicate(&theta_star) {
            return Err(invalid(format!("theta_star[{i}] = theta_star[{j}]")));
        }
        for (k, e) in first_split.iter().enumerate() {
            if e.is_zero() {
                return Err(invalid(format!("first_split[{}] is zero", k + 1)));
            }
        }
        for (k, e) in second_split.iter().enumerate() {
            if e.is_zero() {
                return Err(invalid(format!("second_split[{}] is zero", k + 1)));
            }
        }
        if d >= 3 {
            let beta = beta_of(&theta)
                .map_err(|e| invalid(format!("theta ratio condition fails: {e}")))?;
            let beta_star = beta_of(&theta_star)
                .map_err(|e| invalid(format!("theta_star ratio condition fails: {e}")))?;
            if beta.beta() != beta_star.beta() {
                return Err(invalid(format!(
                    "theta and theta_star give different common ratios: {} vs {}",
                    beta.beta(),
                    beta_star.beta()
                )));
            }
        }
        Ok(ParameterArray {
            d,
            theta,
            theta_star,
            first_split,
            second_split,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn spec(&self) -> FieldSpec {
        self.theta[0].spec()
    }

    pub fn theta(&self) -> &[FieldElement] {
        &self.theta
    }

    pub fn theta_star(&self) -> &[FieldElement] {
        &self.theta_star
    }

    pub fn first_split(&self) -> &[FieldElement] {
        &self.first_split
    }

    pub fn second_split(&self) -> &[FieldElement] {
        &self.second_split
    }

    /// phi_i with the 1-based index used throughout the formulas.
    pub fn first_split_at(&self, i: usize) -> &FieldElement {
        &self.first_split[i - 1]
    }

    pub fn second_split_at(&self, i: usize) -> &FieldElement {
        &self.second_split[i - 1]
    }

    /// The beta attached to this array: the common window ratio when d >= 3,
    /// the conventional beta = 2 otherwise.
    pub fn beta_context(&self) -> BetaContext {
        if self.d >= 3 {
            beta_of(&self.theta_star).expect("validated at construction")
        } else {
            BetaContext::default_for_small_d(self.d, self.spec())
        }
    }
}

/// Tridiagonal data read off one of the standard bases: the diagonal a_i,
/// the superdiagonal b_0..b_{d-1}, the subdiagonal c_1..c_d, and the
/// eigenvalue sequence of the diagonal partner in the same basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TridiagonalData {
    d: usize,
    diag: Vec<FieldElement>,
    superdiag: Vec<FieldElement>,
    subdiag: Vec<FieldElement>,
    partner_eigenvalues: Vec<FieldElement>,
}

impl TridiagonalData {
    /// Reads the data off a matrix, insisting on the irreducible tridiagonal
    /// shape: nothing outside the three central diagonals, and no zero on
    /// the sub- or superdiagonal.
    pub(crate) fn from_tridiagonal_matrix(
        m: &ExactMatrix,
        partner: &[FieldElement],
    ) -> Result<Self, LeonardError> {
        let n = m.dim();
        debug_assert_eq!(partner.len(), n);
        for i in 0..n {
            for j in 0..n {
                if i.abs_diff(j) > 1 && !m[(i, j)].is_zero() {
                    return Err(LeonardError::NotTridiagonalizable {
                        detail: format!("nonzero entry at ({i},{j}) outside the three central diagonals"),
                    });
                }
            }
        }
        for i in 0..n - 1 {
            if m[(i, i + 1)].is_zero() {
                return Err(LeonardError::NotTridiagonalizable {
                    detail: format!("zero superdiagonal entry at ({i},{})", i + 1),
                });
            }
            if m[(i + 1, i)].is_zero() {
                return Err(LeonardError::NotTridiagonalizable {
                    detail: format!("zero subdiagonal entry at ({},{i})", i + 1),
                });
            }
        }
        Ok(TridiagonalData {
            d: n - 1,
            diag: (0..n).map(|i| m[(i, i)].clone()).collect(),
            superdiag: (0..n - 1).map(|i| m[(i, i + 1)].clone()).collect(),
            subdiag: (1..n).map(|i| m[(i, i - 1)].clone()).collect(),
            partner_eigenvalues: partner.to_vec(),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn spec(&self) -> FieldSpec {
        self.diag[0].spec()
    }

    /// a_i for 0 <= i <= d.
    pub fn a(&self, i: usize) -> &FieldElement {
        &self.diag[i]
    }

    /// b_i for 0 <= i <= d-1.
    pub fn b(&self, i: usize) -> &FieldElement {
        &self.superdiag[i]
    }

    /// c_i for 1 <= i <= d.
    pub fn c(&self, i: usize) -> &FieldElement {
        &self.subdiag[i - 1]
    }

    /// Eigenvalue i of the operator that is diagonal in this basis.
    pub fn partner(&self, i: usize) -> &FieldElement {
        &self.partner_eigenvalues[i]
    }

    pub fn partner_eigenvalues(&self) -> &[FieldElement] {
        &self.partner_eigenvalues
    }
}

/// A matrix pair tagged with the basis it is written in. Construction
/// checks dimensions and fields only; whether the pair is actually a
/// Leonard pair is decided by [`verify_leonard_pair`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeonardPairMatrices {
    basis_tag: BasisTag,
    a: ExactMatrix,
    a_star: ExactMatrix,
    theta: Option<Vec<FieldElement>>,
    theta_star: Option<Vec<FieldElement>>,
}

impl LeonardPairMatrices {
    pub fn new(
        basis_tag: BasisTag,
        a: ExactMatrix,
        a_star: ExactMatrix,
    ) -> Result<Self, LeonardError> {
        if a.spec() != a_star.spec() {
            return Err(LeonardError::FieldMismatch {
                left: a.spec(),
                right: a_star.spec(),
            });
        }
        if a.dim() != a_star.dim() {
            return Err(LeonardError::DimensionMismatch {
                a: a.dim(),
                a_star: a_star.dim(),
            });
        }
        if a.dim() < 2 {
            return Err(LeonardError::DimensionTooSmall { dim: a.dim() });
        }
        // Triangular matrices show their spectrum on the diagonal.
        let theta = a.is_triangular().then(|| a.diagonal_entries());
        let theta_star = a_star.is_triangular().then(|| a_star.diagonal_entries());
        Ok(LeonardPairMatrices {
            basis_tag,
            a,
            a_star,
            theta,
            theta_star,
        })
    }

    pub fn basis_tag(&self) -> BasisTag {
        self.basis_tag
    }

    pub fn a(&self) -> &ExactMatrix {
        &self.a
    }

    pub fn a_star(&self) -> &ExactMatrix {
        &self.a_star
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// Diameter: dimension minus one.
    pub fn d(&self) -> usize {
        self.a.dim() - 1
    }

    pub fn spec(&self) -> FieldSpec {
        self.a.spec()
    }

    pub fn known_theta(&self) -> Option<&[FieldElement]> {
        self.theta.as_deref()
    }

    pub fn known_theta_star(&self) -> Option<&[FieldElement]> {
        self.theta_star.as_deref()
    }

    /// AA* - A*A in the basis the pair is currently written in.
    pub fn commutator(&self) -> ExactMatrix {
        self.a.mul(&self.a_star).sub(&self.a_star.mul(&self.a))
    }

    fn spectrum_of(&self, operator: &'static str) -> Result<Vec<FieldElement>, LeonardError> {
        let (stored, matrix) = match operator {
            "A" => (&self.theta, &self.a),
            _ => (&self.theta_star, &self.a_star),
        };
        if let Some(s) = stored {
            return Ok(s.clone());
        }
        matrix_spectrum(matrix).map_err(|detail| LeonardError::SpectrumUnavailable {
            operator,
            detail,
        })
    }

    /// Rewrites the pair in the basis of A*-eigenvectors in the given order.
    /// Succeeds exactly when A becomes irreducible tridiagonal there.
    pub(crate) fn dual_form_with_order(
        &self,
        order: &[FieldElement],
    ) -> Result<(Self, TridiagonalData), LeonardError> {
        let (new_a, diag) = conjugate_to_eigenbasis(&self.a_star, &self.a, order)?;
        let data = TridiagonalData::from_tridiagonal_matrix(&new_a, order)?;
        Ok((
            LeonardPairMatrices {
                basis_tag: BasisTag::DualEigenbasis,
                a: new_a,
                a_star: diag,
                theta: self.theta.clone(),
                theta_star: Some(order.to_vec()),
            },
            data,
        ))
    }

    pub(crate) fn primal_form_with_order(
        &self,
        order: &[FieldElement],
    ) -> Result<(Self, TridiagonalData), LeonardError> {
        let (new_a_star, diag) = conjugate_to_eigenbasis(&self.a, &self.a_star, order)?;
        let data = TridiagonalData::from_tridiagonal_matrix(&new_a_star, order)?;
        Ok((
            LeonardPairMatrices {
                basis_tag: BasisTag::PrimalEigenbasis,
                a: diag,
                a_star: new_a_star,
                theta: Some(order.to_vec()),
                theta_star: self.theta_star.clone(),
            },
            data,
        ))
    }

    /// The pair in a basis where A* is diagonal and A is irreducible
    /// tridiagonal, using the available theta* ordering, together with the
    /// tridiagonal data of A in that basis.
    pub fn dual_eigenbasis_form(&self) -> Result<(Self, TridiagonalData), LeonardError> {
        let order = self.spectrum_of("A*")?;
        if let Some((i, j)) = find_duplicate(&order) {
            return Err(LeonardError::RepeatedEigenvalue {
                operator: "A*",
                first: i,
                second: j,
            });
        }
        self.dual_form_with_order(&order)
    }

    /// Mirror image: A diagonal, A* irreducible tridiagonal.
    pub fn primal_eigenbasis_form(&self) -> Result<(Self, TridiagonalData), LeonardError> {
        let order = self.spectrum_of("A")?;
        if let Some((i, j)) = find_duplicate(&order) {
            return Err(LeonardError::RepeatedEigenvalue {
                operator: "A",
                first: i,
                second: j,
            });
        }
        self.primal_form_with_order(&order)
    }
}

/// Builds P from the eigenvectors of `diagonalize` in the given eigenvalue
/// order and returns (P^-1 companion P, P^-1 diagonalize P). The latter is
/// exactly the diagonal matrix of the order, because the columns of P are
/// exact eigenvectors.
fn conjugate_to_eigenbasis(
    diagonalize: &ExactMatrix,
    companion: &ExactMatrix,
    order: &[FieldElement],
) -> Result<(ExactMatrix, ExactMatrix), LeonardError> {
    let n = diagonalize.dim();
    debug_assert_eq!(order.len(), n);
    let spec = diagonalize.spec();
    let mut basis = ExactMatrix::zeros(spec, n);
    for (col, lambda) in order.iter().enumerate() {
        let v = diagonalize.eigenvector_for(lambda)?;
        for row in 0..n {
            basis[(row, col)] = v.entry(row).clone();
        }
    }
    let inv = basis.inverse().ok_or(LinalgError::SingularBasisMatrix)?;
    let new_companion = inv.mul(companion).mul(&basis);
    let diag = ExactMatrix::diagonal(spec, order);
    debug_assert_eq!(inv.mul(diagonalize).mul(&basis), diag);
    Ok((new_companion, diag))
}

/// Lower bidiagonal A (subdiagonal all ones) and upper bidiagonal A*.
pub(crate) fn split_pair_from_parts(
    theta_order: &[FieldElement],
    theta_star: &[FieldElement],
    superdiag: &[FieldElement],
) -> LeonardPairMatrices {
    let n = theta_order.len();
    let spec = theta_order[0].spec();
    let mut a = ExactMatrix::diagonal(spec, theta_order);
    for i in 1..n {
        a[(i, i - 1)] = spec.one();
    }
    let mut a_star = ExactMatrix::diagonal(spec, theta_star);
    for i in 1..n {
        a_star[(i - 1, i)] = superdiag[i - 1].clone();
    }
    LeonardPairMatrices {
        basis_tag: BasisTag::Split,
        a,
        a_star,
        theta: Some(theta_order.to_vec()),
        theta_star: Some(theta_star.to_vec()),
    }
}

/// The split-form pair of a parameter array. `First` uses the theta order
/// as given with the first split sequence on the superdiagonal of A*;
/// `Second` reverses the theta order and uses the second split sequence.
pub fn build_split_form(pa: &ParameterArray, which: SplitKind) -> LeonardPairMatrices {
    match which {
        SplitKind::First => split_pair_from_parts(pa.theta(), pa.theta_star(), pa.first_split()),
        SplitKind::Second => {
            let reversed: Vec<_> = pa.theta().iter().rev().cloned().collect();
            split_pair_from_parts(&reversed, pa.theta_star(), pa.second_split())
        }
    }
}

/// The self-dual example family with a_i = 0, b_i = d-i, c_i = i and
/// diagonal partner d-2i, given in the dual eigenbasis. Valid over Q for
/// every d, and over F_p whenever p is odd and p > d; validity is
/// established by [`verify_leonard_pair`], not assumed.
pub fn krawtchouk_pair(spec: FieldSpec, d: usize) -> Result<LeonardPairMatrices, LeonardError> {
    if d == 0 {
        return Err(LeonardError::DimensionTooSmall { dim: d + 1 });
    }
    if let Some(p) = spec.modulus() {
        if p == 2 || u128::from(p) <= d as u128 {
            return Err(LeonardError::FieldTooSmall { modulus: p, d });
        }
    }
    let n = d + 1;
    let eigs: Vec<_> = (0..n)
        .map(|i| spec.from_integer(d as i64 - 2 * i as i64))
        .collect();
    let mut a = ExactMatrix::zeros(spec, n);
    for i in 0..d {
        a[(i, i + 1)] = spec.from_integer((d - i) as i64);
        a[(i + 1, i)] = spec.from_integer((i + 1) as i64);
    }
    let a_star = ExactMatrix::diagonal(spec, &eigs);
    Ok(LeonardPairMatrices {
        basis_tag: BasisTag::DualEigenbasis,
        a,
        a_star,
        theta: Some(eigs.clone()),
        theta_star: Some(eigs),
    })
}

fn permutations(values: &[FieldElement]) -> Vec<Vec<FieldElement>> {
    if values.len() <= 1 {
        return vec![values.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..values.len() {
        let mut rest = values.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// All orderings of a distinct eigenvalue multiset that could make the
/// companion tridiagonal: every permutation for d <= 2, and for d >= 3 the
/// sequences satisfying the common-ratio condition, generated by extending
/// each ordered 4-start with the forced three-term recurrence. A preferred
/// ordering (the one the pair was built with) is tried first.
fn candidate_orderings(
    values: &[FieldElement],
    preferred: Option<&[FieldElement]>,
) -> Vec<Vec<FieldElement>> {
    let d = values.len() - 1;
    let mut out: Vec<Vec<FieldElement>> = Vec::new();
    if let Some(p) = preferred {
        out.push(p.to_vec());
    }
    let push_new = |seq: Vec<FieldElement>, out: &mut Vec<Vec<FieldElement>>| {
        if preferred != Some(seq.as_slice()) {
            out.push(seq);
        }
    };
    let mut sorted = values.to_vec();
    sorted.sort();
    if d <= 2 {
        for seq in permutations(&sorted) {
            push_new(seq, &mut out);
        }
        return out;
    }
    let n = values.len();
    for i0 in 0..n {
        for i1 in 0..n {
            for i2 in 0..n {
                for i3 in 0..n {
                    if i1 == i0 || i2 == i0 || i2 == i1 || i3 == i0 || i3 == i1 || i3 == i2 {
                        continue;
                    }
                    let denom = &sorted[i1] - &sorted[i2];
                    let ratio = (&sorted[i0] - &sorted[i3])
                        .div(&denom)
                        .expect("values are distinct");
                    let mut used = vec![false; n];
                    used[i0] = true;
                    used[i1] = true;
                    used[i2] = true;
                    used[i3] = true;
                    let mut seq = vec![
                        sorted[i0].clone(),
                        sorted[i1].clone(),
                        sorted[i2].clone(),
                        sorted[i3].clone(),
                    ];
                    let mut alive = true;
                    for k in 4..=d {
                        let expected =
                            &seq[k - 3] - &(&ratio * &(&seq[k - 2] - &seq[k - 1]));
                        match (0..n).find(|&t| !used[t] && sorted[t] == expected) {
                            Some(t) => {
                                used[t] = true;
                                seq.push(sorted[t].clone());
                            }
                            None => {
                                alive = false;
                                break;
                            }
                        }
                    }
                    if alive {
                        push_new(seq, &mut out);
                    }
                }
            }
        }
    }
    out
}

/// Both standard forms of a verified pair, with the tridiagonal data of
/// each, under the first passing orderings.
#[derive(Clone, Debug)]
pub struct VerifiedPair {
    pub dual: LeonardPairMatrices,
    pub dual_data: TridiagonalData,
    pub primal: LeonardPairMatrices,
    pub primal_data: TridiagonalData,
}

/// The outcome of the constructive Leonard-pair check.
#[derive(Clone, Debug)]
pub struct PairVerification {
    pub passed: bool,
    /// Every theta* ordering under which A became irreducible tridiagonal.
    pub dual_orderings: Vec<Vec<FieldElement>>,
    /// Every theta ordering under which A* became irreducible tridiagonal.
    pub primal_orderings: Vec<Vec<FieldElement>>,
    /// Representative reasons when a side produced no ordering at all.
    pub failures: Vec<LeonardError>,
    pub verified: Option<VerifiedPair>,
}

/// Decides constructively whether (A, A*) is a Leonard pair: some ordering
/// of the A* spectrum must make A irreducible tridiagonal in the
/// A*-eigenbasis, and vice versa. All candidate orderings are tried and the
/// passing ones recorded; failures are reported, never panicked.
pub fn verify_leonard_pair(m: &LeonardPairMatrices) -> PairVerification {
    // Each side is attempted independently so the report carries the real
    // reason for each failing condition rather than the first fatal error.
    type SideResult = Result<
        (
            Vec<Vec<FieldElement>>,
            Option<(LeonardPairMatrices, TridiagonalData)>,
        ),
        LeonardError,
    >;
    let try_side = |operator: &'static str| -> SideResult {
        let values = m.spectrum_of(operator)?;
        if let Some((i, j)) = find_duplicate(&values) {
            return Err(LeonardError::RepeatedEigenvalue {
                operator,
                first: i,
                second: j,
            });
        }
        let preferred = if operator == "A*" {
            m.known_theta_star()
        } else {
            m.known_theta()
        };
        let mut orderings = Vec::new();
        let mut first = None;
        let mut first_error = None;
        for order in candidate_orderings(&values, preferred) {
            let attempt = if operator == "A*" {
                m.dual_form_with_order(&order)
            } else {
                m.primal_form_with_order(&order)
            };
            match attempt {
                Ok(forms) => {
                    if first.is_none() {
                        first = Some(forms);
                    }
                    orderings.push(order);
                }
                Err(e) => {
                    if first_error.is_none() {
                        first_error = Some(e);
                    }
                }
            }
        }
        if orderings.is_empty() {
            Err(first_error.unwrap_or(LeonardError::NotTridiagonalizable {
                detail: format!("no eigenvalue ordering of {operator} yields the required shape"),
            }))
        } else {
            Ok((orderings, first))
        }
    };

    let mut failures = Vec::new();
    let (dual_orderings, dual_first) = match try_side("A*") {
        Ok((orderings, first)) => (orderings, first),
        Err(e) => {
            failures.push(e);
            (Vec::new(), None)
        }
    };
    let (primal_orderings, primal_first) = match try_side("A") {
        Ok((orderings, first)) => (orderings, first),
        Err(e) => {
            failures.push(e);
            (Vec::new(), None)
        }
    };

    let verified = match (dual_first, primal_first) {
        (Some((dual, dual_data)), Some((primal, primal_data))) => Some(VerifiedPair {
            dual,
            dual_data,
            primal,
            primal_data,
        }),
        _ => None,
    };
    PairVerification {
        passed: verified.is_some(),
        dual_orderings,
        primal_orderings,
        failures,
        verified,
    }
}

fn shifted_apply(a: &ExactMatrix, shift: &FieldElement, v: &ExactVector) -> ExactVector {
    let av = a.apply(v);
    let entries = (0..v.dim())
        .map(|i| av.entry(i) - &(shift * v.entry(i)))
        .collect();
    ExactVector::from_entries(a.spec(), entries).expect("single field")
}

/// Runs the split-basis construction u_0 = e_0, u_i = (A - theta_{i-1})
/// u_{i-1} inside the dual eigenbasis, asserts that A* is upper bidiagonal
/// with diagonal theta* on that basis, and returns the superdiagonal.
fn split_superdiagonal(
    a: &ExactMatrix,
    a_star: &ExactMatrix,
    theta: &[FieldElement],
    theta_star: &[FieldElement],
) -> Result<Vec<FieldElement>, LeonardError> {
    let n = a.dim();
    let d = n - 1;
    let spec = a.spec();
    let mut cols = Vec::with_capacity(n);
    cols.push(ExactVector::basis_vector(spec, n, 0));
    for i in 1..=d {
        let next = shifted_apply(a, &theta[i - 1], &cols[i - 1]);
        if next.is_zero() {
            return Err(LeonardError::SplitBasisDegenerate {
                detail: format!("u_{i} vanishes"),
            });
        }
        cols.push(next);
    }
    if !shifted_apply(a, &theta[d], &cols[d]).is_zero() {
        return Err(LeonardError::NotUpperBidiagonal {
            detail: String::from("split basis does not close: (A - theta_d) u_d != 0"),
        });
    }
    let basis = ExactMatrix::from_fn(spec, n, |i, j| cols[j].entry(i).clone());
    let inv = basis
        .inverse()
        .ok_or_else(|| LeonardError::SplitBasisDegenerate {
            detail: String::from("split vectors are linearly dependent"),
        })?;
    let s = inv.mul(a_star).mul(&basis);
    for i in 0..n {
        for j in 0..n {
            if j != i && j != i + 1 && !s[(i, j)].is_zero() {
                return Err(LeonardError::NotUpperBidiagonal {
                    detail: format!("A* has a nonzero entry at ({i},{j}) on the split basis"),
                });
            }
        }
        if s[(i, i)] != theta_star[i] {
            return Err(LeonardError::NotUpperBidiagonal {
                detail: format!("A* diagonal entry {i} is not theta_star[{i}] on the split basis"),
            });
        }
    }
    Ok((1..=d).map(|i| s[(i - 1, i)].clone()).collect())
}

impl VerifiedPair {
    /// Reads the parameter array from the verified forms: theta* from the
    /// dual eigenbasis, theta from the primal one, and both split sequences
    /// from the split-basis construction. If the two orderings pair the
    /// wrong way round, the reversed theta ordering is tried before giving
    /// up.
    pub fn extract_parameter_array(&self) -> Result<ParameterArray, LeonardError> {
        let theta_star = self.dual_data.partner_eigenvalues().to_vec();
        let found_theta = self.primal_data.partner_eigenvalues().to_vec();
        let a = self.dual.a();
        let a_star = self.dual.a_star();
        let (theta, first_split) =
            match split_superdiagonal(a, a_star, &found_theta, &theta_star) {
                Ok(phi) => (found_theta, phi),
                Err(first_err) => {
                    let reversed: Vec<_> = found_theta.iter().rev().cloned().collect();
                    match split_superdiagonal(a, a_star, &reversed, &theta_star) {
                        Ok(phi) => (reversed, phi),
                        Err(_) => return Err(first_err),
                    }
                }
            };
        let reversed: Vec<_> = theta.iter().rev().cloned().collect();
        let second_split = split_superdiagonal(a, a_star, &reversed, &theta_star)?;
        ParameterArray::new(theta, theta_star, first_split, second_split)
    }
}

/// Verifies the pair and extracts its parameter array in one step.
pub fn extract_parameter_array(m: &LeonardPairMatrices) -> Result<ParameterArray, LeonardError> {
    let verification = verify_leonard_pair(m);
    match verification.verified {
        Some(v) => v.extract_parameter_array(),
        None => Err(verification
            .failures
            .into_iter()
            .next()
            .unwrap_or(LeonardError::NotTridiagonalizable {
                detail: String::from("pair failed verification"),
            })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::elements_from_integers;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn d1_array() -> ParameterArray {
        ParameterArray::new(
            elements_from_integers(q(), &[1, -1]),
            elements_from_integers(q(), &[1, -1]),
            elements_from_integers(q(), &[-2]),
            elements_from_integers(q(), &[2]),
        )
        .unwrap()
    }

    #[test]
    fn split_form_d1() {
        let pa = d1_array();
        let first = build_split_form(&pa, SplitKind::First);
        assert_eq!(first.a()[(0, 0)], q().from_integer(1));
        assert_eq!(first.a()[(1, 0)], q().one());
        assert_eq!(first.a()[(1, 1)], q().from_integer(-1));
        assert_eq!(first.a()[(0, 1)], q().zero());
        assert_eq!(first.a_star()[(0, 1)], q().from_integer(-2));

        let second = build_split_form(&pa, SplitKind::Second);
        assert_eq!(second.a()[(0, 0)], q().from_integer(-1));
        assert_eq!(second.a()[(1, 1)], q().from_integer(1));
        assert_eq!(second.a_star()[(0, 1)], q().from_integer(2));
    }

    #[test]
    fn invalid_arrays_rejected() {
        let err = ParameterArray::new(
            elements_from_integers(q(), &[0, 1, 2]),
            elements_from_integers(q(), &[0, 1, 2]),
            elements_from_integers(q(), &[1, 0]),
            elements_from_integers(q(), &[1, 1]),
        )
        .unwrap_err();
        assert!(matches!(err, LeonardError::InvalidParameterArray { .. }));

        let err = ParameterArray::new(
            elements_from_integers(q(), &[0, 1, 1]),
            elements_from_integers(q(), &[0, 1, 2]),
            elements_from_integers(q(), &[1, 1]),
            elements_from_integers(q(), &[1, 1]),
        )
        .unwrap_err();
        assert!(matches!(err, LeonardError::InvalidParameterArray { .. }));
    }

    #[test]
    fn dual_form_of_split_d1() {
        let pa = d1_array();
        let split = build_split_form(&pa, SplitKind::First);
        let (pair, data) = split.dual_eigenbasis_form().unwrap();
        assert_eq!(pair.basis_tag(), BasisTag::DualEigenbasis);
        assert_eq!(pair.a()[(0, 1)], q().one());
        assert_eq!(pair.a()[(1, 0)], q().one());
        assert_eq!(pair.a()[(0, 0)], q().zero());
        assert_eq!(pair.a_star()[(0, 0)], q().from_integer(1));
        assert_eq!(pair.a_star()[(1, 1)], q().from_integer(-1));
        assert!(data.b(0).is_one());
        assert!(data.c(1).is_one());
    }

    #[test]
    fn dual_form_is_identity_on_dual_input() {
        let pair = krawtchouk_pair(q(), 3).unwrap();
        let (again, _) = pair.dual_eigenbasis_form().unwrap();
        assert_eq!(again.a(), pair.a());
        assert_eq!(again.a_star(), pair.a_star());
    }

    #[test]
    fn primal_form_is_identity_on_primal_input() {
        let pair = krawtchouk_pair(q(), 3).unwrap();
        let (primal, _) = pair.primal_eigenbasis_form().unwrap();
        let (again, _) = primal.primal_eigenbasis_form().unwrap();
        assert_eq!(again.a(), primal.a());
        assert_eq!(again.a_star(), primal.a_star());
    }

    #[test]
    fn degenerate_partner_spectrum_is_a_precondition_error() {
        // A* = 0 has a single repeated eigenvalue, so no eigenbasis with
        // d+1 distinct values exists.
        let pair = LeonardPairMatrices::new(
            BasisTag::Other,
            krawtchouk_pair(q(), 2).unwrap().a().clone(),
            ExactMatrix::zeros(q(), 3),
        )
        .unwrap();
        assert!(matches!(
            pair.dual_eigenbasis_form(),
            Err(LeonardError::RepeatedEigenvalue { operator: "A*", .. })
        ));
    }

    #[test]
    fn krawtchouk_shapes() {
        let pair = krawtchouk_pair(q(), 3).unwrap();
        assert_eq!(pair.a()[(0, 1)], q().from_integer(3));
        assert_eq!(pair.a()[(1, 2)], q().from_integer(2));
        assert_eq!(pair.a()[(2, 3)], q().from_integer(1));
        assert_eq!(pair.a()[(1, 0)], q().from_integer(1));
        assert_eq!(pair.a()[(3, 2)], q().from_integer(3));
        assert_eq!(
            pair.a_star().diagonal_entries(),
            elements_from_integers(q(), &[3, 1, -1, -3])
        );
    }

    #[test]
    fn krawtchouk_field_guards() {
        let f3 = FieldSpec::prime_field(3).unwrap();
        assert!(matches!(
            krawtchouk_pair(f3, 3),
            Err(LeonardError::FieldTooSmall { modulus: 3, d: 3 })
        ));
        let f2 = FieldSpec::prime_field(2).unwrap();
        assert!(matches!(
            krawtchouk_pair(f2, 1),
            Err(LeonardError::FieldTooSmall { .. })
        ));
        let f5 = FieldSpec::prime_field(5).unwrap();
        assert!(krawtchouk_pair(f5, 4).is_ok());
    }

    #[test]
    fn verify_krawtchouk() {
        for d in 1..=4 {
            let pair = krawtchouk_pair(q(), d).unwrap();
            let v = verify_leonard_pair(&pair);
            assert!(v.passed, "d={d}: {:?}", v.failures);
            assert!(!v.dual_orderings.is_empty());
            assert!(!v.primal_orderings.is_empty());
        }
    }

    #[test]
    fn verify_rejects_commuting_diagonal_pair() {
        let diag = ExactMatrix::diagonal(q(), &elements_from_integers(q(), &[0, 1, 2]));
        let pair = LeonardPairMatrices::new(BasisTag::Other, diag.clone(), diag).unwrap();
        let v = verify_leonard_pair(&pair);
        assert!(!v.passed);
        assert!(v
            .failures
            .iter()
            .any(|e| matches!(e, LeonardError::NotTridiagonalizable { .. })));
    }

    #[test]
    fn verify_rejects_zeroed_superdiagonal() {
        let mut pair = krawtchouk_pair(q(), 3).unwrap();
        pair.a[(0, 1)] = q().zero();
        let v = verify_leonard_pair(&pair);
        assert!(!v.passed);
        assert!(v
            .failures
            .iter()
            .any(|e| matches!(e, LeonardError::NotTridiagonalizable { .. })));
    }

    #[test]
    fn verify_rejects_repeated_eigenvalue() {
        let mut pair = krawtchouk_pair(q(), 2).unwrap();
        pair.a_star[(1, 1)] = q().from_integer(2);
        pair.theta_star = Some(pair.a_star.diagonal_entries());
        let v = verify_leonard_pair(&pair);
        assert!(!v.passed);
        assert!(v
            .failures
            .iter()
            .any(|e| matches!(e, LeonardError::RepeatedEigenvalue { operator: "A*", .. })));
    }

    #[test]
    fn extraction_d1_hand_values() {
        let pair = krawtchouk_pair(q(), 1).unwrap();
        let pa = extract_parameter_array(&pair).unwrap();
        assert_eq!(pa.first_split(), elements_from_integers(q(), &[-2]).as_slice());
        assert_eq!(pa.second_split(), elements_from_integers(q(), &[2]).as_slice());
        // -phi_1 * varphi_1 = 4 = det of the commutator.
        let det = pair.commutator().determinant_bareiss();
        assert_eq!(det, q().from_integer(4));
        let product = -&(pa.first_split_at(1) * pa.second_split_at(1));
        assert_eq!(product, det);
    }

    #[test]
    fn extraction_round_trips() {
        for d in 1..=4 {
            let pair = krawtchouk_pair(q(), d).unwrap();
            let pa = extract_parameter_array(&pair).unwrap();
            let rebuilt = build_split_form(&pa, SplitKind::First);
            let again = extract_parameter_array(&rebuilt).unwrap();
            assert_eq!(pa, again, "d={d}");
        }
    }

    #[test]
    fn commutator_examples() {
        let pair = krawtchouk_pair(q(), 1).unwrap();
        let b = pair.commutator();
        assert_eq!(b[(0, 0)], q().zero());
        assert_eq!(b[(0, 1)], q().from_integer(-2));
        assert_eq!(b[(1, 0)], q().from_integer(2));

        let same = LeonardPairMatrices::new(
            BasisTag::Other,
            pair.a().clone(),
            pair.a().clone(),
        )
        .unwrap();
        assert!(same.commutator().is_zero());

        // d=2: subdiagonal (2, 4), superdiagonal (-4, -2), zero diagonal.
        let pair = krawtchouk_pair(q(), 2).unwrap();
        let b = pair.commutator();
        assert_eq!(b[(1, 0)], q().from_integer(2));
        assert_eq!(b[(2, 1)], q().from_integer(4));
        assert_eq!(b[(0, 1)], q().from_integer(-4));
        assert_eq!(b[(1, 2)], q().from_integer(-2));
        for i in 0..3 {
            assert!(b[(i, i)].is_zero());
        }
    }

    #[test]
    fn self_duality_at_d2() {
        // The family is self-dual: the primal-basis data agrees with the
        // dual-basis data in everything that does not depend on eigenvector
        // scaling, which our first-entry normalization pins differently.
        let pair = krawtchouk_pair(q(), 2).unwrap();
        let (_, dual_data) = pair.dual_eigenbasis_form().unwrap();
        let (_, primal_data) = pair.primal_eigenbasis_form().unwrap();
        assert_eq!(
            dual_data.partner_eigenvalues(),
            primal_data.partner_eigenvalues()
        );
        for i in 0..=2 {
            assert_eq!(dual_data.a(i), primal_data.a(i));
        }
        for i in 1..=2 {
            assert_eq!(
                dual_data.b(i - 1) * dual_data.c(i),
                primal_data.b(i - 1) * primal_data.c(i)
            );
        }
    }
}
