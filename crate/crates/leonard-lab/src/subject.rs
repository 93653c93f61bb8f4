//! The JSON subject schema: a field declared once at the top level and one
//! of three subject variants (built-in family, raw matrices, or a parameter
//! array). Scalars are exact decimal strings, matrices row-major arrays of
//! them, so files are bit-exact and diff-able.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use leonard_core::{
    build_split_form, krawtchouk_pair, BasisTag, ExactMatrix, FieldSpec, LeonardPairMatrices,
    ParameterArray, SplitKind,
};

/// `"Q"` or `{"p": 13}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Name(String),
    Prime { p: u64 },
}

impl FieldJson {
    pub fn to_spec(&self) -> Result<FieldSpec> {
        match self {
            FieldJson::Name(name) if name == "Q" => Ok(FieldSpec::rationals()),
            FieldJson::Name(name) => bail!("field: unknown field name {name:?}, expected \"Q\""),
            FieldJson::Prime { p } => {
                FieldSpec::prime_field(*p).map_err(|e| anyhow!("field.p: {e}"))
            }
        }
    }

    pub fn from_spec(spec: FieldSpec) -> Self {
        match spec.modulus() {
            None => FieldJson::Name("Q".into()),
            Some(p) => FieldJson::Prime { p },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubjectJson {
    pub field: FieldJson,
    pub subject: SubjectVariant,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SubjectVariant {
    Family {
        name: String,
        d: usize,
    },
    Matrices {
        basis_tag: String,
        #[serde(rename = "A")]
        a: Vec<Vec<String>>,
        #[serde(rename = "A_star")]
        a_star: Vec<Vec<String>>,
    },
    ParameterArray {
        d: usize,
        theta: Vec<String>,
        theta_star: Vec<String>,
        first_split: Vec<String>,
        second_split: Vec<String>,
    },
}

/// A subject converted to core types, ready for verification.
#[derive(Debug)]
pub struct PreparedSubject {
    pub pair: LeonardPairMatrices,
    pub description: String,
    pub field: FieldJson,
}

fn parse_basis_tag(tag: &str) -> Result<BasisTag> {
    Ok(match tag {
        "split" => BasisTag::Split,
        "dual_eigenbasis" => BasisTag::DualEigenbasis,
        "primal_eigenbasis" => BasisTag::PrimalEigenbasis,
        "other" => BasisTag::Other,
        _ => bail!(
            "subject.matrices.basis_tag: unknown tag {tag:?}, expected split, \
             dual_eigenbasis, primal_eigenbasis or other"
        ),
    })
}

fn parse_matrix(spec: FieldSpec, rows: &[Vec<String>], name: &str) -> Result<ExactMatrix> {
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, text) in row.iter().enumerate() {
            out.push(
                spec.parse_element(text)
                    .map_err(|e| anyhow!("subject.matrices.{name}[{i}][{j}]: {e}"))?,
            );
        }
        parsed.push(out);
    }
    ExactMatrix::from_rows(spec, parsed).map_err(|e| anyhow!("subject.matrices.{name}: {e}"))
}

fn parse_scalars(
    spec: FieldSpec,
    values: &[String],
    name: &str,
) -> Result<Vec<leonard_core::FieldElement>> {
    values
        .iter()
        .enumerate()
        .map(|(i, text)| {
            spec.parse_element(text)
                .map_err(|e| anyhow!("subject.parameter_array.{name}[{i}]: {e}"))
        })
        .collect()
}

/// Parses and validates one subject. Any error here is an input problem,
/// reported with the offending field named; verification failures are a
/// separate, later concern.
pub fn prepare_subject(subject: &SubjectJson) -> Result<PreparedSubject> {
    let spec = subject.field.to_spec()?;
    let (pair, description) = match &subject.subject {
        SubjectVariant::Family { name, d } => {
            if name != "krawtchouk" {
                bail!("subject.family.name: unknown family {name:?}, expected \"krawtchouk\"");
            }
            let pair = krawtchouk_pair(spec, *d).context("subject.family")?;
            (pair, format!("family krawtchouk d={d} over {spec}"))
        }
        SubjectVariant::Matrices { basis_tag, a, a_star } => {
            let tag = parse_basis_tag(basis_tag)?;
            let a = parse_matrix(spec, a, "A")?;
            let a_star = parse_matrix(spec, a_star, "A_star")?;
            let pair = LeonardPairMatrices::new(tag, a, a_star).context("subject.matrices")?;
            let description = format!("matrix pair d={} over {spec} [{tag}]", pair.d());
            (pair, description)
        }
        SubjectVariant::ParameterArray {
            d,
            theta,
            theta_star,
            first_split,
            second_split,
        } => {
            if theta.len() != d + 1 {
                bail!(
                    "subject.parameter_array.theta: {} entries for declared d={d}",
                    theta.len()
                );
            }
            let pa = ParameterArray::new(
                parse_scalars(spec, theta, "theta")?,
                parse_scalars(spec, theta_star, "theta_star")?,
                parse_scalars(spec, first_split, "first_split")?,
                parse_scalars(spec, second_split, "second_split")?,
            )
            .context("subject.parameter_array")?;
            let pair = build_split_form(&pa, SplitKind::First);
            (pair, format!("parameter array d={d} over {spec}"))
        }
    };
    Ok(PreparedSubject {
        pair,
        description,
        field: subject.field.clone(),
    })
}

/// The subject file for a parameter array, as emitted by search output.
pub fn subject_for_array(pa: &ParameterArray) -> SubjectJson {
    let strings = |v: &[leonard_core::FieldElement]| v.iter().map(|e| e.serialize()).collect();
    SubjectJson {
        field: FieldJson::from_spec(pa.spec()),
        subject: SubjectVariant::ParameterArray {
            d: pa.d(),
            theta: strings(pa.theta()),
            theta_star: strings(pa.theta_star()),
            first_split: strings(pa.first_split()),
            second_split: strings(pa.second_split()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_json_round_trip() {
        let q: FieldJson = serde_json::from_str("\"Q\"").unwrap();
        assert_eq!(q.to_spec().unwrap(), FieldSpec::rationals());
        let p: FieldJson = serde_json::from_str("{\"p\":13}").unwrap();
        assert_eq!(p.to_spec().unwrap(), FieldSpec::prime_field(13).unwrap());
        assert!(FieldJson::Prime { p: 10 }.to_spec().is_err());
        assert!(FieldJson::Name("R".into()).to_spec().is_err());
    }

    #[test]
    fn family_subject_parses() {
        let text = r#"{"field":"Q","subject":{"family":{"name":"krawtchouk","d":3}}}"#;
        let subject: SubjectJson = serde_json::from_str(text).unwrap();
        let prepared = prepare_subject(&subject).unwrap();
        assert_eq!(prepared.pair.d(), 3);
        assert_eq!(prepared.description, "family krawtchouk d=3 over Q");
    }

    #[test]
    fn matrices_subject_parses() {
        let text = r#"{
            "field": "Q",
            "subject": {"matrices": {
                "basis_tag": "dual_eigenbasis",
                "A": [["0", "1"], ["1", "0"]],
                "A_star": [["1", "0"], ["0", "-1"]]
            }}
        }"#;
        let subject: SubjectJson = serde_json::from_str(text).unwrap();
        let prepared = prepare_subject(&subject).unwrap();
        assert_eq!(prepared.pair.basis_tag(), BasisTag::DualEigenbasis);
    }

    #[test]
    fn bad_scalar_is_named() {
        let text = r#"{
            "field": "Q",
            "subject": {"matrices": {
                "basis_tag": "other",
                "A": [["0", "x"], ["1", "0"]],
                "A_star": [["1", "0"], ["0", "-1"]]
            }}
        }"#;
        let subject: SubjectJson = serde_json::from_str(text).unwrap();
        let err = format!("{:#}", prepare_subject(&subject).unwrap_err());
        assert!(err.contains("A[0][1]"), "{err}");
    }

    #[test]
    fn zero_split_entry_is_rejected() {
        let text = r#"{
            "field": "Q",
            "subject": {"parameter_array": {
                "d": 2,
                "theta": ["0", "1", "2"],
                "theta_star": ["0", "1", "2"],
                "first_split": ["1", "0"],
                "second_split": ["1", "1"]
            }}
        }"#;
        let subject: SubjectJson = serde_json::from_str(text).unwrap();
        let err = format!("{:#}", prepare_subject(&subject).unwrap_err());
        assert!(err.contains("InvalidParameterArray"), "{err}");
        assert!(err.contains("first_split[2]"), "{err}");
    }
}
