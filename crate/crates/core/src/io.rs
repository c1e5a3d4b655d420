//! JSON formats for matrices, fields and map specifications.
//!
//! A matrix is `{"field": "GF(9)", "rows": 2, "cols": 2, "entries": [[..], ..]}`
//! with ℚ entries as strings (`"-3/4"`, plain integers are also read),
//! GF(p) entries as integers and GF(p²) entries as `[a, b]` for a + bω.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::error::AlgebraError;
use crate::field::{Field, FieldElem};
use crate::matrix::Matrix;
use crate::preserver::{Automorphism, Form, MapSpec, Perturbation, PerturbedMap, PreserverError, ScalarFn};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Map(#[from] PreserverError),
    #[error("{0}")]
    Format(String),
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

pub fn elem_to_json(e: &FieldElem) -> Value {
    match e {
        FieldElem::Rational(r) => Value::String(r.to_string()),
        FieldElem::Prime { v, .. } => Value::from(*v),
        FieldElem::PrimeSquare { a, b, .. } => Value::from(vec![*a, *b]),
    }
}

pub fn elem_from_json(field: Field, v: &Value) -> Result<FieldElem, IoError> {
    let bad = || IoError::Format(format!("cannot read {v} as an element of {field}"));
    match (field, v) {
        (Field::PrimeSquare(_), Value::Array(parts)) => {
            let [a, b] = parts.as_slice() else { return Err(bad()) };
            let (a, b) = (a.as_i64().ok_or_else(bad)?, b.as_i64().ok_or_else(bad)?);
            Ok(FieldElem::quadratic(field, a, b)?)
        }
        (_, Value::Number(n)) => Ok(FieldElem::from_i64(field, n.as_i64().ok_or_else(bad)?)),
        (_, Value::String(s)) => Ok(FieldElem::parse(field, s)?),
        _ => Err(bad()),
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Value>>,
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    serde_json::to_value(m).expect("matrices always serialize")
}

pub fn matrix_from_json(v: &Value) -> Result<Matrix, IoError> {
    let raw: MatrixJson = serde_json::from_value(v.clone())?;
    if raw.entries.len() != raw.rows || raw.entries.iter().any(|r| r.len() != raw.cols) {
        return Err(IoError::Format(format!(
            "entries do not form a {}x{} grid",
            raw.rows, raw.cols
        )));
    }
    let entries = raw
        .entries
        .iter()
        .flatten()
        .map(|e| elem_from_json(raw.field, e))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_entries(raw.field, raw.rows, raw.cols, entries)?)
}

pub fn parse_matrix(text: &str) -> Result<Matrix, IoError> {
    matrix_from_json(&serde_json::from_str(text)?)
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            field: self.field(),
            rows: self.rows(),
            cols: self.cols(),
            entries: self
                .to_rows()
                .iter()
                .map(|r| r.iter().map(elem_to_json).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        matrix_from_json(&Value::deserialize(d)?).map_err(D::Error::custom)
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        elem_to_json(self).serialize(s)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum PerturbationJson {
    Shift { u: Value },
    ZeroScalar,
    Swap { p: Matrix, q: Matrix },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSpecJson {
    form: Form,
    conjugator: Matrix,
    automorphism: Automorphism,
    lambda_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    perturbation: Option<PerturbationJson>,
}

/// A map file: a canonical map, optionally with a perturbation that breaks it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapFile {
    Canonical(MapSpec),
    Perturbed(PerturbedMap),
}

impl MapFile {
    pub fn as_map(&self) -> &dyn crate::preserver::MatrixMap {
        match self {
            MapFile::Canonical(m) => m,
            MapFile::Perturbed(m) => m,
        }
    }
}

pub fn parse_map_file(text: &str) -> Result<MapFile, IoError> {
    let raw: MapSpecJson = serde_json::from_str(text)?;
    let field = raw.conjugator.field();
    let spec = MapSpec::new(raw.form, raw.conjugator, raw.automorphism, ScalarFn::Seeded(raw.lambda_seed))?;
    let Some(p) = raw.perturbation else {
        return Ok(MapFile::Canonical(spec));
    };
    let perturbation = match p {
        PerturbationJson::Shift { u } => Perturbation::Shift(elem_from_json(field, &u)?),
        PerturbationJson::ZeroScalar => Perturbation::ZeroScalar,
        PerturbationJson::Swap { p, q } => Perturbation::Swap(p, q),
    };
    Ok(MapFile::Perturbed(PerturbedMap { base: spec, perturbation }))
}

/// Only seeded λ has a file form.
pub fn map_spec_to_json(spec: &MapSpec) -> Result<Value, IoError> {
    let ScalarFn::Seeded(seed) = spec.scalar_fn() else {
        return Err(IoError::Format("only seeded λ can be written to a map file".into()));
    };
    Ok(serde_json::to_value(MapSpecJson {
        form: spec.form(),
        conjugator: spec.conjugator().clone(),
        automorphism: spec.automorphism(),
        lambda_seed: *seed,
        perturbation: None,
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn matrix_round_trips() {
        for field in [Field::Rational, Field::Prime(5), Field::PrimeSquare(3), Field::PrimeSquare(2)] {
            let m = Matrix::from_fn(field, 2, 3, |i, j| field_elem(field, i, j));
            let v = matrix_to_json(&m);
            assert_eq!(matrix_from_json(&v).unwrap(), m);
        }
    }

    fn field_elem(field: Field, i: usize, j: usize) -> FieldElem {
        match field {
            Field::Rational => FieldElem::from_ratio(field, i as i64 - 2, j as i64 + 1).unwrap(),
            Field::PrimeSquare(_) => FieldElem::quadratic(field, i as i64, j as i64).unwrap(),
            _ => FieldElem::from_i64(field, (i * 3 + j) as i64),
        }
    }

    #[test]
    fn entry_formats() {
        let m = matrix_from_json(&json!({"field": "Q", "rows": 1, "cols": 3, "entries": [["1/2", 3, "-4/6"]]})).unwrap();
        assert_eq!(m.get(0, 2), &FieldElem::from_ratio(Field::Rational, -2, 3).unwrap());
        assert_eq!(matrix_to_json(&m)["entries"], json!([["1/2", "3", "-2/3"]]));
        let g = matrix_from_json(&json!({"field": "GF(9)", "rows": 1, "cols": 1, "entries": [[[1, 2]]]})).unwrap();
        assert_eq!(g.get(0, 0), &FieldElem::quadratic(Field::PrimeSquare(3), 1, 2).unwrap());
    }

    #[test]
    fn malformed_matrices() {
        assert!(parse_matrix("{").is_err());
        assert!(parse_matrix(r#"{"field":"Q","rows":2,"cols":2,"entries":[["1","2"]]}"#).is_err());
        assert!(parse_matrix(r#"{"field":"GF(6)","rows":1,"cols":1,"entries":[[1]]}"#).is_err());
        assert!(parse_matrix(r#"{"field":"GF(9)","rows":1,"cols":1,"entries":[[1.5]]}"#).is_err());
    }

    #[test]
    fn map_files() {
        let text = r#"{"form":"transpose_conjugation","conjugator":{"field":"GF(2)","rows":2,"cols":2,"entries":[[1,1],[0,1]]},"automorphism":"identity","lambda_seed":7}"#;
        let MapFile::Canonical(spec) = parse_map_file(text).unwrap() else { panic!() };
        assert_eq!(spec.form(), Form::TransposeConjugation);
        let back = map_spec_to_json(&spec).unwrap();
        assert_eq!(back, serde_json::from_str::<Value>(text).unwrap());
        let shifted = r#"{"form":"conjugation","conjugator":{"field":"Q","rows":1,"cols":1,"entries":[["1"]]},"automorphism":"identity","lambda_seed":1,"perturbation":{"kind":"shift","u":"1"}}"#;
        assert!(matches!(parse_map_file(shifted).unwrap(), MapFile::Perturbed(_)));
        let singular = r#"{"form":"conjugation","conjugator":{"field":"Q","rows":1,"cols":1,"entries":[["0"]]},"automorphism":"identity","lambda_seed":1}"#;
        assert!(matches!(parse_map_file(singular), Err(IoError::Map(_))));
    }
}
