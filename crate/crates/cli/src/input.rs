//! Instance files.
//!
//! Mixture files name their fields explicitly: `weights` together with
//! exactly one of `precisions`, `variances` or `precision_matrices`. Other
//! instance kinds use the field names of their serialized form and are
//! recognized by which fields are present.

use std::path::Path;

use infomean::inequality::{
    AmhmCase, HyperconvexInstance, Instance, OrderedPair, SumInformationCase,
};
use infomean::{Matrix, MatrixMixture, ScalarMixture, SymmetricPD, Weights};
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::CliError;

const MIXTURE_FIELDS: [&str; 4] = ["weights", "precisions", "variances", "precision_matrices"];
const SCALE_FIELDS: [&str; 3] = ["precisions", "variances", "precision_matrices"];

/// A parsed mixture file.
#[derive(Debug, Clone)]
pub enum Mixture {
    Scalar(ScalarMixture),
    Matrix(MatrixMixture),
}

/// Text of an instance file with its path, for diagnostics.
pub struct Source {
    path: String,
    text: String,
}

impl Source {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Ok(Source {
            path: path.display().to_string(),
            text,
        })
    }

    #[cfg(test)]
    fn from_text(text: &str) -> Self {
        Source {
            path: "<test>".into(),
            text: text.into(),
        }
    }

    /// 1-based line of the first occurrence of `"field"` as an object key.
    fn line_of(&self, field: &str) -> Option<usize> {
        let key = format!("\"{field}\"");
        let mut from = 0;
        while let Some(pos) = self.text[from..].find(&key) {
            let at = from + pos;
            let rest = self.text[at + key.len()..].trim_start();
            if rest.starts_with(':') {
                return Some(self.text[..at].matches('\n').count() + 1);
            }
            from = at + key.len();
        }
        None
    }

    fn field_error(&self, field: &str, msg: impl std::fmt::Display) -> CliError {
        match self.line_of(field) {
            Some(line) => {
                CliError::Validation(format!("{}:{line}: field `{field}`: {msg}", self.path))
            }
            None => CliError::Validation(format!("{}: field `{field}`: {msg}", self.path)),
        }
    }

    fn json_error(&self, e: &serde_json::Error) -> CliError {
        CliError::Validation(format!("{}:{}:{}: {e}", self.path, e.line(), e.column()))
    }

    fn object(&self) -> Result<Map<String, Value>, CliError> {
        match serde_json::from_str::<Value>(&self.text).map_err(|e| self.json_error(&e))? {
            Value::Object(map) => Ok(map),
            _ => Err(CliError::Validation(format!(
                "{}:1: expected an object with named fields",
                self.path
            ))),
        }
    }

    fn field<T: DeserializeOwned>(
        &self,
        map: &Map<String, Value>,
        name: &str,
    ) -> Result<T, CliError> {
        let value = map.get(name).ok_or_else(|| {
            CliError::Validation(format!("{}: missing field `{name}`", self.path))
        })?;
        serde_json::from_value(value.clone()).map_err(|e| self.field_error(name, e))
    }

    /// Maps a library validation error onto the field it concerns.
    fn lib_error(&self, fallback: &str, e: infomean::Error) -> CliError {
        match &e {
            infomean::Error::Invalid { field, .. } if MIXTURE_FIELDS.contains(field) => {
                self.field_error(field, &e)
            }
            _ => self.field_error(fallback, &e),
        }
    }

    pub fn mixture(&self) -> Result<Mixture, CliError> {
        let map = self.object()?;
        if let Some(unknown) = map.keys().find(|k| !MIXTURE_FIELDS.contains(&k.as_str())) {
            return Err(self.field_error(unknown, "unknown field"));
        }
        let present: Vec<&str> = SCALE_FIELDS
            .into_iter()
            .filter(|f| map.contains_key(*f))
            .collect();
        let scale = match present.as_slice() {
            [one] => *one,
            [] => return Err(CliError::Validation(format!(
                "{}: exactly one of `precisions`, `variances` or `precision_matrices` is required",
                self.path
            ))),
            [_, second, ..] => {
                return Err(self.field_error(
                    second,
                    format!("conflicts with `{}`; give exactly one", present[0]),
                ))
            }
        };
        let raw: Vec<f64> = self.field(&map, "weights")?;
        let weights = Weights::new(raw).map_err(|e| self.lib_error("weights", e))?;
        match scale {
            "precisions" => {
                let a: Vec<f64> = self.field(&map, scale)?;
                ScalarMixture::new(weights, a)
                    .map(Mixture::Scalar)
                    .map_err(|e| self.lib_error(scale, e))
            }
            "variances" => {
                let v: Vec<f64> = self.field(&map, scale)?;
                ScalarMixture::from_variances(weights, &v)
                    .map(Mixture::Scalar)
                    .map_err(|e| self.lib_error(scale, e))
            }
            _ => {
                let raw: Vec<Vec<Vec<f64>>> = self.field(&map, scale)?;
                let mats = raw
                    .iter()
                    .enumerate()
                    .map(|(i, rows)| {
                        Matrix::from_rows(rows)
                            .and_then(SymmetricPD::new)
                            .map_err(|e| self.field_error(scale, format!("matrix {i}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                MatrixMixture::new(weights, mats)
                    .map(Mixture::Matrix)
                    .map_err(|e| self.lib_error(scale, e))
            }
        }
    }

    fn typed<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        serde_json::from_str(&self.text).map_err(|e| self.json_error(&e))
    }

    /// Any instance kind, recognized by its fields.
    pub fn instance(&self) -> Result<Instance, CliError> {
        let map = self.object()?;
        let has = |k: &str| map.contains_key(k);
        if SCALE_FIELDS.iter().any(|f| has(f)) {
            return Ok(match self.mixture()? {
                Mixture::Scalar(m) => Instance::ScalarMixture(m),
                Mixture::Matrix(m) => Instance::MatrixMixture(m),
            });
        }
        if has("alpha") && has("values") {
            return self.typed::<AmhmCase>().map(Instance::AmhmCase);
        }
        if has("alpha") && has("summands") {
            return self
                .typed::<SumInformationCase>()
                .map(Instance::SumInformation);
        }
        if has("matrices") && has("weight_matrices") {
            return self
                .typed::<HyperconvexInstance>()
                .map(Instance::Hyperconvex);
        }
        if has("greater") && has("lesser") {
            return self.typed::<OrderedPair>().map(Instance::OrderedPair);
        }
        Err(CliError::Validation(format!(
            "{}: not a recognized instance (fields: {})",
            self.path,
            map.keys().cloned().collect::<Vec<_>>().join(", ")
        )))
    }
}
