//! JSON problem files.

use std::fs;
use std::path::Path;

use junction::branch::Wavenumber;
use junction::spec::{BoundaryOpSpec, DerivativeTerm, Family, OpSide, ProblemSpec};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number written as `[re, im]`.
pub type Cx = [f64; 2];

pub fn cx(z: Complex64) -> Cx {
    [z.re, z.im]
}

fn to_c(z: Cx) -> Complex64 {
    Complex64::new(z[0], z[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub tangential: u32,
    pub normal: u32,
    pub upper: Cx,
    pub lower: Cx,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpFile {
    pub order: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal: Option<[Cx; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangential: Option<[Cx; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TermFile>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub k0: Cx,
    pub left: [OpFile; 2],
    pub right: [OpFile; 2],
    pub family: Family,
}

#[derive(thiserror::Error, Debug)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("schema error at `{path}` (line {line}, column {column}): {message}")]
    Schema {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invariant violated: \"{rule}\"")]
    Invariant { rule: String },
}

fn invariant(rule: impl ToString) -> InputError {
    InputError::Invariant { rule: rule.to_string() }
}

impl OpFile {
    fn to_op(&self, side: OpSide, bank_index: u8) -> Result<BoundaryOpSpec, InputError> {
        let label = format!("{}[{}]", if side == OpSide::Left { "left" } else { "right" }, bank_index - 1);
        match (&self.table, self.normal) {
            (Some(_), Some(_)) => Err(invariant(format!("{label}: give either normal/tangential or table, not both"))),
            (Some(_), None) if self.tangential.is_some() => {
                Err(invariant(format!("{label}: give either normal/tangential or table, not both")))
            }
            (Some(table), None) => {
                let terms = table
                    .iter()
                    .map(|t| DerivativeTerm {
                        tangential: t.tangential,
                        normal: t.normal,
                        upper: to_c(t.upper),
                        lower: to_c(t.lower),
                    })
                    .collect();
                Ok(BoundaryOpSpec::with_table(self.order, side, bank_index, terms))
            }
            (None, None) => Err(invariant(format!("{label}: normal coefficients are required"))),
            (None, Some(normal)) => {
                let tangential = self.tangential.unwrap_or([[0.0; 2]; 2]);
                Ok(BoundaryOpSpec::new(
                    self.order,
                    side,
                    bank_index,
                    normal.map(to_c),
                    tangential.map(to_c),
                ))
            }
        }
    }

    fn from_op(op: &BoundaryOpSpec) -> Self {
        match &op.general_table {
            Some(table) => Self {
                order: op.order,
                normal: None,
                tangential: None,
                table: Some(
                    table
                        .iter()
                        .map(|t| TermFile {
                            tangential: t.tangential,
                            normal: t.normal,
                            upper: cx(t.upper),
                            lower: cx(t.lower),
                        })
                        .collect(),
                ),
            },
            None => Self {
                order: op.order,
                normal: Some(op.normal.map(cx)),
                tangential: Some(op.tangential.map(cx)),
                table: None,
            },
        }
    }
}

impl SpecFile {
    pub fn to_spec(&self) -> Result<ProblemSpec, InputError> {
        let k0 = Wavenumber::new(to_c(self.k0)).map_err(invariant)?;
        let left = [self.left[0].to_op(OpSide::Left, 1)?, self.left[1].to_op(OpSide::Left, 2)?];
        let right = [self.right[0].to_op(OpSide::Right, 1)?, self.right[1].to_op(OpSide::Right, 2)?];
        ProblemSpec::new(k0, left, right, self.family).map_err(invariant)
    }

    /// Normalized echo of a validated spec.
    pub fn from_spec(spec: &ProblemSpec) -> Self {
        Self {
            k0: cx(spec.k0.value()),
            left: [OpFile::from_op(&spec.left[0]), OpFile::from_op(&spec.left[1])],
            right: [OpFile::from_op(&spec.right[0]), OpFile::from_op(&spec.right[1])],
            family: spec.family,
        }
    }
}

pub fn parse_spec_str(text: &str) -> Result<ProblemSpec, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: SpecFile = serde_path_to_error::deserialize(de).map_err(|e| InputError::Schema {
        path: e.path().to_string(),
        line: e.inner().line(),
        column: e.inner().column(),
        message: e.inner().to_string(),
    })?;
    file.to_spec()
}

pub fn parse_spec(path: &Path) -> Result<ProblemSpec, InputError> {
    let text = fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_spec_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIRICHLET_NEUMANN: &str = r#"{
        "k0": [1.0, 0.5],
        "left": [
            {"order": 0, "normal": [[1, 0], [0, 0]]},
            {"order": 1, "normal": [[0, 0], [1, 0]]}
        ],
        "right": [
            {"order": 0, "normal": [[1, 0], [0, 0]]},
            {"order": 1, "normal": [[0, 0], [1, 0]]}
        ],
        "family": "pairwise_normal"
    }"#;

    #[test]
    fn minimal_file_parses() {
        let spec = parse_spec_str(DIRICHLET_NEUMANN).unwrap();
        assert_eq!(spec.family, Family::PairwiseNormal);
        assert_eq!(spec.orders(), [0, 1, 0, 1]);
        assert_eq!(spec.left[1].normal[1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn real_wavenumber_violates_invariant() {
        let text = DIRICHLET_NEUMANN.replace("[1.0, 0.5]", "[1, 0]");
        let err = parse_spec_str(&text).unwrap_err();
        assert!(matches!(err, InputError::Invariant { .. }));
        assert!(err.to_string().contains("Im k0 must be positive"), "{err}");
    }

    #[test]
    fn schema_error_carries_path_and_line() {
        let text = DIRICHLET_NEUMANN.replace(r#""order": 1, "normal": [[0, 0], [1, 0]]}
        ],
        "family""#, r#""order": "one", "normal": [[0, 0], [1, 0]]}
        ],
        "family""#);
        match parse_spec_str(&text).unwrap_err() {
            InputError::Schema { path, line, .. } => {
                assert_eq!(path, "right[1].order");
                assert_eq!(line, 9);
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn echo_round_trips() {
        let spec = parse_spec_str(DIRICHLET_NEUMANN).unwrap();
        let echo = SpecFile::from_spec(&spec);
        let text = serde_json::to_string(&echo).unwrap();
        assert_eq!(parse_spec_str(&text).unwrap(), spec);
    }

    #[test]
    fn table_and_normal_are_exclusive() {
        let text = DIRICHLET_NEUMANN.replacen(
            r#"{"order": 0, "normal": [[1, 0], [0, 0]]}"#,
            r#"{"order": 0, "normal": [[1, 0], [0, 0]], "table": []}"#,
            1,
        );
        assert!(matches!(parse_spec_str(&text), Err(InputError::Invariant { .. })));
    }
}
