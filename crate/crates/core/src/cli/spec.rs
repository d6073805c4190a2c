//! Channel specification files.
//!
//! A specification is a JSON object with a `kind` field and a kind-dependent
//! payload. Complex numbers are `[re, im]` pairs and matrices are lists of
//! rows:
//!
//! ```json
//! { "kind": "kraus", "kraus": [ [[[1,0],[0,0]], [[0,0],[1,0]]] ] }
//! { "kind": "unitary", "unitary": [[[0,0],[1,0]], [[1,0],[0,0]]] }
//! { "kind": "mixed_unitary", "probs": [0.5, 0.5], "unitaries": [ ... ] }
//! { "kind": "povm", "effects": [ ... ] }
//! { "kind": "sic", "d": 2, "permutation": "(1 2)(3 4)" }
//! ```

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::channels::{mixed_unitary_channel, unitary_channel, QuantumChannel};
use crate::linalg::{ComplexMatrix, Tolerance};
use crate::povm::{povm_to_channel, sic_povm, Permutation, Povm};

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: String,
    kraus: Option<Vec<RawMatrix>>,
    unitary: Option<RawMatrix>,
    probs: Option<Vec<f64>>,
    unitaries: Option<Vec<RawMatrix>>,
    effects: Option<Vec<RawMatrix>>,
    d: Option<usize>,
    permutation: Option<String>,
}

/// A parsed specification, before conversion to a channel.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Kraus(Vec<ComplexMatrix>),
    Unitary(ComplexMatrix),
    MixedUnitary { probs: Vec<f64>, unitaries: Vec<ComplexMatrix> },
    Povm(Povm),
    /// The built-in SIC POVM in dimension `d` with effect `i` relabelled as `π(i)`.
    Sic { d: usize, permutation: Permutation },
}

/// Where and why a specification failed to parse.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}")?,
            (Some(l), None) => write!(f, "line {l}")?,
            _ => write!(f, "unknown position")?,
        }
        if !self.field.is_empty() {
            write!(f, ", field `{}`", self.field)?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for SpecError {}

impl ChannelSpec {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            SpecError {
                line: Some(inner.line()),
                column: Some(inner.column()),
                field: if field == "." { String::new() } else { field },
                message: strip_position(&inner.to_string()),
            }
        })?;
        let fail = |field: &str, message: String| SpecError {
            line: field_line(text, field.split(['[', '.']).next().unwrap_or(field)),
            column: None,
            field: field.to_string(),
            message,
        };
        let need = |field: &str, present: bool| {
            if present {
                Ok(())
            } else {
                Err(SpecError {
                    line: field_line(text, "kind"),
                    column: None,
                    field: field.to_string(),
                    message: format!("kind `{}` requires field `{field}`", raw.kind),
                })
            }
        };
        let allowed: &[&str] = match raw.kind.as_str() {
            "kraus" => &["kraus"],
            "unitary" => &["unitary"],
            "mixed_unitary" => &["probs", "unitaries"],
            "povm" => &["effects"],
            "sic" => &["d", "permutation"],
            other => {
                return Err(fail(
                    "kind",
                    format!("unknown kind `{other}`, expected kraus, unitary, mixed_unitary, povm or sic"),
                ))
            }
        };
        let present = [
            ("kraus", raw.kraus.is_some()),
            ("unitary", raw.unitary.is_some()),
            ("probs", raw.probs.is_some()),
            ("unitaries", raw.unitaries.is_some()),
            ("effects", raw.effects.is_some()),
            ("d", raw.d.is_some()),
            ("permutation", raw.permutation.is_some()),
        ];
        for (name, is_set) in present {
            if is_set && !allowed.contains(&name) {
                return Err(fail(name, format!("field `{name}` does not belong to kind `{}`", raw.kind)));
            }
        }

        match raw.kind.as_str() {
            "kraus" => {
                need("kraus", raw.kraus.is_some())?;
                let ms = matrices(raw.kraus.as_deref().unwrap_or_default(), "kraus", &fail)?;
                if ms.is_empty() {
                    return Err(fail("kraus", "at least one Kraus operator is required".into()));
                }
                QuantumChannel::from_kraus(ms.clone()).map_err(|e| fail("kraus", e.to_string()))?;
                Ok(ChannelSpec::Kraus(ms))
            }
            "unitary" => {
                need("unitary", raw.unitary.is_some())?;
                let u = matrix(raw.unitary.as_ref().unwrap(), "unitary", &fail)?;
                unitary_channel(&u).map_err(|e| fail("unitary", e.to_string()))?;
                Ok(ChannelSpec::Unitary(u))
            }
            "mixed_unitary" => {
                need("probs", raw.probs.is_some())?;
                need("unitaries", raw.unitaries.is_some())?;
                let probs = raw.probs.clone().unwrap();
                let unitaries = matrices(raw.unitaries.as_deref().unwrap(), "unitaries", &fail)?;
                if probs.len() != unitaries.len() {
                    return Err(fail(
                        "probs",
                        format!("{} probabilities for {} unitaries", probs.len(), unitaries.len()),
                    ));
                }
                mixed_unitary_channel(&probs, &unitaries).map_err(|e| fail("unitaries", e.to_string()))?;
                Ok(ChannelSpec::MixedUnitary { probs, unitaries })
            }
            "povm" => {
                need("effects", raw.effects.is_some())?;
                let effects = matrices(raw.effects.as_deref().unwrap(), "effects", &fail)?;
                let povm = Povm::new(effects).map_err(|e| fail("effects", e.to_string()))?;
                Ok(ChannelSpec::Povm(povm))
            }
            _ => {
                need("d", raw.d.is_some())?;
                let d = raw.d.unwrap();
                sic_povm(d).map_err(|e| fail("d", e.to_string()))?;
                let text_perm = raw.permutation.as_deref().unwrap_or("()");
                let permutation =
                    Permutation::parse_cycles(text_perm, d * d).map_err(|e| fail("permutation", e.to_string()))?;
                Ok(ChannelSpec::Sic { d, permutation })
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ChannelSpec::Kraus(_) => "kraus",
            ChannelSpec::Unitary(_) => "unitary",
            ChannelSpec::MixedUnitary { .. } => "mixed_unitary",
            ChannelSpec::Povm(_) => "povm",
            ChannelSpec::Sic { .. } => "sic",
        }
    }

    /// Measurements become their quantum-classical channels.
    pub fn to_channel(&self, tol: &Tolerance) -> crate::Result<QuantumChannel> {
        match self {
            ChannelSpec::Kraus(ms) => QuantumChannel::from_kraus(ms.clone()),
            ChannelSpec::Unitary(u) => unitary_channel(u),
            ChannelSpec::MixedUnitary { probs, unitaries } => mixed_unitary_channel(probs, unitaries),
            ChannelSpec::Povm(p) => povm_to_channel(p, tol),
            ChannelSpec::Sic { d, permutation } => {
                let povm = sic_povm(*d)?.to_povm()?.permuted(permutation)?;
                povm_to_channel(&povm, tol)
            }
        }
    }
}

/// Reads and parses a specification file.
pub fn load_spec(path: &Path) -> Result<ChannelSpec, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    ChannelSpec::parse(&text).map_err(|e| LoadError::Parse {
        path: path.display().to_string(),
        error: e,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadError {
    Io { path: String, message: String },
    Parse { path: String, error: SpecError },
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io { path, message } => write!(f, "cannot read spec file {path}: {message}"),
            LoadError::Parse { path, error } => write!(f, "parse error in {path}: {error}"),
        }
    }
}

impl std::error::Error for LoadError {}

fn matrix(
    raw: &RawMatrix,
    field: &str,
    fail: &impl Fn(&str, String) -> SpecError,
) -> Result<ComplexMatrix, SpecError> {
    let rows: Vec<Vec<Complex64>> = raw
        .iter()
        .map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| fail(field, e.to_string()))
}

fn matrices(
    raw: &[RawMatrix],
    field: &str,
    fail: &impl Fn(&str, String) -> SpecError,
) -> Result<Vec<ComplexMatrix>, SpecError> {
    raw.iter()
        .enumerate()
        .map(|(i, m)| matrix(m, &format!("{field}[{i}]"), fail))
        .collect()
}

/// 1-based line of the first `"field"` key in `text`.
fn field_line(text: &str, field: &str) -> Option<usize> {
    let key = format!("\"{field}\"");
    let is_key = |line: &str| {
        line.match_indices(&key)
            .any(|(i, _)| line[i + key.len()..].trim_start().starts_with(':'))
    };
    text.lines().position(is_key).map(|i| i + 1)
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLIP: &str = r#"{
  "kind": "unitary",
  "unitary": [[[0, 0], [1, 0]],
              [[1, 0], [0, 0]]]
}"#;

    #[test]
    fn parses_each_kind() {
        assert!(matches!(ChannelSpec::parse(FLIP).unwrap(), ChannelSpec::Unitary(_)));
        let k = r#"{"kind": "kraus", "kraus": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        assert_eq!(ChannelSpec::parse(k).unwrap().kind(), "kraus");
        let m = r#"{"kind": "mixed_unitary", "probs": [0.5, 0.5],
            "unitaries": [[[[1,0],[0,0]],[[0,0],[1,0]]], [[[0,0],[1,0]],[[1,0],[0,0]]]]}"#;
        let tol = Tolerance::default();
        assert_eq!(ChannelSpec::parse(m).unwrap().to_channel(&tol).unwrap().kraus_count(), 2);
        let p = r#"{"kind": "povm", "effects": [[[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[1,0]]]]}"#;
        assert_eq!(ChannelSpec::parse(p).unwrap().to_channel(&tol).unwrap().out_dim(), 2);
        let s = r#"{"kind": "sic", "d": 2, "permutation": "(1 2)(3 4)"}"#;
        let spec = ChannelSpec::parse(s).unwrap();
        assert_eq!(spec.to_channel(&tol).unwrap().out_dim(), 4);
    }

    #[test]
    fn syntax_error_reports_line() {
        let bad = "{\n  \"kind\": \"unitary\",\n  \"unitary\": [[[0, 0], [1, 0]],,\n}";
        let e = ChannelSpec::parse(bad).unwrap_err();
        assert_eq!(e.line, Some(3));
    }

    #[test]
    fn type_error_reports_field_path() {
        let bad = "{\n  \"kind\": \"unitary\",\n  \"unitary\": [[[0, \"x\"]]]\n}";
        let e = ChannelSpec::parse(bad).unwrap_err();
        assert_eq!(e.line, Some(3));
        assert!(e.field.starts_with("unitary"), "{}", e.field);
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let not_unitary = "{\n \"kind\": \"unitary\",\n \"unitary\": [[[1,0],[1,0]],[[0,0],[1,0]]]\n}";
        let e = ChannelSpec::parse(not_unitary).unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (Some(3), "unitary"));

        let missing = r#"{"kind": "mixed_unitary", "probs": [1.0]}"#;
        assert_eq!(ChannelSpec::parse(missing).unwrap_err().field, "unitaries");

        let unknown = r#"{"kind": "choi"}"#;
        assert_eq!(ChannelSpec::parse(unknown).unwrap_err().field, "kind");

        let stray = r#"{"kind": "sic", "d": 2, "effects": []}"#;
        assert_eq!(ChannelSpec::parse(stray).unwrap_err().field, "effects");

        let perm = r#"{"kind": "sic", "d": 2, "permutation": "(1 5)"}"#;
        assert_eq!(ChannelSpec::parse(perm).unwrap_err().field, "permutation");

        let ragged = r#"{"kind": "kraus", "kraus": [[[[1,0]],[[0,0],[1,0]]]]}"#;
        assert_eq!(ChannelSpec::parse(ragged).unwrap_err().field, "kraus[0]");
    }

    #[test]
    fn missing_file_is_io_error() {
        let e = load_spec(Path::new("/nonexistent/spec.json")).unwrap_err();
        assert!(matches!(e, LoadError::Io { .. }));
        assert!(e.to_string().starts_with("cannot read"));
    }
}
