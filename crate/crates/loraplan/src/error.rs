//! Error and violation types shared across the crate.

use thiserror::Error;

/// A single invariant violation found by site validation.
///
/// Violations are data, not failures: `validate_site` returns them in a list
/// and leaves it to the caller to decide whether they are fatal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Which entity is at fault, e.g. `gateway "gw-1".position.z`.
    pub entity: String,
    /// The invariant that does not hold.
    pub invariant: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.entity, self.invariant)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical or physical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A lookup into user-supplied configuration tables failed.
    #[error("configuration error: {0}")]
    Config(String),

    /// Input file could not be parsed (syntax, unknown keys, wrong types).
    #[error("parse error: {0}")]
    Parse(String),

    /// A site failed validation; carries every violation found.
    #[error("site validation failed: {}", format_violations(.0))]
    Invalid(Vec<Violation>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn violation_display_names_entity_and_invariant() {
        let v = Violation {
            entity: "gateway \"gw-1\".position.z".into(),
            invariant: "must be > 0".into(),
        };
        assert_eq!(v.to_string(), "gateway \"gw-1\".position.z: must be > 0");
    }

    #[test]
    fn invalid_error_lists_all_violations() {
        let err = Error::Invalid(vec![
            Violation {
                entity: "a".into(),
                invariant: "x".into(),
            },
            Violation {
                entity: "b".into(),
                invariant: "y".into(),
            },
        ]);
        let msg = err.to_string();
        assert!(msg.contains("a: x") && msg.contains("b: y"));
    }
}
