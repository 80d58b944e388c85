//! Relational signatures.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
}

/// A nonempty set of relation symbols with positive arities and unique names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSignature")]
pub struct Signature {
    relations: Vec<Relation>,
}

#[derive(Deserialize)]
struct RawSignature {
    relations: Vec<Relation>,
}

impl TryFrom<RawSignature> for Signature {
    type Error = Error;

    fn try_from(raw: RawSignature) -> Result<Self> {
        Signature::new(raw.relations)
    }
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new(relations: Vec<Relation>) -> Result<Self> {
        if relations.is_empty() {
            return Err(Error::Signature("at least one relation is required".into()));
        }
        let mut seen = HashSet::new();
        for r in &relations {
            if r.arity == 0 {
                return Err(Error::Signature(format!(
                    "relation `{}` must have arity at least 1",
                    r.name
                )));
            }
            if r.arity > 8 {
                return Err(Error::Signature(format!(
                    "relation `{}` has arity {}; the supported maximum is 8",
                    r.name, r.arity
                )));
            }
            if !is_identifier(&r.name) {
                return Err(Error::Signature(format!(
                    "relation name `{}` is not an identifier",
                    r.name
                )));
            }
            if matches!(r.name.as_str(), "exists" | "forall") {
                return Err(Error::Signature(format!(
                    "relation name `{}` is a reserved keyword",
                    r.name
                )));
            }
            if !seen.insert(r.name.as_str()) {
                return Err(Error::Signature(format!(
                    "duplicate relation name `{}`",
                    r.name
                )));
            }
        }
        Ok(Self { relations })
    }

    /// Convenience constructor from `(name, arity)` pairs.
    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(name, arity)| Relation {
                    name: name.into(),
                    arity,
                })
                .collect(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.relation(name).map(|r| r.arity)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let sig = Signature::from_json(r#"{"relations":[{"name":"E","arity":2},{"name":"P","arity":1}]}"#)
            .unwrap();
        assert_eq!(sig.arity_of("E"), Some(2));
        assert_eq!(sig.arity_of("P"), Some(1));
        assert_eq!(sig.arity_of("Q"), None);
        let text = serde_json::to_string(&sig).unwrap();
        assert_eq!(sig, Signature::from_json(&text).unwrap());
    }

    #[test]
    fn rejects_invalid() {
        assert!(Signature::from_pairs(Vec::<(String, usize)>::new()).is_err());
        assert!(Signature::from_pairs(vec![("E", 0)]).is_err());
        assert!(Signature::from_pairs(vec![("E", 1), ("E", 2)]).is_err());
        assert!(Signature::from_pairs(vec![("bad name", 1)]).is_err());
        assert!(Signature::from_pairs(vec![("exists", 1)]).is_err());
    }
}
