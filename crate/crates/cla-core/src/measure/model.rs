//! Density models: one density per (relation, identity pattern) key.

use std::collections::HashMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::logic::{IdentityPattern, Signature};
use crate::measure::{Density, DensitySpec};

/// Assigns every relation cell a density by the identity pattern of its
/// argument tuple. Keys not listed in the model file fall back to the
/// uniform density.
#[derive(Debug, Clone)]
pub struct DensityModel {
    signature: Signature,
    table: HashMap<(String, IdentityPattern), Density>,
    uniform: Density,
}

#[derive(Deserialize)]
struct RawModel {
    densities: Vec<RawEntry>,
}

#[derive(Deserialize)]
struct RawEntry {
    relation: String,
    pattern: IdentityPattern,
    density: DensitySpec,
}

impl DensityModel {
    /// The all-uniform model over a signature.
    pub fn uniform(signature: Signature) -> DensityModel {
        DensityModel {
            signature,
            table: HashMap::new(),
            uniform: Density::uniform(),
        }
    }

    /// Parses and validates a model file (`{"densities":[{"relation":…,
    /// "pattern":[[1],[2]],"density":{…}}]}`; pattern blocks are 1-based
    /// argument positions).
    pub fn from_json(signature: Signature, json: &str) -> Result<DensityModel> {
        let raw: RawModel = serde_json::from_str(json)?;
        let mut model = DensityModel::uniform(signature);
        for entry in raw.densities {
            let arity = model
                .signature
                .arity_of(&entry.relation)
                .ok_or_else(|| {
                    Error::Model(format!("unknown relation `{}`", entry.relation))
                })?;
            if entry.pattern.size() != arity {
                return Err(Error::Model(format!(
                    "pattern for `{}` covers {} positions but the arity is {arity}",
                    entry.relation,
                    entry.pattern.size()
                )));
            }
            let density = Density::new(&entry.density)?;
            if model
                .table
                .insert((entry.relation.clone(), entry.pattern.clone()), density)
                .is_some()
            {
                return Err(Error::Model(format!(
                    "duplicate density for `{}` with pattern {}",
                    entry.relation, entry.pattern
                )));
            }
        }
        Ok(model)
    }

    /// Registers a density programmatically.
    pub fn set(
        &mut self,
        relation: &str,
        pattern: IdentityPattern,
        spec: &DensitySpec,
    ) -> Result<()> {
        let arity = self
            .signature
            .arity_of(relation)
            .ok_or_else(|| Error::Model(format!("unknown relation `{relation}`")))?;
        if pattern.size() != arity {
            return Err(Error::Model(format!(
                "pattern for `{relation}` covers {} positions but the arity is {arity}",
                pattern.size()
            )));
        }
        self.table
            .insert((relation.to_string(), pattern), Density::new(spec)?);
        Ok(())
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// The density governing cells of `relation` whose argument tuple has
    /// the given identity pattern.
    pub fn density_for(&self, relation: &str, pattern: &IdentityPattern) -> &Density {
        self.table
            .get(&(relation.to_string(), pattern.clone()))
            .unwrap_or(&self.uniform)
    }

    /// Lookup without allocating; used on hot sampling paths.
    pub fn density_for_key(&self, key: &(String, IdentityPattern)) -> &Density {
        self.table.get(key).unwrap_or(&self.uniform)
    }

    /// True when every key resolves to the uniform density.
    pub fn is_fully_uniform(&self) -> bool {
        self.table.values().all(Density::is_uniform)
    }
}
