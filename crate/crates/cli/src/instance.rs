//! The instance file: one JSON document that feeds every command.

use std::collections::BTreeMap;

use bourbaki_core::constructions::{ChoiceFunction, ChoiceSpec, InflationaryMap, PsiMap};
use bourbaki_core::recursion::{PhiEntry, TablePhi};
use bourbaki_core::{Preorder, Subset};
use serde::{Deserialize, Serialize};

use crate::{malformed, CliError};

/// Domain masks plus the value of `phi` on each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiTable {
    pub domain: Vec<u64>,
    pub map: Vec<PhiEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    /// Element labels; the carrier is `0..elements.len()`.
    pub elements: Vec<String>,
    /// `[i, j]` pairs meaning `i <= j`.
    #[serde(default)]
    pub relation: Vec<(usize, usize)>,
    #[serde(default)]
    pub closure: bool,
    /// `[x, f(x)]` pairs over the carrier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<PhiEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<ChoiceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
    /// Family members as bitmasks over `elements`, for `kuratowski`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<u64>>,
    /// `[i, j]` pairs of family indices: member `i` is sent to member `j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_map: Option<Vec<(usize, usize)>>,
    #[serde(flatten)]
    pub unknown: BTreeMap<String, serde_json::Value>,
}

fn missing(field: &str) -> CliError {
    CliError::Malformed(format!("missing required field `{field}`"))
}

fn total_map(
    field: &str,
    pairs: Option<&[(usize, usize)]>,
    size: usize,
) -> Result<Vec<usize>, CliError> {
    let pairs = pairs.ok_or_else(|| missing(field))?;
    let mut map = vec![None; size];
    for &(x, y) in pairs {
        if x >= size || y >= size {
            return Err(CliError::Malformed(format!(
                "{field} pair [{x}, {y}] is out of range for {size} points"
            )));
        }
        if map[x].replace(y).is_some() {
            return Err(CliError::Malformed(format!(
                "{field} is given twice at {x}"
            )));
        }
    }
    map.iter()
        .enumerate()
        .map(|(x, y)| {
            y.ok_or_else(|| CliError::Malformed(format!("{field} is not defined at {x}")))
        })
        .collect()
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Malformed(format!("instance file: {e}")))
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    /// Names of fields that are present but that `used` does not consume.
    pub fn ignored_fields(&self, used: &[&str]) -> Vec<String> {
        let present = [
            ("relation", !self.relation.is_empty()),
            ("closure", self.closure),
            ("f", self.f.is_some()),
            ("psi", self.psi.is_some()),
            ("phi", self.phi.is_some()),
            ("choice", self.choice.is_some()),
            ("start", self.start.is_some()),
            ("family", self.family.is_some()),
            ("family_map", self.family_map.is_some()),
        ];
        present
            .iter()
            .filter(|(name, here)| *here && !used.contains(name))
            .map(|(name, _)| name.to_string())
            .chain(self.unknown.keys().cloned())
            .collect()
    }

    pub fn preorder(&self, force_closure: bool) -> Result<Preorder, CliError> {
        let p = Preorder::from_pairs(self.n(), &self.relation, self.closure || force_closure)
            .map_err(malformed)?;
        Ok(p.with_labels(self.elements.clone()))
    }

    /// `f` as a total map on `0..size`.
    pub fn map(&self, size: usize) -> Result<Vec<usize>, CliError> {
        total_map("f", self.f.as_deref(), size)
    }

    /// `family_map` as a total map on the family's indices.
    pub fn family_map(&self, size: usize) -> Result<Vec<usize>, CliError> {
        total_map("family_map", self.family_map.as_deref(), size)
    }
    /// `f` validated as inflationary; a violation is an unmet hypothesis.
    pub fn inflationary(&self, p: &Preorder) -> Result<InflationaryMap, CliError> {
        let map = self.map(p.len())?;
        InflationaryMap::new(p, map).map_err(crate::classify)
    }

    pub fn choice(&self) -> Result<ChoiceFunction, CliError> {
        self.choice_or_none()?.ok_or_else(|| missing("choice"))
    }

    pub fn choice_or_none(&self) -> Result<Option<ChoiceFunction>, CliError> {
        self.choice
            .as_ref()
            .map(|c| c.resolve(self.n()).map_err(malformed))
            .transpose()
    }

    pub fn psi(&self) -> Result<PsiMap, CliError> {
        let entries = self.psi.as_ref().ok_or_else(|| missing("psi"))?;
        PsiMap::from_entries(self.n(), entries).map_err(malformed)
    }

    pub fn phi(&self) -> Result<TablePhi, CliError> {
        let table = self.phi.as_ref().ok_or_else(|| missing("phi"))?;
        let n = self.n();
        let values: BTreeMap<u64, usize> = table.map.iter().map(|e| (e.subset, e.value)).collect();
        if values.len() != table.map.len() {
            return Err(CliError::Malformed("phi.map lists a subset twice".into()));
        }
        if let Some(extra) = values.keys().find(|m| !table.domain.contains(m)) {
            return Err(CliError::Malformed(format!(
                "phi.map entry {extra} is not in phi.domain"
            )));
        }
        let mut entries = Vec::with_capacity(table.domain.len());
        for &mask in &table.domain {
            let x = Subset::from_mask(n, mask).ok_or_else(|| {
                CliError::Malformed(format!("phi.domain mask {mask} exceeds {n} elements"))
            })?;
            let v = values.get(&mask).ok_or_else(|| {
                CliError::Malformed(format!("phi.map has no value for domain member {mask}"))
            })?;
            entries.push((x, *v));
        }
        TablePhi::new(n, entries).map_err(malformed)
    }

    pub fn family(&self) -> Result<Vec<Subset>, CliError> {
        let masks = self.family.as_ref().ok_or_else(|| missing("family"))?;
        masks
            .iter()
            .map(|&m| {
                Subset::from_mask(self.n(), m).ok_or_else(|| {
                    CliError::Malformed(format!("family mask {m} exceeds {} elements", self.n()))
                })
            })
            .collect()
    }

    pub fn start_in(&self, size: usize) -> Result<Option<usize>, CliError> {
        match self.start {
            Some(a) if a >= size => Err(CliError::Malformed(format!("start {a} is out of range"))),
            other => Ok(other),
        }
    }
}
