//! The segment recursion: given a family `S` of subsets and a choice
//! `phi: S -> E` with `phi(X) not in X`, build the unique well-orderable
//! `M` whose every initial segment `<x` lies in `S` with `phi(<x) = x`, and
//! with `M` itself outside `S`.
//!
//! On a finite carrier the construction is a loop: start from the empty
//! sequence and append `phi(X)` while the current element set `X` is in
//! `S`. Each step adds a new element, so at most `n` steps are taken. The
//! append order is the well-ordering of `M`, which makes every prefix the
//! initial segment of the element that follows it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::check::Check;
use crate::order::Chain;
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("phi({0}) = {1} is a member of {0}")]
    PhiViolation(Subset, usize),
    #[error("phi({0}) = {1} is outside the carrier of size {2}")]
    PhiOutOfRange(Subset, usize, usize),
    #[error("subset {0} has width {1}, expected {2}")]
    WidthMismatch(Subset, usize, usize),
    #[error("mask {0:#b} does not fit a carrier of size {1}")]
    MaskOutOfRange(u64, usize),
    #[error("subset {0} appears twice in the table")]
    DuplicateEntry(Subset),
    #[error("domain oracle failed: {0}")]
    DomainError(String),
    #[error("chains {0} and {1} are not prefix-compatible")]
    NotPrefixCompatible(usize, usize),
}

/// A family `S` of subsets together with a map `phi: S -> E`.
///
/// Implementations must be deterministic: the same subset always gets the
/// same answer.
pub trait PhiSpec {
    /// Whether `x` belongs to `S`.
    fn in_domain(&self, x: &Subset) -> Result<bool, EngineError>;

    /// `phi(x)`, only called on subsets accepted by [`PhiSpec::in_domain`].
    fn phi(&self, x: &Subset) -> Result<usize, EngineError>;
}

impl<T: PhiSpec + ?Sized> PhiSpec for &T {
    fn in_domain(&self, x: &Subset) -> Result<bool, EngineError> {
        (**self).in_domain(x)
    }

    fn phi(&self, x: &Subset) -> Result<usize, EngineError> {
        (**self).phi(x)
    }
}

/// An explicit, finite `S` with its `phi` values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TablePhi {
    n: usize,
    entries: BTreeMap<Subset, usize>,
}

impl TablePhi {
    /// Validates every entry eagerly: widths match, values are in range and
    /// `phi(X)` is never a member of `X`.
    pub fn new<I>(n: usize, entries: I) -> Result<Self, EngineError>
    where
        I: IntoIterator<Item = (Subset, usize)>,
    {
        let mut table = BTreeMap::new();
        for (x, v) in entries {
            if x.width() != n {
                let w = x.width();
                return Err(EngineError::WidthMismatch(x, w, n));
            }
            if v >= n {
                return Err(EngineError::PhiOutOfRange(x, v, n));
            }
            if x.contains(v) {
                return Err(EngineError::PhiViolation(x, v));
            }
            if table.contains_key(&x) {
                return Err(EngineError::DuplicateEntry(x));
            }
            table.insert(x, v);
        }
        Ok(TablePhi { n, entries: table })
    }

    pub fn carrier(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Subset, usize)> {
        self.entries.iter().map(|(x, &v)| (x, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_file(&self) -> TablePhiFile {
        TablePhiFile {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|(x, &value)| PhiEntry {
                    subset: x.to_mask().expect("table carriers fit in 64 bits"),
                    value,
                })
                .collect(),
        }
    }

    pub fn from_file(file: &TablePhiFile) -> Result<Self, EngineError> {
        let mut entries = Vec::with_capacity(file.entries.len());
        for e in &file.entries {
            let x = Subset::from_mask(file.n, e.subset)
                .ok_or(EngineError::MaskOutOfRange(e.subset, file.n))?;
            entries.push((x, e.value));
        }
        TablePhi::new(file.n, entries)
    }
}

impl PhiSpec for TablePhi {
    fn in_domain(&self, x: &Subset) -> Result<bool, EngineError> {
        Ok(self.entries.contains_key(x))
    }

    fn phi(&self, x: &Subset) -> Result<usize, EngineError> {
        self.entries
            .get(x)
            .copied()
            .ok_or_else(|| EngineError::DomainError(format!("{x} is not in the table")))
    }
}

/// One `{subset, value}` row of a serialized table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiEntry {
    pub subset: u64,
    pub value: usize,
}

/// Serialized form of a [`TablePhi`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TablePhiFile {
    pub n: usize,
    pub entries: Vec<PhiEntry>,
}

/// A `PhiSpec` given by two closures, evaluated lazily.
pub struct RulePhi<D, F> {
    domain: D,
    phi: F,
}

impl<D, F> RulePhi<D, F>
where
    D: Fn(&Subset) -> Result<bool, EngineError>,
    F: Fn(&Subset) -> Result<usize, EngineError>,
{
    pub fn new(domain: D, phi: F) -> Self {
        RulePhi { domain, phi }
    }
}

impl<D, F> PhiSpec for RulePhi<D, F>
where
    D: Fn(&Subset) -> Result<bool, EngineError>,
    F: Fn(&Subset) -> Result<usize, EngineError>,
{
    fn in_domain(&self, x: &Subset) -> Result<bool, EngineError> {
        (self.domain)(x)
    }

    fn phi(&self, x: &Subset) -> Result<usize, EngineError> {
        (self.phi)(x)
    }
}

/// One recursion step: the current element set and the element appended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub prefix: Subset,
    pub chosen: usize,
}

/// The constructed `M` with its step log and re-checked conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TBWitness {
    pub m: Chain,
    pub step_log: Vec<Step>,
    pub checks: Vec<Check>,
}

impl TBWitness {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Runs the recursion on a carrier of size `n`.
pub fn construct_m(n: usize, spec: &impl PhiSpec) -> Result<TBWitness, EngineError> {
    let mut m = Chain::empty();
    let mut current = Subset::empty(n);
    let mut step_log = Vec::new();
    while spec.in_domain(&current)? {
        let x = spec.phi(&current)?;
        if x >= n {
            return Err(EngineError::PhiOutOfRange(current, x, n));
        }
        if current.contains(x) {
            return Err(EngineError::PhiViolation(current, x));
        }
        step_log.push(Step {
            prefix: current.clone(),
            chosen: x,
        });
        m.push(x);
        current.insert(x);
    }

    let mut checks = Vec::with_capacity(m.len() + 2);
    for (k, step) in step_log.iter().enumerate() {
        let ok = spec.in_domain(&step.prefix)? && spec.phi(&step.prefix)? == step.chosen;
        checks.push(Check::new(format!("condition 1 at position {k}"), ok));
    }
    checks.push(Check::new(
        "condition 2: M not in S",
        !spec.in_domain(&current)?,
    ));
    let remark = m.is_empty() || spec.in_domain(&Subset::empty(n))?;
    checks.push(Check::new(
        "remark: M nonempty implies empty set in S",
        remark,
    ));

    Ok(TBWitness {
        m,
        step_log,
        checks,
    })
}

/// True iff `candidate`, read as a well-ordering, satisfies both defining
/// conditions: each prefix is in `S` and maps to the next element, and the
/// whole set is outside `S`. Oracle failures count as `false`.
pub fn verify_tb_conditions(n: usize, spec: &impl PhiSpec, candidate: &Chain) -> bool {
    let check = || -> Result<bool, EngineError> {
        let mut prefix = Subset::empty(n);
        for x in candidate.iter() {
            if x >= n || prefix.contains(x) {
                return Ok(false);
            }
            if !spec.in_domain(&prefix)? || spec.phi(&prefix)? != x {
                return Ok(false);
            }
            prefix.insert(x);
        }
        Ok(!spec.in_domain(&prefix)?)
    };
    check().unwrap_or(false)
}

/// Merges a family of chains, totally ordered by the prefix relation, into
/// the chain that extends all of them.
pub fn merge_chains(family: &[Chain]) -> Result<Chain, EngineError> {
    let Some((longest, top)) = family
        .iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.len(), std::cmp::Reverse(*i)))
    else {
        return Ok(Chain::empty());
    };
    for (i, c) in family.iter().enumerate() {
        if !c.is_prefix_of(top) {
            return Err(EngineError::NotPrefixCompatible(
                i.min(longest),
                i.max(longest),
            ));
        }
    }
    Ok(top.clone())
}
