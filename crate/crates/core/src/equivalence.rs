//! The cycle choice function => Kneser => Zorn => well-ordering => choice
//! function, run on concrete finite inputs.
//!
//! Each implication is an executable step:
//! - choice to Kneser: build `f(x) = x` on maximal elements and
//!   `f(x) = c({y | x < y})` elsewhere, then take the case-1 fixed point;
//! - Kneser to Zorn: inductive preorders satisfy Kneser's hypothesis;
//! - Zorn to well-ordering: a maximal element of the preorder `F` of
//!   well-ordered subsets of `E` (ordered by "is an initial segment of")
//!   must cover `E`;
//! - well-ordering to choice: pick the earliest member.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::check::{self, Check};
use crate::constructions::{
    fixed_point_moroianu_with, zermelo_well_order, ChoiceFunction, ConstructionError,
    FixedPointWitness, HypothesisPolicy, InflationaryMap,
};
use crate::order::{Chain, OrderError, Preorder, DEFAULT_EXHAUSTIVE_BOUND};
use crate::recursion::{merge_chains, EngineError};
use crate::subset::Subset;

/// Largest base set for which `F` is materialized (326 elements at 5).
pub const F_POSET_BOUND: usize = 5;
/// Largest base set accepted by [`round_trip`].
pub const ROUND_TRIP_BOUND: usize = 4;
/// Largest carrier for which a well-ordering is turned into a choice table.
pub const CHOICE_TABLE_BOUND: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("base set of size {n} exceeds the bound {bound}")]
    CarrierTooLarge { n: usize, bound: usize },
    #[error("preorder is not inductive: totally ordered subset {0} has no upper bound")]
    NotInductive(Subset),
    #[error("fixed point {0} is not a maximal element")]
    NotMaximal(usize),
    #[error("chain {0} does not cover a base set of size {1}")]
    NotCovering(Chain, usize),
    #[error("merged chain {0} is not an upper bound in F")]
    MergeNotUpperBound(Chain),
    #[error("stage {stage} failed: {message}")]
    StageFailed { stage: String, message: String },
}

/// A maximal element together with the fixed-point climb that found it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalWitness {
    pub element: usize,
    /// `f` as used by the climb: identity on maximal elements, `c` of the
    /// strict up-set elsewhere.
    pub successor_map: Vec<usize>,
    pub fixed_point: FixedPointWitness,
    pub checks: Vec<Check>,
}

impl MaximalWitness {
    pub fn all_pass(&self) -> bool {
        self.fixed_point.all_pass() && check::all_pass(&self.checks)
    }
}

/// `f(x) = x` if `x` is maximal, else `c({y | x < y})`.
pub fn successor_map(
    p: &Preorder,
    c: &ChoiceFunction,
) -> Result<InflationaryMap, ConstructionError> {
    let maximal = p.maximal_elements();
    let mut map = Vec::with_capacity(p.len());
    for x in 0..p.len() {
        map.push(if maximal.contains(x) {
            x
        } else {
            c.choose(&p.strict_up_set(x))?
        });
    }
    InflationaryMap::new(p, map)
}

/// A maximal element of a preorder whose well-ordered subsets all have
/// upper bounds, found as a fixed point of [`successor_map`] climbing from
/// `c(E)`.
pub fn kneser_maximal(
    p: &Preorder,
    c: &ChoiceFunction,
) -> Result<MaximalWitness, EquivalenceError> {
    kneser_maximal_with(p, c, &HypothesisPolicy::default())
}

pub fn kneser_maximal_with(
    p: &Preorder,
    c: &ChoiceFunction,
    policy: &HypothesisPolicy,
) -> Result<MaximalWitness, EquivalenceError> {
    if p.is_empty() {
        return Err(ConstructionError::EmptyCarrier.into());
    }
    let f = successor_map(p, c)?;
    let a = c.choose(&Subset::full(p.len()))?;
    let fixed_point = fixed_point_moroianu_with(p, &f, c, a, policy)?;
    let b = fixed_point.b;
    let maximal = p.maximal_elements().contains(b);
    if !maximal {
        return Err(EquivalenceError::NotMaximal(b));
    }
    Ok(MaximalWitness {
        element: b,
        successor_map: f.as_slice().to_vec(),
        fixed_point,
        checks: vec![Check::new("result is maximal", maximal)],
    })
}

/// A maximal element of an inductive preorder. Inductivity is checked
/// exhaustively for carriers up to `bound`.
pub fn zorn_maximal(
    p: &Preorder,
    c: &ChoiceFunction,
    bound: usize,
) -> Result<MaximalWitness, EquivalenceError> {
    zorn_maximal_with(p, c, bound, &HypothesisPolicy::default())
}

pub fn zorn_maximal_with(
    p: &Preorder,
    c: &ChoiceFunction,
    bound: usize,
    policy: &HypothesisPolicy,
) -> Result<MaximalWitness, EquivalenceError> {
    if let Some(s) = p.inductivity_counterexample(bound)? {
        return Err(EquivalenceError::NotInductive(s));
    }
    let mut w = kneser_maximal_with(p, c, policy)?;
    w.checks
        .insert(0, Check::new("preorder is inductive", true));
    Ok(w)
}

/// The well-ordered subsets of a base set `E`, each with a chosen
/// well-ordering, ordered by "is an initial segment of".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FPoset {
    pub base_n: usize,
    pub elements: Vec<Chain>,
    pub order: Preorder,
    /// Chains of `F` whose merge was confirmed to be an upper bound.
    pub chains_merged: usize,
}

impl FPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, c: &Chain) -> Option<usize> {
        self.elements.iter().position(|e| e == c)
    }
}

/// Materializes `F` for a base set of size `base_n`: all sequences of
/// distinct elements, shortest first and lexicographic within a length.
/// Also confirms that every chain of `F` merges into an upper bound.
pub fn build_f_poset(base_n: usize) -> Result<FPoset, EquivalenceError> {
    if base_n > F_POSET_BOUND {
        return Err(EquivalenceError::CarrierTooLarge {
            n: base_n,
            bound: F_POSET_BOUND,
        });
    }
    let mut elements = vec![Chain::empty()];
    let mut layer = vec![Chain::empty()];
    for _ in 0..base_n {
        let mut next = Vec::new();
        for c in &layer {
            for x in (0..base_n).filter(|&x| c.position(x).is_none()) {
                let mut longer = c.clone();
                longer.push(x);
                next.push(longer);
            }
        }
        elements.extend(next.iter().cloned());
        layer = next;
    }
    let rows: Vec<Vec<bool>> = elements
        .iter()
        .map(|a| elements.iter().map(|b| a.is_prefix_of(b)).collect())
        .collect();
    let order = Preorder::from_matrix(&rows, false)?;

    let mut chains_merged = 0;
    let mut failure = None;
    let _ = order.for_each_well_ordered(|seq| {
        chains_merged += 1;
        let family: Vec<Chain> = seq.iter().map(|&i| elements[i].clone()).collect();
        let outcome = merge_chains(&family)
            .map_err(EquivalenceError::from)
            .and_then(|merged| {
                let bounded = elements
                    .iter()
                    .position(|e| *e == merged)
                    .is_some_and(|top| seq.iter().all(|&i| order.leq(i, top)));
                if bounded {
                    Ok(())
                } else {
                    Err(EquivalenceError::MergeNotUpperBound(merged))
                }
            });
        match outcome {
            Ok(()) => std::ops::ControlFlow::Continue(()),
            Err(e) => {
                failure = Some(e);
                std::ops::ControlFlow::Break(())
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(FPoset {
        base_n,
        elements,
        order,
        chains_merged,
    })
}

/// Result of the Zorn step on `F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZornWellOrder {
    pub order: Chain,
    pub f_size: usize,
    pub maximal: MaximalWitness,
}

/// Policy used on `F`: its chains are few (subsets of root-to-leaf paths),
/// so hypotheses are always scanned exhaustively.
fn f_policy(f: &FPoset) -> HypothesisPolicy {
    HypothesisPolicy::with_bound(f.len())
}

/// A well-ordering of `{0, .., base_n-1}` read off a maximal element of `F`.
/// `c` chooses among element indices of `F`.
pub fn well_order_via_zorn(
    base_n: usize,
    c: &ChoiceFunction,
) -> Result<ZornWellOrder, EquivalenceError> {
    let f = build_f_poset(base_n)?;
    let maximal = zorn_maximal_with(&f.order, c, f.len(), &f_policy(&f))?;
    let order = f.elements[maximal.element].clone();
    if order.len() != base_n {
        return Err(EquivalenceError::NotCovering(order, base_n));
    }
    Ok(ZornWellOrder {
        order,
        f_size: f.len(),
        maximal,
    })
}

/// `c(A)` = the member of `A` that comes first in `order`.
pub fn choice_from_well_order(order: &Chain, n: usize) -> Result<ChoiceFunction, EquivalenceError> {
    if order.len() != n || order.iter().any(|x| x >= n) {
        return Err(EquivalenceError::NotCovering(order.clone(), n));
    }
    if n > CHOICE_TABLE_BOUND {
        return Err(EquivalenceError::CarrierTooLarge {
            n,
            bound: CHOICE_TABLE_BOUND,
        });
    }
    let table: BTreeMap<Subset, usize> = Subset::all(n)
        .skip(1)
        .map(|a| {
            let first = order
                .iter()
                .find(|&x| a.contains(x))
                .expect("order covers A");
            (a, first)
        })
        .collect();
    Ok(ChoiceFunction::Table(table))
}

/// The rule used on `F`'s element indices, derived from the base choice.
/// Table choices only make sense on the base set, so they fall back to
/// min-index.
pub fn f_choice(c0: &ChoiceFunction) -> ChoiceFunction {
    match c0 {
        ChoiceFunction::Table(_) => ChoiceFunction::MinIndex,
        other => other.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub name: String,
    pub inputs: serde_json::Value,
    pub outputs: serde_json::Value,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reproducibility {
    pub base_choice: String,
    pub f_choice: String,
    pub test_preorder: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceCertificate {
    pub base_n: usize,
    pub stages: Vec<Stage>,
    pub reproducibility: Reproducibility,
    #[serde(rename = "final")]
    pub final_: bool,
}

fn stage_err(stage: &str) -> impl Fn(EquivalenceError) -> EquivalenceError + '_ {
    move |e| EquivalenceError::StageFailed {
        stage: stage.to_string(),
        message: e.to_string(),
    }
}

/// Runs all four implications on a base set of size `base_n`, using `F`
/// itself as the test preorder for the Kneser and Zorn stages.
pub fn round_trip(
    base_n: usize,
    c0: &ChoiceFunction,
) -> Result<EquivalenceCertificate, EquivalenceError> {
    round_trip_with(base_n, c0, None)
}

/// As [`round_trip`], with an explicit preorder for the choice-to-Kneser
/// and Kneser-to-Zorn stages.
pub fn round_trip_with(
    base_n: usize,
    c0: &ChoiceFunction,
    test: Option<&Preorder>,
) -> Result<EquivalenceCertificate, EquivalenceError> {
    if base_n > ROUND_TRIP_BOUND {
        return Err(EquivalenceError::CarrierTooLarge {
            n: base_n,
            bound: ROUND_TRIP_BOUND,
        });
    }
    let cf = f_choice(c0);
    let fposet = build_f_poset(base_n)?;
    let (test_p, test_name) = match test {
        Some(p) => (p.clone(), format!("supplied ({} elements)", p.len())),
        None => (fposet.order.clone(), format!("F({base_n})")),
    };
    let policy = HypothesisPolicy::with_bound(test_p.len().max(DEFAULT_EXHAUSTIVE_BOUND));
    let mut stages = Vec::new();

    let name = "1=>2 choice function gives Kneser maximal element";
    let kneser = kneser_maximal_with(&test_p, &cf, &policy).map_err(stage_err(name))?;
    stages.push(Stage {
        name: name.into(),
        inputs: json!({"preorder": test_name, "choice": cf.describe()}),
        outputs: json!({"maximal": kneser.element, "climb": kneser.fixed_point.m_chain.m}),
        checks: [
            kneser.fixed_point.m_chain.checks.clone(),
            kneser.fixed_point.checks.clone(),
            kneser.checks.clone(),
        ]
        .concat(),
    });

    let name = "2=>3 Kneser gives Zorn maximal element";
    let zorn = zorn_maximal_with(&test_p, &cf, test_p.len(), &policy).map_err(stage_err(name))?;
    let mut checks = zorn.checks.clone();
    checks.push(Check::new(
        "agrees with the Kneser stage",
        zorn.element == kneser.element,
    ));
    stages.push(Stage {
        name: name.into(),
        inputs: json!({"preorder": test_name, "choice": cf.describe()}),
        outputs: json!({"maximal": zorn.element}),
        checks,
    });

    let name = "3=>4 Zorn on F gives a well-ordering";
    let zw = well_order_via_zorn(base_n, &cf).map_err(stage_err(name))?;
    let w = zw.order.clone();
    let checks = vec![
        Check::new("F inductive via merged chains", fposet.chains_merged > 0),
        Check::new("maximal element of F", zw.maximal.all_pass()),
        Check::new("maximal chain covers E", w.len() == base_n),
        Check::new(
            "appending any missing element would extend the chain",
            (0..base_n).all(|x| w.position(x).is_some()),
        ),
    ];
    stages.push(Stage {
        name: name.into(),
        inputs: json!({"base_n": base_n, "f_size": fposet.len(), "choice": cf.describe()}),
        outputs: json!({"well_order": w, "f_index": zw.maximal.element}),
        checks,
    });

    let name = "4=>1 well-ordering gives a choice function";
    let c1 = choice_from_well_order(&w, base_n).map_err(stage_err(name))?;
    let valid = c1.validate_on(base_n).is_ok();
    let replay = zermelo_well_order(base_n, &c1).map_err(|e| stage_err(name)(e.into()))?;
    let mut checks = vec![
        Check::new("c(A) in A for every non-empty A", valid),
        Check::new("Zermelo replay reproduces the well-ordering", replay == w),
    ];
    for k in 0..base_n {
        let rest = w.prefix(k).to_subset(base_n).complement();
        let next_ok = c1.choose(&rest).ok() == w.as_slice().get(k).copied();
        checks.push(Check::new(
            format!("least of suffix {k} is the next element"),
            next_ok,
        ));
    }
    stages.push(Stage {
        name: name.into(),
        inputs: json!({"well_order": w}),
        outputs: json!({"choice": "least element in the well-ordering", "replay": replay}),
        checks,
    });

    let final_ = stages.iter().all(|s| check::all_pass(&s.checks));
    Ok(EquivalenceCertificate {
        base_n,
        stages,
        reproducibility: Reproducibility {
            base_choice: c0.describe(),
            f_choice: cf.describe(),
            test_preorder: test_name,
        },
        final_,
    })
}
