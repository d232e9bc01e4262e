//! Named constructions layered on [`construct_m`]: each picks a family `S`
//! and a map `phi` and reads its result off the resulting chain.
//!
//! - [`kanamori_construct`]: `S = {X | psi(X) not in X}`, `phi = psi`.
//! - [`zermelo_well_order`]: `S` = proper subsets, `phi(X) = c(E \ X)`.
//! - [`fixed_point_bourbaki`] / [`fixed_point_moroianu`]: climb from `a`
//!   through suprema (resp. chosen upper bounds) and `f`-steps until an
//!   element `b` with `f(b)` equivalent to `b` is the top of the chain.
//! - [`kuratowski_fixed_point`]: the Bourbaki climb on a union-closed family
//!   ordered by inclusion.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::check::{self, Check};
use crate::order::{Chain, OrderError, Preorder, DEFAULT_EXHAUSTIVE_BOUND};
use crate::recursion::{construct_m, EngineError, PhiEntry, RulePhi, TBWitness};
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("choice function queried on the empty set")]
    EmptyChoice,
    #[error("choice table has no entry for {0}")]
    ChoiceMissing(Subset),
    #[error("choice table maps {0} to {1}, which is not a member")]
    ChoiceNotMember(Subset, usize),
    #[error("psi table has {got} entries, expected {expected}")]
    PsiNotTotal { expected: usize, got: usize },
    #[error("psi({0}) = {1} is outside the carrier")]
    PsiOutOfRange(Subset, usize),
    #[error("map has {got} entries, expected {expected}")]
    MapLength { expected: usize, got: usize },
    #[error("map sends {0} to {1}, outside the carrier")]
    MapOutOfRange(usize, usize),
    #[error("map is not inflationary at {0}: {0} is not below f({0})")]
    NotInflationary(usize),
    #[error("start element {0} is outside the carrier")]
    StartOutOfRange(usize),
    #[error("carrier is empty")]
    EmptyCarrier,
    #[error("hypothesis of case {case} fails on the well-ordered subset {chain}")]
    HypothesisFailed { case: u8, chain: Chain },
    #[error("family is empty")]
    EmptyFamily,
    #[error("family member {0} does not have the ground set's width")]
    MemberWidth(usize),
    #[error("family members {0} and {1} are equal")]
    DuplicateMember(usize, usize),
    #[error("union of subfamily {0:?} is not in the family")]
    NotUnionClosed(Vec<usize>),
}

/// Named deterministic rules for picking a member of a non-empty subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChoiceRule {
    MinIndex,
    MaxIndex,
}

/// A choice function: assigns to non-empty subsets one of their members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChoiceFunction {
    MinIndex,
    MaxIndex,
    /// Explicit values; every queried subset must be present.
    Table(BTreeMap<Subset, usize>),
    /// The member at position `seed mod |A|` in increasing index order.
    Seeded(u64),
}

impl ChoiceFunction {
    pub fn choose(&self, a: &Subset) -> Result<usize, ConstructionError> {
        if a.is_empty() {
            return Err(ConstructionError::EmptyChoice);
        }
        match self {
            ChoiceFunction::MinIndex => Ok(a.first().expect("non-empty")),
            ChoiceFunction::MaxIndex => Ok(a.last().expect("non-empty")),
            ChoiceFunction::Seeded(seed) => {
                let k = (*seed % a.len() as u64) as usize;
                Ok(a.iter().nth(k).expect("position below |A|"))
            }
            ChoiceFunction::Table(t) => match t.get(a) {
                None => Err(ConstructionError::ChoiceMissing(a.clone())),
                Some(&v) if !a.contains(v) => Err(ConstructionError::ChoiceNotMember(a.clone(), v)),
                Some(&v) => Ok(v),
            },
        }
    }

    /// Short name used in certificates.
    pub fn describe(&self) -> String {
        match self {
            ChoiceFunction::MinIndex => "min-index".into(),
            ChoiceFunction::MaxIndex => "max-index".into(),
            ChoiceFunction::Table(t) => format!("table({} entries)", t.len()),
            ChoiceFunction::Seeded(s) => format!("seeded({s})"),
        }
    }

    /// Checks `c(A) in A` on every non-empty subset of a carrier of size `n`.
    pub fn validate_on(&self, n: usize) -> Result<(), ConstructionError> {
        for a in Subset::all(n).skip(1) {
            self.choose(&a)?;
        }
        Ok(())
    }

    /// Serialized form. Table keys are written as bitmasks.
    pub fn to_spec(&self) -> ChoiceSpec {
        match self {
            ChoiceFunction::MinIndex => ChoiceSpec::Rule(ChoiceRule::MinIndex),
            ChoiceFunction::MaxIndex => ChoiceSpec::Rule(ChoiceRule::MaxIndex),
            ChoiceFunction::Seeded(s) => ChoiceSpec::Seeded(*s),
            ChoiceFunction::Table(t) => ChoiceSpec::Table(
                t.iter()
                    .map(|(a, &value)| PhiEntry {
                        subset: a.to_mask().expect("table carriers fit in 64 bits"),
                        value,
                    })
                    .collect(),
            ),
        }
    }
}

impl fmt::Display for ChoiceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Wire format: `{"rule": "min-index"}`, `{"table": [{subset, value}, ..]}`
/// or `{"seeded": k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChoiceSpec {
    Rule(ChoiceRule),
    Table(Vec<PhiEntry>),
    Seeded(u64),
}

impl ChoiceSpec {
    /// Resolves against a carrier of size `n`. Table entries are checked for
    /// range and membership; coverage is checked lazily on use.
    pub fn resolve(&self, n: usize) -> Result<ChoiceFunction, ConstructionError> {
        Ok(match self {
            ChoiceSpec::Rule(ChoiceRule::MinIndex) => ChoiceFunction::MinIndex,
            ChoiceSpec::Rule(ChoiceRule::MaxIndex) => ChoiceFunction::MaxIndex,
            ChoiceSpec::Seeded(s) => ChoiceFunction::Seeded(*s),
            ChoiceSpec::Table(entries) => {
                let mut t = BTreeMap::new();
                for e in entries {
                    let a = Subset::from_mask(n, e.subset)
                        .ok_or(EngineError::MaskOutOfRange(e.subset, n))?;
                    if !a.contains(e.value) {
                        return Err(ConstructionError::ChoiceNotMember(a, e.value));
                    }
                    t.insert(a, e.value);
                }
                ChoiceFunction::Table(t)
            }
        })
    }
}

/// A total map from subsets of the carrier to elements, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiMap {
    n: usize,
    table: Vec<usize>,
}

impl PsiMap {
    /// `table[mask]` is the image of the subset with that bitmask.
    pub fn new(n: usize, table: Vec<usize>) -> Result<Self, ConstructionError> {
        let expected = 1usize << n;
        if table.len() != expected {
            return Err(ConstructionError::PsiNotTotal {
                expected,
                got: table.len(),
            });
        }
        if let Some((mask, &v)) = table.iter().enumerate().find(|(_, &v)| v >= n) {
            let x = Subset::from_mask(n, mask as u64).expect("mask below 2^n");
            return Err(ConstructionError::PsiOutOfRange(x, v));
        }
        Ok(PsiMap { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(&Subset) -> usize) -> Result<Self, ConstructionError> {
        Self::new(n, Subset::all(n).map(|x| f(&x)).collect())
    }

    /// From `{subset, value}` rows covering every subset exactly once.
    pub fn from_entries(n: usize, entries: &[PhiEntry]) -> Result<Self, ConstructionError> {
        let size = 1usize << n;
        let mut table = vec![None; size];
        for e in entries {
            let x =
                Subset::from_mask(n, e.subset).ok_or(EngineError::MaskOutOfRange(e.subset, n))?;
            if table[e.subset as usize].replace(e.value).is_some() {
                return Err(EngineError::DuplicateEntry(x).into());
            }
        }
        let got = table.iter().filter(|v| v.is_some()).count();
        let table: Option<Vec<usize>> = table.into_iter().collect();
        match table {
            Some(t) => Self::new(n, t),
            None => Err(ConstructionError::PsiNotTotal {
                expected: size,
                got,
            }),
        }
    }

    pub fn carrier(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: &Subset) -> usize {
        self.table[x.to_mask().expect("psi carriers fit in 64 bits") as usize]
    }

    pub fn entries(&self) -> Vec<PhiEntry> {
        self.table
            .iter()
            .enumerate()
            .map(|(mask, &value)| PhiEntry {
                subset: mask as u64,
                value,
            })
            .collect()
    }
}

/// A map `f` on a preorder's carrier with `x <= f(x)` everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InflationaryMap {
    map: Vec<usize>,
}

impl InflationaryMap {
    pub fn new(p: &Preorder, map: Vec<usize>) -> Result<Self, ConstructionError> {
        if map.len() != p.len() {
            return Err(ConstructionError::MapLength {
                expected: p.len(),
                got: map.len(),
            });
        }
        for (x, &y) in map.iter().enumerate() {
            if y >= p.len() {
                return Err(ConstructionError::MapOutOfRange(x, y));
            }
            if !p.leq(x, y) {
                return Err(ConstructionError::NotInflationary(x));
            }
        }
        Ok(InflationaryMap { map })
    }

    pub fn identity(n: usize) -> Self {
        InflationaryMap {
            map: (0..n).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixMode {
    /// `f(b) = b`.
    Exact,
    /// `f(b)` and `b` are equivalent but distinct.
    UpToEquivalence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verification {
    Exhaustive,
    Sampled,
}

/// How a fixed-point hypothesis was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    /// 1: every well-ordered subset has an upper bound (with a choice function).
    /// 2: every well-ordered subset has a least upper bound.
    pub case: u8,
    pub verification: Verification,
    pub subsets_checked: usize,
}

/// Controls how hypotheses over all well-ordered subsets are verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypothesisPolicy {
    /// Carriers up to this size are scanned exhaustively.
    pub exhaustive_bound: usize,
    /// Random chains drawn above the bound.
    pub samples: usize,
    pub seed: u64,
}

impl Default for HypothesisPolicy {
    fn default() -> Self {
        HypothesisPolicy {
            exhaustive_bound: DEFAULT_EXHAUSTIVE_BOUND,
            samples: 4096,
            seed: 0,
        }
    }
}

impl HypothesisPolicy {
    pub fn with_bound(bound: usize) -> Self {
        HypothesisPolicy {
            exhaustive_bound: bound,
            ..Self::default()
        }
    }

    /// Checks `holds` on every well-ordered subset (as its increasing chain)
    /// or on sampled ones, returning the first failure.
    fn verify(
        &self,
        p: &Preorder,
        case: u8,
        holds: impl Fn(&Subset) -> bool,
    ) -> Result<HypothesisReport, ConstructionError> {
        let n = p.len();
        let mut checked = 0usize;
        let mut test = |seq: &[usize]| {
            checked += 1;
            if holds(&Subset::from_elements(n, seq.iter().copied())) {
                ControlFlow::Continue(())
            } else {
                ControlFlow::Break(Chain::new(seq.to_vec()).expect("strict chains are distinct"))
            }
        };
        let verification = if n <= self.exhaustive_bound {
            if let ControlFlow::Break(chain) = p.for_each_well_ordered(&mut test) {
                return Err(ConstructionError::HypothesisFailed { case, chain });
            }
            Verification::Exhaustive
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            if let ControlFlow::Break(chain) = test(&[]) {
                return Err(ConstructionError::HypothesisFailed { case, chain });
            }
            for _ in 0..self.samples {
                let mut seq = vec![rng.gen_range(0..n)];
                loop {
                    if let ControlFlow::Break(chain) = test(&seq) {
                        return Err(ConstructionError::HypothesisFailed { case, chain });
                    }
                    let above: Vec<usize> = p.strict_up_set(*seq.last().unwrap()).iter().collect();
                    if above.is_empty() || rng.gen_bool(0.25) {
                        break;
                    }
                    seq.push(above[rng.gen_range(0..above.len())]);
                }
            }
            Verification::Sampled
        };
        Ok(HypothesisReport {
            case,
            verification,
            subsets_checked: checked,
        })
    }
}

/// Result of a fixed-point climb.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointWitness {
    pub b: usize,
    pub mode: FixMode,
    pub m_chain: TBWitness,
    pub hypothesis_report: HypothesisReport,
    pub checks: Vec<Check>,
}

impl FixedPointWitness {
    pub fn all_pass(&self) -> bool {
        self.m_chain.all_pass() && check::all_pass(&self.checks)
    }
}

fn engine_err(e: ConstructionError) -> EngineError {
    match e {
        ConstructionError::Engine(e) => e,
        other => EngineError::DomainError(other.to_string()),
    }
}

/// Runs the recursion for `S`/`phi` of the form used by both fixed-point
/// cases, where `bound_of(X)` selects the candidate `m` for a non-empty `X`.
fn climb(
    p: &Preorder,
    f: &InflationaryMap,
    a: usize,
    bound_of: impl Fn(&Subset) -> Result<Option<usize>, ConstructionError>,
) -> Result<TBWitness, ConstructionError> {
    let n = p.len();
    let bound_of = &bound_of;
    let spec = RulePhi::new(
        |x: &Subset| {
            if x.is_empty() {
                return Ok(true);
            }
            if !x.contains(a) {
                return Ok(false);
            }
            Ok(match bound_of(x).map_err(engine_err)? {
                None => false,
                Some(m) => !x.contains(m) || p.strictly_less(m, f.apply(m)),
            })
        },
        |x: &Subset| {
            if x.is_empty() {
                return Ok(a);
            }
            let m = bound_of(x)
                .map_err(engine_err)?
                .ok_or_else(|| EngineError::DomainError(format!("{x} has no bound")))?;
            Ok(if x.contains(m) { f.apply(m) } else { m })
        },
    );
    Ok(construct_m(n, &spec)?)
}

fn finish_climb(
    p: &Preorder,
    f: &InflationaryMap,
    a: usize,
    m_chain: TBWitness,
    b: Option<usize>,
    case: u8,
    hypothesis_report: HypothesisReport,
) -> Result<FixedPointWitness, ConstructionError> {
    let n = p.len();
    let set_m = m_chain.m.to_subset(n);
    let Some(b) = b else {
        return Err(ConstructionError::HypothesisFailed {
            case,
            chain: m_chain.m,
        });
    };
    let fb = f.apply(b);
    let seq = m_chain.m.as_slice();
    let increasing = seq
        .iter()
        .enumerate()
        .all(|(i, &x)| seq[i + 1..].iter().all(|&y| p.leq(x, y)));
    let mut checks = vec![
        Check::new("start a is the least element of M", seq.first() == Some(&a)),
        Check::new(
            "construction order is increasing in the preorder",
            increasing,
        ),
    ];
    // With equivalent elements a supremum outside X may be equivalent to the
    // top of X, so the strict version only holds on antisymmetric carriers.
    if p.is_antisymmetric() {
        checks.push(Check::new(
            "construction order is the induced order",
            p.is_well_ordered_subset(&set_m).as_ref() == Some(&m_chain.m),
        ));
    }
    checks.extend([
        Check::new("b is in M", set_m.contains(b)),
        Check::new("b is an upper bound of M", set_m.is_subset(p.down_set(b))),
        Check::new("a <= b", p.leq(a, b)),
        Check::new("f(b) equivalent to b", p.equivalent(fb, b)),
    ]);
    let mode = if fb == b {
        FixMode::Exact
    } else {
        FixMode::UpToEquivalence
    };
    Ok(FixedPointWitness {
        b,
        mode,
        m_chain,
        hypothesis_report,
        checks,
    })
}

fn check_start(p: &Preorder, a: usize) -> Result<(), ConstructionError> {
    if p.is_empty() {
        return Err(ConstructionError::EmptyCarrier);
    }
    if a >= p.len() {
        return Err(ConstructionError::StartOutOfRange(a));
    }
    Ok(())
}

/// Fixed point of an inflationary map when every well-ordered subset has a
/// least upper bound. Suprema are taken as [`Preorder::canonical_sup`].
pub fn fixed_point_bourbaki(
    p: &Preorder,
    f: &InflationaryMap,
    a: usize,
) -> Result<FixedPointWitness, ConstructionError> {
    fixed_point_bourbaki_with(p, f, a, &HypothesisPolicy::default())
}

pub fn fixed_point_bourbaki_with(
    p: &Preorder,
    f: &InflationaryMap,
    a: usize,
    policy: &HypothesisPolicy,
) -> Result<FixedPointWitness, ConstructionError> {
    check_start(p, a)?;
    let report = policy.verify(p, 2, |x| !p.least_upper_bounds(x).is_empty())?;
    let m_chain = climb(p, f, a, |x| Ok(p.canonical_sup(x)))?;
    let b = p.canonical_sup(&m_chain.m.to_subset(p.len()));
    finish_climb(p, f, a, m_chain, b, 2, report)
}

/// Fixed point of an inflationary map when every well-ordered subset has an
/// upper bound, using `c` to pick among upper bounds wherever a supremum
/// would be taken.
pub fn fixed_point_moroianu(
    p: &Preorder,
    f: &InflationaryMap,
    c: &ChoiceFunction,
    a: usize,
) -> Result<FixedPointWitness, ConstructionError> {
    fixed_point_moroianu_with(p, f, c, a, &HypothesisPolicy::default())
}

pub fn fixed_point_moroianu_with(
    p: &Preorder,
    f: &InflationaryMap,
    c: &ChoiceFunction,
    a: usize,
    policy: &HypothesisPolicy,
) -> Result<FixedPointWitness, ConstructionError> {
    check_start(p, a)?;
    let report = policy.verify(p, 1, |x| !p.upper_bounds(x).is_empty())?;
    let chosen_bound = |x: &Subset| -> Result<Option<usize>, ConstructionError> {
        let ub = p.upper_bounds(x);
        if ub.is_empty() {
            Ok(None)
        } else {
            c.choose(&ub).map(Some)
        }
    };
    let m_chain = climb(p, f, a, chosen_bound)?;
    let b = chosen_bound(&m_chain.m.to_subset(p.len()))?;
    finish_climb(p, f, a, m_chain, b, 1, report)
}

/// Runs the recursion with `S = {X | psi(X) not in X}` and `phi = psi`.
/// The returned witness also records that `psi(M)` lands in `M`.
pub fn kanamori_construct(psi: &PsiMap) -> Result<TBWitness, ConstructionError> {
    let spec = RulePhi::new(
        |x: &Subset| Ok(!x.contains(psi.get(x))),
        |x: &Subset| Ok(psi.get(x)),
    );
    let mut w = construct_m(psi.carrier(), &spec)?;
    let set_m = w.m.to_subset(psi.carrier());
    w.checks.push(Check::new(
        "psi(M) is in M",
        set_m.contains(psi.get(&set_m)),
    ));
    Ok(w)
}

/// Two distinct subsets with the same image under `psi`: the initial
/// segment below `psi(M)` in `M`, and `M` itself.
pub fn non_injectivity_witness(psi: &PsiMap) -> (Subset, Subset) {
    let w = kanamori_construct(psi).expect("a total psi always yields a valid recursion");
    let n = psi.carrier();
    let b = w.m.to_subset(n);
    let top = psi.get(&b);
    let pos = w.m.position(top).expect("psi(M) is in M");
    (w.m.prefix(pos).to_subset(n), b)
}

/// Runs the recursion with `S` = proper subsets and `phi(X) = c(E \ X)`.
pub fn zermelo_construct(n: usize, c: &ChoiceFunction) -> Result<TBWitness, ConstructionError> {
    let spec = RulePhi::new(
        |x: &Subset| Ok(!x.is_full()),
        |x: &Subset| c.choose(&x.complement()).map_err(engine_err),
    );
    let mut w = construct_m(n, &spec)?;
    w.checks
        .push(Check::new("M covers the carrier", w.m.len() == n));
    Ok(w)
}

/// A well-ordering of `{0, .., n-1}` from a choice function.
pub fn zermelo_well_order(n: usize, c: &ChoiceFunction) -> Result<Chain, ConstructionError> {
    Ok(zermelo_construct(n, c)?.m)
}

/// How union-closure of a family was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnionClosureCheck {
    /// Every subfamily's union was looked up.
    AllSubfamilies,
    /// Empty set present plus closure under pairwise unions, which for a
    /// finite family is equivalent.
    Pairwise,
}

/// Families at most this large are checked subfamily by subfamily.
pub const SUBFAMILY_SCAN_BOUND: usize = 12;

/// Checks that the union of every subfamily (including the empty one) is a
/// member, returning a violating subfamily as member indices.
pub fn check_union_closed(
    family: &[Subset],
    ground: usize,
) -> Result<UnionClosureCheck, ConstructionError> {
    let index: BTreeMap<&Subset, usize> = family.iter().enumerate().map(|(i, s)| (s, i)).collect();
    if family.len() <= SUBFAMILY_SCAN_BOUND {
        for sub in Subset::all(family.len()) {
            let mut u = Subset::empty(ground);
            for i in sub.iter() {
                u.union_with(&family[i]);
            }
            if !index.contains_key(&u) {
                return Err(ConstructionError::NotUnionClosed(sub.iter().collect()));
            }
        }
        return Ok(UnionClosureCheck::AllSubfamilies);
    }
    if !index.contains_key(&Subset::empty(ground)) {
        return Err(ConstructionError::NotUnionClosed(Vec::new()));
    }
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            if !index.contains_key(&family[i].union(&family[j])) {
                return Err(ConstructionError::NotUnionClosed(vec![i, j]));
            }
        }
    }
    Ok(UnionClosureCheck::Pairwise)
}

/// Result of the fixed-point climb on a union-closed family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KuratowskiWitness {
    /// Family index of the fixed member.
    pub fixed: usize,
    pub member: Subset,
    /// Family index of the starting member.
    pub start: usize,
    pub union_closure: UnionClosureCheck,
    pub climb: FixedPointWitness,
    pub checks: Vec<Check>,
}

impl KuratowskiWitness {
    pub fn all_pass(&self) -> bool {
        self.climb.all_pass() && check::all_pass(&self.checks)
    }
}

/// Inclusion order on family members, indexed by position.
pub fn inclusion_preorder(family: &[Subset]) -> Preorder {
    let rows: Vec<Vec<bool>> = family
        .iter()
        .map(|a| family.iter().map(|b| a.is_subset(b)).collect())
        .collect();
    Preorder::from_matrix(&rows, false).expect("inclusion is a preorder")
}

/// A member `F` of a union-closed family with `f(F) = F`, for `f` mapping
/// the family into itself with `x` contained in `f(x)`. `f[i]` is the
/// family index of the image of member `i`.
pub fn kuratowski_fixed_point(
    ground: usize,
    family: &[Subset],
    f: &[usize],
) -> Result<KuratowskiWitness, ConstructionError> {
    if family.is_empty() {
        return Err(ConstructionError::EmptyFamily);
    }
    if let Some(i) = family.iter().position(|s| s.width() != ground) {
        return Err(ConstructionError::MemberWidth(i));
    }
    for i in 0..family.len() {
        if let Some(j) = (i + 1..family.len()).find(|&j| family[i] == family[j]) {
            return Err(ConstructionError::DuplicateMember(i, j));
        }
    }
    let union_closure = check_union_closed(family, ground)?;

    let p = inclusion_preorder(family);
    let map = InflationaryMap::new(&p, f.to_vec())?;
    let start = p
        .minimal_elements()
        .first()
        .expect("a non-empty finite preorder has minimal elements");
    let policy = HypothesisPolicy::default();
    let climb = fixed_point_bourbaki_with(&p, &map, start, &policy)?;
    let fixed = climb.b;
    let member = family[fixed].clone();
    let checks = vec![
        Check::new("f(F) = F", map.apply(fixed) == fixed),
        Check::new(
            "F contains the start member",
            family[start].is_subset(&member),
        ),
        Check::new(
            "sup of M is the union of M",
            climb
                .m_chain
                .m
                .iter()
                .fold(Subset::empty(ground), |u, i| u.union(&family[i]))
                == member,
        ),
    ];
    Ok(KuratowskiWitness {
        fixed,
        member,
        start,
        union_closure,
        climb,
        checks,
    })
}
