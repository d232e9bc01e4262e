//! Finite preorders and the order-theoretic vocabulary built on them:
//! strictness, initial segments, well-ordered subsets, bounds, maximality
//! and inductivity.
//!
//! The strict order of a preorder is `x < y  <=>  x <= y && !(y <= x)`, so
//! equivalent elements are never strictly related.

use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::subset::Subset;

/// Default carrier cap for scans that are exponential in `n`.
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("relation is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("element {0} is out of range for a carrier of size {1}")]
    OutOfRange(usize, usize),
    #[error("relation is not reflexive at element {0}")]
    NotReflexive(usize),
    #[error("relation is not transitive: {0} <= {1} and {1} <= {2} but not {0} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("chain repeats element {0}")]
    RepeatedElement(usize),
    #[error("carrier of size {n} exceeds the exhaustive bound {bound}")]
    CarrierTooLarge { n: usize, bound: usize },
}

/// An ordered sequence of distinct carrier elements.
///
/// When a chain stands for a well-ordered subset, position order is the
/// induced order: `seq[i] < seq[j]` strictly whenever `i < j`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Chain(Vec<usize>);

impl Chain {
    pub fn new(seq: Vec<usize>) -> Result<Self, OrderError> {
        for (i, x) in seq.iter().enumerate() {
            if seq[..i].contains(x) {
                return Err(OrderError::RepeatedElement(*x));
            }
        }
        Ok(Chain(seq))
    }

    pub fn empty() -> Self {
        Chain(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn position(&self, x: usize) -> Option<usize> {
        self.0.iter().position(|&y| y == x)
    }

    pub fn prefix(&self, len: usize) -> Chain {
        Chain(self.0[..len].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Chain) -> bool {
        other.0.starts_with(&self.0)
    }

    pub(crate) fn push(&mut self, x: usize) {
        debug_assert!(!self.0.contains(&x));
        self.0.push(x);
    }

    /// The element set, as a subset of a carrier of size `n`.
    pub fn to_subset(&self, n: usize) -> Subset {
        Subset::from_elements(n, self.iter())
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let seq = Vec::<usize>::deserialize(de)?;
        Chain::new(seq).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A reflexive, transitive relation on `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    // up[x] = { y | x <= y }, down[x] = { y | y <= x }
    up: Vec<Subset>,
    down: Vec<Subset>,
    labels: Option<Vec<String>>,
}

impl Preorder {
    /// Validates a square boolean matrix where `rel[i][j]` means `i <= j`.
    ///
    /// With `closure` set, the reflexive-transitive closure is taken first and
    /// validation cannot fail except on shape.
    pub fn from_matrix(rel: &[Vec<bool>], closure: bool) -> Result<Self, OrderError> {
        let n = rel.len();
        let mut up = Vec::with_capacity(n);
        for (row, r) in rel.iter().enumerate() {
            if r.len() != n {
                return Err(OrderError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            up.push(Subset::from_elements(n, (0..n).filter(|&j| r[j])));
        }
        Self::from_up_sets(up, closure)
    }

    /// Builds a preorder from explicit `i <= j` pairs.
    pub fn from_pairs(
        n: usize,
        pairs: &[(usize, usize)],
        closure: bool,
    ) -> Result<Self, OrderError> {
        let mut up = vec![Subset::empty(n); n];
        for &(i, j) in pairs {
            for x in [i, j] {
                if x >= n {
                    return Err(OrderError::OutOfRange(x, n));
                }
            }
            up[i].insert(j);
        }
        Self::from_up_sets(up, closure)
    }

    fn from_up_sets(mut up: Vec<Subset>, closure: bool) -> Result<Self, OrderError> {
        let n = up.len();
        if closure {
            for (x, row) in up.iter_mut().enumerate() {
                row.insert(x);
            }
            // Warshall: after round k, paths through {0..=k} are closed.
            for k in 0..n {
                let via = up[k].clone();
                for row in up.iter_mut() {
                    if row.contains(k) {
                        row.union_with(&via);
                    }
                }
            }
        }
        if let Some(x) = (0..n).find(|&x| !up[x].contains(x)) {
            return Err(OrderError::NotReflexive(x));
        }
        for i in 0..n {
            for j in up[i].iter() {
                if let Some(k) = up[j].iter().find(|&k| !up[i].contains(k)) {
                    return Err(OrderError::NotTransitive(i, j, k));
                }
            }
        }
        let mut down = vec![Subset::empty(n); n];
        for (x, row) in up.iter().enumerate() {
            for y in row.iter() {
                down[y].insert(x);
            }
        }
        Ok(Preorder {
            up,
            down,
            labels: None,
        })
    }

    /// Only the diagonal: no two distinct elements are comparable.
    pub fn discrete(n: usize) -> Self {
        Self::from_pairs(n, &[], true).expect("closure always validates")
    }

    /// The total order `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_pairs(n, &pairs, true).expect("closure always validates")
    }

    /// Every element below every other: one equivalence class.
    pub fn complete(n: usize) -> Self {
        let rows = vec![vec![true; n]; n];
        Self::from_matrix(&rows, false).expect("complete relation is a preorder")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.len());
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn strictly_less(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) && !self.leq(y, x)
    }

    pub fn equivalent(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) && self.leq(y, x)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// `{ y | x <= y }`
    pub fn up_set(&self, x: usize) -> &Subset {
        &self.up[x]
    }

    /// `{ y | y <= x }`
    pub fn down_set(&self, x: usize) -> &Subset {
        &self.down[x]
    }

    /// `{ y | x < y }`
    pub fn strict_up_set(&self, x: usize) -> Subset {
        self.up[x].difference(&self.down[x])
    }

    /// The relation as a boolean matrix.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.leq(i, j)).collect())
            .collect()
    }

    /// All `i <= j` pairs with `i != j`, in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| {
                self.up[i]
                    .iter()
                    .filter(move |&j| j != i)
                    .map(move |j| (i, j))
            })
            .collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.len()).all(|x| self.up[x].intersection(&self.down[x]).len() == 1)
    }

    /// True iff `s` is downward closed under the strict order.
    pub fn is_segment(&self, s: &Subset) -> bool {
        s.iter().all(|x| {
            self.down[x]
                .iter()
                .all(|y| s.contains(y) || !self.strictly_less(y, x))
        })
    }

    /// `{ y | y < a }`
    pub fn initial_segment(&self, a: usize) -> Subset {
        self.down[a].difference(&self.up[a])
    }

    /// If the induced order on `a` is total and antisymmetric, the members
    /// of `a` listed in increasing order.
    pub fn is_well_ordered_subset(&self, a: &Subset) -> Option<Chain> {
        let members: Vec<usize> = a.iter().collect();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                if self.leq(x, y) == self.leq(y, x) {
                    return None;
                }
            }
        }
        // In a strict total order the rank of x is the number of members below it.
        let mut seq = members.clone();
        seq.sort_by_key(|&x| {
            members
                .iter()
                .filter(|&&y| self.strictly_less(y, x))
                .count()
        });
        Some(Chain(seq))
    }

    /// `{ m | a <= m for every a in A }`; the full carrier when `A` is empty.
    pub fn upper_bounds(&self, a: &Subset) -> Subset {
        let mut ub = Subset::full(self.len());
        for x in a.iter() {
            ub.intersect_with(&self.up[x]);
        }
        ub
    }

    /// Upper bounds of `A` that lie below every upper bound of `A`.
    pub fn least_upper_bounds(&self, a: &Subset) -> Subset {
        let ub = self.upper_bounds(a);
        let lubs = ub.iter().filter(|&m| ub.is_subset(&self.up[m]));
        Subset::from_elements(self.len(), lubs)
    }

    /// The least-index least upper bound, if any exists.
    pub fn canonical_sup(&self, a: &Subset) -> Option<usize> {
        self.least_upper_bounds(a).first()
    }

    /// `{ m | there is no y with m < y }`
    pub fn maximal_elements(&self) -> Subset {
        let n = self.len();
        Subset::from_elements(n, (0..n).filter(|&m| self.up[m].is_subset(&self.down[m])))
    }

    /// `{ m | there is no y with y < m }`
    pub fn minimal_elements(&self) -> Subset {
        let n = self.len();
        Subset::from_elements(n, (0..n).filter(|&m| self.down[m].is_subset(&self.up[m])))
    }

    /// The unique `x` in `A` with `x <= y` for all `y` in `A`.
    ///
    /// Absent when `A` is empty, has no such element, or has several
    /// (equivalent) candidates.
    pub fn least_element(&self, a: &Subset) -> Option<usize> {
        let mut candidates = a.iter().filter(|&x| a.is_subset(&self.up[x]));
        let first = candidates.next()?;
        match candidates.next() {
            Some(_) => None,
            None => Some(first),
        }
    }

    /// Visits every well-ordered subset as its increasing chain, starting
    /// with the empty chain. Stops early when the visitor breaks.
    pub fn for_each_well_ordered<B>(
        &self,
        mut visit: impl FnMut(&[usize]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        fn extend<B>(
            p: &Preorder,
            seq: &mut Vec<usize>,
            visit: &mut impl FnMut(&[usize]) -> ControlFlow<B>,
        ) -> ControlFlow<B> {
            visit(seq)?;
            let next: Vec<usize> = match seq.last() {
                None => (0..p.len()).collect(),
                Some(&top) => p.strict_up_set(top).iter().collect(),
            };
            for y in next {
                seq.push(y);
                extend(p, seq, visit)?;
                seq.pop();
            }
            ControlFlow::Continue(())
        }
        extend(self, &mut Vec::new(), &mut visit)
    }

    /// Visits every totally ordered subset (every pair comparable, ties
    /// allowed), starting with the empty set.
    pub fn for_each_totally_ordered<B>(
        &self,
        mut visit: impl FnMut(&Subset) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        fn extend<B>(
            p: &Preorder,
            set: &mut Subset,
            from: usize,
            visit: &mut impl FnMut(&Subset) -> ControlFlow<B>,
        ) -> ControlFlow<B> {
            visit(set)?;
            for y in from..p.len() {
                if set.iter().all(|x| p.comparable(x, y)) {
                    set.insert(y);
                    extend(p, set, y + 1, visit)?;
                    set.remove(y);
                }
            }
            ControlFlow::Continue(())
        }
        extend(self, &mut Subset::empty(self.len()), 0, &mut visit)
    }

    /// True iff every totally ordered subset, including the empty one, has
    /// an upper bound. Refuses carriers larger than `bound`.
    pub fn is_inductive(&self, bound: usize) -> Result<bool, OrderError> {
        Ok(self.inductivity_counterexample(bound)?.is_none())
    }

    /// A totally ordered subset without an upper bound, if one exists.
    pub fn inductivity_counterexample(&self, bound: usize) -> Result<Option<Subset>, OrderError> {
        if self.len() > bound {
            return Err(OrderError::CarrierTooLarge {
                n: self.len(),
                bound,
            });
        }
        let found = self.for_each_totally_ordered(|s| {
            if self.upper_bounds(s).is_empty() {
                ControlFlow::Break(s.clone())
            } else {
                ControlFlow::Continue(())
            }
        });
        Ok(match found {
            ControlFlow::Break(s) => Some(s),
            ControlFlow::Continue(()) => None,
        })
    }

    /// The induced preorder on `s`, relabelled `0..|s|` in increasing index
    /// order, together with the map back to original indices.
    pub fn restrict(&self, s: &Subset) -> (Preorder, Vec<usize>) {
        let members: Vec<usize> = s.iter().collect();
        let rows: Vec<Vec<bool>> = members
            .iter()
            .map(|&x| members.iter().map(|&y| self.leq(x, y)).collect())
            .collect();
        let sub = Preorder::from_matrix(&rows, false).expect("restriction of a preorder");
        (sub, members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Preorder {
        Preorder::from_pairs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], true).unwrap()
    }

    fn equivalent_pair() -> Preorder {
        Preorder::complete(2)
    }

    fn vee() -> Preorder {
        Preorder::from_pairs(3, &[(0, 1), (0, 2)], true).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> Subset {
        Subset::from_elements(n, xs.iter().copied())
    }

    #[test]
    fn validate_examples() {
        let id: Vec<Vec<bool>> = (0..3).map(|i| (0..3).map(|j| i == j).collect()).collect();
        assert!(Preorder::from_matrix(&id, false).is_ok());
        assert!(Preorder::from_matrix(&[vec![true; 2], vec![true; 2]], false).is_ok());

        let mut broken = id.clone();
        broken[0][1] = true;
        broken[1][2] = true;
        assert_eq!(
            Preorder::from_matrix(&broken, false),
            Err(OrderError::NotTransitive(0, 1, 2))
        );
        let closed = Preorder::from_matrix(&broken, true).unwrap();
        assert!(closed.leq(0, 2));
    }

    #[test]
    fn validate_errors() {
        assert_eq!(
            Preorder::from_matrix(&[vec![false]], false),
            Err(OrderError::NotReflexive(0))
        );
        assert!(matches!(
            Preorder::from_matrix(&[vec![true, true], vec![true]], false),
            Err(OrderError::NotSquare { row: 1, .. })
        ));
        assert_eq!(
            Preorder::from_pairs(2, &[(0, 2)], true),
            Err(OrderError::OutOfRange(2, 2))
        );
    }

    #[test]
    fn strictness() {
        let c = Preorder::chain(3);
        assert!(c.strictly_less(0, 1));
        assert!(!equivalent_pair().strictly_less(0, 1));
        for x in 0..3 {
            assert!(!c.strictly_less(x, x));
        }
    }

    #[test]
    fn segments() {
        let c = Preorder::chain(3);
        assert!(c.is_segment(&set(3, &[0, 1])));
        assert!(!c.is_segment(&set(3, &[1, 2])));
        for p in [c.clone(), diamond(), equivalent_pair(), vee()] {
            assert!(p.is_segment(&Subset::empty(p.len())));
            assert!(p.is_segment(&Subset::full(p.len())));
        }
        assert_eq!(c.initial_segment(2), set(3, &[0, 1]));
        assert_eq!(Preorder::discrete(3).initial_segment(1), Subset::empty(3));
        assert_eq!(vee().initial_segment(1), set(3, &[0]));
    }

    #[test]
    fn well_ordered_subsets() {
        let c = Preorder::chain(3);
        assert_eq!(
            c.is_well_ordered_subset(&set(3, &[0, 2])),
            Some(Chain(vec![0, 2]))
        );
        assert_eq!(vee().is_well_ordered_subset(&set(3, &[1, 2])), None);
        assert_eq!(
            equivalent_pair().is_well_ordered_subset(&set(2, &[0, 1])),
            None
        );

        let reversed = Preorder::from_pairs(3, &[(2, 1), (1, 0)], true).unwrap();
        assert_eq!(
            reversed.is_well_ordered_subset(&Subset::full(3)),
            Some(Chain(vec![2, 1, 0]))
        );
    }

    #[test]
    fn bounds() {
        let c = Preorder::chain(3);
        assert_eq!(c.least_upper_bounds(&set(3, &[0, 1])), set(3, &[1]));
        assert_eq!(c.canonical_sup(&set(3, &[0, 1])), Some(1));
        assert_eq!(diamond().least_upper_bounds(&set(4, &[1, 2])), set(4, &[3]));
        let eq = equivalent_pair();
        assert_eq!(eq.least_upper_bounds(&set(2, &[0])), set(2, &[0, 1]));
        assert_eq!(eq.canonical_sup(&set(2, &[0])), Some(0));
        assert_eq!(c.upper_bounds(&Subset::empty(3)), Subset::full(3));
        assert_eq!(vee().canonical_sup(&set(3, &[1, 2])), None);
    }

    #[test]
    fn maximal_and_least() {
        let c = Preorder::chain(3);
        assert_eq!(c.maximal_elements(), set(3, &[2]));
        assert_eq!(c.least_element(&Subset::full(3)), Some(0));
        assert_eq!(vee().maximal_elements(), set(3, &[1, 2]));
        assert_eq!(Preorder::discrete(3).maximal_elements(), Subset::full(3));
        assert_eq!(equivalent_pair().maximal_elements(), Subset::full(2));
        assert_eq!(equivalent_pair().least_element(&Subset::full(2)), None);
        assert_eq!(vee().least_element(&set(3, &[1, 2])), None);
    }

    #[test]
    fn inductivity() {
        assert!(diamond().is_inductive(DEFAULT_EXHAUSTIVE_BOUND).unwrap());
        assert!(Preorder::chain(3)
            .is_inductive(DEFAULT_EXHAUSTIVE_BOUND)
            .unwrap());
        assert!(Preorder::discrete(2)
            .is_inductive(DEFAULT_EXHAUSTIVE_BOUND)
            .unwrap());
        assert!(!Preorder::discrete(0)
            .is_inductive(DEFAULT_EXHAUSTIVE_BOUND)
            .unwrap());
        assert_eq!(
            Preorder::chain(13).is_inductive(DEFAULT_EXHAUSTIVE_BOUND),
            Err(OrderError::CarrierTooLarge { n: 13, bound: 12 })
        );
    }

    #[test]
    fn well_ordered_enumeration_counts() {
        let mut count = 0;
        let _ = Preorder::chain(4).for_each_well_ordered(|_| {
            count += 1;
            ControlFlow::<()>::Continue(())
        });
        assert_eq!(count, 16);

        let mut seen = Vec::new();
        let _ = equivalent_pair().for_each_well_ordered(|s| {
            seen.push(s.to_vec());
            ControlFlow::<()>::Continue(())
        });
        assert_eq!(seen, vec![vec![], vec![0], vec![1]]);
    }

    #[test]
    fn chain_rejects_repeats() {
        assert_eq!(
            Chain::new(vec![1, 0, 1]),
            Err(OrderError::RepeatedElement(1))
        );
        assert!(serde_json::from_str::<Chain>("[2,2]").is_err());
        let c: Chain = serde_json::from_str("[2,0,1]").unwrap();
        assert!(Chain(vec![2, 0]).is_prefix_of(&c));
        assert!(!Chain(vec![0]).is_prefix_of(&c));
    }
}
