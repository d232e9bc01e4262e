//! Brute-force reference computations, written straight from the
//! definitions, plus seeded instance generators.
//!
//! Nothing here calls into the constructions it is used to check: scans go
//! over raw matrices, all subsets or all sequences, and each condition is
//! re-stated locally.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::constructions::{ChoiceFunction, InflationaryMap, PsiMap};
use crate::order::{Chain, Preorder};
use crate::recursion::{PhiSpec, TablePhi};
use crate::subset::Subset;

/// Largest carrier for preorder enumeration (2^12 matrices at n = 4).
pub const PREORDER_ENUMERATION_BOUND: usize = 4;
/// Largest carrier for definition-level subset scans.
pub const SUBSET_SCAN_BOUND: usize = 12;
/// Largest carrier for the point-wise scans.
pub const POINT_SCAN_BOUND: usize = 20;
/// Largest carrier for sequence enumeration in the uniqueness oracle.
pub const SEQUENCE_BOUND: usize = 4;
/// Largest ground set whose families are enumerated (2^8 families at 3).
pub const FAMILY_GROUND_BOUND: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("carrier of size {n} exceeds the oracle bound {bound}")]
    CarrierTooLarge { n: usize, bound: usize },
    #[error("expected exactly one conforming sequence, found {0}")]
    UniquenessViolated(usize),
}

fn cap(n: usize, bound: usize) -> Result<(), OracleError> {
    if n > bound {
        Err(OracleError::CarrierTooLarge { n, bound })
    } else {
        Ok(())
    }
}

fn off_diagonal(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

/// Every reflexive-transitive relation on `n` labelled elements, found by
/// filtering all `2^(n^2 - n)` off-diagonal assignments with a triple loop.
pub fn enumerate_preorders(n: usize) -> Result<Vec<Preorder>, OracleError> {
    cap(n, PREORDER_ENUMERATION_BOUND)?;
    let cells = off_diagonal(n);
    let mut out = Vec::new();
    for bits in 0u64..1 << cells.len() {
        let mut m = vec![vec![false; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        for (k, &(i, j)) in cells.iter().enumerate() {
            m[i][j] = bits >> k & 1 == 1;
        }
        let transitive =
            (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(m[i][j] && m[j][k]) || m[i][k])));
        if transitive {
            out.push(Preorder::from_matrix(&m, false).expect("filtered matrix is a preorder"));
        }
    }
    Ok(out)
}

/// Second, independent count: rows as bitmasks, transitivity as "the row of
/// anything above `i` is contained in the row of `i`".
pub fn count_preorders_by_rows(n: usize) -> Result<usize, OracleError> {
    cap(n, PREORDER_ENUMERATION_BOUND)?;
    let free = n * n - n;
    let mut count = 0;
    for bits in 0u64..1 << free {
        let mut rows = vec![0u32; n];
        let mut k = 0;
        for (i, row) in rows.iter_mut().enumerate() {
            *row |= 1 << i;
            for j in 0..n {
                if j != i {
                    if bits >> k & 1 == 1 {
                        *row |= 1 << j;
                    }
                    k += 1;
                }
            }
        }
        let ok = (0..n).all(|i| {
            (0..n)
                .filter(|&j| rows[i] >> j & 1 == 1)
                .all(|j| rows[j] & !rows[i] == 0)
        });
        if ok {
            count += 1;
        }
    }
    Ok(count)
}

/// `{ x | f(x) = x }`
pub fn all_fixed_points(p: &Preorder, f: &[usize]) -> Result<Subset, OracleError> {
    cap(p.len(), POINT_SCAN_BOUND)?;
    let mut s = Subset::empty(p.len());
    for (x, &fx) in f.iter().enumerate().take(p.len()) {
        if fx == x {
            s.insert(x);
        }
    }
    Ok(s)
}

/// `{ x | there is no y with x <= y and not y <= x }`
pub fn all_maximal(p: &Preorder) -> Result<Subset, OracleError> {
    let n = p.len();
    cap(n, POINT_SCAN_BOUND)?;
    let mut s = Subset::empty(n);
    for x in 0..n {
        let dominated = (0..n).any(|y| p.leq(x, y) && !p.leq(y, x));
        if !dominated {
            s.insert(x);
        }
    }
    Ok(s)
}

/// The members of `a` in increasing order if every non-empty subset of `a`
/// has exactly one element below all of its members; `None` otherwise.
pub fn well_ordered_by_definition(p: &Preorder, a: &Subset) -> Option<Chain> {
    let members: Vec<usize> = a.iter().collect();
    let k = members.len();
    for sub in 1u64..1 << k {
        let picked: Vec<usize> = (0..k)
            .filter(|&i| sub >> i & 1 == 1)
            .map(|i| members[i])
            .collect();
        let least = picked
            .iter()
            .filter(|&&x| picked.iter().all(|&y| p.leq(x, y)))
            .count();
        if least != 1 {
            return None;
        }
    }
    // Repeatedly extract the least element of what is left.
    let mut rest = members;
    let mut seq = Vec::with_capacity(k);
    while !rest.is_empty() {
        let pos = rest
            .iter()
            .position(|&x| rest.iter().all(|&y| p.leq(x, y)))
            .expect("least element exists");
        seq.push(rest.remove(pos));
    }
    Some(Chain::new(seq).expect("distinct members"))
}

/// Every well-ordered subset of `p`, as its increasing chain, in bitmask
/// order of the underlying subset.
pub fn all_well_ordered_subsets(p: &Preorder) -> Result<Vec<Chain>, OracleError> {
    cap(p.len(), SUBSET_SCAN_BOUND)?;
    Ok(Subset::all(p.len())
        .filter_map(|a| well_ordered_by_definition(p, &a))
        .collect())
}

/// Every sequence of distinct elements of `{0, .., n-1}`, shortest first.
pub fn all_sequences(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for seq in &frontier {
            for x in 0..n {
                if !seq.contains(&x) {
                    let mut s: Vec<usize> = seq.clone();
                    s.push(x);
                    next.push(s);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn satisfies_tb(n: usize, spec: &TablePhi, seq: &[usize]) -> bool {
    for (k, &x) in seq.iter().enumerate() {
        let below = Subset::from_elements(n, seq[..k].iter().copied());
        match (spec.in_domain(&below), spec.phi(&below)) {
            (Ok(true), Ok(v)) if v == x => {}
            _ => return false,
        }
    }
    let whole = Subset::from_elements(n, seq.iter().copied());
    spec.in_domain(&whole) == Ok(false)
}

/// Finds the sequences satisfying both recursion conditions by exhaustive
/// search and insists there is exactly one.
pub fn tb_uniqueness_oracle(n: usize, spec: &TablePhi) -> Result<Chain, OracleError> {
    cap(n, SEQUENCE_BOUND)?;
    let survivors: Vec<Vec<usize>> = all_sequences(n)
        .into_iter()
        .filter(|s| satisfies_tb(n, spec, s))
        .collect();
    match survivors.as_slice() {
        [only] => Ok(Chain::new(only.clone()).expect("distinct by construction")),
        _ => Err(OracleError::UniquenessViolated(survivors.len())),
    }
}

/// The three conditions for `(A, <=_A)` to be extended by `(B, <=_B)`,
/// where each chain's order is its position order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Extension {
    /// `A` is contained in `B`.
    pub contained: bool,
    /// `B`'s order restricted to `A` is `A`'s order.
    pub order_agrees: bool,
    /// `A` is downward closed in `B`.
    pub segment: bool,
}

impl Extension {
    pub fn holds(&self) -> bool {
        self.contained && self.order_agrees && self.segment
    }
}

pub fn extension_conditions(a: &Chain, b: &Chain) -> Extension {
    let pos_b = |x: usize| b.as_slice().iter().position(|&y| y == x);
    let contained = a.iter().all(|x| pos_b(x).is_some());
    let order_agrees = contained && a.as_slice().windows(2).all(|w| pos_b(w[0]) < pos_b(w[1]));
    let segment = contained
        && b.iter().enumerate().all(|(j, y)| {
            // anything of B below a member of A is in A
            !a.iter().any(|x| pos_b(x).is_some_and(|i| j < i)) || a.iter().any(|x| x == y)
        });
    Extension {
        contained,
        order_agrees,
        segment,
    }
}

/// All non-empty families of subsets of a `ground`-element set that contain
/// the union of each of their subfamilies, the empty subfamily included.
pub fn union_closed_families(ground: usize) -> Result<Vec<Vec<Subset>>, OracleError> {
    cap(ground, FAMILY_GROUND_BOUND)?;
    let universe: Vec<Subset> = Subset::all(ground).collect();
    let mut out = Vec::new();
    for pick in 1u64..1 << universe.len() {
        let family: Vec<Subset> = (0..universe.len())
            .filter(|&i| pick >> i & 1 == 1)
            .map(|i| universe[i].clone())
            .collect();
        let k = family.len();
        let closed = (0u64..1 << k).all(|sub| {
            let mut u = Subset::empty(ground);
            for (i, m) in family.iter().enumerate() {
                if sub >> i & 1 == 1 {
                    u.union_with(m);
                }
            }
            family.contains(&u)
        });
        if closed {
            out.push(family);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorMode {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorBounds {
    /// Largest carrier a generator will be asked for.
    pub max_n: usize,
    /// Instances per call in random mode.
    pub random_count: usize,
}

impl Default for GeneratorBounds {
    fn default() -> Self {
        GeneratorBounds {
            max_n: 6,
            random_count: 100,
        }
    }
}

/// Deterministic stream of random instances: the same seed always yields
/// the same sequence of draws.
#[derive(Debug, Clone)]
pub struct InstanceGenerator {
    pub seed: u64,
    pub mode: GeneratorMode,
    pub bounds: GeneratorBounds,
    rng: ChaCha8Rng,
}

impl InstanceGenerator {
    pub fn new(seed: u64) -> Self {
        Self::with(seed, GeneratorMode::Random, GeneratorBounds::default())
    }

    pub fn with(seed: u64, mode: GeneratorMode, bounds: GeneratorBounds) -> Self {
        InstanceGenerator {
            seed,
            mode,
            bounds,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn check(&self, n: usize) {
        assert!(
            n <= self.bounds.max_n,
            "carrier {n} above generator bound {}",
            self.bounds.max_n
        );
    }

    /// Preorders on `n` elements: all of them in exhaustive mode, otherwise
    /// `random_count` closures of random relations.
    pub fn preorders(&mut self, n: usize) -> Result<Vec<Preorder>, OracleError> {
        match self.mode {
            GeneratorMode::Exhaustive => enumerate_preorders(n),
            GeneratorMode::Random => {
                self.check(n);
                let density = self.rng.gen_range(0.0..0.5);
                Ok((0..self.bounds.random_count)
                    .map(|_| {
                        let pairs: Vec<(usize, usize)> = off_diagonal(n)
                            .into_iter()
                            .filter(|_| self.rng.gen_bool(density))
                            .collect();
                        Preorder::from_pairs(n, &pairs, true).expect("closure always validates")
                    })
                    .collect())
            }
        }
    }

    /// A uniformly random total map `P(E) -> E`.
    pub fn psi(&mut self, n: usize) -> PsiMap {
        self.check(n);
        let table = (0..1usize << n).map(|_| self.rng.gen_range(0..n)).collect();
        PsiMap::new(n, table).expect("values in range")
    }

    /// `f(x)` drawn uniformly from the up-set of `x`, so `x <= f(x)` holds by
    /// construction.
    pub fn inflationary(&mut self, p: &Preorder) -> InflationaryMap {
        let map = (0..p.len())
            .map(|x| {
                let up: Vec<usize> = p.up_set(x).iter().collect();
                *up.choose(&mut self.rng).expect("x <= x")
            })
            .collect();
        InflationaryMap::new(p, map).expect("drawn from up-sets")
    }

    /// A choice table covering every non-empty subset.
    pub fn choice_table(&mut self, n: usize) -> ChoiceFunction {
        self.check(n);
        let table = Subset::all(n)
            .skip(1)
            .map(|a| {
                let members: Vec<usize> = a.iter().collect();
                let v = *members.choose(&mut self.rng).expect("non-empty");
                (a, v)
            })
            .collect();
        ChoiceFunction::Table(table)
    }

    /// A table spec: each proper subset joins `S` with a random probability
    /// (the empty set more often, so recursions get going), and `phi(X)` is
    /// drawn from the complement.
    pub fn phi_spec(&mut self, n: usize) -> TablePhi {
        self.check(n);
        let p_member = self.rng.gen_range(0.3..0.95);
        let mut entries = Vec::new();
        for x in Subset::all(n) {
            if x.is_full() {
                continue;
            }
            let p = if x.is_empty() { 0.9 } else { p_member };
            if self.rng.gen_bool(p) {
                let outside: Vec<usize> = x.complement().iter().collect();
                entries.push((x, *outside.choose(&mut self.rng).expect("proper subset")));
            }
        }
        TablePhi::new(n, entries).expect("phi drawn from the complement")
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::construct_m;

    #[test]
    fn preorder_counts() {
        let counts: Vec<usize> = (1..=3)
            .map(|n| enumerate_preorders(n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 4, 29]);
        assert_eq!(count_preorders_by_rows(2).unwrap(), 4);
        assert_eq!(
            enumerate_preorders(5).unwrap_err(),
            OracleError::CarrierTooLarge { n: 5, bound: 4 }
        );
    }

    #[test]
    fn scans() {
        let p = Preorder::chain(3);
        assert_eq!(
            all_fixed_points(&p, &[1, 2, 2]).unwrap(),
            Subset::singleton(3, 2)
        );
        assert_eq!(
            all_maximal(&Preorder::discrete(3)).unwrap(),
            Subset::full(3)
        );
        let wo = all_well_ordered_subsets(&Preorder::complete(2)).unwrap();
        assert_eq!(
            wo,
            vec![
                Chain::empty(),
                Chain::new(vec![0]).unwrap(),
                Chain::new(vec![1]).unwrap()
            ]
        );
    }

    #[test]
    fn sequence_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_sequences(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 65]);
    }

    #[test]
    fn uniqueness_examples() {
        let n = 3;
        let full = Subset::full(n);
        let spec = TablePhi::new(
            n,
            Subset::all(n).filter(|x| *x != full).map(|x| {
                let v = x.complement().first().unwrap();
                (x, v)
            }),
        )
        .unwrap();
        assert_eq!(
            tb_uniqueness_oracle(n, &spec).unwrap(),
            Chain::new(vec![0, 1, 2]).unwrap()
        );
        let nothing = TablePhi::new(n, []).unwrap();
        assert_eq!(tb_uniqueness_oracle(n, &nothing).unwrap(), Chain::empty());

        let mut gen = InstanceGenerator::new(9);
        for _ in 0..50 {
            let spec = gen.phi_spec(4);
            assert_eq!(
                tb_uniqueness_oracle(4, &spec).unwrap(),
                construct_m(4, &spec).unwrap().m
            );
        }
    }

    #[test]
    fn extension_conditions_match_prefix() {
        let c = |v: &[usize]| Chain::new(v.to_vec()).unwrap();
        assert!(extension_conditions(&c(&[2]), &c(&[2, 0])).holds());
        assert!(extension_conditions(&c(&[]), &c(&[1])).holds());
        let e = extension_conditions(&c(&[0]), &c(&[2, 0]));
        assert!(e.contained && e.order_agrees && !e.segment);
        let e = extension_conditions(&c(&[0, 2]), &c(&[2, 0]));
        assert!(e.contained && !e.order_agrees);
        assert!(!extension_conditions(&c(&[3]), &c(&[2, 0])).contained);
    }

    #[test]
    fn generator_contracts() {
        let p = Preorder::discrete(4);
        let mut gen = InstanceGenerator::new(1);
        assert_eq!(gen.inflationary(&p), InflationaryMap::identity(4));
        let psi = gen.psi(2);
        assert_eq!(psi.entries().len(), 4);

        let draw = |seed| {
            let mut g = InstanceGenerator::new(seed);
            (g.psi(3), g.phi_spec(3), g.choice_table(3))
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));

        let mut ex =
            InstanceGenerator::with(0, GeneratorMode::Exhaustive, GeneratorBounds::default());
        assert_eq!(ex.preorders(3).unwrap().len(), 29);
        let mut rnd = InstanceGenerator::new(0);
        assert_eq!(rnd.preorders(5).unwrap().len(), 100);
    }

    #[test]
    fn union_closed_family_count_on_one_point() {
        // {∅} and {∅,{0}}
        assert_eq!(union_closed_families(1).unwrap().len(), 2);
    }
}
