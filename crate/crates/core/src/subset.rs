//! Bitmask subsets of a finite carrier `{0, .., n-1}`.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::ser::{Serialize, Serializer};

/// A subset of the carrier `{0, .., n-1}`.
///
/// The width `n` is part of the value: two subsets of different carriers
/// never compare equal. Ordering compares the bitmasks as unsigned integers,
/// so `{0} < {1} < {0,1} < {2}` on any carrier.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    bits: FixedBitSet,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Subset {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        Subset { bits }
    }

    pub fn singleton(n: usize, x: usize) -> Self {
        let mut s = Subset::empty(n);
        s.insert(x);
        s
    }

    /// Builds a subset from element indices. Panics if an index is out of range.
    pub fn from_elements<I: IntoIterator<Item = usize>>(n: usize, elements: I) -> Self {
        let mut s = Subset::empty(n);
        for x in elements {
            s.insert(x);
        }
        s
    }

    /// Interprets bit `i` of `mask` as membership of element `i`.
    ///
    /// Returns `None` when `mask` has bits set at or above `n`.
    pub fn from_mask(n: usize, mask: u64) -> Option<Self> {
        if n < 64 && mask >> n != 0 {
            return None;
        }
        let mut s = Subset::empty(n);
        for i in 0..n.min(64) {
            if mask >> i & 1 == 1 {
                s.insert(i);
            }
        }
        Some(s)
    }

    /// The bitmask value, if the carrier fits in 64 bits.
    pub fn to_mask(&self) -> Option<u64> {
        if self.width() > 64 {
            return None;
        }
        Some(self.iter().fold(0u64, |m, i| m | 1 << i))
    }

    /// Carrier size this subset is interpreted against.
    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.width()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn insert(&mut self, x: usize) {
        assert!(
            x < self.width(),
            "element {x} outside carrier of size {}",
            self.width()
        );
        self.bits.insert(x);
    }

    pub fn remove(&mut self, x: usize) {
        self.bits.set(x, false);
    }

    pub fn with(&self, x: usize) -> Self {
        let mut s = self.clone();
        s.insert(x);
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn last(&self) -> Option<usize> {
        self.bits.maximum()
    }

    pub fn union(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.width(), other.width());
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Subset { bits }
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.width(), other.width());
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Subset { bits }
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.width(), other.width());
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Subset { bits }
    }

    pub fn complement(&self) -> Subset {
        Subset::full(self.width()).difference(self)
    }

    pub fn union_with(&mut self, other: &Subset) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &Subset) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// All `2^n` subsets of a carrier of size `n`, in bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        assert!(
            n < 64,
            "powerset of a {n}-element carrier is not enumerable"
        );
        (0..1u64 << n).map(move |m| Subset::from_mask(n, m).expect("mask in range"))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width().cmp(&other.width()).then_with(|| {
            self.bits
                .as_slice()
                .iter()
                .rev()
                .cmp(other.bits.as_slice().iter().rev())
        })
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Serializes as the bitmask integer when the carrier fits in 64 bits,
/// otherwise as the sorted element list.
impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self.to_mask() {
            Some(m) => ser.serialize_u64(m),
            None => ser.collect_seq(self.iter()),
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, x) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}
