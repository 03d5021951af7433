use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest terminal count representable by [`TerminalSet`].
pub const MAX_TERMINALS: usize = 63;

/// A subset of the terminals `{1, …, m}`, stored as a bitmask (terminal `i`
/// is bit `i - 1`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TerminalSet(u64);

impl TerminalSet {
    pub const EMPTY: TerminalSet = TerminalSet(0);

    pub fn from_bits(bits: u64) -> Self {
        TerminalSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{1, …, m}`.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_TERMINALS);
        TerminalSet((1u64 << m) - 1)
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!((1..=MAX_TERMINALS).contains(&i));
        TerminalSet(1u64 << (i - 1))
    }

    /// Builds a set from 1-based terminal indices, checking each lies in `1..=m`.
    pub fn from_terminals(terminals: &[usize], m: usize) -> Result<Self> {
        let mut bits = 0u64;
        for &i in terminals {
            if i == 0 || i > m || i > MAX_TERMINALS {
                return Err(Error::TerminalOutOfRange { index: i, m });
            }
            bits |= 1u64 << (i - 1);
        }
        Ok(TerminalSet(bits))
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && i <= MAX_TERMINALS && self.0 & (1u64 << (i - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: TerminalSet) -> TerminalSet {
        TerminalSet(self.0 | other.0)
    }

    pub fn intersection(self, other: TerminalSet) -> TerminalSet {
        TerminalSet(self.0 & other.0)
    }

    pub fn difference(self, other: TerminalSet) -> TerminalSet {
        TerminalSet(self.0 & !other.0)
    }

    pub fn intersects(self, other: TerminalSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset_of(self, other: TerminalSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement within `{1, …, m}`.
    pub fn complement(self, m: usize) -> TerminalSet {
        TerminalSet::full(m).difference(self)
    }

    /// Smallest member, if any.
    pub fn smallest(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Ascending 1-based members.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i + 1)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `{1, …, m}` in increasing bitmask order, including ∅ and the full set.
    pub fn all(m: usize) -> impl Iterator<Item = TerminalSet> {
        (0..(1u64 << m)).map(TerminalSet)
    }

    /// Lexicographic comparison of the ascending member lists.
    pub fn lex_cmp(self, other: TerminalSet) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

/// Renders as `1,2,5` (empty set renders as the empty string).
impl fmt::Display for TerminalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for TerminalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}
