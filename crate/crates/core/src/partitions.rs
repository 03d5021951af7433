//! Set partitions of the terminals and the partition surplus `Δ(P)`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::model::EntropyOracle;
use crate::subset::{TerminalSet, MAX_TERMINALS};

/// Largest `m` for full partition enumeration without an explicit override.
pub const ENUMERATION_CAP: usize = 12;

/// A partition of `{1, …, m}` into nonempty cells, ordered by smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    m: usize,
    cells: Vec<TerminalSet>,
}

impl Partition {
    /// Validates disjointness and coverage, then canonicalizes the cell order.
    pub fn new(m: usize, mut cells: Vec<TerminalSet>) -> Result<Self> {
        if m == 0 || m > MAX_TERMINALS {
            return Err(Error::InvalidArgument(format!("invalid terminal count {m}")));
        }
        let mut seen = TerminalSet::EMPTY;
        for &c in &cells {
            if c.is_empty() {
                return Err(Error::InvalidArgument("partition cells must be nonempty".into()));
            }
            if c.intersects(seen) {
                return Err(Error::InvalidArgument(format!("cell {{{c}}} overlaps an earlier cell")));
            }
            seen = seen.union(c);
        }
        if seen != TerminalSet::full(m) {
            return Err(Error::InvalidArgument(format!("cells do not cover 1..={m}")));
        }
        cells.sort_by_key(|c| c.smallest());
        Ok(Partition { m, cells })
    }

    /// Builds the partition encoded by a restricted-growth string
    /// (`rgs[i]` is the block of terminal `i + 1`).
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let blocks = rgs.iter().max().map_or(0, |b| b + 1);
        let mut cells = vec![TerminalSet::EMPTY; blocks];
        for (i, &b) in rgs.iter().enumerate() {
            cells[b] = cells[b].union(TerminalSet::singleton(i + 1));
        }
        Partition { m: rgs.len(), cells }
    }

    pub fn terminal_count(&self) -> usize {
        self.m
    }

    pub fn cells(&self) -> &[TerminalSet] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_singleton_partition(&self) -> bool {
        self.cells.len() == self.m
    }

    pub fn to_vecs(&self) -> Vec<Vec<usize>> {
        self.cells.iter().map(|c| c.to_vec()).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, c) in self.cells.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{{{c}}}")?;
        }
        f.write_str("}")
    }
}

/// Serializes as an array of arrays of 1-based terminals.
impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.cells.iter())
    }
}

/// The partition into `m` singletons.
pub fn singleton_partition(m: usize) -> Result<Partition> {
    Partition::new(m, (1..=m).map(TerminalSet::singleton).collect())
}

/// `P_B = {{b_1}, …, {b_|B|}, B^c}` for a nonempty proper subset `B`.
pub fn partition_from_subset(b: TerminalSet, m: usize) -> Result<Partition> {
    if b.is_empty() {
        return Err(Error::InvalidArgument("B must be nonempty".into()));
    }
    if !b.is_subset_of(TerminalSet::full(m)) {
        return Err(Error::TerminalOutOfRange { index: b.iter().last().unwrap_or(0), m });
    }
    if b.len() >= m {
        return Err(Error::InvalidArgument("B must be a proper subset".into()));
    }
    let mut cells: Vec<TerminalSet> = b.iter().map(TerminalSet::singleton).collect();
    cells.push(b.complement(m));
    Partition::new(m, cells)
}

/// Restricted-growth-string enumeration of set partitions.
#[derive(Clone, Debug)]
pub struct Partitions {
    min_cells: usize,
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[0..=i])
    prefix_max: Vec<usize>,
    done: bool,
}

impl Partitions {
    fn new(m: usize, min_cells: usize) -> Self {
        Partitions { min_cells, rgs: vec![0; m], prefix_max: vec![0; m], done: m == 0 }
    }

    fn advance(&mut self) {
        let m = self.rgs.len();
        for i in (1..m).rev() {
            if self.rgs[i] <= self.prefix_max[i - 1] {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for j in i + 1..m {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        loop {
            if self.done {
                return None;
            }
            let blocks = self.prefix_max.last().map_or(0, |b| b + 1);
            let current = (blocks >= self.min_cells).then(|| Partition::from_rgs(&self.rgs));
            self.advance();
            if current.is_some() {
                return current;
            }
        }
    }
}

/// Every partition of `{1, …, m}` with at least `min_cells` cells, exactly
/// once each, in restricted-growth-string order. Requires `m <= ENUMERATION_CAP`.
pub fn enumerate_partitions(m: usize, min_cells: usize) -> Result<Partitions> {
    if m > ENUMERATION_CAP {
        return Err(Error::CapExceeded { what: "partition enumeration", m, cap: ENUMERATION_CAP });
    }
    enumerate_partitions_uncapped(m, min_cells)
}

/// [`enumerate_partitions`] without the size cap (bounded only by the
/// terminal-set width).
pub fn enumerate_partitions_uncapped(m: usize, min_cells: usize) -> Result<Partitions> {
    if m < 1 || m > MAX_TERMINALS {
        return Err(Error::InvalidArgument(format!("invalid terminal count {m}")));
    }
    if min_cells < 1 || min_cells > m {
        return Err(Error::InvalidArgument(format!("need 1 <= min_cells <= m, got min_cells={min_cells}, m={m}")));
    }
    Ok(Partitions::new(m, min_cells))
}

/// `Δ(P) = (Σ_{A∈P} H(X_A) − H(X_M)) / (|P| − 1)` for `|P| >= 2`.
pub fn delta(oracle: &dyn EntropyOracle, partition: &Partition) -> Result<Bits> {
    if partition.terminal_count() != oracle.terminal_count() {
        return Err(Error::MismatchedTerminals { left: partition.terminal_count(), right: oracle.terminal_count() });
    }
    if partition.len() < 2 {
        return Err(Error::InvalidArgument("Δ needs a partition with at least two cells".into()));
    }
    let value = delta_unchecked(oracle, partition.cells(), &oracle.total_entropy());
    if value.is_negative_tol() {
        return Err(Error::Internal(format!("negative Δ = {value} for {partition}: oracle is not submodular")));
    }
    Ok(value)
}

pub(crate) fn delta_unchecked(oracle: &dyn EntropyOracle, cells: &[TerminalSet], total: &Bits) -> Bits {
    let sum = cells.iter().fold(Bits::zero(), |acc, &c| &acc + &oracle.entropy(c));
    (&sum - total).div_int(cells.len() as i64 - 1)
}
