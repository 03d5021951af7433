//! Sources and their subset-entropy oracles.

mod club;
mod hypergraph;
mod joint;
mod pin;
mod tabular;

pub use club::{club, ClubbedSource};
pub use hypergraph::{binomial, combinations, Hypergraph};
pub use joint::{observable_stats, FunctionObservable, JointDistribution, JointOutcome, ObservableStats};
pub use pin::{PinSource, PIN_OUTCOME_CAP};
pub use tabular::{conditional_mutual_information, example1_source, TabularSource};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::subset::{TerminalSet, MAX_TERMINALS};

/// Maps a terminal subset `A` to the joint entropy `H(X_A)` in bits.
///
/// Implementations must be monotone and submodular with `H(X_∅) = 0`.
/// Callers guarantee `set ⊆ {1, …, m}`.
pub trait EntropyOracle: Send + Sync {
    fn terminal_count(&self) -> usize;

    fn entropy(&self, set: TerminalSet) -> Bits;

    /// Whether every value is an exact rational.
    fn is_exact(&self) -> bool;

    fn total_entropy(&self) -> Bits {
        self.entropy(TerminalSet::full(self.terminal_count()))
    }
}

/// `H(X_A)` for a list of 1-based terminals.
pub fn subset_entropy(oracle: &dyn EntropyOracle, terminals: &[usize]) -> Result<Bits> {
    let set = TerminalSet::from_terminals(terminals, oracle.terminal_count())?;
    Ok(oracle.entropy(set))
}

/// `H(X_A | X_B) = H(X_{A∪B}) − H(X_B)`.
pub fn conditional_entropy(oracle: &dyn EntropyOracle, a: &[usize], b: &[usize]) -> Result<Bits> {
    let m = oracle.terminal_count();
    let a = TerminalSet::from_terminals(a, m)?;
    let b = TerminalSet::from_terminals(b, m)?;
    Ok(conditional_entropy_of(oracle, a, b))
}

pub(crate) fn conditional_entropy_of(oracle: &dyn EntropyOracle, a: TerminalSet, b: TerminalSet) -> Bits {
    &oracle.entropy(a.union(b)) - &oracle.entropy(b)
}

/// All `2^m` subset entropies, precomputed.
#[derive(Clone, Debug)]
pub struct EntropyTable {
    m: usize,
    values: Vec<Bits>,
    exact: bool,
}

/// Largest `m` for which a full table is materialized.
pub const ENTROPY_TABLE_CAP: usize = 20;

impl EntropyTable {
    pub fn new(oracle: &dyn EntropyOracle) -> Result<Self> {
        let m = oracle.terminal_count();
        if m > ENTROPY_TABLE_CAP {
            return Err(Error::CapExceeded { what: "entropy table", m, cap: ENTROPY_TABLE_CAP });
        }
        let values = TerminalSet::all(m).map(|a| oracle.entropy(a)).collect();
        Ok(EntropyTable { m, values, exact: oracle.is_exact() })
    }

    pub fn values(&self) -> &[Bits] {
        &self.values
    }
}

impl EntropyOracle for EntropyTable {
    fn terminal_count(&self) -> usize {
        self.m
    }

    fn entropy(&self, set: TerminalSet) -> Bits {
        self.values[set.bits() as usize].clone()
    }

    fn is_exact(&self) -> bool {
        self.exact
    }
}

pub(crate) fn check_terminal_count(m: usize) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if m > MAX_TERMINALS {
        return Err(Error::CapExceeded { what: "terminal count", m, cap: MAX_TERMINALS });
    }
    Ok(())
}
