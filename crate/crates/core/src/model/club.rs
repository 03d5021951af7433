use std::fmt;
use std::sync::Arc;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::model::EntropyOracle;
use crate::subset::TerminalSet;

/// Coordinatewise pairing `Z_i = (X_i, Y_i)` of independent sources on the
/// same terminals; entropies add.
#[derive(Clone)]
pub struct ClubbedSource {
    parts: Vec<Arc<dyn EntropyOracle>>,
}

impl fmt::Debug for ClubbedSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClubbedSource").field("parts", &self.parts.len()).finish()
    }
}

pub fn club(x: Arc<dyn EntropyOracle>, y: Arc<dyn EntropyOracle>) -> Result<ClubbedSource> {
    if x.terminal_count() != y.terminal_count() {
        return Err(Error::MismatchedTerminals { left: x.terminal_count(), right: y.terminal_count() });
    }
    Ok(ClubbedSource { parts: vec![x, y] })
}

impl ClubbedSource {
    pub fn parts(&self) -> &[Arc<dyn EntropyOracle>] {
        &self.parts
    }
}

impl EntropyOracle for ClubbedSource {
    fn terminal_count(&self) -> usize {
        self.parts[0].terminal_count()
    }

    fn entropy(&self, set: TerminalSet) -> Bits {
        self.parts.iter().fold(Bits::zero(), |acc, p| &acc + &p.entropy(set))
    }

    fn is_exact(&self) -> bool {
        self.parts.iter().all(|p| p.is_exact())
    }
}
