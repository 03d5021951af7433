use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::model::joint::{JointDistribution, JointOutcome};
use crate::model::{EntropyOracle, Hypergraph};
use crate::subset::TerminalSet;

/// Largest edge count whose `2^|E|` outcome space is materialized.
pub const PIN_OUTCOME_CAP: usize = 24;

/// Pairwise-independent-network model: each hyperedge carries an independent
/// fair bit seen by exactly its vertices. `H(X_A)` is the number of hyperedges
/// meeting `A`.
#[derive(Clone, Debug)]
pub struct PinSource {
    hypergraph: Hypergraph,
    masks: Vec<TerminalSet>,
}

impl PinSource {
    pub fn new(hypergraph: Hypergraph) -> Self {
        let masks = hypergraph.edge_sets().collect();
        PinSource { hypergraph, masks }
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn edge_count(&self) -> usize {
        self.masks.len()
    }

    pub fn edge_masks(&self) -> &[TerminalSet] {
        &self.masks
    }

    /// Number of hyperedges meeting `set`.
    pub fn incident_edges(&self, set: TerminalSet) -> usize {
        self.masks.iter().filter(|e| e.intersects(set)).count()
    }

    /// Enumerates all `2^|E|` equiprobable edge-bit assignments. The outcome
    /// key is the edge-bit vector (bit `j` = edge `j` in canonical order); each
    /// terminal observes the packed bits of its incident edges.
    pub fn materialize(&self) -> Result<JointDistribution> {
        let edges = self.masks.len();
        if edges > PIN_OUTCOME_CAP {
            return Err(Error::OutcomeSpaceTooLarge { bits: edges, cap: PIN_OUTCOME_CAP });
        }
        let m = self.hypergraph.terminal_count();
        let incident: Vec<Vec<usize>> = (1..=m)
            .map(|i| (0..edges).filter(|&j| self.masks[j].contains(i)).collect())
            .collect();
        let prob = 0.5f64.powi(edges as i32);
        let outcomes = (0..1u64 << edges)
            .map(|key| {
                let symbols = incident
                    .iter()
                    .map(|js| {
                        js.iter()
                            .enumerate()
                            .fold(0u64, |acc, (pos, &j)| acc | (((key >> j) & 1) << pos))
                    })
                    .collect();
                JointOutcome { key, prob, symbols }
            })
            .collect();
        JointDistribution::new(m, outcomes)
    }
}

impl EntropyOracle for PinSource {
    fn terminal_count(&self) -> usize {
        self.hypergraph.terminal_count()
    }

    fn entropy(&self, set: TerminalSet) -> Bits {
        Bits::from_int(self.incident_edges(set) as i64)
    }

    fn is_exact(&self) -> bool {
        true
    }
}
