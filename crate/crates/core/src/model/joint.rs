use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::bits::{shannon_entropy, Bits, TOLERANCE};
use crate::error::{Error, Result};
use crate::model::EntropyOracle;
use crate::subset::TerminalSet;

/// One atom of a fully enumerated source at block length one.
#[derive(Clone, Debug)]
pub struct JointOutcome {
    /// Identifies the outcome within its source (edge-bit vector for PIN
    /// models, row index for tabular sources).
    pub key: u64,
    pub prob: f64,
    /// Observation of each terminal, `symbols[i - 1]` for terminal `i`.
    pub symbols: Vec<u64>,
}

/// An explicitly materialized joint distribution of `(X_1, …, X_m)`.
#[derive(Clone, Debug)]
pub struct JointDistribution {
    m: usize,
    outcomes: Vec<JointOutcome>,
}

impl JointDistribution {
    pub fn new(m: usize, outcomes: Vec<JointOutcome>) -> Result<Self> {
        if let Some(o) = outcomes.iter().find(|o| o.symbols.len() != m) {
            return Err(Error::InvalidArgument(format!(
                "outcome {} has {} observations, expected {m}",
                o.key,
                o.symbols.len()
            )));
        }
        Ok(JointDistribution { m, outcomes })
    }

    pub fn outcomes(&self) -> &[JointOutcome] {
        &self.outcomes
    }

    /// Joint distribution of the clubbed pair of independent sources; each
    /// terminal observes `(x_i << 32) | y_i`.
    pub fn product(&self, other: &JointDistribution) -> Result<JointDistribution> {
        if self.m != other.m {
            return Err(Error::MismatchedTerminals { left: self.m, right: other.m });
        }
        let width = other.outcomes.len() as u64;
        let mut outcomes = Vec::with_capacity(self.outcomes.len() * other.outcomes.len());
        for x in &self.outcomes {
            for y in &other.outcomes {
                let symbols = x.symbols.iter().zip(&y.symbols).map(|(a, b)| (a << 32) | b).collect();
                outcomes.push(JointOutcome { key: x.key * width + y.key, prob: x.prob * y.prob, symbols });
            }
        }
        JointDistribution::new(self.m, outcomes)
    }

    fn marginal_entropy(&self, set: TerminalSet, labels: Option<&[u64]>) -> f64 {
        let members = set.to_vec();
        let mut mass: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
        for (idx, o) in self.outcomes.iter().enumerate() {
            let mut key: Vec<u64> = members.iter().map(|&i| o.symbols[i - 1]).collect();
            if let Some(labels) = labels {
                key.push(labels[idx]);
            }
            *mass.entry(key).or_insert(0.0) += o.prob;
        }
        shannon_entropy(mass.into_values())
    }
}

impl EntropyOracle for JointDistribution {
    fn terminal_count(&self) -> usize {
        self.m
    }

    fn entropy(&self, set: TerminalSet) -> Bits {
        Bits::Approx(self.marginal_entropy(set, None))
    }

    fn is_exact(&self) -> bool {
        false
    }
}

/// A deterministic function `L` of the full source outcome.
#[derive(Clone)]
pub struct FunctionObservable {
    source: Arc<dyn EntropyOracle>,
    joint: Arc<JointDistribution>,
    labels: Vec<u64>,
}

impl std::fmt::Debug for FunctionObservable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionObservable")
            .field("terminals", &self.joint.m)
            .field("outcomes", &self.labels.len())
            .finish()
    }
}

impl FunctionObservable {
    /// Evaluates `map` on every outcome of `joint`. `source` is the oracle the
    /// joint distribution was materialized from (it supplies exact entropies
    /// when available).
    pub fn from_fn(
        source: Arc<dyn EntropyOracle>,
        joint: Arc<JointDistribution>,
        map: impl Fn(&JointOutcome) -> u64,
    ) -> Result<Self> {
        let labels = joint.outcomes.iter().map(map).collect();
        Self::from_labels(source, joint, labels)
    }

    /// `labels[k]` is the label of the `k`-th outcome of `joint`.
    pub fn from_labels(source: Arc<dyn EntropyOracle>, joint: Arc<JointDistribution>, labels: Vec<u64>) -> Result<Self> {
        if source.terminal_count() != joint.m {
            return Err(Error::MismatchedTerminals { left: source.terminal_count(), right: joint.m });
        }
        if labels.len() != joint.outcomes.len() {
            return Err(Error::InvalidArgument(format!(
                "observable is not total: {} labels for {} outcomes",
                labels.len(),
                joint.outcomes.len()
            )));
        }
        Ok(FunctionObservable { source, joint, labels })
    }

    pub fn source(&self) -> &Arc<dyn EntropyOracle> {
        &self.source
    }

    pub fn joint(&self) -> &JointDistribution {
        &self.joint
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn terminal_count(&self) -> usize {
        self.joint.m
    }

    /// `H(L)`.
    pub fn label_entropy(&self) -> f64 {
        self.joint.marginal_entropy(TerminalSet::EMPTY, Some(&self.labels))
    }

    /// `H(X_A, L)`.
    pub fn entropy_with_label(&self, set: TerminalSet) -> f64 {
        self.joint.marginal_entropy(set, Some(&self.labels))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ObservableStats {
    pub label_entropy: f64,
    /// `I(X_i; L)` for `i = 1, …, m`.
    pub mutual_information: Vec<f64>,
}

impl ObservableStats {
    pub fn total_mutual_information(&self) -> f64 {
        self.mutual_information.iter().sum()
    }
}

/// `H(L)` and each `I(X_i; L) = H(X_i) + H(L) − H(X_i, L)` from the
/// materialized joint distribution.
pub fn observable_stats(obs: &FunctionObservable) -> ObservableStats {
    let h_l = obs.label_entropy();
    let mutual_information = (1..=obs.terminal_count())
        .map(|i| {
            let single = TerminalSet::singleton(i);
            let h_i = obs.joint.marginal_entropy(single, None);
            let mi = h_i + h_l - obs.entropy_with_label(single);
            // clamp rounding noise only
            if mi < 0.0 && mi > -TOLERANCE {
                0.0
            } else {
                mi
            }
        })
        .collect();
    ObservableStats { label_entropy: h_l, mutual_information }
}
