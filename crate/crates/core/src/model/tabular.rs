use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bits::{parse_rational, rational_to_f64, shannon_entropy, Bits, TOLERANCE};
use crate::error::{Error, Result};
use crate::model::joint::{JointDistribution, JointOutcome};
use crate::model::{check_terminal_count, EntropyOracle};
use crate::subset::TerminalSet;

/// A discrete source given by its joint probability mass function.
#[derive(Clone, Debug)]
pub struct TabularSource {
    alphabet_sizes: Vec<usize>,
    rows: Vec<(Vec<usize>, f64)>,
}

impl TabularSource {
    /// Builds a source from `(symbols, probability)` rows. Probabilities must
    /// be nonnegative and sum to one within [`TOLERANCE`]; symbol tuples must
    /// be distinct and within the alphabets.
    pub fn new(alphabet_sizes: Vec<usize>, rows: Vec<(Vec<usize>, f64)>) -> Result<Self> {
        check_terminal_count(alphabet_sizes.len())?;
        if alphabet_sizes.contains(&0) {
            return Err(Error::InvalidArgument("alphabet sizes must be positive".into()));
        }
        let mut seen = HashSet::new();
        let mut total = 0.0;
        for (symbols, p) in &rows {
            validate_row(&alphabet_sizes, symbols).map_err(Error::InvalidArgument)?;
            if !seen.insert(symbols.clone()) {
                return Err(Error::InvalidArgument(format!("duplicate outcome {symbols:?}")));
            }
            if !(p.is_finite() && *p >= 0.0) {
                return Err(Error::InvalidArgument(format!("invalid probability {p}")));
            }
            total += p;
        }
        if (total - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}, not 1")));
        }
        Ok(TabularSource { alphabet_sizes, rows })
    }

    /// Parses the pmf text format: a header `m a_1 … a_m`, then rows
    /// `x_1 … x_m p` with 0-based symbols and `p` decimal or `num/den`.
    /// All-rational files must sum to exactly one.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<Vec<usize>> = None;
        let mut rows = Vec::new();
        let mut seen = HashSet::new();
        let mut exact_sum = Some(BigRational::zero());
        let mut float_sum = 0.0;
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line, message };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let Some(sizes) = &header else {
                let nums: Vec<usize> = tokens
                    .iter()
                    .map(|t| t.parse().map_err(|_| err(format!("not an integer: {t:?}"))))
                    .collect::<Result<_>>()?;
                let m = nums[0];
                if m < 1 {
                    return Err(err("terminal count m must be at least 1".into()));
                }
                check_terminal_count(m).map_err(|e| err(e.to_string()))?;
                if nums.len() != m + 1 {
                    return Err(err(format!("expected {m} alphabet sizes, found {}", nums.len() - 1)));
                }
                if nums[1..].contains(&0) {
                    return Err(err("alphabet sizes must be positive".into()));
                }
                header = Some(nums[1..].to_vec());
                continue;
            };
            let m = sizes.len();
            if tokens.len() != m + 1 {
                return Err(err(format!("expected {m} symbols and a probability, found {} fields", tokens.len())));
            }
            let symbols: Vec<usize> = tokens[..m]
                .iter()
                .map(|t| t.parse().map_err(|_| err(format!("not a symbol index: {t:?}"))))
                .collect::<Result<_>>()?;
            validate_row(sizes, &symbols).map_err(err)?;
            if !seen.insert(symbols.clone()) {
                return Err(err(format!("duplicate outcome {symbols:?}")));
            }
            let ptok = tokens[m];
            let p = if ptok.contains('/') {
                let q = parse_rational(ptok).map_err(|e| err(e.to_string()))?;
                if q.is_negative() {
                    return Err(err(format!("negative probability {ptok}")));
                }
                if let Some(s) = exact_sum.as_mut() {
                    *s += &q;
                }
                rational_to_f64(&q)
            } else {
                let p: f64 = ptok.parse().map_err(|_| err(format!("not a probability: {ptok:?}")))?;
                if !(p.is_finite() && p >= 0.0) {
                    return Err(err(format!("invalid probability {ptok}")));
                }
                exact_sum = None;
                p
            };
            float_sum += p;
            rows.push((symbols, p));
        }
        let Some(sizes) = header else {
            return Err(Error::Parse { line: last_line.max(1), message: "missing header line".into() });
        };
        if rows.is_empty() {
            return Err(Error::Parse { line: last_line, message: "pmf has no outcomes".into() });
        }
        match exact_sum {
            Some(s) if !s.is_one() => {
                return Err(Error::Parse {
                    line: last_line,
                    message: format!("probabilities sum to {s}, not exactly 1"),
                })
            }
            None if (float_sum - 1.0).abs() > TOLERANCE => {
                return Err(Error::Parse {
                    line: last_line,
                    message: format!("probabilities sum to {float_sum}, not 1"),
                })
            }
            _ => {}
        }
        TabularSource::new(sizes, rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let sizes: Vec<String> = self.alphabet_sizes.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(out, "{} {}", self.alphabet_sizes.len(), sizes.join(" "));
        for (symbols, p) in &self.rows {
            let syms: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "{} {p}", syms.join(" "));
        }
        out
    }

    pub fn alphabet_sizes(&self) -> &[usize] {
        &self.alphabet_sizes
    }

    pub fn rows(&self) -> &[(Vec<usize>, f64)] {
        &self.rows
    }

    fn marginal(&self, coords: &[usize]) -> f64 {
        let mut mass: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (symbols, p) in &self.rows {
            let key = coords.iter().map(|&i| symbols[i - 1]).collect();
            *mass.entry(key).or_insert(0.0) += p;
        }
        shannon_entropy(mass.into_values())
    }

    /// One outcome per pmf row; the outcome key is the row index.
    pub fn materialize(&self) -> Result<JointDistribution> {
        let outcomes = self
            .rows
            .iter()
            .enumerate()
            .map(|(k, (symbols, p))| JointOutcome {
                key: k as u64,
                prob: *p,
                symbols: symbols.iter().map(|&s| s as u64).collect(),
            })
            .collect();
        JointDistribution::new(self.alphabet_sizes.len(), outcomes)
    }
}

fn validate_row(sizes: &[usize], symbols: &[usize]) -> std::result::Result<(), String> {
    if symbols.len() != sizes.len() {
        return Err(format!("expected {} symbols, found {}", sizes.len(), symbols.len()));
    }
    for (i, (&s, &a)) in symbols.iter().zip(sizes).enumerate() {
        if s >= a {
            return Err(format!("symbol {s} of terminal {} outside alphabet 0..{a}", i + 1));
        }
    }
    Ok(())
}

impl EntropyOracle for TabularSource {
    fn terminal_count(&self) -> usize {
        self.alphabet_sizes.len()
    }

    fn entropy(&self, set: TerminalSet) -> Bits {
        Bits::Approx(self.marginal(&set.to_vec()))
    }

    fn is_exact(&self) -> bool {
        false
    }
}

/// `I(X; Z | W)` for disjoint coordinate sets (1-based terminals) of a
/// tabular source, via `H(X,W) + H(Z,W) − H(X,Z,W) − H(W)`.
pub fn conditional_mutual_information(source: &TabularSource, x: &[usize], z: &[usize], w: &[usize]) -> Result<f64> {
    let m = source.terminal_count();
    let xs = TerminalSet::from_terminals(x, m)?;
    let zs = TerminalSet::from_terminals(z, m)?;
    let ws = TerminalSet::from_terminals(w, m)?;
    if xs.intersects(zs) || xs.intersects(ws) || zs.intersects(ws) {
        return Err(Error::InvalidArgument("coordinate sets must be disjoint".into()));
    }
    let h = |s: TerminalSet| source.marginal(&s.to_vec());
    Ok(h(xs.union(ws)) + h(zs.union(ws)) - h(xs.union(zs).union(ws)) - h(ws))
}

/// The hidden-bit source: `W ~ Ber(p)`, and given `W` the terminals draw
/// independent two-bit symbols whose first bit equals `W` and whose second
/// bit is fair. Symbol `2w + b` encodes the pair `(w, b)`. Every nonempty
/// `A` has `H(X_A) = |A| + h(p)`.
pub fn example1_source(m: usize, p: f64) -> Result<TabularSource> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("example1 needs m >= 2, got {m}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
    }
    if m > 20 {
        return Err(Error::CapExceeded { what: "example1 source", m, cap: 20 });
    }
    let weight = 0.5f64.powi(m as i32);
    let mut rows = Vec::new();
    for (w, pw) in [(0usize, 1.0 - p), (1, p)] {
        if pw == 0.0 {
            continue;
        }
        for free in 0..1usize << m {
            let symbols = (0..m).map(|i| 2 * w + ((free >> i) & 1)).collect();
            rows.push((symbols, pw * weight));
        }
    }
    TabularSource::new(vec![4; m], rows)
}
