use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::subset::{TerminalSet, MAX_TERMINALS};

/// A hypergraph on terminals `{1, …, m}` with a multiset of hyperedges.
///
/// Edges are kept in canonical lexicographic order of their ascending vertex
/// tuples; parallel copies of an edge stay adjacent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    m: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Validates and canonicalizes. Each edge may be given in any vertex
    /// order but must not repeat a vertex.
    pub fn new(m: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        if m > MAX_TERMINALS {
            return Err(Error::CapExceeded { what: "terminal count", m, cap: MAX_TERMINALS });
        }
        let mut canonical = Vec::with_capacity(edges.len());
        for mut edge in edges {
            if edge.is_empty() {
                return Err(Error::InvalidArgument("hyperedges must be nonempty".into()));
            }
            edge.sort_unstable();
            for w in edge.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::InvalidArgument(format!("repeated vertex {} in hyperedge", w[0])));
                }
            }
            if let Some(&v) = edge.iter().find(|&&v| v == 0 || v > m) {
                return Err(Error::TerminalOutOfRange { index: v, m });
            }
            canonical.push(edge);
        }
        canonical.sort();
        Ok(Hypergraph { m, edges: canonical })
    }

    /// Parses the hypergraph text format: `#` starts a comment, the first
    /// non-comment line holds `m`, and every following non-comment line is one
    /// hyperedge of strictly increasing 1-based vertices.
    pub fn parse(text: &str) -> Result<Self> {
        let mut m: Option<usize> = None;
        let mut edges = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: line_no, message };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let Some(m) = m else {
                if tokens.len() != 1 {
                    return Err(err(format!("expected the terminal count alone, found {content:?}")));
                }
                let value: usize = tokens[0]
                    .parse()
                    .map_err(|_| err(format!("terminal count is not a nonnegative integer: {:?}", tokens[0])))?;
                if value < 1 {
                    return Err(err("terminal count m must be at least 1".into()));
                }
                if value > MAX_TERMINALS {
                    return Err(err(format!("terminal count {value} exceeds the cap of {MAX_TERMINALS}")));
                }
                m = Some(value);
                continue;
            };
            let mut edge = Vec::with_capacity(tokens.len());
            for tok in tokens {
                let v: usize = tok.parse().map_err(|_| err(format!("not a vertex index: {tok:?}")))?;
                if v == 0 || v > m {
                    return Err(err(format!("vertex {v} out of range 1..={m}")));
                }
                if let Some(&prev) = edge.last() {
                    if v == prev || edge.contains(&v) {
                        return Err(err(format!("repeated vertex {v} in hyperedge")));
                    }
                    if v < prev {
                        return Err(err(format!("vertices must be strictly increasing ({prev} then {v})")));
                    }
                }
                edge.push(v);
            }
            edges.push(edge);
        }
        let Some(m) = m else {
            return Err(Error::Parse { line: last_line.max(1), message: "missing terminal count".into() });
        };
        if edges.is_empty() {
            return Err(Error::Parse { line: last_line, message: "hypergraph has no hyperedges".into() });
        }
        Hypergraph::new(m, edges)
    }

    /// Renders in the text format accepted by [`Hypergraph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.m);
        for e in &self.edges {
            let parts: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", parts.join(" "));
        }
        out
    }

    pub fn terminal_count(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_sets(&self) -> impl Iterator<Item = TerminalSet> + '_ {
        self.edges.iter().map(|e| {
            TerminalSet::from_bits(e.iter().fold(0u64, |acc, &v| acc | (1u64 << (v - 1))))
        })
    }

    /// `Some(t)` when every edge has exactly `t` vertices.
    pub fn uniformity(&self) -> Option<usize> {
        let t = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == t).then_some(t)
    }

    /// The complete `t`-uniform hypergraph `K_{m,t}`.
    pub fn complete_uniform(m: usize, t: usize) -> Result<Self> {
        if t < 1 || t > m {
            return Err(Error::InvalidArgument(format!("need 1 <= t <= m, got m={m}, t={t}")));
        }
        Hypergraph::new(m, combinations(m, t))
    }

    /// The cycle `1-2-…-m-1`.
    pub fn cycle(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidArgument(format!("cycle needs m >= 3, got {m}")));
        }
        Hypergraph::new(m, (1..=m).map(|i| vec![i, i % m + 1]).collect())
    }

    /// The path `1-2-…-m`.
    pub fn path(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("path needs m >= 2, got {m}")));
        }
        Hypergraph::new(m, (1..m).map(|i| vec![i, i + 1]).collect())
    }

    /// Harary graph `H_{k,m}`: the minimal `k`-connected graph on `m` vertices.
    pub fn harary(m: usize, k: usize) -> Result<Self> {
        if k < 2 || k >= m {
            return Err(Error::InvalidArgument(format!("harary needs 2 <= k < m, got m={m}, k={k}")));
        }
        let mut edges = std::collections::BTreeSet::new();
        let mut link = |a: usize, b: usize| {
            let (a, b) = (a % m + 1, b % m + 1);
            if a != b {
                edges.insert((a.min(b), a.max(b)));
            }
        };
        let r = k / 2;
        for i in 0..m {
            for d in 1..=r {
                link(i, i + d);
            }
        }
        if k % 2 == 1 {
            if m % 2 == 0 {
                for i in 0..m / 2 {
                    link(i, i + m / 2);
                }
            } else {
                for i in 0..=(m - 1) / 2 {
                    link(i, i + (m - 1) / 2);
                }
            }
        }
        Hypergraph::new(m, edges.into_iter().map(|(a, b)| vec![a, b]).collect())
    }

    /// Disjoint pairs: within consecutive blocks of `2 * stride` vertices,
    /// vertex `i` is paired with `i + stride`. `stride = 1` on `m = 4` gives
    /// edges (12),(34); `stride = 2` gives (13),(24).
    pub fn matching(m: usize, stride: usize) -> Result<Self> {
        if stride == 0 || m % (2 * stride) != 0 {
            return Err(Error::InvalidArgument(format!("matching needs m divisible by 2*stride, got m={m}, stride={stride}")));
        }
        let mut edges = Vec::new();
        for block in (0..m).step_by(2 * stride) {
            for i in 1..=stride {
                edges.push(vec![block + i, block + i + stride]);
            }
        }
        Hypergraph::new(m, edges)
    }
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `t`-subsets of `{1, …, m}` in lexicographic order.
pub fn combinations(m: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if t > m {
        return out;
    }
    let mut cur: Vec<usize> = (1..=t).collect();
    loop {
        out.push(cur.clone());
        // rightmost position that can still advance
        let Some(pos) = (0..t).rev().find(|&p| cur[p] < m - t + p + 1) else {
            break;
        };
        cur[pos] += 1;
        for q in pos + 1..t {
            cur[q] = cur[q - 1] + 1;
        }
    }
    out
}
