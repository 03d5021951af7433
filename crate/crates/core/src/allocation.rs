//! The allocation procedure on `K_{m,t}`: edge indexing, the `Q(i)`/`R(i)`
//! term decomposition, the availability table and its consumption.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{binomial, combinations};

/// Largest `m` for which edge tables are built.
pub const ALLOCATION_CAP: usize = 16;

/// The `C(m, t)` hyperedges of `K_{m,t}` indexed `1..=C(m,t)` in
/// lexicographic order of their sorted tuples.
#[derive(Clone, Debug)]
pub struct EdgeOrder {
    m: usize,
    t: usize,
    edges: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

pub fn edge_order(m: usize, t: usize) -> Result<EdgeOrder> {
    if t < 2 || t > m {
        return Err(Error::InvalidArgument(format!("need 2 <= t <= m, got m={m}, t={t}")));
    }
    if m > ALLOCATION_CAP {
        return Err(Error::CapExceeded { what: "edge order", m, cap: ALLOCATION_CAP });
    }
    let edges = combinations(m, t);
    let index = edges.iter().enumerate().map(|(k, e)| (e.clone(), k + 1)).collect();
    Ok(EdgeOrder { m, t, edges, index })
}

impl EdgeOrder {
    pub fn terminal_count(&self) -> usize {
        self.m
    }

    pub fn uniformity(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The edge with index `j` (1-based).
    pub fn edge(&self, j: usize) -> &[usize] {
        &self.edges[j - 1]
    }

    /// Index of a sorted tuple, if it is an edge.
    pub fn index_of(&self, edge: &[usize]) -> Option<usize> {
        self.index.get(edge).copied()
    }

    /// `(123)`, or `(1,2,10)` once terminal labels need two digits.
    pub fn label(&self, j: usize) -> String {
        let sep = if self.m >= 10 { "," } else { "" };
        let parts: Vec<String> = self.edge(j).iter().map(|v| v.to_string()).collect();
        format!("({})", parts.join(sep))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QRow {
    pub i: usize,
    /// Edges at `i` with no terminal below `i`.
    pub at_least: Vec<usize>,
    /// Edges at `i` with some terminal below `i`; these generate `Q(i)`.
    pub crossing: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RRow {
    pub i: usize,
    /// All edges containing `i`.
    pub edges: Vec<usize>,
}

/// Edge sets behind `Q(i)` for `2 <= i <= m − t + 1` and `R(i)` for
/// `m − t + 2 <= i <= m`, as edge indices.
#[derive(Clone, Debug, Serialize)]
pub struct TermDecomposition {
    pub m: usize,
    pub t: usize,
    pub q_rows: Vec<QRow>,
    pub r_rows: Vec<RRow>,
}

impl TermDecomposition {
    /// Number of `Q_e` terms generated by the `Q(i)` expansions.
    pub fn q_term_count(&self) -> usize {
        self.q_rows.iter().map(|r| r.crossing.len()).sum()
    }
}

pub fn term_decomposition(m: usize, t: usize) -> Result<TermDecomposition> {
    let order = edge_order(m, t)?;
    Ok(decompose(&order))
}

fn decompose(order: &EdgeOrder) -> TermDecomposition {
    let (m, t) = (order.m, order.t);
    let at = |i: usize| (1..=order.len()).filter(move |&j| order.edge(j).contains(&i));
    let q_rows = (2..=m + 1 - t)
        .map(|i| {
            let (at_least, crossing) = at(i).partition(|&j| order.edge(j)[0] >= i);
            QRow { i, at_least, crossing }
        })
        .collect();
    let r_rows = (m + 2 - t..=m).map(|i| RRow { i, edges: at(i).collect() }).collect();
    TermDecomposition { m, t, q_rows, r_rows }
}

/// One allocation: the `Q_e` term of edge `edge` generated by `Q(source)` is
/// assigned to `R(target)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Allocation {
    pub edge_index: usize,
    pub edge: Vec<usize>,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "state", rename_all = "lowercase")]
pub enum AllocationStatus {
    Done,
    /// No available row for edge `j` while serving `R(i)`.
    Error { i: usize, j: usize },
}

/// Availability table with rows `k = 2..=m−t+1` and columns `j = 1..=C(m,t)`.
pub type Table = Vec<Vec<bool>>;

#[derive(Clone, Debug)]
pub struct AllocationState {
    order: EdgeOrder,
    initial: Table,
    table: Table,
    allocations: Vec<Allocation>,
    status: AllocationStatus,
}

/// Runs the allocation procedure literally: for `i = m−t+2..=m` and `j`
/// ascending, skip edges containing `i`; otherwise consume the smallest
/// available row `k`, or stop with an error when none is left.
pub fn run_allocation(m: usize, t: usize) -> Result<AllocationState> {
    if t < 2 || t + 1 > m {
        return Err(Error::InvalidArgument(format!("allocation needs 2 <= t <= m − 1, got m={m}, t={t}")));
    }
    let order = edge_order(m, t)?;
    let rows = m + 1 - t;
    let initial: Table = (2..=rows)
        .map(|k| (1..=order.len()).map(|j| order.edge(j).contains(&k) && order.edge(j)[0] < k).collect())
        .collect();
    let mut table = initial.clone();
    let mut allocations = Vec::new();
    let mut status = AllocationStatus::Done;

    let mut i = m + 2 - t;
    let mut j = 1;
    'outer: while i <= m && j <= order.len() {
        if !order.edge(j).contains(&i) {
            let mut k = 2;
            while k <= rows {
                if table[k - 2][j - 1] {
                    allocations.push(Allocation { edge_index: j, edge: order.edge(j).to_vec(), source: k, target: i });
                    table[k - 2][j - 1] = false;
                    break;
                }
                if k == rows {
                    status = AllocationStatus::Error { i, j };
                    break 'outer;
                }
                k += 1;
            }
        }
        j += 1;
        if j == order.len() + 1 {
            i += 1;
            j = 1;
        }
    }
    Ok(AllocationState { order, initial, table, allocations, status })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub claim1_ok: bool,
    pub claim2_ok: bool,
}

impl AllocationState {
    pub fn order(&self) -> &EdgeOrder {
        &self.order
    }

    pub fn status(&self) -> &AllocationStatus {
        &self.status
    }

    pub fn allocations(&self) -> &[Allocation] {
        &self.allocations
    }

    pub fn initial_table(&self) -> &Table {
        &self.initial
    }

    pub fn final_table(&self) -> &Table {
        &self.table
    }

    /// The table after each consumption, in order, replayed from the
    /// initial table and the allocation log.
    pub fn snapshots(&self) -> impl Iterator<Item = Table> + '_ {
        let mut table = self.initial.clone();
        self.allocations.iter().map(move |a| {
            table[a.source - 2][a.edge_index - 1] = false;
            table.clone()
        })
    }

    /// `Q_(123) from Q(2) -> R(4)`.
    pub fn trace_line(&self, a: &Allocation) -> String {
        format!("Q_{} from Q({}) -> R({})", self.order.label(a.edge_index), a.source, a.target)
    }

    /// The table in row/column layout: a header of column indices, then one
    /// line per row `k` of 0/1 entries.
    pub fn render_table(&self, table: &Table) -> String {
        let width = self.order.len().to_string().len();
        let row_width = (self.order.m + 1 - self.order.t).to_string().len();
        let mut out = String::new();
        let _ = write!(out, "{:>row_width$} |", "");
        for j in 1..=self.order.len() {
            let _ = write!(out, " {j:>width$}");
        }
        out.push('\n');
        for (r, row) in table.iter().enumerate() {
            let _ = write!(out, "{:>row_width$} |", r + 2);
            for &cell in row {
                let _ = write!(out, " {:>width$}", u8::from(cell));
            }
            out.push('\n');
        }
        out
    }

    /// Checks the run against the counting claims: it never stopped with an
    /// error, it consumed every initially available term exactly once, and
    /// each `R(i)` received exactly the `C(m−1, t)` edges avoiding `i`.
    pub fn verify_claims(&self) -> ClaimCheck {
        let (m, t) = (self.order.m, self.order.t);
        let claim1_ok = self.status == AllocationStatus::Done;

        let available: BTreeSet<(usize, usize)> = self
            .initial
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().filter(|(_, &c)| c).map(move |(c, _)| (r + 2, c + 1)))
            .collect();
        let consumed: Vec<(usize, usize)> = self.allocations.iter().map(|a| (a.source, a.edge_index)).collect();
        let consumed_set: BTreeSet<(usize, usize)> = consumed.iter().copied().collect();
        let exhausted = consumed.len() == consumed_set.len()
            && consumed_set == available
            && consumed.len() as u128 == (t as u128 - 1) * binomial(m - 1, t);

        let needed = binomial(m - 1, t);
        let served = (m + 2 - t..=m).all(|i| {
            let got: Vec<usize> = self.allocations.iter().filter(|a| a.target == i).map(|a| a.edge_index).collect();
            let want: Vec<usize> = (1..=self.order.len()).filter(|&j| !self.order.edge(j).contains(&i)).collect();
            got == want && got.len() as u128 == needed
        });
        ClaimCheck { claim1_ok, claim2_ok: exhausted && served }
    }
}

/// [`AllocationState::verify_claims`].
pub fn verify_claims(state: &AllocationState) -> ClaimCheck {
    state.verify_claims()
}
