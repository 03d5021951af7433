//! Secret-key capacity by partition minimization and by linear programming.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::bits::{rational_string, Bits};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpFailure};
use crate::model::{club, EntropyOracle, EntropyTable, FunctionObservable};
use crate::partitions::{enumerate_partitions, enumerate_partitions_uncapped, Partition, Partitions};
use crate::subset::TerminalSet;

pub const DEFAULT_MINIMIZER_LIMIT: usize = 64;

/// Largest `m` accepted by the LP routines (`2^m − 2` variables).
pub const LP_CAP: usize = 10;

/// Largest `m` accepted by [`lambda_tilde`].
pub const LAMBDA_TILDE_CAP: usize = 20;

/// Tolerance for comparing LP optima on approximate sources.
pub const LP_TOLERANCE: f64 = 1e-7;

const CHUNK: usize = 1 << 14;

#[derive(Clone, Copy, Debug)]
pub struct CapacityOptions {
    /// Maximum number of minimizing partitions kept; `None` keeps all.
    pub minimizer_limit: Option<usize>,
    /// Lift the partition-enumeration cap.
    pub uncapped: bool,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        CapacityOptions { minimizer_limit: Some(DEFAULT_MINIMIZER_LIMIT), uncapped: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CapacityReport {
    pub i_capacity: Bits,
    pub r_co: Bits,
    #[serde(skip)]
    pub total_entropy: Bits,
    pub minimizers: Vec<Partition>,
    pub minimizer_count: usize,
    pub truncated: bool,
    pub lp_value: Option<Bits>,
    pub lambda: Option<LambdaVector>,
}

impl CapacityReport {
    /// Fills `lp_value` and `lambda` from [`lp_capacity`].
    pub fn with_lp(mut self, lp: LpCapacity) -> Self {
        self.lp_value = Some(lp.value);
        self.lambda = Some(lp.witness);
        self
    }
}

trait Evaluator: Sync {
    type Value: Send + Clone;
    fn eval(&self, cells: &[TerminalSet]) -> Self::Value;
    fn strict_cmp(&self, a: &Self::Value, b: &Self::Value) -> Ordering;
    fn ties(&self, a: &Self::Value, min: &Self::Value) -> bool;
    fn to_bits(&self, v: &Self::Value) -> Bits;
}

/// Integer entropies (PIN models): Δ is the fraction `num/den`.
struct IntegerEval {
    values: Vec<i64>,
    total: i64,
}

impl Evaluator for IntegerEval {
    type Value = (i64, i64);

    fn eval(&self, cells: &[TerminalSet]) -> (i64, i64) {
        let sum: i64 = cells.iter().map(|c| self.values[c.bits() as usize]).sum();
        (sum - self.total, cells.len() as i64 - 1)
    }

    fn strict_cmp(&self, a: &(i64, i64), b: &(i64, i64)) -> Ordering {
        (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128))
    }

    fn ties(&self, a: &(i64, i64), min: &(i64, i64)) -> bool {
        self.strict_cmp(a, min) == Ordering::Equal
    }

    fn to_bits(&self, v: &(i64, i64)) -> Bits {
        Bits::ratio(v.0, v.1)
    }
}

struct GeneralEval {
    table: EntropyTable,
    total: Bits,
}

impl Evaluator for GeneralEval {
    type Value = Bits;

    fn eval(&self, cells: &[TerminalSet]) -> Bits {
        let sum = cells.iter().fold(Bits::zero(), |acc, c| &acc + &self.table.values()[c.bits() as usize]);
        (&sum - &self.total).div_int(cells.len() as i64 - 1)
    }

    fn strict_cmp(&self, a: &Bits, b: &Bits) -> Ordering {
        a.cmp_with(b, 0.0)
    }

    fn ties(&self, a: &Bits, min: &Bits) -> bool {
        a.approx_eq(min)
    }

    fn to_bits(&self, v: &Bits) -> Bits {
        v.clone()
    }
}

/// Evaluates chunks of partitions in parallel and visits them in enumeration
/// order, so the visitor sees a schedule-independent sequence.
fn scan<E: Evaluator>(parts: Partitions, eval: &E, mut visit: impl FnMut(Partition, E::Value)) {
    let mut chunk: Vec<Partition> = Vec::with_capacity(CHUNK);
    let mut flush = |chunk: &mut Vec<Partition>| {
        let values: Vec<E::Value> = chunk.par_iter().map(|p| eval.eval(p.cells())).collect();
        for (p, v) in chunk.drain(..).zip(values) {
            visit(p, v);
        }
    };
    for p in parts {
        chunk.push(p);
        if chunk.len() == CHUNK {
            flush(&mut chunk);
        }
    }
    flush(&mut chunk);
}

struct Minimum {
    value: Bits,
    minimizers: Vec<Partition>,
    count: usize,
}

fn minimize<E: Evaluator>(m: usize, eval: &E, opts: &CapacityOptions) -> Result<Minimum> {
    let enumerate = |m| if opts.uncapped { enumerate_partitions_uncapped(m, 2) } else { enumerate_partitions(m, 2) };
    let mut best: Option<E::Value> = None;
    scan(enumerate(m)?, eval, |_, v| {
        if best.as_ref().is_none_or(|b| eval.strict_cmp(&v, b) == Ordering::Less) {
            best = Some(v);
        }
    });
    let best = best.ok_or_else(|| Error::Internal("no partition with two cells".into()))?;
    let mut minimizers = Vec::new();
    let mut count = 0;
    scan(enumerate(m)?, eval, |p, v| {
        if eval.ties(&v, &best) {
            count += 1;
            if opts.minimizer_limit.is_none_or(|lim| minimizers.len() < lim) {
                minimizers.push(p);
            }
        }
    });
    Ok(Minimum { value: eval.to_bits(&best), minimizers, count })
}

fn integer_values(table: &EntropyTable) -> Option<Vec<i64>> {
    if !table.is_exact() {
        return None;
    }
    table
        .values()
        .iter()
        .map(|b| {
            let q = b.as_exact()?;
            if !q.is_integer() {
                return None;
            }
            q.numer().to_i64().filter(|v| v.abs() < 1 << 40)
        })
        .collect()
}

/// `I(X_M)` as the minimum of `Δ(P)` over partitions with at least two
/// cells, together with `R_CO = H(X_M) − I(X_M)`.
pub fn sk_capacity(oracle: &dyn EntropyOracle, opts: &CapacityOptions) -> Result<CapacityReport> {
    let m = oracle.terminal_count();
    if m < 2 {
        return Err(Error::Precondition("secret-key capacity needs at least two terminals".into()));
    }
    if !opts.uncapped {
        // surface the enumeration cap before building the table
        enumerate_partitions(m, 2)?;
    }
    let table = EntropyTable::new(oracle)?;
    let total = table.total_entropy();
    let min = match integer_values(&table) {
        Some(values) => {
            let total = *values.last().unwrap_or(&0);
            minimize(m, &IntegerEval { values, total }, opts)?
        }
        None => minimize(m, &GeneralEval { table, total: total.clone() }, opts)?,
    };
    if min.value.is_negative_tol() {
        return Err(Error::Internal(format!("negative capacity {}: oracle is not submodular", min.value)));
    }
    let truncated = min.count > min.minimizers.len();
    Ok(CapacityReport {
        r_co: &total - &min.value,
        i_capacity: min.value,
        total_entropy: total,
        minimizers: min.minimizers,
        minimizer_count: min.count,
        truncated,
        lp_value: None,
        lambda: None,
    })
}

/// A fractional partition: nonnegative weights on nonempty proper subsets.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaVector {
    m: usize,
    weights: BTreeMap<TerminalSet, BigRational>,
}

impl LambdaVector {
    /// Zero weights are dropped. Rejects empty, full, out-of-range sets and
    /// negative weights.
    pub fn new(m: usize, weights: impl IntoIterator<Item = (TerminalSet, BigRational)>) -> Result<Self> {
        let full = TerminalSet::full(m);
        let mut map = BTreeMap::new();
        for (b, w) in weights {
            if b.is_empty() || b == full || !b.is_subset_of(full) {
                return Err(Error::InvalidArgument(format!("{{{b}}} is not a nonempty proper subset of 1..={m}")));
            }
            if w.is_negative() {
                return Err(Error::InvalidArgument(format!("negative weight on {{{b}}}")));
            }
            if !w.is_zero() {
                *map.entry(b).or_insert_with(BigRational::zero) += w;
            }
        }
        Ok(LambdaVector { m, weights: map })
    }

    pub fn terminal_count(&self) -> usize {
        self.m
    }

    pub fn weights(&self) -> &BTreeMap<TerminalSet, BigRational> {
        &self.weights
    }

    pub fn get(&self, b: TerminalSet) -> BigRational {
        self.weights.get(&b).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Every terminal is covered with total weight exactly one.
    pub fn is_fractional_partition(&self) -> bool {
        (1..=self.m).all(|i| {
            let cover: BigRational = self.weights.iter().filter(|(b, _)| b.contains(i)).map(|(_, w)| w).sum();
            cover == one()
        })
    }
}

impl Serialize for LambdaVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.weights.len()))?;
        for (b, w) in &self.weights {
            map.serialize_entry(&b.to_string(), &rational_string(w))?;
        }
        map.end()
    }
}

fn one() -> BigRational {
    BigRational::from_integer(BigInt::from(1))
}

/// `λ̃_B = 1/(m−1)` for `|B| = m−1`, zero elsewhere.
pub fn lambda_tilde(m: usize) -> Result<LambdaVector> {
    if m < 2 {
        return Err(Error::InvalidArgument("λ̃ needs m >= 2".into()));
    }
    if m > LAMBDA_TILDE_CAP {
        return Err(Error::CapExceeded { what: "lambda_tilde", m, cap: LAMBDA_TILDE_CAP });
    }
    let w = BigRational::new(BigInt::from(1), BigInt::from(m as i64 - 1));
    LambdaVector::new(m, (1..=m).map(|i| (TerminalSet::singleton(i).complement(m), w.clone())))
}

#[derive(Clone, Debug, Serialize)]
pub struct LpCapacity {
    pub value: Bits,
    pub witness: LambdaVector,
}

/// Variables are the nonempty proper subsets in bitmask order; constraint
/// rows cover each terminal once. The objective weight of `B` is
/// `H(X_B | X_{B^c}) = H(X_M) − H(X_{B^c})`.
struct CapacityProgram {
    subsets: Vec<TerminalSet>,
    gains: Vec<BigRational>,
    total: BigRational,
    program: LinearProgram,
}

impl CapacityProgram {
    fn build(oracle: &dyn EntropyOracle) -> Result<Self> {
        let m = oracle.terminal_count();
        if m < 2 {
            return Err(Error::Precondition("the capacity LP needs at least two terminals".into()));
        }
        if m > LP_CAP {
            return Err(Error::CapExceeded { what: "capacity LP", m, cap: LP_CAP });
        }
        let table = EntropyTable::new(oracle)?;
        let h = |b: TerminalSet| table.values()[b.bits() as usize].to_rational();
        let total = h(TerminalSet::full(m));
        let subsets: Vec<TerminalSet> = (1..(1u64 << m) - 1).map(TerminalSet::from_bits).collect();
        let gains: Vec<BigRational> = subsets.iter().map(|&b| &total - h(b.complement(m))).collect();
        let mut program = LinearProgram::new(gains.clone());
        for i in 1..=m {
            let row = subsets.iter().map(|b| if b.contains(i) { one() } else { BigRational::zero() }).collect();
            program.add_equality(row, one());
        }
        Ok(CapacityProgram { subsets, gains, total, program })
    }

    fn witness(&self, m: usize, x: Vec<BigRational>) -> Result<LambdaVector> {
        LambdaVector::new(m, self.subsets.iter().copied().zip(x))
    }
}

fn lp_error(e: LpFailure) -> Error {
    Error::Internal(format!("capacity LP reported {e:?}; the fractional partition λ̃ is always feasible"))
}

fn to_bits(q: BigRational, exact: bool) -> Bits {
    if exact {
        Bits::Exact(q)
    } else {
        Bits::Approx(crate::bits::rational_to_f64(&q))
    }
}

/// `I(X_M) = H(X_M) − max_{λ∈Λ} Σ_B λ_B H(X_B | X_{B^c})`, with an optimal λ.
pub fn lp_capacity(oracle: &dyn EntropyOracle) -> Result<LpCapacity> {
    let cp = CapacityProgram::build(oracle)?;
    let sol = cp.program.maximize().map_err(lp_error)?;
    let value = &cp.total - &sol.value;
    Ok(LpCapacity { value: to_bits(value, oracle.is_exact()), witness: cp.witness(oracle.terminal_count(), sol.x)? })
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaCheck {
    pub feasible: bool,
    pub objective: Bits,
    pub optimal: bool,
    pub lp_value: Bits,
}

/// Checks feasibility of `lambda`, evaluates
/// `H(X_M) − Σ_B λ_B H(X_B | X_{B^c})` and compares it with the LP optimum.
pub fn verify_lambda(oracle: &dyn EntropyOracle, lambda: &LambdaVector) -> Result<LambdaCheck> {
    let m = oracle.terminal_count();
    if lambda.terminal_count() != m {
        return Err(Error::MismatchedTerminals { left: lambda.terminal_count(), right: m });
    }
    let cp = CapacityProgram::build(oracle)?;
    let gained: BigRational = cp
        .subsets
        .iter()
        .zip(&cp.gains)
        .filter_map(|(b, g)| lambda.weights.get(b).map(|w| w * g))
        .sum();
    let objective = &cp.total - gained;
    let lp = &cp.total - cp.program.maximize().map_err(lp_error)?.value;
    let feasible = lambda.is_fractional_partition();
    let exact = oracle.is_exact();
    let optimal = feasible
        && if exact {
            objective == lp
        } else {
            to_bits(objective.clone(), false).cmp_with(&to_bits(lp.clone(), false), LP_TOLERANCE) == Ordering::Equal
        };
    Ok(LambdaCheck { feasible, objective: to_bits(objective, exact), optimal, lp_value: to_bits(lp, exact) })
}

/// `I(X_M | L) = H(X_M | L) − min_{λ∈Λ*} Σ_B λ_B H(X_B | X_{B^c}, L)` for a
/// single observation, where `Λ*` is the optimal face of the capacity LP.
pub fn conditional_sk_value(obs: &FunctionObservable) -> Result<Bits> {
    let source = obs.source().as_ref();
    let m = source.terminal_count();
    let cp = CapacityProgram::build(source)?;
    let optimum = cp.program.maximize().map_err(lp_error)?.value;

    let full = TerminalSet::full(m);
    let h_ml = obs.entropy_with_label(full);
    let losses: Vec<BigRational> = cp
        .subsets
        .iter()
        .map(|b| rational(h_ml - obs.entropy_with_label(b.complement(m))))
        .collect();
    let mut face = LinearProgram::new(losses.iter().map(|d| -d).collect());
    face.rows = cp.program.rows.clone();
    face.rhs = cp.program.rhs.clone();
    face.add_equality(cp.gains.clone(), optimum);
    let sol = face.maximize().map_err(lp_error)?;
    let h_m_given_l = rational(h_ml - obs.label_entropy());
    Ok(Bits::Approx(crate::bits::rational_to_f64(&(h_m_given_l + sol.value))))
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClubRelation {
    pub i_x: Bits,
    pub i_y: Bits,
    pub i_z: Bits,
    /// `I(Z) = I(X) + I(Y)`.
    pub equality: bool,
    /// The minimizer sets of `X` and `Y` intersect.
    pub shared_minimizer: bool,
    /// `I(Z) >= I(X) + I(Y)`.
    pub superadditive: bool,
}

impl ClubRelation {
    /// Equality holds exactly when a minimizer is shared.
    pub fn consistent(&self) -> bool {
        self.superadditive && self.equality == self.shared_minimizer
    }
}

/// Capacities of `X`, `Y` and their clubbed source `Z`.
pub fn club_relation(x: Arc<dyn EntropyOracle>, y: Arc<dyn EntropyOracle>) -> Result<ClubRelation> {
    let z = club(x.clone(), y.clone())?;
    let opts = CapacityOptions { minimizer_limit: None, uncapped: false };
    let rx = sk_capacity(x.as_ref(), &opts)?;
    let ry = sk_capacity(y.as_ref(), &opts)?;
    let rz = sk_capacity(&z, &opts)?;
    let sum = &rx.i_capacity + &ry.i_capacity;
    let shared_set: BTreeSet<Vec<TerminalSet>> = rx.minimizers.iter().map(|p| p.cells().to_vec()).collect();
    let shared_minimizer = ry.minimizers.iter().any(|p| shared_set.contains(p.cells()));
    Ok(ClubRelation {
        equality: rz.i_capacity.approx_eq(&sum),
        superadditive: rz.i_capacity.cmp_tol(&sum) != Ordering::Less,
        shared_minimizer,
        i_x: rx.i_capacity,
        i_y: ry.i_capacity,
        i_z: rz.i_capacity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::binary_entropy;
    use crate::model::{example1_source, Hypergraph, PinSource};
    use crate::partitions::{delta, enumerate_partitions};

    fn pin(m: usize, edges: Vec<Vec<usize>>) -> PinSource {
        PinSource::new(Hypergraph::new(m, edges).unwrap())
    }

    fn complete(m: usize, t: usize) -> PinSource {
        PinSource::new(Hypergraph::complete_uniform(m, t).unwrap())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Direct minimum over every partition through the public Δ.
    fn brute_minimum(oracle: &dyn EntropyOracle) -> Bits {
        enumerate_partitions(oracle.terminal_count(), 2)
            .unwrap()
            .map(|p| delta(oracle, &p).unwrap())
            .reduce(|a, b| if b.cmp_with(&a, 0.0) == Ordering::Less { b } else { a })
            .unwrap()
    }

    #[test]
    fn k53_capacity() {
        let k53 = complete(5, 3);
        let r = sk_capacity(&k53, &CapacityOptions::default()).unwrap();
        assert_eq!(r.i_capacity.as_exact(), Some(&q(5, 1)));
        assert_eq!(r.r_co.as_exact(), Some(&q(5, 1)));
        assert_eq!(r.i_capacity.as_exact(), brute_minimum(&k53).as_exact());
        assert_eq!(r.minimizers.len(), 1);
        assert!(r.minimizers[0].is_singleton_partition());
    }

    #[test]
    fn single_edge() {
        let r = sk_capacity(&pin(2, vec![vec![1, 2]]), &CapacityOptions::default()).unwrap();
        assert_eq!(r.i_capacity.as_exact(), Some(&q(1, 1)));
        assert_eq!(r.r_co.as_exact(), Some(&q(0, 1)));
    }

    #[test]
    fn example1_all_partitions_minimize() {
        let src = example1_source(3, 0.5).unwrap();
        let r = sk_capacity(&src, &CapacityOptions::default()).unwrap();
        assert!((r.i_capacity.to_f64() - 1.0).abs() < 1e-9);
        assert!((r.r_co.to_f64() - 3.0).abs() < 1e-9);
        assert_eq!(r.minimizers.len(), 4);
        assert!(!r.truncated);
    }

    #[test]
    fn truncation_keeps_canonical_prefix() {
        let src = example1_source(5, 0.25).unwrap();
        let all = sk_capacity(&src, &CapacityOptions { minimizer_limit: None, uncapped: false }).unwrap();
        let few = sk_capacity(&src, &CapacityOptions { minimizer_limit: Some(3), uncapped: false }).unwrap();
        assert_eq!(all.minimizer_count, 51);
        assert_eq!(all.minimizers.len(), 51);
        assert_eq!(few.minimizer_count, 51);
        assert!(few.truncated);
        assert_eq!(few.minimizers, all.minimizers[..3].to_vec());
        assert!((all.i_capacity.to_f64() - binary_entropy(0.25)).abs() < 1e-9);
    }

    #[test]
    fn one_terminal_rejected() {
        let err = sk_capacity(&pin(1, vec![vec![1]]), &CapacityOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn cap_enforced() {
        let err = sk_capacity(&complete(13, 2), &CapacityOptions::default()).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { m: 13, .. }));
    }

    #[test]
    fn lp_examples() {
        let lp = lp_capacity(&complete(3, 2)).unwrap();
        assert_eq!(lp.value.as_exact(), Some(&q(3, 2)));
        assert!(lp.witness.is_fractional_partition());
        assert_eq!(lp_capacity(&pin(3, vec![])).unwrap().value.as_exact(), Some(&q(0, 1)));
        assert_eq!(lp_capacity(&complete(5, 3)).unwrap().value.as_exact(), Some(&q(5, 1)));
        let err = lp_capacity(&complete(11, 2)).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { m: 11, .. }));
    }

    #[test]
    fn lp_witness_attains_value() {
        let src = pin(4, vec![vec![1, 2], vec![2, 3], vec![3, 4], vec![1, 2, 4]]);
        let lp = lp_capacity(&src).unwrap();
        let check = verify_lambda(&src, &lp.witness).unwrap();
        assert!(check.feasible && check.optimal);
        assert_eq!(check.objective.as_exact(), lp.value.as_exact());
        assert_eq!(lp.value.as_exact(), brute_minimum(&src).as_exact());
    }

    #[test]
    fn lambda_tilde_small() {
        let lt = lambda_tilde(3).unwrap();
        let expected: Vec<(String, BigRational)> =
            vec![("1,2".into(), q(1, 2)), ("1,3".into(), q(1, 2)), ("2,3".into(), q(1, 2))];
        let got: Vec<(String, BigRational)> = lt.weights().iter().map(|(b, w)| (b.to_string(), w.clone())).collect();
        assert_eq!(got, expected);
        assert!(lt.is_fractional_partition());
        assert!(lambda_tilde(1).is_err());
        assert!(lambda_tilde(21).is_err());
    }

    #[test]
    fn verify_lambda_examples() {
        let k53 = complete(5, 3);
        let check = verify_lambda(&k53, &lambda_tilde(5).unwrap()).unwrap();
        assert!(check.feasible && check.optimal);
        assert_eq!(check.objective.as_exact(), Some(&q(5, 1)));

        let split = pin(4, vec![vec![1, 2], vec![3, 4]]);
        let check = verify_lambda(&split, &lambda_tilde(4).unwrap()).unwrap();
        assert!(check.feasible && !check.optimal);
        assert_eq!(check.objective.as_exact(), Some(&q(2, 3)));
        assert_eq!(check.lp_value.as_exact(), Some(&q(0, 1)));

        let err = verify_lambda(&split, &lambda_tilde(3).unwrap()).unwrap_err();
        assert_eq!(err, Error::MismatchedTerminals { left: 3, right: 4 });
    }

    #[test]
    fn infeasible_lambda_is_not_optimal() {
        let k3 = complete(3, 2);
        let lambda = LambdaVector::new(3, [(TerminalSet::from_bits(0b011), q(1, 1))]).unwrap();
        let check = verify_lambda(&k3, &lambda).unwrap();
        assert!(!check.feasible && !check.optimal);
        assert!(LambdaVector::new(3, [(TerminalSet::full(3), q(1, 1))]).is_err());
        assert!(LambdaVector::new(3, [(TerminalSet::singleton(1), q(-1, 1))]).is_err());
    }

    #[test]
    fn lambda_json_is_sparse_map() {
        let json = serde_json::to_string(&lambda_tilde(3).unwrap()).unwrap();
        assert_eq!(json, r#"{"1,2":"1/2","1,3":"1/2","2,3":"1/2"}"#);
    }

    #[test]
    fn report_json_fields() {
        let r = sk_capacity(&complete(3, 2), &CapacityOptions::default()).unwrap();
        let r = r.with_lp(lp_capacity(&complete(3, 2)).unwrap());
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["i_capacity"], "3/2");
        assert_eq!(v["r_co"], "3/2");
        assert_eq!(v["lp_value"], "3/2");
        assert_eq!(v["minimizers"], serde_json::json!([[[1], [2], [3]]]));
        assert!(v["lambda"].is_object());
    }

    fn observable(src: PinSource, map: impl Fn(u64) -> u64) -> FunctionObservable {
        let joint = Arc::new(src.materialize().unwrap());
        FunctionObservable::from_fn(Arc::new(src), joint, |o| map(o.key)).unwrap()
    }

    #[test]
    fn conditional_value_extremes() {
        let constant = conditional_sk_value(&observable(complete(5, 3), |_| 0)).unwrap();
        assert!((constant.to_f64() - 5.0).abs() < 1e-9);
        let identity = conditional_sk_value(&observable(complete(5, 3), |k| k)).unwrap();
        assert!(identity.to_f64().abs() < 1e-9);
    }

    #[test]
    fn conditional_value_triangle_edge() {
        // edge 0 of the triangle is (12)
        let v = conditional_sk_value(&observable(complete(3, 2), |k| k & 1)).unwrap();
        assert!(v.to_f64() >= 1.0 - 1e-9);
        assert!((v.to_f64() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn club_examples() {
        let one_edge = || Arc::new(pin(2, vec![vec![1, 2]])) as Arc<dyn EntropyOracle>;
        let r = club_relation(one_edge(), one_edge()).unwrap();
        assert_eq!(r.i_z.as_exact(), Some(&q(2, 1)));
        assert!(r.equality && r.shared_minimizer && r.consistent());

        let x = Arc::new(pin(4, vec![vec![1, 2], vec![3, 4]]));
        let y = Arc::new(pin(4, vec![vec![1, 3], vec![2, 4]]));
        let r = club_relation(x, y).unwrap();
        assert_eq!(r.i_x.as_exact(), Some(&q(0, 1)));
        assert_eq!(r.i_y.as_exact(), Some(&q(0, 1)));
        assert_eq!(r.i_z.as_exact(), Some(&q(4, 3)));
        assert!(!r.equality && !r.shared_minimizer && r.consistent());

        let x = Arc::new(example1_source(3, 0.5).unwrap());
        let r = club_relation(x, Arc::new(complete(3, 2))).unwrap();
        assert!((r.i_z.to_f64() - 2.5).abs() < 1e-9);
        assert!(r.equality && r.shared_minimizer);
    }
}
