//! The Type-S test, closed forms for complete uniform hypergraphs, `R_SK`
//! for Type-S uniform PIN models, and an empirical check of the
//! mutual-information bound `Σ_i I(X_i; L) <= t·H(L)`.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{Bits, TOLERANCE};
use crate::capacity::{sk_capacity, CapacityOptions};
use crate::error::{Error, Result};
use crate::model::{binomial, observable_stats, EntropyOracle, FunctionObservable, Hypergraph, PinSource};
use crate::partitions::ENUMERATION_CAP;
use crate::subset::TerminalSet;

/// Largest `m` accepted by [`is_type_s`] (sweeps `2^m` subsets).
pub const TYPE_S_CAP: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct TypeSVerdict {
    pub is_minimizer: bool,
    pub is_unique: bool,
    /// The lexicographically smallest `B ∈ Ω` minimizing `Δ(P_B) − Δ(S)`,
    /// reported when that gap is zero or negative.
    #[serde(rename = "worst_B")]
    pub worst_b: Option<TerminalSet>,
    /// `min_{B∈Ω} Δ(P_B) − Δ(S)`; absent when `Ω` is empty (`m = 2`).
    pub min_gap: Option<Bits>,
    pub delta_s: Bits,
}

/// Gap `Δ(P_B) − Δ(S)` scaled by `|B|(m−1)`; exact for integer entropies.
fn integer_gap(m: usize, singles: &[i64], total: i64, sum_all: i64, b: TerminalSet, h_bc: i64) -> (i64, i64) {
    let sum_b: i64 = b.iter().map(|i| singles[i - 1]).sum();
    let k = b.len() as i64;
    let mm = m as i64 - 1;
    (mm * (sum_b + h_bc - total) - k * (sum_all - total), k * mm)
}

fn omega(m: usize) -> impl ParallelIterator<Item = TerminalSet> {
    (1u64..(1u64 << m) - 1)
        .into_par_iter()
        .filter(move |b| (b.count_ones() as usize) <= m - 2)
        .map(TerminalSet::from_bits)
}

fn lex_min(a: TerminalSet, b: TerminalSet) -> TerminalSet {
    if b.lex_cmp(a).is_lt() {
        b
    } else {
        a
    }
}

fn as_int(b: &Bits) -> Option<i64> {
    let q = b.as_exact()?;
    q.is_integer().then(|| q.numer().to_i64()).flatten()
}

/// Decides whether the singleton partition `S` minimizes `Δ`, by comparing
/// `Δ(S)` with `Δ(P_B)` for every `B` with `1 <= |B| <= m − 2`.
pub fn is_type_s(oracle: &dyn EntropyOracle) -> Result<TypeSVerdict> {
    let m = oracle.terminal_count();
    if m < 3 {
        return Err(Error::Precondition(format!(
            "the Type-S test needs m >= 3 (got m = {m}); inspect the capacity minimizers instead"
        )));
    }
    if m > TYPE_S_CAP {
        return Err(Error::CapExceeded { what: "Type-S test", m, cap: TYPE_S_CAP });
    }
    let singles: Vec<Bits> = (1..=m).map(|i| oracle.entropy(TerminalSet::singleton(i))).collect();
    let total = oracle.total_entropy();
    let sum_all = Bits::sum(&singles);
    let delta_s = (&sum_all - &total).div_int(m as i64 - 1);
    let full = TerminalSet::full(m);

    let int_singles: Option<Vec<i64>> = singles.iter().map(as_int).collect();
    let int_total = as_int(&total);
    let (min_gap, argmin) = match (int_singles, int_total, oracle.is_exact()) {
        (Some(singles), Some(total), true) => {
            let sum_all: i64 = singles.iter().sum();
            let gap = |b: TerminalSet| {
                let h_bc = as_int(&oracle.entropy(b.complement(m)))?;
                Some(integer_gap(m, &singles, total, sum_all, b, h_bc))
            };
            let cmp = |a: &(i64, i64), b: &(i64, i64)| (a.0 as i128 * b.1 as i128).cmp(&(b.0 as i128 * a.1 as i128));
            let gaps: Option<Vec<(i64, i64)>> = omega(m).map(gap).collect();
            let gaps = gaps.ok_or_else(|| Error::Internal("exact oracle returned a non-integer entropy".into()))?;
            let min = *gaps.iter().min_by(|a, b| cmp(a, b)).expect("Ω is nonempty for m >= 3");
            let arg = omega(m)
                .filter(|&b| gap(b).is_some_and(|g| cmp(&g, &min) == Ordering::Equal))
                .reduce_with(lex_min)
                .expect("minimum is attained");
            (Bits::ratio(min.0, min.1), arg)
        }
        _ => {
            let gap = |b: TerminalSet| {
                let sum_b = Bits::sum(b.iter().map(|i| &singles[i - 1]));
                let d_b = (&(&sum_b + &oracle.entropy(b.complement(m))) - &total).div_int(b.len() as i64);
                &d_b - &delta_s
            };
            let min = omega(m)
                .map(gap)
                .reduce_with(|a, b| if b.cmp_with(&a, 0.0).is_lt() { b } else { a })
                .expect("Ω is nonempty for m >= 3");
            let arg = omega(m).filter(|&b| gap(b).approx_eq(&min)).reduce_with(lex_min).expect("minimum is attained");
            (min, arg)
        }
    };
    debug_assert!(argmin.is_subset_of(full));
    let sign = min_gap.cmp_tol(&Bits::zero());
    Ok(TypeSVerdict {
        is_minimizer: sign != Ordering::Less,
        is_unique: sign == Ordering::Greater,
        worst_b: (sign != Ordering::Greater).then_some(argmin),
        min_gap: Some(min_gap),
        delta_s,
    })
}

/// Type-S status read off the full minimizer list of the partition
/// minimization. Works for every `m >= 2` within the enumeration cap; for
/// `m = 2` the only candidate partition is `S`.
pub fn type_s_by_minimizers(oracle: &dyn EntropyOracle) -> Result<TypeSVerdict> {
    let m = oracle.terminal_count();
    let report = sk_capacity(oracle, &CapacityOptions { minimizer_limit: None, uncapped: false })?;
    let s_is_min = report.minimizers.iter().any(|p| p.is_singleton_partition());
    let singles = (1..=m).fold(Bits::zero(), |acc, i| &acc + &oracle.entropy(TerminalSet::singleton(i)));
    Ok(TypeSVerdict {
        is_minimizer: s_is_min,
        is_unique: s_is_min && report.minimizer_count == 1,
        worst_b: None,
        min_gap: None,
        delta_s: (&singles - &report.total_entropy).div_int(m as i64 - 1),
    })
}

/// [`is_type_s`] for `m >= 3`, [`type_s_by_minimizers`] below that.
pub fn type_s_verdict(oracle: &dyn EntropyOracle) -> Result<TypeSVerdict> {
    if oracle.terminal_count() >= 3 {
        is_type_s(oracle)
    } else {
        type_s_by_minimizers(oracle)
    }
}

/// `Δ(P_B) − Δ(S)` on `K_{m,t}` for `|B| = b`:
/// `(1/t)[C(m−2,t−1) − C(b−1,t−1)]` when `b >= t`, else `(1/t)C(m−2,t−1)`.
pub fn complete_uniform_gap(m: usize, t: usize, b: usize) -> Result<BigRational> {
    if t < 2 || t + 1 > m {
        return Err(Error::InvalidArgument(format!("need 2 <= t <= m − 1, got m={m}, t={t}")));
    }
    if b < 1 || b + 2 > m {
        return Err(Error::InvalidArgument(format!("need 1 <= b <= m − 2, got m={m}, b={b}")));
    }
    let lead = BigInt::from(binomial(m - 2, t - 1));
    let num = if b >= t { lead - BigInt::from(binomial(b - 1, t - 1)) } else { lead };
    Ok(BigRational::new(num, BigInt::from(t)))
}

#[derive(Clone, Debug, Serialize)]
pub struct RskResult {
    pub r_sk: Bits,
    pub r_co: Bits,
    pub m: usize,
    pub t: usize,
    pub edge_count: usize,
}

/// `R_SK = R_CO = (m − t)/(m − 1)·|E|` for a Type-S `t`-uniform PIN model.
pub fn rsk_uniform_pin(h: &Hypergraph) -> Result<RskResult> {
    let m = h.terminal_count();
    let t = h
        .uniformity()
        .ok_or_else(|| Error::Precondition("hypergraph is not uniform (or has no edges)".into()))?;
    if t < 2 {
        return Err(Error::Precondition(format!("edges must have at least two vertices, got t = {t}")));
    }
    let pin = PinSource::new(h.clone());
    let verdict = type_s_verdict(&pin)?;
    if !verdict.is_minimizer {
        let witness = verdict.worst_b.map(|b| format!(" (worst B = {{{b}}})")).unwrap_or_default();
        return Err(Error::Precondition(format!("PIN model is not Type S{witness}; the R_SK formula does not apply")));
    }
    let e = h.edge_count();
    let r = BigRational::new(BigInt::from((m - t) * e), BigInt::from(m - 1));
    if m <= ENUMERATION_CAP {
        let report = sk_capacity(&pin, &CapacityOptions::default())?;
        if report.r_co.as_exact() != Some(&r) {
            return Err(Error::Internal(format!("formula gives R_SK = {r} but partition minimization gives R_CO = {}", report.r_co)));
        }
    }
    Ok(RskResult { r_sk: Bits::Exact(r.clone()), r_co: Bits::Exact(r), m, t, edge_count: e })
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma2Case {
    pub name: String,
    pub label_entropy: f64,
    pub sum_mutual_information: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma2Report {
    pub t: usize,
    pub trials: usize,
    /// Trials (and structured cases) with `H(L) > 0`.
    pub informative: usize,
    /// `max Σ_i I(X_i; L) / (t·H(L))` over informative cases.
    pub max_ratio: Option<f64>,
    pub violations: usize,
    pub structured: Vec<Lemma2Case>,
}

fn lemma2_case(name: String, obs: &FunctionObservable, t: usize) -> Lemma2Case {
    let stats = observable_stats(obs);
    Lemma2Case {
        name,
        label_entropy: stats.label_entropy,
        sum_mutual_information: stats.total_mutual_information(),
        bound: t as f64 * stats.label_entropy,
    }
}

/// Samples random deterministic functions `L` of the edge-bit vector of a
/// `t`-uniform PIN model and checks `Σ_i I(X_i; L) <= t·H(L)`.
///
/// Trial `k` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `k`, so
/// results do not depend on thread scheduling. With `structured`, the
/// identity, a constant, and every single-edge projection are checked too.
pub fn lemma2_check(h: &Hypergraph, trials: usize, seed: u64, structured: bool) -> Result<Lemma2Report> {
    if trials < 1 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let t = h.uniformity().ok_or_else(|| Error::Precondition("hypergraph is not uniform (or has no edges)".into()))?;
    let pin = PinSource::new(h.clone());
    let joint = Arc::new(pin.materialize()?);
    let source: Arc<dyn EntropyOracle> = Arc::new(pin);
    let outcomes = joint.outcomes().len();

    let random: Vec<Lemma2Case> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let labels_count = rng.gen_range(2..=8u64);
            let labels = (0..outcomes).map(|_| rng.gen_range(0..labels_count)).collect();
            let obs = FunctionObservable::from_labels(source.clone(), joint.clone(), labels)?;
            Ok(lemma2_case(format!("trial {k}"), &obs, t))
        })
        .collect::<Result<_>>()?;

    let mut fixed = Vec::new();
    if structured {
        let keys: Vec<u64> = joint.outcomes().iter().map(|o| o.key).collect();
        let mut cases = vec![("identity".to_string(), keys.clone()), ("constant".to_string(), vec![0; outcomes])];
        for (e, edge) in h.edges().iter().enumerate() {
            let name = format!("edge ({})", edge.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
            cases.push((name, keys.iter().map(|k| (k >> e) & 1).collect()));
        }
        for (name, labels) in cases {
            let obs = FunctionObservable::from_labels(source.clone(), joint.clone(), labels)?;
            fixed.push(lemma2_case(name, &obs, t));
        }
    }

    let mut informative = 0;
    let mut violations = 0;
    let mut max_ratio: Option<f64> = None;
    for case in random.iter().chain(&fixed) {
        if case.sum_mutual_information > case.bound + TOLERANCE {
            violations += 1;
        }
        if case.label_entropy > TOLERANCE {
            informative += 1;
            let ratio = case.sum_mutual_information / case.bound;
            max_ratio = Some(max_ratio.map_or(ratio, |r| r.max(ratio)));
        }
    }
    Ok(Lemma2Report { t, trials, informative, max_ratio, violations, structured: fixed })
}

/// `(t − 1)/(m − 1)·(|E| − H(L))`, the lower bound on the conditional
/// capacity of a Type-S `t`-uniform PIN model given one observation of `L`.
pub fn conditional_lower_bound(m: usize, t: usize, edges: usize, label_entropy: f64) -> f64 {
    (t as f64 - 1.0) / (m as f64 - 1.0) * (edges as f64 - label_entropy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::example1_source;
    use crate::partitions::{delta, partition_from_subset, singleton_partition};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn pin(m: usize, edges: Vec<Vec<usize>>) -> PinSource {
        PinSource::new(Hypergraph::new(m, edges).unwrap())
    }

    fn complete(m: usize, t: usize) -> PinSource {
        PinSource::new(Hypergraph::complete_uniform(m, t).unwrap())
    }

    #[test]
    fn k53_is_uniquely_type_s() {
        let v = is_type_s(&complete(5, 3)).unwrap();
        assert!(v.is_minimizer && v.is_unique);
        assert_eq!(v.worst_b, None);
        assert_eq!(v.delta_s.as_exact(), Some(&q(5, 1)));
        // smallest gap is at |B| = 3: (1/3)(C(3,2) − C(2,2))
        assert_eq!(v.min_gap.unwrap().as_exact(), Some(&q(2, 3)));
    }

    #[test]
    fn example1_ties() {
        let v = is_type_s(&example1_source(3, 0.5).unwrap()).unwrap();
        assert!(v.is_minimizer && !v.is_unique);
        assert_eq!(v.worst_b.unwrap().to_vec(), vec![1]);
    }

    #[test]
    fn disconnected_pair_fails() {
        let v = is_type_s(&pin(4, vec![vec![1, 2], vec![3, 4]])).unwrap();
        assert!(!v.is_minimizer && !v.is_unique);
        assert_eq!(v.worst_b.unwrap().to_vec(), vec![1, 2]);
        assert_eq!(v.min_gap.unwrap().as_exact(), Some(&q(-1, 6)));
    }

    #[test]
    fn small_m_rejected_and_fallback() {
        let one_edge = pin(2, vec![vec![1, 2]]);
        assert!(matches!(is_type_s(&one_edge), Err(Error::Precondition(_))));
        let v = type_s_verdict(&one_edge).unwrap();
        assert!(v.is_minimizer && v.is_unique);
        assert!(matches!(is_type_s(&complete(21, 2)), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn gaps_match_direct_delta() {
        for m in 4..=7 {
            for t in 2..m {
                let src = complete(m, t);
                let ds = delta(&src, &singleton_partition(m).unwrap()).unwrap();
                for b in 1..=m - 2 {
                    let set = TerminalSet::full(b);
                    let db = delta(&src, &partition_from_subset(set, m).unwrap()).unwrap();
                    let direct = (&db - &ds).as_exact().unwrap().clone();
                    assert_eq!(complete_uniform_gap(m, t, b).unwrap(), direct, "m={m} t={t} b={b}");
                }
            }
        }
    }

    #[test]
    fn gap_examples_and_ranges() {
        assert_eq!(complete_uniform_gap(5, 3, 3).unwrap(), q(2, 3));
        assert_eq!(complete_uniform_gap(5, 3, 2).unwrap(), q(1, 1));
        assert_eq!(complete_uniform_gap(6, 5, 4).unwrap(), q(1, 5));
        assert!(complete_uniform_gap(5, 1, 2).is_err());
        assert!(complete_uniform_gap(5, 5, 2).is_err());
        assert!(complete_uniform_gap(5, 3, 4).is_err());
        assert!(complete_uniform_gap(5, 3, 0).is_err());
    }

    #[test]
    fn rsk_examples() {
        let r = rsk_uniform_pin(&Hypergraph::complete_uniform(5, 3).unwrap()).unwrap();
        assert_eq!(r.r_sk.as_exact(), Some(&q(5, 1)));
        let r = rsk_uniform_pin(&Hypergraph::complete_uniform(3, 2).unwrap()).unwrap();
        assert_eq!(r.r_sk.as_exact(), Some(&q(3, 2)));
        let r = rsk_uniform_pin(&Hypergraph::complete_uniform(4, 4).unwrap()).unwrap();
        assert_eq!(r.r_sk.as_exact(), Some(&q(0, 1)));
        let r = rsk_uniform_pin(&Hypergraph::new(2, vec![vec![1, 2]]).unwrap()).unwrap();
        assert_eq!(r.r_sk.as_exact(), Some(&q(0, 1)));
    }

    #[test]
    fn rsk_preconditions() {
        let err = rsk_uniform_pin(&Hypergraph::new(4, vec![vec![1, 2], vec![3, 4]]).unwrap()).unwrap_err();
        match err {
            Error::Precondition(msg) => assert!(msg.contains("{1,2}"), "{msg}"),
            e => panic!("unexpected {e:?}"),
        }
        let mixed = Hypergraph::new(3, vec![vec![1, 2], vec![1, 2, 3]]).unwrap();
        assert!(matches!(rsk_uniform_pin(&mixed), Err(Error::Precondition(_))));
        let loops = Hypergraph::new(3, vec![vec![1], vec![2]]).unwrap();
        assert!(matches!(rsk_uniform_pin(&loops), Err(Error::Precondition(_))));
    }

    #[test]
    fn lemma2_structured_cases() {
        let h = Hypergraph::complete_uniform(3, 2).unwrap();
        let r = lemma2_check(&h, 50, 7, true).unwrap();
        assert_eq!(r.violations, 0);
        let identity = &r.structured[0];
        assert!((identity.sum_mutual_information - 6.0).abs() < 1e-12);
        assert!((identity.bound - 6.0).abs() < 1e-12);
        let constant = &r.structured[1];
        assert_eq!(constant.label_entropy, 0.0);
        let edge12 = &r.structured[2];
        assert_eq!(edge12.name, "edge (1,2)");
        assert!((edge12.sum_mutual_information - 2.0).abs() < 1e-12);
        assert!((r.max_ratio.unwrap() - 1.0).abs() < 1e-9);
        // identity and the three edge projections carry information, the constant does not
        let random_informative = r.informative - 4;
        assert!(random_informative <= 50);
    }

    #[test]
    fn lemma2_is_deterministic() {
        let h = Hypergraph::complete_uniform(4, 2).unwrap();
        let a = lemma2_check(&h, 40, 3, false).unwrap();
        let b = lemma2_check(&h, 40, 3, false).unwrap();
        assert_eq!(a.max_ratio, b.max_ratio);
        assert_eq!(a.violations, 0);
        assert!(lemma2_check(&h, 0, 3, false).is_err());
    }
}
