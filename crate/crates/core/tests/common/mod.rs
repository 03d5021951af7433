//! Brute-force reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Dirichlet, Distribution};
use skcc::generators::random_hypergraph;
use skcc::model::{Hypergraph, JointDistribution};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Every set partition of `{1..m}` as cell bitmasks (bit `i-1` is terminal `i`),
/// grown by placing each terminal into an existing cell or a fresh one.
pub fn set_partitions(m: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for i in 0..m {
        let bit = 1u64 << i;
        let mut next = Vec::new();
        for p in &out {
            for c in 0..p.len() {
                let mut q = p.clone();
                q[c] |= bit;
                next.push(q);
            }
            let mut q = p.clone();
            q.push(bit);
            next.push(q);
        }
        out = next;
    }
    out.into_iter()
        .map(|mut p| {
            p.sort_by_key(|c| c.trailing_zeros());
            p
        })
        .collect()
}

/// `H(X_A)` for a PIN model: the number of edges meeting `A`.
pub fn pin_table(h: &Hypergraph) -> Vec<BigRational> {
    let m = h.terminal_count();
    let masks: Vec<u64> = h.edges().iter().map(|e| e.iter().fold(0, |acc, &v| acc | 1 << (v - 1))).collect();
    (0..1u64 << m).map(|a| int(masks.iter().filter(|&&e| e & a != 0).count())).collect()
}

/// `H(X_A)` of a materialized distribution by grouping outcomes on `A`.
pub fn joint_entropy(joint: &JointDistribution, a: u64) -> f64 {
    let mut mass: HashMap<Vec<u64>, f64> = HashMap::new();
    for o in joint.outcomes() {
        let key = (0..o.symbols.len()).filter(|i| a >> i & 1 == 1).map(|i| o.symbols[i]).collect();
        *mass.entry(key).or_default() += o.prob;
    }
    -mass.values().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum::<f64>()
}

/// `H(X_A)` of an equiprobable distribution whose projections onto `A` have
/// equal-sized fibres: `log2` of the number of distinct projections.
pub fn uniform_joint_entropy(joint: &JointDistribution, a: u64) -> u32 {
    let mut count: HashMap<Vec<u64>, usize> = HashMap::new();
    for o in joint.outcomes() {
        let key = (0..o.symbols.len()).filter(|i| a >> i & 1 == 1).map(|i| o.symbols[i]).collect();
        *count.entry(key).or_default() += 1;
    }
    let sizes: Vec<usize> = count.values().copied().collect();
    assert!(sizes.iter().all(|&s| s == sizes[0]), "unequal fibres");
    assert!(count.len().is_power_of_two());
    count.len().trailing_zeros()
}

pub fn delta_exact(h: &[BigRational], m: usize, cells: &[u64]) -> BigRational {
    let full = (1u64 << m) - 1;
    let sum: BigRational = cells.iter().map(|&c| h[c as usize].clone()).sum();
    (sum - &h[full as usize]) / int(cells.len() - 1)
}

pub fn delta_f64(h: &[f64], m: usize, cells: &[u64]) -> f64 {
    let full = (1usize << m) - 1;
    (cells.iter().map(|&c| h[c as usize]).sum::<f64>() - h[full]) / (cells.len() - 1) as f64
}

/// Minimum of `Δ` over partitions with at least two cells, and every minimizer.
pub fn brute_capacity(h: &[BigRational], m: usize) -> (BigRational, Vec<Vec<u64>>) {
    let mut best: Option<BigRational> = None;
    let mut arg = Vec::new();
    for p in set_partitions(m).into_iter().filter(|p| p.len() >= 2) {
        let d = delta_exact(h, m, &p);
        match &best {
            Some(b) if &d > b => {}
            Some(b) if &d == b => arg.push(p),
            _ => {
                best = Some(d);
                arg = vec![p];
            }
        }
    }
    arg.sort();
    (best.expect("m >= 2"), arg)
}

pub fn brute_capacity_f64(h: &[f64], m: usize) -> (f64, Vec<Vec<u64>>) {
    let parts: Vec<Vec<u64>> = set_partitions(m).into_iter().filter(|p| p.len() >= 2).collect();
    let best = parts.iter().map(|p| delta_f64(h, m, p)).fold(f64::INFINITY, f64::min);
    let mut arg: Vec<Vec<u64>> = parts.into_iter().filter(|p| delta_f64(h, m, p) <= best + 1e-9).collect();
    arg.sort();
    (best, arg)
}

pub fn singletons(m: usize) -> Vec<u64> {
    (0..m).map(|i| 1u64 << i).collect()
}

/// Cell masks of a library partition.
pub fn cells(p: &skcc::partitions::Partition) -> Vec<u64> {
    p.cells().iter().map(|c| c.bits()).collect()
}

/// The Type-S gap `Δ(P_B) − Δ(S)` for every `B` with `1 <= |B| <= m − 2`,
/// sorted by the terminal list of `B`.
pub fn type_s_gaps(h: &[BigRational], m: usize) -> Vec<(Vec<usize>, BigRational)> {
    let full = (1u64 << m) - 1;
    let ds = delta_exact(h, m, &singletons(m));
    let mut out: Vec<(Vec<usize>, BigRational)> = (1..full)
        .filter(|b| (b.count_ones() as usize) <= m - 2)
        .map(|b| {
            let mut p: Vec<u64> = (0..m).filter(|i| b >> i & 1 == 1).map(|i| 1u64 << i).collect();
            p.push(full & !b);
            let terms = (0..m).filter(|i| b >> i & 1 == 1).map(|i| i + 1).collect();
            (terms, delta_exact(h, m, &p) - &ds)
        })
        .collect();
    out.sort();
    out
}

/// A fixed corpus of random PIN hypergraphs with `m` drawn from `ms`.
pub fn pin_corpus(count: usize, ms: std::ops::RangeInclusive<usize>, max_edges: usize, seed: u64) -> Vec<Hypergraph> {
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.gen_range(ms.clone());
            let edges = rng.gen_range(1..=max_edges);
            let min = rng.gen_range(1..=2.min(m));
            random_hypergraph(m, edges, min, m, rng.gen()).unwrap()
        })
        .collect()
}

/// A random `t`-uniform hypergraph on `m` terminals.
pub fn uniform_hypergraph(m: usize, t: usize, edges: usize, seed: u64) -> Hypergraph {
    random_hypergraph(m, edges, t, t, seed).unwrap()
}

pub fn dirichlet(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    Dirichlet::new_with_size(1.0, n).unwrap().sample(rng)
}
