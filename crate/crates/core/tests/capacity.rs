mod common;

use std::sync::Arc;

use common::*;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skcc::capacity::{
    club_relation, conditional_sk_value, lambda_tilde, lp_capacity, sk_capacity, verify_lambda, CapacityOptions,
};
use skcc::generators::random_pmf;
use skcc::model::{example1_source, EntropyOracle, FunctionObservable, Hypergraph, PinSource};
use skcc::{Bits, TerminalSet};

fn all_minimizers() -> CapacityOptions {
    CapacityOptions { minimizer_limit: None, uncapped: false }
}

fn table_f64(o: &dyn EntropyOracle) -> Vec<f64> {
    TerminalSet::all(o.terminal_count()).map(|a| o.entropy(a).to_f64()).collect()
}

#[test]
fn pin_capacity_matches_brute_force_and_lp_exactly() {
    for h in pin_corpus(120, 2..=6, 7, 1) {
        let m = h.terminal_count();
        let table = pin_table(&h);
        let (want, argmin) = brute_capacity(&table, m);
        let src = PinSource::new(h);
        let r = sk_capacity(&src, &all_minimizers()).unwrap();
        assert_eq!(r.i_capacity.as_exact(), Some(&want));
        let mut got: Vec<Vec<u64>> = r.minimizers.iter().map(cells).collect();
        got.sort();
        assert_eq!(got, argmin);
        assert_eq!(r.minimizer_count, argmin.len());

        let lp = lp_capacity(&src).unwrap();
        assert_eq!(lp.value.as_exact(), Some(&want), "{:?}", src.hypergraph().edges());
        assert!(lp.witness.is_fractional_partition());
        let check = verify_lambda(&src, &lp.witness).unwrap();
        assert!(check.optimal);

        let total = &table[(1 << m) - 1];
        assert_eq!(&(r.r_co.as_exact().unwrap() + &want), total);
        assert!(want >= BigRational::zero());
    }
}

#[test]
fn tabular_capacity_matches_brute_force_and_lp() {
    for seed in 0..24u64 {
        let (m, k) = match seed % 4 {
            0 => (2, 3),
            1 => (3, 2),
            2 => (3, 3),
            _ => (4, 2),
        };
        let s = random_pmf(m, k, seed).unwrap();
        let (want, _) = brute_capacity_f64(&table_f64(&s), m);
        let r = sk_capacity(&s, &all_minimizers()).unwrap();
        assert!((r.i_capacity.to_f64() - want).abs() < 1e-9);
        assert!((lp_capacity(&s).unwrap().value.to_f64() - want).abs() < 1e-7, "seed {seed}");
        assert!((r.r_co.to_f64() + r.i_capacity.to_f64() - s.total_entropy().to_f64()).abs() < 1e-9);
        assert!(r.i_capacity.to_f64() >= -1e-9);
    }
}

#[test]
fn lambda_tilde_is_a_fractional_partition() {
    for m in 2..=20 {
        let l = lambda_tilde(m).unwrap();
        assert!(l.is_fractional_partition());
        for i in 1..=m {
            let cover: BigRational = l.weights().iter().filter(|(b, _)| b.contains(i)).map(|(_, w)| w.clone()).sum();
            assert!(cover.is_one(), "m={m} i={i}");
        }
        assert!(l.weights().values().all(|w| w > &BigRational::zero()));
        assert_eq!(l.weights().len(), m);
    }
    assert!(lambda_tilde(21).is_err());
}

#[test]
fn lambda_tilde_is_optimal_exactly_for_type_s_models() {
    let mut type_s = 0;
    let mut other = 0;
    for h in pin_corpus(2000, 3..=6, 8, 2) {
        if type_s == 200 {
            break;
        }
        let m = h.terminal_count();
        let table = pin_table(&h);
        let (best, _) = brute_capacity(&table, m);
        let ds = delta_exact(&table, m, &singletons(m));
        let check = verify_lambda(&PinSource::new(h), &lambda_tilde(m).unwrap()).unwrap();
        assert!(check.feasible);
        assert_eq!(check.objective.as_exact(), Some(&ds));
        assert_eq!(check.optimal, ds == best);
        if ds == best {
            type_s += 1;
        } else {
            other += 1;
        }
    }
    assert_eq!(type_s, 200);
    assert!(other > 0);
}

fn random_observables(src: Arc<dyn EntropyOracle>, joint: Arc<skcc::model::JointDistribution>, count: usize, seed: u64) -> Vec<FunctionObservable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = joint.outcomes().len();
    (0..count)
        .map(|k| {
            let labels: Vec<u64> = match k % 4 {
                0 => {
                    let r = rng.gen_range(2..=8);
                    (0..n).map(|_| rng.gen_range(0..r)).collect()
                }
                1 => {
                    let mask: u64 = rng.gen_range(0..n as u64);
                    joint.outcomes().iter().map(|o| o.key & mask).collect()
                }
                2 => {
                    let i = rng.gen_range(0..src.terminal_count());
                    joint.outcomes().iter().map(|o| o.symbols[i]).collect()
                }
                _ => {
                    let r = rng.gen_range(2..=n.max(2));
                    (0..n).map(|_| rng.gen_range(0..r as u64)).collect()
                }
            };
            FunctionObservable::from_labels(src.clone(), joint.clone(), labels).unwrap()
        })
        .collect()
}

fn chain_holds(h: Hypergraph, observables: usize, seed: u64) {
    let (m, t, e) = (h.terminal_count(), h.uniformity().unwrap(), h.edge_count());
    let pin = PinSource::new(h);
    let joint = Arc::new(pin.materialize().unwrap());
    let src: Arc<dyn EntropyOracle> = Arc::new(pin);
    for obs in random_observables(src, joint, observables, seed) {
        let v = conditional_sk_value(&obs).unwrap().to_f64();
        let h_l = obs.label_entropy();
        let bound = (t - 1) as f64 / (m - 1) as f64 * (e as f64 - h_l);
        assert!(v >= bound - 1e-9, "m={m} t={t}: {v} < {bound}");
        assert!(v >= -1e-9);
    }
}

#[test]
fn conditional_value_respects_the_lower_bound_on_complete_uniform_models() {
    chain_holds(Hypergraph::complete_uniform(4, 2).unwrap(), 120, 3);
    chain_holds(Hypergraph::complete_uniform(5, 3).unwrap(), 120, 4);
    chain_holds(Hypergraph::complete_uniform(3, 2).unwrap(), 60, 5);
}

#[test]
fn conditional_value_respects_the_lower_bound_on_random_type_s_models() {
    let mut used = 0;
    for seed in 0..400u64 {
        let m = 3 + (seed % 3) as usize;
        let t = 2 + (seed / 3 % (m as u64 - 2)) as usize;
        let h = uniform_hypergraph(m, t, 2 + (seed % 7) as usize, seed);
        let table = pin_table(&h);
        let (best, _) = brute_capacity(&table, m);
        if delta_exact(&table, m, &singletons(m)) != best {
            continue;
        }
        chain_holds(h, 8, seed);
        used += 1;
        if used == 25 {
            break;
        }
    }
    assert_eq!(used, 25);
}

#[test]
fn conditional_value_of_trivial_observables() {
    for h in pin_corpus(20, 2..=5, 5, 6) {
        let m = h.terminal_count();
        let (best, _) = brute_capacity(&pin_table(&h), m);
        let pin = PinSource::new(h);
        let joint = Arc::new(pin.materialize().unwrap());
        let src: Arc<dyn EntropyOracle> = Arc::new(pin);
        let n = joint.outcomes().len();
        let constant = FunctionObservable::from_labels(src.clone(), joint.clone(), vec![0; n]).unwrap();
        let v = conditional_sk_value(&constant).unwrap();
        assert!((v.to_f64() - skcc::bits::rational_to_f64(&best)).abs() < 1e-9);
        let identity = FunctionObservable::from_labels(src, joint, (0..n as u64).collect()).unwrap();
        assert!(conditional_sk_value(&identity).unwrap().to_f64().abs() < 1e-9);
    }
}

fn pin_arc(h: &Hypergraph) -> Arc<dyn EntropyOracle> {
    Arc::new(PinSource::new(h.clone()))
}

fn shared(a: &[Vec<u64>], b: &[Vec<u64>]) -> bool {
    a.iter().any(|p| b.contains(p))
}

#[test]
fn clubbing_is_superadditive_with_equality_iff_a_minimizer_is_shared() {
    let mut pairs: Vec<(Hypergraph, Hypergraph)> = Vec::new();
    for h in pin_corpus(12, 2..=5, 5, 7) {
        pairs.push((h.clone(), h));
    }
    for m in [4, 8] {
        pairs.push((Hypergraph::matching(m, 1).unwrap(), Hypergraph::matching(m, 2).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    while pairs.len() < 49 {
        let m = rng.gen_range(3..=5);
        let x = skcc::generators::random_hypergraph(m, rng.gen_range(1..=4), 2, m, rng.gen()).unwrap();
        let y = skcc::generators::random_hypergraph(m, rng.gen_range(1..=4), 2, m, rng.gen()).unwrap();
        pairs.push((x, y));
    }
    let (mut strict, mut equal) = (0, 0);
    for (x, y) in &pairs {
        let m = x.terminal_count();
        let union = Hypergraph::new(m, x.edges().iter().chain(y.edges()).cloned().collect()).unwrap();
        let (ix, px) = brute_capacity(&pin_table(x), m);
        let (iy, py) = brute_capacity(&pin_table(y), m);
        let (iz, _) = brute_capacity(&pin_table(&union), m);
        let r = club_relation(pin_arc(x), pin_arc(y)).unwrap();
        assert_eq!(r.i_z.as_exact(), Some(&iz));
        assert!(iz >= &ix + &iy);
        assert_eq!(r.shared_minimizer, shared(&px, &py));
        assert_eq!(r.equality, iz == &ix + &iy);
        assert_eq!(iz == &ix + &iy, shared(&px, &py), "{:?} / {:?}", x.edges(), y.edges());
        assert!(r.consistent());
        if r.equality {
            equal += 1;
        } else {
            strict += 1;
        }
    }
    assert!(strict > 0 && equal > 0);

    // the hidden-bit source with the triangle
    let e1 = Arc::new(example1_source(3, 0.5).unwrap());
    let r = club_relation(e1.clone(), pin_arc(&Hypergraph::complete_uniform(3, 2).unwrap())).unwrap();
    let (iz, _) = brute_capacity_f64(&{
        let tri = PinSource::new(Hypergraph::complete_uniform(3, 2).unwrap());
        TerminalSet::all(3).map(|a| e1.entropy(a).to_f64() + tri.entropy(a).to_f64()).collect::<Vec<_>>()
    }, 3);
    assert!((r.i_z.to_f64() - iz).abs() < 1e-9);
    assert!((iz - 2.5).abs() < 1e-9);
    assert!(r.equality && r.shared_minimizer);

    let r = club_relation(
        pin_arc(&Hypergraph::matching(4, 1).unwrap()),
        pin_arc(&Hypergraph::matching(4, 2).unwrap()),
    )
    .unwrap();
    assert_eq!(r.i_z.as_exact(), Some(&q(4, 3)));
    assert_eq!(r.i_x.as_exact(), Some(&BigRational::zero()));
}

#[test]
fn exact_results_stay_exact() {
    let r = sk_capacity(&PinSource::new(Hypergraph::complete_uniform(5, 3).unwrap()), &CapacityOptions::default()).unwrap();
    assert!(matches!(r.i_capacity, Bits::Exact(_)));
    assert_eq!(r.i_capacity.as_exact(), Some(&int(5)));
}
