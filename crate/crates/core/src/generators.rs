//! Named instances from `name:key=value,...` specifications.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Dirichlet, Distribution};

use crate::error::{Error, Result};
use crate::model::{example1_source, Hypergraph, TabularSource};

/// A generated source: a hypergraph for PIN models or a tabular pmf.
#[derive(Clone, Debug)]
pub enum Instance {
    Pin(Hypergraph),
    Tabular(TabularSource),
}

impl Instance {
    /// The instance in its file format.
    pub fn to_text(&self) -> String {
        match self {
            Instance::Pin(h) => h.to_text(),
            Instance::Tabular(s) => s.to_text(),
        }
    }

    /// `hg` or `pmf`.
    pub fn extension(&self) -> &'static str {
        match self {
            Instance::Pin(_) => "hg",
            Instance::Tabular(_) => "pmf",
        }
    }
}

/// Generator names accepted by [`generate`].
pub const GENERATORS: &[&str] =
    &["complete-uniform", "example1", "harary", "cycle", "path", "disconnected", "random", "random-pmf"];

/// `edges` hyperedges with sizes uniform in `min_size..=max_size` and
/// vertices uniform without replacement; edges may repeat.
pub fn random_hypergraph(m: usize, edges: usize, min_size: usize, max_size: usize, seed: u64) -> Result<Hypergraph> {
    if min_size < 1 || min_size > max_size || max_size > m {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= min <= max <= m, got m={m}, min={min_size}, max={max_size}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let list = (0..edges)
        .map(|_| {
            let size = rng.gen_range(min_size..=max_size);
            sample(&mut rng, m, size).into_iter().map(|v| v + 1).collect()
        })
        .collect();
    Hypergraph::new(m, list)
}

/// A pmf on `alphabet^m` drawn from the symmetric Dirichlet(1) distribution.
pub fn random_pmf(m: usize, alphabet: usize, seed: u64) -> Result<TabularSource> {
    if m < 1 || alphabet < 2 {
        return Err(Error::InvalidArgument(format!("need m >= 1 and alphabet >= 2, got m={m}, alphabet={alphabet}")));
    }
    let outcomes = (alphabet as u64)
        .checked_pow(m as u32)
        .filter(|&n| n <= 1 << 20)
        .ok_or_else(|| Error::InvalidArgument(format!("alphabet^m too large: {alphabet}^{m}")))? as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirichlet = Dirichlet::new_with_size(1.0, outcomes).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let probs: Vec<f64> = dirichlet.sample(&mut rng);
    let rows = probs
        .into_iter()
        .enumerate()
        .map(|(mut k, p)| {
            let mut x = vec![0; m];
            for slot in x.iter_mut().rev() {
                *slot = k % alphabet;
                k /= alphabet;
            }
            (x, p)
        })
        .collect();
    TabularSource::new(vec![alphabet; m], rows)
}

struct Params<'a> {
    name: &'a str,
    values: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn parse(spec: &'a str) -> Result<Self> {
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut values = BTreeMap::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key=value in generator spec, got {item:?}")))?;
            if values.insert(k.trim(), v.trim()).is_some() {
                return Err(Error::InvalidArgument(format!("parameter {k:?} given twice")));
            }
        }
        Ok(Params { name: name.trim(), values })
    }

    fn raw(&self, key: &str) -> Result<&'a str> {
        self.values
            .get(key)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("generator {} needs parameter {key}", self.name)))
    }

    fn usize(&self, key: &str) -> Result<usize> {
        let raw = self.raw(key)?;
        raw.parse().map_err(|_| Error::InvalidArgument(format!("parameter {key} must be a nonnegative integer, got {raw:?}")))
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        if self.values.contains_key(key) {
            self.usize(key)
        } else {
            Ok(default)
        }
    }

    fn f64(&self, key: &str) -> Result<f64> {
        let raw = self.raw(key)?;
        raw.parse().map_err(|_| Error::InvalidArgument(format!("parameter {key} must be a number, got {raw:?}")))
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.values.keys().find(|k| !allowed.contains(k)) {
            Some(k) => Err(Error::InvalidArgument(format!("generator {} does not take parameter {k}", self.name))),
            None => Ok(()),
        }
    }
}

/// Builds an instance from a spec such as `complete-uniform:m=5,t=3`,
/// `example1:m=3,p=0.5`, `harary:m=6,k=3`, `cycle:m=5`, `path:m=4` or
/// `disconnected:m=4,stride=1` (pairs `{i, i+stride}` within blocks of
/// `2·stride`), `random:m=5,edges=6,min=2,max=3,seed=1` or
/// `random-pmf:m=3,k=3,seed=1`.
pub fn generate(spec: &str) -> Result<Instance> {
    let p = Params::parse(spec)?;
    match p.name {
        "complete-uniform" => {
            p.only(&["m", "t"])?;
            Ok(Instance::Pin(Hypergraph::complete_uniform(p.usize("m")?, p.usize("t")?)?))
        }
        "example1" => {
            p.only(&["m", "p"])?;
            Ok(Instance::Tabular(example1_source(p.usize("m")?, p.f64("p")?)?))
        }
        "harary" => {
            p.only(&["m", "k"])?;
            Ok(Instance::Pin(Hypergraph::harary(p.usize("m")?, p.usize("k")?)?))
        }
        "cycle" => {
            p.only(&["m"])?;
            Ok(Instance::Pin(Hypergraph::cycle(p.usize("m")?)?))
        }
        "path" => {
            p.only(&["m"])?;
            Ok(Instance::Pin(Hypergraph::path(p.usize("m")?)?))
        }
        "random" => {
            p.only(&["m", "edges", "min", "max", "seed"])?;
            let m = p.usize("m")?;
            let min = p.usize_or("min", 2.min(m))?;
            let max = p.usize_or("max", m)?;
            Ok(Instance::Pin(random_hypergraph(m, p.usize("edges")?, min, max, p.usize_or("seed", 0)? as u64)?))
        }
        "random-pmf" => {
            p.only(&["m", "k", "seed"])?;
            Ok(Instance::Tabular(random_pmf(p.usize("m")?, p.usize_or("k", 2)?, p.usize_or("seed", 0)? as u64)?))
        }
        "disconnected" | "matching" => {
            p.only(&["m", "stride"])?;
            Ok(Instance::Pin(Hypergraph::matching(p.usize("m")?, p.usize_or("stride", 1)?)?))
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown generator {other:?}; expected one of {}",
            GENERATORS.join(", ")
        ))),
    }
}
