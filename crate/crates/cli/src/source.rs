use std::path::Path;
use std::sync::Arc;

use skcc::generators::{generate, Instance};
use skcc::model::{EntropyOracle, Hypergraph, JointDistribution, PinSource, TabularSource};

use crate::commands::Failure;
use crate::{Kind, SourceArgs};

/// Reads a source file, choosing the format from `kind` or the extension.
pub fn load_file(path: &Path, kind: Option<Kind>) -> Result<Instance, Failure> {
    let kind = match kind {
        Some(k) => k,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some("hg") => Kind::Pin,
            Some("pmf") => Kind::Pmf,
            _ => {
                return Err(Failure::Input(format!(
                    "{}: cannot infer the format from the extension; pass --kind pin or --kind pmf",
                    path.display()
                )))
            }
        },
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let parsed = match kind {
        Kind::Pin => Hypergraph::parse(&text).map(Instance::Pin),
        Kind::Pmf => TabularSource::parse(&text).map(Instance::Tabular),
    };
    parsed.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn load(args: &SourceArgs) -> Result<Instance, Failure> {
    match (&args.file, &args.gen) {
        (Some(path), None) => load_file(path, args.kind),
        (None, Some(spec)) => Ok(generate(spec)?),
        _ => Err(Failure::Input("give a source file or --gen SPEC".into())),
    }
}

pub fn oracle(inst: &Instance) -> Arc<dyn EntropyOracle> {
    match inst {
        Instance::Pin(h) => Arc::new(PinSource::new(h.clone())),
        Instance::Tabular(s) => Arc::new(s.clone()),
    }
}

pub fn materialize(inst: &Instance) -> Result<JointDistribution, Failure> {
    Ok(match inst {
        Instance::Pin(h) => PinSource::new(h.clone()).materialize()?,
        Instance::Tabular(s) => s.materialize()?,
    })
}

pub fn hypergraph(inst: &Instance) -> Result<&Hypergraph, Failure> {
    match inst {
        Instance::Pin(h) => Ok(h),
        Instance::Tabular(_) => Err(Failure::Input("this command needs a hypergraph (.hg) source".into())),
    }
}
