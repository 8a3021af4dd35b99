//! Reading the documents named on the command line.

use std::path::Path;

use finsite::fincat::{Budget, FiniteCategory};
use finsite::fixtures::{fixture, FIXTURE_NAMES};
use finsite::linalg::Field;
use finsite::modrep::KModule;
use finsite::topology::{named_topology, CoverRule, GrothendieckTopology, NamedTopology, TopologyDoc};
use finsite::typen::DSpec;
use finsite::Error;

use crate::Opts;

pub type Result<T> = std::result::Result<T, String>;

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
}

fn lib(e: Error) -> String {
    e.to_string()
}

/// Inline JSON, or the contents of a file.
pub fn text_or_file(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        read(arg)
    }
}

pub fn budget(opts: &Opts) -> Budget {
    let mut b = Budget::default();
    if let Some(n) = opts.budget {
        b.candidates = n;
        b.sieves = n;
    }
    b
}

pub fn category(opts: &Opts) -> Result<FiniteCategory> {
    let arg = opts.category.as_deref().ok_or("--category is required")?;
    if !Path::new(arg).exists() && FIXTURE_NAMES.contains(&arg) {
        return fixture(arg).map_err(lib);
    }
    FiniteCategory::from_json(&read(arg)?).map_err(lib)
}

pub fn field(opts: &Opts) -> Result<Field> {
    Field::parse(&opts.field).map_err(lib)
}

/// A rule from a document or a topology name; named rules are topologies.
pub fn rule(cat: &FiniteCategory, opts: &Opts) -> Result<CoverRule> {
    let arg = opts.topology.as_deref().ok_or("--topology is required")?;
    if let Some(kind) = NamedTopology::parse(arg) {
        if !Path::new(arg).exists() {
            return named_topology(cat, kind).map(|t| t.into_rule()).map_err(lib);
        }
    }
    let doc: TopologyDoc = serde_json::from_str(&read(arg)?).map_err(|e| format!("{arg}: {e}"))?;
    CoverRule::from_doc(cat, &doc).map_err(lib)
}

pub fn topology(cat: &FiniteCategory, opts: &Opts) -> Result<GrothendieckTopology> {
    GrothendieckTopology::certify(cat, rule(cat, opts)?).map_err(lib)
}

pub fn module(cat: &FiniteCategory, opts: &Opts) -> Result<KModule> {
    let arg = opts.module.as_deref().ok_or("--module is required")?;
    KModule::from_json(cat, &read(arg)?).map_err(lib)
}

pub fn spec(arg: &str) -> Result<DSpec> {
    DSpec::from_json(&text_or_file(arg)?).map_err(lib)
}
