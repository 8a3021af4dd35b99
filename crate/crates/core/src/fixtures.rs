//! Build documents for the standard categories, and the named test categories.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{
    chain, free_acyclic_quiver, monoid, orbit_category, poset, quiver_two_arrows, trunc_fi, trunc_vi, FiniteCategory,
    FiniteGroup, Subgroup,
};

/// A group given by name (`C<n>`, `S<n>`) or by a multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupDoc {
    Named(String),
    Table { names: Vec<String>, table: Vec<Vec<usize>> },
}

impl GroupDoc {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupDoc::Named(s) => {
                let bad = || Error::Document(format!("unknown group {s:?}; use C<n> or S<n>"));
                let n: usize = s.get(1..).and_then(|t| t.parse().ok()).ok_or_else(bad)?;
                match s.chars().next() {
                    Some('C') | Some('Z') => FiniteGroup::cyclic(n),
                    Some('S') => FiniteGroup::symmetric(n),
                    _ => Err(bad()),
                }
            }
            GroupDoc::Table { names, table } => FiniteGroup::from_table(names.clone(), table.clone()),
        }
    }
}

/// Parameters for one of the standard constructions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BuildSpec {
    Poset { elements: Vec<String>, relations: Vec<(String, String)> },
    Chain { n: usize },
    FreeAcyclicQuiver { vertices: Vec<String>, arrows: Vec<(String, String, String)> },
    Monoid { names: Vec<String>, table: Vec<Vec<usize>> },
    Group { group: GroupDoc },
    /// Subgroups are lists of element names; all subgroups when absent.
    Orbit {
        group: GroupDoc,
        #[serde(default)]
        subgroups: Option<Vec<Vec<String>>>,
    },
    TruncFi { n: usize },
    TruncVi { q: u64, n: usize },
}

pub fn build_standard_category(spec: &BuildSpec) -> Result<FiniteCategory> {
    fn refs(v: &[String]) -> Vec<&str> {
        v.iter().map(|s| s.as_str()).collect()
    }
    match spec {
        BuildSpec::Poset { elements, relations } => {
            let rel: Vec<(&str, &str)> = relations.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            poset(&refs(elements), &rel)
        }
        BuildSpec::Chain { n } => chain(*n),
        BuildSpec::FreeAcyclicQuiver { vertices, arrows } => {
            let arr: Vec<(&str, &str, &str)> =
                arrows.iter().map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str())).collect();
            free_acyclic_quiver(&refs(vertices), &arr)
        }
        BuildSpec::Monoid { names, table } => monoid(&refs(names), table),
        BuildSpec::Group { group } => group.build()?.as_category(),
        BuildSpec::Orbit { group, subgroups } => {
            let g = group.build()?;
            let subs = match subgroups {
                None => None,
                Some(lists) => Some(lists.iter().map(|l| named_subgroup(&g, l)).collect::<Result<Vec<_>>>()?),
            };
            Ok(orbit_category(&g, subs.as_deref())?.0)
        }
        BuildSpec::TruncFi { n } => trunc_fi(*n),
        BuildSpec::TruncVi { q, n } => trunc_vi(*q, *n),
    }
}

fn named_subgroup(g: &FiniteGroup, names: &[String]) -> Result<Subgroup> {
    let idx = names
        .iter()
        .map(|n| g.names().iter().position(|m| m == n).ok_or_else(|| Error::UnknownObject(n.clone())))
        .collect::<Result<Vec<_>>>()?;
    let h = g.generated(&idx);
    if h.order() != {
        let mut u = idx.clone();
        u.sort();
        u.dedup();
        u.len()
    } {
        return Err(Error::NotAGroupTable(format!("{names:?} is not a subgroup")));
    }
    Ok(h)
}

/// Names accepted by [`fixture`].
pub const FIXTURE_NAMES: [&str; 12] = [
    "quiver2", "chain2", "chain3", "diamond", "trunc_fi2", "orbit_c2", "orbit_c3", "orbit_s3", "group_c2",
    "group_c3", "group_s3", "idempotent",
];

/// The small categories used throughout the tests and the command line.
pub fn fixture(name: &str) -> Result<FiniteCategory> {
    let orbit = |g: FiniteGroup| orbit_category(&g, None).map(|c| c.0);
    match name {
        "quiver2" => Ok(quiver_two_arrows()),
        "chain2" => chain(2),
        "chain3" => chain(3),
        "diamond" => poset(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]),
        "trunc_fi2" => trunc_fi(2),
        "orbit_c2" => orbit(FiniteGroup::cyclic(2)?),
        "orbit_c3" => orbit(FiniteGroup::cyclic(3)?),
        "orbit_s3" => orbit(FiniteGroup::symmetric(3)?),
        "group_c2" => FiniteGroup::cyclic(2)?.as_category(),
        "group_c3" => FiniteGroup::cyclic(3)?.as_category(),
        "group_s3" => FiniteGroup::symmetric(3)?.as_category(),
        "idempotent" => monoid(&["1", "e"], &[vec![0, 1], vec![1, 1]]),
        _ => Err(Error::Document(format!("unknown fixture {name:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_builds() {
        for name in FIXTURE_NAMES {
            fixture(name).unwrap();
        }
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn build_documents() {
        let spec: BuildSpec = serde_json::from_str(r#"{"kind": "trunc_fi", "n": 2}"#).unwrap();
        let c = build_standard_category(&spec).unwrap();
        assert_eq!(c.num_objects(), 3);
        let spec: BuildSpec =
            serde_json::from_str(r#"{"kind": "orbit", "group": "S3", "subgroups": [["123"], ["123", "213"]]}"#)
                .unwrap();
        assert_eq!(build_standard_category(&spec).unwrap().num_objects(), 2);
        let bad: BuildSpec =
            serde_json::from_str(r#"{"kind": "orbit", "group": "S3", "subgroups": [["213", "132"]]}"#).unwrap();
        assert!(build_standard_category(&bad).is_err());
        let spec: BuildSpec = serde_json::from_str(
            r#"{"kind": "free_acyclic_quiver", "vertices": ["x", "y"], "arrows": [["f", "x", "y"], ["g", "x", "y"]]}"#,
        )
        .unwrap();
        assert_eq!(build_standard_category(&spec).unwrap(), quiver_two_arrows());
    }
}
