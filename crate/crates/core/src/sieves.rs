//! Sieves: sets of morphisms out of an object closed under postcomposition.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{Budget, FiniteCategory, Mor, Obj};

/// A sieve on `base`. Members are kept sorted; since morphism indices follow
/// the sorted ids, this is also the order of their names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sieve {
    base: Obj,
    members: Vec<Mor>,
}

/// Serialized sieve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveDoc {
    pub base: String,
    pub members: Vec<String>,
}

impl PartialOrd for Sieve {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: base, then larger sieves first, then lexicographic.
impl Ord for Sieve {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.base
            .cmp(&other.base)
            .then(other.members.len().cmp(&self.members.len()))
            .then(self.members.cmp(&other.members))
    }
}

impl Sieve {
    pub fn empty(x: Obj) -> Sieve {
        Sieve { base: x, members: Vec::new() }
    }

    /// `C(x, −)`.
    pub fn maximal(cat: &FiniteCategory, x: Obj) -> Sieve {
        Sieve { base: x, members: cat.out_of(x).to_vec() }
    }

    /// Smallest sieve on `x` containing `gens`.
    pub fn generated(cat: &FiniteCategory, x: Obj, gens: &[Mor]) -> Result<Sieve> {
        let mut set = HashSet::new();
        for &f in gens {
            if cat.dom(f) != x {
                return Err(Error::WrongDomain {
                    morphism: cat.mor_name(f).to_string(),
                    expected: cat.obj_name(x).to_string(),
                });
            }
            for &g in cat.out_of(cat.cod(f)) {
                set.insert(cat.compose(g, f));
            }
        }
        let mut members: Vec<Mor> = set.into_iter().collect();
        members.sort();
        Ok(Sieve { base: x, members })
    }

    /// The sieve generated by a single morphism.
    pub fn principal(cat: &FiniteCategory, f: Mor) -> Sieve {
        Self::generated(cat, cat.dom(f), &[f]).expect("generator starts at its own domain")
    }

    /// Checks closure and domains of an explicit member set.
    pub fn from_members(cat: &FiniteCategory, x: Obj, members: &[Mor]) -> Result<Sieve> {
        let mut m = members.to_vec();
        m.sort();
        m.dedup();
        let invalid = |reason: String| Error::InvalidSieve { base: cat.obj_name(x).to_string(), reason };
        for &f in &m {
            if cat.dom(f) != x {
                return Err(invalid(format!("{} does not start at {}", cat.mor_name(f), cat.obj_name(x))));
            }
        }
        let s = Sieve { base: x, members: m };
        for &f in &s.members {
            for &g in cat.out_of(cat.cod(f)) {
                let gf = cat.compose(g, f);
                if !s.contains(gf) {
                    return Err(invalid(format!(
                        "{} is a member but {} o {} = {} is not",
                        cat.mor_name(f),
                        cat.mor_name(g),
                        cat.mor_name(f),
                        cat.mor_name(gf)
                    )));
                }
            }
        }
        Ok(s)
    }

    pub fn from_names(cat: &FiniteCategory, x: &str, names: &[&str]) -> Result<Sieve> {
        let x = cat.obj(x)?;
        let members = names.iter().map(|n| cat.mor(n)).collect::<Result<Vec<_>>>()?;
        Self::from_members(cat, x, &members)
    }

    pub fn from_doc(cat: &FiniteCategory, doc: &SieveDoc) -> Result<Sieve> {
        let names: Vec<&str> = doc.members.iter().map(|s| s.as_str()).collect();
        Self::from_names(cat, &doc.base, &names)
    }

    pub fn to_doc(&self, cat: &FiniteCategory) -> SieveDoc {
        SieveDoc { base: cat.obj_name(self.base).to_string(), members: self.names(cat) }
    }

    pub fn base(&self) -> Obj {
        self.base
    }

    pub fn members(&self) -> &[Mor] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_maximal(&self, cat: &FiniteCategory) -> bool {
        self.members.len() == cat.out_of(self.base).len()
    }

    pub fn contains(&self, f: Mor) -> bool {
        self.members.binary_search(&f).is_ok()
    }

    pub fn is_subset(&self, other: &Sieve) -> bool {
        self.base == other.base && self.members.iter().all(|&f| other.contains(f))
    }

    pub fn union(&self, other: &Sieve) -> Sieve {
        assert_eq!(self.base, other.base);
        let mut m: Vec<Mor> = self.members.iter().chain(&other.members).copied().collect();
        m.sort();
        m.dedup();
        Sieve { base: self.base, members: m }
    }

    pub fn intersection(&self, other: &Sieve) -> Sieve {
        assert_eq!(self.base, other.base);
        Sieve { base: self.base, members: self.members.iter().copied().filter(|&f| other.contains(f)).collect() }
    }

    /// Members whose codomain is `y`.
    pub fn members_to(&self, cat: &FiniteCategory, y: Obj) -> Vec<Mor> {
        self.members.iter().copied().filter(|&f| cat.cod(f) == y).collect()
    }

    /// `f*(S) = {g : g∘f ∈ S}`, a sieve on `cod f`.
    pub fn pullback(&self, cat: &FiniteCategory, f: Mor) -> Result<Sieve> {
        if cat.dom(f) != self.base {
            return Err(Error::WrongDomain {
                morphism: cat.mor_name(f).to_string(),
                expected: cat.obj_name(self.base).to_string(),
            });
        }
        let y = cat.cod(f);
        let members = cat.out_of(y).iter().copied().filter(|&g| self.contains(cat.compose(g, f))).collect();
        Ok(Sieve { base: y, members })
    }

    pub fn names(&self, cat: &FiniteCategory) -> Vec<String> {
        self.members.iter().map(|&f| cat.mor_name(f).to_string()).collect()
    }

    /// `{a, b}` or `∅`.
    pub fn display(&self, cat: &FiniteCategory) -> String {
        if self.members.is_empty() {
            "∅".to_string()
        } else {
            format!("{{{}}}", self.names(cat).join(", "))
        }
    }

    /// A small generating set: members not obtainable as a proper
    /// postcomposite of another member.
    pub fn generators(&self, cat: &FiniteCategory) -> Vec<Mor> {
        let mut gens: Vec<Mor> = Vec::new();
        for &f in &self.members {
            if gens.iter().any(|&h| Sieve::principal(cat, h).contains(f)) {
                continue;
            }
            gens.retain(|&h| !Sieve::principal(cat, f).contains(h));
            gens.push(f);
        }
        gens.sort();
        gens
    }
}

/// Every sieve on `x`, in canonical order, built as unions of principal sieves.
pub fn all_sieves(cat: &FiniteCategory, x: Obj) -> Result<Vec<Sieve>> {
    all_sieves_with_budget(cat, x, &Budget::default())
}

pub fn all_sieves_with_budget(cat: &FiniteCategory, x: Obj, budget: &Budget) -> Result<Vec<Sieve>> {
    let mut principals: Vec<Sieve> = cat.out_of(x).iter().map(|&f| Sieve::principal(cat, f)).collect();
    principals.sort();
    principals.dedup();
    let mut seen: HashSet<Sieve> = HashSet::from([Sieve::empty(x)]);
    let mut all = vec![Sieve::empty(x)];
    for p in &principals {
        let n = all.len();
        for i in 0..n {
            let u = all[i].union(p);
            if seen.insert(u.clone()) {
                all.push(u);
                if all.len() > budget.sieves {
                    return Err(Error::SizeBudgetExceeded(format!(
                        "more than {} sieves on {}",
                        budget.sieves,
                        cat.obj_name(x)
                    )));
                }
            }
        }
    }
    all.sort();
    Ok(all)
}
