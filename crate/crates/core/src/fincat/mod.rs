//! Finite categories stored with an explicit composition table.
//!
//! Composition reads right to left: `compose(g, f)` is `g ∘ f`, defined when
//! `dom(g) == cod(f)`. Sieves on an object `x` are sets of morphisms out of
//! `x` closed under postcomposition, so everything downstream works with
//! covariant functors out of the category.

mod build;
mod group;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

pub use build::{
    free_acyclic_quiver, monoid, orbit_category, poset, quiver_two_arrows, trunc_fi, trunc_vi, chain,
};
pub use group::{FiniteGroup, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obj(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mor(pub usize);

/// Limits that turn runaway constructions into errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub objects: usize,
    pub morphisms: usize,
    /// Cap on the number of sieves on a single object.
    pub sieves: usize,
    /// Cap on the number of candidate topologies examined.
    pub candidates: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { objects: 64, morphisms: 4096, sieves: 1 << 16, candidates: 1 << 20 }
    }
}

impl Budget {
    pub fn check(&self, objects: usize, morphisms: usize) -> Result<()> {
        if objects > self.objects {
            return Err(Error::SizeBudgetExceeded(format!(
                "{objects} objects, budget {}",
                self.objects
            )));
        }
        if morphisms > self.morphisms {
            return Err(Error::SizeBudgetExceeded(format!(
                "{morphisms} morphisms, budget {}",
                self.morphisms
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

/// Interchange document for a finite category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    pub identities: BTreeMap<String, String>,
    /// Triples `[g, f, g∘f]`.
    pub compose: Vec<[String; 3]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryFlags {
    pub directed: bool,
    pub ei: bool,
    pub skeletal: bool,
    pub ore: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct MorData {
    id: String,
    dom: Obj,
    cod: Obj,
}

#[derive(Clone, Debug)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<MorData>,
    identity: Vec<Mor>,
    out: Vec<Vec<Mor>>,
    into: Vec<Vec<Mor>>,
    hom: Vec<Vec<Vec<Mor>>>,
    /// Position of each morphism inside `out[dom]`.
    out_pos: Vec<usize>,
    /// `comp[f][i] = out[cod f][i] ∘ f`.
    comp: Vec<Vec<Mor>>,
    obj_index: HashMap<String, Obj>,
    mor_index: HashMap<String, Mor>,
}

impl PartialEq for FiniteCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.morphisms == other.morphisms && self.comp == other.comp
    }
}

impl Eq for FiniteCategory {}

/// Correspondence between a full subcategory and its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    /// Parent object of each subcategory object.
    pub objects: Vec<Obj>,
    /// Parent morphism of each subcategory morphism.
    pub morphisms: Vec<Mor>,
}

impl Embedding {
    /// Subcategory object for a parent object, if it lies in the image.
    pub fn preimage_obj(&self, x: Obj) -> Option<Obj> {
        self.objects.iter().position(|&o| o == x).map(Obj)
    }

    pub fn preimage_mor(&self, f: Mor) -> Option<Mor> {
        self.morphisms.iter().position(|&m| m == f).map(Mor)
    }
}

impl FiniteCategory {
    /// Validates a document and builds the category, collecting every violation.
    pub fn from_doc(doc: &CategoryDoc) -> Result<FiniteCategory> {
        Self::from_doc_with_budget(doc, &Budget::default())
    }

    pub fn from_doc_with_budget(doc: &CategoryDoc, budget: &Budget) -> Result<FiniteCategory> {
        budget.check(doc.objects.len(), doc.morphisms.len())?;
        let mut violations = Vec::new();

        let mut objects = doc.objects.clone();
        objects.sort();
        for w in objects.windows(2) {
            if w[0] == w[1] {
                violations.push(Violation::DuplicateId(w[0].clone()));
            }
        }
        objects.dedup();
        let obj_index: HashMap<String, Obj> =
            objects.iter().enumerate().map(|(i, s)| (s.clone(), Obj(i))).collect();

        let mut raw: Vec<&MorphismDoc> = doc.morphisms.iter().collect();
        raw.sort_by(|a, b| a.id.cmp(&b.id));
        let mut morphisms: Vec<MorData> = Vec::new();
        for m in raw {
            if morphisms.last().is_some_and(|p| p.id == m.id) {
                violations.push(Violation::DuplicateId(m.id.clone()));
                continue;
            }
            match (obj_index.get(&m.dom), obj_index.get(&m.cod)) {
                (Some(&d), Some(&c)) => morphisms.push(MorData { id: m.id.clone(), dom: d, cod: c }),
                _ => {
                    violations.push(Violation::DanglingEndpoint(format!(
                        "morphism {} : {} -> {}",
                        m.id, m.dom, m.cod
                    )));
                }
            }
        }
        let mor_index: HashMap<String, Mor> =
            morphisms.iter().enumerate().map(|(i, m)| (m.id.clone(), Mor(i))).collect();

        let mut identity = vec![None; objects.len()];
        for (o, m) in &doc.identities {
            match (obj_index.get(o), mor_index.get(m)) {
                (Some(&x), Some(&f)) => {
                    let md = &morphisms[f.0];
                    if md.dom != x || md.cod != x {
                        violations.push(Violation::DanglingEndpoint(format!(
                            "identity {m} of {o} is not an endomorphism of {o}"
                        )));
                    } else {
                        identity[x.0] = Some(f);
                    }
                }
                _ => violations.push(Violation::DanglingEndpoint(format!("identity {o} -> {m}"))),
            }
        }
        for (i, id) in identity.iter().enumerate() {
            if id.is_none() && !doc.identities.contains_key(&objects[i]) {
                violations.push(Violation::MissingIdentity(objects[i].clone()));
            }
        }

        let mut table: HashMap<(Mor, Mor), Mor> = HashMap::new();
        for [g, f, gf] in &doc.compose {
            let (Some(&gm), Some(&fm), Some(&gfm)) =
                (mor_index.get(g), mor_index.get(f), mor_index.get(gf))
            else {
                violations.push(Violation::DanglingEndpoint(format!("composite {g} o {f} = {gf}")));
                continue;
            };
            let (gd, fd, gfd) = (&morphisms[gm.0], &morphisms[fm.0], &morphisms[gfm.0]);
            if gd.dom != fd.cod {
                violations.push(Violation::DanglingEndpoint(format!(
                    "composite {g} o {f} listed but {g} does not start where {f} ends"
                )));
                continue;
            }
            if gfd.dom != fd.dom || gfd.cod != gd.cod {
                violations.push(Violation::DanglingEndpoint(format!(
                    "composite {g} o {f} = {gf} has the wrong endpoints"
                )));
                continue;
            }
            if let Some(prev) = table.insert((gm, fm), gfm) {
                if prev != gfm {
                    violations.push(Violation::DuplicateId(format!("composite {g} o {f}")));
                }
            }
        }

        if !violations.is_empty() {
            return Err(Error::InvalidCategory(violations));
        }
        let identity: Vec<Mor> = identity.into_iter().map(|m| m.unwrap()).collect();
        Self::assemble(objects, morphisms, identity, |g, f| table.get(&(g, f)).copied())
    }

    /// Builds the indexed structure and checks the category laws. `compose`
    /// may return `None` for a pair, which is reported as a missing composite.
    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<MorData>,
        identity: Vec<Mor>,
        compose: impl Fn(Mor, Mor) -> Option<Mor>,
    ) -> Result<FiniteCategory> {
        let n = objects.len();
        let mut out = vec![Vec::new(); n];
        let mut into = vec![Vec::new(); n];
        let mut hom = vec![vec![Vec::new(); n]; n];
        let mut out_pos = vec![0; morphisms.len()];
        for (i, m) in morphisms.iter().enumerate() {
            out_pos[i] = out[m.dom.0].len();
            out[m.dom.0].push(Mor(i));
            into[m.cod.0].push(Mor(i));
            hom[m.dom.0][m.cod.0].push(Mor(i));
        }
        let mut violations = Vec::new();
        let mut comp = Vec::with_capacity(morphisms.len());
        for (fi, f) in morphisms.iter().enumerate() {
            let mut row = Vec::with_capacity(out[f.cod.0].len());
            for &g in &out[f.cod.0] {
                match compose(g, Mor(fi)) {
                    Some(gf) => row.push(gf),
                    None => {
                        violations.push(Violation::MissingComposite {
                            g: morphisms[g.0].id.clone(),
                            f: f.id.clone(),
                        });
                        row.push(Mor(usize::MAX));
                    }
                }
            }
            comp.push(row);
        }
        let obj_index = objects.iter().enumerate().map(|(i, s)| (s.clone(), Obj(i))).collect();
        let mor_index = morphisms.iter().enumerate().map(|(i, m)| (m.id.clone(), Mor(i))).collect();
        let cat = FiniteCategory { objects, morphisms, identity, out, into, hom, out_pos, comp, obj_index, mor_index };
        if !violations.is_empty() {
            return Err(Error::InvalidCategory(violations));
        }
        let violations = cat.law_violations();
        if !violations.is_empty() {
            return Err(Error::InvalidCategory(violations));
        }
        Ok(cat)
    }

    fn law_violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        for f in self.morphisms() {
            if self.compose(self.id(self.cod(f)), f) != f || self.compose(f, self.id(self.dom(f))) != f {
                v.push(Violation::IdentityLaw(self.mor_name(f).to_string()));
            }
        }
        for f in self.morphisms() {
            for &g in self.out_of(self.cod(f)) {
                let gf = self.compose(g, f);
                for &h in self.out_of(self.cod(g)) {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        v.push(Violation::NonAssociative {
                            h: self.mor_name(h).to_string(),
                            g: self.mor_name(g).to_string(),
                            f: self.mor_name(f).to_string(),
                        });
                    }
                }
            }
        }
        v
    }

    pub fn from_json(text: &str) -> Result<FiniteCategory> {
        let doc: CategoryDoc = serde_json::from_str(text)?;
        Self::from_doc(&doc)
    }

    pub fn to_doc(&self) -> CategoryDoc {
        let mut compose = Vec::new();
        for f in self.morphisms() {
            for &g in self.out_of(self.cod(f)) {
                compose.push([
                    self.mor_name(g).to_string(),
                    self.mor_name(f).to_string(),
                    self.mor_name(self.compose(g, f)).to_string(),
                ]);
            }
        }
        compose.sort();
        CategoryDoc {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| MorphismDoc {
                    id: m.id.clone(),
                    dom: self.objects[m.dom.0].clone(),
                    cod: self.objects[m.cod.0].clone(),
                })
                .collect(),
            identities: self
                .objects()
                .map(|x| (self.obj_name(x).to_string(), self.mor_name(self.id(x)).to_string()))
                .collect(),
            compose,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("category documents serialize")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> + '_ {
        (0..self.objects.len()).map(Obj)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = Mor> + '_ {
        (0..self.morphisms.len()).map(Mor)
    }

    pub fn obj_name(&self, x: Obj) -> &str {
        &self.objects[x.0]
    }

    pub fn mor_name(&self, f: Mor) -> &str {
        &self.morphisms[f.0].id
    }

    pub fn obj(&self, name: &str) -> Result<Obj> {
        self.obj_index.get(name).copied().ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn mor(&self, name: &str) -> Result<Mor> {
        self.mor_index.get(name).copied().ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn dom(&self, f: Mor) -> Obj {
        self.morphisms[f.0].dom
    }

    pub fn cod(&self, f: Mor) -> Obj {
        self.morphisms[f.0].cod
    }

    pub fn id(&self, x: Obj) -> Mor {
        self.identity[x.0]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.identity[self.dom(f).0] == f
    }

    /// All morphisms with domain `x`, sorted by id.
    pub fn out_of(&self, x: Obj) -> &[Mor] {
        &self.out[x.0]
    }

    /// All morphisms with codomain `x`, sorted by id.
    pub fn into(&self, x: Obj) -> &[Mor] {
        &self.into[x.0]
    }

    pub fn hom(&self, x: Obj, y: Obj) -> &[Mor] {
        &self.hom[x.0][y.0]
    }

    /// Index of `f` within `out_of(dom f)`.
    pub fn out_index(&self, f: Mor) -> usize {
        self.out_pos[f.0]
    }

    /// `g ∘ f`. Panics when `dom(g) != cod(f)`.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        assert_eq!(self.dom(g), self.cod(f), "compose: {} o {} not composable", self.mor_name(g), self.mor_name(f));
        self.comp[f.0][self.out_pos[g.0]]
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        (self.dom(g) == self.cod(f)).then(|| self.comp[f.0][self.out_pos[g.0]])
    }

    /// `x ⩽ y` iff there is a morphism `x → y`.
    pub fn leq(&self, x: Obj, y: Obj) -> bool {
        !self.hom(x, y).is_empty()
    }

    /// Inverse of `f`, if it has one.
    pub fn inverse(&self, f: Mor) -> Option<Mor> {
        let (x, y) = (self.dom(f), self.cod(f));
        self.hom(y, x)
            .iter()
            .copied()
            .find(|&g| self.compose(g, f) == self.id(x) && self.compose(f, g) == self.id(y))
    }

    pub fn is_iso(&self, f: Mor) -> bool {
        self.inverse(f).is_some()
    }

    pub fn isomorphic(&self, x: Obj, y: Obj) -> bool {
        self.hom(x, y).iter().any(|&f| self.is_iso(f))
    }

    pub fn flags(&self) -> CategoryFlags {
        let objs: Vec<Obj> = self.objects().collect();
        let mut skeletal = true;
        let mut directed = true;
        for (i, &x) in objs.iter().enumerate() {
            for &y in &objs[i + 1..] {
                if self.isomorphic(x, y) {
                    skeletal = false;
                }
                if self.leq(x, y) && self.leq(y, x) {
                    directed = false;
                }
            }
        }
        let ei = objs.iter().all(|&x| self.hom(x, x).iter().all(|&f| self.is_iso(f)));
        CategoryFlags { directed, ei, skeletal, ore: self.ore_witness().is_none() }
    }

    /// A pair `f: x→y`, `g: x→z` that cannot be completed to a commuting square.
    pub fn ore_witness(&self) -> Option<(Mor, Mor)> {
        for x in self.objects() {
            let out = self.out_of(x);
            for &f in out {
                for &g in out {
                    if g < f {
                        continue;
                    }
                    let completes = self.out_of(self.cod(f)).iter().any(|&f2| {
                        let w = self.cod(f2);
                        let ff = self.compose(f2, f);
                        self.hom(self.cod(g), w).iter().any(|&g2| self.compose(g2, g) == ff)
                    });
                    if !completes {
                        return Some((f, g));
                    }
                }
            }
        }
        None
    }

    /// Full subcategory on `objs`, with the embedding into `self`.
    pub fn full_subcategory(&self, objs: &[Obj]) -> Result<(FiniteCategory, Embedding)> {
        let mut keep: Vec<Obj> = objs.to_vec();
        for &x in &keep {
            if x.0 >= self.num_objects() {
                return Err(Error::UnknownObject(format!("#{}", x.0)));
            }
        }
        keep.sort();
        keep.dedup();
        let inside: HashSet<Obj> = keep.iter().copied().collect();
        let new_obj: HashMap<Obj, Obj> = keep.iter().enumerate().map(|(i, &x)| (x, Obj(i))).collect();
        let parent_mors: Vec<Mor> = self
            .morphisms()
            .filter(|&f| inside.contains(&self.dom(f)) && inside.contains(&self.cod(f)))
            .collect();
        let new_mor: HashMap<Mor, Mor> = parent_mors.iter().enumerate().map(|(i, &f)| (f, Mor(i))).collect();
        let morphisms = parent_mors
            .iter()
            .map(|&f| MorData { id: self.mor_name(f).to_string(), dom: new_obj[&self.dom(f)], cod: new_obj[&self.cod(f)] })
            .collect();
        let identity = keep.iter().map(|&x| new_mor[&self.id(x)]).collect();
        let objects = keep.iter().map(|&x| self.obj_name(x).to_string()).collect();
        let sub = Self::assemble(objects, morphisms, identity, |g, f| {
            Some(new_mor[&self.compose(parent_mors[g.0], parent_mors[f.0])])
        })?;
        Ok((sub, Embedding { objects: keep, morphisms: parent_mors }))
    }

    pub fn full_subcategory_by_name(&self, names: &[&str]) -> Result<(FiniteCategory, Embedding)> {
        let objs = names.iter().map(|n| self.obj(n)).collect::<Result<Vec<_>>>()?;
        self.full_subcategory(&objs)
    }
}

/// Staging area used by the standard constructors: morphisms are given by
/// name and composition by index, then everything is sorted and validated.
pub(crate) struct RawCategory {
    pub objects: Vec<String>,
    /// `(id, dom index, cod index)` in construction order.
    pub morphisms: Vec<(String, usize, usize)>,
    pub identity: Vec<usize>,
}

impl RawCategory {
    pub fn finish(self, budget: &Budget, compose: impl Fn(usize, usize) -> usize) -> Result<FiniteCategory> {
        budget.check(self.objects.len(), self.morphisms.len())?;
        let mut obj_order: Vec<usize> = (0..self.objects.len()).collect();
        obj_order.sort_by(|&a, &b| self.objects[a].cmp(&self.objects[b]));
        let mut obj_new = vec![0; self.objects.len()];
        for (new, &old) in obj_order.iter().enumerate() {
            obj_new[old] = new;
        }
        let mut mor_order: Vec<usize> = (0..self.morphisms.len()).collect();
        mor_order.sort_by(|&a, &b| self.morphisms[a].0.cmp(&self.morphisms[b].0));
        let mut mor_new = vec![0; self.morphisms.len()];
        for (new, &old) in mor_order.iter().enumerate() {
            mor_new[old] = new;
        }
        let mut violations = Vec::new();
        for w in mor_order.windows(2) {
            if self.morphisms[w[0]].0 == self.morphisms[w[1]].0 {
                violations.push(Violation::DuplicateId(self.morphisms[w[0]].0.clone()));
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidCategory(violations));
        }
        let objects = obj_order.iter().map(|&i| self.objects[i].clone()).collect();
        let morphisms = mor_order
            .iter()
            .map(|&i| {
                let (id, d, c) = &self.morphisms[i];
                MorData { id: id.clone(), dom: Obj(obj_new[*d]), cod: Obj(obj_new[*c]) }
            })
            .collect();
        let mut identity = vec![Mor(0); self.objects.len()];
        for (old, &m) in self.identity.iter().enumerate() {
            identity[obj_new[old]] = Mor(mor_new[m]);
        }
        FiniteCategory::assemble(objects, morphisms, identity, |g, f| {
            Some(Mor(mor_new[compose(mor_order[g.0], mor_order[f.0])]))
        })
    }
}
