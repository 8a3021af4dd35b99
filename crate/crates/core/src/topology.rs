//! Grothendieck topologies: cover rules, axiom checks, enumeration, named
//! topologies, irreducible objects, rigidity and restriction to ideals.
//!
//! A [`CoverRule`] is any assignment of sieve sets to objects. A
//! [`GrothendieckTopology`] is a rule that passed [`check_axioms`].

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{Budget, Embedding, FiniteCategory, Mor, Obj, Subgroup};
use crate::sieves::{all_sieves_with_budget, Sieve};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverRule {
    covers: Vec<Vec<Sieve>>,
}

/// Serialized rule: object name → list of member lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category_ref: Option<String>,
    pub covers: BTreeMap<String, Vec<Vec<String>>>,
}

impl CoverRule {
    /// Builds a rule; sieves are sorted canonically and deduplicated.
    pub fn new(cat: &FiniteCategory, covers: Vec<Vec<Sieve>>) -> Result<CoverRule> {
        if covers.len() != cat.num_objects() {
            return Err(Error::ShapeMismatch(format!(
                "rule lists {} objects, category has {}",
                covers.len(),
                cat.num_objects()
            )));
        }
        let mut covers = covers;
        for (i, list) in covers.iter_mut().enumerate() {
            if let Some(s) = list.iter().find(|s| s.base() != Obj(i)) {
                return Err(Error::InvalidSieve {
                    base: cat.obj_name(Obj(i)).to_string(),
                    reason: format!("listed sieve lives on {}", cat.obj_name(s.base())),
                });
            }
            list.sort();
            list.dedup();
        }
        Ok(CoverRule { covers })
    }

    pub fn covers(&self, x: Obj) -> &[Sieve] {
        &self.covers[x.0]
    }

    pub fn all_covers(&self) -> &[Vec<Sieve>] {
        &self.covers
    }

    pub fn contains(&self, s: &Sieve) -> bool {
        self.covers[s.base().0].binary_search(s).is_ok()
    }

    pub fn total_covers(&self) -> usize {
        self.covers.iter().map(|c| c.len()).sum()
    }

    pub fn from_doc(cat: &FiniteCategory, doc: &TopologyDoc) -> Result<CoverRule> {
        let mut covers = vec![Vec::new(); cat.num_objects()];
        for (name, lists) in &doc.covers {
            let x = cat.obj(name)?;
            for members in lists {
                let refs: Vec<&str> = members.iter().map(|s| s.as_str()).collect();
                covers[x.0].push(Sieve::from_names(cat, name, &refs)?);
            }
        }
        CoverRule::new(cat, covers)
    }

    pub fn to_doc(&self, cat: &FiniteCategory) -> TopologyDoc {
        TopologyDoc {
            category_ref: None,
            covers: cat
                .objects()
                .map(|x| (cat.obj_name(x).to_string(), self.covers(x).iter().map(|s| s.names(cat)).collect()))
                .collect(),
        }
    }

    /// Serialization used for tie-breaking in canonical orderings.
    pub fn key(&self, cat: &FiniteCategory) -> String {
        serde_json::to_string(&self.to_doc(cat).covers).expect("rule serializes")
    }

    /// Intersection of all covers of `x`, if any.
    pub fn minimal_cover(&self, x: Obj) -> Option<Sieve> {
        let mut it = self.covers(x).iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, s| acc.intersection(s)))
    }
}

/// A cover rule certified to satisfy the three axioms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrothendieckTopology(CoverRule);

impl std::ops::Deref for GrothendieckTopology {
    type Target = CoverRule;
    fn deref(&self) -> &CoverRule {
        &self.0
    }
}

impl GrothendieckTopology {
    pub fn certify(cat: &FiniteCategory, rule: CoverRule) -> Result<GrothendieckTopology> {
        let report = check_axioms(cat, &rule)?;
        if report.is_topology() {
            Ok(GrothendieckTopology(rule))
        } else {
            Err(Error::NotATopology(report.summary()))
        }
    }

    pub fn rule(&self) -> &CoverRule {
        &self.0
    }

    pub fn into_rule(self) -> CoverRule {
        self.0
    }

    /// The least cover of `x`; it exists because covers are closed under
    /// finite intersection.
    pub fn minimal(&self, x: Obj) -> Sieve {
        self.0.minimal_cover(x).expect("maximal sieve always covers")
    }

    pub fn from_doc(cat: &FiniteCategory, doc: &TopologyDoc) -> Result<GrothendieckTopology> {
        Self::certify(cat, CoverRule::from_doc(cat, doc)?)
    }

    /// The topology whose covers of `x` are the sieves containing `mins[x]`.
    /// The result is checked.
    pub fn from_minimal(cat: &FiniteCategory, mins: &[Sieve]) -> Result<GrothendieckTopology> {
        Self::certify(cat, principal_rule(cat, mins)?)
    }
}

fn principal_rule(cat: &FiniteCategory, mins: &[Sieve]) -> Result<CoverRule> {
    let mut covers = Vec::with_capacity(cat.num_objects());
    for x in cat.objects() {
        let all = all_sieves_with_budget(cat, x, &Budget::default())?;
        covers.push(all.into_iter().filter(|t| mins[x.0].is_subset(t)).collect());
    }
    CoverRule::new(cat, covers)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum AxiomWitness {
    Maximal { object: String },
    Stability { object: String, sieve: Vec<String>, morphism: String, pullback: Vec<String> },
    Transitivity { object: String, covering: Vec<String>, sieve: Vec<String> },
    Inclusion { object: String, sieve: Vec<String>, superset: Vec<String> },
    Intersection { object: String, left: Vec<String>, right: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub maximal_ok: bool,
    pub stability_ok: bool,
    pub transitivity_ok: bool,
    /// Derived diagnostics: covers closed under supersets and intersections.
    pub inclusion_closed: bool,
    pub intersection_closed: bool,
    pub witnesses: Vec<AxiomWitness>,
}

impl AxiomReport {
    pub fn is_topology(&self) -> bool {
        self.maximal_ok && self.stability_ok && self.transitivity_ok
    }

    pub fn summary(&self) -> String {
        let mut failed = Vec::new();
        if !self.maximal_ok {
            failed.push("maximal");
        }
        if !self.stability_ok {
            failed.push("stability");
        }
        if !self.transitivity_ok {
            failed.push("transitivity");
        }
        if failed.is_empty() {
            "all axioms hold".to_string()
        } else {
            format!("{} axiom fails", failed.join(", "))
        }
    }

    pub fn first_witness(&self, kind: &str) -> Option<&AxiomWitness> {
        self.witnesses.iter().find(|w| {
            matches!(
                (kind, w),
                ("maximal", AxiomWitness::Maximal { .. })
                    | ("stability", AxiomWitness::Stability { .. })
                    | ("transitivity", AxiomWitness::Transitivity { .. })
            )
        })
    }
}

/// Witnesses kept per failing axiom.
const WITNESS_CAP: usize = 16;

/// Exhaustive check of the maximal, stability and transitivity axioms, plus
/// closure under inclusion and intersection.
pub fn check_axioms(cat: &FiniteCategory, rule: &CoverRule) -> Result<AxiomReport> {
    let budget = Budget::default();
    let lookup: Vec<HashSet<&Sieve>> = rule.all_covers().iter().map(|c| c.iter().collect()).collect();
    let covers = |s: &Sieve| lookup[s.base().0].contains(s);
    let names = |s: &Sieve| s.names(cat);
    let mut w = Vec::new();
    let (mut maximal, mut stability, mut transitivity, mut inclusion, mut intersection) = (0, 0, 0, 0, 0);

    for x in cat.objects() {
        if !covers(&Sieve::maximal(cat, x)) {
            maximal += 1;
            w.push(AxiomWitness::Maximal { object: cat.obj_name(x).to_string() });
        }
    }
    for x in cat.objects() {
        for s in rule.covers(x) {
            for &f in cat.out_of(x) {
                let p = s.pullback(cat, f)?;
                if !covers(&p) {
                    stability += 1;
                    if stability <= WITNESS_CAP {
                        w.push(AxiomWitness::Stability {
                            object: cat.obj_name(x).to_string(),
                            sieve: names(s),
                            morphism: cat.mor_name(f).to_string(),
                            pullback: names(&p),
                        });
                    }
                }
            }
        }
    }
    for x in cat.objects() {
        let all = all_sieves_with_budget(cat, x, &budget)?;
        let candidates: Vec<&Sieve> = all.iter().filter(|t| !covers(t)).collect();
        for s in rule.covers(x) {
            for t in &candidates {
                let locally = s.members().iter().all(|&f| t.pullback(cat, f).map(|p| covers(&p)).unwrap_or(false));
                if locally {
                    transitivity += 1;
                    if transitivity <= WITNESS_CAP {
                        w.push(AxiomWitness::Transitivity {
                            object: cat.obj_name(x).to_string(),
                            covering: names(s),
                            sieve: names(t),
                        });
                    }
                }
            }
            for t in &candidates {
                if s.is_subset(t) {
                    inclusion += 1;
                    if inclusion <= WITNESS_CAP {
                        w.push(AxiomWitness::Inclusion {
                            object: cat.obj_name(x).to_string(),
                            sieve: names(s),
                            superset: names(t),
                        });
                    }
                }
            }
            for s2 in rule.covers(x) {
                if s2 > s && !covers(&s.intersection(s2)) {
                    intersection += 1;
                    if intersection <= WITNESS_CAP {
                        w.push(AxiomWitness::Intersection {
                            object: cat.obj_name(x).to_string(),
                            left: names(s),
                            right: names(s2),
                        });
                    }
                }
            }
        }
    }
    Ok(AxiomReport {
        maximal_ok: maximal == 0,
        stability_ok: stability == 0,
        transitivity_ok: transitivity == 0,
        inclusion_closed: inclusion == 0,
        intersection_closed: intersection == 0,
        witnesses: w,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedTopology {
    Trivial,
    Dense,
    Maximal,
    Atomic,
}

impl NamedTopology {
    pub const ALL: [NamedTopology; 4] =
        [NamedTopology::Trivial, NamedTopology::Dense, NamedTopology::Maximal, NamedTopology::Atomic];

    pub fn parse(s: &str) -> Option<NamedTopology> {
        match s.to_ascii_lowercase().as_str() {
            "trivial" | "minimal" => Some(NamedTopology::Trivial),
            "dense" => Some(NamedTopology::Dense),
            "maximal" => Some(NamedTopology::Maximal),
            "atomic" => Some(NamedTopology::Atomic),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            NamedTopology::Trivial => "Trivial topology",
            NamedTopology::Dense => "Dense topology",
            NamedTopology::Maximal => "Maximal topology",
            NamedTopology::Atomic => "Atomic topology",
        }
    }
}

/// Whether `s` is dense: every `f: x → y` has some `g` with `g∘f ∈ s`.
pub fn is_dense_sieve(cat: &FiniteCategory, s: &Sieve) -> bool {
    cat.out_of(s.base())
        .iter()
        .all(|&f| cat.out_of(cat.cod(f)).iter().any(|&g| s.contains(cat.compose(g, f))))
}

pub fn named_topology(cat: &FiniteCategory, kind: NamedTopology) -> Result<GrothendieckTopology> {
    if kind == NamedTopology::Atomic {
        if let Some((f, g)) = cat.ore_witness() {
            return Err(Error::OreConditionFails(format!("{} and {}", cat.mor_name(f), cat.mor_name(g))));
        }
    }
    let budget = Budget::default();
    let mut covers = Vec::new();
    for x in cat.objects() {
        let all = all_sieves_with_budget(cat, x, &budget)?;
        let keep: Vec<Sieve> = match kind {
            NamedTopology::Trivial => vec![Sieve::maximal(cat, x)],
            NamedTopology::Maximal => all,
            NamedTopology::Dense => all.into_iter().filter(|s| is_dense_sieve(cat, s)).collect(),
            NamedTopology::Atomic => all.into_iter().filter(|s| !s.is_empty()).collect(),
        };
        covers.push(keep);
    }
    GrothendieckTopology::certify(cat, CoverRule::new(cat, covers)?)
}

/// Which named topology `j` equals, if any (first match in `NamedTopology::ALL`).
pub fn identify_named(cat: &FiniteCategory, j: &CoverRule) -> Option<NamedTopology> {
    NamedTopology::ALL
        .into_iter()
        .find(|&k| named_topology(cat, k).map(|t| t.rule() == j).unwrap_or(false))
}

fn sort_topologies(cat: &FiniteCategory, list: &mut Vec<GrothendieckTopology>) {
    let mut keyed: Vec<(usize, String, GrothendieckTopology)> =
        list.drain(..).map(|t| (t.total_covers(), t.key(cat), t)).collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    keyed.dedup_by(|a, b| a.1 == b.1);
    list.extend(keyed.into_iter().map(|k| k.2));
}

/// Every Grothendieck topology on `cat`, canonically ordered.
///
/// Cover sets are closed under supersets and finite intersections, so each is
/// determined by its least sieve. The search picks one candidate least sieve
/// per object, prunes with `f*(S_x) ⊇ S_y` for `f: x → y`, and re-checks every
/// surviving candidate with [`check_axioms`].
pub fn enumerate_topologies(cat: &FiniteCategory, budget: &Budget) -> Result<Vec<GrothendieckTopology>> {
    budget.check(cat.num_objects(), cat.num_morphisms())?;
    let objs: Vec<Obj> = cat.objects().collect();
    let sieves: Vec<Vec<Sieve>> = objs.iter().map(|&x| all_sieves_with_budget(cat, x, budget)).collect::<Result<_>>()?;
    let mut chosen: Vec<Option<usize>> = vec![None; objs.len()];
    let mut out = Vec::new();
    let mut visited = 0usize;

    fn consistent(cat: &FiniteCategory, sieves: &[Vec<Sieve>], chosen: &[Option<usize>], x: Obj) -> bool {
        let sx = &sieves[x.0][chosen[x.0].unwrap()];
        for &f in cat.out_of(x) {
            let y = cat.cod(f);
            if let Some(iy) = chosen[y.0] {
                if !sieves[y.0][iy].is_subset(&sx.pullback(cat, f).unwrap()) {
                    return false;
                }
            }
        }
        for &f in cat.into(x) {
            let w = cat.dom(f);
            if w == x {
                continue;
            }
            if let Some(iw) = chosen[w.0] {
                if !sx.is_subset(&sieves[w.0][iw].pullback(cat, f).unwrap()) {
                    return false;
                }
            }
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        cat: &FiniteCategory,
        sieves: &[Vec<Sieve>],
        chosen: &mut Vec<Option<usize>>,
        k: usize,
        out: &mut Vec<GrothendieckTopology>,
        visited: &mut usize,
        budget: &Budget,
    ) -> Result<()> {
        if k == chosen.len() {
            *visited += 1;
            if *visited > budget.candidates {
                return Err(Error::SizeBudgetExceeded(format!("more than {} candidates", budget.candidates)));
            }
            let mins: Vec<Sieve> = chosen.iter().enumerate().map(|(i, c)| sieves[i][c.unwrap()].clone()).collect();
            let rule = CoverRule::new(
                cat,
                mins.iter()
                    .enumerate()
                    .map(|(i, m)| sieves[i].iter().filter(|t| m.is_subset(t)).cloned().collect())
                    .collect(),
            )?;
            if check_axioms(cat, &rule)?.is_topology() {
                out.push(GrothendieckTopology(rule));
            }
            return Ok(());
        }
        for i in 0..sieves[k].len() {
            chosen[k] = Some(i);
            if consistent(cat, sieves, chosen, Obj(k)) {
                rec(cat, sieves, chosen, k + 1, out, visited, budget)?;
            }
        }
        chosen[k] = None;
        Ok(())
    }

    rec(cat, &sieves, &mut chosen, 0, &mut out, &mut visited, budget)?;
    sort_topologies(cat, &mut out);
    Ok(out)
}

/// Objects in an order where every object comes after all objects above it.
fn top_down_order(cat: &FiniteCategory) -> Vec<Obj> {
    let mut order: Vec<Obj> = Vec::new();
    let mut placed = vec![false; cat.num_objects()];
    while order.len() < cat.num_objects() {
        for x in cat.objects() {
            if placed[x.0] {
                continue;
            }
            let ready = cat.objects().all(|y| y == x || placed[y.0] || !cat.leq(x, y));
            if ready {
                placed[x.0] = true;
                order.push(x);
            }
        }
    }
    order
}

/// Topologies on a finite directed EI category via consistent families:
/// each `S_x` is either `C(x, −)` or the union of `S_y ∘ C(x, y)` over
/// objects `y ≠ x`, decided from the top of the order downward.
pub fn enumerate_consistent_families(cat: &FiniteCategory) -> Result<Vec<GrothendieckTopology>> {
    let flags = cat.flags();
    if !(flags.directed && flags.ei) {
        return Err(Error::NotDirectedEI);
    }
    let order = top_down_order(cat);
    let mut families: Vec<Vec<Option<Sieve>>> = vec![vec![None; cat.num_objects()]];
    for &x in &order {
        let mut next = Vec::new();
        for fam in families {
            let mut gens = Vec::new();
            for &h in cat.out_of(x) {
                let y = cat.cod(h);
                if y == x {
                    continue;
                }
                let sy = fam[y.0].as_ref().expect("objects above are decided first");
                for &g in sy.members() {
                    gens.push(cat.compose(g, h));
                }
            }
            let union = Sieve::generated(cat, x, &gens)?;
            let max = Sieve::maximal(cat, x);
            for s in [max, union] {
                let mut f2 = fam.clone();
                f2[x.0] = Some(s);
                if !next.contains(&f2) {
                    next.push(f2);
                }
            }
        }
        families = next;
    }
    let mut out = Vec::new();
    for fam in families {
        let mins: Vec<Sieve> = fam.into_iter().map(|s| s.unwrap()).collect();
        out.push(GrothendieckTopology::from_minimal(cat, &mins)?);
    }
    sort_topologies(cat, &mut out);
    Ok(out)
}

/// Objects whose only cover is the maximal sieve.
pub fn irreducible_objects(cat: &FiniteCategory, j: &CoverRule) -> Vec<Obj> {
    cat.objects()
        .filter(|&x| j.covers(x).len() == 1 && j.covers(x)[0].is_maximal(cat))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityReport {
    pub rigid: bool,
    pub irreducible: Vec<Obj>,
    /// Per object: the sieve generated by morphisms into irreducible objects.
    pub generated: Vec<Sieve>,
    /// Per object: the least cover.
    pub minimal: Vec<Sieve>,
    /// Objects where the generated sieve does not cover.
    pub failures: Vec<Obj>,
}

pub fn rigidity(cat: &FiniteCategory, j: &GrothendieckTopology) -> RigidityReport {
    let irreducible = irreducible_objects(cat, j);
    let mut generated = Vec::new();
    let mut failures = Vec::new();
    for x in cat.objects() {
        let gens: Vec<Mor> = cat.out_of(x).iter().copied().filter(|&f| irreducible.contains(&cat.cod(f))).collect();
        let s = Sieve::generated(cat, x, &gens).expect("generators start at x");
        if !j.contains(&s) {
            failures.push(x);
        }
        generated.push(s);
    }
    RigidityReport {
        rigid: failures.is_empty(),
        irreducible,
        generated,
        minimal: cat.objects().map(|x| j.minimal(x)).collect(),
        failures,
    }
}

/// Whether `objs` is closed upward: `x` inside and `x → y` imply `y` inside.
pub fn is_ideal(cat: &FiniteCategory, objs: &[Obj]) -> bool {
    objs.iter().all(|&x| cat.out_of(x).iter().all(|&f| objs.contains(&cat.cod(f))))
}

/// Restriction of `j` to the full subcategory on an upward-closed object set:
/// each cover `S` of `x` becomes `S ∩ D(x, −)`.
pub fn restrict_to_ideal(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    ideal: &[Obj],
) -> Result<(FiniteCategory, Embedding, GrothendieckTopology)> {
    if !is_ideal(cat, ideal) {
        let mut names: Vec<String> = ideal.iter().map(|&x| cat.obj_name(x).to_string()).collect();
        names.sort();
        return Err(Error::NotAnIdeal(names));
    }
    let (sub, emb) = cat.full_subcategory(ideal)?;
    let mut covers = Vec::new();
    for (i, &px) in emb.objects.iter().enumerate() {
        let list = j
            .covers(px)
            .iter()
            .map(|s| {
                let members: Vec<Mor> = s.members().iter().filter_map(|&f| emb.preimage_mor(f)).collect();
                Sieve::from_members(&sub, Obj(i), &members)
            })
            .collect::<Result<Vec<_>>>()?;
        covers.push(list);
    }
    let t = GrothendieckTopology::certify(&sub, CoverRule::new(&sub, covers)?)?;
    Ok((sub, emb, t))
}

/// The smallest topology containing `rule`, by closing under the maximal
/// axiom, supersets, intersections, pullbacks and transitivity until nothing
/// changes.
pub fn smallest_topology_containing(cat: &FiniteCategory, rule: &CoverRule) -> Result<GrothendieckTopology> {
    let budget = Budget::default();
    let all: Vec<Vec<Sieve>> = cat.objects().map(|x| all_sieves_with_budget(cat, x, &budget)).collect::<Result<_>>()?;
    let index: Vec<HashMap<Sieve, usize>> =
        all.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
    let mut inj: Vec<Vec<bool>> = all.iter().map(|l| vec![false; l.len()]).collect();
    for x in cat.objects() {
        inj[x.0][index[x.0][&Sieve::maximal(cat, x)]] = true;
        for s in rule.covers(x) {
            inj[x.0][index[x.0][s]] = true;
        }
    }
    loop {
        let mut changed = false;
        let mut set = |inj: &mut Vec<Vec<bool>>, s: &Sieve| {
            let i = index[s.base().0][s];
            if !inj[s.base().0][i] {
                inj[s.base().0][i] = true;
                changed = true;
            }
        };
        for x in cat.objects() {
            let members: Vec<Sieve> = all[x.0].iter().zip(&inj[x.0]).filter(|p| *p.1).map(|p| p.0.clone()).collect();
            for s in &members {
                for t in &all[x.0] {
                    if s.is_subset(t) {
                        set(&mut inj, t);
                    }
                }
                for s2 in &members {
                    set(&mut inj, &s.intersection(s2));
                }
                for &f in cat.out_of(x) {
                    set(&mut inj, &s.pullback(cat, f)?);
                }
            }
        }
        for x in cat.objects() {
            for t in &all[x.0] {
                if inj[x.0][index[x.0][t]] {
                    continue;
                }
                let reach = all[x.0].iter().zip(&inj[x.0]).filter(|p| *p.1).any(|(s, _)| {
                    s.members().iter().all(|&f| {
                        let p = t.pullback(cat, f).unwrap();
                        inj[p.base().0][index[p.base().0][&p]]
                    })
                });
                if reach {
                    set(&mut inj, t);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let covers = all
        .iter()
        .zip(&inj)
        .map(|(l, m)| l.iter().zip(m).filter(|p| *p.1).map(|p| p.0.clone()).collect())
        .collect();
    GrothendieckTopology::certify(cat, CoverRule::new(cat, covers)?)
}

/// Generating rule for the sipp topology on an orbit category: at `G/H`, the
/// sieves generated by a single morphism `G/H → G/K` with `|H|/|K|` prime to
/// `p`. `reps[i]` is the subgroup of object `i`.
pub fn sipp_rule(cat: &FiniteCategory, reps: &[Subgroup], p: usize) -> Result<CoverRule> {
    let mut covers = Vec::new();
    for x in cat.objects() {
        let mut list = Vec::new();
        for &f in cat.out_of(x) {
            let index = reps[x.0].order() / reps[cat.cod(f).0].order();
            if index % p != 0 {
                list.push(Sieve::principal(cat, f));
            }
        }
        covers.push(list);
    }
    CoverRule::new(cat, covers)
}

pub fn sipp_topology(cat: &FiniteCategory, reps: &[Subgroup], p: usize) -> Result<GrothendieckTopology> {
    smallest_topology_containing(cat, &sipp_rule(cat, reps, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{chain, monoid, quiver_two_arrows, FiniteGroup};

    fn displays(cat: &FiniteCategory, j: &CoverRule, x: &str) -> Vec<String> {
        j.covers(cat.obj(x).unwrap()).iter().map(|s| s.display(cat)).collect()
    }

    #[test]
    fn dense_on_quiver_matches_table_row() {
        let q = quiver_two_arrows();
        let d = named_topology(&q, NamedTopology::Dense).unwrap();
        assert_eq!(displays(&q, &d, "x"), vec!["{1_x, f, g}", "{f, g}"]);
        assert_eq!(displays(&q, &d, "y"), vec!["{1_y}"]);
        assert!(matches!(named_topology(&q, NamedTopology::Atomic), Err(Error::OreConditionFails(_))));
    }

    #[test]
    fn empty_only_rule_fails_maximal_axiom() {
        let q = quiver_two_arrows();
        let rule = CoverRule::new(&q, q.objects().map(|x| vec![Sieve::empty(x)]).collect()).unwrap();
        let r = check_axioms(&q, &rule).unwrap();
        assert!(!r.maximal_ok);
    }

    #[test]
    fn rule_with_empty_and_maximal_fails_transitivity() {
        let q = quiver_two_arrows();
        let rule = CoverRule::new(&q, q.objects().map(|x| vec![Sieve::empty(x), Sieve::maximal(&q, x)]).collect()).unwrap();
        let r = check_axioms(&q, &rule).unwrap();
        assert!(r.maximal_ok && r.stability_ok && !r.transitivity_ok);
        match r.first_witness("transitivity").unwrap() {
            AxiomWitness::Transitivity { covering, sieve, .. } => {
                assert!(covering.is_empty());
                assert_eq!(sieve, &vec!["f".to_string(), "g".to_string()]);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn quiver_has_four_topologies() {
        let q = quiver_two_arrows();
        let all = enumerate_topologies(&q, &Budget::default()).unwrap();
        assert_eq!(all.len(), 4);
        let fam = enumerate_consistent_families(&q).unwrap();
        assert_eq!(all, fam);
    }

    #[test]
    fn chain_and_group_counts() {
        assert_eq!(enumerate_topologies(&chain(2).unwrap(), &Budget::default()).unwrap().len(), 4);
        let c2 = FiniteGroup::cyclic(2).unwrap().as_category().unwrap();
        assert_eq!(enumerate_topologies(&c2, &Budget::default()).unwrap().len(), 2);
        let m = monoid(&["1", "e"], &[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(enumerate_topologies(&m, &Budget::default()).unwrap().len(), 3);
    }

    #[test]
    fn rigidity_of_dense_topology() {
        let q = quiver_two_arrows();
        let d = named_topology(&q, NamedTopology::Dense).unwrap();
        let r = rigidity(&q, &d);
        assert!(r.rigid);
        assert_eq!(r.irreducible, vec![q.obj("y").unwrap()]);
        assert_eq!(r.generated[q.obj("x").unwrap().0].display(&q), "{f, g}");
    }

    #[test]
    fn restriction_to_ideal() {
        let q = quiver_two_arrows();
        let d = named_topology(&q, NamedTopology::Dense).unwrap();
        let y = q.obj("y").unwrap();
        let (sub, _, t) = restrict_to_ideal(&q, &d, &[y]).unwrap();
        assert_eq!(t, named_topology(&sub, NamedTopology::Trivial).unwrap());
        assert!(matches!(restrict_to_ideal(&q, &d, &[q.obj("x").unwrap()]), Err(Error::NotAnIdeal(_))));
    }
}
