//! Torsion submodules, annihilator sieves and the torsion pair attached to a
//! cover rule.
//!
//! For a rule `J`, the torsion part of `V` at `x` is the sum over covers `S`
//! of `x` of `∩_{f ∈ S} ker V_f`, with the empty sieve contributing all of
//! `V_x`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{Budget, FiniteCategory, Obj};
use crate::linalg::{Elem, Field, Matrix, Subspace};
use crate::modrep::{hom_space, quotient, random_module, sieve_quotient_module, submodule, KModule, ModuleDoc, ModuleMap};
use crate::sieves::{all_sieves_with_budget, Sieve};
use crate::topology::{check_axioms, CoverRule};

fn require_stability(cat: &FiniteCategory, rule: &CoverRule) -> Result<()> {
    let report = check_axioms(cat, rule)?;
    if report.stability_ok {
        Ok(())
    } else {
        let detail = report
            .first_witness("stability")
            .map(|w| serde_json::to_string(w).unwrap_or_default())
            .unwrap_or_default();
        Err(Error::StabilityFails(detail))
    }
}

/// `∩_{f ∈ S} ker V_f` inside `V_x`; the whole space for the empty sieve.
/// Generators of `S` suffice since `ker V_f ⊆ ker V_{gf}`.
pub fn sieve_torsion_space(cat: &FiniteCategory, v: &KModule, s: &Sieve) -> Subspace {
    let x = s.base();
    let field = v.field();
    if s.is_empty() {
        return Subspace::full(field, v.dim(x));
    }
    let blocks: Vec<&Matrix> = s.generators(cat).into_iter().map(|f| v.action(f)).collect();
    let stacked = Matrix::vstack(field, v.dim(x), &blocks);
    Subspace::span_columns(&stacked.kernel_matrix())
}

/// Torsion subspaces without the stability check.
pub(crate) fn torsion_spaces_unchecked(cat: &FiniteCategory, rule: &CoverRule, v: &KModule) -> Vec<Subspace> {
    cat.objects()
        .map(|x| {
            let mut acc = Subspace::zero(v.field(), v.dim(x));
            for s in rule.covers(x) {
                if acc.is_full() {
                    break;
                }
                acc = acc.sum(&sieve_torsion_space(cat, v, s));
            }
            acc
        })
        .collect()
}

pub fn torsion_spaces(cat: &FiniteCategory, rule: &CoverRule, v: &KModule) -> Result<Vec<Subspace>> {
    require_stability(cat, rule)?;
    Ok(torsion_spaces_unchecked(cat, rule, v))
}

/// The torsion submodule with its inclusion into `V`.
#[derive(Clone, Debug)]
pub struct TorsionPart {
    pub spaces: Vec<Subspace>,
    pub module: KModule,
    pub inclusion: ModuleMap,
}

pub fn torsion_submodule(cat: &FiniteCategory, rule: &CoverRule, v: &KModule) -> Result<TorsionPart> {
    let spaces = torsion_spaces(cat, rule, v)?;
    if !v.is_invariant(cat, &spaces) {
        return Err(Error::StabilityFails("torsion part is not a submodule".into()));
    }
    let (module, inclusion) = submodule(cat, v, &spaces);
    Ok(TorsionPart { spaces, module, inclusion })
}

/// `V / T_J(V)` with the projection.
pub fn torsion_free_quotient(cat: &FiniteCategory, rule: &CoverRule, v: &KModule) -> Result<(KModule, ModuleMap)> {
    let spaces = torsion_spaces(cat, rule, v)?;
    let (q, p, _) = quotient(cat, v, &spaces);
    Ok((q, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Torsion,
    TorsionFree,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementWitness {
    pub object: String,
    pub vector: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub dims: BTreeMap<String, usize>,
    pub classification: Classification,
    /// Set for the zero module, which is both torsion and torsion-free; it is
    /// classified as torsion.
    pub zero_module: bool,
    /// A nonzero torsion element, when there is one.
    pub torsion_element: Option<ElementWitness>,
    /// An element outside the torsion part, when there is one.
    pub non_torsion_element: Option<ElementWitness>,
}

impl TorsionReport {
    pub fn is_torsion(&self) -> bool {
        self.classification == Classification::Torsion
    }

    pub fn is_torsion_free(&self) -> bool {
        self.classification == Classification::TorsionFree || self.zero_module
    }
}

fn witness(cat: &FiniteCategory, field: Field, x: Obj, v: &[Elem]) -> ElementWitness {
    ElementWitness { object: cat.obj_name(x).to_string(), vector: v.iter().map(|e| field.format_elem(e)).collect() }
}

pub fn torsion_class(cat: &FiniteCategory, rule: &CoverRule, v: &KModule) -> Result<TorsionReport> {
    let spaces = torsion_spaces(cat, rule, v)?;
    Ok(classify_spaces(cat, v, &spaces))
}

pub(crate) fn classify_spaces(cat: &FiniteCategory, v: &KModule, spaces: &[Subspace]) -> TorsionReport {
    let field = v.field();
    let dims = cat.objects().map(|x| (cat.obj_name(x).to_string(), spaces[x.0].dim())).collect();
    let torsion_element = cat
        .objects()
        .find(|&x| spaces[x.0].dim() > 0)
        .map(|x| witness(cat, field, x, &spaces[x.0].basis().column(0)));
    let non_torsion_element = cat.objects().find(|&x| !spaces[x.0].is_full()).map(|x| {
        let (_, s) = spaces[x.0].quotient_maps();
        witness(cat, field, x, &s.column(0))
    });
    let all = non_torsion_element.is_none();
    let none = torsion_element.is_none();
    let classification = if all {
        Classification::Torsion
    } else if none {
        Classification::TorsionFree
    } else {
        Classification::Mixed
    };
    TorsionReport { dims, classification, zero_module: v.is_zero(), torsion_element, non_torsion_element }
}

/// `A(v) = {f : V_f v = 0}` for `v ∈ V_x`.
pub fn annihilator_sieve(cat: &FiniteCategory, v: &KModule, x: Obj, vec: &[Elem]) -> Result<Sieve> {
    if vec.len() != v.dim(x) {
        return Err(Error::DimensionMismatch { expected: v.dim(x), got: vec.len() });
    }
    let members: Vec<_> = cat
        .out_of(x)
        .iter()
        .copied()
        .filter(|&f| v.action(f).apply(vec).iter().all(|e| e.is_zero()))
        .collect();
    Ok(Sieve::from_members(cat, x, &members).expect("annihilators are closed under postcomposition"))
}

/// Cap on the number of vectors enumerated in a single space.
const VECTOR_CAP: u64 = 1 << 20;

/// Every annihilator sieve realized by a vector of some `V_x`, over a finite field.
pub fn realized_annihilators(cat: &FiniteCategory, modules: &[KModule], x: Obj) -> Result<Vec<Sieve>> {
    let mut found = BTreeSet::new();
    for v in modules {
        let p = match v.field() {
            Field::Prime(p) => p,
            Field::Rational => return Err(Error::InfiniteFieldUnsupported),
        };
        let d = v.dim(x);
        let total = p
            .checked_pow(d as u32)
            .filter(|&t| t <= VECTOR_CAP)
            .ok_or_else(|| Error::SizeBudgetExceeded(format!("{p}^{d} vectors")))?;
        for code in 0..total {
            let mut c = code;
            let vec: Vec<Elem> = (0..d)
                .map(|_| {
                    let e = c % p;
                    c /= p;
                    v.field().from_i64(e as i64)
                })
                .collect();
            found.insert(annihilator_sieve(cat, v, x, &vec)?);
        }
    }
    Ok(found.into_iter().collect())
}

/// Every sieve containing some member of the rule.
pub fn inclusion_closure(cat: &FiniteCategory, rule: &CoverRule) -> Result<CoverRule> {
    let budget = Budget::default();
    let mut covers = Vec::new();
    for x in cat.objects() {
        let all = all_sieves_with_budget(cat, x, &budget)?;
        covers.push(all.into_iter().filter(|t| rule.covers(x).iter().any(|s| s.is_subset(t))).collect());
    }
    CoverRule::new(cat, covers)
}

/// The cyclic test family `P(x)/S̄` for every object and every sieve on it.
pub fn cyclic_family(cat: &FiniteCategory, field: Field) -> Result<Vec<KModule>> {
    let budget = Budget::default();
    let mut out = Vec::new();
    for x in cat.objects() {
        for s in all_sieves_with_budget(cat, x, &budget)? {
            out.push(sieve_quotient_module(cat, field, &s).quotient);
        }
    }
    Ok(out)
}

/// The generators `P(x)/S̄` for `S ∈ J(x)`.
pub fn generator_family(cat: &FiniteCategory, field: Field, rule: &CoverRule) -> Vec<KModule> {
    cat.objects()
        .flat_map(|x| rule.covers(x).iter().map(|s| sieve_quotient_module(cat, field, s).quotient).collect::<Vec<_>>())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFailure {
    /// `hom_vanishing`, `hereditary` or `quotient_torsion_free`.
    pub condition: String,
    pub detail: String,
    pub witness: ModuleDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionPairReport {
    pub passed: bool,
    pub modules_checked: usize,
    pub hom_pairs_checked: usize,
    pub failures: Vec<PairFailure>,
}

/// Pairs checked for vanishing of `Hom(T, F)`.
const HOM_PAIR_CAP: usize = 400;

/// Checks, on the cyclic family `P(x)/S̄` (every sieve) and `samples` random
/// modules over `field`:
/// (i) no nonzero maps from torsion modules to torsion-free ones,
/// (ii) submodules and quotients of torsion modules are torsion,
/// (iii) `V / T_J(V)` is torsion-free.
pub fn verify_torsion_pair(
    cat: &FiniteCategory,
    rule: &CoverRule,
    field: Field,
    samples: usize,
    seed: u64,
) -> Result<TorsionPairReport> {
    require_stability(cat, rule)?;
    let mut modules = cyclic_family(cat, field)?;
    for i in 0..samples {
        modules.push(random_module(cat, field, seed.wrapping_add(i as u64), 2));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7015);
    let mut failures = Vec::new();
    let mut torsion: Vec<KModule> = Vec::new();
    let mut free: Vec<KModule> = Vec::new();
    for v in &modules {
        let spaces = torsion_spaces_unchecked(cat, rule, v);
        let report = classify_spaces(cat, v, &spaces);
        let (q, _, _) = quotient(cat, v, &spaces);
        let q_report = classify_spaces(cat, &q, &torsion_spaces_unchecked(cat, rule, &q));
        if !q_report.is_torsion_free() {
            failures.push(PairFailure {
                condition: "quotient_torsion_free".into(),
                detail: format!("V/T(V) has torsion part of dims {:?}", q_report.dims),
                witness: v.to_doc(cat),
            });
        }
        if report.is_torsion() && !v.is_zero() {
            torsion.push(v.clone());
            // Random cyclic submodule and its quotient.
            let nonzero: Vec<Obj> = cat.objects().filter(|&x| v.dim(x) > 0).collect();
            let x = nonzero[rng.gen_range(0..nonzero.len())];
            let vec: Vec<Elem> = (0..v.dim(x)).map(|_| field.from_i64(rng.gen_range(0..3))).collect();
            let gen = v.generated_by(cat, x, &vec);
            for (label, w) in [("submodule", submodule(cat, v, &gen).0), ("quotient", quotient(cat, v, &gen).0)] {
                let r = classify_spaces(cat, &w, &torsion_spaces_unchecked(cat, rule, &w));
                if !r.is_torsion() {
                    failures.push(PairFailure {
                        condition: "hereditary".into(),
                        detail: format!("a {label} of a torsion module is not torsion"),
                        witness: v.to_doc(cat),
                    });
                }
            }
        } else if report.is_torsion_free() && !v.is_zero() {
            free.push(v.clone());
        }
        if !q.is_zero() && q_report.is_torsion_free() {
            free.push(q);
        }
        let (t, _) = submodule(cat, v, &spaces);
        if !t.is_zero() && classify_spaces(cat, &t, &torsion_spaces_unchecked(cat, rule, &t)).is_torsion() {
            torsion.push(t);
        }
    }
    let mut pairs = 0;
    'outer: for t in &torsion {
        for f in &free {
            if pairs >= HOM_PAIR_CAP {
                break 'outer;
            }
            pairs += 1;
            if !hom_space(cat, t, f)?.is_empty() {
                failures.push(PairFailure {
                    condition: "hom_vanishing".into(),
                    detail: format!("nonzero map into torsion-free module with dims {:?}", f.dims()),
                    witness: t.to_doc(cat),
                });
            }
        }
    }
    Ok(TorsionPairReport { passed: failures.is_empty(), modules_checked: modules.len(), hom_pairs_checked: pairs, failures })
}

/// First module in `candidates` whose torsion-free quotient still has torsion.
pub fn find_quotient_torsion_witness(cat: &FiniteCategory, rule: &CoverRule, candidates: &[KModule]) -> Option<KModule> {
    candidates
        .iter()
        .find(|v| {
            let spaces = torsion_spaces_unchecked(cat, rule, v);
            let (q, _, _) = quotient(cat, v, &spaces);
            !classify_spaces(cat, &q, &torsion_spaces_unchecked(cat, rule, &q)).is_torsion_free()
        })
        .cloned()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTripReport {
    pub equal: bool,
    /// Per object: covers of `J` not recovered from realized annihilators.
    pub missing: BTreeMap<String, Vec<Vec<String>>>,
    /// Per object: recovered sieves that are not covers of `J`.
    pub extra: BTreeMap<String, Vec<Vec<String>>>,
}

/// Recovers `J` from the annihilators realized by its generators
/// `P(x)/S̄` over `F_p`, closed under supersets, and compares.
pub fn nullstellensatz_roundtrip(cat: &FiniteCategory, rule: &CoverRule, p: u64) -> Result<RoundTripReport> {
    let report = check_axioms(cat, rule)?;
    if !(report.inclusion_closed && report.intersection_closed) {
        return Err(Error::PreconditionFails("rule must be closed under supersets and intersections".into()));
    }
    let field = Field::prime(p)?;
    let gens = generator_family(cat, field, rule);
    let mut realized = Vec::new();
    for x in cat.objects() {
        realized.push(realized_annihilators(cat, &gens, x)?);
    }
    let closed = inclusion_closure(cat, &CoverRule::new(cat, realized)?)?;
    let mut missing = BTreeMap::new();
    let mut extra = BTreeMap::new();
    for x in cat.objects() {
        let m: Vec<Vec<String>> = rule.covers(x).iter().filter(|s| !closed.contains(s)).map(|s| s.names(cat)).collect();
        let e: Vec<Vec<String>> = closed.covers(x).iter().filter(|s| !rule.contains(s)).map(|s| s.names(cat)).collect();
        if !m.is_empty() {
            missing.insert(cat.obj_name(x).to_string(), m);
        }
        if !e.is_empty() {
            extra.insert(cat.obj_name(x).to_string(), e);
        }
    }
    Ok(RoundTripReport { equal: missing.is_empty() && extra.is_empty(), missing, extra })
}
