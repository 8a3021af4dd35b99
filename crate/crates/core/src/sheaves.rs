//! Matching families, the three sheaf detectors, sheafification by the plus
//! construction, and the equivalence with modules over the irreducible part of
//! a rigid topology.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FiniteCategory, Obj};
use crate::linalg::{Elem, Field, Matrix, Subspace};
use crate::modrep::{
    are_isomorphic, coinduction, coinduction_unit, coinduction_counit, default_summand_order, hom_space,
    injective_embedding_ordered, quotient, random_module, restriction, sieve_quotient_module, submodule, KModule,
    ModuleMap,
};
use crate::sieves::Sieve;
use crate::topology::{check_axioms, irreducible_objects, rigidity, CoverRule, GrothendieckTopology};
use crate::torsion::{classify_spaces, torsion_spaces_unchecked};

fn require_topology(cat: &FiniteCategory, rule: &CoverRule) -> Result<()> {
    let report = check_axioms(cat, rule)?;
    if report.is_topology() {
        Ok(())
    } else {
        Err(Error::NotATopology(report.summary()))
    }
}

fn fmt_vec(field: Field, v: &[Elem]) -> Vec<String> {
    v.iter().map(|e| field.format_elem(e)).collect()
}

/// Matching families for `S` in `V`. A family is a block vector with one
/// block `v_f ∈ V_{cod f}` per member `f` of `S`, in member order.
#[derive(Clone, Debug)]
pub struct MatchingSpace {
    pub sieve: Sieve,
    /// Start of each member's block.
    pub offsets: Vec<usize>,
    pub ambient: usize,
    /// Columns form a basis of the families.
    pub basis: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingDoc {
    pub base: String,
    pub sieve: Vec<String>,
    /// One entry per basis family, mapping member to its block.
    pub families: Vec<Vec<(String, Vec<String>)>>,
}

impl MatchingSpace {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn base(&self) -> Obj {
        self.sieve.base()
    }

    fn block(&self, member: usize, v: &KModule, cat: &FiniteCategory) -> std::ops::Range<usize> {
        let f = self.sieve.members()[member];
        let start = self.offsets[member];
        start..start + v.dim(cat.cod(f))
    }

    pub fn to_doc(&self, cat: &FiniteCategory, v: &KModule) -> MatchingDoc {
        let field = v.field();
        let families = (0..self.dim())
            .map(|c| {
                let col = self.basis.column(c);
                self.sieve
                    .members()
                    .iter()
                    .enumerate()
                    .map(|(i, &f)| (cat.mor_name(f).to_string(), fmt_vec(field, &col[self.block(i, v, cat)])))
                    .collect()
            })
            .collect();
        MatchingDoc { base: cat.obj_name(self.base()).to_string(), sieve: self.sieve.names(cat), families }
    }
}

pub fn matching_space(cat: &FiniteCategory, v: &KModule, s: &Sieve) -> MatchingSpace {
    let field = v.field();
    let members = s.members();
    let mut offsets = Vec::with_capacity(members.len());
    let mut ambient = 0;
    for &f in members {
        offsets.push(ambient);
        ambient += v.dim(cat.cod(f));
    }
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for (a, &f) in members.iter().enumerate() {
        for &g in cat.out_of(cat.cod(f)) {
            if cat.is_identity(g) {
                continue;
            }
            let b = members.binary_search(&cat.compose(g, f)).expect("sieves are closed under postcomposition");
            let vg = v.action(g);
            for i in 0..vg.rows() {
                let mut row = vec![field.zero(); ambient];
                for j in 0..vg.cols() {
                    row[offsets[a] + j] = vg.get(i, j).clone();
                }
                let t = offsets[b] + i;
                row[t] = field.sub(&row[t], &field.one());
                rows.push(row);
            }
        }
    }
    let basis = if ambient == 0 {
        Matrix::zeros(field, 0, 0)
    } else if rows.is_empty() {
        Matrix::identity(field, ambient)
    } else {
        let n = rows.len();
        Matrix::from_rows(field, n, ambient, rows).expect("rows have ambient width").kernel_matrix()
    };
    MatchingSpace { sieve: s.clone(), offsets, ambient, basis }
}

/// `v ↦ (V_f v)_{f ∈ S}` in block coordinates.
fn family_of_elements(v: &KModule, s: &Sieve) -> Matrix {
    let x = s.base();
    let blocks: Vec<&Matrix> = s.members().iter().map(|&f| v.action(f)).collect();
    Matrix::vstack(v.field(), v.dim(x), &blocks)
}

fn coordinates(space: &MatchingSpace, field: Field, ambient_cols: &Matrix) -> Matrix {
    if space.dim() == 0 || ambient_cols.cols() == 0 {
        Matrix::zeros(field, space.dim(), ambient_cols.cols())
    } else {
        space.basis.solve(ambient_cols).expect("columns are matching families")
    }
}

/// The amalgamation map `V_x → Match(S, V)` in the basis of `space`.
pub fn amalgamation_map(v: &KModule, space: &MatchingSpace) -> Matrix {
    coordinates(space, v.field(), &family_of_elements(v, &space.sieve))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafFailure {
    pub object: String,
    pub sieve: Vec<String>,
    /// `not_injective` or `not_surjective`.
    pub kind: String,
    /// A kernel vector of `V_x`, or a family with no amalgamation.
    pub vector: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafStatus {
    pub separated: bool,
    pub sheaf: bool,
    pub failures: Vec<SheafFailure>,
}

pub fn sheaf_status(cat: &FiniteCategory, rule: &CoverRule, v: &KModule) -> Result<SheafStatus> {
    require_topology(cat, rule)?;
    let field = v.field();
    let mut failures = Vec::new();
    for x in cat.objects() {
        for s in rule.covers(x) {
            let space = matching_space(cat, v, s);
            let a = amalgamation_map(v, &space);
            let rank = a.rank();
            let failure = |kind: &str, vector: Vec<Elem>| SheafFailure {
                object: cat.obj_name(x).to_string(),
                sieve: s.names(cat),
                kind: kind.to_string(),
                vector: fmt_vec(field, &vector),
            };
            if rank < v.dim(x) {
                failures.push(failure("not_injective", a.kernel()[0].clone()));
            }
            if rank < space.dim() {
                let image = Subspace::span_columns(&a);
                let missing = (0..space.dim()).find(|&c| !image.contains(&unit(field, space.dim(), c))).unwrap();
                failures.push(failure("not_surjective", space.basis.column(missing)));
            }
        }
    }
    let separated = failures.iter().all(|f| f.kind != "not_injective");
    Ok(SheafStatus { separated, sheaf: failures.is_empty(), failures })
}

fn unit(field: Field, n: usize, i: usize) -> Vec<Elem> {
    (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationStatus {
    pub torsion_free: bool,
    pub r1_zero: bool,
    /// Per object dimension of `R¹T_J(V)`.
    pub r1_dims: Vec<usize>,
}

impl SaturationStatus {
    pub fn saturated(&self) -> bool {
        self.torsion_free && self.r1_zero
    }
}

pub fn saturation_status(cat: &FiniteCategory, rule: &CoverRule, v: &KModule) -> Result<SaturationStatus> {
    saturation_status_ordered(cat, rule, v, &default_summand_order(cat, v))
}

/// As `saturation_status`, embedding `V` into injectives with the given
/// summand order.
pub fn saturation_status_ordered(
    cat: &FiniteCategory,
    rule: &CoverRule,
    v: &KModule,
    order: &[(Obj, usize)],
) -> Result<SaturationStatus> {
    require_topology(cat, rule)?;
    let torsion_free = torsion_spaces_unchecked(cat, rule, v).iter().all(|s| s.is_zero());
    let (i0, iota) = injective_embedding_ordered(cat, v, order);
    let (c, pi, _) = quotient(cat, &i0, &iota.image_spaces());
    let t_i0 = torsion_spaces_unchecked(cat, rule, &i0);
    let t_c = torsion_spaces_unchecked(cat, rule, &c);
    let r1_dims: Vec<usize> =
        cat.objects().map(|x| t_c[x.0].dim() - t_i0[x.0].image(pi.component(x)).dim()).collect();
    Ok(SaturationStatus { torsion_free, r1_zero: r1_dims.iter().all(|&d| d == 0), r1_dims })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerpendicularStatus {
    /// `Hom(P(x)/S̄, V) = 0` for every cover.
    pub hom_zero: bool,
    /// `Ext¹(P(x)/S̄, V) = 0` for every cover.
    pub ext1_zero: bool,
    /// Covers where a condition fails: object, sieve, which condition.
    pub failures: Vec<(String, Vec<String>, String)>,
}

impl PerpendicularStatus {
    pub fn perpendicular(&self) -> bool {
        self.hom_zero && self.ext1_zero
    }
}

fn flatten(map: &ModuleMap) -> Vec<Elem> {
    map.components().iter().flat_map(|m| (0..m.rows()).flat_map(move |i| m.row(i).to_vec())).collect()
}

/// Tests the restriction `Hom(P(x), V) → Hom(S̄, V)` for each cover `S`,
/// with `Hom(S̄, V)` computed as a space of natural transformations.
pub fn perpendicular_status(cat: &FiniteCategory, rule: &CoverRule, v: &KModule) -> Result<PerpendicularStatus> {
    require_topology(cat, rule)?;
    let field = v.field();
    let mut failures = Vec::new();
    for x in cat.objects() {
        for s in rule.covers(x) {
            let sq = sieve_quotient_module(cat, field, s);
            let target_dim = hom_space(cat, &sq.sub, v)?.len();
            // Column i: the map S̄ → P(x) → V sending 1_x to the i-th basis vector.
            let cols: Vec<Vec<Elem>> = (0..v.dim(x))
                .map(|i| {
                    let e = unit(field, v.dim(x), i);
                    let components = cat
                        .objects()
                        .map(|y| {
                            let hs = cat.hom(x, y);
                            let images: Vec<Vec<Elem>> = hs.iter().map(|&h| v.action(h).apply(&e)).collect();
                            let m = Matrix::from_columns(field, v.dim(y), &images);
                            m.mul(sq.inclusion.component(y))
                        })
                        .collect();
                    flatten(&ModuleMap::new(components))
                })
                .collect();
            let rank = if cols.is_empty() || cols[0].is_empty() {
                0
            } else {
                Matrix::from_columns(field, cols[0].len(), &cols).rank()
            };
            let tag = |c: &str| (cat.obj_name(x).to_string(), s.names(cat), c.to_string());
            if rank < v.dim(x) {
                failures.push(tag("hom_zero"));
            }
            if rank < target_dim {
                failures.push(tag("ext1_zero"));
            }
        }
    }
    Ok(PerpendicularStatus {
        hom_zero: failures.iter().all(|f| f.2 != "hom_zero"),
        ext1_zero: failures.iter().all(|f| f.2 != "ext1_zero"),
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafVerdict {
    pub separated: bool,
    pub sheaf: bool,
    pub saturated: SaturationStatus,
    pub perpendicular: PerpendicularStatus,
    pub sheaf_failures: Vec<SheafFailure>,
    /// The three detectors agree and separation matches torsion-freeness.
    pub consistent: bool,
}

pub fn sheaf_verdict(cat: &FiniteCategory, rule: &CoverRule, v: &KModule) -> Result<SheafVerdict> {
    let st = sheaf_status(cat, rule, v)?;
    let sat = saturation_status(cat, rule, v)?;
    let perp = perpendicular_status(cat, rule, v)?;
    let consistent =
        st.sheaf == sat.saturated() && st.sheaf == perp.perpendicular() && st.separated == sat.torsion_free;
    Ok(SheafVerdict {
        separated: st.separated,
        sheaf: st.sheaf,
        saturated: sat,
        perpendicular: perp,
        sheaf_failures: st.failures,
        consistent,
    })
}

/// `V⁺_x = Match(S_min(x), V)` with `(g·m)_h = m_{h∘g}`, and the unit
/// `V → V⁺` given by amalgamation.
pub fn plus_construction(cat: &FiniteCategory, rule: &CoverRule, v: &KModule) -> Result<(KModule, ModuleMap)> {
    require_topology(cat, rule)?;
    let field = v.field();
    let spaces: Vec<MatchingSpace> = cat
        .objects()
        .map(|x| matching_space(cat, v, &rule.minimal_cover(x).expect("a topology covers every object")))
        .collect();
    let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
    let mut action = Vec::new();
    for g in cat.morphisms() {
        let (x, y) = (cat.dom(g), cat.cod(g));
        let (src, dst) = (&spaces[x.0], &spaces[y.0]);
        let mut reindex = Matrix::zeros(field, dst.ambient, src.ambient);
        for (b, &h) in dst.sieve.members().iter().enumerate() {
            let a = src.sieve.members().binary_search(&cat.compose(h, g)).map_err(|_| {
                Error::StabilityFails(format!("{} o {} is not in the least cover", cat.mor_name(h), cat.mor_name(g)))
            })?;
            for i in 0..v.dim(cat.cod(h)) {
                reindex.set(dst.offsets[b] + i, src.offsets[a] + i, field.one());
            }
        }
        action.push(coordinates(dst, field, &reindex.mul(&src.basis)));
    }
    let plus = KModule::new(cat, field, dims, action)?;
    let unit = ModuleMap::new(cat.objects().map(|x| amalgamation_map(v, &spaces[x.0])).collect());
    Ok((plus, unit))
}

#[derive(Clone, Debug)]
pub struct Sheafified {
    pub module: KModule,
    pub unit: ModuleMap,
    /// The output passes `sheaf_status`.
    pub is_sheaf: bool,
    /// Kernel and cokernel of the unit are torsion.
    pub unit_kernel_torsion: bool,
    pub unit_cokernel_torsion: bool,
}

impl Sheafified {
    pub fn verified(&self) -> bool {
        self.is_sheaf && self.unit_kernel_torsion && self.unit_cokernel_torsion
    }
}

/// `V♯ = (V⁺)⁺` with the composite unit; the contract is re-checked.
pub fn sheafify(cat: &FiniteCategory, rule: &CoverRule, v: &KModule) -> Result<Sheafified> {
    let (p1, u1) = plus_construction(cat, rule, v)?;
    let (p2, u2) = plus_construction(cat, rule, &p1)?;
    let unit = u2.after(&u1);
    let is_sheaf = sheaf_status(cat, rule, &p2)?.sheaf;
    let (ker, _) = submodule(cat, v, &unit.kernel_spaces());
    let (coker, _, _) = quotient(cat, &p2, &unit.image_spaces());
    let is_torsion = |m: &KModule| classify_spaces(cat, m, &torsion_spaces_unchecked(cat, rule, m)).is_torsion();
    Ok(Sheafified {
        unit_kernel_torsion: is_torsion(&ker),
        unit_cokernel_torsion: is_torsion(&coker),
        module: p2,
        unit,
        is_sheaf,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub passed: bool,
    pub irreducible: Vec<String>,
    pub samples: usize,
    pub failures: Vec<String>,
}

/// For a rigid topology with irreducible objects `D`, checks on samples that
/// (a) torsion modules are exactly those vanishing on `D`,
/// (b) coinduction from `D` lands in sheaves and restricts back to the input,
/// (c) sheaves are coinduced from their restriction to `D`.
pub fn verify_rigid_equivalence(
    cat: &FiniteCategory,
    j: &GrothendieckTopology,
    field: Field,
    samples: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    if !rigidity(cat, j).rigid {
        return Err(Error::NotRigid(j.key(cat)));
    }
    let d = irreducible_objects(cat, j);
    let (sub, emb) = cat.full_subcategory(&d)?;
    let mut failures = Vec::new();
    for i in 0..samples {
        let s = seed.wrapping_add(i as u64);
        let v = random_module(cat, field, s, 3);
        let torsion = classify_spaces(cat, &v, &torsion_spaces_unchecked(cat, j, &v)).is_torsion();
        if torsion != restriction(cat, &emb, &v).is_zero() {
            failures.push(format!("sample {i}: torsion does not match vanishing on irreducibles"));
        }

        let w = random_module(&sub, field, s ^ 0x5eed, 3);
        let co = coinduction(cat, &sub, &emb, &w)?;
        if !sheaf_status(cat, j, &co.module)?.sheaf {
            failures.push(format!("sample {i}: coinduced module is not a sheaf"));
        }
        let counit = coinduction_counit(cat, &emb, &w, &co);
        if !counit.is_iso() {
            failures.push(format!("sample {i}: restriction of coinduction is not the input"));
        }

        let sh = sheafify(cat, j, &v)?.module;
        let res = restriction(cat, &emb, &sh);
        let co = coinduction(cat, &sub, &emb, &res)?;
        if !coinduction_unit(cat, &emb, &sh, &co).is_iso() || !are_isomorphic(cat, &sh, &co.module)? {
            failures.push(format!("sample {i}: sheaf is not coinduced from its restriction"));
        }
    }
    Ok(EquivalenceReport {
        passed: failures.is_empty(),
        irreducible: d.iter().map(|&x| cat.obj_name(x).to_string()).collect(),
        samples,
        failures,
    })
}
