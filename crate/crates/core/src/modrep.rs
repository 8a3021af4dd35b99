//! Modules over a finite category with constant coefficients in a field:
//! a vector space per object and a matrix per morphism, covariant in the
//! morphisms (`V_f : V_x → V_y` for `f : x → y`).

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{Embedding, FiniteCategory, Mor, Obj};
use crate::linalg::{Elem, Field, Matrix, Subspace};
use crate::sieves::Sieve;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KModule {
    field: Field,
    dims: Vec<usize>,
    action: Vec<Matrix>,
}

/// A family of matrices `φ_x : V_x → W_x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleMap {
    components: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDoc {
    Name(String),
    Prime {
        #[serde(rename = "Fp")]
        p: u64,
    },
}

impl FieldDoc {
    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldDoc::Name(s) => Field::parse(s),
            FieldDoc::Prime { p } => Field::prime(*p),
        }
    }

    pub fn from_field(f: Field) -> FieldDoc {
        match f {
            Field::Rational => FieldDoc::Name("Q".into()),
            Field::Prime(p) => FieldDoc::Prime { p },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub field: FieldDoc,
    pub dims: BTreeMap<String, usize>,
    /// Morphism id → matrix rows. Identities and morphisms touching a zero
    /// space may be omitted.
    #[serde(default)]
    pub action: BTreeMap<String, Vec<Vec<String>>>,
}

impl KModule {
    /// Builds a module and checks shapes, identities and functoriality.
    pub fn new(cat: &FiniteCategory, field: Field, dims: Vec<usize>, action: Vec<Matrix>) -> Result<KModule> {
        if dims.len() != cat.num_objects() || action.len() != cat.num_morphisms() {
            return Err(Error::ShapeMismatch("dimension vector or action list has the wrong length".into()));
        }
        for f in cat.morphisms() {
            let m = &action[f.0];
            let want = (dims[cat.cod(f).0], dims[cat.dom(f).0]);
            if (m.rows(), m.cols()) != want {
                return Err(Error::ShapeMismatch(format!(
                    "action of {} is {}x{}, expected {}x{}",
                    cat.mor_name(f),
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
            if m.field() != field {
                return Err(Error::FieldMismatch(field.name(), m.field().name()));
            }
        }
        let v = KModule { field, dims, action };
        v.check_functor(cat)?;
        Ok(v)
    }

    fn check_functor(&self, cat: &FiniteCategory) -> Result<()> {
        for x in cat.objects() {
            if !self.action[cat.id(x).0].is_identity() {
                return Err(Error::NonIdentityAtObject(cat.obj_name(x).to_string()));
            }
        }
        for f in cat.morphisms() {
            for &g in cat.out_of(cat.cod(f)) {
                let gf = cat.compose(g, f);
                if self.action[gf.0] != self.action[g.0].mul(&self.action[f.0]) {
                    return Err(Error::FunctorialityViolation {
                        g: cat.mor_name(g).to_string(),
                        f: cat.mor_name(f).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn zero(cat: &FiniteCategory, field: Field) -> KModule {
        Self::uniform(cat, field, 0)
    }

    /// The constant module `k`: every space one-dimensional, every map the identity.
    pub fn constant(cat: &FiniteCategory, field: Field) -> KModule {
        Self::uniform(cat, field, 1)
    }

    fn uniform(cat: &FiniteCategory, field: Field, d: usize) -> KModule {
        KModule {
            field,
            dims: vec![d; cat.num_objects()],
            action: cat.morphisms().map(|_| Matrix::identity(field, d)).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, x: Obj) -> usize {
        self.dims[x.0]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn action(&self, f: Mor) -> &Matrix {
        &self.action[f.0]
    }

    pub fn from_doc(cat: &FiniteCategory, doc: &ModuleDoc) -> Result<KModule> {
        let field = doc.field.to_field()?;
        let mut dims = vec![0; cat.num_objects()];
        for (name, &d) in &doc.dims {
            dims[cat.obj(name)?.0] = d;
        }
        for name in doc.action.keys() {
            cat.mor(name)?;
        }
        let mut action = Vec::new();
        for f in cat.morphisms() {
            let (r, c) = (dims[cat.cod(f).0], dims[cat.dom(f).0]);
            let m = match doc.action.get(cat.mor_name(f)) {
                Some(rows) if rows.is_empty() && (r == 0 || c == 0) => Matrix::zeros(field, r, c),
                Some(rows) => Matrix::from_strings(field, r, c, rows).map_err(|e| match e {
                    Error::ShapeMismatch(m) => Error::ShapeMismatch(format!("{}: {m}", cat.mor_name(f))),
                    other => other,
                })?,
                None if cat.is_identity(f) => Matrix::identity(field, r),
                None if r == 0 || c == 0 => Matrix::zeros(field, r, c),
                None => {
                    return Err(Error::ShapeMismatch(format!("no action given for {}", cat.mor_name(f))))
                }
            };
            action.push(m);
        }
        KModule::new(cat, field, dims, action)
    }

    pub fn from_json(cat: &FiniteCategory, text: &str) -> Result<KModule> {
        let doc: ModuleDoc = serde_json::from_str(text)?;
        Self::from_doc(cat, &doc)
    }

    pub fn to_doc(&self, cat: &FiniteCategory) -> ModuleDoc {
        ModuleDoc {
            field: FieldDoc::from_field(self.field),
            dims: cat.objects().map(|x| (cat.obj_name(x).to_string(), self.dim(x))).collect(),
            action: cat.morphisms().map(|f| (cat.mor_name(f).to_string(), self.action(f).to_strings())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &KModule) -> KModule {
        assert_eq!(self.field, other.field);
        KModule {
            field: self.field,
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            action: self
                .action
                .iter()
                .zip(&other.action)
                .map(|(a, b)| Matrix::block_diag(self.field, &[a, b]))
                .collect(),
        }
    }

    /// Objectwise span of `V_g v` over all `g` out of `x`: the submodule
    /// generated by `v ∈ V_x`.
    pub fn generated_by(&self, cat: &FiniteCategory, x: Obj, v: &[Elem]) -> Vec<Subspace> {
        let mut spans: Vec<Vec<Vec<Elem>>> = vec![Vec::new(); cat.num_objects()];
        for &g in cat.out_of(x) {
            spans[cat.cod(g).0].push(self.action(g).apply(v));
        }
        spans
            .iter()
            .enumerate()
            .map(|(y, vs)| Subspace::span(self.field, self.dims[y], vs))
            .collect()
    }

    /// Whether the family of subspaces is preserved by every structure map.
    pub fn is_invariant(&self, cat: &FiniteCategory, spaces: &[Subspace]) -> bool {
        cat.morphisms().all(|f| spaces[cat.cod(f).0].contains_subspace(&spaces[cat.dom(f).0].image(self.action(f))))
    }
}

impl ModuleMap {
    pub fn new(components: Vec<Matrix>) -> ModuleMap {
        ModuleMap { components }
    }

    pub fn identity(v: &KModule) -> ModuleMap {
        ModuleMap { components: v.dims.iter().map(|&d| Matrix::identity(v.field, d)).collect() }
    }

    pub fn zero(v: &KModule, w: &KModule) -> ModuleMap {
        ModuleMap { components: v.dims.iter().zip(&w.dims).map(|(&a, &b)| Matrix::zeros(v.field, b, a)).collect() }
    }

    pub fn component(&self, x: Obj) -> &Matrix {
        &self.components[x.0]
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ModuleMap) -> ModuleMap {
        ModuleMap { components: self.components.iter().zip(&first.components).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|m| m.is_invertible())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|m| m.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.components.iter().all(|m| m.rank() == m.rows())
    }

    /// Checks `φ_y V_f = W_f φ_x` for every `f`.
    pub fn check_natural(&self, cat: &FiniteCategory, v: &KModule, w: &KModule) -> Result<()> {
        for x in cat.objects() {
            let c = &self.components[x.0];
            if (c.rows(), c.cols()) != (w.dim(x), v.dim(x)) {
                return Err(Error::ShapeMismatch(format!("component at {}", cat.obj_name(x))));
            }
        }
        for f in cat.morphisms() {
            let (x, y) = (cat.dom(f), cat.cod(f));
            if self.components[y.0].mul(v.action(f)) != w.action(f).mul(&self.components[x.0]) {
                return Err(Error::NotNatural(cat.mor_name(f).to_string()));
            }
        }
        Ok(())
    }

    pub fn kernel_spaces(&self) -> Vec<Subspace> {
        self.components.iter().map(|m| Subspace::span_columns(&m.kernel_matrix())).collect()
    }

    pub fn image_spaces(&self) -> Vec<Subspace> {
        self.components.iter().map(Subspace::span_columns).collect()
    }
}

/// A submodule given by invariant subspaces, as a module plus its inclusion.
pub fn submodule(cat: &FiniteCategory, v: &KModule, spaces: &[Subspace]) -> (KModule, ModuleMap) {
    let field = v.field;
    let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
    let action = cat
        .morphisms()
        .map(|f| {
            let (x, y) = (cat.dom(f), cat.cod(f));
            let image = v.action(f).mul(spaces[x.0].basis());
            if dims[y.0] == 0 || dims[x.0] == 0 {
                return Matrix::zeros(field, dims[y.0], dims[x.0]);
            }
            spaces[y.0].basis().solve(&image).expect("subspaces must be invariant")
        })
        .collect();
    let inclusion = ModuleMap { components: spaces.iter().map(|s| s.basis().clone()).collect() };
    (KModule { field, dims, action }, inclusion)
}

/// Quotient by invariant subspaces, as a module plus the projection and a
/// linear section of it at each object.
pub fn quotient(cat: &FiniteCategory, v: &KModule, spaces: &[Subspace]) -> (KModule, ModuleMap, Vec<Matrix>) {
    let field = v.field;
    let maps: Vec<(Matrix, Matrix)> = spaces.iter().map(|s| s.quotient_maps()).collect();
    let dims: Vec<usize> = maps.iter().map(|(q, _)| q.rows()).collect();
    let action = cat
        .morphisms()
        .map(|f| {
            let (x, y) = (cat.dom(f), cat.cod(f));
            maps[y.0].0.mul(v.action(f)).mul(&maps[x.0].1)
        })
        .collect();
    let projection = ModuleMap { components: maps.iter().map(|(q, _)| q.clone()).collect() };
    let sections = maps.into_iter().map(|(_, s)| s).collect();
    (KModule { field, dims, action }, projection, sections)
}

/// `P(x)`: at `y` the free space on `C(x, y)`, with `g` acting by
/// postcomposition. Basis vectors follow the order of `cat.hom(x, y)`.
pub fn yoneda_module(cat: &FiniteCategory, field: Field, x: Obj) -> KModule {
    let dims: Vec<usize> = cat.objects().map(|y| cat.hom(x, y).len()).collect();
    let pos = |h: Mor| cat.hom(x, cat.cod(h)).iter().position(|&m| m == h).unwrap();
    let action = cat
        .morphisms()
        .map(|g| {
            let (y, z) = (cat.dom(g), cat.cod(g));
            let mut m = Matrix::zeros(field, dims[z.0], dims[y.0]);
            for (j, &h) in cat.hom(x, y).iter().enumerate() {
                m.set(pos(cat.compose(g, h)), j, field.one());
            }
            m
        })
        .collect();
    KModule { field, dims, action }
}

/// Coordinates of the basis vector of `h` in `P(dom h)_{cod h}`.
pub fn yoneda_basis_vector(cat: &FiniteCategory, field: Field, h: Mor) -> Vec<Elem> {
    let list = cat.hom(cat.dom(h), cat.cod(h));
    list.iter().map(|&m| if m == h { field.one() } else { field.zero() }).collect()
}

/// `S̄ ⊆ P(x)` and the quotient `P(x)/S̄` for a sieve `S` on `x`.
#[derive(Clone, Debug)]
pub struct SieveQuotient {
    pub sub: KModule,
    pub inclusion: ModuleMap,
    pub quotient: KModule,
    pub projection: ModuleMap,
    /// Image of the generator `1_x` in the quotient at `x`.
    pub generator: Vec<Elem>,
}

pub fn sieve_spaces(cat: &FiniteCategory, field: Field, s: &Sieve) -> Vec<Subspace> {
    let x = s.base();
    cat.objects()
        .map(|y| {
            let vecs: Vec<Vec<Elem>> =
                s.members_to(cat, y).into_iter().map(|h| yoneda_basis_vector(cat, field, h)).collect();
            Subspace::span(field, cat.hom(x, y).len(), &vecs)
        })
        .collect()
}

pub fn sieve_quotient_module(cat: &FiniteCategory, field: Field, s: &Sieve) -> SieveQuotient {
    let x = s.base();
    let p = yoneda_module(cat, field, x);
    let spaces = sieve_spaces(cat, field, s);
    let (sub, inclusion) = submodule(cat, &p, &spaces);
    let (quotient, projection, _) = quotient(cat, &p, &spaces);
    let generator = projection.component(x).apply(&yoneda_basis_vector(cat, field, cat.id(x)));
    SieveQuotient { sub, inclusion, quotient, projection, generator }
}

/// `E(x)`: at `y` the dual of the free space on `C(y, x)`, basis `δ_h`; a
/// morphism `g: y → z` sends `δ_h` to the sum of `δ_{h'}` over `h': z → x`
/// with `h'∘g = h`.
pub fn standard_injective(cat: &FiniteCategory, field: Field, x: Obj) -> KModule {
    let dims: Vec<usize> = cat.objects().map(|y| cat.hom(y, x).len()).collect();
    let action = cat
        .morphisms()
        .map(|g| {
            let (y, z) = (cat.dom(g), cat.cod(g));
            let mut m = Matrix::zeros(field, dims[z.0], dims[y.0]);
            for (i, &h2) in cat.hom(z, x).iter().enumerate() {
                let h = cat.compose(h2, g);
                let j = cat.hom(y, x).iter().position(|&m| m == h).unwrap();
                m.set(i, j, field.one());
            }
            m
        })
        .collect();
    KModule { field, dims, action }
}

/// `V ↪ I₀ = ⊕ E(x)^{dim V_x}`, with summands taken in `order`
/// (pairs `(x, i)` for coordinate `i` of `V_x`; every pair exactly once).
pub fn injective_embedding_ordered(
    cat: &FiniteCategory,
    v: &KModule,
    order: &[(Obj, usize)],
) -> (KModule, ModuleMap) {
    let field = v.field;
    let pieces: Vec<KModule> = order.iter().map(|&(x, _)| standard_injective(cat, field, x)).collect();
    let mut total = KModule::zero(cat, field);
    for p in &pieces {
        total = total.direct_sum(p);
    }
    let components = cat
        .objects()
        .map(|y| {
            let mut rows: Vec<Vec<Elem>> = Vec::new();
            for &(x, i) in order {
                for &h in cat.hom(y, x) {
                    rows.push(v.action(h).row(i).to_vec());
                }
            }
            Matrix::from_rows(field, rows.len(), v.dim(y), rows).expect("rows have the right width")
        })
        .collect();
    (total, ModuleMap { components })
}

pub fn default_summand_order(cat: &FiniteCategory, v: &KModule) -> Vec<(Obj, usize)> {
    cat.objects().flat_map(|x| (0..v.dim(x)).map(move |i| (x, i))).collect()
}

pub fn injective_embedding(cat: &FiniteCategory, v: &KModule) -> (KModule, ModuleMap) {
    injective_embedding_ordered(cat, v, &default_summand_order(cat, v))
}

/// Unknowns for a family of matrices `φ_x : V_x → W_x`, laid out object by
/// object in row-major order.
struct MapVars {
    offset: Vec<usize>,
    src: Vec<usize>,
    total: usize,
}

impl MapVars {
    fn new(v: &[usize], w: &[usize]) -> MapVars {
        let mut offset = Vec::new();
        let mut total = 0;
        for (a, b) in v.iter().zip(w) {
            offset.push(total);
            total += a * b;
        }
        MapVars { offset, src: v.to_vec(), total }
    }

    fn var(&self, x: usize, i: usize, j: usize) -> usize {
        self.offset[x] + i * self.src[x] + j
    }

    fn unpack(&self, field: Field, w: &[usize], sol: &[Elem]) -> ModuleMap {
        ModuleMap {
            components: (0..self.src.len())
                .map(|x| Matrix::from_fn(field, w[x], self.src[x], |i, j| sol[self.var(x, i, j)].clone()))
                .collect(),
        }
    }
}

/// Rows of the naturality constraints `φ_y V_f − W_f φ_x = 0`.
fn naturality_rows(cat: &FiniteCategory, v: &KModule, w: &KModule, vars: &MapVars) -> Vec<Vec<Elem>> {
    let field = v.field;
    let mut rows = Vec::new();
    for f in cat.morphisms() {
        if cat.is_identity(f) {
            continue;
        }
        let (x, y) = (cat.dom(f), cat.cod(f));
        let (vf, wf) = (v.action(f), w.action(f));
        for i in 0..w.dim(y) {
            for j in 0..v.dim(x) {
                let mut row = vec![Elem::zero(); vars.total];
                for k in 0..v.dim(y) {
                    let c = vf.get(k, j);
                    if !c.is_zero() {
                        let idx = vars.var(y.0, i, k);
                        row[idx] = field.add(&row[idx], c);
                    }
                }
                for k in 0..w.dim(x) {
                    let c = wf.get(i, k);
                    if !c.is_zero() {
                        let idx = vars.var(x.0, k, j);
                        row[idx] = field.sub(&row[idx], c);
                    }
                }
                if row.iter().any(|e| !e.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// A basis of the space of module maps `V → W`.
pub fn hom_space(cat: &FiniteCategory, v: &KModule, w: &KModule) -> Result<Vec<ModuleMap>> {
    if v.field != w.field {
        return Err(Error::FieldMismatch(v.field.name(), w.field.name()));
    }
    let vars = MapVars::new(&v.dims, &w.dims);
    if vars.total == 0 {
        return Ok(Vec::new());
    }
    let rows = naturality_rows(cat, v, w, &vars);
    let n = rows.len();
    let system = Matrix::from_rows(v.field, n, vars.total, rows)?;
    Ok(system.kernel().iter().map(|sol| vars.unpack(v.field, &w.dims, sol)).collect())
}

/// Solves for a module map `φ : V → W` with `φ ∘ a = b`, where `a : A → V`
/// and `b : A → W` are given componentwise.
pub fn solve_extension(
    cat: &FiniteCategory,
    v: &KModule,
    w: &KModule,
    a: &ModuleMap,
    b: &ModuleMap,
) -> Option<ModuleMap> {
    let field = v.field;
    let vars = MapVars::new(&v.dims, &w.dims);
    let mut rows = naturality_rows(cat, v, w, &vars);
    let mut rhs = vec![Elem::zero(); rows.len()];
    for x in cat.objects() {
        let (ax, bx) = (a.component(x), b.component(x));
        for i in 0..w.dim(x) {
            for j in 0..ax.cols() {
                let mut row = vec![Elem::zero(); vars.total];
                for k in 0..v.dim(x) {
                    row[vars.var(x.0, i, k)] = ax.get(k, j).clone();
                }
                rows.push(row);
                rhs.push(bx.get(i, j).clone());
            }
        }
    }
    if vars.total == 0 {
        return rhs.iter().all(|e| e.is_zero()).then(|| vars.unpack(field, &w.dims, &[]));
    }
    let n = rows.len();
    let m = Matrix::from_rows(field, n, vars.total, rows).ok()?;
    m.solve_vec(&rhs).map(|sol| vars.unpack(field, &w.dims, &sol))
}

/// Whether `V` is injective: the canonical embedding into `I₀` must split.
pub fn is_injective(cat: &FiniteCategory, v: &KModule) -> bool {
    let (i0, iota) = injective_embedding(cat, v);
    solve_extension(cat, &i0, v, &iota, &ModuleMap::identity(v)).is_some()
}

/// Upper bound on exhaustively enumerated combinations over a finite field.
const ISO_ENUM_CAP: u64 = 1 << 14;
const ISO_RANDOM_TRIES: usize = 256;

/// Looks for an invertible map `V → W` among combinations of a hom-space basis.
pub fn find_isomorphism(cat: &FiniteCategory, v: &KModule, w: &KModule) -> Result<Option<ModuleMap>> {
    if v.field != w.field {
        return Err(Error::FieldMismatch(v.field.name(), w.field.name()));
    }
    if v.dims != w.dims {
        return Ok(None);
    }
    let field = v.field;
    if v.is_zero() {
        return Ok(Some(ModuleMap::zero(v, w)));
    }
    let basis = hom_space(cat, v, w)?;
    let k = basis.len();
    if k == 0 {
        return Ok(None);
    }
    let combine = |coeffs: &[Elem]| -> ModuleMap {
        let mut comps: Vec<Matrix> = ModuleMap::zero(v, w).components;
        for (c, b) in coeffs.iter().zip(&basis) {
            if c.is_zero() {
                continue;
            }
            for (acc, m) in comps.iter_mut().zip(&b.components) {
                *acc = acc.add(&m.scale(c));
            }
        }
        ModuleMap { components: comps }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x150_u64 ^ (k as u64) << 8);
    match field {
        Field::Prime(p) => {
            let total = p.checked_pow(k as u32).filter(|&t| t <= ISO_ENUM_CAP);
            if let Some(total) = total {
                for code in 1..total {
                    let mut c = code;
                    let coeffs: Vec<Elem> = (0..k).map(|_| { let d = c % p; c /= p; field.from_i64(d as i64) }).collect();
                    let m = combine(&coeffs);
                    if m.is_iso() {
                        return Ok(Some(m));
                    }
                }
                return Ok(None);
            }
            for _ in 0..ISO_RANDOM_TRIES * 16 {
                let coeffs: Vec<Elem> = (0..k).map(|_| field.from_i64(rng.gen_range(0..p) as i64)).collect();
                let m = combine(&coeffs);
                if m.is_iso() {
                    return Ok(Some(m));
                }
            }
            Ok(None)
        }
        Field::Rational => {
            for _ in 0..ISO_RANDOM_TRIES {
                let coeffs: Vec<Elem> = (0..k).map(|_| field.from_i64(rng.gen_range(-1000..=1000))).collect();
                let m = combine(&coeffs);
                if m.is_iso() {
                    return Ok(Some(m));
                }
            }
            // Small exhaustive grid as a last resort.
            if k <= 6 {
                let vals = [-1i64, 0, 1, 2];
                let total = 4usize.pow(k as u32);
                for code in 1..total {
                    let mut c = code;
                    let coeffs: Vec<Elem> = (0..k).map(|_| { let d = vals[c % 4]; c /= 4; field.from_i64(d) }).collect();
                    let m = combine(&coeffs);
                    if m.is_iso() {
                        return Ok(Some(m));
                    }
                }
            }
            Ok(None)
        }
    }
}

pub fn are_isomorphic(cat: &FiniteCategory, v: &KModule, w: &KModule) -> Result<bool> {
    Ok(find_isomorphism(cat, v, w)?.is_some())
}

/// `V` restricted to a full subcategory.
pub fn restriction(cat: &FiniteCategory, emb: &Embedding, v: &KModule) -> KModule {
    let _ = cat;
    KModule {
        field: v.field,
        dims: emb.objects.iter().map(|&x| v.dim(x)).collect(),
        action: emb.morphisms.iter().map(|&f| v.action(f).clone()).collect(),
    }
}

/// Right Kan extension along a full inclusion `D ⊆ C`.
///
/// At `x` the value is the space of families `(w_f)` indexed by morphisms
/// `f: x → d` with `d ∈ D`, subject to `W_h w_f = w_{h∘f}` for `h` in `D`;
/// a morphism `g: x → x'` acts by `(g·w)_{f'} = w_{f'∘g}`.
#[derive(Clone, Debug)]
pub struct Coinduced {
    pub module: KModule,
    /// Per object: the index morphisms `f: x → d` and a basis (columns) of
    /// the family space inside `⊕_f W_{cod f}`.
    pub index: Vec<Vec<Mor>>,
    pub basis: Vec<Matrix>,
}

pub fn coinduction(cat: &FiniteCategory, sub: &FiniteCategory, emb: &Embedding, w: &KModule) -> Result<Coinduced> {
    let field = w.field;
    if emb.objects.len() != sub.num_objects() {
        return Err(Error::ShapeMismatch("embedding does not match the subcategory".into()));
    }
    for x in sub.objects() {
        for y in sub.objects() {
            if sub.hom(x, y).len() != cat.hom(emb.objects[x.0], emb.objects[y.0]).len() {
                return Err(Error::PreconditionFails("subcategory is not full".into()));
            }
        }
    }
    let sub_obj = |d: Obj| emb.preimage_obj(d);
    let wdim = |f: Mor| w.dim(sub_obj(cat.cod(f)).unwrap());
    let mut index = Vec::new();
    let mut offsets = Vec::new();
    let mut basis = Vec::new();
    for x in cat.objects() {
        let idx: Vec<Mor> = cat.out_of(x).iter().copied().filter(|&f| sub_obj(cat.cod(f)).is_some()).collect();
        let mut off = Vec::new();
        let mut total = 0;
        for &f in &idx {
            off.push(total);
            total += wdim(f);
        }
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for (a, &f) in idx.iter().enumerate() {
            let d = cat.cod(f);
            for &h in cat.out_of(d) {
                let Some(hs) = emb.preimage_mor(h) else { continue };
                if cat.is_identity(h) {
                    continue;
                }
                let hf = cat.compose(h, f);
                let b = idx.iter().position(|&m| m == hf).unwrap();
                let wh = w.action(hs);
                for i in 0..wh.rows() {
                    let mut row = vec![Elem::zero(); total];
                    for j in 0..wh.cols() {
                        row[off[a] + j] = wh.get(i, j).clone();
                    }
                    let t = off[b] + i;
                    row[t] = field.sub(&row[t], &field.one());
                    rows.push(row);
                }
            }
        }
        let k = if rows.is_empty() {
            Matrix::identity(field, total)
        } else {
            let n = rows.len();
            Matrix::from_rows(field, n, total, rows)?.kernel_matrix()
        };
        index.push(idx);
        offsets.push(off);
        basis.push(k);
    }
    let dims: Vec<usize> = basis.iter().map(|b| b.cols()).collect();
    let mut action = Vec::new();
    for g in cat.morphisms() {
        let (x, x2) = (cat.dom(g), cat.cod(g));
        let amb_x = basis[x.0].rows();
        let amb_x2 = basis[x2.0].rows();
        let mut a = Matrix::zeros(field, amb_x2, amb_x);
        for (b2, &f2) in index[x2.0].iter().enumerate() {
            let f = cat.compose(f2, g);
            let b = index[x.0].iter().position(|&m| m == f).unwrap();
            for i in 0..wdim(f2) {
                a.set(offsets[x2.0][b2] + i, offsets[x.0][b] + i, field.one());
            }
        }
        let image = a.mul(&basis[x.0]);
        let m = if dims[x2.0] == 0 || dims[x.0] == 0 {
            Matrix::zeros(field, dims[x2.0], dims[x.0])
        } else {
            basis[x2.0].solve(&image).expect("families map to families")
        };
        action.push(m);
    }
    Ok(Coinduced { module: KModule { field, dims, action }, index, basis })
}

/// The map `V → coind(res V)`, `v ↦ (V_f v)_f`.
pub fn coinduction_unit(cat: &FiniteCategory, emb: &Embedding, v: &KModule, co: &Coinduced) -> ModuleMap {
    let components = cat
        .objects()
        .map(|x| {
            let mut rows: Vec<Vec<Elem>> = Vec::new();
            for &f in &co.index[x.0] {
                for r in 0..v.action(f).rows() {
                    rows.push(v.action(f).row(r).to_vec());
                }
            }
            let _ = emb;
            let amb = Matrix::from_rows(v.field, rows.len(), v.dim(x), rows).expect("consistent widths");
            if co.module.dim(x) == 0 || v.dim(x) == 0 {
                Matrix::zeros(v.field, co.module.dim(x), v.dim(x))
            } else {
                co.basis[x.0].solve(&amb).expect("images are families")
            }
        })
        .collect();
    ModuleMap { components }
}

/// The map `res(coind W) → W`, a family `(w_f)` at `d` going to `w_{1_d}`.
pub fn coinduction_counit(cat: &FiniteCategory, emb: &Embedding, w: &KModule, co: &Coinduced) -> ModuleMap {
    let components = emb
        .objects
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let id = cat.id(d);
            let mut off = 0;
            for &f in &co.index[d.0] {
                if f == id {
                    break;
                }
                off += w.dim(emb.preimage_obj(cat.cod(f)).unwrap());
            }
            let n = w.dims[i];
            let pick = Matrix::from_fn(w.field, n, co.basis[d.0].rows(), |r, c| {
                if c == off + r { w.field.one() } else { w.field.zero() }
            });
            pick.mul(&co.basis[d.0])
        })
        .collect();
    ModuleMap { components }
}

fn random_elem(field: Field, rng: &mut ChaCha8Rng) -> Elem {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
        Field::Rational => field.from_i64(rng.gen_range(-3..=3)),
    }
}

fn random_vector(field: Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    (0..n).map(|_| random_elem(field, rng)).collect()
}

/// Quotient of `m` by relations until every space has dimension at most `max_dim`.
fn cut_down(cat: &FiniteCategory, m: KModule, max_dim: usize, extra: usize, rng: &mut ChaCha8Rng) -> KModule {
    let field = m.field;
    let mut rel: Vec<Subspace> = m.dims.iter().map(|&d| Subspace::zero(field, d)).collect();
    let add = |rel: &mut Vec<Subspace>, x: Obj, v: &[Elem]| {
        let g = m.generated_by(cat, x, v);
        for (r, s) in rel.iter_mut().zip(g) {
            *r = r.sum(&s);
        }
    };
    for _ in 0..extra {
        let x = Obj(rng.gen_range(0..cat.num_objects()));
        if m.dim(x) > 0 {
            let v = random_vector(field, m.dim(x), rng);
            add(&mut rel, x, &v);
        }
    }
    loop {
        let over: Vec<Obj> = cat.objects().filter(|&x| m.dim(x) - rel[x.0].dim() > max_dim).collect();
        let Some(&x) = over.first() else { break };
        let mut v = random_vector(field, m.dim(x), rng);
        while rel[x.0].contains(&v) {
            v = random_vector(field, m.dim(x), rng);
        }
        add(&mut rel, x, &v);
    }
    quotient(cat, &m, &rel).0
}

/// A deterministic pseudo-random module with every space of dimension at
/// most `max_dim`. It is built as a quotient of a sum of representables, or
/// as a quotient of a submodule of a sum of standard injectives, so
/// functoriality holds by construction; it is re-checked anyway.
pub fn random_module(cat: &FiniteCategory, field: Field, seed: u64, max_dim: usize) -> KModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if max_dim == 0 || cat.num_objects() == 0 {
        return KModule::zero(cat, field);
    }
    let pieces = rng.gen_range(1..=2);
    let mut m = KModule::zero(cat, field);
    let mode = rng.gen_range(0..3);
    for _ in 0..pieces {
        let x = Obj(rng.gen_range(0..cat.num_objects()));
        let p = match mode {
            0 => yoneda_module(cat, field, x),
            1 => {
                let e = standard_injective(cat, field, x);
                let y = Obj(rng.gen_range(0..cat.num_objects()));
                if e.dim(y) == 0 {
                    e
                } else {
                    let v = random_vector(field, e.dim(y), &mut rng);
                    submodule(cat, &e, &e.generated_by(cat, y, &v)).0
                }
            }
            _ => {
                if rng.gen_bool(0.5) {
                    yoneda_module(cat, field, x)
                } else {
                    standard_injective(cat, field, x)
                }
            }
        };
        m = m.direct_sum(&p);
    }
    let extra = rng.gen_range(0..=2);
    let out = cut_down(cat, m, max_dim, extra, &mut rng);
    out.check_functor(cat).expect("random modules are functors by construction");
    out
}

/// Every module over a finite field with all dimensions at most `max_dim`,
/// on a category whose only endomorphisms are identities. Matrices are
/// chosen for the indecomposable morphisms, the rest follow by composition,
/// and candidates failing functoriality are dropped.
pub fn enumerate_modules(cat: &FiniteCategory, field: Field, max_dim: usize, cap: usize) -> Result<Vec<KModule>> {
    let p = match field {
        Field::Prime(p) => p as usize,
        Field::Rational => return Err(Error::InfiniteFieldUnsupported),
    };
    if cat.objects().any(|x| cat.hom(x, x).len() > 1) {
        return Err(Error::PreconditionFails("enumeration needs trivial endomorphism monoids".into()));
    }
    let non_id: Vec<Mor> = cat.morphisms().filter(|&f| !cat.is_identity(f)).collect();
    let mut factor: Vec<Option<(Mor, Mor)>> = vec![None; cat.num_morphisms()];
    for &g in &non_id {
        for &h in &non_id {
            if let Some(gh) = cat.try_compose(g, h) {
                if factor[gh.0].is_none() {
                    factor[gh.0] = Some((g, h));
                }
            }
        }
    }
    let gens: Vec<Mor> = non_id.iter().copied().filter(|f| factor[f.0].is_none()).collect();
    // Composites in an order where both factors come first.
    let mut order: Vec<Mor> = Vec::new();
    let mut done: Vec<bool> = cat.morphisms().map(|f| cat.is_identity(f) || factor[f.0].is_none()).collect();
    while order.len() + gens.len() < non_id.len() {
        for &f in &non_id {
            if done[f.0] {
                continue;
            }
            let (g, h) = factor[f.0].unwrap();
            if done[g.0] && done[h.0] {
                done[f.0] = true;
                order.push(f);
            }
        }
    }
    let n = cat.num_objects();
    let mut out = Vec::new();
    let mut dims = vec![0usize; n];
    loop {
        let cells: Vec<usize> = gens.iter().map(|&f| dims[cat.dom(f).0] * dims[cat.cod(f).0]).collect();
        let total_cells: usize = cells.iter().sum();
        let count = p.checked_pow(total_cells as u32).filter(|&c| c <= cap).ok_or_else(|| {
            Error::SizeBudgetExceeded(format!("{p}^{total_cells} candidate modules"))
        })?;
        for code in 0..count {
            let mut c = code;
            let mut action: Vec<Option<Matrix>> = vec![None; cat.num_morphisms()];
            for x in cat.objects() {
                action[cat.id(x).0] = Some(Matrix::identity(field, dims[x.0]));
            }
            for &f in &gens {
                let (r, k) = (dims[cat.cod(f).0], dims[cat.dom(f).0]);
                let m = Matrix::from_fn(field, r, k, |_, _| {
                    let d = c % p;
                    c /= p;
                    field.from_i64(d as i64)
                });
                action[f.0] = Some(m);
            }
            for &f in &order {
                let (g, h) = factor[f.0].unwrap();
                let m = action[g.0].as_ref().unwrap().mul(action[h.0].as_ref().unwrap());
                action[f.0] = Some(m);
            }
            let v = KModule { field, dims: dims.clone(), action: action.into_iter().map(|m| m.unwrap()).collect() };
            if v.check_functor(cat).is_ok() {
                out.push(v);
                if out.len() > cap {
                    return Err(Error::SizeBudgetExceeded(format!("more than {cap} modules")));
                }
            }
        }
        // Next dimension vector.
        let mut i = 0;
        while i < n && dims[i] == max_dim {
            dims[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        dims[i] += 1;
    }
    Ok(out)
}
