//! Constructors for the standard example categories.

use std::collections::{BTreeMap, HashMap};

use super::group::{FiniteGroup, Subgroup};
use super::{Budget, FiniteCategory, RawCategory};
use crate::error::{Error, Result, Violation};
use crate::linalg::{Field, Matrix};

/// The poset on `elements` generated by `relations` (pairs `a ⩽ b`).
/// Identities are named `1_a`, other arrows `fab` (or `f_a_b` when some
/// element name is longer than one character).
pub fn poset(elements: &[&str], relations: &[(&str, &str)]) -> Result<FiniteCategory> {
    let n = elements.len();
    let index: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    if index.len() != n {
        return Err(Error::NotAPoset("repeated element".into()));
    }
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in relations {
        let ia = *index.get(a).ok_or_else(|| Error::UnknownObject(a.to_string()))?;
        let ib = *index.get(b).ok_or_else(|| Error::UnknownObject(b.to_string()))?;
        le[ia][ib] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if le[i][k] {
                for j in 0..n {
                    if le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if le[i][j] && le[j][i] {
                return Err(Error::NotAPoset(format!("{} and {} are related both ways", elements[i], elements[j])));
            }
        }
    }
    let short = elements.iter().all(|e| e.chars().count() == 1);
    let mut raw = RawCategory { objects: elements.iter().map(|s| s.to_string()).collect(), morphisms: Vec::new(), identity: vec![0; n] };
    let mut arrow = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            if !le[i][j] {
                continue;
            }
            let id = if i == j {
                raw.identity[i] = raw.morphisms.len();
                format!("1_{}", elements[i])
            } else if short {
                format!("f{}{}", elements[i], elements[j])
            } else {
                format!("f_{}_{}", elements[i], elements[j])
            };
            arrow.insert((i, j), raw.morphisms.len());
            raw.morphisms.push((id, i, j));
        }
    }
    let ends: Vec<(usize, usize)> = raw.morphisms.iter().map(|m| (m.1, m.2)).collect();
    raw.finish(&Budget::default(), |g, f| arrow[&(ends[f].0, ends[g].1)])
}

/// The chain `0 < 1 < … < n-1`.
pub fn chain(n: usize) -> Result<FiniteCategory> {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let rel: Vec<(&str, &str)> = refs.windows(2).map(|w| (w[0], w[1])).collect();
    poset(&refs, &rel)
}

/// Free category on an acyclic quiver. `arrows` are `(name, source, target)`.
/// A path `a` then `b` is named `b.a`, identities `1_v`.
pub fn free_acyclic_quiver(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<FiniteCategory> {
    free_acyclic_quiver_with_budget(vertices, arrows, &Budget::default())
}

pub fn free_acyclic_quiver_with_budget(
    vertices: &[&str],
    arrows: &[(&str, &str, &str)],
    budget: &Budget,
) -> Result<FiniteCategory> {
    let n = vertices.len();
    let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for (name, s, t) in arrows {
        let si = *index.get(s).ok_or_else(|| Error::UnknownObject(s.to_string()))?;
        let ti = *index.get(t).ok_or_else(|| Error::UnknownObject(t.to_string()))?;
        edges.push((name.to_string(), si, ti));
    }
    // Kahn's algorithm; leftover vertices lie on a cycle.
    let mut indeg = vec![0; n];
    for e in &edges {
        indeg[e.2] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = ready.pop() {
        seen += 1;
        for e in edges.iter().filter(|e| e.1 == v) {
            indeg[e.2] -= 1;
            if indeg[e.2] == 0 {
                ready.push(e.2);
            }
        }
    }
    if seen < n {
        let v = (0..n).find(|&v| indeg[v] > 0).unwrap();
        return Err(Error::CyclicQuiver(vertices[v].to_string()));
    }

    let mut paths: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    for v in 0..n {
        let mut stack = vec![(v, Vec::new())];
        while let Some((at, path)) = stack.pop() {
            paths.push((v, path.clone(), at));
            if paths.len() > budget.morphisms {
                return Err(Error::SizeBudgetExceeded(format!("more than {} paths", budget.morphisms)));
            }
            for (ei, e) in edges.iter().enumerate() {
                if e.1 == at {
                    let mut p = path.clone();
                    p.push(ei);
                    stack.push((e.2, p));
                }
            }
        }
    }
    let name = |src: usize, p: &[usize]| -> String {
        if p.is_empty() {
            format!("1_{}", vertices[src])
        } else {
            p.iter().rev().map(|&e| edges[e].0.as_str()).collect::<Vec<_>>().join(".")
        }
    };
    let mut raw = RawCategory { objects: vertices.iter().map(|s| s.to_string()).collect(), morphisms: Vec::new(), identity: vec![0; n] };
    let mut lookup: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    for (src, p, tgt) in &paths {
        if p.is_empty() {
            raw.identity[*src] = raw.morphisms.len();
        }
        lookup.insert((*src, p.clone()), raw.morphisms.len());
        raw.morphisms.push((name(*src, p), *src, *tgt));
    }
    raw.finish(budget, |g, f| {
        let (fs, fp, _) = &paths[f];
        let mut p = fp.clone();
        p.extend(&paths[g].1);
        lookup[&(*fs, p)]
    })
}

/// The quiver `x ⇉ y` with arrows `f` and `g`.
pub fn quiver_two_arrows() -> FiniteCategory {
    free_acyclic_quiver(&["x", "y"], &[("f", "x", "y"), ("g", "x", "y")]).expect("static quiver")
}

/// One-object category of a finite monoid. `table[a][b]` is `a∘b`.
pub fn monoid(names: &[&str], table: &[Vec<usize>]) -> Result<FiniteCategory> {
    let n = names.len();
    if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
        return Err(Error::ShapeMismatch("monoid table must be n x n".into()));
    }
    let unit = (0..n)
        .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
        .ok_or_else(|| Error::InvalidCategory(vec![Violation::MissingIdentity("*".into())]))?;
    let raw = RawCategory {
        objects: vec!["*".to_string()],
        morphisms: names.iter().map(|s| (s.to_string(), 0, 0)).collect(),
        identity: vec![unit],
    };
    raw.finish(&Budget::default(), |g, f| table[g][f])
}

impl FiniteGroup {
    /// The group as a one-object category.
    pub fn as_category(&self) -> Result<FiniteCategory> {
        let names: Vec<&str> = self.names().iter().map(|s| s.as_str()).collect();
        monoid(&names, self.table())
    }
}

fn subgroup_names(group: &FiniteGroup, reps: &[Subgroup]) -> Vec<String> {
    let mut by_order: BTreeMap<usize, usize> = BTreeMap::new();
    for r in reps {
        *by_order.entry(r.order()).or_default() += 1;
    }
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    reps.iter()
        .map(|r| {
            let k = seen.entry(r.order()).or_default();
            let suffix = if by_order[&r.order()] > 1 { ((b'a' + *k as u8) as char).to_string() } else { String::new() };
            *k += 1;
            if r.order() == 1 {
                format!("1{suffix}")
            } else if r.order() == group.order() {
                format!("G{suffix}")
            } else {
                format!("H{}{suffix}", r.order())
            }
        })
        .collect()
}

/// The category whose objects are the cosets `G/H`, one for each conjugacy
/// class among `subgroups` (all subgroups when `None`), and whose morphisms
/// `G/H → G/K` are the `G`-maps `G/K → G/H`, i.e. cosets `aH` with
/// `a⁻¹Ka ⊆ H`. Composition is `(bK) ∘ (aH) = (ba)H`.
///
/// Objects are named `1`, `G` and `H<order>` (with a letter when several
/// classes share an order); a morphism is `H>K:a` with `a` the least element
/// of the coset.
pub fn orbit_category(group: &FiniteGroup, subgroups: Option<&[Subgroup]>) -> Result<(FiniteCategory, Vec<Subgroup>)> {
    let all;
    let subs = match subgroups {
        Some(s) => s,
        None => {
            all = group.subgroups();
            &all
        }
    };
    let reps: Vec<Subgroup> = group.conjugacy_classes(subs).into_iter().map(|c| c[0].clone()).collect();
    let names = subgroup_names(group, &reps);
    let mut raw = RawCategory { objects: names.clone(), morphisms: Vec::new(), identity: vec![0; reps.len()] };
    let mut data: Vec<(usize, usize, usize)> = Vec::new();
    let mut lookup: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (hi, h) in reps.iter().enumerate() {
        for (ki, k) in reps.iter().enumerate() {
            for a in group.left_coset_reps(h) {
                if !group.conjugate(k, a).is_subset(h) {
                    continue;
                }
                if hi == ki && a == group.coset_rep(group.identity(), h) {
                    raw.identity[hi] = raw.morphisms.len();
                }
                lookup.insert((hi, ki, a), raw.morphisms.len());
                data.push((hi, ki, a));
                raw.morphisms.push((format!("{}>{}:{}", names[hi], names[ki], group.name(a)), hi, ki));
                if raw.morphisms.len() > Budget::default().morphisms {
                    return Err(Error::SizeBudgetExceeded("orbit category too large".into()));
                }
            }
        }
    }
    let cat = raw.finish(&Budget::default(), |g, f| {
        let (h, _, a) = data[f];
        let (_, l, b) = data[g];
        let c = group.coset_rep(group.mul(b, a), &reps[h]);
        lookup[&(h, l, c)]
    })?;
    // Report the representatives in the category's object order.
    let mut ordered = vec![reps[0].clone(); reps.len()];
    for (i, r) in reps.into_iter().enumerate() {
        ordered[cat.obj(&names[i]).unwrap().0] = r;
    }
    Ok((cat, ordered))
}

fn injections(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; n];
    fn rec(m: usize, n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(m, n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(m, n, &mut cur, &mut used, &mut out);
    out
}

/// Objects `0..=N`, morphisms `m → n` the injections `[m] → [n]`, named
/// `m>n:` followed by the images of `1..m`.
pub fn trunc_fi(n: usize) -> Result<FiniteCategory> {
    let budget = Budget::default();
    let mut count = 0usize;
    for a in 0..=n {
        for b in a..=n {
            count += (b - a + 1..=b).product::<usize>();
            if count > budget.morphisms {
                return Err(Error::SizeBudgetExceeded(format!("trunc_fi({n})")));
            }
        }
    }
    let mut raw = RawCategory { objects: (0..=n).map(|i| i.to_string()).collect(), morphisms: Vec::new(), identity: vec![0; n + 1] };
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut lookup: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    for a in 0..=n {
        for b in a..=n {
            for inj in injections(a, b) {
                let label: Vec<String> = inj.iter().map(|v| (v + 1).to_string()).collect();
                if a == b && inj.iter().enumerate().all(|(i, &v)| i == v) {
                    raw.identity[a] = raw.morphisms.len();
                }
                lookup.insert((b, inj.clone()), raw.morphisms.len());
                raw.morphisms.push((format!("{a}>{b}:{}", label.join(",")), a, b));
                maps.push(inj);
            }
        }
    }
    let cods: Vec<usize> = raw.morphisms.iter().map(|m| m.2).collect();
    raw.finish(&budget, |g, f| {
        let composed: Vec<usize> = maps[f].iter().map(|&i| maps[g][i]).collect();
        lookup[&(cods[g], composed)]
    })
}

/// Objects `0..=N`, morphisms `m → n` the injective linear maps
/// `F_q^m → F_q^n` for prime `q`, stored as `n x m` matrices and named
/// `m>n:` followed by their columns.
pub fn trunc_vi(q: u64, n: usize) -> Result<FiniteCategory> {
    let field = Field::prime(q)?;
    let budget = Budget::default();
    let qs = q as usize;
    let mut raw = RawCategory { objects: (0..=n).map(|i| i.to_string()).collect(), morphisms: Vec::new(), identity: vec![0; n + 1] };
    let mut mats: Vec<Vec<usize>> = Vec::new();
    let mut lookup: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    let mut shape = Vec::new();
    for a in 0..=n {
        for b in a..=n {
            let cells = a * b;
            let total = qs.checked_pow(cells as u32).filter(|&t| t <= 1 << 20).ok_or_else(|| Error::SizeBudgetExceeded(format!("trunc_vi({q},{n})")))?;
            for code in 0..total {
                // Column-major digits: entry (i, j) at position j*b + i.
                let mut c = code;
                let entries: Vec<usize> = (0..cells).map(|_| { let d = c % qs; c /= qs; d }).collect();
                let m = Matrix::from_fn(field, b, a, |i, j| field.from_i64(entries[j * b + i] as i64));
                if m.rank() != a {
                    continue;
                }
                if a == b && m.is_identity() {
                    raw.identity[a] = raw.morphisms.len();
                }
                let cols: Vec<String> = (0..a)
                    .map(|j| (0..b).map(|i| entries[j * b + i].to_string()).collect::<String>())
                    .collect();
                lookup.insert((a, b, entries.clone()), raw.morphisms.len());
                raw.morphisms.push((format!("{a}>{b}:{}", cols.join("|")), a, b));
                mats.push(entries);
                shape.push((a, b));
                if raw.morphisms.len() > budget.morphisms {
                    return Err(Error::SizeBudgetExceeded(format!("trunc_vi({q},{n})")));
                }
            }
        }
    }
    raw.finish(&budget, |g, f| {
        let (a, b) = shape[f];
        let (_, c) = shape[g];
        let (mf, mg) = (&mats[f], &mats[g]);
        let mut out = vec![0; a * c];
        for j in 0..a {
            for i in 0..c {
                let mut s = 0;
                for t in 0..b {
                    s += mg[t * c + i] * mf[j * b + t];
                }
                out[j * c + i] = s % qs;
            }
        }
        lookup[&(a, c, out)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_chain_has_three_morphisms() {
        let c = chain(2).unwrap();
        assert_eq!(c.num_morphisms(), 3);
        assert!(c.mor("f01").is_ok());
        assert!(c.flags().ei);
    }

    #[test]
    fn cyclic_relation_is_not_a_poset() {
        assert!(matches!(poset(&["a", "b"], &[("a", "b"), ("b", "a")]), Err(Error::NotAPoset(_))));
    }

    #[test]
    fn cyclic_quiver_is_rejected() {
        let r = free_acyclic_quiver(&["a", "b"], &[("u", "a", "b"), ("v", "b", "a")]);
        assert!(matches!(r, Err(Error::CyclicQuiver(_))));
    }

    #[test]
    fn quiver_paths_compose() {
        let c = free_acyclic_quiver(&["a", "b", "c"], &[("u", "a", "b"), ("v", "b", "c")]).unwrap();
        assert_eq!(c.num_morphisms(), 6);
        let (u, v) = (c.mor("u").unwrap(), c.mor("v").unwrap());
        assert_eq!(c.mor_name(c.compose(v, u)), "v.u");
    }

    #[test]
    fn trunc_fi_two_hom_counts() {
        let c = trunc_fi(2).unwrap();
        let (o1, o2) = (c.obj("1").unwrap(), c.obj("2").unwrap());
        assert_eq!(c.hom(o1, o2).len(), 2);
        assert_eq!(c.hom(o2, o2).len(), 2);
        assert!(c.flags().ei && c.flags().directed);
    }

    #[test]
    fn trunc_vi_two_two_hom_counts() {
        let c = trunc_vi(2, 2).unwrap();
        let o = |s: &str| c.obj(s).unwrap();
        assert_eq!(c.hom(o("1"), o("2")).len(), 3);
        assert_eq!(c.hom(o("2"), o("2")).len(), 6);
        assert!(c.flags().ei);
    }

    #[test]
    fn orbit_s3_has_four_objects_and_is_ei() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let (c, reps) = orbit_category(&g, None).unwrap();
        assert_eq!(c.num_objects(), 4);
        let orders: Vec<usize> = reps.iter().map(|r| r.order()).collect();
        assert_eq!(c.objects().map(|x| c.obj_name(x).to_string()).collect::<Vec<_>>(), vec!["1", "G", "H2", "H3"]);
        assert_eq!(orders, vec![1, 6, 2, 3]);
        let fl = c.flags();
        assert!(fl.ei && fl.directed && fl.skeletal);
        // Endomorphisms of G/1 form the group itself.
        let one = c.obj("1").unwrap();
        assert_eq!(c.hom(one, one).len(), 6);
    }

    #[test]
    fn group_categories() {
        let c2 = FiniteGroup::cyclic(2).unwrap().as_category().unwrap();
        let fl = c2.flags();
        assert!(fl.ei && fl.ore);
        let m = monoid(&["1", "e"], &[vec![0, 1], vec![1, 1]]).unwrap();
        assert!(!m.flags().ei);
    }
}
