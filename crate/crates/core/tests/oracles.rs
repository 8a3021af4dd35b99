//! Brute-force oracles written from the definitions, compared with the library.

use std::collections::BTreeSet;

use finsite::fincat::{Budget, FiniteCategory, Mor, Obj};
use finsite::fixtures::fixture;
use finsite::linalg::{Elem, Field, Matrix};
use finsite::modrep::{
    hom_space, is_injective, random_module, sieve_quotient_module, standard_injective, yoneda_module, KModule, ModuleMap,
};
use finsite::sheaves::{matching_space, sheaf_status};
use finsite::sieves::{all_sieves, Sieve};
use finsite::topology::{enumerate_topologies, CoverRule};
use finsite::torsion::{annihilator_sieve, torsion_spaces};

fn f2() -> Field {
    Field::prime(2).unwrap()
}

/// Member sets of all subsets of `out_of(x)` closed under postcomposition.
fn naive_sieves(cat: &FiniteCategory, x: Obj) -> BTreeSet<Vec<Mor>> {
    let out = cat.out_of(x);
    assert!(out.len() <= 16);
    let mut found = BTreeSet::new();
    for mask in 0u32..(1 << out.len()) {
        let set: Vec<Mor> = (0..out.len()).filter(|i| mask >> i & 1 == 1).map(|i| out[i]).collect();
        let closed = set.iter().all(|&f| cat.out_of(cat.cod(f)).iter().all(|&g| set.contains(&cat.compose(g, f))));
        if closed {
            found.insert(set);
        }
    }
    found
}

#[test]
fn sieve_inventory_matches_subset_filtering() {
    for name in ["quiver2", "chain3", "diamond", "trunc_fi2", "orbit_c2", "orbit_c3", "idempotent", "group_s3"] {
        let c = fixture(name).unwrap();
        for x in c.objects() {
            let lib: BTreeSet<Vec<Mor>> = all_sieves(&c, x).unwrap().iter().map(|s| s.members().to_vec()).collect();
            assert_eq!(lib, naive_sieves(&c, x), "{name} at {}", c.obj_name(x));
        }
    }
}

fn naive_pullback(cat: &FiniteCategory, s: &[Mor], f: Mor) -> Vec<Mor> {
    cat.out_of(cat.cod(f)).iter().copied().filter(|&g| s.contains(&cat.compose(g, f))).collect()
}

/// Every rule (one subset of sieves per object), filtered by the three axioms
/// written out directly.
fn naive_topologies(cat: &FiniteCategory) -> BTreeSet<Vec<Vec<Vec<Mor>>>> {
    let sieves: Vec<Vec<Vec<Mor>>> = cat.objects().map(|x| naive_sieves(cat, x).into_iter().collect()).collect();
    let total: u32 = sieves.iter().map(|s| s.len() as u32).sum();
    assert!(total <= 16, "too many rules to enumerate");
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << total) {
        let mut bit = 0;
        let mut rule: Vec<Vec<Vec<Mor>>> = Vec::new();
        for list in &sieves {
            let mut chosen = Vec::new();
            for s in list {
                if mask >> bit & 1 == 1 {
                    chosen.push(s.clone());
                }
                bit += 1;
            }
            rule.push(chosen);
        }
        let covers = |x: Obj, s: &Vec<Mor>| rule[x.0].contains(s);
        let maximal = cat.objects().all(|x| covers(x, &cat.out_of(x).to_vec()));
        let stable = cat.objects().all(|x| {
            rule[x.0].iter().all(|s| cat.out_of(x).iter().all(|&f| covers(cat.cod(f), &naive_pullback(cat, s, f))))
        });
        let transitive = cat.objects().all(|x| {
            rule[x.0].iter().all(|s| {
                sieves[x.0].iter().all(|t| {
                    let pulled_cover = s.iter().all(|&f| covers(cat.cod(f), &naive_pullback(cat, t, f)));
                    !pulled_cover || covers(x, t)
                })
            })
        });
        if maximal && stable && transitive {
            out.insert(rule);
        }
    }
    out
}

#[test]
fn enumeration_matches_exhaustive_rule_search() {
    for name in ["quiver2", "chain2", "chain3", "group_c2", "group_c3", "idempotent", "orbit_c2"] {
        let c = fixture(name).unwrap();
        let lib: BTreeSet<Vec<Vec<Vec<Mor>>>> = enumerate_topologies(&c, &Budget::default())
            .unwrap()
            .iter()
            .map(|t| {
                c.objects()
                    .map(|x| {
                        let mut l: Vec<Vec<Mor>> = t.covers(x).iter().map(|s| s.members().to_vec()).collect();
                        l.sort();
                        l
                    })
                    .collect()
            })
            .collect();
        let naive: BTreeSet<Vec<Vec<Vec<Mor>>>> = naive_topologies(&c)
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|mut l| {
                        l.sort();
                        l
                    })
                    .collect()
            })
            .collect();
        assert_eq!(lib, naive, "{name}");
    }
}

/// All vectors of `F_2^n`.
fn vectors(n: usize) -> Vec<Vec<Elem>> {
    (0u32..(1 << n)).map(|m| (0..n).map(|i| f2().from_i64((m >> i & 1) as i64)).collect()).collect()
}

#[test]
fn rank_matches_image_count() {
    let c = fixture("diamond").unwrap();
    for seed in 0..30 {
        let v = random_module(&c, f2(), seed, 3);
        for f in c.morphisms() {
            let m = v.action(f);
            let image: BTreeSet<Vec<Elem>> = vectors(m.cols()).iter().map(|u| m.apply(u)).collect();
            assert_eq!(image.len(), 1 << m.rank());
        }
    }
}

/// Matching families counted by trying every block vector.
#[test]
fn matching_space_dimension_by_counting() {
    for name in ["quiver2", "chain3", "diamond"] {
        let c = fixture(name).unwrap();
        for seed in 0..8 {
            let v = random_module(&c, f2(), seed, 2);
            for x in c.objects() {
                for s in all_sieves(&c, x).unwrap() {
                    let blocks: Vec<usize> = s.members().iter().map(|&f| v.dim(c.cod(f))).collect();
                    let total: usize = blocks.iter().sum();
                    if total > 12 {
                        continue;
                    }
                    let mut count = 0;
                    for fam in vectors(total) {
                        let mut parts = Vec::new();
                        let mut at = 0;
                        for &b in &blocks {
                            parts.push(fam[at..at + b].to_vec());
                            at += b;
                        }
                        let ok = s.members().iter().enumerate().all(|(i, &f)| {
                            c.out_of(c.cod(f)).iter().all(|&g| {
                                let j = s.members().iter().position(|&h| h == c.compose(g, f)).unwrap();
                                v.action(g).apply(&parts[i]) == parts[j]
                            })
                        });
                        count += ok as usize;
                    }
                    assert_eq!(count, 1 << matching_space(&c, &v, &s).dim(), "{name}, {}", s.display(&c));
                }
            }
        }
    }
}

fn all_maps(v: &KModule, w: &KModule) -> usize {
    v.dims().iter().zip(w.dims()).map(|(a, b)| a * b).sum()
}

/// Natural transformations counted by enumerating all component tuples.
#[test]
fn hom_space_dimension_by_counting() {
    let c = fixture("quiver2").unwrap();
    for seed in 0..20 {
        let v = random_module(&c, f2(), seed, 2);
        let w = random_module(&c, f2(), seed + 100, 2);
        let vars = all_maps(&v, &w);
        if vars > 12 {
            continue;
        }
        let mut count = 0;
        for flat in vectors(vars) {
            let mut at = 0;
            let comps: Vec<Matrix> = c
                .objects()
                .map(|x| {
                    let (r, k) = (w.dim(x), v.dim(x));
                    let m = Matrix::from_fn(f2(), r, k, |i, j| flat[at + i * k + j].clone());
                    at += r * k;
                    m
                })
                .collect();
            count += ModuleMap::new(comps).check_natural(&c, &v, &w).is_ok() as usize;
        }
        assert_eq!(count, 1 << hom_space(&c, &v, &w).unwrap().len(), "seed {seed}");
    }
}

/// Torsion elements are those whose annihilator covers; over a topology the
/// set of them is the torsion subspace.
#[test]
fn torsion_elements_by_annihilators() {
    for name in ["quiver2", "chain3", "diamond", "trunc_fi2"] {
        let c = fixture(name).unwrap();
        for t in enumerate_topologies(&c, &Budget::default()).unwrap() {
            for seed in 0..5 {
                let v = random_module(&c, f2(), seed, 3);
                let spaces = torsion_spaces(&c, &t, &v).unwrap();
                for x in c.objects() {
                    let torsion: Vec<Vec<Elem>> = vectors(v.dim(x))
                        .into_iter()
                        .filter(|u| t.contains(&annihilator_sieve(&c, &v, x, u).unwrap()))
                        .collect();
                    assert_eq!(torsion.len(), 1 << spaces[x.0].dim());
                    assert!(torsion.iter().all(|u| spaces[x.0].contains(u)));
                }
            }
        }
    }
}

/// Sheaf condition by counting amalgamations of every matching family.
#[test]
fn sheaf_condition_by_counting() {
    let c = fixture("quiver2").unwrap();
    for t in enumerate_topologies(&c, &Budget::default()).unwrap() {
        for seed in 0..15 {
            let v = random_module(&c, f2(), seed, 2);
            let mut separated = true;
            let mut sheaf = true;
            for x in c.objects() {
                for s in t.covers(x) {
                    let images: Vec<Vec<Vec<Elem>>> = vectors(v.dim(x))
                        .iter()
                        .map(|u| s.members().iter().map(|&f| v.action(f).apply(u)).collect())
                        .collect();
                    let distinct: BTreeSet<_> = images.iter().cloned().collect();
                    separated &= distinct.len() == images.len();
                    let families = 1usize << matching_space(&c, &v, s).dim();
                    sheaf &= distinct.len() == images.len() && distinct.len() == families;
                }
            }
            let st = sheaf_status(&c, &t, &v).unwrap();
            assert_eq!((st.separated, st.sheaf), (separated, sheaf), "{} seed {seed}", t.key(&c));
        }
    }
}

/// Injective iff every map from a subobject `S̄` of a representable extends
/// to `P(x)`, i.e. restriction along `S̄ → P(x)` is onto.
fn baer_injective(c: &FiniteCategory, v: &KModule) -> bool {
    c.objects().all(|x| {
        let p = yoneda_module(c, v.field(), x);
        let from_p = hom_space(c, &p, v).unwrap();
        all_sieves(c, x).unwrap().iter().all(|s| {
            let sq = sieve_quotient_module(c, v.field(), s);
            let target = hom_space(c, &sq.sub, v).unwrap().len();
            let images: Vec<Vec<Elem>> = from_p
                .iter()
                .map(|phi| {
                    phi.after(&sq.inclusion)
                        .components()
                        .iter()
                        .flat_map(|m| (0..m.rows()).flat_map(move |i| m.row(i).to_vec()))
                        .collect()
                })
                .collect();
            let len = images.first().map_or(0, |u| u.len());
            let rank = if len == 0 { 0 } else { Matrix::from_columns(v.field(), len, &images).rank() };
            rank == target
        })
    })
}

#[test]
fn injectivity_matches_baer_criterion() {
    for name in ["quiver2", "chain3", "diamond"] {
        let c = fixture(name).unwrap();
        for x in c.objects() {
            assert!(is_injective(&c, &standard_injective(&c, Field::Rational, x)));
        }
        assert!(is_injective(&c, &KModule::zero(&c, Field::Rational)));
        for seed in 0..20 {
            let field = if seed % 2 == 0 { f2() } else { Field::Rational };
            let v = random_module(&c, field, seed, 2);
            assert_eq!(is_injective(&c, &v), baer_injective(&c, &v), "{name} seed {seed}");
        }
    }
    let q = fixture("quiver2").unwrap();
    let at_x = KModule::from_json(&q, r#"{"field": "Q", "dims": {"x": 1, "y": 0}, "action": {}}"#).unwrap();
    assert_eq!(is_injective(&q, &at_x), baer_injective(&q, &at_x));
}

#[test]
fn rules_with_only_stability_are_rejected_by_the_naive_search() {
    let q = fixture("quiver2").unwrap();
    let k = CoverRule::new(
        &q,
        q.objects().map(|x| vec![Sieve::maximal(&q, x), Sieve::empty(x)]).collect(),
    )
    .unwrap();
    let as_members: Vec<Vec<Vec<Mor>>> =
        q.objects().map(|x| k.covers(x).iter().map(|s| s.members().to_vec()).collect()).collect();
    assert!(!naive_topologies(&q).contains(&as_members));
}
