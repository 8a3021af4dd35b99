use proptest::prelude::*;

use finsite::fincat::{Budget, FiniteCategory, Obj};
use finsite::fixtures::fixture;
use finsite::linalg::{Field, Matrix};
use finsite::modrep::{
    are_isomorphic, coinduction, default_summand_order, hom_space, is_injective, random_module, restriction,
    standard_injective, yoneda_module, KModule,
};
use finsite::sheaves::{matching_space, saturation_status_ordered, sheaf_status, sheafify};
use finsite::sieves::all_sieves;
use finsite::topology::{check_axioms, enumerate_topologies, is_ideal, GrothendieckTopology};
use finsite::torsion::{torsion_free_quotient, torsion_spaces, torsion_submodule};
use finsite::typen::{spec_census, symbolic_pullback, validate_spec, SymbolicSieve};

const CATS: [&str; 7] = ["quiver2", "chain2", "chain3", "diamond", "trunc_fi2", "orbit_c2", "idempotent"];

fn cat(i: usize) -> FiniteCategory {
    fixture(CATS[i % CATS.len()]).unwrap()
}

fn field(i: u8) -> Field {
    match i % 3 {
        0 => Field::Rational,
        1 => Field::prime(2).unwrap(),
        _ => Field::prime(3).unwrap(),
    }
}

fn topologies(c: &FiniteCategory) -> Vec<GrothendieckTopology> {
    enumerate_topologies(c, &Budget::default()).unwrap()
}

fn ideals(c: &FiniteCategory) -> Vec<Vec<Obj>> {
    let n = c.num_objects();
    (1u32..(1 << n))
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(Obj).collect::<Vec<_>>())
        .filter(|objs| is_ideal(c, objs))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn category_json_round_trip(i in 0usize..CATS.len()) {
        let c = cat(i);
        prop_assert_eq!(FiniteCategory::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn pullback_is_functorial_and_monotone(i in 0usize..CATS.len(), a in 0usize..64, b in 0usize..64) {
        let c = cat(i);
        for x in c.objects() {
            let sieves = all_sieves(&c, x).unwrap();
            let s = &sieves[a % sieves.len()];
            let t = &sieves[b % sieves.len()];
            prop_assert_eq!(&s.pullback(&c, c.id(x)).unwrap(), s);
            for &f in c.out_of(x) {
                let meet = s.intersection(t).pullback(&c, f).unwrap();
                prop_assert_eq!(meet, s.pullback(&c, f).unwrap().intersection(&t.pullback(&c, f).unwrap()));
                if s.is_subset(t) {
                    prop_assert!(s.pullback(&c, f).unwrap().is_subset(&t.pullback(&c, f).unwrap()));
                }
                for &g in c.out_of(c.cod(f)) {
                    let direct = s.pullback(&c, c.compose(g, f)).unwrap();
                    let stepwise = s.pullback(&c, f).unwrap().pullback(&c, g).unwrap();
                    prop_assert_eq!(direct, stepwise);
                }
            }
        }
    }

    #[test]
    fn yoneda_dimension(i in 0usize..CATS.len(), fi in 0u8..3, seed in any::<u64>()) {
        let c = cat(i);
        let v = random_module(&c, field(fi), seed, 2);
        for x in c.objects() {
            let p = yoneda_module(&c, field(fi), x);
            prop_assert_eq!(hom_space(&c, &p, &v).unwrap().len(), v.dim(x));
        }
    }

    #[test]
    fn restriction_coinduction_adjunction(i in 0usize..CATS.len(), fi in 0u8..2, seed in any::<u64>(), k in 0usize..8) {
        let c = cat(i);
        let ids = ideals(&c);
        let d = &ids[k % ids.len()];
        let (sub, emb) = c.full_subcategory(d).unwrap();
        let v = random_module(&c, field(fi), seed, 2);
        let w = random_module(&sub, field(fi), seed ^ 0x5555, 2);
        let co = coinduction(&c, &sub, &emb, &w).unwrap();
        let left = hom_space(&sub, &restriction(&c, &emb, &v), &w).unwrap().len();
        let right = hom_space(&c, &v, &co.module).unwrap().len();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn standard_injectives_are_injective(i in 0usize..CATS.len(), fi in 0u8..3) {
        let c = cat(i);
        for x in c.objects() {
            prop_assert!(is_injective(&c, &standard_injective(&c, field(fi), x)));
        }
    }

    #[test]
    fn isomorphism_is_an_equivalence(i in 0usize..CATS.len(), fi in 0u8..3, seed in any::<u64>()) {
        let c = cat(i);
        let fd = field(fi);
        let v = random_module(&c, fd, seed, 2);
        prop_assert!(are_isomorphic(&c, &v, &v).unwrap());
        // Change of basis by an upper unitriangular matrix at each object.
        let change: Vec<Matrix> = v
            .dims()
            .iter()
            .map(|&n| Matrix::from_fn(fd, n, n, |r, s| if r <= s { fd.one() } else { fd.zero() }))
            .collect();
        let action = c
            .morphisms()
            .map(|f| {
                let (a, b) = (c.dom(f), c.cod(f));
                change[b.0].mul(v.action(f)).mul(&change[a.0].inverse().unwrap())
            })
            .collect();
        let w = KModule::new(&c, fd, v.dims().to_vec(), action).unwrap();
        prop_assert!(are_isomorphic(&c, &v, &w).unwrap());
        prop_assert!(are_isomorphic(&c, &w, &v).unwrap());
        let u = random_module(&c, fd, seed.wrapping_add(1), 2);
        prop_assert_eq!(are_isomorphic(&c, &v, &u).unwrap(), are_isomorphic(&c, &u, &v).unwrap());
    }

    #[test]
    fn enumerated_topologies_are_closed(i in 0usize..CATS.len()) {
        let c = cat(i);
        for t in topologies(&c) {
            let r = check_axioms(&c, &t).unwrap();
            prop_assert!(r.is_topology() && r.inclusion_closed && r.intersection_closed);
        }
    }

    #[test]
    fn torsion_radical(i in 0usize..CATS.len(), fi in 0u8..3, seed in any::<u64>(), k in 0usize..64) {
        let c = cat(i);
        let ts = topologies(&c);
        let j = &ts[k % ts.len()];
        let v = random_module(&c, field(fi), seed, 3);
        let part = torsion_submodule(&c, j, &v).unwrap();
        // T(T(V)) = T(V) and T(V / T(V)) = 0.
        let again = torsion_spaces(&c, j, &part.module).unwrap();
        prop_assert!(again.iter().zip(part.module.dims()).all(|(s, &d)| s.dim() == d));
        let (free, _) = torsion_free_quotient(&c, j, &v).unwrap();
        prop_assert!(torsion_spaces(&c, j, &free).unwrap().iter().all(|s| s.is_zero()));
        // Finer topologies have more torsion.
        for other in &ts {
            let finer = c.objects().all(|x| j.covers(x).iter().all(|s| other.contains(s)));
            if finer {
                let big = torsion_spaces(&c, other, &v).unwrap();
                prop_assert!(part.spaces.iter().zip(&big).all(|(s, b)| b.contains_subspace(s)));
            }
        }
    }

    #[test]
    fn torsion_is_functorial(i in 0usize..CATS.len(), fi in 0u8..2, seed in any::<u64>(), k in 0usize..64) {
        let c = cat(i);
        let ts = topologies(&c);
        let j = &ts[k % ts.len()];
        let v = random_module(&c, field(fi), seed, 2);
        let w = random_module(&c, field(fi), seed ^ 0xabcdef, 2);
        let tv = torsion_spaces(&c, j, &v).unwrap();
        let tw = torsion_spaces(&c, j, &w).unwrap();
        for phi in hom_space(&c, &v, &w).unwrap() {
            for x in c.objects() {
                prop_assert!(tw[x.0].contains_subspace(&tv[x.0].image(phi.component(x))));
            }
        }
    }

    #[test]
    fn matching_spaces_reindex(i in 0usize..CATS.len(), seed in any::<u64>(), a in 0usize..64) {
        let c = cat(i);
        let v = random_module(&c, Field::Rational, seed, 2);
        for x in c.objects() {
            let sieves = all_sieves(&c, x).unwrap();
            let s = &sieves[a % sieves.len()];
            // Families on the maximal sieve are elements of V_x.
            let max = finsite::sieves::Sieve::maximal(&c, x);
            prop_assert_eq!(matching_space(&c, &v, &max).dim(), v.dim(x));
            // Families on the empty sieve are trivial.
            prop_assert_eq!(matching_space(&c, &v, &finsite::sieves::Sieve::empty(x)).dim(), 0);
            // Member order follows the sieve.
            let ms = matching_space(&c, &v, s);
            prop_assert_eq!(ms.sieve.members(), s.members());
        }
    }

    #[test]
    fn sheafification_is_idempotent(i in 0usize..CATS.len(), fi in 0u8..2, seed in any::<u64>(), k in 0usize..64) {
        let c = cat(i);
        let ts = topologies(&c);
        let j = &ts[k % ts.len()];
        let v = random_module(&c, field(fi), seed, 2);
        let once = sheafify(&c, j, &v).unwrap();
        prop_assert!(once.verified());
        let twice = sheafify(&c, j, &once.module).unwrap();
        prop_assert!(are_isomorphic(&c, &once.module, &twice.module).unwrap());
        prop_assert!(twice.unit.is_iso());
    }

    #[test]
    fn torsion_free_injectives_are_sheaves(i in 0usize..CATS.len(), k in 0usize..64) {
        let c = cat(i);
        let ts = topologies(&c);
        let j = &ts[k % ts.len()];
        for x in c.objects() {
            let e = standard_injective(&c, Field::Rational, x);
            if torsion_spaces(&c, j, &e).unwrap().iter().all(|s| s.is_zero()) {
                prop_assert!(sheaf_status(&c, j, &e).unwrap().sheaf);
            }
        }
    }

    #[test]
    fn saturation_ignores_summand_order(i in 0usize..CATS.len(), seed in any::<u64>(), k in 0usize..64) {
        let c = cat(i);
        let ts = topologies(&c);
        let j = &ts[k % ts.len()];
        let v = random_module(&c, Field::prime(2).unwrap(), seed, 2);
        let order = default_summand_order(&c, &v);
        let mut reversed = order.clone();
        reversed.reverse();
        let a = saturation_status_ordered(&c, j, &v, &order).unwrap();
        let b = saturation_status_ordered(&c, j, &v, &reversed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn symbolic_pullback_is_additive(m in 0usize..50, r in proptest::option::of(0usize..50), a in 0usize..20, b in 0usize..20) {
        let s = SymbolicSieve { object: m, rank: r };
        prop_assert_eq!(symbolic_pullback(symbolic_pullback(s, a), b), symbolic_pullback(s, a + b));
        prop_assert_eq!(symbolic_pullback(s, 0), s);
    }

    #[test]
    fn census_specs_are_valid_and_distinct(n in 0usize..9) {
        let census = spec_census(n);
        prop_assert_eq!(census.generic.len(), 1 << n);
        prop_assert_eq!(census.nongeneric.len(), 1 << n);
        prop_assert!(census.all_valid);
        let seqs: std::collections::BTreeSet<String> = census
            .nongeneric
            .iter()
            .map(|s| {
                prop_assert!(validate_spec(s).valid);
                Ok(format!("{:?}", s.d_sequence()))
            })
            .collect::<Result<_, TestCaseError>>()?;
        prop_assert_eq!(seqs.len(), 1 << n);
    }
}
