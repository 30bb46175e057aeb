mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use splitgraph::curvecomb::build_splitting_cover;
use splitgraph::equivalence::{exhaustive_equivalence, nv_signature, twisted_copy, verify_witness, Limits};
use splitgraph::fingroup::{coset_of, ConjugacyClass, CycloCoset, FiniteGroup, GroupAutomorphism, GroupRef, Subset};
use splitgraph::multigraph::Walk;

use common::{random_closed_walk, random_instance};

fn group(cyclic: bool, n: usize) -> GroupRef {
    if cyclic { FiniteGroup::cyclic(n) } else { FiniteGroup::symmetric(n.min(4)) }.unwrap().into_ref()
}

fn subset_from_mask(g: &FiniteGroup, mask: u64) -> Subset {
    Subset::new(g.elements().filter(|&x| mask >> (x % 64) & 1 == 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms(cyclic in any::<bool>(), n in 1usize..=12) {
        let g = group(cyclic, n);
        let e = g.identity();
        for a in g.elements() {
            prop_assert_eq!(g.mul(a, e), a);
            prop_assert_eq!(g.mul(e, a), a);
            prop_assert_eq!(g.mul(a, g.inv(a)), e);
            for b in g.elements() {
                for c in g.elements() {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn subset_classes_are_conjugation_invariant(cyclic in any::<bool>(), n in 1usize..=12, mask in any::<u64>(), k in any::<usize>()) {
        let g = group(cyclic, n);
        let s = subset_from_mask(&g, mask);
        let h = k % g.order();
        let class = ConjugacyClass::of_subset(&g, &s);
        prop_assert_eq!(&ConjugacyClass::of_subset(&g, &g.conjugate_subset(h, &s)), &class);
        prop_assert!(class.contains(&s));
        if g.is_abelian() {
            prop_assert_eq!(class.len(), 1);
        }
    }

    #[test]
    fn coset_round_trip(m in 1usize..=24, offset in -50i64..50, pick in any::<usize>()) {
        let divs: Vec<usize> = (1..=m).filter(|d| m % d == 0).collect();
        let step = divs[pick % divs.len()];
        let coset = CycloCoset::new(m, offset, step).unwrap();
        let g = FiniteGroup::cyclic(m).unwrap();
        prop_assert_eq!(coset_of(&g, &coset.elements()).unwrap(), Some(coset));
    }

    #[test]
    fn walk_algebra(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 4, 6);
        let g = inst.cover.base();
        let v = 0;
        let w1 = random_closed_walk(g, v, 5, &mut rng);
        let w2 = random_closed_walk(g, v, 5, &mut rng);
        let w3 = random_closed_walk(g, v, 5, &mut rng);
        prop_assert_eq!(w1.inverse(g).unwrap().inverse(g).unwrap(), w1.clone());
        let left = w1.concat(&w2, g).unwrap().concat(&w3, g).unwrap();
        let right = w1.concat(&w2.concat(&w3, g).unwrap(), g).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.len(), w1.len() + w2.len() + w3.len());
        prop_assert_eq!(
            w1.concat(&w2, g).unwrap().inverse(g).unwrap(),
            w2.inverse(g).unwrap().concat(&w1.inverse(g).unwrap(), g).unwrap()
        );
    }

    #[test]
    fn simple_walks_closed_under_shift_and_inverse(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 4, 2);
        let g = inst.cover.base();
        let walks = g.simple_closed_walks();
        let set: BTreeSet<(usize, Vec<_>)> = walks.iter().map(|w| (w.start, w.steps.clone())).collect();
        prop_assert_eq!(set.len(), walks.len());
        for w in &walks {
            prop_assert!(w.is_closed(g) && w.is_simple(g));
            let inv = w.inverse(g).unwrap();
            prop_assert!(set.contains(&(inv.start, inv.steps.clone())));
            for j in 0..w.len() {
                let sh = w.shift(j, g).unwrap();
                prop_assert!(set.contains(&(sh.start, sh.steps.clone())));
            }
        }
    }

    #[test]
    fn isomorphisms_are_verified_bijections(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 3, 3);
        let tau = GroupAutomorphism::identity(inst.cover.group());
        let (copy, witness) = twisted_copy(&inst.cover, &tau, &mut rng).unwrap();
        let (g, h) = (inst.cover.base(), copy.base());
        prop_assert!(witness.theta.check_map(g, h).is_ok());
        let mut count = 0;
        for iso in g.isomorphisms(h, None).take(2000) {
            prop_assert!(iso.check_map(g, h).is_ok());
            prop_assert!(iso.is_bijective(h));
            prop_assert!(iso.inverse().check_map(h, g).is_ok());
            count += 1;
        }
        prop_assert!(count > 0);
    }

    #[test]
    fn splitting_covers_satisfy_walk_identities(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 4, 12);
        let c = &inst.cover;
        prop_assert!(c.validate().passed(), "{}", c.validate());
        let (g, grp) = (c.base(), c.group());
        let m = inst.data.m;
        prop_assert_eq!(c.total().edge_count(), m * g.edge_count());
        for v in 0..g.vertex_count() {
            let id = g.vertex_id(v);
            let expected = inst.data.s.get(id).copied().unwrap_or(m);
            prop_assert_eq!(c.fiber_vertices(v).unwrap().len(), expected);
        }
        let start = 0;
        let lift = c.fiber_vertices(start).unwrap()[0];
        let w1 = random_closed_walk(g, start, 6, &mut rng);
        let w2 = random_closed_walk(g, start, 6, &mut rng);
        let nv1 = c.net_voltage_set(&w1, lift).unwrap();
        let nv2 = c.net_voltage_set(&w2, lift).unwrap();
        for h in grp.elements() {
            prop_assert_eq!(c.net_voltage_set(&w1, c.act_vertex(h, lift)).unwrap(), grp.conjugate_subset(h, &nv1));
        }
        prop_assert_eq!(c.net_voltage_set(&w1.inverse(g).unwrap(), lift).unwrap(), grp.inverse_set(&nv1));
        prop_assert_eq!(c.net_voltage_set(&w1.concat(&w2, g).unwrap(), lift).unwrap(), grp.product_set(&nv1, &nv2));
        let class = c.net_voltage_class(&w1).unwrap();
        for j in 0..w1.len() {
            prop_assert_eq!(&c.net_voltage_class(&w1.shift(j, g).unwrap()).unwrap(), &class);
        }
    }

    #[test]
    fn regauging_offsets_preserves_the_cover(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 3, 6);
        let mut data = inst.data.clone();
        let shifts: Vec<(String, i64)> = inst.curve.components.iter()
            .map(|comp| (comp.id.clone(), rand::Rng::gen_range(&mut rng, 0..data.s[&comp.id] as i64)))
            .collect();
        for p in &inst.curve.points {
            let offs = data.offsets.get_mut(&p.id).unwrap();
            for (o, b) in offs.iter_mut().zip(&p.branches) {
                *o += shifts.iter().find(|(id, _)| *id == b.component).unwrap().1;
            }
        }
        let regauged = build_splitting_cover(&inst.curve, &data).unwrap();
        let g = inst.cover.base();
        for _ in 0..6 {
            let v = rand::Rng::gen_range(&mut rng, 0..g.vertex_count());
            let w: Walk = random_closed_walk(g, v, 6, &mut rng);
            prop_assert_eq!(inst.cover.net_voltage_class(&w).unwrap(), regauged.net_voltage_class(&w).unwrap());
        }
        let tau = GroupAutomorphism::identity(inst.cover.group());
        if let Ok(v) = exhaustive_equivalence(&inst.cover, &regauged, &tau, &Limits::default()) {
            prop_assert!(v.is_equivalent(), "{}", v.name());
        }
    }

    #[test]
    fn signatures_ignore_relabelling(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 3, 8);
        let autos = inst.cover.group().automorphisms();
        let tau = &autos[rand::Rng::gen_range(&mut rng, 0..autos.len())];
        let (copy, witness) = twisted_copy(&inst.cover, tau, &mut rng).unwrap();
        prop_assert!(verify_witness(&inst.cover, &copy, tau, &witness).is_ok());
        prop_assert_eq!(nv_signature(&inst.cover).unwrap().apply(tau), nv_signature(&copy).unwrap());
    }
}
