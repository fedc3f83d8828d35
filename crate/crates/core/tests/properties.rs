use std::sync::Arc;

use mobjlab::mcheck::{build_counterexample, maltsev_object_verdict, MALTSEV_MAX_BOUND};
use mobjlab::monoid::{groups_up_to_order_8, inverse_from_witness, witness_search, WordWitness};
use mobjlab::oracle::{compare_pushout, coproduct_by_cocones, pushout_by_cocones};
use mobjlab::ordgrp::{maltsev_object_ordgrp, preorder_from_cone, valid_cones, PreorderedGroup};
use mobjlab::quantale::{cartesian_witness, verify_quantale, Elem, Quantale};
use mobjlab::rel::{difunctional_check_by_definition, is_difunctional, SetRelation};
use mobjlab::uvfin::{check_condition, check_conditions_ab, verify_convergence, Condition, FiniteConvergence};
use mobjlab::vcat::{
    close_under_tensor, coproduct, default_names, enumerate_vfunctors, factorize, is_regular_mono, product,
    pushout_along_regmono, random_symmetric_wedge, random_vcategory, verify_vcategory, verify_vfunctor,
    VCategory, VFunctor,
};
use mobjlab::wcheck::{wmaltsev_direct, wmaltsev_factorization_oracle, wmaltsev_hom_oracle, wmaltsev_structural};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture(i: usize) -> Arc<Quantale> {
    let names = Quantale::fixture_names();
    Arc::new(Quantale::fixture(names[i % names.len()]).unwrap())
}

fn cartesian_fixture(i: usize) -> Arc<Quantale> {
    let names = ["2", "C1+", "max4"];
    Arc::new(Quantale::fixture(names[i % names.len()]).unwrap())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random V-functor between random V-categories of the given sizes, if any
/// exists.
fn random_functor(q: &Arc<Quantale>, n: usize, m: usize, r: &mut ChaCha8Rng) -> Option<VFunctor> {
    let x = random_vcategory(q, n, r);
    let y = random_vcategory(q, m, r);
    enumerate_vfunctors(&x, &y).unwrap().choose(r).cloned()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn quantale_lattice_laws(qi in 0usize..6, a in 0usize..8, b in 0usize..8, c in 0usize..8) {
        let q = fixture(qi);
        prop_assert!(verify_quantale(&q).holds());
        let n = q.len();
        let (a, b, c) = (Elem(a % n), Elem(b % n), Elem(c % n));
        prop_assert_eq!(q.join_pair(a, a), a);
        prop_assert_eq!(q.meet_pair(a, a), a);
        prop_assert_eq!(q.join_pair(a, b), q.join_pair(b, a));
        prop_assert_eq!(q.meet_pair(a, b), q.meet_pair(b, a));
        prop_assert_eq!(q.join_pair(q.join_pair(a, b), c), q.join_pair(a, q.join_pair(b, c)));
        prop_assert_eq!(q.meet_pair(q.meet_pair(a, b), c), q.meet_pair(a, q.meet_pair(b, c)));
        prop_assert_eq!(q.join_pair(a, q.meet_pair(a, b)), a);
        prop_assert_eq!(q.meet_pair(a, q.join_pair(a, b)), a);
        prop_assert!(q.leq(q.tensor(a, b), q.meet_pair(a, b)));
    }

    #[test]
    fn cartesian_witness_iff_tensor_is_meet(qi in 0usize..6) {
        let q = fixture(qi);
        let all_meet = q.elements().all(|u| q.elements().all(|v| q.tensor(u, v) == q.meet_pair(u, v)));
        prop_assert_eq!(cartesian_witness(&q).is_none(), all_meet);
    }

    #[test]
    fn factorize_is_epi_then_regular_mono(qi in 0usize..6, n in 0usize..4, m in 1usize..4, seed: u64) {
        let q = fixture(qi);
        let mut r = rng(seed);
        if let Some(f) = random_functor(&q, n, m, &mut r) {
            let fact = factorize(&f).unwrap();
            prop_assert!(fact.epi.is_surjective());
            prop_assert!(is_regular_mono(&fact.mono).holds());
            prop_assert_eq!(fact.epi.then(&fact.mono).unwrap().map().to_vec(), f.map().to_vec());
            prop_assert!(verify_vcategory(&fact.image).holds());
        }
    }

    #[test]
    fn pushout_matches_cocone_oracle(qi in 0usize..6, nz in 0usize..4, ny in 1usize..4, mask: u8, seed: u64) {
        let q = fixture(qi);
        let mut r = rng(seed);
        let z = random_vcategory(&q, nz, &mut r);
        let subset: Vec<usize> = (0..nz).filter(|i| mask >> i & 1 == 1).collect();
        let m = z.inclusion_of(&subset);
        let y = random_vcategory(&q, ny, &mut r);
        if let Some(f) = enumerate_vfunctors(m.source(), &y).unwrap().choose(&mut r) {
            let p = pushout_along_regmono(f, &m).unwrap();
            let o = pushout_by_cocones(f, &m).unwrap();
            prop_assert_eq!(compare_pushout(&p, &o), Ok(()));
            prop_assert!(verify_vcategory(&p.object).holds());
            prop_assert!(verify_vfunctor(&p.leg_y).holds());
            prop_assert!(verify_vfunctor(&p.leg_z).holds());
            prop_assert!(is_regular_mono(&p.leg_y).holds());
            prop_assert_eq!(f.then(&p.leg_y).unwrap().map().to_vec(), m.then(&p.leg_z).unwrap().map().to_vec());
        }
    }

    #[test]
    fn product_and_coproduct_are_valid(qi in 0usize..6, a in 0usize..4, b in 0usize..4, seed: u64) {
        let q = fixture(qi);
        let mut r = rng(seed);
        let x = random_vcategory(&q, a, &mut r);
        let y = random_vcategory(&q, b, &mut r);
        let p = product(&x, &y).unwrap();
        prop_assert!(verify_vcategory(&p.object).holds());
        for pr in &p.projections {
            prop_assert!(verify_vfunctor(pr).holds());
        }
        let c = coproduct(&x, &y).unwrap();
        prop_assert!(verify_vcategory(&c.object).holds());
        for inj in &c.injections {
            prop_assert!(verify_vfunctor(inj).holds());
            prop_assert!(is_regular_mono(inj).holds());
        }
        let o = coproduct_by_cocones(&x, &y).unwrap();
        prop_assert_eq!(o.classes, c.object.len());
        for (i, j) in (0..a).flat_map(|i| (0..a).map(move |j| (i, j))) {
            prop_assert_eq!(o.hom[o.y_class[i] * o.classes + o.y_class[j]], x.hom(i, j));
        }
        for (i, j) in (0..a).flat_map(|i| (0..b).map(move |j| (i, j))) {
            prop_assert_eq!(o.hom[o.y_class[i] * o.classes + o.z_class[j]], q.bottom());
        }
    }

    #[test]
    fn three_wmaltsev_procedures_agree(qi in 0usize..6, n in 0usize..5, seed: u64) {
        let y = random_vcategory(&fixture(qi), n, &mut rng(seed));
        let direct = wmaltsev_direct(&y).holds();
        prop_assert_eq!(wmaltsev_structural(&y).holds(), direct);
        prop_assert_eq!(wmaltsev_factorization_oracle(&y).unwrap().holds(), direct);
    }

    #[test]
    fn symmetric_wedge_structures_are_wmaltsev(qi in 0usize..6, n in 0usize..5, seed: u64) {
        let y = random_symmetric_wedge(&fixture(qi), n, &mut rng(seed));
        prop_assert!(verify_vcategory(&y).holds());
        prop_assert!(wmaltsev_direct(&y).holds());
    }

    #[test]
    fn wmaltsev_closed_under_products_and_substructures(
        qi in 0usize..6, a in 0usize..4, b in 0usize..4, mask: u8, seed: u64,
    ) {
        let q = fixture(qi);
        let mut r = rng(seed);
        let x = random_symmetric_wedge(&q, a, &mut r);
        let y = random_symmetric_wedge(&q, b, &mut r);
        prop_assert!(wmaltsev_direct(&product(&x, &y).unwrap().object).holds());
        let subset: Vec<usize> = (0..a).filter(|i| mask >> i & 1 == 1).collect();
        prop_assert!(wmaltsev_direct(&x.full_substructure(&subset)).holds());
    }

    #[test]
    fn cartesian_symmetric_structures_are_wmaltsev(qi in 0usize..3, n in 0usize..5, seed: u64) {
        let q = cartesian_fixture(qi);
        let mut r = rng(seed);
        let mut hom = vec![q.top(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let e = Elem(r.gen_range(0..q.len()));
                hom[i * n + j] = e;
                hom[j * n + i] = e;
            }
        }
        close_under_tensor(&q, n, &mut hom);
        let y = VCategory::new(q, default_names(n), hom).unwrap();
        prop_assert!(y.is_symmetric());
        prop_assert!(wmaltsev_direct(&y).holds());
    }

    #[test]
    fn difunctionality_survives_transpose(nl in 0usize..6, nr in 0usize..6, bits: u64) {
        let left: Vec<String> = (0..nl).map(|i| format!("x{i}")).collect();
        let right: Vec<String> = (0..nr).map(|i| format!("z{i}")).collect();
        let pairs: Vec<(usize, usize)> = (0..nl * nr).filter(|k| bits >> k & 1 == 1).map(|k| (k / nr, k % nr)).collect();
        let rel = SetRelation::new(left, right, pairs).unwrap();
        let v = is_difunctional(&rel).holds();
        prop_assert_eq!(is_difunctional(&rel.transpose()).holds(), v);
        prop_assert_eq!(difunctional_check_by_definition(&rel).holds(), v);
    }

    #[test]
    fn equivalence_relations_are_difunctional(labels in proptest::collection::vec(0usize..4, 0..7)) {
        let names: Vec<String> = (0..labels.len()).map(|i| format!("p{i}")).collect();
        let n = labels.len();
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| labels[a] == labels[b]).collect();
        let rel = SetRelation::new(names.clone(), names, pairs).unwrap();
        prop_assert!(is_difunctional(&rel).holds());
    }

    #[test]
    fn inverse_does_not_depend_on_the_witness(gi in 0usize..14, xi in 0usize..8, ui in 0usize..8) {
        let g = &groups_up_to_order_8()[gi];
        let (x, u1) = (xi % g.len(), ui % g.len());
        let found = witness_search(g, x, 1).unwrap();
        let y = inverse_from_witness(g, &found).unwrap();
        prop_assert_eq!(g.op(x, y), g.identity());
        prop_assert_eq!(g.op(y, x), g.identity());
        // k = 2: u1 + u2 = x with vi = -ui and wi = ui
        let neg = |a: usize| g.inverse(a).unwrap();
        let u2 = g.op(neg(u1), x);
        let name = |a: usize| g.element_name(a).to_string();
        let other = WordWitness {
            x: name(x),
            triples: vec![(name(u1), name(neg(u1)), name(u1)), (name(u2), name(neg(u2)), name(u2))],
        };
        prop_assert_eq!(inverse_from_witness(g, &other).unwrap(), y);
    }

    #[test]
    fn cone_preorders(gi in 0usize..14, ci: usize) {
        let g = groups_up_to_order_8()[gi].clone();
        let cones = valid_cones(&g);
        let cone = cones[ci % cones.len()].clone();
        let pg = PreorderedGroup::finite(g, cone).unwrap();
        let rel = preorder_from_cone(&pg).unwrap();
        let n = rel.left.len();
        prop_assert!((0..n).all(|a| rel.contains(a, a)));
        for &(a, b) in &rel.pairs {
            for c in 0..n {
                prop_assert!(!rel.contains(b, c) || rel.contains(a, c));
            }
        }
        let symmetric = rel.pairs.iter().all(|&(a, b)| rel.contains(b, a));
        prop_assert_eq!(maltsev_object_ordgrp(&pg).unwrap().holds(), symmetric);
    }

    #[test]
    fn cartesian_t_implies_b(qi in 0usize..3, n in 0usize..5, seed: u64) {
        let x = random_vcategory(&cartesian_fixture(qi), n, &mut rng(seed));
        let c = FiniteConvergence::from_matrix(&x);
        prop_assert!(verify_convergence(&c).holds());
        prop_assert!(check_condition(&c, Condition::B).holds());
    }

    #[test]
    fn two_valued_ab_is_wmaltsev(n in 0usize..5, seed: u64) {
        let x = random_vcategory(&fixture(0), n, &mut rng(seed));
        let c = FiniteConvergence::from_matrix(&x);
        prop_assert_eq!(check_conditions_ab(&c).holds(), wmaltsev_direct(&x).holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn direct_true_survives_hom_oracle(qi in 0usize..6, n in 0usize..3, seed: u64) {
        let y = random_symmetric_wedge(&fixture(qi), n, &mut rng(seed));
        prop_assert!(wmaltsev_hom_oracle(&y, 2).unwrap().holds_at_bound());
    }
}

#[test]
fn empty_is_a_maltsev_object_everywhere() {
    for i in 0..6 {
        let q = fixture(i);
        let v = maltsev_object_verdict(&q, &VCategory::empty(q.clone()), MALTSEV_MAX_BOUND).unwrap();
        assert_eq!(v.decided(), Some(true));
    }
}

#[test]
fn counterexamples_are_symmetric_over_commutative_quantales() {
    for i in 0..6 {
        let q = fixture(i);
        if let Some((u, v)) = cartesian_witness(&q) {
            assert!(q.is_commutative());
            let d = build_counterexample(&q, u, v).unwrap();
            for x in [&d.y, &d.a, &d.c, &d.d] {
                assert!(x.is_symmetric());
            }
        }
    }
}
