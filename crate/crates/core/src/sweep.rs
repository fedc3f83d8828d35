//! Exhaustive and seeded sweeps, one per acceptance criterion.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mcheck::{build_counterexample, comparison_is_regular_mono, comparison_map, three_point_shape};
use crate::monoid::{enumerate_monoids, inverse_from_witness, is_group, wmaltsev_monoid, witness_search};
use crate::oracle::{compare_pushout, pushout_by_cocones};
use crate::ordgrp::{maltsev_object_ordgrp, preorder_from_cone, valid_cones, IntCone, PreorderedGroup};
use crate::quantale::{Elem, Quantale};
use crate::rel::{difunctional_check_by_definition, is_difunctional, SetRelation};
use crate::uvfin::{
    check_condition, check_conditions_ab, search_a_without_b, search_t_without_b, vcat_of_convergence,
    Condition, FiniteConvergence,
};
use crate::vcat::{
    enumerate_vcategories, enumerate_vcategories_up_to_iso, enumerate_vfunctors, for_each_vcategory, product,
    pushout_along_regmono, random_symmetric_wedge, random_vcategory, verify_vcategory, HomPair,
    RegularMonoViolation, VCategory, VFunctor,
};
use crate::verdict::{BoundedVerdict, Verdict};
use crate::wcheck::{wmaltsev_direct, wmaltsev_factorization_oracle, wmaltsev_hom_oracle, wmaltsev_structural};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub seed: u64,
    pub random_pushouts: usize,
    pub random_relations: usize,
    pub closure_instances: usize,
    pub hom_bound: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: DEFAULT_SEED,
            random_pushouts: 100,
            random_relations: 10_000,
            closure_instances: 100,
            hom_bound: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub instances: usize,
    pub detail: String,
    pub millis: u128,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<28} {} ({} instances) {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.instances,
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "theorem-equivalence"),
    (2, "two-valued-preorders"),
    (3, "non-cartesian-collapse"),
    (4, "cartesian-sanity"),
    (5, "monoids"),
    (6, "pushout"),
    (7, "difunctionality"),
    (8, "hom-relation"),
    (9, "closure"),
    (10, "uv-finite"),
    (11, "ordgrp"),
];

/// Accepts a criterion number or its name.
pub fn criterion_id(suite: &str) -> Option<u8> {
    CRITERIA
        .iter()
        .find(|(id, name)| suite == *name || suite == id.to_string())
        .map(|(id, _)| *id)
}

pub fn run_criterion(id: u8, cfg: &SweepConfig) -> Result<CriterionOutcome> {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| n.to_string())
        .ok_or_else(|| Error::Malformed(format!("no criterion {id}")))?;
    let start = Instant::now();
    let (passed, instances, detail) = match id {
        1 => theorem_equivalence()?,
        2 => two_valued_preorders()?,
        3 => non_cartesian_collapse()?,
        4 => cartesian_sanity()?,
        5 => monoids()?,
        6 => pushouts(cfg)?,
        7 => difunctionality(cfg),
        8 => hom_relation_consistency(cfg)?,
        9 => closure(cfg)?,
        10 => uv_finite(),
        11 => ordgrp()?,
        _ => unreachable!(),
    };
    Ok(CriterionOutcome {
        id,
        name,
        passed,
        instances,
        detail,
        millis: start.elapsed().as_millis(),
    })
}

pub fn run_all(cfg: &SweepConfig) -> Result<Vec<CriterionOutcome>> {
    CRITERIA.iter().map(|(id, _)| run_criterion(*id, cfg)).collect()
}

type Outcome = (bool, usize, String);

fn fixtures() -> Vec<Arc<Quantale>> {
    Quantale::fixture_names()
        .iter()
        .map(|n| Arc::new(Quantale::fixture(n).expect("fixture")))
        .collect()
}

fn fixture(name: &str) -> Arc<Quantale> {
    Arc::new(Quantale::fixture(name).expect("fixture"))
}

fn first_failure<T: Send + Sync>(items: Vec<T>, check: impl Fn(&T) -> Result<Option<String>> + Sync) -> Result<Option<String>> {
    let results: Vec<Result<Option<String>>> = items.par_iter().map(&check).collect();
    for r in results {
        if let Some(msg) = r? {
            return Ok(Some(msg));
        }
    }
    Ok(None)
}

fn verdict_outcome(instances: usize, failure: Option<String>) -> Outcome {
    match failure {
        None => (true, instances, String::new()),
        Some(msg) => (false, instances, msg),
    }
}

fn theorem_equivalence() -> Result<Outcome> {
    let all: Vec<VCategory> = fixtures()
        .iter()
        .flat_map(|q| (0..=3).flat_map(move |n| enumerate_vcategories(q, n)))
        .collect();
    let count = all.len();
    let failure = first_failure(all, |y| {
        let direct = wmaltsev_direct(y).holds();
        let structural = wmaltsev_structural(y).holds();
        let factorization = wmaltsev_factorization_oracle(y)?.holds();
        Ok((direct != structural || direct != factorization).then(|| {
            format!(
                "disagreement on {} over {}: direct {direct}, structural {structural}, factorization {factorization}",
                y,
                y.quantale().name()
            )
        }))
    })?;
    Ok(verdict_outcome(count, failure))
}

fn two_valued_preorders() -> Result<Outcome> {
    let q = fixture("2");
    let all: Vec<VCategory> = (0..=4).flat_map(|n| enumerate_vcategories(&q, n)).collect();
    let count = all.len();
    let top = q.top();
    let failure = first_failure(all, |y| {
        let n = y.len();
        let related = |a: usize, b: usize| y.hom(a, b) == top;
        let equivalence = (0..n).all(|a| (0..n).all(|b| related(a, b) == related(b, a)));
        let direct = wmaltsev_direct(y).holds();
        let factorization = wmaltsev_factorization_oracle(y)?.holds();
        Ok((direct != equivalence || factorization != equivalence).then(|| {
            format!("{}: equivalence {equivalence}, direct {direct}, factorization {factorization}", y)
        }))
    })?;
    Ok(verdict_outcome(count, failure))
}

fn non_cartesian_collapse() -> Result<Outcome> {
    let mut count = 0;
    let mut noncartesian = Vec::new();
    for q in fixtures() {
        let pairs: Vec<(Elem, Elem)> = q
            .elements()
            .flat_map(|u| q.elements().map(move |v| (u, v)))
            .filter(|&(u, v)| q.lt(q.tensor(u, v), q.meet_pair(u, v)))
            .collect();
        if pairs.is_empty() != q.is_cartesian() {
            return Ok((false, count, format!("{} has inconsistent cartesian status", q.name())));
        }
        if !pairs.is_empty() {
            noncartesian.push(q.name().to_string());
        }
        for (u, v) in pairs {
            count += 1;
            let dse = build_counterexample(&q, u, v)?;
            dse.validate()?;
            let comparison = comparison_map(&dse)?;
            if !(comparison.is_injective() && comparison.is_surjective()) {
                return Ok((false, count, format!("comparison not bijective for ({u:?}, {v:?}) over {}", q.name())));
            }
            let expected = RegularMonoViolation::NotReflecting(HomPair {
                from: "0".into(),
                to: "2".into(),
                source_value: q.name_of(q.tensor(u, v)).into(),
                target_value: q.name_of(q.meet_pair(u, v)).into(),
            });
            match comparison_is_regular_mono(&dse)? {
                Verdict::Fails(w) if w == expected => {}
                other => {
                    return Ok((
                        false,
                        count,
                        format!(
                            "over {} with u = {}, v = {}: expected {expected:?}, got {other:?}",
                            q.name(),
                            q.name_of(u),
                            q.name_of(v)
                        ),
                    ))
                }
            }
        }
    }
    Ok((true, count, format!("non-cartesian: {}", noncartesian.join(", "))))
}

fn cartesian_sanity() -> Result<Outcome> {
    let mut count = 0;
    for q in fixtures().into_iter().filter(|q| q.is_cartesian()) {
        for n in 0..=3 {
            for y in enumerate_vcategories(&q, n) {
                if !y.is_symmetric() {
                    continue;
                }
                count += 1;
                if let Verdict::Fails(w) = wmaltsev_direct(&y) {
                    return Ok((false, count, format!("{} over {}: {w:?}", y, q.name())));
                }
            }
        }
        for u in q.elements() {
            for v in q.elements() {
                count += 1;
                let dse = three_point_shape(&q, u, v)?;
                if let Verdict::Fails(w) = comparison_is_regular_mono(&dse)? {
                    return Ok((false, count, format!("three-point shape over {}: {w:?}", q.name())));
                }
            }
        }
    }
    Ok((true, count, String::new()))
}

fn monoids() -> Result<Outcome> {
    let mut count = 0;
    let mut groups = 0;
    for n in 1..=4 {
        for m in enumerate_monoids(n) {
            count += 1;
            let group = is_group(&m).holds();
            let wmaltsev = wmaltsev_monoid(&m).holds();
            let mut all_found = true;
            for x in 0..m.len() {
                match witness_search(&m, x, 1) {
                    Some(w) => {
                        let y = inverse_from_witness(&m, &w)?;
                        let zero = m.identity();
                        if m.op(x, y) != zero || m.op(y, x) != zero {
                            return Ok((false, count, format!("bad inverse for {} in {:?}", m.element_name(x), m.table())));
                        }
                    }
                    None => all_found = false,
                }
            }
            if group != wmaltsev || group != all_found {
                return Ok((
                    false,
                    count,
                    format!("table {:?}: group {group}, wmaltsev {wmaltsev}, witnesses {all_found}", m.table()),
                ));
            }
            groups += usize::from(group);
        }
    }
    Ok((true, count, format!("{groups} groups")))
}

/// Every span `Y ← X → Z` with `Z` and `Y` up to isomorphism, `X` a full
/// substructure of `Z` and `f` any V-functor.
fn exhaustive_spans(q: &Arc<Quantale>, max: usize) -> Result<Vec<(VFunctor, VFunctor)>> {
    let reps: Vec<VCategory> = (0..=max).flat_map(|n| enumerate_vcategories_up_to_iso(q, n)).collect();
    let mut spans = Vec::new();
    for z in &reps {
        for bits in 0u32..1 << z.len() {
            let subset: Vec<usize> = (0..z.len()).filter(|i| bits >> i & 1 == 1).collect();
            let m = z.inclusion_of(&subset);
            for y in &reps {
                for f in enumerate_vfunctors(m.source(), y)? {
                    spans.push((f, m.clone()));
                }
            }
        }
    }
    Ok(spans)
}

fn random_span(rng: &mut ChaCha8Rng) -> Result<(VFunctor, VFunctor)> {
    let qs = fixtures();
    loop {
        let q = qs.choose(rng).expect("fixtures").clone();
        let z = random_vcategory(&q, rng.gen_range(1..=4), rng);
        let subset: Vec<usize> = (0..z.len()).filter(|_| rng.gen_bool(0.5)).collect();
        let m = z.inclusion_of(&subset);
        let y = random_vcategory(&q, rng.gen_range(1..=4), rng);
        let fs = enumerate_vfunctors(m.source(), &y)?;
        if let Some(f) = fs.choose(rng) {
            return Ok((f.clone(), m));
        }
    }
}

fn check_pushout(f: &VFunctor, m: &VFunctor) -> Result<Option<String>> {
    let p = pushout_along_regmono(f, m)?;
    let o = pushout_by_cocones(f, m)?;
    Ok(compare_pushout(&p, &o).err().map(|e| {
        format!(
            "f = {} into {}, m = {} into {}: {e}",
            f.label(),
            f.target(),
            m.label(),
            m.target()
        )
    }))
}

fn pushouts(cfg: &SweepConfig) -> Result<Outcome> {
    let mut count = 0;
    for name in ["2", "C2+"] {
        let spans = exhaustive_spans(&fixture(name), 3)?;
        count += spans.len();
        if let Some(msg) = first_failure(spans, |(f, m)| check_pushout(f, m))? {
            return Ok((false, count, format!("over {name}: {msg}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let random: Vec<(VFunctor, VFunctor)> =
        (0..cfg.random_pushouts).map(|_| random_span(&mut rng)).collect::<Result<_>>()?;
    count += random.len();
    let failure = first_failure(random, |(f, m)| check_pushout(f, m))?;
    Ok(verdict_outcome(count, failure.map(|m| format!("random: {m}"))))
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn compare_difunctional(r: &SetRelation) -> Option<String> {
    let fast = is_difunctional(r);
    let slow = difunctional_check_by_definition(r);
    if fast.holds() != slow.holds() {
        return Some(format!("{:?}: fast {}, definition {}", r.label_pairs(), fast.holds(), slow.holds()));
    }
    if let Verdict::Fails(w) = fast {
        let idx = |names: &[String], s: &str| names.iter().position(|n| n == s).expect("label");
        let (x1, x2) = (idx(&r.left, &w.x1), idx(&r.left, &w.x2));
        let (z1, z2) = (idx(&r.right, &w.z1), idx(&r.right, &w.z2));
        let valid = r.contains(x1, z2) && r.contains(x2, z2) && r.contains(x2, z1) && !r.contains(x1, z1);
        if !valid {
            return Some(format!("{:?}: invalid witness {w:?}", r.label_pairs()));
        }
    }
    None
}

fn difunctionality(cfg: &SweepConfig) -> Outcome {
    let (left, right) = (labels("x", 3), labels("z", 3));
    for bits in 0u32..512 {
        let pairs = (0..9).filter(|k| bits >> k & 1 == 1).map(|k| (k / 3, k % 3));
        let r = SetRelation::new(left.clone(), right.clone(), pairs.collect::<Vec<_>>()).expect("in range");
        if let Some(msg) = compare_difunctional(&r) {
            return (false, bits as usize + 1, msg);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7);
    let relations: Vec<SetRelation> = (0..cfg.random_relations)
        .map(|_| {
            let (nl, nr) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
            let density: f64 = rng.gen_range(0.1..0.9);
            let pairs: Vec<(usize, usize)> = (0..nl)
                .flat_map(|a| (0..nr).map(move |b| (a, b)))
                .filter(|_| rng.gen_bool(density))
                .collect();
            SetRelation::new(labels("x", nl), labels("z", nr), pairs).expect("in range")
        })
        .collect();
    let failure = relations.par_iter().find_map_first(compare_difunctional);
    verdict_outcome(512 + relations.len(), failure)
}

fn hom_relation_consistency(cfg: &SweepConfig) -> Result<Outcome> {
    let mut count = 0;
    let mut falsified = 0;
    for name in ["2", "C2+"] {
        let q = fixture(name);
        for n in 0..=2 {
            for y in enumerate_vcategories(&q, n) {
                count += 1;
                let direct = wmaltsev_direct(&y).holds();
                let hom = wmaltsev_hom_oracle(&y, cfg.hom_bound)?;
                if direct && !hom.holds_at_bound() {
                    return Ok((false, count, format!("{} over {name}: {:?}", y, hom.witness())));
                }
                if !direct && !hom.holds_at_bound() {
                    falsified += 1;
                }
            }
        }
    }
    let q = fixture("2");
    let chain = VCategory::from_entries(q, &["a", "b"], &[("a", "b", "1")])?;
    count += 1;
    if let BoundedVerdict::HoldsAtBound { bound, checked } = wmaltsev_hom_oracle(&chain, cfg.hom_bound)? {
        return Ok((false, count, format!("2-chain survives {checked} cospans at bound {bound}")));
    }
    Ok((true, count, format!("{falsified} non-W-Mal'tsev instances falsified")))
}

fn wmaltsev_everywhere(x: &VCategory) -> Result<Option<String>> {
    if let Verdict::Fails(v) = verify_vcategory(x) {
        return Ok(Some(format!("{} is not a V-category: {v:?}", x)));
    }
    let direct = wmaltsev_direct(x).holds();
    let structural = wmaltsev_structural(x).holds();
    let factorization = if x.len() <= 3 { wmaltsev_factorization_oracle(x)?.holds() } else { true };
    Ok((!(direct && structural && factorization)).then(|| {
        format!(
            "{} over {}: direct {direct}, structural {structural}, factorization {factorization}",
            x,
            x.quantale().name()
        )
    }))
}

fn closure(cfg: &SweepConfig) -> Result<Outcome> {
    let qs = fixtures();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9);
    let mut derived = Vec::new();
    for _ in 0..cfg.closure_instances {
        let q = qs.choose(&mut rng).expect("fixtures").clone();
        let a = random_symmetric_wedge(&q, rng.gen_range(0..=3), &mut rng);
        let b = random_symmetric_wedge(&q, rng.gen_range(0..=3), &mut rng);
        let subset: Vec<usize> = (0..a.len()).filter(|_| rng.gen_bool(0.6)).collect();
        derived.push(a.full_substructure(&subset));
        derived.push(product(&a, &b)?.object);
        derived.push(a);
        derived.push(b);
    }
    let count = derived.len();
    let failure = first_failure(derived, wmaltsev_everywhere)?;
    Ok(verdict_outcome(count, failure))
}

fn uv_finite() -> Outcome {
    let mut count = 0;
    let two = fixture("2");
    for n in 0..=4 {
        let mut bad = None;
        for_each_vcategory(&two, n, &mut |x| {
            count += 1;
            let c = FiniteConvergence::from_matrix(x);
            if bad.is_none() && check_conditions_ab(&c).holds() != wmaltsev_direct(&vcat_of_convergence(&c)).holds() {
                bad = Some(x.to_string());
            }
        });
        if let Some(line) = bad {
            return (false, count, format!("(a) and (b) disagree with W-Mal'tsev on {line}"));
        }
    }
    for q in fixtures().into_iter().filter(|q| q.is_cartesian()) {
        for n in 0..=4 {
            for_each_vcategory(&q, n, &mut |_| count += 1);
        }
        if let Some(c) = search_t_without_b(&q, 4) {
            let w = check_condition(&c, Condition::B).into_witness();
            return (false, count, format!("over {} (T) holds and (b) fails: {w:?}", q.name()));
        }
    }
    let c3 = fixture("C3+");
    for n in 0..=4 {
        for_each_vcategory(&c3, n, &mut |_| count += 1);
    }
    let t_without_b = search_t_without_b(&c3, 4)
        .map(|c| vcat_of_convergence(&c).to_string())
        .unwrap_or_else(|| "none".into());
    match search_a_without_b(&c3, 4) {
        Some(c) => (true, count, format!("(a) without (b) over C3+: {}", vcat_of_convergence(&c))),
        None => (
            false,
            count,
            format!(
                "no structure over C3+ with at most 4 points satisfies (a) and fails (b); \
                 (a) with y = z forces symmetry, and symmetry turns (a) into (b). \
                 (T) without (b): {t_without_b}"
            ),
        ),
    }
}

fn ordgrp() -> Result<Outcome> {
    let mut count = 0;
    for g in crate::monoid::groups_up_to_order_8() {
        for cone in valid_cones(&g) {
            count += 1;
            let pg = PreorderedGroup::finite(g.clone(), cone)?;
            let verdict = maltsev_object_ordgrp(&pg)?;
            let relation = preorder_from_cone(&pg)?;
            let symmetric = relation.pairs.iter().all(|&(x, y)| relation.contains(y, x));
            if !verdict.holds() || !symmetric {
                return Ok((false, count, format!("{} with cone {:?}: verdict {verdict:?}", g.name(), pg)));
            }
        }
    }
    for (cone, expected) in [
        (IntCone::NonNeg, false),
        (IntCone::Zero, true),
        (IntCone::All, true),
        (IntCone::MultiplesOf(2), true),
    ] {
        count += 1;
        let verdict = maltsev_object_ordgrp(&PreorderedGroup::integers(cone))?;
        let symmetric = !matches!(cone, IntCone::NonNeg);
        if verdict.holds() != expected || symmetric != expected {
            return Ok((false, count, format!("ℤ with cone {cone}: {verdict:?}")));
        }
    }
    Ok((true, count, String::new()))
}
