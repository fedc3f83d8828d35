//! Mal'tsev objects of `(V-Cat)^op` through regular pushouts.
//!
//! A double split epimorphism of `(V-Cat)^op` over `Y` is, read in `V-Cat`,
//! a commuting diagram of split monomorphisms
//!
//! ```text
//! f: Y → A,  s: A → Y      g: Y → C,  t: C → Y
//! g': A → D, t': D → A     f': C → D, s': D → C
//! ```
//!
//! with `s∘f = 1`, `t∘g = 1`, `s'∘f' = 1`, `t'∘g' = 1`. `Y` is a Mal'tsev
//! object when for every such diagram the comparison `[g', f']: A +_Y C → D`
//! is a regular monomorphism.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantale::{cartesian_witness, Elem, Quantale};
use crate::vcat::{
    enumerate_vcategories_up_to_iso, enumerate_vfunctors, is_regular_mono, pushout_along_regmono,
    verify_vfunctor, RegularMonoViolation, VCatSnapshot, VCategory, VFunctor,
};
use crate::verdict::Verdict;

/// Largest carrier accepted by the bounded search in [`maltsev_object_verdict`].
pub const MALTSEV_MAX_BOUND: usize = 4;

#[derive(Debug, Clone)]
pub struct DoubleSplitEpi {
    pub y: VCategory,
    pub a: VCategory,
    pub c: VCategory,
    pub d: VCategory,
    /// `Y → A`
    pub f: VFunctor,
    /// `A → Y`
    pub s: VFunctor,
    /// `Y → C`
    pub g: VFunctor,
    /// `C → Y`
    pub t: VFunctor,
    /// `C → D`
    pub f2: VFunctor,
    /// `D → C`
    pub s2: VFunctor,
    /// `A → D`
    pub g2: VFunctor,
    /// `D → A`
    pub t2: VFunctor,
}

fn same_objects(x: &VCategory, y: &VCategory) -> bool {
    x.objects() == y.objects() && x.hom_matrix() == y.hom_matrix()
}

fn composite(first: &VFunctor, second: &VFunctor) -> Vec<usize> {
    first.map().iter().map(|&i| second.apply(i)).collect()
}

impl DoubleSplitEpi {
    /// Checks endpoints, the V-functor condition on all eight maps, the split
    /// identities and the four commuting squares.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDoubleSplitEpi(m));
        let ends: [(&str, &VFunctor, &VCategory, &VCategory); 8] = [
            ("f", &self.f, &self.y, &self.a),
            ("s", &self.s, &self.a, &self.y),
            ("g", &self.g, &self.y, &self.c),
            ("t", &self.t, &self.c, &self.y),
            ("f'", &self.f2, &self.c, &self.d),
            ("s'", &self.s2, &self.d, &self.c),
            ("g'", &self.g2, &self.a, &self.d),
            ("t'", &self.t2, &self.d, &self.a),
        ];
        for (name, m, src, tgt) in ends {
            if !same_objects(m.source(), src) || !same_objects(m.target(), tgt) {
                return bad(format!("{name} has the wrong source or target"));
            }
            if let Verdict::Fails(p) = verify_vfunctor(m) {
                return bad(format!("{name} is not a V-functor at {p}"));
            }
        }
        let identity = |n: usize| (0..n).collect::<Vec<_>>();
        let splits = [
            ("s∘f", &self.f, &self.s, self.y.len()),
            ("t∘g", &self.g, &self.t, self.y.len()),
            ("s'∘f'", &self.f2, &self.s2, self.c.len()),
            ("t'∘g'", &self.g2, &self.t2, self.a.len()),
        ];
        for (name, first, second, n) in splits {
            if composite(first, second) != identity(n) {
                return bad(format!("{name} is not the identity"));
            }
        }
        let squares = [
            ("g'∘f = f'∘g", (&self.f, &self.g2), (&self.g, &self.f2)),
            ("s∘t' = t∘s'", (&self.t2, &self.s), (&self.s2, &self.t)),
            ("t'∘f' = f∘t", (&self.f2, &self.t2), (&self.t, &self.f)),
            ("s'∘g' = g∘s", (&self.g2, &self.s2), (&self.s, &self.g)),
        ];
        for (name, (a1, a2), (b1, b2)) in squares {
            if composite(a1, a2) != composite(b1, b2) {
                return bad(format!("square {name} does not commute"));
            }
        }
        Ok(())
    }

    /// `A = C = D = Y` with every map the identity.
    pub fn trivial(y: &VCategory) -> Self {
        let id = VFunctor::identity(y);
        DoubleSplitEpi {
            y: y.clone(),
            a: y.clone(),
            c: y.clone(),
            d: y.clone(),
            f: id.clone(),
            s: id.clone(),
            g: id.clone(),
            t: id.clone(),
            f2: id.clone(),
            s2: id.clone(),
            g2: id.clone(),
            t2: id,
        }
    }

    /// Rebuilds a diagram from [`DoubleSplitEpi::manifest`] output and
    /// validates it.
    pub fn from_manifest(q: &Arc<Quantale>, m: &DiagramManifest) -> Result<Self> {
        let object = |k: &str| -> Result<VCategory> {
            let s = m
                .objects
                .get(k)
                .ok_or_else(|| Error::Malformed(format!("manifest has no object `{k}`")))?;
            Ok(VCategory::from_snapshot(q.clone(), s)?.with_name(k))
        };
        let (y, a, c, d) = (object("Y")?, object("A")?, object("C")?, object("D")?);
        let by_name = |k: &str| match k {
            "Y" => Some(&y),
            "A" => Some(&a),
            "C" => Some(&c),
            "D" => Some(&d),
            _ => None,
        };
        let map = |k: &str| -> Result<VFunctor> {
            let e = m
                .maps
                .get(k)
                .ok_or_else(|| Error::Malformed(format!("manifest has no map `{k}`")))?;
            let (src, tgt) = match (by_name(&e.source), by_name(&e.target)) {
                (Some(s), Some(t)) => (s, t),
                _ => return Err(Error::Malformed(format!("map `{k}` names an unknown object"))),
            };
            let pairs: Vec<(&str, &str)> = e.map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            VFunctor::from_names(src.clone(), tgt.clone(), &pairs)
        };
        let dse = DoubleSplitEpi {
            f: map("f")?,
            s: map("s")?,
            g: map("g")?,
            t: map("t")?,
            f2: map("f'")?,
            s2: map("s'")?,
            g2: map("g'")?,
            t2: map("t'")?,
            y: y.clone(),
            a: a.clone(),
            c: c.clone(),
            d: d.clone(),
        };
        dse.validate()?;
        Ok(dse)
    }

    /// The four structures and eight object maps by name.
    pub fn manifest(&self) -> DiagramManifest {
        let objects = [("Y", &self.y), ("A", &self.a), ("C", &self.c), ("D", &self.d)]
            .into_iter()
            .map(|(n, x)| (n.to_string(), x.snapshot()))
            .collect();
        let entry = |m: &VFunctor, source: &str, target: &str| MapEntry {
            source: source.into(),
            target: target.into(),
            map: m.name_pairs().into_iter().collect(),
        };
        let maps = [
            ("f", entry(&self.f, "Y", "A")),
            ("s", entry(&self.s, "A", "Y")),
            ("g", entry(&self.g, "Y", "C")),
            ("t", entry(&self.t, "C", "Y")),
            ("f'", entry(&self.f2, "C", "D")),
            ("s'", entry(&self.s2, "D", "C")),
            ("g'", entry(&self.g2, "A", "D")),
            ("t'", entry(&self.t2, "D", "A")),
        ]
        .into_iter()
        .map(|(n, e)| (n.to_string(), e))
        .collect();
        DiagramManifest {
            quantale: self.y.quantale().name().to_string(),
            objects,
            maps,
        }
    }
}

/// JSON-friendly description of a [`DoubleSplitEpi`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramManifest {
    pub quantale: String,
    pub objects: BTreeMap<String, VCatSnapshot>,
    pub maps: BTreeMap<String, MapEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub source: String,
    pub target: String,
    pub map: BTreeMap<String, String>,
}

/// The diagram over `Y = {1}` with `A = {0, 1}`, `C = {1, 2}` and
/// `D = {0, 1, 2}`, where `A(0, 1) = u`, `C(1, 2) = v` and
/// `D(0, 2) = u ∧ v`. All structures are symmetric. No condition on `(u, v)`
/// is imposed here.
pub fn three_point_shape(q: &Arc<Quantale>, u: Elem, v: Elem) -> Result<DoubleSplitEpi> {
    let (un, vn) = (q.name_of(u).to_string(), q.name_of(v).to_string());
    let w = q.name_of(q.meet_pair(u, v)).to_string();
    let y = VCategory::point(q.clone(), "1").with_name("Y");
    let a = VCategory::symmetric_from_entries(q.clone(), &["0", "1"], &[("0", "1", &un)])?.with_name("A");
    let c = VCategory::symmetric_from_entries(q.clone(), &["1", "2"], &[("1", "2", &vn)])?.with_name("C");
    let d = VCategory::symmetric_from_entries(
        q.clone(),
        &["0", "1", "2"],
        &[("0", "1", &un), ("1", "2", &vn), ("0", "2", &w)],
    )?
    .with_name("D");
    let m = |src: &VCategory, tgt: &VCategory, pairs: &[(&str, &str)]| VFunctor::from_names(src.clone(), tgt.clone(), pairs);
    let dse = DoubleSplitEpi {
        f: m(&y, &a, &[("1", "1")])?,
        s: m(&a, &y, &[("0", "1"), ("1", "1")])?,
        g: m(&y, &c, &[("1", "1")])?,
        t: m(&c, &y, &[("1", "1"), ("2", "1")])?,
        f2: m(&c, &d, &[("1", "1"), ("2", "2")])?,
        s2: m(&d, &c, &[("0", "1"), ("1", "1"), ("2", "2")])?,
        g2: m(&a, &d, &[("0", "0"), ("1", "1")])?,
        t2: m(&d, &a, &[("0", "0"), ("1", "1"), ("2", "1")])?,
        y,
        a,
        c,
        d,
    };
    dse.validate()?;
    Ok(dse)
}

/// [`three_point_shape`] for a pair with `u ⊗ v < u ∧ v`; fails with
/// [`Error::NotNonCartesian`] otherwise.
pub fn build_counterexample(q: &Arc<Quantale>, u: Elem, v: Elem) -> Result<DoubleSplitEpi> {
    if !q.lt(q.tensor(u, v), q.meet_pair(u, v)) {
        return Err(Error::NotNonCartesian(q.name_of(u).into(), q.name_of(v).into()));
    }
    three_point_shape(q, u, v)
}

/// The pushout `A +_Y C` (taken along the split mono `f`) and the induced
/// map `[g', f']` into `D`.
pub fn comparison_map(d: &DoubleSplitEpi) -> Result<VFunctor> {
    let p = pushout_along_regmono(&d.g, &d.f)?;
    let mut map: Vec<Option<usize>> = vec![None; p.object.len()];
    let assign = |map: &mut Vec<Option<usize>>, class: usize, value: usize| -> Result<()> {
        match map[class] {
            Some(old) if old != value => Err(Error::InvalidDoubleSplitEpi(format!(
                "[g', f'] is not well defined at class {}",
                p.object.object_name(class)
            ))),
            _ => {
                map[class] = Some(value);
                Ok(())
            }
        }
    };
    for i in 0..d.c.len() {
        assign(&mut map, p.leg_y.apply(i), d.f2.apply(i))?;
    }
    for i in 0..d.a.len() {
        assign(&mut map, p.leg_z.apply(i), d.g2.apply(i))?;
    }
    let map = map.into_iter().map(|m| m.expect("legs are jointly surjective")).collect();
    VFunctor::new(p.object, d.d.clone(), map)
}

/// Whether `[g', f']: A +_Y C → D` is a regular mono. A bijective comparison
/// that fails fits the witness `NotReflecting` with the pushout value on the
/// source side and the `D` value on the target side.
pub fn comparison_is_regular_mono(d: &DoubleSplitEpi) -> Result<Verdict<RegularMonoViolation>> {
    d.validate()?;
    Ok(is_regular_mono(&comparison_map(d)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "value", rename_all = "snake_case")]
pub enum MaltsevVerdict {
    Holds { reason: String },
    Fails { witness: MaltsevWitness },
    UndeterminedAtBound { bound: usize, checked: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaltsevWitness {
    pub diagram: DiagramManifest,
    pub comparison: RegularMonoViolation,
    pub note: String,
}

impl MaltsevVerdict {
    /// `Some(true/false)` when decided.
    pub fn decided(&self) -> Option<bool> {
        match self {
            MaltsevVerdict::Holds { .. } => Some(true),
            MaltsevVerdict::Fails { .. } => Some(false),
            MaltsevVerdict::UndeterminedAtBound { .. } => None,
        }
    }
}

/// Over a non-cartesian `q` the only Mal'tsev object is `∅`; a nonempty `y`
/// fails because the point is a split subobject of `y` and the point fails
/// via [`build_counterexample`]. Over a cartesian `q`, double split epis over
/// `y` with `|D| ≤ bound` are searched for a failing comparison.
pub fn maltsev_object_verdict(q: &Arc<Quantale>, y: &VCategory, bound: usize) -> Result<MaltsevVerdict> {
    if y.is_empty() {
        return Ok(MaltsevVerdict::Holds {
            reason: "every double split epimorphism over the empty V-category is trivial".into(),
        });
    }
    if let Some((u, v)) = cartesian_witness(q) {
        let dse = build_counterexample(q, u, v)?;
        let comparison = comparison_is_regular_mono(&dse)?
            .into_witness()
            .ok_or_else(|| Error::Precondition("counterexample comparison is a regular mono".into()))?;
        let note = format!(
            "u = {}, v = {}: the point is not a Mal'tsev object and is a retract of `{}` in V-Cat, \
             so no nonempty V-category is one",
            q.name_of(u),
            q.name_of(v),
            y.object_name(0)
        );
        return Ok(MaltsevVerdict::Fails {
            witness: MaltsevWitness {
                diagram: dse.manifest(),
                comparison,
                note,
            },
        });
    }
    if bound > MALTSEV_MAX_BOUND {
        return Err(Error::BoundExceeded {
            what: "double split epi search |D|",
            size: bound,
            bound: MALTSEV_MAX_BOUND,
        });
    }
    if y.len() > bound {
        return Err(Error::BoundExceeded {
            what: "double split epi search |Y|",
            size: y.len(),
            bound,
        });
    }
    let candidates: Vec<VCategory> = (y.len()..=bound)
        .flat_map(|n| enumerate_vcategories_up_to_iso(q, n))
        .collect();
    let results: Vec<Result<(usize, Option<MaltsevWitness>)>> = candidates
        .par_iter()
        .map(|d| search_over(y, d))
        .collect();
    let mut checked = 0;
    for r in results {
        let (count, witness) = r?;
        checked += count;
        if let Some(witness) = witness {
            return Ok(MaltsevVerdict::Fails { witness });
        }
    }
    Ok(MaltsevVerdict::UndeterminedAtBound { bound, checked })
}

/// Idempotent V-endofunctors of `d`, each paired with its image.
fn retracts(d: &VCategory) -> Result<Vec<(VFunctor, VFunctor)>> {
    let mut out = Vec::new();
    for e in enumerate_vfunctors(d, d)? {
        if composite(&e, &e) != e.map() {
            continue;
        }
        let mut image: Vec<usize> = e.map().to_vec();
        image.sort_unstable();
        image.dedup();
        let inclusion = d.inclusion_of(&image);
        let pos = |j: usize| image.binary_search(&j).expect("in image");
        let retraction = VFunctor::new(
            d.clone(),
            inclusion.source().clone(),
            e.map().iter().map(|&j| pos(j)).collect(),
        )?;
        out.push((inclusion, retraction));
    }
    Ok(out)
}

/// Pairs `(i: Y → X, r: X → Y)` with `r ∘ i = 1`.
fn sections(y: &VCategory, x: &VCategory) -> Result<Vec<(VFunctor, VFunctor)>> {
    let ins = enumerate_vfunctors(y, x)?;
    let outs = enumerate_vfunctors(x, y)?;
    let id: Vec<usize> = (0..y.len()).collect();
    let mut pairs = Vec::new();
    for i in &ins {
        for r in &outs {
            if composite(i, r) == id {
                pairs.push((i.clone(), r.clone()));
            }
        }
    }
    Ok(pairs)
}

fn search_over(y: &VCategory, d: &VCategory) -> Result<(usize, Option<MaltsevWitness>)> {
    let retracts = retracts(d)?;
    let mut checked = 0;
    for (g2, t2) in &retracts {
        let a = g2.source();
        let fs = sections(y, a)?;
        if fs.is_empty() {
            continue;
        }
        for (f2, s2) in &retracts {
            let c = f2.source();
            for (g, t) in sections(y, c)? {
                for (f, s) in &fs {
                    let dse = DoubleSplitEpi {
                        y: y.clone(),
                        a: a.clone(),
                        c: c.clone(),
                        d: d.clone(),
                        f: f.clone(),
                        s: s.clone(),
                        g: g.clone(),
                        t: t.clone(),
                        f2: f2.clone(),
                        s2: s2.clone(),
                        g2: g2.clone(),
                        t2: t2.clone(),
                    };
                    if dse.validate().is_err() {
                        continue;
                    }
                    checked += 1;
                    if let Verdict::Fails(comparison) = is_regular_mono(&comparison_map(&dse)?) {
                        let witness = MaltsevWitness {
                            diagram: dse.manifest(),
                            comparison,
                            note: "comparison into D is not a regular monomorphism".into(),
                        };
                        return Ok((checked, Some(witness)));
                    }
                }
            }
        }
    }
    Ok((checked, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trip() {
        let q = Arc::new(Quantale::truncated_plus(3));
        let (u, v) = cartesian_witness(&q).unwrap();
        let d = build_counterexample(&q, u, v).unwrap();
        let json = serde_json::to_string(&d.manifest()).unwrap();
        let m: DiagramManifest = serde_json::from_str(&json).unwrap();
        let back = DoubleSplitEpi::from_manifest(&q, &m).unwrap();
        assert_eq!(back.manifest(), d.manifest());
        assert!(!comparison_is_regular_mono(&back).unwrap().holds());
    }
    use crate::vcat::{verify_vcategory, HomPair};

    fn c3() -> Arc<Quantale> {
        Arc::new(Quantale::truncated_plus(3))
    }

    #[test]
    fn counterexample_over_c3() {
        let q = c3();
        let one = q.elem("1").unwrap();
        let dse = build_counterexample(&q, one, one).unwrap();
        assert_eq!(dse.d.hom_named("0", "2").unwrap(), "1");
        for x in [&dse.a, &dse.c, &dse.d] {
            assert!(verify_vcategory(x).holds());
            assert!(x.is_symmetric());
        }
        let cmp = comparison_map(&dse).unwrap();
        assert!(cmp.is_injective() && cmp.is_surjective());
        match comparison_is_regular_mono(&dse).unwrap() {
            Verdict::Fails(RegularMonoViolation::NotReflecting(HomPair {
                from,
                to,
                source_value,
                target_value,
            })) => {
                assert_eq!((from.as_str(), to.as_str()), ("0", "2"));
                assert_eq!((source_value.as_str(), target_value.as_str()), ("2", "1"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lukasiewicz_counterexample_builds() {
        let q = Arc::new(Quantale::lukasiewicz(4));
        let t = q.elem("2/3").unwrap();
        assert_eq!(q.name_of(q.tensor(t, t)), "1/3");
        assert!(build_counterexample(&q, t, t).is_ok());
    }

    #[test]
    fn cartesian_pair_is_rejected() {
        let q = Arc::new(Quantale::two());
        let one = q.elem("1").unwrap();
        assert!(matches!(
            build_counterexample(&q, one, one),
            Err(Error::NotNonCartesian(..))
        ));
        let shape = three_point_shape(&q, one, one).unwrap();
        assert!(comparison_is_regular_mono(&shape).unwrap().holds());
    }

    #[test]
    fn trivial_diagram_has_identity_comparison() {
        let y = VCategory::symmetric_from_entries(c3(), &["a", "b"], &[("a", "b", "2")]).unwrap();
        assert!(comparison_is_regular_mono(&DoubleSplitEpi::trivial(&y)).unwrap().holds());
    }

    #[test]
    fn broken_square_is_rejected() {
        let q = c3();
        let one = q.elem("1").unwrap();
        let mut dse = build_counterexample(&q, one, one).unwrap();
        dse.t2 = VFunctor::constant(&dse.d, &dse.a, 1).unwrap();
        assert!(matches!(dse.validate(), Err(Error::InvalidDoubleSplitEpi(_))));
    }

    #[test]
    fn verdicts_over_c3() {
        let q = c3();
        let empty = VCategory::empty(q.clone());
        assert_eq!(maltsev_object_verdict(&q, &empty, 3).unwrap().decided(), Some(true));
        let point = VCategory::point(q.clone(), "p");
        assert_eq!(maltsev_object_verdict(&q, &point, 3).unwrap().decided(), Some(false));
    }

    #[test]
    fn cartesian_equivalence_relation_is_undetermined() {
        let q = Arc::new(Quantale::two());
        let y = VCategory::indiscrete(q.clone(), &["a", "b"]);
        match maltsev_object_verdict(&q, &y, 3).unwrap() {
            MaltsevVerdict::UndeterminedAtBound { bound, checked } => {
                assert_eq!(bound, 3);
                assert!(checked > 0);
            }
            other => panic!("{other:?}"),
        }
    }
}
