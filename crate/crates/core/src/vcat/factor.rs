//! Regular monomorphisms, the (epi, regular mono) factorization and pushouts
//! along regular monos.

use serde::{Deserialize, Serialize};

use super::{first_unenriched_pair, require_same_quantale, HomPair, VCategory, VFunctor};
use crate::error::{Error, Result};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum RegularMonoViolation {
    NotAFunctor(HomPair),
    NotInjective {
        first: String,
        second: String,
        image: String,
    },
    /// `X(x, x') ≠ Y(m x, m x')`.
    NotReflecting(HomPair),
}

/// Injective on objects and `X(x, x') = Y(m x, m x')` for all pairs.
pub fn is_regular_mono(m: &VFunctor) -> Verdict<RegularMonoViolation> {
    let (x, y) = (m.source(), m.target());
    if let Some(p) = first_unenriched_pair(x, y, m.map()) {
        return Verdict::Fails(RegularMonoViolation::NotAFunctor(p));
    }
    let mut seen: Vec<Option<usize>> = vec![None; y.len()];
    for (i, &j) in m.map().iter().enumerate() {
        if let Some(prev) = seen[j] {
            return Verdict::Fails(RegularMonoViolation::NotInjective {
                first: x.object_name(prev).into(),
                second: x.object_name(i).into(),
                image: y.object_name(j).into(),
            });
        }
        seen[j] = Some(i);
    }
    let q = x.quantale();
    for i in 0..x.len() {
        for j in 0..x.len() {
            let (a, b) = (x.hom(i, j), y.hom(m.apply(i), m.apply(j)));
            if a != b {
                return Verdict::Fails(RegularMonoViolation::NotReflecting(HomPair {
                    from: x.object_name(i).into(),
                    to: x.object_name(j).into(),
                    source_value: q.name_of(a).into(),
                    target_value: q.name_of(b).into(),
                }));
            }
        }
    }
    Verdict::Holds
}

/// `f = mono ∘ epi` with `epi` surjective onto `image`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub epi: VFunctor,
    pub image: VCategory,
    pub mono: VFunctor,
}

/// Corestricts `f` to its image, which carries the target's hom restricted to
/// the image. Image objects keep the target's order.
pub fn factorize(f: &VFunctor) -> Result<Factorization> {
    let target = f.target();
    let mut hit = vec![false; target.len()];
    for &j in f.map() {
        hit[j] = true;
    }
    let image_objects: Vec<usize> = (0..target.len()).filter(|&j| hit[j]).collect();
    let mut position = vec![usize::MAX; target.len()];
    for (p, &j) in image_objects.iter().enumerate() {
        position[j] = p;
    }
    let mono = target.inclusion_of(&image_objects);
    let image = mono.source().clone();
    let epi = VFunctor::new(
        f.source().clone(),
        image.clone(),
        f.map().iter().map(|&j| position[j]).collect(),
    )?;
    Ok(Factorization { epi, image, mono })
}

/// Pushout of `f: X → Y` along a regular mono `m: X → Z`.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub object: VCategory,
    /// `Y → W`; a regular mono whenever `f` is a V-functor.
    pub leg_y: VFunctor,
    /// `Z → W`.
    pub leg_z: VFunctor,
}

impl Pushout {
    /// Members of each class of `W`, as `(summand, object)` with summand `0`
    /// for `Y` and `1` for `Z`.
    pub fn classes(&self) -> Vec<Vec<(u8, usize)>> {
        let mut classes = vec![Vec::new(); self.object.len()];
        for (i, &c) in self.leg_y.map().iter().enumerate() {
            classes[c].push((0, i));
        }
        for (i, &c) in self.leg_z.map().iter().enumerate() {
            classes[c].push((1, i));
        }
        classes
    }
}

/// Computes `W = (Y + Z)/∼` where `m(x) ∼ f(x)`, with the final V-category
/// structure making both legs V-functors.
///
/// Between classes the hom starts as the join of `Y(y, y')` and `Z(z, z')`
/// over representatives and is then closed under composition of such hops,
/// since a single hop from `Y` followed by one in `Z` must also be bounded.
/// Classes are named by their lexicographically least member and listed in
/// name order. If two classes would get the same name, every class is named
/// with a `Y.`/`Z.` prefix instead.
pub fn pushout_along_regmono(f: &VFunctor, m: &VFunctor) -> Result<Pushout> {
    if f.source().objects() != m.source().objects() {
        return Err(Error::Precondition("pushout maps must share their source".into()));
    }
    require_same_quantale(f.target(), m.target())?;
    if let Verdict::Fails(w) = is_regular_mono(m) {
        return Err(Error::Precondition(format!("m is not a regular mono: {w:?}")));
    }
    let (y, z) = (f.target(), m.target());
    let q = y.quantale().clone();

    // Every class contains exactly one y, plus the z outside the image of m.
    let mut z_to_y: Vec<Option<usize>> = vec![None; z.len()];
    for x in 0..f.source().len() {
        z_to_y[m.apply(x)] = Some(f.apply(x));
    }
    let mut members: Vec<Vec<(u8, usize)>> = (0..y.len()).map(|i| vec![(0, i)]).collect();
    let mut z_class = vec![0; z.len()];
    for (zi, target) in z_to_y.iter().enumerate() {
        match target {
            Some(yi) => {
                members[*yi].push((1, zi));
                z_class[zi] = *yi;
            }
            None => {
                z_class[zi] = members.len();
                members.push(vec![(1, zi)]);
            }
        }
    }
    let y_class: Vec<usize> = (0..y.len()).collect();

    let plain = |&(s, i): &(u8, usize)| -> String {
        if s == 0 {
            y.object_name(i).to_string()
        } else {
            z.object_name(i).to_string()
        }
    };
    let tagged = |&(s, i): &(u8, usize)| -> String {
        if s == 0 {
            format!("Y.{}", y.object_name(i))
        } else {
            format!("Z.{}", z.object_name(i))
        }
    };
    let mut names: Vec<String> = members
        .iter()
        .map(|ms| ms.iter().map(plain).min().expect("nonempty class"))
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != names.len() {
        names = members
            .iter()
            .map(|ms| ms.iter().map(tagged).min().expect("nonempty class"))
            .collect();
    }
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    let mut rank = vec![0; order.len()];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }

    let count = members.len();
    let mut hom = vec![q.bottom(); count * count];
    for a in 0..y.len() {
        for b in 0..y.len() {
            let (ca, cb) = (rank[y_class[a]], rank[y_class[b]]);
            hom[ca * count + cb] = q.join_pair(hom[ca * count + cb], y.hom(a, b));
        }
    }
    for a in 0..z.len() {
        for b in 0..z.len() {
            let (ca, cb) = (rank[z_class[a]], rank[z_class[b]]);
            hom[ca * count + cb] = q.join_pair(hom[ca * count + cb], z.hom(a, b));
        }
    }
    super::close_under_tensor(&q, count, &mut hom);

    let object_names = order.iter().map(|&c| names[c].clone()).collect();
    let object = VCategory::new(q, object_names, hom)?;
    let leg_y = VFunctor::new(y.clone(), object.clone(), y_class.iter().map(|&c| rank[c]).collect())?;
    let leg_z = VFunctor::new(z.clone(), object.clone(), z_class.iter().map(|&c| rank[c]).collect())?;
    Ok(Pushout {
        object,
        leg_y,
        leg_z,
    })
}
