//! Brute-force reference computations used by the sweeps.
//!
//! None of these share code with the implementations they check.

use crate::error::{Error, Result};
use crate::quantale::{Elem, Quantale};
use crate::vcat::{Pushout, VCategory, VFunctor, DEFAULT_SIZE_CAP};

/// A pushout computed from its universal property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoconePushout {
    pub classes: usize,
    pub y_class: Vec<usize>,
    pub z_class: Vec<usize>,
    /// `hom[c * classes + d]`.
    pub hom: Vec<Elem>,
    /// Number of cocones into V that were enumerated.
    pub cocones: usize,
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// Pushout of `f: X → Y` and `g: X → Z` in V-Cat, with neither map required
/// to be a regular mono.
///
/// The carrier is the pushout of sets. For the structure, V with
/// `hom(a, b) = [a, b]` is a V-category into which every V-category embeds,
/// so `W(p, q)` is the meet of `[φp, φq]` over all cocones `φ: W → V`.
pub fn pushout_by_cocones(f: &VFunctor, g: &VFunctor) -> Result<CoconePushout> {
    if f.source().objects() != g.source().objects() {
        return Err(Error::Precondition("maps must share their source".into()));
    }
    let (y, z) = (f.target(), g.target());
    if y.len() + z.len() > 2 * DEFAULT_SIZE_CAP {
        return Err(Error::BoundExceeded {
            what: "pushout oracle carrier",
            size: y.len() + z.len(),
            bound: 2 * DEFAULT_SIZE_CAP,
        });
    }
    let q = y.quantale().clone();
    let ny = y.len();
    let mut parent: Vec<usize> = (0..ny + z.len()).collect();
    for x in 0..f.source().len() {
        let (a, b) = (find(&mut parent, f.apply(x)), find(&mut parent, ny + g.apply(x)));
        parent[a.max(b)] = a.min(b);
    }
    let mut label = vec![usize::MAX; parent.len()];
    let mut class_of = vec![0; parent.len()];
    let mut classes = 0;
    for (i, slot) in class_of.iter_mut().enumerate() {
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = classes;
            classes += 1;
        }
        *slot = label[r];
    }

    // need[c][d]: join of every summand hom landing on (c, d)
    let mut need = vec![q.bottom(); classes * classes];
    let mut bump = |c: usize, d: usize, v: Elem| {
        need[c * classes + d] = q.join_pair(need[c * classes + d], v);
    };
    for a in 0..ny {
        for b in 0..ny {
            bump(class_of[a], class_of[b], y.hom(a, b));
        }
    }
    for a in 0..z.len() {
        for b in 0..z.len() {
            bump(class_of[ny + a], class_of[ny + b], z.hom(a, b));
        }
    }

    let mut hom = vec![q.top(); classes * classes];
    let mut phi = Vec::with_capacity(classes);
    let mut cocones = 0;
    enumerate_cocones(&q, classes, &need, &mut phi, &mut |phi| {
        cocones += 1;
        for c in 0..classes {
            for d in 0..classes {
                let h = &mut hom[c * classes + d];
                *h = q.meet_pair(*h, q.internal_hom(phi[c], phi[d]));
            }
        }
    });
    Ok(CoconePushout {
        classes,
        y_class: class_of[..ny].to_vec(),
        z_class: class_of[ny..].to_vec(),
        hom,
        cocones,
    })
}

fn enumerate_cocones(
    q: &Quantale,
    n: usize,
    need: &[Elem],
    phi: &mut Vec<Elem>,
    visit: &mut dyn FnMut(&[Elem]),
) {
    let c = phi.len();
    if c == n {
        visit(phi);
        return;
    }
    for v in q.elements() {
        phi.push(v);
        let ok = (0..=c).all(|d| {
            q.leq(q.tensor(phi[c], need[c * n + d]), phi[d]) && q.leq(q.tensor(phi[d], need[d * n + c]), phi[c])
        });
        if ok {
            enumerate_cocones(q, n, need, phi, visit);
        }
        phi.pop();
    }
}

/// Compares a computed pushout with the oracle up to the renaming of classes.
pub fn compare_pushout(p: &Pushout, o: &CoconePushout) -> std::result::Result<(), String> {
    if p.object.len() != o.classes {
        return Err(format!("{} classes, oracle has {}", p.object.len(), o.classes));
    }
    let mut to_oracle = vec![usize::MAX; o.classes];
    let legs = p.leg_y.map().iter().zip(&o.y_class).chain(p.leg_z.map().iter().zip(&o.z_class));
    for (&mine, &theirs) in legs {
        if to_oracle[mine] == usize::MAX {
            to_oracle[mine] = theirs;
        } else if to_oracle[mine] != theirs {
            return Err(format!("class `{}` splits in the oracle", p.object.object_name(mine)));
        }
    }
    let q = p.object.quantale();
    for c in 0..o.classes {
        for d in 0..o.classes {
            let (mine, theirs) = (p.object.hom(c, d), o.hom[to_oracle[c] * o.classes + to_oracle[d]]);
            if mine != theirs {
                return Err(format!(
                    "hom({}, {}) = {}, oracle gives {}",
                    p.object.object_name(c),
                    p.object.object_name(d),
                    q.name_of(mine),
                    q.name_of(theirs)
                ));
            }
        }
    }
    Ok(())
}

/// Coproduct check: the pushout over the empty V-category.
pub fn coproduct_by_cocones(y: &VCategory, z: &VCategory) -> Result<CoconePushout> {
    let empty = VCategory::empty(y.quantale().clone());
    let f = VFunctor::new(empty.clone(), y.clone(), Vec::new())?;
    let g = VFunctor::new(empty, z.clone(), Vec::new())?;
    pushout_by_cocones(&f, &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vcat::pushout_along_regmono;
    use std::sync::Arc;

    #[test]
    fn gluing_a_point_to_a_chain() {
        let q = Arc::new(Quantale::two());
        let x = VCategory::point(q.clone(), "x");
        let y = VCategory::point(q.clone(), "y");
        let z = VCategory::from_entries(q, &["x", "z"], &[("x", "z", "1")]).unwrap();
        let f = VFunctor::from_names(x.clone(), y, &[("x", "y")]).unwrap();
        let m = VFunctor::from_names(x, z, &[("x", "x")]).unwrap();
        let o = pushout_by_cocones(&f, &m).unwrap();
        assert_eq!(o.classes, 2);
        let p = pushout_along_regmono(&f, &m).unwrap();
        compare_pushout(&p, &o).unwrap();
        assert_eq!(p.object.hom_named("x", "z").unwrap(), "1");
    }

    #[test]
    fn truncated_plus_pushout_needs_composites() {
        let q = Arc::new(Quantale::truncated_plus(3));
        let x = VCategory::point(q.clone(), "x");
        let y = VCategory::symmetric_from_entries(q.clone(), &["a", "x"], &[("a", "x", "1")]).unwrap();
        let z = VCategory::symmetric_from_entries(q, &["x", "c"], &[("x", "c", "1")]).unwrap();
        let f = VFunctor::from_names(x.clone(), y, &[("x", "x")]).unwrap();
        let m = VFunctor::from_names(x, z, &[("x", "x")]).unwrap();
        let o = pushout_by_cocones(&f, &m).unwrap();
        let p = pushout_along_regmono(&f, &m).unwrap();
        compare_pushout(&p, &o).unwrap();
        assert_eq!(p.object.hom_named("a", "c").unwrap(), "2");
    }
}
