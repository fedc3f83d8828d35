//! Is a finite V-category `Y` a W-Mal'tsev object of `(V-Cat)^op`?
//!
//! Four procedures:
//!
//! * [`wmaltsev_direct`]: `Y(z, x) ∧ Y(z, y) ≤ Y(x, y)` for all triples;
//! * [`wmaltsev_structural`]: `Y` is symmetric and `∧`-transitive;
//! * [`wmaltsev_factorization_oracle`]: builds the image `X ⊆ Y³` of
//!   `Y² + Y² → Y³` and asks whether the forced map `g: X → Y` is a V-functor;
//! * [`wmaltsev_hom_oracle`]: enumerates small jointly epimorphic cospans and
//!   checks that the induced relations on hom-sets are difunctional. This one
//!   can only falsify.
//!
//! The first three decide the same property and are cross-checked in tests.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantale::Quantale;
use crate::rel::{hom_relation, is_difunctional, DifunctionalityViolation};
use crate::vcat::{
    coproduct, enumerate_vcategories_up_to_iso, enumerate_vfunctors, factorize, product,
    product_n, verify_vfunctor, Factorization, HomPair, VCatSnapshot, VCategory, VFunctor,
    DEFAULT_SIZE_CAP,
};
use crate::verdict::{BoundedVerdict, Verdict};

/// Largest component size accepted by [`wmaltsev_hom_oracle`].
pub const HOM_ORACLE_MAX_BOUND: usize = 4;

/// `Y(z, x) ∧ Y(z, y) ≰ Y(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleWitness {
    pub x: String,
    pub y: String,
    pub z: String,
    /// `Y(z, x) ∧ Y(z, y)`.
    pub meet: String,
    /// `Y(x, y)`.
    pub hom: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum StructuralViolation {
    /// `Y(a, b) ≠ Y(b, a)`.
    Symmetry {
        a: String,
        b: String,
        forward: String,
        backward: String,
    },
    /// `Y(a, b) ∧ Y(b, c) ≰ Y(a, c)`.
    WedgeTransitivity {
        objects: [String; 3],
        meet: String,
        direct: String,
    },
}

pub fn wmaltsev_direct(y: &VCategory) -> Verdict<TripleWitness> {
    let q = y.quantale();
    let n = y.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let meet = q.meet_pair(y.hom(c, a), y.hom(c, b));
                if !q.leq(meet, y.hom(a, b)) {
                    return Verdict::Fails(TripleWitness {
                        x: y.object_name(a).into(),
                        y: y.object_name(b).into(),
                        z: y.object_name(c).into(),
                        meet: q.name_of(meet).into(),
                        hom: q.name_of(y.hom(a, b)).into(),
                    });
                }
            }
        }
    }
    Verdict::Holds
}

pub fn wmaltsev_structural(y: &VCategory) -> Verdict<StructuralViolation> {
    let q = y.quantale();
    let n = y.len();
    for a in 0..n {
        for b in 0..n {
            if y.hom(a, b) != y.hom(b, a) {
                return Verdict::Fails(StructuralViolation::Symmetry {
                    a: y.object_name(a).into(),
                    b: y.object_name(b).into(),
                    forward: q.name_of(y.hom(a, b)).into(),
                    backward: q.name_of(y.hom(b, a)).into(),
                });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let meet = q.meet_pair(y.hom(a, b), y.hom(b, c));
                if !q.leq(meet, y.hom(a, c)) {
                    return Verdict::Fails(StructuralViolation::WedgeTransitivity {
                        objects: [
                            y.object_name(a).into(),
                            y.object_name(b).into(),
                            y.object_name(c).into(),
                        ],
                        meet: q.name_of(meet).into(),
                        direct: q.name_of(y.hom(a, c)).into(),
                    });
                }
            }
        }
    }
    Verdict::Holds
}

/// Intermediate objects of the factorization oracle.
#[derive(Debug, Clone)]
pub struct FactorizationData {
    /// `[⟨π₁, π₂, π₂⟩, ⟨π₂, π₂, π₁⟩]: Y² + Y² → Y³`.
    pub f: VFunctor,
    pub factorization: Factorization,
    /// The map `X → Y` sending `(x, y, y)` and `(y, y, x)` to `x`.
    pub g: VFunctor,
}

/// Builds `f`, its (epi, regular mono) factorization through `X`, and the
/// object map `g`. `g` is forced on `X` because the epi is surjective, so it
/// is unique whenever it exists.
pub fn factorization_data(y: &VCategory) -> Result<FactorizationData> {
    if y.len() > DEFAULT_SIZE_CAP {
        return Err(Error::BoundExceeded {
            what: "factorization oracle |Y|",
            size: y.len(),
            bound: DEFAULT_SIZE_CAP,
        });
    }
    let n = y.len();
    let y2 = product(y, y)?.object;
    let y3 = product_n(&[y.clone(), y.clone(), y.clone()])?.object;
    let sum = coproduct(&y2, &y2)?.object;
    let triple = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let mut map = Vec::with_capacity(2 * n * n);
    let mut g_value = Vec::with_capacity(2 * n * n);
    for a in 0..n {
        for b in 0..n {
            map.push(triple(a, b, b));
            g_value.push(a);
        }
    }
    for a in 0..n {
        for b in 0..n {
            map.push(triple(b, b, a));
            g_value.push(a);
        }
    }
    let f = VFunctor::new(sum, y3, map)?;
    let factorization = factorize(&f)?;
    let mut g_map: Vec<Option<usize>> = vec![None; factorization.image.len()];
    for (i, &xi) in factorization.epi.map().iter().enumerate() {
        match g_map[xi] {
            Some(v) if v != g_value[i] => {
                return Err(Error::Precondition(format!(
                    "g is not well defined at {}",
                    factorization.image.object_name(xi)
                )))
            }
            _ => g_map[xi] = Some(g_value[i]),
        }
    }
    let g = VFunctor::new(
        factorization.image.clone(),
        y.clone(),
        g_map.into_iter().map(|v| v.expect("epi is surjective")).collect(),
    )?;
    Ok(FactorizationData {
        f,
        factorization,
        g,
    })
}

/// W-Mal'tsev iff `g: X → Y` is a V-functor. The witness is the first pair of
/// `X` (in lexicographic triple order) where `g` decreases the hom value.
pub fn wmaltsev_factorization_oracle(y: &VCategory) -> Result<Verdict<HomPair>> {
    Ok(verify_vfunctor(&factorization_data(y)?.g))
}

/// A cospan `X → R ← Z` whose induced hom-set relation is not difunctional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CospanWitness {
    pub x: VCatSnapshot,
    pub z: VCatSnapshot,
    pub r: VCatSnapshot,
    pub r1: String,
    pub r2: String,
    pub violation: DifunctionalityViolation,
}

/// Checks every jointly epimorphic cospan `X → R ← Z` with all three
/// components of size at most `bound`. `R`, `X` and `Z` range over
/// isomorphism classes; the legs range over all V-functors.
pub fn wmaltsev_hom_oracle(y: &VCategory, bound: usize) -> Result<BoundedVerdict<CospanWitness>> {
    if bound > HOM_ORACLE_MAX_BOUND {
        return Err(Error::BoundExceeded {
            what: "hom oracle component size",
            size: bound,
            bound: HOM_ORACLE_MAX_BOUND,
        });
    }
    if y.len() > DEFAULT_SIZE_CAP {
        return Err(Error::BoundExceeded {
            what: "hom oracle |Y|",
            size: y.len(),
            bound: DEFAULT_SIZE_CAP,
        });
    }
    let q: Arc<Quantale> = y.quantale().clone();
    let classes: Vec<VCategory> = (0..=bound)
        .flat_map(|n| enumerate_vcategories_up_to_iso(&q, n))
        .collect();
    let outcomes: Vec<Result<(usize, Option<CospanWitness>)>> = classes
        .par_iter()
        .map(|r| check_cospans_into(r, &classes, y))
        .collect();
    let mut checked = 0;
    for o in outcomes {
        let (count, witness) = o?;
        checked += count;
        if let Some(witness) = witness {
            return Ok(BoundedVerdict::Falsified { witness });
        }
    }
    Ok(BoundedVerdict::HoldsAtBound { bound, checked })
}

fn check_cospans_into(
    r: &VCategory,
    sources: &[VCategory],
    y: &VCategory,
) -> Result<(usize, Option<CospanWitness>)> {
    let legs: Vec<Vec<VFunctor>> = sources
        .iter()
        .map(|s| enumerate_vfunctors(s, r))
        .collect::<Result<_>>()?;
    let mut checked = 0;
    for r1 in legs.iter().flatten() {
        for r2 in legs.iter().flatten() {
            let mut covered = vec![false; r.len()];
            for &j in r1.map().iter().chain(r2.map()) {
                covered[j] = true;
            }
            if !covered.iter().all(|&c| c) {
                continue;
            }
            checked += 1;
            let relation = hom_relation(r1, r2, y)?;
            if let Verdict::Fails(violation) = is_difunctional(&relation) {
                let witness = CospanWitness {
                    x: r1.source().snapshot(),
                    z: r2.source().snapshot(),
                    r: r.snapshot(),
                    r1: r1.label(),
                    r2: r2.label(),
                    violation,
                };
                return Ok((checked, Some(witness)));
            }
        }
    }
    Ok((checked, None))
}
