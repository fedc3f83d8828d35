//! Preordered groups through their positive cones.
//!
//! A preorder on a group is determined by `P = {x : 0 ≤ x}` via
//! `x ≤ y ⟺ −x + y ∈ P`. `P` must contain `0` and be closed under `+` and
//! under conjugation. The preordered group is a Mal'tsev object of `OrdGrp`
//! exactly when `≤` is an equivalence relation, i.e. when `P = −P`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::{is_group, FiniteMonoid};
use crate::rel::SetRelation;
use crate::verdict::Verdict;

/// Cones of the additive group `ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntCone {
    Zero,
    NonNeg,
    All,
    /// `dℤ`.
    MultiplesOf(u64),
}

impl IntCone {
    pub fn contains(self, n: i64) -> bool {
        match self {
            IntCone::Zero => n == 0,
            IntCone::NonNeg => n >= 0,
            IntCone::All => true,
            IntCone::MultiplesOf(0) => n == 0,
            IntCone::MultiplesOf(d) => n.unsigned_abs().is_multiple_of(d),
        }
    }
}

impl fmt::Display for IntCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntCone::Zero => write!(f, "{{0}}"),
            IntCone::NonNeg => write!(f, "ℕ"),
            IntCone::All => write!(f, "ℤ"),
            IntCone::MultiplesOf(d) => write!(f, "{d}ℤ"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreorderedGroup {
    Finite { group: FiniteMonoid, cone: BTreeSet<usize> },
    Integers { cone: IntCone },
}

/// A cone element whose inverse lies outside the cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeWitness {
    pub element: String,
    pub inverse: String,
}

impl PreorderedGroup {
    /// Validates the group and the cone.
    pub fn finite(group: FiniteMonoid, cone: BTreeSet<usize>) -> Result<Self> {
        if let Verdict::Fails(e) = is_group(&group) {
            return Err(Error::Precondition(format!("`{e}` has no inverse, so this is not a group")));
        }
        if let Some(&bad) = cone.iter().find(|&&p| p >= group.len()) {
            return Err(Error::UnknownElement(format!("#{bad}")));
        }
        validate_cone(&group, &cone)?;
        Ok(PreorderedGroup::Finite { group, cone })
    }

    pub fn finite_named(group: FiniteMonoid, cone: &[&str]) -> Result<Self> {
        let cone = cone.iter().map(|c| group.element(c)).collect::<Result<_>>()?;
        Self::finite(group, cone)
    }

    pub fn integers(cone: IntCone) -> Self {
        PreorderedGroup::Integers { cone }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            PreorderedGroup::Finite { group, .. } => group.is_commutative(),
            PreorderedGroup::Integers { .. } => true,
        }
    }

    pub fn name(&self) -> String {
        match self {
            PreorderedGroup::Finite { group, .. } => group.name().to_string(),
            PreorderedGroup::Integers { cone } => format!("(Z, {cone})"),
        }
    }
}

fn validate_cone(g: &FiniteMonoid, cone: &BTreeSet<usize>) -> Result<()> {
    let name = |a: usize| g.element_name(a).to_string();
    if !cone.contains(&g.identity()) {
        return Err(Error::InvalidCone("the cone must contain 0".into()));
    }
    for &p in cone {
        for &q in cone {
            let s = g.op(p, q);
            if !cone.contains(&s) {
                return Err(Error::InvalidCone(format!(
                    "{} + {} = {} is not in the cone",
                    name(p),
                    name(q),
                    name(s)
                )));
            }
        }
    }
    for x in 0..g.len() {
        let inv = g.inverse(x).expect("group");
        for &p in cone {
            let c = g.op(g.op(x, p), inv);
            if !cone.contains(&c) {
                return Err(Error::InvalidCone(format!(
                    "{} + {} − {} = {} is not in the cone",
                    name(x),
                    name(p),
                    name(x),
                    name(c)
                )));
            }
        }
    }
    Ok(())
}

/// Every subset of `g` that is a valid positive cone.
pub fn valid_cones(g: &FiniteMonoid) -> Vec<BTreeSet<usize>> {
    let n = g.len();
    (0u64..1 << n)
        .map(|bits| (0..n).filter(|i| bits >> i & 1 == 1).collect::<BTreeSet<_>>())
        .filter(|c| validate_cone(g, c).is_ok())
        .collect()
}

/// `x ≤ y ⟺ −x + y ∈ P`, finite case only.
pub fn preorder_from_cone(g: &PreorderedGroup) -> Result<SetRelation> {
    match g {
        PreorderedGroup::Finite { group, cone } => {
            let n = group.len();
            let pairs = (0..n).flat_map(|x| {
                let inv = group.inverse(x).expect("group");
                (0..n)
                    .filter(move |&y| cone.contains(&group.op(inv, y)))
                    .map(move |y| (x, y))
            });
            SetRelation::new(group.elements().to_vec(), group.elements().to_vec(), pairs.collect::<Vec<_>>())
        }
        PreorderedGroup::Integers { .. } => Err(Error::Precondition(
            "the preorder on ℤ is infinite and cannot be listed".into(),
        )),
    }
}

/// Holds iff `P = −P`. In the finite case the answer is checked against the
/// symmetry of [`preorder_from_cone`].
pub fn maltsev_object_ordgrp(g: &PreorderedGroup) -> Result<Verdict<ConeWitness>> {
    match g {
        PreorderedGroup::Finite { group, cone } => {
            let witness = cone.iter().find_map(|&p| {
                let inv = group.inverse(p).expect("group");
                (!cone.contains(&inv)).then(|| ConeWitness {
                    element: group.element_name(p).into(),
                    inverse: group.element_name(inv).into(),
                })
            });
            let relation = preorder_from_cone(g)?;
            let symmetric = relation.pairs.iter().all(|&(x, y)| relation.contains(y, x));
            if symmetric != witness.is_none() {
                return Err(Error::Precondition(
                    "cone symmetry and preorder symmetry disagree".into(),
                ));
            }
            Ok(witness.into())
        }
        PreorderedGroup::Integers { cone } => Ok(match cone {
            IntCone::NonNeg => Verdict::Fails(ConeWitness {
                element: "1".into(),
                inverse: "-1".into(),
            }),
            _ => Verdict::Holds,
        }),
    }
}

/// For abelian preordered groups W-Mal'tsev and Mal'tsev objects coincide,
/// so this is [`maltsev_object_ordgrp`]. Non-abelian input is refused.
pub fn wmaltsev_ordgrp_abelian(g: &PreorderedGroup) -> Result<Verdict<ConeWitness>> {
    if !g.is_abelian() {
        return Err(Error::NotDecided(format!(
            "{} is not abelian; whether W-Mal'tsev and Mal'tsev objects coincide for \
             non-abelian preordered groups is open",
            g.name()
        )));
    }
    maltsev_object_ordgrp(g)
}
