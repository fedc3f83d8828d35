//! Finite set relations and difunctionality.
//!
//! A relation `D ⊆ X × Z` is difunctional when `x₁ D z₂`, `x₂ D z₂` and
//! `x₂ D z₁` force `x₁ D z₁`. Equivalently, any two rows of `D` are equal or
//! disjoint, which is what [`is_difunctional`] checks.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vcat::{enumerate_vfunctors, VCategory, VFunctor};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetRelation {
    pub left: Vec<String>,
    pub right: Vec<String>,
    /// Index pairs into `left` and `right`.
    pub pairs: BTreeSet<(usize, usize)>,
}

/// `(x₁, x₂, z₁, z₂)` with `x₁ D z₂`, `x₂ D z₂`, `x₂ D z₁` but not `x₁ D z₁`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifunctionalityViolation {
    pub x1: String,
    pub x2: String,
    pub z1: String,
    pub z2: String,
}

impl SetRelation {
    pub fn new(left: Vec<String>, right: Vec<String>, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= left.len() || b >= right.len()) {
            return Err(Error::Malformed(format!("pair ({a}, {b}) is outside the carriers")));
        }
        Ok(SetRelation { left, right, pairs })
    }

    /// Pairs given by label.
    pub fn from_labels<S: AsRef<str>>(left: &[S], right: &[S], pairs: &[(&str, &str)]) -> Result<Self> {
        let left: Vec<String> = left.iter().map(|s| s.as_ref().to_string()).collect();
        let right: Vec<String> = right.iter().map(|s| s.as_ref().to_string()).collect();
        let find = |side: &[String], l: &str| {
            side.iter()
                .position(|s| s == l)
                .ok_or_else(|| Error::UnknownObject(l.to_string()))
        };
        let pairs = pairs
            .iter()
            .map(|&(a, b)| Ok((find(&left, a)?, find(&right, b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(left, right, pairs)
    }

    pub fn empty(left: Vec<String>, right: Vec<String>) -> Self {
        SetRelation {
            left,
            right,
            pairs: BTreeSet::new(),
        }
    }

    pub fn full(left: Vec<String>, right: Vec<String>) -> Self {
        let pairs = (0..left.len())
            .flat_map(|a| (0..right.len()).map(move |b| (a, b)))
            .collect();
        SetRelation { left, right, pairs }
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }

    /// The converse relation.
    pub fn transpose(&self) -> SetRelation {
        SetRelation {
            left: self.right.clone(),
            right: self.left.clone(),
            pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    pub fn label_pairs(&self) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(a, b)| (self.left[a].clone(), self.right[b].clone()))
            .collect()
    }

    fn rows(&self) -> Vec<Vec<u64>> {
        let words = self.right.len().div_ceil(64).max(1);
        let mut rows = vec![vec![0u64; words]; self.left.len()];
        for &(a, b) in &self.pairs {
            rows[a][b / 64] |= 1 << (b % 64);
        }
        rows
    }

    fn violation(&self, x1: usize, x2: usize, z1: usize, z2: usize) -> DifunctionalityViolation {
        DifunctionalityViolation {
            x1: self.left[x1].clone(),
            x2: self.left[x2].clone(),
            z1: self.right[z1].clone(),
            z2: self.right[z2].clone(),
        }
    }
}

fn first_bit(words: impl Iterator<Item = u64>) -> Option<usize> {
    words
        .enumerate()
        .find(|&(_, w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Rows are compared pairwise: when rows `x₁` and `x₂` meet at some `z₂`
/// and `x₂` has a `z₁` that `x₁` lacks, the implication fails. The witness is
/// the least such quadruple in the order `(x₁, x₂, z₁, z₂)`.
pub fn is_difunctional(r: &SetRelation) -> Verdict<DifunctionalityViolation> {
    let rows = r.rows();
    let n = rows.len();
    let found = (0..n).into_par_iter().find_map_first(|x1| {
        (0..n).find_map(|x2| {
            let (a, b) = (&rows[x1], &rows[x2]);
            let z2 = first_bit(a.iter().zip(b).map(|(p, q)| p & q))?;
            let z1 = first_bit(a.iter().zip(b).map(|(p, q)| !p & q))?;
            Some((x1, x2, z1, z2))
        })
    });
    match found {
        Some((x1, x2, z1, z2)) => Verdict::Fails(r.violation(x1, x2, z1, z2)),
        None => Verdict::Holds,
    }
}

/// The defining implication checked quadruple by quadruple. Slow; kept as an
/// independent reference for [`is_difunctional`].
pub fn difunctional_check_by_definition(r: &SetRelation) -> Verdict<DifunctionalityViolation> {
    let (n, m) = (r.left.len(), r.right.len());
    for x1 in 0..n {
        for x2 in 0..n {
            for z1 in 0..m {
                for z2 in 0..m {
                    if r.contains(x1, z2) && r.contains(x2, z2) && r.contains(x2, z1) && !r.contains(x1, z1) {
                        return Verdict::Fails(r.violation(x1, x2, z1, z2));
                    }
                }
            }
        }
    }
    Verdict::Holds
}

/// The relation `{(h ∘ r₁, h ∘ r₂) : h ∈ V-Cat(R, Y)}` on
/// `V-Cat(X, Y) × V-Cat(Z, Y)` induced by a cospan `X → R ← Z`. Carriers are
/// labelled by [`VFunctor::label`] in enumeration order.
pub fn hom_relation(r1: &VFunctor, r2: &VFunctor, y: &VCategory) -> Result<SetRelation> {
    let r = r1.target();
    if r.objects() != r2.target().objects() || r.hom_matrix() != r2.target().hom_matrix() {
        return Err(Error::Precondition("cospan legs must share their codomain".into()));
    }
    let mut covered = vec![false; r.len()];
    for &j in r1.map().iter().chain(r2.map()) {
        covered[j] = true;
    }
    if let Some(j) = covered.iter().position(|c| !c) {
        return Err(Error::Precondition(format!(
            "cospan is not jointly epimorphic: `{}` is not covered",
            r.object_name(j)
        )));
    }
    let left_maps = enumerate_vfunctors(r1.source(), y)?;
    let right_maps = enumerate_vfunctors(r2.source(), y)?;
    let index = |maps: &[VFunctor]| -> HashMap<Vec<usize>, usize> {
        maps.iter().enumerate().map(|(i, f)| (f.map().to_vec(), i)).collect()
    };
    let (li, ri) = (index(&left_maps), index(&right_maps));
    let mut pairs = BTreeSet::new();
    for h in enumerate_vfunctors(r, y)? {
        let a: Vec<usize> = r1.map().iter().map(|&i| h.apply(i)).collect();
        let b: Vec<usize> = r2.map().iter().map(|&i| h.apply(i)).collect();
        pairs.insert((li[&a], ri[&b]));
    }
    Ok(SetRelation {
        left: left_maps.iter().map(VFunctor::label).collect(),
        right: right_maps.iter().map(VFunctor::label).collect(),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::quantale::Quantale;

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn relation_from_code(n: usize, m: usize, code: u64) -> SetRelation {
        let pairs = (0..n * m).filter(|k| code >> k & 1 == 1).map(|k| (k / m, k % m));
        SetRelation::new(labels("x", n), labels("z", m), pairs).unwrap()
    }

    #[test]
    fn defining_configuration_fails() {
        let r = SetRelation::from_labels(
            &["x1", "x2"],
            &["z1", "z2"],
            &[("x1", "z2"), ("x2", "z2"), ("x2", "z1")],
        )
        .unwrap();
        let expected = DifunctionalityViolation {
            x1: "x1".into(),
            x2: "x2".into(),
            z1: "z1".into(),
            z2: "z2".into(),
        };
        assert_eq!(is_difunctional(&r), Verdict::Fails(expected.clone()));
        assert_eq!(difunctional_check_by_definition(&r), Verdict::Fails(expected));
    }

    #[test]
    fn empty_and_full() {
        for (n, m) in [(0, 0), (1, 3), (3, 2)] {
            assert!(is_difunctional(&SetRelation::empty(labels("x", n), labels("z", m))).holds());
            assert!(is_difunctional(&SetRelation::full(labels("x", n), labels("z", m))).holds());
        }
    }

    #[test]
    fn all_relations_on_three_by_three() {
        for code in 0..512 {
            let r = relation_from_code(3, 3, code);
            assert_eq!(is_difunctional(&r), difunctional_check_by_definition(&r), "{code:09b}");
        }
    }

    #[test]
    fn wide_rows_use_several_words() {
        let r = SetRelation::new(labels("x", 2), labels("z", 130), [(0, 129), (1, 129), (1, 70)]).unwrap();
        assert_eq!(is_difunctional(&r), difunctional_check_by_definition(&r));
        assert!(!is_difunctional(&r).holds());
    }

    #[test]
    fn point_target_gives_full_singleton() {
        let q = Arc::new(Quantale::two());
        let y = VCategory::point(q.clone(), "*");
        let x = VCategory::discrete(q.clone(), &["a", "b"]);
        let r = VCategory::discrete(q, &["a", "b"]);
        let id = VFunctor::identity(&x);
        let rel = hom_relation(&id, &VFunctor::new(x, r, vec![1, 0]).unwrap(), &y).unwrap();
        assert_eq!((rel.left.len(), rel.right.len(), rel.pairs.len()), (1, 1, 1));
    }

    #[test]
    fn identity_cospan_gives_diagonal() {
        let q = Arc::new(Quantale::two());
        let y = VCategory::from_entries(q, &["a", "b"], &[("a", "b", "1")]).unwrap();
        let id = VFunctor::identity(&y);
        let rel = hom_relation(&id, &id, &y).unwrap();
        assert_eq!(rel.left.len(), 3);
        assert_eq!(rel.pairs, (0..3).map(|i| (i, i)).collect());
    }

    #[test]
    fn hom_relation_requires_joint_epi() {
        let q = Arc::new(Quantale::two());
        let p = VCategory::point(q.clone(), "a");
        let r = VCategory::discrete(q, &["a", "b"]);
        let leg = VFunctor::new(p, r.clone(), vec![0]).unwrap();
        assert!(matches!(hom_relation(&leg, &leg, &r), Err(Error::Precondition(_))));
    }
}
