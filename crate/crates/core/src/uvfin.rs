//! Finite (U,V)-categories.
//!
//! On a finite set every ultrafilter is principal, so a convergence structure
//! is a matrix `conv(z, x) = Y(ż, x)` and the axioms reduce to those of a
//! V-category. Everything here is about this principal fragment only.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quantale::{Elem, Quantale};
use crate::vcat::{enumerate_vcategories, for_each_vcategory, verify_vcategory, VCatViolation, VCategory};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteConvergence {
    matrix: VCategory,
}

impl FiniteConvergence {
    /// `conv[z * n + x]` is the degree to which `ż` converges to `x`.
    pub fn new(quantale: Arc<Quantale>, points: Vec<String>, conv: Vec<Elem>) -> Result<Self> {
        Ok(FiniteConvergence {
            matrix: VCategory::new(quantale, points, conv)?,
        })
    }

    /// Discrete base (`⊤` on the diagonal, `⊥` elsewhere) plus overrides.
    pub fn from_entries<S: AsRef<str>>(
        quantale: Arc<Quantale>,
        points: &[S],
        entries: &[(&str, &str, &str)],
    ) -> Result<Self> {
        Ok(FiniteConvergence {
            matrix: VCategory::from_entries(quantale, points, entries)?,
        })
    }

    pub fn from_matrix(x: &VCategory) -> Self {
        FiniteConvergence { matrix: x.clone() }
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        self.matrix.quantale()
    }

    pub fn points(&self) -> &[String] {
        self.matrix.objects()
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn conv(&self, z: usize, x: usize) -> Elem {
        self.matrix.hom(z, x)
    }

    pub fn conv_matrix(&self) -> &[Elem] {
        self.matrix.hom_matrix()
    }
}

/// (R) `k ≤ conv(x, x)` and the principal form of (T),
/// `conv(z, y) ⊗ conv(y, x) ≤ conv(z, x)`.
pub fn verify_convergence(c: &FiniteConvergence) -> Verdict<VCatViolation> {
    verify_vcategory(&c.matrix)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    /// `Y(ż, x) ∧ Y(ż, y) ≤ Y(ẋ, y)`
    A,
    /// `Y(ż, x) ∧ Y(ẋ, y) ≤ Y(ż, y)`
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbViolation {
    pub condition: Condition,
    pub x: String,
    pub y: String,
    pub z: String,
    pub meet: String,
    pub bound: String,
}

/// Checks (a) on all triples, then (b).
pub fn check_conditions_ab(c: &FiniteConvergence) -> Verdict<AbViolation> {
    match check_condition(c, Condition::A) {
        Verdict::Holds => check_condition(c, Condition::B),
        fails => fails,
    }
}

pub fn check_condition(c: &FiniteConvergence, which: Condition) -> Verdict<AbViolation> {
    let q = c.quantale();
    let n = c.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (meet, bound) = match which {
                    Condition::A => (q.meet_pair(c.conv(z, x), c.conv(z, y)), c.conv(x, y)),
                    Condition::B => (q.meet_pair(c.conv(z, x), c.conv(x, y)), c.conv(z, y)),
                };
                if !q.leq(meet, bound) {
                    let name = |i: usize| c.points()[i].clone();
                    return Verdict::Fails(AbViolation {
                        condition: which,
                        x: name(x),
                        y: name(y),
                        z: name(z),
                        meet: q.name_of(meet).into(),
                        bound: q.name_of(bound).into(),
                    });
                }
            }
        }
    }
    Verdict::Holds
}

/// The V-category with the same matrix.
pub fn vcat_of_convergence(c: &FiniteConvergence) -> VCategory {
    c.matrix.clone()
}

/// All verified convergence structures on `n` points `a, b, …`.
pub fn enumerate_convergences(q: &Arc<Quantale>, n: usize) -> Vec<FiniteConvergence> {
    enumerate_vcategories(q, n)
        .into_iter()
        .map(|x| FiniteConvergence { matrix: x })
        .collect()
}

/// First verified structure (by size, then enumeration order) on at most
/// `max_points` points that satisfies (a) and fails (b).
pub fn search_a_without_b(q: &Arc<Quantale>, max_points: usize) -> Option<FiniteConvergence> {
    first_convergence(q, max_points, |c| {
        check_condition(c, Condition::A).holds() && !check_condition(c, Condition::B).holds()
    })
}

/// First verified structure on at most `max_points` points failing (b).
/// Being verified, it satisfies (T).
pub fn search_t_without_b(q: &Arc<Quantale>, max_points: usize) -> Option<FiniteConvergence> {
    first_convergence(q, max_points, |c| !check_condition(c, Condition::B).holds())
}

fn first_convergence(
    q: &Arc<Quantale>,
    max_points: usize,
    pred: impl Fn(&FiniteConvergence) -> bool,
) -> Option<FiniteConvergence> {
    (0..=max_points).find_map(|n| {
        let mut found = None;
        for_each_vcategory(q, n, &mut |x| {
            if found.is_none() {
                let c = FiniteConvergence::from_matrix(x);
                if pred(&c) {
                    found = Some(c);
                }
            }
        });
        found
    })
}
