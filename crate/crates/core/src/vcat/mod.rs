//! Finite V-categories and V-functors.
//!
//! A [`VCategory`] is a finite set of named objects with a hom matrix valued
//! in a [`Quantale`]. It is a V-category when
//!
//! * (R) `k ≤ X(x, x)` for every object, and
//! * (T) `X(x, x') ⊗ X(x', x'') ≤ X(x, x'')` for every triple.
//!
//! Values are cheap to clone: the quantale, object names and hom matrix sit
//! behind `Arc`s.

mod colimits;
mod enumerate;
mod factor;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantale::{Elem, Quantale};
use crate::verdict::Verdict;

pub use colimits::{coproduct, product, product_n, Coproduct, Product};
pub use enumerate::{
    canonical_hom, close_under_meet, close_under_tensor, default_names, enumerate_vcategories,
    enumerate_vcategories_up_to_iso, enumerate_vfunctors, enumerate_vfunctors_with_bound, for_each_vcategory,
    is_isomorphic, random_symmetric_wedge, random_vcategory, DEFAULT_FUNCTOR_BOUND,
    DEFAULT_SIZE_CAP,
};
pub use factor::{
    factorize, is_regular_mono, pushout_along_regmono, Factorization, Pushout, RegularMonoViolation,
};

#[derive(Clone, PartialEq, Eq)]
pub struct VCategory {
    name: String,
    quantale: Arc<Quantale>,
    objects: Arc<Vec<String>>,
    hom: Arc<Vec<Elem>>,
}

impl VCategory {
    /// Hom matrix given row-major: `hom[i * n + j] = X(i, j)`.
    pub fn new(quantale: Arc<Quantale>, objects: Vec<String>, hom: Vec<Elem>) -> Result<Self> {
        let n = objects.len();
        for (i, a) in objects.iter().enumerate() {
            if objects[..i].contains(a) {
                return Err(Error::Malformed(format!("duplicate object `{a}`")));
            }
        }
        if hom.len() != n * n {
            return Err(Error::NotTotal(format!(
                "hom matrix has {} entries, expected {}",
                hom.len(),
                n * n
            )));
        }
        if let Some(e) = hom.iter().find(|e| e.0 >= quantale.len()) {
            return Err(Error::UnknownElement(format!("#{}", e.0)));
        }
        Ok(VCategory {
            name: String::new(),
            quantale,
            objects: Arc::new(objects),
            hom: Arc::new(hom),
        })
    }

    pub fn from_fn(
        quantale: Arc<Quantale>,
        objects: Vec<String>,
        hom: impl Fn(usize, usize) -> Elem,
    ) -> Result<Self> {
        let n = objects.len();
        let matrix = (0..n * n).map(|k| hom(k / n, k % n)).collect();
        Self::new(quantale, objects, matrix)
    }

    /// `⊤` on the diagonal and `⊥` elsewhere.
    pub fn discrete<S: AsRef<str>>(quantale: Arc<Quantale>, objects: &[S]) -> Self {
        let (top, bottom) = (quantale.top(), quantale.bottom());
        let names = objects.iter().map(|s| s.as_ref().to_string()).collect();
        Self::from_fn(quantale, names, |i, j| if i == j { top } else { bottom })
            .expect("discrete structure")
    }

    /// `⊤` everywhere.
    pub fn indiscrete<S: AsRef<str>>(quantale: Arc<Quantale>, objects: &[S]) -> Self {
        let top = quantale.top();
        let names = objects.iter().map(|s| s.as_ref().to_string()).collect();
        Self::from_fn(quantale, names, |_, _| top).expect("indiscrete structure")
    }

    pub fn empty(quantale: Arc<Quantale>) -> Self {
        Self::new(quantale, Vec::new(), Vec::new()).expect("empty structure")
    }

    pub fn point(quantale: Arc<Quantale>, name: &str) -> Self {
        Self::discrete(quantale, &[name])
    }

    /// Starts from the discrete structure on `objects` and overrides the listed
    /// hom entries `(from, to, value)` by name.
    pub fn from_entries<S: AsRef<str>>(
        quantale: Arc<Quantale>,
        objects: &[S],
        entries: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let mut x = Self::discrete(quantale, objects);
        for &(a, b, v) in entries {
            x.set_hom_named(a, b, v)?;
        }
        Ok(x)
    }

    /// Like [`from_entries`](Self::from_entries) but every entry is also set in
    /// the opposite direction.
    pub fn symmetric_from_entries<S: AsRef<str>>(
        quantale: Arc<Quantale>,
        objects: &[S],
        entries: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let mut x = Self::discrete(quantale, objects);
        for &(a, b, v) in entries {
            x.set_hom_named(a, b, v)?;
            x.set_hom_named(b, a, v)?;
        }
        Ok(x)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.quantale
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, i: usize) -> &str {
        &self.objects[i]
    }

    pub fn object(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn hom(&self, i: usize, j: usize) -> Elem {
        self.hom[i * self.len() + j]
    }

    pub fn hom_matrix(&self) -> &[Elem] {
        &self.hom
    }

    pub fn hom_named(&self, a: &str, b: &str) -> Result<&str> {
        let e = self.hom(self.object(a)?, self.object(b)?);
        Ok(self.quantale.name_of(e))
    }

    pub fn set_hom(&mut self, i: usize, j: usize, value: Elem) {
        let n = self.len();
        Arc::make_mut(&mut self.hom)[i * n + j] = value;
    }

    pub fn set_hom_named(&mut self, a: &str, b: &str, value: &str) -> Result<()> {
        let (i, j) = (self.object(a)?, self.object(b)?);
        let v = self.quantale.elem(value)?;
        self.set_hom(i, j, v);
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.hom(i, j) == self.hom(j, i)))
    }

    /// The full substructure on the listed objects, in the given order.
    pub fn full_substructure(&self, objects: &[usize]) -> VCategory {
        let names = objects.iter().map(|&i| self.objects[i].clone()).collect();
        VCategory::from_fn(self.quantale.clone(), names, |a, b| {
            self.hom(objects[a], objects[b])
        })
        .expect("substructure of a valid structure")
    }

    /// Inclusion of the full substructure on `objects`; always a regular mono.
    pub fn inclusion_of(&self, objects: &[usize]) -> VFunctor {
        let sub = self.full_substructure(objects);
        VFunctor::new(sub, self.clone(), objects.to_vec()).expect("inclusion")
    }

    /// Same objects and quantale, hom matrix replaced.
    pub fn with_hom(&self, hom: Vec<Elem>) -> Result<VCategory> {
        VCategory::new(self.quantale.clone(), self.objects.to_vec(), hom)
            .map(|x| x.with_name(self.name.clone()))
    }

    /// Serializable view with element names.
    pub fn snapshot(&self) -> VCatSnapshot {
        let n = self.len();
        VCatSnapshot {
            objects: self.objects.to_vec(),
            hom: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| self.quantale.name_of(self.hom(i, j)).to_string())
                        .collect()
                })
                .collect(),
        }
    }

    /// Inverse of [`VCategory::snapshot`].
    pub fn from_snapshot(quantale: Arc<Quantale>, s: &VCatSnapshot) -> Result<VCategory> {
        let n = s.objects.len();
        if s.hom.len() != n || s.hom.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed(format!("hom rows must form a {n}x{n} matrix")));
        }
        let hom = s.hom.iter().flatten().map(|e| quantale.elem(e)).collect::<Result<_>>()?;
        VCategory::new(quantale, s.objects.clone(), hom)
    }
}

impl fmt::Debug for VCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.len();
        write!(f, "{}[{}]{{", self.name, self.quantale.name())?;
        let mut first = true;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(
                    f,
                    "{}→{}:{}",
                    self.objects[i],
                    self.objects[j],
                    self.quantale.name_of(self.hom(i, j))
                )?;
            }
        }
        if first {
            write!(f, "{}", self.objects.join(", "))?;
        }
        write!(f, "}}")
    }
}

/// Hom matrix with element names, row-major over `objects`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VCatSnapshot {
    pub objects: Vec<String>,
    pub hom: Vec<Vec<String>>,
}

/// An object map between two V-categories over the same quantale.
#[derive(Clone, PartialEq, Eq)]
pub struct VFunctor {
    source: VCategory,
    target: VCategory,
    map: Vec<usize>,
}

impl VFunctor {
    pub fn new(source: VCategory, target: VCategory, map: Vec<usize>) -> Result<Self> {
        require_same_quantale(&source, &target)?;
        if map.len() != source.len() {
            return Err(Error::NotTotal(format!(
                "map has {} entries for {} source objects",
                map.len(),
                source.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= target.len()) {
            return Err(Error::UnknownObject(format!("target index {bad}")));
        }
        Ok(VFunctor {
            source,
            target,
            map,
        })
    }

    /// Map given as `(source object, target object)` name pairs; every source
    /// object must be listed.
    pub fn from_names(source: VCategory, target: VCategory, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut map = vec![None; source.len()];
        for &(a, b) in pairs {
            map[source.object(a)?] = Some(target.object(b)?);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| Error::NotTotal(format!("no image for `{}`", source.object_name(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, map)
    }

    pub fn identity(x: &VCategory) -> Self {
        VFunctor {
            source: x.clone(),
            target: x.clone(),
            map: (0..x.len()).collect(),
        }
    }

    pub fn constant(source: &VCategory, target: &VCategory, value: usize) -> Result<Self> {
        Self::new(source.clone(), target.clone(), vec![value; source.len()])
    }

    pub fn source(&self) -> &VCategory {
        &self.source
    }

    pub fn target(&self) -> &VCategory {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn apply_named(&self, name: &str) -> Result<&str> {
        Ok(self.target.object_name(self.map[self.source.object(name)?]))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &VFunctor) -> Result<VFunctor> {
        if self.target.objects() != next.source.objects() {
            return Err(Error::Precondition(
                "composable maps must share the middle object set".into(),
            ));
        }
        VFunctor::new(
            self.source.clone(),
            next.target.clone(),
            self.map.iter().map(|&i| next.map[i]).collect(),
        )
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &j in &self.map {
            hit[j] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Canonical string of the object map, e.g. `{a->b, c->b}`.
    pub fn label(&self) -> String {
        object_map_label(&self.source, &self.target, &self.map)
    }

    pub fn name_pairs(&self) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                (
                    self.source.object_name(i).to_string(),
                    self.target.object_name(j).to_string(),
                )
            })
            .collect()
    }
}

impl fmt::Debug for VFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

pub(crate) fn object_map_label(source: &VCategory, target: &VCategory, map: &[usize]) -> String {
    let body: Vec<String> = map
        .iter()
        .enumerate()
        .map(|(i, &j)| format!("{}->{}", source.object_name(i), target.object_name(j)))
        .collect();
    format!("{{{}}}", body.join(", "))
}

pub(crate) fn require_same_quantale(x: &VCategory, y: &VCategory) -> Result<()> {
    if Arc::ptr_eq(&x.quantale, &y.quantale) || x.quantale == y.quantale {
        Ok(())
    } else {
        Err(Error::QuantaleMismatch(
            x.quantale.name().to_string(),
            y.quantale.name().to_string(),
        ))
    }
}

/// Failure of (R) or (T).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum VCatViolation {
    /// `k ≰ X(x, x)`.
    Reflexivity { object: String, value: String },
    /// `X(x, y) ⊗ X(y, z) ≰ X(x, z)`.
    Transitivity {
        objects: [String; 3],
        composite: String,
        direct: String,
    },
}

/// A pair of source objects together with the source hom value and the
/// target value it was compared with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomPair {
    pub from: String,
    pub to: String,
    pub source_value: String,
    pub target_value: String,
}

impl fmt::Display for HomPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}): {} vs {}",
            self.from, self.to, self.source_value, self.target_value
        )
    }
}

pub fn verify_vcategory(x: &VCategory) -> Verdict<VCatViolation> {
    let q = x.quantale();
    let n = x.len();
    let k = q.unit();
    for i in 0..n {
        if !q.leq(k, x.hom(i, i)) {
            return Verdict::Fails(VCatViolation::Reflexivity {
                object: x.object_name(i).into(),
                value: q.name_of(x.hom(i, i)).into(),
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            let left = x.hom(i, j);
            for l in 0..n {
                let composite = q.tensor(left, x.hom(j, l));
                if !q.leq(composite, x.hom(i, l)) {
                    return Verdict::Fails(VCatViolation::Transitivity {
                        objects: [
                            x.object_name(i).into(),
                            x.object_name(j).into(),
                            x.object_name(l).into(),
                        ],
                        composite: q.name_of(composite).into(),
                        direct: q.name_of(x.hom(i, l)).into(),
                    });
                }
            }
        }
    }
    Verdict::Holds
}

/// `X(x, x') ≤ Y(f x, f x')` for every pair; the witness is the first pair
/// in source order where it fails.
pub fn verify_vfunctor(f: &VFunctor) -> Verdict<HomPair> {
    first_unenriched_pair(&f.source, &f.target, &f.map).into()
}

pub(crate) fn first_unenriched_pair(
    source: &VCategory,
    target: &VCategory,
    map: &[usize],
) -> Option<HomPair> {
    let q = source.quantale();
    let n = source.len();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (source.hom(i, j), target.hom(map[i], map[j]));
            if !q.leq(a, b) {
                return Some(HomPair {
                    from: source.object_name(i).into(),
                    to: source.object_name(j).into(),
                    source_value: q.name_of(a).into(),
                    target_value: q.name_of(b).into(),
                });
            }
        }
    }
    None
}
