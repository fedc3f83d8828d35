//! Finite unital integral quantales.
//!
//! A [`Quantale`] stores its carrier as a list of opaque element names plus
//! dense order and tensor tables indexed by [`Elem`]. Construction only checks
//! that the tables are well formed; whether they satisfy the quantale axioms is
//! decided by [`verify_quantale`], which names the first violated axiom.
//!
//! Binary joins and meets are precomputed at construction time when they
//! exist. The `*_pair` accessors used in hot loops panic on a carrier whose
//! order is not a lattice, so callers are expected to have verified the
//! quantale first.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verdict::Verdict;

/// Index of an element in a quantale's carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub usize);

impl Elem {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Tensor products that can be generated from element names instead of
/// being tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinTensor {
    /// Binary meet of the order (cartesian quantale).
    Meet,
    /// Addition truncated to `∞` above the largest finite element.
    TruncatedPlus,
    /// Numeric maximum, with `∞` largest.
    Max,
    /// `max(0, u + v - 1)` on rationals in `[0, 1]`.
    Lukasiewicz,
}

impl BuiltinTensor {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "meet" | "wedge" | "min" => Ok(BuiltinTensor::Meet),
            "truncated-plus" | "plus" => Ok(BuiltinTensor::TruncatedPlus),
            "max" => Ok(BuiltinTensor::Max),
            "lukasiewicz" => Ok(BuiltinTensor::Lukasiewicz),
            other => Err(Error::Malformed(format!("unknown builtin tensor `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantale {
    name: String,
    elements: Vec<String>,
    leq: Vec<bool>,
    tensor: Vec<Elem>,
    unit: Elem,
    join: Vec<Option<Elem>>,
    meet: Vec<Option<Elem>>,
    bottom: Option<Elem>,
    top: Option<Elem>,
}

impl Quantale {
    /// Builds a quantale from dense tables. `leq[a][b]` is `a ≤ b` and
    /// `tensor[a][b]` is `a ⊗ b`.
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        leq: Vec<Vec<bool>>,
        tensor: Vec<Vec<Elem>>,
        unit: Elem,
    ) -> Result<Self> {
        let n = elements.len();
        check_distinct(&elements)?;
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::Malformed(format!("order table must be {n}x{n}")));
        }
        if tensor.len() != n || tensor.iter().any(|row| row.len() != n) {
            return Err(Error::Malformed(format!("tensor table must be {n}x{n}")));
        }
        if let Some(bad) = tensor.iter().flatten().find(|e| e.0 >= n) {
            return Err(Error::UnknownElement(format!("#{}", bad.0)));
        }
        if unit.0 >= n {
            return Err(Error::UnknownElement(format!("#{}", unit.0)));
        }
        let leq: Vec<bool> = leq.into_iter().flatten().collect();
        let tensor: Vec<Elem> = tensor.into_iter().flatten().collect();
        Ok(Self::assemble(name.into(), elements, leq, tensor, unit))
    }

    /// Builds a quantale whose tensor is computed from the element names.
    pub fn with_builtin_tensor(
        name: impl Into<String>,
        elements: Vec<String>,
        leq: Vec<Vec<bool>>,
        builtin: BuiltinTensor,
        unit: Elem,
    ) -> Result<Self> {
        let n = elements.len();
        // Start from a placeholder tensor so the lattice tables get computed.
        let placeholder = vec![vec![unit; n]; n];
        let q = Quantale::new(name, elements, leq, placeholder, unit)?;
        let tensor = builtin_table(&q, builtin)?;
        Ok(Self::assemble(q.name, q.elements, q.leq, tensor, unit))
    }

    /// The chain with elements listed from bottom to top and the given tensor.
    pub fn chain(
        name: impl Into<String>,
        ascending: &[&str],
        builtin: BuiltinTensor,
        unit: &str,
    ) -> Result<Self> {
        let elements: Vec<String> = ascending.iter().map(|s| s.to_string()).collect();
        let unit = elements
            .iter()
            .position(|e| e == unit)
            .ok_or_else(|| Error::UnknownElement(unit.to_string()))?;
        let n = elements.len();
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        Self::with_builtin_tensor(name, elements, leq, builtin, Elem(unit))
    }

    fn assemble(
        name: String,
        elements: Vec<String>,
        leq: Vec<bool>,
        tensor: Vec<Elem>,
        unit: Elem,
    ) -> Self {
        let n = elements.len();
        let le = |a: usize, b: usize| leq[a * n + b];
        let least_of = |candidates: &[usize]| {
            candidates
                .iter()
                .copied()
                .find(|&c| candidates.iter().all(|&d| le(c, d)))
                .map(Elem)
        };
        let greatest_of = |candidates: &[usize]| {
            candidates
                .iter()
                .copied()
                .find(|&c| candidates.iter().all(|&d| le(d, c)))
                .map(Elem)
        };
        let mut join = Vec::with_capacity(n * n);
        let mut meet = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let upper: Vec<usize> = (0..n).filter(|&c| le(a, c) && le(b, c)).collect();
                let lower: Vec<usize> = (0..n).filter(|&c| le(c, a) && le(c, b)).collect();
                join.push(least_of(&upper));
                meet.push(greatest_of(&lower));
            }
        }
        let all: Vec<usize> = (0..n).collect();
        let bottom = least_of(&all);
        let top = greatest_of(&all);
        Quantale {
            name,
            elements,
            leq,
            tensor,
            unit,
            join,
            meet,
            bottom,
            top,
        }
    }

    /// `2 = ({0 < 1}, ∧, 1)`.
    pub fn two() -> Self {
        Self::chain("2", &["0", "1"], BuiltinTensor::Meet, "1").expect("fixture")
    }

    /// Truncated addition on `{0, 1, …, n-1, ∞}` ordered by `≥`, so that `0`
    /// is the top and unit and `∞` the bottom. This is the fixture `Cn+`.
    pub fn truncated_plus(n: usize) -> Self {
        assert!(n >= 1, "truncated-plus chain needs at least the element 0");
        let finite: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut ascending: Vec<&str> = vec!["∞"];
        ascending.extend(finite.iter().rev().map(String::as_str));
        let mut q = Self::chain(format!("C{n}+"), &ascending, BuiltinTensor::TruncatedPlus, "0")
            .expect("fixture");
        q.reorder_for_display(&numeric_display_order(&q.elements));
        q
    }

    /// `({0, 1, …, n-2, ∞}, ≥, max, 0)`: the cartesian quantale of ultrametrics
    /// on `n` values.
    pub fn max_chain(n: usize) -> Self {
        assert!(n >= 2, "max chain needs 0 and ∞");
        let finite: Vec<String> = (0..n - 1).map(|i| i.to_string()).collect();
        let mut ascending: Vec<&str> = vec!["∞"];
        ascending.extend(finite.iter().rev().map(String::as_str));
        let mut q =
            Self::chain(format!("max{n}"), &ascending, BuiltinTensor::Max, "0").expect("fixture");
        q.reorder_for_display(&numeric_display_order(&q.elements));
        q
    }

    /// The `n`-point Łukasiewicz chain `{0, 1/(n-1), …, 1}` with
    /// `u ⊗ v = max(0, u + v - 1)`.
    pub fn lukasiewicz(n: usize) -> Self {
        assert!(n >= 2, "Łukasiewicz chain needs 0 and 1");
        let d = n - 1;
        let names: Vec<String> = (0..n)
            .map(|i| match i {
                0 => "0".to_string(),
                i if i == d => "1".to_string(),
                i => {
                    let g = gcd(i, d);
                    format!("{}/{}", i / g, d / g)
                }
            })
            .collect();
        let ascending: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::chain(format!("L{n}"), &ascending, BuiltinTensor::Lukasiewicz, "1").expect("fixture")
    }

    /// Shipped fixtures by name: `2`, `C1+`, `C2+`, `C3+`, `L4`, `max4`.
    pub fn fixture(name: &str) -> Option<Self> {
        match name {
            "2" => Some(Self::two()),
            "C1+" => Some(Self::truncated_plus(1)),
            "C2+" => Some(Self::truncated_plus(2)),
            "C3+" => Some(Self::truncated_plus(3)),
            "L4" => Some(Self::lukasiewicz(4)),
            "max4" => Some(Self::max_chain(4)),
            _ => None,
        }
    }

    pub fn fixture_names() -> &'static [&'static str] {
        &["2", "C1+", "C2+", "C3+", "L4", "max4"]
    }

    /// Permutes the carrier so that elements appear in the given order of old
    /// indices. Tables are relabelled accordingly.
    fn reorder_for_display(&mut self, order: &[usize]) {
        let n = self.len();
        let mut new_of_old = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_of_old[old] = new;
        }
        let elements = order.iter().map(|&o| self.elements[o].clone()).collect();
        let mut leq = vec![false; n * n];
        let mut tensor = vec![Elem(0); n * n];
        for a in 0..n {
            for b in 0..n {
                leq[new_of_old[a] * n + new_of_old[b]] = self.leq[a * n + b];
                let t = self.tensor[a * n + b];
                tensor[new_of_old[a] * n + new_of_old[b]] = Elem(new_of_old[t.0]);
            }
        }
        let unit = Elem(new_of_old[self.unit.0]);
        *self = Self::assemble(std::mem::take(&mut self.name), elements, leq, tensor, unit);
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.len()).map(Elem)
    }

    pub fn element_names(&self) -> &[String] {
        &self.elements
    }

    pub fn elem(&self, name: &str) -> Result<Elem> {
        self.elements
            .iter()
            .position(|e| e == name)
            .map(Elem)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn name_of(&self, e: Elem) -> &str {
        &self.elements[e.0]
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a.0 * self.len() + b.0]
    }

    /// Strictly below.
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        self.leq(a, b) && a != b
    }

    pub fn tensor(&self, a: Elem, b: Elem) -> Elem {
        self.tensor[a.0 * self.len() + b.0]
    }

    pub fn unit(&self) -> Elem {
        self.unit
    }

    /// # Panics
    /// If the order has no greatest element.
    pub fn top(&self) -> Elem {
        self.top.expect("quantale order has no top; verify it first")
    }

    /// # Panics
    /// If the order has no least element.
    pub fn bottom(&self) -> Elem {
        self.bottom
            .expect("quantale order has no bottom; verify it first")
    }

    /// Binary join from the precomputed table.
    ///
    /// # Panics
    /// If the pair has no least upper bound.
    pub fn join_pair(&self, a: Elem, b: Elem) -> Elem {
        self.join[a.0 * self.len() + b.0].expect("pair has no join; verify the quantale first")
    }

    /// Binary meet from the precomputed table.
    ///
    /// # Panics
    /// If the pair has no greatest lower bound.
    pub fn meet_pair(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a.0 * self.len() + b.0].expect("pair has no meet; verify the quantale first")
    }

    /// Least upper bound of a finite set; the empty join is the bottom.
    pub fn join(&self, set: &[Elem]) -> Result<Elem> {
        let mut acc = self
            .bottom
            .ok_or_else(|| Error::NotALattice("∅".into(), "∅".into()))?;
        for &e in set {
            if e.0 >= self.len() {
                return Err(Error::UnknownElement(format!("#{}", e.0)));
            }
            acc = self.join[acc.0 * self.len() + e.0].ok_or_else(|| {
                Error::NotALattice(self.name_of(acc).into(), self.name_of(e).into())
            })?;
        }
        Ok(acc)
    }

    /// Greatest lower bound of a finite set; the empty meet is the top.
    pub fn meet(&self, set: &[Elem]) -> Result<Elem> {
        let mut acc = self
            .top
            .ok_or_else(|| Error::NotALattice("∅".into(), "∅".into()))?;
        for &e in set {
            if e.0 >= self.len() {
                return Err(Error::UnknownElement(format!("#{}", e.0)));
            }
            acc = self.meet[acc.0 * self.len() + e.0].ok_or_else(|| {
                Error::NotALattice(self.name_of(acc).into(), self.name_of(e).into())
            })?;
        }
        Ok(acc)
    }

    pub fn join_named(&self, names: &[&str]) -> Result<Elem> {
        let set = names
            .iter()
            .map(|n| self.elem(n))
            .collect::<Result<Vec<_>>>()?;
        self.join(&set)
    }

    pub fn tensor_named(&self, a: &str, b: &str) -> Result<&str> {
        Ok(self.name_of(self.tensor(self.elem(a)?, self.elem(b)?)))
    }

    /// Right internal hom `[a, b] = ⋁ { c : a ⊗ c ≤ b }`, so that
    /// `a ⊗ c ≤ b ⟺ c ≤ [a, b]`.
    pub fn internal_hom(&self, a: Elem, b: Elem) -> Elem {
        let candidates: Vec<Elem> = self
            .elements()
            .filter(|&c| self.leq(self.tensor(a, c), b))
            .collect();
        self.join(&candidates).expect("verified quantale")
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.tensor(a, b) == self.tensor(b, a)))
    }

    pub fn is_cartesian(&self) -> bool {
        cartesian_witness(self).is_none()
    }
}

impl fmt::Display for Quantale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{{}}}", self.name, self.elements.join(", "))
    }
}

/// Which quantale axiom a [`QuantaleViolation`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Reflexivity,
    Antisymmetry,
    Transitivity,
    MissingJoin,
    MissingBottom,
    TopEqualsBottom,
    UnitNotTop,
    Associativity,
    UnitLaw,
    LeftDistributivity,
    RightDistributivity,
    BottomAbsorption,
    TensorBelowMeet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantaleViolation {
    pub axiom: Axiom,
    pub elements: Vec<String>,
}

impl fmt::Display for QuantaleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} fails at ({})", self.axiom, self.elements.join(", "))
    }
}

/// Checks every unital integral quantale axiom.
///
/// Distributivity is checked over binary joins and the empty join, which on
/// a finite lattice entails distributivity over arbitrary joins.
pub fn verify_quantale(q: &Quantale) -> Verdict<QuantaleViolation> {
    check_axioms(q).into()
}

fn check_axioms(q: &Quantale) -> Option<QuantaleViolation> {
    let fail = |axiom, els: &[Elem]| {
        Some(QuantaleViolation {
            axiom,
            elements: els.iter().map(|&e| q.name_of(e).to_string()).collect(),
        })
    };
    let all: Vec<Elem> = q.elements().collect();

    for &a in &all {
        if !q.leq(a, a) {
            return fail(Axiom::Reflexivity, &[a]);
        }
    }
    for &a in &all {
        for &b in &all {
            if a != b && q.leq(a, b) && q.leq(b, a) {
                return fail(Axiom::Antisymmetry, &[a, b]);
            }
        }
    }
    for &a in &all {
        for &b in &all {
            for &c in &all {
                if q.leq(a, b) && q.leq(b, c) && !q.leq(a, c) {
                    return fail(Axiom::Transitivity, &[a, b, c]);
                }
            }
        }
    }
    let Some(bottom) = q.bottom else {
        return fail(Axiom::MissingBottom, &[]);
    };
    for &a in &all {
        for &b in &all {
            if q.join[a.0 * q.len() + b.0].is_none() {
                return fail(Axiom::MissingJoin, &[a, b]);
            }
        }
    }
    let top = q.top();
    if top == bottom {
        return fail(Axiom::TopEqualsBottom, &[top]);
    }
    if q.unit != top {
        return fail(Axiom::UnitNotTop, &[q.unit, top]);
    }
    for &a in &all {
        if q.tensor(q.unit, a) != a || q.tensor(a, q.unit) != a {
            return fail(Axiom::UnitLaw, &[a]);
        }
    }
    for &a in &all {
        for &b in &all {
            let ab = q.tensor(a, b);
            for &c in &all {
                if q.tensor(ab, c) != q.tensor(a, q.tensor(b, c)) {
                    return fail(Axiom::Associativity, &[a, b, c]);
                }
            }
        }
    }
    for &a in &all {
        if q.tensor(a, bottom) != bottom || q.tensor(bottom, a) != bottom {
            return fail(Axiom::BottomAbsorption, &[a]);
        }
    }
    for &a in &all {
        for &b in &all {
            for &c in &all {
                let bc = q.join_pair(b, c);
                if q.tensor(a, bc) != q.join_pair(q.tensor(a, b), q.tensor(a, c)) {
                    return fail(Axiom::LeftDistributivity, &[a, b, c]);
                }
                if q.tensor(bc, a) != q.join_pair(q.tensor(b, a), q.tensor(c, a)) {
                    return fail(Axiom::RightDistributivity, &[a, b, c]);
                }
            }
        }
    }
    for &a in &all {
        for &b in &all {
            if !q.leq(q.tensor(a, b), q.meet_pair(a, b)) {
                return fail(Axiom::TensorBelowMeet, &[a, b]);
            }
        }
    }
    None
}

/// A pair with `u ⊗ v` strictly below `u ∧ v`, scanning pairs in carrier
/// order; `None` when the tensor is the meet.
pub fn cartesian_witness(q: &Quantale) -> Option<(Elem, Elem)> {
    q.elements()
        .flat_map(|u| q.elements().map(move |v| (u, v)))
        .find(|&(u, v)| q.tensor(u, v) != q.meet_pair(u, v))
}

/// Like [`cartesian_witness`] but with element names.
pub fn cartesian_witness_named(q: &Quantale) -> Option<(String, String)> {
    cartesian_witness(q).map(|(u, v)| (q.name_of(u).to_string(), q.name_of(v).to_string()))
}

fn check_distinct(names: &[String]) -> Result<()> {
    for (i, a) in names.iter().enumerate() {
        if names[..i].contains(a) {
            return Err(Error::Malformed(format!("duplicate name `{a}`")));
        }
    }
    Ok(())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Numeric reading of element names used by the builtin tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Numeric {
    Finite { num: i64, den: i64 },
    Infinite,
}

impl Numeric {
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if matches!(s, "∞" | "inf" | "infinity" | "Infinity") {
            return Some(Numeric::Infinite);
        }
        if let Some((p, q)) = s.split_once('/') {
            let num: i64 = p.trim().parse().ok()?;
            let den: i64 = q.trim().parse().ok()?;
            if den <= 0 {
                return None;
            }
            return Some(Numeric::Finite { num, den });
        }
        s.parse().ok().map(|num| Numeric::Finite { num, den: 1 })
    }

    fn cmp(self, other: Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Numeric::Infinite, Numeric::Infinite) => Equal,
            (Numeric::Infinite, _) => Greater,
            (_, Numeric::Infinite) => Less,
            (Numeric::Finite { num: a, den: b }, Numeric::Finite { num: c, den: d }) => {
                (a * d).cmp(&(c * b))
            }
        }
    }

    fn add(self, other: Self) -> Self {
        match (self, other) {
            (Numeric::Finite { num: a, den: b }, Numeric::Finite { num: c, den: d }) => {
                Numeric::Finite {
                    num: a * d + c * b,
                    den: b * d,
                }
            }
            _ => Numeric::Infinite,
        }
    }
}

fn numeric_display_order(names: &[String]) -> Vec<usize> {
    let values: Vec<Numeric> = names
        .iter()
        .map(|n| Numeric::parse(n).expect("numeric fixture"))
        .collect();
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(values[b]));
    order
}

fn builtin_table(q: &Quantale, builtin: BuiltinTensor) -> Result<Vec<Elem>> {
    let n = q.len();
    if builtin == BuiltinTensor::Meet {
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let m = q.meet[a * n + b].ok_or_else(|| {
                    Error::NotALattice(q.elements[a].clone(), q.elements[b].clone())
                })?;
                table.push(m);
            }
        }
        return Ok(table);
    }
    let values: Vec<Numeric> = q
        .elements
        .iter()
        .map(|e| {
            Numeric::parse(e).ok_or_else(|| {
                Error::Malformed(format!("element `{e}` has no numeric reading for {builtin:?}"))
            })
        })
        .collect::<Result<_>>()?;
    let find = |v: Numeric| -> Result<Elem> {
        values
            .iter()
            .position(|&w| w.cmp(v).is_eq())
            .map(Elem)
            .ok_or_else(|| Error::Malformed(format!("{builtin:?} leaves the carrier")))
    };
    let max_finite = values
        .iter()
        .copied()
        .filter(|v| matches!(v, Numeric::Finite { .. }))
        .max_by(|a, b| a.cmp(*b));
    let zero = Numeric::Finite { num: 0, den: 1 };
    let mut table = Vec::with_capacity(n * n);
    for &u in &values {
        for &v in &values {
            let r = match builtin {
                BuiltinTensor::Meet => unreachable!(),
                BuiltinTensor::TruncatedPlus => {
                    let s = u.add(v);
                    match max_finite {
                        Some(m) if s.cmp(m).is_le() => s,
                        _ => Numeric::Infinite,
                    }
                }
                BuiltinTensor::Max => {
                    if u.cmp(v).is_ge() {
                        u
                    } else {
                        v
                    }
                }
                BuiltinTensor::Lukasiewicz => {
                    let s = u.add(v);
                    let Numeric::Finite { num, den } = s else {
                        return Err(Error::Malformed("Łukasiewicz needs finite values".into()));
                    };
                    let t = Numeric::Finite { num: num - den, den };
                    if t.cmp(zero).is_le() {
                        zero
                    } else {
                        t
                    }
                }
            };
            table.push(find(r)?);
        }
    }
    Ok(table)
}
