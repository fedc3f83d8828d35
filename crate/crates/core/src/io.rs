//! JSON file formats.
//!
//! Every format has a `*File` type that derives serde and a conversion into
//! the domain type. Element and object names are strings throughout.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::FiniteMonoid;
use crate::ordgrp::{IntCone, PreorderedGroup};
use crate::quantale::{BuiltinTensor, Elem, Quantale};
use crate::rel::SetRelation;
use crate::uvfin::FiniteConvergence;
use crate::vcat::{VCategory, VFunctor};

pub fn read_json<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

// ---------------------------------------------------------------- quantale

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantaleFile {
    pub name: String,
    pub elements: Vec<String>,
    pub order: OrderSpec,
    pub tensor: TensorSpec,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderSpec {
    /// Bottom first.
    Chain { ascending: Vec<String> },
    /// Generating pairs `u ≤ v`; closed under reflexivity and transitivity
    /// on load.
    Pairs { leq: Vec<(String, String)> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TensorSpec {
    Builtin { name: String },
    Table { table: BTreeMap<String, BTreeMap<String, String>> },
}

fn position(names: &[String], name: &str) -> Result<usize> {
    names
        .iter()
        .position(|e| e == name)
        .ok_or_else(|| Error::UnknownElement(name.to_string()))
}

impl QuantaleFile {
    pub fn into_quantale(self) -> Result<Quantale> {
        let n = self.elements.len();
        let mut leq = vec![vec![false; n]; n];
        match &self.order {
            OrderSpec::Chain { ascending } => {
                let listed: BTreeSet<&String> = ascending.iter().collect();
                if ascending.len() != n || listed != self.elements.iter().collect() {
                    return Err(Error::Malformed("chain must list every element exactly once".into()));
                }
                let rank: Vec<usize> = self
                    .elements
                    .iter()
                    .map(|e| position(ascending, e))
                    .collect::<Result<_>>()?;
                for a in 0..n {
                    for b in 0..n {
                        leq[a][b] = rank[a] <= rank[b];
                    }
                }
            }
            OrderSpec::Pairs { leq: pairs } => {
                for (i, row) in leq.iter_mut().enumerate() {
                    row[i] = true;
                }
                for (u, v) in pairs {
                    leq[position(&self.elements, u)?][position(&self.elements, v)?] = true;
                }
                for k in 0..n {
                    for a in 0..n {
                        for b in 0..n {
                            if leq[a][k] && leq[k][b] {
                                leq[a][b] = true;
                            }
                        }
                    }
                }
            }
        }
        let unit = Elem(position(&self.elements, &self.unit)?);
        match self.tensor {
            TensorSpec::Builtin { name } => {
                let builtin = BuiltinTensor::from_name(&name)?;
                Quantale::with_builtin_tensor(self.name, self.elements, leq, builtin, unit)
            }
            TensorSpec::Table { table } => {
                let mut t = vec![vec![Elem(0); n]; n];
                for (a, row) in t.iter_mut().enumerate() {
                    let entries = table.get(&self.elements[a]).ok_or_else(|| {
                        Error::NotTotal(format!("tensor row `{}` is missing", self.elements[a]))
                    })?;
                    for (b, slot) in row.iter_mut().enumerate() {
                        let w = entries.get(&self.elements[b]).ok_or_else(|| {
                            Error::NotTotal(format!(
                                "tensor entry ({}, {}) is missing",
                                self.elements[a], self.elements[b]
                            ))
                        })?;
                        *slot = Elem(position(&self.elements, w)?);
                    }
                }
                for (row, entries) in &table {
                    position(&self.elements, row)?;
                    for col in entries.keys() {
                        position(&self.elements, col)?;
                    }
                }
                Quantale::new(self.name, self.elements, leq, t, unit)
            }
        }
    }

    /// Tabulated form of any quantale.
    pub fn from_quantale(q: &Quantale) -> Self {
        let names = q.element_names().to_vec();
        let leq = q
            .elements()
            .flat_map(|a| q.elements().map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && q.leq(a, b))
            .map(|(a, b)| (q.name_of(a).to_string(), q.name_of(b).to_string()))
            .collect();
        let table = q
            .elements()
            .map(|a| {
                let row = q
                    .elements()
                    .map(|b| (q.name_of(b).to_string(), q.name_of(q.tensor(a, b)).to_string()))
                    .collect();
                (q.name_of(a).to_string(), row)
            })
            .collect();
        QuantaleFile {
            name: q.name().to_string(),
            elements: names,
            order: OrderSpec::Pairs { leq },
            tensor: TensorSpec::Table { table },
            unit: q.name_of(q.unit()).to_string(),
        }
    }
}

/// Fixture names plus a few spellings: `c3plus`, `C3+`, `L4`, `l4`, `max4`.
pub fn fixture_quantale(name: &str) -> Option<Quantale> {
    if let Some(q) = Quantale::fixture(name) {
        return Some(q);
    }
    let lower = name.to_ascii_lowercase();
    let canonical = match lower.as_str() {
        "two" => "2",
        "c1plus" | "c1+" => "C1+",
        "c2plus" | "c2+" => "C2+",
        "c3plus" | "c3+" => "C3+",
        "l4" | "lukasiewicz4" | "ł4" => "L4",
        "max4" => "max4",
        _ => return None,
    };
    Quantale::fixture(canonical)
}

/// A quantale given by fixture name or inline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuantaleRef {
    Name(String),
    Inline(Box<QuantaleFile>),
}

impl QuantaleRef {
    pub fn resolve(&self) -> Result<Quantale> {
        match self {
            QuantaleRef::Name(n) => {
                fixture_quantale(n).ok_or_else(|| Error::Malformed(format!("unknown quantale `{n}`")))
            }
            QuantaleRef::Inline(f) => f.as_ref().clone().into_quantale(),
        }
    }
}

/// Reads a quantale file, or a bare fixture name if `spec` is not a path
/// to an existing file.
pub fn load_quantale(spec: &str) -> Result<Quantale> {
    if Path::new(spec).is_file() {
        let file: QuantaleRef = read_json(spec)?;
        file.resolve()
    } else {
        QuantaleRef::Name(spec.to_string()).resolve()
    }
}

// ------------------------------------------------------------- V-category

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VCatFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantale: Option<QuantaleRef>,
    pub objects: Vec<String>,
    #[serde(default)]
    pub hom: HomSpec,
}

/// `hom[x][x']` by name, or rows in object order (the snapshot layout).
/// Missing map entries, including diagonal ones, are `⊥`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HomSpec {
    Map(BTreeMap<String, BTreeMap<String, String>>),
    Rows(Vec<Vec<String>>),
}

impl Default for HomSpec {
    fn default() -> Self {
        HomSpec::Map(BTreeMap::new())
    }
}

impl VCatFile {
    /// `quantale` overrides the file's own quantale field; one of the two
    /// must be present.
    pub fn into_vcategory(self, quantale: Option<Arc<Quantale>>) -> Result<VCategory> {
        let q = match (quantale, &self.quantale) {
            (Some(q), _) => q,
            (None, Some(r)) => Arc::new(r.resolve()?),
            (None, None) => return Err(Error::Malformed("no quantale given".into())),
        };
        let n = self.objects.len();
        let mut hom = vec![q.bottom(); n * n];
        match &self.hom {
            HomSpec::Map(map) => {
                for (a, row) in map {
                    let i = position_obj(&self.objects, a)?;
                    for (b, v) in row {
                        let j = position_obj(&self.objects, b)?;
                        hom[i * n + j] = q.elem(v)?;
                    }
                }
            }
            HomSpec::Rows(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Malformed(format!("hom rows must form a {n}x{n} matrix")));
                }
                for (k, v) in rows.iter().flatten().enumerate() {
                    hom[k] = q.elem(v)?;
                }
            }
        }
        Ok(VCategory::new(q, self.objects, hom)?.with_name(self.name))
    }

    /// Every entry written out, quantale by name.
    pub fn from_vcategory(x: &VCategory) -> Self {
        let q = x.quantale();
        let hom = (0..x.len())
            .map(|i| {
                let row = (0..x.len())
                    .map(|j| (x.object_name(j).to_string(), q.name_of(x.hom(i, j)).to_string()))
                    .collect();
                (x.object_name(i).to_string(), row)
            })
            .collect();
        VCatFile {
            kind: None,
            name: x.name().to_string(),
            quantale: Some(QuantaleRef::Name(q.name().to_string())),
            objects: x.objects().to_vec(),
            hom: HomSpec::Map(hom),
        }
    }
}

fn position_obj(objects: &[String], name: &str) -> Result<usize> {
    objects
        .iter()
        .position(|o| o == name)
        .ok_or_else(|| Error::UnknownObject(name.to_string()))
}

pub fn load_vcategory(path: impl AsRef<Path>, quantale: Option<Arc<Quantale>>) -> Result<VCategory> {
    read_json::<VCatFile>(path)?.into_vcategory(quantale)
}

pub fn load_convergence(path: impl AsRef<Path>, quantale: Option<Arc<Quantale>>) -> Result<FiniteConvergence> {
    let file: VCatFile = read_json(path)?;
    if let Some(k) = &file.kind {
        if k != "convergence" {
            return Err(Error::Malformed(format!("expected kind `convergence`, found `{k}`")));
        }
    }
    Ok(FiniteConvergence::from_matrix(&file.into_vcategory(quantale)?))
}

/// An object map by name.
pub type MapFile = BTreeMap<String, String>;

fn functor_from_map(source: &VCategory, target: &VCategory, map: &MapFile) -> Result<VFunctor> {
    let pairs: Vec<(&str, &str)> = map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    for (a, _) in &pairs {
        source.object(a)?;
    }
    VFunctor::from_names(source.clone(), target.clone(), &pairs)
}

/// `f: source → target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantale: Option<QuantaleRef>,
    pub source: VCatFile,
    pub target: VCatFile,
    pub map: MapFile,
}

impl FunctorFile {
    pub fn into_functor(self, quantale: Option<Arc<Quantale>>) -> Result<VFunctor> {
        let q = shared_quantale(quantale, &self.quantale)?;
        let s = self.source.into_vcategory(q.clone())?;
        let t = self.target.into_vcategory(q)?;
        functor_from_map(&s, &t, &self.map)
    }
}

/// `f: X → Y` and a regular mono `m: X → Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantale: Option<QuantaleRef>,
    pub x: VCatFile,
    pub y: VCatFile,
    pub z: VCatFile,
    pub f: MapFile,
    pub m: MapFile,
}

impl SpanFile {
    pub fn into_maps(self, quantale: Option<Arc<Quantale>>) -> Result<(VFunctor, VFunctor)> {
        let q = shared_quantale(quantale, &self.quantale)?;
        let x = self.x.into_vcategory(q.clone())?;
        let y = self.y.into_vcategory(q.clone())?;
        let z = self.z.into_vcategory(q)?;
        Ok((functor_from_map(&x, &y, &self.f)?, functor_from_map(&x, &z, &self.m)?))
    }
}

fn shared_quantale(given: Option<Arc<Quantale>>, own: &Option<QuantaleRef>) -> Result<Option<Arc<Quantale>>> {
    Ok(match (given, own) {
        (Some(q), _) => Some(q),
        (None, Some(r)) => Some(Arc::new(r.resolve()?)),
        (None, None) => None,
    })
}

// --------------------------------------------------------------- relation

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFile {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub pairs: Vec<(String, String)>,
}

impl RelationFile {
    pub fn into_relation(self) -> Result<SetRelation> {
        let pairs: Vec<(&str, &str)> = self.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        SetRelation::from_labels(&self.left, &self.right, &pairs)
    }

    pub fn from_relation(r: &SetRelation) -> Self {
        RelationFile {
            left: r.left.clone(),
            right: r.right.clone(),
            pairs: r.label_pairs(),
        }
    }
}

// ----------------------------------------------------------------- monoid

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidFile {
    #[serde(default)]
    pub name: String,
    pub elements: Vec<String>,
    pub identity: String,
    pub table: MonoidTable,
}

/// Either `table[a][b]` by name or rows in element order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MonoidTable {
    Map(BTreeMap<String, BTreeMap<String, String>>),
    Rows(Vec<Vec<String>>),
}

impl MonoidFile {
    pub fn into_monoid(self) -> Result<FiniteMonoid> {
        let n = self.elements.len();
        let idx = |s: &str| position(&self.elements, s);
        let mut table = vec![0; n * n];
        match &self.table {
            MonoidTable::Rows(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::NotTotal("table must be square over the elements".into()));
                }
                for (a, row) in rows.iter().enumerate() {
                    for (b, c) in row.iter().enumerate() {
                        table[a * n + b] = idx(c)?;
                    }
                }
            }
            MonoidTable::Map(map) => {
                for a in 0..n {
                    for b in 0..n {
                        let c = map
                            .get(&self.elements[a])
                            .and_then(|r| r.get(&self.elements[b]))
                            .ok_or_else(|| {
                                Error::NotTotal(format!(
                                    "entry ({}, {}) is missing",
                                    self.elements[a], self.elements[b]
                                ))
                            })?;
                        table[a * n + b] = idx(c)?;
                    }
                }
            }
        }
        let identity = idx(&self.identity)?;
        FiniteMonoid::new(self.name, self.elements, table, identity)
    }

    pub fn from_monoid(m: &FiniteMonoid) -> Self {
        let n = m.len();
        MonoidFile {
            name: m.name().to_string(),
            elements: m.elements().to_vec(),
            identity: m.element_name(m.identity()).to_string(),
            table: MonoidTable::Rows(
                (0..n)
                    .map(|a| (0..n).map(|b| m.element_name(m.op(a, b)).to_string()).collect())
                    .collect(),
            ),
        }
    }
}

// ---------------------------------------------------------------- OrdGrp

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrdGrpFile {
    Finite { monoid: MonoidFile, cone: Vec<String> },
    Int { cone: IntConeSpec },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntConeSpec {
    Named(String),
    Multiples { multiples_of: u64 },
}

impl OrdGrpFile {
    pub fn into_ordgrp(self) -> Result<PreorderedGroup> {
        match self {
            OrdGrpFile::Finite { monoid, cone } => {
                let g = monoid.into_monoid()?;
                let cone: Vec<&str> = cone.iter().map(String::as_str).collect();
                PreorderedGroup::finite_named(g, &cone)
            }
            OrdGrpFile::Int { cone } => {
                let cone = match cone {
                    IntConeSpec::Named(n) => match n.as_str() {
                        "zero" => IntCone::Zero,
                        "nonneg" => IntCone::NonNeg,
                        "all" => IntCone::All,
                        other => return Err(Error::Malformed(format!("unknown cone `{other}`"))),
                    },
                    IntConeSpec::Multiples { multiples_of } => IntCone::MultiplesOf(multiples_of),
                };
                Ok(PreorderedGroup::integers(cone))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::verify_quantale;

    #[test]
    fn quantale_file_round_trip() {
        for name in Quantale::fixture_names() {
            let q = Quantale::fixture(name).unwrap();
            let file = QuantaleFile::from_quantale(&q);
            let json = serde_json::to_string(&file).unwrap();
            let back: QuantaleFile = serde_json::from_str(&json).unwrap();
            let q2 = back.into_quantale().unwrap();
            assert!(verify_quantale(&q2).holds());
            for a in q.elements() {
                for b in q.elements() {
                    assert_eq!(q.leq(a, b), q2.leq(a, b));
                    assert_eq!(q.tensor(a, b), q2.tensor(a, b));
                }
            }
        }
    }

    #[test]
    fn builtin_chain_file() {
        let json = r#"{"name":"C3+","elements":["0","1","2","∞"],
            "order":{"kind":"chain","ascending":["∞","2","1","0"]},
            "tensor":{"kind":"builtin","name":"truncated-plus"},"unit":"0"}"#;
        let q = serde_json::from_str::<QuantaleFile>(json).unwrap().into_quantale().unwrap();
        assert_eq!(q.tensor_named("2", "1").unwrap(), "∞");
        assert_eq!(q.tensor_named("1", "1").unwrap(), "2");
    }

    #[test]
    fn missing_table_entry_is_an_input_error() {
        let json = r#"{"name":"x","elements":["0","1"],
            "order":{"kind":"chain","ascending":["0","1"]},
            "tensor":{"kind":"table","table":{"0":{"0":"0","1":"0"},"1":{"0":"0"}}},"unit":"1"}"#;
        let f: QuantaleFile = serde_json::from_str(json).unwrap();
        assert!(matches!(f.into_quantale(), Err(Error::NotTotal(_))));
    }

    #[test]
    fn vcat_file_defaults_to_bottom() {
        let json = r#"{"name":"chain","quantale":"2","objects":["a","b"],
            "hom":{"a":{"a":"1","b":"1"},"b":{"b":"1"}}}"#;
        let x = serde_json::from_str::<VCatFile>(json).unwrap().into_vcategory(None).unwrap();
        assert_eq!(x.hom_named("b", "a").unwrap(), "0");
        let back = VCatFile::from_vcategory(&x).into_vcategory(None).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn snapshot_layout_loads() {
        let x = VCategory::from_entries(Arc::new(Quantale::two()), &["a", "b"], &[("a", "b", "1")]).unwrap();
        let json = serde_json::to_string(&x.snapshot()).unwrap();
        let back = serde_json::from_str::<VCatFile>(&json).unwrap();
        assert_eq!(back.into_vcategory(Some(x.quantale().clone())).unwrap().hom_matrix(), x.hom_matrix());
    }

    #[test]
    fn ordgrp_files() {
        let g: OrdGrpFile = serde_json::from_str(r#"{"kind":"int","cone":"nonneg"}"#).unwrap();
        assert_eq!(g.into_ordgrp().unwrap(), PreorderedGroup::integers(IntCone::NonNeg));
        let g: OrdGrpFile = serde_json::from_str(r#"{"kind":"int","cone":{"multiples_of":3}}"#).unwrap();
        assert_eq!(g.into_ordgrp().unwrap(), PreorderedGroup::integers(IntCone::MultiplesOf(3)));
        let g: OrdGrpFile = serde_json::from_str(
            r#"{"kind":"finite","monoid":{"elements":["0","1"],"identity":"0",
                "table":[["0","1"],["1","0"]]},"cone":["0","1"]}"#,
        )
        .unwrap();
        assert!(g.into_ordgrp().is_ok());
    }

    #[test]
    fn relation_file() {
        let r: RelationFile =
            serde_json::from_str(r#"{"left":["x"],"right":["z"],"pairs":[["x","z"]]}"#).unwrap();
        let rel = r.clone().into_relation().unwrap();
        assert_eq!(RelationFile::from_relation(&rel), r);
    }
}
