//! File formats: quantales, categories, enriched categories, functors,
//! monoids and homomorphisms, all keyed by string ids.
//!
//! Composites with an identity may be left out of a `compose` table, and
//! identities may be left out of a functor's morphism map. In an enriched
//! category a missing off-diagonal hom is the bottom of the base and a
//! missing diagonal hom is the unit.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::base::{Base, BaseError, Dist, Quantale, QuantaleTables, RPlus};
use crate::fincat::{
    EnrichedError, FinCategory, FinFunctor, FunctorError, Monoid, MonoidError, MonoidHom, Morphism, QuantCategory,
    QuantFunctor, StructureError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JsonError {
    #[error("unknown {kind} `{id}`")]
    Unknown { kind: &'static str, id: String },
    #[error("duplicate {kind} `{id}`")]
    Duplicate { kind: &'static str, id: String },
    #[error("object `{0}` has no identity")]
    MissingIdentity(String),
    #[error("missing composite {g} . {f}")]
    MissingComposite { g: String, f: String },
    #[error("`{g}` and `{f}` are not composable")]
    NotComposable { g: String, f: String },
    #[error("object `{0}` is not mapped")]
    UnmappedObject(String),
    #[error("morphism `{0}` is not mapped")]
    UnmappedMorphism(String),
    #[error("domain and codomain have different bases")]
    BaseMismatch,
    #[error("expected a {expected} base")]
    WrongBase { expected: &'static str },
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Enriched(#[from] EnrichedError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}

impl JsonError {
    /// An id mentioned by the error, for locating it in the source text.
    pub fn token(&self) -> Option<&str> {
        match self {
            JsonError::Unknown { id, .. } | JsonError::Duplicate { id, .. } => Some(id),
            JsonError::MissingIdentity(s) | JsonError::UnmappedObject(s) | JsonError::UnmappedMorphism(s) => Some(s),
            JsonError::MissingComposite { g, .. } | JsonError::NotComposable { g, .. } => Some(g),
            JsonError::Monoid(MonoidError::UnknownElement(s)) => Some(s),
            JsonError::Structure(StructureError::UnknownObject(s)) => Some(s),
            _ => None,
        }
    }
}

fn index<'a>(kind: &'static str, ids: impl Iterator<Item = &'a String>) -> Result<HashMap<String, usize>, JsonError> {
    let mut out = HashMap::new();
    for (i, id) in ids.enumerate() {
        if out.insert(id.clone(), i).is_some() {
            return Err(JsonError::Duplicate { kind, id: id.clone() });
        }
    }
    Ok(out)
}

fn look(kind: &'static str, map: &HashMap<String, usize>, id: &str) -> Result<usize, JsonError> {
    map.get(id).copied().ok_or_else(|| JsonError::Unknown {
        kind,
        id: id.to_string(),
    })
}

/// Ids made unique by suffixing repeats with `#k`.
fn unique(names: impl Iterator<Item = String>) -> Vec<String> {
    let mut seen = HashSet::new();
    names
        .map(|n| {
            let mut candidate = n.clone();
            let mut k = 1;
            while !seen.insert(candidate.clone()) {
                k += 1;
                candidate = format!("{n}#{k}");
            }
            candidate
        })
        .collect()
}

// ------------------------------------------------------------------ bases

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantaleJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
    pub tensor: Vec<(String, String, String)>,
    pub unit: String,
}

impl QuantaleJson {
    pub fn to_tables(&self) -> QuantaleTables {
        QuantaleTables {
            elements: self.elements.clone(),
            leq: self.leq.clone(),
            tensor: self.tensor.clone(),
            unit: self.unit.clone(),
        }
    }

    pub fn from_quantale(q: &Quantale) -> Self {
        let t = q.tables();
        QuantaleJson {
            elements: t.elements,
            leq: t.leq,
            tensor: t.tensor,
            unit: t.unit,
        }
    }
}

/// A built-in base by name, or an explicit quantale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseJson {
    Named(String),
    Table(QuantaleJson),
}

/// A resolved base.
#[derive(Debug, Clone)]
pub enum AnyBase {
    Finite(Quantale),
    RPlus(RPlus),
}

impl BaseJson {
    pub fn resolve(&self, tolerance: f64) -> Result<AnyBase, JsonError> {
        match self {
            BaseJson::Named(n) if n == "two" => Ok(AnyBase::Finite(Quantale::two())),
            BaseJson::Named(n) if n == "rplus" => Ok(AnyBase::RPlus(RPlus::with_tolerance(tolerance))),
            BaseJson::Named(n) => Err(BaseError::UnknownBase(n.clone()).into()),
            BaseJson::Table(t) => Ok(AnyBase::Finite(Quantale::new(&t.to_tables())?)),
        }
    }

    fn for_quantale(q: &Quantale) -> Self {
        if q.is_two() && q.names() == ["bot", "top"] {
            BaseJson::Named("two".into())
        } else {
            BaseJson::Table(QuantaleJson::from_quantale(q))
        }
    }
}

// ------------------------------------------------------------- categories

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    pub identity: BTreeMap<String, String>,
    #[serde(default)]
    pub compose: Vec<(String, String, String)>,
}

impl CategoryJson {
    /// Builds the category; axioms are checked separately.
    pub fn to_category(&self) -> Result<FinCategory, JsonError> {
        let objs = index("object", self.objects.iter())?;
        let mors = index("morphism", self.morphisms.iter().map(|m| &m.id))?;
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| {
                Ok(Morphism {
                    name: m.id.clone(),
                    src: look("object", &objs, &m.src)?,
                    dst: look("object", &objs, &m.dst)?,
                })
            })
            .collect::<Result<Vec<_>, JsonError>>()?;
        for key in self.identity.keys() {
            look("object", &objs, key)?;
        }
        let identity = self
            .objects
            .iter()
            .map(|o| {
                let id = self.identity.get(o).ok_or_else(|| JsonError::MissingIdentity(o.clone()))?;
                look("morphism", &mors, id)
            })
            .collect::<Result<Vec<_>, JsonError>>()?;
        let m = morphisms.len();
        let mut table: Vec<Option<usize>> = vec![None; m * m];
        for (g, f, gf) in &self.compose {
            let (gi, fi, gfi) = (look("morphism", &mors, g)?, look("morphism", &mors, f)?, look("morphism", &mors, gf)?);
            if morphisms[fi].dst != morphisms[gi].src {
                return Err(JsonError::NotComposable {
                    g: g.clone(),
                    f: f.clone(),
                });
            }
            if table[gi * m + fi].is_some_and(|old| old != gfi) {
                return Err(StructureError::ConflictingComposite {
                    g: g.clone(),
                    f: f.clone(),
                }
                .into());
            }
            table[gi * m + fi] = Some(gfi);
        }
        let is_identity: HashSet<usize> = identity.iter().copied().collect();
        for g in 0..m {
            for f in 0..m {
                if morphisms[f].dst != morphisms[g].src || table[g * m + f].is_some() {
                    continue;
                }
                table[g * m + f] = if is_identity.contains(&g) {
                    Some(f)
                } else if is_identity.contains(&f) {
                    Some(g)
                } else {
                    return Err(JsonError::MissingComposite {
                        g: morphisms[g].name.clone(),
                        f: morphisms[f].name.clone(),
                    });
                };
            }
        }
        Ok(FinCategory::from_parts(self.objects.clone(), morphisms, identity, table)?)
    }

    pub fn from_category(c: &FinCategory) -> Self {
        let objects = unique(c.object_names().iter().cloned());
        let mors = unique(c.morphisms().map(|f| c.morphism_name(f).to_string()));
        CategoryJson {
            morphisms: c
                .morphisms()
                .map(|f| MorphismJson {
                    id: mors[f].clone(),
                    src: objects[c.src(f)].clone(),
                    dst: objects[c.dst(f)].clone(),
                })
                .collect(),
            identity: c.objects().map(|a| (objects[a].clone(), mors[c.identity(a)].clone())).collect(),
            compose: c
                .morphisms()
                .filter(|&g| !c.is_identity(g))
                .flat_map(|g| c.morphisms().filter(|&f| !c.is_identity(f)).map(move |f| (g, f)))
                .filter_map(|(g, f)| c.compose(g, f).map(|gf| (mors[g].clone(), mors[f].clone(), mors[gf].clone())))
                .collect(),
            objects,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorJson {
    pub dom: CategoryJson,
    pub cod: CategoryJson,
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

impl FunctorJson {
    /// Builds and checks the functor; the categories are returned
    /// unvalidated inside it and should be validated by the caller first.
    pub fn to_parts(&self) -> Result<(FinCategory, FinCategory), JsonError> {
        Ok((self.dom.to_category()?, self.cod.to_category()?))
    }

    pub fn to_functor(&self, dom: Arc<FinCategory>, cod: Arc<FinCategory>) -> Result<FinFunctor, JsonError> {
        let objs = index("object", cod.object_names().iter())?;
        let cod_mors = index("morphism", self.cod.morphisms.iter().map(|m| &m.id))?;
        let dom_objs = index("object", dom.object_names().iter())?;
        let dom_mors = index("morphism", self.dom.morphisms.iter().map(|m| &m.id))?;
        for k in self.objects.keys() {
            look("object", &dom_objs, k)?;
        }
        for k in self.morphisms.keys() {
            look("morphism", &dom_mors, k)?;
        }
        let obj_map = dom
            .object_names()
            .iter()
            .map(|a| {
                let b = self.objects.get(a).ok_or_else(|| JsonError::UnmappedObject(a.clone()))?;
                look("object", &objs, b)
            })
            .collect::<Result<Vec<_>, JsonError>>()?;
        let mor_map = self
            .dom
            .morphisms
            .iter()
            .enumerate()
            .map(|(f, m)| match self.morphisms.get(&m.id) {
                Some(g) => look("morphism", &cod_mors, g),
                None if dom.is_identity(f) => Ok(cod.identity(obj_map[dom.src(f)])),
                None => Err(JsonError::UnmappedMorphism(m.id.clone())),
            })
            .collect::<Result<Vec<_>, JsonError>>()?;
        Ok(FinFunctor::new(dom, cod, obj_map, mor_map)?)
    }

    pub fn from_functor(f: &FinFunctor) -> Self {
        let dom = CategoryJson::from_category(f.dom());
        let cod = CategoryJson::from_category(f.cod());
        let objects = dom
            .objects
            .iter()
            .enumerate()
            .map(|(a, name)| (name.clone(), cod.objects[f.obj(a)].clone()))
            .collect();
        let morphisms = dom
            .morphisms
            .iter()
            .enumerate()
            .filter(|&(m, _)| !f.dom().is_identity(m))
            .map(|(m, mj)| (mj.id.clone(), cod.morphisms[f.mor(m)].id.clone()))
            .collect();
        FunctorJson {
            dom,
            cod,
            objects,
            morphisms,
        }
    }
}

// -------------------------------------------------------- enriched things

/// A hom value: an element id, a decimal string or a number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueJson {
    Text(String),
    Number(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantCategoryJson {
    pub base: BaseJson,
    pub objects: Vec<String>,
    #[serde(default)]
    pub hom: Vec<(String, String, ValueJson)>,
}

/// An enriched category over either kind of base.
#[derive(Debug, Clone)]
pub enum AnyQuantCategory {
    Finite(QuantCategory<Quantale>),
    RPlus(QuantCategory<RPlus>),
}

fn quant_table<B: Base>(
    base: &B,
    j: &QuantCategoryJson,
    value: impl Fn(&ValueJson) -> Result<B::Value, JsonError>,
) -> Result<Vec<B::Value>, JsonError> {
    let objs = index("object", j.objects.iter())?;
    let n = j.objects.len();
    let mut hom: Vec<Option<B::Value>> = vec![None; n * n];
    for (a, b, v) in &j.hom {
        let (x, y) = (look("object", &objs, a)?, look("object", &objs, b)?);
        if hom[x * n + y].is_some() {
            return Err(JsonError::Duplicate {
                kind: "hom entry",
                id: format!("{a},{b}"),
            });
        }
        hom[x * n + y] = Some(value(v)?);
    }
    Ok(hom
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.unwrap_or_else(|| if i / n == i % n { base.unit() } else { base.bottom() }))
        .collect())
}

impl QuantCategoryJson {
    pub fn to_category(&self, tolerance: f64) -> Result<AnyQuantCategory, JsonError> {
        match self.base.resolve(tolerance)? {
            AnyBase::Finite(q) => {
                let hom = quant_table(&q, self, |v| match v {
                    ValueJson::Text(s) => Ok(q.value(s)?),
                    ValueJson::Number(x) => Err(JsonError::Unknown {
                        kind: "value",
                        id: x.to_string(),
                    }),
                })?;
                Ok(AnyQuantCategory::Finite(QuantCategory::new(q, self.objects.clone(), hom)?))
            }
            AnyBase::RPlus(r) => {
                let hom = quant_table(&r, self, |v| match v {
                    ValueJson::Text(s) => Ok(Dist::parse(s)?),
                    ValueJson::Number(x) => Ok(Dist::finite(*x)?),
                })?;
                Ok(AnyQuantCategory::RPlus(QuantCategory::new(r, self.objects.clone(), hom)?))
            }
        }
    }

    fn with_values<B: Base>(c: &QuantCategory<B>, base: BaseJson, render: impl Fn(&B::Value) -> String) -> Self {
        QuantCategoryJson {
            base,
            objects: c.object_names().to_vec(),
            hom: c
                .objects()
                .flat_map(|a| c.objects().map(move |b| (a, b)))
                .map(|(a, b)| {
                    (
                        c.object_name(a).to_string(),
                        c.object_name(b).to_string(),
                        ValueJson::Text(render(c.hom(a, b))),
                    )
                })
                .collect(),
        }
    }

    pub fn from_finite(c: &QuantCategory<Quantale>) -> Self {
        let q = c.base();
        Self::with_values(c, BaseJson::for_quantale(q), |v| q.name(*v).to_string())
    }

    pub fn from_rplus(c: &QuantCategory<RPlus>) -> Self {
        Self::with_values(c, BaseJson::Named("rplus".into()), |v| v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantFunctorJson {
    pub dom: QuantCategoryJson,
    pub cod: QuantCategoryJson,
    pub objects: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub enum AnyQuantFunctor {
    Finite(QuantFunctor<Quantale>),
    RPlus(QuantFunctor<RPlus>),
}

fn quant_object_map(
    j: &BTreeMap<String, String>,
    dom: &[String],
    cod: &[String],
) -> Result<Vec<usize>, JsonError> {
    let dom_idx = index("object", dom.iter())?;
    let cod_idx = index("object", cod.iter())?;
    for k in j.keys() {
        look("object", &dom_idx, k)?;
    }
    dom.iter()
        .map(|a| {
            let b = j.get(a).ok_or_else(|| JsonError::UnmappedObject(a.clone()))?;
            look("object", &cod_idx, b)
        })
        .collect()
}

impl QuantFunctorJson {
    pub fn to_functor(&self, tolerance: f64) -> Result<AnyQuantFunctor, JsonError> {
        if self.dom.base != self.cod.base {
            return Err(JsonError::BaseMismatch);
        }
        let map = quant_object_map(&self.objects, &self.dom.objects, &self.cod.objects)?;
        match (self.dom.to_category(tolerance)?, self.cod.to_category(tolerance)?) {
            (AnyQuantCategory::Finite(a), AnyQuantCategory::Finite(b)) => Ok(AnyQuantFunctor::Finite(
                QuantFunctor::new(Arc::new(a), Arc::new(b), map)?,
            )),
            (AnyQuantCategory::RPlus(a), AnyQuantCategory::RPlus(b)) => Ok(AnyQuantFunctor::RPlus(
                QuantFunctor::new(Arc::new(a), Arc::new(b), map)?,
            )),
            _ => Err(JsonError::BaseMismatch),
        }
    }

    fn object_map<B: Base>(f: &QuantFunctor<B>) -> BTreeMap<String, String> {
        f.dom()
            .objects()
            .map(|a| (f.dom().object_name(a).to_string(), f.cod().object_name(f.obj(a)).to_string()))
            .collect()
    }

    pub fn from_finite(f: &QuantFunctor<Quantale>) -> Self {
        QuantFunctorJson {
            dom: QuantCategoryJson::from_finite(f.dom()),
            cod: QuantCategoryJson::from_finite(f.cod()),
            objects: Self::object_map(f),
        }
    }

    pub fn from_rplus(f: &QuantFunctor<RPlus>) -> Self {
        QuantFunctorJson {
            dom: QuantCategoryJson::from_rplus(f.dom()),
            cod: QuantCategoryJson::from_rplus(f.cod()),
            objects: Self::object_map(f),
        }
    }
}

// ---------------------------------------------------------------- monoids

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidJson {
    pub elements: Vec<String>,
    pub mul: Vec<(String, String, String)>,
    pub unit: String,
}

impl MonoidJson {
    pub fn to_monoid(&self) -> Result<Monoid, JsonError> {
        Ok(Monoid::from_triples(&self.elements, &self.mul, &self.unit)?)
    }

    pub fn from_monoid(m: &Monoid) -> Self {
        let names = unique(m.names().iter().cloned());
        let n = m.len();
        MonoidJson {
            mul: (0..n * n)
                .map(|i| (names[i / n].clone(), names[i % n].clone(), names[m.mul(i / n, i % n)].clone()))
                .collect(),
            unit: names[m.unit()].clone(),
            elements: names,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidHomJson {
    pub dom: MonoidJson,
    pub cod: MonoidJson,
    pub map: BTreeMap<String, String>,
}

impl MonoidHomJson {
    pub fn to_hom(&self) -> Result<MonoidHom, JsonError> {
        let (a, b) = (self.dom.to_monoid()?, self.cod.to_monoid()?);
        let dom_idx = index("element", a.names().iter())?;
        let cod_idx = index("element", b.names().iter())?;
        for k in self.map.keys() {
            look("element", &dom_idx, k)?;
        }
        let map = a
            .names()
            .iter()
            .map(|x| {
                let y = self.map.get(x).ok_or_else(|| JsonError::Unknown {
                    kind: "image of element",
                    id: x.clone(),
                })?;
                look("element", &cod_idx, y)
            })
            .collect::<Result<Vec<_>, JsonError>>()?;
        Ok(MonoidHom::new(Arc::new(a), Arc::new(b), map)?)
    }

    pub fn from_hom(f: &MonoidHom) -> Self {
        let dom = MonoidJson::from_monoid(f.dom());
        let cod = MonoidJson::from_monoid(f.cod());
        let map = (0..f.dom().len())
            .map(|a| (dom.elements[a].clone(), cod.elements[f.apply(a)].clone()))
            .collect();
        MonoidHomJson { dom, cod, map }
    }
}
