//! Finite ordinary categories with explicit composition tables, functors
//! between them, and finite monoids viewed as one-object categories.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub mod enriched;

pub use enriched::{map_values, two_to_set, two_to_set_functor, EnrichedError, QuantCategory, QuantFunctor};

pub type ObjId = usize;
pub type MorId = usize;

/// Bounds on category sizes accepted by an algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeCap {
    pub max_objects: usize,
    pub max_morphisms: usize,
}

impl SizeCap {
    /// Limit for dense composition tables.
    pub const VALIDATION: SizeCap = SizeCap {
        max_objects: 64,
        max_morphisms: 512,
    };
    /// Default limit for functor-category enumeration.
    pub const ENUMERATION: SizeCap = SizeCap {
        max_objects: 5,
        max_morphisms: 40,
    };

    pub fn admits(&self, c: &FinCategory) -> bool {
        c.num_objects() <= self.max_objects && c.num_morphisms() <= self.max_morphisms
    }

    pub fn check(&self, c: &FinCategory) -> Result<(), CapExceeded> {
        if self.admits(c) {
            Ok(())
        } else {
            Err(CapExceeded {
                objects: c.num_objects(),
                morphisms: c.num_morphisms(),
                cap: *self,
            })
        }
    }
}

impl Default for SizeCap {
    fn default() -> Self {
        SizeCap::ENUMERATION
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("size cap exceeded: {objects} objects / {morphisms} morphisms (cap {} / {})", cap.max_objects, cap.max_morphisms)]
pub struct CapExceeded {
    pub objects: usize,
    pub morphisms: usize,
    pub cap: SizeCap,
}

/// Malformed category data: dangling ids or tables of the wrong shape.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("duplicate id `{0}`")]
    Duplicate(String),
    #[error("object `{0}` has no identity")]
    MissingIdentity(String),
    #[error("composite {g} . {f} given for a non-composable pair")]
    NotComposable { g: String, f: String },
    #[error("conflicting composites for {g} . {f}")]
    ConflictingComposite { g: String, f: String },
    #[error("table has wrong length: {0}")]
    Shape(String),
}

/// First failing category axiom with witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryViolation {
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error("identity `{morphism}` of `{object}` is not an endomorphism of it")]
    IdentityShape { object: String, morphism: String },
    #[error("composite {g} . {f} is undefined")]
    MissingComposite { g: String, f: String },
    #[error("composite {g} . {f} = {gf} has the wrong source or target")]
    CompositeShape { g: String, f: String, gf: String },
    #[error("identity law fails for `{0}`")]
    Identity(String),
    #[error("associativity fails at ({h}, {g}, {f})")]
    Associativity { h: String, g: String, f: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("object map has length {got}, expected {expected}")]
    ObjectMapShape { got: usize, expected: usize },
    #[error("morphism map has length {got}, expected {expected}")]
    MorphismMapShape { got: usize, expected: usize },
    #[error("id out of range in functor data")]
    OutOfRange,
    #[error("`{0}` is not sent to a morphism between the images of its endpoints")]
    Endpoints(String),
    #[error("identity of `{0}` is not preserved")]
    Identity(String),
    #[error("composition {g} . {f} is not preserved")]
    Composition { g: String, f: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("multiplication table has wrong length")]
    Shape,
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    Duplicate(String),
    #[error("missing product {0} * {1}")]
    MissingProduct(String, String),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    Associativity(String, String, String),
    #[error("`{0}` is not a two-sided unit")]
    Unit(String),
    #[error("map is not a monoid homomorphism at ({0}, {1})")]
    NotHomomorphism(String, String),
    #[error("unit is not preserved")]
    UnitNotPreserved,
    #[error("map has wrong length or values out of range")]
    MapShape,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: ObjId,
    pub dst: ObjId,
}

/// A finite category with a dense composition table.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identity: Vec<MorId>,
    /// `compose[g * m + f]` is `g . f` when `dst(f) == src(g)`.
    compose: Vec<Option<MorId>>,
    homs: Vec<Vec<MorId>>,
    hom_pos: Vec<usize>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.objects)
            .field(
                "morphisms",
                &self
                    .morphisms
                    .iter()
                    .map(|m| format!("{}: {} -> {}", m.name, self.objects[m.src], self.objects[m.dst]))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl FinCategory {
    /// Builds a category from index data, checking structure only.
    /// Axioms are checked separately by [`FinCategory::validate`].
    pub fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<MorId>,
        compose: Vec<Option<MorId>>,
    ) -> Result<Self, StructureError> {
        let n = objects.len();
        let m = morphisms.len();
        if identity.len() != n {
            return Err(StructureError::Shape(format!(
                "{} identities for {} objects",
                identity.len(),
                n
            )));
        }
        if compose.len() != m * m {
            return Err(StructureError::Shape(format!(
                "composition table of length {} for {} morphisms",
                compose.len(),
                m
            )));
        }
        for mor in &morphisms {
            if mor.src >= n || mor.dst >= n {
                return Err(StructureError::UnknownObject(mor.name.clone()));
            }
        }
        if identity.iter().any(|&i| i >= m) {
            return Err(StructureError::Shape("identity out of range".into()));
        }
        for g in 0..m {
            for f in 0..m {
                if let Some(gf) = compose[g * m + f] {
                    if gf >= m {
                        return Err(StructureError::Shape("composite out of range".into()));
                    }
                    if morphisms[f].dst != morphisms[g].src {
                        return Err(StructureError::NotComposable {
                            g: morphisms[g].name.clone(),
                            f: morphisms[f].name.clone(),
                        });
                    }
                }
            }
        }
        let mut homs = vec![Vec::new(); n * n];
        let mut hom_pos = vec![0; m];
        for (id, mor) in morphisms.iter().enumerate() {
            let hom = &mut homs[mor.src * n + mor.dst];
            hom_pos[id] = hom.len();
            hom.push(id);
        }
        Ok(FinCategory {
            objects,
            morphisms,
            identity,
            compose,
            homs,
            hom_pos,
        })
    }

    /// Builds a category whose composition is given by a function on
    /// composable pairs.
    pub fn from_fn(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<MorId>,
        mut compose: impl FnMut(MorId, MorId) -> MorId,
    ) -> Result<Self, StructureError> {
        let m = morphisms.len();
        let mut table = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                if morphisms[f].dst == morphisms[g].src {
                    table[g * m + f] = Some(compose(g, f));
                }
            }
        }
        Self::from_parts(objects, morphisms, identity, table)
    }

    /// Checks the category axioms and the size cap, reporting the first failure.
    pub fn validate(&self, cap: SizeCap) -> Result<(), CategoryViolation> {
        cap.check(self)?;
        let m = self.num_morphisms();
        let name = |i: MorId| self.morphisms[i].name.clone();
        for (a, &id) in self.identity.iter().enumerate() {
            if self.morphisms[id].src != a || self.morphisms[id].dst != a {
                return Err(CategoryViolation::IdentityShape {
                    object: self.objects[a].clone(),
                    morphism: name(id),
                });
            }
        }
        for g in 0..m {
            for f in 0..m {
                if self.morphisms[f].dst != self.morphisms[g].src {
                    continue;
                }
                match self.compose[g * m + f] {
                    None => {
                        return Err(CategoryViolation::MissingComposite { g: name(g), f: name(f) })
                    }
                    Some(gf) => {
                        if self.morphisms[gf].src != self.morphisms[f].src
                            || self.morphisms[gf].dst != self.morphisms[g].dst
                        {
                            return Err(CategoryViolation::CompositeShape {
                                g: name(g),
                                f: name(f),
                                gf: name(gf),
                            });
                        }
                    }
                }
            }
        }
        for f in 0..m {
            let (s, d) = (self.src(f), self.dst(f));
            if self.comp(f, self.identity[s]) != f || self.comp(self.identity[d], f) != f {
                return Err(CategoryViolation::Identity(name(f)));
            }
        }
        for f in 0..m {
            for g in self.out_of(self.dst(f)) {
                let gf = self.comp(g, f);
                for h in self.out_of(self.dst(g)) {
                    if self.comp(h, gf) != self.comp(self.comp(h, g), f) {
                        return Err(CategoryViolation::Associativity {
                            h: name(h),
                            g: name(g),
                            f: name(f),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.objects.len()
    }

    pub fn morphisms(&self) -> std::ops::Range<MorId> {
        0..self.morphisms.len()
    }

    pub fn object_name(&self, a: ObjId) -> &str {
        &self.objects[a]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.morphisms[f].name
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<MorId> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn src(&self, f: MorId) -> ObjId {
        self.morphisms[f].src
    }

    pub fn dst(&self, f: MorId) -> ObjId {
        self.morphisms[f].dst
    }

    pub fn identity(&self, a: ObjId) -> MorId {
        self.identity[a]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identity[self.src(f)] == f
    }

    /// `g . f`, or `None` if not composable.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.compose[g * self.num_morphisms() + f]
    }

    /// `g . f` for a pair known to be composable.
    pub fn comp(&self, g: MorId, f: MorId) -> MorId {
        self.compose(g, f).unwrap_or_else(|| {
            panic!(
                "{} . {} is not composable",
                self.morphism_name(g),
                self.morphism_name(f)
            )
        })
    }

    /// Morphisms `a -> b`.
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.homs[a * self.num_objects() + b]
    }

    /// Position of `f` inside `hom(src f, dst f)`.
    pub fn hom_position(&self, f: MorId) -> usize {
        self.hom_pos[f]
    }

    pub fn out_of(&self, a: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.morphisms().filter(move |&f| self.src(f) == a)
    }

    pub fn idempotents(&self, a: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.hom(a, a)
            .iter()
            .copied()
            .filter(move |&e| self.comp(e, e) == e)
    }

    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let (s, d) = (self.src(f), self.dst(f));
        self.hom(d, s).iter().copied().find(|&g| {
            self.comp(g, f) == self.identity(s) && self.comp(f, g) == self.identity(d)
        })
    }

    /// An isomorphism `a -> b` if one exists.
    pub fn isomorphism(&self, a: ObjId, b: ObjId) -> Option<MorId> {
        self.hom(a, b)
            .iter()
            .copied()
            .find(|&f| self.inverse(f).is_some())
    }

    /// At most one morphism between any ordered pair of objects.
    pub fn is_thin(&self) -> bool {
        self.homs.iter().all(|h| h.len() <= 1)
    }

    pub fn is_groupoid(&self) -> bool {
        self.morphisms().all(|f| self.inverse(f).is_some())
    }

    pub fn is_discrete(&self) -> bool {
        self.morphisms().all(|f| self.is_identity(f))
    }

    /// The empty category.
    pub fn empty() -> Self {
        Self::discrete(&[] as &[&str])
    }

    pub fn terminal() -> Self {
        Self::discrete(&["*"])
    }

    pub fn discrete<S: AsRef<str>>(names: &[S]) -> Self {
        let objects: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let morphisms = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism {
                name: format!("1_{o}"),
                src: i,
                dst: i,
            })
            .collect();
        let identity = (0..objects.len()).collect();
        Self::from_fn(objects, morphisms, identity, |g, _| g).expect("discrete category")
    }

    /// A preorder on named objects as a thin category; `leq(a, b)` gives the
    /// morphism `a -> b`. The relation must be reflexive and transitive.
    pub fn from_preorder<S: AsRef<str>>(names: &[S], leq: impl Fn(usize, usize) -> bool) -> Self {
        let n = names.len();
        let objects: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        let mut identity = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if a == b || leq(a, b) {
                    index.insert((a, b), morphisms.len());
                    if a == b {
                        identity[a] = morphisms.len();
                    }
                    let name = if a == b {
                        format!("1_{}", objects[a])
                    } else {
                        format!("{}<={}", objects[a], objects[b])
                    };
                    morphisms.push(Morphism { name, src: a, dst: b });
                }
            }
        }
        let pairs: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.src, m.dst)).collect();
        Self::from_fn(objects, morphisms, identity, |g, f| {
            index[&(pairs[f].0, pairs[g].1)]
        })
        .expect("preorder category")
    }

    /// The walking arrow `bot -> top`.
    pub fn walking_arrow() -> Self {
        Self::from_preorder(&["bot", "top"], |a, b| a <= b)
    }

    /// The indiscrete (chaotic) category: exactly one morphism between any two objects.
    pub fn indiscrete<S: AsRef<str>>(names: &[S]) -> Self {
        Self::from_preorder(names, |_, _| true)
    }

    pub fn opposite(&self) -> FinCategory {
        let m = self.num_morphisms();
        let morphisms = self
            .morphisms
            .iter()
            .map(|f| Morphism {
                name: f.name.clone(),
                src: f.dst,
                dst: f.src,
            })
            .collect();
        let mut table = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                // g .op f = f . g
                table[g * m + f] = self.compose(f, g);
            }
        }
        FinCategory::from_parts(self.objects.clone(), morphisms, self.identity.clone(), table)
            .expect("opposite of a well-formed category")
    }

    /// The full subcategory on `objects` (in the given order).
    pub fn full_subcategory(&self, objects: &[ObjId]) -> Subcategory {
        let mut mors = Vec::new();
        for &a in objects {
            for &b in objects {
                mors.extend_from_slice(self.hom(a, b));
            }
        }
        self.subcategory_on(objects, mors)
    }

    /// The subcategory on `objects` generated by `generators` (closed under
    /// composition, identities added).
    pub fn generated_subcategory(&self, objects: &[ObjId], generators: &[MorId]) -> Subcategory {
        let mut present = vec![false; self.num_morphisms()];
        for &a in objects {
            present[self.identity(a)] = true;
        }
        for &g in generators {
            present[g] = true;
        }
        loop {
            let mut changed = false;
            for g in self.morphisms() {
                if !present[g] {
                    continue;
                }
                for f in self.morphisms() {
                    if present[f] {
                        if let Some(gf) = self.compose(g, f) {
                            if !present[gf] {
                                present[gf] = true;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mors: Vec<MorId> = self.morphisms().filter(|&f| present[f]).collect();
        self.subcategory_on(objects, mors)
    }

    fn subcategory_on(&self, objects: &[ObjId], mut mors: Vec<MorId>) -> Subcategory {
        mors.sort_unstable();
        let obj_index: HashMap<ObjId, usize> =
            objects.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mor_index: HashMap<MorId, usize> =
            mors.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let category = FinCategory::from_fn(
            objects.iter().map(|&a| self.objects[a].clone()).collect(),
            mors.iter()
                .map(|&f| Morphism {
                    name: self.morphisms[f].name.clone(),
                    src: obj_index[&self.src(f)],
                    dst: obj_index[&self.dst(f)],
                })
                .collect(),
            objects.iter().map(|&a| mor_index[&self.identity(a)]).collect(),
            |g, f| mor_index[&self.comp(mors[g], mors[f])],
        )
        .expect("subcategory of a well-formed category");
        Subcategory {
            category,
            objects: objects.to_vec(),
            morphisms: mors,
        }
    }
}

/// A subcategory together with the ids its objects and morphisms had in
/// the ambient category.
#[derive(Debug, Clone)]
pub struct Subcategory {
    pub category: FinCategory,
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
}

/// A functor between finite categories.
#[derive(Clone, PartialEq, Eq)]
pub struct FinFunctor {
    dom: Arc<FinCategory>,
    cod: Arc<FinCategory>,
    obj_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

impl fmt::Debug for FinFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinFunctor")
            .field("dom", &self.dom)
            .field("cod", &self.cod)
            .field("obj_map", &self.obj_map)
            .field("mor_map", &self.mor_map)
            .finish()
    }
}

impl FinFunctor {
    /// Builds and fully checks a functor.
    pub fn new(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<Self, FunctorError> {
        let f = FinFunctor {
            dom,
            cod,
            obj_map,
            mor_map,
        };
        f.validate()?;
        Ok(f)
    }

    /// Builds a functor from data already known to be functorial.
    pub(crate) fn new_unchecked(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Self {
        let f = FinFunctor {
            dom,
            cod,
            obj_map,
            mor_map,
        };
        debug_assert_eq!(f.validate(), Ok(()));
        f
    }

    pub fn validate(&self) -> Result<(), FunctorError> {
        let (a, b) = (&*self.dom, &*self.cod);
        if self.obj_map.len() != a.num_objects() {
            return Err(FunctorError::ObjectMapShape {
                got: self.obj_map.len(),
                expected: a.num_objects(),
            });
        }
        if self.mor_map.len() != a.num_morphisms() {
            return Err(FunctorError::MorphismMapShape {
                got: self.mor_map.len(),
                expected: a.num_morphisms(),
            });
        }
        if self.obj_map.iter().any(|&x| x >= b.num_objects())
            || self.mor_map.iter().any(|&x| x >= b.num_morphisms())
        {
            return Err(FunctorError::OutOfRange);
        }
        for f in a.morphisms() {
            let image = self.mor_map[f];
            if b.src(image) != self.obj_map[a.src(f)] || b.dst(image) != self.obj_map[a.dst(f)] {
                return Err(FunctorError::Endpoints(a.morphism_name(f).to_string()));
            }
        }
        for x in a.objects() {
            if self.mor_map[a.identity(x)] != b.identity(self.obj_map[x]) {
                return Err(FunctorError::Identity(a.object_name(x).to_string()));
            }
        }
        for g in a.morphisms() {
            for f in a.morphisms() {
                if let Some(gf) = a.compose(g, f) {
                    if b.comp(self.mor_map[g], self.mor_map[f]) != self.mor_map[gf] {
                        return Err(FunctorError::Composition {
                            g: a.morphism_name(g).to_string(),
                            f: a.morphism_name(f).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let obj_map = c.objects().collect();
        let mor_map = c.morphisms().collect();
        FinFunctor {
            dom: c.clone(),
            cod: c,
            obj_map,
            mor_map,
        }
    }

    pub fn dom(&self) -> &Arc<FinCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCategory> {
        &self.cod
    }

    pub fn obj(&self, a: ObjId) -> ObjId {
        self.obj_map[a]
    }

    pub fn mor(&self, f: MorId) -> MorId {
        self.mor_map[f]
    }

    pub fn obj_map(&self) -> &[ObjId] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[MorId] {
        &self.mor_map
    }

    /// `other . self`.
    pub fn then(&self, other: &FinFunctor) -> FinFunctor {
        assert!(
            *self.cod == *other.dom,
            "functors are not composable: codomain and domain differ"
        );
        FinFunctor {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            obj_map: self.obj_map.iter().map(|&x| other.obj(x)).collect(),
            mor_map: self.mor_map.iter().map(|&f| other.mor(f)).collect(),
        }
    }

    pub fn opposite(&self) -> FinFunctor {
        FinFunctor {
            dom: Arc::new(self.dom.opposite()),
            cod: Arc::new(self.cod.opposite()),
            obj_map: self.obj_map.clone(),
            mor_map: self.mor_map.clone(),
        }
    }

    /// Rebinds the functor to categories equal to its own (used when
    /// comparing functors built from separately allocated categories).
    pub fn with_categories(&self, dom: Arc<FinCategory>, cod: Arc<FinCategory>) -> FinFunctor {
        assert!(*dom == *self.dom && *cod == *self.cod);
        FinFunctor {
            dom,
            cod,
            obj_map: self.obj_map.clone(),
            mor_map: self.mor_map.clone(),
        }
    }

    /// Every codomain object is isomorphic to one in the image.
    pub fn is_essentially_surjective(&self) -> bool {
        self.cod.objects().all(|b| {
            self.obj_map
                .iter()
                .any(|&fa| fa == b || self.cod.isomorphism(fa, b).is_some())
        })
    }
}

/// The coproduct of finite categories with its injections. Object and
/// morphism names are prefixed by the summand index.
pub fn disjoint_union(summands: &[Arc<FinCategory>]) -> (Arc<FinCategory>, Vec<FinFunctor>) {
    let mut objects = Vec::new();
    let mut morphisms = Vec::new();
    let mut identity = Vec::new();
    let mut obj_offsets = Vec::new();
    let mut mor_offsets = Vec::new();
    for (i, c) in summands.iter().enumerate() {
        let (oo, mo) = (objects.len(), morphisms.len());
        obj_offsets.push(oo);
        mor_offsets.push(mo);
        objects.extend(c.object_names().iter().map(|o| format!("{i}.{o}")));
        morphisms.extend(c.morphisms().map(|f| Morphism {
            name: format!("{i}.{}", c.morphism_name(f)),
            src: c.src(f) + oo,
            dst: c.dst(f) + oo,
        }));
        identity.extend(c.objects().map(|a| c.identity(a) + mo));
    }
    let owner: Vec<usize> = summands
        .iter()
        .enumerate()
        .flat_map(|(i, c)| std::iter::repeat(i).take(c.num_morphisms()))
        .collect();
    let union = FinCategory::from_fn(objects, morphisms, identity, |g, f| {
        let i = owner[g];
        let off = mor_offsets[i];
        summands[i].comp(g - off, f - off) + off
    })
    .expect("coproduct of well-formed categories");
    let union = Arc::new(union);
    let injections = summands
        .iter()
        .enumerate()
        .map(|(i, c)| {
            FinFunctor::new_unchecked(
                c.clone(),
                union.clone(),
                c.objects().map(|a| a + obj_offsets[i]).collect(),
                c.morphisms().map(|f| f + mor_offsets[i]).collect(),
            )
        })
        .collect();
    (union, injections)
}

/// The coproduct of functors `F_i: A_i -> B_i` as a functor between the
/// coproducts of domains and codomains.
pub fn disjoint_union_functor(parts: &[FinFunctor]) -> FinFunctor {
    let doms: Vec<_> = parts.iter().map(|p| p.dom().clone()).collect();
    let cods: Vec<_> = parts.iter().map(|p| p.cod().clone()).collect();
    let (dom, dom_inj) = disjoint_union(&doms);
    let (cod, cod_inj) = disjoint_union(&cods);
    let mut obj_map = vec![0; dom.num_objects()];
    let mut mor_map = vec![0; dom.num_morphisms()];
    for (i, p) in parts.iter().enumerate() {
        for a in p.dom().objects() {
            obj_map[dom_inj[i].obj(a)] = cod_inj[i].obj(p.obj(a));
        }
        for f in p.dom().morphisms() {
            mor_map[dom_inj[i].mor(f)] = cod_inj[i].mor(p.mor(f));
        }
    }
    FinFunctor::new_unchecked(dom, cod, obj_map, mor_map)
}

/// A finite monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monoid {
    names: Vec<String>,
    mul: Vec<usize>,
    unit: usize,
}

impl Monoid {
    pub fn new(names: Vec<String>, mul: Vec<usize>, unit: usize) -> Result<Self, MonoidError> {
        let n = names.len();
        if mul.len() != n * n || unit >= n || mul.iter().any(|&x| x >= n) {
            return Err(MonoidError::Shape);
        }
        let m = Monoid { names, mul, unit };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(names: Vec<String>, mul: Vec<usize>, unit: usize) -> Self {
        Monoid { names, mul, unit }
    }

    /// Builds a monoid from `(a, b, ab)` triples keyed by element name.
    pub fn from_triples(
        elements: &[String],
        triples: &[(String, String, String)],
        unit: &str,
    ) -> Result<Self, MonoidError> {
        let n = elements.len();
        let mut ids = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if ids.insert(e.as_str(), i).is_some() {
                return Err(MonoidError::Duplicate(e.clone()));
            }
        }
        let look = |s: &str| {
            ids.get(s)
                .copied()
                .ok_or_else(|| MonoidError::UnknownElement(s.to_string()))
        };
        let mut mul = vec![None; n * n];
        for (a, b, c) in triples {
            mul[look(a)? * n + look(b)?] = Some(look(c)?);
        }
        let mul = mul
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    MonoidError::MissingProduct(elements[i / n].clone(), elements[i % n].clone())
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Monoid::new(elements.to_vec(), mul, look(unit)?)
    }

    pub fn validate(&self) -> Result<(), MonoidError> {
        let n = self.len();
        for a in 0..n {
            if self.mul(self.unit, a) != a || self.mul(a, self.unit) != a {
                return Err(MonoidError::Unit(self.names[self.unit].clone()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(MonoidError::Associativity(
                            self.names[a].clone(),
                            self.names[b].clone(),
                            self.names[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trivial() -> Self {
        Monoid::new_unchecked(vec!["1".into()], vec![0], 0)
    }

    /// The cyclic group `Z_n`, elements `0..n` named by their residue.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let names = (0..n).map(|i| i.to_string()).collect();
        let mul = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Monoid::new_unchecked(names, mul, 0)
    }

    /// `{1, e}` with `e . e = e`.
    pub fn idempotent_pair() -> Self {
        Monoid::new_unchecked(vec!["1".into(), "e".into()], vec![0, 1, 1, 1], 0)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.len() + b]
    }

    pub fn table(&self) -> &[usize] {
        &self.mul
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.len()).find(|&b| self.mul(a, b) == self.unit && self.mul(b, a) == self.unit)
    }

    pub fn is_group(&self) -> bool {
        (0..self.len()).all(|a| self.inverse(a).is_some())
    }

    /// The monoid with multiplication `a * b := b a`.
    pub fn reversed(&self) -> Monoid {
        let n = self.len();
        let mul = (0..n * n).map(|i| self.mul(i % n, i / n)).collect();
        Monoid::new_unchecked(self.names.clone(), mul, self.unit)
    }
}

/// A monoid homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidHom {
    dom: Arc<Monoid>,
    cod: Arc<Monoid>,
    map: Vec<usize>,
}

impl MonoidHom {
    pub fn new(dom: Arc<Monoid>, cod: Arc<Monoid>, map: Vec<usize>) -> Result<Self, MonoidError> {
        if map.len() != dom.len() || map.iter().any(|&x| x >= cod.len()) {
            return Err(MonoidError::MapShape);
        }
        if map[dom.unit()] != cod.unit() {
            return Err(MonoidError::UnitNotPreserved);
        }
        for a in 0..dom.len() {
            for b in 0..dom.len() {
                if map[dom.mul(a, b)] != cod.mul(map[a], map[b]) {
                    return Err(MonoidError::NotHomomorphism(
                        dom.name(a).to_string(),
                        dom.name(b).to_string(),
                    ));
                }
            }
        }
        Ok(MonoidHom { dom, cod, map })
    }

    pub fn dom(&self) -> &Arc<Monoid> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Monoid> {
        &self.cod
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for &b in &self.map {
            hit[b] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn image(&self) -> Vec<usize> {
        let mut im = self.map.clone();
        im.sort_unstable();
        im.dedup();
        im
    }
}

/// All monoid homomorphisms `dom -> cod`, in lexicographic order of their
/// value tables.
pub fn monoid_homs(dom: &Monoid, cod: &Monoid) -> Vec<Vec<usize>> {
    fn extend(dom: &Monoid, cod: &Monoid, map: &mut Vec<Option<usize>>, next: usize, out: &mut Vec<Vec<usize>>) {
        if next == dom.len() {
            out.push(map.iter().map(|v| v.unwrap()).collect());
            return;
        }
        if map[next].is_some() {
            return extend(dom, cod, map, next + 1, out);
        }
        for v in 0..cod.len() {
            map[next] = Some(v);
            let consistent = (0..=next).all(|a| {
                (0..=next).all(|b| match (map[a], map[b], map[dom.mul(a, b)]) {
                    (Some(x), Some(y), Some(z)) => cod.mul(x, y) == z,
                    _ => true,
                })
            });
            if consistent {
                extend(dom, cod, map, next + 1, out);
            }
        }
        map[next] = None;
    }
    let mut map = vec![None; dom.len()];
    map[dom.unit()] = Some(cod.unit());
    let mut out = Vec::new();
    extend(dom, cod, &mut map, 0, &mut out);
    out
}

/// The one-object category whose endomorphism monoid is `m`.
pub fn deloop(m: &Monoid) -> FinCategory {
    let morphisms = m
        .names()
        .iter()
        .map(|n| Morphism {
            name: n.clone(),
            src: 0,
            dst: 0,
        })
        .collect();
    FinCategory::from_fn(vec!["*".into()], morphisms, vec![m.unit()], |g, f| m.mul(g, f))
        .expect("delooping of a monoid")
}

pub fn deloop_hom(f: &MonoidHom) -> FinFunctor {
    FinFunctor::new_unchecked(
        Arc::new(deloop(f.dom())),
        Arc::new(deloop(f.cod())),
        vec![0],
        f.map().to_vec(),
    )
}

/// The endomorphism monoid of `a`, elements named after the morphisms.
pub fn endomorphism_monoid(c: &FinCategory, a: ObjId) -> Monoid {
    let ends = c.hom(a, a);
    let names = ends.iter().map(|&f| c.morphism_name(f).to_string()).collect();
    let n = ends.len();
    let mul = (0..n * n)
        .map(|i| c.hom_position(c.comp(ends[i / n], ends[i % n])))
        .collect();
    Monoid::new_unchecked(names, mul, c.hom_position(c.identity(a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FinCategory {
        deloop(&Monoid::cyclic(2))
    }

    #[test]
    fn delooping_z2_validates() {
        let c = z2();
        assert_eq!(c.validate(SizeCap::VALIDATION), Ok(()));
        assert_eq!(c.num_objects(), 1);
        assert_eq!(c.num_morphisms(), 2);
        let s = c.morphism_by_name("1").unwrap();
        assert_eq!(c.comp(s, s), c.identity(0));
    }

    #[test]
    fn walking_arrow_validates() {
        let c = FinCategory::walking_arrow();
        assert_eq!(c.validate(SizeCap::VALIDATION), Ok(()));
        assert_eq!((c.num_objects(), c.num_morphisms()), (2, 3));
        assert!(c.is_thin());
    }

    #[test]
    fn trivial_monoid_deloops_to_terminal() {
        let c = deloop(&Monoid::trivial());
        assert_eq!((c.num_objects(), c.num_morphisms()), (1, 1));
        assert!(c.is_discrete());
    }

    #[test]
    fn idempotent_absorbing_monoid_deloops() {
        // {1, e, 0}: e e = e, 0 absorbing
        let names: Vec<String> = ["1", "e", "0"].iter().map(|s| s.to_string()).collect();
        let triples: Vec<(String, String, String)> = [
            ("1", "1", "1"), ("1", "e", "e"), ("1", "0", "0"),
            ("e", "1", "e"), ("e", "e", "e"), ("e", "0", "0"),
            ("0", "1", "0"), ("0", "e", "0"), ("0", "0", "0"),
        ]
        .iter()
        .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
        .collect();
        let m = Monoid::from_triples(&names, &triples, "1").unwrap();
        let c = deloop(&m);
        assert_eq!(c.validate(SizeCap::VALIDATION), Ok(()));
        assert_eq!(c.num_morphisms(), 3);
        assert_eq!(endomorphism_monoid(&c, 0), m);
    }

    #[test]
    fn broken_composition_is_reported() {
        let objects = vec!["x".to_string()];
        let morphisms = vec![
            Morphism { name: "1".into(), src: 0, dst: 0 },
            Morphism { name: "s".into(), src: 0, dst: 0 },
        ];
        // s . s undefined
        let c = FinCategory::from_parts(objects, morphisms, vec![0], vec![Some(0), Some(1), Some(1), None]).unwrap();
        assert!(matches!(
            c.validate(SizeCap::VALIDATION),
            Err(CategoryViolation::MissingComposite { .. })
        ));
    }

    #[test]
    fn opposite_is_an_involution() {
        let c = FinCategory::walking_arrow();
        let op = c.opposite();
        let f = c.morphism_by_name("bot<=top").unwrap();
        assert_eq!((op.src(f), op.dst(f)), (c.dst(f), c.src(f)));
        assert_eq!(op.opposite(), c);
    }

    #[test]
    fn opposite_of_delooped_group_reverses_multiplication() {
        let names: Vec<String> = (0..6).map(|i| format!("g{i}")).collect();
        // S3 as permutations of {0,1,2}
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mul = (0..36)
            .map(|i| {
                let (a, b) = (perms[i / 6], perms[i % 6]);
                idx([a[b[0]], a[b[1]], a[b[2]]])
            })
            .collect();
        let s3 = Monoid::new(names, mul, 0).unwrap();
        let op = deloop(&s3).opposite();
        assert_eq!(op, deloop(&s3.reversed()));
        assert_ne!(op, deloop(&s3));
    }

    #[test]
    fn disjoint_union_of_terminals_is_discrete() {
        let t = Arc::new(FinCategory::terminal());
        let (u, inj) = disjoint_union(&[t.clone(), t]);
        assert_eq!(u.num_objects(), 2);
        assert!(u.is_discrete());
        assert_eq!(inj.len(), 2);
        for i in &inj {
            assert_eq!(i.validate(), Ok(()));
        }
    }

    #[test]
    fn functor_validation_catches_composition() {
        let z2 = Arc::new(z2());
        let z4 = Arc::new(deloop(&Monoid::cyclic(4)));
        // 1 -> 1 in Z4 does not preserve 1 + 1 = 0
        let err = FinFunctor::new(z2, z4, vec![0], vec![0, 1]).unwrap_err();
        assert!(matches!(err, FunctorError::Composition { .. }));
    }

    #[test]
    fn monoid_homs_z4_to_z2() {
        let homs = monoid_homs(&Monoid::cyclic(4), &Monoid::cyclic(2));
        assert_eq!(homs, vec![vec![0, 0, 0, 0], vec![0, 1, 0, 1]]);
    }

    #[test]
    fn generated_subcategory_closes_composition() {
        let c = deloop(&Monoid::cyclic(3));
        let sub = c.generated_subcategory(&[0], &[1]);
        assert_eq!(sub.category.num_morphisms(), 3);
        let only_id = c.generated_subcategory(&[0], &[]);
        assert_eq!(only_id.category.num_morphisms(), 1);
    }
}
