//! Profunctors between finite categories and the decisions built on the
//! counit of `F_* -| F^*`.
//!
//! A [`SetProfunctor`] `phi: A -/-> B` is a functor `B^op x A -> Set`. Its
//! *domain* `A` acts covariantly and its *codomain* `B` contravariantly, so
//! elements of `phi(b, a)` behave like heteromorphisms `b -> a`. Composition
//! is the coend `(psi . phi)(c, a) = int^b phi(b, a) x psi(c, b)`, computed as
//! a quotient of a finite disjoint union by union-find over the zig-zag
//! generators.

mod adjoint;
mod lax_epi;

use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::base::Base;
use crate::fincat::{CapExceeded, FinCategory, FinFunctor, MorId, Morphism, ObjId, QuantCategory, QuantFunctor};

pub use adjoint::{find_left_adjoint, find_right_adjoint, is_dense, Adjunction};
pub use lax_epi::{
    coend_collage, doubled_image_collage, laxepi_check, LaxEpiFailure, LaxEpiWitness, DEFAULT_FUNCTOR_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfError {
    #[error("profunctors do not share the middle category")]
    Mismatch,
    #[error("action law fails: {0}")]
    ActionLaw(String),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error("more than {0} functors to enumerate")]
    TooManyFunctors(usize),
    #[error("split-full witness is invalid at ({a}, {a2})")]
    InvalidWitness { a: String, a2: String },
    #[error("object out of range")]
    UnknownObject,
}

/// A decision with a certificate on the negative side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

/// A set-valued profunctor `dom -/-> cod`, i.e. a functor `cod^op x dom -> Set`.
/// Elements of each set are `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetProfunctor {
    dom: Arc<FinCategory>,
    cod: Arc<FinCategory>,
    sizes: Vec<usize>,
    /// `[h * |cod| + b]`: `phi(b, src h) -> phi(b, dst h)`.
    dom_action: Vec<Vec<usize>>,
    /// `[m * |dom| + a]`: `phi(dst m, a) -> phi(src m, a)`.
    cod_action: Vec<Vec<usize>>,
}

impl SetProfunctor {
    fn from_fns(
        dom: Arc<FinCategory>,
        cod: Arc<FinCategory>,
        size: impl Fn(ObjId, ObjId) -> usize,
        dom_act: impl Fn(MorId, ObjId, usize) -> usize,
        cod_act: impl Fn(MorId, ObjId, usize) -> usize,
    ) -> Self {
        let (na, nb) = (dom.num_objects(), cod.num_objects());
        let sizes: Vec<usize> = (0..nb * na).map(|i| size(i / na, i % na)).collect();
        let dom_action = (0..dom.num_morphisms() * nb)
            .map(|i| {
                let (h, b) = (i / nb, i % nb);
                (0..sizes[b * na + dom.src(h)])
                    .map(|x| dom_act(h, b, x))
                    .collect()
            })
            .collect();
        let cod_action = (0..cod.num_morphisms() * na)
            .map(|i| {
                let (m, a) = (i / na, i % na);
                (0..sizes[cod.dst(m) * na + a])
                    .map(|x| cod_act(m, a, x))
                    .collect()
            })
            .collect();
        SetProfunctor {
            dom,
            cod,
            sizes,
            dom_action,
            cod_action,
        }
    }

    pub fn dom(&self) -> &Arc<FinCategory> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCategory> {
        &self.cod
    }

    /// `|phi(b, a)|` for `b` in the codomain and `a` in the domain.
    pub fn size(&self, b: ObjId, a: ObjId) -> usize {
        self.sizes[b * self.dom.num_objects() + a]
    }

    /// `h . x` for `h: a -> a'` in the domain.
    pub fn act_dom(&self, h: MorId, b: ObjId, x: usize) -> usize {
        self.dom_action[h * self.cod.num_objects() + b][x]
    }

    /// `x . m` for `m: b' -> b` in the codomain.
    pub fn act_cod(&self, m: MorId, a: ObjId, x: usize) -> usize {
        self.cod_action[m * self.dom.num_objects() + a][x]
    }

    /// Checks unitality, associativity and compatibility of the two actions.
    pub fn validate(&self) -> Result<(), ProfError> {
        let (a_cat, b_cat) = (&*self.dom, &*self.cod);
        for b in b_cat.objects() {
            for a in a_cat.objects() {
                for x in 0..self.size(b, a) {
                    if self.act_dom(a_cat.identity(a), b, x) != x
                        || self.act_cod(b_cat.identity(b), a, x) != x
                    {
                        return Err(ProfError::ActionLaw(format!(
                            "identity acts non-trivially on element {x} at ({}, {})",
                            b_cat.object_name(b),
                            a_cat.object_name(a)
                        )));
                    }
                }
            }
        }
        for g in a_cat.morphisms() {
            for f in a_cat.morphisms() {
                let Some(gf) = a_cat.compose(g, f) else { continue };
                for b in b_cat.objects() {
                    for x in 0..self.size(b, a_cat.src(f)) {
                        if self.act_dom(gf, b, x) != self.act_dom(g, b, self.act_dom(f, b, x)) {
                            return Err(ProfError::ActionLaw(format!(
                                "domain action not associative at {} . {}",
                                a_cat.morphism_name(g),
                                a_cat.morphism_name(f)
                            )));
                        }
                    }
                }
            }
        }
        for g in b_cat.morphisms() {
            for f in b_cat.morphisms() {
                let Some(gf) = b_cat.compose(g, f) else { continue };
                for a in a_cat.objects() {
                    for x in 0..self.size(b_cat.dst(g), a) {
                        // x . (g f) = (x . g) . f
                        if self.act_cod(gf, a, x) != self.act_cod(f, a, self.act_cod(g, a, x)) {
                            return Err(ProfError::ActionLaw(format!(
                                "codomain action not associative at {} . {}",
                                b_cat.morphism_name(g),
                                b_cat.morphism_name(f)
                            )));
                        }
                    }
                }
            }
        }
        for h in a_cat.morphisms() {
            for m in b_cat.morphisms() {
                for x in 0..self.size(b_cat.dst(m), a_cat.src(h)) {
                    let left = self.act_cod(m, a_cat.dst(h), self.act_dom(h, b_cat.dst(m), x));
                    let right = self.act_dom(h, b_cat.src(m), self.act_cod(m, a_cat.src(h), x));
                    if left != right {
                        return Err(ProfError::ActionLaw(format!(
                            "actions of {} and {} do not commute",
                            a_cat.morphism_name(h),
                            b_cat.morphism_name(m)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The collage (cograph): objects of `cod` then of `dom`, with the
    /// elements of `phi(b, a)` as extra morphisms `b -> a`. Returns the
    /// category and the inclusions of `cod` and `dom`.
    pub fn collage(&self) -> (Arc<FinCategory>, FinFunctor, FinFunctor) {
        let (a_cat, b_cat) = (&*self.dom, &*self.cod);
        let nb = b_cat.num_objects();
        let (mb, ma) = (b_cat.num_morphisms(), a_cat.num_morphisms());
        let mut objects: Vec<String> = b_cat.object_names().iter().map(|o| format!("0.{o}")).collect();
        objects.extend(a_cat.object_names().iter().map(|o| format!("1.{o}")));
        let mut morphisms: Vec<Morphism> = b_cat
            .morphisms()
            .map(|m| Morphism {
                name: format!("0.{}", b_cat.morphism_name(m)),
                src: b_cat.src(m),
                dst: b_cat.dst(m),
            })
            .collect();
        morphisms.extend(a_cat.morphisms().map(|h| Morphism {
            name: format!("1.{}", a_cat.morphism_name(h)),
            src: a_cat.src(h) + nb,
            dst: a_cat.dst(h) + nb,
        }));
        let mut hetero = HashMap::new();
        for b in b_cat.objects() {
            for a in a_cat.objects() {
                for x in 0..self.size(b, a) {
                    hetero.insert((b, a, x), morphisms.len());
                    morphisms.push(Morphism {
                        name: format!("<{},{},{x}>", b_cat.object_name(b), a_cat.object_name(a)),
                        src: b,
                        dst: a + nb,
                    });
                }
            }
        }
        let mut kind = vec![(0usize, 0usize, 0usize, 0usize); morphisms.len()];
        for (&(b, a, x), &id) in &hetero {
            kind[id] = (2, b, a, x);
        }
        for m in 0..mb {
            kind[m] = (0, m, 0, 0);
        }
        for h in 0..ma {
            kind[mb + h] = (1, h, 0, 0);
        }
        let mut identity: Vec<MorId> = b_cat.objects().map(|b| b_cat.identity(b)).collect();
        identity.extend(a_cat.objects().map(|a| a_cat.identity(a) + mb));
        let collage = FinCategory::from_fn(objects, morphisms, identity, |g, f| match (kind[g], kind[f]) {
            ((0, g, _, _), (0, f, _, _)) => b_cat.comp(g, f),
            ((1, g, _, _), (1, f, _, _)) => a_cat.comp(g, f) + mb,
            ((1, h, _, _), (2, b, _, x)) => hetero[&(b, a_cat.dst(h), self.act_dom(h, b, x))],
            ((2, _, a, x), (0, m, _, _)) => hetero[&(b_cat.src(m), a, self.act_cod(m, a, x))],
            _ => unreachable!("no morphisms from the domain part to the codomain part"),
        })
        .expect("collage of a profunctor");
        let collage = Arc::new(collage);
        let i_cod = FinFunctor::new_unchecked(
            self.cod.clone(),
            collage.clone(),
            b_cat.objects().collect(),
            b_cat.morphisms().collect(),
        );
        let i_dom = FinFunctor::new_unchecked(
            self.dom.clone(),
            collage.clone(),
            a_cat.objects().map(|a| a + nb).collect(),
            a_cat.morphisms().map(|h| h + mb).collect(),
        );
        (collage, i_cod, i_dom)
    }
}

/// `C(-, =)` as a profunctor `C -/-> C`: elements of `hom(b, a)` are the
/// morphisms `b -> a` in hom-set order.
pub fn hom_profunctor(c: &Arc<FinCategory>) -> SetProfunctor {
    let cat = c.clone();
    let (c1, c2) = (cat.clone(), cat.clone());
    SetProfunctor::from_fns(
        cat.clone(),
        cat.clone(),
        |b, a| cat.hom(b, a).len(),
        move |h, b, x| {
            let f = c1.hom(b, c1.src(h))[x];
            c1.hom_position(c1.comp(h, f))
        },
        move |m, a, x| {
            let f = c2.hom(c2.dst(m), a)[x];
            c2.hom_position(c2.comp(f, m))
        },
    )
}

/// `F_*: A -/-> B`, `F_*(b, a) = B(b, Fa)`.
pub fn lower_star(f: &FinFunctor) -> SetProfunctor {
    let b_cat = f.cod().clone();
    SetProfunctor::from_fns(
        f.dom().clone(),
        f.cod().clone(),
        |b, a| b_cat.hom(b, f.obj(a)).len(),
        |h, b, x| {
            let k = b_cat.hom(b, f.obj(f.dom().src(h)))[x];
            b_cat.hom_position(b_cat.comp(f.mor(h), k))
        },
        |m, a, x| {
            let k = b_cat.hom(b_cat.dst(m), f.obj(a))[x];
            b_cat.hom_position(b_cat.comp(k, m))
        },
    )
}

/// `F^*: B -/-> A`, `F^*(a, b) = B(Fa, b)`.
pub fn upper_star(f: &FinFunctor) -> SetProfunctor {
    let b_cat = f.cod().clone();
    let a_cat = f.dom().clone();
    SetProfunctor::from_fns(
        f.cod().clone(),
        f.dom().clone(),
        |a, b| b_cat.hom(f.obj(a), b).len(),
        |m, a, x| {
            let g = b_cat.hom(f.obj(a), b_cat.src(m))[x];
            b_cat.hom_position(b_cat.comp(m, g))
        },
        |h, b, x| {
            let g = b_cat.hom(f.obj(a_cat.dst(h)), b)[x];
            b_cat.hom_position(b_cat.comp(g, f.mor(h)))
        },
    )
}

/// A composite profunctor together with one representative triple
/// `(b, x, y)` per coend class.
#[derive(Debug, Clone)]
pub struct Composite {
    pub profunctor: SetProfunctor,
    /// `[c * |A| + a]`: representatives of the classes at `(c, a)`.
    pub representatives: Vec<Vec<(ObjId, usize, usize)>>,
}

/// Quotients `0..n` by the pairs in `edges`; returns class ids numbered by
/// first appearance and the number of classes.
fn classes(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> (Vec<usize>, usize) {
    let mut uf = UnionFind::<usize>::new(n);
    for (x, y) in edges {
        uf.union(x, y);
    }
    let labels = uf.into_labeling();
    let mut renumber = HashMap::new();
    let class_of = labels
        .into_iter()
        .map(|root| {
            let next = renumber.len();
            *renumber.entry(root).or_insert(next)
        })
        .collect();
    (class_of, renumber.len())
}

/// `psi . phi` for `phi: A -/-> B` and `psi: B -/-> C`.
pub fn compose_profunctors(phi: &SetProfunctor, psi: &SetProfunctor) -> Result<Composite, ProfError> {
    if *phi.cod != *psi.dom {
        return Err(ProfError::Mismatch);
    }
    let (a_cat, b_cat, c_cat) = (phi.dom.clone(), phi.cod.clone(), psi.cod.clone());
    let na = a_cat.num_objects();
    let nc = c_cat.num_objects();

    // per (c, a): class of each triple and its representatives
    let mut class_tables: Vec<(Vec<usize>, Vec<usize>)> = Vec::with_capacity(nc * na);
    let mut representatives = Vec::with_capacity(nc * na);
    for c in c_cat.objects() {
        for a in a_cat.objects() {
            let mut offsets = Vec::with_capacity(b_cat.num_objects());
            let mut total = 0;
            for b in b_cat.objects() {
                offsets.push(total);
                total += phi.size(b, a) * psi.size(c, b);
            }
            let index = |b: ObjId, x: usize, y: usize| offsets[b] + x * psi.size(c, b) + y;
            let mut edges = Vec::new();
            // (b', x . m, y) ~ (b, x, m . y) for m: b' -> b
            for m in b_cat.morphisms() {
                let (b1, b) = (b_cat.src(m), b_cat.dst(m));
                for x in 0..phi.size(b, a) {
                    for y in 0..psi.size(c, b1) {
                        edges.push((
                            index(b1, phi.act_cod(m, a, x), y),
                            index(b, x, psi.act_dom(m, c, y)),
                        ));
                    }
                }
            }
            let (class_of, count) = classes(total, edges);
            let mut reps = vec![None; count];
            for b in b_cat.objects() {
                for x in 0..phi.size(b, a) {
                    for y in 0..psi.size(c, b) {
                        let k = class_of[index(b, x, y)];
                        reps[k].get_or_insert((b, x, y));
                    }
                }
            }
            class_tables.push((offsets, class_of));
            representatives.push(reps.into_iter().map(Option::unwrap).collect::<Vec<_>>());
        }
    }
    let class_at = |c: ObjId, a: ObjId, b: ObjId, x: usize, y: usize| {
        let (offsets, class_of) = &class_tables[c * na + a];
        class_of[offsets[b] + x * psi.size(c, b) + y]
    };
    let profunctor = SetProfunctor::from_fns(
        a_cat.clone(),
        c_cat.clone(),
        |c, a| representatives[c * na + a].len(),
        |h, c, k| {
            let (b, x, y) = representatives[c * na + a_cat.src(h)][k];
            class_at(c, a_cat.dst(h), b, phi.act_dom(h, b, x), y)
        },
        |n, a, k| {
            let (b, x, y) = representatives[c_cat.dst(n) * na + a][k];
            class_at(c_cat.src(n), a, b, x, psi.act_cod(n, b, y))
        },
    );
    Ok(Composite {
        profunctor,
        representatives,
    })
}

/// A factorization `b --inner--> Fa --outer--> b'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Factorization {
    pub via: ObjId,
    pub outer: MorId,
    pub inner: MorId,
}

/// The coend `int^a B(Fa, b') x B(b, Fa)` at a fixed pair, as a partition
/// of factorization triples, with the counit value of each class.
#[derive(Debug, Clone)]
pub struct CoendPresentation {
    pub source: ObjId,
    pub target: ObjId,
    pub triples: Vec<Factorization>,
    pub class_of: Vec<usize>,
    /// Composite `outer . inner` of each class.
    pub counit: Vec<MorId>,
}

impl CoendPresentation {
    pub fn num_classes(&self) -> usize {
        self.counit.len()
    }

    /// The counit takes the same value on every triple of a class.
    pub fn counit_is_well_defined(&self, b_cat: &FinCategory) -> bool {
        self.triples
            .iter()
            .zip(&self.class_of)
            .all(|(t, &k)| b_cat.comp(t.outer, t.inner) == self.counit[k])
    }

    /// A morphism `source -> target` that does not factor through the image.
    pub fn unfactored(&self, b_cat: &FinCategory) -> Option<MorId> {
        b_cat
            .hom(self.source, self.target)
            .iter()
            .copied()
            .find(|m| !self.counit.contains(m))
    }

    /// Two inequivalent factorizations of the same morphism.
    pub fn collision(&self) -> Option<(Factorization, Factorization)> {
        let mut first_with_value: HashMap<MorId, usize> = HashMap::new();
        for (k, &m) in self.counit.iter().enumerate() {
            if let Some(&k0) = first_with_value.get(&m) {
                let pick = |class: usize| {
                    let i = self.class_of.iter().position(|&c| c == class).expect("class is inhabited");
                    self.triples[i]
                };
                return Some((pick(k0), pick(k)));
            }
            first_with_value.insert(m, k);
        }
        None
    }

    pub fn is_surjective(&self, b_cat: &FinCategory) -> bool {
        self.unfactored(b_cat).is_none()
    }

    pub fn is_injective(&self) -> bool {
        self.collision().is_none()
    }
}

/// The counit component `eps_{b,b'}` of `F_* -| F^*` as a class-indexed map.
pub fn counit_map(f: &FinFunctor, b: ObjId, b2: ObjId) -> Result<CoendPresentation, ProfError> {
    let (a_cat, b_cat) = (&**f.dom(), &**f.cod());
    if b >= b_cat.num_objects() || b2 >= b_cat.num_objects() {
        return Err(ProfError::UnknownObject);
    }
    let mut triples = Vec::new();
    let mut index = HashMap::new();
    for a in a_cat.objects() {
        let fa = f.obj(a);
        for &inner in b_cat.hom(b, fa) {
            for &outer in b_cat.hom(fa, b2) {
                let t = Factorization { via: a, outer, inner };
                index.insert(t, triples.len());
                triples.push(t);
            }
        }
    }
    // (a, g . Fh, k) ~ (a', g, Fh . k) for h: a -> a'
    let mut edges = Vec::new();
    for h in a_cat.morphisms() {
        let (a, a2) = (a_cat.src(h), a_cat.dst(h));
        let fh = f.mor(h);
        for &k in b_cat.hom(b, f.obj(a)) {
            for &g in b_cat.hom(f.obj(a2), b2) {
                let left = Factorization { via: a, outer: b_cat.comp(g, fh), inner: k };
                let right = Factorization { via: a2, outer: g, inner: b_cat.comp(fh, k) };
                edges.push((index[&left], index[&right]));
            }
        }
    }
    let (class_of, count) = classes(triples.len(), edges);
    let mut counit = vec![usize::MAX; count];
    for (t, &k) in triples.iter().zip(&class_of) {
        if counit[k] == usize::MAX {
            counit[k] = b_cat.comp(t.outer, t.inner);
        }
    }
    Ok(CoendPresentation {
        source: b,
        target: b2,
        triples,
        class_of,
        counit,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CdFailure {
    NotSurjective { morphism: MorId },
    NotInjective { first: Factorization, second: Factorization },
}

/// Where the counit fails to be a bijection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CdWitness {
    pub source: ObjId,
    pub target: ObjId,
    pub failure: CdFailure,
}

fn counit_failure(f: &FinFunctor, b: ObjId, b2: ObjId) -> Option<CdWitness> {
    let p = counit_map(f, b, b2).expect("objects in range");
    let failure = if let Some(morphism) = p.unfactored(f.cod()) {
        CdFailure::NotSurjective { morphism }
    } else if let Some((first, second)) = p.collision() {
        CdFailure::NotInjective { first, second }
    } else {
        return None;
    };
    Some(CdWitness { source: b, target: b2, failure })
}

/// Cauchy density: the counit `int^a B(Fa, b') x B(b, Fa) -> B(b, b')` is a
/// bijection for every pair `(b, b')`.
pub fn check_cauchy_dense(f: &FinFunctor) -> Verdict<CdWitness> {
    let b_cat = f.cod();
    for b in b_cat.objects() {
        for b2 in b_cat.objects() {
            if let Some(w) = counit_failure(f, b, b2) {
                return Verdict::Fails(w);
            }
        }
    }
    Verdict::Holds
}

pub fn is_cauchy_dense(f: &FinFunctor) -> bool {
    check_cauchy_dense(f).holds()
}

/// A profunctor `dom -/-> cod` valued in a posetal base.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantProfunctor<B: Base> {
    dom: Arc<QuantCategory<B>>,
    cod: Arc<QuantCategory<B>>,
    /// `[b * |dom| + a]`.
    values: Vec<B::Value>,
}

impl<B: Base> QuantProfunctor<B> {
    pub fn value(&self, b: ObjId, a: ObjId) -> &B::Value {
        &self.values[b * self.dom.num_objects() + a]
    }

    pub fn dom(&self) -> &Arc<QuantCategory<B>> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<QuantCategory<B>> {
        &self.cod
    }

    /// `phi(b, a) (x) A(a, a') <= phi(b, a')` and `B(b', b) (x) phi(b, a) <= phi(b', a)`.
    pub fn validate(&self) -> Result<(), ProfError> {
        let base = self.dom.base();
        for b in self.cod.objects() {
            for a in self.dom.objects() {
                for a2 in self.dom.objects() {
                    let v = base.tensor(self.dom.hom(a, a2), self.value(b, a));
                    if !base.leq(&v, self.value(b, a2)) {
                        return Err(ProfError::ActionLaw(format!(
                            "domain action fails at ({}, {} -> {})",
                            self.cod.object_name(b),
                            self.dom.object_name(a),
                            self.dom.object_name(a2)
                        )));
                    }
                }
                for b2 in self.cod.objects() {
                    let v = base.tensor(self.value(b, a), self.cod.hom(b2, b));
                    if !base.leq(&v, self.value(b2, a)) {
                        return Err(ProfError::ActionLaw(format!(
                            "codomain action fails at ({} -> {}, {})",
                            self.cod.object_name(b2),
                            self.cod.object_name(b),
                            self.dom.object_name(a)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn quant_hom_profunctor<B: Base>(c: &Arc<QuantCategory<B>>) -> QuantProfunctor<B> {
    let n = c.num_objects();
    QuantProfunctor {
        dom: c.clone(),
        cod: c.clone(),
        values: (0..n * n).map(|i| c.hom(i / n, i % n).clone()).collect(),
    }
}

/// `F_*(b, a) = B(b, Fa)`.
pub fn quant_lower_star<B: Base>(f: &QuantFunctor<B>) -> QuantProfunctor<B> {
    let (na, nb) = (f.dom().num_objects(), f.cod().num_objects());
    QuantProfunctor {
        dom: f.dom().clone(),
        cod: f.cod().clone(),
        values: (0..nb * na).map(|i| f.cod().hom(i / na, f.obj(i % na)).clone()).collect(),
    }
}

/// `F^*(a, b) = B(Fa, b)`.
pub fn quant_upper_star<B: Base>(f: &QuantFunctor<B>) -> QuantProfunctor<B> {
    let (na, nb) = (f.dom().num_objects(), f.cod().num_objects());
    QuantProfunctor {
        dom: f.cod().clone(),
        cod: f.dom().clone(),
        values: (0..na * nb).map(|i| f.cod().hom(f.obj(i / nb), i % nb).clone()).collect(),
    }
}

/// `(psi . phi)(c, a) = sup_b phi(b, a) (x) psi(c, b)`.
pub fn compose_quant_profunctors<B: Base>(
    phi: &QuantProfunctor<B>,
    psi: &QuantProfunctor<B>,
) -> Result<QuantProfunctor<B>, ProfError> {
    if phi.cod.object_names() != psi.dom.object_names() {
        return Err(ProfError::Mismatch);
    }
    let base = phi.dom.base();
    let (na, nc) = (phi.dom.num_objects(), psi.cod.num_objects());
    let values = (0..nc * na)
        .map(|i| {
            let (c, a) = (i / na, i % na);
            base.join_all(
                phi.cod
                    .objects()
                    .map(|b| base.tensor(phi.value(b, a), psi.value(c, b))),
            )
        })
        .collect();
    Ok(QuantProfunctor {
        dom: phi.dom.clone(),
        cod: psi.cod.clone(),
        values,
    })
}

/// Where the enriched counit is strictly below the hom value.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantCdWitness<V> {
    pub source: ObjId,
    pub target: ObjId,
    pub coend: V,
    pub hom: V,
}

/// Cauchy density over a posetal base, at every pair `(b, b')`: the
/// supremum coend `(F_* . F^*)(b, b')` equals `B(b, b')`.
pub fn check_cauchy_dense_quant<B: Base>(f: &QuantFunctor<B>) -> Verdict<QuantCdWitness<B::Value>> {
    let composite = compose_quant_profunctors(&quant_upper_star(f), &quant_lower_star(f))
        .expect("upper and lower star share the domain");
    let b_cat = f.cod();
    let base = b_cat.base();
    for b in b_cat.objects() {
        for b2 in b_cat.objects() {
            let coend = composite.value(b, b2);
            debug_assert!(base.leq(coend, b_cat.hom(b, b2)), "counit is lax");
            if !base.same(coend, b_cat.hom(b, b2)) {
                return Verdict::Fails(QuantCdWitness {
                    source: b,
                    target: b2,
                    coend: coend.clone(),
                    hom: b_cat.hom(b, b2).clone(),
                });
            }
        }
    }
    Verdict::Holds
}

pub fn is_cauchy_dense_quant<B: Base>(f: &QuantFunctor<B>) -> bool {
    check_cauchy_dense_quant(f).holds()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FfFailure {
    NotInjective { first: MorId, second: MorId },
    NotSurjective { morphism: MorId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FfWitness {
    pub source: ObjId,
    pub target: ObjId,
    pub failure: FfFailure,
}

/// Whether `F_{a,a'}: A(a, a') -> B(Fa, Fa')` is a bijection for all pairs.
pub fn check_fully_faithful(f: &FinFunctor) -> Verdict<FfWitness> {
    let (a_cat, b_cat) = (&**f.dom(), &**f.cod());
    for a in a_cat.objects() {
        for a2 in a_cat.objects() {
            let mut seen: HashMap<MorId, MorId> = HashMap::new();
            for &h in a_cat.hom(a, a2) {
                if let Some(&first) = seen.get(&f.mor(h)) {
                    return Verdict::Fails(FfWitness {
                        source: a,
                        target: a2,
                        failure: FfFailure::NotInjective { first, second: h },
                    });
                }
                seen.insert(f.mor(h), h);
            }
            if let Some(&m) = b_cat.hom(f.obj(a), f.obj(a2)).iter().find(|m| !seen.contains_key(m)) {
                return Verdict::Fails(FfWitness {
                    source: a,
                    target: a2,
                    failure: FfFailure::NotSurjective { morphism: m },
                });
            }
        }
    }
    Verdict::Holds
}

pub fn is_fully_faithful(f: &FinFunctor) -> bool {
    check_fully_faithful(f).holds()
}

/// A chosen section of `F` on every hom-set: for each `(a, a')`, a
/// preimage of every morphism `Fa -> Fa'` (indexed by hom-set position).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitFullWitness {
    pub sections: Vec<Vec<MorId>>,
}

impl SplitFullWitness {
    pub fn section(&self, f: &FinFunctor, a: ObjId, a2: ObjId, m: MorId) -> MorId {
        let na = f.dom().num_objects();
        self.sections[a * na + a2][f.cod().hom_position(m)]
    }

    /// `F(section(m)) = m` for every `m: Fa -> Fa'`.
    pub fn validate(&self, f: &FinFunctor) -> Result<(), ProfError> {
        let (a_cat, b_cat) = (&**f.dom(), &**f.cod());
        let na = a_cat.num_objects();
        if self.sections.len() != na * na {
            return Err(ProfError::InvalidWitness { a: "?".into(), a2: "?".into() });
        }
        for a in a_cat.objects() {
            for a2 in a_cat.objects() {
                let hom = b_cat.hom(f.obj(a), f.obj(a2));
                let sec = &self.sections[a * na + a2];
                let ok = sec.len() == hom.len()
                    && sec.iter().zip(hom).all(|(&h, &m)| {
                        h < a_cat.num_morphisms()
                            && a_cat.src(h) == a
                            && a_cat.dst(h) == a2
                            && f.mor(h) == m
                    });
                if !ok {
                    return Err(ProfError::InvalidWitness {
                        a: a_cat.object_name(a).to_string(),
                        a2: a_cat.object_name(a2).to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A section of `F` on hom-sets if `F` is full (over finite sets every
/// surjection splits); the first preimage is chosen.
pub fn split_full_witness(f: &FinFunctor) -> Option<SplitFullWitness> {
    let (a_cat, b_cat) = (&**f.dom(), &**f.cod());
    let mut sections = Vec::with_capacity(a_cat.num_objects().pow(2));
    for a in a_cat.objects() {
        for a2 in a_cat.objects() {
            let sec = b_cat
                .hom(f.obj(a), f.obj(a2))
                .iter()
                .map(|&m| a_cat.hom(a, a2).iter().copied().find(|&h| f.mor(h) == m))
                .collect::<Option<Vec<_>>>()?;
            sections.push(sec);
        }
    }
    Some(SplitFullWitness { sections })
}

pub fn is_split_full(f: &FinFunctor) -> bool {
    split_full_witness(f).is_some()
}

/// Every `eps_{b,b}` is surjective (for finite sets, a split epimorphism).
pub fn diagonal_counits_surjective(f: &FinFunctor) -> bool {
    f.cod()
        .objects()
        .all(|b| counit_map(f, b, b).expect("in range").is_surjective(f.cod()))
}

/// The diagonal criterion for split-full functors. The witness is checked
/// first; the answer only concerns `eps_{b,b}`.
pub fn split_full_shortcut(f: &FinFunctor, witness: &SplitFullWitness) -> Result<bool, ProfError> {
    witness.validate(f)?;
    Ok(diagonal_counits_surjective(f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShortcutFlag {
    /// The diagonal criterion disagrees with Cauchy density on a functor
    /// that is not split-full, so the criterion does not apply.
    HypothesisNotMet,
    /// Disagreement on a split-full functor.
    TheoremViolation,
}

/// Side-by-side run of the diagonal criterion and the full decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShortcutReport {
    pub split_full: bool,
    pub diagonal_surjective: bool,
    pub cauchy_dense: bool,
    pub flag: Option<ShortcutFlag>,
}

pub fn shortcut_report(f: &FinFunctor) -> ShortcutReport {
    let split_full = is_split_full(f);
    let diagonal_surjective = diagonal_counits_surjective(f);
    let cauchy_dense = is_cauchy_dense(f);
    let flag = (diagonal_surjective != cauchy_dense).then_some(if split_full {
        ShortcutFlag::TheoremViolation
    } else {
        ShortcutFlag::HypothesisNotMet
    });
    ShortcutReport {
        split_full,
        diagonal_surjective,
        cauchy_dense,
        flag,
    }
}

/// A covariant functor `C -> Set` with elements `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunctor {
    cat: Arc<FinCategory>,
    sizes: Vec<usize>,
    /// Per morphism `h: c -> c'`, the map `P(c) -> P(c')`.
    action: Vec<Vec<usize>>,
}

impl SetFunctor {
    pub fn new(cat: Arc<FinCategory>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Self {
        SetFunctor { cat, sizes, action }
    }

    /// The covariant representable `C(c, -)`.
    pub fn representable(cat: &Arc<FinCategory>, c: ObjId) -> Self {
        let sizes = cat.objects().map(|x| cat.hom(c, x).len()).collect();
        let action = cat
            .morphisms()
            .map(|h| {
                cat.hom(c, cat.src(h))
                    .iter()
                    .map(|&k| cat.hom_position(cat.comp(h, k)))
                    .collect()
            })
            .collect();
        SetFunctor { cat: cat.clone(), sizes, action }
    }

    /// `P . F` for `F: A -> C`.
    pub fn precompose(&self, f: &FinFunctor) -> SetFunctor {
        SetFunctor {
            cat: f.dom().clone(),
            sizes: f.dom().objects().map(|a| self.sizes[f.obj(a)]).collect(),
            action: f.dom().morphisms().map(|h| self.action[f.mor(h)].clone()).collect(),
        }
    }

    pub fn size(&self, c: ObjId) -> usize {
        self.sizes[c]
    }

    pub fn act(&self, h: MorId, x: usize) -> usize {
        self.action[h][x]
    }
}

/// The pointwise left Kan extension `Lan_F P` evaluated at every object of
/// the codomain: `Lan_F P (b) = int^a B(Fa, b) x P(a)`. Returns, per `b`,
/// the representatives `(a, g: Fa -> b, x)` of its elements.
pub fn left_kan_extension(f: &FinFunctor, p: &SetFunctor) -> Vec<Vec<(ObjId, MorId, usize)>> {
    let (a_cat, b_cat) = (&**f.dom(), &**f.cod());
    b_cat
        .objects()
        .map(|b| {
            // elements of the comma category (F | b) paired with P
            let mut elems = Vec::new();
            let mut index = HashMap::new();
            for a in a_cat.objects() {
                for &g in b_cat.hom(f.obj(a), b) {
                    for x in 0..p.size(a) {
                        index.insert((a, g, x), elems.len());
                        elems.push((a, g, x));
                    }
                }
            }
            let mut edges = Vec::new();
            for h in a_cat.morphisms() {
                let (a, a2) = (a_cat.src(h), a_cat.dst(h));
                for &g in b_cat.hom(f.obj(a2), b) {
                    for x in 0..p.size(a) {
                        let via_comma = (a, b_cat.comp(g, f.mor(h)), x);
                        let via_action = (a2, g, p.act(h, x));
                        edges.push((index[&via_comma], index[&via_action]));
                    }
                }
            }
            let (class_of, count) = classes(elems.len(), edges);
            let mut reps = vec![None; count];
            for (e, &k) in elems.iter().zip(&class_of) {
                reps[k].get_or_insert(*e);
            }
            reps.into_iter().map(Option::unwrap).collect()
        })
        .collect()
}

/// Whether the canonical map `Lan_F B(b, F-) -> B(b, =)` is a bijection at
/// every object.
pub fn is_absolutely_dense_lan(f: &FinFunctor, b: ObjId) -> bool {
    let b_cat = f.cod();
    let p = SetFunctor::representable(b_cat, b).precompose(f);
    let lan = left_kan_extension(f, &p);
    b_cat.objects().all(|b2| {
        let images: Vec<MorId> = lan[b2]
            .iter()
            .map(|&(a, g, x)| b_cat.comp(g, b_cat.hom(b, f.obj(a))[x]))
            .collect();
        let mut sorted = images.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == images.len() && sorted.len() == b_cat.hom(b, b2).len()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{deloop, deloop_hom, Monoid, MonoidHom};

    fn arc(c: FinCategory) -> Arc<FinCategory> {
        Arc::new(c)
    }

    fn z4_to_z2() -> FinFunctor {
        let f = MonoidHom::new(Arc::new(Monoid::cyclic(4)), Arc::new(Monoid::cyclic(2)), vec![0, 1, 0, 1]).unwrap();
        deloop_hom(&f)
    }

    fn z2_into_z4() -> FinFunctor {
        let f = MonoidHom::new(Arc::new(Monoid::cyclic(2)), Arc::new(Monoid::cyclic(4)), vec![0, 2]).unwrap();
        deloop_hom(&f)
    }

    fn collapse() -> FinFunctor {
        let a = arc(FinCategory::discrete(&["x", "y"]));
        let b = arc(FinCategory::discrete(&["x"]));
        FinFunctor::new(a, b, vec![0, 0], vec![0, 0]).unwrap()
    }

    fn discrete_into_arrow() -> FinFunctor {
        let a = arc(FinCategory::discrete(&["bot", "top"]));
        let b = arc(FinCategory::walking_arrow());
        let mor = vec![b.identity(0), b.identity(1)];
        FinFunctor::new(a, b, vec![0, 1], mor).unwrap()
    }

    #[test]
    fn stars_of_identity_are_hom() {
        let c = arc(deloop(&Monoid::cyclic(3)));
        let id = FinFunctor::identity(c.clone());
        let hom = hom_profunctor(&c);
        assert_eq!(hom.validate(), Ok(()));
        assert_eq!(lower_star(&id), hom);
        assert_eq!(upper_star(&id), hom);
    }

    #[test]
    fn lower_star_from_empty_is_empty() {
        let e = arc(FinCategory::empty());
        let t = arc(FinCategory::terminal());
        let f = FinFunctor::new(e, t, vec![], vec![]).unwrap();
        let p = lower_star(&f);
        assert!(p.sizes.iter().all(|&s| s == 0));
    }

    #[test]
    fn star_actions_are_lawful() {
        for f in [z4_to_z2(), z2_into_z4(), collapse(), discrete_into_arrow()] {
            assert_eq!(lower_star(&f).validate(), Ok(()));
            assert_eq!(upper_star(&f).validate(), Ok(()));
        }
    }

    #[test]
    fn identity_counit_is_bijective() {
        let c = arc(FinCategory::walking_arrow());
        let id = FinFunctor::identity(c.clone());
        for b in c.objects() {
            for b2 in c.objects() {
                let p = counit_map(&id, b, b2).unwrap();
                assert!(p.counit_is_well_defined(&c));
                assert!(p.is_surjective(&c) && p.is_injective());
            }
        }
    }

    #[test]
    fn collapse_has_two_classes_over_one_morphism() {
        let f = collapse();
        let p = counit_map(&f, 0, 0).unwrap();
        assert_eq!(p.num_classes(), 2);
        assert!(p.is_surjective(f.cod()));
        assert!(!p.is_injective());
    }

    #[test]
    fn empty_functor_counit_is_not_surjective() {
        let f = FinFunctor::new(arc(FinCategory::empty()), arc(FinCategory::terminal()), vec![], vec![]).unwrap();
        let p = counit_map(&f, 0, 0).unwrap();
        assert_eq!(p.num_classes(), 0);
        assert_eq!(p.unfactored(f.cod()), Some(0));
        assert!(matches!(
            check_cauchy_dense(&f),
            Verdict::Fails(CdWitness { failure: CdFailure::NotSurjective { .. }, .. })
        ));
    }

    #[test]
    fn group_examples() {
        assert!(is_cauchy_dense(&z4_to_z2()));
        assert!(!is_cauchy_dense(&z2_into_z4()));
        assert!(!is_cauchy_dense(&discrete_into_arrow()));
        assert!(!is_cauchy_dense(&collapse()));
    }

    #[test]
    fn z2_identity_composite_has_two_classes() {
        let c = arc(deloop(&Monoid::cyclic(2)));
        let id = FinFunctor::identity(c);
        let comp = compose_profunctors(&upper_star(&id), &lower_star(&id)).unwrap();
        assert_eq!(comp.profunctor.size(0, 0), 2);
        assert_eq!(comp.profunctor.validate(), Ok(()));
    }

    #[test]
    fn mismatched_composition_is_rejected() {
        let f = z4_to_z2();
        assert_eq!(
            compose_profunctors(&lower_star(&f), &lower_star(&f)).unwrap_err(),
            ProfError::Mismatch
        );
    }

    #[test]
    fn fully_faithful_and_split_full_examples() {
        let id = FinFunctor::identity(arc(FinCategory::walking_arrow()));
        assert!(is_fully_faithful(&id));
        let q = z4_to_z2();
        assert!(is_split_full(&q));
        assert!(matches!(
            check_fully_faithful(&q),
            Verdict::Fails(FfWitness { failure: FfFailure::NotInjective { .. }, .. })
        ));
        // collapsing two points is faithful but misses 1_x in hom(x, y)
        let c = collapse();
        assert!(!is_split_full(&c));
        assert!(matches!(
            check_fully_faithful(&c),
            Verdict::Fails(FfWitness { failure: FfFailure::NotSurjective { .. }, .. })
        ));
    }

    #[test]
    fn shortcut_on_split_full_and_flagged_inputs() {
        let q = z4_to_z2();
        let w = split_full_witness(&q).unwrap();
        assert_eq!(split_full_shortcut(&q, &w), Ok(true));
        assert_eq!(shortcut_report(&q).flag, None);

        let c = collapse();
        let report = shortcut_report(&c);
        assert!(report.diagonal_surjective && !report.cauchy_dense && !report.split_full);
        assert_eq!(report.flag, Some(ShortcutFlag::HypothesisNotMet));

        // a witness for another functor does not validate
        let bad = SplitFullWitness { sections: vec![vec![0, 0]] };
        assert!(split_full_shortcut(&q, &bad).is_err());
    }

    #[test]
    fn lan_condition_examples() {
        let id = FinFunctor::identity(arc(FinCategory::walking_arrow()));
        assert!(id.cod().objects().all(|b| is_absolutely_dense_lan(&id, b)));
        let q = z4_to_z2();
        assert!(is_absolutely_dense_lan(&q, 0));
        let d = discrete_into_arrow();
        assert!(!d.cod().objects().all(|b| is_absolutely_dense_lan(&d, b)));
    }

    #[test]
    fn collage_of_hom_is_valid() {
        let c = arc(deloop(&Monoid::cyclic(2)));
        let (collage, i0, i1) = hom_profunctor(&c).collage();
        assert_eq!(collage.validate(crate::fincat::SizeCap::VALIDATION), Ok(()));
        assert_eq!(collage.num_objects(), 2);
        assert_eq!(collage.num_morphisms(), 6);
        assert_eq!(i0.validate(), Ok(()));
        assert_eq!(i1.validate(), Ok(()));
    }
}
