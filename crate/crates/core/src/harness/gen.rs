//! Random finite categories, functors, monoids and enriched categories.
//!
//! Positive samples (Cauchy dense functors) come from recipes rather than
//! rejection sampling.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::base::{Base, Dist, Quantale, RPlus};
use crate::completion::karoubi;
use crate::contexts::monoids_of_order;
use crate::fincat::{
    deloop, deloop_hom, disjoint_union, disjoint_union_functor, two_to_set_functor, FinCategory, FinFunctor,
    Monoid, MonoidHom, Morphism, QuantCategory, QuantFunctor, SizeCap,
};
use crate::search::FunctorSearch;

pub type SampleRng = ChaCha8Rng;

/// Relative frequencies of category shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShapeWeights {
    pub discrete: u32,
    pub preorder: u32,
    pub monoid: u32,
    pub free: u32,
    pub union: u32,
    pub karoubi: u32,
}

impl Default for ShapeWeights {
    fn default() -> Self {
        ShapeWeights {
            discrete: 1,
            preorder: 3,
            monoid: 3,
            free: 2,
            union: 2,
            karoubi: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub seed: u64,
    pub max_objects: usize,
    pub max_morphisms: usize,
    pub max_monoid_size: usize,
    pub weights: ShapeWeights,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 42,
            max_objects: 4,
            max_morphisms: 16,
            max_monoid_size: 4,
            weights: ShapeWeights::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("infeasible generator configuration: {0}")]
    Infeasible(String),
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        let w = &self.weights;
        if self.max_objects == 0 {
            return Err(GenError::Infeasible("max_objects must be at least 1".into()));
        }
        if self.max_morphisms < self.max_objects {
            return Err(GenError::Infeasible(format!(
                "max_morphisms {} is below max_objects {} (identities alone exceed it)",
                self.max_morphisms, self.max_objects
            )));
        }
        if !(1..=crate::contexts::MAX_EXPLORER_CAP).contains(&self.max_monoid_size) {
            return Err(GenError::Infeasible(format!(
                "max_monoid_size must lie in 1..={}",
                crate::contexts::MAX_EXPLORER_CAP
            )));
        }
        if w.discrete + w.preorder + w.monoid + w.free + w.union + w.karoubi == 0 {
            return Err(GenError::Infeasible("all shape weights are zero".into()));
        }
        Ok(())
    }

    pub fn cap(&self) -> SizeCap {
        SizeCap {
            max_objects: self.max_objects,
            max_morphisms: self.max_morphisms,
        }
    }

    /// The generator stream for one sample of one property.
    pub fn rng(&self, property: &str, index: usize) -> SampleRng {
        ChaCha8Rng::seed_from_u64(sample_seed(self.seed, property, index))
    }

    /// Halved sizes, for parts of composite samples.
    pub fn smaller(&self) -> GenConfig {
        GenConfig {
            max_objects: (self.max_objects / 2).max(1),
            max_morphisms: (self.max_morphisms / 2).max((self.max_objects / 2).max(1)),
            ..self.clone()
        }
    }

    pub fn with_sizes(&self, max_objects: usize, max_morphisms: usize) -> GenConfig {
        GenConfig {
            max_objects: self.max_objects.min(max_objects),
            max_morphisms: self.max_morphisms.min(max_morphisms),
            ..self.clone()
        }
    }
}

/// FNV-1a over the property id, mixed with the run seed and sample index.
pub fn sample_seed(seed: u64, property: &str, index: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in property.bytes().chain(seed.to_le_bytes()).chain((index as u64).to_le_bytes()) {
        h ^= u64::from(byte);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

const RETRIES: usize = 32;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

// ---------------------------------------------------------------- monoids

/// The same monoid with elements moved by a random permutation.
fn relabel(m: &Monoid, rng: &mut SampleRng) -> Monoid {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut names = vec![String::new(); n];
    let mut mul = vec![0; n * n];
    for x in 0..n {
        names[perm[x]] = m.name(x).to_string();
        for y in 0..n {
            mul[perm[x] * n + perm[y]] = perm[m.mul(x, y)];
        }
    }
    Monoid::new(names, mul, perm[m.unit()]).expect("relabeling preserves the axioms")
}

pub fn gen_monoid(cfg: &GenConfig, rng: &mut SampleRng) -> Monoid {
    let n = rng.gen_range(1..=cfg.max_monoid_size.min(cfg.max_morphisms));
    let m = monoids_of_order(n).choose(rng).expect("catalog is nonempty");
    relabel(m, rng)
}

pub fn gen_group(cfg: &GenConfig, rng: &mut SampleRng) -> Monoid {
    let n = rng.gen_range(1..=cfg.max_monoid_size.min(cfg.max_morphisms));
    let g = monoids_of_order(n)
        .iter()
        .filter(|m| m.is_group())
        .choose(rng)
        .expect("cyclic group of every order");
    relabel(g, rng)
}

fn random_hom(a: Monoid, b: Monoid, surjective: bool, rng: &mut SampleRng) -> Option<MonoidHom> {
    let homs = crate::fincat::monoid_homs(&a, &b);
    let (a, b) = (Arc::new(a), Arc::new(b));
    let pick = homs
        .into_iter()
        .filter(|h| !surjective || (0..b.len()).all(|y| h.contains(&y)))
        .choose(rng)?;
    Some(MonoidHom::new(a, b, pick).expect("enumerated homomorphism"))
}

/// A homomorphism between random monoids; a third of the time surjective.
pub fn gen_monoid_hom(cfg: &GenConfig, rng: &mut SampleRng) -> MonoidHom {
    let surjective = rng.gen_ratio(1, 3);
    for _ in 0..RETRIES {
        let a = gen_monoid(cfg, rng);
        let b = if surjective {
            let n = rng.gen_range(1..=a.len());
            relabel(monoids_of_order(n).choose(rng).expect("nonempty"), rng)
        } else {
            gen_monoid(cfg, rng)
        };
        if let Some(h) = random_hom(a, b, surjective, rng) {
            return h;
        }
    }
    let a = Arc::new(gen_monoid(cfg, rng));
    MonoidHom::new(a.clone(), a.clone(), (0..a.len()).collect()).expect("identity")
}

/// A homomorphism out of a random group; half the time surjective.
pub fn gen_group_hom(cfg: &GenConfig, rng: &mut SampleRng) -> MonoidHom {
    let surjective = rng.gen_bool(0.5);
    for _ in 0..RETRIES {
        let a = gen_group(cfg, rng);
        let b = if rng.gen_bool(0.5) {
            gen_group(cfg, rng)
        } else {
            gen_monoid(cfg, rng)
        };
        if let Some(h) = random_hom(a, b, surjective, rng) {
            return h;
        }
    }
    let a = Arc::new(Monoid::trivial());
    MonoidHom::new(a.clone(), a, vec![0]).expect("identity")
}

// ------------------------------------------------------------- categories

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Discrete,
    Preorder,
    Monoid,
    Free,
    Union,
    Karoubi,
}

fn pick_shape(cfg: &GenConfig, rng: &mut SampleRng) -> Shape {
    let w = &cfg.weights;
    let table = [
        (Shape::Discrete, w.discrete),
        (Shape::Preorder, w.preorder),
        (Shape::Monoid, w.monoid),
        (Shape::Free, w.free),
        (Shape::Union, w.union),
        (Shape::Karoubi, w.karoubi),
    ];
    table
        .choose_weighted(rng, |&(_, weight)| weight)
        .expect("weights validated")
        .0
}

fn gen_preorder(n: usize, rng: &mut SampleRng) -> FinCategory {
    let density = rng.gen_range(0.1..0.6);
    let mut leq = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            leq[a * n + b] = a == b || rng.gen_bool(density);
        }
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                if leq[a * n + k] && leq[k * n + b] {
                    leq[a * n + b] = true;
                }
            }
        }
    }
    FinCategory::from_preorder(&names("p", n), |a, b| leq[a * n + b])
}

/// The free category on a random acyclic multigraph, or `None` when it
/// has more than `max_morphisms` paths.
fn gen_free(n: usize, max_morphisms: usize, rng: &mut SampleRng) -> Option<FinCategory> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for _ in 0..rng.gen_range(0..=2usize).saturating_sub(usize::from(rng.gen_bool(0.4))) {
                edges.push((order[i], order[j]));
            }
        }
    }
    // paths as edge sequences; identities are the empty paths
    let mut paths: Vec<(usize, usize, Vec<usize>)> = (0..n).map(|a| (a, a, Vec::new())).collect();
    let mut frontier: Vec<usize> = Vec::new();
    for (e, &(s, t)) in edges.iter().enumerate() {
        frontier.push(paths.len());
        paths.push((s, t, vec![e]));
    }
    while let Some(p) = frontier.pop() {
        if paths.len() > max_morphisms {
            return None;
        }
        let (s, t, word) = paths[p].clone();
        for (e, &(s2, t2)) in edges.iter().enumerate() {
            if s2 == t {
                let mut w = word.clone();
                w.push(e);
                frontier.push(paths.len());
                paths.push((s, t2, w));
            }
        }
    }
    if paths.len() > max_morphisms {
        return None;
    }
    let index: HashMap<Vec<usize>, usize> = paths.iter().enumerate().map(|(i, p)| (p.2.clone(), i)).collect();
    let morphisms = paths
        .iter()
        .map(|(s, t, w)| Morphism {
            name: if w.is_empty() {
                format!("1_v{s}")
            } else {
                w.iter().map(|e| format!("e{e}")).collect::<Vec<_>>().join(".")
            },
            src: *s,
            dst: *t,
        })
        .collect();
    let words: Vec<Vec<usize>> = paths.iter().map(|p| p.2.clone()).collect();
    FinCategory::from_fn(names("v", n), morphisms, (0..n).collect(), |g, f| {
        // g . f: first f, then g; identities are all the empty word
        if words[f].is_empty() {
            return g;
        }
        if words[g].is_empty() {
            return f;
        }
        let mut w = words[f].clone();
        w.extend_from_slice(&words[g]);
        index[&w]
    })
    .ok()
}

fn try_shape(shape: Shape, cfg: &GenConfig, rng: &mut SampleRng, depth: usize) -> Option<Arc<FinCategory>> {
    let n = rng.gen_range(1..=cfg.max_objects);
    let c = match shape {
        Shape::Discrete => FinCategory::discrete(&names("d", n)),
        Shape::Preorder => gen_preorder(n, rng),
        Shape::Monoid => deloop(&gen_monoid(cfg, rng)),
        Shape::Free => gen_free(n, cfg.max_morphisms, rng)?,
        Shape::Union => {
            if cfg.max_objects < 2 || depth > 1 {
                return None;
            }
            let half = cfg.smaller();
            let parts = [gen_category_at(&half, rng, depth + 1), gen_category_at(&half, rng, depth + 1)];
            disjoint_union(&parts).0.as_ref().clone()
        }
        Shape::Karoubi => {
            if depth > 1 {
                return None;
            }
            let inner = if rng.gen_bool(0.5) {
                Arc::new(deloop(&gen_monoid(cfg, rng)))
            } else {
                gen_category_at(&cfg.smaller(), rng, depth + 1)
            };
            let env = karoubi(&inner, cfg.cap()).ok()?;
            if rng.gen_bool(0.3) && env.category.num_objects() > 1 {
                // a random nonempty full subcategory
                let keep: Vec<usize> = env
                    .category
                    .objects()
                    .filter(|_| rng.gen_bool(0.6))
                    .collect();
                if keep.is_empty() {
                    env.category.as_ref().clone()
                } else {
                    env.category.full_subcategory(&keep).category
                }
            } else {
                env.category.as_ref().clone()
            }
        }
    };
    cfg.cap().admits(&c).then(|| Arc::new(c))
}

fn gen_category_at(cfg: &GenConfig, rng: &mut SampleRng, depth: usize) -> Arc<FinCategory> {
    for _ in 0..RETRIES {
        let shape = pick_shape(cfg, rng);
        if let Some(c) = try_shape(shape, cfg, rng, depth) {
            return c;
        }
    }
    Arc::new(FinCategory::terminal())
}

/// A random category within the configured caps.
pub fn gen_category(cfg: &GenConfig, rng: &mut SampleRng) -> Arc<FinCategory> {
    gen_category_at(cfg, rng, 0)
}

/// A random preorder category (thin) within the caps.
pub fn gen_preorder_category(cfg: &GenConfig, rng: &mut SampleRng) -> Arc<FinCategory> {
    for _ in 0..RETRIES {
        let c = gen_preorder(rng.gen_range(1..=cfg.max_objects), rng);
        if cfg.cap().admits(&c) {
            return Arc::new(c);
        }
    }
    Arc::new(FinCategory::terminal())
}

// --------------------------------------------------------------- functors

/// How a generated functor was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recipe {
    Unconstrained,
    FullInclusion,
    Identity,
    GroupSurjection,
    MonoidSurjection,
    KaroubiEmbedding,
    EnvelopeSubcategory,
    Equivalence,
    DisjointUnion,
    Composite,
}

impl Recipe {
    /// Recipes whose output is Cauchy dense by construction.
    pub fn cauchy_dense(self) -> bool {
        !matches!(self, Recipe::Unconstrained | Recipe::FullInclusion)
    }
}

#[derive(Debug, Clone)]
pub struct GenFunctor {
    pub functor: FinFunctor,
    pub recipe: Recipe,
}

/// Half unconstrained, half from Cauchy dense recipes.
pub fn gen_functor(cfg: &GenConfig, rng: &mut SampleRng) -> GenFunctor {
    if rng.gen_bool(0.5) {
        gen_unconstrained_functor(cfg, rng)
    } else {
        gen_cd_functor(cfg, rng)
    }
}

/// A random functor between random categories, or the inclusion of a
/// random full subcategory.
pub fn gen_unconstrained_functor(cfg: &GenConfig, rng: &mut SampleRng) -> GenFunctor {
    if rng.gen_ratio(1, 4) {
        let b = gen_category(cfg, rng);
        let keep: Vec<usize> = b.objects().filter(|_| rng.gen_bool(0.6)).collect();
        return GenFunctor {
            functor: inclusion(&b, &keep),
            recipe: Recipe::FullInclusion,
        };
    }
    for _ in 0..RETRIES {
        let a = gen_category(cfg, rng);
        let b = gen_category(cfg, rng);
        if let Some(f) = FunctorSearch::new(&a, &b).random(rng) {
            return GenFunctor {
                functor: f,
                recipe: Recipe::Unconstrained,
            };
        }
    }
    let a = gen_category(cfg, rng);
    let t = Arc::new(FinCategory::terminal());
    let f = FunctorSearch::new(&a, &t).first().expect("terminal category");
    GenFunctor {
        functor: f,
        recipe: Recipe::Unconstrained,
    }
}

/// The inclusion of the full subcategory on `objects`.
pub fn inclusion(b: &Arc<FinCategory>, objects: &[usize]) -> FinFunctor {
    let sub = b.full_subcategory(objects);
    FinFunctor::new(Arc::new(sub.category), b.clone(), sub.objects, sub.morphisms).expect("inclusion")
}

/// A functor that is Cauchy dense by construction.
pub fn gen_cd_functor(cfg: &GenConfig, rng: &mut SampleRng) -> GenFunctor {
    gen_recipe(cfg, rng, false, 0)
}

/// A functor that is fully faithful and Cauchy dense by construction.
pub fn gen_ff_cd_functor(cfg: &GenConfig, rng: &mut SampleRng) -> GenFunctor {
    gen_recipe(cfg, rng, true, 0)
}

fn gen_recipe(cfg: &GenConfig, rng: &mut SampleRng, ff: bool, depth: usize) -> GenFunctor {
    for _ in 0..RETRIES {
        let recipes: &[Recipe] = if ff {
            &[
                Recipe::Identity,
                Recipe::KaroubiEmbedding,
                Recipe::EnvelopeSubcategory,
                Recipe::Equivalence,
                Recipe::DisjointUnion,
                Recipe::Composite,
            ]
        } else {
            &[
                Recipe::Identity,
                Recipe::GroupSurjection,
                Recipe::MonoidSurjection,
                Recipe::KaroubiEmbedding,
                Recipe::EnvelopeSubcategory,
                Recipe::Equivalence,
                Recipe::DisjointUnion,
                Recipe::Composite,
            ]
        };
        let recipe = *recipes.choose(rng).expect("nonempty");
        if let Some(f) = try_recipe(recipe, cfg, rng, ff, depth) {
            if cfg.cap().admits(f.dom()) && cfg.cap().admits(f.cod()) {
                return GenFunctor { functor: f, recipe };
            }
        }
    }
    GenFunctor {
        functor: FinFunctor::identity(gen_category(cfg, rng)),
        recipe: Recipe::Identity,
    }
}

fn try_recipe(recipe: Recipe, cfg: &GenConfig, rng: &mut SampleRng, ff: bool, depth: usize) -> Option<FinFunctor> {
    match recipe {
        Recipe::Identity => Some(FinFunctor::identity(gen_category(cfg, rng))),
        Recipe::GroupSurjection => {
            let a = gen_group(cfg, rng);
            let n = rng.gen_range(1..=a.len());
            let b = monoids_of_order(n).iter().filter(|m| m.is_group()).choose(rng)?;
            let b = relabel(b, rng);
            random_hom(a, b, true, rng).map(|h| deloop_hom(&h))
        }
        Recipe::MonoidSurjection => {
            let a = gen_monoid(cfg, rng);
            let n = rng.gen_range(1..=a.len());
            let b = relabel(monoids_of_order(n).choose(rng)?, rng);
            random_hom(a, b, true, rng).map(|h| deloop_hom(&h))
        }
        Recipe::KaroubiEmbedding => {
            let a = gen_category(&cfg.smaller(), rng);
            karoubi(&a, cfg.cap()).ok().map(|env| env.embedding)
        }
        Recipe::EnvelopeSubcategory => {
            let a = gen_category(&cfg.smaller(), rng);
            let env = karoubi(&a, cfg.cap()).ok()?;
            envelope_subcategory(&env.embedding, rng)
        }
        Recipe::Equivalence => {
            let b = if rng.gen_bool(0.5) {
                let a = gen_category(&cfg.smaller(), rng);
                karoubi(&a, cfg.cap()).ok()?.category
            } else {
                gen_category(cfg, rng)
            };
            Some(essential_inclusion(&b, rng))
        }
        Recipe::DisjointUnion => {
            if depth > 0 || cfg.max_objects < 2 {
                return None;
            }
            let half = cfg.smaller();
            let parts = [
                gen_recipe(&half, rng, ff, depth + 1).functor,
                gen_recipe(&half, rng, ff, depth + 1).functor,
            ];
            Some(disjoint_union_functor(&parts))
        }
        Recipe::Composite => {
            if depth > 0 {
                return None;
            }
            let f = gen_recipe(&cfg.smaller(), rng, ff, depth + 1).functor;
            let g = extend(f.cod(), cfg, rng)?;
            Some(f.then(&g))
        }
        Recipe::Unconstrained | Recipe::FullInclusion => None,
    }
}

/// A fully faithful Cauchy dense functor out of `b`.
fn extend(b: &Arc<FinCategory>, cfg: &GenConfig, rng: &mut SampleRng) -> Option<FinFunctor> {
    let env = karoubi(b, cfg.cap()).ok()?;
    if rng.gen_bool(0.5) {
        Some(env.embedding)
    } else {
        envelope_subcategory(&env.embedding, rng)
    }
}

/// `A -> S` where `S` is a random full subcategory of the envelope
/// containing the representables.
fn envelope_subcategory(z: &FinFunctor, rng: &mut SampleRng) -> Option<FinFunctor> {
    let env = z.cod();
    let mut keep: Vec<usize> = env
        .objects()
        .filter(|x| z.obj_map().contains(x) || rng.gen_bool(0.5))
        .collect();
    keep.dedup();
    let sub = env.full_subcategory(&keep);
    let obj_map = z
        .obj_map()
        .iter()
        .map(|x| sub.objects.iter().position(|y| y == x))
        .collect::<Option<Vec<_>>>()?;
    let mor_map = z
        .mor_map()
        .iter()
        .map(|m| sub.morphisms.iter().position(|n| n == m))
        .collect::<Option<Vec<_>>>()?;
    FinFunctor::new(z.dom().clone(), Arc::new(sub.category), obj_map, mor_map).ok()
}

/// The inclusion of a full subcategory meeting every isomorphism class.
fn essential_inclusion(b: &Arc<FinCategory>, rng: &mut SampleRng) -> FinFunctor {
    let mut reps: Vec<usize> = Vec::new();
    let mut keep = vec![false; b.num_objects()];
    for x in b.objects() {
        match reps.iter().find(|&&r| b.isomorphism(x, r).is_some()) {
            Some(_) => keep[x] = rng.gen_bool(0.4),
            None => {
                reps.push(x);
                keep[x] = true;
            }
        }
    }
    let objects: Vec<usize> = b.objects().filter(|&x| keep[x]).collect();
    inclusion(b, &objects)
}

/// Two composable functors `A -> B -> C`.
pub fn gen_composable_pair(cfg: &GenConfig, rng: &mut SampleRng) -> (FinFunctor, FinFunctor) {
    let f = gen_functor(&cfg.smaller(), rng).functor;
    let b = f.cod().clone();
    let g = match rng.gen_range(0..4) {
        0 => extend(&b, cfg, rng),
        1 => {
            let c = gen_category(cfg, rng);
            FunctorSearch::new(&b, &c).random(rng)
        }
        2 => FunctorSearch::new(&b, &Arc::new(FinCategory::terminal())).first(),
        _ => FunctorSearch::new(&b, &b).random(rng),
    };
    let g = g.unwrap_or_else(|| FinFunctor::identity(b));
    (f, g)
}

/// A random Cauchy complete category: envelopes of small categories,
/// discrete categories, groups and preorders.
pub fn gen_cauchy_complete(cfg: &GenConfig, rng: &mut SampleRng) -> Arc<FinCategory> {
    for _ in 0..RETRIES {
        let c = match rng.gen_range(0..4) {
            0 => Arc::new(FinCategory::discrete(&names("d", rng.gen_range(1..=cfg.max_objects.min(3))))),
            1 => Arc::new(deloop(&gen_group(cfg, rng))),
            2 => gen_preorder_category(cfg, rng),
            _ => {
                let a = gen_category(&cfg.smaller(), rng);
                match karoubi(&a, cfg.cap()) {
                    Ok(env) => env.category,
                    Err(_) => continue,
                }
            }
        };
        if cfg.cap().admits(&c) {
            return c;
        }
    }
    Arc::new(FinCategory::terminal())
}

// ------------------------------------------------------- enriched samples

/// One of a few small quantales.
pub fn gen_quantale(rng: &mut SampleRng) -> Quantale {
    match rng.gen_range(0..5) {
        0 => Quantale::two(),
        1 => Quantale::chain_meet(3),
        2 => Quantale::chain_meet(4),
        3 => Quantale::chain_lukasiewicz(3),
        _ => Quantale::chain_lukasiewicz(4),
    }
}

/// Raises homs until the identity and composition inequalities hold.
fn close<B: Base>(base: &B, n: usize, hom: &mut [B::Value]) {
    for a in 0..n {
        hom[a * n + a] = base.join(&hom[a * n + a], &base.unit());
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let via = base.tensor(&hom[y * n + z], &hom[x * n + y]);
                    if !base.leq(&via, &hom[x * n + z]) {
                        hom[x * n + z] = base.join(&hom[x * n + z], &via);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

pub fn gen_quant_category(cfg: &GenConfig, base: &Quantale, rng: &mut SampleRng) -> Arc<QuantCategory<Quantale>> {
    let n = rng.gen_range(1..=cfg.max_objects);
    let bottom = base.bottom();
    let mut hom: Vec<usize> = (0..n * n)
        .map(|_| {
            if rng.gen_bool(0.4) {
                bottom
            } else {
                rng.gen_range(0..base.len())
            }
        })
        .collect();
    close(base, n, &mut hom);
    Arc::new(QuantCategory::new(base.clone(), names("q", n), hom).expect("closed homs"))
}

/// A random object map into `b` and domain homs bounded by the pulled
/// back homs of `b`; half the time surjective on objects.
fn pull_back<B: Base>(
    b: &Arc<QuantCategory<B>>,
    cfg: &GenConfig,
    rng: &mut SampleRng,
    below: impl Fn(&B::Value, &mut SampleRng) -> B::Value,
) -> QuantFunctor<B> {
    let base = b.base();
    let nb = b.num_objects();
    let mut obj_map: Vec<usize> = if rng.gen_bool(0.5) {
        (0..nb).collect()
    } else {
        Vec::new()
    };
    let room = cfg.max_objects.saturating_sub(obj_map.len());
    let lo = usize::from(obj_map.is_empty());
    let extra = rng.gen_range(lo..=room.max(lo));
    for _ in 0..extra {
        obj_map.push(rng.gen_range(0..nb));
    }
    obj_map.shuffle(rng);
    let n = obj_map.len();
    let mut hom: Vec<B::Value> = (0..n * n)
        .map(|i| {
            let top = b.hom(obj_map[i / n], obj_map[i % n]);
            if rng.gen_bool(0.5) {
                top.clone()
            } else {
                below(top, rng)
            }
        })
        .collect();
    close(base, n, &mut hom);
    let a = Arc::new(QuantCategory::new(base.clone(), names("a", n), hom).expect("closed homs"));
    QuantFunctor::new(a, b.clone(), obj_map).expect("bounded by the codomain")
}

/// A functor between random categories over `base`.
pub fn gen_quant_functor(cfg: &GenConfig, base: &Quantale, rng: &mut SampleRng) -> QuantFunctor<Quantale> {
    let b = gen_quant_category(cfg, base, rng);
    let q = base.clone();
    pull_back(&b, cfg, rng, move |&top, rng| {
        q.elements().filter(|v| q.leq(v, &top)).choose(rng).expect("bottom is below")
    })
}

/// A monotone map of preorders as a functor over the two-element base.
pub fn gen_preorder_functor(cfg: &GenConfig, rng: &mut SampleRng) -> QuantFunctor<Quantale> {
    gen_quant_functor(cfg, &Quantale::two(), rng)
}

/// The same map as ordinary thin categories.
pub fn gen_thin_functor(cfg: &GenConfig, rng: &mut SampleRng) -> FinFunctor {
    two_to_set_functor(&gen_preorder_functor(cfg, rng)).expect("two-valued")
}

/// Quarter-integer distances in `[0, 3]` or infinite.
fn gen_distance(rng: &mut SampleRng) -> Dist {
    if rng.gen_bool(0.15) {
        Dist::Infinite
    } else {
        Dist::Finite(f64::from(rng.gen_range(0..=12u32)) / 4.0)
    }
}

/// A random Lawvere metric space; some points are twins at distance 0.
pub fn gen_metric_space(cfg: &GenConfig, rng: &mut SampleRng) -> Arc<QuantCategory<RPlus>> {
    let base = RPlus::default();
    let n = rng.gen_range(1..=cfg.max_objects);
    let mut hom: Vec<Dist> = (0..n * n).map(|_| gen_distance(rng)).collect();
    for x in 1..n {
        if rng.gen_ratio(1, 4) {
            let y = rng.gen_range(0..x);
            hom[x * n + y] = Dist::Finite(0.0);
            hom[y * n + x] = Dist::Finite(0.0);
        }
    }
    close(&base, n, &mut hom);
    Arc::new(QuantCategory::new(base, names("m", n), hom).expect("closed distances"))
}

/// A distance-nonincreasing map between random metric spaces.
pub fn gen_metric_map(cfg: &GenConfig, rng: &mut SampleRng) -> QuantFunctor<RPlus> {
    let b = gen_metric_space(cfg, rng);
    pull_back(&b, cfg, rng, |top, rng| match top {
        Dist::Infinite => Dist::Infinite,
        Dist::Finite(d) => {
            if rng.gen_bool(0.3) {
                Dist::Infinite
            } else {
                Dist::Finite(d + f64::from(rng.gen_range(1..=4u32)) / 4.0)
            }
        }
    })
}

/// An integer metric map with finite distances at most `max`.
pub fn gen_integer_metric_map(cfg: &GenConfig, max: u32, rng: &mut SampleRng) -> QuantFunctor<RPlus> {
    let base = RPlus::with_tolerance(0.0);
    let n = rng.gen_range(1..=cfg.max_objects);
    let mut hom: Vec<Dist> = (0..n * n)
        .map(|_| {
            if rng.gen_bool(0.2) {
                Dist::Infinite
            } else {
                Dist::Finite(f64::from(rng.gen_range(0..=max)))
            }
        })
        .collect();
    close(&base, n, &mut hom);
    let b = Arc::new(QuantCategory::new(base, names("m", n), hom).expect("closed distances"));
    pull_back(&b, cfg, rng, move |top, rng| match top {
        Dist::Finite(d) if *d < f64::from(max) && rng.gen_bool(0.7) => {
            Dist::Finite(f64::from(rng.gen_range(*d as u32..=max)))
        }
        _ => Dist::Infinite,
    })
}
