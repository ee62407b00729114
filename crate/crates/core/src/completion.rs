//! Cauchy completion: the Karoubi envelope over `Set`, absolute weights over
//! finite quantales, the comparison functor into the envelope, equivalence
//! of finite categories and Morita equivalence.

mod weights;

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::fincat::{CapExceeded, FinCategory, FinFunctor, MorId, Morphism, ObjId, SizeCap};
use crate::prof::{
    check_cauchy_dense, check_fully_faithful, is_cauchy_dense, is_fully_faithful, laxepi_check, CdWitness,
    FfWitness, LaxEpiWitness, ProfError, Verdict,
};
use crate::search::{natural_isomorphism, FunctorSearch};

pub use weights::{
    absolute_weight_witness, is_absolute_weight, is_copresheaf, is_presheaf, quant_equivalent,
    quantale_completion, QuantCompletion,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error("functor is not fully faithful")]
    NotFullyFaithful(FfWitness),
    #[error("functor is not Cauchy dense")]
    NotCauchyDense(CdWitness),
    #[error("target is not Cauchy complete: idempotent `{0}` does not split")]
    NotCauchyComplete(String),
    #[error("weight is not a presheaf")]
    NotAPresheaf,
    #[error("more than {0} functors to enumerate")]
    TooManyFunctors(usize),
    #[error("{0} candidate weights exceed the enumeration bound")]
    TooManyWeights(usize),
}

impl From<ProfError> for CompletionError {
    fn from(e: ProfError) -> Self {
        match e {
            ProfError::Cap(c) => CompletionError::Cap(c),
            ProfError::TooManyFunctors(n) => CompletionError::TooManyFunctors(n),
            other => unreachable!("unexpected profunctor error {other}"),
        }
    }
}

/// The idempotent completion of a finite category. Objects are pairs
/// `(a, e)` with `e` idempotent on `a`, named `a|e`.
#[derive(Debug, Clone)]
pub struct KaroubiEnvelope {
    pub category: Arc<FinCategory>,
    /// `(a, e)` per envelope object.
    pub pairs: Vec<(ObjId, MorId)>,
    /// Underlying morphism of the base per envelope morphism.
    pub underlying: Vec<MorId>,
    /// `z: A -> envelope`, `a |-> (a, 1_a)`.
    pub embedding: FinFunctor,
    lookup: HashMap<(ObjId, ObjId, MorId), MorId>,
}

impl KaroubiEnvelope {
    pub fn object_for(&self, a: ObjId, e: MorId) -> Option<ObjId> {
        self.pairs.iter().position(|&p| p == (a, e))
    }

    /// The envelope morphism `x -> y` with underlying morphism `f`.
    pub fn morphism_for(&self, x: ObjId, y: ObjId, f: MorId) -> Option<MorId> {
        self.lookup.get(&(x, y, f)).copied()
    }
}

/// Builds the Karoubi envelope. `cap` bounds the result.
pub fn karoubi(a: &Arc<FinCategory>, cap: SizeCap) -> Result<KaroubiEnvelope, CompletionError> {
    let pairs: Vec<(ObjId, MorId)> = a.objects().flat_map(|x| a.idempotents(x).map(move |e| (x, e))).collect();
    let hom = |x: usize, y: usize| {
        let ((xa, xe), (ya, ye)) = (pairs[x], pairs[y]);
        a.hom(xa, ya)
            .iter()
            .copied()
            .filter(move |&f| a.comp(ye, a.comp(f, xe)) == f)
    };
    let total: usize = (0..pairs.len())
        .flat_map(|x| (0..pairs.len()).map(move |y| (x, y)))
        .map(|(x, y)| hom(x, y).count())
        .sum();
    if pairs.len() > cap.max_objects || total > cap.max_morphisms {
        return Err(CapExceeded {
            objects: pairs.len(),
            morphisms: total,
            cap,
        }
        .into());
    }
    let names: Vec<String> = pairs
        .iter()
        .map(|&(x, e)| format!("{}|{}", a.object_name(x), a.morphism_name(e)))
        .collect();
    let mut morphisms = Vec::with_capacity(total);
    let mut underlying = Vec::with_capacity(total);
    let mut lookup = HashMap::new();
    for x in 0..pairs.len() {
        for y in 0..pairs.len() {
            for f in hom(x, y) {
                lookup.insert((x, y, f), morphisms.len());
                underlying.push(f);
                morphisms.push(Morphism {
                    name: format!("{}:{}->{}", a.morphism_name(f), names[x], names[y]),
                    src: x,
                    dst: y,
                });
            }
        }
    }
    let identity = pairs.iter().enumerate().map(|(x, &(_, e))| lookup[&(x, x, e)]).collect();
    let category = FinCategory::from_fn(names, morphisms.clone(), identity, |g, f| {
        let (src, dst) = (morphisms[f].src, morphisms[g].dst);
        lookup[&(src, dst, a.comp(underlying[g], underlying[f]))]
    })
    .expect("envelope of a well-formed category");
    let category = Arc::new(category);
    let obj_map: Vec<ObjId> = a
        .objects()
        .map(|x| pairs.iter().position(|&p| p == (x, a.identity(x))).expect("identity is idempotent"))
        .collect();
    let mor_map = a.morphisms().map(|f| lookup[&(obj_map[a.src(f)], obj_map[a.dst(f)], f)]).collect();
    let embedding = FinFunctor::new_unchecked(a.clone(), category.clone(), obj_map, mor_map);
    Ok(KaroubiEnvelope {
        category,
        pairs,
        underlying,
        embedding,
        lookup,
    })
}

/// Every idempotent splits: `e = s . r` with `r . s = 1`. The witness is a
/// non-split idempotent.
pub fn check_cauchy_complete(c: &FinCategory) -> Verdict<MorId> {
    for a in c.objects() {
        for e in c.idempotents(a) {
            let splits = c.objects().any(|x| {
                c.hom(a, x).iter().any(|&r| {
                    c.hom(x, a)
                        .iter()
                        .any(|&s| c.comp(s, r) == e && c.comp(r, s) == c.identity(x))
                })
            });
            if !splits {
                return Verdict::Fails(e);
            }
        }
    }
    Verdict::Holds
}

pub fn is_cauchy_complete(c: &FinCategory) -> bool {
    check_cauchy_complete(c).holds()
}

/// Which factorization `b -> Fa -> b` of the identity to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FactorChoice {
    /// Lexicographically first `(a, g, k)`.
    #[default]
    First,
    Last,
}

fn preimage(f: &FinFunctor, a: ObjId, a2: ObjId, m: MorId) -> MorId {
    f.dom()
        .hom(a, a2)
        .iter()
        .copied()
        .find(|&h| f.mor(h) == m)
        .expect("functor is full")
}

/// The functor `N_F: B -> karoubi(A)` induced by a fully faithful Cauchy
/// dense `F: A -> B`. `env` must be the envelope of `F`'s domain.
pub fn comparison_functor(
    f: &FinFunctor,
    env: &KaroubiEnvelope,
    choice: FactorChoice,
) -> Result<FinFunctor, CompletionError> {
    assert!(**env.embedding.dom() == **f.dom(), "envelope of another category");
    if let Verdict::Fails(w) = check_fully_faithful(f) {
        return Err(CompletionError::NotFullyFaithful(w));
    }
    if let Verdict::Fails(w) = check_cauchy_dense(f) {
        return Err(CompletionError::NotCauchyDense(w));
    }
    let (a_cat, b_cat) = (f.dom(), f.cod());
    // per b: (a, g: Fa -> b, k: b -> Fa) with g . k = 1_b
    let splittings: Vec<(ObjId, MorId, MorId)> = b_cat
        .objects()
        .map(|b| {
            let mut all = a_cat.objects().flat_map(|a| {
                let fa = f.obj(a);
                b_cat.hom(fa, b).iter().flat_map(move |&g| {
                    b_cat
                        .hom(b, fa)
                        .iter()
                        .filter(move |&&k| b_cat.comp(g, k) == b_cat.identity(b))
                        .map(move |&k| (a, g, k))
                })
            });
            let pick = match choice {
                FactorChoice::First => all.next(),
                FactorChoice::Last => all.last(),
            };
            pick.expect("diagonal counit of a Cauchy dense functor is surjective")
        })
        .collect();
    let obj_map: Vec<ObjId> = splittings
        .iter()
        .map(|&(a, g, k)| {
            let e = preimage(f, a, a, b_cat.comp(k, g));
            env.object_for(a, e).expect("k . g is idempotent")
        })
        .collect();
    let mor_map: Vec<MorId> = b_cat
        .morphisms()
        .map(|m| {
            let (b, b2) = (b_cat.src(m), b_cat.dst(m));
            let (a, g, _) = splittings[b];
            let (a2, _, k2) = splittings[b2];
            let x = preimage(f, a, a2, b_cat.comp(k2, b_cat.comp(m, g)));
            env.morphism_for(obj_map[b], obj_map[b2], x)
                .expect("k' m g is compatible with the idempotents")
        })
        .collect();
    Ok(FinFunctor::new(f.cod().clone(), env.category.clone(), obj_map, mor_map)
        .expect("comparison functor is a functor"))
}

/// A fully faithful, essentially surjective functor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceCertificate {
    pub functor: FinFunctor,
}

impl EquivalenceCertificate {
    pub fn verify(&self) -> bool {
        self.functor.validate().is_ok()
            && is_fully_faithful(&self.functor)
            && self.functor.is_essentially_surjective()
    }
}

struct Skeleton {
    category: Arc<FinCategory>,
    /// skeleton object index of each object
    rep: Vec<usize>,
    /// chosen isomorphism `a -> rep(a)` in the ambient category
    to_rep: Vec<MorId>,
    objects: Vec<ObjId>,
    morphism_index: HashMap<MorId, MorId>,
    ambient: Vec<MorId>,
}

fn skeleton(c: &FinCategory) -> Skeleton {
    let mut objects: Vec<ObjId> = Vec::new();
    let mut rep = Vec::with_capacity(c.num_objects());
    let mut to_rep = Vec::with_capacity(c.num_objects());
    for a in c.objects() {
        match objects.iter().enumerate().find_map(|(i, &r)| c.isomorphism(a, r).map(|iso| (i, iso))) {
            Some((i, iso)) => {
                rep.push(i);
                to_rep.push(iso);
            }
            None => {
                rep.push(objects.len());
                to_rep.push(c.identity(a));
                objects.push(a);
            }
        }
    }
    let sub = c.full_subcategory(&objects);
    let morphism_index = sub.morphisms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    Skeleton {
        category: Arc::new(sub.category),
        rep,
        to_rep,
        objects,
        morphism_index,
        ambient: sub.morphisms,
    }
}

/// A full subcategory with one object from each isomorphism class; it is
/// equivalent to `c`.
pub fn skeletal(c: &FinCategory) -> Arc<FinCategory> {
    skeleton(c).category
}

fn hom_profile(c: &FinCategory, a: ObjId) -> (usize, Vec<usize>, Vec<usize>) {
    let mut outs: Vec<usize> = c.objects().map(|b| c.hom(a, b).len()).collect();
    let mut ins: Vec<usize> = c.objects().map(|b| c.hom(b, a).len()).collect();
    outs.sort_unstable();
    ins.sort_unstable();
    (c.hom(a, a).len(), outs, ins)
}

/// Searches for an equivalence `A -> B` by comparing skeletons.
pub fn are_equivalent(
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    cap: SizeCap,
) -> Result<Option<EquivalenceCertificate>, CompletionError> {
    cap.check(a)?;
    cap.check(b)?;
    let (sa, sb) = (skeleton(a), skeleton(b));
    let (ca, cb) = (&sa.category, &sb.category);
    if ca.num_objects() != cb.num_objects() || ca.num_morphisms() != cb.num_morphisms() {
        return Ok(None);
    }
    let candidates = ca
        .objects()
        .map(|x| {
            let p = hom_profile(ca, x);
            cb.objects().filter(|&y| hom_profile(cb, y) == p).collect()
        })
        .collect();
    // injective on objects and faithful with equal sizes: an isomorphism
    let Some(phi) = FunctorSearch::new(ca, cb)
        .object_candidates(candidates)
        .injective_on_objects()
        .faithful()
        .first()
    else {
        return Ok(None);
    };
    let obj_map: Vec<ObjId> = a.objects().map(|x| sb.objects[phi.obj(sa.rep[x])]).collect();
    let mor_map: Vec<MorId> = a
        .morphisms()
        .map(|m| {
            let (x, y) = (a.src(m), a.dst(m));
            let back = a.inverse(sa.to_rep[x]).expect("chosen morphism is invertible");
            let moved = a.comp(sa.to_rep[y], a.comp(m, back));
            sb.ambient[phi.mor(sa.morphism_index[&moved])]
        })
        .collect();
    let functor = FinFunctor::new(a.clone(), b.clone(), obj_map, mor_map).expect("transport of an isomorphism");
    let cert = EquivalenceCertificate { functor };
    debug_assert!(cert.verify());
    Ok(Some(cert))
}

/// `A -> karoubi(A) ~ karoubi(B) <- B`.
#[derive(Debug, Clone)]
pub struct MoritaZigzag {
    pub left: FinFunctor,
    pub equivalence: FinFunctor,
    pub right: FinFunctor,
}

impl MoritaZigzag {
    /// Each leg is fully faithful and Cauchy dense; the middle leg is an
    /// equivalence.
    pub fn verify(&self) -> bool {
        let legs_ok = [&self.left, &self.equivalence, &self.right]
            .iter()
            .all(|f| f.validate().is_ok() && is_fully_faithful(f) && is_cauchy_dense(f));
        legs_ok
            && self.equivalence.is_essentially_surjective()
            && **self.left.cod() == **self.equivalence.dom()
            && **self.right.cod() == **self.equivalence.cod()
    }
}

pub fn morita_equivalent(
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    cap: SizeCap,
) -> Result<Option<MoritaZigzag>, CompletionError> {
    let (ka, kb) = (karoubi(a, cap)?, karoubi(b, cap)?);
    Ok(are_equivalent(&ka.category, &kb.category, cap)?.map(|cert| MoritaZigzag {
        left: ka.embedding,
        equivalence: cert.functor,
        right: kb.embedding,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrecompositionFailure {
    NotFullyFaithful(LaxEpiWitness),
    /// A functor `A -> C` not isomorphic to any restriction.
    NotEssentiallySurjective(FinFunctor),
}

/// Whether `[F, C]: [B, C] -> [A, C]` is an equivalence. `C` must be
/// Cauchy complete.
pub fn precomposition_equivalence_check(
    f: &FinFunctor,
    c: &Arc<FinCategory>,
    cap: SizeCap,
    limit: usize,
) -> Result<Verdict<PrecompositionFailure>, CompletionError> {
    cap.check(f.dom())?;
    if let Verdict::Fails(e) = check_cauchy_complete(c) {
        return Err(CompletionError::NotCauchyComplete(c.morphism_name(e).to_string()));
    }
    if let Verdict::Fails(w) = laxepi_check(f, c, cap, limit)? {
        return Ok(Verdict::Fails(PrecompositionFailure::NotFullyFaithful(w)));
    }
    let restricted: Vec<FinFunctor> = FunctorSearch::new(f.cod(), c)
        .collect(limit)
        .map_err(CompletionError::TooManyFunctors)?
        .iter()
        .map(|g| f.then(g))
        .collect();
    let mut missing = None;
    let mut seen = 0usize;
    FunctorSearch::new(f.dom(), c).for_each(|h| {
        seen += 1;
        if seen > limit {
            return ControlFlow::Break(());
        }
        if !restricted.iter().any(|gf| natural_isomorphism(gf, h).is_some()) {
            missing = Some(h.clone());
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    if let Some(h) = missing {
        return Ok(Verdict::Fails(PrecompositionFailure::NotEssentiallySurjective(h)));
    }
    if seen > limit {
        return Err(CompletionError::TooManyFunctors(limit));
    }
    Ok(Verdict::Holds)
}

/// Summary used by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeSummary {
    pub objects: usize,
    pub morphisms: usize,
    pub objects_up_to_iso: usize,
}

pub fn envelope_summary(env: &KaroubiEnvelope) -> EnvelopeSummary {
    EnvelopeSummary {
        objects: env.category.num_objects(),
        morphisms: env.category.num_morphisms(),
        objects_up_to_iso: skeleton(&env.category).objects.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{deloop, Monoid};
    use crate::prof::DEFAULT_FUNCTOR_LIMIT;

    fn arc(c: FinCategory) -> Arc<FinCategory> {
        Arc::new(c)
    }

    #[test]
    fn envelope_of_group_is_the_group() {
        let g = arc(deloop(&Monoid::cyclic(3)));
        let env = karoubi(&g, SizeCap::VALIDATION).unwrap();
        assert_eq!(env.category.num_objects(), 1);
        assert_eq!(env.category.object_name(0), "*|0");
        assert!(are_equivalent(&g, &env.category, SizeCap::VALIDATION).unwrap().is_some());
    }

    #[test]
    fn envelope_of_idempotent_monoid() {
        let m = arc(deloop(&Monoid::idempotent_pair()));
        let env = karoubi(&m, SizeCap::VALIDATION).unwrap();
        assert_eq!(env.category.num_objects(), 2);
        assert_eq!(env.category.validate(SizeCap::VALIDATION), Ok(()));
        assert!(is_cauchy_complete(&env.category));
        assert!(!is_cauchy_complete(&m));
        assert!(is_fully_faithful(&env.embedding) && is_cauchy_dense(&env.embedding));
        // hom((*,e),(*,e)) = {e}, hom((*,1),(*,e)) = {e}, and so on
        assert_eq!(env.category.num_morphisms(), 5);
        assert_eq!(envelope_summary(&env).objects_up_to_iso, 2);
    }

    #[test]
    fn envelope_of_poset_is_itself() {
        let p = arc(FinCategory::from_preorder(&["a", "b", "c"], |x, y| x <= y));
        let env = karoubi(&p, SizeCap::VALIDATION).unwrap();
        assert_eq!(env.category.num_objects(), 3);
        assert_eq!(env.category.num_morphisms(), p.num_morphisms());
    }

    #[test]
    fn envelope_respects_cap() {
        let m = arc(deloop(&Monoid::idempotent_pair()));
        let tiny = SizeCap { max_objects: 1, max_morphisms: 10 };
        assert!(matches!(karoubi(&m, tiny), Err(CompletionError::Cap(_))));
    }

    #[test]
    fn equivalence_examples() {
        let z2 = arc(deloop(&Monoid::cyclic(2)));
        let z3 = arc(deloop(&Monoid::cyclic(3)));
        assert!(are_equivalent(&z2, &z3, SizeCap::VALIDATION).unwrap().is_none());
        let point = arc(FinCategory::discrete(&["x"]));
        let pair = arc(FinCategory::indiscrete(&["a", "b"]));
        let cert = are_equivalent(&pair, &point, SizeCap::VALIDATION).unwrap().unwrap();
        assert!(cert.verify());
        let cert = are_equivalent(&point, &pair, SizeCap::VALIDATION).unwrap().unwrap();
        assert!(cert.verify());
    }

    #[test]
    fn comparison_functor_for_identity_is_z() {
        let m = arc(deloop(&Monoid::idempotent_pair()));
        let env = karoubi(&m, SizeCap::VALIDATION).unwrap();
        let id = FinFunctor::identity(m.clone());
        let n = comparison_functor(&id, &env, FactorChoice::First).unwrap();
        assert!(natural_isomorphism(&n, &env.embedding).is_some());
    }

    #[test]
    fn comparison_functor_on_envelope_is_equivalence() {
        let m = arc(deloop(&Monoid::idempotent_pair()));
        let env = karoubi(&m, SizeCap::VALIDATION).unwrap();
        let z = env.embedding.clone();
        for choice in [FactorChoice::First, FactorChoice::Last] {
            let n = comparison_functor(&z, &env, choice).unwrap();
            assert!(is_fully_faithful(&n) && n.is_essentially_surjective());
            assert!(natural_isomorphism(&z.then(&n), &env.embedding).is_some());
        }
        let first = comparison_functor(&z, &env, FactorChoice::First).unwrap();
        let last = comparison_functor(&z, &env, FactorChoice::Last).unwrap();
        assert!(natural_isomorphism(&first, &last).is_some());
    }

    #[test]
    fn comparison_functor_rejects_non_dense_input() {
        let a = arc(FinCategory::discrete(&["bot", "top"]));
        let b = arc(FinCategory::walking_arrow());
        let mor = vec![b.identity(0), b.identity(1)];
        let f = FinFunctor::new(a.clone(), b, vec![0, 1], mor).unwrap();
        let env = karoubi(&a, SizeCap::VALIDATION).unwrap();
        assert!(matches!(
            comparison_functor(&f, &env, FactorChoice::First),
            Err(CompletionError::NotFullyFaithful(_))
        ));
    }

    #[test]
    fn morita_examples() {
        let m = arc(deloop(&Monoid::idempotent_pair()));
        let env = karoubi(&m, SizeCap::VALIDATION).unwrap();
        let zig = morita_equivalent(&m, &env.category, SizeCap::VALIDATION).unwrap().unwrap();
        assert!(zig.verify());
        let z2 = arc(deloop(&Monoid::cyclic(2)));
        let z3 = arc(deloop(&Monoid::cyclic(3)));
        assert!(morita_equivalent(&z2, &z3, SizeCap::VALIDATION).unwrap().is_none());
    }

    #[test]
    fn precomposition_examples() {
        let d = arc(FinCategory::discrete(&["0", "1"]));
        let m = arc(deloop(&Monoid::idempotent_pair()));
        let env = karoubi(&m, SizeCap::VALIDATION).unwrap();
        let v = precomposition_equivalence_check(&env.embedding, &d, SizeCap::ENUMERATION, DEFAULT_FUNCTOR_LIMIT);
        assert!(v.unwrap().holds());

        let a = arc(FinCategory::discrete(&["x", "y"]));
        let b = arc(FinCategory::discrete(&["x"]));
        let collapse = FinFunctor::new(a, b, vec![0, 0], vec![0, 0]).unwrap();
        let v = precomposition_equivalence_check(&collapse, &d, SizeCap::ENUMERATION, DEFAULT_FUNCTOR_LIMIT).unwrap();
        assert!(matches!(v, Verdict::Fails(PrecompositionFailure::NotEssentiallySurjective(_))));

        // targets with a non-split idempotent are refused
        let id = FinFunctor::identity(d.clone());
        assert!(matches!(
            precomposition_equivalence_check(&id, &m, SizeCap::ENUMERATION, DEFAULT_FUNCTOR_LIMIT),
            Err(CompletionError::NotCauchyComplete(_))
        ));
    }
}
