//! Lax epimorphisms: `F: A -> B` such that `[F, C]: [B, C] -> [A, C]` is
//! fully faithful, tested against a finite target `C`.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{compose_profunctors, counit_map, lower_star, upper_star, ProfError, SetProfunctor, Verdict};
use crate::fincat::{FinCategory, FinFunctor, MorId, SizeCap};
use crate::search::{FunctorSearch, NaturalSearch};

/// Stop enumerating `B -> C` after this many functors.
pub const DEFAULT_FUNCTOR_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LaxEpiFailure {
    /// Two transformations `G => H` that agree after whiskering with `F`.
    NotFaithful { first: Vec<MorId>, second: Vec<MorId> },
    /// A transformation `GF => HF` that is not a whiskering.
    NotFull { transformation: Vec<MorId> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaxEpiWitness {
    pub left: FinFunctor,
    pub right: FinFunctor,
    pub failure: LaxEpiFailure,
}

/// Decides whether precomposition with `f` is fully faithful on `[B, C]`.
pub fn laxepi_check(
    f: &FinFunctor,
    c: &Arc<FinCategory>,
    cap: SizeCap,
    limit: usize,
) -> Result<Verdict<LaxEpiWitness>, ProfError> {
    cap.check(f.cod())?;
    cap.check(c)?;
    let functors = FunctorSearch::new(f.cod(), c)
        .collect(limit)
        .map_err(ProfError::TooManyFunctors)?;
    let restricted: Vec<FinFunctor> = functors.iter().map(|g| f.then(g)).collect();
    for (g, gf) in functors.iter().zip(&restricted) {
        for (h, hf) in functors.iter().zip(&restricted) {
            let upstairs = NaturalSearch::new(g, h).collect();
            let mut whiskered: HashMap<Vec<MorId>, usize> = HashMap::new();
            for (i, theta) in upstairs.iter().enumerate() {
                let w: Vec<MorId> = f.obj_map().iter().map(|&fa| theta[fa]).collect();
                if let Some(&j) = whiskered.get(&w) {
                    return Ok(Verdict::Fails(LaxEpiWitness {
                        left: g.clone(),
                        right: h.clone(),
                        failure: LaxEpiFailure::NotFaithful {
                            first: upstairs[j].clone(),
                            second: theta.clone(),
                        },
                    }));
                }
                whiskered.insert(w, i);
            }
            let mut missing = None;
            NaturalSearch::new(gf, hf).for_each(|sigma| {
                if whiskered.contains_key(sigma) {
                    std::ops::ControlFlow::Continue(())
                } else {
                    missing = Some(sigma.to_vec());
                    std::ops::ControlFlow::Break(())
                }
            });
            if let Some(transformation) = missing {
                return Ok(Verdict::Fails(LaxEpiWitness {
                    left: g.clone(),
                    right: h.clone(),
                    failure: LaxEpiFailure::NotFull { transformation },
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// The collage of `F_* . F^*: B -/-> B`, whose elements at `(b, b')` are the
/// coend classes of factorizations `b -> Fa -> b'`. When the counit is not
/// injective, the two inclusions of `B` and the transformation between
/// them given by the classes of `1_Fa` show that precomposition is not full.
pub fn coend_collage(f: &FinFunctor) -> Arc<FinCategory> {
    let q = compose_profunctors(&upper_star(f), &lower_star(f))
        .expect("stars share the middle category")
        .profunctor;
    q.collage().0
}

/// The collage of `B(-, =)` with every morphism outside the image of the
/// counit doubled. When the counit is not surjective, the two transformations
/// between the inclusions of `B` through either copy agree on the image
/// of `F`, so precomposition is not faithful.
pub fn doubled_image_collage(f: &FinFunctor) -> Arc<FinCategory> {
    let b = f.cod().clone();
    let image: HashSet<MorId> = b
        .objects()
        .flat_map(|x| b.objects().map(move |y| (x, y)))
        .flat_map(|(x, y)| counit_map(f, x, y).expect("in range").counit)
        .collect();
    // elements of M(x, y): per morphism, one copy if in the image, else two
    let mut elements: Vec<Vec<(MorId, usize)>> = vec![Vec::new(); b.num_objects().pow(2)];
    let mut position: HashMap<(MorId, usize), usize> = HashMap::new();
    for x in b.objects() {
        for y in b.objects() {
            let list = &mut elements[x * b.num_objects() + y];
            for &m in b.hom(x, y) {
                let copies = if image.contains(&m) { 1 } else { 2 };
                for copy in 0..copies {
                    position.insert((m, copy), list.len());
                    list.push((m, copy));
                }
            }
        }
    }
    let n = b.num_objects();
    let normal = |m: MorId, copy: usize| if image.contains(&m) { (m, 0) } else { (m, copy) };
    let m_prof = SetProfunctor::from_fns(
        b.clone(),
        b.clone(),
        |x, y| elements[x * n + y].len(),
        |h, x, e| {
            let (m, copy) = elements[x * n + b.src(h)][e];
            position[&normal(b.comp(h, m), copy)]
        },
        |k, y, e| {
            let (m, copy) = elements[b.dst(k) * n + y][e];
            position[&normal(b.comp(m, k), copy)]
        },
    );
    debug_assert_eq!(m_prof.validate(), Ok(()));
    m_prof.collage().0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{deloop, deloop_hom, Monoid, MonoidHom};

    fn hom(m: usize, n: usize, map: Vec<usize>) -> FinFunctor {
        let f = MonoidHom::new(Arc::new(Monoid::cyclic(m)), Arc::new(Monoid::cyclic(n)), map).unwrap();
        deloop_hom(&f)
    }

    #[test]
    fn surjection_is_lax_epi_into_z2() {
        let c = Arc::new(deloop(&Monoid::cyclic(2)));
        let v = laxepi_check(&hom(4, 2, vec![0, 1, 0, 1]), &c, SizeCap::VALIDATION, DEFAULT_FUNCTOR_LIMIT).unwrap();
        assert!(v.holds());
    }

    #[test]
    fn coend_collage_refutes_non_injective_counit() {
        // Z2 -> Z4 hits every morphism but with two factorizations each
        let f = hom(2, 4, vec![0, 2]);
        let p = coend_collage(&f);
        assert_eq!(p.validate(SizeCap::VALIDATION), Ok(()));
        let v = laxepi_check(&f, &p, SizeCap::VALIDATION, DEFAULT_FUNCTOR_LIMIT).unwrap();
        assert!(matches!(v.witness().unwrap().failure, LaxEpiFailure::NotFull { .. }));
    }

    #[test]
    fn doubled_collage_refutes_non_surjective_counit() {
        let f = FinFunctor::new(
            Arc::new(FinCategory::empty()),
            Arc::new(FinCategory::terminal()),
            vec![],
            vec![],
        )
        .unwrap();
        let m = doubled_image_collage(&f);
        assert_eq!(m.validate(SizeCap::VALIDATION), Ok(()));
        assert_eq!(m.num_morphisms(), 4);
        let v = laxepi_check(&f, &m, SizeCap::VALIDATION, DEFAULT_FUNCTOR_LIMIT).unwrap();
        assert!(matches!(v.witness().unwrap().failure, LaxEpiFailure::NotFaithful { .. }));
    }

    #[test]
    fn collapse_is_refuted_by_its_coend_collage() {
        let a = Arc::new(FinCategory::discrete(&["x", "y"]));
        let b = Arc::new(FinCategory::discrete(&["x"]));
        let f = FinFunctor::new(a, b, vec![0, 0], vec![0, 0]).unwrap();
        let p = coend_collage(&f);
        let v = laxepi_check(&f, &p, SizeCap::VALIDATION, DEFAULT_FUNCTOR_LIMIT).unwrap();
        assert!(matches!(v.witness().unwrap().failure, LaxEpiFailure::NotFull { .. }));
        // no two-object discrete target detects it
        let d = Arc::new(FinCategory::discrete(&["0", "1"]));
        assert!(laxepi_check(&f, &d, SizeCap::VALIDATION, DEFAULT_FUNCTOR_LIMIT).unwrap().holds());
    }

    #[test]
    fn cap_is_enforced() {
        let f = hom(4, 2, vec![0, 1, 0, 1]);
        let c = Arc::new(deloop(&Monoid::cyclic(7)));
        let tiny = SizeCap { max_objects: 1, max_morphisms: 4 };
        assert!(matches!(laxepi_check(&f, &c, tiny, 10), Err(ProfError::Cap(_))));
    }
}
