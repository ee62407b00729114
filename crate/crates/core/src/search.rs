//! Backtracking enumeration of functors and natural transformations between
//! finite categories.

use std::ops::ControlFlow;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::RngCore;

use crate::fincat::{FinCategory, FinFunctor, MorId, ObjId};

/// Enumerates functors `dom -> cod`, optionally restricted.
pub struct FunctorSearch<'a> {
    dom: &'a Arc<FinCategory>,
    cod: &'a Arc<FinCategory>,
    object_candidates: Vec<Vec<ObjId>>,
    injective_on_objects: bool,
    injective_on_homs: bool,
}

struct MorPlan {
    /// Non-identity morphisms in assignment order.
    order: Vec<MorId>,
    /// For `order[i]`, composition triples `(g, f, gf)` whose last assigned
    /// member is `order[i]`.
    checks: Vec<Vec<(MorId, MorId, MorId)>>,
    /// For `order[i]`, earlier morphisms in the same hom-set.
    siblings: Vec<Vec<MorId>>,
}

impl<'a> FunctorSearch<'a> {
    pub fn new(dom: &'a Arc<FinCategory>, cod: &'a Arc<FinCategory>) -> Self {
        FunctorSearch {
            dom,
            cod,
            object_candidates: vec![cod.objects().collect(); dom.num_objects()],
            injective_on_objects: false,
            injective_on_homs: false,
        }
    }

    pub fn object_candidates(mut self, candidates: Vec<Vec<ObjId>>) -> Self {
        assert_eq!(candidates.len(), self.dom.num_objects());
        self.object_candidates = candidates;
        self
    }

    pub fn injective_on_objects(mut self) -> Self {
        self.injective_on_objects = true;
        self
    }

    /// Only functors that are injective on every hom-set (faithful).
    pub fn faithful(mut self) -> Self {
        self.injective_on_homs = true;
        self
    }

    fn plan(&self) -> MorPlan {
        let a = &**self.dom;
        let order: Vec<MorId> = a.morphisms().filter(|&f| !a.is_identity(f)).collect();
        let mut rank = vec![usize::MAX; a.num_morphisms()];
        for (i, &f) in order.iter().enumerate() {
            rank[f] = i;
        }
        let mut checks = vec![Vec::new(); order.len()];
        for &g in &order {
            for &f in &order {
                if let Some(gf) = a.compose(g, f) {
                    let last = [g, f, gf]
                        .iter()
                        .filter(|&&x| !a.is_identity(x))
                        .map(|&x| rank[x])
                        .max()
                        .expect("g is not an identity");
                    checks[last].push((g, f, gf));
                }
            }
        }
        let siblings = order
            .iter()
            .enumerate()
            .map(|(i, &f)| {
                order[..i]
                    .iter()
                    .copied()
                    .filter(|&h| a.src(h) == a.src(f) && a.dst(h) == a.dst(f))
                    .collect()
            })
            .collect();
        MorPlan {
            order,
            checks,
            siblings,
        }
    }

    /// Calls `visit` on each functor until it breaks. Returns whether the
    /// search was cut short.
    pub fn for_each(&self, mut visit: impl FnMut(&FinFunctor) -> ControlFlow<()>) -> bool {
        self.run(None, &mut visit)
    }

    /// Like [`for_each`](Self::for_each) but with candidates tried in a
    /// random order.
    pub fn for_each_shuffled(
        &self,
        rng: &mut dyn RngCore,
        mut visit: impl FnMut(&FinFunctor) -> ControlFlow<()>,
    ) -> bool {
        self.run(Some(rng), &mut visit)
    }

    pub fn collect(&self, limit: usize) -> Result<Vec<FinFunctor>, usize> {
        let mut out = Vec::new();
        let cut = self.for_each(|f| {
            if out.len() == limit {
                return ControlFlow::Break(());
            }
            out.push(f.clone());
            ControlFlow::Continue(())
        });
        if cut {
            Err(limit)
        } else {
            Ok(out)
        }
    }

    pub fn first(&self) -> Option<FinFunctor> {
        let mut found = None;
        self.for_each(|f| {
            found = Some(f.clone());
            ControlFlow::Break(())
        });
        found
    }

    pub fn random(&self, rng: &mut dyn RngCore) -> Option<FinFunctor> {
        let mut found = None;
        self.for_each_shuffled(rng, |f| {
            found = Some(f.clone());
            ControlFlow::Break(())
        });
        found
    }

    fn run(
        &self,
        mut rng: Option<&mut dyn RngCore>,
        visit: &mut dyn FnMut(&FinFunctor) -> ControlFlow<()>,
    ) -> bool {
        let plan = self.plan();
        let mut obj_map = vec![usize::MAX; self.dom.num_objects()];
        let mut mor_map = vec![usize::MAX; self.dom.num_morphisms()];
        self.objects(0, &plan, &mut obj_map, &mut mor_map, &mut rng, visit)
            .is_break()
    }

    fn objects(
        &self,
        next: usize,
        plan: &MorPlan,
        obj_map: &mut Vec<ObjId>,
        mor_map: &mut Vec<MorId>,
        rng: &mut Option<&mut dyn RngCore>,
        visit: &mut dyn FnMut(&FinFunctor) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let (a, c) = (&**self.dom, &**self.cod);
        if next == a.num_objects() {
            for x in a.objects() {
                mor_map[a.identity(x)] = c.identity(obj_map[x]);
            }
            return self.morphisms(0, plan, obj_map, mor_map, rng, visit);
        }
        let mut candidates = self.object_candidates[next].clone();
        if let Some(r) = rng.as_deref_mut() {
            candidates.shuffle(r);
        }
        for y in candidates {
            if self.injective_on_objects && obj_map[..next].contains(&y) {
                continue;
            }
            obj_map[next] = y;
            // every hom that is inhabited in the domain must be inhabited in the codomain
            let feasible = (0..=next).all(|x| {
                (a.hom(x, next).is_empty() || !c.hom(obj_map[x], y).is_empty())
                    && (a.hom(next, x).is_empty() || !c.hom(y, obj_map[x]).is_empty())
            });
            if feasible {
                self.objects(next + 1, plan, obj_map, mor_map, rng, visit)?;
            }
        }
        obj_map[next] = usize::MAX;
        ControlFlow::Continue(())
    }

    fn morphisms(
        &self,
        next: usize,
        plan: &MorPlan,
        obj_map: &[ObjId],
        mor_map: &mut Vec<MorId>,
        rng: &mut Option<&mut dyn RngCore>,
        visit: &mut dyn FnMut(&FinFunctor) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let (a, c) = (&**self.dom, &**self.cod);
        if next == plan.order.len() {
            let f = FinFunctor::new_unchecked(
                self.dom.clone(),
                self.cod.clone(),
                obj_map.to_vec(),
                mor_map.clone(),
            );
            return visit(&f);
        }
        let m = plan.order[next];
        let mut candidates = c.hom(obj_map[a.src(m)], obj_map[a.dst(m)]).to_vec();
        if let Some(r) = rng.as_deref_mut() {
            candidates.shuffle(r);
        }
        for y in candidates {
            if self.injective_on_homs {
                if plan.siblings[next].iter().any(|&s| mor_map[s] == y) {
                    continue;
                }
                // the identity in this hom-set already took the target identity
                if a.src(m) == a.dst(m) && y == c.identity(obj_map[a.src(m)]) {
                    continue;
                }
            }
            mor_map[m] = y;
            let ok = plan.checks[next]
                .iter()
                .all(|&(g, f, gf)| c.compose(mor_map[g], mor_map[f]) == Some(mor_map[gf]));
            if ok {
                self.morphisms(next + 1, plan, obj_map, mor_map, rng, visit)?;
            }
        }
        mor_map[m] = usize::MAX;
        ControlFlow::Continue(())
    }
}

/// Enumerates natural transformations `g => h` between parallel functors.
/// Components are indexed by domain object.
pub struct NaturalSearch<'a> {
    g: &'a FinFunctor,
    h: &'a FinFunctor,
    isos_only: bool,
}

impl<'a> NaturalSearch<'a> {
    pub fn new(g: &'a FinFunctor, h: &'a FinFunctor) -> Self {
        assert!(
            **g.dom() == **h.dom() && **g.cod() == **h.cod(),
            "natural transformations need parallel functors"
        );
        NaturalSearch {
            g,
            h,
            isos_only: false,
        }
    }

    pub fn isomorphisms(mut self) -> Self {
        self.isos_only = true;
        self
    }

    pub fn for_each(&self, mut visit: impl FnMut(&[MorId]) -> ControlFlow<()>) -> bool {
        let a = &**self.g.dom();
        let c = &**self.g.cod();
        // naturality squares to check once both ends are assigned
        let mut checks = vec![Vec::new(); a.num_objects()];
        for m in a.morphisms() {
            if a.is_identity(m) {
                continue;
            }
            checks[a.src(m).max(a.dst(m))].push(m);
        }
        let candidates: Vec<Vec<MorId>> = a
            .objects()
            .map(|x| {
                c.hom(self.g.obj(x), self.h.obj(x))
                    .iter()
                    .copied()
                    .filter(|&t| !self.isos_only || c.inverse(t).is_some())
                    .collect()
            })
            .collect();
        let mut comps = vec![usize::MAX; a.num_objects()];
        self.step(0, &candidates, &checks, &mut comps, &mut visit)
            .is_break()
    }

    fn step(
        &self,
        next: usize,
        candidates: &[Vec<MorId>],
        checks: &[Vec<MorId>],
        comps: &mut Vec<MorId>,
        visit: &mut dyn FnMut(&[MorId]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let a = &**self.g.dom();
        let c = &**self.g.cod();
        if next == comps.len() {
            return visit(comps);
        }
        for &t in &candidates[next] {
            comps[next] = t;
            let natural = checks[next].iter().all(|&m| {
                let (s, d) = (a.src(m), a.dst(m));
                c.comp(self.h.mor(m), comps[s]) == c.comp(comps[d], self.g.mor(m))
            });
            if natural {
                self.step(next + 1, candidates, checks, comps, visit)?;
            }
        }
        comps[next] = usize::MAX;
        ControlFlow::Continue(())
    }

    pub fn collect(&self) -> Vec<Vec<MorId>> {
        let mut out = Vec::new();
        self.for_each(|t| {
            out.push(t.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    pub fn first(&self) -> Option<Vec<MorId>> {
        let mut found = None;
        self.for_each(|t| {
            found = Some(t.to_vec());
            ControlFlow::Break(())
        });
        found
    }
}

/// A natural isomorphism `g => h`, if one exists.
pub fn natural_isomorphism(g: &FinFunctor, h: &FinFunctor) -> Option<Vec<MorId>> {
    NaturalSearch::new(g, h).isomorphisms().first()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{deloop, Monoid};

    #[test]
    fn endofunctors_of_z2() {
        let z2 = Arc::new(deloop(&Monoid::cyclic(2)));
        let all = FunctorSearch::new(&z2, &z2).collect(100).unwrap();
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn functors_from_walking_arrow_pick_arrows() {
        let arrow = Arc::new(FinCategory::walking_arrow());
        let z3 = Arc::new(deloop(&Monoid::cyclic(3)));
        // a functor from the walking arrow is a morphism of the target
        assert_eq!(FunctorSearch::new(&arrow, &z3).collect(100).unwrap().len(), 3);
        assert_eq!(FunctorSearch::new(&arrow, &arrow).collect(100).unwrap().len(), 3);
    }

    #[test]
    fn faithful_search_filters() {
        let z4 = Arc::new(deloop(&Monoid::cyclic(4)));
        let z2 = Arc::new(deloop(&Monoid::cyclic(2)));
        assert_eq!(FunctorSearch::new(&z4, &z2).collect(10).unwrap().len(), 2);
        assert!(FunctorSearch::new(&z4, &z2).faithful().first().is_none());
        // automorphisms of Z4: x -> x and x -> -x
        assert_eq!(FunctorSearch::new(&z4, &z4).faithful().collect(10).unwrap().len(), 2);
    }

    #[test]
    fn collect_reports_limit() {
        let z3 = Arc::new(deloop(&Monoid::cyclic(3)));
        let arrow = Arc::new(FinCategory::walking_arrow());
        assert_eq!(FunctorSearch::new(&arrow, &z3).collect(2), Err(2));
    }

    #[test]
    fn natural_transformations_between_group_functors_are_intertwiners() {
        // endomorphisms of the identity on BZ3: the centre, all of Z3
        let z3 = Arc::new(deloop(&Monoid::cyclic(3)));
        let id = FinFunctor::identity(z3);
        assert_eq!(NaturalSearch::new(&id, &id).collect().len(), 3);
        assert!(natural_isomorphism(&id, &id).is_some());
    }

    #[test]
    fn no_isomorphism_between_distinct_arrow_endpoints() {
        let arrow = Arc::new(FinCategory::walking_arrow());
        let one = Arc::new(FinCategory::terminal());
        let at_bot = FinFunctor::new(one.clone(), arrow.clone(), vec![0], vec![arrow.identity(0)]).unwrap();
        let at_top = FinFunctor::new(one, arrow.clone(), vec![1], vec![arrow.identity(1)]).unwrap();
        assert_eq!(NaturalSearch::new(&at_bot, &at_top).collect().len(), 1);
        assert!(natural_isomorphism(&at_bot, &at_top).is_none());
    }
}
