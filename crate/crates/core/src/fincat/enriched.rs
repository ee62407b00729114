//! Categories enriched in a posetal base: preorders over `2`, Lawvere
//! metric spaces over `[0, inf]`, and categories over finite quantales.

use std::sync::Arc;

use thiserror::Error;

use super::{FinCategory, FinFunctor, MorId, ObjId};
use crate::base::{Base, Quantale};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnrichedError {
    #[error("hom table has {got} entries, expected {expected}")]
    Shape { got: usize, expected: usize },
    #[error("identity fails at `{0}`: unit is not below hom(a, a)")]
    Identity(String),
    #[error("composition fails at ({a}, {b}, {c}): hom(b,c) (x) hom(a,b) = {lhs} is not below hom(a,c) = {rhs}")]
    Composition {
        a: String,
        b: String,
        c: String,
        lhs: String,
        rhs: String,
    },
    #[error("object map has the wrong length or values out of range")]
    ObjectMap,
    #[error("functor is not monotone on homs at ({0}, {1})")]
    NotMonotone(String, String),
    #[error("base is not the two-element quantale")]
    NotTwo,
}

/// A category enriched in `B`: a finite set of objects with a hom value per
/// ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantCategory<B: Base> {
    base: B,
    objects: Vec<String>,
    hom: Vec<B::Value>,
}

impl<B: Base> QuantCategory<B> {
    /// Builds a category, checking the identity and composition inequalities.
    pub fn new(base: B, objects: Vec<String>, hom: Vec<B::Value>) -> Result<Self, EnrichedError> {
        let c = Self::from_parts(base, objects, hom)?;
        c.validate()?;
        Ok(c)
    }

    /// Shape checks only.
    pub fn from_parts(base: B, objects: Vec<String>, hom: Vec<B::Value>) -> Result<Self, EnrichedError> {
        let n = objects.len();
        if hom.len() != n * n {
            return Err(EnrichedError::Shape {
                got: hom.len(),
                expected: n * n,
            });
        }
        Ok(QuantCategory { base, objects, hom })
    }

    /// Builds a category from a hom function.
    pub fn from_fn(
        base: B,
        objects: Vec<String>,
        hom: impl Fn(ObjId, ObjId) -> B::Value,
    ) -> Result<Self, EnrichedError> {
        let n = objects.len();
        let values = (0..n * n).map(|i| hom(i / n, i % n)).collect();
        Self::new(base, objects, values)
    }

    pub fn validate(&self) -> Result<(), EnrichedError> {
        let b = &self.base;
        let unit = b.unit();
        for a in self.objects() {
            if !b.leq(&unit, self.hom(a, a)) {
                return Err(EnrichedError::Identity(self.objects[a].clone()));
            }
        }
        for x in self.objects() {
            for y in self.objects() {
                for z in self.objects() {
                    let lhs = b.tensor(self.hom(y, z), self.hom(x, y));
                    if !b.leq(&lhs, self.hom(x, z)) {
                        return Err(EnrichedError::Composition {
                            a: self.objects[x].clone(),
                            b: self.objects[y].clone(),
                            c: self.objects[z].clone(),
                            lhs: b.render(&lhs),
                            rhs: b.render(self.hom(x, z)),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjId> {
        0..self.objects.len()
    }

    pub fn object_name(&self, a: ObjId) -> &str {
        &self.objects[a]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &B::Value {
        &self.hom[a * self.objects.len() + b]
    }

    /// `a` and `b` are isomorphic: `I <= hom(a,b)` and `I <= hom(b,a)`.
    pub fn isomorphic(&self, a: ObjId, b: ObjId) -> bool {
        let unit = self.base.unit();
        self.base.leq(&unit, self.hom(a, b)) && self.base.leq(&unit, self.hom(b, a))
    }

    pub fn opposite(&self) -> Self {
        let n = self.num_objects();
        QuantCategory {
            base: self.base.clone(),
            objects: self.objects.clone(),
            hom: (0..n * n).map(|i| self.hom(i % n, i / n).clone()).collect(),
        }
    }
}

/// A `B`-functor: an object map that does not decrease hom values.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantFunctor<B: Base> {
    dom: Arc<QuantCategory<B>>,
    cod: Arc<QuantCategory<B>>,
    obj_map: Vec<ObjId>,
}

impl<B: Base> QuantFunctor<B> {
    pub fn new(
        dom: Arc<QuantCategory<B>>,
        cod: Arc<QuantCategory<B>>,
        obj_map: Vec<ObjId>,
    ) -> Result<Self, EnrichedError> {
        if obj_map.len() != dom.num_objects() || obj_map.iter().any(|&x| x >= cod.num_objects()) {
            return Err(EnrichedError::ObjectMap);
        }
        let base = dom.base();
        for a in dom.objects() {
            for a2 in dom.objects() {
                if !base.leq(dom.hom(a, a2), cod.hom(obj_map[a], obj_map[a2])) {
                    return Err(EnrichedError::NotMonotone(
                        dom.object_name(a).to_string(),
                        dom.object_name(a2).to_string(),
                    ));
                }
            }
        }
        Ok(QuantFunctor { dom, cod, obj_map })
    }

    pub fn identity(c: Arc<QuantCategory<B>>) -> Self {
        let obj_map = c.objects().collect();
        QuantFunctor {
            dom: c.clone(),
            cod: c,
            obj_map,
        }
    }

    pub fn dom(&self) -> &Arc<QuantCategory<B>> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<QuantCategory<B>> {
        &self.cod
    }

    pub fn obj(&self, a: ObjId) -> ObjId {
        self.obj_map[a]
    }

    pub fn obj_map(&self) -> &[ObjId] {
        &self.obj_map
    }

    pub fn opposite(&self) -> Self {
        QuantFunctor {
            dom: Arc::new(self.dom.opposite()),
            cod: Arc::new(self.cod.opposite()),
            obj_map: self.obj_map.clone(),
        }
    }

    /// Fully faithful: `hom_A(a, a') = hom_B(Fa, Fa')` for all pairs.
    pub fn is_fully_faithful(&self) -> bool {
        let base = self.dom.base();
        self.dom.objects().all(|a| {
            self.dom
                .objects()
                .all(|a2| base.same(self.dom.hom(a, a2), self.cod.hom(self.obj(a), self.obj(a2))))
        })
    }
}

/// A preorder (a category over `2`) as a thin ordinary category: one
/// morphism `a -> b` exactly when `hom(a, b) = top`.
pub fn two_to_set(c: &QuantCategory<Quantale>) -> Result<FinCategory, EnrichedError> {
    if !c.base().is_two() {
        return Err(EnrichedError::NotTwo);
    }
    let top = c.base().top();
    Ok(FinCategory::from_preorder(c.object_names(), |a, b| {
        *c.hom(a, b) == top
    }))
}

/// The ordinary functor underlying an order-preserving map of preorders.
pub fn two_to_set_functor(f: &QuantFunctor<Quantale>) -> Result<FinFunctor, EnrichedError> {
    let dom = Arc::new(two_to_set(f.dom())?);
    let cod = Arc::new(two_to_set(f.cod())?);
    let mor_map: Vec<MorId> = dom
        .morphisms()
        .map(|m| {
            let (s, d) = (f.obj(dom.src(m)), f.obj(dom.dst(m)));
            cod.hom(s, d)[0]
        })
        .collect();
    Ok(FinFunctor::new_unchecked(
        dom,
        cod,
        f.obj_map().to_vec(),
        mor_map,
    ))
}

/// Transports a category over one finite quantale into another along a
/// value map (used to compare the `2` and `{0, inf}` encodings).
pub fn map_values<B: Base, C: Base>(
    c: &QuantCategory<B>,
    base: C,
    f: impl Fn(&B::Value) -> C::Value,
) -> Result<QuantCategory<C>, EnrichedError> {
    QuantCategory::new(base, c.objects.clone(), c.hom.iter().map(f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Dist, RPlus};
    use crate::fincat::SizeCap;

    fn two_cat(names: &[&str], leq: impl Fn(usize, usize) -> bool) -> QuantCategory<Quantale> {
        let two = Quantale::two();
        let (bot, top) = (two.value("bot").unwrap(), two.value("top").unwrap());
        QuantCategory::from_fn(
            two,
            names.iter().map(|s| s.to_string()).collect(),
            |a, b| if a == b || leq(a, b) { top } else { bot },
        )
        .unwrap()
    }

    #[test]
    fn two_point_metric_space_validates() {
        let d = |a: usize, b: usize| Dist::Finite(if a == b { 0.0 } else { 1.0 });
        let c = QuantCategory::from_fn(RPlus::default(), vec!["x".into(), "y".into()], d).unwrap();
        assert_eq!(c.validate(), Ok(()));
        assert_eq!(c.opposite().hom(0, 1), c.hom(1, 0));
    }

    #[test]
    fn triangle_inequality_violation_is_reported() {
        let hom = vec![
            Dist::Finite(0.0), Dist::Finite(1.0), Dist::Finite(5.0),
            Dist::Finite(1.0), Dist::Finite(0.0), Dist::Finite(1.0),
            Dist::Finite(5.0), Dist::Finite(1.0), Dist::Finite(0.0),
        ];
        let err = QuantCategory::new(RPlus::default(), vec!["a".into(), "b".into(), "c".into()], hom).unwrap_err();
        assert!(matches!(err, EnrichedError::Composition { .. }));
    }

    #[test]
    fn asymmetric_metric_opposite_swaps_homs() {
        let hom = vec![Dist::Finite(0.0), Dist::Finite(1.0), Dist::Infinite, Dist::Finite(0.0)];
        let c = QuantCategory::new(RPlus::default(), vec!["p".into(), "q".into()], hom).unwrap();
        let op = c.opposite();
        assert_eq!(*op.hom(0, 1), Dist::Infinite);
        assert_eq!(*op.hom(1, 0), Dist::Finite(1.0));
        assert_eq!(op.opposite(), c);
    }

    #[test]
    fn two_itself_becomes_walking_arrow() {
        let c = two_cat(&["bot", "top"], |a, b| a <= b);
        assert_eq!(two_to_set(&c).unwrap(), FinCategory::walking_arrow());
    }

    #[test]
    fn discrete_preorder_becomes_discrete_category() {
        let c = two_cat(&["x", "y", "z"], |_, _| false);
        assert!(two_to_set(&c).unwrap().is_discrete());
    }

    #[test]
    fn mutual_preorder_gives_isomorphism_pair() {
        let c = two_cat(&["a", "b"], |_, _| true);
        let s = two_to_set(&c).unwrap();
        assert_eq!(s.validate(SizeCap::VALIDATION), Ok(()));
        assert_eq!(s.num_morphisms(), 4);
        let f = s.hom(0, 1)[0];
        assert!(s.inverse(f).is_some());
    }

    #[test]
    fn wrong_base_is_rejected() {
        let c = QuantCategory::from_fn(Quantale::chain_meet(3), vec!["a".into()], |_, _| 2).unwrap();
        assert_eq!(two_to_set(&c), Err(EnrichedError::NotTwo));
    }

    #[test]
    fn non_monotone_map_is_rejected() {
        let a = Arc::new(two_cat(&["x", "y"], |a, b| a <= b));
        let b = Arc::new(two_cat(&["p", "q"], |_, _| false));
        assert!(matches!(
            QuantFunctor::new(a, b, vec![0, 1]),
            Err(EnrichedError::NotMonotone(..))
        ));
    }
}
