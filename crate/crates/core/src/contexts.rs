//! Direct characterizations of Cauchy density in special settings:
//! posetal bases, preorders, monoids and groups, connected components and
//! groupoids. Each is cross-checked against [`crate::prof`].

mod monoids;

use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::base::{Base, Quantale};
use crate::fincat::{endomorphism_monoid, FinCategory, FinFunctor, MonoidHom, ObjId, QuantFunctor};
use crate::prof::{check_cauchy_dense, is_fully_faithful, CdWitness, Verdict};

pub use monoids::{monoid_epi_refute, monoids_of_order, EpiVerdict, MAX_EXPLORER_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("base is not the two-element quantale")]
    NotTwo,
    #[error("category `{0}` is not thin")]
    NotThin(&'static str),
    #[error("domain is not a group")]
    NotAGroup,
    #[error("domain is not a groupoid")]
    NotAGroupoid,
    #[error("functor is not Cauchy dense")]
    NotCauchyDense(CdWitness),
    #[error("explorer cap {0} exceeds the supported maximum of {MAX_EXPLORER_CAP}")]
    CapTooLarge(usize),
}

/// Cauchy density over a posetal base from the diagonal alone:
/// `sup_a B(Fa, b) (x) B(b, Fa) = B(b, b)` for every `b`.
pub fn quantale_cd<B: Base>(f: &QuantFunctor<B>) -> bool {
    let b_cat = f.cod();
    let base = b_cat.base();
    b_cat.objects().all(|b| {
        let coend = base.join_all(
            f.dom()
                .objects()
                .map(|a| base.tensor(b_cat.hom(f.obj(a), b), b_cat.hom(b, f.obj(a)))),
        );
        base.same(&coend, b_cat.hom(b, b))
    })
}

/// For preorders: every object is isomorphic to one in the image.
pub fn preorder_2functor_cd(f: &QuantFunctor<Quantale>) -> Result<bool, ContextError> {
    if !f.cod().base().is_two() {
        return Err(ContextError::NotTwo);
    }
    let b_cat = f.cod();
    Ok(b_cat
        .objects()
        .all(|b| f.dom().objects().any(|a| b_cat.isomorphic(f.obj(a), b))))
}

fn leq(c: &FinCategory, x: ObjId, y: ObjId) -> bool {
    !c.hom(x, y).is_empty()
}

/// For functors between thin categories: for every `b <= b'` the full
/// subpreorder `{a | b <= fa <= b'}` is connected and nonempty.
pub fn ordinary_preorder_cd(f: &FinFunctor) -> Result<bool, ContextError> {
    let (a_cat, b_cat) = (&**f.dom(), &**f.cod());
    if !a_cat.is_thin() {
        return Err(ContextError::NotThin("domain"));
    }
    if !b_cat.is_thin() {
        return Err(ContextError::NotThin("codomain"));
    }
    for b in b_cat.objects() {
        for b2 in b_cat.objects() {
            if !leq(b_cat, b, b2) {
                continue;
            }
            let fiber: Vec<ObjId> = a_cat
                .objects()
                .filter(|&a| leq(b_cat, b, f.obj(a)) && leq(b_cat, f.obj(a), b2))
                .collect();
            let mut uf = UnionFind::<usize>::new(fiber.len());
            for (i, &x) in fiber.iter().enumerate() {
                for (j, &y) in fiber.iter().enumerate() {
                    if leq(a_cat, x, y) {
                        uf.union(i, j);
                    }
                }
            }
            let mut roots = uf.into_labeling();
            roots.sort_unstable();
            roots.dedup();
            if roots.len() != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The congruence on `B x B` generated by `(b f(a), b') ~ (b, f(a) b')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TensorCongruence {
    /// Size of `B`.
    pub size: usize,
    /// Class of `(b, b')` at `b * size + b'`.
    pub class_of: Vec<usize>,
    pub classes: usize,
}

impl TensorCongruence {
    pub fn new(f: &MonoidHom) -> Self {
        let (a, b) = (f.dom(), f.cod());
        let n = b.len();
        let mut uf = UnionFind::<usize>::new(n * n);
        for x in 0..a.len() {
            let fx = f.apply(x);
            for p in 0..n {
                for q in 0..n {
                    uf.union(b.mul(p, fx) * n + q, p * n + b.mul(fx, q));
                }
            }
        }
        let labels = uf.into_labeling();
        let mut renumber = std::collections::HashMap::new();
        let class_of = labels
            .into_iter()
            .map(|r| {
                let next = renumber.len();
                *renumber.entry(r).or_insert(next)
            })
            .collect();
        TensorCongruence {
            size: n,
            class_of,
            classes: renumber.len(),
        }
    }

    pub fn related(&self, x: (usize, usize), y: (usize, usize)) -> bool {
        self.class_of[x.0 * self.size + x.1] == self.class_of[y.0 * self.size + y.1]
    }
}

/// Monoid homomorphisms: Cauchy dense iff `(b, 1)` and `(1, b)` are
/// congruent for every `b`.
pub fn monoid_cd(f: &MonoidHom) -> (bool, TensorCongruence) {
    let cong = TensorCongruence::new(f);
    let one = f.cod().unit();
    let dense = (0..f.cod().len()).all(|b| cong.related((b, one), (one, b)));
    (dense, cong)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupVerdict {
    pub cauchy_dense: bool,
    /// Whether the codomain is a group (reported when dense).
    pub codomain_is_group: bool,
}

/// Homomorphisms out of a group: Cauchy dense iff surjective.
pub fn group_domain_cd(f: &MonoidHom) -> Result<GroupVerdict, ContextError> {
    if !f.dom().is_group() {
        return Err(ContextError::NotAGroup);
    }
    Ok(GroupVerdict {
        cauchy_dense: f.is_surjective(),
        codomain_is_group: f.cod().is_group(),
    })
}

/// Connected components: component index of each object, numbered by
/// first appearance.
pub fn pi0(c: &FinCategory) -> Vec<usize> {
    let mut uf = UnionFind::<usize>::new(c.num_objects());
    for m in c.morphisms() {
        uf.union(c.src(m), c.dst(m));
    }
    let mut renumber = std::collections::HashMap::new();
    uf.into_labeling()
        .into_iter()
        .map(|r| {
            let next = renumber.len();
            *renumber.entry(r).or_insert(next)
        })
        .collect()
}

pub fn num_components(c: &FinCategory) -> usize {
    pi0(c).into_iter().max().map_or(0, |m| m + 1)
}

/// The map of components induced by `f`, as a list indexed by domain
/// component.
pub fn pi0_map(f: &FinFunctor) -> Vec<usize> {
    let (ca, cb) = (pi0(f.dom()), pi0(f.cod()));
    let mut map = vec![usize::MAX; num_components(f.dom())];
    for a in f.dom().objects() {
        map[ca[a]] = cb[f.obj(a)];
    }
    map
}

/// Whether `pi0(f)` is a bijection.
pub fn pi0_check(f: &FinFunctor) -> bool {
    let map = pi0_map(f);
    let mut hit = vec![false; num_components(f.cod())];
    for &c in &map {
        if std::mem::replace(&mut hit[c], true) {
            return false;
        }
    }
    hit.into_iter().all(|h| h)
}

/// A component of the domain with its image component.
#[derive(Debug, Clone)]
pub struct Piece {
    pub functor: FinFunctor,
    pub dom_objects: Vec<ObjId>,
    pub dom_morphisms: Vec<usize>,
    pub cod_objects: Vec<ObjId>,
    pub cod_morphisms: Vec<usize>,
}

/// Splits a Cauchy dense functor along connected components.
pub fn decompose_cd(f: &FinFunctor) -> Result<Vec<Piece>, ContextError> {
    if let Verdict::Fails(w) = check_cauchy_dense(f) {
        return Err(ContextError::NotCauchyDense(w));
    }
    let (a_cat, b_cat) = (f.dom(), f.cod());
    let (ca, cb) = (pi0(a_cat), pi0(b_cat));
    let map = pi0_map(f);
    let pieces = (0..map.len())
        .map(|i| {
            let objs: Vec<ObjId> = a_cat.objects().filter(|&a| ca[a] == i).collect();
            let cobjs: Vec<ObjId> = b_cat.objects().filter(|&b| cb[b] == map[i]).collect();
            let sa = a_cat.full_subcategory(&objs);
            let sb = b_cat.full_subcategory(&cobjs);
            let obj_map = objs
                .iter()
                .map(|&a| cobjs.iter().position(|&b| b == f.obj(a)).expect("image component"))
                .collect();
            let mor_map = sa
                .morphisms
                .iter()
                .map(|&m| sb.morphisms.iter().position(|&n| n == f.mor(m)).expect("image component"))
                .collect();
            let functor = FinFunctor::new(Arc::new(sa.category), Arc::new(sb.category), obj_map, mor_map)
                .expect("restriction to a component");
            Piece {
                functor,
                dom_objects: sa.objects,
                dom_morphisms: sa.morphisms,
                cod_objects: sb.objects,
                cod_morphisms: sb.morphisms,
            }
        })
        .collect();
    Ok(pieces)
}

/// The pieces cover `f` exactly and agree with it.
pub fn reassembles_to(f: &FinFunctor, pieces: &[Piece]) -> bool {
    let mut seen_obj = vec![0usize; f.dom().num_objects()];
    let mut seen_mor = vec![0usize; f.dom().num_morphisms()];
    let mut seen_cod = vec![0usize; f.cod().num_objects()];
    for p in pieces {
        for (i, &a) in p.dom_objects.iter().enumerate() {
            seen_obj[a] += 1;
            if p.cod_objects[p.functor.obj(i)] != f.obj(a) {
                return false;
            }
        }
        for (i, &m) in p.dom_morphisms.iter().enumerate() {
            seen_mor[m] += 1;
            if p.cod_morphisms[p.functor.mor(i)] != f.mor(m) {
                return false;
            }
        }
        for &b in &p.cod_objects {
            seen_cod[b] += 1;
        }
    }
    [seen_obj, seen_mor, seen_cod].iter().all(|s| s.iter().all(|&k| k == 1))
}

/// One summand of a groupoid functor: the automorphism group of a chosen
/// object and its image in the endomorphisms of the target.
#[derive(Debug, Clone)]
pub struct GroupPiece {
    pub object: ObjId,
    pub image: ObjId,
    pub hom: MonoidHom,
}

#[derive(Debug, Clone)]
pub enum GroupoidVerdict {
    NotCauchyDense(CdWitness),
    /// Equivalent to the disjoint union of these surjective homs. With a
    /// discrete domain, `equivalence` records that `F` is an equivalence.
    DisjointUnion { pieces: Vec<GroupPiece>, equivalence: Option<bool> },
}

pub fn groupoid_domain_classify(f: &FinFunctor) -> Result<GroupoidVerdict, ContextError> {
    let a_cat = f.dom();
    if !a_cat.is_groupoid() {
        return Err(ContextError::NotAGroupoid);
    }
    let pieces = match decompose_cd(f) {
        Ok(p) => p,
        Err(ContextError::NotCauchyDense(w)) => return Ok(GroupoidVerdict::NotCauchyDense(w)),
        Err(e) => return Err(e),
    };
    let groups = pieces
        .iter()
        .map(|p| {
            let a = p.dom_objects[0];
            let fa = f.obj(a);
            let dom = Arc::new(endomorphism_monoid(a_cat, a));
            let cod = Arc::new(endomorphism_monoid(f.cod(), fa));
            let map = a_cat.hom(a, a).iter().map(|&m| f.cod().hom_position(f.mor(m))).collect();
            let hom = MonoidHom::new(dom, cod, map).expect("restriction of a functor");
            debug_assert!(hom.is_surjective());
            GroupPiece { object: a, image: fa, hom }
        })
        .collect();
    let equivalence = a_cat
        .is_discrete()
        .then(|| is_fully_faithful(f) && f.is_essentially_surjective());
    Ok(GroupoidVerdict::DisjointUnion {
        pieces: groups,
        equivalence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{Dist, RPlus};
    use crate::fincat::{deloop, deloop_hom, disjoint_union_functor, Monoid, QuantCategory};
    use crate::prof::is_cauchy_dense;

    fn hom(m: Monoid, n: Monoid, map: Vec<usize>) -> MonoidHom {
        MonoidHom::new(Arc::new(m), Arc::new(n), map).unwrap()
    }

    fn metric(names: &[&str], d: Vec<f64>) -> Arc<QuantCategory<RPlus>> {
        let hom = d.into_iter().map(Dist::Finite).collect();
        Arc::new(QuantCategory::new(RPlus::default(), names.iter().map(|s| s.to_string()).collect(), hom).unwrap())
    }

    #[test]
    fn metric_examples() {
        let p = metric(&["p"], vec![0.0]);
        let pq = metric(&["p", "q"], vec![0.0, 1.0, 1.0, 0.0]);
        let f = QuantFunctor::new(p.clone(), pq, vec![0]).unwrap();
        assert!(!quantale_cd(&f));
        let pseudo = metric(&["p", "q"], vec![0.0, 0.0, 0.0, 0.0]);
        let g = QuantFunctor::new(p, pseudo.clone(), vec![0]).unwrap();
        assert!(quantale_cd(&g));
        assert!(quantale_cd(&QuantFunctor::identity(pseudo)));
    }

    #[test]
    fn monoid_examples() {
        assert!(monoid_cd(&hom(Monoid::cyclic(4), Monoid::cyclic(2), vec![0, 1, 0, 1])).0);
        let (dense, cong) = monoid_cd(&hom(Monoid::trivial(), Monoid::cyclic(2), vec![0]));
        assert!(!dense);
        assert_eq!(cong.classes, 4);
        let id = hom(Monoid::idempotent_pair(), Monoid::idempotent_pair(), vec![0, 1]);
        assert!(monoid_cd(&id).0);
    }

    #[test]
    fn group_examples() {
        let v = group_domain_cd(&hom(Monoid::cyclic(4), Monoid::cyclic(2), vec![0, 1, 0, 1])).unwrap();
        assert!(v.cauchy_dense && v.codomain_is_group);
        let v = group_domain_cd(&hom(Monoid::cyclic(2), Monoid::cyclic(4), vec![0, 2])).unwrap();
        assert!(!v.cauchy_dense);
        let v = group_domain_cd(&hom(Monoid::trivial(), Monoid::trivial(), vec![0])).unwrap();
        assert!(v.cauchy_dense);
        let not_group = hom(Monoid::idempotent_pair(), Monoid::trivial(), vec![0, 0]);
        assert_eq!(group_domain_cd(&not_group), Err(ContextError::NotAGroup));
    }

    #[test]
    fn preorder_examples() {
        let chain3 = Arc::new(FinCategory::from_preorder(&["0", "1", "2"], |a, b| a <= b));
        let chain2 = Arc::new(FinCategory::from_preorder(&["0", "1"], |a, b| a <= b));
        let mor = chain3
            .morphisms()
            .map(|m| {
                let g = |x: usize| if x < 2 { 0 } else { 1 };
                chain2.hom(g(chain3.src(m)), g(chain3.dst(m)))[0]
            })
            .collect();
        let f = FinFunctor::new(chain3, chain2, vec![0, 0, 1], mor).unwrap();
        assert_eq!(ordinary_preorder_cd(&f), Ok(true));
        assert!(is_cauchy_dense(&f));

        let a = Arc::new(FinCategory::discrete(&["bot", "top"]));
        let b = Arc::new(FinCategory::walking_arrow());
        let mor = vec![b.identity(0), b.identity(1)];
        let g = FinFunctor::new(a, b, vec![0, 1], mor).unwrap();
        assert_eq!(ordinary_preorder_cd(&g), Ok(false));

        let z2 = Arc::new(deloop(&Monoid::cyclic(2)));
        let id = FinFunctor::identity(z2);
        assert_eq!(ordinary_preorder_cd(&id), Err(ContextError::NotThin("domain")));
    }

    #[test]
    fn pi0_examples() {
        assert_eq!(num_components(&FinCategory::discrete(&["a", "b", "c"])), 3);
        assert_eq!(num_components(&FinCategory::walking_arrow()), 1);
        let q = deloop_hom(&hom(Monoid::cyclic(4), Monoid::cyclic(2), vec![0, 1, 0, 1]));
        let id = FinFunctor::identity(Arc::new(FinCategory::walking_arrow()));
        let u = disjoint_union_functor(&[q.clone(), id.clone()]);
        assert!(pi0_check(&u));
        let pieces = decompose_cd(&u).unwrap();
        assert_eq!(pieces.len(), 2);
        assert!(reassembles_to(&u, &pieces));
        assert_eq!(pieces[0].functor.cod().num_morphisms(), q.cod().num_morphisms());
        assert_eq!(decompose_cd(&q).unwrap().len(), 1);
    }

    #[test]
    fn groupoid_examples() {
        let q = deloop_hom(&hom(Monoid::cyclic(4), Monoid::cyclic(2), vec![0, 1, 0, 1]));
        match groupoid_domain_classify(&q).unwrap() {
            GroupoidVerdict::DisjointUnion { pieces, equivalence } => {
                assert_eq!(pieces.len(), 1);
                assert!(pieces[0].hom.is_surjective());
                assert_eq!(equivalence, None);
            }
            other => panic!("unexpected {other:?}"),
        }
        let a = Arc::new(FinCategory::discrete(&["x", "y"]));
        let b = Arc::new(FinCategory::discrete(&["x"]));
        let collapse = FinFunctor::new(a, b, vec![0, 0], vec![0, 0]).unwrap();
        assert!(matches!(
            groupoid_domain_classify(&collapse).unwrap(),
            GroupoidVerdict::NotCauchyDense(_)
        ));
        let arrow = FinFunctor::identity(Arc::new(FinCategory::walking_arrow()));
        assert!(matches!(groupoid_domain_classify(&arrow), Err(ContextError::NotAGroupoid)));
    }
}
