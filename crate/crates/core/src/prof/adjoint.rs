//! Density in the ordinary sense and adjoints between finite categories.

use std::ops::ControlFlow;

use crate::fincat::{FinFunctor, MorId, ObjId};
use crate::search::{FunctorSearch, NaturalSearch};

/// Whether `b |-> B(F-, b)` is fully faithful into presheaves on `A`:
/// every natural family `B(F-, b) => B(F-, b')` is postcomposition with a
/// unique `b -> b'`.
pub fn is_dense(f: &FinFunctor) -> bool {
    let b_cat = f.cod();
    b_cat
        .objects()
        .all(|b| b_cat.objects().all(|b2| restricted_yoneda_bijective(f, b, b2)))
}

fn restricted_yoneda_bijective(f: &FinFunctor, b: ObjId, b2: ObjId) -> bool {
    let (a_cat, b_cat) = (&**f.dom(), &**f.cod());
    // one variable per element x in B(Fa, b), valued in B(Fa, b2)
    let vars: Vec<(ObjId, MorId)> = a_cat
        .objects()
        .flat_map(|a| b_cat.hom(f.obj(a), b).iter().map(move |&x| (a, x)))
        .collect();
    let var_of = |x: MorId| vars.iter().position(|&(_, y)| y == x).expect("element of the presheaf");

    // theta(x . Fh) = theta(x) . Fh, checked when the later variable is set
    let mut checks: Vec<Vec<(usize, usize, MorId)>> = vec![Vec::new(); vars.len()];
    for h in a_cat.morphisms() {
        let fh = f.mor(h);
        for &x in b_cat.hom(f.obj(a_cat.dst(h)), b) {
            let (u, v) = (var_of(b_cat.comp(x, fh)), var_of(x));
            checks[u.max(v)].push((u, v, fh));
        }
    }
    let homs = b_cat.hom(b, b2);
    // postcomposition must be injective
    let images: Vec<Vec<MorId>> = homs
        .iter()
        .map(|&m| vars.iter().map(|&(_, x)| b_cat.comp(m, x)).collect())
        .collect();
    let mut distinct = images.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != images.len() {
        return false;
    }

    let mut count = 0usize;
    let mut theta = vec![usize::MAX; vars.len()];
    fn go(
        i: usize,
        vars: &[(ObjId, MorId)],
        checks: &[Vec<(usize, usize, MorId)>],
        theta: &mut Vec<MorId>,
        count: &mut usize,
        bound: usize,
        f: &FinFunctor,
        b2: ObjId,
    ) -> ControlFlow<()> {
        let b_cat = f.cod();
        if i == vars.len() {
            *count += 1;
            return if *count > bound { ControlFlow::Break(()) } else { ControlFlow::Continue(()) };
        }
        for &y in b_cat.hom(f.obj(vars[i].0), b2) {
            theta[i] = y;
            if checks[i].iter().all(|&(u, v, fh)| theta[u] == b_cat.comp(theta[v], fh)) {
                go(i + 1, vars, checks, theta, count, bound, f, b2)?;
            }
        }
        ControlFlow::Continue(())
    }
    let cut = go(0, &vars, &checks, &mut theta, &mut count, homs.len(), f, b2).is_break();
    !cut && count == homs.len()
}

/// `left -| right` with unit `1 => right . left` and counit
/// `left . right => 1`, components indexed by object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjunction {
    pub left: FinFunctor,
    pub right: FinFunctor,
    pub unit: Vec<MorId>,
    pub counit: Vec<MorId>,
}

impl Adjunction {
    /// The triangle identities.
    pub fn verify(&self) -> bool {
        let (l, r) = (&self.left, &self.right);
        let (a_cat, b_cat) = (l.dom(), l.cod());
        a_cat.objects().all(|a| {
            b_cat.comp(self.counit[l.obj(a)], l.mor(self.unit[a])) == b_cat.identity(l.obj(a))
        }) && b_cat.objects().all(|b| {
            a_cat.comp(r.mor(self.counit[b]), self.unit[r.obj(b)]) == a_cat.identity(r.obj(b))
        })
    }
}

/// A right adjoint of `f`, if one exists.
pub fn find_right_adjoint(f: &FinFunctor) -> Option<Adjunction> {
    let (a_cat, b_cat) = (f.dom(), f.cod());
    let id_a = FinFunctor::identity(a_cat.clone());
    let id_b = FinFunctor::identity(b_cat.clone());
    let mut found = None;
    FunctorSearch::new(b_cat, a_cat).for_each(|g| {
        let gf = f.then(g);
        let fg = g.then(f);
        let units = NaturalSearch::new(&id_a, &gf).collect();
        if units.is_empty() {
            return ControlFlow::Continue(());
        }
        let counits = NaturalSearch::new(&fg, &id_b).collect();
        for unit in &units {
            for counit in &counits {
                let candidate = Adjunction {
                    left: f.clone(),
                    right: g.clone(),
                    unit: unit.clone(),
                    counit: counit.clone(),
                };
                if candidate.verify() {
                    found = Some(candidate);
                    return ControlFlow::Break(());
                }
            }
        }
        ControlFlow::Continue(())
    });
    found
}

/// A left adjoint of `f`, found as a right adjoint of the opposite functor.
pub fn find_left_adjoint(f: &FinFunctor) -> Option<Adjunction> {
    let op = find_right_adjoint(&f.opposite())?;
    let left = op.right.opposite().with_categories(f.cod().clone(), f.dom().clone());
    Some(Adjunction {
        left,
        right: f.clone(),
        unit: op.counit,
        counit: op.unit,
    })
}
