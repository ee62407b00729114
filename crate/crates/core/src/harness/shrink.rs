//! Greedy shrinking of failing samples. Candidates drop an object or a
//! generating morphism and re-close under composition; each candidate is
//! re-validated before it is tried.

use std::sync::Arc;

use serde_json::{json, Value};

use super::Outcome;
use crate::base::{Base, Quantale, RPlus};
use crate::fincat::{FinCategory, FinFunctor, Monoid, MonoidHom, QuantCategory, QuantFunctor, SizeCap, Subcategory};
use crate::json::{CategoryJson, FunctorJson, MonoidHomJson, QuantFunctorJson};

const MAX_SHRINK_STEPS: usize = 64;

/// Verdict of a property on one input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Pass,
    Skip(String),
    Fail(String),
}

impl Check {
    /// `Fail(reason)` unless `ok`.
    pub fn expect(ok: bool, reason: impl FnOnce() -> String) -> Check {
        if ok {
            Check::Pass
        } else {
            Check::Fail(reason())
        }
    }
}

pub trait Shrink: Sized {
    /// Strictly smaller, structurally valid variants.
    fn shrink(&self) -> Vec<Self>;
    fn describe(&self) -> Value;
}

/// Runs `check`; on failure walks to smaller inputs that still fail.
pub fn check_shrinking<S: Shrink>(sample: S, check: impl Fn(&S) -> Check) -> Outcome {
    match check(&sample) {
        Check::Pass => Outcome::Pass,
        Check::Skip(r) => Outcome::Skip(r),
        Check::Fail(first) => {
            let (mut current, mut reason, mut steps) = (sample, first, 0);
            'outer: while steps < MAX_SHRINK_STEPS {
                for candidate in current.shrink() {
                    if let Check::Fail(r) = check(&candidate) {
                        current = candidate;
                        reason = r;
                        steps += 1;
                        continue 'outer;
                    }
                }
                break;
            }
            Outcome::Fail {
                reason,
                witness: current.describe(),
                shrink_steps: steps,
            }
        }
    }
}

fn valid_category(c: &FinCategory) -> bool {
    c.validate(SizeCap::VALIDATION).is_ok()
}

/// Subcategories one step smaller: drop an object, or drop a non-identity
/// generator and close.
fn smaller_subcategories(c: &FinCategory, keep_objects: &[usize], keep_morphisms: &[usize]) -> Vec<Subcategory> {
    let mut out = Vec::new();
    for a in c.objects() {
        if keep_objects.contains(&a) {
            continue;
        }
        let objs: Vec<usize> = c.objects().filter(|&x| x != a).collect();
        out.push(c.full_subcategory(&objs));
    }
    let all: Vec<usize> = c.objects().collect();
    for m in c.morphisms() {
        if c.is_identity(m) || keep_morphisms.contains(&m) {
            continue;
        }
        let gens: Vec<usize> = c.morphisms().filter(|&g| g != m && !c.is_identity(g)).collect();
        let sub = c.generated_subcategory(&all, &gens);
        if sub.morphisms.len() < c.num_morphisms() {
            out.push(sub);
        }
    }
    out
}

fn restrict(f: &FinFunctor, dom: &Subcategory, cod: &Subcategory) -> Option<FinFunctor> {
    let obj_map = dom
        .objects
        .iter()
        .map(|&a| cod.objects.iter().position(|&b| b == f.obj(a)))
        .collect::<Option<Vec<_>>>()?;
    let mor_map = dom
        .morphisms
        .iter()
        .map(|&m| cod.morphisms.iter().position(|&n| n == f.mor(m)))
        .collect::<Option<Vec<_>>>()?;
    if !valid_category(&dom.category) || !valid_category(&cod.category) {
        return None;
    }
    FinFunctor::new(Arc::new(dom.category.clone()), Arc::new(cod.category.clone()), obj_map, mor_map).ok()
}

fn whole(c: &FinCategory) -> Subcategory {
    let objs: Vec<usize> = c.objects().collect();
    c.full_subcategory(&objs)
}

fn shrink_domain(f: &FinFunctor) -> Vec<FinFunctor> {
    let cod = whole(f.cod());
    smaller_subcategories(f.dom(), &[], &[])
        .iter()
        .filter_map(|d| restrict(f, d, &cod))
        .collect()
}

fn shrink_codomain(f: &FinFunctor) -> Vec<FinFunctor> {
    let dom = whole(f.dom());
    smaller_subcategories(f.cod(), f.obj_map(), f.mor_map())
        .iter()
        .filter_map(|c| restrict(f, &dom, c))
        .collect()
}

impl Shrink for FinFunctor {
    fn shrink(&self) -> Vec<Self> {
        let mut out = shrink_domain(self);
        out.extend(shrink_codomain(self));
        out
    }

    fn describe(&self) -> Value {
        serde_json::to_value(FunctorJson::from_functor(self)).expect("serializable")
    }
}

/// A composable pair `F: A -> B`, `G: B -> C`.
impl Shrink for (FinFunctor, FinFunctor) {
    fn shrink(&self) -> Vec<Self> {
        let (f, g) = self;
        let mut out: Vec<Self> = shrink_domain(f).into_iter().map(|f2| (f2, g.clone())).collect();
        out.extend(shrink_codomain(g).into_iter().map(|g2| (f.clone(), g2)));
        out
    }

    fn describe(&self) -> Value {
        json!({ "first": self.0.describe(), "second": self.1.describe() })
    }
}

/// A functor tested against fixed targets; only the functor shrinks.
impl Shrink for (FinFunctor, Vec<Arc<FinCategory>>) {
    fn shrink(&self) -> Vec<Self> {
        self.0.shrink().into_iter().map(|f| (f, self.1.clone())).collect()
    }

    fn describe(&self) -> Value {
        json!({
            "functor": self.0.describe(),
            "targets": self.1.iter().map(|c| serde_json::to_value(CategoryJson::from_category(c)).expect("serializable")).collect::<Vec<_>>(),
        })
    }
}

impl Shrink for Arc<FinCategory> {
    fn shrink(&self) -> Vec<Self> {
        smaller_subcategories(self, &[], &[])
            .into_iter()
            .filter(|s| valid_category(&s.category))
            .map(|s| Arc::new(s.category))
            .collect()
    }

    fn describe(&self) -> Value {
        serde_json::to_value(CategoryJson::from_category(self)).expect("serializable")
    }
}

/// The submonoid generated by `gens`, with the ids it had in `m`.
fn submonoid(m: &Monoid, gens: &[usize]) -> (Monoid, Vec<usize>) {
    let mut members = vec![m.unit()];
    for &g in gens {
        if !members.contains(&g) {
            members.push(g);
        }
    }
    let mut i = 0;
    while i < members.len() {
        for j in 0..members.len() {
            for p in [m.mul(members[i], members[j]), m.mul(members[j], members[i])] {
                if !members.contains(&p) {
                    members.push(p);
                }
            }
        }
        i += 1;
    }
    members.sort_unstable();
    let n = members.len();
    let pos = |x: usize| members.iter().position(|&y| y == x).expect("closed");
    let names = members.iter().map(|&x| m.name(x).to_string()).collect();
    let mul = (0..n * n).map(|k| pos(m.mul(members[k / n], members[k % n]))).collect();
    let sub = Monoid::new(names, mul, pos(m.unit())).expect("submonoid");
    (sub, members)
}

impl Shrink for MonoidHom {
    fn shrink(&self) -> Vec<Self> {
        let (a, b) = (self.dom(), self.cod());
        let mut out = Vec::new();
        for x in 0..a.len() {
            let gens: Vec<usize> = (0..a.len()).filter(|&y| y != x).collect();
            let (sub, ids) = submonoid(a, &gens);
            if ids.len() < a.len() {
                let map = ids.iter().map(|&y| self.apply(y)).collect();
                if let Ok(h) = MonoidHom::new(Arc::new(sub), b.clone(), map) {
                    out.push(h);
                }
            }
        }
        let image = self.image();
        for x in 0..b.len() {
            if image.contains(&x) {
                continue;
            }
            let gens: Vec<usize> = (0..b.len()).filter(|&y| y != x).collect();
            let (sub, ids) = submonoid(b, &gens);
            if ids.len() < b.len() {
                let map = (0..a.len())
                    .map(|y| ids.iter().position(|&z| z == self.apply(y)).expect("image kept"))
                    .collect();
                if let Ok(h) = MonoidHom::new(a.clone(), Arc::new(sub), map) {
                    out.push(h);
                }
            }
        }
        out
    }

    fn describe(&self) -> Value {
        serde_json::to_value(MonoidHomJson::from_hom(self)).expect("serializable")
    }
}

fn drop_object<B: Base>(c: &QuantCategory<B>, x: usize) -> QuantCategory<B> {
    let keep: Vec<usize> = c.objects().filter(|&y| y != x).collect();
    let n = keep.len();
    QuantCategory::from_parts(
        c.base().clone(),
        keep.iter().map(|&y| c.object_name(y).to_string()).collect(),
        (0..n * n).map(|k| c.hom(keep[k / n], keep[k % n]).clone()).collect(),
    )
    .expect("square table")
}

fn shrink_quant<B: Base>(f: &QuantFunctor<B>) -> Vec<QuantFunctor<B>> {
    let (a, b) = (f.dom(), f.cod());
    let mut out = Vec::new();
    for x in a.objects() {
        let map = a.objects().filter(|&y| y != x).map(|y| f.obj(y)).collect();
        if let Ok(g) = QuantFunctor::new(Arc::new(drop_object(a, x)), b.clone(), map) {
            out.push(g);
        }
    }
    for x in b.objects() {
        if f.obj_map().contains(&x) {
            continue;
        }
        let map = f.obj_map().iter().map(|&y| if y > x { y - 1 } else { y }).collect();
        let sub = drop_object(b, x);
        if sub.validate().is_ok() {
            if let Ok(g) = QuantFunctor::new(a.clone(), Arc::new(sub), map) {
                out.push(g);
            }
        }
    }
    out
}

impl Shrink for QuantFunctor<Quantale> {
    fn shrink(&self) -> Vec<Self> {
        shrink_quant(self)
    }

    fn describe(&self) -> Value {
        serde_json::to_value(QuantFunctorJson::from_finite(self)).expect("serializable")
    }
}

impl Shrink for QuantFunctor<RPlus> {
    fn shrink(&self) -> Vec<Self> {
        shrink_quant(self)
    }

    fn describe(&self) -> Value {
        serde_json::to_value(QuantFunctorJson::from_rplus(self)).expect("serializable")
    }
}

impl Shrink for Arc<QuantCategory<Quantale>> {
    fn shrink(&self) -> Vec<Self> {
        self.objects().map(|x| Arc::new(drop_object(self, x))).collect()
    }

    fn describe(&self) -> Value {
        serde_json::to_value(crate::json::QuantCategoryJson::from_finite(self)).expect("serializable")
    }
}
