//! Certificates with ids replaced by names.

use cauchyden::base::Base;
use cauchyden::fincat::{FinCategory, FinFunctor, QuantFunctor};
use cauchyden::json::FunctorJson;
use cauchyden::prof::{
    CdFailure, CdWitness, Factorization, FfFailure, FfWitness, LaxEpiFailure, LaxEpiWitness, QuantCdWitness,
};
use serde_json::{json, Value};

pub fn functor(f: &FinFunctor) -> Value {
    serde_json::to_value(FunctorJson::from_functor(f)).expect("serializable")
}

fn factorization(f: &FinFunctor, x: &Factorization) -> Value {
    let b = f.cod();
    json!({
        "via": f.dom().object_name(x.via),
        "inner": b.morphism_name(x.inner),
        "outer": b.morphism_name(x.outer),
    })
}

pub fn cd_witness(f: &FinFunctor, w: &CdWitness) -> (Value, String) {
    let b = f.cod();
    let (s, t) = (b.object_name(w.source), b.object_name(w.target));
    match &w.failure {
        CdFailure::NotSurjective { morphism } => {
            let m = b.morphism_name(*morphism);
            (
                json!({ "source": s, "target": t, "failure": "not-surjective", "morphism": m }),
                format!("counit at ({s}, {t}) is not surjective: `{m}` does not factor through the image"),
            )
        }
        CdFailure::NotInjective { first, second } => {
            let name = |x: &Factorization| {
                format!(
                    "{} . {} via {}",
                    b.morphism_name(x.outer),
                    b.morphism_name(x.inner),
                    f.dom().object_name(x.via)
                )
            };
            (
                json!({
                    "source": s,
                    "target": t,
                    "failure": "not-injective",
                    "first": factorization(f, first),
                    "second": factorization(f, second),
                }),
                format!(
                    "counit at ({s}, {t}) is not injective: {} and {} are distinct classes with the same composite",
                    name(first),
                    name(second)
                ),
            )
        }
    }
}

pub fn ff_witness(f: &FinFunctor, w: &FfWitness) -> (Value, String) {
    let (a, b) = (f.dom(), f.cod());
    let (s, t) = (a.object_name(w.source), a.object_name(w.target));
    match &w.failure {
        FfFailure::NotInjective { first, second } => {
            let (x, y) = (a.morphism_name(*first), a.morphism_name(*second));
            (
                json!({ "source": s, "target": t, "failure": "not-faithful", "first": x, "second": y }),
                format!("not faithful on ({s}, {t}): `{x}` and `{y}` have the same image"),
            )
        }
        FfFailure::NotSurjective { morphism } => {
            let m = b.morphism_name(*morphism);
            (
                json!({ "source": s, "target": t, "failure": "not-full", "morphism": m }),
                format!("not full on ({s}, {t}): `{m}` has no preimage"),
            )
        }
    }
}

pub fn quant_cd_witness<B: Base>(f: &QuantFunctor<B>, w: &QuantCdWitness<B::Value>) -> (Value, String) {
    let b = f.cod();
    let (s, t) = (b.object_name(w.source), b.object_name(w.target));
    let base = b.base();
    let (coend, hom) = (base.render(&w.coend), base.render(&w.hom));
    (
        json!({ "source": s, "target": t, "coend": coend, "hom": hom }),
        format!("at ({s}, {t}) the coend {coend} does not reach the hom value {hom}"),
    )
}

fn components(c: &FinCategory, objects: &[String], theta: &[usize]) -> Value {
    objects
        .iter()
        .zip(theta)
        .map(|(x, &m)| (x.clone(), Value::from(c.morphism_name(m))))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

pub fn laxepi_witness(f: &FinFunctor, target: usize, w: &LaxEpiWitness) -> (Value, String) {
    let c = w.left.cod();
    let mut v = json!({
        "target": target,
        "left": functor(&w.left),
        "right": functor(&w.right),
    });
    let text = match &w.failure {
        LaxEpiFailure::NotFaithful { first, second } => {
            let names = f.cod().object_names();
            v["failure"] = "not-faithful".into();
            v["first"] = components(c, names, first);
            v["second"] = components(c, names, second);
            format!("target {target}: two transformations G => H agree after whiskering with F")
        }
        LaxEpiFailure::NotFull { transformation } => {
            v["failure"] = "not-full".into();
            v["transformation"] = components(c, f.dom().object_names(), transformation);
            format!("target {target}: a transformation GF => HF is not a whiskering")
        }
    };
    (v, text)
}

/// The first hom-set on which `f` is not surjective.
pub fn not_full(f: &FinFunctor) -> Option<(Value, String)> {
    let (a, b) = (f.dom(), f.cod());
    for x in a.objects() {
        for y in a.objects() {
            for &m in b.hom(f.obj(x), f.obj(y)) {
                if !a.hom(x, y).iter().any(|&h| f.mor(h) == m) {
                    let (s, t, n) = (a.object_name(x), a.object_name(y), b.morphism_name(m));
                    return Some((
                        json!({ "source": s, "target": t, "morphism": n }),
                        format!("not full on ({s}, {t}): `{n}` has no preimage"),
                    ));
                }
            }
        }
    }
    None
}
