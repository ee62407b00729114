//! Absolute weights and Cauchy completion over a finite quantale.
//!
//! A weight on `A` is a presheaf `W: A^op -> V`, i.e. `W(a) (x) A(a', a) <= W(a')`.
//! It is absolute when, seen as a profunctor `1 -/-> A`, it has a right
//! adjoint `W': A -> V` (a copresheaf) with
//!
//! * unit: `I <= sup_a W(a) (x) W'(a)`
//! * counit: `W(a) (x) W'(a') <= A(a, a')`
//!
//! With this orientation the representable `A(-, a0)` passes with the
//! witness `A(a0, -)`.

use std::sync::Arc;

use super::CompletionError;
use crate::base::{Base, Quantale};
use crate::fincat::{ObjId, QuantCategory, QuantFunctor};

/// Upper bound on `|V|^|A|` for weight enumeration.
const WEIGHT_BOUND: usize = 1 << 20;

pub fn is_presheaf(c: &QuantCategory<Quantale>, w: &[usize]) -> bool {
    let q = c.base();
    w.len() == c.num_objects()
        && c.objects()
            .all(|a| c.objects().all(|a2| q.leq(&q.tensor(&w[a], c.hom(a2, a)), &w[a2])))
}

pub fn is_copresheaf(c: &QuantCategory<Quantale>, w: &[usize]) -> bool {
    let q = c.base();
    w.len() == c.num_objects()
        && c.objects()
            .all(|a| c.objects().all(|a2| q.leq(&q.tensor(&w[a], c.hom(a, a2)), &w[a2])))
}

/// Exhaustive search for a right adjoint of the weight `w`.
pub fn absolute_weight_witness(
    c: &QuantCategory<Quantale>,
    w: &[usize],
) -> Result<Option<Vec<usize>>, CompletionError> {
    if !is_presheaf(c, w) {
        return Err(CompletionError::NotAPresheaf);
    }
    let q = c.base();
    let n = c.num_objects();
    // counit constraints are unary in W'(a')
    let candidates: Vec<Vec<usize>> = c
        .objects()
        .map(|a2| {
            q.elements()
                .filter(|v| c.objects().all(|a| q.leq(&q.tensor(&w[a], v), c.hom(a, a2))))
                .collect()
        })
        .collect();
    let mut wit = vec![0; n];
    let found = search(0, c, w, &candidates, &mut wit);
    Ok(found.then_some(wit))
}

fn search(
    i: usize,
    c: &QuantCategory<Quantale>,
    w: &[usize],
    candidates: &[Vec<usize>],
    wit: &mut Vec<usize>,
) -> bool {
    let q = c.base();
    if i == wit.len() {
        let unit = q.join_all(c.objects().map(|a| q.tensor(&w[a], &wit[a])));
        return q.leq(&q.unit(), &unit);
    }
    for &v in &candidates[i] {
        wit[i] = v;
        let functorial = (0..=i).all(|j| {
            q.leq(&q.tensor(&wit[j], c.hom(j, i)), &wit[i]) && q.leq(&q.tensor(&wit[i], c.hom(i, j)), &wit[j])
        });
        if functorial && search(i + 1, c, w, candidates, wit) {
            return true;
        }
    }
    false
}

pub fn is_absolute_weight(c: &QuantCategory<Quantale>, w: &[usize]) -> Result<bool, CompletionError> {
    Ok(absolute_weight_witness(c, w)?.is_some())
}

/// All presheaves on `c`, in lexicographic order of value ids.
fn presheaves(c: &QuantCategory<Quantale>) -> Result<Vec<Vec<usize>>, CompletionError> {
    let q = c.base();
    let n = c.num_objects();
    let count = q.len().checked_pow(n as u32).unwrap_or(usize::MAX);
    if count > WEIGHT_BOUND {
        return Err(CompletionError::TooManyWeights(count));
    }
    let mut out = Vec::new();
    let mut w = vec![0; n];
    fn go(i: usize, c: &QuantCategory<Quantale>, w: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let q = c.base();
        if i == w.len() {
            out.push(w.clone());
            return;
        }
        for v in q.elements() {
            w[i] = v;
            let ok = (0..=i).all(|j| {
                q.leq(&q.tensor(&w[j], c.hom(i, j)), &w[i]) && q.leq(&q.tensor(&w[i], c.hom(j, i)), &w[j])
            });
            if ok {
                go(i + 1, c, w, out);
            }
        }
    }
    go(0, c, &mut w, &mut out);
    Ok(out)
}

/// The Cauchy completion: absolute weights up to isomorphism, with the
/// Yoneda embedding.
#[derive(Debug, Clone)]
pub struct QuantCompletion {
    pub category: Arc<QuantCategory<Quantale>>,
    pub weights: Vec<Vec<usize>>,
    pub embedding: QuantFunctor<Quantale>,
}

fn representable(c: &QuantCategory<Quantale>, a: ObjId) -> Vec<usize> {
    c.objects().map(|x| *c.hom(x, a)).collect()
}

/// `hom(W, W') = inf_a (W(a) -o W'(a))`.
fn weight_hom(q: &Quantale, w: &[usize], w2: &[usize]) -> usize {
    w.iter().zip(w2).fold(q.top(), |acc, (&x, &y)| q.meet(acc, q.residuate(x, y)))
}

pub fn quantale_completion(c: &Arc<QuantCategory<Quantale>>) -> Result<QuantCompletion, CompletionError> {
    let q = c.base();
    // representables first so the embedding lands on them
    let mut weights: Vec<Vec<usize>> = Vec::new();
    let mut names = Vec::new();
    let mut obj_map = Vec::new();
    for a in c.objects() {
        let r = representable(c, a);
        match weights.iter().position(|w| *w == r) {
            Some(i) => obj_map.push(i),
            None => {
                obj_map.push(weights.len());
                weights.push(r);
                names.push(c.object_name(a).to_string());
            }
        }
    }
    for w in presheaves(c)? {
        // isomorphic presheaves are pointwise equal
        if weights.contains(&w) || absolute_weight_witness(c, &w)?.is_none() {
            continue;
        }
        names.push(format!(
            "[{}]",
            w.iter().map(|&v| q.name(v)).collect::<Vec<_>>().join(",")
        ));
        weights.push(w);
    }
    let n = weights.len();
    let hom = (0..n * n).map(|i| weight_hom(q, &weights[i / n], &weights[i % n])).collect();
    let category = Arc::new(
        QuantCategory::new(q.clone(), names, hom).expect("presheaf homs form a category"),
    );
    let embedding = QuantFunctor::new(c.clone(), category.clone(), obj_map).expect("Yoneda embedding");
    Ok(QuantCompletion {
        category,
        weights,
        embedding,
    })
}

fn quant_skeleton<B: Base>(c: &QuantCategory<B>) -> Vec<ObjId> {
    let mut reps: Vec<ObjId> = Vec::new();
    for a in c.objects() {
        if !reps.iter().any(|&r| c.isomorphic(a, r)) {
            reps.push(a);
        }
    }
    reps
}

/// Equivalence of enriched categories: isomorphic skeletons.
pub fn quant_equivalent<B: Base>(a: &QuantCategory<B>, b: &QuantCategory<B>) -> bool {
    let (sa, sb) = (quant_skeleton(a), quant_skeleton(b));
    if sa.len() != sb.len() {
        return false;
    }
    let base = a.base();
    let mut assigned: Vec<usize> = Vec::with_capacity(sa.len());
    let mut used = vec![false; sb.len()];
    fn go<B: Base>(
        a: &QuantCategory<B>,
        b: &QuantCategory<B>,
        base: &B,
        sa: &[ObjId],
        sb: &[ObjId],
        assigned: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let i = assigned.len();
        if i == sa.len() {
            return true;
        }
        for j in 0..sb.len() {
            if used[j] {
                continue;
            }
            let ok = (0..i).chain(std::iter::once(i)).all(|k| {
                let jk = if k == i { j } else { assigned[k] };
                base.same(a.hom(sa[i], sa[k]), b.hom(sb[j], sb[jk]))
                    && base.same(a.hom(sa[k], sa[i]), b.hom(sb[jk], sb[j]))
            });
            if ok {
                used[j] = true;
                assigned.push(j);
                if go(a, b, base, sa, sb, assigned, used) {
                    return true;
                }
                assigned.pop();
                used[j] = false;
            }
        }
        false
    }
    go(a, b, base, &sa, &sb, &mut assigned, &mut used)
}
