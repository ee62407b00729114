//! The property suite: each decision procedure checked against the generic
//! coend computation or against the others.

use std::sync::Arc;

use rand::Rng;
use serde_json::json;

use super::gen::*;
use super::shrink::{check_shrinking, Check, Shrink};
use super::{Outcome, Property};
use crate::base::{Base, Dist, Quantale};
use crate::completion::{
    absolute_weight_witness, comparison_functor, is_cauchy_complete, karoubi, morita_equivalent,
    precomposition_equivalence_check, quant_equivalent, quantale_completion, skeletal, CompletionError, FactorChoice,
};
use crate::contexts::{
    decompose_cd, group_domain_cd, groupoid_domain_classify, monoid_cd, monoid_epi_refute, ordinary_preorder_cd,
    pi0_check, preorder_2functor_cd, quantale_cd, reassembles_to, EpiVerdict, GroupoidVerdict,
};
use crate::fincat::{
    deloop, deloop_hom, disjoint_union, disjoint_union_functor, map_values, two_to_set_functor, FinCategory,
    FinFunctor, Monoid, QuantCategory, QuantFunctor, SizeCap,
};
use crate::prof::{
    coend_collage, compose_profunctors, doubled_image_collage, find_left_adjoint, find_right_adjoint,
    hom_profunctor, is_absolutely_dense_lan, is_cauchy_dense, is_cauchy_dense_quant, is_dense, is_fully_faithful,
    laxepi_check, lower_star, shortcut_report, split_full_shortcut, split_full_witness, ProfError, SetProfunctor,
    ShortcutFlag, Verdict,
};
use crate::search::{natural_isomorphism, FunctorSearch};

/// Targets for functor-category checks.
const TARGET_CAP: SizeCap = SizeCap {
    max_objects: 8,
    max_morphisms: 48,
};
/// Karoubi envelopes of collages used as refuting targets; precomposition
/// failures are found long before enumeration finishes.
const REFUTER_CAP: SizeCap = SizeCap {
    max_objects: 8,
    max_morphisms: 160,
};
/// Functors `B -> C` enumerated before a sample is skipped.
const TARGET_FUNCTORS: usize = 256;
/// Explorer cap used by the suite.
const EPI_CAP: usize = 4;

fn cd(f: &FinFunctor) -> bool {
    is_cauchy_dense(f)
}

/// Sizes for properties that enumerate functor categories.
fn small(cfg: &GenConfig) -> GenConfig {
    cfg.with_sizes(3, 10)
}

// ---------------------------------------------------------------- oracles

fn oracle_monoid(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_monoid_hom(cfg, rng), |h| {
        let (direct, generic) = (monoid_cd(h).0, cd(&deloop_hom(h)));
        Check::expect(direct == generic, || format!("tensor congruence says {direct}, coend says {generic}"))
    })
}

fn oracle_group(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_group_hom(cfg, rng), |h| {
        let v = match group_domain_cd(h) {
            Ok(v) => v,
            Err(e) => return Check::Skip(e.to_string()),
        };
        let generic = cd(&deloop_hom(h));
        if v.cauchy_dense != generic {
            return Check::Fail(format!("surjectivity says {}, coend says {generic}", v.cauchy_dense));
        }
        Check::expect(!v.cauchy_dense || v.codomain_is_group, || "dense image of a group is not a group".into())
    })
}

fn oracle_preorder_two(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_preorder_functor(cfg, rng), |f| {
        let direct = match preorder_2functor_cd(f) {
            Ok(v) => v,
            Err(e) => return Check::Skip(e.to_string()),
        };
        let generic = is_cauchy_dense_quant(f);
        Check::expect(direct == generic && quantale_cd(f) == generic, || {
            format!("essential surjectivity says {direct}, all-pairs coend says {generic}")
        })
    })
}

fn oracle_preorder_set(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let f = if rng.gen_bool(0.5) {
        gen_thin_functor(cfg, rng)
    } else {
        let (a, b) = (gen_preorder_category(cfg, rng), gen_preorder_category(cfg, rng));
        FunctorSearch::new(&a, &b)
            .random(rng)
            .unwrap_or_else(|| FinFunctor::identity(a.clone()))
    };
    check_shrinking(f, |f| {
        if !f.dom().is_thin() || !f.cod().is_thin() {
            return Check::Skip("not thin".into());
        }
        let direct = ordinary_preorder_cd(f).expect("thin");
        let generic = cd(f);
        Check::expect(direct == generic, || format!("fibre connectivity says {direct}, coend says {generic}"))
    })
}

fn oracle_quantale(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let q = gen_quantale(rng);
    check_shrinking(gen_quant_functor(cfg, &q, rng), |f| {
        let (diag, all) = (quantale_cd(f), is_cauchy_dense_quant(f));
        Check::expect(diag == all, || format!("diagonal says {diag}, all pairs say {all}"))
    })
}

fn oracle_metric(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_metric_map(cfg, rng), |f| {
        let (diag, all) = (quantale_cd(f), is_cauchy_dense_quant(f));
        Check::expect(diag == all, || format!("diagonal says {diag}, all pairs say {all}"))
    })
}

fn base_change(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_preorder_functor(cfg, rng), |f| {
        let s = two_to_set_functor(f).expect("two-valued");
        let set_side = ordinary_preorder_cd(&s).expect("thin");
        let two_side = preorder_2functor_cd(f).expect("two-valued");
        Check::expect(!set_side || two_side, || "dense over Set but not over 2".into())
    })
}

/// Integer distances read in the Lukasiewicz chain with `top - d` for `d`
/// and the bottom for `inf`; `top` exceeds every finite distance.
fn rplus_agreement(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_integer_metric_map(cfg, 4, rng), |f| {
        let finite = |c: &QuantCategory<crate::base::RPlus>| {
            c.objects()
                .flat_map(|a| c.objects().map(move |b| (a, b)))
                .filter_map(|(a, b)| match c.hom(a, b) {
                    Dist::Finite(d) => Some(*d as usize),
                    Dist::Infinite => None,
                })
                .max()
                .unwrap_or(0)
        };
        let top = finite(f.dom()).max(finite(f.cod())) + 1;
        let q = Quantale::chain_lukasiewicz(top + 1);
        let to_q = |v: &Dist| match v {
            Dist::Finite(d) => top - *d as usize,
            Dist::Infinite => 0,
        };
        let (a, b) = (
            map_values(f.dom(), q.clone(), to_q).expect("embedding preserves the axioms"),
            map_values(f.cod(), q.clone(), to_q).expect("embedding preserves the axioms"),
        );
        let g = QuantFunctor::new(Arc::new(a), Arc::new(b), f.obj_map().to_vec()).expect("monotone");
        let (r, fq) = (is_cauchy_dense_quant(f), is_cauchy_dense_quant(&g));
        Check::expect(r == fq && quantale_cd(f) == quantale_cd(&g), || {
            format!("reals say {r}, finite chain says {fq}")
        })
    })
}

// ------------------------------------------------------------ prof module

fn self_duality(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_functor(cfg, rng).functor, |f| {
        let (x, y) = (cd(f), cd(&f.opposite()));
        Check::expect(x == y, || format!("dense: {x}, opposite dense: {y}"))
    })
}

fn closure(part: char) -> impl Fn(&(FinFunctor, FinFunctor)) -> Check {
    move |(f, g)| {
        let gf = f.then(g);
        let (cf, cg, cgf) = (cd(f), cd(g), cd(&gf));
        match part {
            'a' => Check::expect(!(cf && cg) || cgf, || "F and G dense, GF not".into()),
            'b' => Check::expect(!(cgf && is_fully_faithful(g)) || cf, || "GF dense, G ff, F not dense".into()),
            _ => Check::expect(!(cgf && cf) || cg, || "GF and F dense, G not".into()),
        }
    }
}

fn closure_a(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_composable_pair(cfg, rng), closure('a'))
}

fn closure_b(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_composable_pair(cfg, rng), closure('b'))
}

fn closure_c(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_composable_pair(cfg, rng), closure('c'))
}

fn lan(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_functor(cfg, rng).functor, |f| {
        let pointwise = f.cod().objects().all(|b| is_absolutely_dense_lan(f, b));
        let dense = cd(f);
        Check::expect(pointwise == dense, || format!("Kan extension test {pointwise}, coend {dense}"))
    })
}

/// Whether precomposition with `f` is fully faithful into every target;
/// `None` when a target is too large to enumerate.
pub(crate) fn lax_epi_all(f: &FinFunctor, targets: &[Arc<FinCategory>]) -> Option<bool> {
    for c in targets {
        match laxepi_check(f, c, TARGET_CAP, TARGET_FUNCTORS) {
            Ok(Verdict::Holds) => {}
            Ok(Verdict::Fails(_)) => return Some(false),
            Err(ProfError::Cap(_) | ProfError::TooManyFunctors(_)) => return None,
            Err(e) => panic!("lax epi check: {e}"),
        }
    }
    Some(true)
}

fn lax_epi(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let cfg = small(cfg);
    let f = gen_functor(&cfg, rng).functor;
    let extra = gen_category(&cfg.smaller(), rng);
    check_shrinking((f, vec![extra]), |(f, extra)| {
        let targets = [coend_collage(f), doubled_image_collage(f), extra[0].clone()];
        let Some(epi) = lax_epi_all(f, &targets) else {
            return Check::Skip("target too large".into());
        };
        let dense = cd(f);
        Check::expect(epi == dense, || format!("lax epi against the targets: {epi}, dense: {dense}"))
    })
}

fn adjoints(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let cfg = small(&cfg.smaller());
    check_shrinking(gen_functor(&cfg, rng).functor, |f| {
        let mut checked = false;
        if let Some(adj) = find_right_adjoint(f) {
            checked = true;
            if !adj.verify() {
                return Check::Fail("right adjoint fails the triangle identities".into());
            }
            let (dense, ff, dense_pre) = (cd(f), is_fully_faithful(&adj.right), is_dense(f));
            if dense != ff {
                return Check::Fail(format!("left adjoint dense: {dense}, right adjoint ff: {ff}"));
            }
            if dense != dense_pre {
                return Check::Fail(format!("left adjoint Cauchy dense: {dense}, dense: {dense_pre}"));
            }
        }
        if let Some(adj) = find_left_adjoint(f) {
            checked = true;
            let (dense, ff) = (cd(&adj.left), is_fully_faithful(f));
            if !adj.verify() || dense != ff {
                return Check::Fail(format!("left adjoint dense: {dense}, right adjoint ff: {ff}"));
            }
        }
        if checked {
            Check::Pass
        } else {
            Check::Skip("no adjoint".into())
        }
    })
}

fn shortcut(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_functor(cfg, rng).functor, |f| {
        let r = shortcut_report(f);
        if r.flag.is_some() != (r.diagonal_surjective != r.cauchy_dense) {
            return Check::Fail("disagreement not flagged".into());
        }
        if let Some(w) = split_full_witness(f) {
            if split_full_shortcut(f, &w) != Ok(r.diagonal_surjective) {
                return Check::Fail("shortcut and report disagree".into());
            }
        }
        match r.flag {
            Some(ShortcutFlag::TheoremViolation) => Check::Fail("split-full functor where the diagonal misleads".into()),
            Some(ShortcutFlag::HypothesisNotMet) => Check::Skip("flagged: hypothesis not met".into()),
            None => Check::Pass,
        }
    })
}

/// `elements` maps each class of the composite at `(c, a)` into `target`;
/// checks it is a bijection.
fn bijective(composite: &SetProfunctor, target: &SetProfunctor, map: impl Fn(usize, usize, usize) -> usize) -> bool {
    let (na, nc) = (target.dom().num_objects(), target.cod().num_objects());
    (0..nc).all(|c| {
        (0..na).all(|a| {
            let n = target.size(c, a);
            if composite.size(c, a) != n {
                return false;
            }
            let mut hit = vec![false; n];
            (0..n).all(|k| {
                let x = map(c, a, k);
                x < n && !std::mem::replace(&mut hit[x], true)
            })
        })
    })
}

fn density_formula(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_functor(cfg, rng).functor, |f| {
        let phi = lower_star(f);
        let left = compose_profunctors(&hom_profunctor(f.dom()), &phi).expect("matching");
        let na = f.dom().num_objects();
        let ok_left = bijective(&left.profunctor, &phi, |c, a, k| {
            let (b, x, y) = left.representatives[c * na + a][k];
            // the morphism x: b -> a of A acts on y in phi(c, b)
            phi.act_dom(f.dom().hom(b, a)[x], c, y)
        });
        let right = compose_profunctors(&phi, &hom_profunctor(f.cod())).expect("matching");
        let ok_right = bijective(&right.profunctor, &phi, |c, a, k| {
            let (b, x, y) = right.representatives[c * na + a][k];
            // the morphism y: c -> b of B acts on x in phi(b, a)
            phi.act_cod(f.cod().hom(c, b)[y], a, x)
        });
        Check::expect(ok_left && ok_right, || format!("hom . phi: {ok_left}, phi . hom: {ok_right}"))
    })
}

fn counit_lax(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let q = gen_quantale(rng);
    check_shrinking(gen_quant_functor(cfg, &q, rng), |f| {
        let b_cat = f.cod();
        let base = b_cat.base();
        let ok = b_cat.objects().all(|b| {
            b_cat.objects().all(|b2| {
                let coend = base.join_all(
                    f.dom()
                        .objects()
                        .map(|a| base.tensor(b_cat.hom(f.obj(a), b2), b_cat.hom(b, f.obj(a)))),
                );
                base.leq(&coend, b_cat.hom(b, b2))
            })
        });
        Check::expect(ok, || "coend exceeds the hom".into())
    })
}

// ------------------------------------------------------ completion module

fn karoubi_suite(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let a = gen_category(&cfg.smaller(), rng);
    let keep_bits: u64 = rng.gen();
    check_shrinking(a, |a| {
        let env = match karoubi(a, SizeCap::ENUMERATION) {
            Ok(e) => e,
            Err(e) => return Check::Skip(e.to_string()),
        };
        if env.category.validate(SizeCap::VALIDATION).is_err() {
            return Check::Fail("envelope is not a category".into());
        }
        if !is_cauchy_complete(&env.category) {
            return Check::Fail("envelope has an unsplit idempotent".into());
        }
        let z = &env.embedding;
        if !is_fully_faithful(z) || !cd(z) {
            return Check::Fail("embedding is not ff and dense".into());
        }
        // a full subcategory between the representables and the envelope
        let keep: Vec<usize> = env
            .category
            .objects()
            .filter(|x| z.obj_map().contains(x) || keep_bits >> (x % 64) & 1 == 1)
            .collect();
        let mid = inclusion(&env.category, &keep);
        let into_mid = FinFunctor::new(
            a.clone(),
            mid.dom().clone(),
            z.obj_map().iter().map(|x| keep.iter().position(|y| y == x).expect("kept")).collect(),
            z.mor_map()
                .iter()
                .map(|m| {
                    let sub = env.category.full_subcategory(&keep);
                    sub.morphisms.iter().position(|n| n == m).expect("kept")
                })
                .collect(),
        )
        .expect("corestriction");
        Check::expect(cd(&into_mid) && cd(&mid), || "intermediate subcategory breaks density".into())
    })
}

fn comparison(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let cfg = small(cfg);
    check_shrinking(gen_ff_cd_functor(&cfg, rng).functor, |f| {
        if !is_fully_faithful(f) || !cd(f) {
            return Check::Skip("not ff and dense".into());
        }
        let env = match karoubi(f.dom(), SizeCap::ENUMERATION) {
            Ok(e) => e,
            Err(e) => return Check::Skip(e.to_string()),
        };
        let first = match comparison_functor(f, &env, FactorChoice::First) {
            Ok(n) => n,
            Err(e) => return Check::Fail(format!("comparison functor: {e}")),
        };
        let last = comparison_functor(f, &env, FactorChoice::Last).expect("same preconditions");
        if !is_fully_faithful(&first) {
            return Check::Fail("comparison functor is not ff".into());
        }
        if natural_isomorphism(&f.then(&first), &env.embedding).is_none() {
            return Check::Fail("N F is not isomorphic to the embedding".into());
        }
        Check::expect(natural_isomorphism(&first, &last).is_some(), || {
            "factorization choices give non-isomorphic functors".into()
        })
    })
}

fn morita(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let cfg = small(cfg);
    check_shrinking(gen_ff_cd_functor(&cfg, rng).functor, |f| {
        let a = f.dom();
        let env = match karoubi(a, SizeCap::ENUMERATION) {
            Ok(e) => e,
            Err(e) => return Check::Skip(e.to_string()),
        };
        let mut pairs = vec![(a.clone(), env.category.clone())];
        if is_fully_faithful(f) && cd(f) {
            pairs.push((a.clone(), f.cod().clone()));
        }
        for (x, y) in pairs {
            match morita_equivalent(&x, &y, SizeCap::ENUMERATION) {
                Ok(Some(z)) if z.verify() => {}
                Ok(Some(_)) => return Check::Fail("emitted zigzag does not re-validate".into()),
                Ok(None) => return Check::Fail("Morita equivalent categories reported inequivalent".into()),
                Err(CompletionError::Cap(_)) => return Check::Skip("envelope over cap".into()),
                Err(e) => return Check::Fail(e.to_string()),
            }
        }
        Check::Pass
    })
}

/// Outcome of the precomposition check against several targets.
pub(crate) fn precomposition_all(
    f: &FinFunctor,
    targets: &[Arc<FinCategory>],
    cap: SizeCap,
) -> Result<Vec<bool>, String> {
    targets
        .iter()
        .map(|c| match precomposition_equivalence_check(f, c, cap, TARGET_FUNCTORS) {
            Ok(v) => Ok(v.holds()),
            Err(e) => Err(e.to_string()),
        })
        .collect()
}

/// Cauchy complete targets that refute a functor that is not ff and dense.
pub(crate) fn refuting_targets(f: &FinFunctor) -> Vec<Arc<FinCategory>> {
    let mut out = Vec::new();
    for c in [f.dom().clone(), coend_collage(f), doubled_image_collage(f)] {
        if let Ok(env) = karoubi(&c, SizeCap::VALIDATION) {
            let s = skeletal(&env.category);
            if REFUTER_CAP.admits(&s) {
                out.push(s);
            }
        }
    }
    out.push(Arc::new(FinCategory::discrete(&["0", "1"])));
    out
}

fn precomposition(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let cfg = small(&cfg.smaller());
    let positive = rng.gen_bool(0.5);
    let f = if positive {
        gen_ff_cd_functor(&cfg, rng).functor
    } else {
        gen_unconstrained_functor(&cfg, rng).functor
    };
    let targets: Vec<Arc<FinCategory>> = (0..3).map(|_| gen_cauchy_complete(&cfg, rng)).collect();
    check_shrinking((f, targets), |(f, targets)| {
        let good = is_fully_faithful(f) && cd(f);
        if good {
            match precomposition_all(f, targets, TARGET_CAP) {
                Ok(v) => Check::expect(v.iter().all(|&x| x), || "ff dense functor refuted by a target".into()),
                Err(e) => Check::Skip(e),
            }
        } else {
            match precomposition_all(f, &refuting_targets(f), REFUTER_CAP) {
                Ok(v) => Check::expect(v.iter().any(|&x| !x), || "no target refutes a functor that is not ff and dense".into()),
                Err(e) => Check::Skip(e),
            }
        }
    })
}

fn quant_completion(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let q = gen_quantale(rng);
    let c = gen_quant_category(&cfg.with_sizes(3, 9), &q, rng);
    check_shrinking(c, |c| {
        let done = match quantale_completion(c) {
            Ok(d) => d,
            Err(e) => return Check::Skip(e.to_string()),
        };
        if !done.embedding.is_fully_faithful() {
            return Check::Fail("embedding is not ff".into());
        }
        for a in c.objects() {
            let r: Vec<usize> = c.objects().map(|x| *c.hom(x, a)).collect();
            if !matches!(absolute_weight_witness(c, &r), Ok(Some(_))) {
                return Check::Fail("a representable is not absolute".into());
            }
        }
        let again = match quantale_completion(&done.category) {
            Ok(d) => d,
            Err(e) => return Check::Skip(e.to_string()),
        };
        Check::expect(quant_equivalent(&again.category, &done.category), || {
            "completion is not idempotent".into()
        })
    })
}

// -------------------------------------------------------- contexts module

fn pi0_theorem(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_functor(cfg, rng).functor, |f| {
        if !cd(f) {
            return Check::Pass;
        }
        if !pi0_check(f) {
            return Check::Fail("dense functor with non-bijective components".into());
        }
        match decompose_cd(f) {
            Ok(pieces) => Check::expect(
                reassembles_to(f, &pieces) && pieces.iter().all(|p| cd(&p.functor)),
                || "decomposition does not reassemble".into(),
            ),
            Err(e) => Check::Fail(e.to_string()),
        }
    })
}

fn disjoint_unions(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let half = cfg.smaller();
    let parts = (gen_functor(&half, rng).functor, gen_functor(&half, rng).functor);
    check_shrinking(parts, |(f, g)| {
        let u = disjoint_union_functor(&[f.clone(), g.clone()]);
        let (x, y) = (cd(&u), cd(f) && cd(g));
        Check::expect(x == y, || format!("union dense: {x}, both summands dense: {y}"))
    })
}

fn groupoid(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let half = cfg.smaller();
    let summands: Vec<Arc<FinCategory>> = (0..rng.gen_range(1..=2))
        .map(|_| {
            if rng.gen_bool(0.3) {
                Arc::new(FinCategory::terminal())
            } else {
                Arc::new(deloop(&gen_group(&half, rng)))
            }
        })
        .collect();
    let a = disjoint_union(&summands).0;
    let f = if rng.gen_bool(0.5) {
        // onto a category built from quotients of the summands
        let quotients: Vec<FinFunctor> = summands
            .iter()
            .map(|s| {
                let t = Arc::new(deloop(&Monoid::trivial()));
                if rng.gen_bool(0.5) {
                    FinFunctor::identity(s.clone())
                } else {
                    FunctorSearch::new(s, &t).first().expect("terminal")
                }
            })
            .collect();
        disjoint_union_functor(&quotients)
    } else {
        let b = gen_category(cfg, rng);
        FunctorSearch::new(&a, &b)
            .random(rng)
            .unwrap_or_else(|| FinFunctor::identity(a.clone()))
    };
    check_shrinking(f, |f| {
        if !f.dom().is_groupoid() {
            return Check::Skip("domain is not a groupoid".into());
        }
        match groupoid_domain_classify(f) {
            Ok(GroupoidVerdict::NotCauchyDense(_)) => Check::expect(!cd(f), || "dense functor rejected".into()),
            Ok(GroupoidVerdict::DisjointUnion { pieces, equivalence }) => {
                if !cd(f) {
                    return Check::Fail("non-dense functor classified".into());
                }
                if !pieces.iter().all(|p| p.hom.is_surjective()) {
                    return Check::Fail("a piece is not a surjective group hom".into());
                }
                Check::expect(!f.dom().is_discrete() || equivalence == Some(true), || {
                    "dense functor out of a discrete category is not an equivalence".into()
                })
            }
            Err(e) => Check::Fail(e.to_string()),
        }
    })
}

fn epi(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    check_shrinking(gen_monoid_hom(cfg, rng), |h| {
        if !monoid_cd(h).0 {
            return Check::Skip("not dense".into());
        }
        match monoid_epi_refute(h, EPI_CAP) {
            Ok(EpiVerdict::NoCounterexample { .. }) => Check::Pass,
            Ok(EpiVerdict::Refuted { target, .. }) => {
                Check::Fail(format!("dense hom refuted as epi by a monoid of order {}", target.len()))
            }
            Err(e) => Check::Fail(e.to_string()),
        }
    })
}

// ------------------------------------------------------------- generators

fn recipes(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let g = gen_cd_functor(cfg, rng);
    let recipe = g.recipe;
    check_shrinking(g.functor, |f| {
        if f.validate().is_err() || f.dom().validate(cfg.cap()).is_err() || f.cod().validate(cfg.cap()).is_err() {
            return Check::Fail(format!("{recipe:?} produced an invalid functor"));
        }
        Check::expect(!recipe.cauchy_dense() || cd(f), || format!("{recipe:?} produced a non-dense functor"))
    })
}

fn generated_valid(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
    let c = gen_category(cfg, rng);
    let f = gen_unconstrained_functor(cfg, rng).functor;
    let ok = c.validate(cfg.cap()).is_ok() && f.validate().is_ok() && f.dom().validate(cfg.cap()).is_ok();
    if ok {
        Outcome::Pass
    } else {
        // invalid structures cannot be shrunk
        Outcome::Fail {
            reason: "generated structure fails validation".into(),
            witness: json!({ "category": c.describe(), "functor": f.describe() }),
            shrink_steps: 0,
        }
    }
}

// ------------------------------------------------------------------ suite

pub fn default_properties() -> Vec<Property> {
    vec![
        Property::new("gen.valid", "generated categories and functors validate", generated_valid),
        Property::new("gen.cd-recipes", "recipe functors are Cauchy dense", recipes),
        Property::new("oracle.monoid", "tensor congruence agrees with the coend", oracle_monoid),
        Property::new("oracle.group", "homs out of groups are dense iff surjective", oracle_group),
        Property::new("oracle.preorder-two", "monotone maps are dense iff essentially surjective", oracle_preorder_two),
        Property::new("oracle.preorder-set", "fibre connectivity agrees with the coend", oracle_preorder_set),
        Property::new("oracle.quantale", "diagonal test agrees with all pairs", oracle_quantale),
        Property::new("oracle.metric", "metric diagonal test agrees with all pairs", oracle_metric),
        Property::new("base-change", "dense over Set implies dense over 2", base_change),
        Property::new("rplus.agreement", "integer metrics decide alike over the reals and a finite chain", rplus_agreement),
        Property::new("prof.self-duality", "F dense iff F^op dense", self_duality),
        Property::new("prof.closure-a", "dense functors compose", closure_a),
        Property::new("prof.closure-b", "GF dense and G ff imply F dense", closure_b),
        Property::new("prof.closure-c", "GF and F dense imply G dense", closure_c),
        Property::new("prof.lan", "dense iff left Kan extensions of representables are representable", lan),
        Property::new("prof.lax-epi", "dense iff precomposition is ff into the canonical targets", lax_epi),
        Property::new("prof.adjoints", "a left adjoint is dense iff its right adjoint is ff", adjoints),
        Property::new("prof.shortcut", "diagonal shortcut disagreements are flagged", shortcut),
        Property::new("prof.density-formula", "hom is a unit for profunctor composition", density_formula),
        Property::new("prof.counit-lax", "enriched coends lie below homs", counit_lax),
        Property::new("completion.karoubi", "envelopes are complete and receive a dense ff embedding", karoubi_suite),
        Property::new("completion.comparison", "comparison functors are ff and essentially unique", comparison),
        Property::new("completion.morita", "zigzags of ff dense functors give Morita equivalence", morita),
        Property::new("completion.precomposition", "precomposition is an equivalence iff F is ff and dense", precomposition),
        Property::new("completion.weights", "enriched completion is idempotent", quant_completion),
        Property::new("contexts.pi0", "dense functors are bijective on components", pi0_theorem),
        Property::new("contexts.disjoint-union", "a union is dense iff its summands are", disjoint_unions),
        Property::new("contexts.groupoid", "dense groupoid functors are unions of surjective group homs", groupoid),
        Property::new("contexts.epi", "dense monoid homs are not refuted as epis", epi),
    ]
}

pub fn property_by_id(id: &str) -> Option<Property> {
    default_properties().into_iter().find(|p| p.id == id)
}

/// Self-duality against a deliberately wrong decision for the opposite
/// functor, for checking that the harness reports and shrinks failures.
pub fn broken_self_duality() -> Property {
    fn check(cfg: &GenConfig, rng: &mut SampleRng) -> Outcome {
        check_shrinking(gen_functor(cfg, rng).functor, |f| {
            let op = f.opposite();
            let stub = is_fully_faithful(&op);
            Check::expect(cd(f) == stub, || format!("dense: {}, stub: {stub}", cd(f)))
        })
    }
    Property::new("fault.self-duality", "self-duality with a broken decision", check)
}
