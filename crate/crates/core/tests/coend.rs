//! Cauchy density decided by a coend written from scratch.

use cauchyden::fincat::FinFunctor;
use cauchyden::harness::{gen_functor, gen_unconstrained_functor, GenConfig, Shrink};
use cauchyden::prof::is_cauchy_dense;

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Elements `(a, g: b -> Fa, h: Fa -> b2)` modulo `(a, g, h.Fu) ~ (a2, Fu.g, h)`
/// for `u: a -> a2`; dense iff `[a, g, h] |-> h.g` is a bijection for all `b, b2`.
fn dense_by_coend(f: &FinFunctor) -> bool {
    let (a_cat, b_cat) = (f.dom(), f.cod());
    for b in b_cat.objects() {
        for b2 in b_cat.objects() {
            let mut elems = Vec::new();
            for a in a_cat.objects() {
                for &g in b_cat.hom(b, f.obj(a)) {
                    for &h in b_cat.hom(f.obj(a), b2) {
                        elems.push((a, g, h));
                    }
                }
            }
            let index = |a: usize, g: usize, h: usize| elems.iter().position(|&e| e == (a, g, h)).unwrap();
            let mut parent: Vec<usize> = (0..elems.len()).collect();
            for u in a_cat.morphisms() {
                let (a, a2) = (a_cat.src(u), a_cat.dst(u));
                let fu = f.mor(u);
                for &g in b_cat.hom(b, f.obj(a)) {
                    for &h in b_cat.hom(f.obj(a2), b2) {
                        let x = find(&mut parent, index(a, g, b_cat.comp(h, fu)));
                        let y = find(&mut parent, index(a2, b_cat.comp(fu, g), h));
                        parent[x] = y;
                    }
                }
            }
            let mut image = vec![None; b_cat.num_morphisms()];
            for (i, &(_, g, h)) in elems.iter().enumerate() {
                let class = find(&mut parent, i);
                match image[b_cat.comp(h, g)] {
                    None => image[b_cat.comp(h, g)] = Some(class),
                    Some(c) if c != class => return false,
                    _ => {}
                }
            }
            if b_cat.hom(b, b2).iter().any(|&m| image[m].is_none()) {
                return false;
            }
        }
    }
    true
}

#[test]
fn agrees_with_the_library() {
    let cfg = GenConfig::default();
    let (mut dense, mut other) = (0, 0);
    for i in 0..600 {
        let mut rng = cfg.rng("coend-test", i);
        let f = if i % 2 == 0 {
            gen_functor(&cfg, &mut rng).functor
        } else {
            gen_unconstrained_functor(&cfg, &mut rng).functor
        };
        let want = dense_by_coend(&f);
        assert_eq!(is_cauchy_dense(&f), want, "sample {i}: {}", f.describe());
        if want {
            dense += 1;
        } else {
            other += 1;
        }
    }
    assert!(dense >= 100 && other >= 100, "{dense} dense, {other} not");
}
