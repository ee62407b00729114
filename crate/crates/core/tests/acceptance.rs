//! The acceptance run: one PASS/FAIL line per criterion.

use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cauchyden::base::{Base, Dist, Quantale, RPlus};
use cauchyden::completion::{
    is_cauchy_complete, karoubi, morita_equivalent, precomposition_equivalence_check, skeletal,
};
use cauchyden::contexts::{
    monoid_cd, monoid_epi_refute, monoids_of_order, preorder_2functor_cd, quantale_cd, EpiVerdict,
};
use cauchyden::fincat::{
    deloop, deloop_hom, monoid_homs, FinCategory, FinFunctor, Monoid, MonoidHom, QuantCategory, QuantFunctor,
    SizeCap,
};
use cauchyden::harness::{
    default_properties, gen_category, gen_cauchy_complete, gen_ff_cd_functor, gen_functor, gen_monoid, gen_monoid_hom,
    gen_unconstrained_functor, property_by_id, run_properties, run_property, GenConfig,
};
use cauchyden::json::FunctorJson;
use cauchyden::prof::{
    coend_collage, counit_map, doubled_image_collage, is_absolutely_dense_lan, is_cauchy_dense,
    is_cauchy_dense_quant, is_fully_faithful, laxepi_check, shortcut_report, ProfError, ShortcutFlag, Verdict,
};
use rayon::prelude::*;

type Outcome = Result<String, String>;

const TARGET_CAP: SizeCap = SizeCap {
    max_objects: 8,
    max_morphisms: 48,
};
const REFUTER_CAP: SizeCap = SizeCap {
    max_objects: 8,
    max_morphisms: 160,
};
const FUNCTOR_LIMIT: usize = 256;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs the named properties; every sample must pass or skip, and at
/// least `min_checked` samples of each must actually be checked.
fn run_suite(ids: &[&str], samples: usize, min_checked: usize) -> Result<(usize, Duration), String> {
    let cfg = GenConfig::default();
    let start = Instant::now();
    let mut checked = 0;
    for id in ids {
        let p = property_by_id(id).ok_or_else(|| format!("unknown property {id}"))?;
        let r = run_property(&cfg, &p, samples);
        if let Some(f) = r.failures.first() {
            return Err(format!("{id}: sample {} failed: {} ({})", f.sample, f.reason, f.witness));
        }
        ensure(r.passed >= min_checked, || {
            format!("{id}: only {} of {samples} samples checked ({:?})", r.passed, r.skip_reasons)
        })?;
        checked += r.passed;
    }
    Ok((checked, start.elapsed()))
}

fn hom(dom: Monoid, cod: Monoid, map: Vec<usize>) -> MonoidHom {
    MonoidHom::new(Arc::new(dom), Arc::new(cod), map).expect("homomorphism")
}

// ------------------------------------------------------------ criterion 1

fn oracle_agreement() -> Outcome {
    let ids = [
        "oracle.monoid",
        "oracle.group",
        "oracle.preorder-two",
        "oracle.preorder-set",
        "oracle.quantale",
        "oracle.metric",
    ];
    let (checked, time) = run_suite(&ids, 500, 500)?;
    ensure(time <= Duration::from_secs(120), || format!("took {time:.2?}"))?;
    Ok(format!("{checked} samples over {} contexts, 0 disagreements, {time:.2?}", ids.len()))
}

// ------------------------------------------------------------ criterion 2

fn functor(a: FinCategory, b: FinCategory, obj: Vec<usize>) -> FinFunctor {
    // thin domains only: each morphism goes to the unique one between the images
    let (a, b) = (Arc::new(a), Arc::new(b));
    let mor = a
        .morphisms()
        .map(|m| b.hom(obj[a.src(m)], obj[a.dst(m)])[0])
        .collect();
    FinFunctor::new(a, b, obj, mor).expect("functor")
}

fn two_preorder(names: &[&str], leq: impl Fn(usize, usize) -> bool) -> Arc<QuantCategory<Quantale>> {
    let two = Quantale::two();
    let (top, bot) = (two.top(), two.bottom());
    let n = names.len();
    let hom = (0..n * n).map(|k| if leq(k / n, k % n) { top } else { bot }).collect();
    Arc::new(QuantCategory::new(two, names.iter().map(|s| s.to_string()).collect(), hom).expect("preorder"))
}

fn metric(tolerance: f64, points: &[f64]) -> Arc<QuantCategory<RPlus>> {
    let n = points.len();
    let hom = (0..n * n)
        .map(|k| Dist::Finite((points[k / n] - points[k % n]).abs()))
        .collect();
    let names = (0..n).map(|i| format!("x{i}")).collect();
    Arc::new(QuantCategory::new(RPlus::with_tolerance(tolerance), names, hom).expect("metric"))
}

/// Classical density of the image, decided on the points themselves.
fn image_dense(points: &[f64], image: &[usize], tolerance: f64) -> bool {
    points
        .iter()
        .all(|b| image.iter().any(|&i| (points[i] - b).abs() <= tolerance / 2.0))
}

fn reference_instances() -> Outcome {
    let mut n = 0;
    let mut expect = |name: &str, got: bool, want: bool| {
        n += 1;
        ensure(got == want, || format!("{name}: got {got}, expected {want}"))
    };

    let (z2, z4) = (Monoid::cyclic(2), Monoid::cyclic(4));
    let quotient = hom(z4.clone(), z2.clone(), vec![0, 1, 0, 1]);
    expect("Z4 -> Z2", is_cauchy_dense(&deloop_hom(&quotient)), true)?;
    expect("Z4 -> Z2 tensor congruence", monoid_cd(&quotient).0, true)?;
    let inc = hom(z2, z4, vec![0, 2]);
    expect("Z2 -> Z4", is_cauchy_dense(&deloop_hom(&inc)), false)?;
    expect("Z2 -> Z4 tensor congruence", monoid_cd(&inc).0, false)?;

    // identity on objects, discrete {bot, top} into the arrow: the diagonal
    // counits are isomorphisms but the functor is not dense
    let arrow = FinCategory::walking_arrow();
    let f = functor(FinCategory::discrete(&["bot", "top"]), arrow.clone(), vec![0, 1]);
    expect("discrete into 2", is_cauchy_dense(&f), false)?;
    for b in 0..2 {
        let c = counit_map(&f, b, b).map_err(|e| e.to_string())?;
        expect("diagonal counit", c.is_surjective(f.cod()) && c.is_injective(), true)?;
    }

    let xy = || FinCategory::discrete(&["x", "y"]);
    expect("discrete collapse", is_cauchy_dense(&functor(xy(), FinCategory::discrete(&["x"]), vec![0, 0])), false)?;
    expect("discrete non-surjection", is_cauchy_dense(&functor(FinCategory::discrete(&["x"]), xy(), vec![0])), false)?;
    expect("discrete swap", is_cauchy_dense(&functor(xy(), xy(), vec![1, 0])), true)?;

    // monotone maps between preorders, as 2-functors
    let chain3 = two_preorder(&["0", "1", "2"], |a, b| a <= b);
    let chain2 = two_preorder(&["0", "1"], |a, b| a <= b);
    let bot = two_preorder(&["bot"], |_, _| true);
    let mutual = two_preorder(&["a", "b"], |_, _| true);
    let point = two_preorder(&["p"], |_, _| true);
    let cases = [
        ("surjective monotone map", QuantFunctor::new(chain3, chain2.clone(), vec![0, 0, 1]), true),
        ("inclusion of bot into 2", QuantFunctor::new(bot, chain2.clone(), vec![0]), false),
        ("one of two mutual elements", QuantFunctor::new(point.clone(), mutual, vec![0]), true),
        ("point into the bottom of 2", QuantFunctor::new(point, chain2, vec![0]), false),
    ];
    for (name, f, want) in cases {
        let f = f.map_err(|e| e.to_string())?;
        let es = f.cod().objects().all(|b| f.dom().objects().any(|a| f.cod().isomorphic(f.obj(a), b)));
        expect(name, es, want)?;
        expect(name, preorder_2functor_cd(&f).map_err(|e| e.to_string())?, want)?;
        expect(name, quantale_cd(&f), want)?;
        expect(name, is_cauchy_dense_quant(&f), want)?;
    }

    // metric spaces: dense iff the image is dense, at tolerance 1e-9
    let tol = 1e-9;
    let line = [0.0, 0.5, 1.0];
    let f = QuantFunctor::new(metric(tol, &[0.0, 1.0]), metric(tol, &line), vec![0, 2]).map_err(|e| e.to_string())?;
    expect("endpoints of [0, 1]", quantale_cd(&f), false)?;
    expect("endpoints of [0, 1], all pairs", is_cauchy_dense_quant(&f), false)?;
    let twins = [0.0, 1e-12, 1.0];
    let f = QuantFunctor::new(metric(tol, &[0.0, 1.0]), metric(tol, &twins), vec![0, 2]).map_err(|e| e.to_string())?;
    expect("near twin", is_cauchy_dense_quant(&f), true)?;
    let f0 = QuantFunctor::new(metric(0.0, &[0.0, 1.0]), metric(0.0, &twins), vec![0, 2]).map_err(|e| e.to_string())?;
    expect("near twin at zero tolerance", is_cauchy_dense_quant(&f0), false)?;
    let gap = [0.0, 1e-6, 1.0];
    let f = QuantFunctor::new(metric(tol, &[0.0, 1.0]), metric(tol, &gap), vec![0, 2]).map_err(|e| e.to_string())?;
    expect("gap of 1e-6", is_cauchy_dense_quant(&f), false)?;
    let far = {
        let names = vec!["p".to_string(), "q".to_string()];
        let d = |x: f64| Dist::Finite(x);
        let hom = vec![d(0.0), Dist::Infinite, Dist::Infinite, d(0.0)];
        Arc::new(QuantCategory::new(RPlus::default(), names, hom).expect("metric"))
    };
    let f = QuantFunctor::new(metric(tol, &[0.0]), far, vec![0]).map_err(|e| e.to_string())?;
    expect("infinitely far point", is_cauchy_dense_quant(&f), false)?;

    // random point sets on the line, with images perturbed below tolerance
    let mut rng = GenConfig::default().rng("acceptance.metric", 0);
    for _ in 0..200 {
        use rand::Rng;
        let m = rng.gen_range(1..=5);
        let mut points: Vec<f64> = (0..m).map(|_| rng.gen_range(0..8) as f64 / 4.0).collect();
        for _ in 0..rng.gen_range(0..3) {
            let i = rng.gen_range(0..m);
            let eps = if rng.gen_bool(0.5) { 1e-12 } else { 1e-6 };
            points.push(points[i] + eps);
        }
        let image: Vec<usize> = (0..points.len()).filter(|_| rng.gen_bool(0.6)).collect();
        if image.is_empty() {
            continue;
        }
        let a: Vec<f64> = image.iter().map(|&i| points[i]).collect();
        let f = QuantFunctor::new(metric(tol, &a), metric(tol, &points), image.clone()).map_err(|e| e.to_string())?;
        let want = image_dense(&points, &image, tol);
        expect("random line", quantale_cd(&f), want)?;
        expect("random line, all pairs", is_cauchy_dense_quant(&f), want)?;
    }
    Ok(format!("{n} instance checks"))
}

// ------------------------------------------------------------ criterion 3

/// `Some(true)` when precomposition is ff into every target, `None` when a
/// target is over the caps.
fn lax_epi_all(f: &FinFunctor, targets: &[Arc<FinCategory>]) -> Option<bool> {
    for c in targets {
        match laxepi_check(f, c, TARGET_CAP, FUNCTOR_LIMIT) {
            Ok(Verdict::Holds) => {}
            Ok(Verdict::Fails(_)) => return Some(false),
            Err(ProfError::Cap(_) | ProfError::TooManyFunctors(_)) => return None,
            Err(e) => panic!("lax epi check: {e}"),
        }
    }
    Some(true)
}

fn coherence() -> Outcome {
    let cfg = GenConfig::default().with_sizes(3, 10);
    let results: Vec<Option<(bool, String)>> = (0..400)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.rng("acceptance.coherence", i);
            let f = gen_functor(&cfg, &mut rng).functor;
            let mut targets = vec![coend_collage(&f), doubled_image_collage(&f)];
            targets.extend((0..3).map(|_| gen_category(&cfg.smaller(), &mut rng)));
            let epi = lax_epi_all(&f, &targets)?;
            let dense = is_cauchy_dense(&f);
            let lan = f.cod().objects().all(|b| is_absolutely_dense_lan(&f, b));
            let bad = (dense != lan || dense != epi).then(|| format!("sample {i}: dense {dense}, lan {lan}, lax epi {epi}"));
            Some((dense, bad.unwrap_or_default()))
        })
        .collect();
    let checked: Vec<&(bool, String)> = results.iter().flatten().collect();
    if let Some((_, e)) = checked.iter().find(|(_, e)| !e.is_empty()) {
        return Err(e.clone());
    }
    let positive = checked.iter().filter(|(d, _)| *d).count();
    ensure(checked.len() >= 200, || format!("only {} functors within caps", checked.len()))?;
    Ok(format!(
        "{} functors ({positive} dense), 5 targets each, 0 violations",
        checked.len()
    ))
}

// ------------------------------------------------------------ criterion 4

fn duality_and_closure() -> Outcome {
    let ids = ["prof.self-duality", "prof.closure-a", "prof.closure-b", "prof.closure-c"];
    let (checked, time) = run_suite(&ids, 200, 200)?;
    Ok(format!("{checked} samples, 0 violations, {time:.2?}"))
}

// ------------------------------------------------------------ criterion 5

fn completion_suite() -> Outcome {
    let ids = ["completion.karoubi", "completion.comparison"];
    let (checked, time) = run_suite(&ids, 120, 100)?;
    Ok(format!("{checked} samples, 0 failures, {time:.2?}"))
}

// ------------------------------------------------------------ criterion 6

fn morita() -> Outcome {
    let (checked, time) = run_suite(&["completion.morita"], 120, 100)?;
    let cap = SizeCap::ENUMERATION;
    let z = |n| Arc::new(deloop(&Monoid::cyclic(n)));
    let verdict = morita_equivalent(&z(2), &z(3), cap).map_err(|e| e.to_string())?;
    ensure(verdict.is_none(), || "Z2 and Z3 reported Morita equivalent".into())?;
    let idem = Arc::new(deloop(&Monoid::idempotent_pair()));
    let env = karoubi(&idem, cap).map_err(|e| e.to_string())?;
    let zigzag = morita_equivalent(&idem, &env.category, cap).map_err(|e| e.to_string())?;
    ensure(zigzag.is_some_and(|z| z.verify()), || "idempotent monoid vs its envelope".into())?;
    Ok(format!("{checked} sampled zigzags re-validated, Z2 vs Z3 false, {time:.2?}"))
}

// ------------------------------------------------------------ criterion 7

/// Cauchy complete targets built from `f`, for refuting it.
fn refuting_targets(f: &FinFunctor) -> Vec<Arc<FinCategory>> {
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

enum Precomp {
    Skip,
    Ok { equivalence: bool },
    Violation(String),
}

fn precomposition() -> Outcome {
    let cfg = GenConfig::default().with_sizes(2, 8);
    let positives: Vec<Precomp> = (0..120)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.rng("acceptance.precomposition+", i);
            let f = if i % 2 == 0 {
                gen_ff_cd_functor(&cfg, &mut rng).functor
            } else {
                // a monoid into its envelope, which is proper once the monoid has
                // an idempotent besides the unit
                let m = Arc::new(deloop(&gen_monoid(&cfg, &mut rng)));
                match karoubi(&m, TARGET_CAP) {
                    Ok(env) => env.embedding,
                    Err(_) => return Precomp::Skip,
                }
            };
            if !(is_fully_faithful(&f) && is_cauchy_dense(&f)) {
                return Precomp::Violation(format!("sample {i}: generator gave a functor that is not ff and dense"));
            }
            let mut held = 0;
            for _ in 0..12 {
                let c = gen_cauchy_complete(&cfg, &mut rng);
                if !is_cauchy_complete(&c) {
                    return Precomp::Violation(format!("sample {i}: target is not Cauchy complete"));
                }
                match precomposition_equivalence_check(&f, &c, TARGET_CAP, FUNCTOR_LIMIT) {
                    Ok(Verdict::Holds) => held += 1,
                    Ok(Verdict::Fails(_)) => return Precomp::Violation(format!("sample {i}: refuted by a target")),
                    Err(_) => {}
                }
                if held == 3 {
                    return Precomp::Ok {
                        equivalence: f.is_essentially_surjective(),
                    };
                }
            }
            Precomp::Skip
        })
        .collect();
    let negatives: Vec<Precomp> = (0..60)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.rng("acceptance.precomposition-", i);
            let f = gen_unconstrained_functor(&cfg, &mut rng).functor;
            if is_fully_faithful(&f) && is_cauchy_dense(&f) {
                return Precomp::Skip;
            }
            let mut decided = false;
            for c in refuting_targets(&f) {
                match precomposition_equivalence_check(&f, &c, REFUTER_CAP, FUNCTOR_LIMIT) {
                    Ok(Verdict::Fails(_)) => return Precomp::Ok { equivalence: false },
                    Ok(Verdict::Holds) => decided = true,
                    Err(_) => {}
                }
            }
            if decided {
                Precomp::Violation(format!("sample {i}: no target refutes"))
            } else {
                Precomp::Skip
            }
        })
        .collect();
    for r in positives.iter().chain(&negatives) {
        if let Precomp::Violation(e) = r {
            return Err(e.clone());
        }
    }
    let ok = |v: &[Precomp]| v.iter().filter(|r| matches!(r, Precomp::Ok { .. })).count();
    let proper = positives
        .iter()
        .filter(|r| matches!(r, Precomp::Ok { equivalence: false }))
        .count();
    let (p, q) = (ok(&positives), ok(&negatives));
    ensure(p >= 20 && q >= 20, || format!("only {p} positive and {q} negative samples decided"))?;
    ensure(proper >= 20, || format!("only {proper} positive samples are not equivalences"))?;
    Ok(format!(
        "{p} ff dense functors ({proper} not equivalences) hold against 3 targets each; {q} others refuted"
    ))
}

// ------------------------------------------------------------ criterion 8

fn pi0() -> Outcome {
    let ids = ["contexts.pi0", "contexts.disjoint-union", "contexts.groupoid"];
    let (checked, time) = run_suite(&ids, 500, 450)?;
    Ok(format!("{checked} samples, 0 failures, {time:.2?}"))
}

// ------------------------------------------------------------ criterion 9

fn shortcut() -> Outcome {
    let (checked, time) = run_suite(&["prof.shortcut"], 500, 0)?;
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../cli/examples/discrete-collapse.json");
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let json: FunctorJson = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let (a, b) = json.to_parts().map_err(|e| e.to_string())?;
    let f = json.to_functor(Arc::new(a), Arc::new(b)).map_err(|e| e.to_string())?;
    let r = shortcut_report(&f);
    ensure(r.flag == Some(ShortcutFlag::HypothesisNotMet), || format!("bundled instance: {r:?}"))?;
    ensure(!is_cauchy_dense(&f), || "bundled instance is dense".into())?;
    Ok(format!("{checked} unflagged samples agree, bundled instance flagged, {time:.2?}"))
}

// ----------------------------------------------------------- criterion 10

fn explorer() -> Outcome {
    let start = Instant::now();
    let catalog: Vec<Monoid> = (1..=3).flat_map(|n| monoids_of_order(n).iter().cloned()).collect();
    let mut homs = Vec::new();
    for a in &catalog {
        for b in &catalog {
            for map in monoid_homs(a, b) {
                homs.push(hom(a.clone(), b.clone(), map));
            }
        }
    }
    let cfg = GenConfig::default();
    homs.extend((0..100).map(|i| gen_monoid_hom(&cfg, &mut cfg.rng("acceptance.explorer", i))));
    let (dense, other): (Vec<MonoidHom>, Vec<MonoidHom>) = homs.into_iter().partition(|h| monoid_cd(h).0);
    let refuted_dense = dense
        .par_iter()
        .filter(|h| !matches!(monoid_epi_refute(h, 6), Ok(EpiVerdict::NoCounterexample { .. })))
        .count();
    ensure(refuted_dense == 0, || format!("{refuted_dense} dense homs refuted"))?;
    let refuted = other
        .par_iter()
        .filter(|h| matches!(monoid_epi_refute(h, 6), Ok(EpiVerdict::Refuted { .. })))
        .count();
    ensure(refuted > 0, || "no non-dense hom refuted".into())?;
    let time = start.elapsed();
    ensure(time <= Duration::from_secs(300), || format!("took {time:.2?}"))?;
    Ok(format!(
        "{} dense homs unrefuted at cap 6, {refuted} of {} others refuted, {time:.2?}",
        dense.len(),
        other.len()
    ))
}

// ----------------------------------------------------------- criterion 11

fn determinism() -> Outcome {
    let cfg = GenConfig::default();
    let props = default_properties();
    let first = run_properties(&cfg, &props, 100).map_err(|e| e.to_string())?.to_jsonl(false);
    let second = run_properties(&cfg, &props, 100).map_err(|e| e.to_string())?.to_jsonl(false);
    ensure(first == second, || "reports differ".into())?;
    Ok(format!("{} properties, seed 42, {} identical bytes", props.len(), first.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("oracle agreement", oracle_agreement),
        ("reference instances", reference_instances),
        ("dense, Kan extension and lax epi coherence", coherence),
        ("self-duality and closure", duality_and_closure),
        ("completion", completion_suite),
        ("Morita equivalence", morita),
        ("precomposition", precomposition),
        ("components", pi0),
        ("split-full shortcut", shortcut),
        ("epi explorer", explorer),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({e})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
