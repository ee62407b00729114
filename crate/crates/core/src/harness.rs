//! Seeded random testing of the decision procedures against each other.
//!
//! Every sample of every property draws from its own generator stream,
//! derived from the run seed, the property id and the sample index, so
//! reports are reproducible and independent of scheduling.

mod gen;
mod props;
mod shrink;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

pub use gen::{
    gen_category, gen_cauchy_complete, gen_cd_functor, gen_composable_pair, gen_ff_cd_functor, gen_functor,
    gen_group, gen_group_hom, gen_integer_metric_map, gen_metric_map, gen_metric_space, gen_monoid, gen_monoid_hom,
    gen_preorder_category, gen_preorder_functor, gen_quant_category, gen_quant_functor, gen_quantale,
    gen_thin_functor, gen_unconstrained_functor, inclusion, sample_seed, GenConfig, GenError, GenFunctor, Recipe,
    SampleRng, ShapeWeights,
};
pub use props::{broken_self_duality, default_properties, property_by_id};
pub use shrink::{check_shrinking, Check, Shrink};

/// Result of one sample.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass,
    /// Not applicable or over a cap; logged, not a failure.
    Skip(String),
    Fail {
        reason: String,
        witness: Value,
        shrink_steps: usize,
    },
}

pub type Checker = fn(&GenConfig, &mut SampleRng) -> Outcome;

#[derive(Clone)]
pub struct Property {
    pub id: &'static str,
    pub statement: &'static str,
    pub check: Checker,
}

impl std::fmt::Debug for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Property").field("id", &self.id).finish()
    }
}

impl Property {
    pub fn new(id: &'static str, statement: &'static str, check: Checker) -> Self {
        Property { id, statement, check }
    }

    /// Runs sample `index` under `cfg`; panics count as failures.
    pub fn run_sample(&self, cfg: &GenConfig, index: usize) -> Outcome {
        let mut rng = cfg.rng(self.id, index);
        catch_unwind(AssertUnwindSafe(|| (self.check)(cfg, &mut rng))).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Outcome::Fail {
                reason: format!("panicked: {msg}"),
                witness: Value::Null,
                shrink_steps: 0,
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureRecord {
    pub sample: usize,
    pub seed: u64,
    pub reason: String,
    pub shrink_steps: usize,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub statement: String,
    pub samples: usize,
    pub passed: usize,
    pub skipped: usize,
    /// Distinct skip reasons with counts.
    pub skip_reasons: Vec<(String, usize)>,
    pub failures: Vec<FailureRecord>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl PropertyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// One JSON object; `runtime_ms` only when `timing` is set.
    pub fn to_json(&self, timing: bool) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable report");
        if timing {
            v["runtime_ms"] = Value::from(self.runtime.as_secs_f64() * 1e3);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub config: GenConfig,
    pub samples: usize,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.properties.iter().all(PropertyReport::ok)
    }

    pub fn failures(&self) -> usize {
        self.properties.iter().map(|p| p.failures.len()).sum()
    }

    /// JSON lines, one per property. Without `timing` the output depends
    /// only on the configuration and the property set.
    pub fn to_jsonl(&self, timing: bool) -> String {
        let mut out = String::new();
        for p in &self.properties {
            out.push_str(&p.to_json(timing).to_string());
            out.push('\n');
        }
        out
    }

    pub fn summary_table(&self, timing: bool) -> String {
        let width = self.properties.iter().map(|p| p.property.len()).max().unwrap_or(8).max(8);
        let mut out = format!(
            "{:<width$}  {:>7}  {:>7}  {:>7}  {:>8}{}\n",
            "property",
            "samples",
            "passed",
            "skipped",
            "failures",
            if timing { "      time" } else { "" }
        );
        for p in &self.properties {
            out.push_str(&format!(
                "{:<width$}  {:>7}  {:>7}  {:>7}  {:>8}",
                p.property,
                p.samples,
                p.passed,
                p.skipped,
                p.failures.len()
            ));
            if timing {
                out.push_str(&format!("  {:>7.2?}", p.runtime));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} properties, {} failures: {}\n",
            self.properties.len(),
            self.failures(),
            if self.ok() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

pub fn run_property(cfg: &GenConfig, property: &Property, samples: usize) -> PropertyReport {
    let start = Instant::now();
    let outcomes: Vec<Outcome> = (0..samples)
        .into_par_iter()
        .map(|i| property.run_sample(cfg, i))
        .collect();
    let mut report = PropertyReport {
        property: property.id.to_string(),
        statement: property.statement.to_string(),
        samples,
        passed: 0,
        skipped: 0,
        skip_reasons: Vec::new(),
        failures: Vec::new(),
        runtime: Duration::ZERO,
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Pass => report.passed += 1,
            Outcome::Skip(reason) => {
                report.skipped += 1;
                match report.skip_reasons.iter_mut().find(|(r, _)| *r == reason) {
                    Some((_, k)) => *k += 1,
                    None => report.skip_reasons.push((reason, 1)),
                }
            }
            Outcome::Fail {
                reason,
                witness,
                shrink_steps,
            } => report.failures.push(FailureRecord {
                sample: i,
                seed: sample_seed(cfg.seed, property.id, i),
                reason,
                shrink_steps,
                witness,
            }),
        }
    }
    report.skip_reasons.sort();
    report.runtime = start.elapsed();
    report
}

/// Runs every property for `samples` samples each.
pub fn run_properties(cfg: &GenConfig, properties: &[Property], samples: usize) -> Result<SuiteReport, GenError> {
    cfg.validate()?;
    Ok(SuiteReport {
        config: cfg.clone(),
        samples,
        properties: properties.iter().map(|p| run_property(cfg, p, samples)).collect(),
    })
}
