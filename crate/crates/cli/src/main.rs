//! `cauchyden`: decide Cauchy density and related properties of functors
//! between finite categories from JSON files.
//!
//! Exit codes: 0 when the answer is true or the command succeeded, 1 when
//! it is false or refuted, 2 on any error.

mod load;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use cauchyden::completion::{envelope_summary, is_cauchy_complete, karoubi, morita_equivalent, quantale_completion};
use cauchyden::contexts::{
    decompose_cd, groupoid_domain_classify, monoid_cd, monoid_epi_refute, num_components, pi0_check, reassembles_to,
    EpiVerdict, GroupoidVerdict, MAX_EXPLORER_CAP,
};
use cauchyden::fincat::{FinCategory, FinFunctor, SizeCap};
use cauchyden::harness::{default_properties, property_by_id, run_properties, GenConfig};
use cauchyden::json::{
    AnyQuantCategory, AnyQuantFunctor, CategoryJson, MonoidHomJson, MonoidJson, QuantCategoryJson, QuantFunctorJson,
};
use cauchyden::prof::{
    check_cauchy_dense, check_cauchy_dense_quant, check_fully_faithful, coend_collage, doubled_image_collage,
    is_absolutely_dense_lan, laxepi_check, shortcut_report, ShortcutFlag, Verdict, DEFAULT_FUNCTOR_LIMIT,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use load::{CategoryInput, FunctorInput, Source};

const DEFAULT_TOLERANCE: f64 = 1e-9;
const DEFAULT_MAX_OBJECTS: usize = 8;
const DEFAULT_MAX_MORPHISMS: usize = 64;
const DEFAULT_SAMPLES: usize = 100;
const DEFAULT_CAP: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "cauchyden", version, about = "Cauchy density, completions and Morita equivalence for finite categories")]
struct Cli {
    /// Read the command, inputs and options from a JSON manifest. Flags
    /// given on the command line take precedence.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Flags {
    /// Tolerance for comparing real distances [default: 1e-9]
    #[arg(long, global = true, env = "CAUCHYDEN_TOLERANCE")]
    tolerance: Option<f64>,
    /// Object cap for enumeration [default: 8; props generators: 4]
    #[arg(long, global = true, env = "CAUCHYDEN_MAX_OBJECTS")]
    max_objects: Option<usize>,
    /// Morphism cap for enumeration [default: 64; props generators: 16]
    #[arg(long, global = true, env = "CAUCHYDEN_MAX_MORPHISMS")]
    max_morphisms: Option<usize>,
    /// Seed for `props` [default: 42]
    #[arg(long, global = true, env = "CAUCHYDEN_SEED")]
    seed: Option<u64>,
    /// Samples per property for `props` [default: 100]
    #[arg(long, global = true, env = "CAUCHYDEN_SAMPLES")]
    samples: Option<usize>,
    /// Largest target monoid for `explore` [default: 4, at most 6]
    #[arg(long, global = true, env = "CAUCHYDEN_CAP")]
    cap: Option<usize>,
    /// Output format [default: json; props: text]
    #[arg(long, global = true, env = "CAUCHYDEN_FORMAT")]
    format: Option<Format>,
}

impl Flags {
    fn or(self, other: Flags) -> Flags {
        Flags {
            tolerance: self.tolerance.or(other.tolerance),
            max_objects: self.max_objects.or(other.max_objects),
            max_morphisms: self.max_morphisms.or(other.max_morphisms),
            seed: self.seed.or(other.seed),
            samples: self.samples.or(other.samples),
            cap: self.cap.or(other.cap),
            format: self.format.or(other.format),
        }
    }

    fn tolerance(&self) -> Result<f64> {
        let t = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(t.is_finite() && t >= 0.0) {
            bail!("tolerance must be a non-negative number, got {t}");
        }
        Ok(t)
    }

    fn size_cap(&self) -> SizeCap {
        SizeCap {
            max_objects: self.max_objects.unwrap_or(DEFAULT_MAX_OBJECTS),
            max_morphisms: self.max_morphisms.unwrap_or(DEFAULT_MAX_MORPHISMS),
        }
    }

    fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum CheckKind {
    CauchyDense,
    FullyFaithful,
    SplitFull,
    DenseLan,
    LaxEpi,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Decide a property of a functor (or monoid homomorphism) file
    Check {
        kind: CheckKind,
        input: PathBuf,
        /// Target categories for `lax-epi`; the canonical collages if omitted
        #[arg(long = "target")]
        targets: Vec<PathBuf>,
    },
    /// Idempotent completion of a category, or the completion of a
    /// category enriched in a finite quantale
    Complete { input: PathBuf },
    /// Whether two categories (or monoids) have equivalent completions
    Morita { first: PathBuf, second: PathBuf },
    /// Split a Cauchy dense functor along connected components
    Decompose { input: PathBuf },
    /// Search small monoids for a witness that a homomorphism is not epi
    Explore { input: PathBuf },
    /// Run the property suite
    Props {
        /// Write the JSON-lines report here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run only these properties (repeatable)
        #[arg(long = "property")]
        properties: Vec<String>,
        /// Include runtimes in the report
        #[arg(long)]
        timing: bool,
    },
}

/// A command with its inputs and options, as a file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    command: String,
    #[serde(default)]
    kind: Option<CheckKind>,
    #[serde(default)]
    inputs: Vec<PathBuf>,
    #[serde(default)]
    targets: Vec<PathBuf>,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default)]
    properties: Vec<String>,
    #[serde(default)]
    timing: bool,
    #[serde(default)]
    options: Flags,
}

impl Manifest {
    /// Paths are relative to the manifest.
    fn into_command(self, dir: &Path) -> Result<(Command, Flags)> {
        let path = |p: &PathBuf| dir.join(p);
        let inputs: Vec<PathBuf> = self.inputs.iter().map(path).collect();
        let one = |n: usize| -> Result<()> {
            if inputs.len() != n {
                bail!("`{}` takes {n} input(s), manifest lists {}", self.command, inputs.len());
            }
            Ok(())
        };
        let cmd = match self.command.as_str() {
            "check" => {
                one(1)?;
                Command::Check {
                    kind: self.kind.ok_or_else(|| anyhow!("`check` needs a `kind`"))?,
                    input: inputs[0].clone(),
                    targets: self.targets.iter().map(path).collect(),
                }
            }
            "complete" => {
                one(1)?;
                Command::Complete { input: inputs[0].clone() }
            }
            "morita" => {
                one(2)?;
                Command::Morita {
                    first: inputs[0].clone(),
                    second: inputs[1].clone(),
                }
            }
            "decompose" => {
                one(1)?;
                Command::Decompose { input: inputs[0].clone() }
            }
            "explore" => {
                one(1)?;
                Command::Explore { input: inputs[0].clone() }
            }
            "props" => Command::Props {
                out: self.out.as_ref().map(path),
                properties: self.properties.clone(),
                timing: self.timing,
            },
            other => bail!("unknown command `{other}`"),
        };
        Ok((cmd, self.options))
    }
}

/// What a command prints, and its exit code.
struct Report {
    json: Value,
    text: String,
    code: u8,
}

impl Report {
    fn verdict(holds: bool, json: Value, text: String) -> Report {
        Report {
            json,
            text,
            code: if holds { 0 } else { 1 },
        }
    }
}

fn verdict_json(name: &str, holds: bool, witness: Option<Value>) -> Value {
    let mut v = json!({ "check": name, "holds": holds });
    if let Some(w) = witness {
        v["witness"] = w;
    }
    v
}

fn plain_functor(input: FunctorInput, what: &str) -> Result<FinFunctor> {
    match input {
        FunctorInput::Plain(f) | FunctorInput::Monoid(_, f) => Ok(f),
        FunctorInput::Quant(_) => bail!("{what} is only available for ordinary categories"),
    }
}

fn check(kind: CheckKind, input: &Path, targets: &[PathBuf], flags: &Flags) -> Result<Report> {
    let src = Source::read(input)?;
    let f = load::functor(&src, flags.tolerance()?)?;
    match kind {
        CheckKind::CauchyDense => cauchy_dense(f),
        CheckKind::FullyFaithful => fully_faithful(f),
        CheckKind::SplitFull => split_full(plain_functor(f, "split-full")?),
        CheckKind::DenseLan => dense_lan(plain_functor(f, "dense-lan")?),
        CheckKind::LaxEpi => lax_epi(plain_functor(f, "lax-epi")?, targets, flags),
    }
}

fn cauchy_dense(input: FunctorInput) -> Result<Report> {
    let name = "cauchy-dense";
    let (holds, witness, text) = match &input {
        FunctorInput::Plain(f) | FunctorInput::Monoid(_, f) => match check_cauchy_dense(f) {
            Verdict::Holds => (true, None, String::new()),
            Verdict::Fails(w) => {
                let (v, t) = render::cd_witness(f, &w);
                (false, Some(v), t)
            }
        },
        FunctorInput::Quant(AnyQuantFunctor::Finite(f)) => match check_cauchy_dense_quant(f) {
            Verdict::Holds => (true, None, String::new()),
            Verdict::Fails(w) => {
                let (v, t) = render::quant_cd_witness(f, &w);
                (false, Some(v), t)
            }
        },
        FunctorInput::Quant(AnyQuantFunctor::RPlus(f)) => match check_cauchy_dense_quant(f) {
            Verdict::Holds => (true, None, String::new()),
            Verdict::Fails(w) => {
                let (v, t) = render::quant_cd_witness(f, &w);
                (false, Some(v), t)
            }
        },
    };
    let mut json = verdict_json(name, holds, witness);
    if let FunctorInput::Monoid(h, _) = &input {
        json["tensor_congruence"] = monoid_cd(h).0.into();
    }
    Ok(Report::verdict(holds, json, verdict_text(name, holds, &text)))
}

fn verdict_text(name: &str, holds: bool, detail: &str) -> String {
    if detail.is_empty() {
        format!("{name}: {holds}\n")
    } else {
        format!("{name}: {holds}\n  {detail}\n")
    }
}

fn fully_faithful(input: FunctorInput) -> Result<Report> {
    let name = "fully-faithful";
    let (holds, witness, text) = match &input {
        FunctorInput::Plain(f) | FunctorInput::Monoid(_, f) => match check_fully_faithful(f) {
            Verdict::Holds => (true, None, String::new()),
            Verdict::Fails(w) => {
                let (v, t) = render::ff_witness(f, &w);
                (false, Some(v), t)
            }
        },
        FunctorInput::Quant(AnyQuantFunctor::Finite(f)) => (f.is_fully_faithful(), None, String::new()),
        FunctorInput::Quant(AnyQuantFunctor::RPlus(f)) => (f.is_fully_faithful(), None, String::new()),
    };
    Ok(Report::verdict(holds, verdict_json(name, holds, witness), verdict_text(name, holds, &text)))
}

fn flag_name(flag: Option<ShortcutFlag>) -> Value {
    match flag {
        None => Value::Null,
        Some(ShortcutFlag::HypothesisNotMet) => "hypothesis-not-met".into(),
        Some(ShortcutFlag::TheoremViolation) => "theorem-violation".into(),
    }
}

fn split_full(f: FinFunctor) -> Result<Report> {
    let name = "split-full";
    let r = shortcut_report(&f);
    let missing = render::not_full(&f);
    let mut json = verdict_json(name, r.split_full, missing.as_ref().map(|m| m.0.clone()));
    json["shortcut"] = json!({
        "diagonal_surjective": r.diagonal_surjective,
        "cauchy_dense": r.cauchy_dense,
        "flag": flag_name(r.flag),
    });
    let mut text = verdict_text(name, r.split_full, missing.as_ref().map_or("", |m| &m.1));
    text.push_str(&format!(
        "  diagonal criterion: {}, Cauchy dense: {}\n",
        r.diagonal_surjective, r.cauchy_dense
    ));
    match r.flag {
        Some(ShortcutFlag::HypothesisNotMet) => {
            text.push_str("  flagged: the diagonal criterion disagrees and the functor is not split-full\n")
        }
        Some(ShortcutFlag::TheoremViolation) => {
            text.push_str("  flagged: the diagonal criterion disagrees on a split-full functor\n")
        }
        None => {}
    }
    Ok(Report::verdict(r.split_full, json, text))
}

fn dense_lan(f: FinFunctor) -> Result<Report> {
    let name = "dense-lan";
    let failing: Vec<&str> = f
        .cod()
        .objects()
        .filter(|&b| !is_absolutely_dense_lan(&f, b))
        .map(|b| f.cod().object_name(b))
        .collect();
    let holds = failing.is_empty();
    let witness = (!holds).then(|| json!({ "objects": failing }));
    let detail = if holds {
        String::new()
    } else {
        format!(
            "left Kan extension of the restricted representable is not representable at: {}",
            failing.join(", ")
        )
    };
    Ok(Report::verdict(holds, verdict_json(name, holds, witness), verdict_text(name, holds, &detail)))
}

fn lax_epi(f: FinFunctor, targets: &[PathBuf], flags: &Flags) -> Result<Report> {
    let name = "lax-epi";
    let cats: Vec<Arc<FinCategory>> = if targets.is_empty() {
        vec![coend_collage(&f), doubled_image_collage(&f)]
    } else {
        targets
            .iter()
            .map(|p| {
                let src = Source::read(p)?;
                load::category(&src, flags.tolerance()?)?
                    .plain()
                    .ok_or_else(|| anyhow!("{}: lax-epi targets must be ordinary categories", p.display()))
            })
            .collect::<Result<_>>()?
    };
    for (i, c) in cats.iter().enumerate() {
        let v = laxepi_check(&f, c, flags.size_cap(), DEFAULT_FUNCTOR_LIMIT)
            .with_context(|| format!("target {i}"))?;
        if let Verdict::Fails(w) = v {
            let (v, t) = render::laxepi_witness(&f, i, &w);
            let mut json = verdict_json(name, false, Some(v));
            json["targets"] = cats.len().into();
            return Ok(Report::verdict(false, json, verdict_text(name, false, &t)));
        }
    }
    let mut json = verdict_json(name, true, None);
    json["targets"] = cats.len().into();
    Ok(Report::verdict(
        true,
        json,
        format!("{name}: true\n  precomposition is fully faithful into {} target(s)\n", cats.len()),
    ))
}

fn complete(input: &Path, flags: &Flags) -> Result<Report> {
    let src = Source::read(input)?;
    match load::category(&src, flags.tolerance()?)? {
        CategoryInput::Quant(AnyQuantCategory::Finite(c)) => {
            let done = quantale_completion(&Arc::new(c))?;
            let json = json!({
                "completion": QuantCategoryJson::from_finite(&done.category),
                "embedding": QuantFunctorJson::from_finite(&done.embedding),
            });
            let text = format!(
                "completion: {} objects from {}\n",
                done.category.num_objects(),
                done.embedding.dom().num_objects()
            );
            Ok(Report { json, text, code: 0 })
        }
        CategoryInput::Quant(AnyQuantCategory::RPlus(_)) => {
            bail!("completion is only available over finite quantales")
        }
        other => {
            let c = other.plain().expect("ordinary");
            let env = karoubi(&c, flags.size_cap())?;
            let summary = envelope_summary(&env);
            let json = json!({
                "envelope": CategoryJson::from_category(&env.category),
                "embedding": render::functor(&env.embedding),
                "summary": summary,
                "input_cauchy_complete": is_cauchy_complete(&c),
            });
            let text = format!(
                "envelope: {} objects ({} up to isomorphism), {} morphisms\ninput Cauchy complete: {}\n",
                summary.objects,
                summary.objects_up_to_iso,
                summary.morphisms,
                is_cauchy_complete(&c)
            );
            Ok(Report { json, text, code: 0 })
        }
    }
}

fn morita(first: &Path, second: &Path, flags: &Flags) -> Result<Report> {
    let load = |p: &Path| -> Result<Arc<FinCategory>> {
        let src = Source::read(p)?;
        load::category(&src, flags.tolerance()?)?
            .plain()
            .ok_or_else(|| anyhow!("{}: morita needs ordinary categories or monoids", p.display()))
    };
    let (a, b) = (load(first)?, load(second)?);
    match morita_equivalent(&a, &b, flags.size_cap())? {
        Some(z) => {
            let verified = z.verify();
            let json = json!({
                "morita_equivalent": true,
                "verified": verified,
                "zigzag": {
                    "left": render::functor(&z.left),
                    "equivalence": render::functor(&z.equivalence),
                    "right": render::functor(&z.right),
                },
            });
            let text = format!(
                "morita equivalent: true\n  zigzag through idempotent completions of {} and {} objects, verified: {verified}\n",
                z.equivalence.dom().num_objects(),
                z.equivalence.cod().num_objects()
            );
            Ok(Report {
                json,
                text,
                code: if verified { 0 } else { 2 },
            })
        }
        None => Ok(Report::verdict(
            false,
            json!({ "morita_equivalent": false }),
            "morita equivalent: false\n  the idempotent completions are not equivalent\n".into(),
        )),
    }
}

fn decompose(input: &Path, flags: &Flags) -> Result<Report> {
    let src = Source::read(input)?;
    let f = plain_functor(load::functor(&src, flags.tolerance()?)?, "decompose")?;
    if let Verdict::Fails(w) = check_cauchy_dense(&f) {
        let (v, t) = render::cd_witness(&f, &w);
        return Ok(Report::verdict(
            false,
            json!({ "cauchy_dense": false, "witness": v }),
            format!("not Cauchy dense\n  {t}\n"),
        ));
    }
    let pieces = decompose_cd(&f)?;
    let names = |c: &FinCategory, ids: &[usize]| -> Vec<String> {
        ids.iter().map(|&x| c.object_name(x).to_string()).collect()
    };
    let rendered: Vec<Value> = pieces
        .iter()
        .map(|p| {
            json!({
                "domain_objects": names(f.dom(), &p.dom_objects),
                "codomain_objects": names(f.cod(), &p.cod_objects),
                "functor": render::functor(&p.functor),
            })
        })
        .collect();
    let reassembles = reassembles_to(&f, &pieces);
    let mut json = json!({
        "cauchy_dense": true,
        "components": num_components(f.dom()),
        "pi0_bijective": pi0_check(&f),
        "reassembles": reassembles,
        "pieces": rendered,
    });
    let mut text = format!(
        "Cauchy dense; {} component(s), pi0 bijective: {}, reassembles: {reassembles}\n",
        pieces.len(),
        pi0_check(&f)
    );
    for p in &pieces {
        text.push_str(&format!(
            "  {{{}}} -> {{{}}}\n",
            names(f.dom(), &p.dom_objects).join(", "),
            names(f.cod(), &p.cod_objects).join(", ")
        ));
    }
    if f.dom().is_groupoid() {
        if let GroupoidVerdict::DisjointUnion { pieces, equivalence } = groupoid_domain_classify(&f)? {
            json["groupoid"] = json!({
                "pieces": pieces.iter().map(|p| json!({
                    "object": f.dom().object_name(p.object),
                    "image": f.cod().object_name(p.image),
                    "hom": MonoidHomJson::from_hom(&p.hom),
                })).collect::<Vec<_>>(),
                "equivalence": equivalence,
            });
            text.push_str(&format!("  groupoid domain: {} surjective group hom(s)\n", pieces.len()));
        }
    }
    let code = if reassembles { 0 } else { 2 };
    Ok(Report { json, text, code })
}

fn explore(input: &Path, flags: &Flags) -> Result<Report> {
    let src = Source::read(input)?;
    let h = load::monoid_hom(&src)?;
    let cap = flags.cap.unwrap_or(DEFAULT_CAP);
    if cap > MAX_EXPLORER_CAP {
        bail!("--cap {cap} exceeds the supported maximum of {MAX_EXPLORER_CAP}");
    }
    let dense = monoid_cd(&h).0;
    match monoid_epi_refute(&h, cap)? {
        EpiVerdict::Refuted { target, g, h: k } => {
            let t = MonoidJson::from_monoid(&target);
            let map = |m: &[usize]| -> Value {
                h.cod()
                    .names()
                    .iter()
                    .zip(m)
                    .map(|(x, &y)| (x.clone(), Value::from(t.elements[y].clone())))
                    .collect::<serde_json::Map<_, _>>()
                    .into()
            };
            let json = json!({
                "refuted": true,
                "cauchy_dense": dense,
                "cap": cap,
                "target": t,
                "g": map(&g),
                "h": map(&k),
            });
            let text = format!(
                "refuted: two distinct homs into a monoid of order {} agree on the image\n  Cauchy dense: {dense}\n",
                target.len()
            );
            Ok(Report::verdict(false, json, text))
        }
        EpiVerdict::NoCounterexample { cap, targets_checked } => {
            let json = json!({
                "refuted": false,
                "cauchy_dense": dense,
                "cap": cap,
                "targets_checked": targets_checked,
            });
            let text = format!(
                "no counterexample among {targets_checked} monoids of order at most {cap} (bounded evidence, not a proof)\n  Cauchy dense: {dense}\n"
            );
            Ok(Report::verdict(true, json, text))
        }
    }
}

fn props(out: Option<&Path>, properties: &[String], timing: bool, flags: &Flags) -> Result<Report> {
    let base = GenConfig::default();
    let cfg = GenConfig {
        seed: flags.seed.unwrap_or(base.seed),
        max_objects: flags.max_objects.unwrap_or(base.max_objects),
        max_morphisms: flags.max_morphisms.unwrap_or(base.max_morphisms),
        ..base
    };
    let set = if properties.is_empty() {
        default_properties()
    } else {
        properties
            .iter()
            .map(|id| property_by_id(id).ok_or_else(|| anyhow!("unknown property `{id}`")))
            .collect::<Result<_>>()?
    };
    let report = run_properties(&cfg, &set, flags.samples.unwrap_or(DEFAULT_SAMPLES))?;
    let jsonl = report.to_jsonl(timing);
    if let Some(p) = out {
        std::fs::write(p, &jsonl).with_context(|| format!("writing {}", p.display()))?;
    }
    let code = if report.ok() { 0 } else { 1 };
    Ok(Report {
        json: Value::String(jsonl),
        text: report.summary_table(timing),
        code,
    })
}

fn run(cli: Cli) -> Result<(Report, Format)> {
    let (command, flags) = match (cli.command, &cli.manifest) {
        (Some(c), None) => (c, cli.flags),
        (None, Some(path)) => {
            let src = Source::read(path)?;
            let m: Manifest = serde_json::from_str(&src.text).map_err(|e| {
                load::Diagnostic {
                    path: path.clone(),
                    line: Some(e.line()),
                    column: Some(e.column()),
                    message: e.to_string(),
                    snippet: src.text.lines().nth(e.line().saturating_sub(1)).map(str::to_string),
                }
            })?;
            let (c, f) = m.into_command(path.parent().unwrap_or(Path::new(".")))?;
            (c, cli.flags.or(f))
        }
        (Some(_), Some(_)) => bail!("give either a subcommand or --manifest, not both"),
        (None, None) => bail!("no command given; see --help"),
    };
    let report = match &command {
        Command::Check { kind, input, targets } => check(*kind, input, targets, &flags)?,
        Command::Complete { input } => complete(input, &flags)?,
        Command::Morita { first, second } => morita(first, second, &flags)?,
        Command::Decompose { input } => decompose(input, &flags)?,
        Command::Explore { input } => explore(input, &flags)?,
        Command::Props { out, properties, timing } => {
            // the summary table is the default view of a suite run
            let fmt = flags.format.unwrap_or(Format::Text);
            return Ok((props(out.as_deref(), properties, *timing, &flags)?, fmt));
        }
    };
    Ok((report, flags.format()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, format)) => {
            let out = match (format, &report.json) {
                (Format::Text, _) => report.text,
                (Format::Json, Value::String(lines)) => lines.clone(),
                (Format::Json, v) => serde_json::to_string_pretty(v).expect("serializable") + "\n",
            };
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()) {
                Ok(()) => ExitCode::from(report.code),
                // a closed pipe is the reader's choice
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::from(report.code),
                Err(e) => {
                    eprintln!("error: writing output: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
