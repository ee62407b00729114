//! Reading input files, with diagnostics that point at a line.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Result;
use cauchyden::fincat::{deloop, deloop_hom, FinCategory, FinFunctor, Monoid, MonoidHom, SizeCap};
use cauchyden::json::{
    AnyQuantCategory, AnyQuantFunctor, CategoryJson, FunctorJson, JsonError, MonoidHomJson, MonoidJson,
    QuantCategoryJson, QuantFunctorJson,
};
use serde::de::DeserializeOwned;
use serde_json::Value;

/// An error located in an input file.
#[derive(Debug)]
pub struct Diagnostic {
    pub path: PathBuf,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
    pub snippet: Option<String>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.path.display())?;
        if let Some(l) = self.line {
            write!(f, ":{l}")?;
            if let Some(c) = self.column {
                write!(f, ":{c}")?;
            }
        }
        write!(f, ": {}", self.message)?;
        if let (Some(l), Some(s)) = (self.line, &self.snippet) {
            write!(f, "\n{l:>5} | {s}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

pub struct Source {
    pub path: PathBuf,
    pub text: String,
}

impl Source {
    pub fn read(path: &Path) -> Result<Source> {
        let text = std::fs::read_to_string(path).map_err(|e| Diagnostic {
            path: path.to_path_buf(),
            line: None,
            column: None,
            message: e.to_string(),
            snippet: None,
        })?;
        Ok(Source {
            path: path.to_path_buf(),
            text,
        })
    }

    fn line_text(&self, line: usize) -> Option<String> {
        self.text.lines().nth(line.checked_sub(1)?).map(|s| s.trim_end().to_string())
    }

    fn at(&self, line: Option<usize>, column: Option<usize>, message: String) -> Diagnostic {
        Diagnostic {
            path: self.path.clone(),
            line,
            column,
            snippet: line.and_then(|l| self.line_text(l)),
            message,
        }
    }

    /// A semantic error, placed at the first line quoting one of `tokens`.
    pub fn semantic(&self, message: String, tokens: &[&str]) -> Diagnostic {
        let line = tokens.iter().find_map(|t| {
            let quoted = format!("\"{t}\"");
            self.text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
        });
        self.at(line, None, message)
    }

    fn semantic_error(&self, e: impl fmt::Display, token: Option<&str>) -> Diagnostic {
        let message = e.to_string();
        let mut tokens: Vec<&str> = token.into_iter().collect();
        tokens.extend(message.split('`').skip(1).step_by(2));
        self.semantic(message.clone(), &tokens)
    }

    fn json_error(&self, e: JsonError) -> Diagnostic {
        self.semantic_error(&e, e.token())
    }

    pub fn value(&self) -> Result<Value> {
        serde_json::from_str(&self.text).map_err(|e| self.serde_error(e).into())
    }

    fn serde_error(&self, e: serde_json::Error) -> Diagnostic {
        self.at(Some(e.line()), Some(e.column()), e.to_string())
    }

    fn parse<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_str(&self.text).map_err(|e| self.serde_error(e).into())
    }

    fn category(&self, json: &CategoryJson) -> Result<FinCategory> {
        let c = json.to_category().map_err(|e| self.json_error(e))?;
        c.validate(SizeCap::VALIDATION).map_err(|e| self.semantic_error(e, None))?;
        Ok(c)
    }

    fn monoid(&self, json: &MonoidJson) -> Result<Monoid> {
        json.to_monoid().map_err(|e| self.json_error(e).into())
    }
}

fn has(v: &Value, key: &str) -> bool {
    v.get(key).is_some()
}

/// A functor-like input.
pub enum FunctorInput {
    Plain(FinFunctor),
    Quant(AnyQuantFunctor),
    /// A monoid homomorphism, also available as its delooping.
    Monoid(MonoidHom, FinFunctor),
}

pub fn functor(src: &Source, tolerance: f64) -> Result<FunctorInput> {
    let v = src.value()?;
    if has(&v, "map") {
        let json: MonoidHomJson = src.parse()?;
        src.monoid(&json.dom)?;
        src.monoid(&json.cod)?;
        let h = json.to_hom().map_err(|e| src.json_error(e))?;
        let f = deloop_hom(&h);
        return Ok(FunctorInput::Monoid(h, f));
    }
    if v.get("dom").is_some_and(|d| has(d, "base")) {
        let json: QuantFunctorJson = src.parse()?;
        return Ok(FunctorInput::Quant(json.to_functor(tolerance).map_err(|e| src.json_error(e))?));
    }
    let json: FunctorJson = src.parse()?;
    let (a, b) = (src.category(&json.dom)?, src.category(&json.cod)?);
    let f = json
        .to_functor(Arc::new(a), Arc::new(b))
        .map_err(|e| src.json_error(e))?;
    Ok(FunctorInput::Plain(f))
}

/// A category-like input.
pub enum CategoryInput {
    Plain(Arc<FinCategory>),
    Quant(AnyQuantCategory),
    Monoid(Monoid),
}

impl CategoryInput {
    /// The ordinary category, delooping monoids.
    pub fn plain(&self) -> Option<Arc<FinCategory>> {
        match self {
            CategoryInput::Plain(c) => Some(c.clone()),
            CategoryInput::Monoid(m) => Some(Arc::new(deloop(m))),
            CategoryInput::Quant(_) => None,
        }
    }
}

pub fn category(src: &Source, tolerance: f64) -> Result<CategoryInput> {
    let v = src.value()?;
    if has(&v, "base") {
        let json: QuantCategoryJson = src.parse()?;
        return Ok(CategoryInput::Quant(json.to_category(tolerance).map_err(|e| src.json_error(e))?));
    }
    if has(&v, "mul") {
        let json: MonoidJson = src.parse()?;
        return Ok(CategoryInput::Monoid(src.monoid(&json)?));
    }
    let json: CategoryJson = src.parse()?;
    Ok(CategoryInput::Plain(Arc::new(src.category(&json)?)))
}

pub fn monoid_hom(src: &Source) -> Result<MonoidHom> {
    let json: MonoidHomJson = src.parse()?;
    src.monoid(&json.dom)?;
    src.monoid(&json.cod)?;
    json.to_hom().map_err(|e| src.json_error(e).into())
}
