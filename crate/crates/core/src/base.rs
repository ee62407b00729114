//! Enrichment bases: finite commutative quantales (including the two-element
//! Boolean quantale) and the extended nonnegative reals with `+`.

use std::fmt;

use thiserror::Error;

/// A posetal, commutative, unital enrichment base.
///
/// `leq` is the order of the base as a category (for [`RPlus`] this is the
/// reversed numeric order), `join` is the binary supremum in that order and
/// `bottom` is the empty supremum.
pub trait Base: Clone + fmt::Debug + Send + Sync {
    type Value: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn unit(&self) -> Self::Value;
    fn bottom(&self) -> Self::Value;
    fn tensor(&self, x: &Self::Value, y: &Self::Value) -> Self::Value;
    fn leq(&self, x: &Self::Value, y: &Self::Value) -> bool;
    fn join(&self, x: &Self::Value, y: &Self::Value) -> Self::Value;
    fn render(&self, x: &Self::Value) -> String;

    /// Equality as used by decisions: mutual `leq` (tolerant for [`RPlus`]).
    fn same(&self, x: &Self::Value, y: &Self::Value) -> bool {
        self.leq(x, y) && self.leq(y, x)
    }

    fn join_all<I: IntoIterator<Item = Self::Value>>(&self, values: I) -> Self::Value {
        values
            .into_iter()
            .fold(self.bottom(), |acc, v| self.join(&acc, &v))
    }
}

/// Structural problems with quantale tables, distinct from axiom failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("quantale has no elements")]
    Empty,
    #[error("duplicate element id `{0}`")]
    DuplicateElement(String),
    #[error("unknown value id `{0}`")]
    UnknownValue(String),
    #[error("tensor table is missing the entry for ({0}, {1})")]
    MissingTensor(String, String),
    #[error("tensor table has conflicting entries for ({0}, {1})")]
    ConflictingTensor(String, String),
}

/// First violated quantale axiom, with witnesses rendered by element id.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomViolation {
    #[error("order is not antisymmetric: {0} <= {1} <= {0}")]
    Antisymmetry(String, String),
    #[error("order is not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    Transitivity(String, String, String),
    #[error("no least upper bound for {{{0}, {1}}}")]
    MissingJoin(String, String),
    #[error("no bottom element")]
    MissingBottom,
    #[error("tensor is not associative at ({0}, {1}, {2})")]
    Associativity(String, String, String),
    #[error("tensor is not commutative at ({0}, {1})")]
    Commutativity(String, String),
    #[error("unit law fails: {unit} (x) {value} != {value}")]
    Unit { unit: String, value: String },
    #[error("tensor by {value} does not preserve the join of {subset:?}")]
    Distributivity { value: String, subset: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaseError {
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error("quantale axiom violated: {0}")]
    Axiom(#[from] AxiomViolation),
    #[error("unknown base `{0}`")]
    UnknownBase(String),
    #[error("invalid distance `{0}`")]
    InvalidDistance(String),
}

/// Unvalidated quantale tables keyed by element id, as they appear in files.
///
/// `leq` lists the order relation; reflexive pairs may be omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantaleTables {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    pub tensor: Vec<(String, String, String)>,
    pub unit: String,
}

/// Outcome of [`validate_quantale`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuantaleReport {
    Pass,
    Fail(AxiomViolation),
}

impl QuantaleReport {
    pub fn passed(&self) -> bool {
        matches!(self, QuantaleReport::Pass)
    }
}

/// Index-form tables after the structural checks.
#[derive(Debug, Clone)]
struct IndexTables {
    names: Vec<String>,
    leq: Vec<bool>,
    tensor: Vec<usize>,
    unit: usize,
}

fn index_tables(t: &QuantaleTables) -> Result<IndexTables, StructuralError> {
    let n = t.elements.len();
    if n == 0 {
        return Err(StructuralError::Empty);
    }
    let mut ids = std::collections::HashMap::new();
    for (i, e) in t.elements.iter().enumerate() {
        if ids.insert(e.as_str(), i).is_some() {
            return Err(StructuralError::DuplicateElement(e.clone()));
        }
    }
    let lookup = |s: &str| {
        ids.get(s)
            .copied()
            .ok_or_else(|| StructuralError::UnknownValue(s.to_string()))
    };
    let mut leq = vec![false; n * n];
    for i in 0..n {
        leq[i * n + i] = true;
    }
    for (a, b) in &t.leq {
        leq[lookup(a)? * n + lookup(b)?] = true;
    }
    let mut tensor = vec![None; n * n];
    for (a, b, c) in &t.tensor {
        let (i, j, k) = (lookup(a)?, lookup(b)?, lookup(c)?);
        match tensor[i * n + j] {
            Some(prev) if prev != k => {
                return Err(StructuralError::ConflictingTensor(a.clone(), b.clone()))
            }
            _ => tensor[i * n + j] = Some(k),
        }
    }
    let unit = lookup(&t.unit)?;
    let tensor = tensor
        .into_iter()
        .enumerate()
        .map(|(idx, v)| {
            v.ok_or_else(|| {
                StructuralError::MissingTensor(
                    t.elements[idx / n].clone(),
                    t.elements[idx % n].clone(),
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IndexTables {
        names: t.elements.clone(),
        leq,
        tensor,
        unit,
    })
}

fn least_upper_bound(n: usize, leq: &[bool], members: &[usize]) -> Option<usize> {
    let uppers: Vec<usize> = (0..n)
        .filter(|&u| members.iter().all(|&m| leq[m * n + u]))
        .collect();
    uppers
        .iter()
        .copied()
        .find(|&u| uppers.iter().all(|&v| leq[u * n + v]))
}

fn check_axioms(t: &IndexTables) -> Result<Vec<usize>, AxiomViolation> {
    let n = t.names.len();
    let name = |i: usize| t.names[i].clone();
    let le = |a: usize, b: usize| t.leq[a * n + b];
    let mul = |a: usize, b: usize| t.tensor[a * n + b];

    for a in 0..n {
        for b in 0..n {
            if a != b && le(a, b) && le(b, a) {
                return Err(AxiomViolation::Antisymmetry(name(a), name(b)));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if le(a, b) && le(b, c) && !le(a, c) {
                    return Err(AxiomViolation::Transitivity(name(a), name(b), name(c)));
                }
            }
        }
    }
    let mut joins = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            joins[a * n + b] = least_upper_bound(n, &t.leq, &[a, b])
                .ok_or_else(|| AxiomViolation::MissingJoin(name(a), name(b)))?;
        }
    }
    let bottom = least_upper_bound(n, &t.leq, &[]).ok_or(AxiomViolation::MissingBottom)?;

    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    return Err(AxiomViolation::Associativity(name(a), name(b), name(c)));
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if mul(a, b) != mul(b, a) {
                return Err(AxiomViolation::Commutativity(name(a), name(b)));
            }
        }
    }
    for a in 0..n {
        if mul(t.unit, a) != a {
            return Err(AxiomViolation::Unit {
                unit: name(t.unit),
                value: name(a),
            });
        }
    }

    // x (x) sup S == sup (x (x) S); all subsets on small carriers, pairs and
    // the empty join otherwise.
    let join_of = |members: &[usize]| {
        members
            .iter()
            .fold(bottom, |acc, &m| joins[acc * n + m])
    };
    let subsets: Vec<Vec<usize>> = if n <= 6 {
        (0..(1usize << n))
            .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
            .collect()
    } else {
        let mut s = vec![vec![]];
        for a in 0..n {
            for b in a..n {
                s.push(vec![a, b]);
            }
        }
        s
    };
    for x in 0..n {
        for subset in &subsets {
            let lhs = mul(x, join_of(subset));
            let images: Vec<usize> = subset.iter().map(|&s| mul(x, s)).collect();
            if lhs != join_of(&images) {
                return Err(AxiomViolation::Distributivity {
                    value: name(x),
                    subset: subset.iter().map(|&s| name(s)).collect(),
                });
            }
        }
    }
    Ok(joins)
}

/// Checks the commutative-quantale axioms on raw tables.
///
/// Structural problems (unknown ids, non-total tensor) are errors; axiom
/// failures are reported as [`QuantaleReport::Fail`] with witnesses.
pub fn validate_quantale(tables: &QuantaleTables) -> Result<QuantaleReport, StructuralError> {
    let idx = index_tables(tables)?;
    Ok(match check_axioms(&idx) {
        Ok(_) => QuantaleReport::Pass,
        Err(v) => QuantaleReport::Fail(v),
    })
}

/// A validated finite commutative quantale. Values are element indices.
#[derive(Clone, PartialEq, Eq)]
pub struct Quantale {
    names: Vec<String>,
    leq: Vec<bool>,
    tensor: Vec<usize>,
    joins: Vec<usize>,
    unit: usize,
    bottom: usize,
}

impl fmt::Debug for Quantale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quantale")
            .field("elements", &self.names)
            .field("unit", &self.names[self.unit])
            .finish()
    }
}

impl Quantale {
    pub fn new(tables: &QuantaleTables) -> Result<Self, BaseError> {
        let idx = index_tables(tables)?;
        let joins = check_axioms(&idx)?;
        let n = idx.names.len();
        let bottom = least_upper_bound(n, &idx.leq, &[]).expect("checked by axioms");
        Ok(Quantale {
            names: idx.names,
            leq: idx.leq,
            tensor: idx.tensor,
            joins,
            unit: idx.unit,
            bottom,
        })
    }

    /// The walking arrow `bot < top` with tensor = meet.
    pub fn two() -> Self {
        Self::chain_with(&["bot", "top"], |a, b| a.min(b))
    }

    /// A chain `0 < 1 < ... < n-1` with tensor = meet and unit the top.
    pub fn chain_meet(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::chain_with(&refs, |a, b| a.min(b))
    }

    /// The Łukasiewicz chain `0 < 1 < ... < n-1` with `x (x) y = max(0, x + y - (n-1))`.
    pub fn chain_lukasiewicz(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| format!("l{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::chain_with(&refs, move |a, b| (a + b).saturating_sub(n - 1))
    }

    fn chain_with(names: &[&str], tensor: impl Fn(usize, usize) -> usize) -> Self {
        let n = names.len();
        let tables = QuantaleTables {
            elements: names.iter().map(|s| s.to_string()).collect(),
            leq: (0..n)
                .flat_map(|a| (a..n).map(move |b| (a, b)))
                .map(|(a, b)| (names[a].to_string(), names[b].to_string()))
                .collect(),
            tensor: (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| {
                    (
                        names[a].to_string(),
                        names[b].to_string(),
                        names[tensor(a, b)].to_string(),
                    )
                })
                .collect(),
            unit: names[n - 1].to_string(),
        };
        Self::new(&tables).expect("chain quantale is valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn value(&self, id: &str) -> Result<usize, BaseError> {
        self.names
            .iter()
            .position(|n| n == id)
            .ok_or_else(|| BaseError::Structural(StructuralError::UnknownValue(id.to_string())))
    }

    pub fn top(&self) -> usize {
        let n = self.len();
        (0..n)
            .find(|&t| (0..n).all(|v| self.leq[v * n + t]))
            .expect("finite lattice has a top")
    }

    /// `x -o y`: the largest `z` with `z (x) x <= y`.
    pub fn residuate(&self, x: usize, y: usize) -> usize {
        self.join_all(self.elements().filter(|&z| self.leq(&self.tensor(&z, &x), &y)))
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        let n = self.len();
        let lowers: Vec<usize> = (0..n)
            .filter(|&l| self.leq[l * n + x] && self.leq[l * n + y])
            .collect();
        self.join_all(lowers)
    }

    /// Isomorphic to the Boolean quantale: two elements, tensor = meet.
    pub fn is_two(&self) -> bool {
        if self.len() != 2 {
            return false;
        }
        let top = self.top();
        let bot = self.bottom;
        top != bot
            && self.unit == top
            && self.tensor(&top, &top) == top
            && self.tensor(&top, &bot) == bot
            && self.tensor(&bot, &bot) == bot
    }

    pub fn tables(&self) -> QuantaleTables {
        let n = self.len();
        QuantaleTables {
            elements: self.names.clone(),
            leq: (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| a != b && self.leq[a * n + b])
                .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
                .collect(),
            tensor: (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| {
                    (
                        self.names[a].clone(),
                        self.names[b].clone(),
                        self.names[self.tensor[a * n + b]].clone(),
                    )
                })
                .collect(),
            unit: self.names[self.unit].clone(),
        }
    }
}

impl Base for Quantale {
    type Value = usize;

    fn unit(&self) -> usize {
        self.unit
    }

    fn bottom(&self) -> usize {
        self.bottom
    }

    fn tensor(&self, x: &usize, y: &usize) -> usize {
        self.tensor[x * self.len() + y]
    }

    fn leq(&self, x: &usize, y: &usize) -> bool {
        self.leq[x * self.len() + y]
    }

    fn join(&self, x: &usize, y: &usize) -> usize {
        self.joins[x * self.len() + y]
    }

    fn render(&self, x: &usize) -> String {
        self.names[*x].clone()
    }

    fn same(&self, x: &usize, y: &usize) -> bool {
        x == y
    }
}

/// An extended nonnegative real; `Infinite` is a distinguished value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dist {
    Finite(f64),
    Infinite,
}

impl Dist {
    pub fn finite(x: f64) -> Result<Self, BaseError> {
        if x.is_finite() && x >= 0.0 {
            Ok(Dist::Finite(x))
        } else {
            Err(BaseError::InvalidDistance(x.to_string()))
        }
    }

    pub fn parse(s: &str) -> Result<Self, BaseError> {
        let t = s.trim();
        if matches!(t, "inf" | "Inf" | "infinity" | "∞") {
            return Ok(Dist::Infinite);
        }
        let x: f64 = t
            .parse()
            .map_err(|_| BaseError::InvalidDistance(s.to_string()))?;
        Dist::finite(x).map_err(|_| BaseError::InvalidDistance(s.to_string()))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Dist::Infinite)
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(x) => write!(f, "{x}"),
            Dist::Infinite => f.write_str("inf"),
        }
    }
}

/// Lawvere's base `([0, inf], >=, +, 0)` with a comparison tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RPlus {
    tolerance: f64,
}

impl Default for RPlus {
    fn default() -> Self {
        RPlus { tolerance: 1e-9 }
    }
}

impl RPlus {
    pub fn with_tolerance(tolerance: f64) -> Self {
        assert!(tolerance >= 0.0 && tolerance.is_finite());
        RPlus { tolerance }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

impl Base for RPlus {
    type Value = Dist;

    fn unit(&self) -> Dist {
        Dist::Finite(0.0)
    }

    fn bottom(&self) -> Dist {
        Dist::Infinite
    }

    fn tensor(&self, x: &Dist, y: &Dist) -> Dist {
        match (x, y) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a + b),
            _ => Dist::Infinite,
        }
    }

    /// `x <= y` in the base order means `x >= y` numerically.
    fn leq(&self, x: &Dist, y: &Dist) -> bool {
        match (x, y) {
            (Dist::Infinite, _) => true,
            (Dist::Finite(_), Dist::Infinite) => false,
            (Dist::Finite(a), Dist::Finite(b)) => *a >= *b - self.tolerance,
        }
    }

    fn join(&self, x: &Dist, y: &Dist) -> Dist {
        match (x, y) {
            (Dist::Infinite, v) | (v, Dist::Infinite) => *v,
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a.min(*b)),
        }
    }

    fn render(&self, x: &Dist) -> String {
        x.to_string()
    }

    fn same(&self, x: &Dist, y: &Dist) -> bool {
        match (x, y) {
            (Dist::Infinite, Dist::Infinite) => true,
            (Dist::Finite(a), Dist::Finite(b)) => (a - b).abs() <= self.tolerance,
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables(elements: &[&str], leq: &[(&str, &str)], tensor: &[(&str, &str, &str)], unit: &str) -> QuantaleTables {
        QuantaleTables {
            elements: elements.iter().map(|s| s.to_string()).collect(),
            leq: leq.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            tensor: tensor
                .iter()
                .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
                .collect(),
            unit: unit.to_string(),
        }
    }

    #[test]
    fn two_is_a_quantale() {
        let two = Quantale::two();
        assert_eq!(validate_quantale(&two.tables()), Ok(QuantaleReport::Pass));
        assert!(two.is_two());
    }

    #[test]
    fn constant_bottom_tensor_fails_unit_law() {
        let t = tables(
            &["bot", "top"],
            &[("bot", "top")],
            &[
                ("bot", "bot", "bot"),
                ("bot", "top", "bot"),
                ("top", "bot", "bot"),
                ("top", "top", "bot"),
            ],
            "top",
        );
        match validate_quantale(&t).unwrap() {
            QuantaleReport::Fail(AxiomViolation::Unit { unit, value }) => {
                assert_eq!(unit, "top");
                assert_eq!(value, "top");
            }
            other => panic!("expected unit failure, got {other:?}"),
        }
    }

    #[test]
    fn structural_errors_are_not_axiom_failures() {
        let missing = tables(&["a"], &[], &[], "a");
        assert_eq!(
            validate_quantale(&missing),
            Err(StructuralError::MissingTensor("a".into(), "a".into()))
        );
        let unknown = tables(&["a"], &[("a", "b")], &[("a", "a", "a")], "a");
        assert_eq!(
            validate_quantale(&unknown),
            Err(StructuralError::UnknownValue("b".into()))
        );
    }

    #[test]
    fn residuation_in_two() {
        let two = Quantale::two();
        let (bot, top) = (two.value("bot").unwrap(), two.value("top").unwrap());
        assert_eq!(two.residuate(top, bot), bot);
        assert_eq!(two.residuate(bot, bot), top);
        assert_eq!(two.residuate(bot, top), top);
    }

    #[test]
    fn residuation_in_three_chain() {
        let chain = Quantale::chain_meet(3);
        // m -o bot: z /\ m <= bot forces z = bot
        assert_eq!(chain.residuate(1, 0), 0);
        assert_eq!(chain.residuate(1, 1), 2);
        assert_eq!(chain.residuate(2, 1), 1);
    }

    #[test]
    fn rplus_order_is_reversed_and_tolerant() {
        let r = RPlus::default();
        assert!(r.leq(&Dist::Finite(2.0), &Dist::Finite(1.0)));
        assert!(!r.leq(&Dist::Finite(1.0), &Dist::Finite(2.0)));
        assert!(r.same(&Dist::Finite(1.0), &Dist::Finite(1.0 + 1e-12)));
        assert!(r.same(&Dist::Infinite, &Dist::Infinite));
        assert!(!r.same(&Dist::Infinite, &Dist::Finite(1e300)));
        assert_eq!(r.tensor(&Dist::Infinite, &Dist::Finite(1.0)), Dist::Infinite);
        assert_eq!(r.join(&Dist::Finite(3.0), &Dist::Finite(1.0)), Dist::Finite(1.0));
        assert_eq!(r.join_all([]), Dist::Infinite);
    }

    #[test]
    fn parse_distances() {
        assert_eq!(Dist::parse("inf").unwrap(), Dist::Infinite);
        assert_eq!(Dist::parse("0.25").unwrap(), Dist::Finite(0.25));
        assert!(Dist::parse("-1").is_err());
        assert!(Dist::parse("nan").is_err());
    }
}
