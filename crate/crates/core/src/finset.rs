//! The category of finite sets and total mapping tables.
//!
//! Objects carry an ordered list of distinct labels; elements are addressed by
//! their position in that list. Every construction below picks a canonical
//! representative with deterministic labels, but only the universal property
//! of the result is part of the contract.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::kernel::{Category, KernelError};
use crate::relcalc::{RelError, Relation};

/// Label of the single element of the canonical terminal object.
pub const POINT: &str = "★";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinError {
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {label:?} in {object}")]
    UnknownLabel { label: String, object: String },
    #[error("table has {got} entries but the domain has {expected} elements")]
    TableLength { expected: usize, got: usize },
    #[error("table entry {index} maps to {target}, outside a codomain of size {size}")]
    OutOfRange { index: usize, target: usize, size: usize },
    #[error("label {0:?} is mapped twice")]
    Redefined(String),
    #[error("label {0:?} has no image")]
    Undefined(String),
    #[error("{f} and {g} are not parallel")]
    NotParallel { f: String, g: String },
    #[error("{f} and {g} do not share a codomain")]
    CodomainMismatch { f: String, g: String },
    #[error("{g} and {f} are not composable")]
    NotComposable { g: String, f: String },
    #[error("{0} is not an element (its domain is not terminal)")]
    NotElement(String),
    #[error("{0} is not an endomap")]
    NotEndo(String),
    #[error("relation is not {property}: witness {witness}")]
    NotEquivalence { property: &'static str, witness: String },
    #[error("expected a relation of arity {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Relation(#[from] RelError),
}

/// A finite carrier.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinObj {
    labels: Arc<[String]>,
}

impl FinObj {
    /// Keeps the given order. Labels must be distinct.
    pub fn new<I, S>(labels: I) -> Result<Self, FinError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(FinError::DuplicateLabel(l.clone()));
            }
        }
        Ok(FinObj { labels: labels.into() })
    }

    /// Lexicographically ordered carrier.
    pub fn sorted<I, S>(labels: I) -> Result<Self, FinError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        labels.sort();
        Self::new(labels)
    }

    /// The carrier `{0, 1, …, n-1}`.
    pub fn standard(n: usize) -> Self {
        FinObj { labels: (0..n).map(|i| i.to_string()).collect::<Vec<_>>().into() }
    }

    /// Labels may collide in nested constructions; later duplicates get primes.
    fn from_generated(labels: Vec<String>) -> Self {
        let mut seen = HashSet::with_capacity(labels.len());
        let labels: Vec<String> = labels
            .into_iter()
            .map(|mut l| {
                while seen.contains(&l) {
                    l.push('\'');
                }
                seen.insert(l.clone());
                l
            })
            .collect();
        FinObj { labels: labels.into() }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn lookup(&self, label: &str) -> Result<usize, FinError> {
        self.index_of(label).ok_or_else(|| FinError::UnknownLabel {
            label: label.to_string(),
            object: self.to_string(),
        })
    }

    fn same(&self, other: &FinObj) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl fmt::Debug for FinObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FinObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(", "))
    }
}

/// A total mapping table. Equality is extensional: same domain, same codomain
/// and the same table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinMor {
    dom: FinObj,
    cod: FinObj,
    table: Vec<usize>,
}

impl FinMor {
    pub fn new(dom: FinObj, cod: FinObj, table: Vec<usize>) -> Result<Self, FinError> {
        if table.len() != dom.len() {
            return Err(FinError::TableLength { expected: dom.len(), got: table.len() });
        }
        if let Some((index, &target)) = table.iter().enumerate().find(|(_, &t)| t >= cod.len()) {
            return Err(FinError::OutOfRange { index, target, size: cod.len() });
        }
        Ok(FinMor { dom, cod, table })
    }

    /// Builds a table from `label ↦ label` pairs, which must cover the domain
    /// exactly once.
    pub fn from_pairs<'a, I>(dom: FinObj, cod: FinObj, pairs: I) -> Result<Self, FinError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut table = vec![None; dom.len()];
        for (a, b) in pairs {
            let i = dom.lookup(a)?;
            let j = cod.lookup(b)?;
            if table[i].replace(j).is_some() {
                return Err(FinError::Redefined(a.to_string()));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| FinError::Undefined(dom.label(i).to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FinMor { dom, cod, table })
    }

    pub fn from_fn(dom: FinObj, cod: FinObj, f: impl Fn(usize) -> usize) -> Self {
        let table = (0..dom.len()).map(f).collect::<Vec<_>>();
        debug_assert!(table.iter().all(|&t| t < cod.len()));
        FinMor { dom, cod, table }
    }

    pub fn identity(a: &FinObj) -> Self {
        FinMor::from_fn(a.clone(), a.clone(), |i| i)
    }

    pub fn constant(dom: &FinObj, cod: &FinObj, target: usize) -> Self {
        FinMor::from_fn(dom.clone(), cod.clone(), |_| target)
    }

    /// The element `1 → a` picking the `i`-th label.
    pub fn element(a: &FinObj, i: usize) -> Self {
        FinMor::constant(&terminal(), a, i)
    }

    pub fn dom(&self) -> &FinObj {
        &self.dom
    }

    pub fn cod(&self) -> &FinObj {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    /// For an element `1 → A`, the index it picks.
    pub fn point(&self) -> Result<usize, FinError> {
        if self.dom.len() == 1 {
            Ok(self.table[0])
        } else {
            Err(FinError::NotElement(self.to_string()))
        }
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &FinMor) -> Result<FinMor, FinError> {
        if !self.dom.same(&f.cod) {
            return Err(FinError::NotComposable { g: self.to_string(), f: f.to_string() });
        }
        Ok(FinMor {
            dom: f.dom.clone(),
            cod: self.cod.clone(),
            table: f.table.iter().map(|&i| self.table[i]).collect(),
        })
    }

    pub fn is_parallel(&self, other: &FinMor) -> bool {
        self.dom.same(&other.dom) && self.cod.same(&other.cod)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        self.table.iter().all(|&j| !std::mem::replace(&mut hit[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for &j in &self.table {
            hit[j] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FinMor> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.cod.len()];
        for (i, &j) in self.table.iter().enumerate() {
            table[j] = i;
        }
        Some(FinMor { dom: self.cod.clone(), cod: self.dom.clone(), table })
    }

    /// Indices of the domain mapped to `j`.
    pub fn fiber(&self, j: usize) -> Vec<usize> {
        (0..self.dom.len()).filter(|&i| self.table[i] == j).collect()
    }

    /// Image indices in codomain order.
    pub fn image(&self) -> Vec<usize> {
        let mut hit = vec![false; self.cod.len()];
        for &j in &self.table {
            hit[j] = true;
        }
        (0..self.cod.len()).filter(|&j| hit[j]).collect()
    }

    /// The mapping written as `{a ↦ u, b ↦ v}`.
    pub fn table_string(&self) -> String {
        let body: Vec<String> = self
            .table
            .iter()
            .enumerate()
            .map(|(i, &j)| format!("{} ↦ {}", self.dom.label(i), self.cod.label(j)))
            .collect();
        format!("{{{}}}", body.join(", "))
    }
}

impl fmt::Debug for FinMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FinMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} -> {}", self.table_string(), self.dom, self.cod)
    }
}

/// Enumerates every mapping `dom → cod` in lexicographic table order.
pub struct Maps {
    dom: FinObj,
    cod: FinObj,
    next: Option<Vec<usize>>,
}

impl Iterator for Maps {
    type Item = FinMor;

    fn next(&mut self) -> Option<FinMor> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let m = self.cod.len();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < m {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(FinMor { dom: self.dom.clone(), cod: self.cod.clone(), table: current })
    }
}

pub fn all_maps(dom: &FinObj, cod: &FinObj) -> Maps {
    let next = if cod.is_empty() && !dom.is_empty() { None } else { Some(vec![0; dom.len()]) };
    Maps { dom: dom.clone(), cod: cod.clone(), next }
}

/// `|cod|^|dom|`, saturating.
pub fn hom_count(dom: usize, cod: usize) -> usize {
    (0..dom).fold(1usize, |acc, _| acc.saturating_mul(cod))
}

/// The category of finite sets. Cancellation properties are decided against
/// the standard carriers of size at most `probe_bound`.
#[derive(Debug, Clone, Copy)]
pub struct FinSet {
    pub probe_bound: usize,
}

impl Default for FinSet {
    fn default() -> Self {
        FinSet { probe_bound: 2 }
    }
}

impl Category for FinSet {
    type Obj = FinObj;
    type Mor = FinMor;

    fn dom(&self, f: &FinMor) -> FinObj {
        f.dom.clone()
    }

    fn cod(&self, f: &FinMor) -> FinObj {
        f.cod.clone()
    }

    fn contains(&self, _a: &FinObj) -> bool {
        true
    }

    fn identity(&self, a: &FinObj) -> Result<FinMor, KernelError> {
        Ok(FinMor::identity(a))
    }

    fn compose(&self, g: &FinMor, f: &FinMor) -> Result<FinMor, KernelError> {
        g.after(f)
            .map_err(|_| KernelError::Composition { g: g.to_string(), f: f.to_string() })
    }

    fn hom(&self, a: &FinObj, b: &FinObj) -> Vec<FinMor> {
        all_maps(a, b).collect()
    }

    fn terminal(&self) -> Option<FinObj> {
        Some(terminal())
    }

    fn probes(&self) -> Vec<FinObj> {
        (0..=self.probe_bound).map(FinObj::standard).collect()
    }
}

pub fn terminal() -> FinObj {
    FinObj { labels: vec![POINT.to_string()].into() }
}

pub fn initial() -> FinObj {
    FinObj { labels: Vec::<String>::new().into() }
}

pub fn to_terminal(a: &FinObj) -> FinMor {
    FinMor::constant(a, &terminal(), 0)
}

pub fn from_initial(a: &FinObj) -> FinMor {
    FinMor::from_fn(initial(), a.clone(), |_| 0)
}

fn tuple_label<'a>(parts: impl IntoIterator<Item = &'a str>) -> String {
    let parts: Vec<&str> = parts.into_iter().collect();
    format!("({})", parts.join(","))
}

/// An n-ary product with its projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductDiagram {
    pub apex: FinObj,
    pub projections: Vec<FinMor>,
    factors: Vec<FinObj>,
}

impl ProductDiagram {
    pub fn factors(&self) -> &[FinObj] {
        &self.factors
    }

    /// Position of the tuple in the apex.
    pub fn index_of(&self, tuple: &[usize]) -> usize {
        if self.factors.is_empty() {
            return 0;
        }
        tuple.iter().zip(&self.factors).fold(0, |acc, (&t, x)| acc * x.len() + t)
    }

    pub fn tuple_of(&self, index: usize) -> Vec<usize> {
        self.projections.iter().map(|p| p.apply(index)).collect()
    }

    /// The mediating map `⟨f₁,…,fₙ⟩ : dom → apex`.
    pub fn pair(&self, dom: &FinObj, fs: &[FinMor]) -> Result<FinMor, FinError> {
        if fs.len() != self.factors.len() {
            return Err(FinError::Arity { expected: self.factors.len(), got: fs.len() });
        }
        for (f, x) in fs.iter().zip(&self.factors) {
            if !f.dom.same(dom) || !f.cod.same(x) {
                return Err(FinError::NotComposable { g: x.to_string(), f: f.to_string() });
            }
        }
        Ok(FinMor::from_fn(dom.clone(), self.apex.clone(), |i| {
            let tuple: Vec<usize> = fs.iter().map(|f| f.apply(i)).collect();
            self.index_of(&tuple)
        }))
    }
}

/// The canonical product of a list of objects. The empty product is the
/// terminal object and the unary product is the object itself.
pub fn product_n(factors: &[FinObj]) -> ProductDiagram {
    match factors {
        [] => ProductDiagram { apex: terminal(), projections: Vec::new(), factors: Vec::new() },
        [x] => ProductDiagram {
            apex: x.clone(),
            projections: vec![FinMor::identity(x)],
            factors: vec![x.clone()],
        },
        _ => {
            let size = factors.iter().map(FinObj::len).product::<usize>();
            let mut tuples = Vec::with_capacity(size);
            let mut labels = Vec::with_capacity(size);
            for index in 0..size {
                let mut rest = index;
                let mut tuple = vec![0; factors.len()];
                for (k, x) in factors.iter().enumerate().rev() {
                    tuple[k] = rest % x.len();
                    rest /= x.len();
                }
                labels.push(tuple_label(tuple.iter().zip(factors).map(|(&t, x)| x.label(t))));
                tuples.push(tuple);
            }
            let apex = FinObj::from_generated(labels);
            let projections = factors
                .iter()
                .enumerate()
                .map(|(k, x)| FinMor::from_fn(apex.clone(), x.clone(), |i| tuples[i][k]))
                .collect();
            ProductDiagram { apex, projections, factors: factors.to_vec() }
        }
    }
}

pub fn product(a: &FinObj, b: &FinObj) -> ProductDiagram {
    product_n(&[a.clone(), b.clone()])
}

/// A binary sum `A →i S ←j B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumDiagram {
    pub apex: FinObj,
    pub inl: FinMor,
    pub inr: FinMor,
}

impl SumDiagram {
    /// The mediating map `[f, g] : S → T`.
    pub fn copair(&self, f: &FinMor, g: &FinMor) -> Result<FinMor, FinError> {
        if !f.dom.same(&self.inl.dom) || !g.dom.same(&self.inr.dom) || !f.cod.same(&g.cod) {
            return Err(FinError::CodomainMismatch { f: f.to_string(), g: g.to_string() });
        }
        let left = self.inl.dom.len();
        Ok(FinMor::from_fn(self.apex.clone(), f.cod.clone(), |i| {
            if i < left {
                f.apply(i)
            } else {
                g.apply(i - left)
            }
        }))
    }
}

pub fn sum(a: &FinObj, b: &FinObj) -> SumDiagram {
    let labels = a
        .labels()
        .iter()
        .map(|l| format!("inl:{l}"))
        .chain(b.labels().iter().map(|l| format!("inr:{l}")))
        .collect();
    let apex = FinObj::from_generated(labels);
    let inl = FinMor::from_fn(a.clone(), apex.clone(), |i| i);
    let inr = FinMor::from_fn(b.clone(), apex.clone(), |i| a.len() + i);
    SumDiagram { apex, inl, inr }
}

fn subobject_of(x: &FinObj, indices: &[usize]) -> FinMor {
    let sub = FinObj::from_generated(indices.iter().map(|&i| x.label(i).to_string()).collect());
    FinMor::from_fn(sub, x.clone(), |k| indices[k])
}

/// The inclusion of `{a : f a = g a}`.
pub fn equalizer(f: &FinMor, g: &FinMor) -> Result<FinMor, FinError> {
    if !f.is_parallel(g) {
        return Err(FinError::NotParallel { f: f.to_string(), g: g.to_string() });
    }
    let agree: Vec<usize> = (0..f.dom.len()).filter(|&a| f.apply(a) == g.apply(a)).collect();
    Ok(subobject_of(&f.dom, &agree))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            cur = std::mem::replace(&mut self.parent[cur], root);
        }
        root
    }

    /// The smaller index becomes the root, so roots are least representatives.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// The quotient of `cod(f)` by the least equivalence relation identifying
/// `f a` with `g a`. Each class is labelled by its first member.
pub fn coequalizer(f: &FinMor, g: &FinMor) -> Result<FinMor, FinError> {
    if !f.is_parallel(g) {
        return Err(FinError::NotParallel { f: f.to_string(), g: g.to_string() });
    }
    let b = &f.cod;
    let mut uf = UnionFind::new(b.len());
    for a in 0..f.dom.len() {
        uf.union(f.apply(a), g.apply(a));
    }
    let roots: Vec<usize> = (0..b.len()).map(|x| uf.find(x)).collect();
    let reps: Vec<usize> = (0..b.len()).filter(|&x| roots[x] == x).collect();
    let q_obj = FinObj::from_generated(reps.iter().map(|&r| b.label(r).to_string()).collect());
    let mut class_of = vec![0; b.len()];
    for (k, &r) in reps.iter().enumerate() {
        class_of[r] = k;
    }
    Ok(FinMor::from_fn(b.clone(), q_obj, |x| class_of[roots[x]]))
}

/// A commutative square `A ←π₁ P →π₂ B` over a cospan `A →f C ←g B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackSquare {
    pub apex: FinObj,
    pub pi1: FinMor,
    pub pi2: FinMor,
}

impl PullbackSquare {
    /// The unique `t` with `π₁ t = a` and `π₂ t = b`, if any.
    pub fn locate(&self, a: usize, b: usize) -> Option<usize> {
        (0..self.apex.len()).find(|&t| self.pi1.apply(t) == a && self.pi2.apply(t) == b)
    }
}

/// Apex `{(a,b) : f a = g b}` in lexicographic order.
pub fn pullback(f: &FinMor, g: &FinMor) -> Result<PullbackSquare, FinError> {
    if !f.cod.same(&g.cod) {
        return Err(FinError::CodomainMismatch { f: f.to_string(), g: g.to_string() });
    }
    let (a_obj, b_obj) = (&f.dom, &g.dom);
    let pairs: Vec<(usize, usize)> = (0..a_obj.len())
        .flat_map(|a| (0..b_obj.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| f.apply(a) == g.apply(b))
        .collect();
    let apex = FinObj::from_generated(
        pairs.iter().map(|&(a, b)| tuple_label([a_obj.label(a), b_obj.label(b)])).collect(),
    );
    let pi1 = FinMor::from_fn(apex.clone(), a_obj.clone(), |t| pairs[t].0);
    let pi2 = FinMor::from_fn(apex.clone(), b_obj.clone(), |t| pairs[t].1);
    Ok(PullbackSquare { apex, pi1, pi2 })
}

/// A Π-diagram for `Y →g X →f I`:
///
/// ```text
///   Y <-ev- P -π₁-> F
///           |       |
///           π₂      φ
///           v       v
///           X --f-> I
/// ```
///
/// with the square a pullback and `g ∘ ev = π₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiDiagram {
    pub apex: FinObj,
    pub params: FinObj,
    pub pi1: FinMor,
    pub pi2: FinMor,
    pub phi: FinMor,
    pub ev: FinMor,
}

/// The face of a Π-diagram that fails to hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PiFace {
    /// Some mapping has the wrong domain or codomain.
    Typing(&'static str),
    /// `g ∘ ev ≠ π₂`.
    Triangle { at: usize },
    /// `φ ∘ π₁ ≠ f ∘ π₂`.
    Square { at: usize },
    /// Some `(v, x)` with `φ v = f x` has no, or several, preimages in `P`.
    NotPullback { v: usize, x: usize, preimages: usize },
}

impl fmt::Display for PiFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PiFace::Typing(what) => write!(f, "ill-typed {what}"),
            PiFace::Triangle { at } => write!(f, "triangle g∘ev = π₂ fails at P[{at}]"),
            PiFace::Square { at } => write!(f, "square φ∘π₁ = f∘π₂ fails at P[{at}]"),
            PiFace::NotPullback { v, x, preimages } => {
                write!(f, "square is not a pullback: (F[{v}], X[{x}]) has {preimages} preimages")
            }
        }
    }
}

impl PiDiagram {
    /// `α = (π₁, π₂, ev) : P ↣ (F, X, Y)`.
    pub fn alpha(&self) -> Result<Relation, RelError> {
        Relation::new(self.apex.clone(), vec![self.pi1.clone(), self.pi2.clone(), self.ev.clone()])
    }

    /// Checks typing, both faces, and the pullback property element-wise.
    pub fn shape_defect(&self, g: &FinMor, f: &FinMor) -> Option<PiFace> {
        let typed = [
            (&self.pi1, &self.apex, &self.params, "π₁"),
            (&self.pi2, &self.apex, &f.dom, "π₂"),
            (&self.phi, &self.params, &f.cod, "φ"),
            (&self.ev, &self.apex, &g.dom, "ev"),
        ];
        for (m, d, c, name) in typed {
            if !m.dom.same(d) || !m.cod.same(c) {
                return Some(PiFace::Typing(name));
            }
        }
        if !g.cod.same(&f.dom) {
            return Some(PiFace::Typing("g, f"));
        }
        for t in 0..self.apex.len() {
            if g.apply(self.ev.apply(t)) != self.pi2.apply(t) {
                return Some(PiFace::Triangle { at: t });
            }
            if self.phi.apply(self.pi1.apply(t)) != f.apply(self.pi2.apply(t)) {
                return Some(PiFace::Square { at: t });
            }
        }
        for v in 0..self.params.len() {
            for x in 0..f.dom.len() {
                if self.phi.apply(v) != f.apply(x) {
                    continue;
                }
                let preimages = (0..self.apex.len())
                    .filter(|&t| self.pi1.apply(t) == v && self.pi2.apply(t) == x)
                    .count();
                if preimages != 1 {
                    return Some(PiFace::NotPullback { v, x, preimages });
                }
            }
        }
        None
    }
}

/// Cartesian product of choice lists, first position slowest.
fn choice_tuples(choices: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for &o in options {
                let mut t = prefix.clone();
                t.push(o);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// The dependent product of `g` along `f`, built as the space of sections:
/// an element of `F` is a pair `(i, s)` where `s` picks, for every `x` with
/// `f x = i`, some `y` with `g y = x`.
pub fn pi_diagram(g: &FinMor, f: &FinMor) -> Result<PiDiagram, FinError> {
    if !g.cod.same(&f.dom) {
        return Err(FinError::NotComposable { g: f.to_string(), f: g.to_string() });
    }
    let (y_obj, x_obj, i_obj) = (&g.dom, &f.dom, &f.cod);
    let mut labels = Vec::new();
    let mut phi_table = Vec::new();
    let mut sections: Vec<Vec<(usize, usize)>> = Vec::new();
    for i in 0..i_obj.len() {
        let fiber = f.fiber(i);
        let choices: Vec<Vec<usize>> = fiber.iter().map(|&x| g.fiber(x)).collect();
        for picks in choice_tuples(&choices) {
            let entries: Vec<String> = fiber
                .iter()
                .zip(&picks)
                .map(|(&x, &y)| format!("{}↦{}", x_obj.label(x), y_obj.label(y)))
                .collect();
            labels.push(format!("({}|{})", i_obj.label(i), entries.join(",")));
            phi_table.push(i);
            sections.push(fiber.iter().copied().zip(picks).collect());
        }
    }
    let params = FinObj::from_generated(labels);
    let phi = FinMor::new(params.clone(), i_obj.clone(), phi_table)?;
    let square = pullback(&phi, f)?;
    let ev = FinMor::from_fn(square.apex.clone(), y_obj.clone(), |t| {
        let (v, x) = (square.pi1.apply(t), square.pi2.apply(t));
        sections[v].iter().find(|&&(sx, _)| sx == x).map(|&(_, y)| y).unwrap_or(0)
    });
    Ok(PiDiagram {
        apex: square.apex,
        params,
        pi1: square.pi1,
        pi2: square.pi2,
        phi,
        ev,
    })
}

/// `f = mono ∘ cover` with `cover` onto and `mono` the image inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageFactorization {
    pub cover: FinMor,
    pub mono: FinMor,
}

pub fn image_factorization(f: &FinMor) -> ImageFactorization {
    let image = f.image();
    let mono = subobject_of(&f.cod, &image);
    let mut slot = vec![0; f.cod.len()];
    for (k, &j) in image.iter().enumerate() {
        slot[j] = k;
    }
    let cover = FinMor::from_fn(f.dom.clone(), mono.dom.clone(), |i| slot[f.apply(i)]);
    ImageFactorization { cover, mono }
}

/// Describes the first failure of reflexivity, symmetry or transitivity.
pub fn equivalence_defect(r: &Relation) -> Result<Option<(&'static str, String)>, FinError> {
    if r.arity() != 2 {
        return Err(FinError::Arity { expected: 2, got: r.arity() });
    }
    let x = &r.cods()[0];
    if x != &r.cods()[1] {
        return Err(FinError::CodomainMismatch {
            f: r.legs()[0].to_string(),
            g: r.legs()[1].to_string(),
        });
    }
    let n = x.len();
    let mut holds = vec![vec![false; n]; n];
    for t in r.members() {
        holds[t[0]][t[1]] = true;
    }
    let pair = |a: usize, b: usize| format!("({},{})", x.label(a), x.label(b));
    for a in 0..n {
        if !holds[a][a] {
            return Ok(Some(("reflexive", pair(a, a))));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if holds[a][b] && !holds[b][a] {
                return Ok(Some(("symmetric", pair(a, b))));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if holds[a][b] && holds[b][c] && !holds[a][c] {
                    return Ok(Some(("transitive", format!("{} {}", pair(a, b), pair(b, c)))));
                }
            }
        }
    }
    Ok(None)
}

/// The quotient map of an equivalence relation, built as the coequalizer of
/// its two legs once the relation has been validated.
pub fn quotient(r: &Relation) -> Result<FinMor, FinError> {
    if let Some((property, witness)) = equivalence_defect(r)? {
        return Err(FinError::NotEquivalence { property, witness });
    }
    coequalizer(&r.legs()[0], &r.legs()[1])
}

/// An exponential object together with its evaluation, a total function of
/// two variables `(E, X) → Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponential {
    pub obj: FinObj,
    pub eval: Relation,
    tables: Vec<Vec<usize>>,
}

impl Exponential {
    /// The element of `E` naming `f`.
    pub fn name_of(&self, f: &FinMor) -> Option<usize> {
        self.tables.iter().position(|t| t.as_slice() == f.table())
    }
}

pub fn exponential(x: &FinObj, y: &FinObj) -> Exponential {
    let tables: Vec<Vec<usize>> = all_maps(x, y).map(|m| m.table).collect();
    let labels = tables
        .iter()
        .map(|t| {
            let entries: Vec<String> = t
                .iter()
                .enumerate()
                .map(|(i, &j)| format!("{}↦{}", x.label(i), y.label(j)))
                .collect();
            format!("[{}]", entries.join(","))
        })
        .collect();
    let obj = FinObj::from_generated(labels);
    let ex = product(&obj, x);
    let ev = FinMor::from_fn(ex.apex.clone(), y.clone(), |t| {
        let pos = ex.tuple_of(t);
        tables[pos[0]][pos[1]]
    });
    let legs = vec![ex.projections[0].clone(), ex.projections[1].clone(), ev];
    let eval = Relation::new(ex.apex.clone(), legs).expect("product projections are jointly monic");
    Exponential { obj, eval, tables }
}

/// The two-element object `1 →f 2 ←t 1`.
pub fn truth_values() -> SumDiagram {
    sum(&terminal(), &terminal())
}

pub const FALSE: usize = 0;
pub const TRUE: usize = 1;

/// The classifying map `χ : X → 2` with `x ⋿ r ⇔ χ x = t`.
pub fn characteristic(r: &Relation) -> Result<FinMor, FinError> {
    if r.arity() != 1 {
        return Err(FinError::Arity { expected: 1, got: r.arity() });
    }
    let two = truth_values().apex;
    let m = &r.legs()[0];
    let hit = {
        let mut hit = vec![false; m.cod.len()];
        for &j in &m.table {
            hit[j] = true;
        }
        hit
    };
    Ok(FinMor::from_fn(m.cod.clone(), two, |x| if hit[x] { TRUE } else { FALSE }))
}

/// Unrolls `f 0 = b`, `f (n+1) = h (f n)` on `{0, …, bound}`.
pub fn nno_prefix(bound: usize, b: &FinMor, h: &FinMor) -> Result<Vec<FinMor>, FinError> {
    let start = b.point()?;
    if !h.dom.same(&h.cod) {
        return Err(FinError::NotEndo(h.to_string()));
    }
    if !b.cod.same(&h.dom) {
        return Err(FinError::NotComposable { g: h.to_string(), f: b.to_string() });
    }
    let mut out = Vec::with_capacity(bound + 1);
    let mut cur = start;
    out.push(FinMor::element(&h.cod, cur));
    for _ in 0..bound {
        cur = h.apply(cur);
        out.push(FinMor::element(&h.cod, cur));
    }
    Ok(out)
}

/// Every finite set is a choice object, so the identity is a projective cover.
pub fn projective_cover(a: &FinObj) -> FinMor {
    FinMor::identity(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(labels: &[&str]) -> FinObj {
        FinObj::new(labels.iter().copied()).unwrap()
    }

    fn map(dom: &FinObj, cod: &FinObj, pairs: &[(&str, &str)]) -> FinMor {
        FinMor::from_pairs(dom.clone(), cod.clone(), pairs.iter().copied()).unwrap()
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert_eq!(FinObj::new(["a", "a"]), Err(FinError::DuplicateLabel("a".into())));
    }

    #[test]
    fn tables_must_be_total() {
        let a = obj(&["a", "b"]);
        let b = obj(&["u"]);
        assert!(matches!(
            FinMor::from_pairs(a.clone(), b.clone(), [("a", "u")]),
            Err(FinError::Undefined(_))
        ));
        assert!(matches!(
            FinMor::from_pairs(a.clone(), b.clone(), [("a", "u"), ("a", "u"), ("b", "u")]),
            Err(FinError::Redefined(_))
        ));
        assert!(matches!(FinMor::new(a, b, vec![0, 1]), Err(FinError::OutOfRange { .. })));
    }

    #[test]
    fn terminal_and_initial() {
        assert_eq!(terminal().labels(), [POINT]);
        assert!(initial().is_empty());
        let ab = obj(&["a", "b"]);
        assert_eq!(to_terminal(&ab).table(), [0, 0]);
        assert_eq!(from_initial(&ab).table(), [] as [usize; 0]);
    }

    #[test]
    fn map_enumeration_counts() {
        for (m, n) in [(0, 0), (0, 3), (2, 0), (2, 3), (3, 2)] {
            let count = all_maps(&FinObj::standard(m), &FinObj::standard(n)).count();
            assert_eq!(count, hom_count(m, n), "{m} -> {n}");
        }
        let tables: Vec<Vec<usize>> = all_maps(&FinObj::standard(2), &FinObj::standard(2))
            .map(|f| f.table().to_vec())
            .collect();
        assert_eq!(tables, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn product_sizes_and_labels() {
        let a = FinObj::standard(2);
        let b = FinObj::standard(3);
        let p = product(&a, &b);
        assert_eq!(p.apex.len(), 6);
        assert_eq!(p.apex.label(4), "(1,1)");
        assert_eq!(product(&a, &terminal()).apex.len(), a.len());
        let x = FinMor::element(&a, 1);
        let y = FinMor::element(&b, 2);
        let xy = p.pair(&terminal(), &[x, y]).unwrap();
        assert_eq!(p.apex.label(xy.point().unwrap()), "(1,2)");
    }

    #[test]
    fn sum_labels_and_copair() {
        let s = sum(&obj(&["a"]), &obj(&["a", "b"]));
        assert_eq!(s.apex.labels(), ["inl:a", "inr:a", "inr:b"]);
        let t = FinObj::standard(2);
        let f = FinMor::constant(s.inl.dom(), &t, 1);
        let g = FinMor::constant(s.inr.dom(), &t, 0);
        assert_eq!(s.copair(&f, &g).unwrap().table(), [1, 0, 0]);
    }

    #[test]
    fn equalizer_example() {
        let ab = obj(&["a", "b"]);
        let two = obj(&["0", "1"]);
        let f = map(&ab, &two, &[("a", "0"), ("b", "1")]);
        let g = map(&ab, &two, &[("a", "0"), ("b", "0")]);
        let e = equalizer(&f, &g).unwrap();
        assert_eq!(e.dom().labels(), ["a"]);
        assert!(e.is_injective());
        let h = map(&ab, &two, &[("a", "1"), ("b", "0")]);
        assert!(equalizer(&f, &h).unwrap().dom().is_empty());
        assert!(equalizer(&f, &FinMor::identity(&ab)).is_err());
    }

    #[test]
    fn coequalizer_examples() {
        let a = obj(&["a"]);
        let two = obj(&["0", "1"]);
        let f = map(&a, &two, &[("a", "0")]);
        let g = map(&a, &two, &[("a", "1")]);
        assert_eq!(coequalizer(&f, &g).unwrap().cod().len(), 1);
        assert!(coequalizer(&f, &f).unwrap().is_bijective());

        let d = obj(&["p", "q"]);
        let four = FinObj::standard(4);
        let f = map(&d, &four, &[("p", "0"), ("q", "2")]);
        let g = map(&d, &four, &[("p", "1"), ("q", "3")]);
        let q = coequalizer(&f, &g).unwrap();
        assert_eq!(q.cod().labels(), ["0", "2"]);
    }

    #[test]
    fn pullback_example() {
        let ab = obj(&["a", "b"]);
        let c = obj(&["c"]);
        let two = obj(&["0", "1"]);
        let f = map(&ab, &two, &[("a", "0"), ("b", "1")]);
        let g = map(&c, &two, &[("c", "0")]);
        let sq = pullback(&f, &g).unwrap();
        assert_eq!(sq.apex.labels(), ["(a,c)"]);
        assert!(pullback(&f, &FinMor::identity(&ab)).is_err());
        let along_id = pullback(&f, &FinMor::identity(&two)).unwrap();
        assert!(along_id.pi1.is_bijective());
    }

    #[test]
    fn pi_diagram_example() {
        let y = obj(&["y0", "y1", "y2"]);
        let x = obj(&["x0", "x1"]);
        let i = obj(&["i0"]);
        let g = map(&y, &x, &[("y0", "x0"), ("y1", "x0"), ("y2", "x1")]);
        let f = FinMor::constant(&x, &i, 0);
        let d = pi_diagram(&g, &f).unwrap();
        assert_eq!(d.params.labels(), ["(i0|x0↦y0,x1↦y2)", "(i0|x0↦y1,x1↦y2)"]);
        assert_eq!(d.shape_defect(&g, &f), None);

        let d = pi_diagram(&g, &FinMor::identity(&x)).unwrap();
        assert_eq!(d.params.len(), y.len());
    }

    #[test]
    fn pi_diagram_empty_fiber() {
        let y = obj(&["y0"]);
        let x = obj(&["x0", "x1"]);
        let i = obj(&["i0", "i1"]);
        let g = map(&y, &x, &[("y0", "x0")]);
        let f = map(&x, &i, &[("x0", "i0"), ("x1", "i0")]);
        let d = pi_diagram(&g, &f).unwrap();
        // i0's fiber contains x1, which has no preimage; i1's fiber is empty.
        assert_eq!(d.params.labels(), ["(i1|)"]);
    }

    #[test]
    fn image_example() {
        let a = obj(&["1", "2", "3"]);
        let b = obj(&["a", "b", "c", "d"]);
        let f = map(&a, &b, &[("1", "a"), ("2", "b"), ("3", "a")]);
        let fac = image_factorization(&f);
        assert_eq!(fac.mono.dom().labels(), ["a", "b"]);
        assert!(fac.cover.is_surjective() && fac.mono.is_injective());
        assert_eq!(fac.mono.after(&fac.cover).unwrap(), f);
    }

    #[test]
    fn quotient_examples() {
        let x = FinObj::standard(3);
        let gen = |pairs: &[(usize, usize)]| {
            Relation::from_tuples(
                vec![x.clone(), x.clone()],
                pairs.iter().map(|&(a, b)| vec![a, b]).collect(),
            )
            .unwrap()
        };
        let diag = gen(&[(0, 0), (1, 1), (2, 2)]);
        assert!(quotient(&diag).unwrap().is_bijective());
        let one = gen(&[(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)]);
        assert_eq!(quotient(&one).unwrap().cod().len(), 2);
        let broken = gen(&[(0, 0), (1, 1), (2, 2), (0, 1)]);
        assert!(matches!(
            quotient(&broken),
            Err(FinError::NotEquivalence { property: "symmetric", .. })
        ));
    }

    #[test]
    fn exponential_sizes() {
        assert_eq!(exponential(&FinObj::standard(2), &FinObj::standard(3)).obj.len(), 9);
        assert_eq!(exponential(&initial(), &FinObj::standard(3)).obj.len(), 1);
        assert_eq!(exponential(&FinObj::standard(3), &terminal()).obj.len(), 1);
    }

    #[test]
    fn characteristic_examples() {
        let x = obj(&["x0", "x1", "x2"]);
        let sub = Relation::new(obj(&["a", "b"]), vec![FinMor::new(obj(&["a", "b"]), x.clone(), vec![0, 1]).unwrap()]).unwrap();
        assert_eq!(characteristic(&sub).unwrap().table(), [TRUE, TRUE, FALSE]);
        let empty = Relation::new(initial(), vec![from_initial(&x)]).unwrap();
        assert_eq!(characteristic(&empty).unwrap().table(), [FALSE; 3]);
    }

    #[test]
    fn nno_prefix_examples() {
        let a = FinObj::standard(3);
        let b = FinMor::element(&a, 0);
        let succ = FinMor::from_fn(a.clone(), a.clone(), |i| (i + 1) % 3);
        let seq: Vec<usize> =
            nno_prefix(5, &b, &succ).unwrap().iter().map(|e| e.point().unwrap()).collect();
        assert_eq!(seq, [0, 1, 2, 0, 1, 2]);
        assert_eq!(nno_prefix(0, &b, &succ).unwrap().len(), 1);
        let id: Vec<usize> = nno_prefix(4, &b, &FinMor::identity(&a))
            .unwrap()
            .iter()
            .map(|e| e.point().unwrap())
            .collect();
        assert_eq!(id, [0; 5]);
    }
}
