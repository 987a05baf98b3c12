//! Bounded verification of the axioms and their consequences on the model of
//! finite sets.
//!
//! Every check ranges over the standard carriers `0, 1, …, bound` plus any
//! extra objects supplied with the scope. Universal properties are checked
//! by enumerating every competing cone or cocone and counting mediating
//! maps. A mapping out of a finite set is determined by its values, so the
//! number of mediators is the product over points of the number of admissible
//! values, and it must equal one.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::finset::{
    all_maps, characteristic, coequalizer, equalizer, exponential, hom_count,
    image_factorization, initial, nno_prefix, pi_diagram, product, projective_cover, pullback,
    quotient, sum, terminal, truth_values, FinError, FinMor, FinObj, FinSet, PiDiagram, PiFace,
    TRUE,
};
use crate::kernel;
use crate::relcalc::{self, Relation, Subobject};
use crate::report::{Report, Tally, Witness};

/// Largest bound that is always enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 4;

/// Length of the recursion prefixes used for the bounded NNO claims.
pub const PREFIX: usize = 8;

const CAT: FinSet = FinSet { probe_bound: 2 };

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("unknown item {0}")]
    UnknownItem(String),
    #[error("bound must be at least 1")]
    Bound,
    #[error("sampling needs a bound above {EXHAUSTIVE_LIMIT}, got {0}")]
    SamplingBound(usize),
    #[error("not a Π-diagram: {0}")]
    Shape(PiFace),
    #[error(transparent)]
    Fin(#[from] FinError),
}

/// Random instance selection for bounds too large to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub seed: u64,
    /// Instances drawn per enumerated family.
    pub samples: usize,
}

/// The objects and enumeration policy of a check.
#[derive(Debug, Clone)]
pub struct Scope {
    bound: usize,
    extra: Vec<FinObj>,
    skipped: Vec<String>,
    sampling: Option<Sampling>,
}

impl Scope {
    pub fn new(bound: usize) -> Result<Self, AxiomError> {
        if bound == 0 {
            return Err(AxiomError::Bound);
        }
        Ok(Scope { bound, extra: Vec::new(), skipped: Vec::new(), sampling: None })
    }

    pub fn sampled(bound: usize, seed: u64, samples: usize) -> Result<Self, AxiomError> {
        if bound <= EXHAUSTIVE_LIMIT {
            return Err(AxiomError::SamplingBound(bound));
        }
        let mut s = Scope::new(bound)?;
        s.sampling = Some(Sampling { seed, samples: samples.max(1) });
        Ok(s)
    }

    /// Adds model objects. Objects larger than the bound are skipped, and the
    /// skip is reported in every report's notes.
    pub fn with_objects(mut self, objs: impl IntoIterator<Item = (String, FinObj)>) -> Self {
        for (name, obj) in objs {
            if obj.len() > self.bound {
                self.skipped.push(format!("object {name} of size {} exceeds the bound", obj.len()));
            } else if !self.extra.contains(&obj) && obj != FinObj::standard(obj.len()) {
                self.extra.push(obj);
            }
        }
        self.extra.sort_by(|a, b| (a.len(), a.labels()).cmp(&(b.len(), b.labels())));
        self
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn sampling(&self) -> Option<Sampling> {
        self.sampling
    }

    /// Standard carriers by size, then extra objects by size and labels.
    pub fn objects(&self) -> Vec<FinObj> {
        self.objects_upto(self.bound)
    }

    fn objects_upto(&self, n: usize) -> Vec<FinObj> {
        let mut out: Vec<FinObj> = (0..=n.min(self.bound)).map(FinObj::standard).collect();
        out.extend(self.extra.iter().filter(|o| o.len() <= n).cloned());
        out
    }

    fn rng(&self, tag: u64) -> Option<(ChaCha8Rng, usize)> {
        self.sampling.map(|s| {
            let seed = s.seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
            (ChaCha8Rng::seed_from_u64(seed), s.samples)
        })
    }

    /// Every mapping `a → b`, or a seeded sample of them.
    pub fn maps(&self, a: &FinObj, b: &FinObj) -> Vec<FinMor> {
        let tag = (a.len() as u64) << 32 | b.len() as u64;
        match self.rng(tag) {
            Some((mut rng, n)) if hom_count(a.len(), b.len()) > n => (0..n)
                .map(|_| {
                    let table = (0..a.len()).map(|_| rng.gen_range(0..b.len())).collect();
                    FinMor::new(a.clone(), b.clone(), table).expect("entries in range")
                })
                .collect(),
            _ => all_maps(a, b).collect(),
        }
    }

    /// Every subset of `0..n` as a membership vector, or a seeded sample.
    pub fn subsets(&self, n: usize) -> Vec<Vec<bool>> {
        let exhaustive = |n: usize| -> Vec<Vec<bool>> {
            (0..1u64 << n).map(|m| (0..n).map(|k| m >> k & 1 == 1).collect()).collect()
        };
        match self.rng(1 << 48 | n as u64) {
            Some((mut rng, s)) if n >= 63 || (1u64 << n) as usize > s => {
                (0..s).map(|_| (0..n).map(|_| rng.gen_bool(0.5)).collect()).collect()
            }
            _ => exhaustive(n),
        }
    }

    fn notes(&self) -> Vec<String> {
        let mut notes = self.skipped.clone();
        if let Some(s) = self.sampling {
            notes.push(format!("sampled {} instances per family, seed {}", s.samples, s.seed));
        }
        notes
    }

    fn tally(&self, item: String) -> Tally {
        let mut t = Tally::new(item);
        for n in self.notes() {
            t.note(n);
        }
        t
    }
}

/// What a check is about.
#[derive(Debug, Clone)]
pub struct CheckSpec {
    pub item: String,
    pub scope: Scope,
}

macro_rules! items {
    ($name:ident { $($variant:ident => $id:literal),* $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum $name { $($variant),* }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),*];

            pub fn id(self) -> &'static str {
                match self { $($name::$variant => $id),* }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.id())
            }
        }

        impl FromStr for $name {
            type Err = AxiomError;

            fn from_str(s: &str) -> Result<Self, AxiomError> {
                let id = if s == "Π" { "Pi" } else { s };
                $name::ALL
                    .iter()
                    .copied()
                    .find(|a| a.id().eq_ignore_ascii_case(id))
                    .ok_or_else(|| AxiomError::UnknownItem(s.to_string()))
            }
        }
    };
}

items!(Axiom {
    C1 => "C1", C2 => "C2", C3 => "C3",
    D1 => "D1", D2 => "D2", D3 => "D3",
    Pi => "Pi", G => "G", PA => "PA", I => "I",
    DP => "DP", NT => "NT", Fct => "Fct", Eff => "Eff",
});

items!(Theorem {
    Tupling => "tupling",
    PointwiseEquality => "pointwise-equality",
    Inclusion => "inclusion",
    UniqueChoice => "unique-choice",
    PullbackElements => "pullback-elements",
    Quotient => "quotient",
    Induction => "induction",
    Exponential => "exponential",
    DependentChoice => "dependent-choice",
    OntoPullback => "onto-pullback",
    Image => "image",
    Cover => "cover",
    Regular => "regular",
    Balance => "balance",
    Pretopos => "pretopos",
    Classifier => "classifier",
    PiMono => "pi-mono",
    PiRoundTrip => "pi-round-trip",
    LawvereChoice => "lawvere-choice",
    Choice => "choice",
});

pub fn check_axiom(spec: &CheckSpec) -> Result<Report, AxiomError> {
    Ok(run_axiom(spec.item.parse()?, &spec.scope))
}

pub fn check_theorem(spec: &CheckSpec) -> Result<Report, AxiomError> {
    Ok(run_theorem(spec.item.parse()?, &spec.scope))
}

pub fn run_axiom(a: Axiom, scope: &Scope) -> Report {
    let t = scope.tally(format!("axiom {a}"));
    match a {
        Axiom::C1 => c1(scope, t),
        Axiom::C2 => c2(scope, t),
        Axiom::C3 => c3(scope, t),
        Axiom::D1 => d1(scope, t),
        Axiom::D2 => d2(scope, t),
        Axiom::D3 => d3(scope, t),
        Axiom::Pi => pi_axiom(scope, t),
        Axiom::G => g_axiom(scope, t),
        Axiom::PA => pa(scope, t),
        Axiom::I => i_axiom(t),
        Axiom::DP => dp(scope, t),
        Axiom::NT => nt(scope, t),
        Axiom::Fct => fct(scope, t),
        Axiom::Eff => eff(scope, t),
    }
}

pub fn run_theorem(th: Theorem, scope: &Scope) -> Report {
    let t = scope.tally(format!("theorem {th}"));
    match th {
        Theorem::Tupling => tupling(scope, t),
        Theorem::PointwiseEquality => pointwise_equality(scope, t),
        Theorem::Inclusion => inclusion(scope, t),
        Theorem::UniqueChoice => unique_choice(scope, t),
        Theorem::PullbackElements => pullback_elements(scope, t),
        Theorem::Quotient => quotients(scope, t),
        Theorem::Induction => induction(scope, t),
        Theorem::Exponential => exponentials(scope, t),
        Theorem::DependentChoice => dependent_choice(scope, t),
        Theorem::OntoPullback => onto_pullback(scope, t),
        Theorem::Image => images(scope, t),
        Theorem::Cover => covers(scope, t),
        Theorem::Regular => regular(scope, t),
        Theorem::Balance => balance(scope, t),
        Theorem::Pretopos => pretopos(scope, t),
        Theorem::Classifier => classifier(scope, t),
        Theorem::PiMono => pi_mono(scope, t),
        Theorem::PiRoundTrip => pi_round_trip(scope, t),
        Theorem::LawvereChoice => lawvere_choice(scope, t),
        Theorem::Choice => choice(scope, t),
    }
}

pub fn run_all_axioms(scope: &Scope) -> Vec<Report> {
    Axiom::ALL.iter().map(|&a| run_axiom(a, scope)).collect()
}

pub fn run_all_theorems(scope: &Scope) -> Vec<Report> {
    Theorem::ALL.iter().map(|&t| run_theorem(t, scope)).collect()
}

// Counting mediators.

/// Number of `k : X → L` with `legs[j] ∘ k = cone[j]` for all `j`, where
/// `L` is the common domain of the legs.
fn limit_mediators(x_len: usize, apex_len: usize, legs: &[&FinMor], cone: &[&FinMor]) -> u64 {
    (0..x_len).fold(1u64, |acc, x| {
        let c = (0..apex_len)
            .filter(|&l| legs.iter().zip(cone).all(|(p, f)| p.apply(l) == f.apply(x)))
            .count();
        acc.saturating_mul(c as u64)
    })
}

/// Number of `k : L → X` with `k ∘ injections[j] = cocone[j]` for all `j`.
fn colimit_mediators(
    apex_len: usize,
    x_len: usize,
    injections: &[&FinMor],
    cocone: &[&FinMor],
) -> u64 {
    (0..apex_len).fold(1u64, |acc, s| {
        let c = (0..x_len)
            .filter(|&x| {
                injections.iter().zip(cocone).all(|(i, f)| {
                    (0..i.dom().len()).all(|a| i.apply(a) != s || f.apply(a) == x)
                })
            })
            .count();
        acc.saturating_mul(c as u64)
    })
}

fn composite(g: &FinMor, f: &FinMor) -> FinMor {
    g.after(f).expect("composable by construction")
}

fn onto(f: &FinMor) -> bool {
    kernel::is_onto(&CAT, f)
}

fn mono(f: &FinMor) -> bool {
    kernel::is_mono(&CAT, f)
}

fn iso(f: &FinMor) -> bool {
    kernel::is_iso(&CAT, f)
}

/// Every mono into `b`, from carriers no larger than `b`.
fn monos_into(scope: &Scope, b: &FinObj) -> Vec<FinMor> {
    scope
        .objects_upto(b.len())
        .iter()
        .flat_map(|m| scope.maps(m, b))
        .filter(FinMor::is_injective)
        .collect()
}

/// Factored through some mono that is not an iso?
fn is_cover(scope: &Scope, e: &FinMor) -> bool {
    monos_into(scope, e.cod()).iter().all(|m| {
        let factors = limit_mediators(e.dom().len(), m.dom().len(), &[m], &[e]) > 0;
        !factors || iso(m)
    })
}

// Axioms.

fn c1(scope: &Scope, mut t: Tally) -> Report {
    let one = terminal();
    for x in scope.objects() {
        let n = all_maps(&x, &one).count();
        t.expect(n == 1, || Witness::new().with("object", &x).with("maps to 1", n));
    }
    t.finish()
}

fn d1(scope: &Scope, mut t: Tally) -> Report {
    let zero = initial();
    for x in scope.objects() {
        let n = all_maps(&zero, &x).count();
        t.expect(n == 1, || Witness::new().with("object", &x).with("maps from 0", n));
    }
    t.finish()
}

fn c2(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            let p = product(a, b);
            let legs = [&p.projections[0], &p.projections[1]];
            for x in &objs {
                let (fs, gs) = (scope.maps(x, a), scope.maps(x, b));
                for f in &fs {
                    for g in &gs {
                        let n = limit_mediators(x.len(), p.apex.len(), &legs, &[f, g]);
                        let h = p.pair(x, &[f.clone(), g.clone()]).expect("typed");
                        let ok = n == 1
                            && &composite(legs[0], &h) == f
                            && &composite(legs[1], &h) == g;
                        if !t.expect(ok, || {
                            Witness::new().with("A", a).with("B", b).with("f", f).with("g", g).with("mediators", n)
                        }) {
                            return t.finish();
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

fn c3(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            let maps = scope.maps(a, b);
            for f in &maps {
                for g in &maps {
                    let e = equalizer(f, g).expect("parallel");
                    let forks = composite(f, &e) == composite(g, &e);
                    if !t.expect(forks && mono(&e), || Witness::new().with("f", f).with("g", g).with("e", &e)) {
                        return t.finish();
                    }
                    for x in &objs {
                        for h in scope.maps(x, a) {
                            if composite(f, &h) != composite(g, &h) {
                                continue;
                            }
                            let n = limit_mediators(x.len(), e.dom().len(), &[&e], &[&h]);
                            if !t.expect(n == 1, || {
                                Witness::new().with("f", f).with("g", g).with("h", &h).with("mediators", n)
                            }) {
                                return t.finish();
                            }
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

fn d2(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            let s = sum(a, b);
            for x in &objs {
                let (fs, gs) = (scope.maps(a, x), scope.maps(b, x));
                for f in &fs {
                    for g in &gs {
                        let n = colimit_mediators(s.apex.len(), x.len(), &[&s.inl, &s.inr], &[f, g]);
                        let h = s.copair(f, g).expect("typed");
                        let ok =
                            n == 1 && &composite(&h, &s.inl) == f && &composite(&h, &s.inr) == g;
                        if !t.expect(ok, || {
                            Witness::new().with("A", a).with("B", b).with("f", f).with("g", g).with("mediators", n)
                        }) {
                            return t.finish();
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

fn d3(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            let maps = scope.maps(a, b);
            for f in &maps {
                for g in &maps {
                    let q = coequalizer(f, g).expect("parallel");
                    let ok = composite(&q, f) == composite(&q, g) && onto(&q);
                    if !t.expect(ok, || Witness::new().with("f", f).with("g", g).with("q", &q)) {
                        return t.finish();
                    }
                    for x in &objs {
                        for h in scope.maps(b, x) {
                            if composite(&h, f) != composite(&h, g) {
                                continue;
                            }
                            let n = colimit_mediators(q.cod().len(), x.len(), &[&q], &[&h]);
                            if !t.expect(n == 1, || {
                                Witness::new().with("f", f).with("g", g).with("h", &h).with("mediators", n)
                            }) {
                                return t.finish();
                            }
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

fn pi_axiom(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for y in &objs {
        for x in &objs {
            for i in &objs {
                for g in scope.maps(y, x) {
                    for f in scope.maps(x, i) {
                        let d = pi_diagram(&g, &f).expect("composable");
                        match check_pi_universal(&d, &g, &f) {
                            Ok(r) => t.absorb(r),
                            Err(e) => t.fail(Witness::new().with("g", &g).with("f", &f).with("error", e)),
                        }
                        if t.failed() {
                            return t.finish();
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

fn g_axiom(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            for f in scope.maps(a, b) {
                if !(onto(&f) && mono(&f)) {
                    continue;
                }
                let inv = kernel::inverse(&CAT, &f);
                if !t.expect(inv.is_some(), || Witness::new().with("f", &f)) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}

fn pa(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        let p = projective_cover(a);
        if !t.expect(onto(&p), || Witness::new().with("cover", &p)) {
            return t.finish();
        }
        let big_p = p.dom().clone();
        for b in &objs {
            for g in scope.maps(b, &big_p) {
                if !onto(&g) {
                    continue;
                }
                let id = FinMor::identity(&big_p);
                let split = all_maps(&big_p, b).any(|s| composite(&g, &s) == id);
                if !t.expect(split, || Witness::new().with("P", &big_p).with("onto g", &g)) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}

fn i_axiom(mut t: Tally) -> Report {
    let n = kernel::elements(&CAT, &initial()).len();
    t.expect(n == 0, || Witness::new().with("elements of 0", n));
    t.finish()
}

/// Every sum diagram `A → S ← B` with `S` in scope: the canonical one, and
/// every pair of maps whose copairing out of the canonical sum is iso.
pub fn sum_diagrams(scope: &Scope, a: &FinObj, b: &FinObj) -> Vec<(FinMor, FinMor)> {
    let canonical = sum(a, b);
    let mut out = vec![(canonical.inl.clone(), canonical.inr.clone())];
    for s in scope.objects() {
        if s.len() != a.len() + b.len() {
            continue;
        }
        for i in scope.maps(a, &s) {
            for j in scope.maps(b, &s) {
                if iso(&canonical.copair(&i, &j).expect("typed")) {
                    out.push((i.clone(), j));
                }
            }
        }
    }
    out
}

fn dp(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            for (i, j) in sum_diagrams(scope, a, b) {
                for z in kernel::elements(&CAT, i.cod()) {
                    let apex_i = i.dom().clone();
                    let apex_j = j.dom().clone();
                    let z1 = std::slice::from_ref(&z);
                    let inside = kernel::member(&CAT, z1, &apex_i, std::slice::from_ref(&i))
                        .expect("typed")
                        || kernel::member(&CAT, z1, &apex_j, std::slice::from_ref(&j)).expect("typed");
                    if !t.expect(inside, || {
                        Witness::new().with("i", &i).with("j", &j).with("z", z.mor())
                    }) {
                        return t.finish();
                    }
                }
            }
        }
    }
    t.finish()
}

fn nt(scope: &Scope, mut t: Tally) -> Report {
    let one = terminal();
    for (x, y) in sum_diagrams(scope, &one, &one) {
        t.expect(x != y, || Witness::new().with("x", &x).with("y", &y));
    }
    t.finish()
}

fn fct(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            for f in scope.maps(a, b) {
                let fac = image_factorization(&f);
                let ok = onto(&fac.cover) && mono(&fac.mono) && composite(&fac.mono, &fac.cover) == f;
                if !t.expect(ok, || Witness::new().with("f", &f)) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}

/// Equivalence relations on `x`, as member matrices.
fn equivalences(scope: &Scope, x: &FinObj) -> Vec<Vec<bool>> {
    let n = x.len();
    scope
        .subsets(n * n)
        .into_iter()
        .filter(|m| {
            let r = |a: usize, b: usize| m[a * n + b];
            (0..n).all(|a| r(a, a))
                && (0..n).all(|a| (0..n).all(|b| !r(a, b) || r(b, a)))
                && (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(r(a, b) && r(b, c)) || r(a, c))))
        })
        .collect()
}

fn matrix_relation(x: &FinObj, y: &FinObj, m: &[bool]) -> Relation {
    let tuples = (0..x.len())
        .flat_map(|a| (0..y.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| m[a * y.len() + b])
        .map(|(a, b)| vec![a, b])
        .collect();
    Relation::from_tuples(vec![x.clone(), y.clone()], tuples).expect("distinct tuples")
}

fn eff(scope: &Scope, mut t: Tally) -> Report {
    for x in scope.objects() {
        let n = x.len();
        for m in equivalences(scope, &x) {
            let r = matrix_relation(&x, &x, &m);
            let ok = match quotient(&r) {
                Ok(e) => (0..n).all(|a| (0..n).all(|b| m[a * n + b] == (e.apply(a) == e.apply(b)))),
                Err(_) => false,
            };
            if !t.expect(ok, || Witness::new().with("relation", r.members_string())) {
                return t.finish();
            }
        }
    }
    t.finish()
}

// Π-diagrams.

fn render_partial(x: &FinObj, y: &FinObj, psi: &[Option<usize>]) -> String {
    let body: Vec<String> = psi
        .iter()
        .enumerate()
        .filter_map(|(a, b)| b.map(|b| format!("{}↦{}", x.label(a), y.label(b))))
        .collect();
    format!("{{{}}}", body.join(", "))
}

/// Membership table of `α = (π₁, π₂, ev)` indexed by `(v, x, y)`.
fn alpha_table(d: &PiDiagram, xl: usize, yl: usize) -> Vec<bool> {
    let mut table = vec![false; d.params.len() * xl * yl];
    for t in 0..d.apex.len() {
        table[(d.pi1.apply(t) * xl + d.pi2.apply(t)) * yl + d.ev.apply(t)] = true;
    }
    table
}

/// The parameters `v` with `φ v = i` whose slice of `α` is the graph of `psi`.
pub fn matching_params(d: &PiDiagram, g: &FinMor, i: usize, psi: &[Option<usize>]) -> Vec<usize> {
    let (xl, yl) = (g.cod().len(), g.dom().len());
    let alpha = alpha_table(d, xl, yl);
    matching_in(&alpha, d, xl, yl, i, psi)
}

fn matching_in(
    alpha: &[bool],
    d: &PiDiagram,
    xl: usize,
    yl: usize,
    i: usize,
    psi: &[Option<usize>],
) -> Vec<usize> {
    (0..d.params.len())
        .filter(|&v| d.phi.apply(v) == i)
        .filter(|&v| {
            (0..xl).all(|x| (0..yl).all(|y| alpha[(v * xl + x) * yl + y] == (psi[x] == Some(y))))
        })
        .collect()
}

/// Every partial function `X ⇀ Y` as an option table.
fn partial_functions(xl: usize, yl: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![Vec::new()];
    for _ in 0..xl {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Option<usize>>| {
                std::iter::once(None).chain((0..yl).map(Some)).map(move |o| {
                    let mut p = p.clone();
                    p.push(o);
                    p
                })
            })
            .collect();
    }
    out
}

/// The element-wise universality criterion: for every `i` and every partial
/// function `ψ : X ⇀ Y` with
/// (A1) `ψ` a partial function,
/// (A2) `f x = i ⇒ ∃y (x,y) ⋿ ψ`,
/// (A3) `(x,y) ⋿ ψ ⇒ f x = i ∧ g y = x`,
/// exactly one `v` with `φ v = i` has `(v,x,y) ⋿ α ⇔ (x,y) ⋿ ψ`.
pub fn check_pi_universal(d: &PiDiagram, g: &FinMor, f: &FinMor) -> Result<Report, AxiomError> {
    if let Some(face) = d.shape_defect(g, f) {
        return Err(AxiomError::Shape(face));
    }
    let (y_obj, x_obj, i_obj) = (g.dom(), f.dom(), f.cod());
    let (xl, yl) = (x_obj.len(), y_obj.len());
    let alpha = alpha_table(d, xl, yl);
    let mut t = Tally::new("Π-universality");
    let psis = partial_functions(xl, yl);
    for i in 0..i_obj.len() {
        for psi in &psis {
            let a2 = (0..xl).all(|x| f.apply(x) != i || psi[x].is_some());
            let a3 = (0..xl).all(|x| psi[x].is_none_or(|y| f.apply(x) == i && g.apply(y) == x));
            if !(a2 && a3) {
                continue;
            }
            let vs = matching_in(&alpha, d, xl, yl, i, psi);
            let ok = t.expect(vs.len() == 1, || {
                let w = Witness::new()
                    .with("g", g)
                    .with("f", f)
                    .with("i", i_obj.label(i))
                    .with("psi", render_partial(x_obj, y_obj, psi));
                if vs.is_empty() {
                    w.with("missing v", "no parameter matches")
                } else {
                    let labels: Vec<&str> = vs.iter().map(|&v| d.params.label(v)).collect();
                    w.with("duplicate v", labels.join(", "))
                }
            });
            if !ok {
                return Ok(t.finish());
            }
        }
    }
    Ok(t.finish())
}

/// Checks that `t : F' → F` is a morphism of Π-diagrams from `source` to
/// `target`: `φ ∘ t = φ'`, and the induced `s : P' → P` has `ev ∘ s = ev'`.
pub fn pi_morphism_check(source: &PiDiagram, target: &PiDiagram, t: &FinMor) -> Report {
    let mut tally = Tally::new("Π-diagram morphism");
    let typed = t.dom() == &source.params && t.cod() == &target.params;
    if !tally.expect(typed, || Witness::new().with("t", t).with("error", "ill-typed")) {
        return tally.finish();
    }
    for v in 0..source.params.len() {
        let ok = target.phi.apply(t.apply(v)) == source.phi.apply(v);
        if !tally.expect(ok, || Witness::new().with("t", t).with("φ∘t ≠ φ' at", source.params.label(v))) {
            return tally.finish();
        }
    }
    for p in 0..source.apex.len() {
        let (v, x) = (source.pi1.apply(p), source.pi2.apply(p));
        let lifted = (0..target.apex.len())
            .find(|&q| target.pi1.apply(q) == t.apply(v) && target.pi2.apply(q) == x);
        let ok = lifted.is_some_and(|q| target.ev.apply(q) == source.ev.apply(p));
        if !tally.expect(ok, || Witness::new().with("t", t).with("ev∘s ≠ ev' at", source.apex.label(p))) {
            return tally.finish();
        }
    }
    tally.finish()
}

/// All Π-diagrams for `g, f` whose parameter object is a standard carrier of
/// size at most `max_params`.
fn competitors(g: &FinMor, f: &FinMor, max_params: usize) -> Vec<PiDiagram> {
    let mut out = Vec::new();
    for k in 0..=max_params {
        let params = FinObj::standard(k);
        for phi in all_maps(&params, f.cod()) {
            let sq = pullback(&phi, f).expect("common codomain");
            let choices: Vec<Vec<usize>> =
                (0..sq.apex.len()).map(|p| g.fiber(sq.pi2.apply(p))).collect();
            let mut tables = vec![Vec::new()];
            for c in &choices {
                tables = tables
                    .into_iter()
                    .flat_map(|t: Vec<usize>| {
                        c.iter().map(move |&y| {
                            let mut t = t.clone();
                            t.push(y);
                            t
                        })
                    })
                    .collect();
            }
            for table in tables {
                let ev = FinMor::new(sq.apex.clone(), g.dom().clone(), table).expect("in range");
                out.push(PiDiagram {
                    apex: sq.apex.clone(),
                    params: params.clone(),
                    pi1: sq.pi1.clone(),
                    pi2: sq.pi2.clone(),
                    phi: phi.clone(),
                    ev,
                });
            }
        }
    }
    out
}

/// The comparison `χ : F' → F` sending `v'` to the unique parameter whose
/// slice of `α` is the partial function `x ↦ ev'(v', x)`.
pub fn comparison(source: &PiDiagram, target: &PiDiagram, g: &FinMor) -> Option<FinMor> {
    let xl = g.cod().len();
    let alpha = alpha_table(target, xl, g.dom().len());
    let mut table = Vec::with_capacity(source.params.len());
    for v in 0..source.params.len() {
        let mut psi = vec![None; xl];
        for p in (0..source.apex.len()).filter(|&p| source.pi1.apply(p) == v) {
            psi[source.pi2.apply(p)] = Some(source.ev.apply(p));
        }
        match matching_in(&alpha, target, xl, g.dom().len(), source.phi.apply(v), &psi)[..] {
            [u] => table.push(u),
            _ => return None,
        }
    }
    FinMor::new(source.params.clone(), target.params.clone(), table).ok()
}

// Theorems.

fn tupling(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects_upto(scope.bound.min(3));
    for r in &objs {
        for x1 in &objs {
            for x2 in &objs {
                let p = product(x1, x2);
                let (ls, rs) = (scope.maps(r, x1), scope.maps(r, x2));
                for l1 in &ls {
                    for l2 in &rs {
                        let tupled = p.pair(r, &[l1.clone(), l2.clone()]).expect("typed");
                        let jm = kernel::jointly_monic(&CAT, &[l1.clone(), l2.clone()]).expect("common domain");
                        let mut ok = mono(&tupled) == jm;
                        if ok && jm {
                            ok = (0..x1.len()).all(|a| {
                                (0..x2.len()).all(|b| {
                                    let xs = [
                                        kernel::Element(FinMor::element(x1, a)),
                                        kernel::Element(FinMor::element(x2, b)),
                                    ];
                                    let pair = [kernel::Element(FinMor::element(&p.apex, p.index_of(&[a, b])))];
                                    kernel::member(&CAT, &xs, r, &[l1.clone(), l2.clone()]).expect("typed")
                                        == kernel::member(&CAT, &pair, r, std::slice::from_ref(&tupled))
                                            .expect("typed")
                                })
                            });
                        }
                        if !t.expect(ok, || Witness::new().with("r1", l1).with("r2", l2)) {
                            return t.finish();
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

fn pointwise_equality(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        let elems = kernel::elements(&CAT, a);
        for b in &objs {
            let maps = scope.maps(a, b);
            for f in &maps {
                let ok = mono(f) == f.is_injective();
                if !t.expect(ok, || Witness::new().with("f", f).with("error", "mono test disagrees")) {
                    return t.finish();
                }
                for g in &maps {
                    let agree = elems.iter().all(|x| composite(f, x.mor()) == composite(g, x.mor()));
                    if !t.expect(!agree || f == g, || Witness::new().with("f", f).with("g", g)) {
                        return t.finish();
                    }
                }
            }
        }
    }
    t.finish()
}

fn inclusion(scope: &Scope, mut t: Tally) -> Report {
    for x in scope.objects() {
        let monos: Vec<Subobject> =
            monos_into(scope, &x).into_iter().map(|m| Subobject::new(m).expect("injective")).collect();
        for m in &monos {
            for n in &monos {
                let sub = relcalc::subseteq(m, n).expect("same target");
                let le = relcalc::leq(m, n).expect("same target");
                let ok = sub == le.is_some()
                    && le.as_ref().is_none_or(|f| &composite(n.mono(), f) == m.mono());
                if !t.expect(ok, || {
                    Witness::new().with("m", m.mono()).with("n", n.mono()).with("subseteq", sub)
                }) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}

fn unique_choice(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects_upto(scope.bound.min(3));
    for x in &objs {
        for y in &objs {
            let (xl, yl) = (x.len(), y.len());
            for m in scope.subsets(xl * yl) {
                let r = matrix_relation(x, y, &m);
                let outputs = |a: usize| (0..yl).filter(|&b| m[a * yl + b]).count();
                let eq8 = (0..xl).all(|a| outputs(a) <= 1);
                let eq9 = (0..xl).all(|a| outputs(a) == 1);
                let partial = relcalc::is_partial_function(&r).expect("binary");
                let total = relcalc::is_total_function(&r).expect("binary");
                let mut ok = partial == eq8 && total == eq9;
                if ok && total {
                    ok = match relcalc::unique_choice(&r) {
                        Ok(f) => (0..xl).all(|a| (0..yl).all(|b| m[a * yl + b] == (f.apply(a) == b))),
                        Err(_) => false,
                    };
                }
                if !t.expect(ok, || Witness::new().with("relation", r.members_string())) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}

/// Eq. 10 style: every pair `(x, y)` with `f x = g y` has exactly one `t`.
fn pullback_by_elements(f: &FinMor, g: &FinMor, p: &FinMor, q: &FinMor) -> bool {
    (0..f.dom().len()).all(|x| {
        (0..g.dom().len()).all(|y| {
            let n = (0..p.dom().len()).filter(|&s| p.apply(s) == x && q.apply(s) == y).count();
            if f.apply(x) == g.apply(y) {
                n == 1
            } else {
                n == 0
            }
        })
    })
}

fn pullback_by_cones(scope: &Scope, f: &FinMor, g: &FinMor, p: &FinMor, q: &FinMor) -> bool {
    scope.objects_upto(2).iter().all(|x| {
        let ks = scope.maps(x, g.dom());
        scope.maps(x, f.dom()).iter().all(|h| {
            ks.iter().all(|k| {
                composite(f, h) != composite(g, k)
                    || limit_mediators(x.len(), p.dom().len(), &[p, q], &[h, k]) == 1
            })
        })
    })
}

fn pullback_elements(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects_upto(2);
    for a in &objs {
        for b in &objs {
            for c in &objs {
                let gs = scope.maps(b, c);
                for f in scope.maps(a, c) {
                    for g in &gs {
                        let pb = pullback(&f, g).expect("cospan");
                        let ok = pullback_by_elements(&f, g, &pb.pi1, &pb.pi2)
                            && pullback_by_cones(scope, &f, g, &pb.pi1, &pb.pi2);
                        if !t.expect(ok, || Witness::new().with("f", &f).with("g", g)) {
                            return t.finish();
                        }
                        for s in &objs {
                            for p in scope.maps(s, a) {
                                for q in scope.maps(s, b) {
                                    if composite(&f, &p) != composite(g, &q) {
                                        continue;
                                    }
                                    let by_elements = pullback_by_elements(&f, g, &p, &q);
                                    let by_cones = pullback_by_cones(scope, &f, g, &p, &q);
                                    if !t.expect(by_elements == by_cones, || {
                                        Witness::new()
                                            .with("f", &f)
                                            .with("g", g)
                                            .with("p", &p)
                                            .with("q", &q)
                                            .with("elementwise", by_elements)
                                    }) {
                                        return t.finish();
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

fn quotients(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for x in &objs {
        let n = x.len();
        for m in equivalences(scope, x) {
            let r = matrix_relation(x, x, &m);
            let Ok(q) = quotient(&r) else {
                t.fail(Witness::new().with("relation", r.members_string()).with("error", "rejected"));
                return t.finish();
            };
            let classes: std::collections::BTreeSet<Vec<bool>> =
                (0..n).map(|a| m[a * n..(a + 1) * n].to_vec()).collect();
            let ok = q.cod().len() == classes.len()
                && (0..n).all(|a| (0..n).all(|b| m[a * n + b] == (q.apply(a) == q.apply(b))));
            if !t.expect(ok, || Witness::new().with("relation", r.members_string()).with("q", &q)) {
                return t.finish();
            }
            for z in &objs {
                for h in scope.maps(x, z) {
                    let respects = (0..n).all(|a| (0..n).all(|b| !m[a * n + b] || h.apply(a) == h.apply(b)));
                    if !respects {
                        continue;
                    }
                    let k = colimit_mediators(q.cod().len(), z.len(), &[&q], &[&h]);
                    if !t.expect(k == 1, || {
                        Witness::new().with("relation", r.members_string()).with("h", &h).with("mediators", k)
                    }) {
                        return t.finish();
                    }
                }
            }
        }
    }
    t.finish()
}

/// `{0,…,k}` with the successor saturating at `k`.
fn prefix_object(k: usize) -> (FinObj, FinMor) {
    let n = FinObj::standard(k + 1);
    let s = FinMor::from_fn(n.clone(), n.clone(), |i| (i + 1).min(k));
    (n, s)
}

fn induction(scope: &Scope, mut t: Tally) -> Report {
    t.note("prefix-verified");
    for k in 0..=PREFIX {
        let (n, succ) = prefix_object(k);
        for a in scope.objects_upto(scope.bound.min(3)) {
            for b in 0..a.len() {
                let be = FinMor::element(&a, b);
                for h in scope.maps(&a, &a) {
                    let seq = nno_prefix(k, &be, &h).expect("typed");
                    let points: Vec<usize> = seq.iter().map(|e| e.point().expect("element")).collect();
                    let mut ok = seq.len() == k + 1
                        && points[0] == b
                        && (0..k).all(|i| points[i + 1] == h.apply(points[i]));
                    // Number of sequences obeying the equations, by counting.
                    let mut ways = vec![0u64; a.len()];
                    ways[b] = 1;
                    for _ in 0..k {
                        let mut next = vec![0u64; a.len()];
                        for (v, &w) in ways.iter().enumerate() {
                            next[h.apply(v)] += w;
                        }
                        ways = next;
                    }
                    ok &= ways.iter().sum::<u64>() == 1;
                    if !t.expect(ok, || Witness::new().with("prefix", k).with("b", b).with("h", &h)) {
                        return t.finish();
                    }
                }
            }
        }
        for u in scope.subsets(k + 1) {
            let closed = u[0] && (0..=k).all(|i| !u[i] || u[succ.apply(i)]);
            if !closed {
                continue;
            }
            let ok = u.iter().all(|&b| b) && replay_induction(&n, &succ, &u);
            if !t.expect(ok, || Witness::new().with("prefix", k).with("subset", format!("{u:?}"))) {
                return t.finish();
            }
        }
    }
    t.finish()
}

/// The proof's construction: pull `r` back along `S ∘ r`, invert the onto
/// mono `p`, recurse with `q ∘ p⁻¹` from the preimage of `0`, and confirm
/// `r ∘ f` is the identity on the prefix.
fn replay_induction(n: &FinObj, succ: &FinMor, u: &[bool]) -> bool {
    let members: Vec<usize> = (0..n.len()).filter(|&i| u[i]).collect();
    let r_obj = FinObj::standard(members.len());
    let r = FinMor::new(r_obj.clone(), n.clone(), members).expect("in range");
    let sq = pullback(&composite(succ, &r), &r).expect("cospan");
    let (p, q) = (sq.pi1, sq.pi2);
    if !(onto(&p) && p.is_injective()) {
        return false;
    }
    let Some(p_inv) = p.inverse() else {
        return false;
    };
    let Some(z) = (0..r_obj.len()).find(|&i| r.apply(i) == 0) else {
        return false;
    };
    let step = composite(&q, &p_inv);
    let k = n.len() - 1;
    let Ok(f) = nno_prefix(k, &FinMor::element(&r_obj, z), &step) else {
        return false;
    };
    f.iter().enumerate().all(|(i, e)| e.point().map(|v| r.apply(v)) == Ok(i.min(k)))
}

fn exponentials(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects_upto(scope.bound.min(3));
    for x in &objs {
        for y in &objs {
            let ex = exponential(x, y);
            for f in scope.maps(x, y) {
                let named: Vec<usize> = (0..ex.obj.len())
                    .filter(|&s| {
                        (0..x.len()).all(|a| relcalc::apply(&ex.eval, &[s, a]) == Ok(f.apply(a)))
                    })
                    .collect();
                let ok = named.len() == 1 && ex.name_of(&f) == Some(named[0]);
                if !t.expect(ok, || Witness::new().with("f", &f).with("names", named.len())) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}

fn dependent_choice(scope: &Scope, mut t: Tally) -> Report {
    t.note("prefix-verified");
    for x in scope.objects_upto(scope.bound.min(3)) {
        let n = x.len();
        for m in scope.subsets(n * n) {
            let entire = (0..n).all(|a| (0..n).any(|b| m[a * n + b]));
            if !entire {
                continue;
            }
            let r = matrix_relation(&x, &x, &m);
            let p = projective_cover(&x);
            let (r1, r2) = (&r.legs()[0], &r.legs()[1]);
            // P is a choice object, so the onto leg r₁ splits over it.
            let id = FinMor::identity(p.dom());
            let sigma = all_maps(p.dom(), r.apex()).find(|s| composite(&composite(r1, s), &id) == p);
            let Some(sigma) = sigma else {
                t.fail(Witness::new().with("relation", r.members_string()).with("error", "no section"));
                return t.finish();
            };
            let g = composite(r2, &sigma);
            for start in 0..n {
                let chain = nno_prefix(PREFIX, &FinMor::element(&x, start), &g).expect("typed");
                let pts: Vec<usize> = chain.iter().map(|e| p.apply(e.point().expect("element"))).collect();
                let ok = pts[0] == start && (0..PREFIX).all(|i| m[pts[i] * n + pts[i + 1]]);
                if !t.expect(ok, || {
                    Witness::new().with("relation", r.members_string()).with("start", x.label(start))
                }) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}

fn onto_pullback(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            for c in &objs {
                let gs = scope.maps(b, c);
                for f in scope.maps(a, c).into_iter().filter(onto) {
                    for g in &gs {
                        let pb = pullback(&f, g).expect("cospan");
                        if !t.expect(onto(&pb.pi2), || Witness::new().with("f", &f).with("g", g)) {
                            return t.finish();
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

fn images(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            let monos = monos_into(scope, b);
            for f in scope.maps(a, b) {
                let fac = image_factorization(&f);
                let image = Subobject::new(fac.mono.clone()).expect("mono");
                let mut ok = composite(&fac.mono, &fac.cover) == f && is_cover(scope, &fac.cover);
                for n in &monos {
                    if !ok {
                        break;
                    }
                    let through = limit_mediators(a.len(), n.dom().len(), &[n], &[&f]) > 0;
                    if through {
                        let n_sub = Subobject::new(n.clone()).expect("mono");
                        ok = relcalc::leq(&image, &n_sub).expect("same target").is_some();
                    }
                }
                if !t.expect(ok, || Witness::new().with("f", &f)) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}

fn covers(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            for e in scope.maps(a, b) {
                let (o, c) = (onto(&e), is_cover(scope, &e));
                if !t.expect(o == c, || Witness::new().with("e", &e).with("onto", o).with("cover", c)) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}

fn regular(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for c in &objs {
            for e in scope.maps(a, c) {
                if !is_cover(scope, &e) {
                    continue;
                }
                // The terminal object is projective.
                for x in 0..c.len() {
                    let lifts = (0..a.len()).any(|y| e.apply(y) == x);
                    if !t.expect(lifts, || Witness::new().with("cover", &e).with("element", c.label(x))) {
                        return t.finish();
                    }
                }
                // Covers are stable under pullback.
                for b in &objs {
                    for g in scope.maps(b, c) {
                        let pb = pullback(&e, &g).expect("cospan");
                        if !t.expect(is_cover(scope, &pb.pi2), || Witness::new().with("cover", &e).with("g", &g)) {
                            return t.finish();
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

fn balance(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            for f in scope.maps(a, b) {
                let epi = kernel::is_epi(&CAT, &f);
                let ok = !epi || (onto(&f) && (!mono(&f) || iso(&f)));
                if !t.expect(ok, || Witness::new().with("f", &f)) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}

fn pretopos(scope: &Scope, mut t: Tally) -> Report {
    t.absorb(eff(scope, Tally::new("effective equivalence relations")));
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            let s = sum(a, b);
            let disjoint = pullback(&s.inl, &s.inr).expect("cospan").apex.is_empty();
            if !t.expect(disjoint, || Witness::new().with("A", a).with("B", b)) {
                return t.finish();
            }
            for z in &objs {
                for g in scope.maps(z, &s.apex) {
                    let left = pullback(&s.inl, &g).expect("cospan").pi2;
                    let right = pullback(&s.inr, &g).expect("cospan").pi2;
                    let pulled = sum(left.dom(), right.dom());
                    let k = pulled.copair(&left, &right).expect("typed");
                    if !t.expect(iso(&k), || Witness::new().with("A", a).with("B", b).with("g", &g)) {
                        return t.finish();
                    }
                }
            }
        }
    }
    for a in &objs {
        for b in &objs {
            for e in scope.maps(a, b).into_iter().filter(onto) {
                let kp = pullback(&e, &e).expect("cospan");
                let q = coequalizer(&kp.pi1, &kp.pi2).expect("parallel");
                let mut table = vec![None; q.cod().len()];
                let mut ok = true;
                for x in 0..a.len() {
                    let slot = &mut table[q.apply(x)];
                    ok &= slot.replace(e.apply(x)).is_none_or(|prev| prev == e.apply(x));
                }
                if ok {
                    let k = FinMor::new(q.cod().clone(), b.clone(), table.into_iter().map(|v| v.unwrap_or(0)).collect())
                        .expect("in range");
                    ok = iso(&k);
                }
                if !t.expect(ok, || Witness::new().with("onto e", &e).with("error", "not the coequalizer of its kernel pair")) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}

fn classifier(scope: &Scope, mut t: Tally) -> Report {
    let two = truth_values();
    let ok = two.apex.len() == 2 && two.inr.apply(0) == TRUE && two.inl.apply(0) != TRUE;
    if !t.expect(ok, || Witness::new().with("error", "2 is not 1 + 1 with t the second injection")) {
        return t.finish();
    }
    for x in scope.objects() {
        let maps_to_two = all_maps(&x, &two.apex).collect::<Vec<_>>();
        for u in scope.subsets(x.len()) {
            let tuples = (0..x.len()).filter(|&i| u[i]).map(|i| vec![i]).collect();
            let r = Relation::from_tuples(vec![x.clone()], tuples).expect("distinct");
            let chi = characteristic(&r).expect("unary");
            let law = |c: &FinMor| (0..x.len()).all(|i| r.contains(&[i]) == (c.apply(i) == TRUE));
            let unique = maps_to_two.iter().filter(|c| law(c)).count();
            if !t.expect(law(&chi) && unique == 1, || {
                Witness::new().with("relation", r.members_string()).with("classifying maps", unique)
            }) {
                return t.finish();
            }
        }
    }
    t.finish()
}

fn pi_mono(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for y in &objs {
        for x in &objs {
            for i in &objs {
                for g in scope.maps(y, x).into_iter().filter(FinMor::is_injective) {
                    for f in scope.maps(x, i) {
                        let d = pi_diagram(&g, &f).expect("composable");
                        if !t.expect(mono(&d.phi), || Witness::new().with("g", &g).with("f", &f)) {
                            return t.finish();
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

fn pi_round_trip(scope: &Scope, mut t: Tally) -> Report {
    let small = scope.bound.min(2);
    t.note(format!("diagrams over carriers ≤ {small}, competitors with |F'| ≤ 3"));
    let objs = scope.objects_upto(small);
    for y in &objs {
        for x in &objs {
            for i in &objs {
                for g in scope.maps(y, x) {
                    for f in scope.maps(x, i) {
                        let d = pi_diagram(&g, &f).expect("composable");
                        match check_pi_universal(&d, &g, &f) {
                            Ok(r) => t.absorb(r),
                            Err(e) => t.fail(Witness::new().with("error", e)),
                        }
                        if t.failed() {
                            return t.finish();
                        }
                        for c in competitors(&g, &f, 3) {
                            let count = morphism_count(&c, &d);
                            let chi = comparison(&c, &d, &g);
                            let ok = count == 1
                                && chi.as_ref().is_some_and(|chi| pi_morphism_check(&c, &d, chi).passed());
                            if !t.expect(ok, || {
                                Witness::new().with("g", &g).with("f", &f).with("φ'", &c.phi).with("ev'", &c.ev).with("morphisms", count)
                            }) {
                                return t.finish();
                            }
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

/// Number of Π-diagram morphisms `source → target`, counted pointwise.
fn morphism_count(source: &PiDiagram, target: &PiDiagram) -> u64 {
    (0..source.params.len()).fold(1u64, |acc, v| {
        let admissible = (0..target.params.len())
            .filter(|&u| target.phi.apply(u) == source.phi.apply(v))
            .filter(|&u| {
                (0..source.apex.len()).filter(|&p| source.pi1.apply(p) == v).all(|p| {
                    let x = source.pi2.apply(p);
                    (0..target.apex.len())
                        .find(|&q| target.pi1.apply(q) == u && target.pi2.apply(q) == x)
                        .is_some_and(|q| target.ev.apply(q) == source.ev.apply(p))
                })
            })
            .count();
        acc.saturating_mul(admissible as u64)
    })
}

fn lawvere_choice(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in objs.iter().filter(|a| !a.is_empty()) {
        for b in &objs {
            for f in scope.maps(a, b) {
                let ok = all_maps(b, a).any(|g| composite(&f, &composite(&g, &f)) == f);
                if !t.expect(ok, || Witness::new().with("f", &f)) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}

fn choice(scope: &Scope, mut t: Tally) -> Report {
    let objs = scope.objects();
    for a in &objs {
        for b in &objs {
            for f in scope.maps(a, b).into_iter().filter(onto) {
                let id = FinMor::identity(b);
                let ok = all_maps(b, a).any(|s| composite(&f, &s) == id);
                if !t.expect(ok, || Witness::new().with("onto f", &f)) {
                    return t.finish();
                }
            }
        }
    }
    t.finish()
}
