//! Relations as jointly monic families of mappings, the two inclusion orders
//! on subobjects, and the function-like relations.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::finset::{self, all_maps, FinMor, FinObj};
use crate::kernel::Element;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelError {
    #[error("leg {0} does not start at the relation's apex")]
    Domain(usize),
    #[error("legs are not jointly monic: apex elements {first:?} and {second:?} have the same image")]
    NotJointlyMonic { first: String, second: String },
    #[error("relation has arity {got}, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("relations live over different objects")]
    TargetMismatch,
    #[error("leg {0} is not mono")]
    NotMono(usize),
    #[error("element {index} out of range for {object}")]
    Element { index: usize, object: String },
    #[error("{0:?} is not a permutation")]
    Permutation(Vec<usize>),
    #[error("no value for {0}")]
    NoValue(String),
    #[error("several values for {0}")]
    ManyValues(String),
    #[error("relation is not a total function")]
    NotTotal,
    #[error("mappings are not parallel")]
    NotParallel,
}

/// `(r₁,…,rₙ) : R ↣ (X₁,…,Xₙ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    apex: FinObj,
    legs: Vec<FinMor>,
    cods: Vec<FinObj>,
}

impl Relation {
    /// Validates that every leg starts at `apex` and that the legs are jointly
    /// monic, i.e. distinct apex elements have distinct image tuples.
    pub fn new(apex: FinObj, legs: Vec<FinMor>) -> Result<Self, RelError> {
        if let Some(k) = legs.iter().position(|l| l.dom() != &apex) {
            return Err(RelError::Domain(k));
        }
        let mut seen = std::collections::HashMap::with_capacity(apex.len());
        for a in 0..apex.len() {
            let image: Vec<usize> = legs.iter().map(|l| l.apply(a)).collect();
            if let Some(prev) = seen.insert(image, a) {
                return Err(RelError::NotJointlyMonic {
                    first: apex.label(prev).to_string(),
                    second: apex.label(a).to_string(),
                });
            }
        }
        let cods = legs.iter().map(|l| l.cod().clone()).collect();
        Ok(Relation { apex, legs, cods })
    }

    /// The relation on `cods` whose members are exactly `tuples`. Repeated
    /// tuples are rejected as a failure of joint monicity.
    pub fn from_tuples(cods: Vec<FinObj>, tuples: Vec<Vec<usize>>) -> Result<Self, RelError> {
        for t in &tuples {
            if t.len() != cods.len() {
                return Err(RelError::Arity { expected: cods.len(), got: t.len() });
            }
            if let Some((&index, x)) = t.iter().zip(&cods).find(|(&i, x)| i >= x.len()) {
                return Err(RelError::Element { index, object: x.to_string() });
            }
        }
        let label = |t: &Vec<usize>| {
            let parts: Vec<&str> = t.iter().zip(&cods).map(|(&i, x)| x.label(i)).collect();
            match parts.as_slice() {
                [single] => single.to_string(),
                _ => format!("({})", parts.join(",")),
            }
        };
        let mut labels: Vec<String> = Vec::with_capacity(tuples.len());
        let mut seen = HashSet::new();
        for t in &tuples {
            let l = label(t);
            if !seen.insert(t.clone()) {
                return Err(RelError::NotJointlyMonic { first: l.clone(), second: l });
            }
            labels.push(l);
        }
        // Tuples are distinct, so labels built from distinct atoms are too;
        // fall back to positions when atom labels themselves collide.
        let apex = FinObj::new(labels.clone())
            .or_else(|_| FinObj::new((0..tuples.len()).map(|i| format!("#{i}"))))
            .expect("positional labels are distinct");
        let legs = cods
            .iter()
            .enumerate()
            .map(|(k, x)| FinMor::from_fn(apex.clone(), x.clone(), |a| tuples[a][k]))
            .collect();
        Relation::new(apex, legs)
    }

    /// A relation of arity zero: valid when the apex has at most one element.
    pub fn nullary(apex: FinObj) -> Result<Self, RelError> {
        Relation::new(apex, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.legs.len()
    }

    pub fn apex(&self) -> &FinObj {
        &self.apex
    }

    pub fn legs(&self) -> &[FinMor] {
        &self.legs
    }

    pub fn cods(&self) -> &[FinObj] {
        &self.cods
    }

    pub fn image_of(&self, a: usize) -> Vec<usize> {
        self.legs.iter().map(|l| l.apply(a)).collect()
    }

    /// Index-level membership.
    pub fn contains(&self, tuple: &[usize]) -> bool {
        tuple.len() == self.legs.len()
            && (0..self.apex.len())
                .any(|a| self.legs.iter().zip(tuple).all(|(l, &x)| l.apply(a) == x))
    }

    /// All member tuples, sorted.
    pub fn members(&self) -> BTreeSet<Vec<usize>> {
        (0..self.apex.len()).map(|a| self.image_of(a)).collect()
    }

    /// `(x₁,…,xₙ) ⋿ r` for elements given as mappings out of `1`.
    pub fn member(&self, xs: &[Element<FinMor>]) -> Result<bool, RelError> {
        if xs.len() != self.arity() {
            return Err(RelError::Arity { expected: self.arity(), got: xs.len() });
        }
        let mut tuple = Vec::with_capacity(xs.len());
        for (x, c) in xs.iter().zip(&self.cods) {
            if x.mor().cod() != c {
                return Err(RelError::TargetMismatch);
            }
            let p = x.mor().point().map_err(|_| RelError::TargetMismatch)?;
            tuple.push(p);
        }
        Ok(self.contains(&tuple))
    }

    /// Renders the members with labels, e.g. `{(a,u), (b,v)}`.
    pub fn members_string(&self) -> String {
        let body: Vec<String> = self
            .members()
            .iter()
            .map(|t| {
                let parts: Vec<&str> =
                    t.iter().zip(&self.cods).map(|(&i, x)| x.label(i)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        format!("{{{}}}", body.join(", "))
    }
}

/// Builds a relation from legs sharing a domain.
pub fn make_relation(legs: Vec<FinMor>) -> Result<Relation, RelError> {
    let apex = legs.first().ok_or(RelError::Arity { expected: 1, got: 0 })?.dom().clone();
    Relation::new(apex, legs)
}

/// A mono `m : M ↣ X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subobject(Relation);

impl Subobject {
    pub fn new(m: FinMor) -> Result<Self, RelError> {
        if !m.is_injective() {
            return Err(RelError::NotMono(0));
        }
        Ok(Subobject(make_relation(vec![m])?))
    }

    pub fn from_relation(r: Relation) -> Result<Self, RelError> {
        if r.arity() != 1 {
            return Err(RelError::Arity { expected: 1, got: r.arity() });
        }
        Ok(Subobject(r))
    }

    pub fn mono(&self) -> &FinMor {
        &self.0.legs[0]
    }

    pub fn target(&self) -> &FinObj {
        &self.0.cods[0]
    }

    pub fn relation(&self) -> &Relation {
        &self.0
    }
}

/// Element-wise inclusion: every member of `m` is a member of `n`.
pub fn subseteq(m: &Subobject, n: &Subobject) -> Result<bool, RelError> {
    if m.target() != n.target() {
        return Err(RelError::TargetMismatch);
    }
    let x = m.target();
    Ok((0..x.len()).all(|i| !m.0.contains(&[i]) || n.0.contains(&[i])))
}

/// Categorical inclusion: some `f : M → N` with `m = n ∘ f`, found by
/// searching the whole hom-set.
pub fn leq(m: &Subobject, n: &Subobject) -> Result<Option<FinMor>, RelError> {
    if m.target() != n.target() {
        return Err(RelError::TargetMismatch);
    }
    let (mm, nn) = (m.mono(), n.mono());
    Ok(all_maps(mm.dom(), nn.dom()).find(|f| nn.after(f).as_ref() == Ok(mm)))
}

/// A binary relation whose first leg is mono.
pub fn is_partial_function(r: &Relation) -> Result<bool, RelError> {
    if r.arity() != 2 {
        return Err(RelError::Arity { expected: 2, got: r.arity() });
    }
    Ok(r.legs[0].is_injective())
}

/// A binary relation whose first leg is iso.
pub fn is_total_function(r: &Relation) -> Result<bool, RelError> {
    if r.arity() != 2 {
        return Err(RelError::Arity { expected: 2, got: r.arity() });
    }
    Ok(r.legs[0].is_bijective())
}

/// Reads off `f = r₂ ∘ r₁⁻¹` once every `x` has exactly one partner.
pub fn unique_choice(r: &Relation) -> Result<FinMor, RelError> {
    if r.arity() != 2 {
        return Err(RelError::Arity { expected: 2, got: r.arity() });
    }
    let x = &r.cods[0];
    for i in 0..x.len() {
        let partners = r.legs[0].fiber(i).len();
        match partners {
            0 => return Err(RelError::NoValue(x.label(i).to_string())),
            1 => {}
            _ => return Err(RelError::ManyValues(x.label(i).to_string())),
        }
    }
    let inv = r.legs[0].inverse().expect("first leg is a bijection");
    Ok(r.legs[1].after(&inv).expect("legs share the apex"))
}

/// How to re-index a relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reindex {
    /// Adds a trailing variable ranging over the object.
    Weaken(FinObj),
    /// `r_σ = (r_σ(1),…,r_σ(n))`, zero-indexed.
    Permute(Vec<usize>),
}

pub fn reindex(r: &Relation, how: &Reindex) -> Result<Relation, RelError> {
    match how {
        Reindex::Weaken(y) => {
            let p = finset::product(&r.apex, y);
            let mut legs: Vec<FinMor> = r
                .legs
                .iter()
                .map(|l| l.after(&p.projections[0]).expect("leg starts at the apex"))
                .collect();
            legs.push(p.projections[1].clone());
            Relation::new(p.apex, legs)
        }
        Reindex::Permute(sigma) => {
            let n = r.arity();
            let mut seen = vec![false; n];
            let valid = sigma.len() == n
                && sigma.iter().all(|&s| s < n && !std::mem::replace(&mut seen[s], true));
            if !valid {
                return Err(RelError::Permutation(sigma.clone()));
            }
            Relation::new(r.apex.clone(), sigma.iter().map(|&s| r.legs[s].clone()).collect())
        }
    }
}

/// The relations available without any logic.
#[derive(Debug, Clone)]
pub enum Atomic<'a> {
    True(&'a FinObj),
    False(&'a FinObj),
    Equalizer(&'a FinMor, &'a FinMor),
}

pub fn atomic_relation(kind: Atomic<'_>) -> Result<Relation, RelError> {
    match kind {
        Atomic::True(x) => make_relation(vec![FinMor::identity(x)]),
        Atomic::False(x) => make_relation(vec![finset::from_initial(x)]),
        Atomic::Equalizer(g, h) => {
            let e = finset::equalizer(g, h).map_err(|_| RelError::NotParallel)?;
            make_relation(vec![e])
        }
    }
}

/// Whether the first `arity - 1` legs form a product diagram, checked by
/// counting: the tuple map into the product is a bijection.
fn is_total_of_n(f: &Relation) -> bool {
    let n = f.arity().saturating_sub(1);
    let expected: usize = f.cods[..n].iter().map(FinObj::len).product();
    let args: HashSet<Vec<usize>> =
        (0..f.apex.len()).map(|a| f.image_of(a)[..n].to_vec()).collect();
    f.arity() >= 1 && f.apex.len() == expected && args.len() == expected
}

/// `f(x₁,…,xₙ)` for a total function of `n` variables.
pub fn apply(f: &Relation, xs: &[usize]) -> Result<usize, RelError> {
    if f.arity() != xs.len() + 1 {
        return Err(RelError::Arity { expected: f.arity().saturating_sub(1), got: xs.len() });
    }
    if !is_total_of_n(f) {
        return Err(RelError::NotTotal);
    }
    for (&x, c) in xs.iter().zip(&f.cods) {
        if x >= c.len() {
            return Err(RelError::Element { index: x, object: c.to_string() });
        }
    }
    let a = (0..f.apex.len())
        .find(|&a| f.legs[..xs.len()].iter().zip(xs).all(|(l, &x)| l.apply(a) == x))
        .expect("argument tuples are exhausted by a product diagram");
    Ok(f.legs[xs.len()].apply(a))
}
