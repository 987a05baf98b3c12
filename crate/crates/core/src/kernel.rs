//! The three-sorted signature of a category: objects, mappings and composable
//! pairs, together with the element-level notions (elements, membership,
//! monos, onto maps) that every model shares.
//!
//! Composable pairs are not stored. Any pair whose domain and codomain match
//! is composable, and the pair is determined by its two components.

use std::fmt::Debug;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("cannot compose {g} after {f}: codomain of {f} is not the domain of {g}")]
    Composition { g: String, f: String },
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("mappings {0} and {1} do not share a domain")]
    DomainMismatch(String, String),
    #[error("expected {expected} elements, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("element {element} does not lie in {object}")]
    ElementType { element: String, object: String },
}

/// A category presented by its signature. The hom-sets must be finite and
/// enumerable so that the cancellation properties can be decided.
pub trait Category {
    type Obj: Clone + Eq + Debug;
    type Mor: Clone + Eq + Debug;

    fn dom(&self, f: &Self::Mor) -> Self::Obj;
    fn cod(&self, f: &Self::Mor) -> Self::Obj;
    fn contains(&self, a: &Self::Obj) -> bool;
    fn identity(&self, a: &Self::Obj) -> Result<Self::Mor, KernelError>;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, KernelError>;
    /// Every mapping `a → b`, in a fixed order.
    fn hom(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor>;
    fn terminal(&self) -> Option<Self::Obj>;
    /// Test objects used as the sources of parallel pairs when deciding
    /// cancellation properties.
    fn probes(&self) -> Vec<Self::Obj>;
}

/// A mapping out of the terminal object.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element<M>(pub M);

impl<M> Element<M> {
    pub fn mor(&self) -> &M {
        &self.0
    }

    pub fn into_mor(self) -> M {
        self.0
    }
}

pub fn compose<C: Category>(cat: &C, g: &C::Mor, f: &C::Mor) -> Result<C::Mor, KernelError> {
    cat.compose(g, f)
}

pub fn identity<C: Category>(cat: &C, a: &C::Obj) -> Result<C::Mor, KernelError> {
    if !cat.contains(a) {
        return Err(KernelError::UnknownObject(format!("{a:?}")));
    }
    cat.identity(a)
}

/// All elements `1 → a` in hom-set order. Empty when the category has no
/// terminal object.
pub fn elements<C: Category>(cat: &C, a: &C::Obj) -> Vec<Element<C::Mor>> {
    match cat.terminal() {
        Some(one) => cat.hom(&one, a).into_iter().map(Element).collect(),
        None => Vec::new(),
    }
}

/// Left cancellation against every parallel pair out of the probe objects.
pub fn is_mono<C: Category>(cat: &C, f: &C::Mor) -> bool {
    jointly_monic(cat, std::slice::from_ref(f)).unwrap_or(false)
}

/// Every element of the codomain factors through `f`.
pub fn is_onto<C: Category>(cat: &C, f: &C::Mor) -> bool {
    let sources = elements(cat, &cat.dom(f));
    elements(cat, &cat.cod(f)).iter().all(|y| {
        sources
            .iter()
            .any(|x| cat.compose(f, x.mor()).map(|fx| &fx == y.mor()).unwrap_or(false))
    })
}

/// Right cancellation against every parallel pair into the probe objects.
pub fn is_epi<C: Category>(cat: &C, f: &C::Mor) -> bool {
    let cod = cat.cod(f);
    cat.probes().iter().all(|u| {
        let maps = cat.hom(&cod, u);
        maps.iter().enumerate().all(|(n, h)| {
            maps[n + 1..].iter().all(|k| {
                let hf = cat.compose(h, f);
                let kf = cat.compose(k, f);
                hf != kf
            })
        })
    })
}

pub fn is_iso<C: Category>(cat: &C, f: &C::Mor) -> bool {
    inverse(cat, f).is_some()
}

/// Searches the hom-set for a two-sided inverse.
pub fn inverse<C: Category>(cat: &C, f: &C::Mor) -> Option<C::Mor> {
    let (a, b) = (cat.dom(f), cat.cod(f));
    let id_a = cat.identity(&a).ok()?;
    let id_b = cat.identity(&b).ok()?;
    cat.hom(&b, &a).into_iter().find(|g| {
        cat.compose(g, f).ok().as_ref() == Some(&id_a)
            && cat.compose(f, g).ok().as_ref() == Some(&id_b)
    })
}

/// Decides joint monicity by cancellation. The empty family is jointly monic
/// exactly when the unique map `R → 1` is mono, which needs the common domain
/// and is handled by [`jointly_monic_at`].
pub fn jointly_monic<C: Category>(cat: &C, rs: &[C::Mor]) -> Result<bool, KernelError> {
    let Some(first) = rs.first() else {
        return Ok(true);
    };
    jointly_monic_at(cat, &cat.dom(first), rs)
}

pub fn jointly_monic_at<C: Category>(
    cat: &C,
    apex: &C::Obj,
    rs: &[C::Mor],
) -> Result<bool, KernelError> {
    for r in rs {
        if &cat.dom(r) != apex {
            return Err(KernelError::DomainMismatch(format!("{apex:?}"), format!("{r:?}")));
        }
    }
    for u in cat.probes() {
        let maps = cat.hom(&u, apex);
        for (n, f) in maps.iter().enumerate() {
            for g in &maps[n + 1..] {
                let equalized = rs.iter().all(|r| cat.compose(r, f) == cat.compose(r, g));
                if equalized {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `xs ⋿ (m₁,…,mₙ)`: some element `a` of the common domain has `mᵢ a = xᵢ`.
pub fn member<C: Category>(
    cat: &C,
    xs: &[Element<C::Mor>],
    apex: &C::Obj,
    legs: &[C::Mor],
) -> Result<bool, KernelError> {
    if xs.len() != legs.len() {
        return Err(KernelError::Arity { expected: legs.len(), got: xs.len() });
    }
    for (x, m) in xs.iter().zip(legs) {
        if cat.cod(x.mor()) != cat.cod(m) {
            return Err(KernelError::ElementType {
                element: format!("{:?}", x.mor()),
                object: format!("{:?}", cat.cod(m)),
            });
        }
    }
    Ok(elements(cat, apex).iter().any(|a| {
        xs.iter()
            .zip(legs)
            .all(|(x, m)| cat.compose(m, a.mor()).ok().as_ref() == Some(x.mor()))
    }))
}
