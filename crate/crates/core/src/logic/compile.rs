//! Compilation of formulas into subobjects of the context product.
//!
//! A formula over `x₁:X₁, …, xₙ:Xₙ` becomes a mono into the canonical
//! product `C = X₁ × … × Xₙ`:
//!
//! - `true` is the identity on `C` and `false` the map out of the initial object;
//! - `s = t` is the equalizer of the two term maps `C → S`;
//! - `r(t₁,…,tₖ)` is the pullback of the tupled relation along `⟨t₁,…,tₖ⟩`;
//! - `a /\ b` is the pullback of the two monos;
//! - `a \/ b` is the image of the copairing out of their sum;
//! - `a => b` is the Π-diagram for `Q → A ↣ C`, where `Q` is `a /\ b` inside `A`;
//! - `forall y:Y. b` is the Π-diagram for `M ↣ C × Y → C`;
//! - `exists y:Y. b` is the image of `M ↣ C × Y → C`.

use std::fmt;

use crate::finset::{
    self, image_factorization, pi_diagram, product, product_n, pullback, FinMor, ProductDiagram,
};
use crate::relcalc::Relation;

use super::{check, Context, Formula, LogicError, Signature, Term};

/// One universal construction invoked during compilation, in post-order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    Truth,
    Falsity,
    Equalizer,
    /// Pullback of the named relation along its argument terms.
    Substitution(String),
    Pullback,
    Sum,
    Image,
    Product,
    Pi,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Truth => f.write_str("identity"),
            Step::Falsity => f.write_str("initial"),
            Step::Equalizer => f.write_str("equalizer"),
            Step::Substitution(r) => write!(f, "substitution({r})"),
            Step::Pullback => f.write_str("pullback"),
            Step::Sum => f.write_str("sum"),
            Step::Image => f.write_str("image"),
            Step::Product => f.write_str("product"),
            Step::Pi => f.write_str("pi"),
        }
    }
}

/// Deliberate defects in single rules, for checking that verification notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mutation {
    OrAsAnd,
    ImpliesIgnoresAntecedent,
    ForallAsExists,
    EqAsTrue,
}

impl Mutation {
    pub const ALL: [Mutation; 4] = [
        Mutation::OrAsAnd,
        Mutation::ImpliesIgnoresAntecedent,
        Mutation::ForallAsExists,
        Mutation::EqAsTrue,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilationResult {
    /// The compiled relation on the context objects.
    pub relation: Relation,
    /// The same subobject as a mono into the canonical context product.
    pub subobject: FinMor,
    pub trace: Vec<Step>,
}

impl CompilationResult {
    pub fn trace_string(&self) -> String {
        let steps: Vec<String> = self.trace.iter().map(ToString::to_string).collect();
        steps.join(" ")
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Compiler<'a> {
    sig: &'a Signature,
    mutation: Option<Mutation>,
}

impl<'a> Compiler<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Compiler { sig, mutation: None }
    }

    pub fn with_mutation(mut self, m: Mutation) -> Self {
        self.mutation = Some(m);
        self
    }

    pub fn signature(&self) -> &'a Signature {
        self.sig
    }

    pub fn compile(&self, ctx: &Context, phi: &Formula) -> Result<CompilationResult, LogicError> {
        check(self.sig, ctx, phi)?;
        let mut ctx = ctx.clone();
        let prod = product_n(ctx.objects());
        let mut trace = Vec::new();
        let m = self.mono(&mut ctx, &prod, phi, &mut trace);
        let relation = if prod.projections.is_empty() {
            Relation::nullary(m.dom().clone())
        } else {
            Relation::new(
                m.dom().clone(),
                prod.projections.iter().map(|p| p.after(&m).expect("m lands in C")).collect(),
            )
        }
        .expect("monos into a product give jointly monic legs");
        Ok(CompilationResult { relation, subobject: m, trace })
    }

    fn term(&self, ctx: &Context, prod: &ProductDiagram, t: &Term) -> FinMor {
        match t {
            Term::Var(v) => {
                let k = ctx.index_of(v).expect("type-checked");
                prod.projections[k].clone()
            }
            Term::App(f, arg) => {
                let decl = self.sig.morphism(f, 0).expect("type-checked");
                decl.mor.after(&self.term(ctx, prod, arg)).expect("type-checked")
            }
        }
    }

    fn mono(
        &self,
        ctx: &mut Context,
        prod: &ProductDiagram,
        phi: &Formula,
        trace: &mut Vec<Step>,
    ) -> FinMor {
        let c = &prod.apex;
        match phi {
            Formula::True => {
                trace.push(Step::Truth);
                FinMor::identity(c)
            }
            Formula::False => {
                trace.push(Step::Falsity);
                finset::from_initial(c)
            }
            Formula::Eq(s, t) => {
                if self.mutation == Some(Mutation::EqAsTrue) {
                    trace.push(Step::Truth);
                    return FinMor::identity(c);
                }
                trace.push(Step::Equalizer);
                let (s, t) = (self.term(ctx, prod, s), self.term(ctx, prod, t));
                finset::equalizer(&s, &t).expect("terms of one sort are parallel")
            }
            Formula::Atom(r, args) => {
                trace.push(Step::Substitution(r.clone()));
                let decl = self.sig.relation(r, 0).expect("type-checked");
                let target = product_n(decl.rel.cods());
                let apex = decl.rel.apex();
                let tupled = target.pair(apex, decl.rel.legs()).expect("legs match cods");
                let terms: Vec<FinMor> = args.iter().map(|t| self.term(ctx, prod, t)).collect();
                let tau = target.pair(c, &terms).expect("terms match sorts");
                pullback(&tau, &tupled).expect("common codomain").pi1
            }
            Formula::And(a, b) => {
                let ma = self.mono(ctx, prod, a, trace);
                let mb = self.mono(ctx, prod, b, trace);
                trace.push(Step::Pullback);
                meet(&ma, &mb)
            }
            Formula::Or(a, b) => {
                let ma = self.mono(ctx, prod, a, trace);
                let mb = self.mono(ctx, prod, b, trace);
                if self.mutation == Some(Mutation::OrAsAnd) {
                    trace.push(Step::Pullback);
                    return meet(&ma, &mb);
                }
                trace.push(Step::Sum);
                let s = finset::sum(ma.dom(), mb.dom());
                let v = s.copair(&ma, &mb).expect("both land in C");
                trace.push(Step::Image);
                image_factorization(&v).mono
            }
            Formula::Implies(a, b) => {
                let ma = self.mono(ctx, prod, a, trace);
                let mb = self.mono(ctx, prod, b, trace);
                if self.mutation == Some(Mutation::ImpliesIgnoresAntecedent) {
                    return mb;
                }
                trace.push(Step::Pullback);
                let q = pullback(&ma, &mb).expect("both land in C");
                trace.push(Step::Pi);
                pi_diagram(&q.pi1, &ma).expect("Q → A → C composes").phi
            }
            Formula::Forall(v, s, body) | Formula::Exists(v, s, body) => {
                ctx.push(self.sig, v, s, 0).expect("type-checked");
                let inner = product_n(ctx.objects());
                let m = self.mono(ctx, &inner, body, trace);
                ctx.pop();
                let n = prod.projections.len();
                let rho = prod
                    .pair(&inner.apex, &inner.projections[..n])
                    .expect("leading projections land in the factors");
                let rho_m = rho.after(&m).expect("m lands in the extended product");
                let universal = matches!(phi, Formula::Forall(..))
                    && self.mutation != Some(Mutation::ForallAsExists);
                if universal {
                    trace.push(Step::Product);
                    let y = &inner.factors()[n];
                    let u = product(c, y);
                    let last = inner.projections[n].after(&m).expect("m lands in the extended product");
                    let m2 = u.pair(m.dom(), &[rho_m, last]).expect("components match factors");
                    trace.push(Step::Pi);
                    pi_diagram(&m2, &u.projections[0]).expect("M → C×Y → C composes").phi
                } else {
                    trace.push(Step::Image);
                    image_factorization(&rho_m).mono
                }
            }
        }
    }
}

/// The diagonal of the pullback of two monos into one object.
fn meet(a: &FinMor, b: &FinMor) -> FinMor {
    let sq = pullback(a, b).expect("both land in C");
    a.after(&sq.pi1).expect("π₁ lands in A")
}

/// Compiles with the faithful rules.
pub fn compile(
    sig: &Signature,
    ctx: &Context,
    phi: &Formula,
) -> Result<CompilationResult, LogicError> {
    Compiler::new(sig).compile(ctx, phi)
}
