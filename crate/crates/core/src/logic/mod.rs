//! The first-order internal language: formulas over a typed context are
//! compiled into relations by the universal constructions of the model, and
//! checked tuple by tuple against a direct Tarskian evaluation.

mod compile;
mod oracle;
mod parse;
pub mod suite;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::finset::{FinMor, FinObj};
use crate::relcalc::Relation;

pub use compile::{compile, CompilationResult, Compiler, Mutation, Step};
pub use oracle::{oracle, verify, verify_at, verify_with};
pub use parse::{parse, parse_context, parse_formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{pos}: unbound variable {name}")]
    Unbound { pos: usize, name: String },
    #[error("{pos}: variable {name} is already bound")]
    Rebound { pos: usize, name: String },
    #[error("{pos}: type mismatch: expected {expected}, found {found}")]
    TypeMismatch { pos: usize, expected: String, found: String },
    #[error("{pos}: unknown relation {name}")]
    UnknownRelation { pos: usize, name: String },
    #[error("{pos}: unknown morphism {name}")]
    UnknownMorphism { pos: usize, name: String },
    #[error("{pos}: unknown object {name}")]
    UnknownObject { pos: usize, name: String },
    #[error("{pos}: {name} takes {expected} arguments, got {got}")]
    Arity { pos: usize, name: String, expected: usize, got: usize },
    #[error("tuple has {got} components, context has {expected}")]
    TupleLength { expected: usize, got: usize },
}

/// The declared objects, morphisms and relations a formula may mention.
/// Sorts are object names.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    objects: BTreeMap<String, FinObj>,
    morphisms: BTreeMap<String, MorphismDecl>,
    relations: BTreeMap<String, RelationDecl>,
}

#[derive(Debug, Clone)]
pub struct MorphismDecl {
    pub mor: FinMor,
    pub dom: String,
    pub cod: String,
}

#[derive(Debug, Clone)]
pub struct RelationDecl {
    pub rel: Relation,
    pub sorts: Vec<String>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn add_object(&mut self, name: impl Into<String>, obj: FinObj) {
        self.objects.insert(name.into(), obj);
    }

    /// The morphism's domain and codomain must be the named objects.
    pub fn add_morphism(
        &mut self,
        name: impl Into<String>,
        dom: &str,
        cod: &str,
        mor: FinMor,
    ) -> Result<(), LogicError> {
        let name = name.into();
        let d = self.object(dom, 0)?;
        let c = self.object(cod, 0)?;
        if mor.dom() != d || mor.cod() != c {
            return Err(LogicError::TypeMismatch {
                pos: 0,
                expected: format!("{dom} -> {cod}"),
                found: mor.to_string(),
            });
        }
        self.morphisms.insert(name, MorphismDecl { mor, dom: dom.into(), cod: cod.into() });
        Ok(())
    }

    pub fn add_relation(
        &mut self,
        name: impl Into<String>,
        sorts: &[&str],
        rel: Relation,
    ) -> Result<(), LogicError> {
        let name = name.into();
        if sorts.len() != rel.arity() {
            return Err(LogicError::Arity {
                pos: 0,
                name,
                expected: sorts.len(),
                got: rel.arity(),
            });
        }
        for (s, c) in sorts.iter().zip(rel.cods()) {
            if self.object(s, 0)? != c {
                return Err(LogicError::TypeMismatch {
                    pos: 0,
                    expected: s.to_string(),
                    found: c.to_string(),
                });
            }
        }
        let sorts = sorts.iter().map(|s| s.to_string()).collect();
        self.relations.insert(name, RelationDecl { rel, sorts });
        Ok(())
    }

    pub fn object(&self, name: &str, pos: usize) -> Result<&FinObj, LogicError> {
        self.objects
            .get(name)
            .ok_or_else(|| LogicError::UnknownObject { pos, name: name.to_string() })
    }

    pub fn morphism(&self, name: &str, pos: usize) -> Result<&MorphismDecl, LogicError> {
        self.morphisms
            .get(name)
            .ok_or_else(|| LogicError::UnknownMorphism { pos, name: name.to_string() })
    }

    pub fn relation(&self, name: &str, pos: usize) -> Result<&RelationDecl, LogicError> {
        self.relations
            .get(name)
            .ok_or_else(|| LogicError::UnknownRelation { pos, name: name.to_string() })
    }

    pub fn objects(&self) -> impl Iterator<Item = (&str, &FinObj)> {
        self.objects.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn morphisms(&self) -> impl Iterator<Item = (&str, &MorphismDecl)> {
        self.morphisms.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &RelationDecl)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Ordered typed variables with distinct names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Context {
    vars: Vec<(String, String)>,
    objs: Vec<FinObj>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn from_vars(sig: &Signature, vars: &[(&str, &str)]) -> Result<Self, LogicError> {
        let mut ctx = Context::new();
        for (v, s) in vars {
            ctx.push(sig, v, s, 0)?;
        }
        Ok(ctx)
    }

    pub fn push(
        &mut self,
        sig: &Signature,
        var: &str,
        sort: &str,
        pos: usize,
    ) -> Result<(), LogicError> {
        if self.index_of(var).is_some() {
            return Err(LogicError::Rebound { pos, name: var.to_string() });
        }
        let obj = sig.object(sort, pos)?.clone();
        self.vars.push((var.to_string(), sort.to_string()));
        self.objs.push(obj);
        Ok(())
    }

    pub(crate) fn pop(&mut self) {
        self.vars.pop();
        self.objs.pop();
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|(v, _)| v == var)
    }

    pub fn var(&self, k: usize) -> &str {
        &self.vars[k].0
    }

    pub fn sort(&self, k: usize) -> &str {
        &self.vars[k].1
    }

    pub fn objects(&self) -> &[FinObj] {
        &self.objs
    }

    /// Every element tuple of the context, last variable fastest.
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for obj in &self.objs {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..obj.len()).map(move |i| {
                        let mut t = t.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        out
    }

    pub fn render_tuple(&self, tuple: &[usize]) -> String {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(&self.objs)
            .zip(tuple)
            .map(|(((v, _), o), &i)| format!("{v}={}", o.label(i)))
            .collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vars.iter().map(|(v, s)| format!("{v}:{s}")).collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    App(String, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Atom(String, Vec<Term>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, String, Box<Formula>),
    Exists(String, String, Box<Formula>),
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Negation is implication into falsity.
    pub fn not(a: Formula) -> Formula {
        Formula::implies(a, Formula::False)
    }

    pub fn forall(var: &str, sort: &str, body: Formula) -> Formula {
        Formula::Forall(var.into(), sort.into(), Box::new(body))
    }

    pub fn exists(var: &str, sort: &str, body: Formula) -> Formula {
        Formula::Exists(var.into(), sort.into(), Box::new(body))
    }

    pub fn atom(name: &str, vars: &[&str]) -> Formula {
        Formula::Atom(name.into(), vars.iter().map(|v| Term::Var(v.to_string())).collect())
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Atom(..) => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Forall(_, _, b) | Formula::Exists(_, _, b) => 1 + b.depth(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(m, t) => write!(f, "{m}({t})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Atom(r, args) => {
                let args: Vec<String> = args.iter().map(ToString::to_string).collect();
                write!(f, "{r}({})", args.join(", "))
            }
            Formula::And(a, b) => write!(f, "({a} /\\ {b})"),
            Formula::Or(a, b) => write!(f, "({a} \\/ {b})"),
            Formula::Implies(a, b) => write!(f, "({a} => {b})"),
            Formula::Forall(v, s, b) => write!(f, "(forall {v}:{s}. {b})"),
            Formula::Exists(v, s, b) => write!(f, "(exists {v}:{s}. {b})"),
        }
    }
}

/// The sort of a term in a context.
pub(crate) fn term_sort(sig: &Signature, ctx: &Context, t: &Term) -> Result<String, LogicError> {
    match t {
        Term::Var(v) => ctx
            .index_of(v)
            .map(|k| ctx.sort(k).to_string())
            .ok_or_else(|| LogicError::Unbound { pos: 0, name: v.clone() }),
        Term::App(m, arg) => {
            let decl = sig.morphism(m, 0)?;
            let s = term_sort(sig, ctx, arg)?;
            if s != decl.dom {
                return Err(LogicError::TypeMismatch { pos: 0, expected: decl.dom.clone(), found: s });
            }
            Ok(decl.cod.clone())
        }
    }
}

/// Type-checks a formula built without the parser.
pub fn check(sig: &Signature, ctx: &Context, phi: &Formula) -> Result<(), LogicError> {
    let mut ctx = ctx.clone();
    check_in(sig, &mut ctx, phi)
}

fn check_in(sig: &Signature, ctx: &mut Context, phi: &Formula) -> Result<(), LogicError> {
    match phi {
        Formula::True | Formula::False => Ok(()),
        Formula::Eq(a, b) => {
            let (sa, sb) = (term_sort(sig, ctx, a)?, term_sort(sig, ctx, b)?);
            if sa != sb {
                return Err(LogicError::TypeMismatch { pos: 0, expected: sa, found: sb });
            }
            Ok(())
        }
        Formula::Atom(r, args) => {
            let decl = sig.relation(r, 0)?;
            if decl.sorts.len() != args.len() {
                return Err(LogicError::Arity {
                    pos: 0,
                    name: r.clone(),
                    expected: decl.sorts.len(),
                    got: args.len(),
                });
            }
            for (t, s) in args.iter().zip(&decl.sorts) {
                let found = term_sort(sig, ctx, t)?;
                if &found != s {
                    return Err(LogicError::TypeMismatch { pos: 0, expected: s.clone(), found });
                }
            }
            Ok(())
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            check_in(sig, ctx, a)?;
            check_in(sig, ctx, b)
        }
        Formula::Forall(v, s, body) | Formula::Exists(v, s, body) => {
            ctx.push(sig, v, s, 0)?;
            let res = check_in(sig, ctx, body);
            ctx.pop();
            res
        }
    }
}
