//! A generated family of formulas covering every connective and quantifier
//! combination up to a depth, over one unary and one binary relation.
//!
//! Shapes are enumerated exhaustively. Leaves are filled in order from the
//! atoms available at that point, cycling through them, with atoms on the
//! most recently bound variable first.

use crate::finset::FinObj;
use crate::relcalc::Relation;
use crate::report::{Report, Tally, Witness};

use super::{verify, Context, Formula, Signature, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    And,
    Or,
    Implies,
    Not,
    Forall,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    Leaf,
    Unary(Node, Box<Shape>),
    Binary(Node, Box<Shape>, Box<Shape>),
}

fn shapes(depth: usize) -> Vec<Shape> {
    let mut out = vec![Shape::Leaf];
    if depth == 0 {
        return out;
    }
    let smaller = shapes(depth - 1);
    for op in [Node::And, Node::Or, Node::Implies] {
        for a in &smaller {
            for b in &smaller {
                out.push(Shape::Binary(op, Box::new(a.clone()), Box::new(b.clone())));
            }
        }
    }
    for op in [Node::Not, Node::Forall, Node::Exists] {
        for a in &smaller {
            out.push(Shape::Unary(op, Box::new(a.clone())));
        }
    }
    out
}

fn atoms(vars: &[String]) -> Vec<Formula> {
    let mut out = Vec::new();
    let recent: Vec<&String> = vars.iter().rev().collect();
    for v in &recent {
        out.push(Formula::atom("r", &[v]));
    }
    for u in &recent {
        for v in &recent {
            out.push(Formula::atom("s", &[u, v]));
        }
    }
    if let [u, v, ..] = recent[..] {
        out.push(Formula::Eq(Term::Var(u.clone()), Term::Var(v.clone())));
    }
    out.push(Formula::True);
    out.push(Formula::False);
    out
}

fn fill(shape: &Shape, vars: &mut Vec<String>, counter: &mut usize) -> Formula {
    match shape {
        Shape::Leaf => {
            let available = atoms(vars);
            let phi = available[*counter % available.len()].clone();
            *counter += 1;
            phi
        }
        Shape::Unary(Node::Not, a) => Formula::not(fill(a, vars, counter)),
        Shape::Unary(q, a) => {
            let v = format!("y{}", vars.len());
            vars.push(v.clone());
            let body = fill(a, vars, counter);
            vars.pop();
            if *q == Node::Forall {
                Formula::forall(&v, "X", body)
            } else {
                Formula::exists(&v, "X", body)
            }
        }
        Shape::Binary(op, a, b) => {
            let (a, b) = (fill(a, vars, counter), fill(b, vars, counter));
            match op {
                Node::And => Formula::and(a, b),
                Node::Or => Formula::or(a, b),
                _ => Formula::implies(a, b),
            }
        }
    }
}

/// Every shape up to `depth`, filled over the free variable `x : X`.
pub fn formulas(depth: usize) -> Vec<Formula> {
    shapes(depth)
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let mut counter = k;
            fill(s, &mut vec!["x".to_string()], &mut counter)
        })
        .collect()
}

/// The signature over a carrier of size `n`: `r = {even elements}` and
/// `s = {(a, b) : (a + 2b) mod 3 ≠ 0}`, in the context `x : X`.
pub fn signature(n: usize) -> (Signature, Context) {
    let x = FinObj::standard(n);
    let mut sig = Signature::new();
    sig.add_object("X", x.clone());
    let r = Relation::from_tuples(vec![x.clone()], (0..n).filter(|a| a % 2 == 0).map(|a| vec![a]).collect())
        .expect("distinct tuples");
    let s_tuples = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|(a, b)| (a + 2 * b) % 3 != 0)
        .map(|(a, b)| vec![a, b])
        .collect();
    let s = Relation::from_tuples(vec![x.clone(), x], s_tuples).expect("distinct tuples");
    sig.add_relation("r", &["X"], r).expect("typed");
    sig.add_relation("s", &["X", "X"], s).expect("typed");
    let ctx = Context::from_vars(&sig, &[("x", "X")]).expect("declared");
    (sig, ctx)
}

/// Verifies every generated formula on every listed carrier size.
pub fn run(depth: usize, sizes: &[usize]) -> Report {
    let phis = formulas(depth);
    let mut t = Tally::new(format!("generated formulas to depth {depth}"));
    for &n in sizes {
        let (sig, ctx) = signature(n);
        for phi in &phis {
            match verify(&sig, &ctx, phi) {
                Ok(r) => t.absorb(r),
                Err(e) => t.fail(Witness::new().with("formula", phi).with("error", e)),
            }
            if t.failed() {
                return t.finish();
            }
        }
    }
    t.note(format!("{} formulas, carrier sizes {sizes:?}", phis.len()));
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::check;

    #[test]
    fn shape_counts() {
        assert_eq!(shapes(0).len(), 1);
        assert_eq!(shapes(1).len(), 7);
        assert_eq!(shapes(2).len(), 1 + 3 * 49 + 3 * 7);
    }

    #[test]
    fn generated_formulas_are_well_typed() {
        let (sig, ctx) = signature(2);
        for phi in formulas(2) {
            check(&sig, &ctx, &phi).unwrap();
        }
    }

    #[test]
    fn shallow_suite_passes() {
        let r = run(2, &[0, 1, 2, 3]);
        assert!(r.passed(), "{r}");
    }
}
