//! Direct Tarskian evaluation, and the comparison of compiled membership
//! against it.

use crate::report::{Report, Tally, Witness};

use super::{check, Compiler, Context, Formula, LogicError, Signature, Term};

fn value(sig: &Signature, ctx: &Context, env: &[usize], t: &Term) -> usize {
    match t {
        Term::Var(v) => env[ctx.index_of(v).expect("type-checked")],
        Term::App(f, arg) => {
            sig.morphism(f, 0).expect("type-checked").mor.apply(value(sig, ctx, env, arg))
        }
    }
}

fn eval(sig: &Signature, ctx: &mut Context, env: &mut Vec<usize>, phi: &Formula) -> bool {
    match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(s, t) => value(sig, ctx, env, s) == value(sig, ctx, env, t),
        Formula::Atom(r, args) => {
            let tuple: Vec<usize> = args.iter().map(|t| value(sig, ctx, env, t)).collect();
            sig.relation(r, 0).expect("type-checked").rel.contains(&tuple)
        }
        Formula::And(a, b) => eval(sig, ctx, env, a) && eval(sig, ctx, env, b),
        Formula::Or(a, b) => eval(sig, ctx, env, a) || eval(sig, ctx, env, b),
        Formula::Implies(a, b) => !eval(sig, ctx, env, a) || eval(sig, ctx, env, b),
        Formula::Forall(v, s, body) | Formula::Exists(v, s, body) => {
            let size = sig.object(s, 0).expect("type-checked").len();
            ctx.push(sig, v, s, 0).expect("type-checked");
            let universal = matches!(phi, Formula::Forall(..));
            let mut result = universal;
            for y in 0..size {
                env.push(y);
                let holds = eval(sig, ctx, env, body);
                env.pop();
                if holds != universal {
                    result = !universal;
                    break;
                }
            }
            ctx.pop();
            result
        }
    }
}

/// The truth value of `phi` at `tuple`.
pub fn oracle(
    sig: &Signature,
    ctx: &Context,
    phi: &Formula,
    tuple: &[usize],
) -> Result<bool, LogicError> {
    check(sig, ctx, phi)?;
    if tuple.len() != ctx.len() {
        return Err(LogicError::TupleLength { expected: ctx.len(), got: tuple.len() });
    }
    if let Some(k) = (0..ctx.len()).find(|&k| tuple[k] >= ctx.objects()[k].len()) {
        return Err(LogicError::TypeMismatch {
            pos: 0,
            expected: format!("an element of {}", ctx.sort(k)),
            found: tuple[k].to_string(),
        });
    }
    let mut ctx = ctx.clone();
    Ok(eval(sig, &mut ctx, &mut tuple.to_vec(), phi))
}

fn compare(
    compiler: &Compiler<'_>,
    ctx: &Context,
    phi: &Formula,
    tuples: impl IntoIterator<Item = Vec<usize>>,
) -> Result<Report, LogicError> {
    let sig = compiler.signature();
    let compiled = compiler.compile(ctx, phi)?;
    let mut tally = Tally::new(format!("{phi}"));
    for t in tuples {
        let got = compiled.relation.contains(&t);
        let want = oracle(sig, ctx, phi, &t)?;
        let ok = tally.expect(got == want, || {
            Witness::new()
                .with("context", ctx)
                .with("formula", phi)
                .with("tuple", ctx.render_tuple(&t))
                .with("compiled", got)
                .with("oracle", want)
                .with("trace", compiled.trace_string())
        });
        if !ok {
            break;
        }
    }
    Ok(tally.finish())
}

/// Compares compiled membership with the oracle on every tuple of `ctx`.
pub fn verify(sig: &Signature, ctx: &Context, phi: &Formula) -> Result<Report, LogicError> {
    verify_with(&Compiler::new(sig), ctx, phi)
}

pub fn verify_with(
    compiler: &Compiler<'_>,
    ctx: &Context,
    phi: &Formula,
) -> Result<Report, LogicError> {
    compare(compiler, ctx, phi, ctx.tuples())
}

/// Replays the comparison at a single tuple.
pub fn verify_at(
    compiler: &Compiler<'_>,
    ctx: &Context,
    phi: &Formula,
    tuple: &[usize],
) -> Result<Report, LogicError> {
    if tuple.len() != ctx.len() {
        return Err(LogicError::TupleLength { expected: ctx.len(), got: tuple.len() });
    }
    compare(compiler, ctx, phi, [tuple.to_vec()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{FinMor, FinObj};
    use crate::logic::{parse, Mutation};
    use crate::relcalc::Relation;

    fn fixture() -> (Signature, Context) {
        let mut sig = Signature::new();
        let x = FinObj::standard(2);
        sig.add_object("X", x.clone());
        sig.add_morphism("f", "X", "X", FinMor::new(x.clone(), x.clone(), vec![1, 1]).unwrap())
            .unwrap();
        sig.add_morphism("g", "X", "X", FinMor::constant(&x, &x, 1)).unwrap();
        let le = Relation::from_tuples(vec![x.clone(), x], vec![vec![0, 0], vec![0, 1], vec![1, 1]])
            .unwrap();
        sig.add_relation("le", &["X", "X"], le).unwrap();
        let ctx = Context::from_vars(&sig, &[("x", "X")]).unwrap();
        (sig, ctx)
    }

    #[test]
    fn base_cases() {
        let (sig, ctx) = fixture();
        assert!(!oracle(&sig, &ctx, &Formula::False, &[0]).unwrap());
        let phi = parse(&sig, &ctx, "f(x) = g(x)").unwrap();
        assert!(oracle(&sig, &ctx, &phi, &[0]).unwrap());
        assert!(oracle(&sig, &ctx, &phi, &[1]).unwrap());
    }

    #[test]
    fn nested_quantifiers() {
        let (sig, _) = fixture();
        let ctx = Context::new();
        let top = |t: &str| oracle(&sig, &ctx, &parse(&sig, &ctx, t).unwrap(), &[]).unwrap();
        assert!(top("forall x:X. exists y:X. le(x,y)"));
        assert!(top("exists x:X. forall y:X. le(x,y)"));
        assert!(!top("forall x:X. forall y:X. le(x,y)"));
        assert!(!top("forall x:X. exists y:X. le(y,x) /\\ ~(x = y)"));
    }

    #[test]
    fn verify_passes_and_mutations_fail() {
        let (sig, ctx) = fixture();
        let phi = parse(&sig, &ctx, "forall y:X. le(x,y) \\/ x = y => le(x, f(y))").unwrap();
        assert!(verify(&sig, &ctx, &phi).unwrap().passed());
        let phi = parse(&sig, &ctx, "le(x,x) \\/ false").unwrap();
        let bad = Compiler::new(&sig).with_mutation(Mutation::OrAsAnd);
        let report = verify_with(&bad, &ctx, &phi).unwrap();
        assert!(!report.passed());
        let w = report.witness.unwrap();
        assert_eq!(w.get("tuple"), Some("(x=0)"));
        assert_eq!(w.get("trace"), Some("substitution(le) initial pullback"));
    }

    #[test]
    fn tuple_length_is_checked() {
        let (sig, ctx) = fixture();
        assert!(matches!(
            oracle(&sig, &ctx, &Formula::True, &[]),
            Err(LogicError::TupleLength { expected: 1, got: 0 })
        ));
    }
}
