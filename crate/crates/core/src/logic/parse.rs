//! Recursive-descent parser for the formula language.
//!
//! ```text
//! formula := "true" | "false" | term "=" term | ident "(" terms ")"
//!          | formula "/\" formula | formula "\/" formula | formula "=>" formula
//!          | "~" formula | "forall" ident ":" ident "." formula
//!          | "exists" ident ":" ident "." formula | "(" formula ")"
//! term    := ident | ident "(" term ")"
//! ```
//!
//! `~` binds tightest, then `/\`, then `\/`, then `=>` (right associative).
//! Quantifier bodies extend as far right as possible. Positions in
//! diagnostics are 1-based character columns.

use super::{Context, Formula, LogicError, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Forall,
    Exists,
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Equals,
    And,
    Or,
    Implies,
    Not,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::True => "'true'".into(),
            Tok::False => "'false'".into(),
            Tok::Forall => "'forall'".into(),
            Tok::Exists => "'exists'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Dot => "'.'".into(),
            Tok::Colon => "':'".into(),
            Tok::Equals => "'='".into(),
            Tok::And => "'/\\'".into(),
            Tok::Or => "'\\/'".into(),
            Tok::Implies => "'=>'".into(),
            Tok::Not => "'~'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, LogicError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two = chars.get(i + 1).copied();
        let (tok, len) = match (c, two) {
            ('/', Some('\\')) => (Tok::And, 2),
            ('\\', Some('/')) => (Tok::Or, 2),
            ('=', Some('>')) => (Tok::Implies, 2),
            ('=', _) => (Tok::Equals, 1),
            ('~', _) => (Tok::Not, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            ('.', _) => (Tok::Dot, 1),
            (':', _) => (Tok::Colon, 1),
            _ if is_ident_start(c) => {
                let start = i;
                let mut end = i;
                while end < chars.len() && is_ident_char(chars[end]) {
                    end += 1;
                }
                let word: String = chars[start..end].iter().collect();
                let tok = match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ => Tok::Ident(word),
                };
                (tok, end - start)
            }
            _ => {
                return Err(LogicError::Syntax { pos, msg: format!("unexpected character {c:?}") })
            }
        };
        toks.push((tok, pos));
        i += len;
    }
    toks.push((Tok::Eof, chars.len() + 1));
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    typing: Option<(&'a Signature, Context)>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<usize, LogicError> {
        let pos = self.pos();
        if self.eat(&tok) {
            Ok(pos)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn unexpected(&self, wanted: &str) -> LogicError {
        LogicError::Syntax {
            pos: self.pos(),
            msg: format!("expected {wanted}, found {}", self.peek().describe()),
        }
    }

    fn ident(&mut self) -> Result<(String, usize), LogicError> {
        match self.bump() {
            (Tok::Ident(s), pos) => Ok((s, pos)),
            (_, _) => {
                self.at -= 1;
                Err(self.unexpected("identifier"))
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let (q, _) = self.bump();
                let (var, vpos) = self.ident()?;
                self.expect(Tok::Colon)?;
                let (sort, spos) = self.ident()?;
                self.expect(Tok::Dot)?;
                if let Some((sig, ctx)) = &mut self.typing {
                    if ctx.index_of(&var).is_some() {
                        return Err(LogicError::Rebound { pos: vpos, name: var });
                    }
                    ctx.push(sig, &var, &sort, spos)?;
                }
                let body = self.formula();
                if let Some((_, ctx)) = &mut self.typing {
                    ctx.pop();
                }
                let body = Box::new(body?);
                Ok(if q == Tok::Forall {
                    Formula::Forall(var, sort, body)
                } else {
                    Formula::Exists(var, sort, body)
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, LogicError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(_) => {
                let (name, pos) = self.ident()?;
                if self.eat(&Tok::LParen) {
                    let mut args = Vec::new();
                    if !self.eat(&Tok::RParen) {
                        loop {
                            args.push(self.term()?);
                            if self.eat(&Tok::RParen) {
                                break;
                            }
                            self.expect(Tok::Comma)?;
                        }
                    }
                    if self.peek() == &Tok::Equals {
                        if args.len() != 1 {
                            return Err(LogicError::Syntax {
                                pos,
                                msg: format!("morphism application {name} takes one argument"),
                            });
                        }
                        let (arg, arg_sort, arg_pos) = args.pop().expect("one argument");
                        let sort = self.apply_sort(&name, pos, arg_sort, arg_pos)?;
                        let lhs = (Term::App(name, Box::new(arg)), sort, pos);
                        return self.equation(lhs);
                    }
                    self.check_atom(&name, pos, &args)?;
                    Ok(Formula::Atom(name, args.into_iter().map(|(t, _, _)| t).collect()))
                } else {
                    let sort = self.var_sort(&name, pos)?;
                    self.equation((Term::Var(name), sort, pos))
                }
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn equation(&mut self, lhs: (Term, Option<String>, usize)) -> Result<Formula, LogicError> {
        self.expect(Tok::Equals)?;
        let (rhs, rsort, rpos) = self.term()?;
        if let (Some(a), Some(b)) = (&lhs.1, &rsort) {
            if a != b {
                return Err(LogicError::TypeMismatch { pos: rpos, expected: a.clone(), found: b.clone() });
            }
        }
        Ok(Formula::Eq(lhs.0, rhs))
    }

    fn term(&mut self) -> Result<(Term, Option<String>, usize), LogicError> {
        let (name, pos) = self.ident()?;
        if self.eat(&Tok::LParen) {
            let (arg, arg_sort, arg_pos) = self.term()?;
            self.expect(Tok::RParen)?;
            let sort = self.apply_sort(&name, pos, arg_sort, arg_pos)?;
            Ok((Term::App(name, Box::new(arg)), sort, pos))
        } else {
            let sort = self.var_sort(&name, pos)?;
            Ok((Term::Var(name), sort, pos))
        }
    }

    fn var_sort(&self, name: &str, pos: usize) -> Result<Option<String>, LogicError> {
        match &self.typing {
            None => Ok(None),
            Some((_, ctx)) => ctx
                .index_of(name)
                .map(|k| Some(ctx.sort(k).to_string()))
                .ok_or_else(|| LogicError::Unbound { pos, name: name.to_string() }),
        }
    }

    fn apply_sort(
        &self,
        name: &str,
        pos: usize,
        arg_sort: Option<String>,
        arg_pos: usize,
    ) -> Result<Option<String>, LogicError> {
        let Some((sig, _)) = &self.typing else {
            return Ok(None);
        };
        let decl = sig.morphism(name, pos)?;
        let arg_sort = arg_sort.expect("typed mode assigns sorts");
        if arg_sort != decl.dom {
            return Err(LogicError::TypeMismatch {
                pos: arg_pos,
                expected: decl.dom.clone(),
                found: arg_sort,
            });
        }
        Ok(Some(decl.cod.clone()))
    }

    fn check_atom(
        &self,
        name: &str,
        pos: usize,
        args: &[(Term, Option<String>, usize)],
    ) -> Result<(), LogicError> {
        let Some((sig, _)) = &self.typing else {
            return Ok(());
        };
        let decl = sig.relation(name, pos)?;
        if decl.sorts.len() != args.len() {
            return Err(LogicError::Arity {
                pos,
                name: name.to_string(),
                expected: decl.sorts.len(),
                got: args.len(),
            });
        }
        for ((_, sort, apos), expected) in args.iter().zip(&decl.sorts) {
            let sort = sort.as_ref().expect("typed mode assigns sorts");
            if sort != expected {
                return Err(LogicError::TypeMismatch {
                    pos: *apos,
                    expected: expected.clone(),
                    found: sort.clone(),
                });
            }
        }
        Ok(())
    }
}

fn run<'a>(text: &str, typing: Option<(&'a Signature, Context)>) -> Result<Formula, LogicError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, typing };
    let phi = p.formula()?;
    if p.peek() != &Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(phi)
}

/// Parses without resolving names.
pub fn parse_formula(text: &str) -> Result<Formula, LogicError> {
    run(text, None)
}

/// Parses and type-checks against a signature and context.
pub fn parse(sig: &Signature, ctx: &Context, text: &str) -> Result<Formula, LogicError> {
    run(text, Some((sig, ctx.clone())))
}

/// Parses `x:X, y:Y`. The empty string is the empty context.
pub fn parse_context(sig: &Signature, text: &str) -> Result<Context, LogicError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, typing: None };
    let mut ctx = Context::new();
    if p.peek() == &Tok::Eof {
        return Ok(ctx);
    }
    loop {
        let (var, vpos) = p.ident()?;
        p.expect(Tok::Colon)?;
        let (sort, spos) = p.ident()?;
        if ctx.index_of(&var).is_some() {
            return Err(LogicError::Rebound { pos: vpos, name: var });
        }
        ctx.push(sig, &var, &sort, spos)?;
        if p.peek() == &Tok::Eof {
            return Ok(ctx);
        }
        p.expect(Tok::Comma)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{FinMor, FinObj};
    use crate::relcalc::Relation;

    fn sig() -> Signature {
        let mut sig = Signature::new();
        let x = FinObj::standard(2);
        let y = FinObj::standard(3);
        sig.add_object("X", x.clone());
        sig.add_object("Y", y.clone());
        sig.add_morphism("f", "X", "Y", FinMor::new(x.clone(), y.clone(), vec![0, 2]).unwrap())
            .unwrap();
        let m = Relation::from_tuples(vec![x.clone(), y.clone()], vec![vec![0, 1]]).unwrap();
        sig.add_relation("m", &["X", "Y"], m).unwrap();
        sig
    }

    fn ctx(sig: &Signature) -> Context {
        Context::from_vars(sig, &[("x", "X")]).unwrap()
    }

    #[test]
    fn constants_and_shapes() {
        let s = sig();
        assert_eq!(parse(&s, &ctx(&s), "true").unwrap(), Formula::True);
        let phi = parse(&s, &ctx(&s), "exists y:Y. m(x,y)").unwrap();
        assert!(matches!(phi, Formula::Exists(ref v, ref t, _) if v == "y" && t == "Y"));
    }

    #[test]
    fn precedence() {
        let phi = parse_formula("~a(x) /\\ b(x) \\/ c(x) => d(x) => e(x)").unwrap();
        let a = Formula::atom("a", &["x"]);
        let b = Formula::atom("b", &["x"]);
        let c = Formula::atom("c", &["x"]);
        let d = Formula::atom("d", &["x"]);
        let e = Formula::atom("e", &["x"]);
        let expected = Formula::implies(
            Formula::or(Formula::and(Formula::not(a), b), c),
            Formula::implies(d, e),
        );
        assert_eq!(phi, expected);
    }

    #[test]
    fn quantifiers_extend_right() {
        let phi = parse_formula("a(x) /\\ forall y:Y. b(y) \\/ c(y)").unwrap();
        let expected = Formula::and(
            Formula::atom("a", &["x"]),
            Formula::forall(
                "y",
                "Y",
                Formula::or(Formula::atom("b", &["y"]), Formula::atom("c", &["y"])),
            ),
        );
        assert_eq!(phi, expected);
    }

    #[test]
    fn equations_with_terms() {
        let s = sig();
        let c = Context::from_vars(&s, &[("x", "X"), ("y", "Y")]).unwrap();
        let phi = parse(&s, &c, "f(x) = y").unwrap();
        assert_eq!(
            phi,
            Formula::Eq(Term::App("f".into(), Box::new(Term::Var("x".into()))), Term::Var("y".into()))
        );
        assert!(matches!(
            parse(&s, &c, "x = y"),
            Err(LogicError::TypeMismatch { pos: 5, .. })
        ));
    }

    #[test]
    fn diagnostics() {
        let s = sig();
        let c = ctx(&s);
        assert!(matches!(parse(&s, &c, "m(x)"), Err(LogicError::Arity { expected: 2, got: 1, .. })));
        assert!(matches!(parse(&s, &c, "m(x, z)"), Err(LogicError::Unbound { pos: 6, .. })));
        assert!(matches!(parse(&s, &c, "n(x)"), Err(LogicError::UnknownRelation { .. })));
        assert!(matches!(parse(&s, &c, "g(x) = x"), Err(LogicError::UnknownMorphism { .. })));
        assert!(matches!(parse(&s, &c, "forall x:X. true"), Err(LogicError::Rebound { .. })));
        assert!(matches!(parse(&s, &c, "forall y:Z. true"), Err(LogicError::UnknownObject { .. })));
        assert!(matches!(parse(&s, &c, "true /\\"), Err(LogicError::Syntax { pos: 8, .. })));
        assert!(matches!(parse(&s, &c, "true )"), Err(LogicError::Syntax { pos: 6, .. })));
        assert!(matches!(parse(&s, &c, "x # x"), Err(LogicError::Syntax { pos: 3, .. })));
    }

    #[test]
    fn contexts() {
        let s = sig();
        assert!(parse_context(&s, "").unwrap().is_empty());
        let c = parse_context(&s, "x:X, y:Y").unwrap();
        assert_eq!(c.len(), 2);
        assert!(parse_context(&s, "x:X, x:Y").is_err());
        assert!(parse_context(&s, "x:Q").is_err());
    }

    #[test]
    fn display_round_trips() {
        let text = "forall y:Y. ~m(x, y) \\/ (exists z:Y. f(x) = z) => true /\\ false";
        let phi = parse_formula(text).unwrap();
        assert_eq!(parse_formula(&phi.to_string()).unwrap(), phi);
    }
}
