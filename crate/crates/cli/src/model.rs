//! Line-oriented model declarations.
//!
//! ```text
//! # comment
//! object X = {a, b}
//! object Y = {u, v}
//! morphism f : X -> Y { a |-> u, b |-> u }
//! relation r <| (X, Y) = { (a,u), (b,v) }
//! object R = {p0, p1}
//! morphism p : R -> X { p0 |-> a, p1 |-> b }
//! morphism q : R -> Y { p0 |-> u, p1 |-> u }
//! relation s <| (X, Y) via (p, q)
//! ```
//!
//! Labels that are not plain words are written in double quotes.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use cetcs::finset::{FinMor, FinObj};
use cetcs::logic::Signature;
use cetcs::relcalc::Relation;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("{0} is already declared")]
    Duplicate(String),
    #[error("undeclared {what} {name}")]
    Dangling { what: &'static str, name: String },
    #[error("{object} has no element {label}")]
    UnknownLabel { object: String, label: String },
    #[error("object {object} repeats label {label}")]
    RepeatedLabel { object: String, label: String },
    #[error("morphism {morphism} has no value at {label}")]
    NotTotal { morphism: String, label: String },
    #[error("morphism {morphism} has two values at {label}")]
    Overdefined { morphism: String, label: String },
    #[error("relation {relation}: {detail}")]
    Relation { relation: String, detail: String },
}

/// A diagnostic for one line of a model file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ModelError {
    pub line: usize,
    pub kind: ModelErrorKind,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Model { path: String, source: ModelError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclKind {
    Object,
    Morphism,
    Relation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub kind: DeclKind,
    pub name: String,
    pub line: usize,
}

/// Validated declarations, in file order.
#[derive(Debug, Clone, Default)]
pub struct ModelFile {
    sig: Signature,
    decls: Vec<Decl>,
}

impl ModelFile {
    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    /// Declared objects in file order.
    pub fn objects(&self) -> Vec<(String, FinObj)> {
        self.decls
            .iter()
            .filter(|d| d.kind == DeclKind::Object)
            .map(|d| (d.name.clone(), self.sig.object(&d.name, 0).expect("declared").clone()))
            .collect()
    }

    pub fn object(&self, name: &str) -> Option<&FinObj> {
        self.sig.object(name, 0).ok()
    }

    pub fn morphism(&self, name: &str) -> Option<&FinMor> {
        self.sig.morphism(name, 0).ok().map(|d| &d.mor)
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.sig.relation(name, 0).ok().map(|d| &d.rel)
    }

    /// The declared name of an object equal to `obj`, if any.
    pub fn name_of(&self, obj: &FinObj) -> Option<&str> {
        self.decls
            .iter()
            .filter(|d| d.kind == DeclKind::Object)
            .find(|d| self.sig.object(&d.name, 0).ok() == Some(obj))
            .map(|d| d.name.as_str())
    }

    fn taken(&self, name: &str) -> bool {
        self.decls.iter().any(|d| d.name == name)
    }

    /// Appends a parsed line.
    pub fn declare(&mut self, text: &str, line: usize) -> Result<(), ModelError> {
        let err = |kind| ModelError { line, kind };
        let tokens = lex(text).map_err(|m| err(ModelErrorKind::Syntax(m)))?;
        if tokens.is_empty() {
            return Ok(());
        }
        let mut p = Parser { tokens, pos: 0 };
        let keyword = p.word("a declaration keyword").map_err(|m| err(ModelErrorKind::Syntax(m)))?;
        let kind = match keyword.as_str() {
            "object" => DeclKind::Object,
            "morphism" => DeclKind::Morphism,
            "relation" => DeclKind::Relation,
            other => return Err(err(ModelErrorKind::Syntax(format!("unknown declaration {other:?}")))),
        };
        let name = p.word("a name").map_err(|m| err(ModelErrorKind::Syntax(m)))?;
        if self.taken(&name) {
            return Err(err(ModelErrorKind::Duplicate(name)));
        }
        match kind {
            DeclKind::Object => self.object_decl(&name, &mut p),
            DeclKind::Morphism => self.morphism_decl(&name, &mut p),
            DeclKind::Relation => self.relation_decl(&name, &mut p),
        }
        .map_err(err)?;
        self.decls.push(Decl { kind, name, line });
        Ok(())
    }

    fn object_decl(&mut self, name: &str, p: &mut Parser) -> Result<(), ModelErrorKind> {
        p.expect(Tok::Eq).map_err(ModelErrorKind::Syntax)?;
        let labels = p.list(Tok::LBrace, Tok::RBrace, |p| p.label()).map_err(ModelErrorKind::Syntax)?;
        p.end().map_err(ModelErrorKind::Syntax)?;
        let mut seen = BTreeSet::new();
        if let Some(l) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(ModelErrorKind::RepeatedLabel { object: name.into(), label: l.clone() });
        }
        self.sig.add_object(name, FinObj::new(labels).expect("labels are distinct"));
        Ok(())
    }

    fn resolve_object(&self, name: &str) -> Result<FinObj, ModelErrorKind> {
        self.object(name)
            .cloned()
            .ok_or_else(|| ModelErrorKind::Dangling { what: "object", name: name.into() })
    }

    fn morphism_decl(&mut self, name: &str, p: &mut Parser) -> Result<(), ModelErrorKind> {
        let syn = ModelErrorKind::Syntax;
        p.expect(Tok::Colon).map_err(syn)?;
        let dom_name = p.word("a domain").map_err(syn)?;
        p.expect(Tok::Arrow).map_err(syn)?;
        let cod_name = p.word("a codomain").map_err(syn)?;
        let entries = p
            .list(Tok::LBrace, Tok::RBrace, |p| {
                let a = p.label()?;
                p.expect(Tok::MapsTo)?;
                Ok((a, p.label()?))
            })
            .map_err(syn)?;
        p.end().map_err(syn)?;
        let (dom, cod) = (self.resolve_object(&dom_name)?, self.resolve_object(&cod_name)?);
        let mut table: Vec<Option<usize>> = vec![None; dom.len()];
        for (a, b) in entries {
            let i = lookup(&dom_name, &dom, &a)?;
            let j = lookup(&cod_name, &cod, &b)?;
            if table[i].replace(j).is_some() {
                return Err(ModelErrorKind::Overdefined { morphism: name.into(), label: a });
            }
        }
        let table = table
            .iter()
            .enumerate()
            .map(|(i, t)| {
                t.ok_or_else(|| ModelErrorKind::NotTotal {
                    morphism: name.into(),
                    label: dom.label(i).into(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mor = FinMor::new(dom, cod, table).expect("entries resolved");
        self.sig.add_morphism(name, &dom_name, &cod_name, mor).expect("objects resolved");
        Ok(())
    }

    fn relation_decl(&mut self, name: &str, p: &mut Parser) -> Result<(), ModelErrorKind> {
        let syn = ModelErrorKind::Syntax;
        p.expect(Tok::Sub).map_err(syn)?;
        let sorts = p.list(Tok::LParen, Tok::RParen, |p| p.word("an object name")).map_err(syn)?;
        let cods = sorts.iter().map(|s| self.resolve_object(s)).collect::<Result<Vec<_>, _>>()?;
        let rel_err = |e: cetcs::relcalc::RelError| ModelErrorKind::Relation {
            relation: name.into(),
            detail: e.to_string(),
        };
        let rel = if p.eat_word("via") {
            let legs = p.list(Tok::LParen, Tok::RParen, |p| p.word("a morphism name")).map_err(syn)?;
            p.end().map_err(syn)?;
            if legs.len() != sorts.len() {
                return Err(ModelErrorKind::Relation {
                    relation: name.into(),
                    detail: format!("{} legs for {} sorts", legs.len(), sorts.len()),
                });
            }
            let mut mors = Vec::new();
            for (leg, sort) in legs.iter().zip(&sorts) {
                let decl = self
                    .signature()
                    .morphism(leg, 0)
                    .map_err(|_| ModelErrorKind::Dangling { what: "morphism", name: leg.clone() })?;
                if &decl.cod != sort {
                    return Err(ModelErrorKind::Relation {
                        relation: name.into(),
                        detail: format!("leg {leg} lands in {}, not {sort}", decl.cod),
                    });
                }
                mors.push(decl.mor.clone());
            }
            let apex = match mors.first() {
                Some(m) => m.dom().clone(),
                None => {
                    return Err(ModelErrorKind::Relation {
                        relation: name.into(),
                        detail: "a nullary relation needs a tuple list".into(),
                    })
                }
            };
            Relation::new(apex, mors).map_err(rel_err)?
        } else {
            p.expect(Tok::Eq).map_err(syn)?;
            let tuples = p
                .list(Tok::LBrace, Tok::RBrace, |p| {
                    if p.peek() == Some(&Tok::LParen) {
                        p.list(Tok::LParen, Tok::RParen, |p| p.label())
                    } else {
                        Ok(vec![p.label()?])
                    }
                })
                .map_err(syn)?;
            p.end().map_err(syn)?;
            let mut rows = Vec::with_capacity(tuples.len());
            for t in tuples {
                if t.len() != sorts.len() {
                    return Err(ModelErrorKind::Relation {
                        relation: name.into(),
                        detail: format!("tuple of length {} for {} sorts", t.len(), sorts.len()),
                    });
                }
                let row = t
                    .iter()
                    .zip(sorts.iter().zip(&cods))
                    .map(|(l, (s, x))| lookup(s, x, l))
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push(row);
            }
            Relation::from_tuples(cods, rows).map_err(rel_err)?
        };
        let sorts: Vec<&str> = sorts.iter().map(String::as_str).collect();
        self.sig.add_relation(name, &sorts, rel).expect("sorts resolved");
        Ok(())
    }

    /// Adds every declaration of `other`, which must not reuse a name.
    pub fn extend(&mut self, other: ModelFile) -> Result<(), ModelError> {
        for d in other.decls {
            if self.taken(&d.name) {
                return Err(ModelError { line: d.line, kind: ModelErrorKind::Duplicate(d.name) });
            }
            let sig = &other.sig;
            match d.kind {
                DeclKind::Object => self.sig.add_object(&d.name, sig.object(&d.name, 0).expect("declared").clone()),
                DeclKind::Morphism => {
                    let m = sig.morphism(&d.name, 0).expect("declared");
                    self.sig.add_morphism(&d.name, &m.dom, &m.cod, m.mor.clone()).map_err(|_| ModelError {
                        line: d.line,
                        kind: ModelErrorKind::Dangling { what: "object", name: m.dom.clone() },
                    })?;
                }
                DeclKind::Relation => {
                    let r = sig.relation(&d.name, 0).expect("declared");
                    let sorts: Vec<&str> = r.sorts.iter().map(String::as_str).collect();
                    self.sig.add_relation(&d.name, &sorts, r.rel.clone()).map_err(|_| ModelError {
                        line: d.line,
                        kind: ModelErrorKind::Dangling { what: "object", name: sorts.join(", ") },
                    })?;
                }
            }
            self.decls.push(d);
        }
        Ok(())
    }
}

fn lookup(name: &str, obj: &FinObj, label: &str) -> Result<usize, ModelErrorKind> {
    obj.index_of(label)
        .ok_or_else(|| ModelErrorKind::UnknownLabel { object: name.into(), label: label.into() })
}

/// Parses a whole model text.
pub fn parse(text: &str) -> Result<ModelFile, ModelError> {
    let mut m = ModelFile::default();
    for (k, line) in text.lines().enumerate() {
        m.declare(line, k + 1)?;
    }
    Ok(m)
}

pub fn load(path: &Path) -> Result<ModelFile, LoadError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: shown.clone(), source })?;
    parse(&text).map_err(|source| LoadError::Model { path: shown, source })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Quoted(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Colon,
    Eq,
    Arrow,
    MapsTo,
    Sub,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "{w:?}"),
            Tok::Quoted(q) => write!(f, "\"{q}\""),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::Colon => f.write_str("':'"),
            Tok::Eq => f.write_str("'='"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::MapsTo => f.write_str("'|->'"),
            Tok::Sub => f.write_str("'<|'"),
        }
    }
}

fn word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '.'
}

fn lex(line: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let tok = match c {
            '#' => break,
            c if c.is_whitespace() => continue,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '=' => Tok::Eq,
            '-' if line[i..].starts_with("->") => {
                chars.next();
                Tok::Arrow
            }
            '|' if line[i..].starts_with("|->") => {
                chars.next();
                chars.next();
                Tok::MapsTo
            }
            '<' if line[i..].starts_with("<|") => {
                chars.next();
                Tok::Sub
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some((_, '"')) => break,
                        Some((_, '\\')) => match chars.next() {
                            Some((_, e @ ('"' | '\\'))) => s.push(e),
                            _ => return Err(format!("bad escape in label at column {}", i + 1)),
                        },
                        Some((_, c)) => s.push(c),
                        None => return Err(format!("unterminated label at column {}", i + 1)),
                    }
                }
                Tok::Quoted(s)
            }
            c if word_char(c) => {
                let mut s = String::from(c);
                while let Some(&(_, d)) = chars.peek() {
                    if !word_char(d) {
                        break;
                    }
                    s.push(d);
                    chars.next();
                }
                Tok::Word(s)
            }
            c => return Err(format!("unexpected character {c:?} at column {}", line[..i].chars().count() + 1)),
        };
        out.push(tok);
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn found(&self) -> String {
        self.peek().map_or("end of line".into(), |t| t.to_string())
    }

    fn expect(&mut self, t: Tok) -> Result<(), String> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected {t}, found {}", self.found()))
        }
    }

    fn word(&mut self, what: &str) -> Result<String, String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(format!("expected {what}, found {}", self.found())),
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Word(x)) if x == w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn label(&mut self) -> Result<String, String> {
        match self.peek() {
            Some(Tok::Word(w) | Tok::Quoted(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(format!("expected a label, found {}", self.found())),
        }
    }

    fn list<T>(
        &mut self,
        open: Tok,
        close: Tok,
        mut item: impl FnMut(&mut Self) -> Result<T, String>,
    ) -> Result<Vec<T>, String> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.peek() == Some(&close) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                self.expect(close)?;
                return Ok(out);
            }
        }
    }

    fn end(&self) -> Result<(), String> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(format!("unexpected {t} after declaration")),
        }
    }
}

/// A label as written in a model file.
pub fn render_label(l: &str) -> String {
    if !l.is_empty() && l.chars().all(word_char) {
        l.to_string()
    } else {
        format!("\"{}\"", l.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

pub fn render_object(name: &str, obj: &FinObj) -> String {
    let labels: Vec<String> = obj.labels().iter().map(|l| render_label(l)).collect();
    format!("object {name} = {{{}}}", labels.join(", "))
}

pub fn render_morphism(name: &str, dom: &str, cod: &str, f: &FinMor) -> String {
    let entries: Vec<String> = (0..f.dom().len())
        .map(|i| format!("{} |-> {}", render_label(f.dom().label(i)), render_label(f.cod().label(f.apply(i)))))
        .collect();
    format!("morphism {name} : {dom} -> {cod} {}", braced(&entries))
}

pub fn render_relation(name: &str, sorts: &[&str], r: &Relation) -> String {
    let tuples: Vec<String> = r
        .members()
        .iter()
        .map(|t| {
            let parts: Vec<String> =
                t.iter().zip(r.cods()).map(|(&i, x)| render_label(x.label(i))).collect();
            format!("({})", parts.join(", "))
        })
        .collect();
    format!("relation {name} <| ({}) = {}", sorts.join(", "), braced(&tuples))
}

fn braced(items: &[String]) -> String {
    if items.is_empty() {
        "{}".into()
    } else {
        format!("{{ {} }}", items.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# two objects
object X = {a, b}
object Y = {u, v}
morphism f : X -> Y { a |-> u, b |-> u }
relation r <| (X, Y) = { (a,u), (b,v) }
relation e <| (X) = { a }
";

    #[test]
    fn minimal_file_loads() {
        let m = parse("object X = {a}").unwrap();
        assert_eq!(m.object("X").unwrap().labels(), ["a"]);
        assert!(parse("").unwrap().decls().is_empty());
    }

    #[test]
    fn sample_loads() {
        let m = parse(SAMPLE).unwrap();
        assert_eq!(m.morphism("f").unwrap().table(), [0, 0]);
        assert!(m.relation("r").unwrap().contains(&[1, 1]));
        assert_eq!(m.relation("e").unwrap().members().len(), 1);
        assert_eq!(m.decls().iter().map(|d| d.line).collect::<Vec<_>>(), [2, 3, 4, 5, 6]);
    }

    #[test]
    fn dangling_reference_reports_its_line() {
        let e = parse("object X = {a}\nmorphism f : X -> Z { a |-> z }").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.kind, ModelErrorKind::Dangling { what: "object", name: "Z".into() });
    }

    #[test]
    fn partial_tables_are_rejected() {
        let e = parse("object X = {a, b}\nmorphism f : X -> X { a |-> a }").unwrap_err();
        assert_eq!(e.kind, ModelErrorKind::NotTotal { morphism: "f".into(), label: "b".into() });
        let e = parse("object X = {a}\nmorphism f : X -> X { a |-> a, a |-> a }").unwrap_err();
        assert!(matches!(e.kind, ModelErrorKind::Overdefined { .. }));
    }

    #[test]
    fn relation_legs_must_be_jointly_monic() {
        let text = "\
object X = {a, b}
object R = {p0, p1}
morphism p : R -> X { p0 |-> a, p1 |-> a }
morphism q : R -> X { p0 |-> b, p1 |-> b }
relation s <| (X, X) via (p, q)";
        let e = parse(text).unwrap_err();
        assert_eq!(e.line, 5);
        let ModelErrorKind::Relation { detail, .. } = e.kind else { panic!("{e}") };
        assert!(detail.contains("p0") && detail.contains("p1"), "{detail}");
        let ok = text.replace("{ p0 |-> a, p1 |-> a }", "{ p0 |-> a, p1 |-> b }");
        let m = parse(&ok).unwrap();
        assert_eq!(m.relation("s").unwrap().members().len(), 2);
    }

    #[test]
    fn syntax_errors() {
        for (text, needle) in [
            ("objekt X = {a}", "unknown declaration"),
            ("object X = {a", "expected '}'"),
            ("object X = {a, a}", "repeats"),
            ("object X = {a} extra", "after declaration"),
            ("object X = {\"a}", "unterminated"),
            ("object X = {a; b}", "unexpected character"),
        ] {
            let e = parse(text).unwrap_err();
            assert!(e.to_string().contains(needle), "{text}: {e}");
        }
    }

    #[test]
    fn duplicates_are_rejected() {
        let e = parse("object X = {a}\nobject X = {b}").unwrap_err();
        assert_eq!(e, ModelError { line: 2, kind: ModelErrorKind::Duplicate("X".into()) });
    }

    #[test]
    fn rendering_round_trips() {
        let x = FinObj::new(["(a,b)", "inl:a", "q\"x", "plain"]).unwrap();
        let text = format!(
            "{}\n{}\n{}",
            render_object("X", &x),
            render_morphism("f", "X", "X", &FinMor::constant(&x, &x, 2)),
            render_relation("r", &["X"], &Relation::from_tuples(vec![x.clone()], vec![vec![0], vec![3]]).unwrap()),
        );
        let m = parse(&text).unwrap();
        assert_eq!(m.object("X"), Some(&x));
        assert_eq!(m.morphism("f").unwrap().table(), [2, 2, 2, 2]);
        assert_eq!(m.relation("r").unwrap().members().len(), 2);
    }
}
