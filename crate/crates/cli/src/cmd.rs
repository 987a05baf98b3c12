//! Argument parsing, validated run configuration and command dispatch.

use std::path::PathBuf;

use cetcs::axioms::{self, Axiom, AxiomError, Sampling, Scope, Theorem, EXHAUSTIVE_LIMIT};
use cetcs::finset::{
    coequalizer, equalizer, exponential, image_factorization, pi_diagram, product, pullback,
    quotient, sum, FinMor, FinObj, PiDiagram,
};
use cetcs::logic::{self, Compiler, Context, LogicError, Mutation};
use cetcs::Report;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::model::{self, render_morphism, render_object, render_relation, LoadError, ModelError, ModelFile};

#[derive(Debug, Parser)]
#[command(name = "cetcs", version, about = "Check the CETCS axioms and compile formulas in finite sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
    /// Largest carrier size enumerated by checks.
    #[arg(long, global = true, env = "CETCS_BOUND", default_value_t = 3)]
    pub bound: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include wall-clock times in reports.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Draw this many instances per family instead of enumerating (bounds above 4 only).
    #[arg(long, global = true)]
    pub sample: Option<usize>,
    /// Seed for --sample.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Check axioms and theorems on the finite-set model.
    Check {
        /// Axiom id or `all`; repeatable.
        #[arg(long)]
        axiom: Vec<String>,
        /// Theorem id or `all`; repeatable.
        #[arg(long)]
        theorem: Vec<String>,
        /// Model files whose objects join the enumerated carriers.
        models: Vec<PathBuf>,
    },
    /// Build a universal construction over declared operands.
    Construct {
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        r: Option<String>,
        /// Name of the constructed object; also prefixes its morphisms.
        #[arg(long)]
        name: Option<String>,
        models: Vec<PathBuf>,
    },
    /// Compile a formula to a relation and print its membership table.
    Compile {
        #[arg(long, default_value = "")]
        context: String,
        #[arg(long)]
        formula: String,
        /// Compare every tuple with direct evaluation.
        #[arg(long)]
        verify: bool,
        /// Print the constructions used.
        #[arg(long)]
        trace: bool,
        /// Compile with one rule deliberately broken; `--verify` should then fail.
        #[arg(long, value_enum)]
        mutation: Option<Broken>,
        models: Vec<PathBuf>,
    },
    /// Build the Π-diagram of `Y -g-> X -f-> I`.
    Pi {
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        check_universal: bool,
        models: Vec<PathBuf>,
    },
    /// Run every axiom and theorem check.
    Report { models: Vec<PathBuf> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Broken {
    OrAsAnd,
    ImpliesIgnoresAntecedent,
    ForallAsExists,
    EqAsTrue,
}

impl From<Broken> for Mutation {
    fn from(b: Broken) -> Mutation {
        match b {
            Broken::OrAsAnd => Mutation::OrAsAnd,
            Broken::ImpliesIgnoresAntecedent => Mutation::ImpliesIgnoresAntecedent,
            Broken::ForallAsExists => Mutation::ForallAsExists,
            Broken::EqAsTrue => Mutation::EqAsTrue,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Product,
    Sum,
    Equalizer,
    Coequalizer,
    Pullback,
    Pi,
    Image,
    Quotient,
    Exponential,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{path}: {source}")]
    Merge { path: String, source: ModelError },
    #[error("conflicting flags: {0}")]
    Conflict(String),
    #[error("{0}")]
    Axiom(#[from] AxiomError),
    #[error("missing flag --{0}")]
    MissingFlag(&'static str),
    #[error("undeclared {what} {name}")]
    Undeclared { what: &'static str, name: String },
    #[error("{0}")]
    Logic(#[from] LogicError),
    #[error("{0}")]
    Construction(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Check { axioms: Vec<Axiom>, theorems: Vec<Theorem> },
    Construct { op: Op, operands: Operands, name: Option<String> },
    Compile { context: String, formula: String, verify: bool, trace: bool, mutation: Option<Mutation> },
    Pi { g: String, f: String, check_universal: bool },
    Report,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Operands {
    pub a: Option<String>,
    pub b: Option<String>,
    pub f: Option<String>,
    pub g: Option<String>,
    pub r: Option<String>,
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub bound: usize,
    pub format: Format,
    pub sampling: Option<Sampling>,
    pub timing: bool,
}

fn items<T: Copy + PartialEq + std::str::FromStr<Err = AxiomError>>(
    names: &[String],
    all: &[T],
) -> Result<Vec<T>, AxiomError> {
    let mut out = Vec::new();
    for n in names {
        let chosen = if n.eq_ignore_ascii_case("all") { all.to_vec() } else { vec![n.parse()?] };
        for t in chosen {
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        if cli.bound == 0 {
            return Err(AxiomError::Bound.into());
        }
        let sampling = match (cli.sample, cli.seed) {
            (None, Some(_)) => return Err(CliError::Conflict("--seed needs --sample".into())),
            (None, None) => None,
            (Some(_), _) if cli.bound <= EXHAUSTIVE_LIMIT => {
                return Err(CliError::Conflict(format!(
                    "--sample needs --bound above {EXHAUSTIVE_LIMIT}, got {}",
                    cli.bound
                )))
            }
            (Some(samples), seed) => Some(Sampling { seed: seed.unwrap_or(0), samples }),
        };
        let (command, inputs) = match cli.command {
            CommandArgs::Check { axiom, theorem, models } => {
                let (mut axioms, theorems) = (items(&axiom, Axiom::ALL)?, items(&theorem, Theorem::ALL)?);
                if axiom.is_empty() && theorem.is_empty() {
                    axioms = Axiom::ALL.to_vec();
                }
                (Command::Check { axioms, theorems }, models)
            }
            CommandArgs::Construct { op, a, b, f, g, r, name, models } => {
                (Command::Construct { op, operands: Operands { a, b, f, g, r }, name }, models)
            }
            CommandArgs::Compile { context, formula, verify, trace, mutation, models } => {
                let mutation = mutation.map(Mutation::from);
                (Command::Compile { context, formula, verify, trace, mutation }, models)
            }
            CommandArgs::Pi { g, f, check_universal, models } => (Command::Pi { g, f, check_universal }, models),
            CommandArgs::Report { models } => (Command::Report, models),
        };
        let checks = matches!(command, Command::Check { .. } | Command::Report);
        if sampling.is_some() && !checks {
            return Err(CliError::Conflict("--sample applies to check and report only".into()));
        }
        Ok(RunConfig { command, inputs, bound: cli.bound, format: cli.format, sampling, timing: cli.timing })
    }

    fn scope(&self, model: &ModelFile) -> Result<Scope, CliError> {
        let scope = match self.sampling {
            Some(s) => Scope::sampled(self.bound, s.seed, s.samples)?,
            None => Scope::new(self.bound)?,
        };
        Ok(scope.with_objects(model.objects()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }

    fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub output: String,
}

/// Loads every input, in order, into one model.
pub fn load_all(paths: &[PathBuf]) -> Result<ModelFile, CliError> {
    let mut m = ModelFile::default();
    for p in paths {
        m.extend(model::load(p)?)
            .map_err(|source| CliError::Merge { path: p.display().to_string(), source })?;
    }
    Ok(m)
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let model = load_all(&cfg.inputs)?;
    match &cfg.command {
        Command::Check { axioms, theorems } => {
            let scope = cfg.scope(&model)?;
            let mut reports: Vec<Report> = axioms.iter().map(|&a| axioms::run_axiom(a, &scope)).collect();
            reports.extend(theorems.iter().map(|&t| axioms::run_theorem(t, &scope)));
            Ok(reports_outcome(cfg, reports))
        }
        Command::Report => {
            let scope = cfg.scope(&model)?;
            let mut reports = axioms::run_all_axioms(&scope);
            reports.extend(axioms::run_all_theorems(&scope));
            Ok(reports_outcome(cfg, reports))
        }
        Command::Construct { op, operands, name } => {
            let lines = construct(&model, *op, operands, name.as_deref())?;
            Ok(Outcome { status: Status::Pass, output: declarations(cfg.format, &lines) })
        }
        Command::Compile { context, formula, verify, trace, mutation } => {
            let mut compiler = Compiler::new(model.signature());
            if let Some(m) = mutation {
                compiler = compiler.with_mutation(*m);
            }
            compile(cfg, &compiler, context, formula, *verify, *trace)
        }
        Command::Pi { g, f, check_universal } => pi(cfg, &model, g, f, *check_universal),
    }
}

fn finish(cfg: &RunConfig, r: Report) -> Report {
    if cfg.timing {
        r
    } else {
        r.without_timing()
    }
}

fn reports_outcome(cfg: &RunConfig, reports: Vec<Report>) -> Outcome {
    let reports: Vec<Report> = reports.into_iter().map(|r| finish(cfg, r)).collect();
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let output = match cfg.format {
        Format::Text => {
            let mut s: String = reports.iter().map(|r| r.to_string()).collect();
            s.push_str(&format!("summary: {} passed, {failed} failed\n", reports.len() - failed));
            s
        }
        Format::Json => json_line(&reports),
    };
    Outcome { status: Status::of(failed == 0), output }
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn declarations(format: Format, lines: &[String]) -> String {
    match format {
        Format::Text => lines.iter().map(|l| format!("{l}\n")).collect(),
        Format::Json => json_line(&json!({ "declarations": lines })),
    }
}

fn object_arg<'m>(model: &'m ModelFile, flag: &'static str, v: &Option<String>) -> Result<(&'m FinObj, String), CliError> {
    let name = v.clone().ok_or(CliError::MissingFlag(flag))?;
    let obj = model.object(&name).ok_or_else(|| CliError::Undeclared { what: "object", name: name.clone() })?;
    Ok((obj, name))
}

/// A declared morphism with its domain and codomain names.
fn morphism_arg<'m>(
    model: &'m ModelFile,
    flag: &'static str,
    v: Option<&str>,
) -> Result<(&'m FinMor, String, String), CliError> {
    let name = v.ok_or(CliError::MissingFlag(flag))?;
    let decl = model
        .signature()
        .morphism(name, 0)
        .map_err(|_| CliError::Undeclared { what: "morphism", name: name.into() })?;
    Ok((&decl.mor, decl.dom.clone(), decl.cod.clone()))
}

fn fail(e: impl std::fmt::Display) -> CliError {
    CliError::Construction(e.to_string())
}

fn pi_lines(n: &str, d: &PiDiagram, y: &str, x: &str, i: &str) -> Vec<String> {
    let apex = format!("{n}_P");
    vec![
        render_object(n, &d.params),
        render_object(&apex, &d.apex),
        render_morphism(&format!("{n}_phi"), n, i, &d.phi),
        render_morphism(&format!("{n}_pi1"), &apex, n, &d.pi1),
        render_morphism(&format!("{n}_pi2"), &apex, x, &d.pi2),
        render_morphism(&format!("{n}_ev"), &apex, y, &d.ev),
    ]
}

/// The construction as model declarations that can be appended to the input.
pub fn construct(model: &ModelFile, op: Op, o: &Operands, name: Option<&str>) -> Result<Vec<String>, CliError> {
    let default = match op {
        Op::Product | Op::Pullback => "P",
        Op::Sum => "S",
        Op::Equalizer | Op::Exponential => "E",
        Op::Coequalizer | Op::Quotient => "Q",
        Op::Pi => "F",
        Op::Image => "I",
    };
    let n = name.unwrap_or(default);
    let m = |suffix: &str| format!("{n}_{suffix}");
    let lines = match op {
        Op::Product => {
            let ((a, an), (b, bn)) = (object_arg(model, "a", &o.a)?, object_arg(model, "b", &o.b)?);
            let p = product(a, b);
            vec![
                render_object(n, &p.apex),
                render_morphism(&m("p0"), n, &an, &p.projections[0]),
                render_morphism(&m("p1"), n, &bn, &p.projections[1]),
            ]
        }
        Op::Sum => {
            let ((a, an), (b, bn)) = (object_arg(model, "a", &o.a)?, object_arg(model, "b", &o.b)?);
            let s = sum(a, b);
            vec![
                render_object(n, &s.apex),
                render_morphism(&m("inl"), &an, n, &s.inl),
                render_morphism(&m("inr"), &bn, n, &s.inr),
            ]
        }
        Op::Equalizer | Op::Coequalizer => {
            let (f, fd, fc) = morphism_arg(model, "f", o.f.as_deref())?;
            let (g, _, _) = morphism_arg(model, "g", o.g.as_deref())?;
            if op == Op::Equalizer {
                let e = equalizer(f, g).map_err(fail)?;
                vec![render_object(n, e.dom()), render_morphism(&m("e"), n, &fd, &e)]
            } else {
                let q = coequalizer(f, g).map_err(fail)?;
                vec![render_object(n, q.cod()), render_morphism(&m("q"), &fc, n, &q)]
            }
        }
        Op::Pullback => {
            let (f, fd, _) = morphism_arg(model, "f", o.f.as_deref())?;
            let (g, gd, _) = morphism_arg(model, "g", o.g.as_deref())?;
            let sq = pullback(f, g).map_err(fail)?;
            vec![
                render_object(n, &sq.apex),
                render_morphism(&m("pi1"), n, &fd, &sq.pi1),
                render_morphism(&m("pi2"), n, &gd, &sq.pi2),
            ]
        }
        Op::Pi => {
            let (g, gd, gc) = morphism_arg(model, "g", o.g.as_deref())?;
            let (f, _, fc) = morphism_arg(model, "f", o.f.as_deref())?;
            let d = pi_diagram(g, f).map_err(fail)?;
            pi_lines(n, &d, &gd, &gc, &fc)
        }
        Op::Image => {
            let (f, fd, fc) = morphism_arg(model, "f", o.f.as_deref())?;
            let im = image_factorization(f);
            vec![
                render_object(n, im.mono.dom()),
                render_morphism(&m("cover"), &fd, n, &im.cover),
                render_morphism(&m("mono"), n, &fc, &im.mono),
            ]
        }
        Op::Quotient => {
            let rn = o.r.as_deref().ok_or(CliError::MissingFlag("r"))?;
            let decl = model
                .signature()
                .relation(rn, 0)
                .map_err(|_| CliError::Undeclared { what: "relation", name: rn.into() })?;
            let q = quotient(&decl.rel).map_err(fail)?;
            let x = decl.sorts.first().ok_or_else(|| fail("quotient needs a binary relation"))?;
            vec![render_object(n, q.cod()), render_morphism(&m("q"), x, n, &q)]
        }
        Op::Exponential => {
            let ((x, xn), (y, yn)) = (object_arg(model, "a", &o.a)?, object_arg(model, "b", &o.b)?);
            let e = exponential(x, y);
            vec![render_object(n, &e.obj), render_relation(&m("eval"), &[n, &xn, &yn], &e.eval)]
        }
    };
    let taken: Vec<&str> = model.decls().iter().map(|d| d.name.as_str()).collect();
    if let Some(clash) = lines.iter().filter_map(|l| l.split(' ').nth(1)).find(|n| taken.contains(n)) {
        return Err(fail(format!("{clash} is already declared; choose another --name")));
    }
    Ok(lines)
}

fn render_tuple(ctx: &Context, t: &[usize]) -> String {
    let parts: Vec<String> =
        (0..ctx.len()).map(|k| format!("{}={}", ctx.var(k), ctx.objects()[k].label(t[k]))).collect();
    format!("({})", parts.join(", "))
}

fn compile(
    cfg: &RunConfig,
    compiler: &Compiler<'_>,
    context: &str,
    formula: &str,
    verify: bool,
    trace: bool,
) -> Result<Outcome, CliError> {
    let sig = compiler.signature();
    let ctx = logic::parse_context(sig, context)?;
    let phi = logic::parse(sig, &ctx, formula)?;
    let compiled = compiler.compile(&ctx, &phi)?;
    let table: Vec<(String, bool)> =
        ctx.tuples().iter().map(|t| (render_tuple(&ctx, t), compiled.relation.contains(t))).collect();
    let report = if verify { Some(finish(cfg, logic::verify_with(compiler, &ctx, &phi)?)) } else { None };
    let status = Status::of(report.as_ref().is_none_or(Report::passed));
    let steps: Vec<String> = compiled.trace.iter().map(|s| s.to_string()).collect();
    let output = match cfg.format {
        Format::Text => {
            let mut s = format!("context {ctx}\nformula {phi}\n");
            for (t, m) in &table {
                s.push_str(&format!("{t} {}\n", u8::from(*m)));
            }
            let members = table.iter().filter(|(_, m)| *m).count();
            s.push_str(&format!("members {members} of {}\n", table.len()));
            if trace {
                s.push_str(&format!("trace {}\n", compiled.trace_string()));
            }
            if let Some(r) = &report {
                s.push_str(&r.to_string());
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = table.iter().map(|(t, m)| json!({ "tuple": t, "member": m })).collect();
            let mut v = json!({ "context": ctx.to_string(), "formula": phi.to_string(), "table": rows });
            if trace {
                v["trace"] = json!(steps);
            }
            if let Some(r) = &report {
                v["report"] = serde_json::to_value(r).expect("serializable");
            }
            json_line(&v)
        }
    };
    Ok(Outcome { status, output })
}

fn pi(cfg: &RunConfig, model: &ModelFile, g: &str, f: &str, check: bool) -> Result<Outcome, CliError> {
    let (gm, gd, gc) = morphism_arg(model, "g", Some(g))?;
    let (fm, _, fc) = morphism_arg(model, "f", Some(f))?;
    let d = pi_diagram(gm, fm).map_err(fail)?;
    let lines = pi_lines("F", &d, &gd, &gc, &fc);
    let report = if check { Some(finish(cfg, axioms::check_pi_universal(&d, gm, fm)?)) } else { None };
    let status = Status::of(report.as_ref().is_none_or(Report::passed));
    let output = match (cfg.format, &report) {
        (Format::Text, r) => {
            let mut s = declarations(Format::Text, &lines);
            s.push_str(&format!("sections {}\n", d.params.len()));
            if let Some(r) = r {
                s.push_str(&r.to_string());
            }
            s
        }
        (Format::Json, r) => {
            let mut v = json!({ "declarations": lines, "sections": d.params.len() });
            if let Some(r) = r {
                v["report"] = serde_json::to_value(r).expect("serializable");
            }
            json_line(&v)
        }
    };
    Ok(Outcome { status, output })
}
