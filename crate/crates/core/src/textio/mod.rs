//! Text formats: algebras, boolean values, boolean-valued sets, HF literals,
//! formulas, probability spaces and `.bvw` workspace files.
//!
//! The grammar is documented in `docs/grammar.md`. Parsing stops at the
//! first error and reports its line and column. Every serializer emits text
//! that parses back to an equal value.

mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::algebra::{BoolAlgebra, BoolElement};
use crate::error::{Error, Result};
use crate::hf::HFSet;
use crate::logic::{AlgebraFamily, ElementExpr, Environment, Formula, Interpreter, Term};
use crate::scott::{ProbSpace, RandomReal, Rational};
use crate::universe::BVSet;

use parser::Parser;

/// A probability space with its declared random reals.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceDecl {
    pub space: ProbSpace,
    pub reals: BTreeMap<String, RandomReal>,
}

/// The contents of a `.bvw` file. Every `algebra` block also defines an
/// environment of the same name holding the block's `set` declarations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Workspace {
    pub algebras: BTreeMap<String, BoolAlgebra>,
    pub environments: BTreeMap<String, Environment>,
    pub spaces: BTreeMap<String, SpaceDecl>,
    pub families: BTreeMap<String, AlgebraFamily>,
    /// Algebra name of each `env ... over ...` block.
    pub(crate) env_algebra: BTreeMap<String, String>,
}

impl Workspace {
    pub fn algebra(&self, name: &str) -> Result<&BoolAlgebra> {
        self.algebras.get(name).ok_or_else(|| Error::Unbound(name.to_string()))
    }

    pub fn environment(&self, name: &str) -> Result<&Environment> {
        self.environments.get(name).ok_or_else(|| Error::Unbound(name.to_string()))
    }

    pub fn family(&self, name: &str) -> Result<&AlgebraFamily> {
        self.families.get(name).ok_or_else(|| Error::Unbound(name.to_string()))
    }

    pub fn space(&self, name: &str) -> Result<&SpaceDecl> {
        self.spaces.get(name).ok_or_else(|| Error::Unbound(name.to_string()))
    }
}

pub fn parse_workspace(text: &str) -> Result<Workspace> {
    let mut p = Parser::new(text)?;
    p.workspace()
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.end()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.end()?;
    Ok(t)
}

pub fn parse_hf(text: &str) -> Result<HFSet> {
    let mut p = Parser::new(text)?;
    let x = p.hf()?;
    p.end()?;
    Ok(x)
}

pub fn parse_element(algebra: &BoolAlgebra, text: &str) -> Result<BoolElement> {
    let mut p = Parser::new(text)?;
    let e = p.element()?;
    p.end()?;
    e.resolve(algebra)
}

/// Parses and evaluates a closed set term (`name(...)`, `bv {...}`, or an
/// identifier bound in `env`).
pub fn parse_bvset(env: &Environment, text: &str) -> Result<BVSet> {
    Interpreter::new(env).term(&parse_term(text)?)
}

/// Values with a canonical textual form.
pub trait ToText {
    fn to_text(&self) -> String;
}

pub fn serialize<T: ToText + ?Sized>(value: &T) -> String {
    value.to_text()
}

impl ToText for BoolElement {
    fn to_text(&self) -> String {
        self.to_string()
    }
}

impl ToText for HFSet {
    fn to_text(&self) -> String {
        self.to_string()
    }
}

impl ToText for BVSet {
    fn to_text(&self) -> String {
        bvset_to_text(self)
    }
}

impl ToText for Formula {
    fn to_text(&self) -> String {
        let mut s = String::new();
        write_formula(&mut s, self);
        s
    }
}

impl ToText for Term {
    fn to_text(&self) -> String {
        let mut s = String::new();
        write_term(&mut s, self);
        s
    }
}

impl ToText for Workspace {
    fn to_text(&self) -> String {
        workspace_to_text(self)
    }
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Canonical names print as `name({...})`, everything else as `bv {...}`.
pub fn bvset_to_text(u: &BVSet) -> String {
    if let Some(x) = u.as_canonical() {
        return format!("name({x})");
    }
    let entries: Vec<String> = u.entries().map(|(k, v)| format!("{}: {}", bvset_to_text(k), v)).collect();
    if entries.is_empty() {
        "bv {}".into()
    } else {
        format!("bv {{ {} }}", entries.join(", "))
    }
}

fn write_element(out: &mut String, e: &ElementExpr) {
    match e {
        ElementExpr::Zero => out.push('0'),
        ElementExpr::One => out.push('1'),
        ElementExpr::Atoms(a) => {
            let _ = write!(out, "{{{}}}", a.join(","));
        }
        ElementExpr::Named(n) => out.push_str(n),
    }
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) => out.push_str(&v.name),
        Term::Const(c) => out.push_str(c),
        Term::Name(x) => {
            let _ = write!(out, "name({x})");
        }
        Term::Literal(entries) => {
            out.push_str("bv {");
            for (i, (k, e)) in entries.iter().enumerate() {
                out.push_str(if i == 0 { " " } else { ", " });
                write_term(out, k);
                out.push_str(": ");
                write_element(out, e);
            }
            out.push_str(if entries.is_empty() { "}" } else { " }" });
        }
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    let binary = |out: &mut String, op: &str, p: &Formula, q: &Formula| {
        out.push('(');
        write_formula(out, p);
        let _ = write!(out, " {op} ");
        write_formula(out, q);
        out.push(')');
    };
    match f {
        Formula::Eq(s, t) | Formula::Mem(s, t) => {
            write_term(out, s);
            out.push_str(if matches!(f, Formula::Eq(..)) { " = " } else { " in " });
            write_term(out, t);
        }
        Formula::Not(p) => {
            out.push_str("~(");
            write_formula(out, p);
            out.push(')');
        }
        Formula::And(p, q) => binary(out, "&", p, q),
        Formula::Or(p, q) => binary(out, "|", p, q),
        Formula::Implies(p, q) => binary(out, "->", p, q),
        Formula::ForallIn(v, t, body) | Formula::ExistsIn(v, t, body) => {
            let q = if matches!(f, Formula::ForallIn(..)) { "forall" } else { "exists" };
            let _ = write!(out, "({q} {} in ", v.name);
            write_term(out, t);
            out.push_str(": ");
            write_formula(out, body);
            out.push(')');
        }
        Formula::ForallRank(v, n, body) | Formula::ExistsRank(v, n, body) => {
            let q = if matches!(f, Formula::ForallRank(..)) { "forall" } else { "exists" };
            let _ = write!(out, "({q} {}: rank {n}: ", v.name);
            write_formula(out, body);
            out.push(')');
        }
    }
}

fn write_sets(out: &mut String, env: &Environment) {
    for (name, set) in env.bindings() {
        let _ = writeln!(out, "  set {name} = {};", bvset_to_text(set));
    }
}

/// Deterministic workspace text: algebras, then extra environments, spaces
/// and families, each sorted by name.
pub fn workspace_to_text(ws: &Workspace) -> String {
    let mut out = String::new();
    for (name, alg) in &ws.algebras {
        let _ = writeln!(out, "algebra {name} {{");
        let _ = writeln!(out, "  atoms: {};", alg.atom_names().join(" "));
        for (ename, e) in alg.element_names() {
            let _ = writeln!(out, "  let {ename} = {};", braces(&e));
        }
        if let Some(env) = ws.environments.get(name) {
            write_sets(&mut out, env);
        }
        let _ = writeln!(out, "}}");
    }
    for (name, alg_name) in &ws.env_algebra {
        let _ = writeln!(out, "env {name} over {alg_name} {{");
        write_sets(&mut out, &ws.environments[name]);
        let _ = writeln!(out, "}}");
    }
    for (name, decl) in &ws.spaces {
        let _ = writeln!(out, "space {name} {{");
        for (w, p) in decl.space.worlds().iter().zip(decl.space.weights()) {
            let _ = writeln!(out, "  {w}: {};", Rational(p));
        }
        for (rname, rr) in &decl.reals {
            let vals: Vec<String> = rr.values().iter().map(|v| Rational(v).to_string()).collect();
            let _ = writeln!(out, "  rr {rname} = ({});", vals.join(", "));
        }
        let _ = writeln!(out, "}}");
    }
    for (name, fam) in &ws.families {
        let members: Vec<&str> = fam.members().iter().map(|(n, _)| n.as_str()).collect();
        let _ = writeln!(out, "family {name} {{ {} }}", members.join(", "));
    }
    out
}

// `let` bindings keep their exact atom set, so 1 and 0 are spelled out too.
fn braces(e: &BoolElement) -> String {
    format!("{{{}}}", e.atom_names().join(","))
}
