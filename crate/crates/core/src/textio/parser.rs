use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::lexer::{lex, Tok, Token};
use super::{SpaceDecl, Workspace};
use crate::algebra::BoolAlgebra;
use crate::error::{Error, Result};
use crate::hf::HFSet;
use crate::logic::{AlgebraFamily, ElementExpr, Environment, Formula, Interpreter, Term, Var};
use crate::scott::{ProbSpace, RandomReal};

const KEYWORDS: &[&str] = &["in", "forall", "exists", "rank", "name", "bv"];

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<String>,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Self> {
        Ok(Parser { toks: lex(text)?, pos: 0, scope: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Syntax { line, col, msg: msg.into() })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T> {
        self.err(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.unexpected(&format!("`{}`", tok.symbol()))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("an identifier"),
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                Ok(s.parse().expect("lexer yields digits"))
            }
            _ => self.unexpected("a number"),
        }
    }

    fn small_int(&mut self) -> Result<usize> {
        let (line, col) = self.here();
        let n = self.int()?;
        n.to_string().parse().map_err(|_| Error::Syntax { line, col, msg: "number too large".into() })
    }

    pub(crate) fn end(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    pub(crate) fn hf(&mut self) -> Result<HFSet> {
        self.expect(Tok::LBrace)?;
        let mut elems = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                elems.push(self.hf()?);
                if self.eat(&Tok::RBrace) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(HFSet::from_elements(elems))
    }

    pub(crate) fn element(&mut self) -> Result<ElementExpr> {
        match self.peek().clone() {
            Tok::Int(s) if s == "0" => {
                self.bump();
                Ok(ElementExpr::Zero)
            }
            Tok::Int(s) if s == "1" => {
                self.bump();
                Ok(ElementExpr::One)
            }
            Tok::LBrace => {
                self.bump();
                let mut atoms = Vec::new();
                if !self.eat(&Tok::RBrace) {
                    loop {
                        atoms.push(self.ident()?);
                        if self.eat(&Tok::RBrace) {
                            break;
                        }
                        self.expect(Tok::Comma)?;
                    }
                }
                Ok(ElementExpr::Atoms(atoms))
            }
            Tok::Ident(_) => Ok(ElementExpr::Named(self.ident()?)),
            _ => self.unexpected("a boolean value (`0`, `1`, `{atoms}` or a name)"),
        }
    }

    pub(crate) fn term(&mut self) -> Result<Term> {
        if self.is_kw("name") {
            self.bump();
            self.expect(Tok::LParen)?;
            let x = self.hf()?;
            self.expect(Tok::RParen)?;
            return Ok(Term::Name(x));
        }
        if self.is_kw("bv") {
            self.bump();
            self.expect(Tok::LBrace)?;
            let mut entries = Vec::new();
            if !self.eat(&Tok::RBrace) {
                loop {
                    let k = self.term()?;
                    self.expect(Tok::Colon)?;
                    entries.push((k, self.element()?));
                    if self.eat(&Tok::RBrace) {
                        break;
                    }
                    self.expect(Tok::Comma)?;
                }
            }
            return Ok(Term::Literal(entries));
        }
        if let Tok::Ident(_) = self.peek() {
            let name = self.ident()?;
            return Ok(match self.scope.iter().rposition(|s| *s == name) {
                Some(depth) => Term::Var(Var { name, depth }),
                None => Term::Const(name),
            });
        }
        self.unexpected("a term")
    }

    pub(crate) fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Pipe) {
            f = f.or(self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            f = f.and(self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Tilde) {
            return Ok(!self.unary()?);
        }
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        if self.is_kw("forall") || self.is_kw("exists") {
            return self.quantifier();
        }
        let lhs = self.term()?;
        if self.eat(&Tok::Equals) {
            Ok(Formula::Eq(lhs, self.term()?))
        } else if self.is_kw("in") {
            self.bump();
            Ok(Formula::Mem(lhs, self.term()?))
        } else {
            self.unexpected("`=` or `in`")
        }
    }

    fn quantifier(&mut self) -> Result<Formula> {
        let universal = self.is_kw("forall");
        self.bump();
        let name = self.ident()?;
        let var = Var { name: name.clone(), depth: self.scope.len() };
        if self.is_kw("in") {
            self.bump();
            let bound = self.term()?;
            self.expect(Tok::Colon)?;
            let body = self.body(name)?;
            return Ok(if universal {
                Formula::ForallIn(var, bound, body)
            } else {
                Formula::ExistsIn(var, bound, body)
            });
        }
        self.expect(Tok::Colon)?;
        if !self.is_kw("rank") {
            return self.err(format!(
                "unbounded quantifier over `{name}`: write `{q} {name} in t: ...` or `{q} {name}: rank N: ...`",
                q = if universal { "forall" } else { "exists" }
            ));
        }
        self.bump();
        let n = self.small_int()?;
        self.expect(Tok::Colon)?;
        let body = self.body(name)?;
        Ok(if universal { Formula::ForallRank(var, n, body) } else { Formula::ExistsRank(var, n, body) })
    }

    fn body(&mut self, name: String) -> Result<Box<Formula>> {
        self.scope.push(name);
        let body = self.formula();
        self.scope.pop();
        Ok(Box::new(body?))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let neg = self.eat(&Tok::Minus);
        let numer = self.int()?;
        let denom = if self.eat(&Tok::Slash) {
            let (line, col) = self.here();
            let d = self.int()?;
            if d.is_zero() {
                return Err(Error::Syntax { line, col, msg: "zero denominator".into() });
            }
            d
        } else {
            BigInt::from(1)
        };
        let r = BigRational::new(numer, denom);
        Ok(if neg { -r } else { r })
    }

    /// Attaches a source position to any error that does not carry one.
    fn located<T>(&self, at: (usize, usize), r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            e @ (Error::Syntax { .. } | Error::Located { .. }) => e,
            e => Error::Located { line: at.0, col: at.1, source: Box::new(e) },
        })
    }

    pub(crate) fn workspace(&mut self) -> Result<Workspace> {
        let mut ws = Workspace::default();
        while *self.peek() != Tok::Eof {
            if self.is_kw("algebra") {
                self.algebra_block(&mut ws)?;
            } else if self.is_kw("env") {
                self.env_block(&mut ws)?;
            } else if self.is_kw("family") {
                self.family_block(&mut ws)?;
            } else if self.is_kw("space") {
                self.space_block(&mut ws)?;
            } else {
                return self.unexpected("`algebra`, `env`, `family` or `space`");
            }
        }
        Ok(ws)
    }

    fn define<T>(map: &mut BTreeMap<String, T>, kind: &'static str, name: &str, value: T) -> Result<()> {
        if map.contains_key(name) {
            return Err(Error::DuplicateDefinition { kind, name: name.to_string() });
        }
        map.insert(name.to_string(), value);
        Ok(())
    }

    fn set_stmt(&mut self, env: &mut Environment) -> Result<()> {
        self.expect_kw("set")?;
        let at = self.here();
        let name = self.ident()?;
        self.expect(Tok::Equals)?;
        let term_at = self.here();
        let term = self.term()?;
        self.expect(Tok::Semi)?;
        if env.get(&name).is_some() {
            return self.located(at, Err(Error::DuplicateDefinition { kind: "set", name }));
        }
        let value = self.located(term_at, Interpreter::new(env).term(&term))?;
        env.bind(&name, value)
    }

    fn algebra_block(&mut self, ws: &mut Workspace) -> Result<()> {
        self.expect_kw("algebra")?;
        let at = self.here();
        let name = self.ident()?;
        self.expect(Tok::LBrace)?;
        self.expect_kw("atoms")?;
        self.expect(Tok::Colon)?;
        let atoms_at = self.here();
        let mut atoms = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            atoms.push(self.ident()?);
        }
        self.expect(Tok::Semi)?;
        let mut alg = self.located(atoms_at, BoolAlgebra::new(atoms))?;
        while self.is_kw("let") {
            self.bump();
            let let_at = self.here();
            let ename = self.ident()?;
            self.expect(Tok::Equals)?;
            let e = self.element()?;
            self.expect(Tok::Semi)?;
            let value = self.located(let_at, e.resolve(&alg))?;
            alg = self.located(let_at, alg.with_named_element(&ename, &value))?;
        }
        let mut env = Environment::new(&alg);
        while self.is_kw("set") {
            self.set_stmt(&mut env)?;
        }
        self.expect(Tok::RBrace)?;
        self.located(at, Self::define(&mut ws.algebras, "algebra", &name, alg))?;
        self.located(at, Self::define(&mut ws.environments, "environment", &name, env))
    }

    fn env_block(&mut self, ws: &mut Workspace) -> Result<()> {
        self.expect_kw("env")?;
        let at = self.here();
        let name = self.ident()?;
        self.expect_kw("over")?;
        let alg_at = self.here();
        let alg_name = self.ident()?;
        let alg = match ws.algebras.get(&alg_name) {
            Some(a) => a.clone(),
            None => return self.located(alg_at, Err(Error::Unbound(alg_name))),
        };
        self.expect(Tok::LBrace)?;
        let mut env = Environment::new(&alg);
        while self.is_kw("set") {
            self.set_stmt(&mut env)?;
        }
        self.expect(Tok::RBrace)?;
        ws.env_algebra.insert(name.clone(), alg_name);
        self.located(at, Self::define(&mut ws.environments, "environment", &name, env))
    }

    fn family_block(&mut self, ws: &mut Workspace) -> Result<()> {
        self.expect_kw("family")?;
        let at = self.here();
        let name = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut members = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                let m_at = self.here();
                let m = self.ident()?;
                let env = match ws.environments.get(&m) {
                    Some(e) => e.clone(),
                    None => return self.located(m_at, Err(Error::Unbound(m))),
                };
                if members.iter().any(|(n, _)| *n == m) {
                    return self.located(m_at, Err(Error::DuplicateDefinition { kind: "family member", name: m }));
                }
                members.push((m, env));
                if self.eat(&Tok::RBrace) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        let fam = self.located(at, AlgebraFamily::new(&name, members))?;
        self.located(at, Self::define(&mut ws.families, "family", &name, fam))
    }

    fn space_block(&mut self, ws: &mut Workspace) -> Result<()> {
        self.expect_kw("space")?;
        let at = self.here();
        let name = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut worlds: Vec<(String, BigRational)> = Vec::new();
        let mut reals: Vec<((usize, usize), String, Vec<BigRational>)> = Vec::new();
        while *self.peek() != Tok::RBrace {
            if self.is_kw("rr") && matches!(self.peek_at(1), Tok::Ident(_)) && *self.peek_at(2) == Tok::Equals {
                self.bump();
                let rr_at = self.here();
                let rname = self.ident()?;
                self.expect(Tok::Equals)?;
                self.expect(Tok::LParen)?;
                let mut values = vec![self.rational()?];
                while self.eat(&Tok::Comma) {
                    values.push(self.rational()?);
                }
                self.expect(Tok::RParen)?;
                reals.push((rr_at, rname, values));
            } else {
                let w = self.ident()?;
                self.expect(Tok::Colon)?;
                worlds.push((w, self.rational()?));
            }
            if !self.eat(&Tok::Semi) {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        let space = self.located(at, ProbSpace::new(worlds))?;
        let mut decl = SpaceDecl { space: space.clone(), reals: BTreeMap::new() };
        for (rr_at, rname, values) in reals {
            let rr = self.located(rr_at, RandomReal::new(&space, values))?;
            self.located(rr_at, Self::define(&mut decl.reals, "random real", &rname, rr))?;
        }
        self.located(at, Self::define(&mut ws.spaces, "space", &name, decl))
    }
}
