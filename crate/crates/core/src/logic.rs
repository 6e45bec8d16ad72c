//! Formulas of the set-theoretic language and their boolean values.
//!
//! Connectives are interpreted by the algebra operations. Quantifiers are
//! always bounded: `forall x in t` ranges over `dom(t)` weighted by `t(x)`,
//! and `forall x: rank N` ranges over the enumerated stage `V^(B)_N`.
//! Unbounded quantification over the whole universe is not expressible.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::algebra::{AtomSet, BoolAlgebra, BoolElement};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hf::HFSet;
use crate::universe::{canonical_name, enumerate_universe, BVSet, Evaluator};

/// Default cap on the size of an enumerated stage used by a rank quantifier.
pub const DEFAULT_BUDGET: u64 = 1 << 16;

/// A bound variable. `depth` is its binder's nesting level, assigned at parse
/// time, so evaluation never needs substitution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    pub name: String,
    pub depth: usize,
}

/// A boolean value written in a literal: `0`, `1`, `{a1,a3}` or a named element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementExpr {
    Zero,
    One,
    Atoms(Vec<String>),
    Named(String),
}

impl ElementExpr {
    pub fn resolve(&self, algebra: &BoolAlgebra) -> Result<BoolElement> {
        match self {
            ElementExpr::Zero => Ok(algebra.zero()),
            ElementExpr::One => Ok(algebra.one()),
            ElementExpr::Atoms(names) => algebra.element(names),
            ElementExpr::Named(name) => algebra
                .named(name)
                .or_else(|| algebra.element(&[name]).ok())
                .ok_or_else(|| Error::UnknownElement(name.clone())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    /// An identifier bound in the [`Environment`].
    Const(String),
    /// The canonical name of an HF set.
    Name(HFSet),
    /// `bv { term: element, ... }`
    Literal(Vec<(Term, ElementExpr)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Mem(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForallIn(Var, Term, Box<Formula>),
    ExistsIn(Var, Term, Box<Formula>),
    ForallRank(Var, usize, Box<Formula>),
    ExistsRank(Var, usize, Box<Formula>),
}

impl std::ops::Not for Formula {
    type Output = Formula;

    fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }
}

impl Formula {
    pub fn and(self, other: Self) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }
}

/// An algebra together with named boolean-valued sets.
#[derive(Clone, Debug, PartialEq)]
pub struct Environment {
    algebra: BoolAlgebra,
    bindings: BTreeMap<String, BVSet>,
}

impl Environment {
    pub fn new(algebra: &BoolAlgebra) -> Self {
        Environment { algebra: algebra.clone(), bindings: BTreeMap::new() }
    }

    pub fn algebra(&self) -> &BoolAlgebra {
        &self.algebra
    }

    pub fn bind(&mut self, name: &str, set: BVSet) -> Result<()> {
        if set.algebra() != &self.algebra {
            return Err(Error::MixedAlgebras);
        }
        self.bindings.insert(name.to_string(), set);
        Ok(())
    }

    pub fn with(mut self, name: &str, set: BVSet) -> Result<Self> {
        self.bind(name, set)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&BVSet> {
        self.bindings.get(name)
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&str, &BVSet)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// A named, nonempty family of environments: the value range of the
/// arbitrary universe.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraFamily {
    name: String,
    members: Vec<(String, Environment)>,
}

impl AlgebraFamily {
    pub fn new(name: &str, members: Vec<(String, Environment)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyFamily(name.to_string()));
        }
        Ok(AlgebraFamily { name: name.to_string(), members })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn members(&self) -> &[(String, Environment)] {
        &self.members
    }
}

/// Evaluates formulas in one environment, sharing a memo table and the
/// enumerated stages across calls.
pub struct Interpreter<'e> {
    env: &'e Environment,
    evaluator: Evaluator,
    budget: u64,
    stages: Mutex<HashMap<usize, Arc<Vec<BVSet>>>>,
}

impl<'e> Interpreter<'e> {
    pub fn new(env: &'e Environment) -> Self {
        Self::with_evaluator(env, Evaluator::new(env.algebra()))
    }

    pub fn with_evaluator(env: &'e Environment, evaluator: Evaluator) -> Self {
        Interpreter { env, evaluator, budget: DEFAULT_BUDGET, stages: Mutex::new(HashMap::new()) }
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn eval(&self, formula: &Formula) -> Result<BoolElement> {
        if self.evaluator.algebra() != self.env.algebra() {
            return Err(Error::MixedAlgebras);
        }
        let atoms = self.formula(formula, &mut Vec::new())?;
        Ok(self.env.algebra().from_atoms(atoms))
    }

    pub fn models(&self, formula: &Formula) -> Result<bool> {
        Ok(self.eval(formula)?.is_one())
    }

    pub fn term(&self, term: &Term) -> Result<BVSet> {
        self.term_in(term, &[])
    }

    fn stage(&self, bound: usize) -> Result<Arc<Vec<BVSet>>> {
        if let Some(s) = self.stages.lock().unwrap().get(&bound) {
            return Ok(s.clone());
        }
        let s = Arc::new(enumerate_universe(self.env.algebra(), bound, self.budget)?);
        self.stages.lock().unwrap().insert(bound, s.clone());
        Ok(s)
    }

    fn term_in(&self, term: &Term, stack: &[BVSet]) -> Result<BVSet> {
        let alg = self.env.algebra();
        match term {
            Term::Var(v) => stack.get(v.depth).cloned().ok_or_else(|| Error::Unbound(v.name.clone())),
            Term::Const(name) => self.env.get(name).cloned().ok_or_else(|| Error::Unbound(name.clone())),
            Term::Name(x) => Ok(canonical_name(alg, x)),
            Term::Literal(entries) => {
                let mut out = Vec::with_capacity(entries.len());
                for (k, e) in entries {
                    out.push((self.term_in(k, stack)?, e.resolve(alg)?));
                }
                BVSet::new(alg, out)
            }
        }
    }

    fn formula(&self, formula: &Formula, stack: &mut Vec<BVSet>) -> Result<AtomSet> {
        let top = self.env.algebra().top_atoms();
        Ok(match formula {
            Formula::Eq(s, t) => {
                let (u, v) = (self.term_in(s, stack)?, self.term_in(t, stack)?);
                self.evaluator.bv_eq(&u, &v)?.atoms().clone()
            }
            Formula::Mem(s, t) => {
                let (u, v) = (self.term_in(s, stack)?, self.term_in(t, stack)?);
                self.evaluator.bv_mem(&u, &v)?.atoms().clone()
            }
            Formula::Not(p) => self.formula(p, stack)?.complement_in(top),
            Formula::And(p, q) => self.formula(p, stack)?.and(&self.formula(q, stack)?),
            Formula::Or(p, q) => self.formula(p, stack)?.or(&self.formula(q, stack)?),
            Formula::Implies(p, q) => self.formula(p, stack)?.complement_in(top).or(&self.formula(q, stack)?),
            Formula::ForallIn(_, t, body) => {
                let bound = self.term_in(t, stack)?;
                let mut acc = top.clone();
                for (y, val) in bound.raw_entries() {
                    let b = self.under(y.clone(), body, stack)?;
                    acc = acc.and(&val.complement_in(top).or(&b));
                }
                acc
            }
            Formula::ExistsIn(_, t, body) => {
                let bound = self.term_in(t, stack)?;
                let mut acc = AtomSet::empty(self.env.algebra().atom_count());
                for (y, val) in bound.raw_entries() {
                    let b = self.under(y.clone(), body, stack)?;
                    acc = acc.or(&val.and(&b));
                }
                acc
            }
            Formula::ForallRank(_, n, body) => {
                let mut acc = top.clone();
                for y in self.stage(*n)?.iter() {
                    acc = acc.and(&self.under(y.clone(), body, stack)?);
                }
                acc
            }
            Formula::ExistsRank(_, n, body) => {
                let mut acc = AtomSet::empty(self.env.algebra().atom_count());
                for y in self.stage(*n)?.iter() {
                    acc = acc.or(&self.under(y.clone(), body, stack)?);
                }
                acc
            }
        })
    }

    fn under(&self, value: BVSet, body: &Formula, stack: &mut Vec<BVSet>) -> Result<AtomSet> {
        stack.push(value);
        let r = self.formula(body, stack);
        stack.pop();
        r
    }
}

/// `[[φ]]` in the environment's algebra.
pub fn eval(env: &Environment, formula: &Formula) -> Result<BoolElement> {
    Interpreter::new(env).eval(formula)
}

/// `V^(B) ⊨ φ`, i.e. `[[φ]] = 1`.
pub fn models(env: &Environment, formula: &Formula) -> Result<bool> {
    Interpreter::new(env).models(formula)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MemberReport {
    pub member: String,
    pub value: BoolElement,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KaleidoReport {
    pub family: String,
    pub holds: bool,
    pub members: Vec<MemberReport>,
}

impl KaleidoReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family,
            "holds": self.holds,
            "members": self.members.iter().map(|m| serde_json::json!({
                "member": m.member,
                "value": m.value.to_string(),
                "holds": m.holds,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Truth across a family: `φ` holds iff it has value 1 in every member.
/// Members are evaluated independently; the report keeps family order.
pub fn kaleidoscopic_eval(family: &AlgebraFamily, formula: &Formula, exec: Exec) -> Result<KaleidoReport> {
    let results = exec.map(family.members(), |(name, env)| {
        eval(env, formula)
            .map(|value| MemberReport { member: name.clone(), holds: value.is_one(), value })
            .map_err(|e| Error::Member { member: name.clone(), source: Box::new(e) })
    });
    let members = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(KaleidoReport { family: family.name().to_string(), holds: members.iter().all(|m| m.holds), members })
}
