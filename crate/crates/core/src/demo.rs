//! The worked example over the four-element algebra: two sets `ξ` and `η`
//! whose equality value is computed twice, once by the evaluator and once by
//! a naive expansion of the membership and equality clauses that shares no
//! code with it.

use std::fmt::Write as _;

use crate::algebra::BoolAlgebra;
use crate::error::{Error, Result};
use crate::textio::{bvset_to_text, parse_workspace};
use crate::universe::{BVSet, Evaluator};

/// The value printed in the source text for `[[ξ = η]]`.
pub const ASSERTED_VALUE: &str = "1";

const EXAMPLE: &str = r#"
algebra B0 {
  atoms: a b;
  set u = bv { name({}): {a}, name({{}}): {b} };
  set v = bv { name({}): {b}, name({{}}): {a} };
  set xi = bv { name({}): 1, bv { name({}): 1 }: 1 };
  set eta = bv { u: 1, v: 1 };
  set u' = bv { name({}): {a} };
  set v' = bv { name({}): {b} };
  set eta' = bv { u': 1, v': 1 };
}
"#;

/// A boolean-valued set as a bare tree with values as atom bitmasks. The
/// label is only used in the trace.
#[derive(Clone, Debug)]
struct Tree {
    label: String,
    entries: Vec<(Tree, u64)>,
}

impl Tree {
    fn from_set(u: &BVSet, names: &[(String, BVSet)]) -> Tree {
        let label = match (names.iter().find(|(_, s)| s == u), u.as_canonical()) {
            (Some((n, _)), _) => n.clone(),
            (None, Some(x)) => x.to_string(),
            (None, None) => bvset_to_text(u),
        };
        let entries = u
            .entries()
            .map(|(k, v)| (Tree::from_set(k, names), v.atoms().iter().fold(0u64, |m, i| m | 1 << i)))
            .collect();
        Tree { label, entries }
    }
}

struct Expander<'a> {
    names: &'a [String],
    top: u64,
    trace: Vec<String>,
}

impl Expander<'_> {
    fn show(&self, m: u64) -> String {
        if m == 0 {
            return "0".into();
        }
        if m == self.top {
            return "1".into();
        }
        let names: Vec<&str> = (0..self.names.len()).filter(|i| m >> i & 1 == 1).map(|i| self.names[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    // [[u ∈ v]] = ⋁_y v(y) ∧ [[y = u]]
    fn mem(&mut self, u: &Tree, v: &Tree, depth: usize) -> u64 {
        let mut acc = 0;
        for (y, vy) in &v.entries {
            acc |= vy & self.eq(y, u, depth + 1);
        }
        self.note(depth, format!("[[{} in {}]]", u.label, v.label), acc);
        acc
    }

    // [[u = v]] = ⋀_{y ∈ dom v} (v(y) ⇒ [[y ∈ u]]) ∧ ⋀_{y ∈ dom u} (u(y) ⇒ [[y ∈ v]])
    fn eq(&mut self, u: &Tree, v: &Tree, depth: usize) -> u64 {
        let mut acc = self.top;
        for (y, vy) in &v.entries {
            acc &= (!vy & self.top) | self.mem(y, u, depth + 1);
        }
        for (y, uy) in &u.entries {
            acc &= (!uy & self.top) | self.mem(y, v, depth + 1);
        }
        self.note(depth, format!("[[{} = {}]]", u.label, v.label), acc);
        acc
    }

    fn note(&mut self, depth: usize, what: String, value: u64) {
        let line = format!("{}{what} = {}", "  ".repeat(depth), self.show(value));
        self.trace.push(line);
    }
}

/// Brute-force `[[u = v]]` with a post-order trace of every sub-evaluation.
/// Sets found in `names` are printed by name. Handles at most 64 atoms.
pub fn expand_eq(u: &BVSet, v: &BVSet, names: &[(String, BVSet)]) -> Result<(u64, Vec<String>)> {
    let alg = u.algebra();
    if alg != v.algebra() {
        return Err(Error::MixedAlgebras);
    }
    if alg.atom_count() > 64 {
        return Err(Error::TooManyAtoms { atoms: alg.atom_count(), what: "the expansion oracle" });
    }
    let top = if alg.atom_count() == 64 { u64::MAX } else { (1u64 << alg.atom_count()) - 1 };
    let mut ex = Expander { names: alg.atom_names(), top, trace: Vec::new() };
    let value = ex.eq(&Tree::from_set(u, names), &Tree::from_set(v, names), 0);
    Ok((value, ex.trace))
}

#[derive(Clone, Debug)]
pub struct PaperExample {
    pub algebra: BoolAlgebra,
    pub sets: Vec<(String, BVSet)>,
    /// `[[ξ = η]]` from the evaluator.
    pub evaluator: String,
    /// `[[ξ = η]]` from the expansion oracle.
    pub oracle: String,
    pub trace: Vec<String>,
    /// `[[ξ = η']]` for the anti-correlated pair.
    pub adjusted: String,
    pub adjusted_oracle: String,
}

pub fn paper_example() -> Result<PaperExample> {
    let ws = parse_workspace(EXAMPLE)?;
    let env = ws.environment("B0")?;
    let alg = env.algebra().clone();
    let get = |n: &str| env.get(n).cloned().ok_or_else(|| Error::Unbound(n.into()));
    let (xi, eta, eta2) = (get("xi")?, get("eta")?, get("eta'")?);
    let ev = Evaluator::new(&alg);
    let sets = ["u", "v", "xi", "eta", "u'", "v'", "eta'"]
        .iter()
        .map(|n| get(n).map(|s| (n.to_string(), s)))
        .collect::<Result<Vec<_>>>()?;
    let (raw, trace) = expand_eq(&xi, &eta, &sets)?;
    let (raw2, _) = expand_eq(&xi, &eta2, &sets)?;
    let show = |m: u64| alg.from_atoms(crate::algebra::AtomSet::from_bits(alg.atom_count(), m)).to_string();
    Ok(PaperExample {
        evaluator: ev.bv_eq(&xi, &eta)?.to_string(),
        oracle: show(raw),
        trace,
        adjusted: ev.bv_eq(&xi, &eta2)?.to_string(),
        adjusted_oracle: show(raw2),
        sets,
        algebra: alg,
    })
}

impl PaperExample {
    pub fn agrees(&self) -> bool {
        self.evaluator == self.oracle && self.adjusted == self.adjusted_oracle
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "algebra B0, atoms {}", self.algebra.atom_names().join(" "));
        for (n, u) in &self.sets {
            let _ = writeln!(s, "  {n} = {}", bvset_to_text(u));
        }
        let _ = writeln!(s, "expansion of [[xi = eta]] (innermost first):");
        for line in &self.trace {
            let _ = writeln!(s, "  {line}");
        }
        let _ = writeln!(s, "[[xi = eta]]  evaluator: {}  oracle: {}", self.evaluator, self.oracle);
        let _ = writeln!(s, "[[xi = eta]]  asserted in the source text: {ASSERTED_VALUE}");
        let _ = writeln!(s, "[[xi = eta']] evaluator: {}  oracle: {}", self.adjusted, self.adjusted_oracle);
        if self.oracle != ASSERTED_VALUE {
            let _ = writeln!(
                s,
                "note: the computed value differs from the asserted one; the anti-correlated pair u', v' gives {}",
                self.adjusted
            );
        }
        let _ = writeln!(s, "evaluator and oracle {}", if self.agrees() { "agree" } else { "DISAGREE" });
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sets": self.sets.iter().map(|(n, u)| (n.clone(), bvset_to_text(u).into())).collect::<serde_json::Map<_, _>>(),
            "xi_eq_eta": { "evaluator": self.evaluator, "oracle": self.oracle, "asserted": ASSERTED_VALUE },
            "xi_eq_eta_adjusted": { "evaluator": self.adjusted, "oracle": self.adjusted_oracle },
            "trace": self.trace,
            "agree": self.agrees(),
        })
    }
}
