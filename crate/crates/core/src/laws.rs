//! Congruence laws of `[[=]]` and `[[∈]]` checked over a finite carrier.

use std::fmt;

use crate::exec::Exec;
use crate::universe::{BVSet, Evaluator};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LawCount {
    pub passed: usize,
    pub total: usize,
}

impl LawCount {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for LawCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.passed, self.total)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    /// `[[u = u]] = 1`
    pub reflexivity: LawCount,
    /// `[[u = v]] = [[v = u]]`
    pub symmetry: LawCount,
    /// `[[u = v]] ∧ [[v = w]] ≤ [[u = w]]`
    pub transitivity: LawCount,
    /// `[[u = v]] ∧ [[u ∈ w]] ≤ [[v ∈ w]]`
    pub substitution: LawCount,
}

impl LawReport {
    pub fn all_pass(&self) -> bool {
        self.laws().iter().all(|(_, c)| c.ok())
    }

    pub fn laws(&self) -> [(&'static str, LawCount); 4] {
        [
            ("reflexivity", self.reflexivity),
            ("symmetry", self.symmetry),
            ("transitivity", self.transitivity),
            ("substitution", self.substitution),
        ]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (name, c) in self.laws() {
            map.insert(name.into(), serde_json::json!({ "passed": c.passed, "total": c.total }));
        }
        map.insert("pass".into(), self.all_pass().into());
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.laws().iter().map(|(n, c)| format!("{n} {c}")).collect();
        write!(f, "{} {}", parts.join(", "), if self.all_pass() { "pass" } else { "FAIL" })
    }
}

fn transitive(ev: &Evaluator, u: &BVSet, v: &BVSet, w: &BVSet) -> bool {
    ev.eq_atoms(u, v).and(&ev.eq_atoms(v, w)).is_subset(&ev.eq_atoms(u, w))
}

fn substitutive(ev: &Evaluator, u: &BVSet, v: &BVSet, w: &BVSet) -> bool {
    ev.eq_atoms(u, v).and(&ev.mem_atoms(u, w)).is_subset(&ev.mem_atoms(v, w))
}

/// Runs all four laws over every element, pair and triple of `carrier`.
pub fn check_congruence_laws(ev: &Evaluator, carrier: &[BVSet], exec: Exec) -> LawReport {
    let n = carrier.len();
    let top = ev.algebra().one();
    let reflexive = exec.count_range(n, |i| ev.eq_atoms(&carrier[i], &carrier[i]) == *top.atoms());
    let symmetric = exec.count_range(n * n, |k| {
        let (u, v) = (&carrier[k / n], &carrier[k % n]);
        ev.eq_atoms(u, v) == ev.eq_atoms(v, u)
    });
    let triple = |k: usize| (&carrier[k / (n * n)], &carrier[k / n % n], &carrier[k % n]);
    let trans = exec.count_range(n * n * n, |k| {
        let (u, v, w) = triple(k);
        transitive(ev, u, v, w)
    });
    let subst = exec.count_range(n * n * n, |k| {
        let (u, v, w) = triple(k);
        substitutive(ev, u, v, w)
    });
    LawReport {
        reflexivity: LawCount { passed: reflexive, total: n },
        symmetry: LawCount { passed: symmetric, total: n * n },
        transitivity: LawCount { passed: trans, total: n * n * n },
        substitution: LawCount { passed: subst, total: n * n * n },
    }
}

/// Runs the laws on given index triples `(u, v, w)`; reflexivity is checked
/// on `u` and symmetry on `(u, v)`, so each law counts one case per triple.
pub fn check_sampled_triples(
    ev: &Evaluator,
    carrier: &[BVSet],
    triples: &[(usize, usize, usize)],
    exec: Exec,
) -> LawReport {
    let m = triples.len();
    let top = ev.algebra().one();
    let flags = exec.map(triples, |&(i, j, k)| {
        let (u, v, w) = (&carrier[i], &carrier[j], &carrier[k]);
        [
            ev.eq_atoms(u, u) == *top.atoms(),
            ev.eq_atoms(u, v) == ev.eq_atoms(v, u),
            transitive(ev, u, v, w),
            substitutive(ev, u, v, w),
        ]
    });
    let count = |law: usize| LawCount { passed: flags.iter().filter(|f| f[law]).count(), total: m };
    LawReport { reflexivity: count(0), symmetry: count(1), transitivity: count(2), substitution: count(3) }
}
