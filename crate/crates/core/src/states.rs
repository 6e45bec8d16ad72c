//! Boolean-valued sets read as arbitrary objects over the state space `B`.
//!
//! In a situation `a ≠ 0` a set `u` is in the state `u_a`, a set over the
//! restricted algebra `B_a`: entries whose value vanishes at `a` are dropped
//! and the rest are met with `a`. The profile `u* : a ↦ u_a` determines `u`,
//! since `u = u_1`.

use std::collections::HashMap;

use crate::algebra::{AtomSet, BoolAlgebra, BoolElement, Partition, Restriction};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::universe::{BVSet, Digest, Evaluator};

/// Largest number of situations [`star_profile`] tabulates by default.
pub const DEFAULT_SITUATION_LIMIT: usize = 4096;

/// `u_a` as a set over `B_a`. Quasi-elements are restricted recursively so
/// the result is a genuine element of `V^(B_a)`.
pub fn restrict_set(u: &BVSet, a: &BoolElement) -> Result<BVSet> {
    let r = Restriction::new(u.algebra(), a)?;
    restrict_set_in(&r, u)
}

/// Like [`restrict_set`] with a prebuilt restriction (reused across sets).
pub fn restrict_set_in(r: &Restriction, u: &BVSet) -> Result<BVSet> {
    if u.algebra() != r.parent() {
        return Err(Error::MixedAlgebras);
    }
    fn go(r: &Restriction, u: &BVSet, memo: &mut HashMap<Digest, BVSet>) -> BVSet {
        if let Some(done) = memo.get(&u.digest()) {
            return done.clone();
        }
        let a = r.situation();
        let raw = u
            .raw_entries()
            .iter()
            .filter(|(_, v)| !v.is_disjoint(a.atoms()))
            .map(|(k, v)| (go(r, k, memo), r.project_atoms(v)))
            .collect();
        let out = BVSet::from_raw(r.sub(), raw, true);
        memo.insert(u.digest(), out.clone());
        out
    }
    Ok(go(r, u, &mut HashMap::new()))
}

/// One-level restriction: keys are left untouched and the result stays over
/// the parent algebra, with every value below `a`.
pub fn restrict_set_shallow(u: &BVSet, a: &BoolElement) -> Result<BVSet> {
    u.algebra().one().meet(a)?;
    if a.is_zero() {
        return Err(Error::ZeroRestriction);
    }
    let raw = u.raw_entries().iter().map(|(k, v)| (k.clone(), v.and(a.atoms()))).collect();
    Ok(BVSet::from_raw(u.algebra(), raw, true))
}

/// Transports a set over `B_a` back into `V^(B)` along the inclusion `B_a ⊆ B`.
pub fn embed_set(r: &Restriction, u: &BVSet) -> Result<BVSet> {
    if u.algebra() != r.sub() {
        return Err(Error::MixedAlgebras);
    }
    fn go(r: &Restriction, u: &BVSet, memo: &mut HashMap<Digest, BVSet>) -> BVSet {
        if let Some(done) = memo.get(&u.digest()) {
            return done.clone();
        }
        let raw = u.raw_entries().iter().map(|(k, v)| (go(r, k, memo), r.embed_atoms(v))).collect();
        let out = BVSet::from_raw(r.parent(), raw, false);
        memo.insert(u.digest(), out.clone());
        out
    }
    Ok(go(r, u, &mut HashMap::new()))
}

#[derive(Clone, Debug)]
pub struct Situation {
    pub at: BoolElement,
    pub restriction: Restriction,
    pub state: BVSet,
}

/// The arbitrary-object form `u*` of a boolean-valued set: its state in each
/// tabulated nonzero situation, sorted by situation.
#[derive(Clone, Debug)]
pub struct StarProfile {
    base: BVSet,
    entries: Vec<Situation>,
}

impl StarProfile {
    pub fn base(&self) -> &BVSet {
        &self.base
    }

    pub fn entries(&self) -> &[Situation] {
        &self.entries
    }

    pub fn at(&self, a: &BoolElement) -> Option<&BVSet> {
        self.entries.iter().find(|s| &s.at == a).map(|s| &s.state)
    }

    /// Removes a situation; used to exercise [`reconstruct`]'s error path.
    pub fn without(mut self, a: &BoolElement) -> Self {
        self.entries.retain(|s| &s.at != a);
        self
    }

    /// `situation → serialized state` lines.
    pub fn table(&self) -> Vec<(String, String)> {
        self.entries.iter().map(|s| (s.at.to_string(), s.state.to_string())).collect()
    }
}

/// Tabulates `u*` over every nonzero element of the algebra.
pub fn star_profile(u: &BVSet, exec: Exec) -> Result<StarProfile> {
    let alg = u.algebra();
    let too_big = Error::TooManyAtoms { atoms: alg.atom_count(), what: "star profile tabulation" };
    match alg.size() {
        Some(n) if n - 1 <= DEFAULT_SITUATION_LIMIT as u64 => {}
        _ => return Err(too_big),
    }
    star_profile_at(u, &alg.nonzero_elements()?, exec)
}

/// Tabulates `u*` at the given situations; the top element is always added.
pub fn star_profile_at(u: &BVSet, situations: &[BoolElement], exec: Exec) -> Result<StarProfile> {
    let alg = u.algebra();
    let mut at: Vec<BoolElement> = situations.to_vec();
    at.push(alg.one());
    at.sort();
    at.dedup();
    let entries = exec
        .map(&at, |a| {
            let restriction = Restriction::new(alg, a)?;
            let state = restrict_set_in(&restriction, u)?;
            Ok(Situation { at: a.clone(), restriction, state })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(StarProfile { base: u.clone(), entries })
}

/// Recovers `u` from its profile as the state at 1.
pub fn reconstruct(profile: &StarProfile) -> Result<BVSet> {
    let top = profile.entries.iter().find(|s| s.at.is_one()).ok_or(Error::MissingTop)?;
    embed_set(&top.restriction, &top.state)
}

/// The mixture of `pieces` along `partition`: `w(y) = ⋁_i a_i ∧ u_i(y)`.
/// It agrees with piece `i` to degree at least `a_i`.
pub fn mix(partition: &Partition, pieces: &[BVSet]) -> Result<BVSet> {
    let parts = partition.parts();
    if parts.len() != pieces.len() {
        return Err(Error::LengthMismatch { parts: parts.len(), pieces: pieces.len() });
    }
    let alg = partition.algebra();
    let mut raw = Vec::new();
    for (a, u) in parts.iter().zip(pieces) {
        if u.algebra() != alg {
            return Err(Error::MixedAlgebras);
        }
        raw.extend(u.raw_entries().iter().map(|(k, v)| (k.clone(), v.and(a.atoms()))));
    }
    Ok(BVSet::from_raw(alg, raw, true))
}

/// The two-valued structure obtained by collapsing along the ultrafilter
/// generated by one atom.
#[derive(Clone, Debug)]
pub struct ClassicalModel {
    pub atom: BoolElement,
    /// One representative per class, in order of first appearance.
    pub carrier: Vec<BVSet>,
    /// Class index of each input set.
    pub class_of: Vec<usize>,
    /// `membership[i][j]` iff class `i` is a member of class `j`.
    pub membership: Vec<Vec<bool>>,
    /// Membership does not depend on the chosen representatives.
    pub well_defined: bool,
    /// Distinct classes have distinct member sets within the carrier.
    pub extensional: bool,
    pub well_founded: bool,
}

impl ClassicalModel {
    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn members_of(&self, class: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.membership[i][class]).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "atom": self.atom.to_string(),
            "classes": self.carrier.iter().enumerate().map(|(i, rep)| serde_json::json!({
                "representative": rep.to_string(),
                "members": self.members_of(i),
            })).collect::<Vec<_>>(),
            "class_of": self.class_of,
            "well_defined": self.well_defined,
            "extensional": self.extensional,
            "well_founded": self.well_founded,
        })
    }
}

/// `u ~ v` iff `atom ≤ [[u = v]]`; class `i ∈ j` iff `atom ≤ [[u_i ∈ u_j]]`.
pub fn quotient_by_atom(atom: &BoolElement, carrier: &[BVSet], exec: Exec) -> Result<ClassicalModel> {
    if !atom.is_atom() {
        return Err(Error::NotAnAtom(atom.to_string()));
    }
    let alg: &BoolAlgebra = atom.algebra();
    if carrier.iter().any(|u| u.algebra() != alg) {
        return Err(Error::MixedAlgebras);
    }
    let ev = Evaluator::new(alg);
    let holds = |x: AtomSet| atom.atoms().is_subset(&x);

    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = Vec::with_capacity(carrier.len());
    for (i, u) in carrier.iter().enumerate() {
        match reps.iter().position(|&r| holds(ev.eq_atoms(&carrier[r], u))) {
            Some(c) => class_of.push(c),
            None => {
                class_of.push(reps.len());
                reps.push(i);
            }
        }
    }
    let n = carrier.len();
    let mem_at: Vec<bool> = exec.map_range(n * n, |k| holds(ev.mem_atoms(&carrier[k / n], &carrier[k % n])));
    let k = reps.len();
    let membership: Vec<Vec<bool>> =
        (0..k).map(|i| (0..k).map(|j| mem_at[reps[i] * n + reps[j]]).collect()).collect();
    let well_defined = (0..n * n).all(|p| mem_at[p] == membership[class_of[p / n]][class_of[p % n]]);
    let member_sets: Vec<Vec<bool>> = (0..k).map(|j| (0..k).map(|i| membership[i][j]).collect()).collect();
    let extensional = (0..k).all(|i| (i + 1..k).all(|j| member_sets[i] != member_sets[j]));
    let well_founded = acyclic(&membership);
    Ok(ClassicalModel {
        atom: atom.clone(),
        carrier: reps.iter().map(|&r| carrier[r].clone()).collect(),
        class_of,
        membership,
        well_defined,
        extensional,
        well_founded,
    })
}

fn acyclic(edges: &[Vec<bool>]) -> bool {
    // 0 unvisited, 1 on stack, 2 done
    fn visit(v: usize, edges: &[Vec<bool>], color: &mut [u8]) -> bool {
        color[v] = 1;
        for w in 0..edges.len() {
            if edges[v][w] && (color[w] == 1 || (color[w] == 0 && !visit(w, edges, color))) {
                return false;
            }
        }
        color[v] = 2;
        true
    }
    let mut color = vec![0u8; edges.len()];
    (0..edges.len()).all(|v| color[v] != 0 || visit(v, edges, &mut color))
}
