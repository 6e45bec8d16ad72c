//! Boolean-valued sets and the boolean values of `=` and `∈` between them.
//!
//! A [`BVSet`] is a finite function from previously built boolean-valued sets
//! into a [`BoolAlgebra`]. Sets are immutable and hash-consed by a structural
//! digest, which is what the [`Evaluator`] memo table is keyed on.
//!
//! The values are the usual mutually recursive clauses:
//!
//! ```text
//! [[u ∈ v]] = ⋁_{y ∈ dom v} v(y) ∧ [[y = u]]
//! [[u = v]] = ⋀_{y ∈ dom v} (v(y) ⇒ [[y ∈ u]]) ∧ ⋀_{y ∈ dom u} (u(y) ⇒ [[y ∈ v]])
//! ```

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use sha2::{Digest as _, Sha256};

use crate::algebra::{AtomSet, BoolAlgebra, BoolElement};
use crate::error::{Error, Result};
use crate::hf::HFSet;

/// Structural digest of a [`BVSet`] (truncated SHA-256).
pub type Digest = [u8; 16];

struct BvNode {
    algebra: BoolAlgebra,
    // Sorted by key digest, keys pairwise distinct.
    entries: Vec<(BVSet, AtomSet)>,
    rank: usize,
    digest: Digest,
}

/// A boolean-valued set over a finite algebra.
#[derive(Clone)]
pub struct BVSet(Arc<BvNode>);

impl PartialEq for BVSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.digest == other.0.digest && self.0.algebra == other.0.algebra)
    }
}

impl Eq for BVSet {}

impl std::hash::Hash for BVSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.digest.hash(state)
    }
}

impl PartialOrd for BVSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Enumeration order: by rank, then lexicographically by the
/// `(key digest, value atoms)` entry list.
impl Ord for BVSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank()).then_with(|| {
            let a = self.0.entries.iter().map(|(k, v)| (k.digest(), v));
            let b = other.0.entries.iter().map(|(k, v)| (k.digest(), v));
            a.cmp(b)
        })
    }
}

fn digest_of(entries: &[(BVSet, AtomSet)]) -> Digest {
    let mut h = Sha256::new();
    h.update(b"bv");
    h.update((entries.len() as u64).to_le_bytes());
    for (k, v) in entries {
        h.update(k.digest());
        h.update((v.words().len() as u64).to_le_bytes());
        for w in v.words() {
            h.update(w.to_le_bytes());
        }
    }
    let full = h.finalize();
    let mut out = [0u8; 16];
    out.copy_from_slice(&full[..16]);
    out
}

impl BVSet {
    /// The empty function `∅̂`.
    pub fn empty(algebra: &BoolAlgebra) -> Self {
        Self::from_raw(algebra, Vec::new(), false)
    }

    /// Builds a set from explicit entries. Zero values are kept (see
    /// [`BVSet::normalize`]); repeated keys are an error.
    pub fn new(algebra: &BoolAlgebra, entries: impl IntoIterator<Item = (BVSet, BoolElement)>) -> Result<Self> {
        let mut raw = Vec::new();
        for (k, v) in entries {
            if k.algebra() != algebra || v.algebra() != algebra {
                return Err(Error::MixedAlgebras);
            }
            raw.push((k, v.atoms().clone()));
        }
        let n = raw.len();
        raw.sort_by_key(|e| e.0.digest());
        raw.dedup_by(|a, b| a.0 == b.0);
        if raw.len() != n {
            return Err(Error::DuplicateKey);
        }
        Ok(Self::build(algebra, raw))
    }

    /// Builds from raw entries, joining the values of repeated keys and
    /// optionally dropping zero values. Keys must already be over `algebra`.
    pub(crate) fn from_raw(algebra: &BoolAlgebra, mut raw: Vec<(BVSet, AtomSet)>, drop_zero: bool) -> Self {
        raw.sort_by_key(|e| e.0.digest());
        let mut merged: Vec<(BVSet, AtomSet)> = Vec::with_capacity(raw.len());
        for (k, v) in raw {
            match merged.last_mut() {
                Some((lk, lv)) if *lk == k => *lv = lv.or(&v),
                _ => merged.push((k, v)),
            }
        }
        if drop_zero {
            merged.retain(|(_, v)| !v.is_empty());
        }
        Self::build(algebra, merged)
    }

    fn build(algebra: &BoolAlgebra, entries: Vec<(BVSet, AtomSet)>) -> Self {
        debug_assert!(entries.iter().all(|(k, _)| k.algebra() == algebra));
        let rank = entries.iter().map(|(k, _)| k.rank() + 1).max().unwrap_or(0);
        let digest = digest_of(&entries);
        BVSet(Arc::new(BvNode { algebra: algebra.clone(), entries, rank, digest }))
    }

    pub fn algebra(&self) -> &BoolAlgebra {
        &self.0.algebra
    }

    /// 0 for the empty function, otherwise 1 + the largest rank in the domain.
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn digest(&self) -> Digest {
        self.0.digest
    }

    pub fn len(&self) -> usize {
        self.0.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&BVSet, BoolElement)> + '_ {
        self.0.entries.iter().map(|(k, v)| (k, self.algebra().from_atoms(v.clone())))
    }

    pub(crate) fn raw_entries(&self) -> &[(BVSet, AtomSet)] {
        &self.0.entries
    }

    pub fn domain(&self) -> impl Iterator<Item = &BVSet> {
        self.0.entries.iter().map(|(k, _)| k)
    }

    /// `u(key)`, or 0 outside the domain.
    pub fn value(&self, key: &BVSet) -> BoolElement {
        let atoms = self
            .0
            .entries
            .binary_search_by(|(k, _)| k.digest().cmp(&key.digest()))
            .ok()
            .filter(|&i| self.0.entries[i].0 == *key)
            .map(|i| self.0.entries[i].1.clone())
            .unwrap_or_else(|| AtomSet::empty(self.algebra().atom_count()));
        self.algebra().from_atoms(atoms)
    }

    /// True when no entry, at any depth, carries the value 0.
    pub fn is_normal(&self) -> bool {
        self.0.entries.iter().all(|(k, v)| !v.is_empty() && k.is_normal())
    }

    /// Drops 0-valued entries at every depth. Keys that become identical
    /// are merged by joining their values.
    pub fn normalize(&self) -> BVSet {
        normalize(self)
    }

    /// If this is the canonical name `x̂` of an HF set, returns `x`.
    pub fn as_canonical(&self) -> Option<HFSet> {
        let mut members = Vec::with_capacity(self.len());
        for (k, v) in &self.0.entries {
            if v != self.algebra().top_atoms() {
                return None;
            }
            members.push(k.as_canonical()?);
        }
        let x = HFSet::from_elements(members);
        (x.len() == self.len()).then_some(x)
    }
}

impl fmt::Debug for BVSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::textio::bvset_to_text(self))
    }
}

impl fmt::Display for BVSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::textio::bvset_to_text(self))
    }
}

pub fn normalize(u: &BVSet) -> BVSet {
    fn go(u: &BVSet, memo: &mut HashMap<Digest, BVSet>) -> BVSet {
        if let Some(done) = memo.get(&u.digest()) {
            return done.clone();
        }
        let out = if u.is_normal() {
            u.clone()
        } else {
            let raw = u
                .raw_entries()
                .iter()
                .filter(|(_, v)| !v.is_empty())
                .map(|(k, v)| (go(k, memo), v.clone()))
                .collect();
            BVSet::from_raw(u.algebra(), raw, true)
        };
        memo.insert(u.digest(), out.clone());
        out
    }
    go(u, &mut HashMap::new())
}

/// The canonical name `x̂`: every `ŷ` for `y ∈ x` gets value 1.
pub fn canonical_name(algebra: &BoolAlgebra, x: &HFSet) -> BVSet {
    fn go(algebra: &BoolAlgebra, x: &HFSet, memo: &mut HashMap<HFSet, BVSet>) -> BVSet {
        if let Some(done) = memo.get(x) {
            return done.clone();
        }
        let top = algebra.top_atoms().clone();
        let raw = x.elements().map(|y| (go(algebra, y, memo), top.clone())).collect();
        let out = BVSet::from_raw(algebra, raw, false);
        memo.insert(x.clone(), out.clone());
        out
    }
    go(algebra, x, &mut HashMap::new())
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Rel {
    Eq,
    Mem,
}

/// Computes `[[u = v]]` and `[[u ∈ v]]` over one algebra, with an optional
/// memo table shared by all callers (safe for concurrent use).
pub struct Evaluator {
    algebra: BoolAlgebra,
    cache: Option<DashMap<(Rel, Digest, Digest), AtomSet>>,
    normalize_inputs: bool,
}

impl Evaluator {
    pub fn new(algebra: &BoolAlgebra) -> Self {
        Evaluator { algebra: algebra.clone(), cache: Some(DashMap::new()), normalize_inputs: false }
    }

    /// Turns the memo table off; every value is recomputed from scratch.
    pub fn without_cache(mut self) -> Self {
        self.cache = None;
        self
    }

    /// Normalize both arguments before each top-level evaluation.
    pub fn normalizing(mut self, on: bool) -> Self {
        self.normalize_inputs = on;
        self
    }

    pub fn algebra(&self) -> &BoolAlgebra {
        &self.algebra
    }

    pub fn cache_len(&self) -> usize {
        self.cache.as_ref().map_or(0, |c| c.len())
    }

    fn check(&self, u: &BVSet, v: &BVSet) -> Result<()> {
        if u.algebra() == &self.algebra && v.algebra() == &self.algebra {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    fn prepare(&self, u: &BVSet) -> BVSet {
        if self.normalize_inputs {
            u.normalize()
        } else {
            u.clone()
        }
    }

    pub fn bv_eq(&self, u: &BVSet, v: &BVSet) -> Result<BoolElement> {
        self.check(u, v)?;
        Ok(self.algebra.from_atoms(self.eq_atoms(&self.prepare(u), &self.prepare(v))))
    }

    pub fn bv_mem(&self, u: &BVSet, v: &BVSet) -> Result<BoolElement> {
        self.check(u, v)?;
        Ok(self.algebra.from_atoms(self.mem_atoms(&self.prepare(u), &self.prepare(v))))
    }

    fn cached(&self, key: (Rel, Digest, Digest), compute: impl FnOnce() -> AtomSet) -> AtomSet {
        let Some(cache) = &self.cache else {
            return compute();
        };
        if let Some(hit) = cache.get(&key) {
            return hit.clone();
        }
        // No guard is held while recursing; a racing thread may compute the
        // same value, which is harmless.
        let value = compute();
        cache.insert(key, value.clone());
        value
    }

    pub(crate) fn eq_atoms(&self, u: &BVSet, v: &BVSet) -> AtomSet {
        let (a, b) = if u.digest() <= v.digest() { (u.digest(), v.digest()) } else { (v.digest(), u.digest()) };
        self.cached((Rel::Eq, a, b), || {
            let top = self.algebra.top_atoms();
            let mut acc = top.clone();
            for (side, other) in [(v, u), (u, v)] {
                for (y, val) in side.raw_entries() {
                    if acc.is_empty() {
                        return acc;
                    }
                    let mem = self.mem_atoms(y, other);
                    acc = acc.and(&val.complement_in(top).or(&mem));
                }
            }
            acc
        })
    }

    pub(crate) fn mem_atoms(&self, u: &BVSet, v: &BVSet) -> AtomSet {
        self.cached((Rel::Mem, u.digest(), v.digest()), || {
            let top = self.algebra.top_atoms();
            let mut acc = AtomSet::empty(self.algebra.atom_count());
            for (y, val) in v.raw_entries() {
                if &acc == top {
                    break;
                }
                if val.is_subset(&acc) {
                    continue;
                }
                acc = acc.or(&val.and(&self.eq_atoms(y, u)));
            }
            acc
        })
    }
}

pub fn bv_eq(u: &BVSet, v: &BVSet) -> Result<BoolElement> {
    Evaluator::new(u.algebra()).bv_eq(u, v)
}

pub fn bv_mem(u: &BVSet, v: &BVSet) -> Result<BoolElement> {
    Evaluator::new(u.algebra()).bv_mem(u, v)
}

/// Number of sets in the stage `V^(B)_bound`: 1 for bounds 0 and 1, and
/// `|B|^{|V^(B)_{bound-1}|}` above that. `None` when the count exceeds
/// `2^65536` and is not worth materializing.
pub fn universe_size(algebra: &BoolAlgebra, bound: usize) -> Option<BigUint> {
    let mut size = BigUint::one();
    for _ in 1..bound {
        let exponent = size.to_u64()?.checked_mul(algebra.atom_count() as u64)?;
        if exponent > 1 << 16 {
            return None;
        }
        size = BigUint::one() << exponent;
    }
    Some(size)
}

/// All normalized sets of the stage `V^(B)_bound`, sorted.
///
/// Stage 0 and 1 both hold only `∅̂`; stage `n ≥ 2` holds every normalized
/// function from stage `n-1` into the algebra, i.e. every set of rank `< n`.
/// Fails before doing any work if the stage has more than `budget` sets.
pub fn enumerate_universe(algebra: &BoolAlgebra, bound: usize, budget: u64) -> Result<Vec<BVSet>> {
    match universe_size(algebra, bound) {
        Some(count) if count <= BigUint::from(budget) => {}
        Some(count) => return Err(Error::BudgetExceeded { count: count.to_string(), budget }),
        None => return Err(Error::BudgetExceeded { count: "more than 2^65536".into(), budget }),
    }
    let elements = algebra.elements()?;
    let mut stage = vec![BVSet::empty(algebra)];
    for _ in 1..bound {
        let keys = stage;
        let radix = elements.len();
        let total = radix.pow(keys.len() as u32);
        let mut next = Vec::with_capacity(total);
        let mut digits = vec![0usize; keys.len()];
        for _ in 0..total {
            let raw = keys
                .iter()
                .zip(&digits)
                .filter(|(_, &d)| d != 0)
                .map(|(k, &d)| (k.clone(), elements[d].atoms().clone()))
                .collect();
            next.push(BVSet::from_raw(algebra, raw, true));
            for d in digits.iter_mut() {
                *d += 1;
                if *d < radix {
                    break;
                }
                *d = 0;
            }
        }
        next.sort();
        stage = next;
    }
    Ok(stage)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;

    fn b0() -> BoolAlgebra {
        make_algebra(&["a", "b"]).unwrap()
    }

    fn set(alg: &BoolAlgebra, entries: &[(&BVSet, &BoolElement)]) -> BVSet {
        BVSet::new(alg, entries.iter().map(|(k, v)| ((*k).clone(), (*v).clone()))).unwrap()
    }

    #[test]
    fn canonical_names() {
        let alg = b0();
        let e = canonical_name(&alg, &HFSet::empty());
        assert!(e.is_empty());
        let one = canonical_name(&alg, &HFSet::ordinal(1));
        assert_eq!(one, set(&alg, &[(&e, &alg.one())]));
        let two = canonical_name(&alg, &HFSet::ordinal(2));
        assert_eq!(two, set(&alg, &[(&e, &alg.one()), (&one, &alg.one())]));
        assert_eq!(two.rank(), 2);
        assert_eq!(two.as_canonical(), Some(HFSet::ordinal(2)));
    }

    #[test]
    fn membership_examples() {
        let alg = b0();
        let a = alg.atom(0);
        let e = BVSet::empty(&alg);
        let one = canonical_name(&alg, &HFSet::ordinal(1));
        assert!(bv_mem(&e, &one).unwrap().is_one());
        let u = set(&alg, &[(&e, &a)]);
        assert_eq!(bv_mem(&e, &u).unwrap(), a);
    }

    #[test]
    fn literal_u_in_xi_is_a() {
        let alg = b0();
        let (a, b) = (alg.atom(0), alg.atom(1));
        let e = BVSet::empty(&alg);
        let one = canonical_name(&alg, &HFSet::ordinal(1));
        let u = set(&alg, &[(&e, &a), (&one, &b)]);
        let xi = canonical_name(&alg, &HFSet::ordinal(2));
        assert_eq!(bv_mem(&u, &xi).unwrap(), a);
    }

    #[test]
    fn equality_examples() {
        let alg = b0();
        let (a, b) = (alg.atom(0), alg.atom(1));
        let e = BVSet::empty(&alg);
        let ua = set(&alg, &[(&e, &a)]);
        let ub = set(&alg, &[(&e, &b)]);
        assert!(bv_eq(&ua, &ua).unwrap().is_one());
        assert!(bv_eq(&ua, &ub).unwrap().is_zero());
        let eta = set(&alg, &[(&ua, &alg.one()), (&ub, &alg.one())]);
        let xi = canonical_name(&alg, &HFSet::ordinal(2));
        assert!(bv_eq(&xi, &eta).unwrap().is_one());
    }

    #[test]
    fn mixed_algebras_rejected() {
        let e1 = BVSet::empty(&b0());
        let e2 = BVSet::empty(&make_algebra(&["p"]).unwrap());
        assert_eq!(bv_eq(&e1, &e2), Err(Error::MixedAlgebras));
        assert_eq!(bv_mem(&e1, &e2), Err(Error::MixedAlgebras));
        assert_eq!(BVSet::new(&b0(), [(e2, b0().one())]).unwrap_err(), Error::MixedAlgebras);
    }

    #[test]
    fn duplicate_keys_rejected() {
        let alg = b0();
        let e = BVSet::empty(&alg);
        assert_eq!(BVSet::new(&alg, [(e.clone(), alg.one()), (e, alg.zero())]).unwrap_err(), Error::DuplicateKey);
    }

    #[test]
    fn normalize_examples() {
        let alg = b0();
        let e = BVSet::empty(&alg);
        let one = canonical_name(&alg, &HFSet::ordinal(1));
        let z = set(&alg, &[(&e, &alg.zero())]);
        assert_eq!(z.normalize(), e);
        let u = set(&alg, &[(&e, &alg.atom(0)), (&one, &alg.zero())]);
        assert_eq!(u.normalize(), set(&alg, &[(&e, &alg.atom(0))]));
        let n = set(&alg, &[(&e, &alg.atom(0))]);
        assert_eq!(n.normalize().digest(), n.digest());
    }

    #[test]
    fn normalize_merges_collapsing_keys() {
        let alg = b0();
        let e = BVSet::empty(&alg);
        let z = set(&alg, &[(&e, &alg.zero())]);
        let u = set(&alg, &[(&e, &alg.atom(0)), (&z, &alg.atom(1))]);
        assert_eq!(u.normalize(), set(&alg, &[(&e, &alg.one())]));
        let ev = Evaluator::new(&alg);
        for w in enumerate_universe(&alg, 2, 100).unwrap() {
            assert_eq!(ev.bv_eq(&u, &w).unwrap(), ev.bv_eq(&u.normalize(), &w).unwrap());
            assert_eq!(ev.bv_mem(&w, &u).unwrap(), ev.bv_mem(&w, &u.normalize()).unwrap());
        }
    }

    #[test]
    fn enumeration_small_stages() {
        let alg = b0();
        assert_eq!(enumerate_universe(&alg, 0, 10).unwrap(), vec![BVSet::empty(&alg)]);
        let two = make_algebra(&["w1"]).unwrap();
        let s = enumerate_universe(&two, 2, 10).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0], BVSet::empty(&two));
        let s = enumerate_universe(&alg, 2, 10).unwrap();
        assert_eq!(s.len(), 4);
        let e = BVSet::empty(&alg);
        for x in alg.elements().unwrap() {
            let want = BVSet::new(&alg, [(e.clone(), x)]).unwrap().normalize();
            assert!(s.contains(&want));
        }
    }

    #[test]
    fn enumeration_budget() {
        let alg = b0();
        match enumerate_universe(&alg, 3, 100) {
            Err(Error::BudgetExceeded { count, budget }) => {
                assert_eq!(count, "256");
                assert_eq!(budget, 100);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(enumerate_universe(&alg, 3, 256).unwrap().len(), 256);
        assert!(enumerate_universe(&alg, 6, u64::MAX).is_err());
    }

    #[test]
    fn enumeration_is_sorted_and_deterministic() {
        let alg = make_algebra(&["x", "y", "z"]).unwrap();
        let a = enumerate_universe(&alg, 2, 1000).unwrap();
        let b = enumerate_universe(&alg, 2, 1000).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(a.iter().all(|u| u.is_normal() && u.rank() < 2));
    }

    #[test]
    fn cache_is_semantically_invisible() {
        let alg = make_algebra(&["a", "b"]).unwrap();
        let sets = enumerate_universe(&alg, 3, 1000).unwrap();
        let cached = Evaluator::new(&alg);
        let plain = Evaluator::new(&alg).without_cache();
        for u in sets.iter().step_by(7) {
            for v in sets.iter().step_by(5) {
                assert_eq!(cached.bv_eq(u, v).unwrap(), plain.bv_eq(u, v).unwrap());
                assert_eq!(cached.bv_mem(u, v).unwrap(), plain.bv_mem(u, v).unwrap());
            }
        }
        assert!(cached.cache_len() > 0);
        assert_eq!(plain.cache_len(), 0);
    }
}
