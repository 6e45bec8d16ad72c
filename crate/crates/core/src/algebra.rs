//! Finite complete Boolean algebras in Stone form.
//!
//! Every finite Boolean algebra is atomic, so it is isomorphic to the powerset
//! of its atoms. [`BoolAlgebra`] stores only the atoms; an element is the set
//! of atoms below it, kept as a bitset ([`AtomSet`]). Tabulated presentations
//! are converted on import by [`import_algebra_table`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

/// Largest algebra for which all `2^n` elements are ever tabulated.
pub const MAX_TABULATED_ATOMS: usize = 20;

fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// A set of atom indices. The raw carrier of every [`BoolElement`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AtomSet {
    words: SmallVec<[u64; 1]>,
}

impl AtomSet {
    pub fn empty(atom_count: usize) -> Self {
        AtomSet { words: smallvec![0; words_for(atom_count)] }
    }

    pub fn full(atom_count: usize) -> Self {
        let mut s = Self::empty(atom_count);
        for i in 0..atom_count {
            s.insert(i);
        }
        s
    }

    pub fn singleton(atom_count: usize, i: usize) -> Self {
        let mut s = Self::empty(atom_count);
        s.insert(i);
        s
    }

    pub fn from_indices(atom_count: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(atom_count);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Builds the set whose membership bits are the low `atom_count` bits of `bits`.
    pub fn from_bits(atom_count: usize, bits: u64) -> Self {
        Self::from_indices(atom_count, (0..atom_count.min(64)).filter(|i| bits >> i & 1 == 1))
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b)
        })
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    /// Complement relative to `top`.
    pub fn complement_in(&self, top: &Self) -> Self {
        self.zip(top, |a, t| !a & t)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & b == 0)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.words.len(), other.words.len());
        AtomSet { words: self.words.iter().zip(other.words.iter()).map(|(&a, &b)| f(a, b)).collect() }
    }
}

struct AlgebraInner {
    atom_names: Vec<String>,
    index: HashMap<String, usize>,
    element_names: BTreeMap<String, AtomSet>,
    top: AtomSet,
}

/// A finite Boolean algebra, represented as the powerset of its atoms.
///
/// Cloning is cheap. Two algebras compare equal when they have the same atom
/// names in the same order; element names are presentation only.
#[derive(Clone)]
pub struct BoolAlgebra {
    inner: Arc<AlgebraInner>,
}

impl PartialEq for BoolAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.atom_names == other.inner.atom_names
    }
}

impl Eq for BoolAlgebra {}

impl fmt::Debug for BoolAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoolAlgebra{:?}", self.inner.atom_names)
    }
}

/// Builds the algebra whose atoms carry the given names.
pub fn make_algebra<S: AsRef<str>>(atom_names: &[S]) -> Result<BoolAlgebra> {
    BoolAlgebra::new(atom_names.iter().map(|s| s.as_ref().to_string()))
}

impl BoolAlgebra {
    pub fn new(atom_names: impl IntoIterator<Item = String>) -> Result<Self> {
        let atom_names: Vec<String> = atom_names.into_iter().collect();
        if atom_names.is_empty() {
            return Err(Error::EmptyAlgebra);
        }
        let mut index = HashMap::new();
        for (i, n) in atom_names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateAtom(n.clone()));
            }
        }
        let top = AtomSet::full(atom_names.len());
        Ok(BoolAlgebra {
            inner: Arc::new(AlgebraInner { atom_names, index, element_names: BTreeMap::new(), top }),
        })
    }

    /// Returns a copy of this algebra with an extra element name.
    pub fn with_named_element(&self, name: &str, element: &BoolElement) -> Result<Self> {
        self.check(element)?;
        let inner = &self.inner;
        if inner.element_names.contains_key(name) {
            return Err(Error::DuplicateElement(name.to_string()));
        }
        let mut element_names = inner.element_names.clone();
        element_names.insert(name.to_string(), element.atoms.clone());
        Ok(BoolAlgebra {
            inner: Arc::new(AlgebraInner {
                atom_names: inner.atom_names.clone(),
                index: inner.index.clone(),
                element_names,
                top: inner.top.clone(),
            }),
        })
    }

    pub fn atom_count(&self) -> usize {
        self.inner.atom_names.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.inner.atom_names
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.inner.index.get(name).copied()
    }

    /// Named elements, in name order.
    pub fn element_names(&self) -> impl Iterator<Item = (&str, BoolElement)> + '_ {
        self.inner.element_names.iter().map(|(n, a)| (n.as_str(), self.from_atoms(a.clone())))
    }

    pub fn named(&self, name: &str) -> Option<BoolElement> {
        self.inner.element_names.get(name).map(|a| self.from_atoms(a.clone()))
    }

    pub fn zero(&self) -> BoolElement {
        self.from_atoms(AtomSet::empty(self.atom_count()))
    }

    pub fn one(&self) -> BoolElement {
        self.from_atoms(self.inner.top.clone())
    }

    pub fn atom(&self, i: usize) -> BoolElement {
        self.from_atoms(AtomSet::singleton(self.atom_count(), i))
    }

    pub fn atoms(&self) -> Vec<BoolElement> {
        (0..self.atom_count()).map(|i| self.atom(i)).collect()
    }

    /// The element whose atoms are the named ones.
    pub fn element<S: AsRef<str>>(&self, atom_names: &[S]) -> Result<BoolElement> {
        let mut set = AtomSet::empty(self.atom_count());
        for n in atom_names {
            let i = self.atom_index(n.as_ref()).ok_or_else(|| Error::UnknownAtom(n.as_ref().to_string()))?;
            set.insert(i);
        }
        Ok(self.from_atoms(set))
    }

    pub fn from_atoms(&self, atoms: AtomSet) -> BoolElement {
        debug_assert!(atoms.is_subset(&self.inner.top));
        BoolElement { algebra: self.clone(), atoms }
    }

    pub(crate) fn top_atoms(&self) -> &AtomSet {
        &self.inner.top
    }

    /// Number of elements, `2^atom_count`, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        1u64.checked_shl(self.atom_count() as u32)
    }

    /// All `2^n` elements in binary-counting order (0 first, 1 last).
    pub fn elements(&self) -> Result<Vec<BoolElement>> {
        let n = self.atom_count();
        if n > MAX_TABULATED_ATOMS {
            return Err(Error::TooManyAtoms { atoms: n, what: "element tabulation" });
        }
        Ok((0..1u64 << n).map(|bits| self.from_atoms(AtomSet::from_bits(n, bits))).collect())
    }

    pub fn nonzero_elements(&self) -> Result<Vec<BoolElement>> {
        Ok(self.elements()?.into_iter().skip(1).collect())
    }

    pub(crate) fn check(&self, x: &BoolElement) -> Result<()> {
        if &x.algebra == self {
            Ok(())
        } else {
            Err(Error::MixedAlgebras)
        }
    }

    /// True iff `parts` are nonzero, pairwise disjoint and join to 1.
    pub fn is_partition_of_unity(&self, parts: &[BoolElement]) -> Result<bool> {
        for p in parts {
            self.check(p)?;
        }
        Ok(partition_defect(self, parts).is_none())
    }

    /// Pairwise disjoint nonzero families.
    pub fn is_antichain(&self, parts: &[BoolElement]) -> Result<bool> {
        for p in parts {
            self.check(p)?;
        }
        Ok(parts.iter().all(|p| !p.is_zero())
            && parts.iter().enumerate().all(|(i, p)| parts[i + 1..].iter().all(|q| p.atoms.is_disjoint(&q.atoms))))
    }

    /// Every antichain of the algebra. Feasible only for very small algebras.
    pub fn antichains(&self) -> Result<Vec<Vec<BoolElement>>> {
        let n = self.atom_count();
        if n > 5 {
            return Err(Error::TooManyAtoms { atoms: n, what: "antichain enumeration" });
        }
        let nonzero = self.nonzero_elements()?;
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn go(
            elems: &[BoolElement],
            start: usize,
            used: &AtomSet,
            current: &mut Vec<BoolElement>,
            out: &mut Vec<Vec<BoolElement>>,
        ) {
            out.push(current.clone());
            for i in start..elems.len() {
                if elems[i].atoms.is_disjoint(used) {
                    current.push(elems[i].clone());
                    go(elems, i + 1, &used.or(&elems[i].atoms), current, out);
                    current.pop();
                }
            }
        }
        go(&nonzero, 0, &AtomSet::empty(n), &mut current, &mut out);
        Ok(out)
    }

    /// The ultrafilters of a finite algebra are the principal filters of its
    /// atoms; each is returned as its generating atom.
    pub fn ultrafilters(&self) -> Vec<BoolElement> {
        self.atoms()
    }

    /// Tabulates the algebra in the format accepted by [`import_algebra_table`].
    /// Elements are named by their serialized form.
    pub fn export_table(&self) -> Result<AlgebraTable> {
        let elems = self.elements()?;
        let pos: HashMap<AtomSet, usize> = elems.iter().enumerate().map(|(i, e)| (e.atoms.clone(), i)).collect();
        let idx = |e: &BoolElement| pos[&e.atoms];
        let meet = elems.iter().map(|x| elems.iter().map(|y| idx(&x.meet_unchecked(y))).collect()).collect();
        let join = elems.iter().map(|x| elems.iter().map(|y| idx(&x.join_unchecked(y))).collect()).collect();
        let complement = elems.iter().map(|x| idx(&x.complement())).collect();
        Ok(AlgebraTable {
            elements: elems.iter().map(|e| e.to_string()).collect(),
            meet,
            join,
            complement,
            zero: 0,
            one: elems.len() - 1,
        })
    }
}

fn partition_defect(alg: &BoolAlgebra, parts: &[BoolElement]) -> Option<String> {
    let mut acc = AtomSet::empty(alg.atom_count());
    for p in parts {
        if p.is_zero() {
            return Some("contains 0".into());
        }
        if !acc.is_disjoint(&p.atoms) {
            return Some(format!("{p} overlaps an earlier part"));
        }
        acc = acc.or(&p.atoms);
    }
    if &acc != alg.top_atoms() {
        return Some("parts do not join to 1".into());
    }
    None
}

/// An element of a [`BoolAlgebra`]: the set of atoms (possible worlds) below it.
#[derive(Clone, PartialEq, Eq)]
pub struct BoolElement {
    algebra: BoolAlgebra,
    atoms: AtomSet,
}

impl std::hash::Hash for BoolElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.atoms.hash(state)
    }
}

impl PartialOrd for BoolElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used for deterministic output: by atom count, then bitset.
impl Ord for BoolElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.atoms.len(), &self.atoms).cmp(&(other.atoms.len(), &other.atoms))
    }
}

impl BoolElement {
    pub fn algebra(&self) -> &BoolAlgebra {
        &self.algebra
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn atom_names(&self) -> Vec<&str> {
        self.atoms.iter().map(|i| self.algebra.atom_names()[i].as_str()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        &self.atoms == self.algebra.top_atoms()
    }

    pub fn is_atom(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.algebra.check(other)?;
        Ok(self.meet_unchecked(other))
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.algebra.check(other)?;
        Ok(self.join_unchecked(other))
    }

    pub fn complement(&self) -> Self {
        self.with(self.atoms.complement_in(self.algebra.top_atoms()))
    }

    /// `x ⇒ y`, i.e. `x^c ∨ y`.
    pub fn implies(&self, other: &Self) -> Result<Self> {
        self.algebra.check(other)?;
        Ok(self.complement().join_unchecked(other))
    }

    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.algebra.check(other)?;
        Ok(self.atoms.is_subset(&other.atoms))
    }

    /// Whether `self` belongs to the ultrafilter generated by `atom`.
    pub fn in_ultrafilter(&self, atom: &Self) -> Result<bool> {
        if !atom.is_atom() {
            return Err(Error::NotAnAtom(atom.to_string()));
        }
        atom.leq(self)
    }

    fn meet_unchecked(&self, other: &Self) -> Self {
        self.with(self.atoms.and(&other.atoms))
    }

    fn join_unchecked(&self, other: &Self) -> Self {
        self.with(self.atoms.or(&other.atoms))
    }

    fn with(&self, atoms: AtomSet) -> Self {
        BoolElement { algebra: self.algebra.clone(), atoms }
    }
}

pub fn meet(x: &BoolElement, y: &BoolElement) -> Result<BoolElement> {
    x.meet(y)
}

pub fn join(x: &BoolElement, y: &BoolElement) -> Result<BoolElement> {
    x.join(y)
}

pub fn complement(x: &BoolElement) -> BoolElement {
    x.complement()
}

pub fn implies(x: &BoolElement, y: &BoolElement) -> Result<BoolElement> {
    x.implies(y)
}

pub fn leq(x: &BoolElement, y: &BoolElement) -> Result<bool> {
    x.leq(y)
}

pub fn is_partition_of_unity(algebra: &BoolAlgebra, parts: &[BoolElement]) -> Result<bool> {
    algebra.is_partition_of_unity(parts)
}

pub fn ultrafilters(algebra: &BoolAlgebra) -> Vec<BoolElement> {
    algebra.ultrafilters()
}

/// Serializes as `0`, `1` or `{a1,a3}`.
impl fmt::Display for BoolElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("0")
        } else if self.is_one() {
            f.write_str("1")
        } else {
            write!(f, "{{{}}}", self.atom_names().join(","))
        }
    }
}

impl fmt::Debug for BoolElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A partition of unity: nonzero, pairwise disjoint parts joining to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    algebra: BoolAlgebra,
    parts: Vec<BoolElement>,
}

impl Partition {
    pub fn new(algebra: &BoolAlgebra, parts: Vec<BoolElement>) -> Result<Self> {
        for p in &parts {
            algebra.check(p)?;
        }
        if let Some(why) = partition_defect(algebra, &parts) {
            return Err(Error::NotAPartition(why));
        }
        Ok(Partition { algebra: algebra.clone(), parts })
    }

    pub fn algebra(&self) -> &BoolAlgebra {
        &self.algebra
    }

    pub fn parts(&self) -> &[BoolElement] {
        &self.parts
    }
}

/// The restricted algebra `B_a` together with the maps between it and `B`.
///
/// `B_a` is the set of elements `y ∧ a`; its atoms are the atoms of `B` below
/// `a`, its top is `a`, and complement is `x^c ∧ a`.
#[derive(Clone, Debug)]
pub struct Restriction {
    parent: BoolAlgebra,
    sub: BoolAlgebra,
    situation: AtomSet,
    parent_index: Vec<usize>,
}

/// Builds `B_a` for `a ≠ 0`.
pub fn restrict_algebra(algebra: &BoolAlgebra, a: &BoolElement) -> Result<Restriction> {
    Restriction::new(algebra, a)
}

impl Restriction {
    pub fn new(parent: &BoolAlgebra, a: &BoolElement) -> Result<Self> {
        parent.check(a)?;
        if a.is_zero() {
            return Err(Error::ZeroRestriction);
        }
        let parent_index: Vec<usize> = a.atoms.iter().collect();
        let mut sub = BoolAlgebra::new(parent_index.iter().map(|&i| parent.atom_names()[i].clone()))?;
        let mut this = Restriction { parent: parent.clone(), sub: sub.clone(), situation: a.atoms.clone(), parent_index };
        for (name, e) in parent.element_names() {
            let projected = this.project_atoms(&e.atoms);
            if !projected.is_empty() {
                sub = sub.with_named_element(name, &sub.from_atoms(projected))?;
            }
        }
        this.sub = sub;
        Ok(this)
    }

    pub fn parent(&self) -> &BoolAlgebra {
        &self.parent
    }

    pub fn sub(&self) -> &BoolAlgebra {
        &self.sub
    }

    pub fn situation(&self) -> BoolElement {
        self.parent.from_atoms(self.situation.clone())
    }

    /// `y ↦ y ∧ a`, as an element of `B_a`.
    pub fn project(&self, y: &BoolElement) -> Result<BoolElement> {
        self.parent.check(y)?;
        Ok(self.sub.from_atoms(self.project_atoms(&y.atoms)))
    }

    /// The inclusion `B_a → B`.
    pub fn embed(&self, x: &BoolElement) -> Result<BoolElement> {
        self.sub.check(x)?;
        Ok(self.parent.from_atoms(self.embed_atoms(&x.atoms)))
    }

    pub(crate) fn project_atoms(&self, y: &AtomSet) -> AtomSet {
        AtomSet::from_indices(
            self.parent_index.len(),
            self.parent_index.iter().enumerate().filter(|(_, &p)| y.contains(p)).map(|(k, _)| k),
        )
    }

    pub(crate) fn embed_atoms(&self, x: &AtomSet) -> AtomSet {
        AtomSet::from_indices(self.parent.atom_count(), x.iter().map(|k| self.parent_index[k]))
    }
}

/// A finite Boolean algebra given by explicit operation tables over indices
/// into `elements`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraTable {
    pub elements: Vec<String>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub complement: Vec<usize>,
    pub zero: usize,
    pub one: usize,
}

/// Result of [`import_algebra_table`]: the Stone-form algebra and the image of
/// every table element (`iso[i]` is the image of `elements[i]`).
#[derive(Clone, Debug)]
pub struct ImportedAlgebra {
    pub algebra: BoolAlgebra,
    pub iso: Vec<BoolElement>,
}

/// Validates a tabulated Boolean algebra exhaustively and converts it to
/// powerset form on its atoms (the minimal nonzero elements).
pub fn import_algebra_table(table: &AlgebraTable) -> Result<ImportedAlgebra> {
    let bad = |m: String| Error::NotBooleanAlgebra(m);
    let n = table.elements.len();
    if n == 0 {
        return Err(bad("no elements".into()));
    }
    let shape_ok = table.meet.len() == n
        && table.join.len() == n
        && table.complement.len() == n
        && table.meet.iter().chain(table.join.iter()).all(|row| row.len() == n && row.iter().all(|&k| k < n))
        && table.complement.iter().all(|&k| k < n)
        && table.zero < n
        && table.one < n;
    if !shape_ok {
        return Err(bad("tables are not total over the element list".into()));
    }
    if table.zero == table.one {
        return Err(bad("0 = 1".into()));
    }
    let (m, j, c) = (&table.meet, &table.join, &table.complement);
    let name = |i: usize| &table.elements[i];
    for x in 0..n {
        if m[x][table.one] != x || j[x][table.zero] != x {
            return Err(bad(format!("identity law fails at {}", name(x))));
        }
        if m[x][c[x]] != table.zero || j[x][c[x]] != table.one {
            return Err(bad(format!("{} has no complement", name(x))));
        }
        for y in 0..n {
            if m[x][y] != m[y][x] || j[x][y] != j[y][x] {
                return Err(bad(format!("commutativity fails at ({}, {})", name(x), name(y))));
            }
            if m[x][j[x][y]] != x || j[x][m[x][y]] != x {
                return Err(bad(format!("absorption fails at ({}, {})", name(x), name(y))));
            }
            for z in 0..n {
                if m[x][m[y][z]] != m[m[x][y]][z] || j[x][j[y][z]] != j[j[x][y]][z] {
                    return Err(bad(format!("associativity fails at ({}, {}, {})", name(x), name(y), name(z))));
                }
                if m[x][j[y][z]] != j[m[x][y]][m[x][z]] || j[x][m[y][z]] != m[j[x][y]][j[x][z]] {
                    return Err(bad(format!("distributivity fails at ({}, {}, {})", name(x), name(y), name(z))));
                }
            }
        }
    }
    let le = |x: usize, y: usize| m[x][y] == x;
    let atoms: Vec<usize> = (0..n)
        .filter(|&x| x != table.zero && (0..n).all(|y| y == table.zero || y == x || !le(y, x)))
        .collect();
    let k = atoms.len();
    let algebra = BoolAlgebra::new(atoms.iter().map(|&a| name(a).clone()))?;
    let iso: Vec<BoolElement> = (0..n)
        .map(|x| algebra.from_atoms(AtomSet::from_indices(k, (0..k).filter(|&t| le(atoms[t], x)))))
        .collect();
    let distinct: std::collections::HashSet<&AtomSet> = iso.iter().map(|e| &e.atoms).collect();
    if distinct.len() != n {
        return Err(bad("atom map is not injective".into()));
    }
    if k >= 64 || (1u64 << k) != n as u64 {
        return Err(bad("atom map is not surjective".into()));
    }
    for x in 0..n {
        for y in 0..n {
            if iso[m[x][y]].atoms != iso[x].atoms.and(&iso[y].atoms) {
                return Err(bad("atom map does not preserve meets".into()));
            }
        }
    }
    Ok(ImportedAlgebra { algebra, iso })
}
