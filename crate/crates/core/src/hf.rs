//! Hereditarily finite sets: the classical sets that canonical names encode.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HFSet {
    elements: BTreeSet<HFSet>,
}

impl HFSet {
    pub fn empty() -> Self {
        HFSet::default()
    }

    pub fn from_elements(elements: impl IntoIterator<Item = HFSet>) -> Self {
        HFSet { elements: elements.into_iter().collect() }
    }

    pub fn singleton(x: HFSet) -> Self {
        Self::from_elements([x])
    }

    /// Von Neumann numeral `n = {0, .., n-1}`.
    pub fn ordinal(n: usize) -> Self {
        let mut acc = Vec::new();
        for _ in 0..n {
            let next = Self::from_elements(acc.iter().cloned());
            acc.push(next);
        }
        Self::from_elements(acc)
    }

    pub fn elements(&self) -> impl Iterator<Item = &HFSet> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.elements.contains(x)
    }

    /// Set-theoretic rank: 0 for the empty set, otherwise 1 + max rank of members.
    pub fn rank(&self) -> usize {
        self.elements.iter().map(|e| e.rank() + 1).max().unwrap_or(0)
    }

    /// All HF sets of rank `≤ max_rank` (the stage `V_{max_rank+1}`), sorted.
    /// There are 1, 2, 4, 16, 65536 of them for ranks 0 to 4.
    pub fn all_of_rank_at_most(max_rank: usize) -> Vec<HFSet> {
        assert!(max_rank <= 3, "HF enumeration beyond rank 3 is not supported");
        let mut stage = vec![HFSet::empty()];
        for _ in 0..max_rank {
            let n = stage.len();
            let next: BTreeSet<HFSet> = (0u32..1 << n)
                .map(|bits| HFSet::from_elements((0..n).filter(|i| bits >> i & 1 == 1).map(|i| stage[i].clone())))
                .collect();
            stage = next.into_iter().collect();
        }
        stage
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_and_display() {
        assert_eq!(HFSet::empty().rank(), 0);
        assert_eq!(HFSet::ordinal(2).rank(), 2);
        assert_eq!(HFSet::ordinal(2).to_string(), "{{},{{}}}");
        assert_eq!(HFSet::singleton(HFSet::singleton(HFSet::empty())).rank(), 2);
    }

    #[test]
    fn stage_sizes() {
        let sizes: Vec<usize> = (0..=3).map(|r| HFSet::all_of_rank_at_most(r).len()).collect();
        assert_eq!(sizes, vec![1, 2, 4, 16]);
        assert!(HFSet::all_of_rank_at_most(3).iter().all(|x| x.rank() <= 3));
    }
}
