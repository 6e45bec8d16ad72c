//! A finite version of Scott's random-real model.
//!
//! A finite probability space with exact rational weights; events are all
//! subsets of the worlds, and the measure algebra identifies events that
//! differ by a null set. Since the quotient by null sets just forgets the
//! zero-weight worlds, the measure algebra is the powerset algebra on the
//! positive-weight worlds. Random reals are rational-valued functions on the
//! worlds.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{AtomSet, BoolAlgebra, BoolElement};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
struct SpaceInner {
    worlds: Vec<String>,
    weights: Vec<BigRational>,
}

/// A finite probability space. Cloning is cheap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbSpace(Arc<SpaceInner>);

impl ProbSpace {
    pub fn new(worlds: Vec<(String, BigRational)>) -> Result<Self> {
        if worlds.is_empty() {
            return Err(Error::InvalidSpace("no worlds".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for (w, p) in &worlds {
            if !seen.insert(w.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate world `{w}`")));
            }
            if p.is_negative() {
                return Err(Error::InvalidSpace(format!("negative weight for `{w}`")));
            }
        }
        let total: BigRational = worlds.iter().map(|(_, p)| p.clone()).sum();
        if !total.is_one() {
            return Err(Error::InvalidSpace(format!("weights sum to {total}, not 1")));
        }
        let (worlds, weights) = worlds.into_iter().unzip();
        Ok(ProbSpace(Arc::new(SpaceInner { worlds, weights })))
    }

    /// `n` equally likely worlds `w1..wn`.
    pub fn uniform(n: usize) -> Result<Self> {
        let p = BigRational::new(1.into(), (n.max(1) as i64).into());
        Self::new((1..=n).map(|i| (format!("w{i}"), p.clone())).collect())
    }

    pub fn worlds(&self) -> &[String] {
        &self.0.worlds
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.0.weights
    }

    pub fn len(&self) -> usize {
        self.0.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.worlds.is_empty()
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.0.worlds.iter().position(|w| w == name)
    }

    /// `P(event)` for an event given as world indices.
    pub fn probability(&self, event: &[usize]) -> BigRational {
        let mut seen = vec![false; self.len()];
        let mut p = BigRational::zero();
        for &w in event {
            if !std::mem::replace(&mut seen[w], true) {
                p += &self.0.weights[w];
            }
        }
        p
    }
}

/// `B = 𝒜/(P = 0)` for a finite space, with the quotient map from events.
#[derive(Clone, Debug)]
pub struct MeasureAlgebra {
    space: ProbSpace,
    algebra: BoolAlgebra,
    atom_of_world: Vec<Option<usize>>,
}

pub fn measure_algebra(space: &ProbSpace) -> MeasureAlgebra {
    MeasureAlgebra::new(space)
}

impl MeasureAlgebra {
    pub fn new(space: &ProbSpace) -> Self {
        let mut atom_of_world = Vec::with_capacity(space.len());
        let mut names = Vec::new();
        for (w, p) in space.worlds().iter().zip(space.weights()) {
            if p.is_zero() {
                atom_of_world.push(None);
            } else {
                atom_of_world.push(Some(names.len()));
                names.push(w.clone());
            }
        }
        // ProbSpace guarantees total weight 1, hence a positive world.
        let algebra = BoolAlgebra::new(names).expect("space has a positive-weight world");
        MeasureAlgebra { space: space.clone(), algebra, atom_of_world }
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn algebra(&self) -> &BoolAlgebra {
        &self.algebra
    }

    /// The class of an event modulo null sets.
    pub fn quotient(&self, event: impl IntoIterator<Item = usize>) -> BoolElement {
        let n = self.algebra.atom_count();
        let atoms = AtomSet::from_indices(n, event.into_iter().filter_map(|w| self.atom_of_world[w]));
        self.algebra.from_atoms(atoms)
    }

    /// The induced measure on `B`; strictly positive on nonzero elements.
    pub fn measure(&self, x: &BoolElement) -> Result<BigRational> {
        self.algebra.check(x)?;
        let worlds: Vec<usize> = (0..self.space.len())
            .filter(|&w| self.atom_of_world[w].is_some_and(|a| x.atoms().contains(a)))
            .collect();
        Ok(self.space.probability(&worlds))
    }

    fn check(&self, xi: &RandomReal) -> Result<()> {
        if xi.space == self.space {
            Ok(())
        } else {
            Err(Error::MixedSpaces)
        }
    }

    fn pointwise(&self, xi: &RandomReal, eta: &RandomReal, f: impl Fn(&BigRational, &BigRational) -> bool) -> Result<BoolElement> {
        self.check(xi)?;
        self.check(eta)?;
        Ok(self.quotient((0..self.space.len()).filter(|&w| f(&xi.values[w], &eta.values[w]))))
    }

    /// `[[ξ = η]]`: the worlds where they coincide, modulo null sets.
    pub fn rr_eq(&self, xi: &RandomReal, eta: &RandomReal) -> Result<BoolElement> {
        self.pointwise(xi, eta, |x, y| x == y)
    }

    /// `[[ξ ≤ η]]`.
    pub fn rr_leq(&self, xi: &RandomReal, eta: &RandomReal) -> Result<BoolElement> {
        self.pointwise(xi, eta, |x, y| x <= y)
    }

    /// `[[ξ ≤ r]]` for a constant `r`.
    pub fn rr_leq_const(&self, xi: &RandomReal, r: &BigRational) -> Result<BoolElement> {
        self.check(xi)?;
        Ok(self.quotient((0..self.space.len()).filter(|&w| &xi.values[w] <= r)))
    }
}

/// A rational-valued function on the worlds of a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomReal {
    space: ProbSpace,
    values: Vec<BigRational>,
}

impl RandomReal {
    pub fn new(space: &ProbSpace, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::WrongArity { expected: space.len(), got: values.len() });
        }
        Ok(RandomReal { space: space.clone(), values })
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// A copy with the value at one world replaced.
    pub fn with_value(&self, world: usize, value: BigRational) -> Self {
        let mut values = self.values.clone();
        values[world] = value;
        RandomReal { space: self.space.clone(), values }
    }
}

/// The constant random real `r̂`.
pub fn embed_const(space: &ProbSpace, r: &BigRational) -> RandomReal {
    RandomReal { space: space.clone(), values: vec![r.clone(); space.len()] }
}

pub fn rr_eq(xi: &RandomReal, eta: &RandomReal) -> Result<BoolElement> {
    MeasureAlgebra::new(&xi.space).rr_eq(xi, eta)
}

pub fn rr_leq(xi: &RandomReal, eta: &RandomReal) -> Result<BoolElement> {
    MeasureAlgebra::new(&xi.space).rr_leq(xi, eta)
}

pub fn rr_leq_const(xi: &RandomReal, r: &BigRational) -> Result<BoolElement> {
    MeasureAlgebra::new(&xi.space).rr_leq_const(xi, r)
}

/// Formats a rational as `p/q`, or `p` when integral.
pub struct Rational<'a>(pub &'a BigRational);

impl fmt::Display for Rational<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn three_worlds() -> ProbSpace {
        ProbSpace::new(vec![("w1".into(), q(1, 2)), ("w2".into(), q(1, 2)), ("w3".into(), q(0, 1))]).unwrap()
    }

    #[test]
    fn measure_algebra_examples() {
        let s = ProbSpace::uniform(2).unwrap();
        let m = measure_algebra(&s);
        assert_eq!(m.algebra().atom_count(), 2);
        assert_eq!(m.quotient([0]), m.algebra().atom(0));

        let m = measure_algebra(&three_worlds());
        assert_eq!(m.algebra().atom_count(), 2);
        assert_eq!(m.quotient([0, 2]), m.algebra().element(&["w1"]).unwrap());
        assert!(m.quotient([2]).is_zero());

        let m = measure_algebra(&ProbSpace::new(vec![("w1".into(), q(1, 1))]).unwrap());
        assert_eq!(m.algebra().atom_count(), 1);
    }

    #[test]
    fn invalid_spaces() {
        assert!(ProbSpace::new(vec![]).is_err());
        assert!(ProbSpace::new(vec![("w".into(), q(1, 2))]).is_err());
        assert!(ProbSpace::new(vec![("w".into(), q(3, 2)), ("v".into(), q(-1, 2))]).is_err());
        assert!(ProbSpace::new(vec![("w".into(), q(1, 2)), ("w".into(), q(1, 2))]).is_err());
    }

    #[test]
    fn comparisons() {
        let s = three_worlds();
        let m = measure_algebra(&s);
        let xi = RandomReal::new(&s, vec![q(0, 1), q(1, 1), q(5, 1)]).unwrap();
        let eta = RandomReal::new(&s, vec![q(0, 1), q(0, 1), q(7, 1)]).unwrap();
        assert_eq!(m.rr_eq(&xi, &eta).unwrap(), m.algebra().element(&["w1"]).unwrap());
        assert!(m.rr_leq(&eta, &xi).unwrap().is_one());

        let s2 = ProbSpace::uniform(2).unwrap();
        let xi2 = RandomReal::new(&s2, vec![q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(rr_leq_const(&xi2, &q(0, 1)).unwrap(), measure_algebra(&s2).algebra().element(&["w1"]).unwrap());
        assert_eq!(rr_eq(&xi, &xi2).unwrap_err(), Error::MixedSpaces);
    }

    #[test]
    fn constants() {
        let s = three_worlds();
        let zero = embed_const(&s, &q(0, 1));
        let one = embed_const(&s, &q(1, 1));
        assert!(rr_eq(&zero, &zero).unwrap().is_one());
        assert!(rr_eq(&zero, &one).unwrap().is_zero());
        assert!(zero.values().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn arity_checked() {
        let s = three_worlds();
        assert_eq!(RandomReal::new(&s, vec![q(1, 1)]).unwrap_err(), Error::WrongArity { expected: 3, got: 1 });
    }

    #[test]
    fn measure_is_positive_on_nonzero() {
        let m = measure_algebra(&three_worlds());
        for x in m.algebra().nonzero_elements().unwrap() {
            assert!(m.measure(&x).unwrap().is_positive());
        }
        assert!(m.measure(&m.algebra().one()).unwrap().is_one());
    }

    #[test]
    fn finite_measure_algebra_has_ccc() {
        let m = measure_algebra(&ProbSpace::uniform(4).unwrap());
        let chains = m.algebra().antichains().unwrap();
        assert!(chains.iter().all(|c| c.len() <= 4));
        assert!(chains.iter().all(|c| m.algebra().is_antichain(c).unwrap()));
    }

    #[test]
    fn rational_display() {
        assert_eq!(Rational(&q(1, 2)).to_string(), "1/2");
        assert_eq!(Rational(&q(-6, 3)).to_string(), "-2");
    }
}
