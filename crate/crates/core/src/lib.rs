//! Boolean-valued models of set theory over finite Boolean algebras.
//!
//! Elements of an algebra are sets of atoms. A [`BVSet`] maps earlier
//! boolean-valued sets to algebra elements; the [`Evaluator`] computes
//! `[[u ∈ v]]` and `[[u = v]]` by the usual mutual recursion. On top of that
//! sit a bounded first-order evaluator ([`logic`]), situations and
//! restrictions ([`states`]), a finite measure algebra with random reals
//! ([`scott`]) and a text format ([`textio`]).
//!
//! ```
//! use kaleido::{make_algebra, parse_formula, Environment, Interpreter};
//!
//! let b0 = make_algebra(&["a", "b"]).unwrap();
//! let env = Environment::new(&b0);
//! let f = parse_formula("exists x in name({{}}): x = name({})").unwrap();
//! assert!(Interpreter::new(&env).models(&f).unwrap());
//! ```

pub mod algebra;
pub mod demo;
mod error;
pub mod exec;
pub mod hf;
pub mod laws;
pub mod logic;
pub mod scott;
pub mod states;
pub mod textio;
pub mod universe;

pub use algebra::{make_algebra, AtomSet, BoolAlgebra, BoolElement, Partition, Restriction};
pub use error::{Error, Result};
pub use exec::Exec;
pub use hf::HFSet;
pub use laws::{check_congruence_laws, LawReport};
pub use logic::{kaleidoscopic_eval, AlgebraFamily, Environment, Formula, Interpreter, Term};
pub use scott::{MeasureAlgebra, ProbSpace, RandomReal};
pub use states::{mix, quotient_by_atom, reconstruct, restrict_set, star_profile};
pub use textio::{parse_formula, parse_workspace, Workspace};
pub use universe::{bv_eq, bv_mem, canonical_name, enumerate_universe, normalize, BVSet, Evaluator};

/// Source of the built-in workspace.
pub const PRELUDE: &str = include_str!("../data/prelude.bvw");

/// The built-in workspace: algebras `B1`, `B0` (with the example sets),
/// `B3`, the family `chain` and the space `coin`.
pub fn prelude() -> Result<Workspace> {
    parse_workspace(PRELUDE)
}
