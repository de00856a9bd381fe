//! Two expansions of the Drinfeld associator and the relations between
//! multiple zeta values and delta values (multiple polylogarithms at 1/2)
//! that come from equating them.
//!
//! - [`symring`]: exact coefficient ring in `c = ln 2`, MZVs and delta values.
//! - [`freealg`]: truncated noncommutative series in two letters.
//! - [`mzv_side`], [`delta_side`]: the two series.
//! - [`relations`]: relation families and exact reduction.
//! - [`numeric`]: arbitrary-precision evaluation and certification.

pub mod delta_side;
pub mod freealg;
pub mod mzv_side;
pub mod numeric;
pub mod relations;
pub mod selftest;
pub mod symring;

pub use delta_side::{iint_to_sym, phi_delta, xi_series, IndexWord};
pub use freealg::{Letter, NCSeries, Word};
pub use mzv_side::{enumerate_pq, phi_mzv, PQComposition};
pub use numeric::{BigReal, Evaluator, Precision, Verdict};
pub use relations::{extract_relations, reduce, Provenance, Relation, RelationSpace};
pub use symring::{Composition, Generator, Monomial, SymExpr};
