//! Exact-arithmetic computations around symmetric orbifolds of global
//! quotients `M/G`:
//!
//! - [`presentations`]: words, finitely presented groups, a small presentation
//!   language, builtin surface / non-orientable / free / free-abelian families.
//! - [`groups`]: finite permutation groups as closed multiplication tables,
//!   wreath products `G ≀ S_n`, homomorphism enumeration and counting.
//! - [`subgroups`]: systematic low-index subgroup enumeration with coset
//!   tables, Reidemeister-Schreier presentations, integer Smith normal form
//!   abelianization, and the `j_r` / `u_r` census.
//! - [`bundles`]: decomposition of homomorphisms into wreath products as
//!   equivariant bundle data, classification keys, automorphism groups, and
//!   structural centralizer orders.
//! - [`spaces`]: virtual finite `G`-sets standing in for `G`-manifolds, fixed
//!   sets, quotient Euler characteristics, and the extended invariants.
//! - [`series`]: truncated formal power series over exact rationals with exp,
//!   log, rational powers, and infinite-product bookkeeping.
//! - [`identities`]: both sides of the generating-function identities, the
//!   census recursions, character-table cross-checks, and verification
//!   reports.
//!
//! All arithmetic is exact: series coefficients are big rationals and all
//! counts are big integers. Nothing in this crate uses floating point.

pub mod budget;
pub mod error;
pub mod presentations;
pub mod groups;
pub mod subgroups;
pub mod bundles;
pub mod spaces;
pub mod series;
pub mod identities;

pub use budget::Budget;
pub use error::Error;

/// Exact big integer used for all counts.
pub type Int = num_bigint::BigInt;
/// Exact rational used for all invariant values and series coefficients.
pub type Rat = num_rational::Ratio<num_bigint::BigInt>;

/// Convenience: an `Int` from a machine integer.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Convenience: a `Rat` from a machine integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Convenience: a `Rat` from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}
