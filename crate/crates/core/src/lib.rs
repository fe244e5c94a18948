//! Exact computations for weighted blow-ups of cyclic quotient and
//! hyperquotient singularities.
//!
//! - [`arith`]: rationals, exponent vectors, weight normalization
//! - [`quotient`]: singularity types, polynomials, invariant monoids
//! - [`notation`]: the `1/m(a1,...,an)` text notation
//! - [`wideal`]: the weight valuation and weighted monomial ideals
//! - [`blowup`]: fan, charts, valuations and strict transforms
//! - [`lifting`]: exhaustive checker for the lifting identities

pub mod arith;
pub mod blowup;
mod error;
pub mod lifting;
pub mod limits;
pub mod notation;
pub mod quotient;
pub mod wideal;

pub use arith::{divides, lcm_of, normalize_weights, ExpVec, Rat};
pub use error::{Error, Result};
pub use quotient::{CyclicQuotientType, HyperquotientType, Polynomial, Singularity};
pub use wideal::{WeightSystem, WeightedIdeal};
