//! Arithmetic kernels for comparing number fields through prime splitting.
//!
//! The crate is organized bottom-up:
//!
//! * [`poly`]: exact integer/modular polynomials, factorization over F_p,
//!   discriminants and irreducibility certification over Q.
//! * [`numberfield`]: fields `Q[x]/(f)`, the Dedekind p-maximality test and
//!   prime splitting.
//! * [`zeta`]: truncated Dedekind zeta functions (Euler products and ideal
//!   counts).
//! * [`rayclass`]: the ray-class index chain `h_m = [J^p : P^{p^m}]` of a
//!   prime, its brute-force oracle for Q and quadratic fields, and the
//!   trace-range label `Z[1/p]` built from it.
//! * [`spectrum`]: the combinatorial stratification of the primitive ideal
//!   space by subsets of primes.
//! * [`equivalence`]: splitting fingerprints and the comparison that decides
//!   arithmetic equivalence up to a bound.

pub mod arith;
pub mod equivalence;
pub mod error;
pub mod numberfield;
pub mod poly;
pub mod rayclass;
pub mod spectrum;
pub mod zeta;

pub use error::{Error, ErrorClass, Result};
