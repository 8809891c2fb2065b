//! Exact integer and modular polynomial arithmetic.

mod factor;
mod int;
mod irreducible;
mod modp;
mod parse;
mod resultant;

pub use factor::{
    distinct_degree, factor_mod_p, factor_mod_p_seeded, squarefree_decomposition, FactorizationFp,
};
pub use int::IntPoly;
pub use irreducible::{
    factor_over_q, hensel_lift, is_irreducible_over_q, Irreducibility, IrreducibilityEffort,
};
pub use modp::{ModPoly, Modulus};
pub use parse::parse_poly;
pub use resultant::{discriminant, prime_divides_discriminant, resultant};
