//! Exact integer, rational and polynomial arithmetic.

mod ecm;
mod integer;
mod matrix;
mod modp;
mod mont;
mod poly;
mod resultant;

pub use integer::{
    factorize, is_prime, is_prime_u64, is_squarefree, jacobi_symbol, kronecker_symbol, next_prime, primality,
    prime_divisors, primes_up_to, FactorOptions, Factorization, Primality,
};
pub use matrix::Matrix;
pub use modp::{
    dedekind_p_maximal, factor_mod_p, factor_mod_p_seeded, factor_modpoly, factor_product, first_dependence,
    is_irreducible_mod_p, kernel_mod_p, powm, rank_mod_p, reduce_mod, ModPoly, DEFAULT_SEED,
};
pub use poly::{Field, Polynomial, Scalar};
pub use resultant::{count_real_roots, discriminant, poly_resultant};
