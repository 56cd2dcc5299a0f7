//! Elementary number theory: primes, modular arithmetic, quadratic and
//! quartic residue symbols, Dirichlet characters.

pub mod characters;
pub mod modular;
pub mod primes;
pub mod symbols;

pub use characters::{
    polya_vinogradov_check, CharacterGroup, DiscriminantCharacter, PvCheck, ResidueTable,
};
pub use modular::{gcd, inv_mod, is_prime64, isqrt, lcm, mul_mod, pow_mod, sqrt_mod};
pub use primes::{euler_phi, FactorSieve, PrimeTable, MAX_SIEVE_LIMIT};
pub use symbols::{
    jacobi, kronecker, least_primitive_root, quartic_symbol, Quartic, QuarticContext,
};
