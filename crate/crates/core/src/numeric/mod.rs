//! Exact arithmetic kernel: integers, dense polynomials over Z and F_p,
//! factorization modulo p, and integer linear algebra.

pub mod int_poly;
pub mod integer;
pub mod matrix;
pub mod mod_poly;

pub use int_poly::IntPoly;
pub use integer::{factor_integer, is_prime_big, is_prime_u64, order_mod_plus_minus, Factorization};
pub use mod_poly::{factor_mod_p, ModPoly};
