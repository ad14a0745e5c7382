//! Exact integer, rational and integer-polynomial arithmetic.
//!
//! Everything here is pure. `BigInt` from `num-bigint` carries every
//! rational-integer quantity in the crate.

mod factor;
mod matrix;
mod poly;

pub use factor::{factorize, is_probable_prime, Factorization};
pub use matrix::{det_bareiss, det_rational, invert_rational};
pub use num_bigint::BigInt;
pub use poly::{power_sum, resultant_quadratic_cyclotomic, resultant_sylvester, sylvester_matrix, IntPoly};

use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Which reduction `gcd_lcm_set` performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcdLcm {
    Gcd,
    Lcm,
}

/// Nonnegative gcd or lcm of a nonempty list.
pub fn gcd_lcm_set(values: &[BigInt], mode: GcdLcm) -> Result<BigInt> {
    if values.is_empty() {
        return Err(Error::invalid("gcd/lcm of an empty list"));
    }
    match mode {
        GcdLcm::Gcd => Ok(values
            .iter()
            .fold(BigInt::zero(), |acc, v| acc.gcd(v))),
        GcdLcm::Lcm => {
            if values.iter().any(Zero::is_zero) {
                return Err(Error::invalid("lcm with a zero element"));
            }
            Ok(values
                .iter()
                .fold(BigInt::from(1), |acc, v| acc.lcm(v))
                .abs())
        }
    }
}

/// `base^exp` for a small exponent.
pub fn pow_u64(base: &BigInt, exp: u64) -> BigInt {
    let mut result = BigInt::from(1);
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    result
}
