//! Outward-rounded fixed-point interval arithmetic, scale `2^-PREC`.
//!
//! Used only to certify that a real regulator is bounded away from zero; all
//! other arithmetic in the crate is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub const PREC: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigInt,
    pub hi: BigInt,
}

fn unit() -> BigInt {
    BigInt::one() << PREC
}

fn floor_shift(x: BigInt) -> BigInt {
    x.div_floor(&unit())
}

fn ceil_shift(x: BigInt) -> BigInt {
    -((-x).div_floor(&unit()))
}

impl Interval {
    pub fn point(v: BigInt) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn from_integer(n: &BigInt) -> Self {
        Interval::point(n << PREC)
    }

    /// Smallest fixed-point interval containing `[lo, hi]`.
    pub fn from_rationals(lo: &BigRational, hi: &BigRational) -> Self {
        let scaled_lo = lo * BigRational::from_integer(unit());
        let scaled_hi = hi * BigRational::from_integer(unit());
        Interval {
            lo: scaled_lo.floor().to_integer(),
            hi: scaled_hi.ceil().to_integer(),
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Interval::from_rationals(q, q)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = products.iter().min().unwrap().clone();
        let max = products.iter().max().unwrap().clone();
        Interval {
            lo: floor_shift(min),
            hi: ceil_shift(max),
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn abs(&self) -> Interval {
        if self.lo.is_negative() && self.hi.is_positive() {
            Interval {
                lo: BigInt::zero(),
                hi: self.hi.clone().max(-&self.lo),
            }
        } else if self.hi.is_negative() || self.hi.is_zero() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Natural logarithm of a strictly positive interval.
    pub fn ln(&self) -> Option<Interval> {
        if !self.lo.is_positive() {
            return None;
        }
        let (lo, lo_err) = ln_fixed(&self.lo);
        let (hi, hi_err) = ln_fixed(&self.hi);
        Some(Interval {
            lo: lo - lo_err,
            hi: hi + hi_err,
        })
    }

    /// Midpoint and half-width, in fixed point.
    pub fn midpoint_radius(&self) -> (BigInt, BigInt) {
        let sum = &self.lo + &self.hi;
        let diff = &self.hi - &self.lo;
        (sum.div_floor(&BigInt::from(2)), (diff + BigInt::one()).div_floor(&BigInt::from(2)))
    }

    /// Decimal rendering with a few significant digits, for reports.
    pub fn describe(v: &BigInt) -> String {
        let q = BigRational::new(v.clone(), unit());
        let scaled = (q * BigRational::from_integer(BigInt::from(10).pow(12))).round();
        let s = scaled.to_integer();
        let neg = s.is_negative();
        let digits = s.abs().to_string();
        let padded = format!("{digits:0>13}");
        let (int, frac) = padded.split_at(padded.len() - 12);
        format!("{}{int}.{frac}", if neg { "-" } else { "" })
    }
}

/// `2 atanh(z)` for fixed-point `0 <= z < 1/3`, with an error bound in ulps.
fn two_atanh(z: &BigInt) -> (BigInt, BigInt) {
    let z2 = floor_shift(z * z);
    let mut power = z.clone();
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * n + 1);
        power = floor_shift(&power * &z2);
        n += 1;
    }
    let err = BigInt::from(4 * (n + 2) * (n + 2));
    (sum * 2, err)
}

fn ln2() -> (BigInt, BigInt) {
    // ln 2 = 2 atanh(1/3).
    let third = unit() / 3;
    let (v, e) = two_atanh(&third);
    (v, e + 2)
}

/// `ln(x / 2^PREC)` for a positive fixed-point `x`, with an error bound.
fn ln_fixed(x: &BigInt) -> (BigInt, BigInt) {
    let bits = x.bits() as i64;
    let k = bits - 1 - PREC as i64;
    let m = if k >= 0 {
        x >> (k as u64)
    } else {
        x << ((-k) as u64)
    };
    // m in [2^P, 2^(P+1)); z = (m - 1)/(m + 1) in [0, 1/3).
    let one = unit();
    let z = ((&m - &one) << PREC) / (&m + &one);
    let (ln_m, err_m) = two_atanh(&z);
    let (l2, err2) = ln2();
    let value = ln_m + &l2 * k;
    let err = err_m + err2 * k.unsigned_abs() + 4;
    (value, err)
}
