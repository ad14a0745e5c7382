use super::matrix::det_bareiss;
use super::pow_u64;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Dense univariate polynomial with integer coefficients, lowest degree first.
///
/// The coefficient vector never ends in a zero; the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    /// `X^m - c`.
    pub fn binomial(m: usize, c: BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); m + 1];
        coeffs[0] = -c;
        coeffs[m] += BigInt::one();
        IntPoly::new(coeffs)
    }

    /// `X^2 - trace*X + norm`.
    pub fn quadratic_charpoly(trace: &BigInt, norm: &BigInt) -> Self {
        IntPoly::new(vec![norm.clone(), -trace.clone(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}X", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}X^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

/// Sylvester matrix with the rows of `first` on top: `deg(second)` shifted
/// copies of `first`, then `deg(first)` shifted copies of `second`,
/// coefficients highest degree first.
pub fn sylvester_matrix(first: &IntPoly, second: &IntPoly) -> Vec<Vec<BigInt>> {
    let m = first.degree().unwrap_or(0);
    let n = second.degree().unwrap_or(0);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    let push_rows = |rows: &mut Vec<Vec<BigInt>>, p: &IntPoly, deg: usize, count: usize| {
        for shift in 0..count {
            let mut row = vec![BigInt::zero(); size];
            for (k, c) in p.coeffs().iter().enumerate() {
                row[shift + deg - k] = c.clone();
            }
            rows.push(row);
        }
    };
    push_rows(&mut rows, first, m, n);
    push_rows(&mut rows, second, n, m);
    rows
}

/// Resultant of `f` and `g` as a Sylvester determinant.
///
/// Normalised so that `Res(f, g) = lc(g)^deg(f) * prod f(beta)` over the roots
/// `beta` of `g`, i.e. the determinant with the rows of `g` on top. If exactly
/// one input is zero the resultant is zero.
pub fn resultant_sylvester(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::invalid("resultant of two zero polynomials"));
    }
    if f.is_zero() || g.is_zero() {
        // Res(0, c) with c a nonzero constant is 1 by the empty-matrix convention.
        let other = if f.is_zero() { g } else { f };
        return Ok(if other.degree() == Some(0) {
            BigInt::one()
        } else {
            BigInt::zero()
        });
    }
    Ok(det_bareiss(&sylvester_matrix(g, f)))
}

/// `Res(X^2 - a X + n, X^m - 1) = n^m - s_m + 1`, where `s_k` is the power-sum
/// sequence `s_0 = 2, s_1 = a, s_k = a s_{k-1} - n s_{k-2}`.
pub fn resultant_quadratic_cyclotomic(a: &BigInt, n: &BigInt, m: u64) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::invalid("cyclotomic exponent m must be positive"));
    }
    let s_m = power_sum(a, n, m);
    Ok(pow_u64(n, m) - s_m + BigInt::one())
}

/// `s_m = alpha^m + beta^m` for the roots of `X^2 - a X + n`.
pub fn power_sum(a: &BigInt, n: &BigInt, m: u64) -> BigInt {
    let mut prev = BigInt::from(2);
    if m == 0 {
        return prev;
    }
    let mut cur = a.clone();
    for _ in 1..m {
        let next = a * &cur - n * &prev;
        prev = cur;
        cur = next;
    }
    cur
}
