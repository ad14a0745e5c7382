//! Rational polynomials (lowest degree first), reduction modulo the defining
//! polynomial, Sturm sequences and real-root isolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

pub type QPoly = Vec<BigRational>;

pub fn trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn from_ints(c: &[BigInt]) -> QPoly {
    trim(c.iter().cloned().map(BigRational::from_integer).collect())
}

pub fn add(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
                let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
                x + y
            })
            .collect(),
    )
}

pub fn scale(a: &[BigRational], c: &BigRational) -> QPoly {
    trim(a.iter().map(|x| x * c).collect())
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Remainder and quotient of `a` by a nonzero `b`.
pub fn div_rem(a: &[BigRational], b: &[BigRational]) -> (QPoly, QPoly) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut rem = trim(a.to_vec());
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] / &lead;
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                let v = &c * y;
                rem[k + j] -= v;
            }
        }
        quot[k] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

pub fn rem(a: &[BigRational], b: &[BigRational]) -> QPoly {
    div_rem(a, b).1
}

/// `p(u) mod f`.
pub fn compose_mod(p: &[BigRational], u: &[BigRational], f: &[BigRational]) -> QPoly {
    let mut acc: QPoly = Vec::new();
    for c in p.iter().rev() {
        acc = rem(&add(&mul(&acc, u), &[c.clone()]), f);
    }
    acc
}

pub fn derivative(p: &[BigRational]) -> QPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

pub fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sign(x: &BigRational) -> i8 {
    match x.cmp(&BigRational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Sturm sequence `p, p', -rem(p, p'), ...`.
pub fn sturm_sequence(p: &[BigRational]) -> Vec<QPoly> {
    let mut seq = vec![trim(p.to_vec())];
    let d = derivative(p);
    if d.is_empty() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(scale(&r, &-BigRational::one()));
    }
    seq
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn changes_at(seq: &[QPoly], x: &BigRational) -> usize {
    sign_changes(seq.iter().map(|p| sign(&eval(p, x))))
}

/// Number of distinct real roots of a squarefree polynomial.
pub fn count_real_roots(p: &[BigRational]) -> usize {
    let seq = sturm_sequence(p);
    let at_pos = sign_changes(seq.iter().map(|q| sign(q.last().unwrap())));
    let at_neg = sign_changes(seq.iter().map(|q| {
        let s = sign(q.last().unwrap());
        if (q.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    at_neg.saturating_sub(at_pos)
}

/// Isolating intervals `[lo, hi]` for the real roots of a squarefree
/// polynomial, refined to width at most `2^-bits`, sorted ascending. A
/// rational root is returned as a degenerate interval.
pub fn isolate_real_roots(p: &[BigRational], bits: u32) -> Vec<(BigRational, BigRational)> {
    let p = trim(p.to_vec());
    if p.len() < 2 {
        return Vec::new();
    }
    let seq = sturm_sequence(&p);
    let lead = p.last().unwrap().abs();
    let bound = p[..p.len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
        + BigRational::one();
    let mut stack = vec![(-bound.clone(), bound)];
    let mut isolated = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let n = changes_at(&seq, &lo) - changes_at(&seq, &hi);
        match n {
            0 => {}
            1 => isolated.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / BigRational::from_integer(2.into());
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let mut out: Vec<_> = isolated
        .into_iter()
        .map(|(lo, hi)| refine(&p, lo, hi, &width))
        .collect();
    out.sort();
    out
}

/// Bisect `(lo, hi]` holding exactly one simple root.
fn refine(
    p: &[BigRational],
    mut lo: BigRational,
    mut hi: BigRational,
    width: &BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    if eval(p, &hi).is_zero() {
        return (hi.clone(), hi);
    }
    let s_hi = sign(&eval(p, &hi));
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        let s = sign(&eval(p, &mid));
        if s == 0 {
            return (mid.clone(), mid);
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}
