//! Polynomials over prime fields, their factorization (squarefree, then
//! distinct-degree, then Cantor-Zassenhaus equal-degree splitting) and the
//! extension fields used as residue fields.

use crate::error::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            r = mulmod(r, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    r
}

/// Inverse modulo a prime; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

/// Polynomial over `F_p`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    pub coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { coeffs }
    }

    pub fn zero() -> Self {
        FpPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        FpPoly { coeffs: vec![1] }
    }

    /// The monomial `X`.
    pub fn x() -> Self {
        FpPoly { coeffs: vec![0, 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, other: &FpPoly, p: u64) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                addmod(
                    *self.coeffs.get(i).unwrap_or(&0),
                    *other.coeffs.get(i).unwrap_or(&0),
                    p,
                )
            })
            .collect();
        FpPoly { coeffs }.trim()
    }

    pub fn sub(&self, other: &FpPoly, p: u64) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                submod(
                    *self.coeffs.get(i).unwrap_or(&0),
                    *other.coeffs.get(i).unwrap_or(&0),
                    p,
                )
            })
            .collect();
        FpPoly { coeffs }.trim()
    }

    pub fn mul(&self, other: &FpPoly, p: u64) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = addmod(out[i + j], mulmod(a, b, p), p);
            }
        }
        FpPoly { coeffs: out }.trim()
    }

    pub fn scale(&self, c: u64, p: u64) -> FpPoly {
        FpPoly::new(self.coeffs.iter().map(|&a| mulmod(a, c, p)).collect(), p)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = inv_mod(divisor.coeffs[dd], p);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (FpPoly::zero(), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mulmod(rem[k + dd], lead_inv, p);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = submod(rem[k + j], mulmod(c, d, p), p);
            }
        }
        rem.truncate(dd);
        (FpPoly { coeffs: quot }.trim(), FpPoly { coeffs: rem }.trim())
    }

    pub fn rem(&self, divisor: &FpPoly, p: u64) -> FpPoly {
        self.div_rem(divisor, p).1
    }

    pub fn monic(&self, p: u64) -> FpPoly {
        match self.coeffs.last() {
            None => FpPoly::zero(),
            Some(&lc) => self.scale(inv_mod(lc, p), p),
        }
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &FpPoly, p: u64) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        a.monic(p)
    }

    pub fn derivative(&self, p: u64) -> FpPoly {
        FpPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulmod(c, i as u64 % p, p))
                .collect(),
            p,
        )
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, mut exp: u128, modulus: &FpPoly, p: u64) -> FpPoly {
        let mut base = self.rem(modulus, p);
        let mut result = FpPoly::one().rem(modulus, p);
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base, p).rem(modulus, p);
            }
            base = base.mul(&base, p).rem(modulus, p);
            exp >>= 1;
        }
        result
    }

    pub fn eval(&self, x: u64, p: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| addmod(mulmod(acc, x, p), c, p))
    }
}

/// `f = g^p` when `f' = 0`: take the p-th root coefficientwise.
fn pth_root(f: &FpPoly, p: u64) -> FpPoly {
    // Over F_p the Frobenius is the identity on coefficients.
    let coeffs = f.coeffs.iter().step_by(p as usize).copied().collect();
    FpPoly::new(coeffs, p)
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with the
/// `g` squarefree, pairwise coprime and `f = prod g^e`.
pub fn squarefree_decomposition(f: &FpPoly, p: u64) -> Vec<(FpPoly, u32)> {
    let mut out = Vec::new();
    sfd_into(&f.monic(p), p, 1, &mut out);
    out
}

fn sfd_into(f: &FpPoly, p: u64, mult: u32, out: &mut Vec<(FpPoly, u32)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let df = f.derivative(p);
    if df.is_zero() {
        sfd_into(&pth_root(f, p), p, mult * p as u32, out);
        return;
    }
    let mut c = f.gcd(&df, p);
    let mut w = f.div_rem(&c, p).0;
    let mut i = 1u32;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c, p);
        let fac = w.div_rem(&y, p).0;
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac.monic(p), i * mult));
        }
        w = y;
        c = c.div_rem(&w, p).0;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        sfd_into(&pth_root(&c, p), p, mult * p as u32, out);
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn distinct_degree(f: &FpPoly, p: u64) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.monic(p);
    let x = FpPoly::x();
    let mut h = x.rem(&rest, p);
    let mut d = 1;
    while let Some(deg) = rest.degree() {
        if deg < 2 * d {
            if deg > 0 {
                out.push((rest.clone(), deg));
            }
            break;
        }
        h = h.pow_mod(p as u128, &rest, p);
        let g = h.sub(&x, p).gcd(&rest, p);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.div_rem(&g, p).0;
            h = h.rem(&rest, p);
            out.push((g, d));
        }
        d += 1;
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct monic irreducibles
/// all of degree `d`.
pub fn equal_degree(f: &FpPoly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return vec![f.monic(p)];
    }
    loop {
        let a = FpPoly::new((0..n).map(|_| rng.gen_range(0..p)).collect(), p);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = a.gcd(f, p);
        let candidate = if g.degree().unwrap_or(0) > 0 {
            g
        } else if p == 2 {
            // Trace map a + a^2 + ... + a^(2^(d-1)).
            let mut t = a.rem(f, p);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t, p).rem(f, p);
                acc = acc.add(&t, p);
            }
            acc.gcd(f, p)
        } else {
            let e = (pow_u128(p, d) - 1) / 2;
            a.pow_mod(e, f, p).sub(&FpPoly::one(), p).gcd(f, p)
        };
        let cd = candidate.degree().unwrap_or(0);
        if cd > 0 && cd < n {
            let other = f.div_rem(&candidate, p).0;
            let mut out = equal_degree(&candidate, d, p, rng);
            out.extend(equal_degree(&other, d, p, rng));
            return out;
        }
    }
}

fn pow_u128(p: u64, d: usize) -> u128 {
    (0..d).fold(1u128, |acc, _| acc * p as u128)
}

/// Full factorization of a nonzero polynomial over `F_p` into monic
/// irreducibles with multiplicities, sorted by degree then coefficients.
pub fn factor(f: &FpPoly, p: u64) -> Vec<(FpPoly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(p ^ 0x9e37_79b9);
    let mut out = Vec::new();
    for (g, e) in squarefree_decomposition(f, p) {
        for (part, d) in distinct_degree(&g, p) {
            for irr in equal_degree(&part, d, p, &mut rng) {
                out.push((irr, e));
            }
        }
    }
    out.sort_by(|a, b| {
        (a.0.degree(), &a.0.coeffs, a.1).cmp(&(b.0.degree(), &b.0.coeffs, b.1))
    });
    out
}

/// Finite field `F_p[t]/(m(t))` with `m` monic irreducible of degree `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    modulus: FpPoly,
    degree: usize,
    /// Absolute traces of `1, t, ..., t^(f-1)`.
    basis_traces: Vec<u64>,
}

/// Element of a [`ResidueField`]: exactly `degree` coordinates in the power
/// basis of the residue generator `t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueFieldElement(pub Vec<u64>);

impl ResidueFieldElement {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl ResidueField {
    /// Build the field; `modulus` must be monic and irreducible over `F_p`.
    pub fn new(p: u64, modulus: FpPoly) -> Result<Self> {
        let degree = modulus
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::invalid("residue field modulus must have degree >= 1"))?;
        if modulus.coeffs[degree] != 1 {
            return Err(Error::invalid("residue field modulus must be monic"));
        }
        let mut field = ResidueField {
            p,
            modulus,
            degree,
            basis_traces: Vec::new(),
        };
        field.basis_traces = (0..degree)
            .map(|i| {
                let mut e = vec![0; degree];
                e[i] = 1;
                field.trace_by_frobenius(&ResidueFieldElement(e))
            })
            .collect();
        Ok(field)
    }

    pub fn prime_field(p: u64) -> Self {
        ResidueField {
            p,
            modulus: FpPoly::x(),
            degree: 1,
            basis_traces: vec![1],
        }
    }

    /// `F_{p^f}` modulo the first monic irreducible of degree `f` in
    /// base-`p` enumeration order of the lower coefficients.
    pub fn extension(p: u64, f: usize) -> Result<Self> {
        if f == 0 {
            return Err(Error::invalid("extension degree must be positive"));
        }
        if f == 1 {
            return Ok(Self::prime_field(p));
        }
        let count = (p as u128).checked_pow(f as u32).filter(|&c| c <= u64::MAX as u128);
        let count = count.ok_or_else(|| Error::invalid("extension too large"))? as u64;
        for index in 0..count {
            let mut coeffs = Vec::with_capacity(f + 1);
            let mut rest = index;
            for _ in 0..f {
                coeffs.push(rest % p);
                rest /= p;
            }
            coeffs.push(1);
            let m = FpPoly::new(coeffs, p);
            let parts = factor(&m, p);
            if parts.len() == 1 && parts[0].1 == 1 && parts[0].0.degree() == Some(f) {
                return Self::new(p, m);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    /// Number of elements, `None` on overflow.
    pub fn size(&self) -> Option<u64> {
        let mut q: u64 = 1;
        for _ in 0..self.degree {
            q = q.checked_mul(self.p)?;
        }
        Some(q)
    }

    pub fn zero(&self) -> ResidueFieldElement {
        ResidueFieldElement(vec![0; self.degree])
    }

    pub fn one(&self) -> ResidueFieldElement {
        self.from_u64(1)
    }

    /// Image of a rational integer residue.
    pub fn from_u64(&self, v: u64) -> ResidueFieldElement {
        let mut e = self.zero();
        e.0[0] = v % self.p;
        e
    }

    pub fn from_i64(&self, v: i64) -> ResidueFieldElement {
        self.from_u64(v.rem_euclid(self.p as i64) as u64)
    }

    /// The residue generator `t` (for `f = 1` this is the root of the linear modulus).
    pub fn generator(&self) -> ResidueFieldElement {
        self.from_poly(&FpPoly::x())
    }

    pub fn from_poly(&self, poly: &FpPoly) -> ResidueFieldElement {
        let r = poly.rem(&self.modulus, self.p);
        let mut c = r.coeffs;
        c.resize(self.degree, 0);
        ResidueFieldElement(c)
    }

    fn to_poly(&self, e: &ResidueFieldElement) -> FpPoly {
        FpPoly::new(e.0.clone(), self.p)
    }

    /// The `index`-th element in base-`p` enumeration order.
    pub fn element(&self, mut index: u64) -> ResidueFieldElement {
        let mut c = vec![0; self.degree];
        for slot in c.iter_mut() {
            *slot = index % self.p;
            index /= self.p;
        }
        ResidueFieldElement(c)
    }

    pub fn index_of(&self, e: &ResidueFieldElement) -> u64 {
        e.0.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: &ResidueFieldElement, b: &ResidueFieldElement) -> ResidueFieldElement {
        ResidueFieldElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| addmod(x, y, self.p))
                .collect(),
        )
    }

    pub fn sub(&self, a: &ResidueFieldElement, b: &ResidueFieldElement) -> ResidueFieldElement {
        ResidueFieldElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| submod(x, y, self.p))
                .collect(),
        )
    }

    pub fn neg(&self, a: &ResidueFieldElement) -> ResidueFieldElement {
        self.sub(&self.zero(), a)
    }

    pub fn scale(&self, a: &ResidueFieldElement, c: u64) -> ResidueFieldElement {
        ResidueFieldElement(a.0.iter().map(|&x| mulmod(x, c % self.p, self.p)).collect())
    }

    pub fn mul(&self, a: &ResidueFieldElement, b: &ResidueFieldElement) -> ResidueFieldElement {
        if self.degree == 1 {
            return ResidueFieldElement(vec![mulmod(a.0[0], b.0[0], self.p)]);
        }
        let prod = self.to_poly(a).mul(&self.to_poly(b), self.p);
        self.from_poly(&prod)
    }

    pub fn square(&self, a: &ResidueFieldElement) -> ResidueFieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &ResidueFieldElement, mut exp: u64) -> ResidueFieldElement {
        let mut base = a.clone();
        let mut result = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.square(&base);
            exp >>= 1;
        }
        result
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &ResidueFieldElement) -> Option<ResidueFieldElement> {
        if a.is_zero() {
            return None;
        }
        // Extended Euclid: track s with s * a = r (mod m).
        let p = self.p;
        let (mut r0, mut r1) = (self.modulus.clone(), self.to_poly(a));
        let (mut s0, mut s1) = (FpPoly::zero(), FpPoly::one());
        while !r1.is_zero() {
            let (quot, rem) = r0.div_rem(&r1, p);
            let s2 = s0.sub(&quot.mul(&s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since the modulus is irreducible.
        let c = inv_mod(r0.coeffs[0], p);
        Some(self.from_poly(&s0.scale(c, p)))
    }

    /// Absolute trace to `F_p`.
    pub fn trace(&self, a: &ResidueFieldElement) -> u64 {
        a.0.iter()
            .zip(&self.basis_traces)
            .fold(0, |acc, (&c, &t)| addmod(acc, mulmod(c, t, self.p), self.p))
    }

    fn trace_by_frobenius(&self, a: &ResidueFieldElement) -> u64 {
        let mut t = a.clone();
        let mut acc = a.clone();
        for _ in 1..self.degree {
            t = self.pow(&t, self.p);
            acc = self.add(&acc, &t);
        }
        acc.0[0]
    }
}
