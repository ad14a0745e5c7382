//! Isogeny signatures, twisted norms and the unit bound `B`.
//!
//! For a signature `s` in `{0, 12}^G` the twisted norm of `a` is
//! `prod tau(a)^{s_tau}`. `A_s` is the norm of the gcd of the ideals
//! `(N_s(eps_i) - 1)` over a unit basis, and `B` is the lcm of `A_s` over the
//! non-constant signatures.

use crate::arith::{factorize, BigInt, Factorization};
use crate::error::{Error, Result};
use crate::number_field::{AlgebraicInteger, FieldDescriptor, IdealHNF};
use crate::units::UnitBasis;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::fmt;

/// Coordinate size guard for twisted-norm powers, in decimal digits.
pub const MAX_COORD_DIGITS: usize = 1_000_000;

/// Entries indexed by the field's automorphism order, each 0 or 12.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(Vec<u8>);

impl Signature {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        if entries.iter().any(|&e| e != 0 && e != 12) {
            return Err(Error::invalid("signature entries must be 0 or 12"));
        }
        Ok(Signature(entries))
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// Signature permuted by `perm`: entry `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Signature {
        let mut out = vec![0; self.0.len()];
        for (i, &e) in self.0.iter().enumerate() {
            out[perm[i]] = e;
        }
        Signature(out)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The `2^d - 2` non-constant signatures in binary counting order: for
/// `k = 1 .. 2^d - 2`, entry `i` is 12 exactly when bit `i` of `k` is set.
pub fn enumerate_nonconstant_signatures(d: usize) -> Vec<Signature> {
    if d < 2 {
        return Vec::new();
    }
    assert!(d < 32, "degree too large to enumerate signatures");
    (1u64..(1u64 << d) - 1)
        .map(|k| {
            Signature(
                (0..d)
                    .map(|i| if (k >> i) & 1 == 1 { 12 } else { 0 })
                    .collect(),
            )
        })
        .collect()
}

/// `prod tau(a)^{s_tau}`, exact.
pub fn twisted_norm(
    field: &FieldDescriptor,
    s: &Signature,
    a: &AlgebraicInteger,
) -> Result<AlgebraicInteger> {
    if s.0.len() != field.automorphism_count() {
        return Err(Error::invalid(format!(
            "signature has {} entries but the field has {} automorphisms",
            s.0.len(),
            field.automorphism_count()
        )));
    }
    let mut acc = field.one();
    for (k, &e) in s.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let conj = field.apply_automorphism(k, a);
        acc = field.mul(&acc, &field.pow(&conj, e as u64));
        if acc.max_digits() > MAX_COORD_DIGITS {
            return Err(Error::SizeCap(format!(
                "twisted norm coordinates exceed {MAX_COORD_DIGITS} digits"
            )));
        }
    }
    Ok(acc)
}

/// `A_s = Norm(gcd_i (N_s(eps_i) - 1) O_K)`. Vanishing terms are skipped; the
/// result is zero only when every term vanishes.
pub fn compute_a_s(field: &FieldDescriptor, s: &Signature, units: &UnitBasis) -> Result<BigInt> {
    if s.is_constant() {
        return Err(Error::invalid(format!(
            "A_s is only defined for non-constant signatures, got {s}"
        )));
    }
    let mut acc: Option<IdealHNF> = None;
    for eps in &units.units {
        let n = twisted_norm(field, s, eps)?;
        let term = field.sub(&n, &field.one());
        if term.is_zero() {
            continue;
        }
        let ideal = IdealHNF::from_element(field, &term)?;
        acc = Some(match acc {
            None => ideal,
            Some(prev) => prev.gcd(&ideal),
        });
    }
    Ok(acc.map(|i| i.norm()).unwrap_or_else(BigInt::zero))
}

/// One row of the `A_s` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureBound {
    pub signature: Signature,
    pub value: BigInt,
    pub factorization: Factorization,
}

/// `B` with its factorization and the per-signature table it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitBound {
    pub table: Vec<SignatureBound>,
    pub value: BigInt,
    pub factorization: Factorization,
}

/// `B = lcm A_s` over non-constant signatures. The `A_s` are independent and
/// computed in parallel; the lcm is accumulated in signature order.
pub fn compute_b(field: &FieldDescriptor, units: &UnitBasis) -> Result<UnitBound> {
    let d = field.degree();
    if d < 2 {
        return Err(Error::invalid("B is only defined in degree >= 2"));
    }
    let signatures = enumerate_nonconstant_signatures(d);
    let values: Vec<Result<BigInt>> = signatures
        .par_iter()
        .map(|s| compute_a_s(field, s, units))
        .collect();
    let mut table = Vec::with_capacity(signatures.len());
    let mut lcm = BigInt::one();
    for (s, v) in signatures.into_iter().zip(values) {
        let v = v?;
        if v.is_zero() {
            return Err(Error::Degenerate(format!(
                "A_s vanishes for signature {s}; the field data are inconsistent"
            )));
        }
        lcm = lcm.lcm(&v);
        table.push(SignatureBound {
            factorization: factorize(&v)?,
            signature: s,
            value: v,
        });
    }
    Ok(UnitBound {
        factorization: factorize(&lcm)?,
        value: lcm,
        table,
    })
}
