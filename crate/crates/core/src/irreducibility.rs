//! The Frobenius resultant criterion, the class-number torsion bound and
//! assembly of the final set of excluded primes.

use crate::arith::{factorize, pow_u64, power_sum, resultant_quadratic_cyclotomic, BigInt, Factorization};
use crate::curve::FrobeniusData;
use crate::error::{Error, Result};
use crate::number_field::{AlgebraicInteger, FieldDescriptor};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Primes below 17 other than 11.
pub const BASELINE: [u64; 5] = [2, 3, 5, 7, 13];

/// `Res(P_q, X^{12r} - 1)` at one prime, with its factorization when nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub prime: String,
    pub r: u64,
    pub value: BigInt,
    pub factorization: Option<Factorization>,
    /// O_K-valued resultant for a non-constant signature and its norm.
    pub general: Option<(AlgebraicInteger, BigInt)>,
}

fn exponent(r: u64) -> Result<u64> {
    if r == 0 {
        return Err(Error::invalid("r must be positive"));
    }
    r.checked_mul(12)
        .ok_or_else(|| Error::invalid(format!("r = {r} is too large")))
}

/// The unfactored value `Res(P_q, X^{12r} - 1)`.
pub fn resultant_value(f: &FrobeniusData, r: u64) -> Result<BigInt> {
    resultant_quadratic_cyclotomic(&f.trace, &f.norm, exponent(r)?)
}

pub fn resultant_criterion(f: &FrobeniusData, r: u64) -> Result<CriterionResult> {
    let value = resultant_value(f, r)?;
    let factorization = if value.is_zero() {
        None
    } else {
        Some(factorize(&value)?)
    };
    Ok(CriterionResult {
        prime: f.prime.clone(),
        r,
        value,
        factorization,
        general: None,
    })
}

/// `Norm(q)^{12r} - gamma s_{12r} + gamma^2` in `O_K` together with its
/// field norm, where `s_k` are the power sums of the roots of `P_q`.
pub fn general_resultant_criterion(
    field: &FieldDescriptor,
    f: &FrobeniusData,
    r: u64,
    gamma: &AlgebraicInteger,
) -> Result<(AlgebraicInteger, BigInt)> {
    let m = exponent(r)?;
    if gamma.coords().len() != field.degree() {
        return Err(Error::invalid("gamma has the wrong number of coordinates"));
    }
    let s_m = power_sum(&f.trace, &f.norm, m);
    let n_m = field.from_int(&pow_u64(&f.norm, m));
    let value = field.add(
        &field.sub(&n_m, &field.scale(gamma, &s_m)),
        &field.mul(gamma, gamma),
    );
    let norm = field.norm(&value);
    Ok((value, norm))
}

/// `(1 + 3^{6dh})^2`.
pub fn merel_bound(d: u64, h: u64) -> Result<BigInt> {
    if d == 0 || h == 0 {
        return Err(Error::invalid("degree and class number must be positive"));
    }
    let e = d
        .checked_mul(h)
        .and_then(|x| x.checked_mul(6))
        .ok_or_else(|| Error::invalid("exponent 6dh overflows"))?;
    let base = pow_u64(&BigInt::from(3), e) + BigInt::one();
    Ok(&base * &base)
}

/// Why a prime is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    SmallPrime,
    Ramified,
    DividesB,
    SurvivesResultants,
    AdditiveResidueChar,
    AuxiliaryPrime,
}

impl Reason {
    pub fn as_str(&self) -> &'static str {
        match self {
            Reason::SmallPrime => "small_prime",
            Reason::Ramified => "ramified",
            Reason::DividesB => "divides_B",
            Reason::SurvivesResultants => "survives_resultants",
            Reason::AdditiveResidueChar => "additive_residue_char",
            Reason::AuxiliaryPrime => "auxiliary_prime",
        }
    }
}

/// Resultant values attached to one auxiliary rational prime. For a fixed
/// curve these are the criteria at the primes above `ell`; for a family a
/// single swept `R_ell`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryGroup {
    pub ell: u64,
    pub values: Vec<BigInt>,
}

impl AuxiliaryGroup {
    pub fn from_criteria(ell: u64, criteria: &[CriterionResult]) -> Self {
        AuxiliaryGroup {
            ell,
            values: criteria.iter().map(|c| c.value.clone()).collect(),
        }
    }

    pub fn gcd(&self) -> BigInt {
        self.values.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
    }
}

/// Sorted excluded primes, each with at least one reason.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BadPrimeSet {
    entries: BTreeMap<BigInt, BTreeSet<Reason>>,
}

impl BadPrimeSet {
    fn add(&mut self, p: BigInt, reason: Reason) {
        self.entries.entry(p).or_default().insert(reason);
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.entries.keys()
    }

    pub fn entries(&self) -> &BTreeMap<BigInt, BTreeSet<Reason>> {
        &self.entries
    }

    pub fn contains(&self, p: &BigInt) -> bool {
        self.entries.contains_key(p)
    }

    pub fn reasons(&self, p: &BigInt) -> Option<&BTreeSet<Reason>> {
        self.entries.get(p)
    }

    /// Members that are 11 or at least 17.
    pub fn beyond_baseline(&self) -> Vec<BigInt> {
        self.entries
            .iter()
            .filter(|(_, r)| !r.contains(&Reason::SmallPrime))
            .map(|(p, _)| p.clone())
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn prime_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    Ok(factorize(n)?.primes().cloned().collect())
}

/// Baseline, ramified primes, divisors of `b`, additive residue
/// characteristics and, when at least one auxiliary group is present, the
/// primes lying in every set `{p | gcd of the group} u {ell}`.
pub fn assemble_bad_primes(
    field: &FieldDescriptor,
    b: &BigInt,
    groups: &[AuxiliaryGroup],
    additive_residue_chars: &[u64],
) -> Result<BadPrimeSet> {
    let mut set = BadPrimeSet::default();
    for p in BASELINE {
        set.add(BigInt::from(p), Reason::SmallPrime);
    }
    for p in field.ramified_primes() {
        set.add(p, Reason::Ramified);
    }
    if b.is_zero() {
        return Err(Error::Degenerate("B is zero".into()));
    }
    for p in prime_divisors(&b.abs())? {
        set.add(p, Reason::DividesB);
    }
    for &p in additive_residue_chars {
        set.add(BigInt::from(p), Reason::AdditiveResidueChar);
    }

    let mut survivors: Option<BTreeSet<BigInt>> = None;
    let mut seen = BTreeSet::new();
    for g in groups {
        if !seen.insert(g.ell) {
            return Err(Error::config(
                format!("aux_primes[{}]", g.ell),
                "auxiliary prime listed twice",
            ));
        }
        if g.values.is_empty() {
            return Err(Error::config(
                format!("aux_primes[{}]", g.ell),
                "no resultants were computed for this auxiliary prime",
            ));
        }
        let gcd = g.gcd();
        if gcd.is_zero() {
            return Err(Error::Degenerate(format!(
                "every resultant at the auxiliary prime {} vanishes",
                g.ell
            )));
        }
        let mut local: BTreeSet<BigInt> = prime_divisors(&gcd)?.into_iter().collect();
        local.insert(BigInt::from(g.ell));
        survivors = Some(match survivors {
            None => local,
            Some(prev) => prev.intersection(&local).cloned().collect(),
        });
    }
    let aux: BTreeSet<BigInt> = groups.iter().map(|g| BigInt::from(g.ell)).collect();
    for p in survivors.unwrap_or_default() {
        if groups.iter().all(|g| g.gcd().is_multiple_of(&p)) {
            set.add(p.clone(), Reason::SurvivesResultants);
        }
        if aux.contains(&p) {
            set.add(p, Reason::AuxiliaryPrime);
        }
    }
    Ok(set)
}
