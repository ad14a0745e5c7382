//! Sweeps of a two-parameter curve family over residue pairs modulo an
//! auxiliary rational prime.
//!
//! For each pair `(a, b)` mod `ell` the value `R^{a,b}` is the gcd over the
//! primes `q | ell` of `Res(P_q, X^{12r} - 1)`; `R_ell` is the lcm over pairs.

use crate::arith::{factorize, BigInt, Factorization};
use crate::curve::{frobenius_of_reduced, ReducedCurve};
use crate::error::{Error, Result};
use crate::finite_field::ResidueFieldElement;
use crate::irreducibility::resultant_value;
use crate::number_field::{residue_map, split_prime, AlgebraicInteger, FieldDescriptor, PrimeIdeal};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// `coeff * a^i * b^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub coeff: AlgebraicInteger,
}

/// Which residue pairs are left out of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipPredicate {
    /// `(a, b) = (0, 0)` mod `ell`.
    #[default]
    BothZero,
    /// `ell | a b`.
    SharedFactor,
    None,
}

impl SkipPredicate {
    pub fn skips(&self, a: u64, b: u64) -> bool {
        match self {
            SkipPredicate::BothZero => a == 0 && b == 0,
            SkipPredicate::SharedFactor => a == 0 || b == 0,
            SkipPredicate::None => false,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SkipPredicate::BothZero => "both_zero",
            SkipPredicate::SharedFactor => "shared_factor",
            SkipPredicate::None => "none",
        }
    }
}

/// Weierstrass coefficients `[a1, a2, a3, a4, a6]` as polynomials in `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveFamily {
    pub coeffs: [Vec<Monomial>; 5],
    pub skip: SkipPredicate,
    pub additive_residue_chars: Vec<u64>,
}

impl CurveFamily {
    pub fn new(
        field: &FieldDescriptor,
        coeffs: [Vec<Monomial>; 5],
        skip: SkipPredicate,
        additive_residue_chars: Vec<u64>,
    ) -> Result<Self> {
        for (slot, monomials) in coeffs.iter().enumerate() {
            for m in monomials {
                if m.coeff.coords().len() != field.degree() {
                    return Err(Error::invalid(format!(
                        "family coefficient {} has a monomial with {} coordinates, expected {}",
                        ["a1", "a2", "a3", "a4", "a6"][slot],
                        m.coeff.coords().len(),
                        field.degree()
                    )));
                }
            }
        }
        Ok(CurveFamily {
            coeffs,
            skip,
            additive_residue_chars,
        })
    }
}

/// Family coefficients reduced into the residue field of one prime.
struct LocalFamily<'a> {
    prime: &'a PrimeIdeal,
    terms: [Vec<(u32, u32, ResidueFieldElement)>; 5],
}

impl<'a> LocalFamily<'a> {
    fn new(family: &CurveFamily, prime: &'a PrimeIdeal) -> Self {
        let terms = family.coeffs.clone().map(|ms| {
            ms.iter()
                .map(|m| (m.i, m.j, residue_map(&m.coeff, prime)))
                .collect()
        });
        LocalFamily { prime, terms }
    }

    fn specialize(&self, a: u64, b: u64) -> Option<ReducedCurve> {
        let k = self.prime.residue_field();
        let (ra, rb) = (k.from_u64(a), k.from_u64(b));
        let coeffs = self.terms.clone().map(|terms| {
            terms.iter().fold(k.zero(), |acc, (i, j, c)| {
                let t = k.mul(c, &k.mul(&k.pow(&ra, *i as u64), &k.pow(&rb, *j as u64)));
                k.add(&acc, &t)
            })
        });
        ReducedCurve::new(k.clone(), coeffs)
    }
}

/// Evaluate the family at a residue pair inside the residue field of `q`.
pub fn specialize(family: &CurveFamily, q: &PrimeIdeal, pair: (u64, u64)) -> Result<ReducedCurve> {
    let ell = q.characteristic();
    LocalFamily::new(family, q)
        .specialize(pair.0 % ell, pair.1 % ell)
        .ok_or_else(|| Error::BadReduction {
            prime: format!("{} at (a, b) = ({}, {})", q.label(), pair.0, pair.1),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    SkipPredicate,
    BadReductionAtModel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedPair {
    pub a: u64,
    pub b: u64,
    pub reason: SkipReason,
    /// Label of the prime with singular reduction, if any.
    pub prime: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairValue {
    pub a: u64,
    pub b: u64,
    pub value: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepResult {
    pub ell: u64,
    pub r: u64,
    /// Per-pair `R^{a,b}` in lexicographic pair order.
    pub pairs: Vec<PairValue>,
    pub value: BigInt,
    pub factorization: Factorization,
    pub skipped: Vec<SkippedPair>,
}

impl SweepResult {
    /// True when some pair was dropped for bad reduction of the model.
    pub fn partial(&self) -> bool {
        self.skipped
            .iter()
            .any(|s| s.reason == SkipReason::BadReductionAtModel)
    }
}

/// Options shared by every sweep in a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub count_cap: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            count_cap: crate::curve::DEFAULT_COUNT_CAP,
            jobs: None,
        }
    }
}

enum PairOutcome {
    Value(BigInt),
    Bad(String),
}

fn evaluate_pair(locals: &[LocalFamily<'_>], a: u64, b: u64, r: u64, cap: u64) -> Result<PairOutcome> {
    let mut acc = BigInt::zero();
    for local in locals {
        let Some(curve) = local.specialize(a, b) else {
            return Ok(PairOutcome::Bad(local.prime.label()));
        };
        let frob = frobenius_of_reduced(&curve, local.prime.label(), cap)?;
        acc = acc.gcd(&resultant_value(&frob, r)?);
    }
    Ok(PairOutcome::Value(acc))
}

pub fn sweep_prime(
    field: &FieldDescriptor,
    family: &CurveFamily,
    ell: u64,
    r: u64,
    options: SweepOptions,
) -> Result<SweepResult> {
    if r == 0 {
        return Err(Error::invalid("r must be positive"));
    }
    let primes = split_prime(field, ell)?;
    if primes.iter().any(|q| q.ramification_index() > 1) {
        return Err(Error::UnsupportedPrime {
            ell,
            reason: "ramified in K".into(),
        });
    }
    let locals: Vec<LocalFamily<'_>> = primes.iter().map(|q| LocalFamily::new(family, q)).collect();
    let pairs: Vec<(u64, u64)> = (0..ell).flat_map(|a| (0..ell).map(move |b| (a, b))).collect();

    let run = || -> Vec<Option<Result<PairOutcome>>> {
        pairs
            .par_iter()
            .map(|&(a, b)| {
                if family.skip.skips(a, b) {
                    None
                } else {
                    Some(evaluate_pair(&locals, a, b, r, options.count_cap))
                }
            })
            .collect()
    };
    let outcomes = match options.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?
            .install(run),
        None => run(),
    };

    let mut values = Vec::new();
    let mut skipped = Vec::new();
    let mut lcm = BigInt::one();
    for (&(a, b), outcome) in pairs.iter().zip(outcomes) {
        match outcome {
            None => skipped.push(SkippedPair {
                a,
                b,
                reason: SkipReason::SkipPredicate,
                prime: None,
            }),
            Some(result) => match result? {
                PairOutcome::Bad(prime) => skipped.push(SkippedPair {
                    a,
                    b,
                    reason: SkipReason::BadReductionAtModel,
                    prime: Some(prime),
                }),
                PairOutcome::Value(v) => {
                    if v.is_zero() {
                        return Err(Error::Degenerate(format!(
                            "R^(a,b) vanishes at (a, b) = ({a}, {b}) for ell = {ell}"
                        )));
                    }
                    lcm = lcm.lcm(&v);
                    values.push(PairValue { a, b, value: v });
                }
            },
        }
    }
    if values.is_empty() {
        return Err(Error::EmptySweep { ell });
    }
    Ok(SweepResult {
        ell,
        r,
        pairs: values,
        factorization: factorize(&lcm)?,
        value: lcm,
        skipped,
    })
}
