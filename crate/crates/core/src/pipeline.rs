//! End-to-end run: field checks, units, `B`, the torsion bound, per-prime
//! criteria or family sweeps, and the final excluded-prime set.

use crate::arith::{factorize, BigInt, Factorization};
use crate::config::{FieldSpec, RunConfig, Subject};
use crate::curve::{frobenius_data, FrobeniusData};
use crate::error::{Error, Result};
use crate::irreducibility::{
    assemble_bad_primes, merel_bound, resultant_criterion, AuxiliaryGroup, BadPrimeSet, CriterionResult,
};
use crate::number_field::{split_prime, verify_field, AlgebraicInteger, FieldDiagnostics};
use crate::signature::{compute_b, UnitBound};
use crate::sweep::{sweep_prime, SweepOptions, SweepResult};
use crate::units::{fundamental_unit_quadratic, verify_unit_basis, Provenance, UnitBasis};
use num_integer::Integer;
use num_traits::Zero;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineOptions {
    pub jobs: Option<usize>,
    pub bound_only: bool,
    pub emit_pairs: bool,
}

/// Criteria for a fixed curve at the primes above one auxiliary prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriteriaSection {
    pub ell: u64,
    pub r: u64,
    pub frobenius: Vec<FrobeniusData>,
    pub criteria: Vec<CriterionResult>,
    /// Primes above `ell` where the model reduces to a singular curve.
    pub skipped_primes: Vec<String>,
    /// gcd of the criteria values.
    pub value: BigInt,
    pub factorization: Factorization,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeSection {
    Criteria(CriteriaSection),
    Sweep(SweepResult),
}

impl PrimeSection {
    pub fn ell(&self) -> u64 {
        match self {
            PrimeSection::Criteria(c) => c.ell,
            PrimeSection::Sweep(s) => s.ell,
        }
    }

    pub fn value(&self) -> &BigInt {
        match self {
            PrimeSection::Criteria(c) => &c.value,
            PrimeSection::Sweep(s) => &s.value,
        }
    }

    pub fn factorization(&self) -> &Factorization {
        match self {
            PrimeSection::Criteria(c) => &c.factorization,
            PrimeSection::Sweep(s) => &s.factorization,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSummary {
    pub degree: usize,
    pub discriminant: BigInt,
    pub class_number: u64,
    pub ramified: Vec<BigInt>,
    pub diagnostics: FieldDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub config: Value,
    pub field: FieldSummary,
    pub units: UnitBasis,
    pub bound: UnitBound,
    pub merel_bound: BigInt,
    pub per_prime: Vec<PrimeSection>,
    /// Absent in bound-only runs.
    pub bad_primes: Option<BadPrimeSet>,
    pub hypotheses: Vec<String>,
    pub emit_pairs: bool,
}

impl Report {
    /// Some family sweep dropped pairs for bad reduction of the model.
    pub fn partial(&self) -> bool {
        self.per_prime.iter().any(|s| match s {
            PrimeSection::Sweep(r) => r.partial(),
            PrimeSection::Criteria(_) => false,
        })
    }
}

fn unit_basis(cfg: &RunConfig, field: &crate::number_field::FieldDescriptor) -> Result<UnitBasis> {
    match &cfg.field {
        FieldSpec::Quadratic {
            d,
            unit_basis: None,
            ..
        } => verify_unit_basis(field, vec![fundamental_unit_quadratic(*d)?], Provenance::Computed),
        FieldSpec::Quadratic {
            unit_basis: Some(u),
            ..
        }
        | FieldSpec::General { unit_basis: u, .. } => verify_unit_basis(
            field,
            u.iter().cloned().map(AlgebraicInteger).collect(),
            Provenance::UserSupplied,
        ),
    }
}

fn probable_notes(what: &str, f: &Factorization, out: &mut Vec<String>) {
    for p in &f.probable {
        out.push(format!(
            "{what}: the factor {p} passed only a probabilistic primality test"
        ));
    }
}

pub fn run_pipeline(cfg: &RunConfig, options: PipelineOptions) -> Result<Report> {
    match options.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?
            .install(|| run_inner(cfg, options)),
        None => run_inner(cfg, options),
    }
}

fn run_inner(cfg: &RunConfig, options: PipelineOptions) -> Result<Report> {
    let field = cfg.field.build()?;
    let diagnostics = verify_field(&field);
    let mut hypotheses = Vec::new();
    let h = field.class_number();
    hypotheses.push(format!(
        "class number h = {h} is taken from the configuration and not verified"
    ));
    if diagnostics.irreducibility_assumed {
        hypotheses.push(format!(
            "minimal polynomial of degree {} > 4: irreducibility is taken from the configuration",
            field.degree()
        ));
    }

    let units = unit_basis(cfg, &field)?;
    if units.provenance == Provenance::UserSupplied {
        hypotheses.push(
            "unit basis is user supplied and only checked for independence; B may be a multiple of the value for a fundamental basis"
                .into(),
        );
    }
    let bound = compute_b(&field, &units)?;
    probable_notes("B", &bound.factorization, &mut hypotheses);
    let merel = merel_bound(field.degree() as u64, h)?;
    hypotheses.push(
        "for p not dividing B the isogeny signature is constant, so only the constant-signature resultant criterion is applied"
            .into(),
    );

    let field_summary = FieldSummary {
        degree: field.degree(),
        discriminant: field.discriminant().clone(),
        class_number: h,
        ramified: field.ramified_primes(),
        diagnostics,
    };

    let run_subject = !options.bound_only && cfg.subject != Subject::None;
    if !run_subject {
        hypotheses.push("bound-only run: no curve data was used and no excluded-prime set is produced".into());
        return Ok(Report {
            config: cfg.to_json(),
            field: field_summary,
            units,
            bound,
            merel_bound: merel,
            per_prime: Vec::new(),
            bad_primes: None,
            hypotheses,
            emit_pairs: options.emit_pairs,
        });
    }

    hypotheses.push(
        "the curve is assumed semistable at every prime above p; this is not verified".into(),
    );
    let additive = cfg.additive_residue_chars();
    if !additive.is_empty() {
        let list: Vec<String> = additive.iter().map(u64::to_string).collect();
        hypotheses.push(format!(
            "additive reduction is declared only above {}; these residue characteristics are excluded",
            list.join(", ")
        ));
    }
    for &ell in &cfg.aux_primes {
        let r = cfg.r_for(ell);
        if cfg.r_overrides.contains_key(&ell) {
            hypotheses.push(format!(
                "r = {r} for ell = {ell} is user supplied; principality of q^r is not checked"
            ));
        }
    }
    if cfg.aux_primes.iter().any(|ell| !cfg.r_overrides.contains_key(ell)) {
        hypotheses.push(format!("r = h = {h} is used where no override is given, since q^h is always principal"));
    }

    let mut per_prime = Vec::new();
    let mut groups = Vec::new();
    match &cfg.subject {
        Subject::Curve(spec) => {
            let curve = spec.build(&field)?;
            for (index, &ell) in cfg.aux_primes.iter().enumerate() {
                let r = cfg.r_for(ell);
                let mut frobenius = Vec::new();
                let mut criteria = Vec::new();
                let mut skipped_primes = Vec::new();
                for q in split_prime(&field, ell)? {
                    match frobenius_data(&curve, &q, cfg.count_cap) {
                        Ok(f) => {
                            criteria.push(resultant_criterion(&f, r)?);
                            frobenius.push(f);
                        }
                        Err(Error::BadReduction { prime }) => {
                            hypotheses.push(format!(
                                "the model has bad reduction at {prime}; that prime is not used for ell = {ell}"
                            ));
                            skipped_primes.push(prime);
                        }
                        Err(e) => return Err(e),
                    }
                }
                if criteria.is_empty() {
                    return Err(Error::config(
                        format!("$.aux_primes[{index}]"),
                        format!("the model has bad reduction at every prime above {ell}"),
                    ));
                }
                let value = criteria.iter().fold(BigInt::zero(), |acc, c| acc.gcd(&c.value));
                if value.is_zero() {
                    return Err(Error::Degenerate(format!("every resultant above {ell} vanishes")));
                }
                let factorization = factorize(&value)?;
                probable_notes(&format!("R at ell = {ell}"), &factorization, &mut hypotheses);
                groups.push(AuxiliaryGroup::from_criteria(ell, &criteria));
                per_prime.push(PrimeSection::Criteria(CriteriaSection {
                    ell,
                    r,
                    frobenius,
                    criteria,
                    skipped_primes,
                    value,
                    factorization,
                }));
            }
        }
        Subject::Family(spec) => {
            let family = spec.build(&field)?;
            for &ell in &cfg.aux_primes {
                let r = cfg.r_for(ell);
                let result = sweep_prime(
                    &field,
                    &family,
                    ell,
                    r,
                    SweepOptions {
                        count_cap: cfg.count_cap,
                        jobs: None,
                    },
                )?;
                if result.partial() {
                    let n = result
                        .skipped
                        .iter()
                        .filter(|s| s.reason == crate::sweep::SkipReason::BadReductionAtModel)
                        .count();
                    hypotheses.push(format!(
                        "sweep at ell = {ell} is partial: {n} pairs were skipped for bad reduction of the model; confirm they cannot arise from actual solutions"
                    ));
                }
                probable_notes(&format!("R at ell = {ell}"), &result.factorization, &mut hypotheses);
                groups.push(AuxiliaryGroup {
                    ell,
                    values: vec![result.value.clone()],
                });
                per_prime.push(PrimeSection::Sweep(result));
            }
        }
        Subject::None => unreachable!(),
    }
    per_prime.sort_by_key(PrimeSection::ell);

    let bad = assemble_bad_primes(&field, &bound.value, &groups, additive)?;
    Ok(Report {
        config: cfg.to_json(),
        field: field_summary,
        units,
        bound,
        merel_bound: merel,
        per_prime,
        bad_primes: Some(bad),
        hypotheses,
        emit_pairs: options.emit_pairs,
    })
}
