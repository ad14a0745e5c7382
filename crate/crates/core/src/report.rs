//! Canonical report serialization. JSON objects have sorted keys and every
//! large integer is a decimal string; text output is for people.

use crate::arith::Factorization;
use crate::pipeline::{PrimeSection, Report};
use serde_json::{json, Map, Value};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

fn factored(f: &Factorization) -> Value {
    let mut m = Map::new();
    m.insert("factorization".into(), json!(f.render()));
    if !f.probable.is_empty() {
        m.insert(
            "probable_primes".into(),
            Value::Array(f.probable.iter().map(|p| json!(p.to_string())).collect()),
        );
    }
    Value::Object(m)
}

fn with_value(value: String, f: &Factorization) -> Value {
    let mut v = factored(f);
    v.as_object_mut().unwrap().insert("value".into(), json!(value));
    v
}

fn section_json(s: &PrimeSection, emit_pairs: bool) -> Value {
    let mut m = match with_value(s.value().to_string(), s.factorization()) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    match s {
        PrimeSection::Criteria(c) => {
            m.insert("mode".into(), json!("fixed_curve"));
            m.insert("r".into(), json!(c.r));
            let criteria: Vec<Value> = c
                .frobenius
                .iter()
                .zip(&c.criteria)
                .map(|(f, cr)| {
                    json!({
                        "prime": f.prime,
                        "norm": f.norm.to_string(),
                        "a_q": f.trace.to_string(),
                        "charpoly": f.charpoly.to_string(),
                        "resultant": cr.value.to_string(),
                        "resultant_factorization": cr.factorization.as_ref().map(Factorization::render),
                    })
                })
                .collect();
            m.insert("criteria".into(), Value::Array(criteria));
            m.insert("skipped_primes".into(), json!(c.skipped_primes));
        }
        PrimeSection::Sweep(r) => {
            m.insert("mode".into(), json!("family_sweep"));
            m.insert("r".into(), json!(r.r));
            m.insert("partial".into(), json!(r.partial()));
            m.insert("pairs_used".into(), json!(r.pairs.len()));
            let skipped: Vec<Value> = r
                .skipped
                .iter()
                .map(|s| {
                    let mut e = Map::new();
                    e.insert("a".into(), json!(s.a));
                    e.insert("b".into(), json!(s.b));
                    e.insert("reason".into(), serde_json::to_value(s.reason).unwrap());
                    if let Some(p) = &s.prime {
                        e.insert("prime".into(), json!(p));
                    }
                    Value::Object(e)
                })
                .collect();
            m.insert("skipped_pairs".into(), Value::Array(skipped));
            if emit_pairs {
                let pairs: Vec<Value> = r
                    .pairs
                    .iter()
                    .map(|p| json!({"a": p.a, "b": p.b, "value": p.value.to_string()}))
                    .collect();
                m.insert("pairs".into(), Value::Array(pairs));
            }
        }
    }
    Value::Object(m)
}

pub fn report_json(report: &Report) -> Value {
    let mut root = Map::new();
    root.insert("config".into(), report.config.clone());
    root.insert(
        "field_diagnostics".into(),
        json!({
            "degree": report.field.degree,
            "discriminant": report.field.discriminant.to_string(),
            "class_number": report.field.class_number,
            "ramified_primes": report.field.ramified.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "checks": serde_json::to_value(&report.field.diagnostics.checks).unwrap(),
            "irreducibility_assumed": report.field.diagnostics.irreducibility_assumed,
        }),
    );
    root.insert(
        "unit_basis".into(),
        json!({
            "units": report
                .units
                .units
                .iter()
                .map(|u| u.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "provenance": serde_json::to_value(report.units.provenance).unwrap(),
            "regulator": report.units.regulator,
        }),
    );
    let a_s: Map<String, Value> = report
        .bound
        .table
        .iter()
        .map(|row| (row.signature.to_string(), with_value(row.value.to_string(), &row.factorization)))
        .collect();
    root.insert("A_s".into(), Value::Object(a_s));
    root.insert(
        "B".into(),
        with_value(report.bound.value.to_string(), &report.bound.factorization),
    );
    root.insert("merel_bound".into(), json!(report.merel_bound.to_string()));
    if !report.per_prime.is_empty() || report.bad_primes.is_some() {
        let per_prime: Map<String, Value> = report
            .per_prime
            .iter()
            .map(|s| (s.ell().to_string(), section_json(s, report.emit_pairs)))
            .collect();
        root.insert("per_prime".into(), Value::Object(per_prime));
    }
    if let Some(bad) = &report.bad_primes {
        let list: Vec<Value> = bad
            .entries()
            .iter()
            .map(|(p, reasons)| {
                json!({
                    "p": p.to_string(),
                    "reasons": reasons.iter().map(|r| r.as_str()).collect::<Vec<_>>(),
                })
            })
            .collect();
        root.insert("bad_primes".into(), Value::Array(list));
        root.insert(
            "bad_primes_beyond_baseline".into(),
            Value::Array(bad.beyond_baseline().iter().map(|p| json!(p.to_string())).collect()),
        );
    }
    root.insert("partial".into(), json!(report.partial()));
    root.insert("hypotheses".into(), json!(report.hypotheses));
    Value::Object(root)
}

fn report_text(report: &Report) -> String {
    let mut out = String::new();
    let f = &report.field;
    let _ = writeln!(out, "Field");
    let _ = writeln!(
        out,
        "  degree {}, discriminant {}, class number {}",
        f.degree, f.discriminant, f.class_number
    );
    for c in &f.diagnostics.checks {
        let _ = writeln!(out, "  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    let _ = writeln!(out, "Units ({:?})", report.units.provenance);
    for u in &report.units.units {
        let _ = writeln!(out, "  {u}");
    }
    let _ = writeln!(out, "  regulator {}", report.units.regulator);
    let _ = writeln!(out, "A_s");
    for row in &report.bound.table {
        let _ = writeln!(out, "  {} = {} = {}", row.signature, row.value, row.factorization.render());
    }
    let _ = writeln!(
        out,
        "B = {} = {}",
        report.bound.value,
        report.bound.factorization.render()
    );
    let _ = writeln!(out, "Merel bound = {}", report.merel_bound);
    for s in &report.per_prime {
        let _ = writeln!(out, "ell = {}", s.ell());
        match s {
            PrimeSection::Criteria(c) => {
                let _ = writeln!(out, "  r = {}", c.r);
                for (fr, cr) in c.frobenius.iter().zip(&c.criteria) {
                    let _ = writeln!(
                        out,
                        "  q = {}: Norm {}, a_q = {}, P_q = {}, Res = {}",
                        fr.prime, fr.norm, fr.trace, fr.charpoly, cr.value
                    );
                }
                for q in &c.skipped_primes {
                    let _ = writeln!(out, "  q = {q}: skipped (bad reduction of the model)");
                }
            }
            PrimeSection::Sweep(r) => {
                let _ = writeln!(
                    out,
                    "  r = {}, {} pairs used, {} skipped{}",
                    r.r,
                    r.pairs.len(),
                    r.skipped.len(),
                    if r.partial() { " (partial)" } else { "" }
                );
                if report.emit_pairs {
                    for p in &r.pairs {
                        let _ = writeln!(out, "  R^({},{}) = {}", p.a, p.b, p.value);
                    }
                }
            }
        }
        let _ = writeln!(out, "  R = {} = {}", s.value(), s.factorization().render());
    }
    if let Some(bad) = &report.bad_primes {
        let _ = writeln!(out, "Excluded primes");
        for (p, reasons) in bad.entries() {
            let names: Vec<&str> = reasons.iter().map(|r| r.as_str()).collect();
            let _ = writeln!(out, "  {p}: {}", names.join(", "));
        }
        let beyond = bad.beyond_baseline();
        if beyond.is_empty() {
            let _ = writeln!(out, "Excluded beyond the baseline 2, 3, 5, 7, 13: none");
        } else {
            let list: Vec<String> = beyond.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(out, "Excluded beyond the baseline 2, 3, 5, 7, 13: {}", list.join(", "));
        }
    }
    let _ = writeln!(out, "Hypotheses");
    for h in &report.hypotheses {
        let _ = writeln!(out, "  - {h}");
    }
    out
}

/// Serialize a report. JSON output is pretty-printed with sorted keys and a
/// trailing newline, so equal reports give equal bytes.
pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report_json(report)).unwrap();
            s.push('\n');
            s.into_bytes()
        }
        Format::Text => report_text(report).into_bytes(),
    }
}
