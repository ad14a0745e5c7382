//! Run configuration: JSON ingestion with path-positioned errors and a
//! canonical echo that parses back to the same configuration.

use crate::arith::{is_probable_prime, BigInt, IntPoly};
use crate::curve::{WeierstrassCurve, DEFAULT_COUNT_CAP};
use crate::error::{Error, Result};
use crate::number_field::{make_quadratic_field, verify_field, AlgebraicInteger, FieldDescriptor};
use crate::sweep::{CurveFamily, Monomial, SkipPredicate};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

const COEFF_NAMES: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldSpec {
    Quadratic {
        d: i64,
        class_number: u64,
        /// Optional replacement for the computed fundamental unit.
        unit_basis: Option<Vec<Vec<BigInt>>>,
    },
    General {
        min_poly: Vec<BigInt>,
        integral_basis: Vec<Vec<BigRational>>,
        automorphisms: Vec<Vec<BigRational>>,
        unit_basis: Vec<Vec<BigInt>>,
        class_number: u64,
    },
}

impl FieldSpec {
    pub fn degree(&self) -> usize {
        match self {
            FieldSpec::Quadratic { .. } => 2,
            FieldSpec::General { min_poly, .. } => min_poly.len().saturating_sub(1),
        }
    }

    pub fn class_number(&self) -> u64 {
        match self {
            FieldSpec::Quadratic { class_number, .. } | FieldSpec::General { class_number, .. } => {
                *class_number
            }
        }
    }

    /// Construct the descriptor and run every structural check.
    pub fn build(&self) -> Result<FieldDescriptor> {
        let field = match self {
            FieldSpec::Quadratic { d, class_number, .. } => make_quadratic_field(*d, *class_number)?,
            FieldSpec::General {
                min_poly,
                integral_basis,
                automorphisms,
                class_number,
                ..
            } => FieldDescriptor::new(
                IntPoly::new(min_poly.clone()),
                integral_basis.clone(),
                automorphisms.clone(),
                *class_number,
            )?,
        };
        let diagnostics = verify_field(&field);
        if !diagnostics.all_passed() {
            let failures: Vec<String> = diagnostics
                .failures()
                .iter()
                .map(|c| format!("{}: {}", c.name, c.detail))
                .collect();
            return Err(Error::Verification(failures.join("; ")));
        }
        Ok(field)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    pub coeffs: [Vec<BigInt>; 5],
    pub additive_residue_chars: Vec<u64>,
}

impl CurveSpec {
    pub fn build(&self, field: &FieldDescriptor) -> Result<WeierstrassCurve> {
        WeierstrassCurve::new(field, self.coeffs.clone().map(AlgebraicInteger))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub coeffs: [Vec<(u32, u32, Vec<BigInt>)>; 5],
    pub skip: SkipPredicate,
    pub additive_residue_chars: Vec<u64>,
}

impl FamilySpec {
    pub fn build(&self, field: &FieldDescriptor) -> Result<CurveFamily> {
        let coeffs = self.coeffs.clone().map(|ms| {
            ms.into_iter()
                .map(|(i, j, c)| Monomial {
                    i,
                    j,
                    coeff: AlgebraicInteger(c),
                })
                .collect()
        });
        CurveFamily::new(field, coeffs, self.skip, self.additive_residue_chars.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subject {
    None,
    Curve(CurveSpec),
    Family(FamilySpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub field: FieldSpec,
    pub subject: Subject,
    pub aux_primes: Vec<u64>,
    pub r_overrides: BTreeMap<u64, u64>,
    pub count_cap: u64,
}

impl RunConfig {
    /// `r` for an auxiliary prime: the override if present, else the class number.
    pub fn r_for(&self, ell: u64) -> u64 {
        self.r_overrides
            .get(&ell)
            .copied()
            .unwrap_or_else(|| self.field.class_number())
    }

    pub fn additive_residue_chars(&self) -> &[u64] {
        match &self.subject {
            Subject::None => &[],
            Subject::Curve(c) => &c.additive_residue_chars,
            Subject::Family(f) => &f.additive_residue_chars,
        }
    }

    /// Canonical JSON form; big integers and rationals are strings.
    pub fn to_json(&self) -> Value {
        let ints = |v: &[BigInt]| Value::Array(v.iter().map(|x| json!(x.to_string())).collect());
        let rats = |v: &[BigRational]| Value::Array(v.iter().map(|x| json!(x.to_string())).collect());
        let mut root = Map::new();
        let field = match &self.field {
            FieldSpec::Quadratic {
                d,
                class_number,
                unit_basis,
            } => {
                let mut m = Map::new();
                m.insert("quadratic".into(), json!(d));
                m.insert("class_number".into(), json!(class_number));
                if let Some(u) = unit_basis {
                    m.insert("unit_basis".into(), Value::Array(u.iter().map(|e| ints(e)).collect()));
                }
                Value::Object(m)
            }
            FieldSpec::General {
                min_poly,
                integral_basis,
                automorphisms,
                unit_basis,
                class_number,
            } => json!({
                "min_poly": ints(min_poly),
                "integral_basis": integral_basis.iter().map(|w| rats(w)).collect::<Vec<_>>(),
                "automorphisms": automorphisms.iter().map(|u| rats(u)).collect::<Vec<_>>(),
                "unit_basis": unit_basis.iter().map(|e| ints(e)).collect::<Vec<_>>(),
                "class_number": class_number,
            }),
        };
        root.insert("field".into(), field);
        match &self.subject {
            Subject::None => {}
            Subject::Curve(c) => {
                let mut m = Map::new();
                for (name, coords) in COEFF_NAMES.iter().zip(&c.coeffs) {
                    m.insert((*name).into(), ints(coords));
                }
                m.insert("additive_residue_chars".into(), json!(c.additive_residue_chars));
                root.insert("curve".into(), Value::Object(m));
            }
            Subject::Family(f) => {
                let mut m = Map::new();
                for (name, monomials) in COEFF_NAMES.iter().zip(&f.coeffs) {
                    let list: Vec<Value> = monomials
                        .iter()
                        .map(|(i, j, c)| json!([i, j, ints(c)]))
                        .collect();
                    m.insert(format!("coeff_{name}"), Value::Array(list));
                }
                m.insert("skip".into(), json!(f.skip.as_str()));
                m.insert("additive_residue_chars".into(), json!(f.additive_residue_chars));
                root.insert("family".into(), Value::Object(m));
            }
        }
        root.insert("aux_primes".into(), json!(self.aux_primes));
        let overrides: Map<String, Value> = self
            .r_overrides
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        root.insert("r_overrides".into(), Value::Object(overrides));
        root.insert("count_cap".into(), json!(self.count_cap));
        Value::Object(root)
    }
}

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::config(path, message)
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn check_keys(m: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for k in m.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(err(&format!("{path}.{k}"), "unknown key"));
        }
    }
    Ok(())
}

fn integer(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(err(path, "expected an integer, found a float"))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| err(path, format!("cannot parse {s:?} as an integer"))),
        _ => Err(err(path, "expected an integer")),
    }
}

fn small_uint(v: &Value, path: &str) -> Result<u64> {
    integer(v, path)?
        .to_u64()
        .ok_or_else(|| err(path, "expected a nonnegative integer below 2^64"))
}

fn positive(v: &Value, path: &str) -> Result<u64> {
    let n = small_uint(v, path)?;
    if n == 0 {
        return Err(err(path, "must be positive"));
    }
    Ok(n)
}

fn rational(v: &Value, path: &str) -> Result<BigRational> {
    if let Value::String(s) = v {
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err(path, format!("bad numerator in {s:?}")))?;
            let d: BigInt = d.trim().parse().map_err(|_| err(path, format!("bad denominator in {s:?}")))?;
            if d.is_zero() {
                return Err(err(path, "zero denominator"));
            }
            return Ok(BigRational::new(n, d));
        }
    }
    Ok(BigRational::from_integer(integer(v, path)?))
}

fn int_vec(v: &Value, path: &str) -> Result<Vec<BigInt>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| integer(x, &format!("{path}[{i}]")))
        .collect()
}

fn coords(v: &Value, path: &str, d: usize) -> Result<Vec<BigInt>> {
    let c = int_vec(v, path)?;
    if c.len() != d {
        return Err(err(path, format!("expected {d} coordinates, found {}", c.len())));
    }
    Ok(c)
}

fn rat_vec(v: &Value, path: &str) -> Result<Vec<BigRational>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| rational(x, &format!("{path}[{i}]")))
        .collect()
}

fn prime_list(v: Option<&Value>, path: &str) -> Result<Vec<u64>> {
    let Some(v) = v else { return Ok(Vec::new()) };
    let mut out = Vec::new();
    for (i, x) in array(v, path)?.iter().enumerate() {
        let p_path = format!("{path}[{i}]");
        let p = small_uint(x, &p_path)?;
        if !is_probable_prime(&BigInt::from(p)) {
            return Err(err(&p_path, format!("{p} is not prime")));
        }
        if out.contains(&p) {
            return Err(err(&p_path, format!("duplicate prime {p}")));
        }
        out.push(p);
    }
    Ok(out)
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

fn parse_field(v: &Value) -> Result<FieldSpec> {
    let path = "$.field";
    let m = object(v, path)?;
    let class_number = positive(
        m.get("class_number")
            .ok_or_else(|| err(path, "class_number is required"))?,
        &format!("{path}.class_number"),
    )?;
    if let Some(q) = m.get("quadratic") {
        check_keys(m, &["quadratic", "class_number", "unit_basis"], path)?;
        let qpath = format!("{path}.quadratic");
        let d = integer(q, &qpath)?
            .to_i64()
            .ok_or_else(|| err(&qpath, "out of range"))?;
        if d <= 1 {
            return Err(err(&qpath, format!("D = {d} must exceed 1")));
        }
        if !is_squarefree(d) {
            return Err(err(&qpath, format!("D = {d} is not squarefree")));
        }
        let unit_basis = match m.get("unit_basis") {
            None => None,
            Some(u) => {
                let upath = format!("{path}.unit_basis");
                let list = array(u, &upath)?;
                Some(
                    list.iter()
                        .enumerate()
                        .map(|(i, e)| coords(e, &format!("{upath}[{i}]"), 2))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
        };
        return Ok(FieldSpec::Quadratic {
            d,
            class_number,
            unit_basis,
        });
    }
    check_keys(
        m,
        &["min_poly", "integral_basis", "automorphisms", "unit_basis", "class_number"],
        path,
    )?;
    let get = |k: &str| m.get(k).ok_or_else(|| err(path, format!("missing key {k} (or give `quadratic`)")));
    let min_poly = int_vec(get("min_poly")?, &format!("{path}.min_poly"))?;
    if min_poly.len() < 2 {
        return Err(err(&format!("{path}.min_poly"), "degree must be at least 1"));
    }
    if !min_poly.last().is_some_and(One::is_one) {
        return Err(err(&format!("{path}.min_poly"), "must be monic (coefficients lowest degree first)"));
    }
    let d = min_poly.len() - 1;
    let list_of = |key: &str, expected: usize| -> Result<Vec<Vec<BigRational>>> {
        let kpath = format!("{path}.{key}");
        let list = array(get(key)?, &kpath)?;
        if list.len() != expected {
            return Err(err(&kpath, format!("expected {expected} entries, found {}", list.len())));
        }
        list.iter()
            .enumerate()
            .map(|(i, e)| {
                let epath = format!("{kpath}[{i}]");
                let r = rat_vec(e, &epath)?;
                if r.len() > d {
                    return Err(err(&epath, format!("at most {d} coefficients allowed")));
                }
                Ok(r)
            })
            .collect()
    };
    let integral_basis = list_of("integral_basis", d)?;
    let automorphisms = list_of("automorphisms", d)?;
    let upath = format!("{path}.unit_basis");
    let units = array(get("unit_basis")?, &upath)?;
    if units.len() + 1 != d {
        return Err(err(&upath, format!("expected {} units, found {}", d - 1, units.len())));
    }
    let unit_basis = units
        .iter()
        .enumerate()
        .map(|(i, e)| coords(e, &format!("{upath}[{i}]"), d))
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldSpec::General {
        min_poly,
        integral_basis,
        automorphisms,
        unit_basis,
        class_number,
    })
}

fn parse_curve(v: &Value, d: usize) -> Result<CurveSpec> {
    let path = "$.curve";
    let m = object(v, path)?;
    check_keys(m, &["a1", "a2", "a3", "a4", "a6", "additive_residue_chars"], path)?;
    let mut coeffs: [Vec<BigInt>; 5] = Default::default();
    for (slot, name) in COEFF_NAMES.iter().enumerate() {
        coeffs[slot] = match m.get(*name) {
            None => vec![BigInt::zero(); d],
            Some(c) => coords(c, &format!("{path}.{name}"), d)?,
        };
    }
    Ok(CurveSpec {
        coeffs,
        additive_residue_chars: prime_list(
            m.get("additive_residue_chars"),
            &format!("{path}.additive_residue_chars"),
        )?,
    })
}

fn parse_family(v: &Value, d: usize) -> Result<FamilySpec> {
    let path = "$.family";
    let m = object(v, path)?;
    check_keys(
        m,
        &["coeff_a1", "coeff_a2", "coeff_a3", "coeff_a4", "coeff_a6", "skip", "additive_residue_chars"],
        path,
    )?;
    let mut coeffs: [Vec<(u32, u32, Vec<BigInt>)>; 5] = Default::default();
    for (slot, name) in COEFF_NAMES.iter().enumerate() {
        let key = format!("coeff_{name}");
        let Some(list) = m.get(&key) else { continue };
        let kpath = format!("{path}.{key}");
        for (n, mono) in array(list, &kpath)?.iter().enumerate() {
            let mpath = format!("{kpath}[{n}]");
            let parts = array(mono, &mpath)?;
            if parts.len() != 3 {
                return Err(err(&mpath, "expected [i, j, [coords]]"));
            }
            let exp = |k: usize| -> Result<u32> {
                small_uint(&parts[k], &format!("{mpath}[{k}]"))?
                    .to_u32()
                    .ok_or_else(|| err(&format!("{mpath}[{k}]"), "exponent too large"))
            };
            coeffs[slot].push((exp(0)?, exp(1)?, coords(&parts[2], &format!("{mpath}[2]"), d)?));
        }
    }
    let skip = match m.get("skip") {
        None => SkipPredicate::default(),
        Some(Value::String(s)) => match s.as_str() {
            "both_zero" => SkipPredicate::BothZero,
            "shared_factor" => SkipPredicate::SharedFactor,
            "none" => SkipPredicate::None,
            other => {
                return Err(err(
                    &format!("{path}.skip"),
                    format!("unknown skip predicate {other:?}; use both_zero, shared_factor or none"),
                ))
            }
        },
        Some(_) => return Err(err(&format!("{path}.skip"), "expected a string")),
    };
    Ok(FamilySpec {
        coeffs,
        skip,
        additive_residue_chars: prime_list(
            m.get("additive_residue_chars"),
            &format!("{path}.additive_residue_chars"),
        )?,
    })
}

/// Parse and validate a configuration document. General fields are built
/// and verified here so that bad field data is reported before any run.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| err("$", format!("malformed JSON: {e}")))?;
    let m = object(&root, "$")?;
    check_keys(
        m,
        &["field", "curve", "family", "aux_primes", "r_overrides", "count_cap"],
        "$",
    )?;
    let field = parse_field(m.get("field").ok_or_else(|| err("$", "missing key field"))?)?;
    let d = field.degree();
    let subject = match (m.get("curve"), m.get("family")) {
        (Some(_), Some(_)) => return Err(err("$", "give either curve or family, not both")),
        (Some(c), None) => Subject::Curve(parse_curve(c, d)?),
        (None, Some(f)) => Subject::Family(parse_family(f, d)?),
        (None, None) => Subject::None,
    };
    let aux_primes = prime_list(m.get("aux_primes"), "$.aux_primes")?;
    let mut r_overrides = BTreeMap::new();
    if let Some(v) = m.get("r_overrides") {
        for (k, r) in object(v, "$.r_overrides")? {
            let kpath = format!("$.r_overrides.{k}");
            let ell: u64 = k.parse().map_err(|_| err(&kpath, "key must be a prime"))?;
            if !aux_primes.contains(&ell) {
                return Err(err(&kpath, format!("{ell} is not an auxiliary prime")));
            }
            r_overrides.insert(ell, positive(r, &kpath)?);
        }
    }
    let count_cap = match m.get("count_cap") {
        None => DEFAULT_COUNT_CAP,
        Some(v) => positive(v, "$.count_cap")?,
    };
    let cfg = RunConfig {
        field,
        subject,
        aux_primes,
        r_overrides,
        count_cap,
    };
    let built = cfg.field.build()?;
    match &cfg.subject {
        Subject::Curve(c) => {
            c.build(&built).map_err(|e| err("$.curve", e.to_string()))?;
        }
        Subject::Family(f) => {
            f.build(&built)?;
        }
        Subject::None => {}
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "field": {"quadratic": 13, "class_number": 1},
        "curve": {"a6": [1, 0]},
        "aux_primes": [5]
    }"#;

    #[test]
    fn minimal_config() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.aux_primes, vec![5]);
        assert_eq!(cfg.r_for(5), 1);
        assert_eq!(cfg.count_cap, DEFAULT_COUNT_CAP);
        let Subject::Curve(c) = &cfg.subject else { panic!() };
        assert_eq!(c.coeffs[4], vec![BigInt::one(), BigInt::zero()]);
    }

    #[test]
    fn echo_is_a_fixpoint() {
        let cfg = parse_config(MINIMAL).unwrap();
        let echo = cfg.to_json().to_string();
        let again = parse_config(&echo).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.to_json().to_string(), echo);
    }

    fn path_of(text: &str) -> String {
        match parse_config(text) {
            Err(Error::Config { path, .. }) => path,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn positioned_errors() {
        assert_eq!(
            path_of(r#"{"field": {"quadratic": 13, "class_number": 1}, "aux_primes": [3, 3]}"#),
            "$.aux_primes[1]"
        );
        assert_eq!(path_of(r#"{"field": {"quadratic": 12, "class_number": 1}}"#), "$.field.quadratic");
        assert_eq!(path_of(r#"{"field": {"quadratic": 13}}"#), "$.field");
        assert_eq!(
            path_of(r#"{"field": {"quadratic": 13, "class_number": 1}, "curve": {"a4": [1]}}"#),
            "$.curve.a4"
        );
        assert_eq!(
            path_of(r#"{"field": {"quadratic": 13, "class_number": 1}, "aux_primes": [4]}"#),
            "$.aux_primes[0]"
        );
        assert_eq!(
            path_of(r#"{"field": {"quadratic": 13, "class_number": 1}, "family": {"skip": "odd"}}"#),
            "$.family.skip"
        );
        assert_eq!(path_of("{"), "$");
        assert_eq!(
            path_of(r#"{"field": {"quadratic": 13, "class_number": 1}, "curve": {}, "bogus": 1}"#),
            "$.bogus"
        );
    }

    #[test]
    fn corrupted_general_field_fails_closure() {
        // Q(sqrt13) with theta = (1 + sqrt13)/2; the conjugation is listed
        // twice and the identity is missing.
        let text = r#"{
            "field": {
                "min_poly": [-3, -1, 1],
                "integral_basis": [[1], [0, 1]],
                "automorphisms": [[1, -1], [1, -1]],
                "unit_basis": [[1, 1]],
                "class_number": 1
            }
        }"#;
        match parse_config(text) {
            Err(Error::Verification(msg)) => {
                assert!(msg.contains("automorphisms_closed"), "{msg}");
                assert!(msg.contains("(0, 0)"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let good = text.replacen("[1, -1], [1, -1]", "[0, 1], [1, -1]", 1);
        let cfg = parse_config(&good).unwrap();
        assert_eq!(cfg.field.degree(), 2);
        assert_eq!(parse_config(&cfg.to_json().to_string()).unwrap(), cfg);
    }

    #[test]
    fn family_config_roundtrip() {
        let text = r#"{
            "field": {"quadratic": 13, "class_number": 1},
            "family": {
                "coeff_a2": [[0, 1, [1, 0]], [1, 0, [-1, 0]]],
                "coeff_a4": [[1, 1, ["-1", "0"]]],
                "skip": "shared_factor",
                "additive_residue_chars": [2]
            },
            "aux_primes": [5, 7],
            "r_overrides": {"7": 2},
            "count_cap": 5000
        }"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.r_for(7), 2);
        assert_eq!(cfg.r_for(5), 1);
        assert_eq!(cfg.additive_residue_chars(), &[2]);
        assert_eq!(parse_config(&cfg.to_json().to_string()).unwrap(), cfg);
    }
}
