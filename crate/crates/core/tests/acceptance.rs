//! Acceptance suite. Each criterion prints one PASS/FAIL line on stdout
//! (written directly, so it shows up without `--nocapture`), and the test
//! fails if any criterion fails.
//!
//! The external-data criterion is `#[ignore]`d: run it with
//! `IRRED_FREY_CONFIG=<config.json> cargo test -p irred-core --test acceptance -- --ignored`.

use irred_core::arith::{resultant_quadratic_cyclotomic, resultant_sylvester, BigInt, IntPoly};
use irred_core::config::parse_config;
use irred_core::curve::{count_points, frobenius_data, ReducedCurve, WeierstrassCurve, DEFAULT_COUNT_CAP};
use irred_core::finite_field::ResidueField;
use irred_core::irreducibility::{assemble_bad_primes, merel_bound, AuxiliaryGroup};
use irred_core::number_field::{field_norm, make_quadratic_field, split_prime};
use irred_core::pipeline::{run_pipeline, PipelineOptions, PrimeSection};
use irred_core::report::{emit_report, Format};
use irred_core::signature::{compute_a_s, compute_b, Signature};
use irred_core::units::{fundamental_unit_quadratic, verify_unit_basis, Provenance, UnitBasis};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn report_line(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn run_criterion(n: u32, name: &str, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())),
    };
    let secs = start.elapsed().as_secs_f64();
    match &outcome {
        Ok(()) => report_line(&format!("criterion {n} ({name}): PASS [{secs:.2}s]")),
        Err(e) => report_line(&format!("criterion {n} ({name}): FAIL [{secs:.2}s]: {e}")),
    }
    outcome.is_ok()
}

fn within(start: Instant, limit: Duration, what: &str) -> Check {
    let t = start.elapsed();
    ensure!(t < limit, "{what} took {t:?}, limit {limit:?}");
    Ok(())
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn quadratic_units(d: i64) -> (irred_core::number_field::FieldDescriptor, UnitBasis) {
    let k = make_quadratic_field(d, 1).unwrap();
    let u = verify_unit_basis(&k, vec![fundamental_unit_quadratic(d).unwrap()], Provenance::Computed).unwrap();
    (k, u)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let k = make_quadratic_field(13, 1).map_err(|e| e.to_string())?;
    let eps = fundamental_unit_quadratic(13).map_err(|e| e.to_string())?;
    // theta = (1 + sqrt 13)/2, so (3 + sqrt 13)/2 = 1 + theta.
    ensure!(eps.coords() == [big(1), big(1)], "fundamental unit {:?}", eps.coords());
    let e12 = k.pow(&eps, 12);
    let n = field_norm(&k, &k.sub(&e12, &k.one()));
    ensure!(n == big(-1684800), "Norm(eps^12 - 1) = {n}");
    ensure!(n == -(big(2).pow(6) * big(3).pow(4) * big(5).pow(2) * big(13)), "factorization");
    within(start, Duration::from_secs(1), "unit computation")
}

/// `(L_12, F_12)` from the Lucas and Fibonacci recurrences, so that
/// `phi^12 = (L_12 + F_12 sqrt 5)/2`.
fn lucas_fibonacci_12() -> (BigInt, BigInt) {
    let (mut f0, mut f1) = (big(0), big(1));
    let (mut l0, mut l1) = (big(2), big(1));
    for _ in 0..12 {
        let f2 = &f0 + &f1;
        f0 = std::mem::replace(&mut f1, f2);
        let l2 = &l0 + &l1;
        l0 = std::mem::replace(&mut l1, l2);
    }
    (l0, f0)
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let (k, u) = quadratic_units(13);
    let b = compute_b(&k, &u).map_err(|e| e.to_string())?;
    ensure!(b.value == big(1684800), "B(Q(sqrt 13)) = {}", b.value);
    let support: Vec<BigInt> = b.factorization.primes().cloned().collect();
    ensure!(support == [big(2), big(3), big(5), big(13)], "support {support:?}");
    ensure!(!b.value.is_multiple_of(&big(11)), "11 divides B");
    for p in (17..2000).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)) {
        ensure!(!b.value.is_multiple_of(&big(p)), "{p} divides B");
    }
    within(start, Duration::from_secs(1), "B over Q(sqrt 13)")?;

    let start = Instant::now();
    let (l12, f12) = lucas_fibonacci_12();
    ensure!(l12 == big(322) && f12 == big(144), "Lucas/Fibonacci oracle");
    // eps^12 = 161 + 72 sqrt 5; Norm(eps^12 - 1) = 160^2 - 5 * 72^2.
    let (x, y): (BigInt, BigInt) = (&l12 / 2 - 1, &f12 / 2);
    let oracle: BigInt = (&x * &x - big(5) * &y * &y).abs();
    ensure!(oracle == big(320), "oracle gives {oracle}");
    let (k, u) = quadratic_units(5);
    let b = compute_b(&k, &u).map_err(|e| e.to_string())?;
    ensure!(b.value == oracle, "B(Q(sqrt 5)) = {}, oracle {oracle}", b.value);
    within(start, Duration::from_secs(1), "B over Q(sqrt 5)")
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let a = big(rng.gen_range(-1_000_000..=1_000_000));
        let n = big(rng.gen_range(1..=1_000_000));
        let m: u64 = rng.gen_range(1..=48);
        let closed = resultant_quadratic_cyclotomic(&a, &n, m).map_err(|e| e.to_string())?;
        let f = IntPoly::quadratic_charpoly(&a, &n);
        let g = IntPoly::binomial(m as usize, BigInt::one());
        let syl = resultant_sylvester(&f, &g).map_err(|e| e.to_string())?;
        ensure!(closed == syl, "a = {a}, n = {n}, m = {m}: {closed} vs {syl}");
    }
    within(start, Duration::from_secs(30), "10^4 resultants")
}

fn enumerate_points(c: &ReducedCurve) -> u64 {
    let k = c.field();
    let q = k.size().unwrap();
    let [a1, a2, a3, a4, a6] = c.coefficients().clone();
    let elems: Vec<_> = (0..q).map(|i| k.element(i)).collect();
    let mut count = 1;
    for x in &elems {
        let x2 = k.mul(x, x);
        let rhs = k.add(
            &k.add(&k.mul(&x2, x), &k.mul(&a2, &x2)),
            &k.add(&k.mul(&a4, x), &a6),
        );
        for y in &elems {
            let lhs = k.add(&k.mul(y, y), &k.add(&k.mul(&k.mul(&a1, x), y), &k.mul(&a3, y)));
            if lhs == rhs {
                count += 1;
            }
        }
    }
    count
}

fn random_curve(k: &ResidueField, rng: &mut ChaCha8Rng) -> ReducedCurve {
    let q = k.size().unwrap();
    loop {
        let a = [(); 5].map(|_| k.element(rng.gen_range(0..q)));
        if let Some(c) = ReducedCurve::new(k.clone(), a) {
            return c;
        }
    }
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut small = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113] {
        let mut f = 1;
        while p.pow(f as u32) <= 121 {
            small.push(ResidueField::extension(p, f).map_err(|e| e.to_string())?);
            f += 1;
        }
    }
    for i in 0..200 {
        let k = &small[i % small.len()];
        let c = random_curve(k, &mut rng);
        let fast = count_points(&c, DEFAULT_COUNT_CAP).map_err(|e| e.to_string())?;
        let slow = enumerate_points(&c);
        ensure!(fast == slow, "F_{}: {:?} counted {fast}, enumerated {slow}", k.size().unwrap(), c.coefficients());
    }

    let large: Vec<ResidueField> = [(9973u64, 1usize), (7919, 1), (1009, 1), (2, 13), (3, 8), (5, 5), (7, 4), (97, 2), (11, 3), (2, 10)]
        .iter()
        .map(|&(p, f)| ResidueField::extension(p, f).unwrap())
        .collect();
    for i in 0..1000 {
        let k = &large[i % large.len()];
        let q = k.size().unwrap() as i64;
        let c = random_curve(k, &mut rng);
        let a = q + 1 - count_points(&c, DEFAULT_COUNT_CAP).map_err(|e| e.to_string())? as i64;
        ensure!(a * a <= 4 * q, "Hasse fails over F_{q}: a = {a}");
    }

    let field = make_quadratic_field(13, 1).map_err(|e| e.to_string())?;
    let inert: Vec<u64> = [5u64, 7, 11, 19, 31, 37, 41, 47, 59, 67, 71, 73, 83, 89, 97]
        .into_iter()
        .filter(|&l| {
            let primes = split_prime(&field, l).unwrap();
            primes.len() == 1 && primes[0].residue_degree() == 2
        })
        .collect();
    ensure!(inert.len() >= 10, "too few inert primes: {inert:?}");
    let mut done = 0;
    while done < 50 {
        let ell = inert[done % inert.len()];
        let coeffs = [(); 5].map(|_| rng.gen_range(-20i64..=20));
        let fp = ResidueField::prime_field(ell);
        let Some(base) = ReducedCurve::new(fp.clone(), coeffs.map(|c| fp.from_i64(c))) else {
            continue;
        };
        let Ok(e) = WeierstrassCurve::from_integers(&field, coeffs) else {
            continue;
        };
        let a_l = ell as i64 + 1 - count_points(&base, DEFAULT_COUNT_CAP).map_err(|e| e.to_string())? as i64;
        let q = &split_prime(&field, ell).map_err(|e| e.to_string())?[0];
        let f = frobenius_data(&e, q, DEFAULT_COUNT_CAP).map_err(|e| e.to_string())?;
        let expected = big(a_l * a_l - 2 * ell as i64);
        ensure!(f.trace == expected, "ell = {ell}, {coeffs:?}: a_(ell^2) = {}, expected {expected}", f.trace);
        done += 1;
    }
    Ok(())
}

fn is_squarefree(n: i64) -> bool {
    (2..).take_while(|d| d * d <= n).all(|d| n % (d * d) != 0)
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let sigs = [Signature::new(vec![12, 0]).unwrap(), Signature::new(vec![0, 12]).unwrap()];
    for d in (2..=500).filter(|&d| is_squarefree(d)) {
        let (k, u) = quadratic_units(d);
        for s in &sigs {
            let a = compute_a_s(&k, s, &u).map_err(|e| e.to_string())?;
            ensure!(!a.is_zero(), "A_{s} = 0 for D = {d}");
        }
    }
    within(start, Duration::from_secs(60), "squarefree D up to 500")
}

fn criterion_6() -> Check {
    let a = merel_bound(2, 1).map_err(|e| e.to_string())?;
    ensure!(a == big(282430599364), "merel_bound(2, 1) = {a}");
    let b = merel_bound(1, 1).map_err(|e| e.to_string())?;
    ensure!(b == big(532900), "merel_bound(1, 1) = {b}");
    Ok(())
}

fn product(factors: &[(i64, u32)]) -> BigInt {
    factors.iter().fold(BigInt::one(), |acc, &(p, e)| acc * big(p).pow(e))
}

fn criterion_7() -> Check {
    let k = make_quadratic_field(13, 1).map_err(|e| e.to_string())?;
    let r3 = product(&[(2, 6), (3, 2), (5, 2), (37, 1)]);
    let r17 = product(&[
        (2, 8), (3, 4), (5, 2), (7, 2), (13, 2), (19, 1), (23, 1), (53, 1), (97, 1), (281, 1), (21481, 1), (22777, 1),
    ]);
    let groups = [
        AuxiliaryGroup { ell: 3, values: vec![r3] },
        AuxiliaryGroup { ell: 17, values: vec![r17] },
    ];
    let set = assemble_bad_primes(&k, &big(1684800), &groups, &[]).map_err(|e| e.to_string())?;
    let beyond = set.beyond_baseline();
    ensure!(beyond.is_empty(), "excluded beyond baseline: {beyond:?}");
    Ok(())
}

const LEGENDRE: &str = r#"{
    "field": {"quadratic": 13, "class_number": 1},
    "family": {
        "coeff_a2": [[0, 1, [1, 0]], [1, 0, [-1, 0]]],
        "coeff_a4": [[1, 1, [-1, 0]]],
        "skip": "both_zero",
        "additive_residue_chars": [2]
    },
    "aux_primes": [5, 7]
}"#;

/// F_25 as F_5[t]/(t^2 - 2).
#[derive(Clone, Copy, PartialEq, Eq)]
struct F25(i64, i64);

impl F25 {
    fn add(self, o: F25) -> F25 {
        F25((self.0 + o.0).rem_euclid(5), (self.1 + o.1).rem_euclid(5))
    }
    fn mul(self, o: F25) -> F25 {
        F25(
            (self.0 * o.0 + 2 * self.1 * o.1).rem_euclid(5),
            (self.0 * o.1 + self.1 * o.0).rem_euclid(5),
        )
    }
}

/// `R^{a,b}` for y^2 = x(x - a)(x + b) at the inert prime 5, by counting all
/// (x, y) in F_25^2 and taking a Sylvester resultant with X^12 - 1. `None` for
/// a singular specialization.
fn oracle_pair(a: i64, b: i64) -> Option<BigInt> {
    if a == 0 || b == 0 || (a + b) % 5 == 0 {
        return None;
    }
    let elems: Vec<F25> = (0..25).map(|i| F25(i % 5, i / 5)).collect();
    let (fa, fb) = (F25(-a, 0), F25(b, 0));
    let mut points = 1;
    for &x in &elems {
        let rhs = x.mul(x.add(fa)).mul(x.add(fb));
        points += elems.iter().filter(|&&y| y.mul(y) == rhs).count() as i64;
    }
    let trace = 26 - points;
    let f = IntPoly::from_i64(&[25, -trace, 1]);
    let g = IntPoly::binomial(12, BigInt::one());
    Some(resultant_sylvester(&f, &g).unwrap())
}

fn criterion_8() -> Check {
    let cfg = parse_config(LEGENDRE).map_err(|e| e.to_string())?;
    let options = |jobs| PipelineOptions {
        jobs: Some(jobs),
        emit_pairs: true,
        ..Default::default()
    };
    let one = run_pipeline(&cfg, options(1)).map_err(|e| e.to_string())?;
    let eight = run_pipeline(&cfg, options(8)).map_err(|e| e.to_string())?;
    for fmt in [Format::Json, Format::Text] {
        ensure!(emit_report(&one, fmt) == emit_report(&eight, fmt), "{fmt:?} reports differ between 1 and 8 workers");
    }
    let ells: Vec<u64> = one.per_prime.iter().map(PrimeSection::ell).collect();
    ensure!(ells == [5, 7], "swept {ells:?}");

    let PrimeSection::Sweep(sweep) = &one.per_prime[0] else {
        return Err("ell = 5 is not a sweep".into());
    };
    let mut expected_pairs = Vec::new();
    let mut lcm = BigInt::one();
    for a in 0..5 {
        for b in 0..5 {
            if (a, b) == (0, 0) {
                continue;
            }
            if let Some(v) = oracle_pair(a, b) {
                lcm = lcm.lcm(&v);
                expected_pairs.push((a as u64, b as u64, v));
            }
        }
    }
    let got: Vec<(u64, u64, BigInt)> = sweep.pairs.iter().map(|p| (p.a, p.b, p.value.clone())).collect();
    ensure!(got == expected_pairs, "per-pair values disagree with the oracle");
    ensure!(sweep.value == lcm, "R_5 = {}, oracle {lcm}", sweep.value);
    ensure!(sweep.skipped.len() == 25 - expected_pairs.len(), "skipped {} pairs", sweep.skipped.len());
    Ok(())
}

#[test]
fn acceptance() {
    let results = [
        run_criterion(1, "fundamental unit and Norm(eps^12 - 1)", criterion_1),
        run_criterion(2, "unit bound B", criterion_2),
        run_criterion(3, "resultant engine", criterion_3),
        run_criterion(4, "point counting", criterion_4),
        run_criterion(5, "A_s nonzero for squarefree D <= 500", criterion_5),
        run_criterion(6, "torsion bound", criterion_6),
        run_criterion(7, "bad-prime assembly from reference resultants", criterion_7),
        run_criterion(8, "sweep determinism and brute-force oracle", criterion_8),
    ];
    report_line("criterion 9 (Frey-curve family reproduction): SKIPPED [needs external coefficients; run with --ignored]");
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

/// Needs a config describing the Frey-curve family, with `aux_primes`
/// containing 3 and 17 and `r` set to 1 for both. The coefficients are not
/// bundled with this repository.
#[test]
#[ignore]
fn criterion_9_frey_family() {
    let ok = run_criterion(9, "Frey-curve family reproduction", || {
        let path = std::env::var("IRRED_FREY_CONFIG").map_err(|_| "IRRED_FREY_CONFIG is not set".to_string())?;
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
        let cfg = parse_config(&text).map_err(|e| e.to_string())?;
        let report = run_pipeline(&cfg, PipelineOptions::default()).map_err(|e| e.to_string())?;
        let section = |ell: u64| report.per_prime.iter().find(|s| s.ell() == ell);
        let r3 = section(3).ok_or("no section for ell = 3")?;
        ensure!(r3.value() == &big(532800), "R_3 = {}", r3.value());
        let r17 = section(17).ok_or("no section for ell = 17")?;
        let want = "2^8*3^4*5^2*7^2*13^2*19*23*53*97*281*21481*22777";
        ensure!(r17.factorization().render() == want, "R_17 = {}", r17.factorization().render());
        Ok(())
    });
    assert!(ok);
}
