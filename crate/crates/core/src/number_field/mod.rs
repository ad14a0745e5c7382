//! Exact arithmetic in a totally real Galois number field.
//!
//! A field is described by the minimal polynomial of a generator `theta`, an
//! integral basis `omega_1 = 1, ..., omega_d` written in the power basis of
//! `theta`, and its automorphisms `theta -> u_k(theta)`. Elements of the ring
//! of integers are coordinate vectors over the integral basis; products go
//! through a precomputed multiplication table.

mod ideal;
mod prime;
pub mod qpoly;

pub use ideal::IdealHNF;
pub use prime::{residue_map, split_prime, PrimeIdeal};

use crate::arith::{det_bareiss, det_rational, factorize, invert_rational, BigInt, IntPoly};
use crate::error::{Error, Result};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use qpoly::QPoly;
use serde::Serialize;
use std::fmt;

/// Element of the ring of integers: coordinates over the integral basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraicInteger(pub Vec<BigInt>);

impl AlgebraicInteger {
    pub fn from_i64(coords: &[i64]) -> Self {
        AlgebraicInteger(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Largest coordinate size in decimal digits.
    pub fn max_digits(&self) -> usize {
        self.0
            .iter()
            .map(|c| c.magnitude().to_string().len())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for AlgebraicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A totally real Galois number field together with its integral structure.
#[derive(Debug, Clone)]
pub struct FieldDescriptor {
    degree: usize,
    min_poly: IntPoly,
    /// Row `i` holds the power-basis coordinates of `omega_i`.
    basis: Vec<QPoly>,
    /// Row `k` holds the integral-basis coordinates of `theta^k`.
    basis_inv: Vec<Vec<BigRational>>,
    automorphisms: Vec<QPoly>,
    /// `mult[i][j]` is `omega_i * omega_j` over the integral basis.
    mult: Vec<Vec<Vec<BigInt>>>,
    /// `aut[k][i]` is `tau_k(omega_i)` over the integral basis.
    aut: Vec<Vec<Vec<BigInt>>>,
    class_number: u64,
    discriminant: BigInt,
    index: BigInt,
    quadratic_d: Option<i64>,
}

impl FieldDescriptor {
    /// Build a field from raw data. Fails if the data cannot support exact
    /// arithmetic at all (dimensions, non-monic polynomial, singular basis,
    /// non-integral multiplication table or automorphism action). The
    /// remaining invariants are checked by [`verify_field`].
    pub fn new(
        min_poly: IntPoly,
        basis: Vec<Vec<BigRational>>,
        automorphisms: Vec<Vec<BigRational>>,
        class_number: u64,
    ) -> Result<Self> {
        let degree = min_poly
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::invalid("minimal polynomial must have degree >= 1"))?;
        if !min_poly.leading().is_some_and(One::is_one) {
            return Err(Error::invalid("minimal polynomial must be monic"));
        }
        if class_number == 0 {
            return Err(Error::invalid("class number must be positive"));
        }
        if basis.len() != degree {
            return Err(Error::invalid(format!(
                "integral basis has {} elements, expected {degree}",
                basis.len()
            )));
        }
        let basis: Vec<QPoly> = basis.into_iter().map(qpoly::trim).collect();
        if let Some(i) = basis.iter().position(|w| w.len() > degree) {
            return Err(Error::invalid(format!(
                "integral basis element {i} has degree >= {degree}"
            )));
        }
        let square: Vec<Vec<BigRational>> = basis.iter().map(|w| pad(w, degree)).collect();
        let basis_inv = invert_rational(&square)
            .ok_or_else(|| Error::invalid("integral basis is linearly dependent"))?;
        let det = det_rational(&square);
        let index_q = det.recip().abs();
        if !index_q.is_integer() {
            return Err(Error::Verification(format!(
                "integral basis does not contain Z[theta] (index {index_q})"
            )));
        }
        let automorphisms: Vec<QPoly> = automorphisms.into_iter().map(qpoly::trim).collect();
        if let Some(k) = automorphisms.iter().position(|u| u.len() > degree) {
            return Err(Error::invalid(format!(
                "automorphism {k} has degree >= {degree}"
            )));
        }

        let mut field = FieldDescriptor {
            degree,
            min_poly,
            basis,
            basis_inv,
            automorphisms,
            mult: Vec::new(),
            aut: Vec::new(),
            class_number,
            discriminant: BigInt::zero(),
            index: index_q.to_integer(),
            quadratic_d: None,
        };
        let f = field.min_poly_q();
        let mut mult = vec![vec![Vec::new(); degree]; degree];
        for i in 0..degree {
            for j in i..degree {
                let prod = qpoly::rem(&qpoly::mul(&field.basis[i], &field.basis[j]), &f);
                let coords = field.integral_coords(&prod).ok_or_else(|| {
                    Error::Verification(format!(
                        "multiplication table entry omega_{} * omega_{} is not integral",
                        i + 1,
                        j + 1
                    ))
                })?;
                mult[i][j] = coords.clone();
                mult[j][i] = coords;
            }
        }
        field.mult = mult;
        let mut aut = Vec::with_capacity(field.automorphisms.len());
        for (k, u) in field.automorphisms.iter().enumerate() {
            let mut images = Vec::with_capacity(degree);
            for (i, w) in field.basis.iter().enumerate() {
                let image = qpoly::compose_mod(w, u, &f);
                images.push(field.integral_coords(&image).ok_or_else(|| {
                    Error::Verification(format!(
                        "automorphism {k} does not map omega_{} into the ring of integers",
                        i + 1
                    ))
                })?);
            }
            aut.push(images);
        }
        field.aut = aut;
        field.discriminant = field.compute_discriminant();
        Ok(field)
    }

    fn min_poly_q(&self) -> QPoly {
        qpoly::from_ints(self.min_poly.coeffs())
    }

    /// Integral-basis coordinates of a power-basis element, if integral.
    pub fn integral_coords(&self, power: &[BigRational]) -> Option<Vec<BigInt>> {
        let d = self.degree;
        let reduced;
        let power = if power.len() > d {
            reduced = qpoly::rem(power, &self.min_poly_q());
            &reduced[..]
        } else {
            power
        };
        let mut out = Vec::with_capacity(d);
        for i in 0..d {
            let mut acc = BigRational::zero();
            for (k, c) in power.iter().enumerate() {
                acc += c * &self.basis_inv[k][i];
            }
            if !acc.is_integer() {
                return None;
            }
            out.push(acc.to_integer());
        }
        Some(out)
    }

    /// Power-basis coordinates of an element.
    pub fn to_power_basis(&self, a: &AlgebraicInteger) -> QPoly {
        let mut acc: QPoly = Vec::new();
        for (c, w) in a.0.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            acc = qpoly::add(&acc, &qpoly::scale(w, &BigRational::from_integer(c.clone())));
        }
        acc
    }

    /// Element with the given power-basis coordinates (must be integral).
    pub fn from_power_basis(&self, power: &[BigRational]) -> Option<AlgebraicInteger> {
        self.integral_coords(power).map(AlgebraicInteger)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &IntPoly {
        &self.min_poly
    }

    pub fn basis(&self) -> &[QPoly] {
        &self.basis
    }

    pub fn automorphism_polys(&self) -> &[QPoly] {
        &self.automorphisms
    }

    pub fn automorphism_count(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn class_number(&self) -> u64 {
        self.class_number
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    /// `[O_K : Z[theta]]`.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    /// `Some(D)` for fields built by [`make_quadratic_field`].
    pub fn quadratic_d(&self) -> Option<i64> {
        self.quadratic_d
    }

    /// Rational primes dividing the field discriminant.
    pub fn ramified_primes(&self) -> Vec<BigInt> {
        if self.discriminant.is_zero() {
            return Vec::new();
        }
        factorize(&self.discriminant)
            .map(|f| f.primes().cloned().collect())
            .unwrap_or_default()
    }

    pub fn zero(&self) -> AlgebraicInteger {
        AlgebraicInteger(vec![BigInt::zero(); self.degree])
    }

    pub fn one(&self) -> AlgebraicInteger {
        self.from_int(&BigInt::one())
    }

    /// Image of a rational integer (`omega_1 = 1` is enforced by verification;
    /// this goes through the power basis so it is correct regardless).
    pub fn from_int(&self, n: &BigInt) -> AlgebraicInteger {
        self.from_power_basis(&[BigRational::from_integer(n.clone())])
            .expect("Z[theta] lies in the ring of integers")
    }

    pub fn add(&self, a: &AlgebraicInteger, b: &AlgebraicInteger) -> AlgebraicInteger {
        AlgebraicInteger(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &AlgebraicInteger, b: &AlgebraicInteger) -> AlgebraicInteger {
        AlgebraicInteger(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &AlgebraicInteger) -> AlgebraicInteger {
        AlgebraicInteger(a.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &AlgebraicInteger, c: &BigInt) -> AlgebraicInteger {
        AlgebraicInteger(a.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, a: &AlgebraicInteger, b: &AlgebraicInteger) -> AlgebraicInteger {
        let d = self.degree;
        let mut out = vec![BigInt::zero(); d];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, t) in self.mult[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &xy * t;
                    }
                }
            }
        }
        AlgebraicInteger(out)
    }

    pub fn pow(&self, a: &AlgebraicInteger, mut exp: u64) -> AlgebraicInteger {
        let mut base = a.clone();
        let mut result = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(&result, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// `tau_k(a)`.
    pub fn apply_automorphism(&self, k: usize, a: &AlgebraicInteger) -> AlgebraicInteger {
        let mut out = vec![BigInt::zero(); self.degree];
        for (c, image) in a.0.iter().zip(&self.aut[k]) {
            if c.is_zero() {
                continue;
            }
            for (o, t) in out.iter_mut().zip(image) {
                *o += c * t;
            }
        }
        AlgebraicInteger(out)
    }

    /// Columns are `a * omega_j` over the integral basis; stored row-major.
    pub fn mul_matrix(&self, a: &AlgebraicInteger) -> Vec<Vec<BigInt>> {
        let d = self.degree;
        let mut m = vec![vec![BigInt::zero(); d]; d];
        for j in 0..d {
            let mut e = self.zero();
            e.0[j] = BigInt::one();
            let col = self.mul(a, &e);
            for (i, v) in col.0.into_iter().enumerate() {
                m[i][j] = v;
            }
        }
        m
    }

    pub fn norm(&self, a: &AlgebraicInteger) -> BigInt {
        det_bareiss(&self.mul_matrix(a))
    }

    pub fn trace(&self, a: &AlgebraicInteger) -> BigInt {
        let m = self.mul_matrix(a);
        (0..self.degree).map(|i| m[i][i].clone()).sum()
    }

    fn compute_discriminant(&self) -> BigInt {
        let d = self.degree;
        let mut basis = Vec::with_capacity(d);
        for i in 0..d {
            let mut e = self.zero();
            e.0[i] = BigInt::one();
            basis.push(e);
        }
        let gram: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| self.trace(&self.mul(&basis[i], &basis[j])))
                    .collect()
            })
            .collect();
        det_bareiss(&gram)
    }
}

/// Norm `det(x -> a x)`; equals the product of all conjugates.
pub fn field_norm(field: &FieldDescriptor, a: &AlgebraicInteger) -> BigInt {
    field.norm(a)
}

fn pad(p: &[BigRational], d: usize) -> Vec<BigRational> {
    let mut v = p.to_vec();
    v.resize(d, BigRational::zero());
    v
}

fn is_squarefree(n: i64) -> bool {
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Real quadratic field `Q(sqrt D)` with generator `theta` chosen so that
/// `Z[theta]` is the full ring of integers: `theta = (1 + sqrt D)/2` when
/// `D = 1 mod 4`, else `theta = sqrt D`. The integral basis is `(1, theta)`.
pub fn make_quadratic_field(d: i64, class_number: u64) -> Result<FieldDescriptor> {
    if d <= 1 {
        return Err(Error::invalid(format!("quadratic field parameter {d} must exceed 1")));
    }
    if !is_squarefree(d) {
        return Err(Error::invalid(format!("{d} is not squarefree")));
    }
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let (min_poly, sigma) = if d.mod_floor(&4) == 1 {
        (IntPoly::from_i64(&[-(d - 1) / 4, -1, 1]), vec![q(1), q(-1)])
    } else {
        (IntPoly::from_i64(&[-d, 0, 1]), vec![q(0), q(-1)])
    };
    let basis = vec![vec![q(1)], vec![q(0), q(1)]];
    let automorphisms = vec![vec![q(0), q(1)], sigma];
    let mut field = FieldDescriptor::new(min_poly, basis, automorphisms, class_number)?;
    field.quadratic_d = Some(d);
    Ok(field)
}

/// Outcome of one invariant check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Per-check results of [`verify_field`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldDiagnostics {
    pub checks: Vec<Check>,
    /// Set when irreducibility was taken on trust (degree above 4).
    pub irreducibility_assumed: bool,
}

impl FieldDiagnostics {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Run every field invariant check: irreducibility (degree <= 4), total
/// reality by Sturm count, automorphisms (roots, distinct, closed under
/// composition, exactly `d` of them), `omega_1 = 1` and integrality of the
/// multiplication table.
pub fn verify_field(field: &FieldDescriptor) -> FieldDiagnostics {
    let d = field.degree;
    let f = field.min_poly_q();
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        })
    };

    let irreducibility_assumed = d > 4;
    if irreducibility_assumed {
        push(
            "irreducible",
            true,
            format!("degree {d} > 4: irreducibility assumed from config"),
        );
    } else {
        match small_degree_factor(&field.min_poly) {
            None => push("irreducible", true, "no rational or quadratic factor".into()),
            Some(reason) => push("irreducible", false, reason),
        }
    }

    let real = qpoly::count_real_roots(&f);
    push(
        "totally_real",
        real == d,
        format!("{real} of {d} roots are real"),
    );

    let theta: QPoly = pad(&[BigRational::zero(), BigRational::one()], 2);
    let theta = qpoly::trim(theta);
    let autos = &field.automorphisms;
    let mut roots_ok = true;
    let mut detail = String::from("every automorphism maps theta to a root");
    for (k, u) in autos.iter().enumerate() {
        if !qpoly::compose_mod(&f, u, &f).is_empty() {
            roots_ok = false;
            detail = format!("automorphism {k} does not map theta to a root of the minimal polynomial");
            break;
        }
    }
    push("automorphisms_are_roots", roots_ok, detail);

    let mut distinct = true;
    let mut detail = String::from("pairwise distinct");
    'outer: for i in 0..autos.len() {
        for j in i + 1..autos.len() {
            if autos[i] == autos[j] {
                distinct = false;
                detail = format!("automorphisms {i} and {j} coincide");
                break 'outer;
            }
        }
    }
    push("automorphisms_distinct", distinct, detail);

    let mut closed = true;
    let mut detail = String::from("closed under composition");
    'closure: for (i, ui) in autos.iter().enumerate() {
        for (j, uj) in autos.iter().enumerate() {
            // tau_i(tau_j(theta)) = u_j(u_i(theta)).
            let comp = qpoly::compose_mod(uj, ui, &f);
            if !autos.contains(&comp) {
                closed = false;
                detail = format!("composition of automorphisms ({i}, {j}) is not in the list");
                break 'closure;
            }
        }
    }
    push("automorphisms_closed", closed, detail);

    push(
        "galois_group_order",
        autos.len() == d,
        format!("{} automorphisms for degree {d}", autos.len()),
    );
    push(
        "contains_identity",
        autos.contains(&theta),
        "identity automorphism present".into(),
    );

    let first_is_one = field.basis[0] == vec![BigRational::one()];
    push(
        "omega_1_is_one",
        first_is_one,
        "first integral basis element equals 1".into(),
    );

    // Integral multiplication table is a construction precondition; recheck it.
    let integral = (0..d).all(|i| {
        (0..d).all(|j| {
            let prod = qpoly::rem(&qpoly::mul(&field.basis[i], &field.basis[j]), &f);
            field.integral_coords(&prod).as_ref() == Some(&field.mult[i][j])
        })
    });
    push(
        "multiplication_table_integral",
        integral,
        "all products of basis elements have integral coordinates".into(),
    );

    push(
        "discriminant_nonzero",
        !field.discriminant.is_zero(),
        format!("discriminant {}", field.discriminant),
    );

    FieldDiagnostics {
        checks,
        irreducibility_assumed,
    }
}

/// For a monic integer polynomial of degree at most 4, describe a rational
/// linear or quadratic factor if one exists.
fn small_degree_factor(f: &IntPoly) -> Option<String> {
    let c = f.coeffs();
    let d = c.len() - 1;
    if d <= 1 {
        return None;
    }
    if c[0].is_zero() {
        return Some("0 is a root".into());
    }
    let divisors = divisors_of(&c[0]);
    for r in divisors.iter().flat_map(|v| [v.clone(), -v.clone()]) {
        if f.eval(&r).is_zero() {
            return Some(format!("{r} is a root"));
        }
    }
    if d == 4 {
        // (x^2 + a x + b)(x^2 + e x + g) with b g = c0.
        for b in divisors.iter().flat_map(|v| [v.clone(), -v.clone()]) {
            let g = &c[0] / &b;
            // a + e = c3, a e + b + g = c2.
            let s = &c[3];
            let prod = &c[2] - &b - &g;
            let disc: BigInt = s * s - BigInt::from(4) * &prod;
            if disc.is_negative() {
                continue;
            }
            let root = disc.sqrt();
            if &root * &root != disc {
                continue;
            }
            for sgn in [1i32, -1] {
                let num: BigInt = s + BigInt::from(sgn) * &root;
                if num.is_odd() {
                    continue;
                }
                let a = &num / 2;
                let e = s - &a;
                if &a * &g + &e * &b == c[1] {
                    return Some(format!(
                        "factors as (x^2 + {a}x + {b})(x^2 + {e}x + {g})"
                    ));
                }
            }
        }
    }
    None
}

fn divisors_of(n: &BigInt) -> Vec<BigInt> {
    let Ok(fac) = factorize(n) else {
        return Vec::new();
    };
    let mut divs = vec![BigInt::one()];
    for (p, &e) in &fac.factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Residue characteristic as `u64`, or an error for out-of-range primes.
pub(crate) fn small_prime(ell: &BigInt) -> Result<u64> {
    ell.to_u64()
        .filter(|&v| v >= 2 && v < (1u64 << 62))
        .ok_or_else(|| Error::invalid(format!("prime {ell} out of supported range")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q13() -> FieldDescriptor {
        make_quadratic_field(13, 1).unwrap()
    }

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn quadratic_constructor() {
        let k = q13();
        assert_eq!(k.discriminant(), &BigInt::from(13));
        assert_eq!(k.index(), &BigInt::one());
        assert_eq!(k.basis()[1], vec![rat(0), rat(1)]);
        let k2 = make_quadratic_field(2, 1).unwrap();
        assert_eq!(k2.discriminant(), &BigInt::from(8));
        assert!(make_quadratic_field(12, 1).is_err());
        assert!(make_quadratic_field(1, 1).is_err());
        assert!(make_quadratic_field(-5, 1).is_err());
    }

    #[test]
    fn norms_in_q13() {
        let k = q13();
        // epsilon = (3 + sqrt13)/2 = 1 + theta.
        let eps = AlgebraicInteger::from_i64(&[1, 1]);
        assert_eq!(field_norm(&k, &eps), BigInt::from(-1));
        assert_eq!(field_norm(&k, &k.one()), BigInt::one());
        let e12 = k.pow(&eps, 12);
        let m = k.sub(&e12, &k.one());
        assert_eq!(field_norm(&k, &m), BigInt::from(-1684800));
        // Norm equals the product of conjugates.
        let conj = k.apply_automorphism(1, &eps);
        let prod = k.mul(&eps, &conj);
        assert_eq!(prod, k.from_int(&BigInt::from(-1)));
    }

    #[test]
    fn twelfth_power_matches_sqrt_form() {
        // epsilon^12 = 842401 + 233640 sqrt13; sqrt13 = 2 theta - 1.
        let k = q13();
        let e12 = k.pow(&AlgebraicInteger::from_i64(&[1, 1]), 12);
        assert_eq!(e12, AlgebraicInteger::from_i64(&[842401 - 233640, 2 * 233640]));
    }

    #[test]
    fn verify_accepts_q13() {
        let diag = verify_field(&q13());
        assert!(diag.all_passed(), "{:?}", diag.failures());
    }

    #[test]
    fn verify_rejects_non_galois_cubic() {
        let f = IntPoly::from_i64(&[-2, 0, 0, 1]);
        let basis = vec![vec![rat(1)], vec![rat(0), rat(1)], vec![rat(0), rat(0), rat(1)]];
        let k = FieldDescriptor::new(f, basis, vec![vec![rat(0), rat(1)]], 1).unwrap();
        let diag = verify_field(&k);
        let failed: Vec<_> = diag.failures().iter().map(|c| c.name.clone()).collect();
        assert!(failed.contains(&"galois_group_order".to_string()));
        assert!(failed.contains(&"totally_real".to_string()));
    }

    #[test]
    fn verify_rejects_imaginary() {
        let f = IntPoly::from_i64(&[1, 0, 1]);
        let basis = vec![vec![rat(1)], vec![rat(0), rat(1)]];
        let autos = vec![vec![rat(0), rat(1)], vec![rat(0), rat(-1)]];
        let k = FieldDescriptor::new(f, basis, autos, 1).unwrap();
        let diag = verify_field(&k);
        let failed: Vec<_> = diag.failures().iter().map(|c| c.name.as_str().to_owned()).collect();
        assert_eq!(failed, vec!["totally_real"]);
    }

    #[test]
    fn verify_cyclic_cubic() {
        // x^3 - 3x + 1, roots 2cos(2 pi k / 9); sigma(theta) = theta^2 - 2.
        let f = IntPoly::from_i64(&[1, -3, 0, 1]);
        let basis = vec![vec![rat(1)], vec![rat(0), rat(1)], vec![rat(0), rat(0), rat(1)]];
        let autos = vec![
            vec![rat(0), rat(1)],
            vec![rat(-2), rat(0), rat(1)],
            vec![rat(2), rat(-1), rat(-1)],
        ];
        let k = FieldDescriptor::new(f, basis, autos, 1).unwrap();
        let diag = verify_field(&k);
        assert!(diag.all_passed(), "{:?}", diag.failures());
        assert_eq!(k.discriminant(), &BigInt::from(81));
    }

    #[test]
    fn quartic_factor_detection() {
        // (x^2 - 2)(x^2 - 3) = x^4 - 5x^2 + 6.
        assert!(small_degree_factor(&IntPoly::from_i64(&[6, 0, -5, 0, 1])).is_some());
        // x^4 - 10x^2 + 1 is irreducible.
        assert!(small_degree_factor(&IntPoly::from_i64(&[1, 0, -10, 0, 1])).is_none());
        assert!(small_degree_factor(&IntPoly::from_i64(&[-8, 0, 0, 1])).is_some());
    }

    #[test]
    fn non_integral_basis_rejected() {
        // (1 + sqrt2)/2 is not an algebraic integer.
        let f = IntPoly::from_i64(&[-2, 0, 1]);
        let half = BigRational::new(1.into(), 2.into());
        let basis = vec![vec![rat(1)], vec![half.clone(), half]];
        let autos = vec![vec![rat(0), rat(1)], vec![rat(0), rat(-1)]];
        assert!(matches!(
            FieldDescriptor::new(f, basis, autos, 1),
            Err(Error::Verification(_))
        ));
    }
}
