//! Weierstrass curves over `O_K`, reduction modulo prime ideals, point
//! counting over residue fields and Frobenius data.

use crate::arith::{BigInt, IntPoly};
use crate::error::{Error, Result};
use crate::finite_field::{ResidueField, ResidueFieldElement};
use crate::number_field::{residue_map, AlgebraicInteger, FieldDescriptor, PrimeIdeal};

/// Default residue-field size cap for exhaustive counting.
pub const DEFAULT_COUNT_CAP: u64 = 1_000_000;

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with coefficients in `O_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    /// `[a1, a2, a3, a4, a6]`.
    pub a: [AlgebraicInteger; 5],
    pub b2: AlgebraicInteger,
    pub b4: AlgebraicInteger,
    pub b6: AlgebraicInteger,
    pub b8: AlgebraicInteger,
    pub c4: AlgebraicInteger,
    pub c6: AlgebraicInteger,
    pub discriminant: AlgebraicInteger,
}

impl WeierstrassCurve {
    pub fn new(field: &FieldDescriptor, a: [AlgebraicInteger; 5]) -> Result<Self> {
        let d = field.degree();
        if a.iter().any(|c| c.coords().len() != d) {
            return Err(Error::invalid(format!(
                "curve coefficients must have {d} coordinates"
            )));
        }
        let k = |n: i64| BigInt::from(n);
        let [a1, a2, a3, a4, a6] = &a;
        let b2 = field.add(&field.mul(a1, a1), &field.scale(a2, &k(4)));
        let b4 = field.add(&field.scale(a4, &k(2)), &field.mul(a1, a3));
        let b6 = field.add(&field.mul(a3, a3), &field.scale(a6, &k(4)));
        let a1sq = field.mul(a1, a1);
        let b8 = {
            let t1 = field.mul(&a1sq, a6);
            let t2 = field.scale(&field.mul(a2, a6), &k(4));
            let t3 = field.mul(&field.mul(a1, a3), a4);
            let t4 = field.mul(a2, &field.mul(a3, a3));
            let t5 = field.mul(a4, a4);
            field.sub(&field.add(&field.sub(&field.add(&t1, &t2), &t3), &t4), &t5)
        };
        let c4 = field.sub(&field.mul(&b2, &b2), &field.scale(&b4, &k(24)));
        let c6 = field.sub(
            &field.scale(&field.mul(&b2, &b4), &k(36)),
            &field.add(&field.mul(&b2, &field.mul(&b2, &b2)), &field.scale(&b6, &k(216))),
        );
        let discriminant = discriminant_from(field, &b2, &b4, &b6, &b8);
        if discriminant.is_zero() {
            return Err(Error::invalid("curve is singular (discriminant 0)"));
        }
        Ok(WeierstrassCurve {
            a,
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            discriminant,
        })
    }

    /// Curve with rational-integer coefficients `[a1, a2, a3, a4, a6]`.
    pub fn from_integers(field: &FieldDescriptor, a: [i64; 5]) -> Result<Self> {
        Self::new(field, a.map(|c| field.from_int(&BigInt::from(c))))
    }
}

fn discriminant_from(
    field: &FieldDescriptor,
    b2: &AlgebraicInteger,
    b4: &AlgebraicInteger,
    b6: &AlgebraicInteger,
    b8: &AlgebraicInteger,
) -> AlgebraicInteger {
    let k = |n: i64| BigInt::from(n);
    // -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
    let t1 = field.mul(&field.mul(b2, b2), b8);
    let t2 = field.scale(&field.mul(b4, &field.mul(b4, b4)), &k(8));
    let t3 = field.scale(&field.mul(b6, b6), &k(27));
    let t4 = field.scale(&field.mul(b2, &field.mul(b4, b6)), &k(9));
    field.sub(&t4, &field.add(&field.add(&t1, &t2), &t3))
}

/// A curve over a finite field with nonzero discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedCurve {
    field: ResidueField,
    a: [ResidueFieldElement; 5],
}

impl ReducedCurve {
    /// `None` when the discriminant vanishes.
    pub fn new(field: ResidueField, a: [ResidueFieldElement; 5]) -> Option<Self> {
        let c = ReducedCurve { field, a };
        if c.discriminant().is_zero() {
            None
        } else {
            Some(c)
        }
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn coefficients(&self) -> &[ResidueFieldElement; 5] {
        &self.a
    }

    /// `[b2, b4, b6, b8]`.
    pub fn b_invariants(&self) -> [ResidueFieldElement; 4] {
        let k = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = k.add(&k.square(a1), &k.scale(a2, 4));
        let b4 = k.add(&k.scale(a4, 2), &k.mul(a1, a3));
        let b6 = k.add(&k.square(a3), &k.scale(a6, 4));
        let b8 = {
            let pos = k.add(
                &k.add(&k.mul(&k.square(a1), a6), &k.scale(&k.mul(a2, a6), 4)),
                &k.mul(a2, &k.square(a3)),
            );
            let neg = k.add(&k.mul(&k.mul(a1, a3), a4), &k.square(a4));
            k.sub(&pos, &neg)
        };
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> ResidueFieldElement {
        let k = &self.field;
        let [b2, b4, b6, b8] = self.b_invariants();
        let t1 = k.mul(&k.square(&b2), &b8);
        let t2 = k.scale(&k.mul(&b4, &k.square(&b4)), 8);
        let t3 = k.scale(&k.square(&b6), 27);
        let t4 = k.scale(&k.mul(&b2, &k.mul(&b4, &b6)), 9);
        k.sub(&t4, &k.add(&k.add(&t1, &t2), &t3))
    }
}

/// Reduce `e` modulo `q`; fails when the reduced model is singular.
pub fn reduce_curve(e: &WeierstrassCurve, q: &PrimeIdeal) -> Result<ReducedCurve> {
    let coeffs = e.a.clone().map(|c| residue_map(&c, q));
    ReducedCurve::new(q.residue_field().clone(), coeffs).ok_or_else(|| Error::BadReduction {
        prime: q.label(),
    })
}

/// Number of projective points, including the point at infinity.
pub fn count_points(c: &ReducedCurve, cap: u64) -> Result<u64> {
    let k = &c.field;
    let q = k
        .size()
        .filter(|&q| q <= cap)
        .ok_or_else(|| Error::SizeCap(format!(
            "residue field F_{}^{} exceeds the point-count cap {cap}",
            k.characteristic(),
            k.degree()
        )))?;
    let [a1, a2, a3, a4, a6] = &c.a;
    let mut count: u64 = 1;
    if k.characteristic() == 2 {
        // y^2 + h y = g. If h = 0 squaring is bijective; otherwise y = h z
        // turns it into z^2 + z = g / h^2, solvable iff the trace vanishes.
        for i in 0..q {
            let x = k.element(i);
            let h = k.add(&k.mul(a1, &x), a3);
            if h.is_zero() {
                count += 1;
                continue;
            }
            let x2 = k.square(&x);
            let g = k.add(
                &k.add(&k.mul(&x2, &x), &k.mul(a2, &x2)),
                &k.add(&k.mul(a4, &x), a6),
            );
            let h_inv = k.inv(&h).expect("nonzero");
            let rhs = k.mul(&g, &k.square(&h_inv));
            if k.trace(&rhs) == 0 {
                count += 2;
            }
        }
        return Ok(count);
    }
    // Odd characteristic: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
    let mut is_square = vec![false; q as usize];
    for i in 0..q {
        let y = k.element(i);
        is_square[k.index_of(&k.square(&y)) as usize] = true;
    }
    let [b2, b4, b6, _] = c.b_invariants();
    let b4x2 = k.scale(&b4, 2);
    for i in 0..q {
        let x = k.element(i);
        // Horner: ((4x + b2) x + 2 b4) x + b6
        let mut f = k.add(&k.scale(&x, 4), &b2);
        f = k.add(&k.mul(&f, &x), &b4x2);
        f = k.add(&k.mul(&f, &x), &b6);
        if f.is_zero() {
            count += 1;
        } else if is_square[k.index_of(&f) as usize] {
            count += 2;
        }
    }
    Ok(count)
}

/// Trace and characteristic polynomial of Frobenius at a prime of good reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusData {
    pub prime: String,
    pub norm: BigInt,
    pub trace: BigInt,
    pub charpoly: IntPoly,
}

impl FrobeniusData {
    /// From a point count over a field of size `norm`.
    pub fn from_count(prime: String, norm: u64, points: u64) -> Self {
        let norm_big = BigInt::from(norm);
        let trace = BigInt::from(norm) + 1 - BigInt::from(points);
        assert!(
            &trace * &trace <= &norm_big * 4,
            "Hasse bound violated at {prime}: a = {trace}, N = {norm}"
        );
        FrobeniusData {
            charpoly: IntPoly::quadratic_charpoly(&trace, &norm_big),
            prime,
            norm: norm_big,
            trace,
        }
    }
}

/// `a_q = Norm(q) + 1 - #E(F_q)` and `P_q = X^2 - a_q X + Norm(q)`.
pub fn frobenius_data(e: &WeierstrassCurve, q: &PrimeIdeal, cap: u64) -> Result<FrobeniusData> {
    let reduced = reduce_curve(e, q)?;
    frobenius_of_reduced(&reduced, q.label(), cap)
}

pub fn frobenius_of_reduced(c: &ReducedCurve, prime: String, cap: u64) -> Result<FrobeniusData> {
    let points = count_points(c, cap)?;
    let norm = c.field.size().expect("counted fields fit in u64");
    Ok(FrobeniusData::from_count(prime, norm, points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::number_field::{make_quadratic_field, split_prime};

    fn curve_over(k: &ResidueField, a: [i64; 5]) -> ReducedCurve {
        ReducedCurve::new(k.clone(), a.map(|c| k.from_i64(c))).unwrap()
    }

    /// Count solutions of the full Weierstrass equation over all (x, y).
    fn brute_count(c: &ReducedCurve) -> u64 {
        let k = c.field();
        let q = k.size().unwrap();
        let [a1, a2, a3, a4, a6] = c.coefficients();
        let mut n = 1;
        for i in 0..q {
            let x = k.element(i);
            let x2 = k.square(&x);
            let rhs = k.add(&k.add(&k.mul(&x2, &x), &k.mul(a2, &x2)), &k.add(&k.mul(a4, &x), a6));
            for j in 0..q {
                let y = k.element(j);
                let lhs = k.add(&k.square(&y), &k.add(&k.mul(&k.mul(a1, &x), &y), &k.mul(a3, &y)));
                if lhs == rhs {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn small_counts() {
        let f5 = ResidueField::prime_field(5);
        assert_eq!(count_points(&curve_over(&f5, [0, 0, 0, 0, 1]), DEFAULT_COUNT_CAP).unwrap(), 6);
        let f3 = ResidueField::prime_field(3);
        assert_eq!(count_points(&curve_over(&f3, [0, 0, 0, 1, 0]), DEFAULT_COUNT_CAP).unwrap(), 4);
        let f25 = ResidueField::extension(5, 2).unwrap();
        assert_eq!(count_points(&curve_over(&f25, [0, 0, 0, 0, 1]), DEFAULT_COUNT_CAP).unwrap(), 36);
        assert!(matches!(
            count_points(&curve_over(&f25, [0, 0, 0, 0, 1]), 24),
            Err(Error::SizeCap(_))
        ));
    }

    #[test]
    fn characteristic_two_matches_enumeration() {
        for f in 1..=4 {
            let k = ResidueField::extension(2, f).unwrap();
            for a in [[1, 0, 0, 0, 1], [0, 0, 1, 0, 0], [1, 1, 0, 0, 1], [0, 0, 1, 1, 1], [1, 0, 1, 1, 0]] {
                if let Some(c) = ReducedCurve::new(k.clone(), a.map(|v| k.from_i64(v))) {
                    assert_eq!(count_points(&c, DEFAULT_COUNT_CAP).unwrap(), brute_count(&c), "{a:?} over F_2^{f}");
                }
            }
        }
    }

    #[test]
    fn singular_models_rejected() {
        let f5 = ResidueField::prime_field(5);
        assert!(ReducedCurve::new(f5.clone(), [0, 0, 0, 0, 0].map(|v| f5.from_i64(v))).is_none());
    }

    #[test]
    fn invariants_identity() {
        let k = make_quadratic_field(13, 1).unwrap();
        let a = [
            AlgebraicInteger::from_i64(&[1, 2]),
            AlgebraicInteger::from_i64(&[-1, 0]),
            AlgebraicInteger::from_i64(&[0, 3]),
            AlgebraicInteger::from_i64(&[5, -1]),
            AlgebraicInteger::from_i64(&[2, 7]),
        ];
        let e = WeierstrassCurve::new(&k, a).unwrap();
        let four_b8 = k.scale(&e.b8, &BigInt::from(4));
        let rhs = k.sub(&k.mul(&e.b2, &e.b6), &k.mul(&e.b4, &e.b4));
        assert_eq!(four_b8, rhs);
        // 1728 Delta = c4^3 - c6^2
        let lhs = k.scale(&e.discriminant, &BigInt::from(1728));
        let c4cubed = k.mul(&e.c4, &k.mul(&e.c4, &e.c4));
        assert_eq!(lhs, k.sub(&c4cubed, &k.mul(&e.c6, &e.c6)));
        let e1 = WeierstrassCurve::from_integers(&k, [0, 0, 0, 0, 1]).unwrap();
        assert_eq!(e1.discriminant, k.from_int(&BigInt::from(-432)));
    }

    #[test]
    fn frobenius_over_q13() {
        let k = make_quadratic_field(13, 1).unwrap();
        let e = WeierstrassCurve::from_integers(&k, [0, 0, 0, 0, 1]).unwrap();
        let inert = &split_prime(&k, 5).unwrap()[0];
        let fd = frobenius_data(&e, inert, DEFAULT_COUNT_CAP).unwrap();
        assert_eq!(fd.trace, BigInt::from(-10));
        assert_eq!(fd.charpoly.to_string(), "X^2 + 10*X + 25");
        for q in split_prime(&k, 3).unwrap() {
            assert!(matches!(reduce_curve(&e, &q), Err(Error::BadReduction { .. })));
        }
        let e2 = WeierstrassCurve::from_integers(&k, [0, 0, 0, 1, 0]).unwrap();
        for q in split_prime(&k, 3).unwrap() {
            let fd = frobenius_data(&e2, &q, DEFAULT_COUNT_CAP).unwrap();
            assert_eq!(fd.trace, BigInt::zero());
            assert_eq!(fd.charpoly, IntPoly::from_i64(&[3, 0, 1]));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        const FIELDS: [(u64, usize); 12] =
            [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (5, 2), (3, 3), (7, 2), (2, 5), (11, 2)];

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn count_matches_enumeration(which in 0..FIELDS.len(), seeds in prop::array::uniform5(any::<u64>())) {
                let (p, f) = FIELDS[which];
                let k = ResidueField::extension(p, f).unwrap();
                let q = k.size().unwrap();
                let a = seeds.map(|s| k.element(s % q));
                if let Some(c) = ReducedCurve::new(k, a) {
                    let n = count_points(&c, DEFAULT_COUNT_CAP).unwrap();
                    prop_assert_eq!(n, brute_count(&c));
                    let t = q as i64 + 1 - n as i64;
                    prop_assert!(t * t <= 4 * q as i64);
                }
            }

            #[test]
            fn twists_sum(which in 0..4usize, a4 in any::<u64>(), a6 in any::<u64>(), a2 in any::<u64>()) {
                let (p, f) = [(5u64, 1usize), (7, 1), (3, 2), (5, 2)][which];
                let k = ResidueField::extension(p, f).unwrap();
                let q = k.size().unwrap();
                let nonresidue = (1..q)
                    .map(|i| k.element(i))
                    .find(|d| k.pow(d, (q - 1) / 2) != k.one())
                    .unwrap();
                let (a2, a4, a6) = (k.element(a2 % q), k.element(a4 % q), k.element(a6 % q));
                let d = &nonresidue;
                let twist = [
                    k.zero(),
                    k.mul(d, &a2),
                    k.zero(),
                    k.mul(&k.square(d), &a4),
                    k.mul(&k.pow(d, 3), &a6),
                ];
                let base = [k.zero(), a2, k.zero(), a4, a6];
                if let (Some(c), Some(t)) = (ReducedCurve::new(k.clone(), base), ReducedCurve::new(k, twist)) {
                    prop_assert_eq!(
                        count_points(&c, DEFAULT_COUNT_CAP).unwrap() + count_points(&t, DEFAULT_COUNT_CAP).unwrap(),
                        2 * (q + 1)
                    );
                }
            }
        }
    }
}
