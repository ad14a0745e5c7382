//! Unit-group bases: fundamental units of real quadratic fields from the
//! continued fraction of the generator, and certification of user-supplied
//! unit lists in higher degree.

use crate::arith::BigInt;
use crate::error::{Error, Result};
use crate::interval::{Interval, PREC};
use crate::number_field::{qpoly, AlgebraicInteger, FieldDescriptor};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

const PERIOD_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Computed,
    UserSupplied,
}

/// `d - 1` multiplicatively independent units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitBasis {
    pub units: Vec<AlgebraicInteger>,
    pub provenance: Provenance,
    /// Certified enclosure of the regulator-type determinant, as decimal text.
    pub regulator: String,
}

/// Fundamental unit `> 1` of `Q(sqrt D)`, in coordinates over the basis
/// `(1, theta)` used by [`crate::number_field::make_quadratic_field`].
///
/// Walks the continued fraction of `theta` and returns the first convergent
/// `p/q` with `p - q theta` a unit, mapped to its conjugate `p - q theta'`.
pub fn fundamental_unit_quadratic(d: i64) -> Result<AlgebraicInteger> {
    if d <= 1 {
        return Err(Error::invalid(format!("quadratic parameter {d} must exceed 1")));
    }
    let one_mod_four = d.mod_floor(&4) == 1;
    let (trace, norm) = if one_mod_four {
        (BigInt::one(), BigInt::from((1 - d) / 4))
    } else {
        (BigInt::zero(), BigInt::from(-d))
    };
    let s = (d as i128).sqrt();
    if s * s == d as i128 {
        return Err(Error::invalid(format!("{d} is a perfect square")));
    }
    let dd = d as i128;
    // theta = (P + sqrt D)/Q.
    let (mut pp, mut qq): (i128, i128) = if one_mod_four { (1, 2) } else { (0, 1) };
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    for _ in 0..PERIOD_CAP {
        let a = Integer::div_floor(&(pp + s), &qq);
        let a_big = BigInt::from(a);
        let p_next = &a_big * &p_cur + &p_prev;
        let q_next = &a_big * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);

        let n = &p_cur * &p_cur - &p_cur * &q_cur * &trace + &q_cur * &q_cur * &norm;
        if n.abs().is_one() {
            return Ok(AlgebraicInteger(vec![&p_cur - &q_cur * &trace, q_cur]));
        }

        pp = a * qq - pp;
        qq = (dd - pp * pp) / qq;
    }
    Err(Error::SizeCap(format!(
        "continued fraction of the quadratic generator for D = {d} exceeded {PERIOD_CAP} steps"
    )))
}

/// Check that `units` are units and that their logarithmic embedding matrix
/// has a determinant certifiably bounded away from zero.
pub fn verify_unit_basis(
    field: &FieldDescriptor,
    units: Vec<AlgebraicInteger>,
    provenance: Provenance,
) -> Result<UnitBasis> {
    let d = field.degree();
    if units.len() + 1 != d {
        return Err(Error::invalid(format!(
            "unit basis needs {} elements, got {}",
            d.saturating_sub(1),
            units.len()
        )));
    }
    for (index, u) in units.iter().enumerate() {
        if u.coords().len() != d {
            return Err(Error::invalid(format!(
                "unit {index} has {} coordinates, expected {d}",
                u.coords().len()
            )));
        }
        let n = field.norm(u);
        if !n.abs().is_one() {
            return Err(Error::NotAUnit {
                index,
                norm: n.to_string(),
            });
        }
    }
    if units.is_empty() {
        return Ok(UnitBasis {
            units,
            provenance,
            regulator: "1".into(),
        });
    }

    let f = qpoly::from_ints(field.min_poly().coeffs());
    let roots = qpoly::isolate_real_roots(&f, PREC as u32 + 16);
    if roots.len() != d {
        return Err(Error::Verification(format!(
            "minimal polynomial has {} real roots, expected {d}",
            roots.len()
        )));
    }
    let embeddings: Vec<Interval> = roots
        .iter()
        .take(d - 1)
        .map(|(lo, hi)| Interval::from_rationals(lo, hi))
        .collect();
    let mut matrix = Vec::with_capacity(units.len());
    for u in &units {
        let power = field.to_power_basis(u);
        let mut row = Vec::with_capacity(d - 1);
        for theta in &embeddings {
            let value = power
                .iter()
                .rev()
                .fold(Interval::from_integer(&BigInt::zero()), |acc, c| {
                    acc.mul(theta).add(&Interval::from_rational(c))
                });
            let log = value.abs().ln().ok_or_else(|| Error::PossiblyDependent {
                det: "unresolved".into(),
                bound: "embedding not separated from zero".into(),
            })?;
            row.push(log);
        }
        matrix.push(row);
    }
    let det = interval_det(&matrix);
    let (mid, radius) = det.midpoint_radius();
    if mid.abs() < &radius * 2 || det.contains_zero() {
        return Err(Error::PossiblyDependent {
            det: Interval::describe(&mid),
            bound: Interval::describe(&(radius * 2)),
        });
    }
    Ok(UnitBasis {
        units,
        provenance,
        regulator: Interval::describe(&mid.abs()),
    })
}

fn interval_det(m: &[Vec<Interval>]) -> Interval {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Interval::from_integer(&BigInt::zero());
    for col in 0..n {
        let minor: Vec<Vec<Interval>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != col)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = m[0][col].mul(&interval_det(&minor));
        acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}
