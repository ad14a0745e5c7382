use super::{AlgebraicInteger, FieldDescriptor};
use crate::arith::BigInt;
use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Nonzero integral ideal as an upper-triangular column Hermite normal form
/// over the integral basis: column `j` has nonzero entries only in rows
/// `0..=j`, positive diagonal, and `0 <= h[i][j] < h[i][i]` for `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealHNF {
    /// Row-major `d x d` matrix; the columns form a Z-basis.
    rows: Vec<Vec<BigInt>>,
}

impl IdealHNF {
    /// HNF of the lattice spanned by `generators` (each a coordinate vector
    /// of length `d`). Fails if the generators do not span a full-rank lattice.
    pub fn from_generators(d: usize, generators: &[Vec<BigInt>]) -> Result<Self> {
        let rows = hnf(d, generators)
            .ok_or_else(|| Error::invalid("generators do not span a full-rank lattice"))?;
        Ok(IdealHNF { rows })
    }

    /// The ring of integers itself.
    pub fn unit(d: usize) -> Self {
        let mut rows = vec![vec![BigInt::zero(); d]; d];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        IdealHNF { rows }
    }

    /// Principal ideal `a O_K`.
    pub fn from_element(field: &FieldDescriptor, a: &AlgebraicInteger) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::invalid("principal ideal of zero"));
        }
        let m = field.mul_matrix(a);
        let d = field.degree();
        let cols: Vec<Vec<BigInt>> = (0..d).map(|j| (0..d).map(|i| m[i][j].clone()).collect()).collect();
        Self::from_generators(d, &cols)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        let d = self.dim();
        (0..d)
            .map(|j| (0..d).map(|i| self.rows[i][j].clone()).collect())
            .collect()
    }

    /// Index in the ring of integers: the determinant of the HNF.
    pub fn norm(&self) -> BigInt {
        (0..self.dim()).map(|i| self.rows[i][i].clone()).product()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Ideal sum `I + J`, i.e. the gcd of the two ideals.
    pub fn gcd(&self, other: &IdealHNF) -> IdealHNF {
        let mut cols = self.columns();
        cols.extend(other.columns());
        IdealHNF {
            rows: hnf(self.dim(), &cols).expect("sum of full-rank lattices is full rank"),
        }
    }

    /// Lattice membership by back substitution.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let d = self.dim();
        let mut v = v.to_vec();
        for i in (0..d).rev() {
            let (q, r) = v[i].div_rem(&self.rows[i][i]);
            if !r.is_zero() {
                return false;
            }
            if q.is_zero() {
                continue;
            }
            for (k, vk) in v.iter_mut().enumerate().take(i + 1) {
                *vk -= &q * &self.rows[k][i];
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn contains_element(&self, a: &AlgebraicInteger) -> bool {
        self.contains(a.coords())
    }

    /// Whether the lattice is closed under multiplication by every basis
    /// element, i.e. really is an ideal.
    pub fn is_ideal_of(&self, field: &FieldDescriptor) -> bool {
        let d = self.dim();
        self.columns().iter().all(|col| {
            let a = AlgebraicInteger(col.clone());
            (0..d).all(|i| {
                let mut e = field.zero();
                e.0[i] = BigInt::one();
                self.contains_element(&field.mul(&a, &e))
            })
        })
    }
}

impl fmt::Display for IdealHNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Upper-triangular column HNF of the lattice spanned by `generators`.
fn hnf(d: usize, generators: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let mut pool: Vec<Vec<BigInt>> = generators
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut cols: Vec<Vec<BigInt>> = vec![Vec::new(); d];
    for i in (0..d).rev() {
        // Euclid on row i across the pool.
        loop {
            let mut nonzero: Vec<usize> = (0..pool.len()).filter(|&k| !pool[k][i].is_zero()).collect();
            if nonzero.is_empty() {
                return None;
            }
            nonzero.sort_by(|&a, &b| pool[a][i].abs().cmp(&pool[b][i].abs()));
            let piv = nonzero[0];
            if nonzero.len() == 1 {
                let mut v = pool.swap_remove(piv);
                if v[i].is_negative() {
                    for x in v.iter_mut() {
                        *x = -&*x;
                    }
                }
                cols[i] = v;
                break;
            }
            let pivot = pool[piv].clone();
            for &k in &nonzero[1..] {
                let q = pool[k][i].div_floor(&pivot[i]);
                for (x, p) in pool[k].iter_mut().zip(&pivot) {
                    *x -= &q * p;
                }
            }
        }
        pool.retain(|v| v.iter().any(|x| !x.is_zero()));
    }
    // Reduce entries above the diagonal.
    for j in 0..d {
        for i in (0..j).rev() {
            let q = cols[j][i].div_floor(&cols[i][i]);
            if q.is_zero() {
                continue;
            }
            let ci = cols[i].clone();
            for (x, c) in cols[j].iter_mut().zip(&ci) {
                *x -= &q * c;
            }
        }
    }
    Some((0..d).map(|r| (0..d).map(|c| cols[c][r].clone()).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_field::make_quadratic_field;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rational_integer_ideal() {
        let k = make_quadratic_field(13, 1).unwrap();
        let six = IdealHNF::from_element(&k, &k.from_int(&6.into())).unwrap();
        assert_eq!(six.rows(), &[ints(&[6, 0]), ints(&[0, 6])]);
        assert_eq!(six.norm(), BigInt::from(36));
    }

    #[test]
    fn gcd_of_six_and_ten_is_two() {
        let k = make_quadratic_field(13, 1).unwrap();
        let six = IdealHNF::from_element(&k, &k.from_int(&6.into())).unwrap();
        let ten = IdealHNF::from_element(&k, &k.from_int(&10.into())).unwrap();
        let g = six.gcd(&ten);
        assert_eq!(g.rows(), &[ints(&[2, 0]), ints(&[0, 2])]);
        assert_eq!(g.norm(), BigInt::from(4));
        let unit = IdealHNF::unit(2);
        assert_eq!(g.gcd(&unit), unit);
        assert_eq!(unit.norm(), BigInt::one());
    }

    #[test]
    fn unit_ideal_from_unit() {
        let k = make_quadratic_field(13, 1).unwrap();
        let eps = AlgebraicInteger::from_i64(&[1, 1]);
        assert!(IdealHNF::from_element(&k, &eps).unwrap().is_unit());
        assert!(IdealHNF::from_element(&k, &k.zero()).is_err());
    }

    #[test]
    fn unit_power_minus_one() {
        let k = make_quadratic_field(13, 1).unwrap();
        let eps = AlgebraicInteger::from_i64(&[1, 1]);
        let a = k.sub(&k.pow(&eps, 12), &k.one());
        let i = IdealHNF::from_element(&k, &a).unwrap();
        assert_eq!(i.norm(), BigInt::from(1684800));
        assert!(i.is_ideal_of(&k));
        assert!(i.contains_element(&a));
        assert!(!i.contains_element(&k.one()));
    }

    #[test]
    fn hnf_shape() {
        let h = hnf(2, &[ints(&[4, 6]), ints(&[3, 9])]).unwrap();
        // Lattice spanned by (4,6),(3,9): det = 18.
        assert_eq!(&h[0][0] * &h[1][1], BigInt::from(18));
        assert!(h[1][0].is_zero());
        assert!(h[0][1] < h[0][0] && !h[0][1].is_negative());
        assert!(hnf(2, &[ints(&[1, 2]), ints(&[2, 4])]).is_none());
    }
}
