use super::{small_prime, AlgebraicInteger, FieldDescriptor, IdealHNF};
use crate::arith::{is_probable_prime, BigInt};
use crate::error::{Error, Result};
use crate::finite_field::{factor, inv_mod, FpPoly, ResidueField, ResidueFieldElement};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use std::fmt;

/// Prime ideal `(ell, g(theta))` above a rational prime not dividing the index.
#[derive(Debug, Clone)]
pub struct PrimeIdeal {
    ell: u64,
    generator: FpPoly,
    residue_degree: usize,
    ramification: u32,
    ideal: IdealHNF,
    residue_field: ResidueField,
    /// Images of the integral basis in the residue field.
    basis_images: Vec<ResidueFieldElement>,
}

impl PrimeIdeal {
    pub fn characteristic(&self) -> u64 {
        self.ell
    }

    /// Local generator `g` with the prime equal to `(ell, g(theta))`.
    pub fn generator(&self) -> &FpPoly {
        &self.generator
    }

    pub fn residue_degree(&self) -> usize {
        self.residue_degree
    }

    pub fn ramification_index(&self) -> u32 {
        self.ramification
    }

    pub fn ideal(&self) -> &IdealHNF {
        &self.ideal
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.residue_field
    }

    /// `ell^f`.
    pub fn norm(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.ell), self.residue_degree)
    }

    /// Human-readable label such as `(3, theta + 2)`.
    pub fn label(&self) -> String {
        format!("({}, {})", self.ell, render_fp(&self.generator))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn render_fp(g: &FpPoly) -> String {
    let mut parts = Vec::new();
    for (i, &c) in g.coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "theta".to_string(),
            _ => format!("theta^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Factor `ell O_K` into prime ideals via the factorization of the minimal
/// polynomial modulo `ell` (Kummer-Dedekind). Primes dividing the index
/// `[O_K : Z[theta]]` are refused.
pub fn split_prime(field: &FieldDescriptor, ell: u64) -> Result<Vec<PrimeIdeal>> {
    let ell_big = BigInt::from(ell);
    if !is_probable_prime(&ell_big) {
        return Err(Error::invalid(format!("{ell} is not prime")));
    }
    small_prime(&ell_big)?;
    if field.index().is_multiple_of(&ell_big) {
        return Err(Error::UnsupportedPrime {
            ell,
            reason: format!("divides the index [O_K : Z[theta]] = {}", field.index()),
        });
    }
    let d = field.degree();
    let f = FpPoly::new(
        field
            .min_poly()
            .coeffs()
            .iter()
            .map(|c| c.mod_floor(&ell_big).to_u64().unwrap())
            .collect(),
        ell,
    );
    let mut primes = Vec::new();
    for (g, e) in factor(&f, ell) {
        let gen_power: Vec<_> = g
            .coeffs
            .iter()
            .map(|&c| num_rational::BigRational::from_integer(BigInt::from(c)))
            .collect();
        let g_elem = field
            .from_power_basis(&gen_power)
            .expect("Z[theta] lies in the ring of integers");
        let mut gens: Vec<Vec<BigInt>> = (0..d)
            .map(|j| {
                let mut v = vec![BigInt::zero(); d];
                v[j] = ell_big.clone();
                v
            })
            .collect();
        let m = field.mul_matrix(&g_elem);
        gens.extend((0..d).map(|j| (0..d).map(|i| m[i][j].clone()).collect::<Vec<_>>()));
        let ideal = IdealHNF::from_generators(d, &gens)?;
        let residue_degree = g.degree().unwrap_or(0);
        let residue_field = ResidueField::new(ell, g.clone())?;
        let basis_images = field
            .basis()
            .iter()
            .map(|w| reduce_rational_poly(w, ell, &residue_field))
            .collect();
        let prime = PrimeIdeal {
            ell,
            generator: g,
            residue_degree,
            ramification: e,
            ideal,
            residue_field,
            basis_images,
        };
        debug_assert_eq!(prime.ideal.norm(), prime.norm());
        primes.push(prime);
    }
    Ok(primes)
}

/// Reduce a rational polynomial in `theta` (denominators prime to `ell`)
/// into the residue field.
fn reduce_rational_poly(
    p: &[num_rational::BigRational],
    ell: u64,
    k: &ResidueField,
) -> ResidueFieldElement {
    let ell_big = BigInt::from(ell);
    let coeffs: Vec<u64> = p
        .iter()
        .map(|c| {
            let num = c.numer().mod_floor(&ell_big).to_u64().unwrap();
            let den = c.denom().mod_floor(&ell_big).to_u64().unwrap();
            (num as u128 * inv_mod(den, ell) as u128 % ell as u128) as u64
        })
        .collect();
    k.from_poly(&FpPoly::new(coeffs, ell))
}

/// Reduction `O_K -> O_K / q`.
pub fn residue_map(a: &AlgebraicInteger, q: &PrimeIdeal) -> ResidueFieldElement {
    let k = &q.residue_field;
    let ell = BigInt::from(q.ell);
    let mut acc = k.zero();
    for (c, img) in a.coords().iter().zip(&q.basis_images) {
        let c = c.mod_floor(&ell).to_u64().unwrap();
        if c != 0 {
            acc = k.add(&acc, &k.scale(img, c));
        }
    }
    acc
}
