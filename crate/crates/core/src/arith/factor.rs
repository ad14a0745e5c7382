use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

const TRIAL_LIMIT: u32 = 1_000_000;

/// Bases 2..=41 make Miller-Rabin deterministic below this bound.
const DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;
const WITNESSES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const EXTRA_ROUNDS: usize = 64;

/// Complete factorization `sign * prod p^e` of a nonzero integer.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pub negative: bool,
    pub factors: BTreeMap<BigInt, u32>,
    /// Primes that only passed the probabilistic test.
    pub probable: BTreeSet<BigInt>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.keys()
    }

    pub fn value(&self) -> BigInt {
        let mut v = BigInt::one();
        for (p, &e) in &self.factors {
            for _ in 0..e {
                v *= p;
            }
        }
        if self.negative {
            -v
        } else {
            v
        }
    }

    /// `p1^e1*p2^e2*...` of the absolute value; `1` when empty.
    pub fn render(&self) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        self.factors
            .iter()
            .map(|(p, &e)| {
                if e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    fn insert(&mut self, p: BigInt, probable: bool) {
        if probable {
            self.probable.insert(p.clone());
        }
        *self.factors.entry(p).or_insert(0) += 1;
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        write!(f, "{}", self.render())
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        sieve
            .iter()
            .enumerate()
            .filter(|(_, &is_p)| is_p)
            .map(|(i, _)| i as u32)
            .collect()
    })
}

/// Factor a nonzero integer: trial division to 10^6, then Brent's variant of
/// Pollard rho on whatever cofactor remains.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::invalid("cannot factor zero"));
    }
    let mut out = Factorization {
        negative: n.sign() == Sign::Minus,
        ..Default::default()
    };
    let mut rest = n.magnitude().clone();
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            out.insert(BigInt::from(p), false);
            rest = q;
        }
    }
    if rest.is_one() {
        return Ok(out);
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        match primality(&m) {
            Primality::Prime => out.insert(BigInt::from(m), false),
            Primality::Probable => out.insert(BigInt::from(m), true),
            Primality::Composite => {
                let d = brent_split(&m);
                let q = &m / &d;
                stack.push(d);
                stack.push(q);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, PartialEq, Eq)]
enum Primality {
    Prime,
    Probable,
    Composite,
}

/// True when `n` is prime (deterministically below ~3.3e24, with 64 extra
/// random Miller-Rabin rounds above).
pub fn is_probable_prime(n: &BigInt) -> bool {
    n.sign() == Sign::Plus && primality(n.magnitude()) != Primality::Composite
}

fn primality(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return Primality::Composite;
        }
        for &p in &WITNESSES {
            if small == p as u64 {
                return Primality::Prime;
            }
            if small % p as u64 == 0 {
                return Primality::Composite;
            }
        }
    } else if WITNESSES.iter().any(|&p| (n % p).is_zero()) {
        return Primality::Composite;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let strong_witness = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };
    if WITNESSES.iter().any(|&a| strong_witness(&BigUint::from(a))) {
        return Primality::Composite;
    }
    if n.to_u128().is_some_and(|v| v < DETERMINISTIC_BOUND) {
        return Primality::Prime;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let bits = n.bits();
    for _ in 0..EXTRA_ROUNDS {
        let a = random_below(&mut rng, n, bits);
        if a < BigUint::from(2u32) {
            continue;
        }
        if strong_witness(&a) {
            return Primality::Composite;
        }
    }
    Primality::Probable
}

fn random_below(rng: &mut ChaCha8Rng, n: &BigUint, bits: u64) -> BigUint {
    let words = bits.div_ceil(32) as usize;
    let digits: Vec<u32> = (0..words).map(|_| rng.gen()).collect();
    BigUint::from_slice(&digits) % n
}

/// Nontrivial divisor of an odd composite `n` with no small factors.
fn brent_split(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let block = 128u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..block.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += block;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fac(n: i128) -> Factorization {
        factorize(&BigInt::from(n)).unwrap()
    }

    fn pairs(f: &Factorization) -> Vec<(i128, u32)> {
        f.factors
            .iter()
            .map(|(p, &e)| (p.to_i128().unwrap(), e))
            .collect()
    }

    #[test]
    fn norm_of_unit_power() {
        let f = fac(1684800);
        assert_eq!(pairs(&f), vec![(2, 6), (3, 4), (5, 2), (13, 1)]);
        assert_eq!(f.render(), "2^6*3^4*5^2*13");
        let neg = fac(-1684800);
        assert!(neg.negative);
        assert_eq!(neg.to_string(), "-2^6*3^4*5^2*13");
    }

    #[test]
    fn auxiliary_value_at_three() {
        assert_eq!(pairs(&fac(532800)), vec![(2, 6), (3, 2), (5, 2), (37, 1)]);
    }

    #[test]
    fn trivial_inputs() {
        let one = fac(1);
        assert!(one.factors.is_empty());
        assert!(!one.negative);
        assert_eq!(one.render(), "1");
        assert!(factorize(&BigInt::zero()).is_err());
        assert_eq!(pairs(&fac(-1)), vec![]);
    }

    #[test]
    fn large_semiprimes_use_rho() {
        // Both factors lie above the trial-division limit.
        let p: i128 = 1_000_003;
        let q: i128 = 998_244_353;
        let f = fac(p * q);
        assert_eq!(pairs(&f), vec![(p, 1), (q, 1)]);
        let f = fac(1470626929934143021);
        assert_eq!(pairs(&f), vec![(1206429347, 1), (1218991343, 1)]);
        let f = fac(1_000_003i128 * 1_000_003 * 1_000_033);
        assert_eq!(pairs(&f), vec![(1_000_003, 2), (1_000_033, 1)]);
    }

    #[test]
    fn primality_edges() {
        for p in [2i64, 3, 5, 41, 43, 1_000_003, 2_147_483_647] {
            assert!(is_probable_prime(&BigInt::from(p)), "{p}");
        }
        for c in [0i64, 1, 4, 561, 1_000_001, 3_215_031_751] {
            assert!(!is_probable_prime(&BigInt::from(c)), "{c}");
        }
        assert!(!is_probable_prime(&BigInt::from(-7)));
        // 2^89 - 1 is a Mersenne prime above the deterministic bound.
        let m89 = (BigInt::one() << 89) - 1;
        assert!(is_probable_prime(&m89));
        let f = factorize(&m89).unwrap();
        assert!(f.probable.contains(&m89));
    }

    #[test]
    fn roundtrip_products() {
        for n in [2i128, 97, 360, 244140624, 244140624 * 244140624, 600851475143] {
            assert_eq!(fac(n).value(), BigInt::from(n));
            assert_eq!(fac(-n).value(), BigInt::from(-n));
        }
    }
}
