//! Exact integer and rational arithmetic: factorization, deterministic
//! primality, and the square-class group Q^x/Q^x2.
//!
//! A [`SquareClass`] is stored as a sign bit plus the set of primes dividing
//! the squarefree representative; the group law is sign product and symmetric
//! difference of prime sets, so no value ever grows under multiplication.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar. Always reduced, denominator positive.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for integers viewed as rationals.
pub fn rat_int(num: i64) -> Rat {
    Rat::from(BigInt::from(num))
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1u64;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, n);
        }
        a = mulmod(a, a, n);
        e >>= 1;
    }
    acc
}

/// Witness set valid deterministically for all n < 3.3e24, hence for u64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in MR_BASES.iter() {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Brent-cycle Pollard rho; `n` must be odd, composite and > 1.
fn pollard_rho(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

const TRIAL_BOUND: u64 = 1_000_000;

/// Factor a positive integer into primes with multiplicity, sorted ascending.
///
/// Trial division up to 10^6, then Pollard rho on what remains; inputs are
/// desk-scale by contract so nothing heavier is ever needed.
pub fn factorize(n: u64) -> Vec<u64> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    let mut m = n;
    while m.is_multiple_of(2) {
        out.push(2);
        m /= 2;
    }
    let mut d = 3u64;
    while d <= TRIAL_BOUND && d * d <= m {
        while m.is_multiple_of(d) {
            out.push(d);
            m /= d;
        }
        d += 2;
    }
    if m > 1 {
        let mut stack = vec![m];
        while let Some(v) = stack.pop() {
            if is_prime(v) {
                out.push(v);
            } else {
                let f = pollard_rho(v);
                stack.push(f);
                stack.push(v / f);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Factor an arbitrary-precision positive integer (error beyond u64 range).
pub fn factorize_big(n: &BigUint) -> Result<Vec<u64>> {
    let v = n.to_u64().ok_or(Error::Overflow)?;
    if v == 0 {
        return Err(Error::ZeroValue);
    }
    Ok(factorize(v))
}

/// An element of Q^x/Q^x2: a sign together with the set of primes dividing
/// the squarefree representative. The class of 1 is the empty set with
/// positive sign.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    negative: bool,
    primes: BTreeSet<u64>,
}

impl SquareClass {
    pub fn one() -> Self {
        SquareClass {
            negative: false,
            primes: BTreeSet::new(),
        }
    }

    pub fn minus_one() -> Self {
        SquareClass {
            negative: true,
            primes: BTreeSet::new(),
        }
    }

    /// Class of a nonzero integer.
    pub fn from_integer(n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroValue);
        }
        let mut primes = BTreeSet::new();
        for chunk in factorize(n.unsigned_abs()).chunk_by(|a, b| a == b) {
            if chunk.len() % 2 == 1 {
                primes.insert(chunk[0]);
            }
        }
        Ok(SquareClass {
            negative: n < 0,
            primes,
        })
    }

    /// Class of a nonzero rational: primes of odd total valuation.
    pub fn from_rat(r: &Rat) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::ZeroValue);
        }
        let num = r.numer().abs().to_biguint().expect("abs");
        let den = r.denom().abs().to_biguint().expect("abs");
        let mut primes = BTreeSet::new();
        for f in factorize_big(&num)?.into_iter().chain(factorize_big(&den)?) {
            // symmetric difference accumulates odd multiplicity
            if !primes.remove(&f) {
                primes.insert(f);
            }
        }
        Ok(SquareClass {
            negative: r.numer().is_negative(),
            primes,
        })
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.primes.is_empty()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.contains(&p)
    }

    /// Group law: signs multiply, prime sets take symmetric difference.
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        let primes = self
            .primes
            .symmetric_difference(&other.primes)
            .copied()
            .collect();
        SquareClass {
            negative: self.negative != other.negative,
            primes,
        }
    }

    /// The squarefree integer representative.
    pub fn representative(&self) -> BigInt {
        let mut n = BigInt::from(if self.negative { -1 } else { 1 });
        for &p in &self.primes {
            n *= BigInt::from(p);
        }
        n
    }

    pub fn to_rat(&self) -> Rat {
        Rat::from(self.representative())
    }

    /// Representative as i64 (errors when the squarefree product overflows).
    pub fn to_i64(&self) -> Result<i64> {
        let mut n: i128 = if self.negative { -1 } else { 1 };
        for &p in &self.primes {
            n = n.checked_mul(p as i128).ok_or(Error::Overflow)?;
            if n.unsigned_abs() > i64::MAX as u128 {
                return Err(Error::Overflow);
            }
        }
        Ok(n as i64)
    }

    /// Residue mod an odd prime `p` of the unit part (the representative with
    /// any factor of p removed). Always coprime to p.
    pub(crate) fn unit_residue_mod(&self, p: u64) -> u64 {
        debug_assert!(p % 2 == 1);
        let mut r: u64 = if self.negative { p - 1 } else { 1 };
        for &q in &self.primes {
            if q != p {
                r = mulmod(r, q % p, p);
            }
        }
        r
    }

    /// The odd part of the representative reduced mod 8 (one of 1,3,5,7).
    pub(crate) fn odd_residue_mod8(&self) -> u64 {
        let mut r: u64 = if self.negative { 7 } else { 1 };
        for &q in &self.primes {
            if q != 2 {
                r = (r * (q & 7)) & 7;
            }
        }
        r
    }
}

impl fmt::Debug for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SquareClass({})", self.representative())
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative())
    }
}

impl Serialize for SquareClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self
            .to_i64()
            .map_err(|e| serde::ser::Error::custom(e.to_string()))?;
        serializer.serialize_i64(v)
    }
}

impl<'de> Deserialize<'de> for SquareClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(deserializer)?;
        SquareClass::from_integer(v).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Free-function form: the square class of a nonzero rational.
pub fn square_class(r: &Rat) -> Result<SquareClass> {
    SquareClass::from_rat(r)
}

/// Free-function form of the group law.
pub fn sc_mul(a: &SquareClass, b: &SquareClass) -> SquareClass {
    a.mul(b)
}
