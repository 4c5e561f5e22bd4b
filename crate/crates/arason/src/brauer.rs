//! Places of Q, Hilbert symbols, quaternion Brauer classes, norm tests for
//! Q(sqrt(delta))/Q, and the 2-torsion of H^3(Q) with its coset spaces.
//!
//! Over Q the group of 2-torsion classes in H^3 is Z/2, detected at the
//! unique real place; everything downstream leans on that.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::BitXor;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{Rat, SquareClass};
use crate::error::{Error, Result};

/// A place of Q: the real place or a finite prime.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Place {
    Real,
    Finite(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "real"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Real => s.serialize_str("real"),
            Place::Finite(p) => s.serialize_u64(*p),
        }
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) if s == "real" => Ok(Place::Real),
            serde_json::Value::Number(n) => {
                let p = n
                    .as_u64()
                    .ok_or_else(|| D::Error::custom("prime expected"))?;
                Ok(Place::Finite(p))
            }
            _ => Err(D::Error::custom("place must be \"real\" or a prime")),
        }
    }
}

/// Jacobi symbol (a/n) for odd n >= 1. Returns 0 when gcd(a, n) > 1.
pub(crate) fn jacobi(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t: i8 = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// (u-1)/2 mod 2 for odd u given mod 4.
fn eps2(u: u64) -> u32 {
    if u % 4 == 3 {
        1
    } else {
        0
    }
}

/// (u^2-1)/8 mod 2 for odd u given mod 8.
fn omega2(u: u64) -> u32 {
    match u & 7 {
        1 | 7 => 0,
        _ => 1,
    }
}

/// Hilbert symbol on square classes by the closed-form local case analysis:
/// signs at the real place, quadratic residues at odd p, units mod 8 at 2.
pub fn hilbert_symbol_sc(a: &SquareClass, b: &SquareClass, v: Place) -> i8 {
    match v {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(2) => {
            let alpha = a.contains(2) as u32;
            let beta = b.contains(2) as u32;
            let u = a.odd_residue_mod8();
            let w = b.odd_residue_mod8();
            let e = eps2(u) * eps2(w) + alpha * omega2(w) + beta * omega2(u);
            if e % 2 == 1 {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) => {
            let alpha = a.contains(p);
            let beta = b.contains(p);
            let mut s: i8 = 1;
            if alpha && beta && p % 4 == 3 {
                s = -s; // (-1/p)^{alpha beta}
            }
            if beta {
                s *= jacobi(a.unit_residue_mod(p), p);
            }
            if alpha {
                s *= jacobi(b.unit_residue_mod(p), p);
            }
            s
        }
    }
}

/// Hilbert symbol of nonzero rationals at a place.
pub fn hilbert_symbol(a: &Rat, b: &Rat, v: Place) -> Result<i8> {
    Ok(hilbert_symbol_sc(
        &SquareClass::from_rat(a)?,
        &SquareClass::from_rat(b)?,
        v,
    ))
}

/// True when the square class `c` is a local square at `v`.
pub fn is_local_square(c: &SquareClass, v: Place) -> bool {
    match v {
        Place::Real => !c.is_negative(),
        Place::Finite(2) => !c.contains(2) && c.odd_residue_mod8() == 1,
        Place::Finite(p) => !c.contains(p) && jacobi(c.unit_residue_mod(p), p) == 1,
    }
}

/// The Brauer class of a quaternion algebra over Q, stored as its ramification
/// set of places. Hilbert reciprocity forces even cardinality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QuatClass {
    ramified: BTreeSet<Place>,
}

impl QuatClass {
    pub fn split() -> Self {
        QuatClass::default()
    }

    pub(crate) fn from_places(ramified: BTreeSet<Place>) -> Self {
        debug_assert!(ramified.len().is_multiple_of(2), "odd ramification set");
        QuatClass { ramified }
    }

    pub fn is_split(&self) -> bool {
        self.ramified.is_empty()
    }

    pub fn contains_real(&self) -> bool {
        self.ramified.contains(&Place::Real)
    }

    pub fn places(&self) -> impl Iterator<Item = Place> + '_ {
        self.ramified.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.ramified.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ramified.is_empty()
    }

    /// Product in the 2-torsion Brauer group: symmetric difference.
    pub fn mul(&self, other: &QuatClass) -> QuatClass {
        QuatClass {
            ramified: self
                .ramified
                .symmetric_difference(&other.ramified)
                .copied()
                .collect(),
        }
    }
}

impl fmt::Display for QuatClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.ramified.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for QuatClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.ramified.iter().collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuatClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let places: Vec<Place> = Vec::deserialize(d)?;
        let set: BTreeSet<Place> = places.into_iter().collect();
        if !set.len().is_multiple_of(2) {
            return Err(D::Error::custom(
                "ramification set must have even cardinality",
            ));
        }
        Ok(QuatClass { ramified: set })
    }
}

/// Candidate places outside which every symbol of `a`, `b` is +1.
fn candidate_places(a: &SquareClass, b: &SquareClass) -> BTreeSet<Place> {
    let mut c: BTreeSet<Place> = BTreeSet::new();
    c.insert(Place::Real);
    c.insert(Place::Finite(2));
    for p in a.primes().chain(b.primes()) {
        c.insert(Place::Finite(p));
    }
    c
}

/// Brauer class of the quaternion algebra (a, b) on square classes.
pub fn quat_class_sc(a: &SquareClass, b: &SquareClass) -> QuatClass {
    let ramified: BTreeSet<Place> = candidate_places(a, b)
        .into_iter()
        .filter(|&v| hilbert_symbol_sc(a, b, v) == -1)
        .collect();
    QuatClass::from_places(ramified)
}

/// Brauer class of the quaternion algebra (a, b) for nonzero rationals.
pub fn quat_class(a: &Rat, b: &Rat) -> Result<QuatClass> {
    Ok(quat_class_sc(
        &SquareClass::from_rat(a)?,
        &SquareClass::from_rat(b)?,
    ))
}

/// Norm test for Q(sqrt(delta))/Q: lambda is a norm iff (delta, lambda) splits.
/// The split-etale case delta = 1 is rejected.
pub fn is_norm_sc(lambda: &SquareClass, delta: &SquareClass) -> Result<bool> {
    if delta.is_one() {
        return Err(Error::SplitEtaleDelta);
    }
    Ok(quat_class_sc(delta, lambda).is_split())
}

pub fn is_norm(lambda: &Rat, delta: &SquareClass) -> Result<bool> {
    is_norm_sc(&SquareClass::from_rat(lambda)?, delta)
}

/// An element of the 2-torsion of H^3(Q), which is Z/2 detected at the real
/// place. The group law is XOR.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct H3Class {
    real_bit: bool,
}

impl H3Class {
    pub fn zero() -> Self {
        H3Class { real_bit: false }
    }

    pub fn new(real_bit: bool) -> Self {
        H3Class { real_bit }
    }

    pub fn is_zero(&self) -> bool {
        !self.real_bit
    }

    pub fn bit(&self) -> u8 {
        self.real_bit as u8
    }
}

impl BitXor for H3Class {
    type Output = H3Class;
    fn bitxor(self, rhs: H3Class) -> H3Class {
        H3Class {
            real_bit: self.real_bit != rhs.real_bit,
        }
    }
}

impl fmt::Display for H3Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

impl Serialize for H3Class {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.bit())
    }
}

impl<'de> Deserialize<'de> for H3Class {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(H3Class::zero()),
            1 => Ok(H3Class::new(true)),
            _ => Err(D::Error::custom("H3 class must be 0 or 1")),
        }
    }
}

/// Cup product (a, b, c) of three square classes in H^3(Q, mu_2): nonzero iff
/// all three slots are negative.
pub fn h3_symbol_sc(a: &SquareClass, b: &SquareClass, c: &SquareClass) -> H3Class {
    H3Class::new(a.is_negative() && b.is_negative() && c.is_negative())
}

pub fn h3_symbol(a: &Rat, b: &Rat, c: &Rat) -> Result<H3Class> {
    Ok(h3_symbol_sc(
        &SquareClass::from_rat(a)?,
        &SquareClass::from_rat(b)?,
        &SquareClass::from_rat(c)?,
    ))
}

/// Cup product (lambda).[A] in H^3(Q): nonzero iff lambda < 0 and A is
/// ramified at the real place.
pub fn h3_cup_sc(lambda: &SquareClass, a: &QuatClass) -> H3Class {
    H3Class::new(lambda.is_negative() && a.contains_real())
}

pub fn h3_cup(lambda: &Rat, a: &QuatClass) -> Result<H3Class> {
    Ok(h3_cup_sc(&SquareClass::from_rat(lambda)?, a))
}

/// A subgroup of the 2-torsion of H^3(Q): either {0} or all of Z/2.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct H3Subgroup {
    full: bool,
}

impl H3Subgroup {
    pub fn trivial() -> Self {
        H3Subgroup { full: false }
    }

    pub fn full() -> Self {
        H3Subgroup { full: true }
    }

    pub fn is_full(&self) -> bool {
        self.full
    }
}

impl Serialize for H3Subgroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(if self.full { "full" } else { "zero" })
    }
}

impl<'de> Deserialize<'de> for H3Subgroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "full" => Ok(H3Subgroup::full()),
            "zero" => Ok(H3Subgroup::trivial()),
            other => Err(D::Error::custom(format!("unknown subgroup {other:?}"))),
        }
    }
}

/// The subgroup Q^x . [A] of H^3(Q): all of Z/2 exactly when A is ramified at
/// the real place (lambda = -1 realizes the generator), else {0}.
pub fn subgroup_alpha(a: &QuatClass) -> H3Subgroup {
    if a.contains_real() {
        H3Subgroup::full()
    } else {
        H3Subgroup::trivial()
    }
}

/// The quotient H^3(Q) / (Q^x.[alpha] + cores(F'^x.[beta])) in which relative
/// invariants take values. Only split beta is in scope, so the corestriction
/// term is always zero and the modulus is determined by alpha alone.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CosetSpace {
    alpha: QuatClass,
    beta: BetaClass,
    modulus: H3Subgroup,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BetaClass; // split by scope

impl Serialize for BetaClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str("split")
    }
}

impl<'de> Deserialize<'de> for BetaClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "split" => Ok(BetaClass),
            other => Err(D::Error::custom(format!(
                "beta must be split, got {other:?}"
            ))),
        }
    }
}

impl CosetSpace {
    pub fn alpha(&self) -> &QuatClass {
        &self.alpha
    }

    pub fn modulus(&self) -> H3Subgroup {
        self.modulus
    }

    /// Human-readable descriptor recording which alpha and beta the space was
    /// built from.
    pub fn label(&self) -> String {
        format!("N3(alpha={}, beta=split)", self.alpha)
    }
}

/// Build the value space for a relative invariant with the given alpha; the
/// underlying algebra must be split (beta = 0) in this artifact.
pub fn coset_space(alpha: QuatClass, beta_split: bool) -> Result<CosetSpace> {
    if !beta_split {
        return Err(Error::NonSplitOutOfScope);
    }
    let modulus = subgroup_alpha(&alpha);
    Ok(CosetSpace {
        alpha,
        beta: BetaClass,
        modulus,
    })
}

/// A canonical coset representative in a [`CosetSpace`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Coset {
    repr: H3Class,
    space: CosetSpace,
}

impl Coset {
    pub fn repr(&self) -> H3Class {
        self.repr
    }

    pub fn space(&self) -> &CosetSpace {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }
}

/// Reduce a class modulo the space: the class itself when the modulus is {0},
/// otherwise the zero coset.
pub fn reduce(x: H3Class, space: &CosetSpace) -> Coset {
    let repr = if space.modulus.is_full() {
        H3Class::zero()
    } else {
        x
    };
    Coset {
        repr,
        space: space.clone(),
    }
}
