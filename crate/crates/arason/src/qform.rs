//! Witt theory of nondegenerate quadratic forms over Q.
//!
//! Everything is invariant-level: a form is classified by dimension, signed
//! discriminant, Hasse-Witt ramification set and real signature
//! (Hasse-Minkowski), and isotropy, Witt indices, isometry, similarity and
//! the invariants e1, e2, e3 are all decided from that profile. No isotropic
//! vectors are ever produced outside test oracles.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{Rat, SquareClass};
use crate::brauer::{
    h3_cup_sc, hilbert_symbol_sc, is_local_square, quat_class_sc, H3Class, Place, QuatClass,
};
use crate::error::{Error, Result};

/// Desk-scale bound on dimensions; larger forms are rejected.
pub const MAX_DIM: usize = 64;

/// A diagonal quadratic form over Q; entries are nonzero square classes.
/// The empty diagonal is the zero-dimensional form.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct QuadForm {
    diag: Vec<SquareClass>,
}

impl QuadForm {
    pub fn new(diag: Vec<SquareClass>) -> Result<Self> {
        if diag.len() > MAX_DIM {
            return Err(Error::DimensionTooLarge(diag.len()));
        }
        Ok(QuadForm { diag })
    }

    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        let diag = entries
            .iter()
            .map(|&n| SquareClass::from_integer(n))
            .collect::<Result<Vec<_>>>()?;
        QuadForm::new(diag)
    }

    pub fn zero_dimensional() -> Self {
        QuadForm { diag: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[SquareClass] {
        &self.diag
    }

    /// Orthogonal (diagonal) sum.
    pub fn dsum(&self, other: &QuadForm) -> Result<QuadForm> {
        let mut diag = self.diag.clone();
        diag.extend(other.diag.iter().cloned());
        QuadForm::new(diag)
    }

    /// Entrywise scaling by the square class of lambda.
    pub fn scale(&self, lambda: &SquareClass) -> QuadForm {
        QuadForm {
            diag: self.diag.iter().map(|a| a.mul(lambda)).collect(),
        }
    }

    pub fn scale_rat(&self, lambda: &Rat) -> Result<QuadForm> {
        Ok(self.scale(&SquareClass::from_rat(lambda)?))
    }

    /// Tensor product: for each entry b of `other`, the block b * self.
    pub fn tensor(&self, other: &QuadForm) -> Result<QuadForm> {
        let mut diag = Vec::with_capacity(self.dim() * other.dim());
        for b in &other.diag {
            for a in &self.diag {
                diag.push(a.mul(b));
            }
        }
        QuadForm::new(diag)
    }

    /// Entrywise negation.
    pub fn negated(&self) -> QuadForm {
        self.scale(&SquareClass::minus_one())
    }

    pub fn signature(&self) -> i64 {
        self.diag
            .iter()
            .map(|a| if a.is_negative() { -1 } else { 1 })
            .sum()
    }

    /// The complete isometry invariant over Q.
    pub fn profile(&self) -> InvariantProfile {
        let n = self.dim();
        let mut disc = if (n * n.saturating_sub(1) / 2) % 2 == 1 {
            SquareClass::minus_one()
        } else {
            SquareClass::one()
        };
        for a in &self.diag {
            disc = disc.mul(a);
        }
        let mut places: BTreeSet<Place> = BTreeSet::new();
        places.insert(Place::Real);
        places.insert(Place::Finite(2));
        for a in &self.diag {
            for p in a.primes() {
                places.insert(Place::Finite(p));
            }
        }
        let mut hasse = BTreeSet::new();
        for &v in &places {
            let mut s: i8 = 1;
            for i in 0..n {
                for j in (i + 1)..n {
                    s *= hilbert_symbol_sc(&self.diag[i], &self.diag[j], v);
                }
            }
            if s == -1 {
                hasse.insert(v);
            }
        }
        debug_assert!(hasse.len() % 2 == 0, "Hasse set violates reciprocity");
        InvariantProfile {
            dim: n,
            disc,
            hasse,
            signature: self.signature(),
        }
    }

    /// True iff the form represents zero nontrivially over Q, by the local
    /// criteria at the real place and the finitely many relevant primes.
    pub fn is_isotropic(&self) -> bool {
        self.profile().is_isotropic()
    }

    /// Number of hyperbolic planes split off by Witt decomposition.
    pub fn witt_index(&self) -> usize {
        self.profile().witt_index()
    }

    pub fn is_hyperbolic(&self) -> bool {
        2 * self.witt_index() == self.dim()
    }

    /// Isometry over Q: equality of profiles (Hasse-Minkowski).
    pub fn is_isometric(&self, other: &QuadForm) -> bool {
        self.profile() == other.profile()
    }

    /// Similarity: a witness lambda with lambda*self isometric to `other`,
    /// when one exists. The witness is post-verified before returning.
    pub fn is_similar(&self, other: &QuadForm) -> Option<SquareClass> {
        let lam = similarity_witness(&self.profile(), &other.profile())?;
        debug_assert!(self.scale(&lam).is_isometric(other));
        Some(lam)
    }

    /// Membership of the Witt class in the fundamental-ideal power I^n.
    pub fn in_ideal(&self, n: u8) -> Result<bool> {
        assert!(
            (1..=4).contains(&n),
            "I^n membership implemented for n in 1..=4"
        );
        let p = self.profile();
        if !p.dim.is_multiple_of(2) {
            return Ok(false);
        }
        if n == 1 {
            return Ok(true);
        }
        if !p.disc.is_one() {
            return Ok(false);
        }
        if n == 2 {
            return Ok(true);
        }
        if !p.clifford_invariant().is_split() {
            return Ok(false);
        }
        if n == 3 {
            return Ok(true);
        }
        Ok(p.e3_bit().is_zero())
    }

    /// Signed discriminant; defined on even-dimensional forms.
    pub fn e1(&self) -> Result<SquareClass> {
        if !self.dim().is_multiple_of(2) {
            return Err(Error::NotInIdeal {
                level: 1,
                obstruction: "odd dimension",
            });
        }
        Ok(self.profile().disc)
    }

    /// Clifford (Witt) invariant as a quaternion class; needs trivial e1.
    pub fn e2(&self) -> Result<QuatClass> {
        let p = self.profile();
        if !p.dim.is_multiple_of(2) {
            return Err(Error::NotInIdeal {
                level: 2,
                obstruction: "odd dimension",
            });
        }
        if !p.disc.is_one() {
            return Err(Error::NotInIdeal {
                level: 2,
                obstruction: "nontrivial discriminant",
            });
        }
        Ok(p.clifford_invariant())
    }

    /// Arason invariant; needs Witt class in I^3. Over Q it is detected at
    /// the real place as (signature / 8) mod 2.
    pub fn e3(&self) -> Result<H3Class> {
        let p = self.profile();
        if !p.dim.is_multiple_of(2) {
            return Err(Error::NotInIdeal {
                level: 3,
                obstruction: "odd dimension",
            });
        }
        if !p.disc.is_one() {
            return Err(Error::NotInIdeal {
                level: 3,
                obstruction: "nontrivial discriminant",
            });
        }
        if !p.clifford_invariant().is_split() {
            return Err(Error::NotInIdeal {
                level: 3,
                obstruction: "nontrivial Clifford invariant",
            });
        }
        Ok(p.e3_bit())
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, a) in self.diag.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ">")
    }
}

/// The Hasse-Minkowski classification data of a form: these four fields
/// determine the isometry class over Q.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub dim: usize,
    /// Signed discriminant (-1)^{n(n-1)/2} * det.
    pub disc: SquareClass,
    /// Places where the Hasse-Witt invariant prod_{i<j}(a_i,a_j)_v is -1.
    pub hasse: BTreeSet<Place>,
    pub signature: i64,
}

impl InvariantProfile {
    pub fn hasse_sign(&self, v: Place) -> i8 {
        if self.hasse.contains(&v) {
            -1
        } else {
            1
        }
    }

    /// The dimension-correction quaternion class relating the Hasse invariant
    /// to the Witt (Clifford) invariant, by the standard case analysis mod 8.
    /// The case analysis runs on the raw determinant, which differs from the
    /// signed discriminant by the sign (-1)^{n(n-1)/2}.
    fn witt_correction(dim: usize, disc: &SquareClass) -> QuatClass {
        let m1 = SquareClass::minus_one();
        let det = if (dim * dim.saturating_sub(1) / 2) % 2 == 1 {
            disc.mul(&m1)
        } else {
            disc.clone()
        };
        match dim % 8 {
            1 | 2 => QuatClass::split(),
            3 | 4 => quat_class_sc(&m1, &m1.mul(&det)),
            5 | 6 => quat_class_sc(&m1, &m1),
            _ => quat_class_sc(&m1, &det),
        }
    }

    /// Witt-class (Clifford) invariant: constant on Witt classes, equal to the
    /// Brauer class of the full Clifford algebra for classes in I^2.
    pub fn clifford_invariant(&self) -> QuatClass {
        let s = QuatClass::from_places(self.hasse.iter().copied().collect());
        s.mul(&Self::witt_correction(self.dim, &self.disc))
    }

    fn e3_bit(&self) -> H3Class {
        debug_assert!(
            self.signature.rem_euclid(8) == 0,
            "I^3 signature must be divisible by 8"
        );
        H3Class::new((self.signature / 8).rem_euclid(2) == 1)
    }

    /// Hasse sign at `v` of a form with this Witt class in dimension `m`.
    fn hasse_sign_at_dim(witt: &QuatClass, m: usize, disc: &SquareClass, v: Place) -> i8 {
        let corr = Self::witt_correction(m, disc);
        let ram = witt.mul(&corr);
        if ram.places().any(|w| w == v) {
            -1
        } else {
            1
        }
    }

    /// Local isotropy decision for a(n abstract) form of dimension m with the
    /// given invariants; `hasse_at` supplies the Hasse sign at each place.
    fn isotropic_with(
        m: usize,
        disc: &SquareClass,
        signature: i64,
        hasse_at: impl Fn(Place) -> i8,
        finite_candidates: &BTreeSet<Place>,
    ) -> bool {
        match m {
            0 | 1 => false,
            2 => disc.is_one(),
            3 => {
                // real place: anisotropic iff |signature| = 3
                if signature.unsigned_abs() as usize >= 3 {
                    return false;
                }
                // finite v: isotropic iff s_v = (-1, disc)_v
                let m1 = SquareClass::minus_one();
                finite_candidates
                    .iter()
                    .all(|&v| hasse_at(v) == hilbert_symbol_sc(&m1, disc, v))
            }
            4 => {
                if signature.unsigned_abs() as usize >= 4 {
                    return false;
                }
                // finite v: anisotropic iff disc is a local square and
                // s_v = -(-1,-1)_v
                let m1 = SquareClass::minus_one();
                finite_candidates.iter().all(|&v| {
                    !(is_local_square(disc, v)
                        && hasse_at(v) * hilbert_symbol_sc(&m1, &m1, v) == -1)
                })
            }
            _ => (signature.unsigned_abs() as usize) < m,
        }
    }

    fn finite_candidates(&self) -> BTreeSet<Place> {
        let mut c: BTreeSet<Place> = BTreeSet::new();
        c.insert(Place::Finite(2));
        for p in self.disc.primes() {
            c.insert(Place::Finite(p));
        }
        for &v in &self.hasse {
            if let Place::Finite(p) = v {
                c.insert(Place::Finite(p));
            }
        }
        c
    }

    pub fn is_isotropic(&self) -> bool {
        Self::isotropic_with(
            self.dim,
            &self.disc,
            self.signature,
            |v| self.hasse_sign(v),
            &self.finite_candidates(),
        )
    }

    /// Witt index from the profile alone: split hyperbolic planes one at a
    /// time, holding the Witt-class invariants (disc, Clifford, signature)
    /// fixed and recomputing the Hasse sign at each intermediate dimension.
    pub fn witt_index(&self) -> usize {
        let witt = self.clifford_invariant();
        let mut candidates = self.finite_candidates();
        for v in witt.places() {
            if let Place::Finite(_) = v {
                candidates.insert(v);
            }
        }
        candidates.insert(Place::Finite(2));
        let mut m = self.dim;
        let mut index = 0;
        while m >= 2 {
            let isotropic = Self::isotropic_with(
                m,
                &self.disc,
                self.signature,
                |v| Self::hasse_sign_at_dim(&witt, m, &self.disc, v),
                &candidates,
            );
            if !isotropic {
                break;
            }
            m -= 2;
            index += 1;
        }
        index
    }
}

/// Profile of `scale(q, lambda)` computed from the profile of q by the change
/// formula s_v(lambda q) = s_v(q) * (lambda, (-1)^{n(n-1)/2} det^{n-1})_v.
pub(crate) fn scaled_profile(p: &InvariantProfile, lambda: &SquareClass) -> InvariantProfile {
    let n = p.dim;
    let k_odd = (n * n.saturating_sub(1) / 2) % 2 == 1;
    let det = if k_odd {
        p.disc.mul(&SquareClass::minus_one())
    } else {
        p.disc.clone()
    };
    // multiplier m with factor (lambda, m)_v
    let mut mult = SquareClass::one();
    if k_odd {
        mult = mult.mul(&SquareClass::minus_one());
    }
    if (n.saturating_sub(1)) % 2 == 1 {
        mult = mult.mul(&det);
    }
    let factor = quat_class_sc(lambda, &mult);
    let mut places: BTreeSet<Place> = p.hasse.clone();
    for v in factor.places() {
        places.insert(v);
    }
    let mut hasse = BTreeSet::new();
    for &v in &places {
        let flip = factor.places().any(|w| w == v);
        let s = p.hasse_sign(v) * if flip { -1 } else { 1 };
        if s == -1 {
            hasse.insert(v);
        }
    }
    let disc = if n % 2 == 1 {
        p.disc.mul(lambda)
    } else {
        p.disc.clone()
    };
    let signature = if lambda.is_negative() {
        -p.signature
    } else {
        p.signature
    };
    InvariantProfile {
        dim: n,
        disc,
        hasse,
        signature,
    }
}

fn primes_up_to(bound: u64) -> impl Iterator<Item = u64> {
    (2..=bound).filter(|&n| crate::arith::is_prime(n))
}

/// Similarity decision on profiles. For odd dimension the scalar is forced by
/// the discriminants; for even dimension the Hasse-change constraints
/// (lambda, disc)_v = eps_v are solved by enumerating signed squarefree
/// candidates over the constraint primes, with at most one auxiliary prime
/// found by scanning (the constraints are congruence conditions, so a
/// suitable prime exists and is small).
fn similarity_witness(p: &InvariantProfile, q: &InvariantProfile) -> Option<SquareClass> {
    if p.dim != q.dim {
        return None;
    }
    if p.dim == 0 {
        return Some(SquareClass::one());
    }
    if p.dim % 2 == 1 {
        let lam = p.disc.mul(&q.disc);
        if &scaled_profile(p, &lam) == q {
            return Some(lam);
        }
        return None;
    }
    // even dimension
    if p.disc != q.disc {
        return None;
    }
    let negs: &[bool] = match (p.signature, q.signature) {
        (0, 0) => &[false, true],
        (a, b) if a == b => &[false],
        (a, b) if a == -b => &[true],
        _ => return None,
    };
    let eps: BTreeSet<Place> = p.hasse.symmetric_difference(&q.hasse).copied().collect();
    // obstruction: wherever eps_v = -1 the class disc must not be a local
    // square, otherwise (lambda, disc)_v is +1 for every lambda
    for &v in &eps {
        if is_local_square(&p.disc, v) {
            return None;
        }
    }
    // sign consistency at the real place
    let eps_real = eps.contains(&Place::Real);
    let allowed: Vec<bool> = negs
        .iter()
        .copied()
        .filter(|&neg| {
            let sym = if neg && p.disc.is_negative() { -1 } else { 1 };
            (sym == -1) == eps_real
        })
        .collect();
    if allowed.is_empty() {
        return None;
    }
    // candidate support: 2, primes of disc, finite eps places
    let mut pool: BTreeSet<u64> = BTreeSet::new();
    pool.insert(2);
    pool.extend(p.disc.primes());
    for &v in &eps {
        if let Place::Finite(pr) = v {
            pool.insert(pr);
        }
    }
    let pool: Vec<u64> = pool.into_iter().collect();
    if pool.len() > 20 {
        return None; // out of desk scale
    }
    let build = |neg: bool, mask: usize, extra: Option<u64>| -> SquareClass {
        let mut c = if neg {
            SquareClass::minus_one()
        } else {
            SquareClass::one()
        };
        for (i, &pr) in pool.iter().enumerate() {
            if mask & (1 << i) != 0 {
                c = c.mul(&SquareClass::from_integer(pr as i64).expect("prime"));
            }
        }
        if let Some(l) = extra {
            c = c.mul(&SquareClass::from_integer(l as i64).expect("prime"));
        }
        c
    };
    for &neg in &allowed {
        for mask in 0..(1usize << pool.len()) {
            let lam = build(neg, mask, None);
            if &scaled_profile(p, &lam) == q {
                return Some(lam);
            }
        }
    }
    // one auxiliary prime outside the pool; its own constraint place needs
    // (lambda, disc)_ell = +1, i.e. disc a square mod ell
    for ell in primes_up_to(100_000) {
        if pool.contains(&ell) || !is_local_square(&p.disc, Place::Finite(ell)) {
            continue;
        }
        for &neg in &allowed {
            for mask in 0..(1usize << pool.len()) {
                let lam = build(neg, mask, Some(ell));
                if &scaled_profile(p, &lam) == q {
                    return Some(lam);
                }
            }
        }
    }
    None
}

/// The n-fold Pfister form <<a_1, ..., a_n>> = tensor of <1, -a_i>.
pub fn pfister(slots: &[SquareClass]) -> Result<QuadForm> {
    let mut q = QuadForm::new(vec![SquareClass::one()])?;
    for a in slots {
        let factor = QuadForm::new(vec![SquareClass::one(), a.mul(&SquareClass::minus_one())])?;
        q = factor.tensor(&q)?;
    }
    Ok(q)
}

pub fn pfister_rats(slots: &[Rat]) -> Result<QuadForm> {
    let classes = slots
        .iter()
        .map(SquareClass::from_rat)
        .collect::<Result<Vec<_>>>()?;
    pfister(&classes)
}

/// Outcome of Pfister-similarity recognition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PfisterOutcome {
    /// Similar to the Pfister form with these slots (witness verified).
    Similar(Vec<SquareClass>),
    /// The invariant-level decision is positive but no witness was recovered
    /// from the candidate set; flagged rather than silently dropped.
    WitnessNotFound,
    /// Not similar to any n-fold Pfister form.
    NotSimilar,
}

/// Decide whether a form of dimension 2^n is similar to an n-fold Pfister
/// form (n = 3 or 4) and recover witness slots.
///
/// Over Q a dimension-8 class in I^3 is always similar to a 3-fold Pfister
/// form, and e3 classifies those, so the witness is <<1,1,1>> or
/// <<-1,-1,-1>>; likewise in dimension 16 with e3 = 0 the signature (0 or
/// +/-16) pins the witness.
pub fn pfister_similar(q: &QuadForm, n: u8) -> Result<PfisterOutcome> {
    let expected = match n {
        3 => 8,
        4 => 16,
        _ => panic!("pfister_similar implemented for n in {{3,4}}"),
    };
    if q.dim() != expected {
        return Err(Error::WrongDimension {
            expected,
            got: q.dim(),
        });
    }
    if !q.in_ideal(n)? {
        return Ok(PfisterOutcome::NotSimilar);
    }
    let slot = |v: i64| SquareClass::from_integer(v).expect("unit");
    let slots: Vec<SquareClass> = if n == 3 {
        if q.e3()?.is_zero() {
            vec![slot(1); 3]
        } else {
            vec![slot(-1); 3]
        }
    } else if q.signature() == 0 {
        vec![slot(1); 4]
    } else {
        vec![slot(-1); 4]
    };
    let cand = pfister(&slots)?;
    if q.is_similar(&cand).is_some() {
        return Ok(PfisterOutcome::Similar(slots));
    }
    Ok(PfisterOutcome::WitnessNotFound)
}

/// Relative invariant of two odd-dimensional forms with isomorphic even
/// Clifford algebras: e3 of phi0 - <disc(phi0) disc(phi)> phi. Independent of
/// rescaling either input.
pub fn orth_rel_odd(phi0: &QuadForm, phi: &QuadForm) -> Result<H3Class> {
    if phi0.dim() != phi.dim() {
        return Err(Error::DimensionMismatch(phi0.dim(), phi.dim()));
    }
    if phi0.dim().is_multiple_of(2) || phi0.dim() < 5 {
        return Err(Error::WrongDimension {
            expected: 5,
            got: phi0.dim(),
        });
    }
    let lam = phi0.profile().disc.mul(&phi.profile().disc);
    let psi = phi0.dsum(&phi.scale(&lam).negated())?;
    if !psi.in_ideal(3)? {
        return Err(Error::CliffordMismatch);
    }
    psi.e3()
}

/// e3 of a scaled Pfister multiple: (delta) . e2(psi) for psi in I^2, used by
/// descent formulas. Exposed for cross-checks.
pub fn cup_with_clifford(delta: &SquareClass, psi: &QuadForm) -> Result<H3Class> {
    Ok(h3_cup_sc(delta, &psi.e2()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;
    use crate::brauer::h3_symbol_sc;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sc(n: i64) -> SquareClass {
        SquareClass::from_integer(n).unwrap()
    }

    fn qf(entries: &[i64]) -> QuadForm {
        QuadForm::from_ints(entries).unwrap()
    }

    /// Brute-force rational-point oracle for ternary forms: reduce to pairwise
    /// coprime squarefree coefficients (similarity preserves isotropy), then
    /// search the box given by Holzer's bound.
    pub(crate) fn ternary_isotropic_oracle(a: i64, b: i64, c: i64) -> bool {
        crate::lab::ternary_isotropic_bruteforce(a, b, c)
    }

    #[test]
    fn profile_examples() {
        let p = qf(&[1, -1]).profile();
        assert_eq!(p.dim, 2);
        assert!(p.disc.is_one());
        assert!(p.hasse.is_empty());
        assert_eq!(p.signature, 0);

        let p = qf(&[1, 1, 1]).profile();
        assert_eq!(p.signature, 3);
        assert_eq!(p.disc, sc(-1));

        // derived directly from the symbol case analysis; evenness checked
        let p = qf(&[2, 3]).profile();
        assert_eq!(p.disc, sc(-6));
        assert_eq!(
            p.hasse.iter().copied().collect::<Vec<_>>(),
            vec![Place::Finite(2), Place::Finite(3)]
        );
        assert_eq!(p.signature, 2);
    }

    #[test]
    fn isotropy_examples() {
        assert!(qf(&[1, -1]).is_isotropic());
        assert!(!qf(&[1, 1, 1, 1]).is_isotropic());
        // anisotropic at 3: x^2 + y^2 = 3 z^2 has no solution
        assert!(!qf(&[1, 1, -3]).is_isotropic());
        assert!(!ternary_isotropic_oracle(1, 1, -3));
    }

    #[test]
    fn isotropy_matches_bruteforce_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..400 {
            let mut e = [0i64; 3];
            for x in &mut e {
                *x = (rng.gen_range(1..=30)) * if rng.gen() { 1 } else { -1 };
            }
            let q = qf(&e);
            let sf: Vec<i64> = q.diag().iter().map(|c| c.to_i64().unwrap()).collect();
            assert_eq!(
                q.is_isotropic(),
                ternary_isotropic_oracle(sf[0], sf[1], sf[2]),
                "{e:?}"
            );
        }
    }

    #[test]
    fn witt_index_examples() {
        assert_eq!(qf(&[1, -1, 1, -1]).witt_index(), 2);
        assert!(qf(&[1, -1, 1, -1]).is_hyperbolic());
        assert_eq!(qf(&[2, 3, 5, 7]).witt_index(), 0);
        // x^2+y^2+z^2 = 7 w^2 fails at the dyadic place (-7 is a 2-adic
        // square), so this form is anisotropic; its Witt index is 0
        assert_eq!(qf(&[1, 1, 1, -7]).witt_index(), 0);
        // indefinite quaternary with nonsquare dyadic discriminant
        assert_eq!(qf(&[1, 1, 1, -17]).witt_index(), 1);
    }

    #[test]
    fn quaternary_isotropy_never_misses_small_zeros() {
        // one-directional oracle: whenever a bounded search finds a rational
        // zero of a quaternary form, the local criteria must agree
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let mut witnessed = 0;
        for _ in 0..300 {
            let e: Vec<i64> = (0..4)
                .map(|_| rng.gen_range(1..25) * if rng.gen() { 1 } else { -1 })
                .collect();
            let mut found = false;
            'search: for x in 0..=12i64 {
                for y in 0..=12i64 {
                    for z in 0..=12i64 {
                        for w in 0..=12i64 {
                            if (x, y, z, w) == (0, 0, 0, 0) {
                                continue;
                            }
                            // signs of the variables are absorbed by squares
                            if e[0] * x * x + e[1] * y * y + e[2] * z * z + e[3] * w * w == 0 {
                                found = true;
                                break 'search;
                            }
                        }
                    }
                }
            }
            if found {
                witnessed += 1;
                assert!(QuadForm::from_ints(&e).unwrap().is_isotropic(), "{e:?}");
            }
        }
        assert!(witnessed > 50, "search box too small to be meaningful");
    }

    #[test]
    fn witt_index_properties() {
        // index 0 iff anisotropic; adding a hyperbolic plane adds one; the
        // difference q - q is fully hyperbolic
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        let hyp = qf(&[1, -1]);
        for _ in 0..400 {
            let dim = rng.gen_range(1..9);
            let entries: Vec<i64> = (0..dim)
                .map(|_| rng.gen_range(1..40) * if rng.gen() { 1 } else { -1 })
                .collect();
            let q = qf(&entries);
            let w = q.witt_index();
            assert_eq!(w >= 1, q.is_isotropic(), "{entries:?}");
            assert_eq!(q.dsum(&hyp).unwrap().witt_index(), w + 1, "{entries:?}");
            assert_eq!(
                q.dsum(&q.negated()).unwrap().witt_index(),
                q.dim(),
                "{entries:?}"
            );
        }
    }

    #[test]
    fn isometry_examples() {
        let q = qf(&[3, -5, 7, 2]);
        let mut perm = q.clone();
        perm = QuadForm::new({
            let mut d = perm.diag().to_vec();
            d.reverse();
            d
        })
        .unwrap();
        assert!(q.is_isometric(&perm));
        // <1,1> and <2,2>: same dim, disc, Hasse sets, signature
        assert!(qf(&[1, 1]).is_isometric(&qf(&[2, 2])));
        assert!(!qf(&[1, 1]).is_isometric(&qf(&[1, -1])));
    }

    #[test]
    fn isometry_under_chain_equivalence() {
        // random chain moves <a,b> -> <a + b t^2, ab(a + b t^2)> preserve the
        // form; profiles must stay equal, and mismatched profiles must differ
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..1000 {
            let dim = rng.gen_range(2..6);
            let entries: Vec<i64> = (0..dim)
                .map(|_| rng.gen_range(1..40) * if rng.gen() { 1 } else { -1 })
                .collect();
            let q = qf(&entries);
            let mut moved: Vec<Rat> = entries.iter().map(|&e| rat_int(e)).collect();
            for _ in 0..4 {
                let i = rng.gen_range(0..dim);
                let mut j = rng.gen_range(0..dim);
                if i == j {
                    j = (j + 1) % dim;
                }
                if i == j {
                    continue;
                }
                let t = rat_int(rng.gen_range(1..5));
                let c = moved[i].clone() + moved[j].clone() * t.clone() * t;
                if c == rat_int(0) {
                    continue;
                }
                let det = moved[i].clone() * moved[j].clone();
                let big = det.clone() * c.clone();
                if num_traits::Signed::abs(big.numer()) > num_bigint::BigInt::from(1_000_000_000i64)
                {
                    continue; // keep the move chain desk-scale
                }
                moved[i] = c;
                moved[j] = big;
                // squarefree reduction of every entry is an isometry
                for e in moved.iter_mut() {
                    *e = SquareClass::from_rat(e).unwrap().to_rat();
                }
                // also multiply a random entry by a square
                let k = rng.gen_range(0..dim);
                let s = rat_int(rng.gen_range(1..6));
                moved[k] = moved[k].clone() * s.clone() * s;
            }
            moved.shuffle(&mut rng);
            let q2 = QuadForm::new(
                moved
                    .iter()
                    .map(|r| SquareClass::from_rat(r).unwrap())
                    .collect(),
            )
            .unwrap();
            assert!(q.is_isometric(&q2), "{entries:?}");
        }
    }

    #[test]
    fn similarity_examples() {
        let q = qf(&[1, 5, -7, 3]);
        let scaled = q.scale(&sc(-3));
        let w = q.is_similar(&scaled).expect("constructed similar pair");
        assert!(q.scale(&w).is_isometric(&scaled));
        assert!(qf(&[1, 1]).is_similar(&qf(&[1, -1])).is_none());
        assert_eq!(q.is_similar(&q), Some(SquareClass::one()));
    }

    #[test]
    fn similarity_relation_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..150 {
            let dim = rng.gen_range(1..6);
            let entries: Vec<i64> = (0..dim)
                .map(|_| rng.gen_range(1..25) * if rng.gen() { 1 } else { -1 })
                .collect();
            let q = qf(&entries);
            let lam = sc(rng.gen_range(1..20) * if rng.gen() { 1 } else { -1 });
            let q2 = q.scale(&lam);
            // reflexive / symmetric with inverse witness / transitive
            let w = q.is_similar(&q2).expect("similar by construction");
            assert!(q.scale(&w).is_isometric(&q2));
            let back = q2.is_similar(&q).expect("symmetric");
            assert!(q2.scale(&back).is_isometric(&q));
            let mu = sc(rng.gen_range(1..20) * if rng.gen() { 1 } else { -1 });
            let q3 = q2.scale(&mu);
            let w13 = q.is_similar(&q3).expect("transitive");
            assert!(q.scale(&w13).is_isometric(&q3));
        }
    }

    #[test]
    fn scaled_profile_matches_direct_computation() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..300 {
            let dim = rng.gen_range(1..7);
            let entries: Vec<i64> = (0..dim)
                .map(|_| rng.gen_range(1..50) * if rng.gen() { 1 } else { -1 })
                .collect();
            let q = qf(&entries);
            let lam = sc(rng.gen_range(1..30) * if rng.gen() { 1 } else { -1 });
            assert_eq!(scaled_profile(&q.profile(), &lam), q.scale(&lam).profile());
        }
    }

    #[test]
    fn ideal_membership_examples() {
        let hyp = qf(&[1, -1, 2, -2, 3, -3]);
        for n in 1..=4 {
            assert!(hyp.in_ideal(n).unwrap());
        }
        let pf = pfister(&[sc(2), sc(-3), sc(5)]).unwrap();
        assert!(pf.in_ideal(3).unwrap());
        let neg = pfister(&[sc(-1), sc(-1), sc(-1)]).unwrap();
        assert!(neg.in_ideal(3).unwrap());
        assert!(!neg.in_ideal(4).unwrap());
    }

    #[test]
    fn e_invariants_examples() {
        assert!(qf(&[1, -1, 2, -2]).e3().unwrap().is_zero());
        // e3 of <<-1,-1,-1>> generates: signature 8
        let neg = pfister(&[sc(-1), sc(-1), sc(-1)]).unwrap();
        assert_eq!(neg.e3().unwrap().bit(), 1);
        assert!(qf(&[1, 1, 1]).e1().is_err());
        assert!(qf(&[1, 3]).e2().is_err());
    }

    #[test]
    fn e3_additive_and_scale_invariant_on_i3() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let pool: [i64; 8] = [-1, 1, 2, -2, 3, -3, 5, -5];
        for _ in 0..200 {
            let mk = |rng: &mut ChaCha8Rng| {
                let s: Vec<SquareClass> = (0..3)
                    .map(|_| sc(pool[rng.gen_range(0..pool.len())]))
                    .collect();
                pfister(&s).unwrap()
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let sum = a.dsum(&b).unwrap();
            assert_eq!(sum.e3().unwrap(), a.e3().unwrap() ^ b.e3().unwrap());
            let lam = sc(pool[rng.gen_range(0..pool.len())]);
            assert_eq!(a.scale(&lam).e3().unwrap(), a.e3().unwrap());
        }
    }

    #[test]
    fn e3_matches_symbol_on_pfister_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..300 {
            let s: Vec<SquareClass> = (0..3)
                .map(|_| sc(rng.gen_range(1..40) * if rng.gen() { 1 } else { -1 }))
                .collect();
            let q = pfister(&s).unwrap();
            assert_eq!(q.e3().unwrap(), h3_symbol_sc(&s[0], &s[1], &s[2]));
        }
    }

    #[test]
    fn arason_pfister_bound() {
        // every anisotropic class in I^3 we can generate has dimension >= 8
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for _ in 0..100 {
            let s: Vec<SquareClass> = (0..3)
                .map(|_| sc(rng.gen_range(1..20) * if rng.gen() { 1 } else { -1 }))
                .collect();
            let q = pfister(&s).unwrap();
            let anis_dim = q.dim() - 2 * q.witt_index();
            assert!(anis_dim == 0 || anis_dim >= 8);
        }
    }

    #[test]
    fn pfister_expansion() {
        assert!(pfister(&[sc(1)]).unwrap().is_isometric(&qf(&[1, -1])));
        assert!(pfister(&[sc(-1), sc(-1)])
            .unwrap()
            .is_isometric(&qf(&[1, 1, 1, 1])));
        assert_eq!(pfister(&[sc(-1), sc(2), sc(3), sc(7)]).unwrap().dim(), 16);
    }

    #[test]
    fn form_algebra() {
        let q = qf(&[1, 2, -3]);
        let h = q.dsum(&q.negated()).unwrap();
        assert!(h.is_hyperbolic());
        assert_eq!(q.scale(&sc(9 * 5)), q.scale(&sc(5)));
        let t = qf(&[1, 3]).tensor(&qf(&[2])).unwrap();
        assert!(t.is_isometric(&qf(&[2, 6])));
    }

    #[test]
    fn pfister_similar_recognition() {
        // hyperbolic dimension 8
        let hyp = qf(&[1, -1, 1, -1, 1, -1, 1, -1]);
        match pfister_similar(&hyp, 3).unwrap() {
            PfisterOutcome::Similar(s) => assert!(s.iter().all(|c| c.is_one())),
            other => panic!("expected similar, got {other:?}"),
        }
        // scaled definite 3-fold Pfister form
        let neg = pfister(&[sc(-1), sc(-1), sc(-1)]).unwrap().scale(&sc(5));
        match pfister_similar(&neg, 3).unwrap() {
            PfisterOutcome::Similar(s) => assert!(s.iter().all(|c| c == &sc(-1))),
            other => panic!("expected similar, got {other:?}"),
        }
        // dimension 16 with e3 = 1 is not similar to a 4-fold Pfister form
        let mut blocked = pfister(&[sc(-1), sc(-1), sc(-1)]).unwrap();
        blocked = blocked.dsum(&qf(&[1, -1, 1, -1, 1, -1, 1, -1])).unwrap();
        assert_eq!(
            pfister_similar(&blocked, 4).unwrap(),
            PfisterOutcome::NotSimilar
        );
    }

    #[test]
    fn orth_rel_odd_examples() {
        let phi = qf(&[1, 1, 1, 1, 1]);
        assert!(orth_rel_odd(&phi, &phi).unwrap().is_zero());
        assert!(orth_rel_odd(&phi, &phi.scale(&sc(4))).unwrap().is_zero());
        // rescaling either input leaves the value unchanged
        let psi = qf(&[1, 1, 1, 2, 2]);
        if let Ok(v) = orth_rel_odd(&phi, &psi) {
            let v2 = orth_rel_odd(&phi.scale(&sc(-3)), &psi.scale(&sc(7))).unwrap();
            assert_eq!(v, v2);
        }
        assert!(orth_rel_odd(&qf(&[1, 1, 1]), &qf(&[1, 1, 1])).is_err());
    }
}
