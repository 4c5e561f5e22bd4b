//! Hermitian forms over a quadratic extension Q(sqrt(delta)) with its
//! conjugation, studied entirely through their trace forms: the trace form
//! <1,-delta> (x) <a_1,...,a_n> determines the isometry class of the
//! hermitian form, so every decision procedure transfers to `qform`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::SquareClass;
use crate::brauer::{is_norm_sc, quat_class_sc, QuatClass};
use crate::error::{Error, Result};
use crate::qform::QuadForm;

/// The quadratic extension (Q(sqrt(delta)), conjugation). The split-etale
/// case delta = 1 is rejected: every unitary involution there is hyperbolic
/// and the norm theory degenerates.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HermContext {
    delta: SquareClass,
}

impl HermContext {
    pub fn new(delta: SquareClass) -> Result<Self> {
        if delta.is_one() {
            return Err(Error::SplitEtaleDelta);
        }
        Ok(HermContext { delta })
    }

    pub fn from_int(delta: i64) -> Result<Self> {
        HermContext::new(SquareClass::from_integer(delta)?)
    }

    pub fn delta(&self) -> &SquareClass {
        &self.delta
    }
}

/// A diagonal hermitian form over (Q(sqrt(delta)), conjugation). Entries are
/// square classes of Q^x; two entries describe the same hermitian diagonal
/// entry when they differ by a norm, which is tested lazily at comparison
/// time rather than canonicalized.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HermForm {
    ctx: HermContext,
    diag: Vec<SquareClass>,
}

/// Rank cap keeping trace forms inside the qform dimension bound.
pub const MAX_RANK: usize = 32;

impl HermForm {
    pub fn new(ctx: HermContext, diag: Vec<SquareClass>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::WrongDimension {
                expected: 1,
                got: 0,
            });
        }
        if diag.len() > MAX_RANK {
            return Err(Error::DimensionTooLarge(diag.len()));
        }
        Ok(HermForm { ctx, diag })
    }

    pub fn from_ints(delta: i64, entries: &[i64]) -> Result<Self> {
        let ctx = HermContext::from_int(delta)?;
        let diag = entries
            .iter()
            .map(|&n| SquareClass::from_integer(n))
            .collect::<Result<Vec<_>>>()?;
        HermForm::new(ctx, diag)
    }

    pub fn ctx(&self) -> &HermContext {
        &self.ctx
    }

    pub fn delta(&self) -> &SquareClass {
        &self.ctx.delta
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[SquareClass] {
        &self.diag
    }

    fn check_ctx(&self, other: &HermForm) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// The trace form <1,-delta> (x) <a_1, ..., a_n> over Q.
    pub fn trace_form(&self) -> QuadForm {
        let delta_factor = QuadForm::new(vec![
            SquareClass::one(),
            self.ctx.delta.mul(&SquareClass::minus_one()),
        ])
        .expect("dimension 2");
        let diag = QuadForm::new(self.diag.clone()).expect("rank cap");
        delta_factor.tensor(&diag).expect("rank cap")
    }

    /// Discriminant (-1)^{n(n-1)/2} a_1...a_n, compared modulo norms.
    pub fn disc(&self) -> NormClass {
        let n = self.rank();
        let mut d = if (n * (n - 1) / 2) % 2 == 1 {
            SquareClass::minus_one()
        } else {
            SquareClass::one()
        };
        for a in &self.diag {
            d = d.mul(a);
        }
        NormClass {
            repr: d,
            delta: self.ctx.delta.clone(),
        }
    }

    /// Brauer class (delta, disc) of the discriminant algebra of the adjoint
    /// involution; defined in even rank.
    pub fn disc_algebra(&self) -> Result<QuatClass> {
        if !self.rank().is_multiple_of(2) {
            return Err(Error::OddRank(self.rank()));
        }
        Ok(quat_class_sc(&self.ctx.delta, &self.disc().repr))
    }

    /// Isometry: the trace form determines the hermitian isometry class.
    pub fn is_isometric(&self, other: &HermForm) -> Result<bool> {
        self.check_ctx(other)?;
        Ok(self.trace_form().is_isometric(&other.trace_form()))
    }

    /// Similarity with an explicit scalar witness from Q^x. Any trace-form
    /// similarity factor works on the hermitian side (scaling commutes with
    /// the trace), but the witness is post-verified and a mismatch is
    /// reported as a distinct diagnostic rather than a silent failure.
    pub fn similarity(&self, other: &HermForm) -> Result<SimilarityOutcome> {
        self.check_ctx(other)?;
        if self.rank() != other.rank() {
            return Ok(SimilarityOutcome::NotSimilar);
        }
        match self.trace_form().is_similar(&other.trace_form()) {
            None => Ok(SimilarityOutcome::NotSimilar),
            Some(lam) => {
                if self.scale(&lam).is_isometric(other)? {
                    Ok(SimilarityOutcome::Witness(lam))
                } else {
                    Ok(SimilarityOutcome::QuadraticOnly)
                }
            }
        }
    }

    pub fn is_similar(&self, other: &HermForm) -> Result<Option<SquareClass>> {
        Ok(match self.similarity(other)? {
            SimilarityOutcome::Witness(l) => Some(l),
            _ => None,
        })
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace_form().is_hyperbolic()
    }

    /// Hermitian Witt index; the trace of a hyperbolic hermitian plane is two
    /// hyperbolic planes.
    pub fn witt_index(&self) -> usize {
        self.trace_form().witt_index() / 2
    }

    pub fn scale(&self, lambda: &SquareClass) -> HermForm {
        HermForm {
            ctx: self.ctx.clone(),
            diag: self.diag.iter().map(|a| a.mul(lambda)).collect(),
        }
    }
}

impl fmt::Display for HermForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "herm(delta={}; <", self.ctx.delta)?;
        for (i, a) in self.diag.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ">)")
    }
}

/// Result of a hermitian similarity query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimilarityOutcome {
    Witness(SquareClass),
    /// Trace forms are similar but the found factor failed hermitian
    /// post-verification. Should not occur; kept as an explicit diagnostic.
    QuadraticOnly,
    NotSimilar,
}

/// An element of Q^x / N(Q(sqrt(delta))^x), held as a square-class
/// representative; equality is decided by the norm test on the ratio.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormClass {
    pub repr: SquareClass,
    pub delta: SquareClass,
}

impl NormClass {
    pub fn is_trivial(&self) -> bool {
        is_norm_sc(&self.repr, &self.delta).expect("context excludes delta = 1")
    }
}

impl PartialEq for NormClass {
    fn eq(&self, other: &Self) -> bool {
        self.delta == other.delta
            && is_norm_sc(&self.repr.mul(&other.repr), &self.delta)
                .expect("context excludes delta = 1")
    }
}

impl Eq for NormClass {}

/// Diagonal of the orthogonal sum h0 | <-lambda> h, the hermitian form behind
/// the orthogonal sum of two adjoint involutions.
pub fn orth_sum_theta(h0: &HermForm, h: &HermForm, lambda: &SquareClass) -> Result<HermForm> {
    if h0.ctx != h.ctx {
        return Err(Error::ContextMismatch);
    }
    let neg_lambda = lambda.mul(&SquareClass::minus_one());
    let mut diag = h0.diag.clone();
    diag.extend(h.diag.iter().map(|a| a.mul(&neg_lambda)));
    HermForm::new(h0.ctx.clone(), diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;
    use crate::qform::QuadForm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sc(n: i64) -> SquareClass {
        SquareClass::from_integer(n).unwrap()
    }

    fn herm(delta: i64, entries: &[i64]) -> HermForm {
        HermForm::from_ints(delta, entries).unwrap()
    }

    #[test]
    fn context_rejects_squares() {
        assert!(HermContext::from_int(1).is_err());
        assert!(HermContext::from_int(4).is_err());
        assert!(HermContext::from_int(-1).is_ok());
    }

    #[test]
    fn trace_form_examples() {
        // delta = -1: trace of <1> is <1,1>
        let h = herm(-1, &[1]);
        assert!(h
            .trace_form()
            .is_isometric(&QuadForm::from_ints(&[1, 1]).unwrap()));
        // hyperbolic hermitian plane has hyperbolic trace of dimension 4
        let h = herm(5, &[1, -1]);
        assert!(h.trace_form().is_hyperbolic());
        assert_eq!(h.trace_form().dim(), 4);
        // expansion of the tensor product
        let h = herm(-3, &[2, 5]);
        assert!(h
            .trace_form()
            .is_isometric(&QuadForm::from_ints(&[2, 6, 5, 15]).unwrap()));
    }

    #[test]
    fn disc_examples() {
        assert!(herm(-1, &[1]).disc().is_trivial());
        assert!(herm(-1, &[1, -1]).disc().is_trivial());
        // discriminant ratio 2 is a norm from Q(i)
        assert_eq!(herm(-1, &[1, 2]).disc(), herm(-1, &[1, 1]).disc());
        assert_ne!(herm(-1, &[1, 1]).disc(), herm(-1, &[1, -1]).disc());
    }

    #[test]
    fn disc_invariant_under_norm_rescaling_and_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..100 {
            let delta = [-1i64, -2, 3, 5, -7][rng.gen_range(0..5)];
            let entries: Vec<i64> = (0..4)
                .map(|_| rng.gen_range(1..20) * if rng.gen() { 1 } else { -1 })
                .collect();
            let h = herm(delta, &entries);
            let x = rng.gen_range(1i64..6);
            let y = rng.gen_range(1i64..6);
            let n = x * x - delta * y * y;
            if n == 0 {
                continue;
            }
            let mut diag = h.diag().to_vec();
            let i = rng.gen_range(0..4);
            diag[i] = diag[i].mul(&SquareClass::from_rat(&rat_int(n)).unwrap());
            diag.reverse();
            let h2 = HermForm::new(h.ctx().clone(), diag).unwrap();
            assert_eq!(h.disc(), h2.disc());
        }
    }

    #[test]
    fn disc_algebra_examples() {
        assert!(herm(3, &[1, -1]).disc_algebra().unwrap().is_split());
        let q = herm(-1, &[1, 1]).disc_algebra().unwrap();
        assert_eq!(
            q,
            crate::brauer::quat_class(&rat_int(-1), &rat_int(-1)).unwrap()
        );
        let q = herm(3, &[1, 1]).disc_algebra().unwrap();
        assert_eq!(
            q,
            crate::brauer::quat_class(&rat_int(3), &rat_int(-1)).unwrap()
        );
        assert!(herm(3, &[1, 1, 1]).disc_algebra().is_err());
    }

    #[test]
    fn disc_algebra_matches_trace_clifford() {
        // (delta, d(h)) equals e2 of the trace form whenever defined
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..200 {
            let delta = [-1i64, 2, -2, 3, -3, 5][rng.gen_range(0..6)];
            let rank = 2 * rng.gen_range(1..4);
            let entries: Vec<i64> = (0..rank)
                .map(|_| rng.gen_range(1..25) * if rng.gen() { 1 } else { -1 })
                .collect();
            let h = herm(delta, &entries);
            let tf = h.trace_form();
            assert!(tf.e1().unwrap().is_one());
            assert_eq!(tf.e2().unwrap(), h.disc_algebra().unwrap());
        }
    }

    #[test]
    fn trace_discriminant_pattern() {
        // e1 of the trace form: trivial for even rank, delta for odd rank
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for _ in 0..100 {
            let delta = [-1i64, 2, -2, 3, -3, 5, -7][rng.gen_range(0..7)];
            let rank = rng.gen_range(1..8);
            let entries: Vec<i64> = (0..rank)
                .map(|_| rng.gen_range(1..25) * if rng.gen() { 1 } else { -1 })
                .collect();
            let h = herm(delta, &entries);
            let e1 = h.trace_form().e1().unwrap();
            if rank % 2 == 0 {
                assert!(e1.is_one());
            } else {
                assert_eq!(e1, sc(delta));
            }
        }
    }

    #[test]
    fn isometry_and_similarity() {
        let h = herm(-1, &[1, 2, -3]);
        let mut rev = h.diag().to_vec();
        rev.reverse();
        let h_rev = HermForm::new(h.ctx().clone(), rev).unwrap();
        assert!(h.is_isometric(&h_rev).unwrap());

        let scaled = h.scale(&sc(-1));
        match h.similarity(&scaled).unwrap() {
            SimilarityOutcome::Witness(l) => {
                assert!(h.scale(&l).is_isometric(&scaled).unwrap());
            }
            other => panic!("expected witness, got {other:?}"),
        }
        // definite vs hyperbolic trace forms over Q(i)
        assert_eq!(
            herm(-1, &[1, 1]).similarity(&herm(-1, &[1, -1])).unwrap(),
            SimilarityOutcome::NotSimilar
        );
        assert!(herm(-1, &[1]).is_isometric(&herm(2, &[1])).is_err());
    }

    #[test]
    fn isometry_under_entry_norm_rescaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        for _ in 0..150 {
            let delta = [-1i64, -2, 2, 3, -3, 5][rng.gen_range(0..6)];
            let rank = rng.gen_range(1..6);
            let entries: Vec<i64> = (0..rank)
                .map(|_| rng.gen_range(1..20) * if rng.gen() { 1 } else { -1 })
                .collect();
            let h = herm(delta, &entries);
            let mut diag = h.diag().to_vec();
            for _ in 0..3 {
                let x = rng.gen_range(1i64..7);
                let y = rng.gen_range(0i64..7);
                let n = x * x - delta * y * y;
                if n == 0 {
                    continue;
                }
                let i = rng.gen_range(0..rank);
                diag[i] = diag[i].mul(&SquareClass::from_rat(&rat_int(n)).unwrap());
            }
            let h2 = HermForm::new(h.ctx().clone(), diag).unwrap();
            assert!(h.is_isometric(&h2).unwrap(), "delta={delta} {entries:?}");
        }
    }

    #[test]
    fn hyperbolicity_and_witt_index() {
        assert!(herm(-1, &[1, -1]).is_hyperbolic());
        assert_eq!(herm(-1, &[1, -1]).witt_index(), 1);
        assert!(!herm(-1, &[1, 1]).is_hyperbolic());
        assert_eq!(herm(-1, &[1, 1]).witt_index(), 0);
        assert!(herm(-1, &[1, 2, -1, -2]).is_hyperbolic());
        assert_eq!(herm(-1, &[1, 2, -1, -2]).witt_index(), 2);
    }

    #[test]
    fn orth_sum_transfer_compatibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        for _ in 0..100 {
            let delta = [-1i64, -2, 3, 5][rng.gen_range(0..4)];
            let rank = rng.gen_range(1..5);
            let mk = |rng: &mut ChaCha8Rng| {
                let entries: Vec<i64> = (0..rank)
                    .map(|_| rng.gen_range(1..15) * if rng.gen() { 1 } else { -1 })
                    .collect();
                herm(delta, &entries)
            };
            let h0 = mk(&mut rng);
            let h = mk(&mut rng);
            let lam = sc(rng.gen_range(1..10) * if rng.gen() { 1 } else { -1 });
            let sum = orth_sum_theta(&h0, &h, &lam).unwrap();
            assert_eq!(sum.rank(), h0.rank() + h.rank());
            let lhs = sum.trace_form();
            let rhs = h0
                .trace_form()
                .dsum(&h.trace_form().scale(&lam.mul(&SquareClass::minus_one())))
                .unwrap();
            assert!(lhs.is_isometric(&rhs));
        }
        let h = herm(-1, &[1, 2]);
        assert!(orth_sum_theta(&h, &h, &SquareClass::one())
            .unwrap()
            .is_hyperbolic());
    }
}
