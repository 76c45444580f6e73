use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalFamily};
use crate::norm::{james_norm_sq, james_norm_value_sq, DpTables};
use crate::scalar::{Mode, Scalar};
use crate::vector::JVector;

/// An element `Σ a_n e_n + a_ω e_ω` of the bidual model over ω+1: a finitely
/// supported part plus one ω coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct BidualVector {
    finite: JVector,
    omega: Scalar,
}

impl BidualVector {
    pub fn new(finite: JVector, omega: Scalar) -> Result<BidualVector> {
        omega.require_mode(finite.mode())?;
        Ok(BidualVector { finite, omega })
    }

    pub fn from_vector(finite: JVector) -> BidualVector {
        let omega = Scalar::zero(finite.mode());
        BidualVector { finite, omega }
    }

    pub fn e_omega(mode: Mode) -> BidualVector {
        let omega = match mode {
            Mode::Exact => Scalar::from_int(1),
            Mode::Float => Scalar::float(1.0),
        };
        BidualVector {
            finite: JVector::zero(mode),
            omega,
        }
    }

    pub fn mode(&self) -> Mode {
        self.finite.mode()
    }

    pub fn finite_part(&self) -> &JVector {
        &self.finite
    }

    pub fn omega_coef(&self) -> &Scalar {
        &self.omega
    }

    pub fn is_zero(&self) -> bool {
        self.finite.is_zero() && self.omega.is_zero()
    }

    /// Projection onto `[1, hi]`; every suffix of ω+1 contains ω, so the ω
    /// coordinate is dropped as well.
    pub fn truncate(&self, hi: u32) -> BidualVector {
        BidualVector {
            finite: self.finite.truncate(hi),
            omega: Scalar::zero(self.mode()),
        }
    }

    pub fn zero_omega(&self) -> BidualVector {
        BidualVector {
            finite: self.finite.clone(),
            omega: Scalar::zero(self.mode()),
        }
    }
}

/// Interval sum over ω+1: a tail interval contributes its tail sum plus the ω
/// coefficient, the ω singleton contributes the ω coefficient alone.
pub fn bidual_interval_sum(x: &BidualVector, interval: &Interval) -> Scalar {
    match interval {
        Interval::Finite { lo, hi } => x.finite.range_sum(*lo, *hi),
        Interval::TailOmega { start } => &x.finite.tail_sum(*start) + &x.omega,
        Interval::OmegaSingleton => x.omega.clone(),
    }
}

/// `Σ_i (interval sum)²` over a family of intervals of ω+1.
pub fn bidual_eval_family_sq(x: &BidualVector, family: &IntervalFamily) -> Scalar {
    let mut acc = Scalar::zero(x.mode());
    for interval in family.iter() {
        acc = &acc + &bidual_interval_sum(x, interval).square();
    }
    acc
}

/// Squared bidual norm with a witness family. The witness family is canonical:
/// finite intervals have endpoints in the finite support, and when the ω
/// coefficient is nonzero the last interval covers ω.
#[derive(Clone, Debug)]
pub struct BidualNormCertificate {
    pub norm_sq: Scalar,
    pub witness: IntervalFamily,
}

/// Maximum of `Σ (interval sum)²` over families of disjoint intervals of ω+1.
/// Extends the finite dynamic program with one terminal ω state: the best
/// family either ends with `{ω}` or with a tail interval starting at a
/// support point.
pub fn bidual_norm_sq(x: &BidualVector) -> BidualNormCertificate {
    if x.omega.is_zero() {
        let cert = james_norm_sq(&x.finite);
        return BidualNormCertificate {
            norm_sq: cert.norm_sq,
            witness: cert.witness.family().clone(),
        };
    }

    let omega_sq = x.omega.square();
    let tables = DpTables::build(&x.finite);

    // Candidates: f(k−1) + (tail_k + a_ω)² for tails starting at support
    // points, and f(n) + a_ω² for the ω singleton. Scanning tails from the
    // right keeps ties resolved toward the smaller ω interval.
    let (mut best, mut omega_block): (Scalar, Interval) = match &tables {
        Some(t) => (&t.value() + &omega_sq, Interval::OmegaSingleton),
        None => (omega_sq.clone(), Interval::OmegaSingleton),
    };
    let mut prefix_end = x.finite.max_support();

    if let Some(t) = &tables {
        let support: Vec<u32> = x.finite.support().collect();
        for &start in support.iter().rev() {
            let p = (start - t.lo + 1) as usize;
            let tail = &t.sum(p, t.n) + &x.omega;
            let cand = &t.f[p - 1] + &tail.square();
            if cand.cmp_same_mode(&best) == std::cmp::Ordering::Greater {
                best = cand;
                omega_block = Interval::TailOmega { start };
                prefix_end = if start == t.lo {
                    None
                } else {
                    Some(start - 1)
                };
            }
        }
    }

    // Witness: optimal finite partition left of the ω block, then the block.
    let mut intervals = match prefix_end {
        Some(hi) => james_norm_sq(&x.finite.truncate(hi))
            .witness
            .family()
            .intervals()
            .to_vec(),
        None => vec![],
    };
    intervals.push(omega_block);
    let witness = IntervalFamily::new(intervals).expect("prefix lies before the omega block");
    debug_assert!(bidual_eval_family_sq(x, &witness)
        .norm_eq(&best, crate::scalar::DEFAULT_TOL));

    BidualNormCertificate {
        norm_sq: best,
        witness,
    }
}

/// Independent oracle for the bidual norm: enumerates every family of
/// disjoint intervals inside the bounding box, extended by an optional ω
/// singleton or tail interval. Same cap as the finite oracle.
pub fn bidual_norm_bruteforce_sq(x: &BidualVector) -> Result<Scalar> {
    let cap = crate::norm::bruteforce_cap();
    let (lo, hi) = match x.finite.bounding_box() {
        Some(b) => b,
        None => {
            return Ok(if x.omega.is_zero() {
                Scalar::zero(x.mode())
            } else {
                x.omega.square()
            })
        }
    };
    let size = (hi - lo + 1) as usize;
    if size > cap {
        return Err(Error::BruteForceCap { size, cap });
    }

    let tails: Vec<Scalar> = (lo..=hi)
        .map(|start| &x.finite.tail_sum(start) + &x.omega)
        .collect();

    struct Ctx<'a> {
        x: &'a BidualVector,
        lo: u32,
        hi: u32,
        omega_sq: Scalar,
        tails: &'a [Scalar],
        best: Scalar,
    }

    impl Ctx<'_> {
        fn consider(&mut self, value: Scalar) {
            if value.cmp_same_mode(&self.best) == std::cmp::Ordering::Greater {
                self.best = value;
            }
        }

        /// Closes the finite family accumulated in `acc`, whose intervals all
        /// end before `pos`: plain, with the ω singleton, or with any tail
        /// starting at or after `pos`.
        fn close(&mut self, pos: u32, acc: &Scalar) {
            self.consider(acc.clone());
            self.consider(acc + &self.omega_sq);
            for start in pos..=self.hi {
                let tail = &self.tails[(start - self.lo) as usize];
                self.consider(acc + &tail.square());
            }
        }

        fn rec(&mut self, pos: u32, acc: &Scalar) {
            self.close(pos, acc);
            let mut a = pos;
            while a <= self.hi {
                let mut sum = Scalar::zero(self.x.mode());
                let mut b = a;
                while b <= self.hi {
                    sum = &sum + &self.x.finite.coeff(b);
                    let value = acc + &sum.square();
                    if b < self.hi {
                        self.rec(b + 1, &value);
                    } else {
                        self.close(b + 1, &value);
                    }
                    b += 1;
                }
                a += 1;
            }
        }
    }

    let mut ctx = Ctx {
        x,
        lo,
        hi,
        omega_sq: x.omega.square(),
        tails: &tails,
        best: Scalar::zero(x.mode()),
    };
    let zero = Scalar::zero(x.mode());
    ctx.rec(lo, &zero);
    Ok(ctx.best)
}

/// Extreme-point certificate for the bidual unit ball: the verdict is true
/// exactly when the squared bidual norm and `Σ a_n² + a_ω²` both equal one.
pub fn is_extreme_bjss(x: &BidualVector) -> Result<ExtremeCertificateBidual> {
    if x.mode() != Mode::Exact {
        return Err(Error::FloatModeUnsupported);
    }
    let norm_sq = bidual_norm_sq(x).norm_sq;
    let l2_sq = &crate::norm::l2_norm_sq(&x.finite) + &x.omega.square();
    let one = Scalar::from_int(1);
    Ok(ExtremeCertificateBidual {
        verdict: norm_sq == one && l2_sq == one,
        norm_sq,
        l2_sq,
    })
}

/// Verdict with both squared norms for the bidual extreme test.
#[derive(Clone, Debug)]
pub struct ExtremeCertificateBidual {
    pub verdict: bool,
    pub norm_sq: Scalar,
    pub l2_sq: Scalar,
}

/// Result of a bounded bidual enumeration.
#[derive(Clone, Debug)]
pub struct BidualEnumeration {
    pub families: Vec<IntervalFamily>,
    pub truncated: bool,
}

/// All canonical norming partitions of a bidual vector, up to `limit`. With a
/// zero ω coefficient this coincides with the finite enumeration; otherwise
/// every partition ends in `{ω}` or a tail interval starting at a support
/// point.
pub fn bidual_norming_partitions(
    x: &BidualVector,
    limit: usize,
    tol: f64,
) -> Result<BidualEnumeration> {
    if x.omega.is_zero() {
        let e = crate::partitions::enumerate_norming_partitions(&x.finite, limit, tol)?;
        return Ok(BidualEnumeration {
            families: e.partitions.into_iter().map(|p| p.family().clone()).collect(),
            truncated: e.truncated,
        });
    }
    if x.finite.is_zero() {
        let fam = IntervalFamily::new(vec![Interval::OmegaSingleton]).expect("single interval");
        return Ok(BidualEnumeration {
            families: vec![fam],
            truncated: false,
        });
    }

    let norm_sq = bidual_norm_sq(x).norm_sq;
    let support: Vec<u32> = x.finite.support().collect();
    let k = support.len();

    // Split point a: support positions s_1..s_a are partitioned into tight
    // finite blocks, the rest joins ω.
    let mut families = Vec::new();
    let mut truncated = false;
    for a in 0..=k {
        let omega_block = if a == k {
            Interval::OmegaSingleton
        } else {
            Interval::TailOmega { start: support[a] }
        };
        let prefix = if a == 0 {
            JVector::zero(x.mode())
        } else {
            x.finite.truncate(support[a - 1])
        };
        let prefix_opt = james_norm_value_sq(&prefix);
        let total = &prefix_opt + &bidual_interval_sum(x, &omega_block).square();
        if !total.norm_eq(&norm_sq, tol) {
            continue;
        }
        if a == 0 {
            if families.len() == limit {
                truncated = true;
                break;
            }
            families.push(IntervalFamily::new(vec![omega_block]).expect("single interval"));
            continue;
        }
        let e = crate::partitions::enumerate_norming_partitions(&prefix, limit, tol)?;
        truncated |= e.truncated;
        for p in e.partitions {
            if families.len() == limit {
                truncated = true;
                break;
            }
            let mut intervals = p.family().intervals().to_vec();
            intervals.push(omega_block.clone());
            families.push(IntervalFamily::new(intervals).expect("omega block comes last"));
        }
        if truncated {
            break;
        }
    }
    Ok(BidualEnumeration {
        families,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DEFAULT_TOL;

    fn bexact(finite: &[i64], omega: i64) -> BidualVector {
        BidualVector::new(JVector::from_ints(finite), Scalar::from_int(omega)).unwrap()
    }

    #[test]
    fn e_omega_norm_and_witness() {
        let cert = bidual_norm_sq(&BidualVector::e_omega(Mode::Exact));
        assert_eq!(cert.norm_sq, Scalar::from_int(1));
        assert_eq!(cert.witness.intervals(), &[Interval::OmegaSingleton]);
    }

    #[test]
    fn zero_omega_reduces_to_finite_norm() {
        let x = bexact(&[2, -1, 2], 0);
        let cert = bidual_norm_sq(&x);
        assert_eq!(cert.norm_sq, Scalar::from_int(9));
        assert_eq!(
            cert.norm_sq,
            crate::norm::james_norm_sq(x.finite_part()).norm_sq
        );
    }

    #[test]
    fn tail_capture_example() {
        // e1 + e_omega: the tail from 1 collects both coordinates.
        let x = bexact(&[1], 1);
        let cert = bidual_norm_sq(&x);
        assert_eq!(cert.norm_sq, Scalar::from_int(4));
        assert_eq!(cert.witness.intervals(), &[Interval::tail(1).unwrap()]);
        assert_eq!(bidual_norm_bruteforce_sq(&x).unwrap(), Scalar::from_int(4));
    }

    #[test]
    fn oracle_agrees_on_small_cases() {
        let cases = [
            bexact(&[1, -1], 1),
            bexact(&[2, -1, 2], -1),
            bexact(&[1, 0, 3], 2),
            bexact(&[], 5),
            bexact(&[1, -2, 1, -2], 3),
        ];
        for x in cases {
            assert_eq!(
                bidual_norm_sq(&x).norm_sq,
                bidual_norm_bruteforce_sq(&x).unwrap(),
                "mismatch for {x:?}"
            );
            let eval = bidual_eval_family_sq(&x, &bidual_norm_sq(&x).witness);
            assert_eq!(eval, bidual_norm_sq(&x).norm_sq);
        }
    }

    #[test]
    fn extreme_bidual_examples() {
        assert!(is_extreme_bjss(&BidualVector::e_omega(Mode::Exact))
            .unwrap()
            .verdict);

        let x = BidualVector::new(
            JVector::from_coords(
                Mode::Exact,
                [(1, Scalar::ratio(2, 3)), (2, Scalar::ratio(-1, 3))],
            )
            .unwrap(),
            Scalar::ratio(2, 3),
        )
        .unwrap();
        assert!(is_extreme_bjss(&x).unwrap().verdict);

        // (e1 + e_omega)/2 has norm one but ℓ₂² = 1/2.
        let x = BidualVector::new(
            JVector::from_coords(Mode::Exact, [(1, Scalar::ratio(1, 2))]).unwrap(),
            Scalar::ratio(1, 2),
        )
        .unwrap();
        let cert = is_extreme_bjss(&x).unwrap();
        assert!(!cert.verdict);
        assert_eq!(cert.norm_sq, Scalar::from_int(1));
        assert_eq!(cert.l2_sq, Scalar::ratio(1, 2));
    }

    #[test]
    fn bidual_partition_enumeration_examples() {
        let e = bidual_norming_partitions(&BidualVector::e_omega(Mode::Exact), 10, DEFAULT_TOL)
            .unwrap();
        assert_eq!(e.families.len(), 1);
        assert_eq!(e.families[0].intervals(), &[Interval::OmegaSingleton]);

        let x = bexact(&[2, -1, 2], 0);
        let e = bidual_norming_partitions(&x, 10, DEFAULT_TOL).unwrap();
        assert_eq!(e.families.len(), 2);

        let x = bexact(&[1], 1);
        let e = bidual_norming_partitions(&x, 10, DEFAULT_TOL).unwrap();
        assert_eq!(e.families.len(), 1);
        assert_eq!(e.families[0].intervals(), &[Interval::tail(1).unwrap()]);
    }
}
